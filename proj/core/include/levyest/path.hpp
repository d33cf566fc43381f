#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "levyest/basis.hpp"
#include "levyest/noise.hpp"

namespace levyest {

/// Signal given by a finite expansion in an orthonormal basis.
struct SignalTerm {
    long index;          // basis index, >= 1
    double coefficient;
};

class SignalSpec {
public:
    SignalSpec() : basis_(trig_basis()) {}
    SignalSpec(std::shared_ptr<const Basis> basis, std::vector<SignalTerm> terms);

    double value(double t) const;
    double l2_norm_sq() const;  // sum of squared coefficients
    /// Exact coefficient of basis function j (0 if absent).
    double coefficient(long j) const;
    long max_index() const;

    const Basis& basis() const { return *basis_; }
    std::shared_ptr<const Basis> basis_ptr() const { return basis_; }
    const std::vector<SignalTerm>& terms() const { return terms_; }

    static SignalSpec zero() { return SignalSpec(); }

    /// The ten-component multipath test signal
    /// S(t) = sum_{j=1}^{10} j/(j+1) * sqrt(2) sin(2 pi l_j t), l_j = [sqrt(j)] j.
    static SignalSpec multipath_ten();

private:
    std::shared_ptr<const Basis> basis_;
    std::vector<SignalTerm> terms_;
};

/// One recorded jump of the noise term eps * xi.
struct JumpEvent {
    double time;  // in (0, 1]
    double size;  // jump of eps * xi (already scaled by eps * rho2)
};

/// Discretized sample path of dy = S dt + eps dxi on t_i = i/p, i = 0..p.
struct ObservationPath {
    long p = 0;
    double epsilon = 0.0;
    std::vector<double> values;     // cumulative y_{t_i}, values[0] = 0
    std::vector<JumpEvent> jumps;   // exact jump times/sizes from the simulator
    std::uint64_t seed = 0;
    NoiseModel noise;

    double time(long i) const { return static_cast<double>(i) / static_cast<double>(p); }
    /// Grid increments y_{t_i} - y_{t_{i-1}}, i = 1..p.
    std::vector<double> increments() const;
};

/// Simulates one observation path. Brownian increments have variance 1/p,
/// jumps arrive in continuous time (exponential spacings) and land in their
/// enclosing grid cell; the compensator drift of the jump component is
/// subtracted exactly. Deterministic in (signal, noise, epsilon, p, seed).
ObservationPath simulate_path(const SignalSpec& signal, const NoiseModel& noise,
                              double epsilon, long p, std::uint64_t seed);

/// CSV export: columns (t, y); a sidecar `<file>.meta` records epsilon, p,
/// seed and the noise parameters as key=value lines.
void write_path_csv(const ObservationPath& path, const std::string& file);
ObservationPath read_path_csv(const std::string& file);

}  // namespace levyest
