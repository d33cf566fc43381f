#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace levyest {

/// Trigonometric basis function Tr_j on [0,1]:
///   Tr_1 = 1,
///   Tr_j = sqrt(2) cos(2 pi [j/2] t)  for even j,
///   Tr_j = sqrt(2) sin(2 pi [j/2] t)  for odd j >= 3.
double trig_eval(long j, double t);

/// One pure-harmonic component of a basis function.
struct Harmonic {
    enum Kind { Constant, Cos, Sin };
    Kind kind = Constant;
    long freq = 0;  // cycles per unit interval
};

/// Uniformly bounded orthonormal basis on [0,1].
///
/// Each basis function must be a single harmonic so that Fourier
/// coefficient extraction can share one spectral pass over a path.
class Basis {
public:
    virtual ~Basis() = default;
    virtual double eval(long j, double t) const = 0;
    virtual Harmonic harmonic(long j) const = 0;
    virtual double phi_star() const = 0;
    virtual std::string name() const = 0;
};

/// The trigonometric basis (the library default).
class TrigBasis final : public Basis {
public:
    double eval(long j, double t) const override { return trig_eval(j, t); }
    Harmonic harmonic(long j) const override;
    double phi_star() const override { return std::sqrt(2.0); }
    std::string name() const override { return "trig"; }
};

/// The multipath signal family phi_j(t) = sqrt(2) sin(2 pi l_j t),
/// l_j = [sqrt(j)] * j. Orthonormal since the l_j are strictly increasing.
class SinFamilyBasis final : public Basis {
public:
    static long frequency(long j) {
        return static_cast<long>(std::floor(std::sqrt(static_cast<double>(j)))) * j;
    }
    double eval(long j, double t) const override {
        return std::sqrt(2.0) * std::sin(2.0 * M_PI * static_cast<double>(frequency(j)) * t);
    }
    Harmonic harmonic(long j) const override { return {Harmonic::Sin, frequency(j)}; }
    double phi_star() const override { return std::sqrt(2.0); }
    std::string name() const override { return "signal"; }
};

std::shared_ptr<const Basis> trig_basis();
std::shared_ptr<const Basis> sin_family_basis();

/// Trapezoid approximation of the projection (f, phi_j) for f sampled on
/// the uniform grid t_i = i/p, i = 0..p (so f has p+1 samples).
/// Throws GridMismatch if f has the wrong length.
double project(std::span<const double> f, const Basis& basis, long j, long p);

/// Sobolev ellipsoid coefficient a_j = sum_{i=0}^{k} (2 pi [j/2])^{2i},
/// with the convention 0^0 = 1.
double sobolev_coeff(long j, int k);

/// Ellipsoid radius sum_j a_j theta_j^2 of a coefficient vector
/// (theta[0] is the coefficient of the first basis function).
double sobolev_radius(std::span<const double> theta, int k);

}  // namespace levyest
