#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "levyest/basis.hpp"
#include "levyest/path.hpp"

namespace levyest {

/// Large-jump removal applied to the observations before estimating.
struct TruncationConfig {
    enum class Mode {
        Empirical,  // drop grid increments with |increment| > a_bar
        Oracle,     // drop exactly the simulator-recorded jumps > a_bar
    };
    double a_bar = 1.0;
    Mode mode = Mode::Empirical;
};

/// y_check: the path with jumps larger than a_bar removed.
ObservationPath truncate_path(const ObservationPath& path, const TruncationConfig& cfg);

/// Estimator length n = [1/eps^2], saturated to avoid overflow for tiny eps.
std::uint64_t coefficient_count(double epsilon);

/// Largest usable index: min([1/eps^2], p - 2), further reduced so that the
/// basis frequency stays below the grid's Nyquist limit (2 freq <= p - 2).
long usable_coefficients(const Basis& basis, double epsilon, long p);

/// Left-endpoint Stieltjes sum sum_i phi_j(t_{i-1}) (y_{t_i} - y_{t_{i-1}}).
/// Reference implementation; the batch extractor below must agree with it.
double stieltjes_sum(const ObservationPath& path, const Basis& basis, long j);

/// Batch Stieltjes sums for j = 1..n via a rotation-accumulator spectral
/// pass (one sweep per distinct frequency; no per-sample trig calls).
std::vector<double> stieltjes_sums(const ObservationPath& path, const Basis& basis, long n);

/// Fourier coefficient estimates from the truncated path, except that the
/// coefficient of a constant first basis function comes from the raw path
/// (large-jump removal would bias the mean direction). Returns a vector of
/// length n. Throws GridMismatch if the two paths do not share (p, epsilon).
std::vector<double> fourier_estimates(const ObservationPath& raw,
                                      const ObservationPath& truncated,
                                      const Basis& basis, long n);

/// Variance estimate kappa_hat = sum_{j=[sqrt(n)]+1}^{n} tau_hat_j^2 with
/// tau_hat the trigonometric coefficients of the truncated path and
/// n = min([1/eps^2], p - 2). Requires eps <= 1/sqrt(3).
double estimate_variance(const ObservationPath& truncated);

/// One candidate weight vector lambda_alpha, alpha = (beta, r):
///   lambda(j) = 1                      for 1 <= j < j_star,
///   lambda(j) = 1 - (j/omega)^beta     for j_star <= j <= omega,
///   lambda(j) = 0                      otherwise,
/// stored lazily (omega can reach millions for tiny eps).
struct WeightVector {
    int beta = 1;
    double r = 0.0;
    double omega = 0.0;
    long j_star = 0;
    long support = 0;    // number of nonzero coordinates, clipped to n
    double norm_sq = 0;  // |lambda|^2 over the clipped support

    double lambda(long j) const {
        if (j < 1 || j > support) return 0.0;
        if (j < j_star) return 1.0;
        return 1.0 - std::pow(static_cast<double>(j) / omega, static_cast<double>(beta));
    }
    /// Last index of the leading all-ones block: min(j_star - 1, support).
    long ones_end() const {
        const long e = j_star - 1 < support ? j_star - 1 : support;
        return e > 0 ? e : 0;
    }
    /// Dense copy of the first `len` coordinates.
    std::vector<double> dense(long len) const;
};

/// The finite candidate family Lambda built on the grid
/// A = {1..k_star} x {varpi, 2 varpi, ..., m varpi}, m = [1/varpi].
struct WeightFamily {
    std::vector<WeightVector> weights;  // beta-major, r-minor grid order
    std::uint64_t n = 0;                // [1/eps^2] (saturated)
    long n_cap = 0;                     // support clip actually applied
    long iota = 0;                      // card(Lambda) = k_star * m
    long lambda_star = 0;               // max support over the family
    int k_star = 1;
    int m = 1;
    double varpi = 0.0;
    double upsilon = 0.0;               // 1 / (eps^2 sigma_star)
    double epsilon = 0.0;
};

/// Builds the weight grid. `n_cap` additionally clips every weight vector
/// (callers pass the usable coefficient range, e.g. min(n, p)); pass 0 for
/// the default clip min(n, 10^6). Throws ConfigError if every candidate
/// is the zero vector.
WeightFamily build_weight_grid(double epsilon, double sigma_star, int k_star,
                               double varpi, long n_cap = 0);

/// Default grid parameters used by the experiments:
/// k_star = k_star_0 + sqrt(|ln eps|), varpi = |ln eps|^-2 (so m = [|ln eps|^2]).
int default_k_star(double epsilon, int k_star_0 = 100);
double default_varpi(double epsilon);
/// delta = 1/(3+|ln eps|)^2 (simulation rule) or 1/(6+|ln eps|) (alternative).
double delta_siml(double epsilon);
double delta_log(double epsilon);

/// Penalty term eps^2 * kappa * |lambda|^2.
double penalty(const WeightVector& lambda, double kappa, double epsilon);
double penalty(std::span<const double> lambda, double kappa, double epsilon);

/// Cost J(lambda) = sum lambda^2 theta_hat^2 - 2 sum lambda theta_tilde
///                + delta * eps^2 * kappa_hat * |lambda|^2,
/// theta_tilde_j = theta_hat_j^2 - eps^2 kappa_hat.
/// Throws DeltaRangeError unless 0 < delta < 1/6.
double cost_function(const WeightVector& lambda, std::span<const double> theta_hat,
                     double kappa_hat, double epsilon, double delta);
double cost_function(std::span<const double> lambda, std::span<const double> theta_hat,
                     double kappa_hat, double epsilon, double delta);

struct SelectionResult {
    std::vector<double> theta_hat;
    double kappa_hat = 0.0;
    std::vector<double> costs;       // J per candidate, grid order
    long chosen = -1;                // index into the family
    int alpha_beta = 0;
    double alpha_r = 0.0;
    std::vector<double> lambda_hat;  // dense, same length as theta_hat
    std::vector<double> s_hat;       // reconstruction on the grid (may be empty)
    double delta = 0.0;
    double a_bar = 0.0;
    double cost_min = 0.0;
};

/// Evaluates J over the whole family and picks the minimizer (first in
/// grid order on ties).
SelectionResult select_model(const WeightFamily& family,
                             std::span<const double> theta_hat, double kappa_hat,
                             double epsilon, double delta);

/// Fills result.s_hat with S_hat(t_i) = sum_j lambda(j) theta_hat_j phi_j(t_i)
/// on the uniform grid t_i = i/p.
void reconstruct(SelectionResult& result, const Basis& basis, long p);

/// CSV export: rows (j, theta_hat_j, lambda_hat_j) after '#'-prefixed
/// summary lines (alpha, kappa_hat, J_min, delta, a_bar).
void write_selection_csv(const SelectionResult& result, const std::string& file);

}  // namespace levyest
