#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "levyest/estimator.hpp"
#include "levyest/noise.hpp"
#include "levyest/path.hpp"

namespace levyest {

/// Constants appearing in the non-asymptotic risk bounds.
struct OracleConstants {
    double u_q = 0.0;        // 24 kappa^2 + 6 rho2^4 Pi(x^4)
    double u_1q = 0.0;       // u_q + 6 kappa_check phi_star^4
    double psi = 0.0;        // 8 kappa_check (1 + iota) + 4 u_1q iota / kappa_check
    double upsilon_s = 0.0;  // 4 (|S'| + 1)^2 (1 + sqrt(kc) + 2 kc + sqrt(u_q))
    double g1 = 0.0;         // 48 (1 + sqrt(kc) + 2 kc + sqrt(u_q))
    double g2 = 0.0;         // 12 sqrt(6 kappa_check)
    double kappa = 0.0;
    double kappa_check = 0.0;
};

/// Closed-form evaluation of the bound constants. Throws DegenerateError
/// if the truncated noise variance vanishes.
OracleConstants oracle_constants(const NoiseModel& noise, double epsilon, double a_bar,
                                 double signal_deriv_norm, long iota, double phi_star);

/// Minimax scaling constant l_*(r) for k-smooth ellipsoids of radius r:
/// ((2k+1) r)^{1/(2k+1)} (k / ((k+1) pi))^{2k/(2k+1)}.
double pinsker_constant(int k, double r);

/// upsilon^{2k/(2k+1)} * sup_risk / l_*(r) with upsilon = 1/(eps^2 sigma_star);
/// values near 1 indicate an efficient procedure.
double efficiency_ratio(double sup_risk, double epsilon, double sigma_star, int k, double r);

/// Mean squared error over matching grid samples and its ratio to the
/// signal's mean square. Throws ZeroSignal on a vanishing signal when the
/// ratio is requested, GridMismatch on unequal lengths.
std::pair<double, double> empirical_risk(std::span<const double> s_hat_samples,
                                         std::span<const double> s_true_samples);

/// True coefficients of the signal in an arbitrary estimation basis
/// (matched by harmonic), indices 1..n.
std::vector<double> true_coefficients(const SignalSpec& signal, const Basis& basis, long n);

/// How one replication of the estimation pipeline is wired together.
struct PipelineConfig {
    std::shared_ptr<const Basis> basis;  // estimation basis; default trig

    enum class Truncation { LambdaStar, SqrtLambdaStar, Fixed };
    Truncation truncation = Truncation::LambdaStar;  // a_bar = eps/|Lambda|_* etc.
    double a_bar_fixed = 0.0;
    TruncationConfig::Mode trunc_mode = TruncationConfig::Mode::Empirical;

    enum class Variance { Estimate, Known };
    Variance variance = Variance::Estimate;

    enum class DeltaRule { Siml, Log, Fixed };
    DeltaRule delta_rule = DeltaRule::Siml;
    double delta_fixed = 0.1;

    int k_star_0 = 100;
    double varpi = 0.0;  // 0 -> |ln eps|^-2
    int threads = 0;     // 0 -> hardware concurrency

    bool per_lambda = true;  // collect per-candidate oracle risks
};

/// Per-epsilon state shared by all replications: the weight grid, the
/// truncation threshold, delta and the known variance (if used).
struct PipelineContext {
    PipelineConfig cfg;
    std::shared_ptr<const Basis> basis;
    WeightFamily family;
    long n_eff = 0;  // theta_hat length actually estimated
    double epsilon = 0.0;
    long p = 0;
    double a_bar = 0.0;
    double delta = 0.0;
    double kappa_known = 0.0;  // truncated-model variance of `noise`
};

PipelineContext make_pipeline_context(const NoiseModel& noise, double epsilon, long p,
                                      const PipelineConfig& cfg);

/// simulate -> truncate -> estimate -> select for one seeded replication.
SelectionResult run_replication(const SignalSpec& signal, const NoiseModel& noise,
                                std::uint64_t seed, const PipelineContext& ctx);

struct RiskReport {
    double epsilon = 0.0;
    double r_bar = 0.0;      // mean coefficient-space squared error
    double r_bar_rel = 0.0;  // r_bar / |S|^2
    double r_bar_se = 0.0;
    double signal_norm_sq = 0.0;
    std::vector<double> per_lambda;     // mean oracle risk per candidate
    std::vector<double> per_lambda_se;
    std::vector<double> j_mean;         // mean selection cost per candidate
    double min_lambda_risk = 0.0;
    long min_lambda_index = -1;
    double oracle_ratio = 0.0;  // r_bar / min_lambda_risk
    double slack = 0.0;         // r_bar - (1+3d)/(1-3d) * min_lambda_risk
    double delta = 0.0;
    double a_bar = 0.0;
    double kappa_known = 0.0;
    long n_reps = 0;
    std::uint64_t seed = 0;
};

/// Runs the pipeline N times on independent seed substreams and aggregates
/// (deterministically, independent of execution order). Requires N >= 2.
RiskReport monte_carlo_risk(const SignalSpec& signal, const NoiseModel& noise,
                            double epsilon, long p, long n_reps,
                            const PipelineConfig& cfg, std::uint64_t seed);

/// Worst-case risk over a finite noise family: returns (argmax index,
/// per-model reports). Throws FamilyBoundError on any member with
/// kappa_Q > sigma_star.
std::pair<std::size_t, std::vector<RiskReport>> robust_risk(
    const SignalSpec& signal, const std::vector<NoiseModel>& noise_set, double epsilon,
    long p, long n_reps, const PipelineConfig& cfg, std::uint64_t seed);

/// CSV export of the per-candidate oracle diagnostics:
/// rows (beta, r, risk_mean, risk_se, j_mean).
void write_oracle_csv(const RiskReport& report, const WeightFamily& family,
                      const std::string& file);

}  // namespace levyest
