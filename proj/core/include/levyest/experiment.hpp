#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "levyest/noise.hpp"
#include "levyest/path.hpp"
#include "levyest/risk.hpp"

namespace levyest {

/// One noise level, kept with its exact label ("1/sqrt(20)" or a decimal)
/// so table rows never suffer decimal drift.
struct EpsilonSpec {
    std::string label;
    double value = 0.0;
};

EpsilonSpec parse_epsilon(const std::string& text);

/// Flat key=value experiment description. Unknown keys are errors.
struct ExperimentConfig {
    std::vector<EpsilonSpec> epsilons;  // default the four table levels
    long n_reps = 200;
    long grid_p = 10000;
    std::uint64_t seed = 1;
    std::string output_dir = ".";

    std::string signal_kind = "multipath10";  // multipath10 | zero | j:c;j:c...
    std::string signal_basis = "sin_family";  // for custom term lists

    double rho1 = 1.0;
    double rho2 = 0.0;
    std::string jump_dist = "none";  // none | two_point | gaussian | laplace
    double jump_intensity = 1.0;
    double sigma_star = 1.0;

    std::string basis = "trig";             // estimation basis: trig | signal
    std::string truncation = "lambda_star"; // lambda_star | sqrt_lambda_star | fixed:<v>
    std::string trunc_mode = "empirical";   // empirical | oracle
    std::string variance = "estimate";      // estimate | known
    std::string delta = "siml";             // siml | log | fixed:<v>
    int k_star_0 = 100;
    double varpi = 0.0;   // 0 -> default rule
    long iota = 0;        // detection candidate bound; 0 -> default rule
    double c_star = 0.0;  // shrinkage threshold; 0 -> default rule
    int threads = 0;
    bool per_lambda = true;

    /// Parses a key=value file. Throws ConfigError on unknown keys or
    /// malformed values, IOError if unreadable.
    static ExperimentConfig load(const std::string& file);
    static ExperimentConfig parse_lines(const std::vector<std::string>& lines);

    /// Canonical serialization; load(serialize()) round-trips exactly.
    std::vector<std::string> serialize() const;
    std::uint64_t hash() const;

    SignalSpec make_signal() const;
    NoiseModel make_noise() const;
    PipelineConfig make_pipeline(const SignalSpec& signal) const;
    void validate() const;
};

/// File-name-safe version of an epsilon label ("1/sqrt(20)" -> "1_sqrt_20").
std::string sanitize_label(const std::string& label);

/// Writes risk_table.csv (epsilon, r_bar, r_bar_rel) plus a provenance
/// sidecar; returns the paths written.
std::vector<std::string> run_risk_table(const ExperimentConfig& config);

/// Writes detect_table.csv with modal detector outputs per epsilon and a
/// per-replication detect_reps.csv; returns the paths written.
std::vector<std::string> run_detection_table(const ExperimentConfig& config);

/// Writes figure_eps_<label>.csv with columns (t, y_observed, S_true, S_hat)
/// for one seeded replication at the given noise level.
std::string emit_figure_data(const ExperimentConfig& config, const EpsilonSpec& eps);

/// Writes oracle_eps_<label>.csv per level and oracle_summary.csv with the
/// risk-bound diagnostics; returns the paths written.
std::vector<std::string> run_oracle_check(const ExperimentConfig& config);

}  // namespace levyest
