#include "levyest/risk.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include "levyest/csv.hpp"
#include "levyest/errors.hpp"
#include "levyest/rng.hpp"

namespace levyest {

OracleConstants oracle_constants(const NoiseModel& noise, double epsilon, double a_bar,
                                 double signal_deriv_norm, long iota, double phi_star) {
    const auto var = noise_variances(noise, epsilon, a_bar);
    if (var.kappa_check <= 0.0)
        throw DegenerateError("oracle_constants: truncated variance is zero");

    OracleConstants c;
    c.kappa = var.kappa;
    c.kappa_check = var.kappa_check;

    const double pi_x4 = noise.has_jumps() ? noise.jump_law->pi_x4() : 0.0;
    const double rho2_4 = std::pow(noise.rho2, 4);
    c.u_q = 24.0 * var.kappa * var.kappa + 6.0 * rho2_4 * pi_x4;
    c.u_1q = c.u_q + 6.0 * var.kappa_check * std::pow(phi_star, 4);
    c.psi = 8.0 * var.kappa_check * (1.0 + static_cast<double>(iota)) +
            4.0 * c.u_1q * static_cast<double>(iota) / var.kappa_check;

    const double bracket =
        1.0 + std::sqrt(var.kappa_check) + 2.0 * var.kappa_check + std::sqrt(c.u_q);
    const double sdot = signal_deriv_norm + 1.0;
    c.upsilon_s = 4.0 * sdot * sdot * bracket;
    c.g1 = 48.0 * bracket;
    c.g2 = 12.0 * std::sqrt(6.0 * var.kappa_check);
    return c;
}

double pinsker_constant(int k, double r) {
    if (k < 1 || r <= 0.0) throw DomainError("pinsker_constant: need k >= 1, r > 0");
    const double kk = static_cast<double>(k);
    return std::pow((2.0 * kk + 1.0) * r, 1.0 / (2.0 * kk + 1.0)) *
           std::pow(kk / ((kk + 1.0) * M_PI), 2.0 * kk / (2.0 * kk + 1.0));
}

double efficiency_ratio(double sup_risk, double epsilon, double sigma_star, int k, double r) {
    if (epsilon <= 0.0 || sigma_star <= 0.0)
        throw DomainError("efficiency_ratio: need positive epsilon and sigma_star");
    const double upsilon = 1.0 / (epsilon * epsilon * sigma_star);
    const double kk = static_cast<double>(k);
    return std::pow(upsilon, 2.0 * kk / (2.0 * kk + 1.0)) * sup_risk / pinsker_constant(k, r);
}

std::pair<double, double> empirical_risk(std::span<const double> s_hat_samples,
                                         std::span<const double> s_true_samples) {
    if (s_hat_samples.size() != s_true_samples.size())
        throw GridMismatch("empirical_risk: sample grids differ in length");
    if (s_hat_samples.empty()) throw GridMismatch("empirical_risk: empty grids");
    double err = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < s_hat_samples.size(); ++i) {
        const double d = s_hat_samples[i] - s_true_samples[i];
        err += d * d;
        norm += s_true_samples[i] * s_true_samples[i];
    }
    err /= static_cast<double>(s_hat_samples.size());
    norm /= static_cast<double>(s_hat_samples.size());
    if (norm == 0.0) throw ZeroSignal("empirical_risk: signal has zero norm");
    return {err, err / norm};
}

std::vector<double> true_coefficients(const SignalSpec& signal, const Basis& basis, long n) {
    std::map<std::pair<int, long>, double> by_harmonic;
    for (const auto& term : signal.terms()) {
        const auto h = signal.basis().harmonic(term.index);
        by_harmonic[{static_cast<int>(h.kind), h.freq}] += term.coefficient;
    }
    std::vector<double> out(n, 0.0);
    for (long j = 1; j <= n; ++j) {
        const auto h = basis.harmonic(j);
        const auto it = by_harmonic.find({static_cast<int>(h.kind), h.freq});
        if (it != by_harmonic.end()) out[j - 1] = it->second;
    }
    return out;
}

PipelineContext make_pipeline_context(const NoiseModel& noise, double epsilon, long p,
                                      const PipelineConfig& cfg) {
    PipelineContext ctx;
    ctx.cfg = cfg;
    ctx.basis = cfg.basis ? cfg.basis : trig_basis();
    ctx.epsilon = epsilon;
    ctx.p = p;
    ctx.n_eff = usable_coefficients(*ctx.basis, epsilon, p);

    const double varpi = cfg.varpi > 0.0 ? cfg.varpi : default_varpi(epsilon);
    const int k_star = default_k_star(epsilon, cfg.k_star_0);
    ctx.family = build_weight_grid(epsilon, noise.sigma_star, k_star, varpi, ctx.n_eff);

    switch (cfg.truncation) {
        case PipelineConfig::Truncation::LambdaStar:
            ctx.a_bar = epsilon / static_cast<double>(ctx.family.lambda_star);
            break;
        case PipelineConfig::Truncation::SqrtLambdaStar:
            ctx.a_bar = epsilon / std::sqrt(static_cast<double>(ctx.family.lambda_star));
            break;
        case PipelineConfig::Truncation::Fixed:
            ctx.a_bar = cfg.a_bar_fixed;
            break;
    }
    if (ctx.a_bar <= 0.0) throw ConfigError("pipeline: nonpositive truncation threshold");

    switch (cfg.delta_rule) {
        case PipelineConfig::DeltaRule::Siml: ctx.delta = delta_siml(epsilon); break;
        case PipelineConfig::DeltaRule::Log: ctx.delta = delta_log(epsilon); break;
        case PipelineConfig::DeltaRule::Fixed: ctx.delta = cfg.delta_fixed; break;
    }

    ctx.kappa_known = noise_variances(noise, epsilon, ctx.a_bar).kappa_check;
    return ctx;
}

SelectionResult run_replication(const SignalSpec& signal, const NoiseModel& noise,
                                std::uint64_t seed, const PipelineContext& ctx) {
    const auto path = simulate_path(signal, noise, ctx.epsilon, ctx.p, seed);
    // Truncation removes large jumps; without a jump component there is
    // nothing to remove (and the threshold would clip drift increments).
    const auto truncated =
        noise.has_jumps() ? truncate_path(path, TruncationConfig{ctx.a_bar, ctx.cfg.trunc_mode})
                          : path;
    const auto theta_hat = fourier_estimates(path, truncated, *ctx.basis, ctx.n_eff);
    const double kappa = ctx.cfg.variance == PipelineConfig::Variance::Known
                             ? ctx.kappa_known
                             : estimate_variance(truncated);
    auto sel = select_model(ctx.family, theta_hat, kappa, ctx.epsilon, ctx.delta);
    sel.a_bar = ctx.a_bar;
    return sel;
}

namespace {

/// Coefficient-space squared error of the selected estimator; `tail` is the
/// signal energy beyond the estimated range.
double selection_risk(const SelectionResult& sel, std::span<const double> theta_true,
                      double tail) {
    double err = tail;
    for (std::size_t j = 0; j < theta_true.size(); ++j) {
        const double d = sel.lambda_hat[j] * sel.theta_hat[j] - theta_true[j];
        err += d * d;
    }
    return err;
}

/// Oracle risks |lambda theta_hat - theta|^2 + tail for every candidate,
/// using prefix sums over the shared all-ones block.
std::vector<double> per_lambda_risks(const WeightFamily& family,
                                     std::span<const double> theta_hat,
                                     std::span<const double> theta_true, double tail) {
    const long len = static_cast<long>(theta_true.size());
    std::vector<double> diff_sq(len + 1, 0.0), true_sq(len + 1, 0.0);
    for (long j = 1; j <= len; ++j) {
        const double d = theta_hat[j - 1] - theta_true[j - 1];
        diff_sq[j] = diff_sq[j - 1] + d * d;
        true_sq[j] = true_sq[j - 1] + theta_true[j - 1] * theta_true[j - 1];
    }
    std::vector<double> risks(family.weights.size());
    for (std::size_t i = 0; i < family.weights.size(); ++i) {
        const auto& w = family.weights[i];
        const long ones = std::min(w.ones_end(), len);
        const long hi = std::min(w.support, len);
        double err = diff_sq[ones];
        for (long j = ones + 1; j <= hi; ++j) {
            const double d = w.lambda(j) * theta_hat[j - 1] - theta_true[j - 1];
            err += d * d;
        }
        err += true_sq[len] - true_sq[hi];  // candidate is zero past its support
        risks[i] = err + tail;
    }
    return risks;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return {mean, sd / std::sqrt(n)};
}

}  // namespace

RiskReport monte_carlo_risk(const SignalSpec& signal, const NoiseModel& noise,
                            double epsilon, long p, long n_reps,
                            const PipelineConfig& cfg, std::uint64_t seed) {
    if (n_reps < 2) throw DomainError("monte_carlo_risk: need at least 2 replications");

    const auto ctx = make_pipeline_context(noise, epsilon, p, cfg);
    const auto theta_true = true_coefficients(signal, *ctx.basis, ctx.n_eff);
    double covered = 0.0;
    for (double t : theta_true) covered += t * t;
    const double tail = std::max(0.0, signal.l2_norm_sq() - covered);

    const std::size_t iota = ctx.family.weights.size();
    std::vector<double> risks(n_reps, 0.0);
    std::vector<std::vector<double>> lam_risks, lam_costs;
    if (cfg.per_lambda) {
        lam_risks.assign(n_reps, {});
        lam_costs.assign(n_reps, {});
    }

    std::atomic<long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const long rep = next.fetch_add(1);
            if (rep >= n_reps) return;
            try {
                const auto sel =
                    run_replication(signal, noise, substream_seed(seed, rep), ctx);
                risks[rep] = selection_risk(sel, theta_true, tail);
                if (cfg.per_lambda) {
                    lam_risks[rep] =
                        per_lambda_risks(ctx.family, sel.theta_hat, theta_true, tail);
                    lam_costs[rep] = sel.costs;
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    unsigned hw = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                  : std::max(1u, std::thread::hardware_concurrency());
    hw = std::min<unsigned>(hw, static_cast<unsigned>(n_reps));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < hw; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    RiskReport rep;
    rep.epsilon = epsilon;
    rep.n_reps = n_reps;
    rep.seed = seed;
    rep.delta = ctx.delta;
    rep.a_bar = ctx.a_bar;
    rep.kappa_known = ctx.kappa_known;
    rep.signal_norm_sq = signal.l2_norm_sq();

    const auto agg = mean_se(risks);
    rep.r_bar = agg.mean;
    rep.r_bar_se = agg.se;
    if (rep.signal_norm_sq == 0.0) throw ZeroSignal("monte_carlo_risk: zero signal");
    rep.r_bar_rel = rep.r_bar / rep.signal_norm_sq;

    if (cfg.per_lambda) {
        rep.per_lambda.resize(iota);
        rep.per_lambda_se.resize(iota);
        rep.j_mean.resize(iota);
        std::vector<double> col(n_reps);
        for (std::size_t a = 0; a < iota; ++a) {
            for (long r = 0; r < n_reps; ++r) col[r] = lam_risks[r][a];
            const auto m = mean_se(col);
            rep.per_lambda[a] = m.mean;
            rep.per_lambda_se[a] = m.se;
            double jm = 0.0;
            for (long r = 0; r < n_reps; ++r) jm += lam_costs[r][a];
            rep.j_mean[a] = jm / static_cast<double>(n_reps);
            if (rep.min_lambda_index < 0 || m.mean < rep.min_lambda_risk) {
                rep.min_lambda_risk = m.mean;
                rep.min_lambda_index = static_cast<long>(a);
            }
        }
        if (rep.min_lambda_risk > 0.0) rep.oracle_ratio = rep.r_bar / rep.min_lambda_risk;
        const double bound = (1.0 + 3.0 * ctx.delta) / (1.0 - 3.0 * ctx.delta);
        rep.slack = rep.r_bar - bound * rep.min_lambda_risk;
    }
    return rep;
}

std::pair<std::size_t, std::vector<RiskReport>> robust_risk(
    const SignalSpec& signal, const std::vector<NoiseModel>& noise_set, double epsilon,
    long p, long n_reps, const PipelineConfig& cfg, std::uint64_t seed) {
    if (noise_set.empty()) throw DomainError("robust_risk: empty noise family");
    for (const auto& q : noise_set)
        if (q.kappa_q > q.sigma_star + 1e-12)
            throw FamilyBoundError("robust_risk: noise model outside the family bound");

    std::vector<RiskReport> reports;
    reports.reserve(noise_set.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < noise_set.size(); ++i) {
        reports.push_back(
            monte_carlo_risk(signal, noise_set[i], epsilon, p, n_reps, cfg, seed));
        if (reports[i].r_bar > reports[best].r_bar) best = i;
    }
    return {best, std::move(reports)};
}

void write_oracle_csv(const RiskReport& report, const WeightFamily& family,
                      const std::string& file) {
    std::vector<std::string> lines;
    lines.push_back("# epsilon=" + fmt_double(report.epsilon));
    lines.push_back("# n_reps=" + std::to_string(report.n_reps));
    lines.push_back("# seed=" + std::to_string(report.seed));
    lines.push_back("# r_bar=" + fmt_double(report.r_bar));
    lines.push_back("# oracle_ratio=" + fmt_double(report.oracle_ratio));
    lines.push_back("beta,r,risk_mean,risk_se,j_mean");
    for (std::size_t a = 0; a < report.per_lambda.size(); ++a) {
        const auto& w = family.weights[a];
        lines.push_back(std::to_string(w.beta) + "," + fmt_double(w.r) + "," +
                        fmt_double(report.per_lambda[a]) + "," +
                        fmt_double(report.per_lambda_se[a]) + "," +
                        fmt_double(report.j_mean[a]));
    }
    write_lines(file, lines);
}

}  // namespace levyest
