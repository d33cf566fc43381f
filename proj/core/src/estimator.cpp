#include "levyest/estimator.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <map>
#include <utility>

#include "levyest/csv.hpp"
#include "levyest/errors.hpp"

namespace levyest {

ObservationPath truncate_path(const ObservationPath& path, const TruncationConfig& cfg) {
    if (cfg.a_bar <= 0.0) throw DomainError("truncate_path: a_bar must be positive");

    ObservationPath out = path;
    if (cfg.mode == TruncationConfig::Mode::Empirical) {
        const auto inc = path.increments();
        double acc = 0.0;
        for (long i = 1; i <= path.p; ++i) {
            if (std::abs(inc[i - 1]) <= cfg.a_bar) acc += inc[i - 1];
            out.values[i] = acc;
        }
        out.jumps.clear();
        for (const auto& ev : path.jumps)
            if (std::abs(ev.size) <= cfg.a_bar) out.jumps.push_back(ev);
    } else {
        // Remove exactly the recorded jumps exceeding the threshold;
        // a jump at time s affects y_{t_i} for all t_i >= s.
        std::vector<double> removed(path.p + 1, 0.0);
        out.jumps.clear();
        for (const auto& ev : path.jumps) {
            if (std::abs(ev.size) > cfg.a_bar) {
                const long cell = std::min<long>(
                    path.p, static_cast<long>(std::ceil(ev.time * path.p)));
                removed[cell] += ev.size;
            } else {
                out.jumps.push_back(ev);
            }
        }
        double acc = 0.0;
        for (long i = 1; i <= path.p; ++i) {
            acc += removed[i];
            out.values[i] -= acc;
        }
    }
    return out;
}

std::uint64_t coefficient_count(double epsilon) {
    if (epsilon <= 0.0) throw DomainError("coefficient_count: epsilon must be positive");
    // 1/eps^2 can land a few ulps under an integer (eps = 0.1 gives
    // 99.999...); nudge before flooring so the intended count survives
    const double v = (1.0 / (epsilon * epsilon)) * (1.0 + 8.0 * DBL_EPSILON);
    if (v > 4.0e18) return static_cast<std::uint64_t>(4.0e18);
    return static_cast<std::uint64_t>(v);
}

long usable_coefficients(const Basis& basis, double epsilon, long p) {
    const std::uint64_t n_full = coefficient_count(epsilon);
    long n = static_cast<long>(
        std::min<std::uint64_t>(n_full, static_cast<std::uint64_t>(p - 2)));
    while (n >= 1) {
        const auto h = basis.harmonic(n);
        if (h.kind == Harmonic::Constant || 2 * h.freq <= p - 2) break;
        --n;
    }
    return n;
}

double stieltjes_sum(const ObservationPath& path, const Basis& basis, long j) {
    const auto inc = path.increments();
    double acc = 0.0;
    for (long i = 1; i <= path.p; ++i) {
        const double t = static_cast<double>(i - 1) / static_cast<double>(path.p);
        acc += basis.eval(j, t) * inc[i - 1];
    }
    return acc;
}

namespace {

/// cos/sin sums sum_m x_m cos(2 pi f m / p), sum_m x_m sin(2 pi f m / p)
/// with periodic resync of the rotation to keep rounding in check.
std::pair<double, double> harmonic_sums(std::span<const double> x, long freq, long p) {
    const double w = 2.0 * M_PI * static_cast<double>(freq) / static_cast<double>(p);
    const double cw = std::cos(w), sw = std::sin(w);
    double c = 1.0, s = 0.0;
    double sum_c = 0.0, sum_s = 0.0;
    for (long m = 0; m < static_cast<long>(x.size()); ++m) {
        if ((m & 2047) == 0) {
            c = std::cos(w * static_cast<double>(m));
            s = std::sin(w * static_cast<double>(m));
        }
        sum_c += x[m] * c;
        sum_s += x[m] * s;
        const double c2 = c * cw - s * sw;
        s = s * cw + c * sw;
        c = c2;
    }
    return {sum_c, sum_s};
}

}  // namespace

std::vector<double> stieltjes_sums(const ObservationPath& path, const Basis& basis, long n) {
    const auto inc = path.increments();
    std::vector<Harmonic> harm(n);
    std::vector<long> freqs;
    for (long j = 1; j <= n; ++j) {
        harm[j - 1] = basis.harmonic(j);
        if (harm[j - 1].kind != Harmonic::Constant) freqs.push_back(harm[j - 1].freq);
    }
    std::sort(freqs.begin(), freqs.end());
    freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());

    std::map<long, std::pair<double, double>> sums;
    for (long f : freqs) sums[f] = harmonic_sums(inc, f, path.p);

    double total = 0.0;
    for (double d : inc) total += d;

    const double rt2 = std::sqrt(2.0);
    std::vector<double> out(n);
    for (long j = 1; j <= n; ++j) {
        const auto& h = harm[j - 1];
        switch (h.kind) {
            case Harmonic::Constant: out[j - 1] = total; break;
            case Harmonic::Cos: out[j - 1] = rt2 * sums[h.freq].first; break;
            case Harmonic::Sin: out[j - 1] = rt2 * sums[h.freq].second; break;
        }
    }
    return out;
}

std::vector<double> fourier_estimates(const ObservationPath& raw,
                                      const ObservationPath& truncated,
                                      const Basis& basis, long n) {
    if (raw.p != truncated.p || raw.epsilon != truncated.epsilon)
        throw GridMismatch("fourier_estimates: raw and truncated paths differ in (p, epsilon)");
    if (n > raw.p)
        throw GridMismatch("fourier_estimates: n exceeds the grid size");
    auto theta = stieltjes_sums(truncated, basis, n);
    if (n >= 1 && basis.harmonic(1).kind == Harmonic::Constant)
        theta[0] = stieltjes_sum(raw, basis, 1);
    return theta;
}

double estimate_variance(const ObservationPath& truncated) {
    const double eps = truncated.epsilon;
    if (eps > 1.0 / std::sqrt(3.0) + 1e-15)
        throw DomainError("estimate_variance: requires epsilon <= 1/sqrt(3)");
    const std::uint64_t n_full = coefficient_count(eps);
    const long n = static_cast<long>(
        std::min<std::uint64_t>(n_full, static_cast<std::uint64_t>(truncated.p - 2)));
    const long lo = static_cast<long>(std::floor(std::sqrt(static_cast<double>(n)))) + 1;

    const auto tau = stieltjes_sums(truncated, *trig_basis(), n);
    double acc = 0.0;
    for (long j = lo; j <= n; ++j) acc += tau[j - 1] * tau[j - 1];
    return acc;
}

std::vector<double> WeightVector::dense(long len) const {
    std::vector<double> out(len, 0.0);
    const long hi = std::min(len, support);
    for (long j = 1; j <= hi; ++j) out[j - 1] = lambda(j);
    return out;
}

int default_k_star(double epsilon, int k_star_0) {
    return k_star_0 + static_cast<int>(std::floor(std::sqrt(std::abs(std::log(epsilon)))));
}

double default_varpi(double epsilon) {
    const double l = std::abs(std::log(epsilon));
    return std::min(1.0 / (l * l), 0.5);
}

double delta_siml(double epsilon) {
    const double l = 3.0 + std::abs(std::log(epsilon));
    return 1.0 / (l * l);
}

double delta_log(double epsilon) {
    return 1.0 / (6.0 + std::abs(std::log(epsilon)));
}

WeightFamily build_weight_grid(double epsilon, double sigma_star, int k_star,
                               double varpi, long n_cap) {
    if (epsilon <= 0.0 || epsilon >= 1.0)
        throw DomainError("build_weight_grid: need epsilon in (0,1)");
    if (k_star < 1) throw DomainError("build_weight_grid: need k_star >= 1");
    if (varpi <= 0.0 || varpi >= 1.0)
        throw DomainError("build_weight_grid: need varpi in (0,1)");
    if (sigma_star <= 0.0) throw DomainError("build_weight_grid: need sigma_star > 0");

    WeightFamily fam;
    fam.epsilon = epsilon;
    fam.k_star = k_star;
    fam.varpi = varpi;
    fam.m = static_cast<int>(std::floor(1.0 / varpi));
    fam.upsilon = 1.0 / (epsilon * epsilon * sigma_star);
    fam.n = coefficient_count(epsilon);

    const long default_cap = 1000000;
    fam.n_cap = static_cast<long>(std::min<std::uint64_t>(
        fam.n, static_cast<std::uint64_t>(n_cap > 0 ? n_cap : default_cap)));

    const double abs_log_eps = std::abs(std::log(epsilon));

    fam.weights.reserve(static_cast<std::size_t>(k_star) * fam.m);
    for (int beta = 1; beta <= k_star; ++beta) {
        const double d_beta = static_cast<double>(beta + 1) * (2.0 * beta + 1.0) /
                              (std::pow(M_PI, 2.0 * beta) * beta);
        for (int i = 1; i <= fam.m; ++i) {
            WeightVector w;
            w.beta = beta;
            w.r = i * varpi;
            const double arg = d_beta * w.r * fam.upsilon;
            w.omega = arg > 0.0 ? std::pow(arg, 1.0 / (2.0 * beta + 1.0)) : 0.0;
            w.j_star = static_cast<long>(std::floor(w.omega / abs_log_eps));
            w.support = w.omega >= 1.0
                            ? std::min<long>(static_cast<long>(std::floor(w.omega)), fam.n_cap)
                            : 0;
            double nsq = static_cast<double>(w.ones_end());
            for (long j = w.ones_end() + 1; j <= w.support; ++j) {
                const double v = w.lambda(j);
                nsq += v * v;
            }
            w.norm_sq = nsq;
            fam.weights.push_back(w);
        }
    }
    fam.iota = static_cast<long>(fam.weights.size());
    for (const auto& w : fam.weights) fam.lambda_star = std::max(fam.lambda_star, w.support);
    if (fam.lambda_star == 0)
        throw ConfigError("build_weight_grid: every candidate weight is zero");
    return fam;
}

double penalty(const WeightVector& lambda, double kappa, double epsilon) {
    return epsilon * epsilon * kappa * lambda.norm_sq;
}

double penalty(std::span<const double> lambda, double kappa, double epsilon) {
    double nsq = 0.0;
    for (double v : lambda) nsq += v * v;
    return epsilon * epsilon * kappa * nsq;
}

namespace {

void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0 / 6.0))
        throw DeltaRangeError("cost_function: delta must lie in (0, 1/6)");
}

}  // namespace

double cost_function(const WeightVector& lambda, std::span<const double> theta_hat,
                     double kappa_hat, double epsilon, double delta) {
    check_delta(delta);
    const double eps2k = epsilon * epsilon * kappa_hat;
    const long hi = std::min<long>(lambda.support, static_cast<long>(theta_hat.size()));
    double quad = 0.0, cross = 0.0;
    for (long j = 1; j <= hi; ++j) {
        const double lj = lambda.lambda(j);
        const double th2 = theta_hat[j - 1] * theta_hat[j - 1];
        quad += lj * lj * th2;
        cross += lj * (th2 - eps2k);
    }
    return quad - 2.0 * cross + delta * eps2k * lambda.norm_sq;
}

double cost_function(std::span<const double> lambda, std::span<const double> theta_hat,
                     double kappa_hat, double epsilon, double delta) {
    check_delta(delta);
    const double eps2k = epsilon * epsilon * kappa_hat;
    const std::size_t hi = std::min(lambda.size(), theta_hat.size());
    double quad = 0.0, cross = 0.0, nsq = 0.0;
    for (std::size_t j = 0; j < lambda.size(); ++j) nsq += lambda[j] * lambda[j];
    for (std::size_t j = 0; j < hi; ++j) {
        const double th2 = theta_hat[j] * theta_hat[j];
        quad += lambda[j] * lambda[j] * th2;
        cross += lambda[j] * (th2 - eps2k);
    }
    return quad - 2.0 * cross + delta * eps2k * nsq;
}

SelectionResult select_model(const WeightFamily& family,
                             std::span<const double> theta_hat, double kappa_hat,
                             double epsilon, double delta) {
    SelectionResult res;
    res.theta_hat.assign(theta_hat.begin(), theta_hat.end());
    res.kappa_hat = kappa_hat;
    res.delta = delta;
    res.costs.resize(family.weights.size());

    check_delta(delta);
    // Prefix sums let the leading all-ones block of each weight vector be
    // costed in O(1); only the rolled-off tail is summed term by term.
    const long len = static_cast<long>(theta_hat.size());
    std::vector<double> prefix_sq(len + 1, 0.0);
    for (long j = 1; j <= len; ++j)
        prefix_sq[j] = prefix_sq[j - 1] + theta_hat[j - 1] * theta_hat[j - 1];
    const double eps2k = epsilon * epsilon * kappa_hat;

    for (std::size_t i = 0; i < family.weights.size(); ++i) {
        const auto& w = family.weights[i];
        const long ones = std::min(w.ones_end(), len);
        const long hi = std::min(w.support, len);
        double quad = prefix_sq[ones];
        double cross = prefix_sq[ones] - static_cast<double>(ones) * eps2k;
        for (long j = ones + 1; j <= hi; ++j) {
            const double lj = w.lambda(j);
            const double th2 = theta_hat[j - 1] * theta_hat[j - 1];
            quad += lj * lj * th2;
            cross += lj * (th2 - eps2k);
        }
        res.costs[i] = quad - 2.0 * cross + delta * eps2k * w.norm_sq;
        if (res.chosen < 0 || res.costs[i] < res.cost_min) {
            res.chosen = static_cast<long>(i);
            res.cost_min = res.costs[i];
        }
    }
    const auto& w = family.weights[res.chosen];
    res.alpha_beta = w.beta;
    res.alpha_r = w.r;
    res.lambda_hat = w.dense(static_cast<long>(theta_hat.size()));
    return res;
}

void reconstruct(SelectionResult& result, const Basis& basis, long p) {
    result.s_hat.assign(p + 1, 0.0);
    for (std::size_t j = 0; j < result.lambda_hat.size(); ++j) {
        const double c = result.lambda_hat[j] * result.theta_hat[j];
        if (c == 0.0) continue;
        for (long i = 0; i <= p; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(p);
            result.s_hat[i] += c * basis.eval(static_cast<long>(j) + 1, t);
        }
    }
}

void write_selection_csv(const SelectionResult& result, const std::string& file) {
    std::vector<std::string> lines;
    lines.push_back("# alpha_beta=" + std::to_string(result.alpha_beta));
    lines.push_back("# alpha_r=" + fmt_double(result.alpha_r));
    lines.push_back("# kappa_hat=" + fmt_double(result.kappa_hat));
    lines.push_back("# cost_min=" + fmt_double(result.cost_min));
    lines.push_back("# delta=" + fmt_double(result.delta));
    lines.push_back("# a_bar=" + fmt_double(result.a_bar));
    lines.push_back("j,theta_hat,lambda_hat");
    for (std::size_t j = 0; j < result.theta_hat.size(); ++j)
        lines.push_back(std::to_string(j + 1) + "," + fmt_double(result.theta_hat[j]) + "," +
                        fmt_double(result.lambda_hat[j]));
    write_lines(file, lines);
}

}  // namespace levyest
