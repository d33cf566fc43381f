#include "levyest/experiment.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "levyest/csv.hpp"
#include "levyest/detection.hpp"
#include "levyest/errors.hpp"
#include "levyest/rng.hpp"

namespace levyest {

namespace {

constexpr const char* kVersion = "levyest 0.1.0";

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for " + key + ": " + v);
    }
}

long parse_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for " + key + ": " + v);
    }
}

void parallel_for(long n, int threads, const std::function<void(long)>& body) {
    std::atomic<long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const long i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    unsigned hw = threads > 0 ? static_cast<unsigned>(threads)
                              : std::max(1u, std::thread::hardware_concurrency());
    hw = std::min<unsigned>(hw, static_cast<unsigned>(std::max<long>(1, n)));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < hw; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

void write_provenance(const std::string& file, const ExperimentConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("seed", std::to_string(cfg.seed));
    kv.emplace_back("n_reps", std::to_string(cfg.n_reps));
    kv.emplace_back("p", std::to_string(cfg.grid_p));
    kv.emplace_back("config_hash", std::to_string(cfg.hash()));
    kv.emplace_back("version", kVersion);
    write_kv(file + ".meta", kv);
}

std::string join_epsilons(const std::vector<EpsilonSpec>& eps) {
    std::string out;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (i) out += ',';
        out += eps[i].label;
    }
    return out;
}

}  // namespace

EpsilonSpec parse_epsilon(const std::string& text) {
    EpsilonSpec spec;
    spec.label = text;
    const std::string prefix = "1/sqrt(";
    if (text.rfind(prefix, 0) == 0 && text.back() == ')') {
        const std::string inner = text.substr(prefix.size(), text.size() - prefix.size() - 1);
        const double k = parse_double("epsilons", inner);
        if (k <= 0.0) throw ConfigError("config: epsilon expression needs K > 0: " + text);
        spec.value = 1.0 / std::sqrt(k);
    } else {
        spec.value = parse_double("epsilons", text);
    }
    if (spec.value <= 0.0) throw ConfigError("config: epsilon must be positive: " + text);
    return spec;
}

std::string sanitize_label(const std::string& label) {
    std::string out;
    for (char c : label) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_')
            out += c;
        else if (c == '/' )
            out += '_';
        // drop parentheses and anything else
    }
    return out;
}

ExperimentConfig ExperimentConfig::parse_lines(const std::vector<std::string>& lines) {
    ExperimentConfig cfg;
    cfg.epsilons = {parse_epsilon("1/sqrt(20)"), parse_epsilon("1/sqrt(100)"),
                    parse_epsilon("1/sqrt(200)"), parse_epsilon("1/sqrt(1000)")};

    for (const auto& raw : lines) {
        if (raw.empty() || raw[0] == '#') continue;
        const auto pos = raw.find('=');
        if (pos == std::string::npos)
            throw ConfigError("config: expected key=value, got: " + raw);
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = strip(raw.substr(0, pos));
        const std::string val = strip(raw.substr(pos + 1));

        if (key == "epsilons") {
            cfg.epsilons.clear();
            std::stringstream ss(val);
            std::string tok;
            while (std::getline(ss, tok, ',')) cfg.epsilons.push_back(parse_epsilon(tok));
            if (cfg.epsilons.empty()) throw ConfigError("config: empty epsilons list");
        } else if (key == "n_reps") {
            cfg.n_reps = parse_long(key, val);
        } else if (key == "grid_p") {
            cfg.grid_p = parse_long(key, val);
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(std::stoull(val));
        } else if (key == "output_dir") {
            cfg.output_dir = val;
        } else if (key == "signal") {
            cfg.signal_kind = val;
        } else if (key == "signal_basis") {
            cfg.signal_basis = val;
        } else if (key == "rho1") {
            cfg.rho1 = parse_double(key, val);
        } else if (key == "rho2") {
            cfg.rho2 = parse_double(key, val);
        } else if (key == "jump_dist") {
            cfg.jump_dist = val;
        } else if (key == "jump_intensity") {
            cfg.jump_intensity = parse_double(key, val);
        } else if (key == "sigma_star") {
            cfg.sigma_star = parse_double(key, val);
        } else if (key == "basis") {
            cfg.basis = val;
        } else if (key == "truncation") {
            cfg.truncation = val;
        } else if (key == "trunc_mode") {
            cfg.trunc_mode = val;
        } else if (key == "variance") {
            cfg.variance = val;
        } else if (key == "delta") {
            cfg.delta = val;
        } else if (key == "k_star_0") {
            cfg.k_star_0 = static_cast<int>(parse_long(key, val));
        } else if (key == "varpi") {
            cfg.varpi = val == "default" ? 0.0 : parse_double(key, val);
        } else if (key == "iota") {
            cfg.iota = val == "default" ? 0 : parse_long(key, val);
        } else if (key == "c_star") {
            cfg.c_star = val == "default" ? 0.0 : parse_double(key, val);
        } else if (key == "threads") {
            cfg.threads = static_cast<int>(parse_long(key, val));
        } else if (key == "per_lambda") {
            if (val != "true" && val != "false")
                throw ConfigError("config: per_lambda must be true or false");
            cfg.per_lambda = val == "true";
        } else {
            throw ConfigError("config: unknown key: " + key);
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& file) {
    return parse_lines(read_lines(file));
}

std::vector<std::string> ExperimentConfig::serialize() const {
    std::vector<std::string> out;
    out.push_back("epsilons = " + join_epsilons(epsilons));
    out.push_back("n_reps = " + std::to_string(n_reps));
    out.push_back("grid_p = " + std::to_string(grid_p));
    out.push_back("seed = " + std::to_string(seed));
    out.push_back("output_dir = " + output_dir);
    out.push_back("signal = " + signal_kind);
    out.push_back("signal_basis = " + signal_basis);
    out.push_back("rho1 = " + fmt_double(rho1));
    out.push_back("rho2 = " + fmt_double(rho2));
    out.push_back("jump_dist = " + jump_dist);
    out.push_back("jump_intensity = " + fmt_double(jump_intensity));
    out.push_back("sigma_star = " + fmt_double(sigma_star));
    out.push_back("basis = " + basis);
    out.push_back("truncation = " + truncation);
    out.push_back("trunc_mode = " + trunc_mode);
    out.push_back("variance = " + variance);
    out.push_back("delta = " + delta);
    out.push_back("k_star_0 = " + std::to_string(k_star_0));
    out.push_back("varpi = " + (varpi == 0.0 ? std::string("default") : fmt_double(varpi)));
    out.push_back("iota = " + (iota == 0 ? std::string("default") : std::to_string(iota)));
    out.push_back("c_star = " + (c_star == 0.0 ? std::string("default") : fmt_double(c_star)));
    out.push_back("threads = " + std::to_string(threads));
    out.push_back(std::string("per_lambda = ") + (per_lambda ? "true" : "false"));
    return out;
}

std::uint64_t ExperimentConfig::hash() const {
    std::string all;
    for (const auto& l : serialize()) {
        // where the results land is not part of the experiment's identity
        if (l.rfind("output_dir", 0) == 0) continue;
        all += l;
        all += '\n';
    }
    return fnv1a(all);
}

void ExperimentConfig::validate() const {
    const double eps_max = 1.0 / std::sqrt(3.0) + 1e-12;
    for (const auto& e : epsilons)
        if (e.value <= 0.0 || e.value > eps_max)
            throw ConfigError("config: epsilon out of (0, 1/sqrt(3)]: " + e.label);
    if (n_reps < 1) throw ConfigError("config: n_reps must be >= 1");
    if (grid_p < 100) throw ConfigError("config: grid_p must be >= 100");
    if (basis != "trig" && basis != "signal")
        throw ConfigError("config: basis must be trig or signal");
    if (signal_basis != "trig" && signal_basis != "sin_family")
        throw ConfigError("config: signal_basis must be trig or sin_family");
    if (trunc_mode != "empirical" && trunc_mode != "oracle")
        throw ConfigError("config: trunc_mode must be empirical or oracle");
    if (variance != "estimate" && variance != "known")
        throw ConfigError("config: variance must be estimate or known");
    if (jump_dist != "none" && jump_dist != "two_point" && jump_dist != "gaussian" &&
        jump_dist != "laplace")
        throw ConfigError("config: unknown jump_dist: " + jump_dist);
    if (truncation != "lambda_star" && truncation != "sqrt_lambda_star" &&
        truncation.rfind("fixed:", 0) != 0)
        throw ConfigError("config: unknown truncation rule: " + truncation);
    if (delta != "siml" && delta != "log" && delta.rfind("fixed:", 0) != 0)
        throw ConfigError("config: unknown delta rule: " + delta);
}

SignalSpec ExperimentConfig::make_signal() const {
    if (signal_kind == "multipath10") return SignalSpec::multipath_ten();
    if (signal_kind == "zero") return SignalSpec::zero();
    // custom: "index:coeff;index:coeff;..."
    std::vector<SignalTerm> terms;
    std::stringstream ss(signal_kind);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        const auto pos = tok.find(':');
        if (pos == std::string::npos)
            throw ConfigError("config: bad signal term (want index:coeff): " + tok);
        terms.push_back({parse_long("signal", tok.substr(0, pos)),
                         parse_double("signal", tok.substr(pos + 1))});
    }
    if (terms.empty()) throw ConfigError("config: empty custom signal");
    auto b = signal_basis == "trig" ? trig_basis() : sin_family_basis();
    return SignalSpec(std::move(b), std::move(terms));
}

NoiseModel ExperimentConfig::make_noise() const {
    std::optional<JumpLaw> law;
    if (jump_dist == "two_point")
        law = JumpLaw::two_point(1.0 / std::sqrt(jump_intensity), jump_intensity);
    else if (jump_dist == "gaussian")
        law = JumpLaw::gaussian(1.0 / std::sqrt(jump_intensity), jump_intensity);
    else if (jump_dist == "laplace")
        law = JumpLaw::laplace(1.0 / std::sqrt(2.0 * jump_intensity), jump_intensity);
    return make_noise_model(rho1, rho2, law, sigma_star);
}

PipelineConfig ExperimentConfig::make_pipeline(const SignalSpec& signal) const {
    PipelineConfig pc;
    pc.basis = basis == "signal" ? signal.basis_ptr() : trig_basis();
    if (truncation == "lambda_star") {
        pc.truncation = PipelineConfig::Truncation::LambdaStar;
    } else if (truncation == "sqrt_lambda_star") {
        pc.truncation = PipelineConfig::Truncation::SqrtLambdaStar;
    } else {
        pc.truncation = PipelineConfig::Truncation::Fixed;
        pc.a_bar_fixed = parse_double("truncation", truncation.substr(6));
    }
    pc.trunc_mode = trunc_mode == "oracle" ? TruncationConfig::Mode::Oracle
                                           : TruncationConfig::Mode::Empirical;
    pc.variance = variance == "known" ? PipelineConfig::Variance::Known
                                      : PipelineConfig::Variance::Estimate;
    if (delta == "siml") {
        pc.delta_rule = PipelineConfig::DeltaRule::Siml;
    } else if (delta == "log") {
        pc.delta_rule = PipelineConfig::DeltaRule::Log;
    } else {
        pc.delta_rule = PipelineConfig::DeltaRule::Fixed;
        pc.delta_fixed = parse_double("delta", delta.substr(6));
    }
    pc.k_star_0 = k_star_0;
    pc.varpi = varpi;
    pc.threads = threads;
    pc.per_lambda = per_lambda;
    return pc;
}

std::vector<std::string> run_risk_table(const ExperimentConfig& config) {
    const auto signal = config.make_signal();
    const auto noise = config.make_noise();
    auto pc = config.make_pipeline(signal);

    std::vector<std::string> lines;
    lines.push_back("epsilon,r_bar,r_bar_rel");
    for (const auto& eps : config.epsilons) {
        double r_bar = 0.0, r_rel = 0.0;
        if (config.n_reps >= 2) {
            const auto report = monte_carlo_risk(signal, noise, eps.value, config.grid_p,
                                                 config.n_reps, pc, config.seed);
            r_bar = report.r_bar;
            r_rel = report.r_bar_rel;
        } else {
            const auto ctx = make_pipeline_context(noise, eps.value, config.grid_p, pc);
            const auto sel = run_replication(signal, noise, substream_seed(config.seed, 0), ctx);
            const auto theta = true_coefficients(signal, *ctx.basis, ctx.n_eff);
            double covered = 0.0;
            for (double t : theta) covered += t * t;
            r_bar = std::max(0.0, signal.l2_norm_sq() - covered);
            for (std::size_t j = 0; j < theta.size(); ++j) {
                const double d = sel.lambda_hat[j] * sel.theta_hat[j] - theta[j];
                r_bar += d * d;
            }
            if (signal.l2_norm_sq() == 0.0) throw ZeroSignal("run_risk_table: zero signal");
            r_rel = r_bar / signal.l2_norm_sq();
        }
        lines.push_back(eps.label + "," + fmt_double(r_bar) + "," + fmt_double(r_rel));
    }
    const std::string file = config.output_dir + "/risk_table.csv";
    write_lines(file, lines);
    write_provenance(file, config);
    return {file, file + ".meta"};
}

std::vector<std::string> run_detection_table(const ExperimentConfig& config) {
    const auto signal = config.make_signal();
    const auto noise = config.make_noise();
    // Detection always counts components of the signal's own family.
    auto pc = config.make_pipeline(signal);
    pc.basis = signal.basis_ptr();
    pc.per_lambda = false;

    std::vector<DetectionRow> all_rows;
    std::vector<std::string> table;
    table.push_back("epsilon,q_hat_1_mode,q_hat_2_mode");

    for (const auto& eps : config.epsilons) {
        const auto ctx = make_pipeline_context(noise, eps.value, config.grid_p, pc);
        const long iota_rule =
            config.iota > 0 ? config.iota : DetectionConfig::default_iota(eps.value);
        const long iota_eff = std::min<long>(std::max<long>(1, iota_rule), ctx.n_eff);
        const double c_star = config.c_star > 0.0
                                  ? config.c_star
                                  : DetectionConfig::default_c_star(eps.value);

        std::vector<long> q1(config.n_reps), q2(config.n_reps);
        parallel_for(config.n_reps, config.threads, [&](long rep) {
            const auto path = simulate_path(signal, noise, eps.value, config.grid_p,
                                            substream_seed(config.seed, rep));
            const auto trunc =
                noise.has_jumps()
                    ? truncate_path(path, TruncationConfig{ctx.a_bar, ctx.cfg.trunc_mode})
                    : path;
            const auto theta = fourier_estimates(path, trunc, *ctx.basis, ctx.n_eff);
            const double kappa = ctx.cfg.variance == PipelineConfig::Variance::Known
                                     ? ctx.kappa_known
                                     : estimate_variance(trunc);
            q1[rep] = detect_count_lse(theta, kappa, eps.value, ctx.delta, iota_eff);
            q2[rep] = detect_count_shrinkage(theta, c_star);
        });

        for (long rep = 0; rep < config.n_reps; ++rep)
            all_rows.push_back({eps.value, rep, q1[rep], q2[rep]});
        table.push_back(eps.label + "," + std::to_string(modal_value(q1)) + "," +
                        std::to_string(modal_value(q2)));
    }

    const std::string table_file = config.output_dir + "/detect_table.csv";
    const std::string reps_file = config.output_dir + "/detect_reps.csv";
    write_lines(table_file, table);
    write_detection_csv(all_rows, reps_file);
    write_provenance(table_file, config);
    return {table_file, table_file + ".meta", reps_file};
}

std::string emit_figure_data(const ExperimentConfig& config, const EpsilonSpec& eps) {
    const auto signal = config.make_signal();
    const auto noise = config.make_noise();
    const auto pc = config.make_pipeline(signal);
    const auto ctx = make_pipeline_context(noise, eps.value, config.grid_p, pc);

    const auto path =
        simulate_path(signal, noise, eps.value, config.grid_p, substream_seed(config.seed, 0));
    const auto trunc =
        noise.has_jumps() ? truncate_path(path, TruncationConfig{ctx.a_bar, ctx.cfg.trunc_mode})
                          : path;
    const auto theta = fourier_estimates(path, trunc, *ctx.basis, ctx.n_eff);
    const double kappa = ctx.cfg.variance == PipelineConfig::Variance::Known
                             ? ctx.kappa_known
                             : estimate_variance(trunc);
    auto sel = select_model(ctx.family, theta, kappa, eps.value, ctx.delta);
    reconstruct(sel, *ctx.basis, config.grid_p);

    std::vector<std::string> lines;
    lines.push_back("t,y_observed,S_true,S_hat");
    for (long i = 0; i <= config.grid_p; ++i) {
        const double t = path.time(i);
        lines.push_back(fmt_double(t) + "," + fmt_double(path.values[i]) + "," +
                        fmt_double(signal.value(t)) + "," + fmt_double(sel.s_hat[i]));
    }
    const std::string file =
        config.output_dir + "/figure_eps_" + sanitize_label(eps.label) + ".csv";
    write_lines(file, lines);
    write_provenance(file, config);
    return file;
}

std::vector<std::string> run_oracle_check(const ExperimentConfig& config) {
    const auto signal = config.make_signal();
    const auto noise = config.make_noise();
    auto pc = config.make_pipeline(signal);
    pc.per_lambda = true;

    std::vector<std::string> files;
    std::vector<std::string> summary;
    summary.push_back("epsilon,r_bar,min_lambda_risk,oracle_ratio,slack,psi");

    for (const auto& eps : config.epsilons) {
        const auto report = monte_carlo_risk(signal, noise, eps.value, config.grid_p,
                                             std::max<long>(2, config.n_reps), pc, config.seed);
        const auto ctx = make_pipeline_context(noise, eps.value, config.grid_p, pc);
        const auto constants = oracle_constants(noise, eps.value, ctx.a_bar, 0.0,
                                                ctx.family.iota, ctx.basis->phi_star());

        const std::string file =
            config.output_dir + "/oracle_eps_" + sanitize_label(eps.label) + ".csv";
        write_oracle_csv(report, ctx.family, file);
        files.push_back(file);

        summary.push_back(eps.label + "," + fmt_double(report.r_bar) + "," +
                          fmt_double(report.min_lambda_risk) + "," +
                          fmt_double(report.oracle_ratio) + "," + fmt_double(report.slack) +
                          "," + fmt_double(constants.psi));
    }
    const std::string summary_file = config.output_dir + "/oracle_summary.csv";
    write_lines(summary_file, summary);
    write_provenance(summary_file, config);
    files.push_back(summary_file);
    files.push_back(summary_file + ".meta");
    return files;
}

}  // namespace levyest
