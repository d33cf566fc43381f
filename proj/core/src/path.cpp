#include "levyest/path.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "levyest/csv.hpp"
#include "levyest/errors.hpp"
#include "levyest/rng.hpp"

namespace levyest {

SignalSpec::SignalSpec(std::shared_ptr<const Basis> basis, std::vector<SignalTerm> terms)
    : basis_(std::move(basis)), terms_(std::move(terms)) {
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].index < 1)
            throw DomainError("SignalSpec: basis indices must be >= 1");
        for (std::size_t k = i + 1; k < terms_.size(); ++k)
            if (terms_[i].index == terms_[k].index)
                throw DomainError("SignalSpec: duplicate basis index " +
                                  std::to_string(terms_[i].index));
    }
}

double SignalSpec::value(double t) const {
    double acc = 0.0;
    for (const auto& term : terms_) acc += term.coefficient * basis_->eval(term.index, t);
    return acc;
}

double SignalSpec::l2_norm_sq() const {
    double acc = 0.0;
    for (const auto& term : terms_) acc += term.coefficient * term.coefficient;
    return acc;
}

double SignalSpec::coefficient(long j) const {
    for (const auto& term : terms_)
        if (term.index == j) return term.coefficient;
    return 0.0;
}

long SignalSpec::max_index() const {
    long m = 0;
    for (const auto& term : terms_) m = std::max(m, term.index);
    return m;
}

SignalSpec SignalSpec::multipath_ten() {
    std::vector<SignalTerm> terms;
    for (long j = 1; j <= 10; ++j)
        terms.push_back({j, static_cast<double>(j) / static_cast<double>(j + 1)});
    return SignalSpec(sin_family_basis(), std::move(terms));
}

std::vector<double> ObservationPath::increments() const {
    std::vector<double> inc(p);
    for (long i = 1; i <= p; ++i) inc[i - 1] = values[i] - values[i - 1];
    return inc;
}

namespace {

double sample_jump(const JumpLaw& law, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    switch (law.dist) {
        case JumpLaw::Dist::TwoPoint:
            return unif(rng) < law.prob_plus ? law.param : -law.param;
        case JumpLaw::Dist::Gaussian: {
            std::normal_distribution<double> n(0.0, law.param);
            return n(rng);
        }
        case JumpLaw::Dist::Laplace: {
            const double u = unif(rng) - 0.5;
            return -law.param * std::copysign(1.0, u) * std::log1p(-2.0 * std::abs(u));
        }
    }
    return 0.0;
}

}  // namespace

ObservationPath simulate_path(const SignalSpec& signal, const NoiseModel& noise,
                              double epsilon, long p, std::uint64_t seed) {
    if (epsilon <= 0.0) throw DomainError("simulate_path: epsilon must be positive");
    if (p < 100) throw DomainError("simulate_path: need p >= 100");

    ObservationPath path;
    path.p = p;
    path.epsilon = epsilon;
    path.seed = seed;
    path.noise = noise;
    path.values.assign(p + 1, 0.0);

    const double h = 1.0 / static_cast<double>(p);

    // Drift: cumulative trapezoid of S.
    {
        double prev = signal.value(0.0);
        double acc = 0.0;
        for (long i = 1; i <= p; ++i) {
            const double cur = signal.value(static_cast<double>(i) * h);
            acc += 0.5 * (prev + cur) * h;
            path.values[i] = acc;
            prev = cur;
        }
    }

    auto rng = make_rng(seed);

    if (noise.rho1 > 0.0) {
        std::normal_distribution<double> n(0.0, std::sqrt(h));
        const double amp = epsilon * noise.rho1;
        double w = 0.0;
        for (long i = 1; i <= p; ++i) {
            w += n(rng);
            path.values[i] += amp * w;
        }
    }

    if (noise.rho2 > 0.0) {
        if (!noise.jump_law)
            throw DegenerateError("simulate_path: rho2 > 0 without a jump law");
        const JumpLaw& law = *noise.jump_law;
        const double amp = epsilon * noise.rho2;
        std::exponential_distribution<double> exp_dist(law.intensity);

        std::vector<double> jump_in_cell(p + 1, 0.0);
        double t = exp_dist(rng);
        while (t <= 1.0) {
            const double y = sample_jump(law, rng);
            const long cell = std::min<long>(p, static_cast<long>(std::ceil(t * p)));
            jump_in_cell[cell] += amp * y;
            path.jumps.push_back({t, amp * y});
            t += exp_dist(rng);
        }
        // Compensator of the jump integral: intensity * E[Y] * t.
        const double drift = amp * law.intensity * law.mean();
        double acc = 0.0;
        for (long i = 1; i <= p; ++i) {
            acc += jump_in_cell[i];
            path.values[i] += acc - drift * static_cast<double>(i) * h;
        }
    }

    return path;
}

void write_path_csv(const ObservationPath& path, const std::string& file) {
    std::vector<std::string> lines;
    lines.reserve(path.p + 2);
    lines.push_back("t,y");
    for (long i = 0; i <= path.p; ++i)
        lines.push_back(fmt_double(path.time(i)) + "," + fmt_double(path.values[i]));
    write_lines(file, lines);

    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("epsilon", fmt_double(path.epsilon));
    kv.emplace_back("p", std::to_string(path.p));
    kv.emplace_back("seed", std::to_string(path.seed));
    kv.emplace_back("rho1", fmt_double(path.noise.rho1));
    kv.emplace_back("rho2", fmt_double(path.noise.rho2));
    kv.emplace_back("sigma_star", fmt_double(path.noise.sigma_star));
    if (path.noise.jump_law) {
        const auto& law = *path.noise.jump_law;
        const char* name = law.dist == JumpLaw::Dist::TwoPoint ? "two_point"
                         : law.dist == JumpLaw::Dist::Gaussian ? "gaussian"
                                                               : "laplace";
        kv.emplace_back("jump_dist", name);
        kv.emplace_back("jump_param", fmt_double(law.param));
        kv.emplace_back("jump_intensity", fmt_double(law.intensity));
        kv.emplace_back("jump_prob_plus", fmt_double(law.prob_plus));
    }
    write_kv(file + ".meta", kv);
}

ObservationPath read_path_csv(const std::string& file) {
    const auto lines = read_lines(file);
    if (lines.empty() || lines[0] != "t,y")
        throw IOError("path CSV missing 't,y' header: " + file);

    ObservationPath path;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = split_csv_row(lines[i]);
        if (fields.size() != 2) throw IOError("bad path CSV row: " + lines[i]);
        path.values.push_back(std::stod(fields[1]));
    }
    if (path.values.size() < 2) throw IOError("path CSV has no data rows: " + file);
    path.p = static_cast<long>(path.values.size()) - 1;

    const auto kv = read_kv(file + ".meta");
    auto need = [&](const std::string& key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw IOError("path metadata missing key: " + key);
        return it->second;
    };
    path.epsilon = std::stod(need("epsilon"));
    if (std::stol(need("p")) != path.p)
        throw GridMismatch("path metadata p does not match CSV row count");
    path.seed = std::stoull(need("seed"));

    const double rho1 = std::stod(need("rho1"));
    const double rho2 = std::stod(need("rho2"));
    std::optional<JumpLaw> law;
    if (kv.count("jump_dist")) {
        JumpLaw l;
        const std::string d = kv.at("jump_dist");
        l.dist = d == "two_point" ? JumpLaw::Dist::TwoPoint
               : d == "gaussian"  ? JumpLaw::Dist::Gaussian
                                  : JumpLaw::Dist::Laplace;
        l.param = std::stod(kv.at("jump_param"));
        l.intensity = std::stod(kv.at("jump_intensity"));
        l.prob_plus = std::stod(kv.at("jump_prob_plus"));
        law = l;
    }
    path.noise = make_noise_model(rho1, rho2, law, std::stod(need("sigma_star")));
    return path;
}

}  // namespace levyest
