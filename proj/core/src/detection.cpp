#include "levyest/detection.hpp"

#include <cmath>
#include <map>

#include "levyest/csv.hpp"
#include "levyest/errors.hpp"

namespace levyest {

long DetectionConfig::default_iota(double epsilon) {
    return std::max<long>(1, static_cast<long>(std::floor(std::log(1.0 / (epsilon * epsilon)))));
}

double DetectionConfig::default_c_star(double epsilon) {
    return epsilon * std::sqrt(std::abs(std::log(epsilon)));
}

double projection_cost(long d, std::span<const double> theta_hat, double kappa_hat,
                       double epsilon, double delta) {
    if (d < 1 || d > static_cast<long>(theta_hat.size()))
        throw RangeError("projection_cost: d out of range");
    const double eps2k = epsilon * epsilon * kappa_hat;
    double sum_sq = 0.0;
    for (long j = 0; j < d; ++j) sum_sq += theta_hat[j] * theta_hat[j];
    // lambda_d is 0/1, so the quadratic and cross data terms collapse:
    // sum lam^2 th^2 - 2 sum lam (th^2 - eps2k) = -sum_sq + 2 d eps2k,
    // and |lambda_d|^2 = d.
    return -sum_sq + 2.0 * static_cast<double>(d) * eps2k +
           delta * eps2k * static_cast<double>(d);
}

long detect_count_lse(std::span<const double> theta_hat, double kappa_hat,
                      double epsilon, double delta, long iota) {
    if (iota < 1 || iota > static_cast<long>(theta_hat.size()))
        throw RangeError("detect_count_lse: iota out of range");
    long best = 1;
    double best_cost = projection_cost(1, theta_hat, kappa_hat, epsilon, delta);
    for (long d = 2; d <= iota; ++d) {
        const double c = projection_cost(d, theta_hat, kappa_hat, epsilon, delta);
        if (c < best_cost) {
            best = d;
            best_cost = c;
        }
    }
    return best;
}

long detect_count_shrinkage(std::span<const double> theta_hat, double c_star) {
    const long n = static_cast<long>(theta_hat.size());
    for (long j = 1; j <= n; ++j)
        if (std::abs(theta_hat[j - 1]) <= c_star) return j;
    return n + 1;
}

void write_detection_csv(const std::vector<DetectionRow>& rows, const std::string& file) {
    std::vector<std::string> lines;
    lines.reserve(rows.size() + 1);
    lines.push_back("epsilon,replication,q_hat_1,q_hat_2");
    for (const auto& r : rows)
        lines.push_back(fmt_double(r.epsilon) + "," + std::to_string(r.replication) + "," +
                        std::to_string(r.q_hat_1) + "," + std::to_string(r.q_hat_2));
    write_lines(file, lines);
}

long modal_value(std::span<const long> values) {
    if (values.empty()) throw DomainError("modal_value: empty input");
    std::map<long, long> counts;
    for (long v : values) ++counts[v];
    long best = values[0], best_count = 0;
    for (const auto& [v, c] : counts) {
        if (c > best_count) {
            best = v;
            best_count = c;
        }
    }
    return best;
}

}  // namespace levyest
