#pragma once

#include <span>
#include <string>
#include <vector>

namespace levyest {

/// Parameters for the two signal-count detectors.
struct DetectionConfig {
    long iota = 1;        // candidate-count bound for the projection detector
    double delta = 0.1;   // penalty weight in the projection cost
    double c_star = 0.0;  // shrinkage threshold

    static long default_iota(double epsilon);     // [ln(1/eps^2)]
    static double default_c_star(double epsilon); // eps * sqrt(|ln eps|)
};

/// Cost of the pure projection weight lambda_d(j) = 1{j <= d}:
///   J(d) = -sum_{j<=d} theta_hat_j^2 + 2 d eps^2 kappa_hat
///        + delta eps^2 kappa_hat d.
/// Throws RangeError unless 1 <= d <= theta_hat.size().
double projection_cost(long d, std::span<const double> theta_hat, double kappa_hat,
                       double epsilon, double delta);

/// q_hat_1 = argmin_{1 <= d <= iota} J(d); ties go to the smallest d.
long detect_count_lse(std::span<const double> theta_hat, double kappa_hat,
                      double epsilon, double delta, long iota);

/// q_hat_2 = smallest j with |theta_hat_j| <= c_star, or n+1 if none.
long detect_count_shrinkage(std::span<const double> theta_hat, double c_star);

/// One detection replication for the CSV report below.
struct DetectionRow {
    double epsilon = 0.0;
    long replication = 0;
    long q_hat_1 = 0;
    long q_hat_2 = 0;
};

void write_detection_csv(const std::vector<DetectionRow>& rows, const std::string& file);

/// Most frequent value; ties go to the smallest.
long modal_value(std::span<const long> values);

}  // namespace levyest
