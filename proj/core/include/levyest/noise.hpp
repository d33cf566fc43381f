#pragma once

#include <optional>
#include <string>

namespace levyest {

/// Parametric jump-size distribution of the compound Poisson component.
/// All laws are centered; the normalization intensity * E[Y^2] = 1 makes
/// the jump measure satisfy Pi(x^2) = 1.
struct JumpLaw {
    enum class Dist { TwoPoint, Gaussian, Laplace };

    Dist dist = Dist::TwoPoint;
    double intensity = 1.0;   // events per unit time, > 0
    double param = 1.0;       // +-c for TwoPoint, std for Gaussian, scale for Laplace
    double prob_plus = 0.5;   // TwoPoint only: P(Y = +c)

    double mean() const;                       // E[Y]
    double second_moment() const;              // E[Y^2]
    double fourth_moment() const;              // E[Y^4]
    double truncated_second_moment(double a) const;  // E[Y^2 1{|Y| <= a}]

    /// Pi(x^m) = intensity * E[Y^m] of the implied Levy measure.
    double pi_x2() const { return intensity * second_moment(); }
    double pi_x4() const { return intensity * fourth_moment(); }

    static JumpLaw two_point(double c, double intensity = 1.0, double prob_plus = 0.5);
    static JumpLaw gaussian(double stddev, double intensity);
    static JumpLaw laplace(double scale, double intensity);

    std::string describe() const;
};

/// Levy noise xi_t = rho1 w_t + rho2 z_t with z a compensated compound
/// Poisson process. kappa_q = rho1^2 + rho2^2 must stay within the family
/// bound sigma_star.
struct NoiseModel {
    double rho1 = 1.0;
    double rho2 = 0.0;
    std::optional<JumpLaw> jump_law;
    double kappa_q = 1.0;      // rho1^2 + rho2^2
    double sigma_star = 1.0;   // family bound

    bool has_jumps() const { return rho2 > 0.0; }
};

/// Validates and assembles a NoiseModel.
/// Throws NormalizationError if intensity * E[Y^2] != 1 (tol 1e-12),
/// FamilyBoundError if rho1^2 + rho2^2 > sigma_star,
/// DegenerateError if rho2 > 0 without a jump law (or both rhos are zero).
NoiseModel make_noise_model(double rho1, double rho2,
                            std::optional<JumpLaw> jump_law,
                            double sigma_star = 1.0);

struct NoiseVariances {
    double kappa;        // rho1^2 + rho2^2
    double kappa_check;  // rho1^2 + rho2^2 * Pi(x^2 1{|x| <= a_tilde})
};

/// Variance of the raw and of the jump-truncated noise. The truncation
/// threshold on jump sizes of xi is a_tilde = a_bar / (rho2 * eps);
/// without jumps both variances coincide.
NoiseVariances noise_variances(const NoiseModel& noise, double epsilon, double a_bar);

}  // namespace levyest
