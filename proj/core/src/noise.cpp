#include "levyest/noise.hpp"

#include <cmath>
#include <sstream>

#include "levyest/errors.hpp"

namespace levyest {

namespace {

double std_normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double std_normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

}  // namespace

double JumpLaw::mean() const {
    switch (dist) {
        case Dist::TwoPoint: return param * (2.0 * prob_plus - 1.0);
        case Dist::Gaussian:
        case Dist::Laplace:  return 0.0;
    }
    return 0.0;
}

double JumpLaw::second_moment() const {
    switch (dist) {
        case Dist::TwoPoint: return param * param;
        case Dist::Gaussian: return param * param;
        case Dist::Laplace:  return 2.0 * param * param;
    }
    return 0.0;
}

double JumpLaw::fourth_moment() const {
    const double p2 = param * param;
    switch (dist) {
        case Dist::TwoPoint: return p2 * p2;
        case Dist::Gaussian: return 3.0 * p2 * p2;
        case Dist::Laplace:  return 24.0 * p2 * p2;
    }
    return 0.0;
}

double JumpLaw::truncated_second_moment(double a) const {
    if (a <= 0.0) return 0.0;
    switch (dist) {
        case Dist::TwoPoint:
            return (param <= a) ? param * param : 0.0;
        case Dist::Gaussian: {
            // E[Y^2 1{|Y| <= a}] for N(0, sigma^2)
            const double z = a / param;
            return param * param * ((2.0 * std_normal_cdf(z) - 1.0) - 2.0 * z * std_normal_pdf(z));
        }
        case Dist::Laplace: {
            // 2 int_0^a x^2 (1/2b) e^{-x/b} dx
            const double b = param;
            return 2.0 * b * b - std::exp(-a / b) * (a * a + 2.0 * a * b + 2.0 * b * b);
        }
    }
    return 0.0;
}

JumpLaw JumpLaw::two_point(double c, double intensity, double prob_plus) {
    return JumpLaw{Dist::TwoPoint, intensity, c, prob_plus};
}

JumpLaw JumpLaw::gaussian(double stddev, double intensity) {
    return JumpLaw{Dist::Gaussian, intensity, stddev, 0.5};
}

JumpLaw JumpLaw::laplace(double scale, double intensity) {
    return JumpLaw{Dist::Laplace, intensity, scale, 0.5};
}

std::string JumpLaw::describe() const {
    std::ostringstream os;
    switch (dist) {
        case Dist::TwoPoint: os << "two_point"; break;
        case Dist::Gaussian: os << "gaussian"; break;
        case Dist::Laplace:  os << "laplace"; break;
    }
    os << "(param=" << param << ",intensity=" << intensity << ")";
    return os.str();
}

NoiseModel make_noise_model(double rho1, double rho2,
                            std::optional<JumpLaw> jump_law,
                            double sigma_star) {
    if (rho1 < 0.0 || rho2 < 0.0)
        throw DomainError("make_noise_model: amplitudes must be nonnegative");
    if (rho1 == 0.0 && rho2 == 0.0)
        throw DegenerateError("make_noise_model: rho1 and rho2 both zero");
    if (rho2 > 0.0) {
        if (!jump_law)
            throw DegenerateError("make_noise_model: rho2 > 0 requires a jump law");
        if (jump_law->intensity <= 0.0)
            throw DomainError("make_noise_model: jump intensity must be positive");
        const double pi2 = jump_law->pi_x2();
        if (std::abs(pi2 - 1.0) > 1e-12)
            throw NormalizationError(
                "make_noise_model: intensity * E[Y^2] = " + std::to_string(pi2) +
                ", expected 1");
    }
    NoiseModel m;
    m.rho1 = rho1;
    m.rho2 = rho2;
    m.jump_law = rho2 > 0.0 ? jump_law : std::nullopt;
    m.kappa_q = rho1 * rho1 + rho2 * rho2;
    m.sigma_star = sigma_star;
    if (m.kappa_q > sigma_star)
        throw FamilyBoundError("make_noise_model: kappa = " + std::to_string(m.kappa_q) +
                               " exceeds sigma_star = " + std::to_string(sigma_star));
    return m;
}

NoiseVariances noise_variances(const NoiseModel& noise, double epsilon, double a_bar) {
    if (epsilon <= 0.0 || a_bar <= 0.0)
        throw DomainError("noise_variances: epsilon and a_bar must be positive");
    const double kappa = noise.rho1 * noise.rho1 + noise.rho2 * noise.rho2;
    if (noise.rho2 == 0.0) return {kappa, kappa};
    if (!noise.jump_law)
        throw DegenerateError("noise_variances: rho2 > 0 without a jump law");
    const double a_tilde = a_bar / (noise.rho2 * epsilon);
    const double pi_h2 = noise.jump_law->intensity *
                         noise.jump_law->truncated_second_moment(a_tilde);
    return {kappa, noise.rho1 * noise.rho1 + noise.rho2 * noise.rho2 * pi_h2};
}

}  // namespace levyest
