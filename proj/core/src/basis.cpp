#include "levyest/basis.hpp"

#include <cassert>

#include "levyest/errors.hpp"

namespace levyest {

double trig_eval(long j, double t) {
    assert(j >= 1);
    if (j == 1) return 1.0;
    const double k = static_cast<double>(j / 2);
    const double arg = 2.0 * M_PI * k * t;
    return std::sqrt(2.0) * ((j % 2 == 0) ? std::cos(arg) : std::sin(arg));
}

Harmonic TrigBasis::harmonic(long j) const {
    if (j == 1) return {Harmonic::Constant, 0};
    return {(j % 2 == 0) ? Harmonic::Cos : Harmonic::Sin, j / 2};
}

std::shared_ptr<const Basis> trig_basis() {
    static const auto b = std::make_shared<const TrigBasis>();
    return b;
}

std::shared_ptr<const Basis> sin_family_basis() {
    static const auto b = std::make_shared<const SinFamilyBasis>();
    return b;
}

double project(std::span<const double> f, const Basis& basis, long j, long p) {
    if (static_cast<long>(f.size()) != p + 1)
        throw GridMismatch("project: sample count " + std::to_string(f.size()) +
                           " does not match grid p=" + std::to_string(p));
    // Trapezoid rule on the uniform grid; spectrally accurate for the
    // periodic integrands used here.
    double acc = 0.5 * (f[0] * basis.eval(j, 0.0) + f[p] * basis.eval(j, 1.0));
    for (long i = 1; i < p; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(p);
        acc += f[i] * basis.eval(j, t);
    }
    return acc / static_cast<double>(p);
}

double sobolev_coeff(long j, int k) {
    const double base = 2.0 * M_PI * static_cast<double>(j / 2);
    double acc = 1.0;  // i = 0 term, with 0^0 = 1
    double pw = 1.0;
    for (int i = 1; i <= k; ++i) {
        pw *= base * base;
        acc += pw;
    }
    return acc;
}

double sobolev_radius(std::span<const double> theta, int k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i)
        acc += sobolev_coeff(static_cast<long>(i) + 1, k) * theta[i] * theta[i];
    return acc;
}

}  // namespace levyest
