#include <cmath>
#include <vector>

#include "doctest.h"
#include "levyest/basis.hpp"
#include "levyest/errors.hpp"
#include "levyest/path.hpp"

using namespace levyest;

TEST_CASE("trig basis values at simple points") {
    const double rt2 = std::sqrt(2.0);
    CHECK(trig_eval(1, 0.37) == doctest::Approx(1.0));          // constant
    CHECK(trig_eval(2, 0.0) == doctest::Approx(rt2));           // sqrt2 cos(0)
    CHECK(trig_eval(3, 0.25) == doctest::Approx(rt2));          // sqrt2 sin(pi/2)
    CHECK(trig_eval(4, 0.25) == doctest::Approx(-rt2));         // sqrt2 cos(pi)
    CHECK(trig_eval(5, 0.125) == doctest::Approx(rt2));         // sqrt2 sin(pi/2), freq 2
    CHECK(trig_eval(3, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("trig basis harmonics: frequency is [j/2]") {
    const auto& b = *trig_basis();
    CHECK(b.harmonic(1).kind == Harmonic::Constant);
    CHECK(b.harmonic(2).kind == Harmonic::Cos);
    CHECK(b.harmonic(2).freq == 1);
    CHECK(b.harmonic(3).kind == Harmonic::Sin);
    CHECK(b.harmonic(3).freq == 1);
    CHECK(b.harmonic(60).freq == 30);
    CHECK(b.harmonic(61).freq == 30);
    CHECK(b.phi_star() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("sin family frequencies l_j = [sqrt(j)] j") {
    // oracle: hand evaluation of [sqrt(j)]*j for j = 1..10
    const long expected[] = {1, 2, 3, 8, 10, 12, 14, 16, 27, 30};
    for (long j = 1; j <= 10; ++j) {
        CHECK(SinFamilyBasis::frequency(j) == expected[j - 1]);
        CHECK(sin_family_basis()->harmonic(j).freq == expected[j - 1]);
    }
    // the component functions coincide with odd trig indices 2 l_j + 1
    const auto& fam = *sin_family_basis();
    for (long j = 1; j <= 10; ++j)
        for (double t : {0.13, 0.5, 0.77})
            CHECK(fam.eval(j, t) == doctest::Approx(trig_eval(2 * expected[j - 1] + 1, t)));
}

TEST_CASE("discrete orthonormality: Gram matrix of the trig basis is identity") {
    const long p = 1000;
    const auto& b = *trig_basis();
    for (long j = 1; j <= 12; ++j) {
        for (long k = j; k <= 12; ++k) {
            double g = 0.0;
            for (long i = 0; i < p; ++i) {
                const double t = static_cast<double>(i) / p;
                g += b.eval(j, t) * b.eval(k, t);
            }
            g /= static_cast<double>(p);
            CHECK(g == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("projection recovers coefficients of the ten-component signal") {
    const auto signal = SignalSpec::multipath_ten();
    const long p = 4096;
    std::vector<double> samples(p + 1);
    for (long i = 0; i <= p; ++i)
        samples[i] = signal.value(static_cast<double>(i) / p);

    // component 4 has coefficient 4/5 and lives at trig index 2*8+1 = 17
    CHECK(project(samples, *trig_basis(), 17, p) == doctest::Approx(0.8).epsilon(1e-6));
    CHECK(project(samples, *sin_family_basis(), 4, p) == doctest::Approx(0.8).epsilon(1e-6));
    // absent component
    CHECK(project(samples, *trig_basis(), 2, p) == doctest::Approx(0.0).epsilon(1e-6));

    std::vector<double> wrong(p);  // missing the endpoint sample
    CHECK_THROWS_AS(project(wrong, *trig_basis(), 1, p), GridMismatch);
}

TEST_CASE("Sobolev ellipsoid coefficients") {
    // oracle: a_j = sum_{i=0}^k (2 pi [j/2])^{2i}, hand-evaluated
    CHECK(sobolev_coeff(1, 1) == doctest::Approx(1.0));  // frequency 0, 0^0 = 1
    const double w = 2.0 * M_PI;
    CHECK(sobolev_coeff(2, 1) == doctest::Approx(1.0 + w * w));
    CHECK(sobolev_coeff(3, 2) == doctest::Approx(1.0 + w * w + std::pow(w, 4)));
    CHECK(sobolev_coeff(5, 1) == doctest::Approx(1.0 + 4.0 * w * w));  // frequency 2

    const std::vector<double> theta = {0.0, 0.3, 0.4};
    const double want = sobolev_coeff(2, 1) * 0.09 + sobolev_coeff(3, 1) * 0.16;
    CHECK(sobolev_radius(theta, 1) == doctest::Approx(want));
}
