#include <cmath>
#include <vector>

#include "doctest.h"
#include "levyest/errors.hpp"
#include "levyest/risk.hpp"

using namespace levyest;

TEST_CASE("bound constants at the hand-checked Brownian point") {
    // oracle: hand evaluation with kappa = kappa_check = 1, iota = 1,
    // phi_star = sqrt2: U = 24, U1 = 24 + 6*4 = 48, Psi = 16 + 192 = 208
    const auto brown = make_noise_model(1.0, 0.0, std::nullopt);
    const auto c = oracle_constants(brown, 0.1, 0.01, 0.0, 1, std::sqrt(2.0));
    CHECK(c.u_q == doctest::Approx(24.0));
    CHECK(c.u_1q == doctest::Approx(48.0));
    CHECK(c.psi == doctest::Approx(208.0));
    // oracle: hand evaluation, Upsilon(0) = 4 (1 + 1 + 2 + sqrt 24)
    CHECK(c.upsilon_s == doctest::Approx(4.0 * (1.0 + 1.0 + 2.0 + std::sqrt(24.0))));
    CHECK(c.g1 == doctest::Approx(48.0 * (1.0 + 1.0 + 2.0 + std::sqrt(24.0))));
    CHECK(c.g2 == doctest::Approx(12.0 * std::sqrt(6.0)));
}

TEST_CASE("jump contribution to the fourth-moment constant") {
    const double r = 1.0 / std::sqrt(2.0);
    const auto mixed = make_noise_model(r, r, JumpLaw::two_point(1.0, 1.0));
    // large threshold keeps all jumps: kappa_check = 1
    const auto c = oracle_constants(mixed, 0.1, 10.0, 0.0, 1, std::sqrt(2.0));
    CHECK(c.kappa_check == doctest::Approx(1.0));
    // U = 24 kappa^2 + 6 rho2^4 Pi(x^4) = 24 + 6 * 0.25 * 1
    CHECK(c.u_q == doctest::Approx(24.0 + 1.5));

    // threshold below the jump size kills the truncated variance entirely
    const auto jumpy = make_noise_model(0.0, 1.0, JumpLaw::two_point(1.0, 1.0), 1.0);
    CHECK_THROWS_AS(oracle_constants(jumpy, 0.1, 0.1 * 0.5, 0.0, 1, std::sqrt(2.0)),
                    DegenerateError);
}

TEST_CASE("minimax scaling constant") {
    // oracle: hand evaluation of the k = 1, r = 1 closed form
    CHECK(pinsker_constant(1, 1.0) ==
          doctest::Approx(std::cbrt(3.0) * std::pow(2.0 * M_PI, -2.0 / 3.0)));
    // homogeneity: l(8 r) = 2 l(r) for k = 1
    CHECK(pinsker_constant(1, 8.0 * 0.37) == doctest::Approx(2.0 * pinsker_constant(1, 0.37)));
    // strictly decreasing toward the large-k limit at r = 1
    double prev = pinsker_constant(1, 1.0);
    for (int k = 2; k <= 10; ++k) {
        const double cur = pinsker_constant(k, 1.0);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK_THROWS_AS(pinsker_constant(0, 1.0), DomainError);
}

TEST_CASE("efficiency ratio fixed point and linearity") {
    const double eps = 0.1, r = 0.7;
    const int k = 1;
    const double upsilon = 1.0 / (eps * eps);
    const double fixed = pinsker_constant(k, r) * std::pow(upsilon, -2.0 / 3.0);
    CHECK(efficiency_ratio(fixed, eps, 1.0, k, r) == doctest::Approx(1.0));
    CHECK(efficiency_ratio(2.0 * fixed, eps, 1.0, k, r) == doctest::Approx(2.0));
}

TEST_CASE("single-replication empirical risk") {
    const auto s = SignalSpec::multipath_ten();
    const long p = 1000;
    std::vector<double> st(p), sh(p);
    for (long i = 0; i < p; ++i) st[i] = s.value(static_cast<double>(i) / p);

    sh = st;
    auto [r0, rel0] = empirical_risk(sh, st);
    CHECK(r0 == 0.0);
    CHECK(rel0 == 0.0);

    for (auto& x : sh) x += 0.25;  // constant offset c: risk c^2
    auto [rc, relc] = empirical_risk(sh, st);
    CHECK(rc == doctest::Approx(0.0625));
    double norm = 0.0;
    for (double x : st) norm += x * x;
    norm /= p;
    CHECK(relc == doctest::Approx(0.0625 / norm));

    std::fill(sh.begin(), sh.end(), 0.0);  // null estimator: relative risk 1
    CHECK(empirical_risk(sh, st).second == doctest::Approx(1.0));

    const std::vector<double> zeros(p, 0.0);
    CHECK_THROWS_AS(empirical_risk(zeros, zeros), ZeroSignal);
    CHECK_THROWS_AS(empirical_risk(std::vector<double>(10, 0.0), st), GridMismatch);
}

TEST_CASE("signal coefficients re-expressed in the estimation basis") {
    const auto s = SignalSpec::multipath_ten();
    // component j sits at trig index 2 l_j + 1
    const auto theta = true_coefficients(s, *trig_basis(), 100);
    const long l[] = {1, 2, 3, 8, 10, 12, 14, 16, 27, 30};
    for (long j = 1; j <= 10; ++j)
        CHECK(theta[2 * l[j - 1] + 1 - 1] ==
              doctest::Approx(static_cast<double>(j) / (j + 1)));
    long nonzero = 0;
    for (double v : theta) nonzero += v != 0.0;
    CHECK(nonzero == 10);

    // in its own family the coefficients come back verbatim
    const auto own = true_coefficients(s, *sin_family_basis(), 10);
    for (long j = 1; j <= 10; ++j)
        CHECK(own[j - 1] == doctest::Approx(static_cast<double>(j) / (j + 1)));
}

TEST_CASE("Monte Carlo risk is reproducible and thread-count independent") {
    const auto s = SignalSpec::multipath_ten();
    const auto brown = make_noise_model(1.0, 0.0, std::nullopt);
    PipelineConfig pc;
    pc.basis = sin_family_basis();
    pc.threads = 1;
    const auto a = monte_carlo_risk(s, brown, 0.2, 400, 16, pc, 5);
    pc.threads = 4;
    const auto b = monte_carlo_risk(s, brown, 0.2, 400, 16, pc, 5);
    CHECK(a.r_bar == b.r_bar);
    CHECK(a.per_lambda == b.per_lambda);
    CHECK(a.j_mean == b.j_mean);
    CHECK(a.r_bar >= 0.0);
    CHECK(a.r_bar_rel == doctest::Approx(a.r_bar / s.l2_norm_sq()));
    CHECK(a.min_lambda_risk <= a.r_bar + 3.0 * a.r_bar_se + 1e-12);

    CHECK_THROWS_AS(monte_carlo_risk(s, brown, 0.2, 400, 1, pc, 5), DomainError);
}

TEST_CASE("vanishing noise drives the risk to zero") {
    const auto s = SignalSpec::multipath_ten();
    const auto brown = make_noise_model(1.0, 0.0, std::nullopt);
    PipelineConfig pc;
    pc.basis = sin_family_basis();
    pc.per_lambda = false;
    // known variance: the residual-based estimate would sweep ~p/2 harmonics
    // on this fine grid for no benefit at vanishing noise
    pc.variance = PipelineConfig::Variance::Known;
    const auto rep = monte_carlo_risk(s, brown, 1e-10, 250000, 2, pc, 9);
    // what remains is the squared quadrature bias of the coefficient sums
    CHECK(rep.r_bar < 1e-12);
}

TEST_CASE("worst-case risk over a finite noise family") {
    // small signal so the risk is variance-dominated: the noise ordering
    // then shows through clearly (quarter-strength vs full, ~4x apart)
    const SignalSpec s(trig_basis(), {{2, 0.1}});
    PipelineConfig pc;
    pc.per_lambda = false;

    const auto quarter = make_noise_model(0.25, 0.0, std::nullopt);
    const auto full = make_noise_model(1.0, 0.0, std::nullopt);

    const auto single = robust_risk(s, {full}, 0.1, 1000, 8, pc, 3);
    const auto direct = monte_carlo_risk(s, full, 0.1, 1000, 8, pc, 3);
    CHECK(single.second[0].r_bar == direct.r_bar);
    CHECK(single.first == 0);

    const auto pair = robust_risk(s, {quarter, full}, 0.1, 1000, 24, pc, 3);
    CHECK(pair.first == 1);

    NoiseModel outside = full;
    outside.kappa_q = 2.0;  // force a family violation
    CHECK_THROWS_AS(robust_risk(s, {outside}, 0.1, 1000, 8, pc, 3), FamilyBoundError);
}
