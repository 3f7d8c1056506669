#include <doctest.h>

#include <cmath>
#include <complex>
#include <memory>
#include <vector>

#include "gmflou/errors.hpp"
#include "gmflou/gmflou.hpp"
#include "gmflou/numerics.hpp"

using namespace gmflou;

namespace {

EnsembleSetup setup_for(int n, double horizon, std::size_t replicas, std::uint64_t seed = 1) {
    EnsembleSetup s;
    s.grid = SampleGrid{n, horizon, 0};
    s.replicas = replicas;
    s.root_seed = seed;
    return s;
}

double m2_default() { return GmflouParams{}.spec.m2(); }

}  // namespace

TEST_CASE("kernel_g") {
    CHECK(kernel_g(1.0, 0.12, 0.0) == 1.0);
    CHECK(kernel_g(1.0, 0.12, 1.0) == doctest::Approx(std::pow(2.0, -0.88)).epsilon(1e-15));
    double prev = 2.0;
    for (double t : {0.0, 0.1, 1.0, 10.0, 1e4}) {
        CHECK(kernel_g(2.0, 0.3, t) < prev);
        prev = kernel_g(2.0, 0.3, t);
    }
}

TEST_CASE("variance_Z closed form") {
    const double expected = 2.0 / std::sqrt(2.0 * M_PI) * beta_function(0.4, 0.5) / 0.3;
    CHECK(variance_Z(1.0, 0.1, 0.25, 1.0) == doctest::Approx(expected).epsilon(1e-13));
    CHECK(std::fabs(variance_Z(1.0, 0.1, 0.25, 1.0) - 9.784) <= 1e-3);
    CHECK(variance_Z(2.0, 0.12, 0.2, 1.0) ==
          doctest::Approx(std::pow(2.0, 1.4) * variance_Z(1.0, 0.12, 0.2, 1.0)).epsilon(1e-13));
    double prev = 0.0;
    for (double h : {0.1, 0.2, 0.25, 0.29, 0.299, 0.2999}) {
        const double v = variance_Z(1.0, h, 0.2, 1.0);
        CHECK(v > prev);
        prev = v;
    }
    CHECK(prev > 1e3);
    CHECK_THROWS_AS(variance_Z(1.0, 0.3, 0.2, 1.0), DomainError);
    CHECK_THROWS_AS(variance_Z(1.0, 0.4, 0.2, 1.0), DomainError);
}

TEST_CASE("variance_Z agrees with the double-integral quadrature") {
    struct Triple {
        double alpha, h, d;
    };
    for (auto [alpha, h, d] : {Triple{1.0, 0.12, 0.2}, Triple{1.0, 0.1, 0.25}, Triple{2.5, 0.05, 0.3}}) {
        const double closed = variance_Z(alpha, h, d, 1.0);
        CHECK(std::fabs(variance_Z_quadrature(alpha, h, d, 1.0) / closed - 1.0) <= 1e-3);
    }
}

TEST_CASE("transferred kernel satisfies the isometry") {
    const GmflouParams p{0.2, 0.12, 1.0, LevySpec::compensated_gamma(1.0, 1.0)};
    CHECK(transferred_kernel(0.0, p) == 0.0);
    CHECK(transferred_kernel(-1.0, p) == 0.0);
    // K(x) ~ x^d / Gamma(d + 1) near 0
    const double x = 1e-6;
    CHECK(transferred_kernel(x, p) / (std::pow(x, 0.2) / std::tgamma(1.2)) == doctest::Approx(1.0).epsilon(1e-4));
    quad::QuadratureControl ctrl;
    ctrl.rel_tol = 1e-7;
    auto sq = [&](double u) {
        const double k = transferred_kernel(u, p);
        return k * k;
    };
    const double head = quad::integrate_power_substitution(sq, 0.0, 1.0, 2.0, ctrl);
    const double tail = quad::integrate_half_line(sq, 1.0, 1.0, ctrl, 2.0 * (p.h + p.d) - 2.0);
    CHECK((head + tail) / variance_Z(1.0, 0.12, 0.2, 1.0) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("covariance_Z and the tail exponent") {
    const GmflouParams p{0.2, 0.12, 1.0, LevySpec::compensated_gamma(1.0, 1.0)};
    CHECK(tail_exponent(0.12, 0.2) == doctest::Approx(-0.36).epsilon(1e-14));
    CHECK(covariance_Z(1e-7, p) / variance_Z(1.0, 0.12, 0.2, 1.0) == doctest::Approx(1.0).epsilon(1e-3));
    std::vector<double> lags{8.0, 16.0, 32.0, 64.0};
    std::vector<double> cov;
    double prev = 1e300;
    for (double t : lags) {
        cov.push_back(covariance_Z(t, p));
        CHECK(cov.back() > 0.0);
        CHECK(cov.back() < prev);
        prev = cov.back();
    }
    // alpha = 1: the finite-lag slope is still far from its limit
    CHECK(fit_tail_exponent(lags, cov).slope == doctest::Approx(-0.170).epsilon(0.02));

    GmflouParams fast = p;
    fast.alpha = 1e-5;
    std::vector<double> cov_fast;
    for (double t : lags) cov_fast.push_back(covariance_Z(t, fast));
    CHECK(std::fabs(fit_tail_exponent(lags, cov_fast).slope - tail_exponent(0.12, 0.2)) <= 0.05);

    // Cov(t; alpha) = alpha^{2d+1} Cov(t / alpha; 1)
    GmflouParams two = p;
    two.alpha = 2.0;
    CHECK(covariance_Z(6.0, two) / (std::pow(2.0, 1.4) * covariance_Z(3.0, p)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("characteristic function axioms") {
    const GmflouParams p{};
    const std::vector<double> t1{1.0};
    const std::vector<double> zero{0.0};
    CHECK(char_function_Z(zero, t1, p) == std::complex<double>(1.0, 0.0));
    for (double th : {0.25, 0.5, 2.0}) {
        const std::vector<double> plus{th}, minus{-th};
        const auto a = char_function_Z(plus, t1, p);
        const auto b = char_function_Z(minus, t1, p);
        CHECK(std::abs(a) <= 1.0);
        CHECK(std::abs(a - std::conj(b)) <= 1e-12);
    }
    const std::vector<double> two_t{0.5, 1.0}, two_th{0.3, -0.2};
    CHECK(std::abs(char_function_Z(two_th, two_t, p)) <= 1.0);
    CHECK_THROWS_AS(char_function_Z(two_th, t1, p), ParameterError);
}

TEST_CASE("characteristic function second-order term is the variance") {
    const GmflouParams p{};
    const std::vector<double> t1{1.0};
    const double th = 1e-2;
    const std::vector<double> theta{th};
    const auto phi = char_function_Z(theta, t1, p);
    const double var = -2.0 * std::log(std::abs(phi)) / (th * th);
    CHECK(var / variance_Z(p.alpha, p.h, p.d, p.spec.m2()) == doctest::Approx(1.0).epsilon(1e-3));
    // stationarity: the law of Z(t) does not depend on t
    const std::vector<double> t3{3.0}, th5{0.5};
    CHECK(std::abs(char_function_Z(th5, t3, p) - char_function_Z(th5, t1, p)) <= 1e-6);
}

TEST_CASE("literal prefactor changes the characteristic function") {
    const GmflouParams p{};
    const std::vector<double> t1{1.0}, th{0.5};
    const auto a = char_function_Z(th, t1, p);
    const auto b = char_function_Z(th, t1, p, CfNormalization::LiteralD);
    CHECK(std::abs(a - b) > 1e-3);
    CHECK(transferred_kernel(2.0, p, CfNormalization::LiteralD) / transferred_kernel(2.0, p) ==
          doctest::Approx(p.d * std::tgamma(p.d)).epsilon(1e-8));
}

TEST_CASE("scheme characteristic function tracks the analytic one") {
    const GmflouParams p{};
    auto lat = std::make_shared<const Lattice>(Lattice::build(SampleGrid{128, 1.0, 0}, SchemeSpec::extended(), p.d));
    FlpOperator op(lat, p.d);
    GammaMixedKernel g(p.alpha, p.h);
    const std::vector<double> t1{1.0};
    const auto f = compile_moving_average(op, g, "Z", t1);
    for (double th : {0.25, 0.5}) {
        std::vector<double> w(f.row(0).begin(), f.row(0).end());
        for (auto& v : w) v *= th;
        const std::vector<double> theta{th};
        const auto exact = scheme_char_function(w, lat->widths(), p.spec);
        CHECK(std::abs(exact - char_function_Z(theta, t1, p)) <= 1e-3);
    }
    const double scheme_var = scheme_covariance(f.row(0), f.row(0), lat->widths(), p.spec.m2());
    CHECK(scheme_var / variance_Z(p.alpha, p.h, p.d, p.spec.m2()) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("parameter validation") {
    GmflouParams p{};
    p.h = 0.35;
    try {
        p.validate();
        FAIL("expected ParameterError");
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("h + d must be < 1/2") != std::string::npos);
    }
    CHECK_THROWS_AS(simulate_Z(p, setup_for(8, 1.0, 40)), ParameterError);
    p.h = 0.12;
    p.alpha = 0.0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
}

TEST_CASE("simulated Z: variance, zero mean, stationarity") {
    const GmflouParams p{};
    const auto ens = simulate_Z(p, setup_for(128, 1.0, 2000));
    const double target = variance_Z(p.alpha, p.h, p.d, p.spec.m2());
    for (std::size_t k : {32u, 64u, 128u}) {
        CHECK(MomentReport::make("var", {}, ensemble_moment(ens, k, 2), target, 0.05).pass);
        const auto mean = ensemble_moment(ens, k, 1);
        CHECK(std::fabs(mean.value) <= 4.0 * mean.std_error);
    }
}

TEST_CASE("simulated Z autocovariance follows the quadrature") {
    const GmflouParams p{};
    const auto ens = simulate_Z(p, setup_for(4, 16.0, 2000, 3));
    const std::vector<std::size_t> lags{4, 16, 64};
    const auto ac = empirical_autocovariance(ens, 0, lags);
    double prev = 1e300;
    for (std::size_t i = 0; i < lags.size(); ++i) {
        const double target = covariance_Z(lags[i] / 4.0, p);
        CHECK(MomentReport::make("cov", {}, ac[i], target, 0.05).pass);
        CHECK(ac[i].value > 0.0);
        CHECK(ac[i].value < prev);
        prev = ac[i].value;
    }
}

TEST_CASE("Y: anchored, self-similar variance, stationary increments") {
    const GmflouParams p{};
    const auto ens = simulate_Y(p, setup_for(64, 2.0, 2000));
    for (std::size_t r = 0; r < ens.replicas; ++r) CHECK(ens.at(r, 0) == 0.0);
    const auto ratio = variance_ratio(ens.column(128), ens.column(64));
    const double target = std::pow(2.0, 2.0 * p.h + 2.0 * p.d + 1.0);
    CHECK(std::fabs(ratio.value - target) <= 4.0 * ratio.std_error);

    const auto y1 = ens.column(64);
    const auto y2 = ens.column(128);
    std::vector<double> inc(ens.replicas);
    for (std::size_t r = 0; r < ens.replicas; ++r) inc[r] = y2[r] - y1[r];
    const auto m_inc = sample_mean(inc), m_y = sample_mean(y1);
    CHECK(std::fabs(m_inc.value - m_y.value) <= 4.0 * std::hypot(m_inc.std_error, m_y.std_error));
    const auto v_inc = sample_variance(inc), v_y = sample_variance(y1);
    CHECK(std::fabs(v_inc.value - v_y.value) <= 4.0 * std::hypot(v_inc.std_error, v_y.std_error));
}

TEST_CASE("limit residuals") {
    const GmflouParams p{};
    const auto setup = setup_for(32, 1.0, 300);
    const std::vector<double> up{1e2, 1e3, 1e4};
    const auto inf = limit_residual_alpha_inf(up, 1.0, p, setup);
    CHECK(inf.monotone());
    for (std::size_t i = 0; i < up.size(); ++i) {
        CHECK(inf.residuals[i] >= 0.0);
        CHECK(std::fabs(inf.residuals[i] - inf.scheme_residuals[i]) <=
              4.0 * inf.std_errors[i] + 0.05 * inf.scheme_residuals[i]);
    }

    const std::vector<double> down{1.0, 0.1, 0.01};
    const auto zero = limit_residual_alpha_zero(down, 1.0, p, setup);
    CHECK(zero.monotone());
    const auto at_origin = limit_residual_alpha_zero(down, 0.0, p, setup);
    for (double r : at_origin.residuals) CHECK(r == 0.0);

    const std::vector<double> tiny{1e-6};
    const auto guarded = limit_residual_alpha_zero(tiny, 1.0, p, setup);
    CHECK(std::isfinite(guarded.residuals[0]));
    GmflouParams flat = p;
    flat.h = 1e-3;
    const std::vector<double> denormal{5e-324};
    CHECK_THROWS_AS(limit_residual_alpha_zero(denormal, 1.0, flat, setup), NumericError);
    CHECK_THROWS_AS(limit_residual_alpha_inf(up, 0.3, p, setup_for(2, 1.0, 50)), RangeError);
}

TEST_CASE("aggregation residual follows its exact scheme value") {
    const GmflouParams p{};
    const std::vector<std::size_t> ms{10, 100};
    const auto table = aggregation_residual(ms, 1.0, p, setup_for(32, 1.0, 500));
    REQUIRE(table.residuals.size() == 2);
    for (std::size_t i = 0; i < ms.size(); ++i) {
        CHECK(table.residuals[i] >= 0.0);
        CHECK(std::fabs(table.residuals[i] - table.scheme_residuals[i]) <=
              4.0 * table.std_errors[i] + 0.05 * table.scheme_residuals[i]);
    }
}
