#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "gmflou/errors.hpp"
#include "gmflou/levy_noise.hpp"
#include "gmflou/rng.hpp"

using namespace gmflou;

namespace {

struct Moments {
    double mean;
    double var;
    double var_se;
};

Moments moments(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    double m = 0.0;
    for (double v : x) m += v;
    m /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double c = (v - m) * (v - m);
        m2 += c;
        m4 += c * c;
    }
    m2 /= n;
    m4 /= n;
    return {m, m2, std::sqrt((m4 - m2 * m2) / n)};
}

}  // namespace

TEST_CASE("gamma increments have mean zero and variance a/b^2 per unit time") {
    const auto spec = LevySpec::compensated_gamma(1.0, 2.0);
    const std::size_t n = 1000000;
    const auto x = sample_increments(spec, SeedLineage{11, 0}, n, 1.0);
    const auto mo = moments(x);
    CHECK(std::fabs(mo.mean) <= 4.0 * std::sqrt(0.25 / n));
    CHECK(std::fabs(mo.var - 0.25) <= 4.0 * mo.var_se);
}

TEST_CASE("small-step gamma increments keep variance dt * m2") {
    const auto spec = LevySpec::compensated_gamma(5.0, 15.0);
    const double dt = 1.0 / 128.0;
    const std::size_t n = 400000;
    const auto x = sample_increments(spec, SeedLineage{12, 3}, n, dt);
    const auto mo = moments(x);
    CHECK(std::fabs(mo.mean) <= 4.0 * std::sqrt(dt / 45.0 / n));
    CHECK(std::fabs(mo.var - dt / 45.0) <= 4.0 * mo.var_se);
}

TEST_CASE("compound Poisson increments are compensated") {
    for (const auto& jumps : {JumpDistribution{NormalJumps{0.5, 1.0}}, JumpDistribution{ExponentialJumps{2.0}}}) {
        const LevySpec spec(CompoundPoissonCompensated{3.0, jumps});
        const std::size_t n = 400000;
        const auto x = sample_increments(spec, SeedLineage{13, 1}, n, 0.5);
        const auto mo = moments(x);
        CHECK(std::fabs(mo.mean) <= 4.0 * std::sqrt(0.5 * spec.m2() / n));
        CHECK(std::fabs(mo.var - 0.5 * spec.m2()) <= 4.0 * mo.var_se);
    }
}

TEST_CASE("second moments") {
    CHECK(second_moment(LevySpec::compensated_gamma(1.0, 2.0)) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(second_moment(LevySpec::compensated_gamma(5.0, 15.0)) == doctest::Approx(1.0 / 45.0).epsilon(1e-15));
    CHECK(second_moment(LevySpec(CompoundPoissonCompensated{1.0, NormalJumps{0.0, 1.0}})) == doctest::Approx(1.0));
    CHECK(second_moment(LevySpec(CompoundPoissonCompensated{2.0, ExponentialJumps{4.0}})) ==
          doctest::Approx(2.0 * 2.0 / 16.0));
}

TEST_CASE("psi vanishes at zero and has psi''(0) = -m2") {
    const std::vector<LevySpec> specs{LevySpec::compensated_gamma(1.0, 2.0), LevySpec::compensated_gamma(5.0, 15.0),
                                      LevySpec(CompoundPoissonCompensated{1.5, NormalJumps{0.3, 0.7}}),
                                      LevySpec(CompoundPoissonCompensated{2.0, ExponentialJumps{3.0}})};
    for (const auto& spec : specs) {
        CHECK(std::abs(cumulant_psi(spec, 0.0)) == 0.0);
        const double step = 1e-4;
        const double second =
            (cumulant_psi(spec, step).real() - 2.0 * cumulant_psi(spec, 0.0).real() + cumulant_psi(spec, -step).real()) /
            (step * step);
        CHECK(std::fabs(second + spec.m2()) <= 1e-5 * spec.m2());
    }
}

TEST_CASE("psi matches the closed form away from zero") {
    using namespace std::complex_literals;
    const auto spec = LevySpec::compensated_gamma(5.0, 15.0);
    for (double u : {0.5, 3.0, 40.0, -7.0}) {
        const std::complex<double> direct = -5.0 * std::log(1.0 - 1i * (u / 15.0)) - 1i * (u * 5.0 / 15.0);
        CHECK(std::abs(cumulant_psi(spec, u) - direct) <= 1e-12 * (1.0 + std::abs(direct)));
    }
    const LevySpec cp(CompoundPoissonCompensated{2.0, NormalJumps{0.4, 0.9}});
    for (double u : {0.7, 2.0}) {
        const std::complex<double> phi = std::exp(1i * (u * 0.4) - 0.5 * 0.81 * u * u);
        const std::complex<double> direct = 2.0 * (phi - 1.0 - 1i * (u * 0.4));
        CHECK(std::abs(cumulant_psi(cp, u) - direct) <= 1e-12);
    }
}

TEST_CASE("exp(psi) matches the empirical characteristic function of unit increments") {
    const auto spec = LevySpec::compensated_gamma(5.0, 15.0);
    const std::size_t n = 1000000;
    const auto x = sample_increments(spec, SeedLineage{14, 0}, n, 1.0);
    for (double u : {0.5, 1.0, 2.0}) {
        double re = 0.0, im = 0.0, re2 = 0.0, im2 = 0.0;
        for (double v : x) {
            re += std::cos(u * v);
            im += std::sin(u * v);
            re2 += std::cos(u * v) * std::cos(u * v);
            im2 += std::sin(u * v) * std::sin(u * v);
        }
        re /= n;
        im /= n;
        const double se_re = std::sqrt((re2 / n - re * re) / n);
        const double se_im = std::sqrt((im2 / n - im * im) / n);
        const auto phi = std::exp(cumulant_psi(spec, u));
        CHECK(std::fabs(re - phi.real()) <= 4.0 * se_re);
        CHECK(std::fabs(im - phi.imag()) <= 4.0 * se_im);
    }
}

TEST_CASE("replay is bit-exact and streams differ") {
    const auto spec = LevySpec::compensated_gamma(1.0, 2.0);
    const auto a = sample_increments(spec, SeedLineage{5, 7}, 1000, 0.01);
    const auto b = sample_increments(spec, SeedLineage{5, 7}, 1000, 0.01);
    const auto c = sample_increments(spec, SeedLineage{5, 8}, 1000, 0.01);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(sample_increments(spec, SeedLineage{5, 7}, 1, 1.0) == sample_increments(spec, SeedLineage{5, 7}, 1, 1.0));
}

TEST_CASE("distinct streams are uncorrelated") {
    const auto spec = LevySpec::compensated_gamma(1.0, 1.0);
    const std::size_t n = 200000;
    const auto a = sample_increments(spec, SeedLineage{9, 0}, n, 1.0);
    const auto b = sample_increments(spec, SeedLineage{9, 1}, n, 1.0);
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) c += a[i] * b[i];
    c /= n;
    CHECK(std::fabs(c) <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(LevySpec::compensated_gamma(0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(LevySpec::compensated_gamma(1.0, -2.0), ParameterError);
    CHECK_THROWS_AS(LevySpec(CompoundPoissonCompensated{-1.0, NormalJumps{}}), ParameterError);
    CHECK_THROWS_AS(LevySpec(CompoundPoissonCompensated{1.0, NormalJumps{0.0, 0.0}}), ParameterError);
    CHECK_THROWS_AS(LevySpec(CompoundPoissonCompensated{1.0, ExponentialJumps{0.0}}), ParameterError);
    const auto spec = LevySpec::compensated_gamma(1.0, 2.0);
    CHECK_THROWS_AS(sample_increments(spec, SeedLineage{}, 0, 1.0), ParameterError);
    CHECK_THROWS_AS(sample_increments(spec, SeedLineage{}, 5, 0.0), ParameterError);
}

TEST_CASE("json round trip") {
    const std::vector<LevySpec> specs{LevySpec::compensated_gamma(5.0, 15.0),
                                      LevySpec(CompoundPoissonCompensated{2.0, NormalJumps{0.1, 0.2}}),
                                      LevySpec(CompoundPoissonCompensated{1.0, ExponentialJumps{3.0}})};
    for (const auto& spec : specs) {
        nlohmann::json j = spec;
        const auto back = levy_spec_from_json(j);
        CHECK(back.m2() == spec.m2());
        CHECK(nlohmann::json(back) == j);
    }
    CHECK_THROWS_AS(levy_spec_from_json({{"kind", "stable"}}), ParameterError);
}

TEST_CASE("gamma sampler moments for small and large shapes") {
    Sampler s(SeedLineage{21, 0});
    for (double shape : {0.01, 0.3, 1.0, 7.5}) {
        const std::size_t n = 200000;
        std::vector<double> x(n);
        for (auto& v : x) v = s.gamma(shape);
        const auto mo = moments(x);
        CHECK(std::fabs(mo.mean - shape) <= 4.0 * std::sqrt(shape / n));
        CHECK(std::fabs(mo.var - shape) <= 4.0 * mo.var_se);
    }
}

TEST_CASE("poisson sampler mean") {
    Sampler s(SeedLineage{22, 0});
    for (double mean : {0.05, 3.0, 40.0}) {
        const std::size_t n = 200000;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += static_cast<double>(s.poisson(mean));
        CHECK(std::fabs(acc / n - mean) <= 4.0 * std::sqrt(mean / n));
    }
}
