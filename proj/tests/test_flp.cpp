#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "gmflou/errors.hpp"
#include "gmflou/flp.hpp"
#include "gmflou/functional.hpp"
#include "gmflou/kernels.hpp"
#include "gmflou/lattice.hpp"
#include "gmflou/rng.hpp"
#include "gmflou/stats.hpp"

using namespace gmflou;

namespace {

std::shared_ptr<const Lattice> make_lattice(int n, double horizon, SchemeSpec scheme, double d, long a_n = 0) {
    SampleGrid grid{n, horizon, a_n};
    return std::make_shared<const Lattice>(Lattice::build(grid, scheme, d));
}

std::vector<double> noise_vector(const Lattice& lat, std::uint64_t seed) {
    Sampler s(SeedLineage{seed, 0});
    std::vector<double> x(lat.cells());
    for (auto& v : x) v = s.standard_normal();
    return x;
}

}  // namespace

TEST_CASE("kernel_f values") {
    CHECK(kernel_f(0.25, 0.0, -3.0) == 0.0);
    CHECK(kernel_f(0.25, 1.0, 0.0) == doctest::Approx(1.0 / std::tgamma(1.25)).epsilon(1e-14));
    CHECK(kernel_f(0.25, 1.0, 0.0) == doctest::Approx(1.103262).epsilon(1e-6));
    CHECK(kernel_f(0.25, 1.0, 2.0) == 0.0);
    CHECK(kernel_f(0.3, 2.0, -1.0) ==
          doctest::Approx((std::pow(3.0, 0.3) - 1.0) / std::tgamma(1.3)).epsilon(1e-14));
}

TEST_CASE("vd_squared and cd_constant") {
    CHECK(std::fabs(vd_squared(0.25, 1.0) - 0.531923) <= 1e-6);
    CHECK(std::fabs(vd_squared(0.25, 0.25) - 0.132981) <= 1e-6);
    CHECK(std::fabs(cd_constant(0.25, 1.0) - 1.0 / std::sqrt(2.0 * std::numbers::pi)) <= 1e-10);
    CHECK(cd_constant(0.25, 3.0) == doctest::Approx(3.0 * cd_constant(0.25, 1.0)).epsilon(1e-15));
    const double near_pole = cd_constant(0.49, 1.0);
    CHECK(std::isfinite(near_pole));
    CHECK(near_pole > cd_constant(0.4, 1.0));
    CHECK_THROWS_AS(cd_constant(0.5, 1.0), DomainError);
    CHECK_THROWS_AS(cd_constant(0.7, 1.0), DomainError);
}

TEST_CASE("variance from the isometry equals twice the printed prefactor") {
    for (double d : {0.1, 0.25, 0.4}) {
        const double iso = cd_constant(d, 1.0) / (d * (2.0 * d + 1.0));
        CHECK(flp_covariance(d, 1.0, 1.0, 1.0) == doctest::Approx(iso).epsilon(1e-12));
        CHECK(flp_covariance(d, 1.0, 1.0, 1.0) == doctest::Approx(2.0 * vd_squared(d, 1.0)).epsilon(1e-14));
    }
}

TEST_CASE("flp_covariance examples") {
    CHECK(flp_covariance(0.25, 0.0, 0.7, 1.0) == 0.0);
    CHECK(std::fabs(flp_covariance(0.25, 1.0, 1.0, 1.0) - 1.063846) <= 1e-6);
    CHECK(std::fabs(flp_covariance(0.25, 1.0, 2.0, 1.0) - 1.504504) <= 1e-5);
    CHECK(flp_covariance(0.25, 0.5, 2.0, 1.0) == flp_covariance(0.25, 2.0, 0.5, 1.0));
}

TEST_CASE("increment covariance") {
    CHECK(std::fabs(increment_covariance_delta(0.25, 1, 1.0, 1.0) - 0.440656) <= 1e-5);
    const double d = 0.25;
    const double ratio = increment_covariance_delta(d, 1024, 1.0, 1.0) / increment_covariance_delta(d, 512, 1.0, 1.0);
    CHECK(std::fabs(ratio / std::pow(2.0, 2.0 * d - 1.0) - 1.0) <= 0.01);
    // agrees with second differences of the covariance
    const double h = 0.1;
    for (long n : {1L, 3L, 10L}) {
        const double s = n * h;
        const double direct = flp_covariance(d, s + h, h, 1.0) - flp_covariance(d, s + h, 0.0, 1.0) -
                              flp_covariance(d, s, h, 1.0) + flp_covariance(d, s, 0.0, 1.0);
        CHECK(increment_covariance_delta(d, n, h, 1.0) == doctest::Approx(direct).epsilon(1e-10));
        CHECK(increment_covariance_delta(d, n, h, 1.0) > 0.0);
    }
}

TEST_CASE("partial sums of the increment covariance grow like N^{2d}") {
    const double d = 0.25;
    std::vector<double> xs, ys;
    double sum = 0.0;
    long next = 16;
    for (long n = 1; n <= 4096; ++n) {
        sum += increment_covariance_delta(d, n, 1.0, 1.0);
        if (n == next) {
            xs.push_back(static_cast<double>(n));
            ys.push_back(sum);
            next *= 2;
        }
    }
    const auto fit = fit_tail_exponent(xs, ys);
    CHECK(std::fabs(fit.slope - 2.0 * d) <= 0.05);
}

TEST_CASE("truncation defaults") {
    SampleGrid g{16, 1.0, 0};
    CHECK(resolve_trunc_a_n(g, SchemeSpec::uniform(), 0.25) == 256);
    CHECK(resolve_trunc_a_n(g, SchemeSpec::extended(), 0.25) == 128);
    SchemeSpec opt = SchemeSpec::uniform();
    opt.truncation = TruncationRule::Optimal;
    CHECK(resolve_trunc_a_n(g, opt, 0.25) == static_cast<long>(std::ceil(std::pow(16.0, 1.75 / 0.75) - 1e-9)));
    g.trunc_a_n = 7;
    CHECK(resolve_trunc_a_n(g, SchemeSpec::uniform(), 0.25) == 7);
    CHECK_THROWS_AS(Lattice::build(SampleGrid{0, 1.0, 0}, SchemeSpec::uniform(), 0.25), ParameterError);
    CHECK_THROWS_AS(Lattice::build(SampleGrid{4, -1.0, 0}, SchemeSpec::uniform(), 0.25), ParameterError);
}

TEST_CASE("lattice layout") {
    const auto uniform = make_lattice(8, 1.0, SchemeSpec::uniform(), 0.25);
    CHECK(uniform->tail_cells() == 0);
    CHECK(uniform->left(0) == doctest::Approx(-8.0));
    CHECK(uniform->nodes()[uniform->grid_node(0)] == 0.0);
    CHECK(uniform->nodes()[uniform->grid_node(8)] == 1.0);
    CHECK(uniform->cells() == 64 + 9);

    const auto ext = make_lattice(8, 1.0, SchemeSpec::extended(), 0.25);
    CHECK(ext->tail_cells() > 0);
    CHECK(ext->left(0) == doctest::Approx(-1e12));
    for (std::size_t j = 2; j < ext->tail_cells(); ++j) CHECK(ext->width(j) <= ext->width(j - 1));
    for (std::size_t j = ext->tail_cells(); j < ext->cells(); ++j) CHECK(ext->width(j) == doctest::Approx(0.125));
    CHECK(ext->signature() != uniform->signature());
}

TEST_CASE("FFT pull-back equals the direct double loop") {
    for (auto scheme : {SchemeSpec::uniform(), SchemeSpec::extended()}) {
        const auto lat = make_lattice(32, 8.0, scheme, 0.3, 64);
        const FlpOperator op(lat, 0.3);
        const auto stage2 = noise_vector(*lat, 4);
        const auto fast = op.pull_back(stage2);
        const auto slow = op.pull_back_direct(stage2);
        REQUIRE(fast.size() == slow.size());
        double scale = 0.0;
        for (double v : slow) scale = std::max(scale, std::fabs(v));
        for (std::size_t j = 0; j < fast.size(); ++j) CHECK(std::fabs(fast[j] - slow[j]) <= 1e-10 * scale);
    }
}

TEST_CASE("value weights reproduce the cumulative increments") {
    for (auto scheme : {SchemeSpec::uniform(), SchemeSpec::extended()}) {
        const auto lat = make_lattice(16, 2.0, scheme, 0.2, 48);
        const FlpOperator op(lat, 0.2);
        const auto noise = noise_vector(*lat, 5);
        const auto nodes = op.node_values_direct(noise);
        for (std::size_t k : {0u, 1u, 7u, 32u}) {
            const double t = lat->grid().time(k);
            double v = 0.0;
            for (std::size_t j = 0; j < lat->cells(); ++j) v += op.value_weight(t, j) * noise[j];
            CHECK(v == doctest::Approx(nodes[lat->grid_node(k)]).epsilon(1e-9).scale(1.0));
        }
        CHECK(nodes[lat->grid_node(0)] == 0.0);
    }
}

TEST_CASE("left-point weights follow the textbook sum") {
    const double d = 0.3;
    const auto lat = make_lattice(4, 1.0, SchemeSpec::uniform(), d);
    const FlpOperator op(lat, d);
    const double t = 1.0;
    for (std::size_t j = 0; j < lat->cells(); ++j) {
        const double u = lat->left(j);
        double expected = 0.0;
        if (u < 0.0) expected = (std::pow(t - u, d) - std::pow(-u, d)) / std::tgamma(d + 1.0);
        else if (u < t) expected = std::pow(t - u, d) / std::tgamma(d + 1.0);
        CHECK(op.value_weight(t, j) == doctest::Approx(expected).epsilon(1e-12).scale(1e-12));
    }
}

TEST_CASE("extended scheme covariance is close to the closed form") {
    const double d = 0.25;
    const auto lat = make_lattice(128, 1.0, SchemeSpec::extended(), d);
    const FlpOperator op(lat, d);
    const std::vector<double> times{0.25, 0.5, 1.0};
    const auto f = compile_flp(op, "flp", times);
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = a; b < 3; ++b) {
            const double exact = scheme_covariance(f.row(a), f.row(b), lat->widths(), 1.0);
            CHECK(exact / flp_covariance(d, times[a], times[b], 1.0) == doctest::Approx(1.0).epsilon(2e-3));
        }
    }
}

TEST_CASE("simulate_flp: anchored, deterministic, matches covariance") {
    FlpParams params{0.25, LevySpec::compensated_gamma(1.0, 2.0)};
    EnsembleSetup setup;
    setup.grid = SampleGrid{128, 1.0, 0};
    setup.replicas = 2000;
    setup.root_seed = 1;
    const auto ens = simulate_flp(params, setup);
    for (std::size_t r = 0; r < ens.replicas; ++r) CHECK(ens.at(r, 0) == 0.0);
    const auto est = ensemble_moment(ens, 128, 2);
    const double target = flp_covariance(0.25, 1.0, 1.0, 0.25);
    const auto report = MomentReport::make("var", {}, est, target, 0.05);
    CHECK(report.pass);
    const auto mean = ensemble_moment(ens, 128, 1);
    CHECK(std::fabs(mean.value) <= 4.0 * mean.std_error);

    const auto again = simulate_flp(params, setup);
    CHECK(again.values == ens.values);
    setup.root_seed = 2;
    CHECK(simulate_flp(params, setup).values != ens.values);
}

TEST_CASE("fLp increments at lag n match delta") {
    const double d = 0.25;
    FlpParams params{d, LevySpec::compensated_gamma(1.0, 1.0)};
    EnsembleSetup setup;
    setup.grid = SampleGrid{4, 8.0, 0};
    setup.replicas = 4000;
    setup.root_seed = 3;
    const auto ens = simulate_flp(params, setup);
    const double step = 0.25;
    std::vector<double> first(ens.replicas);
    for (std::size_t r = 0; r < ens.replicas; ++r) first[r] = ens.at(r, 1) - ens.at(r, 0);
    for (long lag : {1L, 4L, 16L}) {
        std::vector<double> later(ens.replicas);
        for (std::size_t r = 0; r < ens.replicas; ++r) later[r] = ens.at(r, lag + 1) - ens.at(r, lag);
        const auto est = sample_covariance(first, later);
        const double target = increment_covariance_delta(d, lag, step, 1.0);
        CHECK(MomentReport::make("delta", {}, est, target, 0.05).pass);
    }
}

TEST_CASE("mean absolute one-step increment shrinks with the mesh") {
    FlpParams params{0.25, LevySpec::compensated_gamma(1.0, 2.0)};
    double prev = 1e300;
    for (int n : {32, 64, 128}) {
        EnsembleSetup setup;
        setup.grid = SampleGrid{n, 1.0, 0};
        setup.replicas = 200;
        const auto ens = simulate_flp(params, setup);
        double acc = 0.0;
        for (std::size_t r = 0; r < ens.replicas; ++r) {
            double worst = 0.0;
            for (std::size_t k = 1; k < ens.points(); ++k)
                worst = std::max(worst, std::fabs(ens.at(r, k) - ens.at(r, k - 1)));
            acc += worst;
        }
        acc /= ens.replicas;
        CHECK(acc < prev);
        prev = acc;
    }
}

TEST_CASE("invalid memory parameter") {
    CHECK_THROWS_AS(validate_memory_parameter(0.0), ParameterError);
    CHECK_THROWS_AS(validate_memory_parameter(0.5), ParameterError);
    CHECK_NOTHROW(validate_memory_parameter(0.49));
}
