#include "gmflou/functional.hpp"

#include <algorithm>
#include <memory>
#include <thread>

#include "gmflou/errors.hpp"

namespace gmflou {

namespace {

LinearFunctional empty_functional(std::string name, std::span<const double> times, std::size_t cells) {
    LinearFunctional f;
    f.name = std::move(name);
    f.times.assign(times.begin(), times.end());
    f.cells = cells;
    f.weights.assign(times.size() * cells, 0.0);
    return f;
}

}  // namespace

LinearFunctional compile_flp(const FlpOperator& op, std::string name, std::span<const double> times) {
    const std::size_t cells = op.lattice().cells();
    auto f = empty_functional(std::move(name), times, cells);
    for (std::size_t i = 0; i < times.size(); ++i) {
        auto row = f.row(i);
        for (std::size_t j = 0; j < cells; ++j) row[j] = op.value_weight(times[i], j);
    }
    return f;
}

LinearFunctional compile_moving_average(const FlpOperator& op, const MovingAverageKernel& kernel, std::string name,
                                        std::span<const double> times) {
    const Lattice& lat = op.lattice();
    const std::size_t cells = lat.cells();
    auto f = empty_functional(std::move(name), times, cells);
    std::vector<double> stage2(cells);
    for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t c = 0; c < cells; ++c) stage2[c] = kernel.cell_weight(times[i], lat.left(c), lat.right(c), lat.rule());
        const auto w = op.pull_back(stage2);
        std::copy(w.begin(), w.end(), f.row(i).begin());
    }
    return f;
}

LinearFunctional compile_combination(const FlpOperator& op, std::span<const KernelTerm> terms, std::string name,
                                     double time) {
    const Lattice& lat = op.lattice();
    const std::size_t cells = lat.cells();
    const double t[1] = {time};
    auto f = empty_functional(std::move(name), t, cells);
    std::vector<double> stage2(cells, 0.0);
    for (const auto& term : terms) {
        if (term.coeff == 0.0) continue;
        for (std::size_t c = 0; c < cells; ++c) {
            stage2[c] += term.coeff * term.kernel->cell_weight(term.time, lat.left(c), lat.right(c), lat.rule());
        }
    }
    const auto w = op.pull_back(stage2);
    std::copy(w.begin(), w.end(), f.row(0).begin());
    return f;
}

LinearFunctional combine_rows(const LinearFunctional& f, std::span<const double> coeffs, std::string name,
                              double time) {
    if (coeffs.size() > f.rows()) throw RangeError("combine_rows: more coefficients than rows");
    const double t[1] = {time};
    auto out = empty_functional(std::move(name), t, f.cells);
    auto dst = out.row(0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0.0) continue;
        const auto src = f.row(i);
        for (std::size_t j = 0; j < f.cells; ++j) dst[j] += coeffs[i] * src[j];
    }
    return out;
}

LinearFunctional difference(const LinearFunctional& a, std::size_t ia, double ca, const LinearFunctional& b,
                            std::size_t ib, double cb, std::string name) {
    if (a.cells != b.cells) throw CouplingError("difference: functionals live on different lattices");
    if (ia >= a.rows() || ib >= b.rows()) throw RangeError("difference: row index out of range");
    const double t[1] = {a.times[ia]};
    auto out = empty_functional(std::move(name), t, a.cells);
    auto dst = out.row(0);
    const auto ra = a.row(ia);
    const auto rb = b.row(ib);
    for (std::size_t j = 0; j < a.cells; ++j) dst[j] = ca * ra[j] + cb * rb[j];
    return out;
}

std::vector<double> trapezoid_weights(std::size_t k, double step) {
    std::vector<double> w(k + 1, step);
    if (k == 0) return {0.0};
    w.front() = 0.5 * step;
    w.back() = 0.5 * step;
    return w;
}

double scheme_covariance(std::span<const double> a, std::span<const double> b, std::span<const double> widths,
                         double m2) {
    if (a.size() != b.size() || a.size() != widths.size()) {
        throw CouplingError("scheme_covariance: weight vectors differ in length");
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * b[j] * widths[j];
    return m2 * acc;
}

std::vector<double> PathEnsemble::column(std::size_t point) const {
    if (point >= times.size()) throw RangeError("ensemble: time index out of range");
    std::vector<double> out(replicas);
    for (std::size_t r = 0; r < replicas; ++r) out[r] = at(r, point);
    return out;
}

PathEnsemble simulate_flp(const FlpParams& params, const EnsembleSetup& setup) {
    params.validate();
    const Lattice lattice = Lattice::build(setup.grid, setup.scheme, params.d);
    FlpOperator op(std::make_shared<const Lattice>(lattice), params.d);
    std::vector<double> times(setup.grid.points());
    for (std::size_t k = 0; k < times.size(); ++k) times[k] = setup.grid.time(k);
    const LinearFunctional fn[1] = {compile_flp(op, "flp", times)};
    auto ens = simulate_coupled(lattice, params.spec, fn, setup.root_seed, setup.replicas, setup.threads);
    ens[0].params = {{"d", params.d}};
    return std::move(ens[0]);
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<PathEnsemble> simulate_coupled(const Lattice& lattice, const LevySpec& spec,
                                           std::span<const LinearFunctional> functionals, std::uint64_t root_seed,
                                           std::size_t replicas, unsigned threads) {
    const std::size_t cells = lattice.cells();
    std::vector<PathEnsemble> out(functionals.size());
    for (std::size_t f = 0; f < functionals.size(); ++f) {
        if (functionals[f].cells != cells) throw CouplingError("functional '" + functionals[f].name + "' was compiled on another lattice");
        out[f].process = functionals[f].name;
        out[f].times = functionals[f].times;
        out[f].replicas = replicas;
        out[f].values.assign(replicas * functionals[f].rows(), 0.0);
        out[f].root_seed = root_seed;
        out[f].lattice_signature = lattice.signature();
    }

    auto run_block = [&](std::size_t begin, std::size_t end) {
        std::vector<double> noise(cells);
        for (std::size_t r = begin; r < end; ++r) {
            Sampler sampler(SeedLineage{root_seed, r});
            sample_increments(spec, sampler, lattice.widths(), noise);
            for (std::size_t f = 0; f < functionals.size(); ++f) {
                const auto& fn = functionals[f];
                double* dst = out[f].values.data() + r * fn.rows();
                for (std::size_t i = 0; i < fn.rows(); ++i) {
                    const double* w = fn.weights.data() + i * cells;
                    double acc = 0.0;
                    for (std::size_t j = 0; j < cells; ++j) acc += w[j] * noise[j];
                    dst[i] = acc;
                }
            }
        }
    };

    const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(replicas, 1));
    if (workers <= 1) {
        run_block(0, replicas);
        return out;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (replicas + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(replicas, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(run_block, begin, end);
    }
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace gmflou
