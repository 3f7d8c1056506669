#include "gmflou/stats.hpp"

#include <algorithm>
#include <cmath>

#include "gmflou/errors.hpp"

namespace gmflou {

namespace {

void require_replicas(std::size_t n) {
    if (n < kMinReplicas) {
        throw StatisticsError("at least " + std::to_string(kMinReplicas) + " replicas are required, got " +
                              std::to_string(n));
    }
}

double mean_of(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

}  // namespace

double MomentReport::tolerance() const { return k_sigma * std_error + allowance * std::fabs(target); }

MomentReport MomentReport::make(std::string quantity, nlohmann::json params, Estimate est, double target,
                                double allowance, double k_sigma) {
    MomentReport r;
    r.quantity = std::move(quantity);
    r.params = std::move(params);
    r.mc_estimate = est.value;
    r.std_error = est.std_error;
    r.target = target;
    r.k_sigma = k_sigma;
    r.allowance = allowance;
    r.pass = std::fabs(est.value - target) <= r.tolerance();
    return r;
}

void to_json(nlohmann::json& j, const MomentReport& r) {
    j = {{"quantity", r.quantity}, {"params", r.params},       {"mc_estimate", r.mc_estimate},
         {"stderr", r.std_error},     {"target", r.target},       {"tolerance", r.tolerance()},
         {"k_sigma", r.k_sigma},   {"allowance", r.allowance}, {"pass", r.pass}};
}

double discretization_allowance(int n, double base) { return base * 128.0 / static_cast<double>(n); }

bool ConvergenceTable::monotone() const {
    for (std::size_t i = 1; i < residuals.size(); ++i) {
        if (!(residuals[i] < residuals[i - 1])) return false;
    }
    return true;
}

void to_json(nlohmann::json& j, const ConvergenceTable& t) {
    j = {{"axis", t.axis},
         {"axis_values", t.axis_values},
         {"residuals", t.residuals},
         {"stderr", t.std_errors},
         {"scheme_residuals", t.scheme_residuals},
         {"params", t.params},
         {"monotone", t.monotone()}};
}

Estimate sample_mean(std::span<const double> x) {
    require_replicas(x.size());
    const double n = static_cast<double>(x.size());
    const double m = mean_of(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return {m, std::sqrt(ss / (n - 1.0) / n)};
}

Estimate mean_square(std::span<const double> x) {
    std::vector<double> sq(x.size());
    std::transform(x.begin(), x.end(), sq.begin(), [](double v) { return v * v; });
    return sample_mean(sq);
}

Estimate sample_covariance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw StatisticsError("covariance: samples differ in length");
    require_replicas(x.size());
    const double n = static_cast<double>(x.size());
    const double mx = mean_of(x);
    const double my = mean_of(y);
    std::vector<double> prod(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) prod[i] = (x[i] - mx) * (y[i] - my);
    const double c = mean_of(prod);
    double ss = 0.0;
    for (double p : prod) ss += (p - c) * (p - c);
    return {c * n / (n - 1.0), std::sqrt(ss / (n - 1.0) / n)};
}

Estimate sample_variance(std::span<const double> x) { return sample_covariance(x, x); }

Estimate variance_ratio(std::span<const double> num, std::span<const double> den) {
    if (num.size() != den.size()) throw StatisticsError("variance ratio: samples differ in length");
    require_replicas(num.size());
    const double n = static_cast<double>(num.size());
    const double mn = mean_of(num);
    const double md = mean_of(den);
    std::vector<double> qn(num.size()), qd(den.size());
    for (std::size_t i = 0; i < num.size(); ++i) {
        qn[i] = (num[i] - mn) * (num[i] - mn);
        qd[i] = (den[i] - md) * (den[i] - md);
    }
    const double vn = mean_of(qn);
    const double vd = mean_of(qd);
    if (!(vd > 0.0)) throw StatisticsError("variance ratio: denominator sample has zero variance");
    const double ratio = vn / vd;
    std::vector<double> infl(num.size());
    for (std::size_t i = 0; i < num.size(); ++i) infl[i] = (qn[i] - vn) / vd - ratio * (qd[i] - vd) / vd;
    double ss = 0.0;
    for (double v : infl) ss += v * v;
    return {ratio, std::sqrt(ss / (n - 1.0) / n)};
}

Estimate ensemble_moment(const PathEnsemble& ens, std::size_t t_index, int order) {
    const auto col = ens.column(t_index);
    if (order == 1) return sample_mean(col);
    if (order == 2) return mean_square(col);
    throw ParameterError("ensemble_moment: order must be 1 or 2");
}

std::vector<Estimate> empirical_autocovariance(const PathEnsemble& ens, std::size_t base,
                                               std::span<const std::size_t> lag_indices) {
    const auto x = ens.column(base);
    std::vector<Estimate> out;
    out.reserve(lag_indices.size());
    for (std::size_t lag : lag_indices) {
        if (base + lag >= ens.points()) throw RangeError("autocovariance: lag beyond the simulated grid");
        out.push_back(sample_covariance(x, ens.column(base + lag)));
    }
    return out;
}

PowerFit fit_tail_exponent(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw FitError("fit: need at least two (x, y) pairs");
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw FitError("fit: non-positive entry at index " + std::to_string(i) + " (y = " + std::to_string(y[i]) + ")");
        }
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    const double mx = mean_of(lx);
    const double my = mean_of(ly);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw FitError("fit: all x values are equal");
    PowerFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return f;
}

CfEstimate empirical_char_function(std::span<const std::vector<double>> columns, std::span<const double> thetas) {
    if (columns.size() != thetas.size()) throw ParameterError("empirical cf: one theta per variable is required");
    if (columns.empty()) return {{1.0, 0.0}, 0.0, 0.0};
    const std::size_t r = columns.front().size();
    require_replicas(r);
    std::vector<double> re(r), im(r);
    for (std::size_t k = 0; k < r; ++k) {
        double phase = 0.0;
        for (std::size_t j = 0; j < columns.size(); ++j) phase += thetas[j] * columns[j][k];
        re[k] = std::cos(phase);
        im[k] = std::sin(phase);
    }
    const auto er = sample_mean(re);
    const auto ei = sample_mean(im);
    return {{er.value, ei.value}, er.std_error, ei.std_error};
}

Estimate coupled_l2_error(const PathEnsemble& a, const PathEnsemble& b, std::size_t t_index) {
    if (a.root_seed != b.root_seed || a.lattice_signature != b.lattice_signature || a.replicas != b.replicas) {
        throw CouplingError("coupled_l2_error: ensembles were not driven by the same noise");
    }
    if (t_index >= a.points() || t_index >= b.points() || a.times[t_index] != b.times[t_index]) {
        throw CouplingError("coupled_l2_error: ensembles are not observed at the same time");
    }
    std::vector<double> diff(a.replicas);
    for (std::size_t r = 0; r < a.replicas; ++r) diff[r] = a.at(r, t_index) - b.at(r, t_index);
    return mean_square(diff);
}

double increment_bound_check(const PathEnsemble& ens, double d, int max_level) {
    auto index_of = [&](double t) {
        const auto it = std::find_if(ens.times.begin(), ens.times.end(), [&](double v) { return std::fabs(v - t) < 1e-12; });
        if (it == ens.times.end()) throw RangeError("increment bound: grid does not contain t = " + std::to_string(t));
        return static_cast<std::size_t>(it - ens.times.begin());
    };
    double worst = 0.0;
    for (int level = 1; level <= max_level; ++level) {
        const int cells = 1 << level;
        const double step = 1.0 / cells;
        for (int i = 0; i < cells; ++i) {
            for (int k = i + 1; k <= cells; ++k) {
                const std::size_t a = index_of(i * step);
                const std::size_t b = index_of(k * step);
                double acc = 0.0;
                for (std::size_t r = 0; r < ens.replicas; ++r) {
                    const double dx = ens.at(r, b) - ens.at(r, a);
                    acc += dx * dx;
                }
                const double ratio = acc / static_cast<double>(ens.replicas) / std::pow((k - i) * step, 1.0 + 2.0 * d);
                worst = std::max(worst, ratio);
            }
        }
    }
    return worst;
}

}  // namespace gmflou
