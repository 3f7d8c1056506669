#include "gmflou/lattice.hpp"

#include <cmath>
#include <sstream>

#include "gmflou/errors.hpp"

namespace gmflou {

std::size_t SampleGrid::points() const {
    return static_cast<std::size_t>(std::floor(n * horizon + 1e-9)) + 1;
}

void SampleGrid::validate() const {
    if (n < 1) throw ParameterError("grid: n must be >= 1 (grid too coarse)");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ParameterError("grid: horizon T must be positive");
    if (trunc_a_n < 0) throw ParameterError("grid: a_n must be >= 1 (or 0 for the default)");
}

std::string to_string(SchemeKind kind) { return kind == SchemeKind::Uniform ? "uniform" : "extended"; }

SchemeKind scheme_kind_from_string(const std::string& name) {
    if (name == "uniform") return SchemeKind::Uniform;
    if (name == "extended") return SchemeKind::Extended;
    throw ParameterError("unknown scheme '" + name + "' (expected uniform|extended)");
}

long resolve_trunc_a_n(const SampleGrid& grid, const SchemeSpec& scheme, double d) {
    if (grid.trunc_a_n > 0) return grid.trunc_a_n;
    const double n = grid.n;
    if (scheme.truncation == TruncationRule::Optimal) {
        return static_cast<long>(std::ceil(std::pow(n, (2.0 - d) / (1.0 - d)) - 1e-9));
    }
    if (scheme.kind == SchemeKind::Extended) return 8L * grid.n;
    return static_cast<long>(grid.n) * grid.n;
}

Lattice Lattice::build(const SampleGrid& grid, const SchemeSpec& scheme, double d) {
    grid.validate();
    if (scheme.has_tail()) {
        if (!(scheme.tail_ratio > 0.0) || scheme.tail_ratio > 1.0) {
            throw ParameterError("scheme: tail ratio must lie in (0, 1]");
        }
    }
    Lattice lat;
    lat.grid_ = grid;
    lat.scheme_ = scheme;
    lat.a_n_ = resolve_trunc_a_n(grid, scheme, d);
    const double window = static_cast<double>(lat.a_n_) / grid.n;

    std::vector<double> tail;
    if (scheme.has_tail() && scheme.tail_horizon > window) {
        double u = -window;
        while (u > -scheme.tail_horizon) {
            u *= 1.0 + scheme.tail_ratio;
            tail.push_back(std::max(u, -scheme.tail_horizon));
        }
    }
    lat.nodes_.assign(tail.rbegin(), tail.rend());
    lat.fine_begin_ = lat.nodes_.size();
    const long last = static_cast<long>(grid.points());  // floor(nT) + 1
    for (long k = -lat.a_n_; k <= last; ++k) lat.nodes_.push_back(static_cast<double>(k) / grid.n);
    lat.zero_node_ = lat.fine_begin_ + static_cast<std::size_t>(lat.a_n_);

    lat.widths_.resize(lat.nodes_.size() - 1);
    for (std::size_t j = 0; j + 1 < lat.nodes_.size(); ++j) lat.widths_[j] = lat.nodes_[j + 1] - lat.nodes_[j];
    return lat;
}

std::string Lattice::signature() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(scheme_.kind) << ";n=" << grid_.n << ";T=" << grid_.horizon << ";a_n=" << a_n_;
    if (scheme_.has_tail()) os << ";ratio=" << scheme_.tail_ratio << ";U=" << scheme_.tail_horizon;
    return os.str();
}

}  // namespace gmflou
