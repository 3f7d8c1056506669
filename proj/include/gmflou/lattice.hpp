#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gmflou {

/// How a kernel is turned into a weight for one cell of a Riemann-Stieltjes sum.
enum class KernelRule {
    LeftPoint,    ///< kernel value at the cell's left node (the textbook sum)
    CellAverage,  ///< exact average of the kernel over the cell
};

enum class SchemeKind {
    Uniform,   ///< uniform cells on [-a_n/n, T], left-point sums, nothing before -a_n/n
    Extended,  ///< uniform cells near the present, geometric cells back to tail_horizon, cell averages
};

/// Rule for the default left truncation index a_n.
enum class TruncationRule {
    Square,   ///< a_n = n^2
    Optimal,  ///< a_n = ceil(n^{(2-d)/(1-d)})
};

/// Uniform observation grid k/n, k = 0..floor(nT).
struct SampleGrid {
    int n = 128;
    double horizon = 1.0;
    /// Left truncation index; 0 selects the scheme default.
    long trunc_a_n = 0;

    std::size_t points() const;
    double time(std::size_t k) const { return static_cast<double>(k) / n; }
    void validate() const;
};

struct SchemeSpec {
    SchemeKind kind = SchemeKind::Extended;
    TruncationRule truncation = TruncationRule::Square;
    double tail_ratio = 1.0 / 32.0;
    double tail_horizon = 1e12;

    static SchemeSpec uniform() { return SchemeSpec{SchemeKind::Uniform}; }
    static SchemeSpec extended() { return SchemeSpec{SchemeKind::Extended}; }

    KernelRule rule() const { return kind == SchemeKind::Uniform ? KernelRule::LeftPoint : KernelRule::CellAverage; }
    bool has_tail() const { return kind == SchemeKind::Extended; }
};

std::string to_string(SchemeKind kind);
SchemeKind scheme_kind_from_string(const std::string& name);

/// Resolved a_n for a grid, scheme and memory parameter d.
long resolve_trunc_a_n(const SampleGrid& grid, const SchemeSpec& scheme, double d);

/// Partition of (-tail_horizon, floor(nT)/n + 1/n] into noise cells.
///
/// Cells are ordered left to right. The first tail_cells() cells grow
/// geometrically towards the past; the remaining ones have width 1/n and their
/// nodes are exactly k/n for k = -a_n .. floor(nT) + 1. The last cell lies just
/// beyond the horizon; the left-point sums reference it at t = T.
class Lattice {
public:
    static Lattice build(const SampleGrid& grid, const SchemeSpec& scheme, double d);

    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> widths() const { return widths_; }
    std::size_t cells() const { return widths_.size(); }
    double left(std::size_t j) const { return nodes_[j]; }
    double right(std::size_t j) const { return nodes_[j + 1]; }
    double width(std::size_t j) const { return widths_[j]; }

    std::size_t tail_cells() const { return fine_begin_; }
    std::size_t fine_cells() const { return cells() - fine_begin_; }
    bool is_fine(std::size_t j) const { return j >= fine_begin_; }
    /// Index of the node at t = k/n.
    std::size_t grid_node(std::size_t k) const { return zero_node_ + k; }
    std::size_t zero_node() const { return zero_node_; }

    const SampleGrid& grid() const { return grid_; }
    const SchemeSpec& scheme() const { return scheme_; }
    KernelRule rule() const { return scheme_.rule(); }
    long trunc_a_n() const { return a_n_; }
    double step() const { return 1.0 / grid_.n; }
    /// Identifies the partition; ensembles can only be coupled on equal signatures.
    std::string signature() const;

private:
    SampleGrid grid_;
    SchemeSpec scheme_;
    long a_n_ = 0;
    std::vector<double> nodes_;
    std::vector<double> widths_;
    std::size_t fine_begin_ = 0;
    std::size_t zero_node_ = 0;
};

}  // namespace gmflou
