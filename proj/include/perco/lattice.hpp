#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace perco {

using SiteIndex = std::uint32_t;

enum class Topology { Four, Six, Eight };

struct Offset {
    int drow;
    int dcol;
};

/// Neighbor offsets in the order they appear in each site's adjacency list.
/// Six is the triangular embedding: left, right, up, up-right, down, down-left.
std::span<const Offset> topology_offsets(Topology topology);

/// 4, 6 or 8.
int topology_degree(Topology topology);
std::string_view to_string(Topology topology);
/// Accepts "4"/"6"/"8" and "four"/"six"/"eight".
Topology parse_topology(std::string_view text);

/// Rectangular grid of sites indexed row-major from 0, with the adjacency of
/// its topology precomputed in compressed-row form. Immutable once built.
class Lattice {
public:
    /// Throws InvalidArgument for zero dimensions or rows*cols beyond the
    /// range of SiteIndex.
    Lattice(std::size_t rows, std::size_t cols, Topology topology);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Topology topology() const noexcept { return topology_; }
    std::size_t site_count() const noexcept { return rows_ * cols_; }

    /// Throws std::out_of_range for site >= site_count().
    std::span<const SiteIndex> neighbors(SiteIndex site) const;

    /// Unchecked variant for hot loops.
    std::span<const SiteIndex> neighbors_unchecked(SiteIndex site) const noexcept {
        return {adjacency_.data() + row_start_[site], adjacency_.data() + row_start_[site + 1]};
    }

    SiteIndex site(std::size_t row, std::size_t col) const noexcept {
        return static_cast<SiteIndex>(row * cols_ + col);
    }

    /// Sum of all adjacency list lengths.
    std::size_t total_degree() const noexcept { return adjacency_.size(); }

    friend bool operator==(const Lattice& a, const Lattice& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.topology_ == b.topology_;
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    Topology topology_;
    std::vector<std::size_t> row_start_;
    std::vector<SiteIndex> adjacency_;
};

inline Lattice build_lattice(std::size_t rows, std::size_t cols, Topology topology) {
    return Lattice(rows, cols, topology);
}

} // namespace perco
