#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "perco/newman_ziff.hpp"

namespace perco {

/// Proper, nonempty set of sites G' with its own occupation probability.
class Subgrid {
public:
    /// `sites` must be strictly increasing, in range, and neither empty nor
    /// the whole lattice. Throws InvalidArgument otherwise.
    Subgrid(const Lattice& lattice, std::vector<SiteIndex> sites, std::optional<SubgridRect> rect = std::nullopt);

    const std::vector<SiteIndex>& sites() const noexcept { return sites_; }
    std::size_t size() const noexcept { return sites_.size(); }
    const std::optional<SubgridRect>& rect() const noexcept { return rect_; }
    /// Lattice sites outside G', increasing.
    std::vector<SiteIndex> complement(std::size_t site_count) const;

private:
    std::vector<SiteIndex> sites_;
    std::optional<SubgridRect> rect_;
};

/// Axis-aligned rectangle of sites in row-major order; 0-based (top, left).
Subgrid rect_subgrid(const Lattice& lattice, std::size_t top, std::size_t left, std::size_t height,
                     std::size_t width);

/// Largest cluster size with the first n_in inner and the first n_out outer
/// visits occupied, for n_in = 0..|G'| and n_out = 0..S-|G'|.
class JointMaxSizeTable {
public:
    JointMaxSizeTable() = default;
    JointMaxSizeTable(std::size_t inner_sites, std::size_t outer_sites)
        : inner_(inner_sites), outer_(outer_sites), entries_((inner_sites + 1) * (outer_sites + 1), 0) {}

    std::size_t inner_sites() const noexcept { return inner_; }
    std::size_t outer_sites() const noexcept { return outer_; }

    std::uint32_t at(std::size_t n_in, std::size_t n_out) const { return entries_.at(n_in * (outer_ + 1) + n_out); }
    std::uint32_t& at(std::size_t n_in, std::size_t n_out) { return entries_.at(n_in * (outer_ + 1) + n_out); }

    /// Row n_in as a contiguous span over n_out.
    std::span<const std::uint32_t> row(std::size_t n_in) const {
        return std::span<const std::uint32_t>(entries_).subspan(n_in * (outer_ + 1), outer_ + 1);
    }
    std::span<std::uint32_t> row(std::size_t n_in) {
        return std::span<std::uint32_t>(entries_).subspan(n_in * (outer_ + 1), outer_ + 1);
    }

private:
    std::size_t inner_ = 0;
    std::size_t outer_ = 0;
    std::vector<std::uint32_t> entries_;
};

/// One run of the two-region scheme: draws an inner permutation, then an
/// outer permutation, from `rng`. For each inner prefix the occupied state
/// is snapshotted and the same outer order is replayed on top of it.
JointMaxSizeTable nz_run_modified(const Lattice& lattice, const Subgrid& subgrid, RngStream& rng);

/// Same as nz_run_modified with caller-supplied visiting orders, given as
/// site indices (inner_order over G', outer_order over its complement).
JointMaxSizeTable nz_table(const Lattice& lattice, std::span<const SiteIndex> inner_order,
                           std::span<const SiteIndex> outer_order);

/// Single-run F(k) = sum over (n_in, n_out) of 1{T[n_in][n_out] <= k}
/// Bin(|G'|, p_in)(n_in) Bin(S-|G'|, p_out)(n_out), k = 0..S.
std::vector<double> convolve_cdf_joint(const JointMaxSizeTable& table, double p_in, double p_out);

/// Mean of convolve_cdf_joint over `runs` tables from streams (seed, 0..runs-1).
CdfEstimate estimate_cdf_inhomogeneous(const Lattice& lattice, const Subgrid& subgrid, double p_in,
                                       double p_out, std::size_t runs, std::uint64_t seed,
                                       const SimulationOptions& options = {});

/// The 10x10 block at 0-based (19, 19) used with 55x55 lattices.
inline constexpr SubgridRect kReferenceSubgrid{19, 19, 10, 10};

} // namespace perco
