#include "perco/lattice.hpp"

#include <array>
#include <limits>
#include <stdexcept>
#include <string>

#include "perco/errors.hpp"

namespace perco {

namespace {

// Orders follow the interior entries of the classic adjacency listings.
constexpr std::array<Offset, 4> kFour{{{0, -1}, {0, 1}, {-1, 0}, {1, 0}}};
constexpr std::array<Offset, 6> kSix{{{0, -1}, {0, 1}, {-1, 0}, {-1, 1}, {1, 0}, {1, -1}}};
constexpr std::array<Offset, 8> kEight{
    {{0, -1}, {0, 1}, {-1, 0}, {-1, -1}, {-1, 1}, {1, 0}, {1, 1}, {1, -1}}};

} // namespace

std::span<const Offset> topology_offsets(Topology topology) {
    switch (topology) {
    case Topology::Four:
        return kFour;
    case Topology::Six:
        return kSix;
    case Topology::Eight:
        return kEight;
    }
    throw InvalidArgument("unknown topology");
}

int topology_degree(Topology topology) {
    return static_cast<int>(topology_offsets(topology).size());
}

std::string_view to_string(Topology topology) {
    switch (topology) {
    case Topology::Four:
        return "4";
    case Topology::Six:
        return "6";
    case Topology::Eight:
        return "8";
    }
    return "?";
}

Topology parse_topology(std::string_view text) {
    if (text == "4" || text == "four")
        return Topology::Four;
    if (text == "6" || text == "six")
        return Topology::Six;
    if (text == "8" || text == "eight")
        return Topology::Eight;
    throw InvalidArgument("topology must be one of 4, 6, 8; got '" + std::string(text) + "'");
}

Lattice::Lattice(std::size_t rows, std::size_t cols, Topology topology)
    : rows_(rows), cols_(cols), topology_(topology) {
    if (rows == 0 || cols == 0)
        throw InvalidArgument("lattice dimensions must be positive");
    constexpr auto max_sites = static_cast<std::size_t>(std::numeric_limits<SiteIndex>::max());
    if (rows > max_sites / cols)
        throw InvalidArgument("lattice dimensions overflow the site index range");

    const auto offsets = topology_offsets(topology);
    const std::size_t sites = rows * cols;
    row_start_.reserve(sites + 1);
    adjacency_.reserve(sites * offsets.size());
    row_start_.push_back(0);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            for (const auto& off : offsets) {
                const auto nr = static_cast<std::ptrdiff_t>(r) + off.drow;
                const auto nc = static_cast<std::ptrdiff_t>(c) + off.dcol;
                if (nr < 0 || nc < 0 || nr >= static_cast<std::ptrdiff_t>(rows) ||
                    nc >= static_cast<std::ptrdiff_t>(cols))
                    continue;
                adjacency_.push_back(site(static_cast<std::size_t>(nr), static_cast<std::size_t>(nc)));
            }
            row_start_.push_back(adjacency_.size());
        }
    }
    adjacency_.shrink_to_fit();
}

std::span<const SiteIndex> Lattice::neighbors(SiteIndex site) const {
    if (site >= site_count())
        throw std::out_of_range("site " + std::to_string(site) + " outside lattice of " +
                                std::to_string(site_count()) + " sites");
    return neighbors_unchecked(site);
}

} // namespace perco
