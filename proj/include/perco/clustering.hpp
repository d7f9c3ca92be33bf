#pragma once

#include <cstdint>
#include <vector>

#include "perco/image.hpp"
#include "perco/lattice.hpp"

namespace perco {

/// Depth-first spanning tree of the cluster around a seed site.
/// depths[s] is 0 outside the cluster, 1 at the seed, and otherwise one more
/// than the depth of the site it was discovered from. Depth is distance in
/// the tree, which can exceed the graph distance to the seed.
struct DepthLabeling {
    SiteIndex seed = 0;
    std::vector<std::uint32_t> depths;
    // Site each cluster site was discovered from; the seed is its own mother.
    std::vector<SiteIndex> mother;
};

/// Connected components of the active sites.
/// labels[s] == 0 for inactive sites; clusters are numbered 1, 2, ... in the
/// scan order of their first site, and cluster_sizes[k - 1] is the size of
/// cluster k.
struct ClusterLabeling {
    std::vector<std::uint32_t> labels;
    std::vector<std::uint32_t> cluster_sizes;
    std::uint32_t largest = 0;

    std::size_t num_clusters() const noexcept { return cluster_sizes.size(); }
};

/// Iterative DFS from `seed`, visiting neighbors in adjacency-list order and
/// backtracking to the mother site when a site has no unexplored active
/// neighbor. Throws ShapeError when image and lattice dimensions differ and
/// InvalidArgument when the seed is out of range or inactive.
DepthLabeling dfs_spanning_tree(const BinaryImage& image, const Lattice& lattice, SiteIndex seed);

/// Labels every cluster with one DFS per unvisited active site.
/// Work is O(S + sum of degrees).
ClusterLabeling label_components(const BinaryImage& image, const Lattice& lattice);

std::uint32_t largest_cluster_size(const ClusterLabeling& labeling) noexcept;

} // namespace perco
