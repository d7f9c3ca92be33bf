#include "perco/clustering.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "perco/errors.hpp"

namespace perco {

namespace {

void check_shape(const BinaryImage& image, const Lattice& lattice) {
    if (image.rows() != lattice.rows() || image.cols() != lattice.cols())
        throw ShapeError("image is " + std::to_string(image.rows()) + "x" + std::to_string(image.cols()) +
                         " but lattice is " + std::to_string(lattice.rows()) + "x" +
                         std::to_string(lattice.cols()));
}

struct Frame {
    SiteIndex site;
    std::uint32_t next; // position in the site's adjacency list
};

} // namespace

DepthLabeling dfs_spanning_tree(const BinaryImage& image, const Lattice& lattice, SiteIndex seed) {
    check_shape(image, lattice);
    if (seed >= lattice.site_count())
        throw InvalidArgument("seed " + std::to_string(seed) + " outside lattice");
    if (!image.is_active(seed))
        throw InvalidArgument("seed " + std::to_string(seed) + " is not an active site");

    DepthLabeling out;
    out.seed = seed;
    out.depths.assign(lattice.site_count(), 0);
    out.mother.assign(lattice.site_count(), 0);
    out.depths[seed] = 1;
    out.mother[seed] = seed;

    // The stack holds the path from the seed to the current site, so its
    // height is the current depth.
    std::vector<Frame> stack{{seed, 0}};
    while (!stack.empty()) {
        auto& top = stack.back();
        const auto nbrs = lattice.neighbors_unchecked(top.site);
        bool descended = false;
        while (top.next < nbrs.size()) {
            const SiteIndex cand = nbrs[top.next++];
            if (image.is_active(cand) && out.depths[cand] == 0) {
                out.depths[cand] = static_cast<std::uint32_t>(stack.size() + 1);
                out.mother[cand] = top.site;
                stack.push_back({cand, 0});
                descended = true;
                break;
            }
        }
        if (!descended)
            stack.pop_back();
    }
    return out;
}

ClusterLabeling label_components(const BinaryImage& image, const Lattice& lattice) {
    check_shape(image, lattice);
    const auto active = image.active();
    const std::size_t sites = lattice.site_count();

    ClusterLabeling out;
    out.labels.assign(sites, 0);
    std::vector<SiteIndex> stack;
    for (std::size_t start = 0; start < sites; ++start) {
        if (!active[start] || out.labels[start] != 0)
            continue;
        const auto label = static_cast<std::uint32_t>(out.cluster_sizes.size() + 1);
        std::uint32_t size = 1;
        out.labels[start] = label;
        stack.push_back(static_cast<SiteIndex>(start));
        while (!stack.empty()) {
            const SiteIndex s = stack.back();
            stack.pop_back();
            for (SiteIndex n : lattice.neighbors_unchecked(s)) {
                if (active[n] && out.labels[n] == 0) {
                    out.labels[n] = label;
                    ++size;
                    stack.push_back(n);
                }
            }
        }
        out.cluster_sizes.push_back(size);
        out.largest = std::max(out.largest, size);
    }
    return out;
}

std::uint32_t largest_cluster_size(const ClusterLabeling& labeling) noexcept {
    if (labeling.cluster_sizes.empty())
        return 0;
    return *std::max_element(labeling.cluster_sizes.begin(), labeling.cluster_sizes.end());
}

} // namespace perco
