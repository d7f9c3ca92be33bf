#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "../oracle.hpp"
#include "perco/clustering.hpp"
#include "perco/errors.hpp"

using namespace perco;

namespace {

constexpr Topology kAll[] = {Topology::Four, Topology::Six, Topology::Eight};

oracle::Shape shape_of(Topology t) {
    switch (t) {
    case Topology::Four:
        return oracle::Shape::Four;
    case Topology::Six:
        return oracle::Shape::Six;
    default:
        return oracle::Shape::Eight;
    }
}

BinaryImage only(std::size_t rows, std::size_t cols, SiteIndex site) {
    std::vector<std::uint8_t> v(rows * cols, 0);
    v[site] = 1;
    return BinaryImage(rows, cols, v);
}

} // namespace

TEST_CASE("dfs spanning tree examples") {
    {
        const Lattice lat(3, 3, Topology::Six);
        const auto d = dfs_spanning_tree(only(3, 3, 4), lat, 4);
        for (SiteIndex s = 0; s < 9; ++s)
            CHECK(d.depths[s] == (s == 4 ? 1u : 0u));
    }
    {
        const Lattice lat(1, 3, Topology::Four);
        const auto d = dfs_spanning_tree(BinaryImage::filled(1, 3, true), lat, 0);
        CHECK(d.depths == std::vector<std::uint32_t>{1, 2, 3});
    }
    {
        // 4-cycle: tree depth 4 at a site two steps from the seed.
        const Lattice lat(2, 2, Topology::Four);
        REQUIRE(std::vector<SiteIndex>(lat.neighbors(0).begin(), lat.neighbors(0).end()) ==
                std::vector<SiteIndex>{1, 2});
        const auto d = dfs_spanning_tree(BinaryImage::filled(2, 2, true), lat, 0);
        CHECK(d.depths == std::vector<std::uint32_t>{1, 2, 4, 3});
    }
}

TEST_CASE("dfs errors") {
    const Lattice lat(2, 2, Topology::Four);
    CHECK_THROWS_AS(dfs_spanning_tree(BinaryImage::filled(2, 2, false), lat, 0), InvalidArgument);
    CHECK_THROWS_AS(dfs_spanning_tree(BinaryImage::filled(2, 2, true), lat, 4), InvalidArgument);
    CHECK_THROWS_AS(dfs_spanning_tree(BinaryImage::filled(2, 3, true), lat, 0), ShapeError);
    CHECK_THROWS_AS(label_components(BinaryImage::filled(3, 2, true), lat), ShapeError);
}

TEST_CASE("label_components examples") {
    const Lattice lat(4, 5, Topology::Four);
    const auto empty = label_components(BinaryImage::filled(4, 5, false), lat);
    CHECK(empty.num_clusters() == 0);
    CHECK(empty.largest == 0);
    CHECK(largest_cluster_size(empty) == 0);

    std::vector<std::uint8_t> checker(20);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 5; ++c)
            checker[r * 5 + c] = (r + c) % 2 == 0;
    const auto cl = label_components(BinaryImage(4, 5, checker), lat);
    CHECK(cl.num_clusters() == 10);
    CHECK(cl.largest == 1);
    // Under 8-adjacency the diagonal contacts join everything.
    CHECK(label_components(BinaryImage(4, 5, checker), Lattice(4, 5, Topology::Eight)).largest == 10);

    const auto full = label_components(BinaryImage::filled(4, 5, true), lat);
    CHECK(full.num_clusters() == 1);
    CHECK(full.largest == 20);
    CHECK(label_components(BinaryImage::filled(55, 55, true), Lattice(55, 55, Topology::Six)).largest == 3025);
}

TEST_CASE("largest_cluster_size picks the maximum") {
    ClusterLabeling l;
    l.cluster_sizes = {3, 5};
    CHECK(largest_cluster_size(l) == 5);
}

TEST_CASE("labeling and dfs agree with the flood-fill oracle on random images") {
    RngStream rng(2718, 0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t rows = 1 + rng.uniform_below(32);
        const std::size_t cols = 1 + rng.uniform_below(32);
        const double p = 0.2 + 0.6 * rng.uniform01();
        const auto img = generate_percolation(p, rows, cols, rng);
        for (auto t : kAll) {
            const Lattice lat(rows, cols, t);
            const auto lab = label_components(img, lat);
            std::vector<std::uint8_t> occ(img.active().begin(), img.active().end());
            if (rows * cols <= 256)
                CHECK(static_cast<int>(lab.largest) ==
                      oracle::largest_cluster(shape_of(t), static_cast<int>(rows), static_cast<int>(cols), occ));

            // Partition invariants.
            CHECK(std::accumulate(lab.cluster_sizes.begin(), lab.cluster_sizes.end(), std::size_t{0}) ==
                  img.active_count());
            for (SiteIndex s = 0; s < lat.site_count(); ++s) {
                CHECK((lab.labels[s] > 0) == img.is_active(s));
                if (!img.is_active(s))
                    continue;
                for (auto n : lat.neighbors(s))
                    if (img.is_active(n))
                        CHECK(lab.labels[n] == lab.labels[s]);
            }

            // DFS from a few seeds covers exactly the seed's component, and
            // every non-root site has its mother one level up.
            for (int k = 0; k < 3; ++k) {
                const auto seed = static_cast<SiteIndex>(rng.uniform_below(lat.site_count()));
                if (!img.is_active(seed))
                    continue;
                const auto d = dfs_spanning_tree(img, lat, seed);
                CHECK(d.depths[seed] == 1);
                for (SiteIndex s = 0; s < lat.site_count(); ++s) {
                    CHECK((d.depths[s] > 0) == (lab.labels[s] == lab.labels[seed] && img.is_active(s)));
                    if (d.depths[s] >= 2) {
                        const auto m = d.mother[s];
                        CHECK(d.depths[m] == d.depths[s] - 1);
                        const auto nb = lat.neighbors(s);
                        CHECK(std::find(nb.begin(), nb.end(), m) != nb.end());
                    }
                }
            }
        }
    }
}

TEST_CASE("component partition does not depend on scan order") {
    // Relabel by scanning the transposed image; the partitions must match.
    RngStream rng(31, 0);
    const auto img = generate_percolation(0.55, 17, 23, rng);
    const Lattice lat(17, 23, Topology::Six);
    const auto lab = label_components(img, lat);
    std::map<std::uint32_t, std::set<SiteIndex>> groups;
    for (SiteIndex s = 0; s < lat.site_count(); ++s)
        if (lab.labels[s])
            groups[lab.labels[s]].insert(s);
    for (const auto& [label, members] : groups) {
        const auto d = dfs_spanning_tree(img, lat, *members.rbegin());
        std::set<SiteIndex> reached;
        for (SiteIndex s = 0; s < lat.site_count(); ++s)
            if (d.depths[s])
                reached.insert(s);
        CHECK(reached == members);
    }
}
