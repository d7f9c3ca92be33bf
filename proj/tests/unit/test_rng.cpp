#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "perco/errors.hpp"
#include "perco/rng.hpp"

using namespace perco;

TEST_CASE("streams are reproducible and distinct") {
    RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    std::vector<std::uint64_t> va, vb, vc, vd;
    for (int i = 0; i < 16; ++i) {
        va.push_back(a.next_u64());
        vb.push_back(b.next_u64());
        vc.push_back(c.next_u64());
        vd.push_back(d.next_u64());
    }
    CHECK(va == vb);
    CHECK(va != vc);
    CHECK(va != vd);
}

TEST_CASE("uniform draws stay in range") {
    RngStream rng(1, 0);
    for (int i = 0; i < 10000; ++i) {
        CHECK(rng.uniform_below(7) < 7);
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    CHECK(rng.uniform_below(1) == 0);
    RngStream b(1, 1);
    for (int i = 0; i < 100; ++i) {
        CHECK_FALSE(b.bernoulli(0.0));
        CHECK(b.bernoulli(1.0));
    }
}

TEST_CASE("random_permutation basics") {
    RngStream rng(0, 0);
    CHECK(random_permutation(1, rng) == std::vector<SiteIndex>{0});
    CHECK_THROWS_AS(random_permutation(0, rng), InvalidArgument);

    RngStream x(9, 3), y(9, 3);
    CHECK(random_permutation(100, x) == random_permutation(100, y));

    RngStream z(5, 0);
    for (std::size_t n : {2, 3, 17, 1000}) {
        auto perm = random_permutation(n, z);
        std::sort(perm.begin(), perm.end());
        std::vector<SiteIndex> expect(n);
        std::iota(expect.begin(), expect.end(), SiteIndex{0});
        CHECK(perm == expect);
    }
}

TEST_CASE("n=3 orderings have frequency 1/6") {
    std::map<std::vector<SiteIndex>, int> freq;
    constexpr int kDraws = 60000;
    for (int i = 0; i < kDraws; ++i) {
        RngStream rng(2024, static_cast<std::uint64_t>(i));
        ++freq[random_permutation(3, rng)];
    }
    REQUIRE(freq.size() == 6);
    const double tol = 5.0 * std::sqrt((1.0 / 6) * (5.0 / 6) / kDraws);
    for (const auto& [perm, count] : freq)
        CHECK(std::abs(count / double(kDraws) - 1.0 / 6) <= tol);
}

TEST_CASE("n=4 chi-square uniformity at significance 1e-3") {
    std::map<std::vector<SiteIndex>, int> freq;
    constexpr int kDraws = 100000;
    RngStream rng(77, 0);
    for (int i = 0; i < kDraws; ++i)
        ++freq[random_permutation(4, rng)];
    REQUIRE(freq.size() == 24);
    const double expected = kDraws / 24.0;
    double chi2 = 0.0;
    for (const auto& [perm, count] : freq)
        chi2 += (count - expected) * (count - expected) / expected;
    // 0.999 quantile of chi-square with 23 degrees of freedom.
    CHECK(chi2 < 49.7282);
}
