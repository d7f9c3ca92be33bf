#include "perco/newman_ziff_modified.hpp"

#include <algorithm>
#include <string>

#include "perco/errors.hpp"
#include "perco/parallel.hpp"

namespace perco {

Subgrid::Subgrid(const Lattice& lattice, std::vector<SiteIndex> sites, std::optional<SubgridRect> rect)
    : sites_(std::move(sites)), rect_(rect) {
    if (sites_.empty())
        throw InvalidArgument("subgrid must contain at least one site");
    if (sites_.size() >= lattice.site_count())
        throw InvalidArgument("subgrid must be a proper subset of the lattice");
    for (std::size_t i = 0; i < sites_.size(); ++i) {
        if (sites_[i] >= lattice.site_count())
            throw InvalidArgument("subgrid site " + std::to_string(sites_[i]) + " outside lattice");
        if (i > 0 && sites_[i] <= sites_[i - 1])
            throw InvalidArgument("subgrid sites must be strictly increasing");
    }
}

std::vector<SiteIndex> Subgrid::complement(std::size_t site_count) const {
    std::vector<SiteIndex> out;
    out.reserve(site_count - sites_.size());
    std::size_t next = 0;
    for (std::size_t s = 0; s < site_count; ++s) {
        if (next < sites_.size() && sites_[next] == s)
            ++next;
        else
            out.push_back(static_cast<SiteIndex>(s));
    }
    return out;
}

Subgrid rect_subgrid(const Lattice& lattice, std::size_t top, std::size_t left, std::size_t height,
                     std::size_t width) {
    if (height == 0 || width == 0)
        throw InvalidArgument("subgrid rectangle must be nonempty");
    if (top >= lattice.rows() || left >= lattice.cols() || height > lattice.rows() - top ||
        width > lattice.cols() - left)
        throw InvalidArgument("subgrid rectangle does not fit in the lattice");
    std::vector<SiteIndex> sites;
    sites.reserve(height * width);
    for (std::size_t r = top; r < top + height; ++r)
        for (std::size_t c = left; c < left + width; ++c)
            sites.push_back(lattice.site(r, c));
    return Subgrid(lattice, std::move(sites), SubgridRect{top, left, height, width});
}

namespace {

// Produces the table one inner prefix at a time: on_row(n_in, row) sees
// T[n_in][0..J]. Only one snapshot of the inner state is alive at a time.
template <typename OnRow>
void for_each_row(const Lattice& lattice, std::span<const SiteIndex> inner_order,
                  std::span<const SiteIndex> outer_order, DisjointSets& inner, DisjointSets& working,
                  std::vector<std::uint32_t>& row, OnRow&& on_row) {
    inner.clear();
    row.resize(outer_order.size() + 1);
    std::uint32_t inner_largest = 0;
    for (std::size_t n_in = 0; n_in <= inner_order.size(); ++n_in) {
        if (n_in > 0)
            inner_largest = std::max(inner_largest, inner.occupy(lattice, inner_order[n_in - 1]));
        row[0] = inner_largest;
        working = inner;
        std::uint32_t largest = inner_largest;
        for (std::size_t n_out = 1; n_out <= outer_order.size(); ++n_out) {
            largest = std::max(largest, working.occupy(lattice, outer_order[n_out - 1]));
            row[n_out] = largest;
        }
        on_row(n_in, std::span<const std::uint32_t>(row));
    }
}

std::vector<SiteIndex> pick(std::span<const SiteIndex> from, std::span<const SiteIndex> positions) {
    std::vector<SiteIndex> out(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i)
        out[i] = from[positions[i]];
    return out;
}

void check_orders(const Lattice& lattice, std::span<const SiteIndex> inner_order,
                  std::span<const SiteIndex> outer_order) {
    if (inner_order.size() + outer_order.size() != lattice.site_count())
        throw ShapeError("inner and outer orders must cover the lattice");
    std::vector<std::uint8_t> seen(lattice.site_count(), 0);
    for (auto order : {inner_order, outer_order})
        for (SiteIndex s : order) {
            if (s >= seen.size() || seen[s])
                throw InvalidArgument("inner and outer orders must partition the sites");
            seen[s] = 1;
        }
}

} // namespace

JointMaxSizeTable nz_table(const Lattice& lattice, std::span<const SiteIndex> inner_order,
                           std::span<const SiteIndex> outer_order) {
    check_orders(lattice, inner_order, outer_order);
    JointMaxSizeTable table(inner_order.size(), outer_order.size());
    DisjointSets inner(lattice.site_count());
    DisjointSets working(lattice.site_count());
    std::vector<std::uint32_t> row;
    for_each_row(lattice, inner_order, outer_order, inner, working, row,
                 [&](std::size_t n_in, std::span<const std::uint32_t> values) {
                     std::copy(values.begin(), values.end(), table.row(n_in).begin());
                 });
    return table;
}

JointMaxSizeTable nz_run_modified(const Lattice& lattice, const Subgrid& subgrid, RngStream& rng) {
    const auto outer_sites = subgrid.complement(lattice.site_count());
    const auto inner_order = pick(subgrid.sites(), random_permutation(subgrid.size(), rng));
    const auto outer_order = pick(outer_sites, random_permutation(outer_sites.size(), rng));
    return nz_table(lattice, inner_order, outer_order);
}

namespace {

void finish_joint(std::span<double> out) {
    for (auto& v : out)
        v = std::min(v, 1.0);
    // Every cell is <= S, so the full-lattice entry is a sure event.
    out.back() = 1.0;
}

} // namespace

std::vector<double> convolve_cdf_joint(const JointMaxSizeTable& table, double p_in, double p_out) {
    detail::validate_probability(p_in, "p_in");
    detail::validate_probability(p_out, "p_out");
    const auto inner_pmf = binomial_pmf(table.inner_sites(), p_in);
    const auto outer_cumulative = detail::cumulative_weights(binomial_pmf(table.outer_sites(), p_out));
    std::vector<double> out(table.inner_sites() + table.outer_sites() + 1, 0.0);
    for (std::size_t n_in = 0; n_in <= table.inner_sites(); ++n_in)
        if (inner_pmf.weights[n_in] != 0.0)
            detail::accumulate_step_cdf(table.row(n_in), outer_cumulative, inner_pmf.weights[n_in], out);
    finish_joint(out);
    return out;
}

CdfEstimate estimate_cdf_inhomogeneous(const Lattice& lattice, const Subgrid& subgrid, double p_in,
                                       double p_out, std::size_t runs, std::uint64_t seed,
                                       const SimulationOptions& options) {
    detail::validate_probability(p_in, "p_in");
    detail::validate_probability(p_out, "p_out");
    if (runs == 0)
        throw InvalidArgument("runs must be positive");
    if (subgrid.size() >= lattice.site_count() || subgrid.sites().back() >= lattice.site_count())
        throw ShapeError("subgrid does not belong to this lattice");

    const std::size_t sites = lattice.site_count();
    const auto outer_sites = subgrid.complement(sites);
    const auto inner_pmf = binomial_pmf(subgrid.size(), p_in);
    const auto outer_cumulative = detail::cumulative_weights(binomial_pmf(outer_sites.size(), p_out));

    struct Scratch {
        DisjointSets inner;
        DisjointSets working;
        std::vector<std::uint32_t> row;
    };
    const std::size_t block_size = detail::block_runs(runs, sites);
    const std::size_t workers = worker_count(block_size, options.threads);
    std::vector<Scratch> scratch;
    scratch.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        scratch.push_back({DisjointSets(sites), DisjointSets(sites), {}});
    std::vector<std::vector<double>> block(block_size, std::vector<double>(sites + 1));

    detail::CdfAccumulator acc(sites);
    for (std::size_t first = 0; first < runs; first += block_size) {
        const std::size_t count = std::min(block_size, runs - first);
        parallel_for_workers(count, options.threads, [&](std::size_t worker, std::size_t i) {
            auto& s = scratch[worker];
            auto& cdf = block[i];
            RngStream rng(seed, first + i);
            const auto inner_order = pick(subgrid.sites(), random_permutation(subgrid.size(), rng));
            const auto outer_order = pick(outer_sites, random_permutation(outer_sites.size(), rng));
            std::fill(cdf.begin(), cdf.end(), 0.0);
            for_each_row(lattice, inner_order, outer_order, s.inner, s.working, s.row,
                         [&](std::size_t n_in, std::span<const std::uint32_t> row) {
                             const double w = inner_pmf.weights[n_in];
                             if (w != 0.0)
                                 detail::accumulate_step_cdf(row, outer_cumulative, w, cdf);
                         });
            finish_joint(cdf);
        });
        for (std::size_t i = 0; i < count; ++i)
            acc.add(block[i]);
    }

    CdfEstimate out;
    acc.finish(out);
    out.provenance = Provenance{lattice.rows(), lattice.cols(), lattice.topology(), std::nullopt, runs, seed,
                                InhomogeneousParams{p_in, p_out, subgrid.size(), subgrid.rect()}};
    return out;
}

} // namespace perco
