#include "perco/newman_ziff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "perco/errors.hpp"
#include "perco/parallel.hpp"

namespace perco {

DisjointSets::DisjointSets(std::size_t sites) : parent_(sites), size_(sites, 1), occupied_(sites, 0) {
    std::iota(parent_.begin(), parent_.end(), SiteIndex{0});
}

void DisjointSets::clear() {
    std::iota(parent_.begin(), parent_.end(), SiteIndex{0});
    std::fill(size_.begin(), size_.end(), 1u);
    std::fill(occupied_.begin(), occupied_.end(), std::uint8_t{0});
    occupied_count_ = 0;
}

SiteIndex DisjointSets::find(SiteIndex site) noexcept {
    while (parent_[site] != site) {
        parent_[site] = parent_[parent_[site]];
        site = parent_[site];
    }
    return site;
}

std::uint32_t DisjointSets::unite(SiteIndex a, SiteIndex b) noexcept {
    SiteIndex ra = find(a);
    SiteIndex rb = find(b);
    if (ra == rb)
        return size_[ra];
    if (size_[ra] < size_[rb])
        std::swap(ra, rb);
    parent_[rb] = ra;
    size_[ra] += size_[rb];
    return size_[ra];
}

std::uint32_t DisjointSets::occupy(const Lattice& lattice, SiteIndex site) {
    if (occupied_[site])
        return component_size(site);
    occupied_[site] = 1;
    ++occupied_count_;
    std::uint32_t merged = 1;
    for (SiteIndex n : lattice.neighbors_unchecked(site))
        if (occupied_[n])
            merged = unite(site, n);
    return merged;
}

double CdfEstimate::at(std::int64_t k) const noexcept {
    if (k < 0 || values.empty())
        return 0.0;
    if (static_cast<std::size_t>(k) >= values.size())
        return 1.0;
    return values[static_cast<std::size_t>(k)];
}

MaxSizeCurve nz_curve(const Lattice& lattice, std::span<const SiteIndex> order) {
    const std::size_t sites = lattice.site_count();
    if (order.size() != sites)
        throw ShapeError("visiting order has " + std::to_string(order.size()) + " entries for " +
                         std::to_string(sites) + " sites");
    DisjointSets sets(sites);
    MaxSizeCurve curve;
    curve.size.assign(sites + 1, 0);
    std::uint32_t largest = 0;
    for (std::size_t n = 1; n <= sites; ++n) {
        const SiteIndex site = order[n - 1];
        if (site >= sites || sets.occupied(site))
            throw InvalidArgument("visiting order is not a permutation of the sites");
        largest = std::max(largest, sets.occupy(lattice, site));
        curve.size[n] = largest;
    }
    return curve;
}

MaxSizeCurve nz_run(const Lattice& lattice, RngStream& rng) {
    const auto order = random_permutation(lattice.site_count(), rng);
    return nz_curve(lattice, order);
}

BinomialPmf binomial_pmf(std::size_t trials, double p) {
    detail::validate_probability(p, "p");
    BinomialPmf pmf{trials, p, std::vector<double>(trials + 1, 0.0)};
    if (p == 0.0) {
        pmf.weights.front() = 1.0;
        return pmf;
    }
    if (p == 1.0) {
        pmf.weights.back() = 1.0;
        return pmf;
    }
    const double n = static_cast<double>(trials);
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    const double log_n_fact = std::lgamma(n + 1.0);
    double peak = -INFINITY;
    for (std::size_t k = 0; k <= trials; ++k) {
        const double kk = static_cast<double>(k);
        const double lw = log_n_fact - std::lgamma(kk + 1.0) - std::lgamma(n - kk + 1.0) + kk * log_p +
                          (n - kk) * log_q;
        pmf.weights[k] = lw;
        peak = std::max(peak, lw);
    }
    double total = 0.0;
    for (auto& w : pmf.weights) {
        w = std::exp(w - peak);
        total += w;
    }
    for (auto& w : pmf.weights)
        w /= total;
    return pmf;
}

namespace detail {

void validate_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw InvalidArgument(std::string(name) + " must lie in [0,1], got " + std::to_string(p));
}

std::size_t block_runs(std::size_t runs, std::size_t sites) {
    constexpr std::size_t kMaxRuns = 64;
    constexpr std::size_t kBudget = std::size_t{1} << 24; // per-run entries per block
    const std::size_t by_memory = std::max<std::size_t>(1, kBudget / (sites + 1));
    return std::max<std::size_t>(1, std::min({kMaxRuns, runs, by_memory}));
}

std::vector<double> cumulative_weights(const BinomialPmf& pmf) {
    std::vector<double> cumulative(pmf.weights.size());
    double running = 0.0;
    for (std::size_t n = 0; n < cumulative.size(); ++n) {
        running += pmf.weights[n];
        cumulative[n] = std::min(running, 1.0);
    }
    cumulative.back() = 1.0;
    return cumulative;
}

void accumulate_step_cdf(std::span<const std::uint32_t> curve, std::span<const double> cumulative,
                         double scale, std::span<double> out) {
    // `last` is one past the largest n with curve[n] <= k.
    std::size_t last = 0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        while (last < curve.size() && curve[last] <= k)
            ++last;
        if (last > 0)
            out[k] += scale * cumulative[last - 1];
    }
}

void CdfAccumulator::add(std::span<const double> single_run) {
    for (std::size_t k = 0; k < sum.size(); ++k) {
        sum[k] += single_run[k];
        sum_sq[k] += single_run[k] * single_run[k];
    }
    ++runs;
}

void CdfAccumulator::finish(CdfEstimate& out) const {
    const double r = static_cast<double>(runs);
    out.values.resize(sum.size());
    out.standard_errors.resize(sum.size());
    for (std::size_t k = 0; k < sum.size(); ++k) {
        const double mean = std::clamp(sum[k] / r, 0.0, 1.0);
        out.values[k] = mean;
        if (runs > 1) {
            const double var = std::max(0.0, (sum_sq[k] / r - mean * mean) * r / (r - 1.0));
            out.standard_errors[k] = std::sqrt(var / r);
        } else {
            out.standard_errors[k] = 0.0;
        }
    }
    out.values.back() = 1.0;
}

} // namespace detail

std::vector<double> convolve_cdf(const MaxSizeCurve& curve, const BinomialPmf& pmf) {
    if (curve.size.size() != pmf.weights.size())
        throw ShapeError("curve covers " + std::to_string(curve.sites()) + " sites but pmf has " +
                         std::to_string(pmf.trials) + " trials");
    std::vector<double> out(curve.size.size(), 0.0);
    const auto cumulative = detail::cumulative_weights(pmf);
    detail::accumulate_step_cdf(curve.size, cumulative, 1.0, out);
    return out;
}

std::vector<CdfEstimate> sweep(const Lattice& lattice, std::span<const double> probabilities,
                               std::size_t runs, std::uint64_t seed, const SweepOptions& options) {
    if (probabilities.empty())
        throw InvalidArgument("probability list is empty");
    if (runs == 0)
        throw InvalidArgument("runs must be positive");
    for (double p : probabilities)
        detail::validate_probability(p, "p");

    const std::size_t sites = lattice.site_count();
    const std::size_t ensembles = options.reuse_curves ? 1 : probabilities.size();
    std::vector<std::vector<double>> cumulative;
    std::vector<detail::CdfAccumulator> acc;
    for (double p : probabilities) {
        cumulative.push_back(detail::cumulative_weights(binomial_pmf(sites, p)));
        acc.emplace_back(sites);
    }

    const std::size_t block_size = detail::block_runs(runs, sites);
    std::vector<MaxSizeCurve> block(block_size);
    std::vector<std::vector<double>> scratch(probabilities.size(), std::vector<double>(sites + 1));
    for (std::size_t ensemble = 0; ensemble < ensembles; ++ensemble) {
        for (std::size_t first = 0; first < runs; first += block_size) {
            const std::size_t count = std::min(block_size, runs - first);
            parallel_for(count, options.threads, [&](std::size_t i) {
                RngStream rng(seed, ensemble * runs + first + i);
                block[i] = nz_run(lattice, rng);
            });
            // Each probability reduces its own accumulator in run order.
            const std::size_t targets = options.reuse_curves ? probabilities.size() : 1;
            parallel_for(targets, options.threads, [&](std::size_t t) {
                const std::size_t j = options.reuse_curves ? t : ensemble;
                auto& single = scratch[j];
                for (std::size_t i = 0; i < count; ++i) {
                    std::fill(single.begin(), single.end(), 0.0);
                    detail::accumulate_step_cdf(block[i].size, cumulative[j], 1.0, single);
                    acc[j].add(single);
                }
            });
        }
    }

    std::vector<CdfEstimate> out(probabilities.size());
    for (std::size_t j = 0; j < probabilities.size(); ++j) {
        acc[j].finish(out[j]);
        out[j].provenance = Provenance{lattice.rows(), lattice.cols(), lattice.topology(), probabilities[j],
                                       runs, seed, std::nullopt};
    }
    return out;
}

CdfEstimate estimate_cdf(const Lattice& lattice, double p, std::size_t runs, std::uint64_t seed,
                         const SimulationOptions& options) {
    const double probs[] = {p};
    SweepOptions sweep_options;
    sweep_options.threads = options.threads;
    return std::move(sweep(lattice, probs, runs, seed, sweep_options).front());
}

std::vector<double> reference_sweep_probabilities() {
    return {0.1, 0.2, 0.3, 0.4, 0.42, 0.44, 0.46, 0.48, 0.5, 0.52, 0.54, 0.56, 0.58, 0.6, 0.7, 0.8, 0.9};
}

} // namespace perco
