#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "perco/lattice.hpp"
#include "perco/rng.hpp"

namespace perco {

/// Union-find over lattice sites with union by size and path halving.
/// Sites start unoccupied; only occupied sites take part in unions.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t sites);

    void clear();

    bool occupied(SiteIndex site) const noexcept { return occupied_[site] != 0; }
    std::size_t occupied_count() const noexcept { return occupied_count_; }

    SiteIndex find(SiteIndex site) noexcept;

    /// Merges the components of two occupied sites; returns the size of the
    /// merged component.
    std::uint32_t unite(SiteIndex a, SiteIndex b) noexcept;

    std::uint32_t component_size(SiteIndex site) noexcept { return size_[find(site)]; }

    /// Occupies `site` and joins it with every occupied neighbor.
    /// Returns the size of the component now containing it.
    std::uint32_t occupy(const Lattice& lattice, SiteIndex site);

private:
    std::vector<SiteIndex> parent_;
    std::vector<std::uint32_t> size_;
    std::vector<std::uint8_t> occupied_;
    std::size_t occupied_count_ = 0;
};

/// Largest cluster size as sites are occupied one by one along a visiting
/// order: size[n] for n = 0..S, with size[0] = 0.
struct MaxSizeCurve {
    std::vector<std::uint32_t> size;

    std::size_t sites() const noexcept { return size.empty() ? 0 : size.size() - 1; }
};

/// Bin(trials, p) weights b(0..trials).
struct BinomialPmf {
    std::size_t trials = 0;
    double p = 0.0;
    std::vector<double> weights;
};

/// Subgrid rectangle in 0-based lattice coordinates.
struct SubgridRect {
    std::size_t top = 0;
    std::size_t left = 0;
    std::size_t height = 0;
    std::size_t width = 0;

    friend bool operator==(const SubgridRect&, const SubgridRect&) = default;
};

struct InhomogeneousParams {
    double p_in = 0.0;
    double p_out = 0.0;
    std::size_t subgrid_sites = 0;
    std::optional<SubgridRect> rect; // absent for arbitrary site lists

    friend bool operator==(const InhomogeneousParams&, const InhomogeneousParams&) = default;
};

/// Where an estimate came from. `p` is set for homogeneous estimates and
/// `inhomogeneous` for two-region ones.
struct Provenance {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Topology topology = Topology::Four;
    std::optional<double> p;
    std::size_t runs = 0;
    std::uint64_t seed = 0;
    std::optional<InhomogeneousParams> inhomogeneous;

    std::size_t site_count() const noexcept { return rows * cols; }
    friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Estimated P(M <= k) for k = 0..S.
struct CdfEstimate {
    std::vector<double> values;
    /// Monte Carlo standard error of each value (empty when not computed,
    /// e.g. for estimates read back from disk).
    std::vector<double> standard_errors;
    Provenance provenance;

    std::size_t max_size() const noexcept { return values.empty() ? 0 : values.size() - 1; }
    /// P(M <= k); 0 for k < 0 and 1 for k >= S.
    double at(std::int64_t k) const noexcept;
};

struct SimulationOptions {
    unsigned threads = 0; // 0 = hardware concurrency; results never depend on it
};

struct SweepOptions : SimulationOptions {
    /// One ensemble of curves convolved at every probability. When false,
    /// probability j gets its own runs on streams j*runs .. j*runs+runs-1.
    bool reuse_curves = true;
};


/// One Newman-Ziff run: occupy sites in the order of a random permutation
/// drawn from `rng` and record the largest cluster after each addition.
MaxSizeCurve nz_run(const Lattice& lattice, RngStream& rng);

/// Same as nz_run with a caller-supplied visiting order.
MaxSizeCurve nz_curve(const Lattice& lattice, std::span<const SiteIndex> order);

/// Weights are computed from log-factorials and renormalised, so trials in
/// the millions are fine. Throws InvalidArgument for p outside [0,1].
BinomialPmf binomial_pmf(std::size_t trials, double p);

/// Single-run estimate F(k) = sum_n 1{size[n] <= k} b(n), k = 0..S.
/// Throws ShapeError when the curve and pmf lengths differ.
std::vector<double> convolve_cdf(const MaxSizeCurve& curve, const BinomialPmf& pmf);

/// Mean of convolve_cdf over `runs` curves from streams (seed, 0..runs-1).
CdfEstimate estimate_cdf(const Lattice& lattice, double p, std::size_t runs, std::uint64_t seed,
                         const SimulationOptions& options = {});

/// estimate_cdf at every probability in the list.
std::vector<CdfEstimate> sweep(const Lattice& lattice, std::span<const double> probabilities,
                               std::size_t runs, std::uint64_t seed, const SweepOptions& options = {});

/// Probabilities of the reference 55x55 triangular sweep.
std::vector<double> reference_sweep_probabilities();

namespace detail {

/// Cumulative Bin weights with the last entry pinned to exactly 1.
std::vector<double> cumulative_weights(const BinomialPmf& pmf);

/// Adds scale * F to `out`, where F(k) = cumulative[last(k)] and last(k) is
/// the largest n with curve[n] <= k (F(k) = 0 if there is none). `curve`
/// must be nondecreasing.
void accumulate_step_cdf(std::span<const std::uint32_t> curve, std::span<const double> cumulative,
                         double scale, std::span<double> out);

/// Running sums of per-run CDFs, reduced in run order.
struct CdfAccumulator {
    std::vector<double> sum;
    std::vector<double> sum_sq;
    std::size_t runs = 0;

    explicit CdfAccumulator(std::size_t max_size) : sum(max_size + 1, 0.0), sum_sq(max_size + 1, 0.0) {}
    void add(std::span<const double> single_run);
    /// Mean, clamped to [0,1] with F(S) = 1, plus standard errors.
    void finish(CdfEstimate& out) const;
};

void validate_probability(double p, const char* name);

/// Runs simulated per parallel block: at most 64, fewer on large lattices
/// to bound per-run buffers. Per-run results are always reduced in run
/// order, so the block size never changes the output.
std::size_t block_runs(std::size_t runs, std::size_t sites);

} // namespace detail

} // namespace perco
