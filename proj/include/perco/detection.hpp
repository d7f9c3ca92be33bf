#pragma once

#include <cstdint>

#include "perco/clustering.hpp"
#include "perco/newman_ziff_modified.hpp"

namespace perco {

/// Null law of the largest cluster size, P(M <= k) under pure noise.
class NullDistribution {
public:
    /// Throws InvalidArgument unless the values are a CDF on 0..S with
    /// S = rows * cols of the provenance: nondecreasing, inside [0,1],
    /// ending at 1.
    explicit NullDistribution(CdfEstimate cdf);

    const CdfEstimate& cdf() const noexcept { return cdf_; }
    const Provenance& provenance() const noexcept { return cdf_.provenance; }
    std::size_t site_count() const noexcept { return cdf_.max_size(); }

    /// P(M >= k) = 1 - F(k - 1).
    double tail(std::int64_t k) const noexcept { return 1.0 - cdf_.at(k - 1); }

    /// Throws ProvenanceError unless the lattice has the null's dimensions
    /// and topology.
    void check_lattice(const Lattice& lattice) const;

private:
    CdfEstimate cdf_;
};

struct DetectionResult {
    std::uint32_t observed_max = 0;
    std::size_t critical_value = 0; ///< S + 1 when no cluster size can reject
    double p_value = 1.0;
    double alpha = 0.0;
    bool detected = false;
};

/// Smallest k with P(M >= k) <= alpha, or S + 1 when not even k = S
/// qualifies. Throws InvalidArgument unless 0 < alpha <= 1.
std::size_t critical_value(const NullDistribution& null, double alpha);

/// Rejects pure noise when the largest cluster reaches the critical value.
DetectionResult detect(const BinaryImage& image, const Lattice& lattice, const NullDistribution& null,
                       double alpha);

struct PowerEstimate {
    double beta = 1.0;              ///< type II error, P_alt(M < t)
    double power = 0.0;             ///< 1 - beta
    std::size_t critical_value = 0; ///< t from the homogeneous null at p_out
    double achieved_size = 0.0;     ///< P_null(M >= t), at most alpha
    bool never_rejects = false;     ///< t is the S + 1 sentinel; beta is 1
};

/// Type II error of the level-alpha test against an object that raises the
/// occupation probability to p_in on `subgrid`. The null is simulated at
/// p_out with streams (seed, r) and the alternative with the same seed.
/// Throws InvalidArgument when p_in < p_out.
PowerEstimate power_estimate(const Lattice& lattice, const Subgrid& subgrid, double p_in, double p_out,
                             double alpha, std::size_t runs, std::uint64_t seed,
                             const SimulationOptions& options = {});

} // namespace perco
