#include "perco/detection.hpp"

#include <string>

#include "perco/errors.hpp"

namespace perco {

NullDistribution::NullDistribution(CdfEstimate cdf) : cdf_(std::move(cdf)) {
    const auto& v = cdf_.values;
    if (v.empty())
        throw InvalidArgument("null distribution is empty");
    if (v.size() != cdf_.provenance.site_count() + 1)
        throw InvalidArgument("null distribution has " + std::to_string(v.size()) + " values for a " +
                              std::to_string(cdf_.provenance.rows) + "x" +
                              std::to_string(cdf_.provenance.cols) + " lattice");
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!(v[k] >= 0.0 && v[k] <= 1.0))
            throw InvalidArgument("null CDF value outside [0,1] at k=" + std::to_string(k));
        if (k > 0 && v[k] < v[k - 1])
            throw InvalidArgument("null CDF decreases at k=" + std::to_string(k));
    }
    if (v.back() != 1.0)
        throw InvalidArgument("null CDF must reach 1 at k=S");
}

void NullDistribution::check_lattice(const Lattice& lattice) const {
    const auto& prov = provenance();
    if (lattice.rows() != prov.rows || lattice.cols() != prov.cols || lattice.topology() != prov.topology)
        throw ProvenanceError("null distribution was simulated for a " + std::to_string(prov.rows) + "x" +
                              std::to_string(prov.cols) + " lattice with topology " +
                              std::string(to_string(prov.topology)) + ", not " +
                              std::to_string(lattice.rows()) + "x" + std::to_string(lattice.cols()) +
                              " with topology " + std::string(to_string(lattice.topology())));
}

std::size_t critical_value(const NullDistribution& null, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw InvalidArgument("alpha must lie in (0,1]");
    const std::size_t sites = null.site_count();
    for (std::size_t k = 0; k <= sites; ++k)
        if (null.tail(static_cast<std::int64_t>(k)) <= alpha)
            return k;
    return sites + 1;
}

DetectionResult detect(const BinaryImage& image, const Lattice& lattice, const NullDistribution& null,
                       double alpha) {
    null.check_lattice(lattice);
    DetectionResult result;
    result.alpha = alpha;
    result.critical_value = critical_value(null, alpha);
    result.observed_max = label_components(image, lattice).largest;
    result.p_value = null.tail(result.observed_max);
    result.detected = result.observed_max >= result.critical_value;
    return result;
}

PowerEstimate power_estimate(const Lattice& lattice, const Subgrid& subgrid, double p_in, double p_out,
                             double alpha, std::size_t runs, std::uint64_t seed,
                             const SimulationOptions& options) {
    detail::validate_probability(p_in, "p_in");
    detail::validate_probability(p_out, "p_out");
    if (p_in < p_out)
        throw InvalidArgument("power is defined for p_in >= p_out");
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw InvalidArgument("alpha must lie in (0,1]");

    const NullDistribution null(estimate_cdf(lattice, p_out, runs, seed, options));
    PowerEstimate out;
    out.critical_value = critical_value(null, alpha);
    if (out.critical_value > null.site_count()) {
        out.never_rejects = true;
        out.beta = 1.0;
        out.power = 0.0;
        out.achieved_size = 0.0;
        return out;
    }
    const auto t = static_cast<std::int64_t>(out.critical_value);
    out.achieved_size = null.tail(t);
    const auto alternative = estimate_cdf_inhomogeneous(lattice, subgrid, p_in, p_out, runs, seed, options);
    out.beta = alternative.at(t - 1);
    out.power = 1.0 - out.beta;
    return out;
}

} // namespace perco
