#include "perco/distribution_io.hpp"

#include <charconv>
#include <json.hpp>

#include "perco/errors.hpp"
#include "perco/image.hpp"

namespace perco {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string cdf_to_csv(const CdfEstimate& cdf) {
    std::string out = "k,cdf\n";
    out.reserve(out.size() + cdf.values.size() * 24);
    for (std::size_t k = 0; k < cdf.values.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += format_double(cdf.values[k]);
        out += '\n';
    }
    return out;
}

std::vector<double> cdf_values_from_csv(std::string_view csv) {
    constexpr std::string_view header = "k,cdf";
    std::size_t pos = 0;
    auto next_line = [&](std::string_view& line) {
        if (pos >= csv.size())
            return false;
        auto end = csv.find('\n', pos);
        if (end == std::string_view::npos)
            end = csv.size();
        line = csv.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        pos = end + 1;
        return true;
    };

    std::string_view line;
    if (!next_line(line) || line != header)
        throw ParseError("distribution CSV must start with header 'k,cdf'", 0);
    std::vector<double> values;
    for (;;) {
        const std::size_t line_start = pos;
        if (!next_line(line))
            break;
        if (line.empty()) {
            if (pos >= csv.size())
                break;
            throw ParseError("blank line in distribution CSV", line_start);
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos)
            throw ParseError("expected 'k,cdf' row", line_start);
        std::size_t k = 0;
        const auto k_text = line.substr(0, comma);
        auto [kp, kec] = std::from_chars(k_text.data(), k_text.data() + k_text.size(), k);
        if (kec != std::errc() || kp != k_text.data() + k_text.size())
            throw ParseError("malformed k", line_start);
        if (k != values.size())
            throw ParseError("rows must list k = 0, 1, 2, ... in order", line_start);
        double v = 0.0;
        const auto v_text = line.substr(comma + 1);
        auto [vp, vec] = std::from_chars(v_text.data(), v_text.data() + v_text.size(), v);
        if (vec != std::errc() || vp != v_text.data() + v_text.size())
            throw ParseError("malformed cdf value", line_start + comma + 1);
        values.push_back(v);
    }
    if (values.empty())
        throw ParseError("distribution CSV has no rows", csv.size());
    return values;
}

std::string provenance_to_json(const Provenance& prov) {
    ordered_json j;
    j["rows"] = prov.rows;
    j["cols"] = prov.cols;
    j["topology"] = topology_degree(prov.topology);
    j["p"] = prov.p ? json(*prov.p) : json(nullptr);
    j["runs"] = prov.runs;
    j["seed"] = prov.seed;
    if (prov.inhomogeneous) {
        const auto& in = *prov.inhomogeneous;
        j["p_in"] = in.p_in;
        j["p_out"] = in.p_out;
        j["subgrid_sites"] = in.subgrid_sites;
        if (in.rect) {
            j["subgrid_top"] = in.rect->top;
            j["subgrid_left"] = in.rect->left;
            j["subgrid_height"] = in.rect->height;
            j["subgrid_width"] = in.rect->width;
        }
    }
    return j.dump(2) + "\n";
}

Provenance provenance_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("metadata is not valid JSON: ") + e.what(), e.byte);
    }
    try {
        Provenance prov;
        prov.rows = j.at("rows").get<std::size_t>();
        prov.cols = j.at("cols").get<std::size_t>();
        prov.topology = parse_topology(std::to_string(j.at("topology").get<int>()));
        if (j.contains("p") && !j.at("p").is_null())
            prov.p = j.at("p").get<double>();
        prov.runs = j.at("runs").get<std::size_t>();
        prov.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("p_in")) {
            InhomogeneousParams in;
            in.p_in = j.at("p_in").get<double>();
            in.p_out = j.at("p_out").get<double>();
            in.subgrid_sites = j.at("subgrid_sites").get<std::size_t>();
            if (j.contains("subgrid_top"))
                in.rect = SubgridRect{j.at("subgrid_top").get<std::size_t>(), j.at("subgrid_left").get<std::size_t>(),
                                      j.at("subgrid_height").get<std::size_t>(),
                                      j.at("subgrid_width").get<std::size_t>()};
            prov.inhomogeneous = in;
        }
        return prov;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad metadata field: ") + e.what(), 0);
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("bad metadata field: ") + e.what(), 0);
    }
}

std::filesystem::path metadata_path(const std::filesystem::path& csv_path) {
    auto out = csv_path;
    out.replace_extension(".json");
    return out;
}

void save_cdf(const CdfEstimate& cdf, const std::filesystem::path& csv_path) {
    write_file(csv_path, cdf_to_csv(cdf));
    write_file(metadata_path(csv_path), provenance_to_json(cdf.provenance));
}

CdfEstimate load_cdf(const std::filesystem::path& csv_path) {
    CdfEstimate cdf;
    cdf.values = cdf_values_from_csv(read_file(csv_path));
    cdf.provenance = provenance_from_json(read_file(metadata_path(csv_path)));
    if (cdf.values.size() != cdf.provenance.site_count() + 1)
        throw ParseError(csv_path.string() + " has " + std::to_string(cdf.values.size()) +
                             " rows but its metadata describes " + std::to_string(cdf.provenance.site_count()) +
                             " sites",
                         0);
    return cdf;
}

std::string detection_to_json(const DetectionResult& result) {
    ordered_json j;
    j["observed_max"] = result.observed_max;
    j["critical_value"] = result.critical_value;
    j["p_value"] = result.p_value;
    j["alpha"] = result.alpha;
    j["detected"] = result.detected;
    return j.dump(2) + "\n";
}

} // namespace perco
