#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "perco/detection.hpp"
#include "perco/newman_ziff.hpp"

namespace perco {

/// "k,cdf" header followed by rows k = 0..S. Values use the shortest
/// decimal form that reads back to the same double.
std::string cdf_to_csv(const CdfEstimate& cdf);

/// Parses cdf_to_csv output. Throws ParseError with the byte offset of the
/// offending row.
std::vector<double> cdf_values_from_csv(std::string_view csv);

/// {rows, cols, topology, p, runs, seed}; two-region estimates add
/// {p_in, p_out, subgrid_sites} and, for rectangles, {subgrid_top,
/// subgrid_left, subgrid_height, subgrid_width}.
std::string provenance_to_json(const Provenance& provenance);
Provenance provenance_from_json(std::string_view json);

/// Sidecar metadata path: the CSV path with a .json extension.
std::filesystem::path metadata_path(const std::filesystem::path& csv_path);

/// Writes the CSV and its JSON sidecar.
void save_cdf(const CdfEstimate& cdf, const std::filesystem::path& csv_path);

/// Reads a CSV and its sidecar. Throws ParseError when either is malformed
/// or the CSV length disagrees with the metadata.
CdfEstimate load_cdf(const std::filesystem::path& csv_path);

/// {observed_max, critical_value, p_value, alpha, detected}.
std::string detection_to_json(const DetectionResult& result);

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

} // namespace perco
