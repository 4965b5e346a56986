#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hinm/config.hpp"
#include "hinm/encoding.hpp"
#include "hinm/oracle.hpp"
#include "hinm/permutation.hpp"
#include "hinm/report.hpp"
#include "hinm/spmm.hpp"

namespace hinm {

/// Rounds to 9 significant decimal digits; every binary32 value survives.
double round_sig9(double value);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Keys are the HiNMConfig field names. Missing keys keep their defaults;
/// unknown keys and wrong types raise ValueError.
HiNMConfig config_from_json(std::string_view text);
std::string config_to_json(const HiNMConfig& cfg);
HiNMConfig load_config(const std::filesystem::path& path);

/// {"rows", "cols", "vector_size", "nm_keep", "nm_group", "sigma_o",
///  "tiles": [{"vector_index", "nm_index", "kept_values"}], "config"}
std::string encoding_to_json(const HiNMEncoding& enc, const HiNMConfig& cfg);
/// Throws FormatError on malformed documents.
HiNMEncoding encoding_from_json(std::string_view text);
HiNMEncoding load_encoding(const std::filesystem::path& path);

std::string permutation_to_json(const GyroPermutation& sigma);
GyroPermutation permutation_from_json(std::string_view text);

std::string report_to_json(const PruneReport& report);
std::string oracle_report_to_json(const OracleReport& report);
std::string shuffle_report_to_json(const ShuffleReport& report);

/// {"layers": ["a.json", ...], "relu": false}; relative paths resolve against
/// the manifest's directory.
LayerChain load_chain_manifest(const std::filesystem::path& path);

}  // namespace hinm
