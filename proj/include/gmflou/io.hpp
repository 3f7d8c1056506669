#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "gmflou/flou.hpp"
#include "gmflou/functional.hpp"

namespace gmflou {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

/// Header t,rep_0,...,rep_{R-1}; one row per grid time.
void write_paths_csv(std::ostream& os, const PathEnsemble& ens);
/// Two columns "t value" per replica, replicas separated by blank lines.
void write_paths_gnuplot(std::ostream& os, const PathEnsemble& ens);
/// One column "lambda".
void write_lambda_csv(std::ostream& os, const LambdaSample& sample);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

/// {config, seed, config_hash, version}.
nlohmann::json sidecar(const nlohmann::json& config, std::uint64_t seed);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace gmflou
