#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "davies/config.hpp"
#include "davies/linalg.hpp"

namespace davies::cli {

// 17 significant digits, always with a decimal point or exponent.
std::string format_double(double x);

// "# tool=davies 1.0.0 config_hash=<hash>" plus extra key=value pairs.
std::string provenance_line(const RunConfig& c, const std::string& extra = "");
nlohmann::json provenance(const RunConfig& c);

// FNV-1a over the 17-digit rendering of every entry.
std::string value_hash(const Superop& s);
std::string value_hash(const Complex2x2& a);

void write_file(const std::string& path, const std::string& contents);
std::string join_path(const std::string& dir, const std::string& name);

}  // namespace davies::cli
