#include "output.hpp"

#include <filesystem>
#include <fstream>

#include <fmt/format.h>

#include "davies/errors.hpp"

namespace davies::cli {
namespace {

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace

std::string format_double(double x) {
  std::string s = fmt::format("{:.17g}", x);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string provenance_line(const RunConfig& c, const std::string& extra) {
  std::string line = fmt::format("# tool={} {} config_hash={}", kToolName, kToolVersion, config_hash(c));
  if (!extra.empty()) line += " " + extra;
  return line + "\n";
}

nlohmann::json provenance(const RunConfig& c) {
  return {{"tool", kToolName}, {"version", kToolVersion}, {"config_hash", config_hash(c)}};
}

std::string value_hash(const Superop& s) {
  std::string text;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      text += format_double(s.matrix()(i, k).real()) + "," + format_double(s.matrix()(i, k).imag()) + ";";
  return fnv1a(text);
}

std::string value_hash(const Complex2x2& a) {
  std::string text;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      text += format_double(a(i, k).real()) + "," + format_double(a(i, k).imag()) + ";";
  return fnv1a(text);
}

void write_file(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path);
  f << contents;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace davies::cli
