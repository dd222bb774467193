#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "davies/davies_map.hpp"
#include "davies/event.hpp"
#include "davies/guichardet.hpp"
#include "davies/linalg.hpp"
#include "davies/model.hpp"
#include "davies/trajectory.hpp"

namespace davies {

inline constexpr const char* kToolName = "davies";
inline constexpr const char* kToolVersion = "1.0.0";

// Uniform grid of `points` values from start to stop inclusive.
struct GridSpec {
  double start = 0.0;
  double stop = 10.0;
  int points = 101;

  std::vector<double> values() const;
};

struct RunConfig {
  Complex kappa_f{0.70710678118654752, 0.0};
  Complex kappa_s{0.70710678118654752, 0.0};
  Complex z{1.0, 0.0};

  int n_max = 6;
  int quad_order = 24;
  double max_segment_length = 1.0;
  int oracle_n_max = 4;
  int m_tau = 6;

  std::uint64_t master_seed = 0;
  std::size_t n_traj = 1000;
  double horizon = 50.0;
  GridSpec grid;
  std::string output_dir = "out";
  SamplerMode mode = SamplerMode::kSideOnly;
  unsigned threads = 1;

  // Density matrix at time 0; "ground", "excited", "mixed" or a 2x2 matrix.
  Complex2x2 initial_state = DensityMatrix::ground().matrix();
  // Observable A evolved by the `evolve` subcommand.
  Complex2x2 observable = Model::P();
  std::vector<Event> events;

  Model model() const;
  DensityMatrix initial() const;
  DaviesOptions davies_options() const;
  OracleOptions oracle_options() const;
};

// Missing keys keep their defaults; unknown keys throw ValidationError.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& c);

// FNV-1a 64-bit hash of the compact serialized config, as 16 hex digits.
// threads and output_dir do not enter the hash.
std::string config_hash(const RunConfig& c);

const char* mode_name(SamplerMode m);
SamplerMode mode_from_name(const std::string& s);

}  // namespace davies
