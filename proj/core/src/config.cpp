#include "davies/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "davies/errors.hpp"
#include "davies/json_io.hpp"

namespace davies {
namespace {

double finite_number(const nlohmann::json& j, const char* key) {
  if (!j.is_number()) throw ValidationError(std::string(key) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError(std::string(key) + " must be finite");
  return v;
}

template <class Int>
Int integer(const nlohmann::json& j, const char* key, Int lo) {
  if (!j.is_number_integer()) throw ValidationError(std::string(key) + " must be an integer");
  if (j.is_number_unsigned()) {
    const auto v = j.get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(std::numeric_limits<Int>::max()))
      throw ValidationError(std::string(key) + " is out of range");
    return static_cast<Int>(v);
  }
  const auto v = j.get<std::int64_t>();
  if (v < static_cast<std::int64_t>(lo)) throw ValidationError(std::string(key) + " is out of range");
  return static_cast<Int>(v);
}

Complex2x2 state_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "ground") return DensityMatrix::ground().matrix();
    if (s == "excited") return DensityMatrix::excited().matrix();
    if (s == "mixed") return DensityMatrix::maximally_mixed().matrix();
    throw ValidationError("initial_state must be ground, excited, mixed or a 2x2 matrix");
  }
  const Complex2x2 rho = matrix_from_json(j, "initial_state");
  DensityMatrix::from_matrix(rho);
  return rho;
}

}  // namespace

std::vector<double> GridSpec::values() const {
  std::vector<double> out;
  if (points <= 0) return out;
  if (points == 1) return {start};
  for (int i = 0; i < points; ++i) out.push_back(start + (stop - start) * i / (points - 1));
  return out;
}

Model RunConfig::model() const { return build_model(kappa_f, kappa_s, z); }

DensityMatrix RunConfig::initial() const { return DensityMatrix::from_matrix(initial_state); }

DaviesOptions RunConfig::davies_options() const {
  return DaviesOptions{n_max, quad_order, max_segment_length};
}

OracleOptions RunConfig::oracle_options() const { return OracleOptions{oracle_n_max, m_tau, quad_order}; }

const char* mode_name(SamplerMode m) {
  return m == SamplerMode::kSideOnly ? "side-only" : "two-channel";
}

SamplerMode mode_from_name(const std::string& s) {
  if (s == "side-only") return SamplerMode::kSideOnly;
  if (s == "two-channel") return SamplerMode::kTwoChannel;
  throw ValidationError("mode must be side-only or two-channel, got \"" + s + "\"");
}

RunConfig parse_config(const nlohmann::json& j) {
  require_known_keys(j,
                     {"kappa_f", "kappa_s", "z", "n_max", "quad_order", "max_segment_length",
                      "oracle_n_max", "m_tau", "master_seed", "n_traj", "horizon", "grid",
                      "output_dir", "mode", "threads", "initial_state", "observable", "events"},
                     "config");
  RunConfig c;
  if (j.contains("kappa_f")) c.kappa_f = complex_from_json(j["kappa_f"], "kappa_f");
  if (j.contains("kappa_s")) c.kappa_s = complex_from_json(j["kappa_s"], "kappa_s");
  if (j.contains("z")) c.z = complex_from_json(j["z"], "z");
  if (j.contains("n_max")) c.n_max = integer<int>(j["n_max"], "n_max", 0);
  if (j.contains("quad_order")) c.quad_order = integer<int>(j["quad_order"], "quad_order", 1);
  if (j.contains("max_segment_length")) {
    c.max_segment_length = finite_number(j["max_segment_length"], "max_segment_length");
    if (!(c.max_segment_length > 0.0)) throw ValidationError("max_segment_length must be positive");
  }
  if (j.contains("oracle_n_max")) c.oracle_n_max = integer<int>(j["oracle_n_max"], "oracle_n_max", 0);
  if (j.contains("m_tau")) c.m_tau = integer<int>(j["m_tau"], "m_tau", 0);
  if (j.contains("master_seed"))
    c.master_seed = integer<std::uint64_t>(j["master_seed"], "master_seed", 0);
  if (j.contains("n_traj")) c.n_traj = integer<std::size_t>(j["n_traj"], "n_traj", 0);
  if (j.contains("horizon")) {
    c.horizon = finite_number(j["horizon"], "horizon");
    if (c.horizon < 0.0) throw ValidationError("horizon must be non-negative");
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    require_known_keys(g, {"start", "stop", "points"}, "grid");
    if (g.contains("start")) c.grid.start = finite_number(g["start"], "grid.start");
    if (g.contains("stop")) c.grid.stop = finite_number(g["stop"], "grid.stop");
    if (g.contains("points")) c.grid.points = integer<int>(g["points"], "grid.points", 1);
    if (c.grid.start < 0.0 || c.grid.stop < c.grid.start)
      throw ValidationError("grid needs 0 <= start <= stop");
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw ValidationError("output_dir must be a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) throw ValidationError("mode must be a string");
    c.mode = mode_from_name(j["mode"].get<std::string>());
  }
  if (j.contains("threads")) c.threads = integer<unsigned>(j["threads"], "threads", 1);
  if (j.contains("initial_state")) c.initial_state = state_from_json(j["initial_state"]);
  if (j.contains("observable")) c.observable = matrix_from_json(j["observable"], "observable");
  if (j.contains("events")) {
    if (!j["events"].is_array()) throw ValidationError("events must be a list");
    for (const auto& e : j["events"]) c.events.push_back(event_from_json(e));
  }
  c.model();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("malformed config " + path + ": " + e.what());
  }
  return parse_config(j);
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json events = nlohmann::json::array();
  for (const Event& e : c.events) events.push_back(to_json(e));
  return {{"kappa_f", to_json(c.kappa_f)},
          {"kappa_s", to_json(c.kappa_s)},
          {"z", to_json(c.z)},
          {"n_max", c.n_max},
          {"quad_order", c.quad_order},
          {"max_segment_length", c.max_segment_length},
          {"oracle_n_max", c.oracle_n_max},
          {"m_tau", c.m_tau},
          {"master_seed", c.master_seed},
          {"n_traj", c.n_traj},
          {"horizon", c.horizon},
          {"grid", {{"start", c.grid.start}, {"stop", c.grid.stop}, {"points", c.grid.points}}},
          {"output_dir", c.output_dir},
          {"mode", mode_name(c.mode)},
          {"threads", c.threads},
          {"initial_state", to_json(c.initial_state)},
          {"observable", to_json(c.observable)},
          {"events", events}};
}

std::string config_hash(const RunConfig& c) {
  nlohmann::json j = to_json(c);
  j.erase("threads");
  j.erase("output_dir");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[i] = hex[h & 0xf];
  return out;
}

}  // namespace davies
