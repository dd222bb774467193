#include "davies/json_io.hpp"

#include <algorithm>
#include <cmath>

#include "davies/errors.hpp"

namespace davies {
namespace {

const char* outside_name(Outside o) { return o == Outside::kZero ? "zero" : "unconstrained"; }

Outside outside_from(const nlohmann::json& j, const std::string& key) {
  if (!j.is_string()) throw ValidationError(key + " must be \"zero\" or \"unconstrained\"");
  const std::string s = j.get<std::string>();
  if (s == "zero") return Outside::kZero;
  if (s == "unconstrained") return Outside::kUnconstrained;
  throw ValidationError(key + " must be \"zero\" or \"unconstrained\", got \"" + s + "\"");
}

double number(const nlohmann::json& j, const std::string& what) {
  if (!j.is_number()) throw ValidationError(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError(what + " must be finite");
  return v;
}

}  // namespace

nlohmann::json to_json(Complex c) { return nlohmann::json::array({c.real(), c.imag()}); }

nlohmann::json to_json(const Complex2x2& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 2; ++i) rows.push_back({to_json(a(i, 0)), to_json(a(i, 1))});
  return rows;
}

nlohmann::json to_json(const Superop& s) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 4; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < 4; ++k) row.push_back(to_json(s.matrix()(i, k)));
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json to_json(const Event& e) {
  nlohmann::json windows = nlohmann::json::array();
  auto add = [&](const ChannelEvent& c, const char* name) {
    for (const Window& w : c.windows)
      windows.push_back({{"channel", name}, {"window", {w.begin, w.end}}, {"count", w.count}});
  };
  add(e.forward, "forward");
  add(e.side, "side");
  return {{"horizon", e.horizon},
          {"forward_outside", outside_name(e.forward.outside)},
          {"side_outside", outside_name(e.side.outside)},
          {"windows", windows}};
}

Complex complex_from_json(const nlohmann::json& j, const std::string& what) {
  if (j.is_number()) return {number(j, what), 0.0};
  if (!j.is_array() || j.size() != 2) throw ValidationError(what + " must be [re, im]");
  return {number(j[0], what), number(j[1], what)};
}

Complex2x2 matrix_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
      !j[1].is_array() || j[1].size() != 2)
    throw ValidationError(what + " must be a 2x2 row-major matrix");
  Complex2x2 a;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) a(i, k) = complex_from_json(j[i][k], what);
  return a;
}

Event event_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("event must be a JSON object");
  require_known_keys(j, {"horizon", "forward_outside", "side_outside", "windows"}, "event");
  if (!j.contains("horizon")) throw ValidationError("event is missing \"horizon\"");
  Event e;
  e.horizon = number(j["horizon"], "event horizon");
  if (j.contains("forward_outside"))
    e.forward.outside = outside_from(j["forward_outside"], "forward_outside");
  if (j.contains("side_outside")) e.side.outside = outside_from(j["side_outside"], "side_outside");
  if (j.contains("windows")) {
    if (!j["windows"].is_array()) throw ValidationError("event windows must be a list");
    for (const auto& w : j["windows"]) {
      require_known_keys(w, {"channel", "window", "count"}, "event window");
      if (!w.contains("channel") || !w.contains("window") || !w.contains("count"))
        throw ValidationError("event window needs channel, window and count");
      const std::string ch = w["channel"].is_string() ? w["channel"].get<std::string>() : "";
      if (ch != "forward" && ch != "side")
        throw ValidationError("event window channel must be \"forward\" or \"side\"");
      if (!w["window"].is_array() || w["window"].size() != 2)
        throw ValidationError("event window must be [begin, end]");
      if (!w["count"].is_number_integer()) throw ValidationError("event window count must be an integer");
      Window win{number(w["window"][0], "window begin"), number(w["window"][1], "window end"),
                 w["count"].get<int>()};
      (ch == "forward" ? e.forward : e.side).windows.push_back(win);
    }
  }
  auto by_begin = [](const Window& a, const Window& b) { return a.begin < b.begin; };
  std::sort(e.forward.windows.begin(), e.forward.windows.end(), by_begin);
  std::sort(e.side.windows.begin(), e.side.windows.end(), by_begin);
  e.validate();
  return e;
}

void require_known_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                        const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ValidationError("unknown key \"" + key + "\" in " + where);
  }
}

}  // namespace davies
