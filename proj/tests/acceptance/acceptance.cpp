#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "davies/davies_map.hpp"
#include "davies/guichardet.hpp"
#include "davies/model.hpp"

namespace fs = std::filesystem;
using namespace davies;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

Model random_model(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double theta = 0.5 * M_PI * u(rng);
  return build_model(std::polar(std::cos(theta), 2 * M_PI * u(rng)),
                     std::polar(std::sin(theta), 2 * M_PI * u(rng)),
                     std::polar(2.0 * u(rng), 2 * M_PI * u(rng)));
}

Complex2x2 E21() {
  Complex2x2 v = Complex2x2::Zero();
  v(1, 0) = 1.0;
  return v;
}

Complex2x2 P() {
  Complex2x2 p = Complex2x2::Zero();
  p(0, 0) = 1.0;
  return p;
}

// exp(tG) with G = -1/2 (|z|^2 + P + 2 z Vf*) written out entrywise.
Complex2x2 b_formula(const Model& m, double t) {
  const Complex z = m.z();
  Complex2x2 g;
  g << -(std::norm(z) + 1.0) / 2.0, -z * std::conj(m.kappa_f()), 0.0, -std::norm(z) / 2.0;
  return mat_exp(g, t);
}

Outcome dilation() {
  const Model m = build_model(kR, kR, 0.0);
  OracleOptions o;
  o.n_max = 4;
  const std::vector<Complex2x2> obs{Complex2x2::Identity(), P(), E21(), E21() + E21().adjoint()};
  double worst = 0.0;
  for (double t : {0.25, 0.5, 1.0}) {
    const Superop oracle = oracle_davies_map(m, Event::full(t), o).map;
    const Superop semigroup = superop_exp(lindblad_generator(m), t);
    for (const Complex2x2& a : obs) worst = std::max(worst, frobenius_dist(oracle(a), semigroup(a)));
  }
  return {worst <= 1e-7, fmt::format("max distance {:.3g} (tol 1e-7)", worst)};
}

Outcome ideality() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Model m = random_model(rng);
    const double t = 2.0 * (1.0 - u(rng));
    worst = std::max(worst, frobenius_dist(davies_map(m, Event::no_photons(t)).map,
                                           ad_map(b_formula(m, t))));
  }
  return {worst <= 1e-10, fmt::format("max distance {:.3g} over 20 models (tol 1e-10)", worst)};
}

Outcome axioms() {
  const Model m = symmetric_model();
  const DaviesOptions opts;

  double choi = 1.0;
  const std::vector<Event> events{
      Event::no_photons(1.0), Event::full(0.5),
      {ChannelEvent::exactly(1, 0.5, 1.0), ChannelEvent::exactly(1, 0.0, 0.4), 1.0},
      {ChannelEvent::any(), ChannelEvent::exactly(2, 0.0, 0.6), 0.6}};
  for (const Event& e : events) choi = std::min(choi, choi_min_eigenvalue(davies_map(m, e, opts).map));

  const double t = 0.5;
  Superop sum;
  for (int k = 0; k <= opts.n_max; ++k)
    sum += davies_map(m, {ChannelEvent::any(), ChannelEvent::exactly(k, 0.0, t), t}, opts).map;
  const double additivity = frobenius_dist(sum, davies_map(m, Event::full(t), opts).map);

  const MapResult full = davies_map(m, Event::full(0.1), opts);
  const double normalization =
      frobenius_dist(full.map(Complex2x2::Identity()), Complex2x2::Identity());

  std::vector<double> lx, ly;
  for (double s : {1e-1, 1e-2, 1e-3, 1e-4}) {
    lx.push_back(std::log10(s));
    ly.push_back(std::log10(frobenius_dist(davies_map(m, Event::full(s), opts).map(P()), P())));
  }
  const double mx = (lx[0] + lx[1] + lx[2] + lx[3]) / 4, my = (ly[0] + ly[1] + ly[2] + ly[3]) / 4;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 4; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;

  const Event a{ChannelEvent::exactly(1, 0.1, 0.3), ChannelEvent::none(), 0.4};
  const Event b{ChannelEvent::none(), ChannelEvent::exactly(1, 0.2, 0.5), 0.6};
  const double composition = frobenius_dist(davies_map(m, concatenate(a, b), opts).map,
                                             davies_map(m, a, opts).map * davies_map(m, b, opts).map);

  const bool pass = choi >= -1e-10 && additivity <= 1e-8 && normalization <= 1e-8 &&
                    std::abs(slope - 1.0) <= 0.1 && composition <= 1e-7;
  return {pass, fmt::format("choi_min {:.3g}, additivity {:.3g}, normalization {:.3g}, "
                            "continuity slope {:.3f}, composition {:.3g}",
                            choi, additivity, normalization, slope, composition)};
}

Outcome bounded_rate() {
  std::vector<double> ts;
  for (int k = 0; k <= 12; ++k) ts.push_back(std::pow(10.0, -3.0 + 0.25 * k));
  std::mt19937_64 rng(7);
  double worst_k = 0.0, worst_bound = 0.0;
  int violations = 0;
  for (int i = 0; i < 10; ++i) {
    const Model m = random_model(rng);
    const BoundedRateReport r = bounded_rate_check(m, ts);
    for (const auto& e : r.entries) {
      worst_k = std::min(worst_k, e.min_slack);
      violations += e.holds ? 0 : 1;
    }
    const double rate = detection_rate_bound(m);
    for (double t : ts) {
      const Complex2x2 b = no_jump_B(m, t);
      const Complex2x2 gap =
          t * rate * Complex2x2::Identity() - (Complex2x2::Identity() - b.adjoint() * b);
      worst_bound = std::min(worst_bound, min_hermitian_eigenvalue(gap));
    }
  }
  return {violations == 0,
          fmt::format("K = 2|z|^2|kappa_f|^2 + 1: worst slack {:.3g}, {} of 130 points violate; "
                      "with the detection-rate bound instead: worst slack {:.3g}",
                      worst_k, violations, worst_bound)};
}

Outcome jump_limits() {
  const std::vector<double> ts{1e-1, 1e-2, 1e-3, 1e-4};
  const JumpLimitReport r = jump_limit_check(symmetric_model(), ts);
  const bool pass = r.forward_slope >= 0.9 && r.side_slope >= 0.9 && r.forward_decreasing &&
                    r.side_decreasing;
  return {pass, fmt::format("forward slope {:.3f}, side slope {:.3f} (need >= 0.9)",
                            r.forward_slope, r.side_slope)};
}

Outcome master_identity() {
  std::mt19937_64 rng(99);
  double form = 0.0, unital = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Model m = random_model(rng);
    form = std::max(form, frobenius_dist(master_generator(m), master_generator_commutator_form(m)));
    unital = std::max(unital, frobenius_dist(master_map(m, 1.0)(Complex2x2::Identity()),
                                             Complex2x2::Identity()));
  }
  return {form <= 1e-12 && unital <= 1e-10,
          fmt::format("commutator form {:.3g} (tol 1e-12), unitality {:.3g} (tol 1e-10)", form,
                      unital)};
}

Outcome displayed_kernel_values() {
  const Model m = symmetric_model();
  const double t = 1.0, s = 0.3;
  const Complex z = m.z(), kf = m.kappa_f(), ks = m.kappa_s();
  Complex2x2 shown_forward;
  shown_forward << z * std::exp(-t / 2), 2.0 * z * z * std::conj(kf) * std::exp(-t / 2) -
                                             2.0 * z * z * std::conj(kf),
      kf * std::exp(-s / 2), z;
  Complex2x2 shown_side = Complex2x2::Zero();
  shown_side(1, 0) = ks * std::exp(-s / 2);

  const Complex2x2 forward = u_on_coherent(m, t, GPoint{{s}}, GPoint{});
  const Complex2x2 side = u_on_coherent(m, t, GPoint{}, GPoint{{s}});
  const double df = (forward - shown_forward).cwiseAbs().maxCoeff();
  const double ds = (side - shown_side).cwiseAbs().maxCoeff();

  // Independent closed form e^{t|z|^2/2} B_{t-s} J B_s for the same amplitudes.
  const double scale = std::exp(0.5 * t * std::norm(z));
  const Complex2x2 jf = z * Complex2x2::Identity() + kf * E21();
  const Complex2x2 ref_f = scale * b_formula(m, t - s) * jf * b_formula(m, s);
  const Complex2x2 ref_s = scale * b_formula(m, t - s) * (ks * E21()) * b_formula(m, s);
  const double cf = frobenius_dist(forward, ref_f), cs = frobenius_dist(side, ref_s);

  return {df <= 1e-8 && ds <= 1e-8,
          fmt::format("max entry deviation from displayed matrices: forward {:.3g}, side {:.3g} "
                      "(tol 1e-8); kernel vs closed-form word: forward {:.3g}, side {:.3g}",
                      df, ds, cf, cs)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != 0 && code != cli::kExitVerification) std::cerr << err.str();
  return code;
}

struct RenewalRuns {
  Outcome renewal;
  Outcome determinism;
};

RenewalRuns renewal_runs(const fs::path& root) {
  const std::string seed = "20240601", n = "100000";
  const fs::path a = root / "threads1", b = root / "threads1_repeat", c = root / "threads8";
  for (const fs::path& d : {a, b, c}) fs::remove_all(d);
  int codes = 0;
  codes |= cli({"trajectories", "--n", n, "--seed", seed, "--threads", "1", "--out", a.string()});
  codes |= cli({"trajectories", "--n", n, "--seed", seed, "--threads", "1", "--out", b.string()});
  codes |= cli({"trajectories", "--n", n, "--seed", seed, "--threads", "8", "--out", c.string()});

  RenewalRuns out;
  const std::string csv = slurp(a / "trajectories.csv");
  const bool same = codes == 0 && !csv.empty() && csv == slurp(b / "trajectories.csv") &&
                    csv == slurp(c / "trajectories.csv");
  out.determinism = {same, fmt::format("{} bytes; threads 1 vs repeat vs threads 8 {}", csv.size(),
                                       same ? "byte-identical" : "differ")};

  const int code = cli({"renewal-stats", "--out", a.string()});
  std::ifstream in(a / "renewal_report.json");
  if (!in) {
    out.renewal = {false, "renewal report missing"};
    return out;
  }
  const nlohmann::json r = nlohmann::json::parse(in);
  if (!r.contains("pass")) {
    out.renewal = {false, "report has no pass block (underpowered or preconditions unmet)"};
    return out;
  }
  const auto& p = r["pass"];
  const auto& tails = r["count_tails"];
  const auto& ab = r["antibunching"];
  const bool pass = code == 0 && p["later"].get<bool>() && p["independence"].get<bool>() &&
                    p["count_tail"].get<bool>() && p["antibunching"].get<bool>() &&
                    p["all"].get<bool>();
  out.renewal = {
      pass,
      fmt::format("KS p: X2 {:.3f}, X3 {:.3f}; chi-square p {:.3f}; P[N<=1] at 10/25/50: "
                  "{:.3g}/{:.3g}/{:.3g}; antibunching {:.3g} vs 2 x {:.3g}",
                  r["ks_second"]["pvalue"].get<double>(), r["ks_third"]["pvalue"].get<double>(),
                  r["independence"]["pvalue"].get<double>(),
                  tails[0]["p_at_most_1"].get<double>(), tails[1]["p_at_most_1"].get<double>(),
                  tails[2]["p_at_most_1"].get<double>(), ab["empirical"].get<double>(),
                  ab["theoretical"].get<double>())};
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
  fs::create_directories(root);

  std::vector<Outcome> results;
  results.push_back(dilation());
  results.push_back(ideality());
  results.push_back(axioms());
  results.push_back(bounded_rate());
  results.push_back(jump_limits());
  results.push_back(master_identity());
  results.push_back(displayed_kernel_values());
  const RenewalRuns runs = renewal_runs(root);
  results.push_back(runs.renewal);
  results.push_back(runs.determinism);

  const char* names[] = {"dilation (z = 0)",        "ideality",
                         "Davies axioms",           "bounded interaction rate",
                         "jump-operator limits",    "master-equation identity",
                         "closed-form kernel values", "renewal process",
                         "determinism"};
  int failed = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    std::cout << (results[i].pass ? "PASS" : "FAIL") << " " << i + 1 << " " << names[i] << ": "
              << results[i].detail << "\n";
    failed += results[i].pass ? 0 : 1;
  }
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
