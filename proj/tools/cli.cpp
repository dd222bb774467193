#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "davies/config.hpp"
#include "davies/davies_map.hpp"
#include "davies/errors.hpp"
#include "davies/json_io.hpp"
#include "davies/renewal.hpp"
#include "davies/trajectory.hpp"
#include "output.hpp"
#include "verify.hpp"

namespace davies::cli {
namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string mode;
  std::string events;
  std::string input;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  unsigned threads = 1;
};

struct Context {
  RunConfig cfg;
  std::ostream& out;
  std::ostream& err;
};

const char* channel_name(Channel c) { return c == Channel::kSide ? "side" : "forward"; }

void append_matrix(std::string& row, const Complex2x2& a) {
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      row += "," + format_double(a(i, k).real()) + "," + format_double(a(i, k).imag());
}

std::string matrix_columns(const char* prefix) {
  std::string s;
  for (int i = 1; i <= 2; ++i)
    for (int k = 1; k <= 2; ++k) s += fmt::format(",{0}{1}{2}_re,{0}{1}{2}_im", prefix, i, k);
  return s;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int cmd_evolve(Context& ctx) {
  const Model m = ctx.cfg.model();
  const DensityMatrix rho0 = ctx.cfg.initial();
  const Superop gen = master_generator(m);
  std::string csv = provenance_line(ctx.cfg);
  csv += "t" + matrix_columns("A") + matrix_columns("rho") + ",expectation\n";
  for (double t : ctx.cfg.grid.values()) {
    const Superop map = superop_exp(gen, t);
    const Complex2x2 a = map(ctx.cfg.observable);
    const Complex2x2 rho = map.dual()(rho0.matrix());
    std::string row = format_double(t);
    append_matrix(row, a);
    append_matrix(row, rho);
    row += "," + format_double((rho0.matrix() * a).trace().real()) + "\n";
    csv += row;
  }
  const std::string path = join_path(ctx.cfg.output_dir, "evolve.csv");
  write_file(path, csv);
  ctx.out << path << "\n";
  return kExitOk;
}

std::vector<Event> load_events(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open events file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("malformed events file " + path + ": " + e.what());
  }
  if (j.is_object() && j.contains("events")) {
    require_known_keys(j, {"events"}, "events file");
    j = j["events"];
  }
  if (j.is_object()) j = nlohmann::json::array({j});
  if (!j.is_array()) throw ValidationError("events file must hold an event or a list of events");
  std::vector<Event> out;
  for (const auto& e : j) out.push_back(event_from_json(e));
  return out;
}

int cmd_event_prob(Context& ctx, const Flags& flags) {
  const std::vector<Event> events = flags.events.empty() ? ctx.cfg.events : load_events(flags.events);
  if (events.empty()) throw ValidationError("event-prob needs events (--events FILE or config \"events\")");
  const Model m = ctx.cfg.model();
  const DensityMatrix rho = ctx.cfg.initial();
  nlohmann::json report = provenance(ctx.cfg);
  report["results"] = nlohmann::json::array();
  for (const Event& e : events) {
    const MapResult r = davies_map(m, e, ctx.cfg.davies_options());
    const double p = (rho.matrix() * r.map(Complex2x2::Identity())).trace().real();
    report["results"].push_back({{"event", to_json(e)},
                                 {"probability", p},
                                 {"quadrature_error", r.quadrature_error},
                                 {"truncation_error", r.truncation_error}});
    ctx.out << format_double(p) << "\n";
  }
  write_file(join_path(ctx.cfg.output_dir, "event_prob.json"), dump(report));
  return kExitOk;
}

std::string trajectory_header(const RunConfig& c) {
  return provenance_line(c, fmt::format("n_traj={} horizon={} mode={}", c.n_traj,
                                        format_double(c.horizon), mode_name(c.mode)));
}

int cmd_trajectories(Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const std::vector<Trajectory> batch =
      sample_batch(c.model(), c.initial(), c.horizon, c.master_seed, c.n_traj, c.mode, c.threads);

  std::string csv = trajectory_header(c);
  csv += "trajectory_index,jump_index,time,channel\n";
  std::map<std::size_t, std::size_t> histogram;
  double excited = 0.0;
  std::size_t forward = 0, side = 0;
  for (const Trajectory& t : batch) {
    for (std::size_t j = 0; j < t.records.size(); ++j) {
      csv += fmt::format("{},{},{},{}\n", t.index, j, format_double(t.records[j].time),
                         channel_name(t.records[j].channel));
      (t.records[j].channel == Channel::kSide ? side : forward)++;
    }
    ++histogram[t.records.size()];
    excited += t.terminal_state.excited_population();
  }
  write_file(join_path(c.output_dir, "trajectories.csv"), csv);

  nlohmann::json summary = provenance(c);
  summary["n_traj"] = c.n_traj;
  summary["horizon"] = c.horizon;
  summary["mode"] = mode_name(c.mode);
  summary["master_seed"] = c.master_seed;
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& [count, n] : histogram) hist.push_back({{"jumps", count}, {"trajectories", n}});
  summary["count_histogram"] = hist;
  summary["forward_records"] = forward;
  summary["side_records"] = side;
  summary["mean_terminal_excited_population"] = batch.empty() ? 0.0 : excited / batch.size();
  write_file(join_path(c.output_dir, "summary.json"), dump(summary));
  ctx.out << join_path(c.output_dir, "trajectories.csv") << "\n";
  return kExitOk;
}

std::string densities_csv(const RunConfig& c, const Model& m, const DensityMatrix& rho) {
  const std::vector<double> grid = c.grid.values();
  const WaitingDensities d = waiting_densities(m, rho, grid);
  const WaitingTimeModel first(m, rho);
  const WaitingTimeModel later(m, DensityMatrix::ground());
  const std::vector<double> f_later = later.cdf_sorted(Interval::kLater, grid);
  const std::vector<double> f_first = first.cdf_sorted(Interval::kFirst, grid);
  std::string csv = provenance_line(c);
  csv += "x,z,z_first,z_last,F_later,F_first\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    csv += fmt::format("{},{},{},{},{},{}\n", format_double(grid[i]), format_double(d.z_vals[i]),
                       format_double(d.z_first_vals[i]), format_double(d.z_last_vals[i]),
                       format_double(f_later[i]), format_double(f_first[i]));
  return csv;
}

int cmd_waiting_time(Context& ctx) {
  const Model m = ctx.cfg.model();
  const DensityMatrix rho = ctx.cfg.initial();
  write_file(join_path(ctx.cfg.output_dir, "waiting_time.csv"), densities_csv(ctx.cfg, m, rho));

  nlohmann::json summary = provenance(ctx.cfg);
  summary["renewal_preconditions"] = renewal_preconditions(m);
  if (renewal_preconditions(m)) {
    const WaitingTimeModel later(m, DensityMatrix::ground());
    const double h = 1e-5;
    summary["z_at_0"] = later.z(0.0);
    summary["z_slope_at_0"] = (later.z(h) - later.z(0.0)) / h;
    summary["median_later"] = later.quantile(Interval::kLater, 0.5);
    summary["spectral_abscissa"] = spectral_abscissa(z_generator(m));
  } else {
    summary["note"] = "renewal preconditions unmet";
  }
  write_file(join_path(ctx.cfg.output_dir, "waiting_time.json"), dump(summary));
  ctx.out << join_path(ctx.cfg.output_dir, "waiting_time.csv") << "\n";
  return kExitOk;
}

struct LoadedBatch {
  std::vector<Trajectory> batch;
};

LoadedBatch read_trajectories(const std::string& path, const RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open trajectory file " + path);
  std::size_t n_traj = c.n_traj;
  double horizon = c.horizon;
  std::string line;
  bool header_seen = false;
  std::map<std::size_t, std::vector<JumpRecord>> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string tok;
      while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "n_traj") n_traj = std::stoull(val);
        if (key == "horizon") horizon = std::stod(val);
      }
      continue;
    }
    if (!header_seen) {
      if (line != "trajectory_index,jump_index,time,channel")
        throw ValidationError("trajectory file has an unexpected header: " + line);
      header_seen = true;
      continue;
    }
    std::istringstream ss(line);
    std::string idx, jdx, time, ch;
    if (!std::getline(ss, idx, ',') || !std::getline(ss, jdx, ',') || !std::getline(ss, time, ',') ||
        !std::getline(ss, ch))
      throw ValidationError("malformed trajectory row: " + line);
    if (ch != "side" && ch != "forward") throw ValidationError("unknown channel in row: " + line);
    try {
      records[std::stoull(idx)].push_back(
          {std::stod(time), ch == "side" ? Channel::kSide : Channel::kForward});
    } catch (const std::exception&) {
      throw ValidationError("malformed trajectory row: " + line);
    }
  }
  LoadedBatch out;
  out.batch.resize(n_traj);
  for (std::size_t i = 0; i < n_traj; ++i) {
    out.batch[i].index = i;
    out.batch[i].horizon = horizon;
  }
  for (auto& [i, recs] : records) {
    if (i >= n_traj) throw ValidationError("trajectory index beyond n_traj in " + path);
    out.batch[i].records = std::move(recs);
  }
  return out;
}

nlohmann::json ks_json(const KsResult& k) {
  return {{"statistic", k.statistic}, {"pvalue", k.pvalue}, {"n", k.n}};
}

int cmd_renewal_stats(Context& ctx, const Flags& flags) {
  const RunConfig& c = ctx.cfg;
  const std::string input =
      flags.input.empty() ? join_path(c.output_dir, "trajectories.csv") : flags.input;
  const LoadedBatch loaded = read_trajectories(input, c);
  const Model m = c.model();
  const DensityMatrix rho = c.initial();
  const RenewalReport r = renewal_test(loaded.batch, m, rho);

  nlohmann::json j = provenance(c);
  j["input"] = input;
  j["preconditions_met"] = r.preconditions_met;
  j["underpowered"] = r.underpowered;
  j["n_traj"] = r.n_traj;
  if (r.preconditions_met) {
    j["ks_first"] = ks_json(r.ks_first);
    j["ks_second"] = ks_json(r.ks_second);
    j["ks_third"] = ks_json(r.ks_third);
    j["ks_stat_first"] = r.ks_first.statistic;
    j["ks_stat_later"] = r.ks_stat_later;
    j["ks_second_vs_third"] = ks_json(r.ks_second_vs_third);
    j["ks_second_uncorrected"] = ks_json(r.ks_second_raw);
    j["ks_third_uncorrected"] = ks_json(r.ks_third_raw);
    j["independence"] = {{"statistic", r.independence.statistic},
                         {"dof", r.independence.dof},
                         {"pvalue", r.independence.pvalue},
                         {"n_pairs", r.n_pairs}};
    j["independence_pvalue"] = r.independence.pvalue;
    nlohmann::json tails = nlohmann::json::array();
    for (const auto& t : r.count_tails)
      tails.push_back({{"t", t.t},
                       {"p_at_most_0", t.p_at_most[0]},
                       {"p_at_most_1", t.p_at_most[1]},
                       {"p_at_most_2", t.p_at_most[2]}});
    j["count_tails"] = tails;
    j["antibunching"] = {{"window", 0.05},
                         {"empirical", r.antibunching_empirical},
                         {"theoretical", r.antibunching_theoretical},
                         {"n_intervals", r.n_intervals}};
    j["no_first_detection"] = r.no_first;
    if (!r.underpowered)
      j["pass"] = {{"first", r.first_pass},
                   {"later", r.later_pass},
                   {"second_vs_third", r.two_sample_pass},
                   {"independence", r.independence_pass},
                   {"count_tail", r.count_tail_pass},
                   {"antibunching", r.antibunching_pass},
                   {"all", r.pass()}};
  } else {
    j["note"] = "renewal preconditions unmet";
  }
  write_file(join_path(c.output_dir, "renewal_report.json"), dump(j));
  write_file(join_path(c.output_dir, "renewal_densities.csv"), densities_csv(c, m, rho));
  ctx.out << dump(j);
  if (r.preconditions_met && !r.underpowered && !r.pass()) return kExitVerification;
  return kExitOk;
}

int cmd_verify(Context& ctx) {
  const std::vector<CheckResult> checks = verification_battery(ctx.cfg);
  nlohmann::json j = provenance(ctx.cfg);
  j["checks"] = nlohmann::json::array();
  bool ok = true;
  for (const CheckResult& r : checks) {
    j["checks"].push_back(to_json(r));
    if (!r.informational) ok = ok && r.pass;
  }
  j["status"] = ok ? "pass" : "fail";
  write_file(join_path(ctx.cfg.output_dir, "verify.json"), dump(j));
  ctx.out << dump(j);
  return ok ? kExitOk : kExitVerification;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Davies photon-counting simulator for resonance fluorescence", "davies"};
  app.require_subcommand(1);
  Flags flags;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "Output directory");
  };
  CLI::App* evolve = app.add_subcommand("evolve", "Master-equation evolution of A and rho on the grid");
  CLI::App* event_prob = app.add_subcommand("event-prob", "Probabilities of cylinder events");
  CLI::App* traj = app.add_subcommand("trajectories", "Sample photon-counting trajectories");
  CLI::App* waiting = app.add_subcommand("waiting-time", "Waiting-time densities and CDFs");
  CLI::App* renewal = app.add_subcommand("renewal-stats", "Renewal tests on a trajectory file");
  CLI::App* verify = app.add_subcommand("verify", "Analytic maps against the kernel oracle");
  for (CLI::App* sub : {evolve, event_prob, traj, waiting, renewal, verify}) common(sub);
  event_prob->add_option("--events", flags.events, "JSON file with events")->check(CLI::ExistingFile);
  traj->add_option("--seed", flags.seed, "Master seed");
  traj->add_option("--n", flags.n, "Number of trajectories");
  traj->add_option("--threads", flags.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  traj->add_option("--mode", flags.mode, "side-only or two-channel");
  renewal->add_option("--input", flags.input, "Trajectory CSV (default <out>/trajectories.csv)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    Context ctx{flags.config.empty() ? RunConfig{} : load_config(flags.config), out, err};
    if (!flags.out.empty()) ctx.cfg.output_dir = flags.out;
    if (traj->count("--seed")) ctx.cfg.master_seed = flags.seed;
    if (traj->count("--n")) ctx.cfg.n_traj = flags.n;
    if (traj->count("--threads")) ctx.cfg.threads = flags.threads;
    if (traj->count("--mode")) ctx.cfg.mode = mode_from_name(flags.mode);

    if (*evolve) return cmd_evolve(ctx);
    if (*event_prob) return cmd_event_prob(ctx, flags);
    if (*traj) return cmd_trajectories(ctx);
    if (*waiting) return cmd_waiting_time(ctx);
    if (*renewal) return cmd_renewal_stats(ctx, flags);
    return cmd_verify(ctx);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace davies::cli
