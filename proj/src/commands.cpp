#include "ifsp/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ifsp/chain.hpp"
#include "ifsp/distribution.hpp"
#include "ifsp/errors.hpp"
#include "ifsp/ifs.hpp"
#include "ifsp/rng.hpp"
#include "ifsp/serialize.hpp"
#include "ifsp/stats.hpp"

namespace ifsp {

namespace {

constexpr double kMixtureHistLo = 0.0;
constexpr double kMixtureHistHi = 20.0;
constexpr std::size_t kMixtureTestSize = 50000;
constexpr double kMixtureMarginalTol = 0.02;

struct ResolvedSystem {
  Ifsp ifsp;
  std::shared_ptr<const Distribution> target;  // may be null
  std::string source_echo;  // how the system was specified, for headers
};

// Builds the system from --ifs, --builtin, or --dist (+ --n), in that
// precedence. When both a loaded system and --dist name the same
// distribution, the map's own object becomes the target so downstream
// checks can recognize the theorem structure.
ResolvedSystem resolve_system(const RunConfig& cfg) {
  ResolvedSystem r;
  if (!cfg.ifs_path.empty()) {
    r.ifsp = load_ifsp(cfg.ifs_path);
    r.source_echo = "ifs=" + cfg.ifs_path;
    if (!cfg.dist_spec.empty()) {
      auto parsed =
          std::make_shared<const Distribution>(parse_dist_spec(cfg.dist_spec));
      r.target = std::move(parsed);
      const std::string canonical = dist_spec_string(*r.target);
      for (const MonotoneMap& m : r.ifsp.maps) {
        if (m.variant() == MapVariant::theorem &&
            dist_spec_string(*m.dist()) == canonical) {
          r.target = m.dist();
          break;
        }
      }
    }
    return r;
  }
  if (!cfg.builtin.empty()) {
    if (cfg.builtin == "triangular") {
      r.ifsp = triangular_ifsp();
      r.target = std::make_shared<const Distribution>(
          Distribution::triangular());
    } else if (cfg.builtin == "cantor-affine") {
      r.ifsp = symmetry_affine_ifsp(1.0 / 3.0, 0.0);
      r.target = std::make_shared<const Distribution>(
          Distribution::cantor_uniform());
    } else {
      throw ConstructionError("unknown builtin '" + cfg.builtin +
                              "' (expected triangular | cantor-affine)");
    }
    if (!cfg.dist_spec.empty())
      r.target =
          std::make_shared<const Distribution>(parse_dist_spec(cfg.dist_spec));
    r.source_echo = "builtin=" + cfg.builtin;
    return r;
  }
  if (!cfg.dist_spec.empty()) {
    auto dist =
        std::make_shared<const Distribution>(parse_dist_spec(cfg.dist_spec));
    r.ifsp = build_theorem_ifsp(dist, cfg.n);
    r.target = dist;
    r.source_echo = "dist=" + cfg.dist_spec + " n=" + std::to_string(cfg.n);
    return r;
  }
  throw ConstructionError("no system given: pass --dist, --ifs, or --builtin");
}

class ConfigEcho {
public:
  explicit ConfigEcho(const std::string& command) {
    add("command", command);
  }
  void add(const std::string& key, const std::string& value) {
    text_ += "# " + key + "=" + value + "\n";
  }
  void add(const std::string& key, double value) {
    add(key, format_double(value));
  }
  void add(const std::string& key, std::uint64_t value) {
    add(key, std::to_string(value));
  }
  void add_raw(const std::string& line) { text_ += "# " + line + "\n"; }
  const std::string& text() const { return text_; }

private:
  std::string text_;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConstructionError("cannot open '" + path + "' for writing");
  return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IntegrityError("short write to '" + path + "'");
}

void write_histogram_csv(const std::string& path, const ConfigEcho& echo,
                         const Histogram& h) {
  std::ofstream out = open_out(path);
  out << echo.text() << "bin_lo,bin_hi,count,frequency\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    out << format_double(h.bin_lo(k)) << ',' << format_double(h.bin_hi(k))
        << ',' << h.counts[k] << ',' << format_double(h.frequencies[k])
        << '\n';
  }
  finish_out(out, path);
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  finish_out(out, path);
}

std::string default_out(const RunConfig& cfg) {
  if (!cfg.out.empty()) return cfg.out;
  if (cfg.command == "build") return "ifsp.json";
  if (cfg.command == "staircase") return "staircase.csv";
  if (cfg.command == "verify") return "verify.json";
  if (cfg.command == "mixture-demo") return "mixture";
  return cfg.command;  // prefix for simulate/backward
}

double resolve_x0(const RunConfig& cfg, const Ifsp& ifsp) {
  return cfg.x0_set ? cfg.x0 : ifsp.support_lo;
}

int cmd_build(const RunConfig& cfg, std::ostream& log) {
  if (cfg.dist_spec.empty())
    throw ConstructionError("build needs --dist");
  auto dist =
      std::make_shared<const Distribution>(parse_dist_spec(cfg.dist_spec));
  const Ifsp ifsp = build_theorem_ifsp(dist, cfg.n);
  const std::string path = default_out(cfg);
  save_ifsp(ifsp, path);
  log << "wrote " << path << " (" << ifsp.n() << " maps over "
      << cfg.dist_spec << ")\n";
  return 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
  ResolvedSystem sys = resolve_system(cfg);
  const double x0 = resolve_x0(cfg, sys.ifsp);
  RngStream rng(cfg.seed, 0);
  const Trajectory traj = simulate_forward(sys.ifsp, x0, cfg.steps, rng);

  double hist_lo, hist_hi;
  if (cfg.range_set) {
    hist_lo = cfg.range_lo;
    hist_hi = cfg.range_hi;
  } else if (std::isfinite(sys.ifsp.support_lo) &&
             std::isfinite(sys.ifsp.support_hi)) {
    hist_lo = sys.ifsp.support_lo;
    hist_hi = sys.ifsp.support_hi;
  } else {
    const auto [mn, mx] =
        std::minmax_element(traj.states.begin(), traj.states.end());
    hist_lo = *mn;
    hist_hi = *mx > *mn ? *mx : *mn + 1.0;
  }

  ConfigEcho echo(cfg.command);
  echo.add_raw(sys.source_echo);
  echo.add("x0", x0);
  echo.add("steps", cfg.steps);
  echo.add("seed", cfg.seed);
  echo.add("bins", static_cast<std::uint64_t>(cfg.bins));
  echo.add("hist_lo", hist_lo);
  echo.add("hist_hi", hist_hi);

  const std::string prefix = default_out(cfg);
  const std::string traj_path = prefix + ".trajectory.csv";
  {
    std::ofstream out = open_out(traj_path);
    out << echo.text() << "step,index,state\n";
    out << "0,," << format_double(traj.states[0]) << '\n';
    for (std::size_t k = 0; k < traj.indices.size(); ++k) {
      out << (k + 1) << ',' << traj.indices[k] << ','
          << format_double(traj.states[k + 1]) << '\n';
    }
    finish_out(out, traj_path);
  }
  const Histogram h = histogram(traj.states, hist_lo, hist_hi, cfg.bins);
  const std::string hist_path = prefix + ".histogram.csv";
  write_histogram_csv(hist_path, echo, h);

  log << "simulated " << cfg.steps << " steps (" << traj.clamp_events
      << " clamped applications)\nwrote " << traj_path << " and " << hist_path
      << "\n";
  return 0;
}

int cmd_backward(const RunConfig& cfg, std::ostream& log) {
  ResolvedSystem sys = resolve_system(cfg);
  const int depth =
      cfg.depth > 0 ? cfg.depth : default_backward_depth(sys.ifsp.n());
  const double x0 = resolve_x0(cfg, sys.ifsp);
  const std::vector<double> values =
      backward_sample_batch(sys.ifsp, x0, depth, cfg.count, cfg.seed);

  ConfigEcho echo(cfg.command);
  echo.add_raw(sys.source_echo);
  echo.add("x0", x0);
  echo.add("depth", static_cast<std::uint64_t>(depth));
  echo.add("count", static_cast<std::uint64_t>(cfg.count));
  echo.add("seed", cfg.seed);
  echo.add("alpha", cfg.alpha);

  const std::string prefix = default_out(cfg);
  const std::string samples_path = prefix + ".samples.csv";
  {
    std::ofstream out = open_out(samples_path);
    out << echo.text() << "stream_index,value\n";
    for (std::size_t j = 0; j < values.size(); ++j)
      out << j << ',' << format_double(values[j]) << '\n';
    finish_out(out, samples_path);
  }
  log << "wrote " << samples_path << " (" << values.size() << " samples, depth "
      << depth << ")\n";

  if (values.size() < 2 || !sys.target) {
    log << "no ks report ("
        << (values.size() < 2 ? "count < 2" : "no target distribution")
        << ")\n";
    return 0;
  }
  const double d = ks_distance(values, *sys.target);
  const KsReport report = make_ks_report(d, values.size(), cfg.alpha);
  const std::string ks_path = prefix + ".ks.json";
  write_json_file(ks_path, ks_report_to_json(report));
  log << "ks statistic " << format_double(report.statistic) << " vs critical "
      << format_double(report.critical_value) << " at alpha "
      << format_double(report.alpha) << ": "
      << (report.pass ? "pass" : "FAIL") << "\nwrote " << ks_path << "\n";
  return report.pass ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  ResolvedSystem sys = resolve_system(cfg);
  if (!sys.target)
    throw ConstructionError(
        "verify needs a target distribution (--dist, or a builtin/theorem "
        "system that implies one)");
  const Distribution& dist = *sys.target;
  const std::size_t g = cfg.grid;
  if (g < 2) throw DomainError("verify: --grid must be >= 2");

  // Interior grid for the invariance equation. On a bounded support, evenly
  // spaced midpoints; the offset keeps the grid off support endpoints and,
  // for the Cantor targets with power-of-3 sizes, off the staircase's flat-
  // step borders where preimage plateaus are ambiguous. Unbounded supports
  // get quantile midpoints instead.
  std::vector<double> grid;
  grid.reserve(g);
  if (std::isfinite(dist.support_lo()) && std::isfinite(dist.support_hi())) {
    const double lo = dist.support_lo();
    const double span = dist.support_hi() - lo;
    for (std::size_t j = 0; j < g; ++j)
      grid.push_back(lo + span * ((static_cast<double>(j) + 0.5) /
                                  static_cast<double>(g)));
  } else {
    for (std::size_t j = 1; j <= g; ++j)
      grid.push_back(
          dist.quantile((static_cast<double>(j) - 0.5) / static_cast<double>(g)));
  }

  const InvarianceReport inv = invariance_residual(sys.ifsp, dist, grid);
  const bool inv_pass = inv.max_residual <= cfg.tol;
  const KsReport one_step = one_step_stationarity(sys.ifsp, dist, g);

  Json j;
  Json config;
  config["source"] = sys.source_echo;
  config["target"] = dist_spec_string(dist);
  config["grid"] = g;
  config["tol"] = cfg.tol;
  j["config"] = std::move(config);
  Json invariance;
  invariance["grid_size"] = g;
  invariance["max_residual"] = inv.max_residual;
  invariance["tol"] = cfg.tol;
  invariance["pass"] = inv_pass;
  j["invariance"] = std::move(invariance);
  j["one_step"] = ks_report_to_json(one_step);
  const std::string path = default_out(cfg);
  write_json_file(path, j);

  log << "invariance max residual " << format_double(inv.max_residual)
      << " (tol " << format_double(cfg.tol) << "): "
      << (inv_pass ? "pass" : "FAIL") << "\n";
  log << "one-step stationarity distance " << format_double(one_step.statistic)
      << " (bound " << format_double(one_step.critical_value)
      << "): " << (one_step.pass ? "pass" : "FAIL") << "\n";
  log << "wrote " << path << "\n";
  return (inv_pass && one_step.pass) ? 0 : 1;
}

int cmd_staircase(const RunConfig& cfg, std::ostream& log) {
  if (cfg.dist_spec.empty()) throw ConstructionError("staircase needs --dist");
  const Distribution dist = parse_dist_spec(cfg.dist_spec);
  const std::size_t points = cfg.grid;
  if (points < 2) throw DomainError("staircase: --grid must be >= 2 points");
  double lo, hi;
  if (cfg.range_set) {
    lo = cfg.range_lo;
    hi = cfg.range_hi;
  } else if (std::isfinite(dist.support_lo()) &&
             std::isfinite(dist.support_hi())) {
    lo = dist.support_lo();
    hi = dist.support_hi();
  } else {
    throw ConstructionError(
        "staircase: unbounded support, pass --lo and --hi");
  }
  if (!(lo < hi)) throw DomainError("staircase: needs lo < hi");

  ConfigEcho echo(cfg.command);
  echo.add_raw("dist=" + cfg.dist_spec);
  echo.add("points", static_cast<std::uint64_t>(points));
  echo.add("lo", lo);
  echo.add("hi", hi);

  const std::string path = default_out(cfg);
  std::ofstream out = open_out(path);
  out << echo.text() << "x,F\n";
  for (std::size_t j = 0; j < points; ++j) {
    const double x =
        j + 1 == points
            ? hi
            : lo + (hi - lo) * (static_cast<double>(j) /
                                static_cast<double>(points - 1));
    out << format_double(x) << ',' << format_double(dist.cdf(x)) << '\n';
  }
  finish_out(out, path);
  log << "wrote " << path << " (" << points << " points on ["
      << format_double(lo) << ", " << format_double(hi) << "])\n";
  return 0;
}

int cmd_mixture_demo(const RunConfig& cfg, std::ostream& log) {
  if (cfg.steps < 1)
    throw ConstructionError("mixture-demo needs --steps >= 1");
  auto dist1 = std::make_shared<const Distribution>(Distribution::exponential(1.0));
  auto dist2 = std::make_shared<const Distribution>(Distribution::exponential(0.5));
  const Ifsp f1 = build_theorem_ifsp(dist1, 2);
  const Ifsp f2 = build_theorem_ifsp(dist2, 2);
  const Ifsp g = compose_ifsp(f2, f1);  // g_i = f^2 after f^1
  const Ifsp h = compose_ifsp(f1, f2);
  const double x0 = cfg.x0_set ? cfg.x0 : 0.0;

  const double hist_lo = cfg.range_set ? cfg.range_lo : kMixtureHistLo;
  const double hist_hi = cfg.range_set ? cfg.range_hi : kMixtureHistHi;

  ConfigEcho echo(cfg.command);
  echo.add("steps", cfg.steps);
  echo.add("seed", cfg.seed);
  echo.add("x0", x0);
  echo.add("bins", static_cast<std::uint64_t>(cfg.bins));
  echo.add("hist_lo", hist_lo);
  echo.add("hist_hi", hist_hi);
  echo.add("alpha", cfg.alpha);

  struct ChainRun {
    const char* name;
    const Ifsp* system;
    std::vector<double> samples;  // states after the start point
  };
  ChainRun runs[4] = {
      {"f1", &f1, {}}, {"f2", &f2, {}}, {"g", &g, {}}, {"h", &h, {}}};
  const std::string prefix = default_out(cfg);
  for (std::size_t c = 0; c < 4; ++c) {
    RngStream rng(cfg.seed, c);
    Trajectory t = simulate_forward(*runs[c].system, x0, cfg.steps, rng);
    runs[c].samples.assign(t.states.begin() + 1, t.states.end());
    const Histogram hist =
        histogram(runs[c].samples, hist_lo, hist_hi, cfg.bins);
    write_histogram_csv(
        prefix + "." + runs[c].name + ".hist.csv", echo, hist);
  }

  // Marginal check: each plain chain against its own target. The tolerance
  // allows for serial dependence along the chain, so it is a fixed headroom
  // number rather than an iid critical value.
  const double d1 = ks_distance(runs[0].samples, *dist1);
  const double d2 = ks_distance(runs[1].samples, *dist2);
  const bool marginals_pass =
      d1 <= kMixtureMarginalTol && d2 <= kMixtureMarginalTol;

  // Stationarity self-test for each composed chain: take the tail of the
  // trajectory, advance every point by one more composed step, and require
  // the two clouds to be statistically indistinguishable.
  const std::size_t m = std::min<std::size_t>(kMixtureTestSize,
                                              runs[2].samples.size());
  auto self_test = [&](const ChainRun& run, const Ifsp& system,
                       std::uint64_t stream) {
    std::vector<double> tail(run.samples.end() - static_cast<std::ptrdiff_t>(m),
                             run.samples.end());
    RngStream rng(cfg.seed, stream);
    std::vector<double> pushed;
    pushed.reserve(tail.size());
    for (double s : tail) {
      const int idx = draw_index(rng, system.probs);
      pushed.push_back(system.maps[static_cast<std::size_t>(idx - 1)].apply(s));
    }
    return make_two_sample_ks_report(two_sample_ks(tail, pushed), tail.size(),
                                     pushed.size(), cfg.alpha);
  };
  const KsReport g_self = self_test(runs[2], g, 4);
  const KsReport h_self = self_test(runs[3], h, 5);

  // Contrast check: the two composition orders have different stationary
  // laws, so equality should be rejected.
  std::vector<double> g_tail(runs[2].samples.end() - static_cast<std::ptrdiff_t>(m),
                             runs[2].samples.end());
  std::vector<double> h_tail(runs[3].samples.end() - static_cast<std::ptrdiff_t>(m),
                             runs[3].samples.end());
  const KsReport g_vs_h = make_two_sample_ks_report(
      two_sample_ks(g_tail, h_tail), g_tail.size(), h_tail.size(), cfg.alpha);
  const bool differ = !g_vs_h.pass;

  Json report;
  Json config;
  config["steps"] = cfg.steps;
  config["seed"] = cfg.seed;
  config["x0"] = x0;
  config["bins"] = cfg.bins;
  config["hist_lo"] = hist_lo;
  config["hist_hi"] = hist_hi;
  config["alpha"] = cfg.alpha;
  report["config"] = std::move(config);
  Json m1;
  m1["statistic"] = d1;
  m1["n"] = runs[0].samples.size();
  m1["threshold"] = kMixtureMarginalTol;
  m1["pass"] = d1 <= kMixtureMarginalTol;
  report["f1_vs_exp1"] = std::move(m1);
  Json m2;
  m2["statistic"] = d2;
  m2["n"] = runs[1].samples.size();
  m2["threshold"] = kMixtureMarginalTol;
  m2["pass"] = d2 <= kMixtureMarginalTol;
  report["f2_vs_exp05"] = std::move(m2);
  report["g_selftest"] = ks_report_to_json(g_self);
  report["h_selftest"] = ks_report_to_json(h_self);
  report["g_vs_h"] = ks_report_to_json(g_vs_h);
  report["g_vs_h_differ"] = differ;
  const std::string report_path = prefix + ".report.json";
  write_json_file(report_path, report);

  log << "marginals: f1 ks " << format_double(d1) << ", f2 ks "
      << format_double(d2) << " (tol " << format_double(kMixtureMarginalTol)
      << "): " << (marginals_pass ? "pass" : "FAIL") << "\n";
  log << "self-tests: g " << format_double(g_self.statistic) << ", h "
      << format_double(h_self.statistic) << " vs critical "
      << format_double(g_self.critical_value) << ": "
      << ((g_self.pass && h_self.pass) ? "pass" : "FAIL") << "\n";
  log << "g vs h: " << format_double(g_vs_h.statistic) << " vs critical "
      << format_double(g_vs_h.critical_value) << ": "
      << (differ ? "distinct (expected)" : "NOT distinguished") << "\n";
  log << "wrote " << report_path << " and four .hist.csv files\n";
  return (marginals_pass && g_self.pass && h_self.pass && differ) ? 0 : 1;
}

}  // namespace

int dispatch_command(const RunConfig& cfg, std::ostream& log) {
  try {
    if (cfg.command == "build") return cmd_build(cfg, log);
    if (cfg.command == "simulate") return cmd_simulate(cfg, log);
    if (cfg.command == "backward") return cmd_backward(cfg, log);
    if (cfg.command == "verify") return cmd_verify(cfg, log);
    if (cfg.command == "staircase") return cmd_staircase(cfg, log);
    if (cfg.command == "mixture-demo") return cmd_mixture_demo(cfg, log);
    log << "unknown command '" << cfg.command << "'\n";
    return 2;
  } catch (const IntegrityError& e) {
    log << "integrity error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConstructionError& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace ifsp
