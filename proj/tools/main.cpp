#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ifsp/commands.hpp"
#include "ifsp/errors.hpp"
#include "ifsp/serialize.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Monotone-map IFS toolkit: build map systems whose Markov chains have "
      "a chosen stationary distribution, simulate them forward and backward, "
      "and verify the stationary law statistically."};
  app.require_subcommand(1);

  ifsp::RunConfig cfg;
  std::string seed_text = "1";

  auto opt_dist = [&](CLI::App* s, bool required) {
    auto* o = s->add_option(
        "--dist", cfg.dist_spec,
        "target distribution: uniform | exp:<lambda> | triangular | cantor | "
        "tabulated:<csv with x,F rows> | empirical:<csv of samples>");
    if (required) o->required();
  };
  auto opt_system = [&](CLI::App* s) {
    opt_dist(s, false);
    s->add_option("--ifs", cfg.ifs_path, "path to a system JSON (see build)");
    s->add_option("--builtin", cfg.builtin,
                  "closed-form example system: triangular | cantor-affine");
    s->add_option("--n", cfg.n, "map count for the --dist construction")
        ->check(CLI::Range(2, 1000000));
  };
  auto opt_seed = [&](CLI::App* s) {
    s->add_option("--seed", seed_text, "RNG seed, decimal or 0x-hex");
  };
  auto opt_out = [&](CLI::App* s, const char* what) {
    s->add_option("--out", cfg.out, what);
  };
  auto opt_x0 = [&](CLI::App* s) {
    s->add_option("--x0", cfg.x0,
                  "start state (default: lower support endpoint)");
  };
  auto opt_range = [&](CLI::App* s, const char* what) {
    auto* lo = s->add_option("--lo", cfg.range_lo, what);
    auto* hi = s->add_option("--hi", cfg.range_hi, what);
    lo->needs(hi);
    hi->needs(lo);
  };

  CLI::App* build = app.add_subcommand(
      "build", "Construct the map system for a target distribution and save "
               "it as JSON");
  opt_dist(build, true);
  build->add_option("--n", cfg.n, "number of maps")
      ->check(CLI::Range(2, 1000000));
  opt_out(build, "output JSON path (default ifsp.json)");

  CLI::App* simulate = app.add_subcommand(
      "simulate",
      "Run a forward chain; write trajectory and histogram CSVs");
  opt_system(simulate);
  opt_x0(simulate);
  simulate->add_option("--steps", cfg.steps, "chain length");
  opt_seed(simulate);
  simulate->add_option("--bins", cfg.bins, "histogram bin count")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  opt_range(simulate, "histogram range override");
  opt_out(simulate, "output prefix (default simulate)");

  CLI::App* backward = app.add_subcommand(
      "backward", "Draw reversed-iterate samples; write a samples CSV and, "
                  "when a target is known, a KS report JSON");
  opt_system(backward);
  opt_x0(backward);
  backward->add_option("--depth", cfg.depth,
                       "composition depth (default: enough for full double "
                       "precision at the system's n)")
      ->check(CLI::Range(1, 1000000));
  backward->add_option("--count", cfg.count, "number of samples")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  opt_seed(backward);
  backward->add_option("--alpha", cfg.alpha, "KS significance level")
      ->check(CLI::Range(1e-12, 0.5));
  opt_out(backward, "output prefix (default backward)");

  CLI::App* verify = app.add_subcommand(
      "verify", "Check that a target distribution is stationary for a "
                "system: invariance residual plus one-step push-forward test");
  opt_system(verify);
  verify->add_option("--grid", cfg.grid, "grid size for both checks")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  verify->add_option("--tol", cfg.tol, "invariance residual bound")
      ->check(CLI::Range(0.0, 1.0));
  opt_out(verify, "output JSON path (default verify.json)");

  CLI::App* staircase = app.add_subcommand(
      "staircase", "Tabulate a CDF as an x,F CSV");
  opt_dist(staircase, true);
  staircase->add_option("--grid", cfg.grid, "number of points")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  opt_range(staircase, "x range (required for unbounded support)");
  opt_out(staircase, "output CSV path (default staircase.csv)");

  CLI::App* mixture = app.add_subcommand(
      "mixture-demo",
      "Two exponential systems and both composition orders: four chain "
      "histograms, stationarity self-tests, and the g-vs-h contrast");
  mixture->add_option("--steps", cfg.steps, "chain length");
  opt_seed(mixture);
  opt_x0(mixture);
  mixture->add_option("--bins", cfg.bins, "histogram bin count")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  opt_range(mixture, "histogram range override");
  mixture->add_option("--alpha", cfg.alpha, "significance level")
      ->check(CLI::Range(1e-12, 0.5));
  opt_out(mixture, "output prefix (default mixture)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.command = sub->get_name();
  if (auto* o = sub->get_option_no_throw("--x0")) cfg.x0_set = o->count() > 0;
  if (auto* lo = sub->get_option_no_throw("--lo")) {
    auto* hi = sub->get_option_no_throw("--hi");
    cfg.range_set = lo->count() > 0 && hi != nullptr && hi->count() > 0;
  }
  try {
    cfg.seed = ifsp::parse_u64(seed_text);
  } catch (const ifsp::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  return ifsp::dispatch_command(cfg, std::cout);
}
