#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "qmc/cli.hpp"

namespace {

struct Flags {
  std::string beta, theta, J;
  std::string config, dump_config;
};

void add_common(CLI::App* sub, qmc::RunConfig& c, Flags& f) {
  sub->add_option("--beta", f.beta, "inverse temperature, value or lo:hi:count");
  sub->add_option("--theta", f.theta, "theta = exp(2 beta), value or lo:hi:count (replaces --beta)");
  sub->add_option("--J", f.J, "competing coupling ratio, value or lo:hi:count");
  sub->add_option("--seed", c.seed, "seed for random Newton starts");
  sub->add_option("--threads", c.threads, "worker threads (0: QMC_THREADS or hardware)");
  sub->add_option("--config", f.config, "JSON run configuration; explicit flags override it");
  sub->add_option("--dump-config", f.dump_config, "write the effective configuration as JSON");
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--format", c.format, "csv or json");
  sub->add_option("--tol", c.tol, "residual tolerance");
  sub->add_option("--diagonal-cap", c.diagonal_cap, "site cap of the diagonal oracle");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Markov chains on the Cayley tree with competing Ising interactions"};
  app.require_subcommand(1);
  qmc::RunConfig c;
  Flags f;

  auto* scan = app.add_subcommand("phase-scan", "classify a (beta, J) grid");
  add_common(scan, c, f);
  scan->add_flag("--cross-check", c.cross_check, "confirm the solution count with Newton");

  auto* solve = app.add_subcommand("solve-boundary", "closed-form and Newton boundary solutions");
  add_common(solve, c, f);
  solve->add_option("--random-seeds", c.random_seeds, "number of random Newton starts");

  auto* verify = app.add_subcommand("verify", "boundary equations and projectivity");
  add_common(verify, c, f);
  verify->add_option("--n", c.n, "largest volume level");
  verify->add_flag("--all-solutions", c.all_solutions, "include the broken-phase solutions");
  verify->add_option("--perturb", c.perturb, "also check that h11 + perturb is rejected");

  auto* expect = app.add_subcommand("expectation", "closed forms against the enumeration oracle");
  add_common(expect, c, f);
  expect->add_option("--n", c.n, "largest volume level");
  expect->add_option("--placement", c.placement, "a_sigma level: n or n+1");
  expect->add_option("--oracle-tol", c.oracle_tol, "relative tolerance against the oracle");
  expect->add_flag("--no-oracle", [&c](std::int64_t) { c.oracle = false; }, "closed forms only");

  auto* witness = app.add_subcommand("witness", "non-quasi-equivalence witnesses");
  add_common(witness, c, f);
  witness->add_option("--n-max", c.n_max, "length of the gap curves");
  witness->add_option("--n", c.n, "level of the projector values");

  CLI11_PARSE(app, argc, argv);

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (!f.config.empty()) {
      // reapply the explicit flags over the file
      qmc::RunConfig base = qmc::load_config(f.config);
      for (const CLI::Option* opt : sub->get_options()) {
        if (opt->count() == 0) continue;
        const std::string name = opt->get_name();
        if (name == "--seed") base.seed = c.seed;
        else if (name == "--threads") base.threads = c.threads;
        else if (name == "--out") base.out = c.out;
        else if (name == "--format") base.format = c.format;
        else if (name == "--tol") base.tol = c.tol;
        else if (name == "--diagonal-cap") base.diagonal_cap = c.diagonal_cap;
        else if (name == "--cross-check") base.cross_check = c.cross_check;
        else if (name == "--random-seeds") base.random_seeds = c.random_seeds;
        else if (name == "--n") base.n = c.n;
        else if (name == "--all-solutions") base.all_solutions = c.all_solutions;
        else if (name == "--perturb") base.perturb = c.perturb;
        else if (name == "--placement") base.placement = c.placement;
        else if (name == "--oracle-tol") base.oracle_tol = c.oracle_tol;
        else if (name == "--no-oracle") base.oracle = c.oracle;
        else if (name == "--n-max") base.n_max = c.n_max;
      }
      c = base;
    }
    c.command = sub->get_name();
    if (!f.beta.empty()) {
      c.beta = qmc::parse_range(f.beta);
      c.theta.reset();
    }
    if (!f.theta.empty()) {
      if (!f.beta.empty()) throw qmc::InvalidArgument("--beta and --theta are mutually exclusive");
      c.theta = qmc::parse_range(f.theta);
    }
    if (!f.J.empty()) c.J = qmc::parse_range(f.J);
    if (!f.dump_config.empty()) {
      std::ofstream d(f.dump_config);
      if (!d) throw qmc::InvalidArgument("--dump-config: cannot write '" + f.dump_config + "'");
      d << qmc::Json(c).dump(2) << "\n";
    }
  } catch (const qmc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qmc::kExitUsage;
  }
  return qmc::run(c, std::cout, std::cerr);
}
