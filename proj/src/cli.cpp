#include "qmc/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace qmc {

std::vector<double> Range::values() const { return linspace(lo, hi, count); }

Range parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  auto number = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size() || !std::isfinite(v)) throw InvalidArgument("bad number '" + s + "' in range '" + text + "'");
    return v;
  };
  if (parts.size() == 1) {
    const double v = number(parts[0]);
    return {v, v, 1};
  }
  if (parts.size() != 3) throw InvalidArgument("range '" + text + "' must be lo:hi:count");
  const double c = number(parts[2]);
  if (c < 1 || c != std::floor(c)) throw InvalidArgument("range count must be a positive integer in '" + text + "'");
  return {number(parts[0]), number(parts[1]), static_cast<int>(c)};
}

std::string format_range(const Range& r) {
  std::ostringstream os;
  os.precision(17);
  if (r.count == 1 && r.lo == r.hi) {
    os << r.lo;
  } else {
    os << r.lo << ':' << r.hi << ':' << r.count;
  }
  return os.str();
}

std::vector<double> RunConfig::betas() const {
  if (!theta) return beta.values();
  std::vector<double> out;
  for (double t : theta->values()) out.push_back(0.5 * std::log(t));
  return out;
}

void RunConfig::validate() const {
  bool known = false;
  for (const auto& c : commands()) known = known || c == command;
  if (!known) throw InvalidArgument("unknown command '" + command + "'");
  if (theta) {
    if (theta->count < 1 || !(theta->lo >= 1.0) || !(theta->hi >= 1.0)) throw InvalidArgument("--theta: values must be >= 1");
  } else if (beta.count < 1 || !(beta.lo >= 0.0) || !(beta.hi >= 0.0)) {
    throw InvalidArgument("--beta: values must be >= 0");
  }
  if (J.count < 1 || !(J.lo >= 0.0) || !(J.hi >= 0.0)) throw InvalidArgument("--J: values must be >= 0");
  if (!(tol > 0.0)) throw InvalidArgument("--tol must be positive");
  if (!(oracle_tol > 0.0)) throw InvalidArgument("--oracle-tol must be positive");
  if (n < 1) throw InvalidArgument("--n must be >= 1");
  if (n_max < 1) throw InvalidArgument("--n-max must be >= 1");
  if (random_seeds < 0) throw InvalidArgument("--random-seeds must be >= 0");
  if (diagonal_cap < 1 || diagonal_cap > kDiagonalSiteCap)
    throw InvalidArgument("--diagonal-cap must lie in [1, " + std::to_string(kDiagonalSiteCap) + "]");
  if (!(perturb >= 0.0)) throw InvalidArgument("--perturb must be >= 0");
  if (placement != "n" && placement != "n+1") throw InvalidArgument("--placement must be n or n+1");
  if (threads < 0) throw InvalidArgument("--threads must be >= 0");
  const bool tabular = command == "phase-scan" || command == "expectation";
  if (!format.empty() && format != "json" && !(tabular && format == "csv"))
    throw InvalidArgument("--format '" + format + "' is not available for " + command);
}

void to_json(Json& j, const Range& r) { j = Json{{"lo", r.lo}, {"hi", r.hi}, {"count", r.count}}; }

void from_json(const Json& j, Range& r) {
  if (j.is_string()) {
    r = parse_range(j.get<std::string>());
    return;
  }
  if (j.is_number()) {
    r = {j.get<double>(), j.get<double>(), 1};
    return;
  }
  r.lo = j.at("lo").get<double>();
  r.hi = j.at("hi").get<double>();
  r.count = j.at("count").get<int>();
}

void to_json(Json& j, const RunConfig& c) {
  j = Json{{"command", c.command},
           {"beta", c.beta},
           {"theta", c.theta ? Json(*c.theta) : Json(nullptr)},
           {"J", c.J},
           {"n", c.n},
           {"n_max", c.n_max},
           {"all_solutions", c.all_solutions},
           {"perturb", c.perturb},
           {"seed", c.seed},
           {"random_seeds", c.random_seeds},
           {"cross_check", c.cross_check},
           {"oracle", c.oracle},
           {"placement", c.placement},
           {"tol", c.tol},
           {"oracle_tol", c.oracle_tol},
           {"diagonal_cap", c.diagonal_cap},
           {"threads", c.threads},
           {"format", c.format},
           {"out", c.out}};
}

void from_json(const Json& j, RunConfig& c) {
  RunConfig d;
  c.command = j.value("command", d.command);
  c.beta = j.contains("beta") ? j.at("beta").get<Range>() : d.beta;
  c.theta = (j.contains("theta") && !j.at("theta").is_null()) ? std::optional<Range>(j.at("theta").get<Range>())
                                                             : std::nullopt;
  c.J = j.contains("J") ? j.at("J").get<Range>() : d.J;
  c.n = j.value("n", d.n);
  c.n_max = j.value("n_max", d.n_max);
  c.all_solutions = j.value("all_solutions", d.all_solutions);
  c.perturb = j.value("perturb", d.perturb);
  c.seed = j.value("seed", d.seed);
  c.random_seeds = j.value("random_seeds", d.random_seeds);
  c.cross_check = j.value("cross_check", d.cross_check);
  c.oracle = j.value("oracle", d.oracle);
  c.placement = j.value("placement", d.placement);
  c.tol = j.value("tol", d.tol);
  c.oracle_tol = j.value("oracle_tol", d.oracle_tol);
  c.diagonal_cap = j.value("diagonal_cap", d.diagonal_cap);
  c.threads = j.value("threads", d.threads);
  c.format = j.value("format", d.format);
  c.out = j.value("out", d.out);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("--config: cannot open '" + path + "'");
  try {
    return Json::parse(in).get<RunConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("--config: " + std::string(e.what()));
  }
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

struct GridPoint {
  ModelParams p;
  double theta;
  double Delta;
};

std::vector<GridPoint> grid(const RunConfig& c) {
  std::vector<GridPoint> g;
  for (double b : c.betas())
    for (double J : c.J.values()) {
      const ModelParams p{b, J, 2};
      g.push_back({p, p.theta(), delta(p.theta(), J)});
    }
  return g;
}

Json point_json(const GridPoint& g) {
  return Json{{"beta", g.p.beta}, {"J", g.p.J}, {"theta", g.theta}, {"Delta", g.Delta}};
}

Json resolutions_json() { return Json(resolved_discrepancies()); }

std::string render_phase_scan(const RunConfig& c, bool& passed) {
  ScanOptions opts;
  opts.cross_check = c.cross_check;
  opts.threads = c.threads;
  const auto pts = scan(c.betas(), c.J.values(), opts);
  for (const auto& p : pts) passed = passed && !p.mismatch;
  if (c.format == "json") return dump(Json{{"command", c.command}, {"points", pts}});
  std::string s = "beta,J,theta,Delta,region,solutions\n";
  for (const auto& p : pts)
    s += num(p.beta) + "," + num(p.J) + "," + num(p.theta) + "," + num(p.Delta) + "," + to_string(p.region) + "," +
         std::to_string(p.solution_count) + "\n";
  return s;
}

bool same_solution(const BoundarySolution& a, const BoundarySolution& b, double radius) {
  const double scale = std::max(1.0, std::fabs(b.trace_h()));
  return std::fabs(a.trace_h() - b.trace_h()) <= radius * scale &&
         std::fabs(a.trace_sigma_h() - b.trace_sigma_h()) <= radius * scale;
}

std::string render_solve_boundary(const RunConfig& c, bool& passed) {
  Json points = Json::array();
  const NewtonOptions newton;
  for (const auto& g : grid(c)) {
    Json pj = point_json(g);
    if (!(g.theta > 1.0)) {
      pj["regime"] = "degenerate";
      pj["solutions"] = Json::array({Json{{"tag", "symmetric"}, {"h", site_operator_json(site::identity())}}});
      points.push_back(pj);
      continue;
    }
    pj["regime"] = to_string(classify(g.p));
    const auto closed = closed_form_solutions(g.p);
    Json sols = Json::array();
    for (const auto& s : closed) {
      const auto rep = check_boundary_equations(g.p, s.condition(), c.tol);
      passed = passed && rep.pass;
      Json sj = s;
      sj["residual"] = rep.residual();
      sj["pass"] = rep.pass;
      sols.push_back(sj);
    }
    pj["solutions"] = sols;

    auto seeds = default_seeds(g.p);
    const auto extra = random_seeds(c.seed, c.random_seeds);
    seeds.insert(seeds.end(), extra.begin(), extra.end());
    const auto res = solve_numeric(g.p, seeds, newton);
    bool match = res.solutions.size() == closed.size();
    for (const auto& s : closed) {
      bool found = false;
      for (const auto& t : res.solutions) found = found || same_solution(t, s, newton.dedup_radius);
      match = match && found;
    }
    passed = passed && match;
    Json traces = Json::array();
    for (const auto& t : res.solutions) traces.push_back(Json{{"t", t.trace_h()}, {"s", t.trace_sigma_h()}});
    pj["numeric"] = Json{{"seeds", seeds.size()},
                         {"solutions", traces},
                         {"degenerate", res.degenerate},
                         {"failures", res.failures.size()},
                         {"matches_closed_form", match}};
    points.push_back(pj);
  }
  return dump(Json{{"command", c.command}, {"seed", c.seed}, {"points", points}, {"pass", passed}});
}

std::string render_verify(const RunConfig& c, bool& passed) {
  Json records = Json::array();
  VolumeOptions vopts;
  vopts.diagonal_site_cap = c.diagonal_cap;
  vopts.tol = c.tol;
  auto record = [&](const char* check, int n, const GridPoint& g, const std::string& sol, double residual, bool pass) {
    passed = passed && pass;
    records.push_back(Json{{"check", check},   {"n", n},        {"beta", g.p.beta}, {"J", g.p.J}, {"theta", g.theta},
                           {"solution", sol}, {"residual", residual}, {"pass", pass}});
  };
  for (const auto& g : grid(c)) {
    std::vector<BoundarySolution> sols;
    if (c.all_solutions)
      sols = closed_form_solutions(g.p);
    else
      sols.push_back(symmetric_solution(g.p));
    for (const auto& s : sols) {
      const auto name = to_string(s.tag);
      const auto bc = s.condition();
      const auto eq = check_boundary_equations(g.p, bc, c.tol);
      record("boundary_equations", 0, g, name, eq.residual(), eq.pass);
      for (int n = 1; n <= c.n; ++n) {
        const auto pr = check_projectivity(n, g.p, bc, c.tol, vopts);
        record("projectivity", n, g, name, pr.deviation, pr.deviation <= c.tol);
        record("normalization", n, g, name, pr.trace_deviation, pr.trace_deviation <= c.tol);
        if (c.perturb > 0.0) {
          auto bad = bc;
          bad.h(0, 0) += c.perturb;
          const auto pb = check_projectivity(n, g.p, bad, c.tol, vopts);
          // a perturbed boundary must be detected
          record("perturbation_detected", n, g, name, pb.deviation, pb.deviation > 1e-3);
        }
      }
    }
  }
  return dump(Json{{"command", c.command}, {"records", records}, {"pass", passed}});
}

const char* resolution_for(const std::string& observable, StateId s, DisorderPlacement placement) {
  if (s == StateId::Alpha) return "-";
  if (observable == "p" || observable == "q") return "projector_prefactor";
  if (observable == "E") return "edge_marginal_bracket";
  return placement == DisorderPlacement::LevelN ? "disorder_placement" : "-";
}

std::string render_expectation(const RunConfig& c, bool& passed) {
  const auto placement = c.placement == "n" ? DisorderPlacement::LevelN : DisorderPlacement::LevelNPlus1;
  OracleOptions oopts;
  oopts.diagonal_site_cap = c.diagonal_cap;
  oopts.threads = c.threads;
  struct Row {
    GridPoint g;
    int n;
    std::string observable;
    StateId state;
    double closed;
    std::optional<double> oracle;
    std::string resolution;
  };
  std::vector<Row> rows;
  for (const auto& g : grid(c)) {
    const bool broken = g.theta > 1.0 && g.Delta > kCriticalBand;
    std::vector<StateId> states = {StateId::Alpha};
    if (broken) {
      states.push_back(StateId::Phi1);
      states.push_back(StateId::Phi2);
    }
    for (int n = 1; n <= c.n; ++n)
      for (StateId s : states) {
        const auto bc = state_boundary(s, g.p).condition();
        auto add = [&](const std::string& obs, double closed, const LocalOperator& op, int volume) {
          Row r{g, n, obs, s, closed, std::nullopt, resolution_for(obs, s, placement)};
          if (c.oracle && static_cast<int>(volume_size(volume, 2)) <= c.diagonal_cap)
            r.oracle = expectation_oracle(volume, g.p, bc, op, oopts).real();
          rows.push_back(r);
        };
        add("p", projector_value(s, Projector::P, n, g.p), projector_observable(Projector::P, n), n);
        add("q", projector_value(s, Projector::Q, n, g.p), projector_observable(Projector::Q, n), n);
        add("E", edge_marginal(s, n, g.p), edge_observable(n), n);
        add("a_sigma", disorder_value(s, n, g.p, placement), disorder_observable(n, 2, placement),
            placement == DisorderPlacement::LevelN ? n : n + 1);
      }
  }
  auto gap_ok = [&](const Row& r) {
    const double gap = std::fabs(r.closed - *r.oracle);
    // exact zeros are compared against the rounding floor of the enumeration
    return gap <= c.oracle_tol * std::fabs(*r.oracle) || gap <= 1e-14;
  };
  for (const auto& r : rows)
    if (r.oracle) passed = passed && gap_ok(r);

  if (c.format == "json") {
    Json out = Json::array();
    for (const auto& r : rows) {
      Json j = point_json(r.g);
      j["n"] = r.n;
      j["observable"] = r.observable;
      j["state"] = to_string(r.state);
      j["closed_form"] = r.closed;
      j["oracle"] = r.oracle ? Json(*r.oracle) : Json(nullptr);
      j["abs_gap"] = r.oracle ? Json(std::fabs(r.closed - *r.oracle)) : Json(nullptr);
      j["provenance"] = r.oracle ? "both" : "closed_form";
      j["resolution"] = r.resolution;
      j["pass"] = r.oracle ? gap_ok(r) : true;
      out.push_back(j);
    }
    return dump(Json{{"command", c.command}, {"rows", out}, {"resolutions", resolutions_json()}, {"pass", passed}});
  }
  std::string s = "beta,J,theta,Delta,n,observable,state,closed_form,oracle,abs_gap,provenance,resolution\n";
  for (const auto& r : rows) {
    s += num(r.g.p.beta) + "," + num(r.g.p.J) + "," + num(r.g.theta) + "," + num(r.g.Delta) + "," +
         std::to_string(r.n) + "," + r.observable + "," + to_string(r.state) + "," + num(r.closed) + ",";
    if (r.oracle)
      s += num(*r.oracle) + "," + num(std::fabs(r.closed - *r.oracle)) + ",both,";
    else
      s += ",,closed_form,";
    s += r.resolution + "\n";
  }
  return s;
}

std::string render_witness(const RunConfig& c, bool& passed) {
  Json points = Json::array();
  for (const auto& g : grid(c)) {
    const auto w = witness_report(g.p, c.n_max);
    const auto t = transfer_data(g.p);
    const bool ok = w.I1 > 0 && w.epsilon0 > 0 && w.lower_bound_holds && w.edge_gap_beyond_crossover &&
                    w.disorder_gap_beyond_crossover;
    passed = passed && ok;
    Json pj = w;
    pj["transfer"] = t;
    Json proj = Json::object();
    for (StateId s : {StateId::Phi1, StateId::Phi2}) {
      proj[to_string(s) + "_p"] = projector_value(s, Projector::P, c.n, g.p);
      proj[to_string(s) + "_q"] = projector_value(s, Projector::Q, c.n, g.p);
    }
    pj["projectors"] = Json{{"n", c.n}, {"values", proj}};
    pj["pass"] = ok;
    points.push_back(pj);
  }
  return dump(Json{{"command", c.command},
                   {"n_max", c.n_max},
                   {"points", points},
                   {"resolutions", resolutions_json()},
                   {"pass", passed}});
}

}  // namespace

std::string render(const RunConfig& config, bool& passed) {
  config.validate();
  passed = true;
  if (config.command == "phase-scan") return render_phase_scan(config, passed);
  if (config.command == "solve-boundary") return render_solve_boundary(config, passed);
  if (config.command == "verify") return render_verify(config, passed);
  if (config.command == "expectation") return render_expectation(config, passed);
  return render_witness(config, passed);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::string text;
  bool passed = true;
  try {
    text = render(config, passed);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NoBrokenPhase& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const VolumeCapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedSize& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "verification error: " << e.what() << "\n";
    return kExitVerification;
  }
  if (config.out.empty()) {
    out << text;
  } else {
    std::ofstream f(config.out, std::ios::binary);
    if (!f) {
      err << "error: --out: cannot write '" << config.out << "'\n";
      return kExitUsage;
    }
    f << text;
  }
  if (!passed) err << "verification failed\n";
  return passed ? kExitOk : kExitVerification;
}

}  // namespace qmc
