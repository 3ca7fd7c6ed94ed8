#include "qmc/json_io.hpp"

namespace qmc {

void to_json(Json& j, const TreeCoord& x) { j = x.path; }
void from_json(const Json& j, TreeCoord& x) { x.path = j.get<std::vector<int>>(); }

namespace {

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidArgument("complex entry must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_json(const Eigen::Matrix2d& m) {
  return Json::array({Json::array({m(0, 0), m(0, 1)}), Json::array({m(1, 0), m(1, 1)})});
}

Json coefficients_json(const SpectralCoefficients<double>& s) {
  return Json{{"hat1", s.hat1}, {"hat2", s.hat2}, {"check1", s.check1}, {"check2", s.check2}};
}

}  // namespace

Json site_operator_json(const SiteOperator& a) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(complex_json(a(r, c)));
    rows.push_back(row);
  }
  return rows;
}

void to_json(Json& j, const LocalOperator& a) {
  Json entries = Json::array();
  if (a.is_diagonal_repr()) {
    for (Eigen::Index i = 0; i < a.diag_entries().size(); ++i) entries.push_back(complex_json(a.diag_entries()(i)));
  } else {
    const auto& m = a.dense_entries();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(complex_json(m(r, c)));
  }
  j = Json{{"support", a.support()}, {"repr", a.is_diagonal_repr() ? "diag" : "dense"}, {"entries", entries}};
}

void from_json(const Json& j, LocalOperator& a) {
  auto support = j.at("support").get<std::vector<int>>();
  const auto repr = j.at("repr").get<std::string>();
  const auto& entries = j.at("entries");
  const Eigen::Index dim = Eigen::Index{1} << support.size();
  if (repr == "diag") {
    if (static_cast<Eigen::Index>(entries.size()) != dim) throw DimensionMismatch("diag entry count");
    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = complex_from(entries[i]);
    a = LocalOperator::diagonal(std::move(support), v);
  } else if (repr == "dense") {
    if (static_cast<Eigen::Index>(entries.size()) != dim * dim) throw DimensionMismatch("dense entry count");
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
      for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = complex_from(entries[r * dim + c]);
    a = LocalOperator::dense(std::move(support), m);
  } else {
    throw InvalidArgument("unknown repr '" + repr + "'");
  }
}

void to_json(Json& j, const ModelParams& p) { j = Json{{"beta", p.beta}, {"J", p.J}, {"k", p.k}}; }

void from_json(const Json& j, ModelParams& p) {
  p.beta = j.at("beta").get<double>();
  p.J = j.at("J").get<double>();
  p.k = j.value("k", 2);
}

void to_json(Json& j, const BoundarySolution& s) {
  j = Json{{"tag", to_string(s.tag)}, {"xi0", s.xi0},   {"xi3", s.xi3},
           {"alpha", s.alpha},        {"omega0", site_operator_json(s.omega0)}, {"h", site_operator_json(s.h)}};
}

void to_json(Json& j, const ProjectivityReport& r) {
  j = Json{{"n", r.n}, {"deviation", r.deviation}, {"trace_deviation", r.trace_deviation}, {"tol", r.tol},
           {"pass", r.pass}};
}

void to_json(Json& j, const BoundaryEquationReport& r) {
  j = Json{{"eq1_residual", r.eq1_residual},
           {"eq2_residual", r.eq2_residual},
           {"reduced_residual", r.reduced_residual},
           {"tol", r.tol},
           {"pass", r.pass}};
}

void to_json(Json& j, const PhasePoint& p) {
  j = Json{{"beta", p.beta},   {"J", p.J}, {"theta", p.theta}, {"Delta", p.Delta}, {"region", to_string(p.region)},
           {"solutions", p.solution_count}, {"mismatch", p.mismatch}};
}

void to_json(Json& j, const TransferData& t) {
  j = Json{{"N_phi1", matrix_json(t.N_phi1)},
           {"N_phi2", matrix_json(t.N_phi2)},
           {"eigenvalues", {t.eigenvalues(0), t.eigenvalues(1)}},
           {"determinant", t.determinant},
           {"lambda", t.lambda},
           {"rho", coefficients_json(t.rho)},
           {"pi", coefficients_json(t.pi)}};
}

void to_json(Json& j, const WitnessReport& r) {
  j = Json{{"beta", r.beta},
           {"J", r.J},
           {"theta", r.theta},
           {"Delta", r.Delta},
           {"lambda", r.lambda},
           {"I1", r.I1},
           {"I1_closed_form", r.I1_closed_form},
           {"I2", r.I2},
           {"epsilon0", r.epsilon0},
           {"epsilon0_tail", r.epsilon0_tail},
           {"edge_crossover", r.edge_crossover},
           {"disorder_crossover", r.disorder_crossover},
           {"edge_gap", r.edge_gap},
           {"edge_lower_bound", r.edge_lower_bound},
           {"disorder_gap", r.disorder_gap},
           {"e11_norm", {{"operator", r.e11_operator_norm}, {"normalized_trace", r.e11_trace_norm}}},
           {"checks",
            {{"lower_bound_holds", r.lower_bound_holds},
             {"edge_gap_beyond_crossover", r.edge_gap_beyond_crossover},
             {"disorder_gap_beyond_crossover", r.disorder_gap_beyond_crossover}}}};
}

void to_json(Json& j, const OverlapRow& r) {
  j = Json{{"beta", r.beta},     {"theta", r.theta},   {"Delta", r.Delta},   {"broken_phase", r.broken_phase},
           {"phi1_p", r.phi1_p}, {"phi2_p", r.phi2_p}, {"phi1_q", r.phi1_q}, {"phi2_q", r.phi2_q},
           {"separated", r.separated}};
}

void to_json(Json& j, const Resolution& r) {
  j = Json{{"id", r.id}, {"alternative", r.alternative}, {"shipped", r.shipped}};
}

}  // namespace qmc
