#include "pird/io.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>

#include "pird/errors.hpp"

namespace pird {

namespace {

json matrix_to_json(const MatrixXd& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXd matrix_from_json(const json& j, Index dim, const std::string& what) {
  if (!j.is_array() || static_cast<Index>(j.size()) != dim) {
    throw DataError(what + " must be a list of " + std::to_string(dim) + " rows");
  }
  MatrixXd m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
      throw DataError(what + " row " + std::to_string(i) + " must have " +
                      std::to_string(dim) + " entries");
    }
    for (Index c = 0; c < dim; ++c) m(i, c) = row[c].get<double>();
  }
  return m;
}

json scaled(const std::vector<double>& v, double scale) {
  json out = json::array();
  for (double x : v) out.push_back(x * scale);
  return out;
}

}  // namespace

double unit_scale(Units units) {
  return units == Units::bits ? 1.0 / std::numbers::ln2 : 1.0;
}

std::string to_string(Units units) { return units == Units::bits ? "bits" : "nats"; }

json atom_to_json(const Atom& atom) { return atom.to_nested(); }

Atom atom_from_json(const json& j, int n_sources) {
  try {
    return Atom::from_nested(j.get<std::vector<std::vector<int>>>(), n_sources);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed atom: ") + e.what());
  }
}

json to_json(const VarModel& model) {
  json coeffs = json::array();
  for (const auto& a : model.coeffs()) coeffs.push_back(matrix_to_json(a));
  return {{"dim", model.dim()},
          {"order", model.order()},
          {"coeffs", coeffs},
          {"innovation_cov", matrix_to_json(model.innovation_cov())}};
}

VarModel var_model_from_json(const json& j) {
  try {
    const Index dim = j.at("dim").get<Index>();
    const int order = j.at("order").get<int>();
    if (dim < 1 || order < 0) throw DataError("invalid VAR model dimensions");
    const auto& coeffs = j.at("coeffs");
    if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != order) {
      throw DataError("coeffs must hold exactly `order` matrices");
    }
    std::vector<MatrixXd> a;
    for (int k = 0; k < order; ++k) {
      a.push_back(matrix_from_json(coeffs[k], dim, "coeffs[" + std::to_string(k) + "]"));
    }
    return VarModel(std::move(a), matrix_from_json(j.at("innovation_cov"), dim,
                                                   "innovation_cov"));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed VAR model JSON: ") + e.what());
  }
}

json to_json(const PirdSummary& s, double scale) {
  json out = {{"R", s.redundancy * scale},
              {"S", s.synergy * scale},
              {"joint", s.joint * scale},
              {"convention", s.convention}};
  if (s.unique.size() > 2) out["other"] = s.other * scale;
  for (std::size_t i = 0; i < s.unique.size(); ++i) {
    out["U" + std::to_string(i + 1)] = s.unique[i] * scale;
  }
  return out;
}

json to_json(const Decomposition& d, double scale) {
  json atoms = json::array();
  for (std::size_t a = 0; a < d.lattice.size(); ++a) {
    atoms.push_back({{"atom", atom_to_json(d.lattice.atom(a))},
                     {"label", d.lattice.atom(a).to_string()},
                     {"cumulative", d.cumulative_rates[a] * scale},
                     {"partial", d.atom_rates[a] * scale},
                     {"null", a < d.null_atoms.size() && d.null_atoms[a]}});
  }
  return {{"n_sources", d.lattice.n_sources()},
          {"target", d.target},
          {"sources", d.sources},
          {"atoms", atoms},
          {"joint_mir", d.joint_mir * scale},
          {"marginal_mirs", scaled(d.marginal_mirs, scale)},
          {"residuals",
           {{"joint", d.residual_joint * scale}, {"marginal", d.residual_marginal * scale}}},
          {"summary", to_json(summarize(d), scale)}};
}

json to_json(const PirdResult& r, double scale) {
  json out = to_json(static_cast<const Decomposition&>(r), scale);
  out["grid_points"] = r.grid.size();
  out["band"] = r.band ? json::array({r.band->lo, r.band->hi})
                       : json::array({0.0, std::numbers::pi});
  return out;
}

json to_json(const SignificanceReport& report, double scale) {
  json quantities = json::array();
  for (const auto& q : report.quantities) {
    quantities.push_back({{"name", q.name},
                          {"original", q.original * scale},
                          {"lower", q.lower * scale},
                          {"upper", q.upper * scale},
                          {"significant", q.significant}});
  }
  const auto& o = report.options;
  return {{"n_surrogates", o.n_surrogates},
          {"alpha", o.alpha},
          {"percentiles", {50.0 * o.alpha, 100.0 - 50.0 * o.alpha}},
          {"seed", o.seed},
          {"max_order", o.max_order},
          {"grid_points", o.grid_points},
          {"order_reselected_per_surrogate", true},
          {"original_order", report.original_order},
          {"surrogate_orders", report.surrogate_orders},
          {"failed", report.failed},
          {"failures", report.failures},
          {"quantities", quantities}};
}

void write_profiles_csv(std::ostream& out, const PirdResult& r, double scale) {
  out << "omega";
  for (const auto& atom : r.lattice.atoms()) out << ",\"" << atom.to_string() << '"';
  out << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < r.grid.size(); ++k) {
    out << r.grid.point(k);
    for (const auto& profile : r.spectral_profiles) out << ',' << profile[k] * scale;
    out << '\n';
  }
}

void write_surrogate_csv(std::ostream& out, const SignificanceReport& report,
                         double scale) {
  out << "surrogate";
  for (const auto& q : report.quantities) out << ',' << q.name;
  out << '\n' << std::setprecision(17);
  const std::size_t n = report.quantities.empty() ? 0 : report.quantities[0].surrogates.size();
  for (std::size_t k = 0; k < n; ++k) {
    out << k;
    for (const auto& q : report.quantities) out << ',' << q.surrogates[k] * scale;
    out << '\n';
  }
}

json design_metadata() {
  return {
      {"rates", "natural log; nats per sample unless converted"},
      {"quadrature", "trapezoid on uniform [0, pi] grid, normalized (1/pi) integral"},
      {"redundancy", "pointwise minimum over groups of the spectral MIR"},
      {"var_estimation", "least squares on demeaned channels, residual divisor n-p"},
      {"aic", "ln det Sigma(p) + 2 p M^2 / n, common sample range"},
      {"deseasonalize", "per-phase mean subtraction"},
      {"detrend", "least-squares linear trend"},
      {"summary_n_gt_2",
       "non-canonical: R=bottom atom, U_i={i}, S=atoms whose groups all have >=2 "
       "sources, other=remaining atoms"},
      {"null_atom_threshold", kNullProfileThreshold}};
}

}  // namespace pird
