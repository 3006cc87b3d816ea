#pragma once

#include <json.hpp>
#include <ostream>
#include <string>

#include "pird/pird.hpp"
#include "pird/surrogate.hpp"

namespace pird {

using json = nlohmann::json;

enum class Units { nats, bits };

/// Multiplier from nats to the requested unit.
double unit_scale(Units units);
std::string to_string(Units units);

/// Atoms serialize as nested integer arrays, e.g. [[1],[2]].
json atom_to_json(const Atom& atom);
Atom atom_from_json(const json& j, int n_sources);

/// {dim, order, coeffs: [A_1, ...], innovation_cov}, each matrix a list of
/// rows.
json to_json(const VarModel& model);
VarModel var_model_from_json(const json& j);

json to_json(const PirdSummary& summary, double scale = 1.0);

/// Atoms with cumulative and partial rates, joint/marginal rates, residuals
/// and the summary. Profiles are not included; see write_profiles_csv.
json to_json(const Decomposition& result, double scale = 1.0);
json to_json(const PirdResult& result, double scale = 1.0);

json to_json(const SignificanceReport& report, double scale = 1.0);

/// omega, then one column of i^∩(ω) per atom.
void write_profiles_csv(std::ostream& out, const PirdResult& result,
                        double scale = 1.0);

/// One row per surrogate, one column per quantity.
void write_surrogate_csv(std::ostream& out, const SignificanceReport& report,
                         double scale = 1.0);

/// Method choices that affect reported numbers.
json design_metadata();

}  // namespace pird
