#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pird/pird_all.hpp"

namespace py = pybind11;
using namespace pird;

namespace {

TimeSeriesSet as_series(const MatrixXd& samples, std::vector<std::string> labels) {
  TimeSeriesSet s;
  s.samples = samples;
  s.labels = std::move(labels);
  return s;
}

std::optional<Band> as_band(const std::optional<std::pair<double, double>>& band) {
  if (!band) return std::nullopt;
  return Band{band->first, band->second};
}

py::object json_to_py(const json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Partial information rate decomposition for Gaussian VAR processes.";
  m.attr("__version__") = PIRD_VERSION;
  m.attr("DEFAULT_GRID_POINTS") = kDefaultGridPoints;

  auto base = py::register_exception<Error>(m, "PirdError", PyExc_RuntimeError);
  auto data = py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", data.ptr());
  py::register_exception<EstimationError>(m, "EstimationError", data.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<StabilityError>(m, "StabilityError", numerical.ptr());
  py::register_exception<DegenerateSpectrumError>(m, "DegenerateSpectrumError", numerical.ptr());
  py::register_exception<ConsistencyError>(m, "ConsistencyError", numerical.ptr());
  // Usage errors are argument problems; Python callers expect ValueError.
  py::register_exception<SizeError>(m, "SizeError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
  py::register_exception<IncompleteInputError>(m, "IncompleteInputError", PyExc_ValueError);

  py::class_<VarModel>(m, "VarModel")
      .def(py::init<std::vector<MatrixXd>, MatrixXd>(), py::arg("coeffs"),
           py::arg("innovation_cov"))
      .def_static("white_noise", &VarModel::white_noise, py::arg("innovation_cov"))
      .def_property_readonly("dim", &VarModel::dim)
      .def_property_readonly("order", &VarModel::order)
      .def_property_readonly("coeffs", &VarModel::coeffs)
      .def_property_readonly("innovation_cov", &VarModel::innovation_cov)
      .def("companion", &VarModel::companion)
      .def("spectral_radius", &companion_spectral_radius)
      .def("to_json", [](const VarModel& v) { return json_to_py(to_json(v)); })
      .def("__repr__", [](const VarModel& v) {
        return "VarModel(dim=" + std::to_string(v.dim()) + ", order=" + std::to_string(v.order()) +
               ")";
      });

  m.def(
      "simulate",
      [](const VarModel& model, Index n, Index burn_in, std::uint64_t seed) {
        return simulate(model, n, burn_in, seed).samples;
      },
      py::arg("model"), py::arg("n_samples"), py::arg("burn_in") = kDefaultBurnIn,
      py::arg("seed") = 0, "Simulated (n_samples, dim) array.");
  m.def(
      "estimate",
      [](const MatrixXd& samples, int order) { return estimate(as_series(samples, {}), order); },
      py::arg("samples"), py::arg("order"));
  m.def(
      "select_order",
      [](const MatrixXd& samples, int max_order) {
        const auto sel = select_order_detailed(as_series(samples, {}), max_order);
        return py::make_tuple(sel.order, sel.aic);
      },
      py::arg("samples"), py::arg("max_order") = 20, "(order, AIC per candidate order)");
  m.def("process_covariance", &process_covariance, py::arg("model"));
  m.def("sample_covariance", &sample_covariance, py::arg("samples"));

  py::class_<PirdSummary>(m, "Summary")
      .def_readonly("redundancy", &PirdSummary::redundancy)
      .def_readonly("unique", &PirdSummary::unique)
      .def_readonly("synergy", &PirdSummary::synergy)
      .def_readonly("other", &PirdSummary::other)
      .def_readonly("joint", &PirdSummary::joint)
      .def_readonly("convention", &PirdSummary::convention)
      .def("to_dict", [](const PirdSummary& s) { return json_to_py(to_json(s)); });

  py::class_<Decomposition>(m, "Decomposition")
      .def_readonly("target", &Decomposition::target)
      .def_readonly("sources", &Decomposition::sources)
      .def_readonly("cumulative_rates", &Decomposition::cumulative_rates)
      .def_readonly("atom_rates", &Decomposition::atom_rates)
      .def_readonly("joint_mir", &Decomposition::joint_mir)
      .def_readonly("marginal_mirs", &Decomposition::marginal_mirs)
      .def_readonly("residual_joint", &Decomposition::residual_joint)
      .def_readonly("residual_marginal", &Decomposition::residual_marginal)
      .def_readonly("null_atoms", &Decomposition::null_atoms)
      .def_property_readonly("atom_labels",
                             [](const Decomposition& d) {
                               std::vector<std::string> out;
                               for (const auto& a : d.lattice.atoms()) out.push_back(a.to_string());
                               return out;
                             })
      .def("summary", &summarize)
      .def(
          "to_json",
          [](const Decomposition& d, bool bits) {
            return json_to_py(to_json(d, unit_scale(bits ? Units::bits : Units::nats)));
          },
          py::arg("bits") = false);

  py::class_<PirdResult, Decomposition>(m, "PirdResult")
      .def_property_readonly("omega",
                             [](const PirdResult& r) {
                               const auto p = r.grid.points();
                               return std::vector<double>(p.begin(), p.end());
                             })
      .def_readonly("spectral_profiles", &PirdResult::spectral_profiles)
      .def_readonly("atom_profiles", &PirdResult::atom_profiles)
      .def_property_readonly("band",
                             [](const PirdResult& r) -> std::optional<std::pair<double, double>> {
                               if (!r.band) return std::nullopt;
                               return std::pair{r.band->lo, r.band->hi};
                             })
      .def(
          "to_json",
          [](const PirdResult& r, bool bits) {
            return json_to_py(to_json(r, unit_scale(bits ? Units::bits : Units::nats)));
          },
          py::arg("bits") = false);

  m.def(
      "decompose",
      [](const VarModel& model, Index target, std::vector<Index> sources, int grid_points,
         std::optional<std::pair<double, double>> band) {
        return decompose(model, target, std::move(sources), FrequencyGrid(grid_points),
                         as_band(band));
      },
      py::arg("model"), py::arg("target"), py::arg("sources"),
      py::arg("grid_points") = kDefaultGridPoints, py::arg("band") = py::none(),
      "Spectral decomposition of the target's information rate. Channels are 0-based.");
  m.def("static_decomposition", &static_decomposition, py::arg("covariance"), py::arg("target"),
        py::arg("sources"));
  m.def("static_pid", &static_pid, py::arg("covariance"), py::arg("target"), py::arg("sources"));
  m.def(
      "build_model",
      [](int setting, double d) { return build_model(static_cast<SweepSetting>(setting), d); },
      py::arg("setting"), py::arg("d"), "Reference system 1 or 2 at coupling d.");
  m.def("zero_lag_covariance", &zero_lag_covariance, py::arg("model"));
  m.def(
      "run_sweep",
      [](int setting, std::optional<std::vector<double>> d_grid, int grid_points) {
        SweepConfig cfg;
        cfg.setting = static_cast<SweepSetting>(setting);
        if (d_grid) cfg.d_grid = *d_grid;
        cfg.grid_points = grid_points;
        py::list rows;
        for (const auto& r : run_sweep(cfg).rows) {
          py::dict row;
          row["d"] = r.d;
          row["joint_mir"] = r.joint_mir;
          row["zero_lag_mi"] = r.zero_lag_mi;
          row["pird"] = json_to_py(to_json(r.pird));
          row["pid"] = json_to_py(to_json(r.pid));
          rows.append(row);
        }
        return rows;
      },
      py::arg("setting"), py::arg("d_grid") = py::none(),
      py::arg("grid_points") = kDefaultGridPoints);

  m.def(
      "shuffle_surrogate",
      [](const MatrixXd& samples, std::uint64_t seed) {
        return shuffle_surrogate(as_series(samples, {}), seed).samples;
      },
      py::arg("samples"), py::arg("seed"));
  m.def(
      "significance",
      [](const MatrixXd& samples, Index target, std::vector<Index> sources, int n_surrogates,
         double alpha, std::uint64_t seed, int max_order, int grid_points) {
        SignificanceOptions o;
        o.n_surrogates = n_surrogates;
        o.alpha = alpha;
        o.seed = seed;
        o.max_order = max_order;
        o.grid_points = grid_points;
        const auto report = significance(as_series(samples, {}), target, std::move(sources), o);
        json j = to_json(report);
        for (std::size_t q = 0; q < report.quantities.size(); ++q) {
          j["quantities"][q]["surrogates"] = report.quantities[q].surrogates;
        }
        return json_to_py(j);
      },
      py::arg("samples"), py::arg("target"), py::arg("sources"), py::arg("n_surrogates") = 100,
      py::arg("alpha") = 0.05, py::arg("seed") = 0, py::arg("max_order") = 20,
      py::arg("grid_points") = kDefaultGridPoints, "Shuffle-surrogate report as a dict, including every surrogate value.");
}
