#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>

#include "rnm/duality.hpp"
#include "rnm/experiment.hpp"
#include "rnm/partition_engine.hpp"
#include "rnm/version.hpp"

namespace py = pybind11;
using namespace rnm;

namespace {

using MutableSpace = std::shared_ptr<AtomicProbabilitySpace>;

std::vector<std::vector<double>> to_fibers(const RNElement& x) {
  std::vector<std::vector<double>> out(x.atom_count());
  for (std::size_t a = 0; a < x.atom_count(); ++a) {
    auto f = x.fiber(a);
    out[a].assign(f.begin(), f.end());
  }
  return out;
}

std::vector<std::size_t> to_atoms(const MeasurableSet& A) {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < A.atom_count(); ++a) {
    if (A.contains(a)) out.push_back(a);
  }
  return out;
}

py::object json_to_py(const nlohmann::json& doc) {
  py::module_ json = py::module_::import("json");
  return json.attr("loads")(doc.dump());
}

nlohmann::json py_to_json(const py::object& obj) {
  py::module_ json = py::module_::import("json");
  const std::string dumped = py::cast<std::string>(json.attr("dumps")(obj));
  return nlohmann::json::parse(dumped);
}

ScenarioConfig config_from_py(const py::object& doc, const std::string& name) {
  return ScenarioConfig::from_json(py_to_json(doc), name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Random normed modules over finite atomic probability spaces: "
            "norms, duality, asymptotically nonexpansive dynamics and the "
            "demiclosedness experiment harness.";
  m.attr("__version__") = kVersion;

  py::register_exception<Error>(m, "RnmError");

  py::class_<AtomicProbabilitySpace, MutableSpace>(m, "Space")
      .def(py::init([](const std::vector<double>& weights) {
             return std::make_shared<AtomicProbabilitySpace>(weights);
           }),
           py::arg("weights"))
      .def_property_readonly("atom_count", &AtomicProbabilitySpace::atom_count)
      .def_property_readonly("weights", &AtomicProbabilitySpace::weights);

  py::class_<L0Real>(m, "L0Real")
      .def(py::init([](const MutableSpace& space, const std::vector<double>& v) {
             return L0Real(space, v);
           }),
           py::arg("space"), py::arg("values"))
      .def_static("constant",
                  [](const MutableSpace& space, double v) {
                    return L0Real::constant(space, v);
                  })
      .def_property_readonly("values",
                             [](const L0Real& x) { return x.values(); })
      .def("max_abs", &L0Real::max_abs)
      .def("max_value", &L0Real::max_value)
      .def("__sub__", [](const L0Real& a, const L0Real& b) { return a - b; })
      .def("__add__", [](const L0Real& a, const L0Real& b) { return a + b; })
      .def("__mul__", [](const L0Real& a, double s) { return a * s; });

  py::class_<MeasurableSet>(m, "MeasurableSet")
      .def(py::init([](const MutableSpace& space,
                       const std::vector<std::size_t>& atoms) {
             return MeasurableSet::of(space, atoms);
           }),
           py::arg("space"), py::arg("atoms"))
      .def_property_readonly("atoms", &to_atoms)
      .def("complement", &MeasurableSet::complement)
      .def("prob", &MeasurableSet::prob);

  py::class_<Partition>(m, "Partition")
      .def(py::init([](const std::vector<MeasurableSet>& pieces) {
             return validate_partition(pieces);
           }),
           py::arg("pieces"))
      .def_property_readonly("pieces",
                             [](const Partition& p) {
                               std::vector<std::vector<std::size_t>> out;
                               for (const auto& piece : p.pieces()) {
                                 out.push_back(to_atoms(piece));
                               }
                               return out;
                             });

  py::class_<FiberSpec>(m, "FiberSpec")
      .def(py::init<int, double>(), py::arg("dimension"), py::arg("q"))
      .def_property_readonly("dimension", &FiberSpec::dimension)
      .def_property_readonly("q", &FiberSpec::exponent)
      .def_property_readonly("dual_q", &FiberSpec::dual_exponent);

  py::class_<RNElement>(m, "Element")
      .def(py::init([](const MutableSpace& space, const FiberSpec& fiber,
                       const std::vector<std::vector<double>>& fibers) {
             return RNElement::from_fibers(space, fiber, fibers);
           }),
           py::arg("space"), py::arg("fiber"), py::arg("fibers"))
      .def_static("zero",
                  [](const MutableSpace& space, const FiberSpec& fiber) {
                    return RNElement::zero(space, fiber);
                  })
      .def_property_readonly("fibers", &to_fibers)
      .def("__add__", [](const RNElement& a, const RNElement& b) { return a + b; })
      .def("__sub__", [](const RNElement& a, const RNElement& b) { return a - b; })
      .def("__mul__", [](const RNElement& a, double s) { return a * s; });

  py::class_<ConvexBody>(m, "ConvexBody")
      .def_static("ball", &ConvexBody::ball, py::arg("center"),
                  py::arg("radius"))
      .def_static("box", &ConvexBody::box, py::arg("lower"), py::arg("upper"))
      .def("contains", &ConvexBody::contains, py::arg("x"),
           py::arg("tol") = 1e-9)
      .def("project", &ConvexBody::project, py::arg("x"))
      .def("center_point", &ConvexBody::center_point)
      .def("bound", &ConvexBody::bound)
      .def("sample",
           [](const ConvexBody& body, std::uint64_t seed) {
             Rng rng(seed);
             return body.sample(rng);
           },
           py::arg("seed"));

  py::class_<RandomFunctional>(m, "Functional")
      .def(py::init([](const MutableSpace& space, const FiberSpec& fiber,
                       const std::vector<std::vector<double>>& fibers) {
             return RandomFunctional::from_fibers(space, fiber, fibers);
           }),
           py::arg("space"), py::arg("fiber"), py::arg("dual_fibers"))
      .def("evaluate", &RandomFunctional::evaluate, py::arg("x"));

  // measure-core operations
  m.def("almost_sure_leq", &almost_sure_leq, py::arg("xi"), py::arg("eta"));
  m.def("lattice_sup", &lattice_sup, py::arg("family"));
  m.def("indicator", &indicator, py::arg("A"));
  m.def("prob_of_exceed", &prob_of_exceed, py::arg("xi"), py::arg("eps"));
  m.def("converges_in_probability", &converges_in_probability, py::arg("seq"),
        py::arg("limit"), py::arg("eps"), py::arg("lambda_"), py::arg("tail"));

  // rn-module operations
  m.def("l0_norm", &l0_norm, py::arg("x"));
  m.def("module_scale", &module_scale, py::arg("xi"), py::arg("x"));
  m.def("support", [](const RNElement& x) { return to_atoms(support(x)); });
  m.def("glue",
        [](const Partition& partition, const std::vector<RNElement>& elements) {
          return glue(partition, elements);
        });
  m.def("body_contains", &body_contains, py::arg("body"), py::arg("x"),
        py::arg("tol") = 1e-9);
  m.def("body_project", &body_project, py::arg("body"), py::arg("x"));

  // duality-bridge operations
  m.def("lp_norm",
        [](const RNElement& x, double p) { return lp_norm(x, p); },
        py::arg("x"), py::arg("p"));
  m.def("lp_norm_scalar",
        [](const L0Real& xi, double p) { return lp_norm(xi, p); },
        py::arg("xi"), py::arg("p"));
  m.def("conjugate_norm", &conjugate_norm, py::arg("F"));
  m.def("canonical_pairing", &canonical_pairing, py::arg("F"), py::arg("x"));
  m.def("operator_norm_oracle",
        [](const RandomFunctional& F, double p, int grid) {
          return operator_norm_oracle(F, holder_pair(p), grid);
        },
        py::arg("F"), py::arg("p") = 2.0, py::arg("grid") = 32);
  m.def("random_weak_converges", &random_weak_converges, py::arg("seq"),
        py::arg("x"), py::arg("family"), py::arg("eps"), py::arg("lambda_"),
        py::arg("tail"));
  m.def("eps_lambda_converges", &eps_lambda_converges, py::arg("seq"),
        py::arg("x"), py::arg("eps"), py::arg("lambda_"), py::arg("tail"));
  m.def("random_uc_witness_check",
        [](const RNElement& x, const RNElement& y, const MeasurableSet& D,
           const L0Real& eps, const L0Real& delta) {
          return random_uc_witness_check(x, y, D, ConvexityParams(eps, delta));
        },
        py::arg("x"), py::arg("y"), py::arg("D"), py::arg("eps"),
        py::arg("delta"));
  m.def("lp_uc_modulus_estimate", &lp_uc_modulus_estimate, py::arg("p"),
        py::arg("eps"), py::arg("samples") = 60, py::arg("seed") = 2024);
  m.def("coordinate_dual_family",
        [](const MutableSpace& space, const FiberSpec& fiber) {
          return coordinate_dual_family(space, fiber);
        });

  // dynamics
  py::class_<AsymptoticMap>(m, "AsymptoticMap")
      .def_property_readonly("name", &AsymptoticMap::name)
      .def_property_readonly("sigma_stable", &AsymptoticMap::sigma_stable)
      .def_property_readonly("eta_horizon", &AsymptoticMap::eta_horizon)
      .def("apply", &AsymptoticMap::apply, py::arg("x"))
      .def("iterate", &AsymptoticMap::iterate, py::arg("x"), py::arg("m"))
      .def("eta", [](const AsymptoticMap& f, int m) { return f.eta_at(m); },
           py::arg("m"))
      .def_property_readonly("fixed_point",
                             [](const AsymptoticMap& f) -> py::object {
                               if (!f.fixed_point().has_value()) {
                                 return py::none();
                               }
                               return py::cast(*f.fixed_point());
                             });

  m.def("make_identity", &make_identity, py::arg("body"),
        py::arg("horizon") = kDefaultEtaHorizon);
  m.def("make_contraction", &make_contraction, py::arg("body"),
        py::arg("alpha"), py::arg("anchor"),
        py::arg("horizon") = kDefaultEtaHorizon);
  m.def("make_rotation", &make_rotation, py::arg("body"), py::arg("theta"),
        py::arg("horizon") = kDefaultEtaHorizon);
  m.def("make_stretch_chain", &make_stretch_chain, py::arg("body"),
        py::arg("exponents"), py::arg("anchor01") = 0.0,
        py::arg("horizon") = kDefaultEtaHorizon);
  m.def("make_glued", &make_glued, py::arg("partition"), py::arg("components"));
  m.def("with_eta_slack", &with_eta_slack, py::arg("map"), py::arg("slack"),
        py::arg("rate"));

  m.def("certify",
        [](const AsymptoticMap& f, int horizon, std::size_t samples,
           std::uint64_t seed) {
          const CertifyReport report = certify(f, horizon, samples, seed);
          py::dict out;
          out["horizon"] = report.horizon;
          out["samples"] = report.samples;
          out["violations"] = report.violation_count;
          out["passed"] = report.passed();
          py::list witnesses;
          for (const auto& v : report.violations) {
            py::dict w;
            w["sample"] = v.sample;
            w["m"] = v.m;
            w["atom"] = v.atom;
            w["lhs"] = v.lhs;
            w["bound"] = v.bound;
            w["x"] = to_fibers(v.x);
            w["y"] = to_fibers(v.y);
            witnesses.append(w);
          }
          out["witnesses"] = witnesses;
          return out;
        },
        py::arg("map"), py::arg("horizon") = 32, py::arg("samples") = 64,
        py::arg("seed") = 2024);
  m.def("mann_iterate",
        [](const AsymptoticMap& f, const RNElement& x0,
           const std::vector<double>& schedule, int steps) {
          const IterationTrace trace = mann_iterate(f, x0, schedule, steps);
          py::dict out;
          py::list iterates;
          for (const auto& x : trace.iterates) iterates.append(to_fibers(x));
          py::list residuals;
          for (const auto& r : trace.residuals) residuals.append(r.values());
          out["iterates"] = iterates;
          out["residuals"] = residuals;
          out["schedule"] = trace.schedule;
          return out;
        },
        py::arg("map"), py::arg("x0"), py::arg("schedule"), py::arg("steps"));
  m.def("residual", &residual, py::arg("map"), py::arg("x"));

  // partition-engine
  py::class_<PieceData>(m, "PieceData")
      .def_property_readonly("atoms",
                             [](const PieceData& pd) { return to_atoms(pd.piece); })
      .def_readonly("norm_bound", &PieceData::norm_bound)
      .def_readonly("beta", &PieceData::beta);

  m.def("egoroff_pieces", &egoroff_pieces, py::arg("eta"), py::arg("horizon"));
  m.def("decompose",
        [](const AsymptoticMap& f, int horizon) { return decompose(f, horizon); },
        py::arg("map"), py::arg("horizon") = kDefaultEtaHorizon);
  m.def("induced_lipschitz_check",
        [](const AsymptoticMap& f, const PieceData& pd, double p, int horizon,
           std::size_t samples, std::uint64_t seed) {
          const LipschitzReport report =
              induced_lipschitz_check(f, pd, p, horizon, samples, seed);
          py::dict out;
          out["passed"] = report.passed();
          out["violations"] = report.violation_count;
          return out;
        },
        py::arg("map"), py::arg("piece"), py::arg("p") = 2.0,
        py::arg("horizon") = 32, py::arg("samples") = 8,
        py::arg("seed") = 2024);
  m.def("recomposition_check",
        [](const AsymptoticMap& f, const std::vector<PieceData>& pieces,
           const RNElement& x) { return recomposition_check(f, pieces, x); },
        py::arg("map"), py::arg("pieces"), py::arg("x"));

  // experiment harness
  m.def("run_scenario",
        [](const py::object& doc, const std::string& name) {
          return json_to_py(
              run_demiclosedness(config_from_py(doc, name)).to_json());
        },
        py::arg("scenario"), py::arg("name") = "scenario",
        "Run one demiclosedness scenario given as a dict; returns the report.");
  m.def("run_scenario_file",
        [](const std::string& path) {
          return json_to_py(
              run_demiclosedness(ScenarioConfig::from_file(path)).to_json());
        },
        py::arg("path"));
  m.def("run_suite",
        [](const std::string& config_dir, const std::string& report_dir,
           std::optional<std::uint64_t> seed, std::optional<int> horizon,
           const std::string& format) {
          RunOverrides overrides;
          overrides.seed = seed;
          overrides.horizon = horizon;
          const SuiteResult result =
              run_suite(config_dir, report_dir, overrides, format);
          py::dict out;
          out["summary"] = json_to_py(result.summary_json());
          out["exit_code"] = result.exit_code();
          return out;
        },
        py::arg("config_dir"), py::arg("report_dir"),
        py::arg("seed") = py::none(), py::arg("horizon") = py::none(),
        py::arg("format") = "json");
}
