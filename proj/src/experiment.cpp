#include "rnm/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

#include "rnm/duality.hpp"
#include "rnm/rng.hpp"
#include "rnm/version.hpp"

namespace rnm {

namespace {

using nlohmann::json;

constexpr double kMembershipTol = 1e-9;

bool is_zero_element(const RNElement& u) {
  for (double v : u.data()) {
    if (v != 0.0) return false;
  }
  return true;
}

std::size_t tail_index(std::size_t length, double tail_fraction) {
  const auto idx = static_cast<std::size_t>(
      std::floor((1.0 - tail_fraction) * static_cast<double>(length)));
  return std::min(idx, length - 1);
}

RNElement resolve_point(const ConvexBody& body, const json& v, Rng& rng,
                        const char* where) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "center") return body.center_point();
    if (s == "sample") return body.sample(rng);
    throw ConfigError(std::string(where) + ": unknown point spec '" + s + "'");
  }
  // Reuse the scenario element parser via a fake body-less path.
  const SpacePtr& space = body.space();
  const FiberSpec& fiber = body.fiber_spec();
  if (v.is_number()) {
    const auto d = static_cast<std::size_t>(fiber.dimension());
    return RNElement(space, fiber,
                     std::vector<double>(space->atom_count() * d, v.get<double>()));
  }
  if (v.is_array()) {
    const auto d = static_cast<std::size_t>(fiber.dimension());
    if (v.size() == d && (v.empty() || !v.front().is_array())) {
      std::vector<double> data;
      for (std::size_t a = 0; a < space->atom_count(); ++a) {
        for (const auto& e : v) data.push_back(e.get<double>());
      }
      return RNElement(space, fiber, std::move(data));
    }
    if (v.size() == space->atom_count()) {
      std::vector<std::vector<double>> fibers;
      for (const auto& row : v) fibers.push_back(row.get<std::vector<double>>());
      return RNElement::from_fibers(space, fiber, fibers);
    }
  }
  throw ConfigError(std::string(where) + ": cannot parse point");
}

struct GeneratedSequence {
  std::vector<RNElement> points;
  std::optional<RNElement> declared_limit;
  std::string declared_source;
};

std::vector<double> build_schedule(const json& spec, int steps) {
  if (!spec.is_object() || !spec.contains("kind")) {
    throw ConfigError("sequence.schedule: missing 'kind'");
  }
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "constant") {
    if (!spec.contains("c")) throw ConfigError("schedule: missing 'c'");
    return {spec.at("c").get<double>()};
  }
  if (kind == "list") {
    if (!spec.contains("values")) throw ConfigError("schedule: missing 'values'");
    return spec.at("values").get<std::vector<double>>();
  }
  if (kind == "harmonic") {
    const double c0 = spec.value("c0", 1.0);
    std::vector<double> values(static_cast<std::size_t>(steps));
    for (int n = 0; n < steps; ++n) {
      values[static_cast<std::size_t>(n)] =
          std::clamp(c0 / static_cast<double>(n + 1), 0.0, 1.0);
    }
    return values;
  }
  throw ConfigError("schedule: unknown kind '" + kind + "'");
}

GeneratedSequence generate_sequence(const ConvexBody& body,
                                    const AsymptoticMap& map,
                                    const ScenarioConfig& config) {
  const json& seq = config.sequence;
  if (!seq.is_object() || !seq.contains("generator")) {
    throw ConfigError("sequence: missing 'generator'");
  }
  const std::string generator = seq.at("generator").get<std::string>();
  Rng rng(config.checks.seed ^ 0x73657175ULL);
  GeneratedSequence out;

  if (generator == "mann") {
    const int steps = seq.value("steps", 200);
    if (steps < 1) throw ConfigError("sequence: steps must be >= 1");
    const RNElement x0 = seq.contains("x0")
                             ? resolve_point(body, seq.at("x0"), rng, "sequence.x0")
                             : body.center_point();
    const std::vector<double> schedule =
        build_schedule(seq.value("schedule", json{{"kind", "constant"}, {"c", 0.5}}),
                       steps);
    IterationTrace trace = mann_iterate(map, x0, schedule, steps);
    out.points = std::move(trace.iterates);
    if (map.fixed_point().has_value()) {
      out.declared_limit = map.fixed_point();
      out.declared_source = "fixed-point";
    }
    return out;
  }

  if (generator == "prescribed") {
    const std::string kind = seq.value("kind", "");
    const int steps = seq.value("steps", 200);
    if (steps < 1) throw ConfigError("sequence: steps must be >= 1");
    if (kind == "geometric") {
      const RNElement limit =
          resolve_point(body, seq.at("limit"), rng, "sequence.limit");
      const RNElement direction =
          resolve_point(body, seq.at("direction"), rng, "sequence.direction");
      const double ratio = seq.value("ratio", 0.5);
      if (!(ratio >= 0.0 && ratio < 1.0)) {
        throw ConfigError("sequence: geometric ratio must lie in [0, 1)");
      }
      double factor = 1.0;
      for (int n = 0; n <= steps; ++n) {
        RNElement x = limit + (direction - limit) * factor;
        if (!body.contains(x, kMembershipTol)) {
          throw PreconditionError(
              "prescribed sequence leaves the body at step " + std::to_string(n));
        }
        out.points.push_back(std::move(x));
        factor *= ratio;
      }
      out.declared_limit = limit;
      out.declared_source = "declared";
      return out;
    }
    if (kind == "constant") {
      const RNElement point =
          resolve_point(body, seq.at("point"), rng, "sequence.point");
      if (!body.contains(point, kMembershipTol)) {
        throw PreconditionError("prescribed point lies outside the body");
      }
      out.points.assign(static_cast<std::size_t>(steps) + 1, point);
      out.declared_limit = point;
      out.declared_source = "declared";
      return out;
    }
    if (kind == "alternating") {
      const RNElement first =
          resolve_point(body, seq.at("first"), rng, "sequence.first");
      const RNElement second =
          resolve_point(body, seq.at("second"), rng, "sequence.second");
      if (!body.contains(first, kMembershipTol) ||
          !body.contains(second, kMembershipTol)) {
        throw PreconditionError("prescribed points lie outside the body");
      }
      for (int n = 0; n <= steps; ++n) {
        out.points.push_back(n % 2 == 0 ? first : second);
      }
      return out;
    }
    throw ConfigError("sequence: unknown prescribed kind '" + kind + "'");
  }
  throw ConfigError("sequence: unknown generator '" + generator + "'");
}

bool detect_plateau(const std::vector<RNElement>& points) {
  if (points.size() < 11) return false;
  for (std::size_t n = points.size() - 10; n < points.size(); ++n) {
    const double change = l0_norm(points[n] - points[n - 1]).max_value();
    const double scale = std::max(1.0, l0_norm(points[n]).max_value());
    if (change / scale >= 1e-10) return false;
  }
  return true;
}

}  // namespace

TranslatedInstance translate_to_origin(const ConvexBody& G,
                                       const AsymptoticMap& f) {
  const RNElement offset = G.center_point();
  if (is_zero_element(offset)) {
    return TranslatedInstance{G, f, offset};
  }
  ConvexBody shifted = G.translate(-offset);
  const AsymptoticMap inner = f;
  auto fn = [inner, offset](const RNElement& u) {
    return inner.apply(u + offset) - offset;
  };
  std::optional<RNElement> fixed;
  if (f.fixed_point().has_value()) fixed = *f.fixed_point() - offset;
  AsymptoticMap translated = AsymptoticMap::make(
      f.name() + "@origin", shifted, std::move(fn), f.eta(), f.sigma_stable(),
      std::move(fixed), /*enforce_eta_limit=*/false);
  return TranslatedInstance{std::move(shifted), std::move(translated), offset};
}

json DemiclosednessReport::to_json() const {
  json doc;
  doc["scenario"] = scenario;
  doc["provenance"] = {{"config_hash", config_hash},
                       {"seed", seed},
                       {"toolkit_version", version}};
  doc["generator"] = {{"ok", generator_ok},
                      {"message", generator_message},
                      {"limit_source", limit_source},
                      {"plateau_reached", plateau_reached},
                      {"sequence_length", sequence_length},
                      {"tail_index", tail_index}};
  json weak = json::array();
  for (const auto& d : weak_diagnostics) {
    weak.push_back({{"functional", d.functional},
                    {"converged", d.converged},
                    {"tail_gap", d.tail_gap}});
  }
  doc["hypothesis_weak"] = {{"holds", hypothesis_weak},
                            {"per_functional", weak}};
  doc["hypothesis_residual"] = {{"holds", hypothesis_residual},
                                {"tail_linf", residual_tail_linf},
                                {"tail_l2", residual_tail_l2}};
  doc["conclusion"] = {{"residual_per_atom", conclusion_residual},
                       {"residual_linf", conclusion_linf},
                       {"residual_l2", conclusion_l2},
                       {"tolerance", conclusion_tol}};
  doc["structural"] = {{"ok", structural_ok},
                       {"message", structural_message},
                       {"partition_pieces", partition_pieces},
                       {"lipschitz_violations", lipschitz_violations},
                       {"recomposition_ok", recomposition_ok}};
  doc["verdict"] = verdict;
  return doc;
}

DemiclosednessReport run_demiclosedness(const ScenarioConfig& config) {
  DemiclosednessReport report;
  report.scenario = config.name;
  report.config_hash = config.hash();
  report.seed = config.checks.seed;
  report.version = kVersion;
  report.conclusion_tol = config.checks.conclusion_tol;

  const SpacePtr space = build_space(config);
  const FiberSpec fiber = build_fiber(config);
  const ConvexBody body = build_body(space, fiber, config.body);
  const AsymptoticMap map = build_map(body, config.map);

  // The generator must first pass its own certificate on a spot sample.
  const CertifyReport cert =
      certify(map, std::min(map.eta_horizon(), 8), 16,
              config.checks.seed ^ 0x63657274ULL);
  if (!cert.passed()) {
    report.generator_ok = false;
    report.generator_message =
        "map violates its certificate on " +
        std::to_string(cert.violation_count) + " sampled checks";
    report.verdict = "generator-error";
    return report;
  }

  GeneratedSequence gen;
  try {
    gen = generate_sequence(body, map, config);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    report.generator_ok = false;
    report.generator_message = e.what();
    report.verdict = "generator-error";
    return report;
  }
  report.generator_ok = true;
  report.sequence_length = gen.points.size();
  report.plateau_reached = detect_plateau(gen.points);

  RNElement limit = gen.points.back();
  if (gen.declared_limit.has_value()) {
    limit = *gen.declared_limit;
    report.limit_source = gen.declared_source;
  } else {
    report.limit_source = "plateau";
  }

  const std::size_t tail =
      tail_index(gen.points.size(), config.checks.tail_fraction);
  report.tail_index = tail;
  const double eps = config.checks.epsilon;
  const double lambda = config.checks.lambda;

  const std::vector<RandomFunctional> family =
      coordinate_dual_family(space, fiber);
  report.hypothesis_weak =
      random_weak_converges(gen.points, limit, family, eps, lambda, tail);
  report.weak_diagnostics.reserve(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    WeakDiagnostic diag;
    diag.functional = i;
    std::vector<L0Real> values;
    values.reserve(gen.points.size());
    for (const auto& xn : gen.points) values.push_back(family[i].evaluate(xn));
    const L0Real at_limit = family[i].evaluate(limit);
    diag.converged =
        converges_in_probability(values, at_limit, eps, lambda, tail);
    double gap = 0.0;
    for (std::size_t n = tail; n < values.size(); ++n) {
      gap = std::max(gap, (values[n] - at_limit).max_abs());
    }
    diag.tail_gap = gap;
    report.weak_diagnostics.push_back(diag);
  }

  std::vector<RNElement> residual_elements;
  residual_elements.reserve(gen.points.size());
  for (const auto& xn : gen.points) {
    residual_elements.push_back(xn - map.apply(xn));
  }
  const RNElement theta = RNElement::zero(space, fiber);
  report.hypothesis_residual =
      eps_lambda_converges(residual_elements, theta, eps, lambda, tail);
  for (std::size_t n = tail; n < residual_elements.size(); ++n) {
    report.residual_tail_linf = std::max(
        report.residual_tail_linf,
        lp_norm(residual_elements[n], std::numeric_limits<double>::infinity()));
    report.residual_tail_l2 =
        std::max(report.residual_tail_l2, lp_norm(residual_elements[n], 2.0));
  }

  const L0Real conclusion = residual(map, limit);
  report.conclusion_residual = conclusion.values();
  report.conclusion_linf = conclusion.max_value();
  report.conclusion_l2 = lp_norm(conclusion, 2.0);

  // Decomposition sub-verdicts run on the origin-translated instance, the
  // form the piecewise machinery expects.
  try {
    const TranslatedInstance shifted = translate_to_origin(body, map);
    const std::vector<PieceData> pieces =
        decompose(shifted.map, shifted.body, config.checks.horizon);
    report.partition_pieces = pieces.size();
    Rng rng(config.checks.seed ^ 0x7374727563ULL);
    std::size_t violations = 0;
    for (const auto& pd : pieces) {
      violations += induced_lipschitz_check(shifted.map, pd, 2.0,
                                            std::min(config.checks.horizon, 16),
                                            8, rng.next_u64())
                        .violation_count;
    }
    report.lipschitz_violations = violations;
    bool recomposed = true;
    for (int k = 0; k < 16; ++k) {
      recomposed = recomposed &&
                   recomposition_check(shifted.map, pieces,
                                       shifted.body.sample(rng));
    }
    recomposed = recomposed &&
                 recomposition_check(shifted.map, pieces, limit - shifted.offset);
    report.recomposition_ok = recomposed;
    report.structural_ok = violations == 0 && recomposed;
    if (!report.structural_ok) {
      report.structural_message = "decomposition sub-verdicts failed";
    }
  } catch (const Error& e) {
    report.structural_ok = false;
    report.structural_message = e.what();
  }

  if (report.hypothesis_weak && report.hypothesis_residual) {
    report.verdict = report.conclusion_linf <= config.checks.conclusion_tol
                         ? "pass"
                         : "theorem-violated";
  } else {
    report.verdict = "hypotheses-not-met";
  }
  return report;
}

json SuiteResult::summary_json() const {
  json rows_json = json::array();
  for (const auto& row : rows) {
    std::string hypotheses = "none";
    if (row.hypothesis_weak && row.hypothesis_residual) {
      hypotheses = "weak+residual";
    } else if (row.hypothesis_weak) {
      hypotheses = "weak";
    } else if (row.hypothesis_residual) {
      hypotheses = "residual";
    }
    rows_json.push_back({{"name", row.scenario},
                         {"file", row.file},
                         {"hypotheses", hypotheses},
                         {"conclusion_residual", row.conclusion_residual},
                         {"verdict", row.verdict},
                         {"wall_time_ms", row.wall_time_ms},
                         {"error", row.error}});
  }
  return json{{"rows", rows_json},
              {"passes", passes},
              {"vacuous", vacuous},
              {"violations", violations},
              {"errors", errors}};
}

std::string SuiteResult::summary_csv() const {
  std::ostringstream out;
  out << "name,hypotheses,conclusion_residual,verdict,wall_time_ms\n";
  for (const auto& row : rows) {
    std::string hypotheses = "none";
    if (row.hypothesis_weak && row.hypothesis_residual) {
      hypotheses = "weak+residual";
    } else if (row.hypothesis_weak) {
      hypotheses = "weak";
    } else if (row.hypothesis_residual) {
      hypotheses = "residual";
    }
    out << row.scenario << ',' << hypotheses << ',' << row.conclusion_residual
        << ',' << (row.error.empty() ? row.verdict : "error") << ','
        << row.wall_time_ms << '\n';
  }
  return out.str();
}

SuiteResult run_suite(const std::string& config_dir,
                      const std::string& report_dir,
                      const RunOverrides& overrides, const std::string& format) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(config_dir)) {
    throw ConfigError("scenario directory not found: " + config_dir);
  }
  if (format != "json" && format != "csv") {
    throw ConfigError("summary format must be 'json' or 'csv'");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(config_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  fs::create_directories(report_dir);

  SuiteResult result;
  for (const auto& path : files) {
    SuiteRow row;
    row.file = path.filename().string();
    row.scenario = path.stem().string();
    const auto start = std::chrono::steady_clock::now();
    try {
      ScenarioConfig config = ScenarioConfig::from_file(path.string());
      if (overrides.seed.has_value()) config.checks.seed = *overrides.seed;
      if (overrides.horizon.has_value()) config.checks.horizon = *overrides.horizon;
      const DemiclosednessReport report = run_demiclosedness(config);
      row.scenario = report.scenario;
      row.verdict = report.verdict;
      row.hypothesis_weak = report.hypothesis_weak;
      row.hypothesis_residual = report.hypothesis_residual;
      row.conclusion_residual = report.conclusion_linf;

      std::ofstream out(fs::path(report_dir) /
                        (path.stem().string() + ".report.json"));
      out << report.to_json().dump(2) << '\n';

      if (report.verdict == "pass") {
        ++result.passes;
      } else if (report.verdict == "hypotheses-not-met") {
        ++result.vacuous;
      } else if (report.verdict == "theorem-violated") {
        ++result.violations;
      } else {
        ++result.errors;
        row.error = report.generator_message;
      }
      if (!report.structural_ok && report.verdict != "generator-error") {
        ++result.errors;
        row.error = report.structural_message.empty()
                        ? "structural sub-verdicts failed"
                        : report.structural_message;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
      row.verdict = "error";
      ++result.errors;
    }
    const auto stop = std::chrono::steady_clock::now();
    row.wall_time_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    result.rows.push_back(std::move(row));
  }

  std::ofstream summary(fs::path(report_dir) /
                        (format == "json" ? "summary.json" : "summary.csv"));
  if (format == "json") {
    summary << result.summary_json().dump(2) << '\n';
  } else {
    summary << result.summary_csv();
  }
  return result;
}

namespace {

struct SelftestContext {
  std::ostream& out;
  int failures = 0;

  void check(const char* name, bool ok) {
    out << (ok ? "[ ok ] " : "[fail] ") << name << '\n';
    if (!ok) ++failures;
  }
};

SpacePtr random_space(Rng& rng, std::size_t max_atoms) {
  const std::size_t atoms = 1 + rng.index(max_atoms);
  std::vector<double> weights(atoms);
  double sum = 0.0;
  for (double& w : weights) {
    w = rng.uniform(0.05, 1.0);
    sum += w;
  }
  for (double& w : weights) w /= sum;
  // Re-normalize exactly enough for the 1e-12 gate.
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) total += weights[i];
  weights.back() = 1.0 - total;
  return make_space(weights);
}

RNElement random_element(Rng& rng, const SpacePtr& space, const FiberSpec& fiber,
                         double scale) {
  std::vector<double> data(space->atom_count() *
                           static_cast<std::size_t>(fiber.dimension()));
  for (double& v : data) v = scale * rng.normal();
  return RNElement(space, fiber, std::move(data));
}

}  // namespace

int run_selftest(std::ostream& out, std::uint64_t seed) {
  SelftestContext ctx{out};
  Rng rng(seed);

  {  // Lattice and exceedance spot values.
    const SpacePtr space = make_space({0.5, 0.3, 0.2});
    const L0Real xi(space, {0.05, 1.0, 1.0});
    bool ok = std::abs(prob_of_exceed(xi, 0.1) - 0.5) < 1e-15;
    const L0Real a(space, {1, 0, 0}),  b(space, {0, 2, 0}), c(space, {0, 0, 3});
    ok = ok && lattice_sup({a, b, c}).values() == std::vector<double>{1, 2, 3};
    ctx.check("measure: exceedance and lattice sup", ok);
  }

  {  // Module axioms on random data.
    bool ok = true;
    for (int trial = 0; trial < 200 && ok; ++trial) {
      const SpacePtr space = random_space(rng, 6);
      const FiberSpec fiber(1 + static_cast<int>(rng.index(3)),
                            trial % 2 == 0 ? 2.0 : 1.5);
      const RNElement x = random_element(rng, space, fiber, 2.0);
      const RNElement y = random_element(rng, space, fiber, 2.0);
      std::vector<double> sv(space->atom_count());
      for (double& v : sv) v = rng.uniform(-3.0, 3.0);
      const L0Real xi(space, sv);
      const L0Real lhs = l0_norm(module_scale(xi, x));
      const L0Real rhs = xi.abs() * l0_norm(x);
      ok = ok && (lhs - rhs).max_abs() <= 1e-9;
      const L0Real tri = l0_norm(x + y) - (l0_norm(x) + l0_norm(y));
      ok = ok && tri.max_value() <= 1e-9;
    }
    ctx.check("module: RNM-2 and RNM-3 on random instances", ok);
  }

  {  // Representation isometry.
    bool ok = true;
    for (int trial = 0; trial < 30 && ok; ++trial) {
      const SpacePtr space = random_space(rng, 4);
      const FiberSpec fiber(1 + static_cast<int>(rng.index(3)), 2.0);
      const RNElement carrier = random_element(rng, space, fiber, 1.5);
      const RandomFunctional F(space, fiber, carrier.data());
      const double oracle = operator_norm_oracle(F, holder_pair(2.0), 16);
      const double analytic = lp_norm(conjugate_norm(F), 2.0);
      ok = ok && std::abs(oracle - analytic) <= 1e-6;
    }
    ctx.check("duality: operator norm oracle matches the dual moment", ok);
  }

  {  // Hilbert modulus.
    const double est = lp_uc_modulus_estimate(2.0, 1.0, 60, seed ^ 0x6d6fULL);
    const double hilbert = 1.0 - std::sqrt(1.0 - 0.25);
    ctx.check("duality: Hilbert modulus within 2e-2",
              std::abs(est - hilbert) <= 2e-2);
  }

  {  // Sigma-stability of the shipped constructors.
    bool ok = true;
    const SpacePtr space = make_space({0.4, 0.25, 0.2, 0.15});
    const FiberSpec fiber(2, 2.0);
    const ConvexBody ball = ConvexBody::ball(RNElement::zero(space, fiber),
                                             L0Real::constant(space, 1.0));
    const AsymptoticMap map =
        make_rotation(ball, L0Real::constant(space, 0.7));
    for (int trial = 0; trial < 100 && ok; ++trial) {
      Rng local(rng.next_u64());
      const Partition partition = Partition::atomic(space);
      std::vector<RNElement> members;
      for (std::size_t i = 0; i < partition.size(); ++i) {
        members.push_back(ball.sample(local));
      }
      std::vector<RNElement> mapped;
      for (const auto& member : members) mapped.push_back(map.apply(member));
      ok = ok && exact_equal(map.apply(glue(partition, members)),
                             glue(partition, mapped));
    }
    ctx.check("dynamics: glue/map commutation is exact", ok);
  }

  {  // Decomposition and recomposition of a glued map.
    const SpacePtr space = make_space({0.5, 0.3, 0.2});
    const FiberSpec fiber(2, 2.0);
    const ConvexBody ball = ConvexBody::ball(RNElement::zero(space, fiber),
                                             L0Real(space, {0.8, 2.5, 2.5}));
    const Partition partition =
        validate_partition({MeasurableSet::of(space, {0}),
                            MeasurableSet::of(space, {1, 2})});
    const AsymptoticMap glued = make_glued(
        partition,
        {make_contraction(ball, L0Real::constant(space, 0.5),
                          RNElement::zero(space, fiber)),
         make_rotation(ball, L0Real::constant(space, 0.4))});
    const auto pieces = decompose(glued, 32);
    bool ok = pieces.size() >= 2;
    Rng local(seed ^ 0x7265ULL);
    for (int k = 0; k < 10 && ok; ++k) {
      ok = ok && recomposition_check(glued, pieces, ball.sample(local));
    }
    ctx.check("partition: decomposition recomposes the map", ok);
  }

  {  // A demiclosedness run end to end.
    ScenarioConfig config;
    config.name = "selftest";
    config.weights = {0.5, 0.3, 0.2};
    config.dimension = 2;
    config.q = 2.0;
    config.body = {{"kind", "ball"}, {"center", 0.0}, {"radius", 1.0}};
    config.map = {{"constructor", "contraction"}, {"alpha", 0.5}};
    config.sequence = {{"generator", "mann"},
                       {"x0", "sample"},
                       {"steps", 200},
                       {"schedule", {{"kind", "constant"}, {"c", 0.5}}}};
    config.checks.seed = seed;
    const DemiclosednessReport report = run_demiclosedness(config);
    ctx.check("experiment: contraction scenario passes",
              report.verdict == "pass" && report.structural_ok);
  }

  return ctx.failures;
}

}  // namespace rnm
