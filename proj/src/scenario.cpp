#include "rnm/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <utility>

namespace rnm {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

const json& need(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    bad(std::string(where) + ": missing key '" + key + "'");
  }
  return j.at(key);
}

double need_number(const json& j, const char* key, const char* where) {
  const json& v = need(j, key, where);
  if (!v.is_number()) bad(std::string(where) + ": '" + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> parse_l0_values(const SpacePtr& space, const json& v,
                                    const char* where) {
  const std::size_t atoms = space->atom_count();
  if (v.is_number()) {
    return std::vector<double>(atoms, v.get<double>());
  }
  if (v.is_array() && v.size() == atoms) {
    std::vector<double> out;
    out.reserve(atoms);
    for (const auto& e : v) {
      if (!e.is_number()) bad(std::string(where) + ": expected numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  bad(std::string(where) + ": expected a number or one value per atom");
}

L0Real parse_l0(const SpacePtr& space, const json& v, const char* where) {
  return L0Real(space, parse_l0_values(space, v, where));
}

RNElement parse_element(const SpacePtr& space, const FiberSpec& fiber,
                        const json& v, const char* where) {
  const std::size_t atoms = space->atom_count();
  const auto d = static_cast<std::size_t>(fiber.dimension());
  if (v.is_number()) {
    return RNElement(space, fiber,
                     std::vector<double>(atoms * d, v.get<double>()));
  }
  if (v.is_array() && v.size() == d && (d == 0 || !v.front().is_array())) {
    std::vector<double> data;
    data.reserve(atoms * d);
    for (std::size_t a = 0; a < atoms; ++a) {
      for (const auto& e : v) {
        if (!e.is_number()) bad(std::string(where) + ": expected numbers");
        data.push_back(e.get<double>());
      }
    }
    return RNElement(space, fiber, std::move(data));
  }
  if (v.is_array() && v.size() == atoms) {
    std::vector<std::vector<double>> fibers;
    fibers.reserve(atoms);
    for (const auto& row : v) {
      if (!row.is_array() || row.size() != d) {
        bad(std::string(where) + ": expected one fiber of dimension " +
            std::to_string(d) + " per atom");
      }
      fibers.push_back(row.get<std::vector<double>>());
    }
    return RNElement::from_fibers(space, fiber, fibers);
  }
  bad(std::string(where) +
      ": expected a number, one fiber, or one fiber per atom");
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const json& doc,
                                         const std::string& fallback_name) {
  if (!doc.is_object()) bad("scenario: document must be an object");
  ScenarioConfig config;
  config.name = doc.value("name", fallback_name);
  if (config.name.empty()) bad("scenario: name must not be empty");

  const json& space = need(doc, "space", "scenario");
  const json& weights = need(space, "weights", "space");
  if (!weights.is_array() || weights.empty()) {
    bad("space: 'weights' must be a nonempty array");
  }
  config.weights = weights.get<std::vector<double>>();

  const json& fiber = need(doc, "fiber", "scenario");
  config.dimension = static_cast<int>(need_number(fiber, "dimension", "fiber"));
  config.q = need_number(fiber, "q", "fiber");

  config.body = need(doc, "body", "scenario");
  config.map = need(doc, "map", "scenario");
  config.sequence = need(doc, "sequence", "scenario");

  if (doc.contains("checks")) {
    const json& checks = doc.at("checks");
    if (!checks.is_object()) bad("checks: must be an object");
    config.checks.epsilon = checks.value("epsilon", config.checks.epsilon);
    config.checks.lambda = checks.value("lambda", config.checks.lambda);
    config.checks.tail_fraction =
        checks.value("tail_fraction", config.checks.tail_fraction);
    config.checks.conclusion_tol =
        checks.value("conclusion_tol", config.checks.conclusion_tol);
    config.checks.horizon = checks.value("horizon", config.checks.horizon);
    config.checks.seed = checks.value("seed", config.checks.seed);
  }
  if (!(config.checks.epsilon > 0.0)) bad("checks: epsilon must be > 0");
  if (!(config.checks.lambda > 0.0 && config.checks.lambda < 1.0)) {
    bad("checks: lambda must lie in (0, 1)");
  }
  if (!(config.checks.tail_fraction > 0.0 && config.checks.tail_fraction <= 1.0)) {
    bad("checks: tail_fraction must lie in (0, 1]");
  }
  if (!(config.checks.conclusion_tol >= 0.0)) {
    bad("checks: conclusion_tol must be >= 0");
  }
  if (config.checks.horizon < 1) bad("checks: horizon must be >= 1");
  return config;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open scenario file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    bad("cannot parse scenario file " + path + ": " + e.what());
  }
  std::string stem = path;
  if (const auto slash = stem.find_last_of('/'); slash != std::string::npos) {
    stem = stem.substr(slash + 1);
  }
  if (const auto dot = stem.find_last_of('.'); dot != std::string::npos) {
    stem = stem.substr(0, dot);
  }
  return from_json(doc, stem);
}

json ScenarioConfig::to_json() const {
  json doc;
  doc["name"] = name;
  doc["space"] = {{"weights", weights}};
  doc["fiber"] = {{"dimension", dimension}, {"q", q}};
  doc["body"] = body;
  doc["map"] = map;
  doc["sequence"] = sequence;
  doc["checks"] = {{"epsilon", checks.epsilon},
                   {"lambda", checks.lambda},
                   {"tail_fraction", checks.tail_fraction},
                   {"conclusion_tol", checks.conclusion_tol},
                   {"horizon", checks.horizon},
                   {"seed", checks.seed}};
  return doc;
}

std::string ScenarioConfig::hash() const {
  const std::string canonical = to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

SpacePtr build_space(const ScenarioConfig& config) {
  try {
    return make_space(config.weights);
  } catch (const Error& e) {
    bad(std::string("space: ") + e.what());
  }
}

FiberSpec build_fiber(const ScenarioConfig& config) {
  try {
    return FiberSpec(config.dimension, config.q);
  } catch (const Error& e) {
    bad(std::string("fiber: ") + e.what());
  }
}

ConvexBody build_body(const SpacePtr& space, const FiberSpec& fiber,
                      const json& body) {
  const std::string kind = need(body, "kind", "body").get<std::string>();
  try {
    if (kind == "ball") {
      return ConvexBody::ball(
          parse_element(space, fiber, need(body, "center", "body"), "body.center"),
          parse_l0(space, need(body, "radius", "body"), "body.radius"));
    }
    if (kind == "box") {
      return ConvexBody::box(
          parse_element(space, fiber, need(body, "lower", "body"), "body.lower"),
          parse_element(space, fiber, need(body, "upper", "body"), "body.upper"));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    bad(std::string("body: ") + e.what());
  }
  bad("body: kind must be 'ball' or 'box'");
}

const std::vector<std::string>& registered_constructors() {
  static const std::vector<std::string> names = {
      "identity", "contraction", "rotation", "stretch_chain", "glued"};
  return names;
}

AsymptoticMap build_map(const ConvexBody& body, const json& map) {
  const std::string ctor = need(map, "constructor", "map").get<std::string>();
  const SpacePtr& space = body.space();
  try {
    AsymptoticMap built = [&]() -> AsymptoticMap {
      if (ctor == "identity") {
        return make_identity(body);
      }
      if (ctor == "contraction") {
        const L0Real alpha =
            parse_l0(space, need(map, "alpha", "map"), "map.alpha");
        RNElement anchor = body.center_point();
        if (map.contains("anchor") && !map.at("anchor").is_string()) {
          anchor = parse_element(space, body.fiber_spec(), map.at("anchor"),
                                 "map.anchor");
        }
        return make_contraction(body, alpha, anchor);
      }
      if (ctor == "rotation") {
        return make_rotation(
            body, parse_l0(space, need(map, "theta", "map"), "map.theta"));
      }
      if (ctor == "stretch_chain") {
        const json& exps = need(map, "exponents", "map");
        if (!exps.is_array()) bad("map.exponents: expected an array");
        return make_stretch_chain(body, exps.get<std::vector<double>>(),
                                  map.value("anchor01", 0.0));
      }
      if (ctor == "glued") {
        const json& pieces = need(map, "pieces", "map");
        const json& components = need(map, "components", "map");
        if (!pieces.is_array() || !components.is_array() ||
            pieces.size() != components.size() || pieces.empty()) {
          bad("map: 'pieces' and 'components' must be matching nonempty arrays");
        }
        std::vector<MeasurableSet> sets;
        for (const auto& piece : pieces) {
          sets.push_back(MeasurableSet::of(
              space, piece.get<std::vector<std::size_t>>()));
        }
        std::vector<AsymptoticMap> maps;
        for (const auto& component : components) {
          maps.push_back(build_map(body, component));
        }
        return make_glued(validate_partition(sets), maps);
      }
      bad("map: unknown constructor '" + ctor + "'; registered: identity, "
          "contraction, rotation, stretch_chain, glued");
    }();
    if (map.contains("eta_slack")) {
      const json& slack = map.at("eta_slack");
      built = with_eta_slack(
          built, parse_l0(space, need(slack, "scale", "eta_slack"),
                          "eta_slack.scale"),
          parse_l0(space, need(slack, "rate", "eta_slack"), "eta_slack.rate"));
    }
    return built;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    bad("map: " + std::string(e.what()));
  }
}

}  // namespace rnm
