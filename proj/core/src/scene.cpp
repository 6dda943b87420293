#include "mhdflow/scene.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mhdflow/error.hpp"
#include "mhdflow/expr.hpp"
#include "mhdflow/transforms.hpp"

namespace mhdflow {
namespace {

using json = nlohmann::json;
using ordered = nlohmann::ordered_json;

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw SchemaError(where + ": unknown key '" + key + "'");
}

const json& require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + " must be an object");
  return j;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(where + " must be finite");
  return v;
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where + " must be a string");
  return j.get<std::string>();
}

/// An expression string; syntax is checked here so errors name the field.
std::string expression(const json& j, const std::string& where) {
  std::string s = text(j, where);
  try {
    parse(s);
  } catch (const ParseError& e) {
    throw SchemaError(where + ": " + e.what());
  }
  return s;
}

Interval interval(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw SchemaError(where + " must be a [lo, hi] pair");
  const Interval iv{number(j[0], where + "[0]"), number(j[1], where + "[1]")};
  if (!(iv.lo <= iv.hi)) throw SchemaError(where + " is inverted");
  return iv;
}

Family parse_family(const std::string& s) {
  if (s == "s1") return Family::s1;
  if (s == "s2") return Family::s2;
  if (s == "s3") return Family::s3;
  if (s == "general") return Family::general;
  throw SchemaError("family: expected s1, s2, s3 or general, got '" + s + "'");
}

AreaMapMode parse_mode(const std::string& s) {
  if (s == "pair") return AreaMapMode::pair;
  if (s == "potential") return AreaMapMode::potential;
  if (s == "circular") return AreaMapMode::circular;
  throw SchemaError("areamap.mode: expected pair, potential or circular, got '" + s + "'");
}

AreaMapSpec parse_areamap(const json& j) {
  require_object(j, "areamap");
  allow_keys(j, "areamap", {"mode", "t2", "t3", "phi", "bracket", "shear"});
  if (!j.contains("mode")) throw SchemaError("areamap: missing 'mode'");
  AreaMapSpec a;
  a.mode = parse_mode(text(j["mode"], "areamap.mode"));
  if (j.contains("t2")) a.t2 = expression(j["t2"], "areamap.t2");
  if (j.contains("t3")) a.t3 = expression(j["t3"], "areamap.t3");
  if (j.contains("phi")) a.phi = expression(j["phi"], "areamap.phi");
  if (j.contains("bracket")) {
    const Interval b = interval(j["bracket"], "areamap.bracket");
    a.bracket = std::array<double, 2>{b.lo, b.hi};
  }
  if (j.contains("shear")) {
    if (!j["shear"].is_array()) throw SchemaError("areamap.shear must be an array");
    for (std::size_t i = 0; i < j["shear"].size(); ++i) {
      const std::string where = "areamap.shear[" + std::to_string(i) + "]";
      const json& s = require_object(j["shear"][i], where);
      allow_keys(s, where, {"axis", "g"});
      if (!s.contains("axis") || !s.contains("g")) throw SchemaError(where + ": needs 'axis' and 'g'");
      if (!s["axis"].is_number_integer()) throw SchemaError(where + ".axis must be 2 or 3");
      const int axis = s["axis"].get<int>();
      if (axis != 2 && axis != 3) throw SchemaError(where + ".axis must be 2 or 3");
      a.shear.push_back({axis == 2 ? ShearAxis::tau2 : ShearAxis::tau3, expression(s["g"], where + ".g")});
    }
  }
  return a;
}

TransformStep parse_step(const json& j, std::size_t i) {
  const std::string where = "transforms[" + std::to_string(i) + "]";
  require_object(j, where);
  if (j.size() != 1) throw SchemaError(where + " must have exactly one key");
  if (j.contains("bogoyavlenskij")) return BogoyavlenskijStep{expression(j["bogoyavlenskij"], where + ".bogoyavlenskij")};
  if (j.contains("translate")) {
    const json& t = j["translate"];
    if (!t.is_array() || t.size() != 2) throw SchemaError(where + ".translate must be [psi, chi]");
    return TranslateStep{expression(t[0], where + ".translate[0]"), expression(t[1], where + ".translate[1]")};
  }
  throw SchemaError(where + ": unknown key '" + j.begin().key() + "'");
}

}  // namespace

SceneFile parse_scene(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("scene is not valid JSON: ") + e.what());
  }
  require_object(j, "scene");
  allow_keys(j, "scene", {"name", "description", "family", "t1", "beta", "F", "gamma", "sigma", "tau", "areamap",
                          "P0", "domain", "transforms", "current_sheet"});

  SceneFile scene;
  SceneSpec& spec = scene.spec;
  if (j.contains("name")) scene.name = text(j["name"], "name");
  if (j.contains("description")) scene.description = text(j["description"], "description");
  if (!j.contains("family")) throw SchemaError("scene: missing 'family'");
  spec.family = parse_family(text(j["family"], "family"));
  if (j.contains("t1")) spec.tau1 = expression(j["t1"], "t1");
  if (j.contains("beta")) spec.beta = expression(j["beta"], "beta");
  if (j.contains("F")) spec.F = expression(j["F"], "F");
  if (j.contains("gamma")) spec.gamma = expression(j["gamma"], "gamma");
  for (const char* key : {"sigma", "tau"}) {
    if (!j.contains(key)) continue;
    const json& a = j[key];
    if (!a.is_array() || a.size() != 3) throw SchemaError(std::string(key) + " must be an array of 3 expressions");
    auto& dst = std::string(key) == "sigma" ? spec.sigma : spec.tau;
    for (std::size_t i = 0; i < 3; ++i) dst[i] = expression(a[i], std::string(key) + "[" + std::to_string(i) + "]");
  }
  if (j.contains("areamap")) spec.areamap = parse_areamap(j["areamap"]);
  if (j.contains("P0")) spec.total_pressure = number(j["P0"], "P0");

  if (!j.contains("domain")) throw SchemaError("scene: missing 'domain'");
  const json& d = require_object(j["domain"], "domain");
  allow_keys(d, "domain", {"k1", "k2", "k3"});
  const char* axes[3] = {"k1", "k2", "k3"};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!d.contains(axes[i])) throw SchemaError(std::string("domain: missing '") + axes[i] + "'");
    spec.domain[i] = interval(d[axes[i]], std::string("domain.") + axes[i]);
  }

  if (j.contains("transforms")) {
    if (!j["transforms"].is_array()) throw SchemaError("transforms must be an array");
    for (std::size_t i = 0; i < j["transforms"].size(); ++i)
      scene.transforms.push_back(parse_step(j["transforms"][i], i));
  }
  if (j.contains("current_sheet")) {
    const json& c = require_object(j["current_sheet"], "current_sheet");
    allow_keys(c, "current_sheet", {"c", "phi_minus", "phi_plus"});
    SheetDefaults s;
    if (!c.contains("c")) throw SchemaError("current_sheet: missing 'c'");
    s.c = number(c["c"], "current_sheet.c");
    if (c.contains("phi_minus")) s.phi_minus = number(c["phi_minus"], "current_sheet.phi_minus");
    if (c.contains("phi_plus")) s.phi_plus = number(c["phi_plus"], "current_sheet.phi_plus");
    scene.current_sheet = s;
  }

  try {
    validate(spec);
  } catch (const ConstructionError& e) {
    throw SchemaError(e.what());
  }
  return scene;
}

SceneFile load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scene '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scene(buf.str());
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

std::string to_json(const SceneFile& scene, int indent) {
  const SceneSpec& spec = scene.spec;
  ordered j;
  if (!scene.name.empty()) j["name"] = scene.name;
  if (!scene.description.empty()) j["description"] = scene.description;
  j["family"] = std::string(name_of(spec.family));
  if (!spec.tau1.empty()) j["t1"] = spec.tau1;
  if (!spec.beta.empty()) j["beta"] = spec.beta;
  if (!spec.F.empty()) j["F"] = spec.F;
  if (!spec.gamma.empty()) j["gamma"] = spec.gamma;
  if (spec.family == Family::general) {
    j["sigma"] = ordered::array({spec.sigma[0], spec.sigma[1], spec.sigma[2]});
    j["tau"] = ordered::array({spec.tau[0], spec.tau[1], spec.tau[2]});
  }
  if (spec.areamap) {
    const AreaMapSpec& a = *spec.areamap;
    ordered am;
    am["mode"] = std::string(name_of(a.mode));
    if (!a.t2.empty()) am["t2"] = a.t2;
    if (!a.t3.empty()) am["t3"] = a.t3;
    if (!a.phi.empty()) am["phi"] = a.phi;
    if (a.bracket) am["bracket"] = ordered::array({(*a.bracket)[0], (*a.bracket)[1]});
    if (!a.shear.empty()) {
      ordered shear = ordered::array();
      for (const auto& s : a.shear) shear.push_back({{"axis", static_cast<int>(s.axis)}, {"g", s.g}});
      am["shear"] = shear;
    }
    j["areamap"] = am;
  }
  j["P0"] = spec.total_pressure;
  ordered dom;
  const char* axes[3] = {"k1", "k2", "k3"};
  for (std::size_t i = 0; i < 3; ++i) dom[axes[i]] = ordered::array({spec.domain[i].lo, spec.domain[i].hi});
  j["domain"] = dom;
  if (!scene.transforms.empty()) {
    ordered steps = ordered::array();
    for (const auto& step : scene.transforms) {
      if (const auto* b = std::get_if<BogoyavlenskijStep>(&step))
        steps.push_back({{"bogoyavlenskij", b->phi}});
      else {
        const auto& t = std::get<TranslateStep>(step);
        steps.push_back({{"translate", ordered::array({t.psi, t.chi})}});
      }
    }
    j["transforms"] = steps;
  }
  if (scene.current_sheet) {
    const SheetDefaults& s = *scene.current_sheet;
    j["current_sheet"] = {{"c", s.c}, {"phi_minus", s.phi_minus}, {"phi_plus", s.phi_plus}};
  }
  return j.dump(indent) + "\n";
}

FlowMap build_scene(const SceneFile& scene) {
  FlowMap m = build(scene.spec);
  for (const auto& step : scene.transforms) {
    if (const auto* b = std::get_if<BogoyavlenskijStep>(&step))
      m = bogoyavlenskij(m, parse(b->phi));
    else {
      const auto& t = std::get<TranslateStep>(step);
      m = translate(m, parse(t.psi), parse(t.chi));
    }
  }
  return m;
}

}  // namespace mhdflow
