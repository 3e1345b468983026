#include "cesradon/measures_json.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cesradon/error.hpp"

namespace cesradon {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::ConfigError, "measure json: " + what); }

double num(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) bad(std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

double num_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) bad(std::string("field '") + key + "' must be numeric");
  return j.at(key).get<double>();
}

std::vector<double> vec(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) bad(std::string("missing array field '") + key + "'");
  std::vector<double> out;
  for (const json& v : j.at(key)) {
    if (!v.is_number()) bad(std::string("array '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json factor_to_json(const Factor& f) {
  switch (f.kind) {
    case FactorKind::Exponential:
      return {{"kind", "exponential"}, {"rate", f.rate}};
    case FactorKind::Power: {
      json j = {{"kind", "power"}, {"exponent", f.exponent}};
      if (std::isfinite(f.cutoff)) j["cutoff"] = f.cutoff;
      return j;
    }
    case FactorKind::Gaussian:
      return {{"kind", "gaussian"}};
    case FactorKind::Bump:
      return {{"kind", "bump"}, {"half_width", f.cutoff}, {"exponent", f.exponent}};
    case FactorKind::IndicatorScale:
      return {{"kind", "indicator_scale"}, {"lo", f.lo}, {"hi", f.hi}, {"inside", f.inside}};
  }
  return {};
}

Factor factor_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) bad("factor needs a 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "exponential") return Factor::exponential(num_or(j, "rate", 1.0));
  if (kind == "power") {
    return Factor::power(num(j, "exponent"), num_or(j, "cutoff", std::numeric_limits<double>::infinity()));
  }
  if (kind == "gaussian") return Factor::gaussian();
  if (kind == "bump") return Factor::bump(num(j, "half_width"), num(j, "exponent"));
  if (kind == "indicator_scale") return Factor::indicator_scale(num(j, "lo"), num(j, "hi"), num(j, "inside"));
  bad("unknown factor kind '" + kind + "'");
}

}  // namespace

json grid_to_json(const LogGrid& g) {
  json axes = json::array();
  for (const GridAxis& a : g.axes()) axes.push_back({{"u_min", a.u_min}, {"u_max", a.u_max}, {"N", a.N}});
  return axes;
}

LogGrid grid_from_json(const json& j) {
  if (!j.is_array() || j.empty()) bad("grid must be a non-empty array of axes");
  std::vector<GridAxis> axes;
  for (const json& a : j) {
    if (!a.contains("N") || !a.at("N").is_number_integer()) bad("grid axis needs integer 'N'");
    axes.push_back(GridAxis{num(a, "u_min"), num(a, "u_max"), a.at("N").get<std::size_t>()});
  }
  return LogGrid(std::move(axes));
}

json density_to_json(const DensitySpec& d) {
  const auto& v = d.variant();
  if (const auto* s = std::get_if<SeparableDensity>(&v)) {
    json factors = json::array();
    for (const auto& axis : s->axes) {
      json fa = json::array();
      for (const Factor& f : axis) fa.push_back(factor_to_json(f));
      factors.push_back(fa);
    }
    return {{"variant", "Separable"}, {"factors", factors}, {"scale", s->scale}};
  }
  if (const auto* b = std::get_if<BoxDensity>(&v)) {
    json j = {{"variant", "Box"}, {"corner", b->corner}, {"value", b->value}};
    if (!b->lower.empty()) j["lower"] = b->lower;
    return j;
  }
  if (const auto* g = std::get_if<GridDensity>(&v)) {
    return {{"variant", "GridSampled"}, {"grid", grid_to_json(g->grid)}, {"values", g->values}};
  }
  fail(ErrorKind::ConfigError, "callback densities cannot be serialized");
}

DensitySpec density_from_json(const json& j) {
  if (!j.is_object() || !j.contains("variant") || !j.at("variant").is_string()) {
    bad("density needs a 'variant'");
  }
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "Separable") {
    if (!j.contains("factors") || !j.at("factors").is_array()) bad("Separable needs 'factors'");
    SeparableDensity s;
    for (const json& axis : j.at("factors")) {
      if (!axis.is_array()) bad("'factors' must be an array of per-axis arrays");
      std::vector<Factor> fa;
      for (const json& f : axis) fa.push_back(factor_from_json(f));
      s.axes.push_back(std::move(fa));
    }
    s.scale = num_or(j, "scale", 1.0);
    return DensitySpec(std::move(s));
  }
  if (variant == "Box") {
    BoxDensity b;
    b.corner = vec(j, "corner");
    if (j.contains("lower")) b.lower = vec(j, "lower");
    b.value = num_or(j, "value", 1.0);
    return DensitySpec(std::move(b));
  }
  if (variant == "GridSampled") {
    if (!j.contains("grid")) bad("GridSampled needs 'grid'");
    GridDensity g{grid_from_json(j.at("grid")), vec(j, "values")};
    return DensitySpec(std::move(g));
  }
  if (variant == "Callback") bad("Callback densities cannot be loaded from JSON");
  bad("unknown density variant '" + variant + "'");
}

json measure_to_json(const MeasureModel& m) {
  json atoms = json::array();
  for (const Atom& a : m.atoms()) atoms.push_back(json::array({a.location, a.weight}));
  json j = {{"dim", m.dim()}, {"atoms", atoms}};
  j["density"] = m.density() ? density_to_json(*m.density()) : json(nullptr);
  return j;
}

MeasureModel measure_from_json(const json& j) {
  if (!j.is_object()) bad("measure must be an object");
  std::optional<DensitySpec> density;
  if (j.contains("density") && !j.at("density").is_null()) density = density_from_json(j.at("density"));
  std::vector<Atom> atoms;
  if (j.contains("atoms")) {
    if (!j.at("atoms").is_array()) bad("'atoms' must be an array");
    for (const json& a : j.at("atoms")) {
      if (!a.is_array() || a.size() != 2 || !a[0].is_array() || !a[1].is_number()) {
        bad("each atom must be [[coords...], weight]");
      }
      Atom at;
      for (const json& c : a[0]) {
        if (!c.is_number()) bad("atom coordinates must be numbers");
        at.location.push_back(c.get<double>());
      }
      at.weight = a[1].get<double>();
      atoms.push_back(std::move(at));
    }
  }
  std::size_t dim = 0;
  if (j.contains("dim")) {
    if (!j.at("dim").is_number_integer()) bad("'dim' must be an integer");
    dim = j.at("dim").get<std::size_t>();
  } else if (density) {
    dim = density->dim();
  } else if (!atoms.empty()) {
    dim = atoms.front().location.size();
  } else {
    bad("cannot infer dimension of an empty measure; set 'dim'");
  }
  return MeasureModel(dim, std::move(atoms), std::move(density));
}

}  // namespace cesradon
