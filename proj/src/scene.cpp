#include "wpt/scene.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "wpt/errors.hpp"

namespace wpt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw validation_error(path + ": " + msg, path);
}

const json& require(const json& j, const std::string& key,
                    const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required key");
  return *it;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

/// Number, or the string "inf" for an infinite bend radius / flat case.
double as_radius(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "flat")
      return std::numeric_limits<double>::infinity();
    fail(path, "expected a number or \"inf\"");
  }
  return as_number(j, path);
}

double get_number(const json& j, const std::string& key, double fallback,
                  const std::string& path) {
  auto it = j.find(key);
  return it == j.end() ? fallback : as_number(*it, path + "." + key);
}

int get_int(const json& j, const std::string& key, int fallback,
            const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer()) fail(path + "." + key, "expected an integer");
  return it->get<int>();
}

bool get_bool(const json& j, const std::string& key, bool fallback,
              const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) fail(path + "." + key, "expected a boolean");
  return it->get<bool>();
}

Vec3 as_vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected [x, y, z]");
  return {as_number(j[0], path), as_number(j[1], path), as_number(j[2], path)};
}

std::vector<double> as_number_list(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], path));
  return out;
}

Conductor parse_conductor_body(const json& j, const std::string& name,
                               const std::string& path) {
  Conductor c;
  c.name = name;
  if (auto it = j.find("resistivity"); it != j.end())
    c.resistivity = as_number(*it, path + ".resistivity");
  if (auto it = j.find("resistance_per_length"); it != j.end())
    c.resistance_per_length = as_number(*it, path + ".resistance_per_length");
  c.relative_permeability =
      get_number(j, "relative_permeability", 1.0, path);
  try {
    validate(c);
  } catch (const validation_error& e) {
    fail(path, e.what());
  }
  return c;
}

Conductor resolve_conductor(const json& j,
                            const std::map<std::string, Conductor>& materials,
                            const std::string& path) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    auto it = materials.find(name);
    if (it == materials.end()) fail(path, "unknown material '" + name + "'");
    return it->second;
  }
  if (!j.is_object()) fail(path, "expected a material name or object");
  const std::string name = j.value("name", std::string("custom"));
  return parse_conductor_body(j, name, path);
}

CoilSpec parse_coil(const json& j,
                    const std::map<std::string, Conductor>& materials,
                    const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  CoilSpec spec;
  const int kinds = j.count("meander") + j.count("helix") + j.count("loop");
  if (kinds != 1)
    fail(path, "coil needs exactly one of: meander, helix, loop");

  if (auto it = j.find("meander"); it != j.end()) {
    const std::string p = path + ".meander";
    MeanderSpec m;
    m.footprint_x = as_number(require(*it, "footprint_x", p), p + ".footprint_x");
    m.footprint_y = as_number(require(*it, "footprint_y", p), p + ".footprint_y");
    m.pitch = as_number(require(*it, "pitch", p), p + ".pitch");
    m.wire_radius = get_number(*it, "wire_radius", 1e-3, p);
    m.corner_samples = get_int(*it, "corner_samples", 32, p);
    spec.geometry = m;
  } else if (auto hit = j.find("helix"); hit != j.end()) {
    const std::string p = path + ".helix";
    HelixSpec h;
    h.radius = as_number(require(*hit, "radius", p), p + ".radius");
    h.turns = as_number(require(*hit, "turns", p), p + ".turns");
    h.pitch_per_turn =
        as_number(require(*hit, "pitch_per_turn", p), p + ".pitch_per_turn");
    if (auto a = hit->find("axis"); a != hit->end())
      h.axis = as_vec3(*a, p + ".axis");
    h.samples_per_turn = get_int(*hit, "samples_per_turn", 64, p);
    h.wire_radius = get_number(*hit, "wire_radius", 1e-3, p);
    spec.geometry = h;
  } else {
    const json& lj = j.at("loop");
    const std::string p = path + ".loop";
    LoopSpec l;
    l.radius = as_number(require(lj, "radius", p), p + ".radius");
    if (auto c = lj.find("center"); c != lj.end())
      l.center = as_vec3(*c, p + ".center");
    if (auto n = lj.find("normal"); n != lj.end())
      l.normal = as_vec3(*n, p + ".normal");
    l.segments = get_int(lj, "segments", 512, p);
    l.wire_radius = get_number(lj, "wire_radius", 1e-3, p);
    spec.geometry = l;
  }

  if (auto it = j.find("conductor"); it != j.end())
    spec.conductor = resolve_conductor(*it, materials, path + ".conductor");
  if (auto it = j.find("deform"); it != j.end()) {
    const std::string p = path + ".deform";
    DeformSpec d;
    d.bend_radius = as_radius(require(*it, "bend_radius", p), p + ".bend_radius");
    if (auto a = it->find("axis_direction"); a != it->end()) {
      if (!a->is_array() || a->size() != 2)
        fail(p + ".axis_direction", "expected an in-plane [x, y] direction");
      d.axis_direction = {as_number((*a)[0], p), as_number((*a)[1], p), 0.0};
    }
    spec.deform = d;
  }
  return spec;
}

SweepParameter parse_parameter(const std::string& s, const std::string& path) {
  if (s == "bend_radius") return SweepParameter::bend_radius;
  if (s == "pitch") return SweepParameter::pitch;
  if (s == "wire_radius") return SweepParameter::wire_radius;
  if (s == "separation") return SweepParameter::separation;
  fail(path, "unknown sweep parameter '" + s + "'");
}

}  // namespace

std::map<std::string, Conductor> builtin_materials() {
  std::map<std::string, Conductor> m;
  m["copper"] = Conductor::copper();
  m["liquid_metal"] = Conductor::liquid_metal();
  m["yarn"] = Conductor::yarn();
  return m;
}

SceneDocument parse_scene(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("scene is not valid JSON: ") + e.what(),
                           "scene");
  }
  if (!root.is_object()) fail("scene", "expected a JSON object");

  SceneDocument scene;
  const json& version = require(root, "version", "scene");
  if (!version.is_number_integer() || version.get<int>() != 1)
    fail("version", "unsupported scene version (expected 1)");
  scene.version = 1;

  scene.materials = builtin_materials();
  if (auto it = root.find("materials"); it != root.end()) {
    if (!it->is_object()) fail("materials", "expected an object");
    for (auto& [name, body] : it->items())
      scene.materials[name] =
          parse_conductor_body(body, name, "materials." + name);
  }

  const json& coils = require(root, "coils", "scene");
  if (!coils.is_object() || coils.empty())
    fail("coils", "expected a non-empty object of named coils");
  for (auto& [name, body] : coils.items())
    scene.coils[name] = parse_coil(body, scene.materials, "coils." + name);

  if (auto it = root.find("link"); it != root.end()) {
    const std::string p = "link";
    LinkSection link;
    const json& tx = require(*it, "tx", p);
    const json& rx = require(*it, "rx", p);
    if (!tx.is_string() || !rx.is_string())
      fail(p, "tx and rx must name coils");
    link.tx = tx.get<std::string>();
    link.rx = rx.get<std::string>();
    link.frequency = get_number(*it, "frequency_hz", 13.56e6, p);
    link.input_power = get_number(*it, "input_power_w", 1.0, p);
    link.separation = get_number(*it, "separation_m", 0.02, p);
    link.retune = get_bool(*it, "retune", false, p);
    if (!(link.frequency > 0.0)) fail(p + ".frequency_hz", "must be positive");
    if (!(link.input_power > 0.0))
      fail(p + ".input_power_w", "must be positive");
    if (!(link.separation > 0.0)) fail(p + ".separation_m", "must be positive");
    find_coil(scene, link.tx, p + ".tx");
    find_coil(scene, link.rx, p + ".rx");
    scene.link = link;
  }

  if (auto it = root.find("sweep"); it != root.end()) {
    const std::string p = "sweep";
    SweepSection sweep;
    const json& par = require(*it, "parameter", p);
    if (!par.is_string()) fail(p + ".parameter", "expected a string");
    sweep.parameter = parse_parameter(par.get<std::string>(), p + ".parameter");
    const json& values = require(*it, "values", p);
    if (!values.is_array() || values.empty())
      fail(p + ".values", "expected a non-empty array");
    for (std::size_t i = 0; i < values.size(); ++i)
      sweep.values.push_back(as_radius(values[i], p + ".values"));
    sweep.retune = get_bool(*it, "retune", false, p);
    sweep.bend_rx = get_bool(*it, "bend_rx", true, p);
    scene.sweep = sweep;
  }

  if (auto it = root.find("field"); it != root.end()) {
    const std::string p = "field";
    FieldSection field;
    const json& coil = require(*it, "coil", p);
    if (!coil.is_string()) fail(p + ".coil", "expected a coil name");
    field.coil = coil.get<std::string>();
    find_coil(scene, field.coil, p + ".coil");
    field.current = get_number(*it, "current_a", 1.0, p);
    if (auto pl = it->find("plane"); pl != it->end()) {
      const std::string pp = p + ".plane";
      GridSpec g;
      g.origin = as_vec3(require(*pl, "origin", pp), pp + ".origin");
      g.axis_u = as_vec3(require(*pl, "axis_u", pp), pp + ".axis_u");
      g.axis_v = as_vec3(require(*pl, "axis_v", pp), pp + ".axis_v");
      g.nu = static_cast<std::size_t>(get_int(*pl, "nu", 100, pp));
      g.nv = static_cast<std::size_t>(get_int(*pl, "nv", 100, pp));
      g.spacing = get_number(*pl, "spacing", 0.005, pp);
      field.grid = g;
      field.grid_given = true;
    }
    scene.field = field;
  }

  if (auto it = root.find("profile"); it != root.end()) {
    const std::string p = "profile";
    ProfileSection profile;
    const json& coil = require(*it, "coil", p);
    if (!coil.is_string()) fail(p + ".coil", "expected a coil name");
    profile.coil = coil.get<std::string>();
    find_coil(scene, profile.coil, p + ".coil");
    profile.current = get_number(*it, "current_a", 1.0, p);
    if (auto d = it->find("depths"); d != it->end())
      profile.depths = as_number_list(*d, p + ".depths");
    else
      profile.depths = default_depths();
    scene.profile = profile;
  }

  if (auto it = root.find("compare"); it != root.end()) {
    const std::string p = "compare";
    CompareSection section;
    const bool has_materials = it->contains("materials");
    const bool has_confinement = it->contains("confinement");
    if (has_materials == has_confinement)
      fail(p, "expected exactly one of: materials, confinement");
    if (has_materials) {
      const json& list = it->at("materials");
      if (!list.is_array() || list.size() < 2)
        fail(p + ".materials", "expected at least two material names");
      MaterialsCompare mc;
      for (const auto& m : list) {
        if (!m.is_string()) fail(p + ".materials", "expected material names");
        const std::string name = m.get<std::string>();
        if (!scene.materials.count(name))
          fail(p + ".materials", "unknown material '" + name + "'");
        mc.conductors.push_back(name);
      }
      section.mode = mc;
    } else {
      const json& c = it->at("confinement");
      const std::string pp = p + ".confinement";
      ConfinementCompare cc;
      const json& m = require(c, "meander", pp);
      const json& h = require(c, "helix", pp);
      if (!m.is_string() || !h.is_string())
        fail(pp, "meander and helix must name coils");
      cc.meander = m.get<std::string>();
      cc.helix = h.get<std::string>();
      find_coil(scene, cc.meander, pp + ".meander");
      find_coil(scene, cc.helix, pp + ".helix");
      if (auto d = c.find("depths"); d != c.end())
        cc.depths = as_number_list(*d, pp + ".depths");
      else
        cc.depths = default_depths();
      cc.shallow = get_number(c, "shallow", 0.01, pp);
      cc.deep = get_number(c, "deep", 0.10, pp);
      cc.current = get_number(c, "current_a", 1.0, pp);
      section.mode = cc;
    }
    scene.compare = section;
  }

  if (auto it = root.find("optimize"); it != root.end()) {
    const std::string p = "optimize";
    OptimizeSection opt;
    const json& pr = require(*it, "pitch", p);
    const json& rr = require(*it, "wire_radius", p);
    if (!pr.is_array() || pr.size() != 2)
      fail(p + ".pitch", "expected [min, max]");
    if (!rr.is_array() || rr.size() != 2)
      fail(p + ".wire_radius", "expected [min, max]");
    opt.pitch_min = as_number(pr[0], p + ".pitch");
    opt.pitch_max = as_number(pr[1], p + ".pitch");
    opt.radius_min = as_number(rr[0], p + ".wire_radius");
    opt.radius_max = as_number(rr[1], p + ".wire_radius");
    if (auto o = it->find("objective"); o != it->end()) {
      if (!o->is_string()) fail(p + ".objective", "expected a string");
      const std::string s = o->get<std::string>();
      if (s == "eta_max")
        opt.objective = TraceObjective::eta_max;
      else if (s == "surface_field_per_ohm")
        opt.objective = TraceObjective::surface_field_per_ohm;
      else
        fail(p + ".objective", "unknown objective '" + s + "'");
    }
    if (auto c = it->find("coarse"); c != it->end()) {
      if (!c->is_array() || c->size() != 2)
        fail(p + ".coarse", "expected [n_pitch, n_radius]");
      opt.coarse_pitch = (*c)[0].get<int>();
      opt.coarse_radius = (*c)[1].get<int>();
    }
    scene.optimize = opt;
  }

  return scene;
}

SceneDocument load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open scene file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw io_error("cannot read scene file: " + path);
  return parse_scene(buffer.str());
}

const CoilSpec& find_coil(const SceneDocument& scene, const std::string& name,
                          const std::string& context) {
  auto it = scene.coils.find(name);
  if (it == scene.coils.end())
    throw validation_error(context + ": unknown coil '" + name + "'", context);
  return it->second;
}

WirePath build_path(const CoilSpec& spec) {
  WirePath path = std::visit(
      [](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, MeanderSpec>) return build_meander(g);
        else if constexpr (std::is_same_v<T, HelixSpec>) return build_helix(g);
        else return build_loop(g);
      },
      spec.geometry);
  if (spec.deform)
    path = bend_around_cylinder(path, spec.deform->bend_radius,
                                spec.deform->axis_direction);
  return path;
}

std::pair<ResonantCoil, ResonantCoil> make_link_coils(
    const SceneDocument& scene) {
  if (!scene.link)
    throw validation_error("scene has no link section", "link");
  const LinkSection& link = *scene.link;
  const CoilSpec& tx_spec = find_coil(scene, link.tx, "link.tx");
  const CoilSpec& rx_spec = find_coil(scene, link.rx, "link.rx");
  WirePath tx_path =
      translated(build_path(tx_spec), {0.0, 0.0, link.separation});
  WirePath rx_path = build_path(rx_spec);
  return {make_resonant_coil(tx_path, tx_spec.conductor, link.frequency),
          make_resonant_coil(rx_path, rx_spec.conductor, link.frequency)};
}

LinkScenario make_link_scenario(const SceneDocument& scene) {
  if (!scene.link)
    throw validation_error("scene has no link section", "link");
  const LinkSection& link = *scene.link;
  const CoilSpec& tx_spec = find_coil(scene, link.tx, "link.tx");
  const CoilSpec& rx_spec = find_coil(scene, link.rx, "link.rx");
  const MeanderSpec* tx_m = std::get_if<MeanderSpec>(&tx_spec.geometry);
  const MeanderSpec* rx_m = std::get_if<MeanderSpec>(&rx_spec.geometry);
  if (!tx_m || !rx_m)
    throw validation_error(
        "sweep and optimize scenarios need meander coils on both sides",
        "link.tx");
  LinkScenario scenario;
  scenario.tx_geometry = *tx_m;
  scenario.rx_geometry = *rx_m;
  scenario.tx_conductor = tx_spec.conductor;
  scenario.rx_conductor = rx_spec.conductor;
  scenario.frequency = link.frequency;
  scenario.input_power = link.input_power;
  scenario.separation = link.separation;
  scenario.retune = link.retune;
  return scenario;
}

GridSpec default_grid(const WirePath& path) {
  GridSpec g;
  g.axis_u = {0.0, 1.0, 0.0};
  g.axis_v = {0.0, 0.0, 1.0};
  g.nu = 100;
  g.nv = 100;
  g.spacing = 0.005;
  const Vec3 c = areal_centroid(path);
  g.origin = Vec3{c.x, c.y - 0.5 * g.spacing * (g.nu - 1), 0.005};
  return g;
}

std::vector<double> default_depths() {
  std::vector<double> depths;
  for (int i = 1; i <= 40; ++i) depths.push_back(0.005 * i);
  return depths;
}

}  // namespace wpt
