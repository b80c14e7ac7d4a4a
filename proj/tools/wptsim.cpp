// Command-line front end: geometry export, field maps, decay profiles, link
// evaluation, parameter sweeps, comparisons and trace optimization over JSON
// scene files. All outputs are pure functions of the scene file and flags.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "wpt/errors.hpp"
#include "wpt/experiments.hpp"
#include "wpt/fieldmaps.hpp"
#include "wpt/link.hpp"
#include "wpt/scene.hpp"

namespace {

using nlohmann::json;
constexpr const char* kToolVersion = "1.0.0";

std::string sha1_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha1(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

/// Content hash of the scene file, git blob style: sha1("blob <len>\0" + bytes).
std::string git_blob_sha1(const std::string& bytes) {
  std::string blob = "blob " + std::to_string(bytes.size());
  blob.push_back('\0');
  blob += bytes;
  return sha1_hex(blob);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw wpt::io_error("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw wpt::io_error("cannot read file: " + path);
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw wpt::io_error("cannot open output file: " + path);
  out << content;
  out.flush();
  if (!out) throw wpt::io_error("cannot write output file: " + path);
}

std::string with_suffix(const std::string& path, const std::string& suffix,
                        const std::string& extension = {}) {
  const std::filesystem::path p(path);
  std::filesystem::path q = p.parent_path() / p.stem();
  return q.string() + suffix +
         (extension.empty() ? p.extension().string() : extension);
}

json conductor_json(const wpt::Conductor& c) {
  json j;
  j["name"] = c.name;
  if (c.resistivity) j["resistivity_ohm_m"] = *c.resistivity;
  if (c.resistance_per_length)
    j["resistance_per_length_ohm_per_m"] = *c.resistance_per_length;
  j["relative_permeability"] = c.relative_permeability;
  return j;
}

json link_result_json(const wpt::LinkResult& r) {
  json j;
  j["L1_h"] = r.L1;
  j["L2_h"] = r.L2;
  j["R1_ohm"] = r.R1;
  j["R2_ohm"] = r.R2;
  j["M_h"] = r.M;
  j["k"] = r.k;
  j["Q1"] = r.Q1;
  j["Q2"] = r.Q2;
  j["U"] = r.U;
  j["eta_max"] = r.eta_max;
  j["delivered_power_w"] = r.delivered_power;
  return j;
}

struct Options {
  std::string command;
  std::string scene_path;
  std::string out_path;
  unsigned threads = 1;
  bool retune = false;
  std::optional<std::pair<std::size_t, std::size_t>> grid;
  std::optional<double> current;
  std::optional<double> frequency;
};

/// Sidecar written next to every primary output: input hash, tool version,
/// material constants and command parameters.
json base_metadata(const Options& opt, const wpt::SceneDocument& scene,
                   const std::string& input_sha1) {
  json meta;
  meta["tool"] = "wptsim";
  meta["tool_version"] = kToolVersion;
  meta["command"] = opt.command;
  meta["input_sha1"] = input_sha1;
  json materials = json::object();
  for (const auto& [name, conductor] : scene.materials)
    materials[name] = conductor_json(conductor);
  meta["materials"] = materials;
  meta["notes"] = json::array(
      {"material constants are artifact defaults, not measured values"});
  return meta;
}

void write_sidecar(const std::string& out_path, const json& meta) {
  write_file(out_path + ".meta.json", meta.dump(2) + "\n");
}

const wpt::CoilSpec& pick_coil(const wpt::SceneDocument& scene,
                               const std::string& name,
                               const std::string& context) {
  if (!name.empty()) return wpt::find_coil(scene, name, context);
  return scene.coils.begin()->second;
}

int run_geom(const Options& opt, const wpt::SceneDocument& scene, json& meta) {
  json files = json::array();
  const bool single = scene.coils.size() == 1;
  for (const auto& [name, spec] : scene.coils) {
    const wpt::WirePath path = wpt::build_path(spec);
    std::ostringstream csv;
    csv << "x,y,z\n";
    char buf[96];
    for (const wpt::Vec3& v : path.vertices) {
      std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", v.x, v.y, v.z);
      csv << buf;
    }
    const std::string file =
        single ? opt.out_path : with_suffix(opt.out_path, "_" + name);
    write_file(file, csv.str());
    files.push_back(file);
  }
  meta["outputs"] = files;
  return 0;
}

int run_field(const Options& opt, const wpt::SceneDocument& scene, json& meta) {
  wpt::FieldSection section;
  if (scene.field) section = *scene.field;
  const wpt::CoilSpec& spec = pick_coil(scene, section.coil, "field.coil");
  const wpt::WirePath path = wpt::build_path(spec);
  wpt::GridSpec grid =
      section.grid_given ? section.grid : wpt::default_grid(path);
  if (opt.grid) {
    grid.nu = opt.grid->first;
    grid.nv = opt.grid->second;
  }
  const double current = opt.current.value_or(section.current);
  const wpt::FieldGrid result =
      wpt::sample_plane(path, current, grid, opt.threads);
  std::ostringstream csv;
  wpt::write_csv(result, csv);
  write_file(opt.out_path, csv.str());
  meta["current_a"] = current;
  meta["grid"] = {{"nu", grid.nu}, {"nv", grid.nv}, {"spacing", grid.spacing}};
  meta["conductor"] = conductor_json(spec.conductor);
  return 0;
}

int run_profile(const Options& opt, const wpt::SceneDocument& scene,
                json& meta) {
  wpt::ProfileSection section;
  if (scene.profile)
    section = *scene.profile;
  else
    section.depths = wpt::default_depths();
  const wpt::CoilSpec& spec = pick_coil(scene, section.coil, "profile.coil");
  const wpt::WirePath path = wpt::build_path(spec);
  const double current = opt.current.value_or(section.current);
  const wpt::DecayProfile profile =
      wpt::decay_profile(path, current, section.depths);
  std::ostringstream csv;
  wpt::write_csv(profile, csv);
  write_file(opt.out_path, csv.str());
  meta["current_a"] = current;
  meta["skin_standoff_m"] = 0.005;
  meta["conductor"] = conductor_json(spec.conductor);
  return 0;
}

int run_link(const Options& opt, wpt::SceneDocument& scene, json& meta) {
  if (!scene.link)
    throw wpt::validation_error("scene has no link section", "link");
  if (opt.frequency) scene.link->frequency = *opt.frequency;
  if (opt.retune) scene.link->retune = true;
  auto [tx, rx] = wpt::make_link_coils(scene);
  const wpt::LinkResult result =
      wpt::evaluate_link(tx, rx, scene.link->input_power);
  json out = link_result_json(result);
  out["frequency_hz"] = scene.link->frequency;
  out["input_power_w"] = scene.link->input_power;
  out["separation_m"] = scene.link->separation;
  out["tuning_capacitance_tx_f"] = tx.tuning_capacitance;
  out["tuning_capacitance_rx_f"] = rx.tuning_capacitance;
  write_file(opt.out_path, out.dump(2) + "\n");
  meta["frequency_hz"] = scene.link->frequency;
  return 0;
}

int run_sweep(const Options& opt, wpt::SceneDocument& scene, json& meta) {
  if (!scene.sweep)
    throw wpt::validation_error("scene has no sweep section", "sweep");
  if (opt.frequency && scene.link) scene.link->frequency = *opt.frequency;
  wpt::SweepSpec spec;
  spec.scenario = wpt::make_link_scenario(scene);
  spec.parameter = scene.sweep->parameter;
  spec.values = scene.sweep->values;
  spec.retune = scene.sweep->retune || opt.retune;
  spec.bend_rx = scene.sweep->bend_rx;
  const auto rows = wpt::run_sweep(spec, opt.threads);

  std::ostringstream csv;
  wpt::write_csv(rows, csv);
  write_file(opt.out_path, csv.str());

  double eta_min = rows.front().eta_max, eta_max = rows.front().eta_max;
  for (const auto& r : rows) {
    eta_min = std::min(eta_min, r.eta_max);
    eta_max = std::max(eta_max, r.eta_max);
  }
  json summary;
  summary["parameter"] =
      spec.parameter == wpt::SweepParameter::bend_radius ? "bend_radius"
      : spec.parameter == wpt::SweepParameter::pitch     ? "pitch"
      : spec.parameter == wpt::SweepParameter::wire_radius
          ? "wire_radius"
          : "separation";
  summary["rows"] = rows.size();
  summary["eta_max_range"] = {eta_min, eta_max};
  if (spec.parameter == wpt::SweepParameter::bend_radius) {
    const double flat = rows.front().eta_max;
    double max_dev = 0.0;
    for (const auto& r : rows)
      max_dev = std::max(max_dev, std::abs(r.eta_max - flat) / flat);
    summary["max_relative_eta_deviation_from_flat"] = max_dev;
    summary["deviation_within_20_percent"] = max_dev < 0.20;
    meta["notes"].push_back(
        "bend radii are anthropometric stand-ins (torso/thigh/arm)");
  }
  meta["summary"] = summary;
  return 0;
}

int run_compare(const Options& opt, wpt::SceneDocument& scene, json& meta) {
  if (!scene.compare)
    throw wpt::validation_error("scene has no compare section", "compare");
  if (const auto* mats =
          std::get_if<wpt::MaterialsCompare>(&scene.compare->mode)) {
    std::vector<wpt::Conductor> conductors;
    for (const std::string& name : mats->conductors)
      conductors.push_back(scene.materials.at(name));
    const auto table =
        wpt::material_compare(wpt::make_link_scenario(scene), conductors);
    std::ostringstream csv;
    csv << "conductor,L1_H,R1_ohm,M_H,k,Q1,eta_max,delivered_power_W\n";
    char buf[256];
    for (const auto& [conductor, r] : table) {
      std::snprintf(buf, sizeof(buf),
                    "%s,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                    conductor.name.c_str(), r.L1, r.R1, r.M, r.k, r.Q1,
                    r.eta_max, r.delivered_power);
      csv << buf;
    }
    write_file(opt.out_path, csv.str());
    json summary;
    summary["mode"] = "materials";
    summary["rows"] = table.size();
    meta["summary"] = summary;
    return 0;
  }

  const auto& cc = std::get<wpt::ConfinementCompare>(scene.compare->mode);
  const wpt::CoilSpec& m_spec = wpt::find_coil(scene, cc.meander, "compare");
  const wpt::CoilSpec& h_spec = wpt::find_coil(scene, cc.helix, "compare");
  const auto* meander = std::get_if<wpt::MeanderSpec>(&m_spec.geometry);
  const auto* helix = std::get_if<wpt::HelixSpec>(&h_spec.geometry);
  if (!meander || !helix)
    throw wpt::validation_error(
        "confinement comparison needs a meander coil and a helix coil",
        "compare.confinement");
  const wpt::ConfinementComparison cmp = wpt::confinement_compare(
      *meander, *helix, cc.depths, cc.shallow, cc.deep, cc.current);

  json out;
  out["meander_rate_per_m"] = cmp.meander_rate;
  out["helix_rate_per_m"] = cmp.helix_rate;
  out["meander_confinement_ratio"] = cmp.meander_ratio;
  out["helix_confinement_ratio"] = cmp.helix_ratio;
  out["ratio_of_ratios"] = cmp.ratio_of_ratios;
  out["shallow_m"] = cmp.shallow;
  out["deep_m"] = cmp.deep;
  write_file(opt.out_path, out.dump(2) + "\n");

  std::ostringstream mcsv, hcsv;
  wpt::write_csv(cmp.meander_profile, mcsv);
  wpt::write_csv(cmp.helix_profile, hcsv);
  const std::string m_file = with_suffix(opt.out_path, "_meander", ".csv");
  const std::string h_file = with_suffix(opt.out_path, "_helix", ".csv");
  write_file(m_file, mcsv.str());
  write_file(h_file, hcsv.str());
  json summary;
  summary["mode"] = "confinement";
  summary["profiles"] = {m_file, h_file};
  meta["summary"] = summary;
  return 0;
}

int run_optimize(const Options& opt, wpt::SceneDocument& scene, json& meta) {
  if (!scene.optimize)
    throw wpt::validation_error("scene has no optimize section", "optimize");
  wpt::OptimizeSpec spec;
  spec.scenario = wpt::make_link_scenario(scene);
  spec.pitch_min = scene.optimize->pitch_min;
  spec.pitch_max = scene.optimize->pitch_max;
  spec.radius_min = scene.optimize->radius_min;
  spec.radius_max = scene.optimize->radius_max;
  spec.objective = scene.optimize->objective;
  spec.coarse_pitch = scene.optimize->coarse_pitch;
  spec.coarse_radius = scene.optimize->coarse_radius;
  const wpt::OptimizeResult result = wpt::optimize_trace(spec, opt.threads);

  json out;
  out["best"] = {{"pitch", result.best.pitch},
                 {"wire_radius", result.best.wire_radius},
                 {"footprint_x", result.best.footprint_x},
                 {"footprint_y", result.best.footprint_y}};
  out["objective"] =
      spec.objective == wpt::TraceObjective::eta_max ? "eta_max"
                                                     : "surface_field_per_ohm";
  out["objective_value"] = result.objective;
  out["evaluations"] = result.log.size();
  write_file(opt.out_path, out.dump(2) + "\n");

  std::ostringstream csv;
  csv << "pitch,wire_radius,objective\n";
  char buf[128];
  for (const auto& e : result.log) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n", e.pitch,
                  e.wire_radius, e.objective);
    csv << buf;
  }
  const std::string log_file = with_suffix(opt.out_path, "_log", ".csv");
  write_file(log_file, csv.str());
  json summary;
  summary["log"] = log_file;
  summary["best_objective"] = result.objective;
  meta["summary"] = summary;
  return 0;
}

int dispatch(const Options& opt) {
  const std::string scene_bytes = read_file(opt.scene_path);
  wpt::SceneDocument scene = wpt::parse_scene(scene_bytes);
  json meta = base_metadata(opt, scene, git_blob_sha1(scene_bytes));

  int rc = 0;
  if (opt.command == "geom")
    rc = run_geom(opt, scene, meta);
  else if (opt.command == "field")
    rc = run_field(opt, scene, meta);
  else if (opt.command == "profile")
    rc = run_profile(opt, scene, meta);
  else if (opt.command == "link")
    rc = run_link(opt, scene, meta);
  else if (opt.command == "sweep")
    rc = run_sweep(opt, scene, meta);
  else if (opt.command == "compare")
    rc = run_compare(opt, scene, meta);
  else if (opt.command == "optimize")
    rc = run_optimize(opt, scene, meta);
  if (rc == 0) write_sidecar(opt.out_path, meta);
  return rc;
}

json error_json(const std::string& kind, const std::string& type,
                const std::string& message) {
  json j;
  j["error"] = {{"kind", kind}, {"type", type}, {"message", message}};
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meander-coil wireless power simulator"};
  app.require_subcommand(1);

  Options opt;
  std::string threads = "1";
  std::string grid_arg;
  double current_arg = 0.0, frequency_arg = 0.0;

  for (const char* name :
       {"geom", "field", "profile", "link", "sweep", "compare", "optimize"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--scene", opt.scene_path, "scene JSON path")->required();
    sub->add_option("--out", opt.out_path, "output path")->required();
    sub->add_option("--threads", threads, "worker threads (number or 'auto')");
    sub->add_flag("--retune", opt.retune,
                  "re-tune capacitors after deformation");
    sub->add_option("--grid", grid_arg, "field grid size as NUxNV");
    sub->add_option("--current", current_arg, "drive current [A]")
        ->check(CLI::PositiveNumber);
    sub->add_option("--frequency", frequency_arg,
                    "operating frequency [Hz], default 13.56e6")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << error_json("validation", "cli", e.what()).dump() << "\n";
    return 1;
  }

  opt.command = app.get_subcommands().front()->get_name();
  const CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--current")) opt.current = current_arg;
  if (sub->count("--frequency")) opt.frequency = frequency_arg;
  if (sub->count("--grid")) {
    const auto x = grid_arg.find('x');
    std::size_t nu = 0, nv = 0;
    if (x != std::string::npos) {
      nu = std::strtoul(grid_arg.substr(0, x).c_str(), nullptr, 10);
      nv = std::strtoul(grid_arg.substr(x + 1).c_str(), nullptr, 10);
    }
    if (nu == 0 || nv == 0) {
      std::cerr << error_json("validation", "cli",
                              "--grid expects NUxNV, e.g. 100x100")
                       .dump()
                << "\n";
      return 1;
    }
    opt.grid = {nu, nv};
  }
  if (threads == "auto")
    opt.threads = 0;
  else
    opt.threads =
        static_cast<unsigned>(std::strtoul(threads.c_str(), nullptr, 10));

  try {
    return dispatch(opt);
  } catch (const wpt::validation_error& e) {
    json j = error_json("validation", "validation_error", e.what());
    if (!e.field().empty()) j["error"]["field"] = e.field();
    std::cerr << j.dump() << "\n";
    return 1;
  } catch (const wpt::config_error& e) {
    std::cerr << error_json("validation", "config_error", e.what()).dump()
              << "\n";
    return 1;
  } catch (const wpt::proximity_error& e) {
    json j = error_json("computation", "proximity_error", e.what());
    j["error"]["segment"] = e.segment();
    if (e.grid_index() >= 0) j["error"]["grid_index"] = e.grid_index();
    std::cerr << j.dump() << "\n";
    return 2;
  } catch (const wpt::geometry_error& e) {
    std::cerr << error_json("computation", "geometry_error", e.what()).dump()
              << "\n";
    return 2;
  } catch (const wpt::analysis_error& e) {
    std::cerr << error_json("computation", "analysis_error", e.what()).dump()
              << "\n";
    return 2;
  } catch (const wpt::io_error& e) {
    std::cerr << error_json("io", "io_error", e.what()).dump() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << error_json("computation", "unexpected", e.what()).dump()
              << "\n";
    return 2;
  }
}
