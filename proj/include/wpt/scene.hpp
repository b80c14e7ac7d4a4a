#ifndef WPT_SCENE_HPP
#define WPT_SCENE_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wpt/experiments.hpp"
#include "wpt/fieldmaps.hpp"
#include "wpt/link.hpp"

namespace wpt {

/// Optional cylinder wrap applied to a coil after construction.
struct DeformSpec {
  double bend_radius = 0.0;          // accepts infinity (= no-op)
  Vec3 axis_direction{0.0, 1.0, 0.0};  // in-plane wrap direction
};

struct CoilSpec {
  std::variant<MeanderSpec, HelixSpec, LoopSpec> geometry;
  Conductor conductor = Conductor::copper();
  std::optional<DeformSpec> deform;
};

struct LinkSection {
  std::string tx, rx;  // coil names
  double frequency = 13.56e6;
  double input_power = 1.0;
  double separation = 0.02;
  bool retune = false;
};

struct SweepSection {
  SweepParameter parameter = SweepParameter::bend_radius;
  std::vector<double> values;
  bool retune = false;
  bool bend_rx = true;
};

struct FieldSection {
  std::string coil;
  double current = 1.0;
  GridSpec grid;
  bool grid_given = false;  // false: depth cross-section through the centroid
};

struct ProfileSection {
  std::string coil;
  double current = 1.0;
  std::vector<double> depths;
};

struct MaterialsCompare {
  std::vector<std::string> conductors;
};

struct ConfinementCompare {
  std::string meander;  // coil names; must be the matching geometry kinds
  std::string helix;
  std::vector<double> depths;
  double shallow = 0.01, deep = 0.10;
  double current = 1.0;
};

struct CompareSection {
  std::variant<MaterialsCompare, ConfinementCompare> mode;
};

struct OptimizeSection {
  double pitch_min = 0.02, pitch_max = 0.1;
  double radius_min = 3e-4, radius_max = 2e-3;
  TraceObjective objective = TraceObjective::eta_max;
  int coarse_pitch = 8, coarse_radius = 8;
};

/// Parsed and validated scene document (version 1). Coils are kept in name
/// order so every traversal is deterministic.
struct SceneDocument {
  int version = 1;
  std::map<std::string, Conductor> materials;  // presets plus file overrides
  std::map<std::string, CoilSpec> coils;
  std::optional<LinkSection> link;
  std::optional<SweepSection> sweep;
  std::optional<FieldSection> field;
  std::optional<ProfileSection> profile;
  std::optional<CompareSection> compare;
  std::optional<OptimizeSection> optimize;
};

/// Parses a scene from JSON text. Throws validation_error whose field()
/// names the offending document path.
SceneDocument parse_scene(const std::string& json_text);

/// Reads and parses a scene file; throws io_error when unreadable.
SceneDocument load_scene(const std::string& path);

/// Built-in conductor presets (copper, liquid_metal, yarn).
std::map<std::string, Conductor> builtin_materials();

const CoilSpec& find_coil(const SceneDocument& scene, const std::string& name,
                          const std::string& context);

/// Constructs the coil path in its own frame (z=0 plane for meander/loop)
/// and applies any deform.
WirePath build_path(const CoilSpec& spec);

/// Tx/rx resonant coils for the scene's link section: rx in the z=0 plane,
/// tx translated up by the separation. Works for any geometry kind.
std::pair<ResonantCoil, ResonantCoil> make_link_coils(const SceneDocument& scene);

/// Meander-typed scenario for sweeps and trace optimization; rejects scenes
/// whose linked coils are not meanders.
LinkScenario make_link_scenario(const SceneDocument& scene);

/// Default cross-section grid for a coil: u along the in-plane y axis
/// centered on the centroid, v along +z starting one standoff above the
/// plane.
GridSpec default_grid(const WirePath& path);

/// Default profile depths: 5 mm to 200 mm in 5 mm steps.
std::vector<double> default_depths();

}  // namespace wpt

#endif
