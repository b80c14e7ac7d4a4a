#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wpt/errors.hpp"
#include "wpt/scene.hpp"

using namespace wpt;

namespace {

const char* kReferenceScene = R"({
  "version": 1,
  "materials": {
    "lossy_yarn": {"resistance_per_length": 2.5}
  },
  "coils": {
    "tx": {
      "meander": {"footprint_x": 0.3, "footprint_y": 0.24, "pitch": 0.04,
                  "wire_radius": 0.001, "corner_samples": 16},
      "conductor": "liquid_metal"
    },
    "rx": {
      "meander": {"footprint_x": 0.3, "footprint_y": 0.24, "pitch": 0.04},
      "conductor": {"name": "inline", "resistivity": 2.0e-8}
    },
    "probe": {
      "loop": {"radius": 0.1, "segments": 64},
      "conductor": "copper"
    },
    "bentcoil": {
      "meander": {"footprint_x": 0.3, "footprint_y": 0.24, "pitch": 0.04},
      "deform": {"bend_radius": 0.2, "axis_direction": [0, 1]},
      "conductor": "lossy_yarn"
    }
  },
  "link": {"tx": "tx", "rx": "rx", "frequency_hz": 13.56e6,
           "input_power_w": 2.0, "separation_m": 0.02, "retune": false},
  "sweep": {"parameter": "bend_radius", "values": ["inf", 0.4, 0.2],
            "retune": false},
  "profile": {"coil": "tx", "current_a": 2.0, "depths": [0.01, 0.02, 0.04]},
  "optimize": {"pitch": [0.02, 0.1], "wire_radius": [3e-4, 2e-3],
               "objective": "eta_max", "coarse": [4, 4]}
})";

}  // namespace

TEST_CASE("parses the full reference scene") {
  const SceneDocument scene = parse_scene(kReferenceScene);
  CHECK(scene.version == 1);
  CHECK(scene.coils.size() == 4);
  CHECK(scene.materials.count("copper") == 1);
  CHECK(scene.materials.count("lossy_yarn") == 1);
  CHECK(*scene.materials.at("lossy_yarn").resistance_per_length == 2.5);

  REQUIRE(scene.link.has_value());
  CHECK(scene.link->input_power == 2.0);
  CHECK(scene.link->separation == 0.02);

  REQUIRE(scene.sweep.has_value());
  REQUIRE(scene.sweep->values.size() == 3);
  CHECK(std::isinf(scene.sweep->values[0]));
  CHECK(scene.sweep->bend_rx);  // default

  REQUIRE(scene.profile.has_value());
  CHECK(scene.profile->current == 2.0);
  CHECK(scene.profile->depths.size() == 3);

  REQUIRE(scene.optimize.has_value());
  CHECK(scene.optimize->coarse_pitch == 4);

  const CoilSpec& rx = find_coil(scene, "rx", "test");
  CHECK(*rx.conductor.resistivity == 2.0e-8);
  const CoilSpec& bent = find_coil(scene, "bentcoil", "test");
  REQUIRE(bent.deform.has_value());
  CHECK(bent.deform->bend_radius == 0.2);
}

TEST_CASE("built deformed coil differs from the flat one") {
  const SceneDocument scene = parse_scene(kReferenceScene);
  CoilSpec undeformed = find_coil(scene, "bentcoil", "t");
  undeformed.deform.reset();
  const WirePath flat = build_path(undeformed);
  const WirePath bent = build_path(find_coil(scene, "bentcoil", "t"));
  double max_z = 0.0;
  for (const Vec3& v : bent.vertices) max_z = std::max(max_z, v.z);
  CHECK(max_z > 0.01);
  CHECK(std::abs(path_length(bent) - path_length(flat)) <
        1e-4 * path_length(flat));
}

TEST_CASE("link coils are placed at the configured separation") {
  const SceneDocument scene = parse_scene(kReferenceScene);
  auto [tx, rx] = make_link_coils(scene);
  CHECK(tx.path.vertices[0].z == 0.02);
  CHECK(rx.path.vertices[0].z == 0.0);
  CHECK(tx.design_frequency == 13.56e6);
  const LinkScenario scenario = make_link_scenario(scene);
  CHECK(scenario.input_power == 2.0);
  CHECK(scenario.tx_geometry.pitch == 0.04);
}

TEST_CASE("rejects wrong version, missing coils, unknown references") {
  CHECK_THROWS_AS(parse_scene(R"({"version": 2, "coils": {}})"),
                  validation_error);
  try {
    parse_scene(R"({"version": 1})");
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    CHECK(e.field().find("coils") != std::string::npos);
  }
  CHECK_THROWS_AS(
      parse_scene(
          R"({"version": 1,
              "coils": {"a": {"loop": {"radius": 0.1}}},
              "link": {"tx": "a", "rx": "missing"}})"),
      validation_error);
  CHECK_THROWS_AS(
      parse_scene(
          R"({"version": 1,
              "coils": {"a": {"loop": {"radius": 0.1},
                              "conductor": "unobtainium"}}})"),
      validation_error);
  CHECK_THROWS_AS(parse_scene("{not json"), validation_error);
}

TEST_CASE("coil spec needs exactly one geometry kind") {
  CHECK_THROWS_AS(
      parse_scene(
          R"({"version": 1,
              "coils": {"a": {"loop": {"radius": 0.1},
                              "helix": {"radius": 0.1, "turns": 2,
                                        "pitch_per_turn": 0.01}}}})"),
      validation_error);
  CHECK_THROWS_AS(parse_scene(R"({"version": 1, "coils": {"a": {}}})"),
                  validation_error);
}

TEST_CASE("sweep and optimize scenarios require meander coils") {
  const SceneDocument scene = parse_scene(
      R"({"version": 1,
          "coils": {"a": {"loop": {"radius": 0.1}},
                    "b": {"loop": {"radius": 0.1, "center": [0, 0, 0.05]}}},
          "link": {"tx": "a", "rx": "b"}})");
  CHECK_NOTHROW(make_link_coils(scene));
  CHECK_THROWS_AS(make_link_scenario(scene), validation_error);
}

TEST_CASE("default grid sits one standoff above the coil plane") {
  const SceneDocument scene = parse_scene(kReferenceScene);
  const WirePath path = build_path(find_coil(scene, "tx", "t"));
  const GridSpec grid = default_grid(path);
  CHECK(grid.origin.z == 0.005);
  CHECK(grid.nu == 100);
  CHECK(dot(grid.axis_u, grid.axis_v) == 0.0);
  const auto depths = default_depths();
  CHECK(depths.size() == 40);
  CHECK(depths.front() == 0.005);
  CHECK(depths.back() == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("materials can override the builtin presets") {
  const SceneDocument scene = parse_scene(
      R"({"version": 1,
          "materials": {"yarn": {"resistance_per_length": 3.0}},
          "coils": {"a": {"loop": {"radius": 0.1}, "conductor": "yarn"}}})");
  CHECK(*scene.materials.at("yarn").resistance_per_length == 3.0);
  CHECK(*find_coil(scene, "a", "t").conductor.resistance_per_length == 3.0);
}
