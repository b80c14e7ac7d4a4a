#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// End-to-end checks of the wptsim binary: exit codes, error JSON on stderr,
// and byte-for-byte determinism of outputs.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string stderr_text;
};

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "wptsim_cli_test";
  fs::create_directories(dir);
  return dir;
}

RunResult run(const std::string& args) {
  const fs::path err_file = work_dir() / "stderr.txt";
  const std::string cmd =
      std::string(WPTSIM_BINARY) + " " + args + " 2>" + err_file.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  std::ifstream in(err_file);
  std::ostringstream buf;
  buf << in.rdbuf();
  r.stderr_text = buf.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

const char* kSmallLinkScene = R"({
  "version": 1,
  "coils": {
    "tx": {"loop": {"radius": 0.1, "segments": 128}, "conductor": "copper"},
    "rx": {"loop": {"radius": 0.1, "segments": 128}, "conductor": "copper"}
  },
  "link": {"tx": "tx", "rx": "rx", "input_power_w": 1.0, "separation_m": 0.05}
})";

}  // namespace

TEST_CASE("link runs are byte-identical") {
  const fs::path dir = work_dir();
  const fs::path scene = dir / "link_scene.json";
  spit(scene, kSmallLinkScene);
  const fs::path out1 = dir / "link1.json";
  const fs::path out2 = dir / "link2.json";
  CHECK(run("link --scene " + scene.string() + " --out " + out1.string())
            .exit_code == 0);
  CHECK(run("link --scene " + scene.string() + " --out " + out2.string())
            .exit_code == 0);
  CHECK(slurp(out1) == slurp(out2));
  CHECK(slurp(fs::path(out1.string() + ".meta.json")) ==
        slurp(fs::path(out2.string() + ".meta.json")));
  CHECK(slurp(out1).find("eta_max") != std::string::npos);
  CHECK(slurp(fs::path(out1.string() + ".meta.json")).find("input_sha1") !=
        std::string::npos);
}

TEST_CASE("malformed scene exits 1 and names the field") {
  const fs::path dir = work_dir();
  const fs::path scene = dir / "broken.json";
  spit(scene, R"({"version": 1})");
  const RunResult r = run("link --scene " + scene.string() + " --out " +
                          (dir / "x.json").string());
  CHECK(r.exit_code == 1);
  CHECK(r.stderr_text.find("\"error\"") != std::string::npos);
  CHECK(r.stderr_text.find("coils") != std::string::npos);
}

TEST_CASE("grid touching the wire exits 2 with grid index and segment") {
  const fs::path dir = work_dir();
  const fs::path scene = dir / "touching.json";
  spit(scene, R"({
    "version": 1,
    "coils": {"c": {"loop": {"radius": 0.1, "segments": 64},
                    "conductor": "copper"}},
    "field": {"coil": "c", "current_a": 1.0,
              "plane": {"origin": [0.1, 0, 0], "axis_u": [1, 0, 0],
                        "axis_v": [0, 1, 0], "nu": 4, "nv": 4,
                        "spacing": 0.03}}
  })");
  const RunResult r = run("field --scene " + scene.string() + " --out " +
                          (dir / "grid.csv").string());
  CHECK(r.exit_code == 2);
  CHECK(r.stderr_text.find("proximity_error") != std::string::npos);
  CHECK(r.stderr_text.find("grid_index") != std::string::npos);
  CHECK(r.stderr_text.find("segment") != std::string::npos);
}

TEST_CASE("unwritable output path exits 3") {
  const fs::path dir = work_dir();
  const fs::path scene = dir / "ok.json";
  spit(scene, kSmallLinkScene);
  const RunResult r = run("link --scene " + scene.string() +
                          " --out /nonexistent_dir_zz/out.json");
  CHECK(r.exit_code == 3);
  CHECK(r.stderr_text.find("io_error") != std::string::npos);
}

TEST_CASE("geom exports one csv per coil") {
  const fs::path dir = work_dir();
  const fs::path scene = dir / "geom_scene.json";
  spit(scene, kSmallLinkScene);
  const fs::path out = dir / "coils.csv";
  CHECK(run("geom --scene " + scene.string() + " --out " + out.string())
            .exit_code == 0);
  const std::string tx_csv = slurp(dir / "coils_tx.csv");
  CHECK(tx_csv.rfind("x,y,z\n", 0) == 0);
  CHECK(fs::exists(dir / "coils_rx.csv"));
}

TEST_CASE("field respects --grid and --threads with identical bytes") {
  const fs::path dir = work_dir();
  const fs::path scene = dir / "field_scene.json";
  spit(scene, R"({
    "version": 1,
    "coils": {"c": {"loop": {"radius": 0.1, "segments": 128},
                    "conductor": "copper"}}
  })");
  const fs::path out1 = dir / "f1.csv";
  const fs::path out8 = dir / "f8.csv";
  CHECK(run("field --scene " + scene.string() + " --out " + out1.string() +
            " --grid 20x10 --threads 1")
            .exit_code == 0);
  CHECK(run("field --scene " + scene.string() + " --out " + out8.string() +
            " --grid 20x10 --threads 8")
            .exit_code == 0);
  const std::string csv = slurp(out1);
  CHECK(csv == slurp(out8));
  std::size_t rows = 0;
  for (char ch : csv)
    if (ch == '\n') ++rows;
  CHECK(rows == 1 + 20 * 10);
}

TEST_CASE("sweep, compare, optimize and profile produce their artifacts") {
  const fs::path dir = work_dir();
  const fs::path scene = dir / "full_scene.json";
  spit(scene, R"({
    "version": 1,
    "coils": {
      "tx": {"meander": {"footprint_x": 0.3, "footprint_y": 0.24,
                         "pitch": 0.04, "wire_radius": 0.001},
             "conductor": "liquid_metal"},
      "rx": {"meander": {"footprint_x": 0.3, "footprint_y": 0.24,
                         "pitch": 0.04, "wire_radius": 0.001},
             "conductor": "liquid_metal"}
    },
    "link": {"tx": "tx", "rx": "rx", "input_power_w": 1.0,
             "separation_m": 0.02},
    "sweep": {"parameter": "bend_radius", "values": ["inf", 0.4]},
    "compare": {"materials": ["liquid_metal", "yarn"]},
    "optimize": {"pitch": [0.03, 0.06], "wire_radius": [5e-4, 1.5e-3],
                 "coarse": [3, 3]},
    "profile": {"coil": "tx", "depths": [0.01, 0.02, 0.03, 0.04]}
  })");

  const fs::path sweep_out = dir / "sweep.csv";
  CHECK(run("sweep --scene " + scene.string() + " --out " +
            sweep_out.string() + " --threads 2")
            .exit_code == 0);
  CHECK(slurp(sweep_out).rfind("value,", 0) == 0);
  CHECK(slurp(fs::path(sweep_out.string() + ".meta.json"))
            .find("max_relative_eta_deviation_from_flat") !=
        std::string::npos);

  const fs::path cmp_out = dir / "materials.csv";
  CHECK(run("compare --scene " + scene.string() + " --out " +
            cmp_out.string())
            .exit_code == 0);
  CHECK(slurp(cmp_out).find("yarn") != std::string::npos);

  const fs::path opt_out = dir / "opt.json";
  CHECK(run("optimize --scene " + scene.string() + " --out " +
            opt_out.string() + " --threads 2")
            .exit_code == 0);
  CHECK(slurp(opt_out).find("objective_value") != std::string::npos);
  // the evaluation log derives its name from the output stem
  CHECK(slurp(dir / "opt_log.csv").rfind("pitch,wire_radius,objective\n", 0) ==
        0);

  const fs::path prof_out = dir / "profile.csv";
  CHECK(run("profile --scene " + scene.string() + " --out " +
            prof_out.string())
            .exit_code == 0);
  CHECK(slurp(prof_out).rfind("depth_m,Bmag_T\n", 0) == 0);
}

TEST_CASE("shipped scenes run deterministically") {
  const fs::path dir = work_dir();
  const std::string scene =
      (fs::path(WPT_SCENE_DIR) / "reference_link.json").string();
  const fs::path out1 = dir / "ref1.json";
  const fs::path out2 = dir / "ref2.json";
  CHECK(run("link --scene " + scene + " --out " + out1.string()).exit_code ==
        0);
  CHECK(run("link --scene " + scene + " --out " + out2.string()).exit_code ==
        0);
  const std::string result = slurp(out1);
  CHECK(result == slurp(out2));
  CHECK(result.find("\"eta_max\": 0.89") != std::string::npos);
}

TEST_CASE("confinement compare via the CLI") {
  const fs::path dir = work_dir();
  const fs::path scene = dir / "confine.json";
  spit(scene, R"({
    "version": 1,
    "coils": {
      "m": {"meander": {"footprint_x": 0.8, "footprint_y": 0.5,
                        "pitch": 0.05, "wire_radius": 0.001},
            "conductor": "liquid_metal"},
      "h": {"helix": {"radius": 0.35682, "turns": 5, "pitch_per_turn": 0.01,
                      "samples_per_turn": 64, "wire_radius": 0.001},
            "conductor": "liquid_metal"}
    },
    "compare": {"confinement": {"meander": "m", "helix": "h",
                                 "depths": [0.01, 0.02, 0.05, 0.1],
                                 "shallow": 0.01, "deep": 0.1}}
  })");
  const fs::path out = dir / "confinement.json";
  CHECK(run("compare --scene " + scene.string() + " --out " + out.string())
            .exit_code == 0);
  const std::string result = slurp(out);
  CHECK(result.find("ratio_of_ratios") != std::string::npos);
  CHECK(fs::exists(dir / "confinement_meander.csv"));
  CHECK(fs::exists(dir / "confinement_helix.csv"));
}
