// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "wpt/experiments.hpp"
#include "wpt/fieldmaps.hpp"
#include "wpt/link.hpp"
#include "wpt/parallel.hpp"

using namespace wpt;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Criterion {
  std::string name;
  std::function<std::string()> run;  // returns "" on pass, else a reason
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fail(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

WirePath reference_loop(int segments, double wire_radius, double z = 0.0) {
  LoopSpec spec;
  spec.radius = 0.1;
  spec.segments = segments;
  spec.wire_radius = wire_radius;
  spec.center = {0, 0, z};
  return build_loop(spec);
}

MeanderSpec confinement_meander(double pitch) {
  MeanderSpec m;
  m.footprint_x = 0.8;
  m.footprint_y = 0.5;
  m.pitch = pitch;
  m.wire_radius = 1e-3;
  return m;
}

HelixSpec confinement_helix() {
  HelixSpec h;
  h.radius = 0.35682;  // equal-area diameter match for the 0.8 x 0.5 meander
  h.turns = 5;
  h.pitch_per_turn = 0.01;
  h.samples_per_turn = 128;
  h.wire_radius = 1e-3;
  return h;
}

LinkScenario reference_scenario() {
  LinkScenario s;
  s.tx_geometry.footprint_x = 0.3;
  s.tx_geometry.footprint_y = 0.24;
  s.tx_geometry.pitch = 0.04;
  s.tx_geometry.wire_radius = 1e-3;
  s.rx_geometry = s.tx_geometry;
  s.tx_conductor = s.rx_conductor = Conductor::liquid_metal();
  s.separation = 0.02;
  s.input_power = 1.0;
  return s;
}

std::vector<double> profile_depths() {
  std::vector<double> depths;
  for (int i = 1; i <= 40; ++i) depths.push_back(0.005 * i);
  return depths;
}

// ---- criteria ----

std::string loop_center_field() {
  const WirePath loop = reference_loop(512, 1e-3);
  const auto t0 = std::chrono::steady_clock::now();
  const Vec3 B = b_field_at(loop, 1.0, {0, 0, 0});
  const double elapsed_ms = seconds_since(t0) * 1e3;
  const double expected = oracles::loop_center_field(0.1, 1.0);
  const double rel = std::abs(norm(B) - expected) / expected;
  if (rel > 1e-3) return fail("|B| off by %.2e relative", rel);
  if (elapsed_ms >= 10.0) return fail("took %.2f ms", elapsed_ms);
  return {};
}

std::string coaxial_mutual() {
  for (double gap : {0.02, 0.05, 0.1, 0.5}) {
    const double m =
        mutual_inductance(reference_loop(512, 1e-3), reference_loop(512, 1e-3, gap));
    const double oracle = oracles::coaxial_loop_mutual(0.1, 0.1, gap);
    const double rel = std::abs(m - oracle) / oracle;
    if (rel > 0.005) return fail("gap %.2f: %.3e relative", gap, rel);
  }
  const double m =
      mutual_inductance(reference_loop(512, 1e-3), reference_loop(512, 1e-3, 1.0));
  const double dipole = oracles::coaxial_loop_mutual_dipole(0.1, 0.1, 1.0);
  const double rel = std::abs(m - dipole) / dipole;
  if (rel > 0.02) return fail("dipole limit: %.3e relative", rel);
  return {};
}

std::string reciprocity() {
  std::mt19937 rng(20250810);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    LoopSpec a;
    a.radius = 0.03 + 0.08 * unit(rng);
    a.segments = 48 + static_cast<int>(96 * unit(rng));
    a.wire_radius = 5e-4;
    a.normal = normalized(
        Vec3{unit(rng) - 0.5, unit(rng) - 0.5, 0.3 + unit(rng)});
    LoopSpec b = a;
    b.radius = 0.03 + 0.08 * unit(rng);
    b.segments = 48 + static_cast<int>(96 * unit(rng));
    b.center = {0.25 * (unit(rng) - 0.5), 0.25 * (unit(rng) - 0.5),
                0.15 + 0.2 * unit(rng)};
    b.normal = normalized(
        Vec3{unit(rng) - 0.5, unit(rng) - 0.5, 0.3 + unit(rng)});
    const WirePath pa = build_loop(a);
    const WirePath pb = build_loop(b);
    const double mab = mutual_inductance(pa, pb);
    const double mba = mutual_inductance(pb, pa);
    worst = std::max(worst, std::abs(mab - mba) / std::abs(mab));
  }
  if (worst > 1e-12) return fail("worst asymmetry %.3e relative", worst);
  return {};
}

std::string loop_self_inductance() {
  const double oracle = oracles::loop_self_inductance(0.1, 1e-3);
  const double L1024 = self_inductance(reference_loop(1024, 1e-3));
  const double rel = std::abs(L1024 - oracle) / oracle;
  if (rel > 0.02) return fail("1024 segments: %.3e relative to formula", rel);
  const double L2048 = self_inductance(reference_loop(2048, 1e-3));
  const double drift = std::abs(L2048 - L1024) / L1024;
  if (drift > 0.005) return fail("halving changed L by %.3e", drift);
  return {};
}

std::string meander_decay_rate() {
  const WirePath coil = build_meander(confinement_meander(0.05));
  const DecayProfile profile = decay_profile(coil, 1.0, profile_depths());
  const double rate = fit_decay_rate(profile, 0.025, 0.1);
  const double target = 3.14159265358979323846 / 0.05;
  const double rel = std::abs(rate - target) / target;
  if (rel > 0.15)
    return fail("fitted %.2f vs %.2f (%.1f%% off)", rate, target, 100 * rel);
  return {};
}

std::string confinement_ordering() {
  for (double pitch : {0.03, 0.05, 0.08}) {
    const auto cmp = confinement_compare(confinement_meander(pitch),
                                         confinement_helix(), profile_depths());
    if (!(cmp.meander_ratio * 5.0 <= cmp.helix_ratio))
      return fail("pitch %.2f: meander %.4f vs helix %.4f (x%.1f)", pitch,
                  cmp.meander_ratio, cmp.helix_ratio, cmp.ratio_of_ratios);
  }
  return {};
}

std::string efficiency_formula() {
  if (link_efficiency(0.5, 8.0, 4.0) != 0.5)  // U^2 = 8 exactly
    return fail("eta(U^2=8) != 1/2");
  const double eta = link_efficiency(0.1, 100.0, 100.0);
  if (std::abs(eta - 0.8190) > 1e-4)
    return fail("eta(0.1,100,100) = %.6f", eta);
  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> k_dist(0.0, 0.97);
  std::uniform_real_distribution<double> q_dist(0.05, 1000.0);
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double k = k_dist(rng);
    const double q1 = q_dist(rng), q2 = q_dist(rng);
    const double e0 = link_efficiency(k, q1, q2);
    if (e0 < 0.0 || e0 >= 1.0) ++violations;
    if (!(link_efficiency(k * 1.01 + 1e-9, q1, q2) > e0)) ++violations;
    if (k > 0.0 && !(link_efficiency(k, q1 * 1.01, q2) > e0)) ++violations;
    if (k > 0.0 && !(link_efficiency(k, q1, q2 * 1.01) > e0)) ++violations;
  }
  if (violations != 0) return fail("%d monotonicity violations", violations);
  return {};
}

std::string deformation_robustness() {
  SweepSpec spec;
  spec.scenario = reference_scenario();
  spec.values = {kInf, 0.4, 0.2, 0.1};
  spec.retune = false;
  const auto rows = deformation_sweep(spec, 0);
  const double flat = rows.front().eta_max;
  double worst = 0.0;
  for (const auto& r : rows)
    worst = std::max(worst, std::abs(r.eta_max - flat) / flat);
  if (worst >= 0.20) return fail("max deviation %.1f%%", 100 * worst);
  return {};
}

std::string material_gate() {
  SweepSpec lm;
  lm.scenario = reference_scenario();
  lm.values = {kInf, 0.4, 0.2, 0.1};
  SweepSpec yarn = lm;
  yarn.scenario.tx_conductor = yarn.scenario.rx_conductor = Conductor::yarn();
  const auto lm_rows = deformation_sweep(lm, 0);
  const auto yarn_rows = deformation_sweep(yarn, 0);
  for (std::size_t i = 0; i < lm_rows.size(); ++i)
    if (!(yarn_rows[i].eta_max < lm_rows[i].eta_max))
      return fail("yarn not below liquid metal at radius %.3g",
                  lm_rows[i].value);
  const double yarn_delivered = yarn_rows.front().eta_max * 1.0;
  if (yarn_delivered < 1e-3)
    return fail("yarn delivers %.2e W from 1 W", yarn_delivered);
  const double lm_delivered = lm_rows.front().eta_max * 2.0;
  if (lm_delivered < 1.0)
    return fail("liquid metal delivers %.3f W from 2 W", lm_delivered);
  return {};
}

std::string optimizer_soundness() {
  const auto t0 = std::chrono::steady_clock::now();
  OptimizeSpec spec;
  spec.scenario = reference_scenario();
  const OptimizeResult tuned = optimize_trace(spec, 0);

  // Exhaustive 64x64 grid over the same ranges as the independent check.
  const int n = 64;
  std::vector<double> grid(n * n, -1.0);
  parallel_for(grid.size(), 0, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / n;
    const int j = static_cast<int>(idx) % n;
    const double pitch =
        spec.pitch_min + (spec.pitch_max - spec.pitch_min) * i / (n - 1);
    const double radius =
        spec.radius_min + (spec.radius_max - spec.radius_min) * j / (n - 1);
    if (pitch > 2.0 * radius)
      grid[idx] = trace_objective(spec, pitch, radius);
  });
  double brute = -1.0;
  for (double v : grid) brute = std::max(brute, v);
  const double elapsed = seconds_since(t0);
  if (tuned.objective < 0.98 * brute)
    return fail("optimizer %.5f vs grid %.5f", tuned.objective, brute);
  if (elapsed >= 300.0) return fail("took %.0f s", elapsed);
  return {};
}

std::string grid_performance() {
  WirePath coil = build_meander(confinement_meander(0.05));
  coil = resample(coil, path_length(coil) / 2000.0);
  if (coil.segment_count() < 1800)
    return fail("test coil has only %zu segments", coil.segment_count());
  GridSpec grid;
  grid.axis_u = {0, 1, 0};
  grid.axis_v = {0, 0, 1};
  grid.nu = 100;
  grid.nv = 100;
  grid.spacing = 0.005;
  const Vec3 c = areal_centroid(coil);
  grid.origin = {c.x, c.y - 0.5 * grid.spacing * (grid.nu - 1), 0.005};

  const auto t1 = std::chrono::steady_clock::now();
  const FieldGrid serial = sample_plane(coil, 1.0, grid, 1);
  const double t_serial = seconds_since(t1);
  const auto t8 = std::chrono::steady_clock::now();
  const FieldGrid parallel = sample_plane(coil, 1.0, grid, 8);
  const double t_parallel = seconds_since(t8);

  std::ostringstream s1, s8;
  write_csv(serial, s1);
  write_csv(parallel, s8);
  if (s1.str() != s8.str()) return fail("outputs differ across thread counts");
  if (t_serial >= 5.0) return fail("single-threaded %.2f s", t_serial);
  if (t_parallel >= 1.5) return fail("8-way %.2f s", t_parallel);
  return {};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"1 loop-center field, 0.1% in <10 ms", loop_center_field},
      {"2 coaxial mutual vs elliptic/dipole oracles", coaxial_mutual},
      {"3 reciprocity to 1e-12 on 100 random pairs", reciprocity},
      {"4 loop self-inductance, 2% + mesh stability", loop_self_inductance},
      {"5 meander decay rate within 15% of pi/pitch", meander_decay_rate},
      {"6 meander/helix confinement ratio >= 5x", confinement_ordering},
      {"7 efficiency formula + monotonicity (1e4)", efficiency_formula},
      {"8 deformation robustness < 20% (fixed caps)", deformation_robustness},
      {"9 material ordering + mW/watt delivery gates", material_gate},
      {"10 optimizer within 2% of 64x64 grid optimum", optimizer_soundness},
      {"11 100x100 grid perf + thread determinism", grid_performance},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    std::string reason;
    try {
      reason = criterion.run();
    } catch (const std::exception& e) {
      reason = std::string("exception: ") + e.what();
    }
    if (reason.empty()) {
      std::printf("PASS  %s\n", criterion.name.c_str());
    } else {
      ++failures;
      std::printf("FAIL  %s  (%s)\n", criterion.name.c_str(), reason.c_str());
    }
    std::fflush(stdout);
  }
  if (failures == 0)
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  else
    std::printf("%d of %zu acceptance criteria failed\n", failures,
                criteria.size());
  return failures;
}
