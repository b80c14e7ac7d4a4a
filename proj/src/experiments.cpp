#include "wpt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>

#include "wpt/errors.hpp"
#include "wpt/parallel.hpp"

namespace wpt {

namespace {

const Vec3 kProgression{0.0, 1.0, 0.0};    // meander run progression
constexpr double kSurfaceStandoff = 0.005;  // garment-to-skin gap [m]

struct FlatCoils {
  ResonantCoil tx, rx;  // both tuned at their flat shape, rx at z=0
  WirePath tx_flat, rx_flat;  // tx_flat still in the z=0 plane
};

FlatCoils build_flat(const LinkScenario& scenario) {
  FlatCoils c;
  c.tx_flat = build_meander(scenario.tx_geometry);
  c.rx_flat = build_meander(scenario.rx_geometry);
  c.tx = make_resonant_coil(translated(c.tx_flat, {0, 0, scenario.separation}),
                            scenario.tx_conductor, scenario.frequency);
  c.rx = make_resonant_coil(c.rx_flat, scenario.rx_conductor, scenario.frequency);
  return c;
}

SweepRow row_from(double value, const LinkResult& r) {
  return SweepRow{value, r.L1, r.M, r.k, r.Q1, r.Q2, r.eta_max,
                  r.delivered_power};
}

}  // namespace

LinkResult evaluate_scenario(const LinkScenario& scenario) {
  const FlatCoils c = build_flat(scenario);
  return evaluate_link(c.tx, c.rx, scenario.input_power);
}

std::vector<SweepRow> deformation_sweep(const SweepSpec& spec,
                                        unsigned threads) {
  if (spec.values.empty())
    throw validation_error("sweep values must be non-empty", "sweep.values");
  std::vector<double> radii = spec.values;
  std::sort(radii.begin(), radii.end(), std::greater<double>());

  const FlatCoils flat = build_flat(spec.scenario);
  const Vec3 lift{0, 0, spec.scenario.separation};

  std::vector<SweepRow> rows(radii.size());
  parallel_for(radii.size(), threads, [&](std::size_t i) {
    const double radius = radii[i];
    try {
      WirePath tx_path = bend_around_cylinder(flat.tx_flat, radius, kProgression);
      tx_path = translated(tx_path, lift);
      WirePath rx_path = spec.bend_rx
                             ? bend_around_cylinder(flat.rx_flat, radius,
                                                    kProgression)
                             : flat.rx_flat;
      const ResonantCoil tx = with_path(flat.tx, tx_path, spec.retune);
      const ResonantCoil rx = with_path(flat.rx, rx_path, spec.retune);
      rows[i] = row_from(radius,
                         evaluate_link(tx, rx, spec.scenario.input_power));
    } catch (const geometry_error& e) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6g", radius);
      throw geometry_error("bend radius " + std::string(buf) + ": " + e.what());
    }
  });
  return rows;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads) {
  if (spec.parameter == SweepParameter::bend_radius)
    return deformation_sweep(spec, threads);
  if (spec.values.empty())
    throw validation_error("sweep values must be non-empty", "sweep.values");

  std::vector<SweepRow> rows(spec.values.size());
  parallel_for(spec.values.size(), threads, [&](std::size_t i) {
    const double value = spec.values[i];
    LinkScenario s = spec.scenario;
    switch (spec.parameter) {
      case SweepParameter::pitch:
        s.tx_geometry.pitch = value;
        s.rx_geometry.pitch = value;
        break;
      case SweepParameter::wire_radius:
        s.tx_geometry.wire_radius = value;
        s.rx_geometry.wire_radius = value;
        break;
      case SweepParameter::separation:
        s.separation = value;
        break;
      case SweepParameter::bend_radius:
        break;  // handled above
    }
    rows[i] = row_from(value, evaluate_scenario(s));
  });
  return rows;
}

std::vector<std::pair<Conductor, LinkResult>> material_compare(
    const LinkScenario& scenario, const std::vector<Conductor>& conductors) {
  if (conductors.size() < 2)
    throw validation_error("material comparison needs at least two conductors",
                           "compare.materials");
  std::vector<std::pair<Conductor, LinkResult>> table;
  table.reserve(conductors.size());
  for (const Conductor& conductor : conductors) {
    LinkScenario s = scenario;
    s.tx_conductor = conductor;
    s.rx_conductor = conductor;
    table.emplace_back(conductor, evaluate_scenario(s));
  }
  return table;
}

ConfinementComparison confinement_compare(const MeanderSpec& meander,
                                          const HelixSpec& helix,
                                          std::vector<double> depths,
                                          double shallow, double deep,
                                          double current) {
  // Equal-area footprint diameters within 10%.
  const double meander_diameter =
      2.0 * std::sqrt(meander.footprint_x * meander.footprint_y /
                      3.14159265358979323846);
  const double helix_diameter = 2.0 * helix.radius;
  if (std::abs(meander_diameter - helix_diameter) >
      0.1 * std::max(meander_diameter, helix_diameter))
    throw validation_error(
        "meander and helix footprint diameters differ by more than 10%",
        "confinement.helix");

  std::sort(depths.begin(), depths.end());
  ConfinementComparison cmp;
  cmp.shallow = shallow;
  cmp.deep = deep;
  cmp.meander_profile =
      decay_profile(build_meander(meander), current, depths);
  cmp.helix_profile = decay_profile(build_helix(helix), current, depths);
  const double lo = cmp.meander_profile.depths.front();
  const double hi = cmp.meander_profile.depths.back();
  cmp.meander_rate = fit_decay_rate(cmp.meander_profile, lo, hi);
  cmp.helix_rate = fit_decay_rate(cmp.helix_profile, lo, hi);
  cmp.meander_ratio = confinement_ratio(cmp.meander_profile, shallow, deep);
  cmp.helix_ratio = confinement_ratio(cmp.helix_profile, shallow, deep);
  cmp.ratio_of_ratios = cmp.helix_ratio / cmp.meander_ratio;
  return cmp;
}

namespace {

bool trace_feasible(const OptimizeSpec& spec, double pitch,
                    double wire_radius) {
  MeanderSpec m = spec.scenario.tx_geometry;
  m.pitch = pitch;
  m.wire_radius = wire_radius;
  try {
    validate(m);
  } catch (const validation_error&) {
    return false;
  }
  return true;
}

}  // namespace

double trace_objective(const OptimizeSpec& spec, double pitch,
                       double wire_radius) {
  LinkScenario s = spec.scenario;
  s.tx_geometry.pitch = pitch;
  s.tx_geometry.wire_radius = wire_radius;
  s.rx_geometry = s.tx_geometry;
  if (spec.objective == TraceObjective::eta_max)
    return evaluate_scenario(s).eta_max;

  // Surface field per unit resistance: |B| one standoff above the coil
  // centroid at 1 A, divided by the coil's AC resistance.
  const WirePath path = build_meander(s.tx_geometry);
  const Vec3 probe =
      areal_centroid(path) + plane_normal(path) * kSurfaceStandoff;
  const double field = norm(b_field_at(path, 1.0, probe));
  return field / ac_resistance(path, s.tx_conductor, s.frequency);
}

OptimizeResult optimize_trace(const OptimizeSpec& spec, unsigned threads) {
  if (!(spec.pitch_min <= spec.pitch_max) ||
      !(spec.radius_min <= spec.radius_max))
    throw validation_error("optimization ranges must be ordered",
                           "optimize.ranges");
  if (spec.coarse_pitch < 1 || spec.coarse_radius < 1)
    throw validation_error("coarse grid must have at least one point per axis",
                           "optimize.coarse");

  OptimizeResult result;
  auto grid_value = [](double lo, double hi, int i, int n) {
    return n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  };
  const int n_pitch = spec.pitch_min == spec.pitch_max ? 1 : spec.coarse_pitch;
  const int n_radius =
      spec.radius_min == spec.radius_max ? 1 : spec.coarse_radius;

  // Coarse grid: evaluate feasible points in parallel, log in index order.
  struct Candidate {
    double pitch, radius, objective;
    bool feasible;
  };
  std::vector<Candidate> coarse(static_cast<std::size_t>(n_pitch) * n_radius);
  parallel_for(coarse.size(), threads, [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / n_radius;
    const int j = static_cast<int>(idx) % n_radius;
    Candidate c;
    c.pitch = grid_value(spec.pitch_min, spec.pitch_max, i, n_pitch);
    c.radius = grid_value(spec.radius_min, spec.radius_max, j, n_radius);
    c.feasible = trace_feasible(spec, c.pitch, c.radius);
    c.objective = c.feasible ? trace_objective(spec, c.pitch, c.radius)
                             : -std::numeric_limits<double>::infinity();
    coarse[idx] = c;
  });

  double best_pitch = 0.0, best_radius = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (const Candidate& c : coarse) {
    if (!c.feasible) continue;
    result.log.push_back({c.pitch, c.radius, c.objective});
    if (c.objective > best) {
      best = c.objective;
      best_pitch = c.pitch;
      best_radius = c.radius;
    }
  }
  if (result.log.empty())
    throw validation_error("no feasible point in the optimization ranges",
                           "optimize.ranges");

  // Golden-section refinement, one axis at a time. Only improvements are
  // accepted, so the result can never fall below the best coarse point.
  const double inv_phi = 0.6180339887498949;
  auto golden = [&](double lo, double hi,
                    const std::function<double(double)>& eval, double& arg,
                    double& value) {
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = eval(c), fd = eval(d);
    for (int it = 0; it < spec.golden_iterations; ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = eval(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = eval(d);
      }
    }
    if (fc > fd) {
      arg = c;
      value = fc;
    } else {
      arg = d;
      value = fd;
    }
  };

  for (int round = 0; round < spec.descent_rounds; ++round) {
    {  // pitch axis; keep pitch > 2 * wire_radius within the range
      const double lo = std::max(spec.pitch_min,
                                 2.0 * best_radius * (1.0 + 1e-6));
      const double hi = spec.pitch_max;
      if (lo < hi) {
        double arg = best_pitch, value = best;
        golden(lo, hi,
               [&](double p) {
                 if (!trace_feasible(spec, p, best_radius))
                   return -std::numeric_limits<double>::infinity();
                 const double f = trace_objective(spec, p, best_radius);
                 result.log.push_back({p, best_radius, f});
                 return f;
               },
               arg, value);
        if (value > best) {
          best = value;
          best_pitch = arg;
        }
      }
    }
    {  // wire-radius axis; keep wire_radius < pitch / 2
      const double lo = spec.radius_min;
      const double hi = std::min(spec.radius_max,
                                 0.5 * best_pitch * (1.0 - 1e-6));
      if (lo < hi) {
        double arg = best_radius, value = best;
        golden(lo, hi,
               [&](double a) {
                 if (!trace_feasible(spec, best_pitch, a))
                   return -std::numeric_limits<double>::infinity();
                 const double f = trace_objective(spec, best_pitch, a);
                 result.log.push_back({best_pitch, a, f});
                 return f;
               },
               arg, value);
        if (value > best) {
          best = value;
          best_radius = arg;
        }
      }
    }
  }

  // The returned optimum is the argmax of the log by construction; enforce
  // it explicitly so the invariant survives any future edits.
  const TraceEvaluation* top = &result.log.front();
  for (const TraceEvaluation& e : result.log)
    if (e.objective > top->objective) top = &e;
  result.best = spec.scenario.tx_geometry;
  result.best.pitch = top->pitch;
  result.best.wire_radius = top->wire_radius;
  result.objective = top->objective;
  return result;
}

void write_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << "value,L1_H,M_H,k,Q1,Q2,eta_max,delivered_power_W\n";
  char buf[256];
  for (const SweepRow& r : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", r.value,
                  r.L1, r.M, r.k, r.Q1, r.Q2, r.eta_max, r.delivered_power);
    os << buf;
  }
}

}  // namespace wpt
