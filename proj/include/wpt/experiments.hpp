#ifndef WPT_EXPERIMENTS_HPP
#define WPT_EXPERIMENTS_HPP

#include <string>
#include <utility>
#include <vector>

#include "wpt/fieldmaps.hpp"
#include "wpt/link.hpp"

namespace wpt {

/// A two-coil scenario: rx in the z=0 plane, tx parallel above it at
/// `separation`. Deformation wraps both coils around parallel axes along the
/// meander progression direction (two garment layers following the same
/// body curve), keeping their nominal spacing.
struct LinkScenario {
  MeanderSpec tx_geometry;
  MeanderSpec rx_geometry;
  Conductor tx_conductor = Conductor::liquid_metal();
  Conductor rx_conductor = Conductor::liquid_metal();
  double frequency = 13.56e6;   // [Hz]
  double input_power = 1.0;     // [W]
  double separation = 0.02;     // coil-plane spacing [m]
  bool retune = false;          // re-tune capacitors after deformation
};

enum class SweepParameter { bend_radius, pitch, wire_radius, separation };

struct SweepSpec {
  LinkScenario scenario;
  SweepParameter parameter = SweepParameter::bend_radius;
  std::vector<double> values;  // bend_radius accepts infinity (= flat)
  bool retune = false;
  bool bend_rx = true;  // deform both coils; false bends the tx only
};

struct SweepRow {
  double value = 0.0;
  double L1 = 0.0;
  double M = 0.0;
  double k = 0.0;
  double Q1 = 0.0, Q2 = 0.0;
  double eta_max = 0.0;
  double delivered_power = 0.0;
};

/// Flat-scenario link evaluation (both coils tuned at their built shape).
LinkResult evaluate_scenario(const LinkScenario& scenario);

/// Bend-radius sweep; rows come out sorted by radius descending (flat
/// first). retune=false keeps the capacitors fixed at their flat values.
std::vector<SweepRow> deformation_sweep(const SweepSpec& spec,
                                        unsigned threads = 1);

/// Generic sweep dispatcher covering every SweepParameter.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 1);

/// One LinkResult per conductor on identical geometry (both coils get the
/// same material). Needs at least two conductors.
std::vector<std::pair<Conductor, LinkResult>> material_compare(
    const LinkScenario& scenario, const std::vector<Conductor>& conductors);

struct ConfinementComparison {
  DecayProfile meander_profile;
  DecayProfile helix_profile;
  double meander_rate = 0.0;  // ln|B| slope over the full depth range [1/m]
  double helix_rate = 0.0;
  double meander_ratio = 0.0;  // |B(deep)|/|B(shallow)|
  double helix_ratio = 0.0;
  double ratio_of_ratios = 0.0;  // helix_ratio / meander_ratio
  double shallow = 0.0, deep = 0.0;
};

/// Equal-current comparison of surface confinement between a meander and a
/// helical coil of matching footprint (equal-area diameters within 10%).
ConfinementComparison confinement_compare(const MeanderSpec& meander,
                                          const HelixSpec& helix,
                                          std::vector<double> depths,
                                          double shallow = 0.01,
                                          double deep = 0.10,
                                          double current = 1.0);

enum class TraceObjective { eta_max, surface_field_per_ohm };

struct OptimizeSpec {
  LinkScenario scenario;  // footprints, conductors, separation, frequency
  double pitch_min = 0.02, pitch_max = 0.1;
  double radius_min = 3e-4, radius_max = 2e-3;
  TraceObjective objective = TraceObjective::eta_max;
  int coarse_pitch = 8, coarse_radius = 8;
  int descent_rounds = 3;
  int golden_iterations = 24;
};

struct TraceEvaluation {
  double pitch = 0.0;
  double wire_radius = 0.0;
  double objective = 0.0;
};

struct OptimizeResult {
  MeanderSpec best;
  double objective = 0.0;
  std::vector<TraceEvaluation> log;  // every evaluated point, in order
};

/// Evaluates one candidate trace geometry under the scenario's objective.
double trace_objective(const OptimizeSpec& spec, double pitch,
                       double wire_radius);

/// Coarse grid search followed by golden-section coordinate descent over
/// (pitch, wire_radius). Deterministic; the returned best equals the
/// argmax of the evaluation log.
OptimizeResult optimize_trace(const OptimizeSpec& spec, unsigned threads = 1);

/// CSV writer for sweep tables: header
/// value,L1_H,M_H,k,Q1,Q2,eta_max,delivered_power_W.
void write_csv(const std::vector<SweepRow>& rows, std::ostream& os);

}  // namespace wpt

#endif
