#ifndef WPT_LINK_HPP
#define WPT_LINK_HPP

#include "wpt/geometry.hpp"
#include "wpt/magnetics.hpp"

namespace wpt {

/// A coil with its series tuning capacitor. `make_resonant_coil` computes
/// inductance, resistance and the capacitance that resonates at
/// design_frequency. A coil whose path was deformed after tuning keeps its
/// capacitor (see with_path), so inductance and 1/(w^2 C) may disagree; the
/// link evaluation charges that mismatch as a detuning penalty.
struct ResonantCoil {
  WirePath path;
  Conductor conductor;
  double design_frequency = 13.56e6;  // [Hz]
  double inductance = 0.0;            // [H]
  double resistance = 0.0;            // [ohm]
  double tuning_capacitance = 0.0;    // [F]
};

/// Two-coil link figures. Q1/Q2 are the quality factors effective at the
/// operating point (reduced from w L / R when a coil is detuned), so the
/// identities k = |M|/sqrt(L1 L2), U = k sqrt(Q1 Q2) and
/// eta_max = U^2/(1+sqrt(1+U^2))^2 hold on the stored fields.
struct LinkResult {
  double L1 = 0.0, L2 = 0.0;  // [H]
  double R1 = 0.0, R2 = 0.0;  // [ohm]
  double M = 0.0;             // [H], signed by winding sense
  double k = 0.0;             // |M| / sqrt(L1 L2)
  double Q1 = 0.0, Q2 = 0.0;
  double U = 0.0;             // figure of merit
  double eta_max = 0.0;       // max efficiency with optimal load
  double delivered_power = 0.0;  // eta_max * input power [W]
};

/// Series capacitance resonating L at f0: C = 1 / ((2 pi f0)^2 L).
double tune_capacitance(double inductance, double f0);

/// Q = 2 pi f L / R.
double quality_factor(double inductance, double resistance, double frequency);

/// Maximum efficiency of a resonant inductive link with optimal load:
/// with U^2 = k^2 Q1 Q2, eta = U^2 / (1 + sqrt(1 + U^2))^2.
double link_efficiency(double k, double q1, double q2);

ResonantCoil make_resonant_coil(const WirePath& path, const Conductor& conductor,
                                double design_frequency);

/// Replaces the coil's path (recomputing L and R); when retune is false the
/// original capacitor is kept, modelling a fixed component on a deformed coil.
ResonantCoil with_path(const ResonantCoil& coil, const WirePath& path,
                       bool retune);

LinkResult evaluate_link(const ResonantCoil& tx, const ResonantCoil& rx,
                         double input_power);

}  // namespace wpt

#endif
