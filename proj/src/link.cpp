#include "wpt/link.hpp"

#include <cmath>

#include "wpt/errors.hpp"

namespace wpt {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

/// Quality factor effective under a fixed capacitor tuned for a different
/// inductance: Q / (1 + 2 |dL|/L0 * Q), never above Q.
double detuned_q(double q, double inductance, double tuned_inductance) {
  const double shift = std::abs(inductance - tuned_inductance) / tuned_inductance;
  if (shift < 1e-9) return q;
  return std::min(q, q / (1.0 + 2.0 * shift * q));
}

}  // namespace

double tune_capacitance(double inductance, double f0) {
  if (!(inductance > 0.0))
    throw validation_error("inductance must be positive", "inductance");
  if (!(f0 > 0.0)) throw validation_error("frequency must be positive", "f0");
  const double w = kTwoPi * f0;
  return 1.0 / (w * w * inductance);
}

double quality_factor(double inductance, double resistance, double frequency) {
  if (!(inductance > 0.0) || !(resistance > 0.0) || !(frequency > 0.0))
    throw validation_error("quality_factor needs positive L, R, f",
                           "quality_factor");
  return kTwoPi * frequency * inductance / resistance;
}

double link_efficiency(double k, double q1, double q2) {
  if (!(k >= 0.0) || !(k < 1.0))
    throw validation_error("coupling coefficient must lie in [0, 1)", "k");
  if (!(q1 > 0.0) || !(q2 > 0.0))
    throw validation_error("quality factors must be positive", "q");
  const double u2 = k * k * q1 * q2;
  const double root = 1.0 + std::sqrt(1.0 + u2);
  return u2 / (root * root);
}

ResonantCoil make_resonant_coil(const WirePath& path, const Conductor& conductor,
                                double design_frequency) {
  ResonantCoil coil;
  coil.path = path;
  coil.conductor = conductor;
  coil.design_frequency = design_frequency;
  coil.inductance = self_inductance(path);
  coil.resistance = ac_resistance(path, conductor, design_frequency);
  coil.tuning_capacitance = tune_capacitance(coil.inductance, design_frequency);
  return coil;
}

ResonantCoil with_path(const ResonantCoil& coil, const WirePath& path,
                       bool retune) {
  ResonantCoil out = coil;
  out.path = path;
  out.inductance = self_inductance(path);
  out.resistance = ac_resistance(path, coil.conductor, coil.design_frequency);
  if (retune)
    out.tuning_capacitance = tune_capacitance(out.inductance, coil.design_frequency);
  return out;
}

LinkResult evaluate_link(const ResonantCoil& tx, const ResonantCoil& rx,
                         double input_power) {
  const double f = tx.design_frequency;
  if (std::abs(tx.design_frequency - rx.design_frequency) >
      1e-6 * tx.design_frequency)
    throw config_error("coils are tuned to different design frequencies");

  LinkResult r;
  r.L1 = tx.inductance;
  r.L2 = rx.inductance;
  r.R1 = tx.resistance;
  r.R2 = rx.resistance;
  r.M = mutual_inductance(tx.path, rx.path);
  r.k = std::abs(r.M) / std::sqrt(r.L1 * r.L2);

  const double w = kTwoPi * f;
  const double tuned_l1 = 1.0 / (w * w * tx.tuning_capacitance);
  const double tuned_l2 = 1.0 / (w * w * rx.tuning_capacitance);
  r.Q1 = detuned_q(quality_factor(r.L1, r.R1, f), r.L1, tuned_l1);
  r.Q2 = detuned_q(quality_factor(r.L2, r.R2, f), r.L2, tuned_l2);

  r.U = r.k * std::sqrt(r.Q1 * r.Q2);
  r.eta_max = link_efficiency(r.k, r.Q1, r.Q2);
  r.delivered_power = r.eta_max * input_power;
  return r;
}

}  // namespace wpt
