#ifndef WPT_MAGNETICS_HPP
#define WPT_MAGNETICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "wpt/geometry.hpp"
#include "wpt/vec3.hpp"

namespace wpt {

/// Vacuum permeability [H/m].
inline constexpr double kMu0 = 4.0e-7 * 3.14159265358979323846;

/// Electrical material model. Exactly one of `resistivity` and
/// `resistance_per_length` drives the resistance computation: a bulk
/// resistivity (skin effect applies) or a measured per-length value
/// (frequency independent, the right model for composite yarns).
struct Conductor {
  std::string name;
  std::optional<double> resistivity;              // [ohm m]
  double relative_permeability = 1.0;
  std::optional<double> resistance_per_length;    // [ohm/m]

  static Conductor copper();
  static Conductor liquid_metal();  // galinstan-class alloy
  static Conductor yarn();          // plated conductive yarn, 1 ohm/m default
};

void validate(const Conductor& conductor);

struct FieldSample {
  Vec3 position;
  Vec3 B;  // flux density [T]
};

/// Flux density at `point` from `current` flowing along the path, summed over
/// the exact analytic contribution of each straight segment.
/// Throws proximity_error when the point is within wire_radius of a segment.
Vec3 b_field_at(const WirePath& path, double current, const Vec3& point);

/// Precomputed segment arrays for repeated field evaluations of one path.
class SegmentField {
 public:
  explicit SegmentField(const WirePath& path);

  /// Field at `point` for unit current; when the point is within
  /// `clearance` of a segment, returns false and reports that segment.
  bool unit_field(const Vec3& point, double clearance, Vec3& out,
                  std::size_t& offending_segment) const;

  std::size_t size() const { return start_.size(); }

 private:
  std::vector<Vec3> start_, end_;
  std::vector<double> length_;
};

struct NeumannOptions {
  double tolerance = 1e-4;  // stop when the refinement step changes M less
  int max_levels = 6;
  double coarse_limit = 0.02;  // coarsest resample length [m]
};

/// Mutual inductance of two non-intersecting paths via the double line
/// integral (mu0/4pi) sum dl_i . dl_j / r_ij, refined until the relative
/// change drops below options.tolerance. Symmetric in its arguments.
/// Throws proximity_error when the paths approach closer than the larger
/// wire radius.
double mutual_inductance(const WirePath& a, const WirePath& b,
                         const NeumannOptions& options = {});

/// Self inductance of a path at its native discretization: regularized
/// Neumann sum over distinct segment pairs (r -> sqrt(r^2 + a^2), close
/// pairs subdivided) plus the exact straight round-wire self term per
/// segment. Skin-effect current distribution is assumed (no internal
/// inductance term).
double self_inductance(const WirePath& path);

/// Skin depth sqrt(rho / (pi f mu0 mur)) [m]; requires a resistivity model.
double skin_depth(const Conductor& conductor, double frequency);

/// Series AC resistance of the path at `frequency`. Per-length override:
/// R = override * length. Resistivity model: skin-effect annulus
/// rho l / (pi (2 a d - d^2)), clamped to the DC value when the skin depth
/// reaches the wire radius.
double ac_resistance(const WirePath& path, const Conductor& conductor,
                     double frequency);

}  // namespace wpt

#endif
