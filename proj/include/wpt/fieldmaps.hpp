#ifndef WPT_FIELDMAPS_HPP
#define WPT_FIELDMAPS_HPP

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "wpt/geometry.hpp"
#include "wpt/magnetics.hpp"

namespace wpt {

/// Plane to sample: origin + (iu * spacing) * axis_u + (iv * spacing) * axis_v
/// for iu in [0, nu), iv in [0, nv). axis_u and axis_v must be orthonormal.
struct GridSpec {
  Vec3 origin;
  Vec3 axis_u{1.0, 0.0, 0.0};
  Vec3 axis_v{0.0, 1.0, 0.0};
  std::size_t nu = 100;
  std::size_t nv = 100;
  double spacing = 0.005;  // [m]
};

/// Sampled flux density over a plane. Samples are stored row-major with v as
/// the slow index: samples[iv * nu + iu].
struct FieldGrid {
  Vec3 origin;
  Vec3 axis_u, axis_v;
  std::size_t nu = 0, nv = 0;
  double spacing = 0.0;
  std::vector<FieldSample> samples;

  const FieldSample& at(std::size_t iu, std::size_t iv) const {
    return samples[iv * nu + iu];
  }
};

/// |B| sampled along a straight line: start + depths[i] * direction.
struct DecayProfile {
  Vec3 start;
  Vec3 direction;
  std::vector<double> depths;      // strictly increasing [m]
  std::vector<double> magnitudes;  // |B| [T]
};

void validate(const GridSpec& spec);

/// Evaluates the field of `current` through `path` at every grid point.
/// Points are independent and computed in parallel (`threads` as in
/// parallel_for); the result is identical for any thread count.
/// Throws proximity_error naming the lowest offending grid index when a
/// point lies within wire_radius of the path.
FieldGrid sample_plane(const WirePath& path, double current,
                       const GridSpec& grid, unsigned threads = 1);

/// |B| above the path's areal centroid along the fitted plane normal, at the
/// given depths (sorted and deduplicated internally).
DecayProfile decay_profile(const WirePath& path, double current,
                           std::vector<double> depths);

/// Least-squares slope of ln|B| against depth over [window_min, window_max],
/// negated so that a decaying profile yields a positive rate [1/m].
/// Requires at least 4 samples inside the window.
double fit_decay_rate(const DecayProfile& profile, double window_min,
                      double window_max);

/// |B(deep)| / |B(shallow)|; both depths must be sampled (no interpolation).
/// Smaller values mean stronger surface confinement.
double confinement_ratio(const DecayProfile& profile, double shallow,
                         double deep);

/// CSV with header u,v,x,y,z,Bx,By,Bz,Bmag, one row per grid point, iv-major.
void write_csv(const FieldGrid& grid, std::ostream& os);

/// CSV with header depth_m,Bmag_T.
void write_csv(const DecayProfile& profile, std::ostream& os);

}  // namespace wpt

#endif
