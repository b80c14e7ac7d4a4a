#include "wpt/fieldmaps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "wpt/errors.hpp"
#include "wpt/parallel.hpp"

namespace wpt {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void validate(const GridSpec& spec) {
  if (spec.nu < 1 || spec.nv < 1)
    throw validation_error("grid needs at least one sample per axis", "grid.nu");
  if (!(spec.spacing > 0.0))
    throw validation_error("grid spacing must be positive", "grid.spacing");
  if (std::abs(norm(spec.axis_u) - 1.0) > 1e-9 ||
      std::abs(norm(spec.axis_v) - 1.0) > 1e-9)
    throw validation_error("grid axes must be unit vectors", "grid.axis_u");
  if (std::abs(dot(spec.axis_u, spec.axis_v)) > 1e-12)
    throw validation_error("grid axes must be orthogonal", "grid.axis_v");
}

FieldGrid sample_plane(const WirePath& path, double current,
                       const GridSpec& grid, unsigned threads) {
  validate(path);
  validate(grid);
  const SegmentField field(path);

  FieldGrid out;
  out.origin = grid.origin;
  out.axis_u = grid.axis_u;
  out.axis_v = grid.axis_v;
  out.nu = grid.nu;
  out.nv = grid.nv;
  out.spacing = grid.spacing;
  const std::size_t total = grid.nu * grid.nv;
  out.samples.resize(total);

  // Offending segment per grid point, or npos. Collected rather than thrown
  // so the reported index does not depend on thread scheduling.
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> violation(total, kNone);

  parallel_for(total, threads, [&](std::size_t idx) {
    const std::size_t iu = idx % grid.nu;
    const std::size_t iv = idx / grid.nu;
    const Vec3 p = grid.origin + grid.axis_u * (iu * grid.spacing) +
                   grid.axis_v * (iv * grid.spacing);
    Vec3 unit;
    std::size_t seg = 0;
    if (field.unit_field(p, path.wire_radius, unit, seg)) {
      out.samples[idx] = FieldSample{p, unit * current};
    } else {
      out.samples[idx] = FieldSample{p, Vec3{}};
      violation[idx] = seg;
    }
  });

  for (std::size_t idx = 0; idx < total; ++idx) {
    if (violation[idx] != kNone)
      throw proximity_error("grid point " + std::to_string(idx) +
                                " within wire_radius of segment " +
                                std::to_string(violation[idx]),
                            violation[idx],
                            static_cast<std::ptrdiff_t>(idx));
  }
  return out;
}

DecayProfile decay_profile(const WirePath& path, double current,
                           std::vector<double> depths) {
  validate(path);
  if (depths.empty())
    throw validation_error("depths must be non-empty", "profile.depths");
  std::sort(depths.begin(), depths.end());
  depths.erase(std::unique(depths.begin(), depths.end()), depths.end());
  for (double d : depths)
    if (!(d > path.wire_radius))
      throw validation_error("depths must exceed the wire radius",
                             "profile.depths");

  DecayProfile profile;
  profile.start = areal_centroid(path);
  profile.direction = plane_normal(path);
  profile.depths = std::move(depths);
  profile.magnitudes.reserve(profile.depths.size());

  const SegmentField field(path);
  for (double d : profile.depths) {
    const Vec3 p = profile.start + profile.direction * d;
    Vec3 unit;
    std::size_t seg = 0;
    if (!field.unit_field(p, path.wire_radius, unit, seg))
      throw proximity_error("profile point at depth " + format_double(d) +
                                " within wire_radius of segment " +
                                std::to_string(seg),
                            seg);
    profile.magnitudes.push_back(norm(unit * current));
  }
  return profile;
}

double fit_decay_rate(const DecayProfile& profile, double window_min,
                      double window_max) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < profile.depths.size(); ++i) {
    const double z = profile.depths[i];
    if (z < window_min - 1e-12 || z > window_max + 1e-12) continue;
    const double b = profile.magnitudes[i];
    if (!(b > 0.0))
      throw analysis_error("profile magnitude must be positive to fit");
    const double y = std::log(b);
    sx += z;
    sy += y;
    sxx += z * z;
    sxy += z * y;
    ++n;
  }
  if (n < 4)
    throw analysis_error("decay fit needs at least 4 samples in the window");
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  return -slope;
}

namespace {

double magnitude_at(const DecayProfile& profile, double depth) {
  for (std::size_t i = 0; i < profile.depths.size(); ++i) {
    const double z = profile.depths[i];
    if (std::abs(z - depth) <= 1e-9 * std::max(1.0, std::abs(depth)))
      return profile.magnitudes[i];
  }
  throw analysis_error("depth " + format_double(depth) +
                       " is not sampled in the profile (no interpolation)");
}

}  // namespace

double confinement_ratio(const DecayProfile& profile, double shallow,
                         double deep) {
  if (shallow > deep)
    throw validation_error("shallow depth must not exceed deep depth",
                           "confinement.shallow");
  if (shallow == deep) return 1.0;
  return magnitude_at(profile, deep) / magnitude_at(profile, shallow);
}

void write_csv(const FieldGrid& grid, std::ostream& os) {
  os << "u,v,x,y,z,Bx,By,Bz,Bmag\n";
  for (std::size_t iv = 0; iv < grid.nv; ++iv) {
    for (std::size_t iu = 0; iu < grid.nu; ++iu) {
      const FieldSample& s = grid.at(iu, iv);
      os << format_double(iu * grid.spacing) << ','
         << format_double(iv * grid.spacing) << ','
         << format_double(s.position.x) << ',' << format_double(s.position.y)
         << ',' << format_double(s.position.z) << ','
         << format_double(s.B.x) << ',' << format_double(s.B.y) << ','
         << format_double(s.B.z) << ',' << format_double(norm(s.B)) << '\n';
    }
  }
}

void write_csv(const DecayProfile& profile, std::ostream& os) {
  os << "depth_m,Bmag_T\n";
  for (std::size_t i = 0; i < profile.depths.size(); ++i)
    os << format_double(profile.depths[i]) << ','
       << format_double(profile.magnitudes[i]) << '\n';
}

}  // namespace wpt
