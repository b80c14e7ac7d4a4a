#include "wpt/magnetics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wpt/errors.hpp"

namespace wpt {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFieldFactor = 1e-7;  // mu0 / 4pi

/// Compensated accumulator; keeps double-sum rounding independent of length.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

struct Segments {
  std::vector<Vec3> start, end, mid, delta;
  std::vector<double> length;

  explicit Segments(const WirePath& path) {
    const std::size_t n = path.segment_count();
    start.reserve(n);
    end.reserve(n);
    mid.reserve(n);
    delta.reserve(n);
    length.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3 a = path.segment_start(i);
      const Vec3 b = path.segment_end(i);
      start.push_back(a);
      end.push_back(b);
      mid.push_back((a + b) * 0.5);
      delta.push_back(b - a);
      length.push_back(norm(b - a));
    }
  }
  std::size_t size() const { return start.size(); }
};

// 2-point Gauss-Legendre nodes on [0, 1].
constexpr double kGaussLo = 0.5 - 0.28867513459481287;
constexpr double kGaussHi = 0.5 + 0.28867513459481287;

/// Tensor 2x2 Gauss quadrature of 1/sqrt(r^2 + reg^2) between two straight
/// pieces [a1, a1+d1] and [a2, a2+d2], multiplied by d1 . d2.
double pair_kernel(const Vec3& a1, const Vec3& d1, const Vec3& a2,
                   const Vec3& d2, double reg2) {
  const Vec3 p1 = a1 + d1 * kGaussLo;
  const Vec3 p2 = a1 + d1 * kGaussHi;
  const Vec3 q1 = a2 + d2 * kGaussLo;
  const Vec3 q2 = a2 + d2 * kGaussHi;
  const double inv =
      1.0 / std::sqrt(norm2(p1 - q1) + reg2) + 1.0 / std::sqrt(norm2(p1 - q2) + reg2) +
      1.0 / std::sqrt(norm2(p2 - q1) + reg2) + 1.0 / std::sqrt(norm2(p2 - q2) + reg2);
  return 0.25 * dot(d1, d2) * inv;
}

/// Neumann contribution of one segment pair with subdivision of close pairs.
/// `reg2` is the squared regularization offset (0 for separated paths).
double pair_neumann(const Vec3& s1, const Vec3& d1, double l1, const Vec3& s2,
                    const Vec3& d2, double l2, double dist, double reg,
                    double reg2) {
  if (dist >= l1 + l2) return pair_kernel(s1, d1, s2, d2, reg2);
  const double target = std::max(reg, 0.25 * std::max(dist, reg));
  const int n1 = target > 0.0
                     ? std::min(64, std::max(1, static_cast<int>(std::ceil(l1 / target))))
                     : 1;
  const int n2 = target > 0.0
                     ? std::min(64, std::max(1, static_cast<int>(std::ceil(l2 / target))))
                     : 1;
  const Vec3 sub1 = d1 / n1;
  const Vec3 sub2 = d2 / n2;
  double acc = 0.0;
  for (int i = 0; i < n1; ++i) {
    const Vec3 o1 = s1 + sub1 * static_cast<double>(i);
    for (int j = 0; j < n2; ++j)
      acc += pair_kernel(o1, sub1, s2 + sub2 * static_cast<double>(j), sub2, reg2);
  }
  return acc;
}

double neumann_double_sum(const Segments& sa, const Segments& sb, double reg,
                          double reg2) {
  KahanSum total;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    for (std::size_t j = 0; j < sb.size(); ++j) {
      const double dist = norm(sa.mid[i] - sb.mid[j]);
      total.add(pair_neumann(sa.start[i], sa.delta[i], sa.length[i],
                             sb.start[j], sb.delta[j], sb.length[j], dist, reg,
                             reg2));
    }
  }
  return kFieldFactor * total.sum;
}

}  // namespace

Conductor Conductor::copper() {
  Conductor c;
  c.name = "copper";
  c.resistivity = 1.68e-8;
  return c;
}

Conductor Conductor::liquid_metal() {
  Conductor c;
  c.name = "liquid_metal";
  c.resistivity = 2.89e-7;
  return c;
}

Conductor Conductor::yarn() {
  Conductor c;
  c.name = "yarn";
  c.resistance_per_length = 1.0;
  return c;
}

void validate(const Conductor& conductor) {
  if (conductor.resistivity.has_value() ==
      conductor.resistance_per_length.has_value())
    throw validation_error(
        "conductor needs exactly one of resistivity and resistance_per_length",
        "conductor");
  if (conductor.resistivity && !(*conductor.resistivity > 0.0))
    throw validation_error("resistivity must be positive",
                           "conductor.resistivity");
  if (conductor.resistance_per_length && !(*conductor.resistance_per_length > 0.0))
    throw validation_error("resistance_per_length must be positive",
                           "conductor.resistance_per_length");
  if (!(conductor.relative_permeability >= 1.0))
    throw validation_error("relative_permeability must be at least 1",
                           "conductor.relative_permeability");
}

SegmentField::SegmentField(const WirePath& path) {
  const std::size_t n = path.segment_count();
  start_.reserve(n);
  end_.reserve(n);
  length_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    start_.push_back(path.segment_start(i));
    end_.push_back(path.segment_end(i));
    length_.push_back(norm(end_.back() - start_.back()));
  }
}

bool SegmentField::unit_field(const Vec3& point, double clearance, Vec3& out,
                              std::size_t& offending_segment) const {
  // Exact field of a straight finite segment, in the cancellation-safe form
  //   B = mu0 I / 4pi * (|r1| + |r2|) (r1 x r2) / (|r1||r2| (|r1||r2| + r1.r2))
  // with r1, r2 from the field point to the segment ends.
  double bx = 0.0, by = 0.0, bz = 0.0;
  const double clearance2 = clearance * clearance;
  for (std::size_t i = 0; i < start_.size(); ++i) {
    const Vec3 r1 = start_[i] - point;
    const Vec3 r2 = end_[i] - point;
    const double n1sq = norm2(r1);
    const double n2sq = norm2(r2);
    const Vec3 cr = cross(r1, r2);
    // distance to the segment, reusing |r1 x r2| = dist_perp * length
    const double t = -dot(r1, r2 - r1);
    const double lsq = length_[i] * length_[i];
    double dist2;
    if (t <= 0.0)
      dist2 = n1sq;
    else if (t >= lsq)
      dist2 = n2sq;
    else
      dist2 = norm2(cr) / lsq;
    if (dist2 <= clearance2) {
      offending_segment = i;
      return false;
    }
    const double n1 = std::sqrt(n1sq);
    const double n2 = std::sqrt(n2sq);
    const double denom = n1 * n2 * (n1 * n2 + dot(r1, r2));
    const double f = (n1 + n2) / denom;
    bx += cr.x * f;
    by += cr.y * f;
    bz += cr.z * f;
  }
  out = Vec3{bx, by, bz} * kFieldFactor;
  return true;
}

Vec3 b_field_at(const WirePath& path, double current, const Vec3& point) {
  const SegmentField field(path);
  Vec3 unit;
  std::size_t seg = 0;
  if (!field.unit_field(point, path.wire_radius, unit, seg))
    throw proximity_error("field point within wire_radius of segment " +
                              std::to_string(seg),
                          seg);
  return unit * current;
}

double mutual_inductance(const WirePath& a, const WirePath& b,
                         const NeumannOptions& options) {
  validate(a);
  validate(b);
  const double la = path_length(a);
  const double lb = path_length(b);
  const double max_radius = std::max(a.wire_radius, b.wire_radius);

  {  // proximity precondition on the native segments
    const Segments sa(a), sb(b);
    for (std::size_t i = 0; i < sa.size(); ++i) {
      for (std::size_t j = 0; j < sb.size(); ++j) {
        const double bound = norm(sa.mid[i] - sb.mid[j]) -
                             0.5 * (sa.length[i] + sb.length[j]);
        if (bound > max_radius) continue;
        const double d = segment_segment_distance(sa.start[i], sa.end[i],
                                                  sb.start[j], sb.end[j]);
        if (d <= max_radius)
          throw proximity_error(
              "paths closer than the wire radius near segment " +
                  std::to_string(i),
              i);
      }
    }
  }

  double h = std::min(options.coarse_limit, std::min(la, lb) / 64.0);
  h = std::max(h, 1e-4);
  double previous = 0.0;
  bool have_previous = false;
  for (int level = 0; level < options.max_levels; ++level) {
    const Segments sa(resample(a, h));
    const Segments sb(resample(b, h));
    const double m = neumann_double_sum(sa, sb, 0.0, 0.0);
    if (have_previous &&
        std::abs(m - previous) <= options.tolerance * std::max(std::abs(m), 1e-18))
      return m;
    previous = m;
    have_previous = true;
    h *= 0.5;
  }
  return previous;
}

double self_inductance(const WirePath& path) {
  validate(path);  // rejects wire radii as large as the path itself
  const double a = path.wire_radius;
  const Segments segs(path);
  const double reg2 = a * a;
  KahanSum total;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      const double dist = norm(segs.mid[i] - segs.mid[j]);
      total.add(2.0 * pair_neumann(segs.start[i], segs.delta[i],
                                   segs.length[i], segs.start[j],
                                   segs.delta[j], segs.length[j], dist, a,
                                   reg2));
    }
    // Exact self term of a straight segment with the same regularized
    // kernel: (mu0/4pi)(2 l asinh(l/a) - 2(sqrt(l^2+a^2) - a)); reduces to
    // the classic (mu0 l/2pi)(ln(2l/a) - 1) for l >> a.
    const double l = segs.length[i];
    total.add(2.0 * l * std::asinh(l / a) -
              2.0 * (std::sqrt(l * l + a * a) - a));
  }
  return kFieldFactor * total.sum;
}

double skin_depth(const Conductor& conductor, double frequency) {
  validate(conductor);
  if (!conductor.resistivity)
    throw validation_error("skin depth needs a resistivity model",
                           "conductor.resistivity");
  if (!(frequency > 0.0))
    throw validation_error("frequency must be positive", "frequency");
  return std::sqrt(*conductor.resistivity /
                   (kPi * frequency * kMu0 * conductor.relative_permeability));
}

double ac_resistance(const WirePath& path, const Conductor& conductor,
                     double frequency) {
  validate(conductor);
  if (!(frequency > 0.0))
    throw validation_error("frequency must be positive", "frequency");
  const double length = path_length(path);
  if (conductor.resistance_per_length)
    return *conductor.resistance_per_length * length;
  const double rho = *conductor.resistivity;
  const double a = path.wire_radius;
  const double delta = skin_depth(conductor, frequency);
  if (delta >= a) return rho * length / (kPi * a * a);
  return rho * length / (kPi * (2.0 * a * delta - delta * delta));
}

}  // namespace wpt
