#include "wpt/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wpt/errors.hpp"

namespace wpt {

namespace {

constexpr double kPi = std::numbers::pi;

[[noreturn]] void fail(const std::string& msg, const std::string& field) {
  throw validation_error(msg, field);
}

}  // namespace

double segment_segment_distance(const Vec3& p1, const Vec3& p2, const Vec3& q1,
                                const Vec3& q2) {
  // Closest approach of two segments; clamped projection handles all the
  // degenerate/parallel cases.
  const Vec3 d1 = p2 - p1;
  const Vec3 d2 = q2 - q1;
  const Vec3 r = p1 - q1;
  const double a = norm2(d1), e = norm2(d2), f = dot(d2, r);
  double s = 0.0, t = 0.0;
  if (a <= 1e-30 && e <= 1e-30) return norm(r);
  if (a <= 1e-30) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = dot(d1, r);
    if (e <= 1e-30) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = dot(d1, d2);
      const double denom = a * e - b * b;
      if (denom > 1e-30) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return norm((p1 + d1 * s) - (q1 + d2 * t));
}

void validate(const MeanderSpec& spec) {
  if (!(spec.wire_radius > 0.0))
    fail("wire_radius must be positive", "meander.wire_radius");
  if (!(spec.pitch > 2.0 * spec.wire_radius))
    fail("pitch must exceed twice the wire radius", "meander.pitch");
  if (!(spec.footprint_y >= 2.0 * spec.pitch))
    fail("footprint_y must be at least two pitches (three long runs)",
         "meander.footprint_y");
  if (!(spec.footprint_x > spec.pitch))
    fail("footprint_x must exceed the pitch", "meander.footprint_x");
  if (spec.corner_samples < 1)
    fail("corner_samples must be at least 1", "meander.corner_samples");
}

void validate(const HelixSpec& spec) {
  if (!(spec.radius > 0.0)) fail("radius must be positive", "helix.radius");
  if (!(spec.turns >= 1.0)) fail("turns must be at least 1", "helix.turns");
  if (spec.samples_per_turn < 16)
    fail("samples_per_turn must be at least 16", "helix.samples_per_turn");
  if (!(spec.pitch_per_turn >= 0.0))
    fail("pitch_per_turn must be nonnegative", "helix.pitch_per_turn");
  if (!(norm(spec.axis) > 0.0)) fail("axis must be nonzero", "helix.axis");
  if (!(spec.wire_radius > 0.0))
    fail("wire_radius must be positive", "helix.wire_radius");
}

void validate(const LoopSpec& spec) {
  if (spec.segments < 8) fail("segments must be at least 8", "loop.segments");
  if (!(spec.radius > 0.0)) fail("radius must be positive", "loop.radius");
  if (!(norm(spec.normal) > 0.0)) fail("normal must be nonzero", "loop.normal");
  if (!(spec.wire_radius > 0.0))
    fail("wire_radius must be positive", "loop.wire_radius");
}

void validate(const WirePath& path) {
  if (path.vertices.size() < 2)
    fail("path needs at least 2 vertices", "path.vertices");
  if (!(path.wire_radius > 0.0))
    fail("wire_radius must be positive", "path.wire_radius");
  double total = 0.0;
  for (std::size_t i = 0; i < path.segment_count(); ++i) {
    const double len = norm(path.segment_end(i) - path.segment_start(i));
    if (!(len > 0.0))
      fail("consecutive vertices must be distinct (segment " +
               std::to_string(i) + " has zero length)",
           "path.vertices");
    total += len;
  }
  if (!std::isfinite(total) || !(total > 0.0))
    fail("path length must be finite and positive", "path.vertices");
  if (!(path.wire_radius < total))
    fail("wire_radius must be smaller than the path length",
         "path.wire_radius");
}

int meander_run_count(const MeanderSpec& spec) {
  // Tolerant floor: footprint_y an exact multiple of pitch must not lose a
  // run to floating-point rounding.
  return static_cast<int>(
             std::floor(spec.footprint_y / spec.pitch + 1e-9)) +
         1;
}

WirePath build_meander(const MeanderSpec& spec) {
  validate(spec);
  const int runs = meander_run_count(spec);
  const double r = spec.pitch / 2.0;
  WirePath path;
  path.wire_radius = spec.wire_radius;
  path.closed = false;
  path.vertices.reserve(static_cast<std::size_t>(runs) *
                        (spec.corner_samples + 2));
  for (int i = 0; i < runs; ++i) {
    const double y = i * spec.pitch;
    const bool forward = (i % 2 == 0);
    const double x_start = forward ? 0.0 : spec.footprint_x;
    const double x_end = forward ? spec.footprint_x : 0.0;
    if (i == 0) path.vertices.push_back({x_start, y, 0.0});
    path.vertices.push_back({x_end, y, 0.0});
    if (i + 1 < runs) {
      // Semicircle from (x_end, y) to (x_end, y + pitch), bulging outward.
      const double out = forward ? 1.0 : -1.0;
      for (int k = 1; k <= spec.corner_samples; ++k) {
        const double theta = kPi * k / (spec.corner_samples + 1);
        path.vertices.push_back({x_end + out * r * std::sin(theta),
                                 y + r - r * std::cos(theta), 0.0});
      }
      path.vertices.push_back({x_end, y + spec.pitch, 0.0});
    }
  }
  validate(path);
  return path;
}

WirePath build_helix(const HelixSpec& spec) {
  validate(spec);
  const Vec3 axis = normalized(spec.axis);
  // Deterministic transverse frame.
  const Vec3 seed =
      std::abs(axis.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
  const Vec3 e1 = normalized(cross(seed, axis));
  const Vec3 e2 = cross(axis, e1);
  const int n = static_cast<int>(std::lround(spec.turns * spec.samples_per_turn));
  const double theta_max = 2.0 * kPi * spec.turns;
  WirePath path;
  path.wire_radius = spec.wire_radius;
  path.closed = false;
  path.vertices.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double theta = theta_max * k / n;
    const double advance = spec.pitch_per_turn * theta / (2.0 * kPi);
    path.vertices.push_back(e1 * (spec.radius * std::cos(theta)) +
                            e2 * (spec.radius * std::sin(theta)) +
                            axis * advance);
  }
  validate(path);
  return path;
}

WirePath build_loop(const LoopSpec& spec) {
  validate(spec);
  const Vec3 axis = normalized(spec.normal);
  const Vec3 seed =
      std::abs(axis.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
  const Vec3 e1 = normalized(cross(seed, axis));
  const Vec3 e2 = cross(axis, e1);
  WirePath path;
  path.wire_radius = spec.wire_radius;
  path.closed = true;
  path.vertices.reserve(spec.segments);
  for (int k = 0; k < spec.segments; ++k) {
    const double theta = 2.0 * kPi * k / spec.segments;
    path.vertices.push_back(spec.center +
                            e1 * (spec.radius * std::cos(theta)) +
                            e2 * (spec.radius * std::sin(theta)));
  }
  validate(path);
  return path;
}

double path_length(const WirePath& path) {
  double total = 0.0;
  for (std::size_t i = 0; i < path.segment_count(); ++i)
    total += norm(path.segment_end(i) - path.segment_start(i));
  return total;
}

WirePath resample(const WirePath& path, double max_segment_length) {
  if (!(max_segment_length > 0.0))
    fail("max_segment_length must be positive", "resample.max_segment_length");
  WirePath out;
  out.wire_radius = path.wire_radius;
  out.closed = path.closed;
  for (std::size_t i = 0; i < path.segment_count(); ++i) {
    const Vec3 a = path.segment_start(i);
    const Vec3 b = path.segment_end(i);
    const double len = norm(b - a);
    const int n = std::max(
        1, static_cast<int>(std::ceil(len / max_segment_length - 1e-12)));
    for (int k = 0; k < n; ++k)
      out.vertices.push_back(a + (b - a) * (static_cast<double>(k) / n));
  }
  if (!path.closed) out.vertices.push_back(path.vertices.back());
  return out;
}

WirePath bend_around_cylinder(const WirePath& path, double bend_radius,
                              const Vec3& direction) {
  if (std::isinf(bend_radius)) return path;
  if (!(bend_radius > 0.0))
    throw geometry_error("bend_radius must be positive or infinite");
  const Vec3 d3{direction.x, direction.y, 0.0};
  if (!(norm(d3) > 0.0))
    throw geometry_error("bend direction must be a nonzero in-plane vector");
  const Vec3 u_hat = normalized(d3);
  const Vec3 w_hat = cross(Vec3{0.0, 0.0, 1.0}, u_hat);

  double u_min = std::numeric_limits<double>::infinity();
  double u_max = -std::numeric_limits<double>::infinity();
  for (const Vec3& v : path.vertices) {
    if (std::abs(v.z) > 1e-9)
      throw geometry_error("path must lie in the z=0 plane to bend");
    const double u = dot(v, u_hat);
    u_min = std::min(u_min, u);
    u_max = std::max(u_max, u);
  }
  const double extent = u_max - u_min;
  if (!(bend_radius > extent / kPi))
    throw geometry_error(
        "bend_radius too small for the footprint (wrap exceeds a half "
        "cylinder)");

  const double center = 0.5 * (u_min + u_max);
  auto wrap = [&](const Vec3& v) {
    const double u = dot(v, u_hat) - center;
    const double w = dot(v, w_hat);
    const double angle = u / bend_radius;
    return u_hat * (center + bend_radius * std::sin(angle)) + w_hat * w +
           Vec3{0.0, 0.0, bend_radius * (1.0 - std::cos(angle))};
  };

  // Segments spanning a large wrap angle are subdivided before mapping so the
  // polyline tracks the wrapped curve; 0.02 rad per piece keeps the
  // chord-vs-arc length deficit below 2e-5 relative.
  constexpr double kMaxWrapAngle = 0.02;
  WirePath out;
  out.wire_radius = path.wire_radius;
  out.closed = path.closed;
  out.vertices.reserve(path.vertices.size());
  for (std::size_t i = 0; i < path.segment_count(); ++i) {
    const Vec3 a = path.segment_start(i);
    const Vec3 b = path.segment_end(i);
    const double span = std::abs(dot(b - a, u_hat)) / bend_radius;
    const int n =
        std::max(1, static_cast<int>(std::ceil(span / kMaxWrapAngle)));
    for (int k = 0; k < n; ++k)
      out.vertices.push_back(wrap(a + (b - a) * (static_cast<double>(k) / n)));
  }
  if (!path.closed) out.vertices.push_back(wrap(path.vertices.back()));
  return out;
}

WirePath translated(const WirePath& path, const Vec3& offset) {
  WirePath out = path;
  for (Vec3& v : out.vertices) v += offset;
  return out;
}

Vec3 areal_centroid(const WirePath& path) {
  Vec3 acc{};
  double total = 0.0;
  for (std::size_t i = 0; i < path.segment_count(); ++i) {
    const Vec3 a = path.segment_start(i);
    const Vec3 b = path.segment_end(i);
    const double len = norm(b - a);
    acc += (a + b) * (0.5 * len);
    total += len;
  }
  return acc / total;
}

namespace {

// Jacobi eigen decomposition of a symmetric 3x3 matrix; returns eigenvalues
// and stores eigenvectors as columns of v.
void jacobi3(std::array<std::array<double, 3>, 3>& m,
             std::array<double, 3>& eigenvalues,
             std::array<std::array<double, 3>, 3>& v) {
  v = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = std::abs(m[0][1]) + std::abs(m[0][2]) + std::abs(m[1][2]);
    if (off < 1e-30) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(m[p][q]) < 1e-300) continue;
        const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = c * mkp - s * mkq;
          m[k][q] = s * mkp + c * mkq;
        }
        for (int k = 0; k < 3; ++k) {
          const double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = c * mpk - s * mqk;
          m[q][k] = s * mpk + c * mqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  eigenvalues = {m[0][0], m[1][1], m[2][2]};
}

}  // namespace

Vec3 plane_normal(const WirePath& path) {
  const Vec3 c = areal_centroid(path);
  std::array<std::array<double, 3>, 3> cov{};
  for (std::size_t i = 0; i < path.segment_count(); ++i) {
    const Vec3 a = path.segment_start(i);
    const Vec3 b = path.segment_end(i);
    const double len = norm(b - a);
    const Vec3 m = (a + b) * 0.5 - c;
    const double mv[3] = {m.x, m.y, m.z};
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) cov[r][s] += len * mv[r] * mv[s];
  }
  std::array<double, 3> eig{};
  std::array<std::array<double, 3>, 3> vec{};
  jacobi3(cov, eig, vec);
  int smallest = 0;
  for (int k = 1; k < 3; ++k)
    if (eig[k] < eig[smallest]) smallest = k;
  Vec3 n{vec[0][smallest], vec[1][smallest], vec[2][smallest]};
  n = normalized(n);
  if (std::abs(n.z) > 1e-9) return n.z > 0 ? n : -n;
  if (std::abs(n.x) > 1e-9) return n.x > 0 ? n : -n;
  return n.y > 0 ? n : -n;
}

}  // namespace wpt
