#ifndef WPT_GEOMETRY_HPP
#define WPT_GEOMETRY_HPP

#include <cstddef>
#include <vector>

#include "wpt/vec3.hpp"

namespace wpt {

/// Discretized centerline of a round-wire conductor. Vertices are in meters;
/// when `closed` the last vertex connects back to the first.
struct WirePath {
  std::vector<Vec3> vertices;
  double wire_radius = 1e-3;
  bool closed = false;

  std::size_t segment_count() const {
    if (vertices.size() < 2) return 0;
    return closed ? vertices.size() : vertices.size() - 1;
  }
  Vec3 segment_start(std::size_t i) const { return vertices[i]; }
  Vec3 segment_end(std::size_t i) const {
    return vertices[(i + 1) % vertices.size()];
  }
};

/// Serpentine trace: long runs along +x/-x alternating, progressing along +y,
/// joined by semicircular turnarounds of radius pitch/2, in the z=0 plane.
struct MeanderSpec {
  double footprint_x = 0.3;   // length of each long run [m]
  double footprint_y = 0.24;  // extent covered by the run progression [m]
  double pitch = 0.04;        // spacing between adjacent long runs [m]
  double wire_radius = 1e-3;  // conductor radius [m]
  int corner_samples = 32;    // interior vertices per 180-degree turnaround
};

/// Circular helix around `axis`, starting in the plane through the origin.
struct HelixSpec {
  double radius = 0.1;
  double turns = 5.0;
  double pitch_per_turn = 0.01;  // axial advance per turn [m]
  Vec3 axis{0.0, 0.0, 1.0};
  int samples_per_turn = 64;
  double wire_radius = 1e-3;
};

/// Closed regular polygon inscribed in a circle; handy as an analytically
/// well-understood geometry.
struct LoopSpec {
  double radius = 0.1;
  Vec3 center{0.0, 0.0, 0.0};
  Vec3 normal{0.0, 0.0, 1.0};
  int segments = 512;
  double wire_radius = 1e-3;
};

void validate(const MeanderSpec& spec);
void validate(const HelixSpec& spec);
void validate(const LoopSpec& spec);

/// Throws validation_error when the path violates its structural invariants
/// (fewer than 2 vertices, a zero-length segment, nonpositive or degenerate
/// wire radius).
void validate(const WirePath& path);

WirePath build_meander(const MeanderSpec& spec);
WirePath build_helix(const HelixSpec& spec);
WirePath build_loop(const LoopSpec& spec);

/// Number of long runs the meander builder will produce for a spec.
int meander_run_count(const MeanderSpec& spec);

/// Sum of segment lengths, including the closing segment of a closed path.
double path_length(const WirePath& path);

/// Linear subdivision so every segment is at most max_segment_length long.
/// Original vertices are preserved; total length is unchanged.
WirePath resample(const WirePath& path, double max_segment_length);

/// Isometrically wraps a z=0-planar path onto a cylinder of radius
/// bend_radius. `direction` is the in-plane unit direction along which arc
/// length is wrapped (the cylinder axis is the in-plane perpendicular); the
/// path curls toward +z, tangent to the original plane at the midpoint of its
/// extent. An infinite bend_radius returns the path unchanged.
WirePath bend_around_cylinder(const WirePath& path, double bend_radius,
                              const Vec3& direction);

/// Translates every vertex by `offset`.
WirePath translated(const WirePath& path, const Vec3& offset);

/// Length-weighted centroid of the segment midpoints.
Vec3 areal_centroid(const WirePath& path);

/// Unit normal of the best-fit plane through the path (smallest principal
/// axis of the length-weighted vertex covariance). Oriented toward +z when
/// possible, else +x, else +y, so the result is deterministic.
Vec3 plane_normal(const WirePath& path);

}  // namespace wpt

#endif
