#pragma once

// Test-side oracles, written independently of the production geometry code:
// vertical ray casting against triangle soup, parametric point-in-pyramid
// tests, and sampling-based box/pyramid overlap verdicts.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "burrow/geometry.hpp"
#include "burrow/rng.hpp"

namespace burrow::testing {

// All z values where the vertical line through (x, y) crosses a triangle.
inline std::vector<double> ray_hits_z(const TriMesh& m, double x, double y) {
  std::vector<double> zs;
  for (const auto& tri : m.triangles) {
    const Vec3& a = m.vertices[tri[0]];
    const Vec3& b = m.vertices[tri[1]];
    const Vec3& c = m.vertices[tri[2]];
    // 2D barycentric containment in the xy projection.
    const double d00 = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
    if (std::abs(d00) < 1e-18) continue;  // vertical face
    const double w1 = ((x - a.x) * (c.y - a.y) - (c.x - a.x) * (y - a.y)) / d00;
    const double w2 = ((b.x - a.x) * (y - a.y) - (x - a.x) * (b.y - a.y)) / d00;
    if (w1 < 0 || w2 < 0 || w1 + w2 > 1) continue;
    zs.push_back(a.z + w1 * (b.z - a.z) + w2 * (c.z - a.z));
  }
  return zs;
}

inline double oracle_floor_height(const std::vector<TriMesh>& meshes, double x, double y) {
  double h = 0.0;
  for (const TriMesh& m : meshes)
    for (double z : ray_hits_z(m, x, y)) h = std::max(h, z);
  return h;
}

inline double oracle_ceiling_height(const std::vector<TriMesh>& meshes, double x, double y) {
  double h = 0.5;
  for (const TriMesh& m : meshes)
    for (double z : ray_hits_z(m, x, y)) h = std::min(h, z);
  return h;
}

// Exact solid membership straight from the pyramid parameters.
inline bool inside_pyramid(const Pyramid& p, const Vec3& q) {
  const double t = (q.z - p.zp) / p.hp;
  if (t < 0 || t > 1) return false;
  const double rx = std::abs(q.x - p.xp) / (0.5 * p.lp);
  const double ry = std::abs(q.y - p.yp) / (0.5 * p.wp);
  return std::max(rx, ry) <= 1.0 - t;
}

inline std::vector<Vec3> pyramid_vertices(const Pyramid& p) {
  const double hx = 0.5 * p.lp, hy = 0.5 * p.wp;
  return {{p.xp, p.yp, p.zp + p.hp},
          {p.xp - hx, p.yp - hy, p.zp},
          {p.xp + hx, p.yp - hy, p.zp},
          {p.xp + hx, p.yp + hy, p.zp},
          {p.xp - hx, p.yp + hy, p.zp}};
}

// Textbook point-to-triangle distance (kept local to the tests).
inline double point_tri_dist(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a;
  const Vec3 n = cross(ab, ac);
  const double nn = norm_sq(n);
  double best = std::numeric_limits<double>::infinity();
  if (nn > 1e-24) {
    // Project onto the plane and test barycentric containment.
    const Vec3 ap = p - a;
    const double dist_plane = dot(ap, n) / std::sqrt(nn);
    const Vec3 proj = p - n * (dot(ap, n) / nn);
    const Vec3 v0 = ab, v1 = ac, v2 = proj - a;
    const double d00 = dot(v0, v0), d01 = dot(v0, v1), d11 = dot(v1, v1);
    const double d20 = dot(v2, v0), d21 = dot(v2, v1);
    const double denom = d00 * d11 - d01 * d01;
    if (denom > 1e-24) {
      const double v = (d11 * d20 - d01 * d21) / denom;
      const double w = (d00 * d21 - d01 * d20) / denom;
      if (v >= 0 && w >= 0 && v + w <= 1) best = std::abs(dist_plane);
    }
  }
  // Edge distances.
  const Vec3 edges[3][2] = {{a, b}, {b, c}, {c, a}};
  for (const auto& e : edges) {
    const Vec3 d = e[1] - e[0];
    const double t = std::clamp(dot(p - e[0], d) / std::max(norm_sq(d), 1e-24), 0.0, 1.0);
    best = std::min(best, norm(p - (e[0] + d * t)));
  }
  return best;
}

inline double point_mesh_dist(const Vec3& p, const TriMesh& m) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& tri : m.triangles)
    best = std::min(best,
                    point_tri_dist(p, m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]));
  return best;
}

// Signed distance estimate for a point against the pyramid solid:
// inside -> +distance to surface, outside -> -distance to surface.
inline double pyramid_signed_depth(const Pyramid& p, const TriMesh& mesh, const Vec3& q) {
  const double d = point_mesh_dist(q, mesh);
  return inside_pyramid(p, q) ? d : -d;
}

// Deterministic sample point on the OBB surface (face index + uv from a hash).
inline Vec3 obb_surface_point(const Obb& b, uint64_t h) {
  const int face = static_cast<int>(h % 6);
  const double u = 2.0 * u01(mix64(h ^ 0x1234567)) - 1.0;
  const double v = 2.0 * u01(mix64(h ^ 0x89abcde)) - 1.0;
  Vec3 local;
  const Vec3 e = b.half_extents;
  switch (face) {
    case 0: local = {+e.x, u * e.y, v * e.z}; break;
    case 1: local = {-e.x, u * e.y, v * e.z}; break;
    case 2: local = {u * e.x, +e.y, v * e.z}; break;
    case 3: local = {u * e.x, -e.y, v * e.z}; break;
    case 4: local = {u * e.x, v * e.y, +e.z}; break;
    default: local = {u * e.x, v * e.y, -e.z}; break;
  }
  return b.center + b.orientation * local;
}

inline bool point_in_obb(const Obb& b, const Vec3& p) {
  const Vec3 l = b.orientation.tmul(p - b.center);
  return std::abs(l.x) <= b.half_extents.x && std::abs(l.y) <= b.half_extents.y &&
         std::abs(l.z) <= b.half_extents.z;
}

struct OverlapVerdict {
  bool intersects = false;
  double margin = 0;  // +penetration depth / -separation distance estimate
};

// Sampling-based box/pyramid overlap verdict with a margin estimate, used to
// filter marginal cases before comparing against the SAT result.
inline OverlapVerdict oracle_obb_pyramid(const Obb& b, const Pyramid& p, int samples,
                                         uint64_t seed) {
  const TriMesh mesh = pyramid_to_mesh(p);
  OverlapVerdict v;
  double deepest = -std::numeric_limits<double>::infinity();
  double nearest = std::numeric_limits<double>::infinity();

  for (int k = 0; k < samples; ++k) {
    const Vec3 q = obb_surface_point(b, rng_hash(seed, 17, k));
    const double sd = pyramid_signed_depth(p, mesh, q);
    if (sd >= 0) v.intersects = true;
    deepest = std::max(deepest, sd);
    nearest = std::min(nearest, -sd);
  }
  for (const Vec3& q : pyramid_vertices(p)) {
    if (point_in_obb(b, q)) v.intersects = true;
  }
  // Pyramid surface samples inside the box also witness overlap.
  for (int k = 0; k < samples / 10; ++k) {
    const uint64_t h = rng_hash(seed, 23, k);
    const auto& tri = mesh.triangles[h % mesh.triangles.size()];
    double w1 = u01(mix64(h ^ 0x777)), w2 = u01(mix64(h ^ 0x999));
    if (w1 + w2 > 1) {
      w1 = 1 - w1;
      w2 = 1 - w2;
    }
    const Vec3 a = mesh.vertices[tri[0]], bb = mesh.vertices[tri[1]], c = mesh.vertices[tri[2]];
    const Vec3 q = a + (bb - a) * w1 + (c - a) * w2;
    if (point_in_obb(b, q)) v.intersects = true;
  }
  v.margin = v.intersects ? std::max(deepest, 0.0) : -nearest;
  return v;
}

}  // namespace burrow::testing
