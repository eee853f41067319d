#include "burrow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace burrow {

Mat3 rot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r.a = {1, 0, 0, 0, c, -s, 0, s, c};
  return r;
}

Mat3 rot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r.a = {c, 0, s, 0, 1, 0, -s, 0, c};
  return r;
}

Mat3 rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Mat3 r;
  r.a = {c, -s, 0, s, c, 0, 0, 0, 1};
  return r;
}

Mat3 rotation_from_angles(double phi, double theta, double psi) {
  return rot_z(psi) * rot_y(-theta) * rot_x(phi);
}

void angles_from_rotation(const Mat3& r, double& phi, double& theta, double& psi) {
  // With R = Rz(psi) Ry(-theta) Rx(phi): R(2,0) = sin(theta).
  const double st = std::clamp(r(2, 0), -1.0, 1.0);
  theta = std::asin(st);
  if (std::abs(st) < 1.0 - 1e-12) {
    phi = std::atan2(r(2, 1), r(2, 2));
    psi = std::atan2(r(1, 0), r(0, 0));
  } else {
    // Gimbal lock: roll and yaw share an axis; report all twist as yaw.
    phi = 0.0;
    psi = std::atan2(-r(0, 1), r(1, 1));
  }
}

double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a <= 0.0) a += 2.0 * M_PI;
  return a - M_PI;
}

TriMesh pyramid_to_mesh(const Pyramid& p) {
  if (!std::isfinite(p.xp) || !std::isfinite(p.yp) || !std::isfinite(p.zp) ||
      !std::isfinite(p.lp) || !std::isfinite(p.wp) || !std::isfinite(p.hp))
    throw std::invalid_argument("pyramid_to_mesh: non-finite parameter");
  if (p.lp <= 0 || p.wp <= 0 || p.hp == 0)
    throw std::invalid_argument("pyramid_to_mesh: degenerate pyramid");

  const double hx = 0.5 * p.lp, hy = 0.5 * p.wp;
  TriMesh m;
  m.vertices = {{p.xp, p.yp, p.zp + p.hp},
                {p.xp - hx, p.yp - hy, p.zp},
                {p.xp + hx, p.yp - hy, p.zp},
                {p.xp + hx, p.yp + hy, p.zp},
                {p.xp - hx, p.yp + hy, p.zp}};
  m.triangles = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}, {1, 3, 2}, {1, 4, 3}};
  return m;
}

std::optional<double> surface_height_at(const Pyramid& p, double x, double y) {
  const double rx = std::abs(x - p.xp) / (0.5 * p.lp);
  const double ry = std::abs(y - p.yp) / (0.5 * p.wp);
  if (rx > 1.0 || ry > 1.0) return std::nullopt;
  return p.zp + p.hp * (1.0 - std::max(rx, ry));
}

double floor_height(std::span<const Pyramid> field, double x, double y) {
  double h = 0.0;
  for (const Pyramid& p : field)
    if (auto s = surface_height_at(p, x, y)) h = std::max(h, *s);
  return h;
}

double ceiling_height(std::span<const Pyramid> field, double x, double y) {
  double h = kCeilingZ;
  for (const Pyramid& p : field)
    if (auto s = surface_height_at(p, x, y)) h = std::min(h, *s);
  return h;
}

namespace {

constexpr double kSatEps = 1e-12;

// Interval-overlap test of triangle verts (box frame) against the box along
// axis l; separated only when the gap exceeds kSatEps.
bool separated_on_axis(const Vec3& l, const Vec3& u0, const Vec3& u1, const Vec3& u2,
                       const Vec3& h) {
  const double n2 = norm_sq(l);
  if (n2 < 1e-20) return false;  // degenerate axis (parallel edges)
  const double inv = 1.0 / std::sqrt(n2);
  const double p0 = dot(l, u0) * inv, p1 = dot(l, u1) * inv, p2 = dot(l, u2) * inv;
  const double r = (h.x * std::abs(l.x) + h.y * std::abs(l.y) + h.z * std::abs(l.z)) * inv;
  const double tmin = std::min({p0, p1, p2}), tmax = std::max({p0, p1, p2});
  return tmin > r + kSatEps || tmax < -r - kSatEps;
}

}  // namespace

bool obb_intersects_mesh(const Obb& b, const TriMesh& m) {
  const Vec3 h = b.half_extents;
  for (const auto& tri : m.triangles) {
    const Vec3 u0 = b.orientation.tmul(m.vertices[tri[0]] - b.center);
    const Vec3 u1 = b.orientation.tmul(m.vertices[tri[1]] - b.center);
    const Vec3 u2 = b.orientation.tmul(m.vertices[tri[2]] - b.center);
    const Vec3 f0 = u1 - u0, f1 = u2 - u1, f2 = u0 - u2;

    const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};
    const Vec3 axes[13] = {ex,
                           ey,
                           ez,
                           cross(f0, f1),  // triangle normal
                           cross(ex, f0),
                           cross(ex, f1),
                           cross(ex, f2),
                           cross(ey, f0),
                           cross(ey, f1),
                           cross(ey, f2),
                           cross(ez, f0),
                           cross(ez, f1),
                           cross(ez, f2)};
    bool sep = false;
    for (const Vec3& l : axes) {
      if (separated_on_axis(l, u0, u1, u2, h)) {
        sep = true;
        break;
      }
    }
    if (!sep) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Closest-point helpers (Ericson, Real-Time Collision Detection).

namespace {

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0 && d2 <= 0) return a;

  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + ab * (d1 / (d1 - d3));

  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + ac * (d2 / (d2 - d6));

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && d4 - d3 >= 0 && d5 - d6 >= 0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return b + (c - b) * w;
  }

  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

double closest_segment_segment(const Vec3& p1, const Vec3& q1, const Vec3& p2, const Vec3& q2,
                               Vec3& c1, Vec3& c2) {
  const Vec3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
  const double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
  double s = 0, t = 0;
  if (a <= 1e-18 && e <= 1e-18) {
    c1 = p1;
    c2 = p2;
    return norm(c1 - c2);
  }
  if (a <= 1e-18) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = dot(d1, r);
    if (e <= 1e-18) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = dot(d1, d2);
      const double denom = a * e - b * b;
      if (denom > 1e-18) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
      t = (b * s + f) / e;
      if (t < 0) {
        t = 0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1) {
        t = 1;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  c1 = p1 + d1 * s;
  c2 = p2 + d2 * t;
  return norm(c1 - c2);
}

bool segment_crosses_triangle(const Vec3& a, const Vec3& b, const Vec3& t0, const Vec3& t1,
                              const Vec3& t2) {
  // Moller-Trumbore with the segment as a clipped ray.
  const Vec3 dir = b - a;
  const Vec3 e1 = t1 - t0, e2 = t2 - t0;
  const Vec3 p = cross(dir, e2);
  const double det = dot(e1, p);
  if (std::abs(det) < 1e-16) return false;
  const double inv = 1.0 / det;
  const Vec3 tv = a - t0;
  const double u = dot(tv, p) * inv;
  if (u < 0 || u > 1) return false;
  const Vec3 q = cross(tv, e1);
  const double v = dot(dir, q) * inv;
  if (v < 0 || u + v > 1) return false;
  const double t = dot(e2, q) * inv;
  return t >= 0 && t <= 1;
}

double segment_triangle_closest(const Vec3& a, const Vec3& b, const Vec3& t0, const Vec3& t1,
                                const Vec3& t2, Vec3& on_seg, Vec3& on_tri) {
  if (segment_crosses_triangle(a, b, t0, t1, t2)) {
    on_seg = on_tri = a;  // crossing: distance zero, points unused
    return 0.0;
  }
  double best = std::numeric_limits<double>::infinity();
  Vec3 s1, s2;
  const Vec3 edges[3][2] = {{t0, t1}, {t1, t2}, {t2, t0}};
  for (const auto& e : edges) {
    Vec3 c1, c2;
    const double d = closest_segment_segment(a, b, e[0], e[1], c1, c2);
    if (d < best) {
      best = d;
      s1 = c1;
      s2 = c2;
    }
  }
  for (const Vec3& p : {a, b}) {
    const Vec3 q = closest_point_on_triangle(p, t0, t1, t2);
    const double d = norm(p - q);
    if (d < best) {
      best = d;
      s1 = p;
      s2 = q;
    }
  }
  on_seg = s1;
  on_tri = s2;
  return best;
}

// Deduplicated outward face planes of a closed convex mesh.
std::vector<Plane> convex_planes(const TriMesh& m) {
  Vec3 centroid{0, 0, 0};
  for (const Vec3& v : m.vertices) centroid += v;
  centroid = centroid * (1.0 / static_cast<double>(m.vertices.size()));

  std::vector<Plane> planes;
  for (const auto& tri : m.triangles) {
    const Vec3& v0 = m.vertices[tri[0]];
    Vec3 n = normalized(cross(m.vertices[tri[1]] - v0, m.vertices[tri[2]] - v0));
    if (norm_sq(n) < 0.5) continue;
    double d = dot(n, v0);
    if (dot(n, centroid) > d) {
      n = -n;
      d = -d;
    }
    bool dup = false;
    for (const Plane& q : planes)
      if (dot(q.n, n) > 1.0 - 1e-9 && std::abs(q.d - d) < 1e-9) {
        dup = true;
        break;
      }
    if (!dup) planes.push_back({n, d});
  }
  return planes;
}

// Maximize f(t) = min_i (c_i + s_i t) over [0, 1]; f is concave piecewise
// linear, so the max sits at an endpoint or a crossing of two pieces.
double max_min_affine(std::span<const double> c, std::span<const double> s, double& t_best) {
  const size_t n = c.size();
  auto eval = [&](double t) {
    double f = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) f = std::min(f, c[i] + s[i] * t);
    return f;
  };
  double best = eval(0.0);
  t_best = 0.0;
  const double f1 = eval(1.0);
  if (f1 > best) {
    best = f1;
    t_best = 1.0;
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      const double ds = s[i] - s[j];
      if (std::abs(ds) < 1e-18) continue;
      const double t = (c[j] - c[i]) / ds;
      if (t <= 0.0 || t >= 1.0) continue;
      const double f = eval(t);
      if (f > best) {
        best = f;
        t_best = t;
      }
    }
  return best;
}

Penetration capsule_vs_planes(const Capsule& cap, std::span<const Plane> planes,
                              std::span<const Vec3> verts,
                              std::span<const std::array<int, 3>> tris, Vec3* point) {
  const size_t n = planes.size();
  std::vector<double> c(n), s(n);
  for (size_t i = 0; i < n; ++i) {
    c[i] = planes[i].d - dot(planes[i].n, cap.a);
    s[i] = -dot(planes[i].n, cap.b - cap.a);
  }
  double t_best = 0;
  const double fmax = max_min_affine(c, s, t_best);

  Penetration pen;
  if (fmax >= 0.0) {
    // Axis enters the solid: depth at the deepest axis point plus radius.
    const Vec3 p = cap.a + (cap.b - cap.a) * t_best;
    double m = std::numeric_limits<double>::infinity();
    size_t active = 0;
    for (size_t i = 0; i < n; ++i) {
      const double mi = planes[i].d - dot(planes[i].n, p);
      if (mi < m) {
        m = mi;
        active = i;
      }
    }
    pen.depth = fmax + cap.radius;
    pen.normal = planes[active].n;
    if (point) *point = p;
    return pen;
  }

  // Axis outside: exact surface distance against the triangles.
  double dmin = std::numeric_limits<double>::infinity();
  Vec3 best_seg, best_tri;
  for (const auto& tri : tris) {
    Vec3 on_seg, on_tri;
    const double d = segment_triangle_closest(cap.a, cap.b, verts[tri[0]], verts[tri[1]],
                                              verts[tri[2]], on_seg, on_tri);
    if (d < dmin) {
      dmin = d;
      best_seg = on_seg;
      best_tri = on_tri;
    }
  }
  if (dmin < cap.radius) {
    pen.depth = cap.radius - dmin;
    const Vec3 out = best_seg - best_tri;
    pen.normal = norm_sq(out) > 1e-24 ? normalized(out) : Vec3{0, 0, 1};
    if (point) *point = best_seg;
  }
  return pen;
}

}  // namespace

double segment_triangle_distance(const Vec3& a, const Vec3& b, const Vec3& t0, const Vec3& t1,
                                 const Vec3& t2) {
  Vec3 s, t;
  return segment_triangle_closest(a, b, t0, t1, t2, s, t);
}

Penetration capsule_mesh_penetration(const Capsule& c, const TriMesh& m) {
  const std::vector<Plane> planes = convex_planes(m);
  return capsule_vs_planes(c, planes, m.vertices, m.triangles, nullptr);
}

PyramidSolid PyramidSolid::from(const Pyramid& p) {
  PyramidSolid s;
  const TriMesh m = pyramid_to_mesh(p);
  const std::vector<Plane> planes = convex_planes(m);
  for (size_t i = 0; i < 5; ++i) s.planes[i] = planes[i];
  s.aabb_min = s.aabb_max = m.vertices[0];
  for (const Vec3& v : m.vertices) {
    s.aabb_min.x = std::min(s.aabb_min.x, v.x);
    s.aabb_min.y = std::min(s.aabb_min.y, v.y);
    s.aabb_min.z = std::min(s.aabb_min.z, v.z);
    s.aabb_max.x = std::max(s.aabb_max.x, v.x);
    s.aabb_max.y = std::max(s.aabb_max.y, v.y);
    s.aabb_max.z = std::max(s.aabb_max.z, v.z);
  }
  for (size_t i = 0; i < 5; ++i) s.verts[i] = m.vertices[i];
  return s;
}

double PyramidSolid::margin(const Vec3& q, int* active_plane) const {
  double m = std::numeric_limits<double>::infinity();
  int active = 0;
  for (int i = 0; i < 5; ++i) {
    const double mi = planes[i].d - dot(planes[i].n, q);
    if (mi < m) {
      m = mi;
      active = i;
    }
  }
  if (active_plane) *active_plane = active;
  return m;
}

Penetration capsule_solid_penetration(const PyramidSolid& s, const Capsule& c, Vec3* point) {
  static constexpr std::array<std::array<int, 3>, 6> kTris = {
      {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}, {1, 3, 2}, {1, 4, 3}}};
  return capsule_vs_planes(c, s.planes, s.verts, kTris, point);
}

Penetration point_solid_penetration(const PyramidSolid& s, const Vec3& q, double radius) {
  int active = 0;
  const double m = s.margin(q, &active);
  Penetration pen;
  if (m + radius > 0.0) {
    pen.depth = m + radius;
    pen.normal = s.planes[active].n;
  }
  return pen;
}

}  // namespace burrow
