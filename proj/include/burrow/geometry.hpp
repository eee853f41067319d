#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace burrow {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm_sq(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) {
  const double n = norm(v);
  return n > 0 ? v * (1.0 / n) : Vec3{0, 0, 0};
}

/// Row-major 3x3 rotation / linear map.
struct Mat3 {
  std::array<double, 9> a{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return {}; }

  double operator()(int r, int c) const { return a[3 * r + c]; }
  double& operator()(int r, int c) { return a[3 * r + c]; }

  Vec3 operator*(const Vec3& v) const {
    return {a[0] * v.x + a[1] * v.y + a[2] * v.z,
            a[3] * v.x + a[4] * v.y + a[5] * v.z,
            a[6] * v.x + a[7] * v.y + a[8] * v.z};
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        r(i, j) = (*this)(i, 0) * o(0, j) + (*this)(i, 1) * o(1, j) + (*this)(i, 2) * o(2, j);
    return r;
  }
  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
  }
  Vec3 col(int c) const { return {a[c], a[3 + c], a[6 + c]}; }
  Vec3 row(int r) const { return {a[3 * r], a[3 * r + 1], a[3 * r + 2]}; }

  /// Rotate a vector by the transpose (world -> body for a body-to-world matrix).
  Vec3 tmul(const Vec3& v) const {
    return {a[0] * v.x + a[3] * v.y + a[6] * v.z,
            a[1] * v.x + a[4] * v.y + a[7] * v.z,
            a[2] * v.x + a[5] * v.y + a[8] * v.z};
  }
};

Mat3 rot_x(double a);
Mat3 rot_y(double a);
Mat3 rot_z(double a);

/// Body-to-world rotation from intrinsic yaw-pitch-roll (Z, then Y, then X).
/// Positive pitch raises the nose: R = Rz(psi) * Ry(-theta) * Rx(phi).
/// Body-frame gravity R^T * (0,0,-1) is then (-sin(theta), 0, -cos(theta)) for
/// a pure pitch, i.e. (-1, 0, 0) at pitch +pi/2, and is yaw-invariant.
Mat3 rotation_from_angles(double phi, double theta, double psi);

/// Inverse of rotation_from_angles; pitch is clamped to [-pi/2, pi/2] and the
/// roll/yaw split at the gimbal singularity picks roll = 0.
void angles_from_rotation(const Mat3& r, double& phi, double& theta, double& psi);

/// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

/// 6-DoF pose: world xy, base height z, roll/pitch/yaw.
struct Pose6 {
  double x = 0, y = 0, z = 0;
  double phi = 0, theta = 0, psi = 0;

  Vec3 position() const { return {x, y, z}; }
  Mat3 rotation() const { return rotation_from_angles(phi, theta, psi); }
};

/// Axis-aligned rectangular pyramid: base centered at (xp, yp, zp) with
/// extents lp (x) by wp (y), apex at zp + hp.  hp < 0 hangs the tip below the
/// base (ceiling obstacles).
struct Pyramid {
  double xp = 0, yp = 0, zp = 0;
  double lp = 0, wp = 0;
  double hp = 0;
};

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
};

struct Obb {
  Vec3 center;
  Mat3 orientation;  // body-to-world
  Vec3 half_extents;

  static Obb from_pose(const Pose6& pose, const Vec3& half_extents) {
    return {pose.position(), pose.rotation(), half_extents};
  }
};

struct Capsule {
  Vec3 a, b;
  double radius = 0;
};

struct Penetration {
  double depth = 0;
  Vec3 normal{0, 0, 1};  // outward from the obstacle (push-out direction)
};

/// 5-vertex, 6-triangle closed mesh (4 lateral faces + 2 base triangles).
TriMesh pyramid_to_mesh(const Pyramid& p);

/// Height of the lateral surface over (x, y); absent outside the closed base
/// rectangle.  Equals zp on the rectangle boundary and zp + hp at the apex.
std::optional<double> surface_height_at(const Pyramid& p, double x, double y);

/// Pointwise max of the ground plane z = 0 and every pyramid surface.
double floor_height(std::span<const Pyramid> field, double x, double y);

/// Pointwise min of the ceiling plane z = 0.5 and every pyramid surface.
double ceiling_height(std::span<const Pyramid> field, double x, double y);

inline constexpr double kCeilingZ = 0.5;

/// Separating-axis test, 13 axes per triangle; touching counts as intersecting.
bool obb_intersects_mesh(const Obb& b, const TriMesh& m);

/// Deepest capsule penetration into the solid bounded by a closed convex mesh.
/// Depth is measured at the capsule axis plus the radius; zero when disjoint.
Penetration capsule_mesh_penetration(const Capsule& c, const TriMesh& m);

// ---------------------------------------------------------------------------
// Convex-solid fast path used by the contact loop.

struct Plane {
  Vec3 n;     // outward unit normal
  double d;   // n . p <= d inside
};

struct PyramidSolid {
  std::array<Plane, 5> planes;  // 4 lateral + base
  std::array<Vec3, 5> verts;    // apex + 4 base corners (distance fallback)
  Vec3 aabb_min, aabb_max;

  static PyramidSolid from(const Pyramid& p);

  /// Signed margin: >= 0 inside (distance to the nearest face plane), < 0 the
  /// largest plane violation (not the true outside distance near corners).
  double margin(const Vec3& q, int* active_plane = nullptr) const;
};

/// Deepest axis point of the segment inside the solid (exact; the margin is
/// piecewise-linear concave along the segment).  Returns margin + radius as
/// depth when the axis enters the solid, else falls back to surface distance.
Penetration capsule_solid_penetration(const PyramidSolid& s, const Capsule& c,
                                      Vec3* point = nullptr);

/// Point-vs-solid contact (spheres, box corners).
Penetration point_solid_penetration(const PyramidSolid& s, const Vec3& q, double radius);

/// Exact distance between a segment and a triangle (zero when they cross).
double segment_triangle_distance(const Vec3& a, const Vec3& b, const Vec3& t0, const Vec3& t1,
                                 const Vec3& t2);

}  // namespace burrow
