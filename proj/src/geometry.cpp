#include "fencing/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fencing {
namespace {

constexpr double kDegenerateLengthSq = 1e-24;

void require_segment(const Vec3& a, const Vec3& b, const char* what) {
  if ((b - a).squaredNorm() <= kDegenerateLengthSq) {
    throw std::invalid_argument(std::string(what) + ": degenerate segment");
  }
}

}  // namespace

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  require_segment(a, b, "point_segment_distance");
  const Vec3 ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (a + t * ab - p).norm();
}

bool segment_sphere_intersects(const Vec3& seg_start, const Vec3& seg_end,
                               const Vec3& center, double radius) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("segment_sphere_intersects: radius must be > 0");
  }
  return point_segment_distance(center, seg_start, seg_end) <= radius;
}

// Clamped closest-point computation for two segments (Ericson, Real-Time
// Collision Detection, 5.1.9). Both segments are required to be
// non-degenerate, which removes the point-point special cases.
SegmentClosestPoints closest_points_segment_segment(const Vec3& a0,
                                                    const Vec3& a1,
                                                    const Vec3& b0,
                                                    const Vec3& b1) {
  require_segment(a0, a1, "segment_segment_distance");
  require_segment(b0, b1, "segment_segment_distance");

  const Vec3 d1 = a1 - a0;
  const Vec3 d2 = b1 - b0;
  const Vec3 r = a0 - b0;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  const double c = d1.dot(r);
  const double b = d1.dot(d2);
  const double denom = a * e - b * b;

  double s = 0.0;
  if (denom > 1e-14 * a * e) {
    s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
  }
  double t = (b * s + f) / e;
  if (t < 0.0) {
    t = 0.0;
    s = std::clamp(-c / a, 0.0, 1.0);
  } else if (t > 1.0) {
    t = 1.0;
    s = std::clamp((b - c) / a, 0.0, 1.0);
  }

  SegmentClosestPoints out;
  out.s = s;
  out.t = t;
  out.on_first = a0 + s * d1;
  out.on_second = b0 + t * d2;
  out.distance = (out.on_first - out.on_second).norm();
  return out;
}

double segment_segment_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0,
                                const Vec3& b1) {
  return closest_points_segment_segment(a0, a1, b0, b1).distance;
}

Vec3 rotate_by_vector(const Vec3& v, const Vec3& rot) {
  const double angle = rot.norm();
  if (angle == 0.0) return v;
  const Vec3 k = rot / angle;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return v * c + k.cross(v) * s + k * k.dot(v) * (1.0 - c);
}

Vec3 rotation_between(const Vec3& from, const Vec3& to) {
  const Vec3 axis = from.cross(to);
  const double sin_angle = axis.norm();
  const double cos_angle = std::clamp(from.dot(to), -1.0, 1.0);
  if (sin_angle < 1e-12) {
    if (cos_angle > 0.0) return Vec3::Zero();
    // Antiparallel: any axis orthogonal to `from` works.
    Vec3 ortho = from.cross(Vec3::UnitX());
    if (ortho.norm() < 1e-6) ortho = from.cross(Vec3::UnitY());
    return ortho.normalized() * M_PI;
  }
  return axis / sin_angle * std::atan2(sin_angle, cos_angle);
}

Vec3 clamp_norm(const Vec3& v, double max_norm) {
  const double n = v.norm();
  if (n > max_norm && n > 0.0) return v * (max_norm / n);
  return v;
}

}  // namespace fencing
