#pragma once

#include "fencing/common.hpp"

namespace fencing {

/// Distance from point `p` to the closed segment [a, b]. Throws
/// std::invalid_argument when the segment is degenerate.
double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b);

/// True iff the closed segment [seg_start, seg_end] comes within `radius` of
/// `center` (boundary inclusive).
bool segment_sphere_intersects(const Vec3& seg_start, const Vec3& seg_end,
                               const Vec3& center, double radius);

/// Closest points between two closed segments.
struct SegmentClosestPoints {
  double distance = 0.0;
  double s = 0.0;  // parameter along the first segment
  double t = 0.0;  // parameter along the second segment
  Vec3 on_first = Vec3::Zero();
  Vec3 on_second = Vec3::Zero();
};

SegmentClosestPoints closest_points_segment_segment(const Vec3& a0,
                                                    const Vec3& a1,
                                                    const Vec3& b0,
                                                    const Vec3& b1);

double segment_segment_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0,
                                const Vec3& b1);

/// Rotates `v` by the rotation vector `rot` (axis * angle, radians).
Vec3 rotate_by_vector(const Vec3& v, const Vec3& rot);

/// Rotation vector taking unit vector `from` onto unit vector `to` along the
/// shortest arc.
Vec3 rotation_between(const Vec3& from, const Vec3& to);

/// Scales `v` down so that its norm does not exceed `max_norm`.
Vec3 clamp_norm(const Vec3& v, double max_norm);

}  // namespace fencing
