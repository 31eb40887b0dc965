#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <string_view>
#include <vector>

namespace ballquad {

struct Ball {
  Eigen::Vector3d center;
  double radius;  // > 0
};

// Axis-aligned box, lo < hi componentwise.
struct Box3 {
  Eigen::Vector3d lo;
  Eigen::Vector3d hi;

  double volume() const {
    const Eigen::Vector3d w = hi - lo;
    return w.x() * w.y() * w.z();
  }
};

// Finite union of closed balls.  The ball order is part of the value: samplers
// and ownership tags refer to balls by index.
class BallUnion {
 public:
  explicit BallUnion(std::vector<Ball> balls);

  const std::vector<Ball>& balls() const { return balls_; }
  const Ball& ball(std::size_t j) const { return balls_[j]; }
  std::size_t size() const { return balls_.size(); }
  double max_radius() const;

 private:
  std::vector<Ball> balls_;
};

// Strict parser for the documented JSON shape
//   {"balls": [{"center": [x, y, z], "radius": r}, ...]}
// Unknown keys, wrong types, non-finite numbers and radius <= 0 are rejected
// with a BubbleParseError naming the offending key (and the line for syntax
// errors).
BallUnion parse_ball_union(std::string_view json_text);

// Tight axis-aligned bounding box: componentwise min/max of center +/- radius.
Box3 bounding_box(const BallUnion& u);

// Closed-ball membership in the union (no tolerance).
bool contains(const BallUnion& u, const Eigen::Vector3d& p);

// For a point p lying on sphere `owner`, decide whether it belongs to the
// boundary of the union: true iff p is not strictly interior to any other
// ball, i.e. |p - C_k| >= r_k - tol for all k != owner.
bool on_union_surface(const BallUnion& u, std::size_t owner,
                      const Eigen::Vector3d& p, double tol);

// Suggested tolerance for on_union_surface: 1e-12 * max radius.
double default_surface_tol(const BallUnion& u);

// Area-preserving parametrization of the sphere of `b` over
// (t, phi) in [-1,1] x [0,2pi):
//   P = C + r (sqrt(1-t^2) cos phi, sqrt(1-t^2) sin phi, t).
// The area element is r^2 dt dphi, independent of (t, phi).
Eigen::Vector3d sphere_map(const Ball& b, double t, double phi);

}  // namespace ballquad
