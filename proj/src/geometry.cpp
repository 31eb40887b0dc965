#include "ballquad/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ballquad/errors.hpp"

namespace ballquad {

namespace {

using nlohmann::json;

// Translate a byte offset reported by the JSON parser into line:column.
std::pair<std::size_t, std::size_t> line_column(std::string_view text,
                                                std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double require_finite_number(const json& v, const std::string& where) {
  if (!v.is_number()) {
    throw BubbleParseError(where + ": expected a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    throw BubbleParseError(where + ": number must be finite");
  }
  return x;
}

Ball parse_ball(const json& v, std::size_t idx) {
  const std::string where = "balls[" + std::to_string(idx) + "]";
  if (!v.is_object()) {
    throw BubbleParseError(where + ": expected an object");
  }
  for (const auto& item : v.items()) {
    if (item.key() != "center" && item.key() != "radius") {
      throw BubbleParseError(where + ": unknown key \"" + item.key() + "\"");
    }
  }
  if (!v.contains("center")) {
    throw BubbleParseError(where + ": missing key \"center\"");
  }
  if (!v.contains("radius")) {
    throw BubbleParseError(where + ": missing key \"radius\"");
  }
  const json& c = v["center"];
  if (!c.is_array() || c.size() != 3) {
    throw BubbleParseError(where + ".center: expected an array of 3 numbers");
  }
  Ball b;
  for (int k = 0; k < 3; ++k) {
    b.center[k] = require_finite_number(
        c[static_cast<std::size_t>(k)],
        where + ".center[" + std::to_string(k) + "]");
  }
  b.radius = require_finite_number(v["radius"], where + ".radius");
  if (b.radius <= 0.0) {
    throw BubbleParseError(where + ".radius: must be > 0");
  }
  return b;
}

}  // namespace

BallUnion::BallUnion(std::vector<Ball> balls) : balls_(std::move(balls)) {
  if (balls_.empty()) {
    throw std::invalid_argument("BallUnion: need at least one ball");
  }
  for (std::size_t j = 0; j < balls_.size(); ++j) {
    if (!(balls_[j].radius > 0.0) || !std::isfinite(balls_[j].radius) ||
        !balls_[j].center.allFinite()) {
      throw std::invalid_argument("BallUnion: ball " + std::to_string(j) +
                                  " has a non-finite center or radius <= 0");
    }
  }
}

double BallUnion::max_radius() const {
  double r = 0.0;
  for (const Ball& b : balls_) r = std::max(r, b.radius);
  return r;
}

BallUnion parse_ball_union(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_column(json_text, e.byte > 0 ? e.byte - 1 : 0);
    throw BubbleParseError("line " + std::to_string(line) + ", column " +
                           std::to_string(col) + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw BubbleParseError("top level: expected an object");
  }
  for (const auto& item : doc.items()) {
    if (item.key() != "balls") {
      throw BubbleParseError("top level: unknown key \"" + item.key() + "\"");
    }
  }
  if (!doc.contains("balls")) {
    throw BubbleParseError("top level: missing key \"balls\"");
  }
  const json& arr = doc["balls"];
  if (!arr.is_array() || arr.empty()) {
    throw BubbleParseError("balls: expected a non-empty array");
  }
  std::vector<Ball> balls;
  balls.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    balls.push_back(parse_ball(arr[i], i));
  }
  return BallUnion(std::move(balls));
}

Box3 bounding_box(const BallUnion& u) {
  Box3 box;
  box.lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  box.hi = -box.lo;
  for (const Ball& b : u.balls()) {
    box.lo = box.lo.cwiseMin((b.center.array() - b.radius).matrix());
    box.hi = box.hi.cwiseMax((b.center.array() + b.radius).matrix());
  }
  return box;
}

bool contains(const BallUnion& u, const Eigen::Vector3d& p) {
  for (const Ball& b : u.balls()) {
    if ((p - b.center).squaredNorm() <= b.radius * b.radius) return true;
  }
  return false;
}

bool on_union_surface(const BallUnion& u, std::size_t owner,
                      const Eigen::Vector3d& p, double tol) {
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (k == owner) continue;
    const Ball& b = u.ball(k);
    if ((p - b.center).norm() < b.radius - tol) return false;
  }
  return true;
}

double default_surface_tol(const BallUnion& u) {
  return 1e-12 * u.max_radius();
}

Eigen::Vector3d sphere_map(const Ball& b, double t, double phi) {
  const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
  return b.center +
         b.radius * Eigen::Vector3d(s * std::cos(phi), s * std::sin(phi), t);
}

}  // namespace ballquad
