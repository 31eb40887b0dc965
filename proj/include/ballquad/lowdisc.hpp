#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "ballquad/geometry.hpp"

namespace ballquad {

// Owner tag used for volume samples (no generating sphere).
inline constexpr int kVolumeOwner = -1;

// A QMC sample of a volume or surface with per-point weights.
// Invariants kept by the samplers:
//   - points/weights/owner have equal length M >= 1, all weights > 0,
//   - points produced by one owner share the same weight,
//   - weight_sum() == measure_estimate up to ~1e-12 relative,
//   - domain_box is the bounding box the sample was generated from.
struct WeightedPointSet {
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;
  std::vector<int> owner;
  std::uint64_t total_generated = 0;  // raw count before the inside/surface filter
  double measure_estimate = 0.0;
  Box3 domain_box{};

  std::size_t size() const { return points.size(); }
  // Compensated sum of all weights.
  double weight_sum() const;
};

// Van der Corput radical inverse of `index` in base `base` (base >= 2,
// index >= 1): digit-reverse the base-b expansion across the radix point.
double radical_inverse(unsigned base, std::uint64_t index);

// One Halton point for the given coprime bases; out[k] = radical inverse in
// bases[k].  The sequence starts at index 1 (no skip, no scramble).
void halton_point(std::uint64_t index, std::span<const unsigned> bases,
                  std::span<double> out);

// Volume sample: m0 Halton points (bases 2,3,5) mapped affinely onto the
// bounding box, keeping those inside the union.  Every retained point gets
// weight vol(box)/m0; measure_estimate = retained * vol(box)/m0.
// Throws ZeroRetained if nothing lands inside.
WeightedPointSet sample_volume(const BallUnion& u, std::uint64_t m0);

// Surface sample: per sphere, m0_per_sphere Halton points (bases 2,3) on
// [-1,1] x [0,2pi) pushed through sphere_map, kept iff not strictly interior
// to another ball (tolerance 1e-12 * max radius).  Retained lists are merged
// round-robin across spheres in ball order, skipping exhausted spheres, so a
// prefix of the output covers all spheres evenly.  Points of sphere j weigh
// 4 pi r_j^2 / m0_per_sphere.
WeightedPointSet sample_surface(const BallUnion& u,
                                std::uint64_t m0_per_sphere);

}  // namespace ballquad
