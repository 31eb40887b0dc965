#include "ballquad/lowdisc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ballquad/errors.hpp"
#include "ballquad/summation.hpp"

namespace ballquad {

double WeightedPointSet::weight_sum() const {
  KahanSum acc;
  for (double w : weights) acc.add(w);
  return acc.value();
}

double radical_inverse(unsigned base, std::uint64_t index) {
  if (base < 2) throw std::invalid_argument("radical_inverse: base must be >= 2");
  if (index < 1) throw std::invalid_argument("radical_inverse: index must be >= 1");
  const double inv_base = 1.0 / static_cast<double>(base);
  double result = 0.0;
  double scale = inv_base;
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale *= inv_base;
  }
  return result;
}

void halton_point(std::uint64_t index, std::span<const unsigned> bases,
                  std::span<double> out) {
  if (out.size() != bases.size()) {
    throw std::invalid_argument("halton_point: output size != base count");
  }
  for (std::size_t k = 0; k < bases.size(); ++k) {
    out[k] = radical_inverse(bases[k], index);
  }
}

WeightedPointSet sample_volume(const BallUnion& u, std::uint64_t m0) {
  if (m0 < 1) throw std::invalid_argument("sample_volume: m0 must be >= 1");
  const Box3 box = bounding_box(u);
  const Eigen::Vector3d width = box.hi - box.lo;
  const double w = box.volume() / static_cast<double>(m0);

  static constexpr unsigned kBases[3] = {2, 3, 5};
  WeightedPointSet out;
  out.total_generated = m0;
  out.domain_box = box;
  double h[3];
  for (std::uint64_t i = 1; i <= m0; ++i) {
    halton_point(i, kBases, h);
    const Eigen::Vector3d p = box.lo + width.cwiseProduct(Eigen::Vector3d(h[0], h[1], h[2]));
    if (contains(u, p)) {
      out.points.push_back(p);
      out.weights.push_back(w);
      out.owner.push_back(kVolumeOwner);
    }
  }
  if (out.points.empty()) {
    throw ZeroRetained("sample_volume: no Halton point fell inside the union");
  }
  out.measure_estimate = w * static_cast<double>(out.points.size());
  return out;
}

WeightedPointSet sample_surface(const BallUnion& u,
                                std::uint64_t m0_per_sphere) {
  if (m0_per_sphere < 1) {
    throw std::invalid_argument("sample_surface: m0_per_sphere must be >= 1");
  }
  const double tol = default_surface_tol(u);
  const std::size_t s = u.size();

  // Every sphere reuses the same 2D Halton sequence on [-1,1] x [0,2pi); a
  // point survives unless it dips strictly inside some other ball.
  static constexpr unsigned kBases[2] = {2, 3};
  std::vector<std::vector<Eigen::Vector3d>> kept(s);
  std::vector<double> sphere_weight(s);
  double h[2];
  for (std::size_t j = 0; j < s; ++j) {
    const Ball& b = u.ball(j);
    sphere_weight[j] = 4.0 * std::numbers::pi * b.radius * b.radius /
                       static_cast<double>(m0_per_sphere);
    for (std::uint64_t i = 1; i <= m0_per_sphere; ++i) {
      halton_point(i, kBases, h);
      const double t = -1.0 + 2.0 * h[0];
      const double phi = 2.0 * std::numbers::pi * h[1];
      const Eigen::Vector3d p = sphere_map(b, t, phi);
      if (on_union_surface(u, j, p, tol)) kept[j].push_back(p);
    }
  }

  WeightedPointSet out;
  out.total_generated = m0_per_sphere * static_cast<std::uint64_t>(s);
  out.domain_box = bounding_box(u);

  // Round-robin merge in ball order, skipping spheres that ran out.
  std::size_t total = 0;
  for (const auto& list : kept) total += list.size();
  if (total == 0) {
    throw ZeroRetained("sample_surface: every generated point was occluded");
  }
  out.points.reserve(total);
  out.weights.reserve(total);
  out.owner.reserve(total);
  for (std::size_t round = 0; out.points.size() < total; ++round) {
    for (std::size_t j = 0; j < s; ++j) {
      if (round < kept[j].size()) {
        out.points.push_back(kept[j][round]);
        out.weights.push_back(sphere_weight[j]);
        out.owner.push_back(static_cast<int>(j));
      }
    }
  }

  KahanSum measure;
  for (std::size_t j = 0; j < s; ++j) {
    measure.add(sphere_weight[j] * static_cast<double>(kept[j].size()));
  }
  out.measure_estimate = measure.value();
  return out;
}

}  // namespace ballquad
