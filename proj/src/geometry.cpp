#include "idtrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Geometry>

#include "idtrack/errors.hpp"

namespace idtrack {

namespace {

double wrap_azimuth(double az) {
  double w = az - 2.0 * kPi * std::floor((az + kPi) / (2.0 * kPi));
  // floor() can land exactly on +pi after rounding.
  if (w >= kPi) w -= 2.0 * kPi;
  return w;
}

}  // namespace

Direction::Direction(double az, double el)
    : azimuth(wrap_azimuth(az)), elevation(std::clamp(el, -kPi / 2.0, kPi / 2.0)) {}

Direction Direction::from_degrees(double az_deg, double el_deg) {
  return {deg2rad(az_deg), deg2rad(el_deg)};
}

Direction Direction::from_unit_vector(const Eigen::Vector3d& v) {
  return {std::atan2(v.y(), v.x()), std::atan2(v.z(), std::hypot(v.x(), v.y()))};
}

Eigen::Vector3d Direction::unit_vector() const {
  const double ce = std::cos(elevation);
  return {ce * std::cos(azimuth), ce * std::sin(azimuth), std::sin(elevation)};
}

double angular_distance(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  // atan2 form agrees with acos(clamp(dot)) but keeps full precision near 0 and pi.
  const double d = std::atan2(a.cross(b).norm(), a.dot(b));
  return std::clamp(d, 0.0, kPi);
}

double angular_distance(const Direction& a, const Direction& b) {
  return angular_distance(a.unit_vector(), b.unit_vector());
}

Eigen::Vector3d sample_unit_vector(Rng& rng) {
  std::uniform_real_distribution<double> z_dist(-1.0, 1.0);
  std::uniform_real_distribution<double> phi_dist(-kPi, kPi);
  const double z = z_dist(rng);
  const double phi = phi_dist(rng);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

Direction sample_direction(Rng& rng) { return Direction::from_unit_vector(sample_unit_vector(rng)); }

Eigen::Vector3d rotate_toward(const Eigen::Vector3d& u, double angle, double heading) {
  // Tangent frame: e1 is the axis least aligned with u, orthogonalised.
  Eigen::Vector3d seed = std::abs(u.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
  const Eigen::Vector3d e1 = (seed - seed.dot(u) * u).normalized();
  const Eigen::Vector3d e2 = u.cross(e1);
  const Eigen::Vector3d t = std::cos(heading) * e1 + std::sin(heading) * e2;
  return (std::cos(angle) * u + std::sin(angle) * t).normalized();
}

Eigen::Vector3d perturb(const Eigen::Vector3d& u, double sigma, Rng& rng) {
  if (sigma <= 0.0) return u;
  std::normal_distribution<double> mag(0.0, sigma);
  std::uniform_real_distribution<double> heading(-kPi, kPi);
  const double angle = std::abs(mag(rng));
  return rotate_toward(u, angle, heading(rng));
}

std::vector<Direction> sample_separated_set(std::size_t n, double min_sep, Rng& rng,
                                            std::size_t max_attempts) {
  if (n == 0) throw InvalidConfig("sample_separated_set: n must be >= 1");
  if (!(min_sep > 0.0 && min_sep <= kPi)) throw InvalidConfig("sample_separated_set: min_sep must be in (0, pi]");
  if (max_attempts == 0) throw InvalidConfig("sample_separated_set: max_attempts must be >= 1");

  std::vector<Eigen::Vector3d> points;
  points.reserve(n);
  for (std::size_t round = 0; round < max_attempts; ++round) {
    points.clear();
    bool failed = false;
    while (points.size() < n && !failed) {
      failed = true;
      for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        const Eigen::Vector3d cand = sample_unit_vector(rng);
        const bool ok = std::all_of(points.begin(), points.end(), [&](const Eigen::Vector3d& p) {
          return angular_distance(p, cand) >= min_sep;
        });
        if (ok) {
          points.push_back(cand);
          failed = false;
          break;
        }
      }
    }
    if (!failed) {
      std::vector<Direction> out;
      out.reserve(n);
      for (const auto& p : points) out.push_back(Direction::from_unit_vector(p));
      // Conversion to (az, el) can shave a few ulps off a pairwise distance; re-check.
      bool still_ok = true;
      for (std::size_t i = 0; i < n && still_ok; ++i)
        for (std::size_t j = i + 1; j < n && still_ok; ++j)
          still_ok = angular_distance(out[i], out[j]) >= min_sep;
      if (still_ok) return out;
    }
  }
  throw FeasibilityExhausted("could not place " + std::to_string(n) + " directions with separation " +
                             std::to_string(rad2deg(min_sep)) + " deg after " + std::to_string(max_attempts) +
                             " rounds");
}

}  // namespace idtrack
