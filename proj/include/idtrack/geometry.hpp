#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "idtrack/random.hpp"

namespace idtrack {

constexpr double kPi = std::numbers::pi;

constexpr double deg2rad(double deg) noexcept { return deg * (kPi / 180.0); }
constexpr double rad2deg(double rad) noexcept { return rad * (180.0 / kPi); }

// A point on the unit sphere. Azimuth is kept in [-pi, pi), elevation in [-pi/2, pi/2].
struct Direction {
  double azimuth = 0.0;
  double elevation = 0.0;

  Direction() = default;
  Direction(double az, double el);

  static Direction from_degrees(double az_deg, double el_deg);
  static Direction from_unit_vector(const Eigen::Vector3d& v);

  Eigen::Vector3d unit_vector() const;

  friend bool operator==(const Direction&, const Direction&) = default;
};

// Great-circle distance in [0, pi].
double angular_distance(const Direction& a, const Direction& b);
double angular_distance(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

// Uniform on the sphere (area measure).
Direction sample_direction(Rng& rng);
Eigen::Vector3d sample_unit_vector(Rng& rng);

// Rotates `u` by `angle` toward the tangent heading `heading` (radians, measured in
// an orthonormal tangent frame built from `u`).
Eigen::Vector3d rotate_toward(const Eigen::Vector3d& u, double angle, double heading);

// Isotropic perturbation: angle drawn from a folded normal with std `sigma`, heading uniform.
Eigen::Vector3d perturb(const Eigen::Vector3d& u, double sigma, Rng& rng);

// Places `n` directions one at a time by rejection. Each point gets `max_attempts`
// draws; a point that cannot be placed restarts the whole set. After `max_attempts`
// restarts the request is treated as infeasible and FeasibilityExhausted is thrown.
std::vector<Direction> sample_separated_set(std::size_t n, double min_sep, Rng& rng,
                                            std::size_t max_attempts = 1000);

}  // namespace idtrack
