#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "projsys/core.hpp"

namespace projsys {

/// c + sum_i coeffs[i] * u[i] over the k-1 ratio coordinates.
struct AffineForm {
  double c = 0.0;
  Vector coeffs;

  static AffineForm constant(double c, std::size_t dim) { return {c, Vector(dim, 0.0)}; }

  double operator()(std::span<const double> u) const;

  friend bool operator==(const AffineForm&, const AffineForm&) = default;
};

enum class ReducedKind { Homogeneous, Linear, Hyperbolic };

const char* to_string(ReducedKind kind);
std::optional<ReducedKind> reduced_kind_from_string(const std::string& name);

/// One coordinate of a reduced map: (num_a * num_b) / (den_a * den_b).
/// Linear and hyperbolic reductions carry num_b = den_b = 1.
struct ReducedComponent {
  AffineForm num_a;
  AffineForm num_b;
  AffineForm den_a;
  AffineForm den_b;

  friend bool operator==(const ReducedComponent&, const ReducedComponent&) = default;
};

/// The (k-1)-dimensional map satisfied by the ratios u_i = x_i / x_pivot.
struct ReducedSystem {
  ReducedKind kind = ReducedKind::Homogeneous;
  std::size_t pivot = 1;  ///< 1-based index of the dividing variable
  std::vector<ReducedComponent> components;

  std::size_t dim() const noexcept { return components.size(); }
  /// Dimension of the original system.
  std::size_t original_dim() const noexcept { return components.size() + 1; }

  friend bool operator==(const ReducedSystem&, const ReducedSystem&) = default;
};

/// Divides through by x_pivot (1-based). Throws DimensionTooSmall for k = 1,
/// NotProjective when classify() finds none of the three patterns and
/// std::out_of_range for a pivot outside 1..k.
ReducedSystem reduce(const SystemSpec& spec, std::size_t pivot);

/// Default pivot is the last variable.
inline ReducedSystem reduce(const SystemSpec& spec) { return reduce(spec, spec.k); }

/// Throws OrbitBreakdown when a denominator product underflows.
Vector eval_reduced(const ReducedSystem& red, std::span<const double> u);

std::optional<StepFailure> eval_reduced_into(const ReducedSystem& red,
                                             std::span<const double> u, Vector& out);

/// (x_i / x_pivot) for i != pivot in ascending order; pivot is 1-based.
Vector project(std::span<const double> x, std::size_t pivot);

/// Renders "u1' = (c + a1*u1 + ...)(...) / (...)(...)", one line per
/// component. Zero coefficients are omitted; unit factors of the linear and
/// hyperbolic kinds are not printed.
std::string to_string(const ReducedSystem& red);

/// Linear lift of the scalar Riccati map x' = (alpha + beta x)/(A + B x):
/// y' = alpha z + beta y, z' = A z + B y with y_0 = x_0, z_0 = 1, so that
/// y_n / z_n = x_n along the orbit.
struct RiccatiLift {
  double alpha;
  double beta;
  double A;
  double B;
  double y0;
  double z0;

  std::pair<double, double> step(double y, double z) const {
    return {alpha * z + beta * y, A * z + B * y};
  }

  /// Pairs (y_n, z_n) for n = 0..n_steps; stops early once a value leaves the
  /// normal floating-point range.
  std::vector<std::pair<double, double>> trajectory(std::size_t n_steps) const;

  /// y_n / z_n for n = 0..n_steps.
  Vector ratios(std::size_t n_steps) const;
};

/// Throws DegenerateRiccati when (A+B)(alpha+beta) == 0, a parameter is
/// negative, or x0 is not positive.
RiccatiLift lift_riccati(double alpha, double beta, double A, double B, double x0);

}  // namespace projsys
