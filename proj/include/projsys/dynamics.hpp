#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "projsys/core.hpp"
#include "projsys/reduce.hpp"

namespace projsys {

struct Breakdown {
  std::size_t step;       ///< index n of the state that could not be produced
  BreakdownCause cause;
  std::size_t component;  ///< 0-based
};

/// A finite trajectory. states[0] is the initial condition; every stored
/// state is finite and strictly positive. Iteration stops at the first
/// breakdown, which is recorded instead of storing a bad state.
struct Orbit {
  std::vector<State> states;
  std::optional<Breakdown> breakdown;

  std::size_t dim() const noexcept { return states.empty() ? 0 : states.front().size(); }
};

/// Throws std::invalid_argument for a non-positive or wrongly sized x0, and
/// ValidationError for an invalid spec.
Orbit iterate(const SystemSpec& spec, std::span<const double> x0, std::size_t n_steps);
Orbit iterate(const ReducedSystem& red, std::span<const double> u0, std::size_t n_steps);

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr std::size_t kDefaultWindow = 10;
inline constexpr std::size_t kDefaultSteps = 10000;
inline constexpr double kDivergenceHigh = 1e150;
inline constexpr double kDivergenceLow = 1e-150;

struct ConvergedPoint {
  State limit;
};

struct ConvergedPeriod2 {
  State even;  ///< limit along even n
  State odd;   ///< limit along odd n
};

struct DivergentComponent {
  std::vector<std::size_t> to_infinity;  ///< 0-based component indices
  std::vector<std::size_t> to_zero;
};

struct Undecided {};

using LimitBehavior = std::variant<ConvergedPoint, ConvergedPeriod2, DivergentComponent, Undecided>;

struct LimitReport {
  LimitBehavior behavior;
  std::size_t steps_used = 0;
  double tolerance = kDefaultTolerance;
};

const char* behavior_name(const LimitBehavior& behavior);

/// Classifies the tail of an orbit.
///
/// ConvergedPoint: the largest relative change between consecutive states
/// over the last `window` steps is below tol. ConvergedPeriod2: the same
/// holds for the even and for the odd subsequence and the two limits differ
/// by more than tol (otherwise the result collapses to ConvergedPoint).
/// DivergentComponent: some component is monotone over the last `window`
/// steps and ends above 1e150 or below 1e-150.
///
/// Orbits shorter than 2*window throw InsufficientData, except orbits that
/// ended in a breakdown: those are only checked for divergence, over as much
/// of the tail as exists.
LimitReport detect_limit(const Orbit& orbit, double tol = kDefaultTolerance,
                         std::size_t window = kDefaultWindow);

struct ConjugacyReport {
  double max_deviation = 0.0;       ///< max relative |project(x_n) - u_n|
  std::size_t steps_compared = 0;   ///< number of n at which both orbits existed
  std::optional<Breakdown> breakdown;
  double tolerance = 0.0;
  bool passed = false;
};

/// Iterates the original system and its reduction in lockstep from x0 and
/// project(x0, pivot), comparing after every step.
ConjugacyReport check_conjugacy(const SystemSpec& spec, std::span<const double> x0,
                                std::size_t pivot, std::size_t n_steps, double tol);

/// Same, against a caller-supplied reduction (whose pivot is used).
ConjugacyReport check_conjugacy(const SystemSpec& spec, const ReducedSystem& red,
                                std::span<const double> x0, std::size_t n_steps, double tol);

/// Writes the orbit as CSV: header "n,x1,...,xk", 17 significant digits,
/// and a trailing "# breakdown at n=..., cause=..." line when applicable.
void write_orbit_csv(std::ostream& os, const Orbit& orbit);

}  // namespace projsys
