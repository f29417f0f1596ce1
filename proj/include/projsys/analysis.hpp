#pragma once

#include <array>
#include <span>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "projsys/core.hpp"

namespace projsys {

// ---------------------------------------------------------------------------
// Example 2: x' = x/(C y + A z), y' = x/(D z), z' = x/(beta x + alpha z).

struct Example2Params {
  double C;
  double A;
  double D;
  double beta;
  double alpha;
};

struct Example2Limits {
  double x;
  double y;
  double z;
  double u;  ///< limit of x/z
  double v;  ///< limit of y/z
};

/// Throws std::invalid_argument unless every parameter is positive.
void require_positive(const Example2Params& p);
SystemSpec example2_system(const Example2Params& p);
/// Closed-form limits, evaluated in unsimplified form.
Example2Limits example2_limits(const Example2Params& p);
/// The second-order relation u_{n+1} = (beta u_n + alpha)/(beta C u_{n-1}/D + A + C alpha/D).
double example2_u_recurrence(const Example2Params& p, double u_n, double u_prev);

// ---------------------------------------------------------------------------
// Example 3: x' = (x+y)/(A1 z + x + y), y' = (x+y)/(A2 z + x + y),
//            z' = (alpha z + x + y)/(x + y).
// The ratio sum w = (x+y)/z obeys the scalar map
//   f(w) = w^2/(alpha + w) * (1/(A1 + w) + 1/(A2 + w)).

struct Example3Params {
  double alpha;
  double A1;
  double A2;
};

enum class Example3Case { Extinction, Bistable, DegenerateBoundary };
const char* to_string(Example3Case c);

enum class Example3Basin { ToZero, AtW1, ToW2 };
const char* to_string(Example3Basin b);

/// Coefficients of a cubic, highest degree first.
using Cubic = std::array<double, 4>;

double evaluate(const Cubic& p, double w);

/// Positive roots of p on (0, upper], found by a sign scan over a log grid of
/// `grid_points` nodes (plus any extra breakpoints) followed by bisection to
/// full double precision.
std::vector<double> isolate_positive_roots(const Cubic& p, double upper,
                                           const std::vector<double>& breakpoints = {},
                                           std::size_t grid_points = 10000);

/// 1 + Cauchy bound: every root of p has modulus below this.
double cauchy_upper_bound(const Cubic& p);

struct Example3Analysis {
  Example3Params params;
  Cubic P;                        ///< equilibrium cubic
  std::array<double, 3> D;        ///< P', highest degree first
  std::optional<double> w_m;      ///< positive critical point of P when it exists
  std::optional<double> P_at_wm;
  Example3Case regime = Example3Case::Extinction;
  std::string rule;               ///< which condition decided the regime
  std::optional<std::pair<double, double>> roots;  ///< (w1, w2), Bistable only

  double scale() const;           ///< max |P coefficient|
};

inline constexpr double kDegenerateBand = 1e-12;

void require_positive(const Example3Params& p);
SystemSpec example3_system(const Example3Params& p);
double scalar_reduced_map_example3(const Example3Params& p, double w);
Example3Analysis example3_analyze(const Example3Params& p);

/// Membership uses exact comparison against w1. Throws NotClassifiable for
/// a DegenerateBoundary analysis.
Example3Basin example3_basin(const Example3Analysis& analysis, double w0);

/// (x, y, z) limits; z is empty when z_n grows without bound.
struct Example3Limits {
  double x;
  double y;
  std::optional<double> z;
};

Example3Limits example3_limits(const Example3Analysis& analysis, double w0);

/// w = (x + y)/z for a state of the Example 3 system.
double example3_w(std::span<const double> state);

/// An initial state whose w is exactly w1; for probing the repelling boundary.
State example3_state_on_w1(const Example3Analysis& analysis);

// ---------------------------------------------------------------------------
// Example 4: x' = 1/(A z + B y), y' = 1/(C z + D x), z' = 1/z.

struct Example4Params {
  double A;
  double B;
  double C;
  double D;
  double z0;
};

struct Example4Limits {
  State even;  ///< (x_{2n}, y_{2n}, z_{2n})
  State odd;   ///< (x_{2n+1}, y_{2n+1}, z_{2n+1})
  double u;    ///< limit of x/z
  double v;    ///< limit of y/z
};

void require_positive(const Example4Params& p);
SystemSpec example4_system(const Example4Params& p);
Example4Limits example4_limits(const Example4Params& p);
/// u_{n+1} = (C + D u_{n-1})/(A C + A D u_{n-1} + B).
double example4_u_recurrence(const Example4Params& p, double u_prev);

}  // namespace projsys
