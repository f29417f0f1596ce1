#include "projsys/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace projsys {

namespace {

void require_all_positive(std::initializer_list<double> values, const char* what) {
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) + " parameters must be finite and positive");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Example 2

void require_positive(const Example2Params& p) {
  require_all_positive({p.C, p.A, p.D, p.beta, p.alpha}, "Example 2");
}

SystemSpec example2_system(const Example2Params& p) {
  require_positive(p);
  SystemSpec s;
  s.k = 3;
  s.alpha = {0.0, 0.0, 0.0};
  s.A = {0.0, 0.0, 0.0};
  s.beta = Matrix::from_rows({{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}});
  s.B = Matrix::from_rows({{0.0, p.C, p.A}, {0.0, 0.0, p.D}, {p.beta, 0.0, p.alpha}});
  return s;
}

Example2Limits example2_limits(const Example2Params& p) {
  require_positive(p);
  const double C = p.C, A = p.A, D = p.D, beta = p.beta, alpha = p.alpha;
  const double d = beta * D - A * D - C * alpha;
  const double disc = 4.0 * alpha * D * beta * C;
  const double root = std::sqrt(d * d + disc);
  // s = d + root, rationalized when d < 0 to avoid cancellation.
  const double s = d >= 0.0 ? d + root : disc / (root - d);

  Example2Limits out;
  out.u = s / (2.0 * beta * C);
  out.v = (2.0 * alpha * C + s) / (2.0 * C * D);
  out.y = s / (2.0 * beta * C * D);
  out.z = s / (beta * (2.0 * alpha * C + s));
  out.x = s * s / ((2.0 * beta * C) * beta * (2.0 * alpha * C + s));
  return out;
}

double example2_u_recurrence(const Example2Params& p, double u_n, double u_prev) {
  return (p.beta * u_n + p.alpha) / (p.beta * p.C * u_prev / p.D + p.A + p.C * p.alpha / p.D);
}

// ---------------------------------------------------------------------------
// Example 3

const char* to_string(Example3Case c) {
  switch (c) {
    case Example3Case::Extinction: return "Extinction";
    case Example3Case::Bistable: return "Bistable";
    case Example3Case::DegenerateBoundary: return "DegenerateBoundary";
  }
  return "?";
}

const char* to_string(Example3Basin b) {
  switch (b) {
    case Example3Basin::ToZero: return "ToZero";
    case Example3Basin::AtW1: return "AtW1";
    case Example3Basin::ToW2: return "ToW2";
  }
  return "?";
}

double evaluate(const Cubic& p, double w) { return ((p[0] * w + p[1]) * w + p[2]) * w + p[3]; }

double cauchy_upper_bound(const Cubic& p) {
  double ratio = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) ratio = std::max(ratio, std::abs(p[i] / p[0]));
  return 1.0 + ratio;
}

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

double bisect(const Cubic& p, double lo, double hi) {
  int s_lo = sign(evaluate(p, lo));
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const int s_mid = sign(evaluate(p, mid));
    if (s_mid == 0) return mid;
    if (s_mid == s_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(evaluate(p, lo)) <= std::abs(evaluate(p, hi)) ? lo : hi;
}

}  // namespace

std::vector<double> isolate_positive_roots(const Cubic& p, double upper,
                                           const std::vector<double>& breakpoints,
                                           std::size_t grid_points) {
  if (grid_points < 2) throw std::invalid_argument("root scan needs at least two grid points");
  // Log-spaced nodes down to 1e-300 * upper, so tiny roots still get bracketed.
  const double log_hi = std::log(upper);
  const double log_lo = log_hi + std::log(1e-300);
  std::vector<double> nodes;
  nodes.reserve(grid_points + breakpoints.size());
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(grid_points - 1);
    nodes.push_back(i + 1 == grid_points ? upper : std::exp(log_lo + t * (log_hi - log_lo)));
  }
  for (double b : breakpoints) {
    if (b > nodes.front() && b < upper) nodes.push_back(b);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::vector<double> roots;
  double prev_value = evaluate(p, nodes.front());
  if (prev_value == 0.0) roots.push_back(nodes.front());
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double value = evaluate(p, nodes[i]);
    if (value == 0.0) {
      roots.push_back(nodes[i]);
    } else if (sign(value) * sign(prev_value) < 0) {
      roots.push_back(bisect(p, nodes[i - 1], nodes[i]));
    }
    prev_value = value;
  }
  return roots;
}

double Example3Analysis::scale() const {
  double s = 0.0;
  for (double c : P) s = std::max(s, std::abs(c));
  return s;
}

void require_positive(const Example3Params& p) {
  require_all_positive({p.alpha, p.A1, p.A2}, "Example 3");
}

SystemSpec example3_system(const Example3Params& p) {
  require_positive(p);
  SystemSpec s;
  s.k = 3;
  s.alpha = {0.0, 0.0, 0.0};
  s.A = {0.0, 0.0, 0.0};
  s.beta = Matrix::from_rows({{1.0, 1.0, 0.0}, {1.0, 1.0, 0.0}, {1.0, 1.0, p.alpha}});
  s.B = Matrix::from_rows({{1.0, 1.0, p.A1}, {1.0, 1.0, p.A2}, {1.0, 1.0, 0.0}});
  return s;
}

double scalar_reduced_map_example3(const Example3Params& p, double w) {
  if (!(w >= 0.0)) throw std::invalid_argument("w must be nonnegative");
  return w * w / (p.alpha + w) * (1.0 / (p.A1 + w) + 1.0 / (p.A2 + w));
}

Example3Analysis example3_analyze(const Example3Params& p) {
  require_positive(p);
  const double alpha = p.alpha, A1 = p.A1, A2 = p.A2;
  const double quad = 2.0 - A1 - A2 - alpha;
  const double lin = A1 + A2 - alpha * A1 - alpha * A2 - A1 * A2;

  Example3Analysis out;
  out.params = p;
  out.P = {-1.0, quad, lin, -alpha * A1 * A2};
  out.D = {-3.0, 2.0 * quad, lin};

  const double radicand = 4.0 * quad * quad + 12.0 * lin;
  if (radicand >= 0.0) {
    // Larger root of D(w) = -3w^2 + 2*quad*w + lin.
    out.w_m = (2.0 * quad + std::sqrt(radicand)) / 6.0;
    out.P_at_wm = evaluate(out.P, *out.w_m);
  }

  // Decide which branch of the case split applies before looking at P(w_m).
  std::string bistable_rule;
  if (lin > 0.0) {
    bistable_rule = "bistable condition 3: linear coefficient > 0";
  } else if (lin == 0.0) {
    if (A1 + A2 + alpha >= 2.0) {
      out.regime = Example3Case::Extinction;
      out.rule = "extinction condition 2: linear coefficient = 0 and A1+A2+alpha >= 2";
      return out;
    }
    bistable_rule = "bistable condition 2: linear coefficient = 0 and A1+A2+alpha < 2";
  } else {
    if (2.0 * quad <= std::sqrt(-12.0 * lin)) {
      out.regime = Example3Case::Extinction;
      out.rule =
          "extinction condition 1: linear coefficient < 0 and 2(2-A1-A2-alpha) <= "
          "sqrt(-12*linear coefficient)";
      return out;
    }
    bistable_rule =
        "bistable condition 1: linear coefficient < 0 and 2(2-A1-A2-alpha) > "
        "sqrt(-12*linear coefficient)";
  }

  // Every remaining branch has a nonnegative radicand, so w_m exists.
  const double pm = *out.P_at_wm;
  if (std::abs(pm) < kDegenerateBand * out.scale()) {
    out.regime = Example3Case::DegenerateBoundary;
    out.rule = "P(w_m) = 0 within tolerance: single positive equilibrium";
    return out;
  }
  if (pm < 0.0) {
    out.regime = Example3Case::Extinction;
    out.rule = "P(w_m) <= 0";
    return out;
  }

  const double upper = 1.0 + cauchy_upper_bound(out.P);
  const auto roots = isolate_positive_roots(out.P, upper, {*out.w_m});
  if (roots.size() != 2) {
    out.regime = Example3Case::DegenerateBoundary;
    out.rule = "root isolation found " + std::to_string(roots.size()) +
               " positive roots where two were expected";
    return out;
  }
  out.regime = Example3Case::Bistable;
  out.rule = "P(w_m) > 0 and " + bistable_rule;
  out.roots = std::make_pair(roots[0], roots[1]);
  return out;
}

Example3Basin example3_basin(const Example3Analysis& analysis, double w0) {
  if (!(w0 >= 0.0)) throw std::invalid_argument("w0 must be nonnegative");
  switch (analysis.regime) {
    case Example3Case::DegenerateBoundary:
      throw NotClassifiable("degenerate boundary: " + analysis.rule);
    case Example3Case::Extinction:
      return Example3Basin::ToZero;
    case Example3Case::Bistable:
      break;
  }
  const double w1 = analysis.roots->first;
  if (w0 < w1) return Example3Basin::ToZero;
  if (w0 == w1) return Example3Basin::AtW1;
  return Example3Basin::ToW2;
}

namespace {

Example3Limits limits_at(const Example3Params& p, double w) {
  return {w / (p.A1 + w), w / (p.A2 + w), 1.0 + p.alpha / w};
}

}  // namespace

Example3Limits example3_limits(const Example3Analysis& analysis, double w0) {
  switch (example3_basin(analysis, w0)) {
    case Example3Basin::ToZero: return {0.0, 0.0, std::nullopt};
    case Example3Basin::AtW1: return limits_at(analysis.params, analysis.roots->first);
    case Example3Basin::ToW2: return limits_at(analysis.params, analysis.roots->second);
  }
  return {0.0, 0.0, std::nullopt};
}

double example3_w(std::span<const double> state) {
  if (state.size() != 3) throw std::invalid_argument("Example 3 states have three components");
  return (state[0] + state[1]) / state[2];
}

State example3_state_on_w1(const Example3Analysis& analysis) {
  if (analysis.regime != Example3Case::Bistable) {
    throw NotClassifiable("w1 exists only in the bistable case");
  }
  // Halving is exact, so (x + y)/z reproduces w1 bit for bit.
  const double w1 = analysis.roots->first;
  return {0.5 * w1, 0.5 * w1, 1.0};
}

// ---------------------------------------------------------------------------
// Example 4

void require_positive(const Example4Params& p) {
  require_all_positive({p.A, p.B, p.C, p.D, p.z0}, "Example 4");
}

SystemSpec example4_system(const Example4Params& p) {
  require_positive(p);
  SystemSpec s;
  s.k = 3;
  s.alpha = {1.0, 1.0, 1.0};
  s.A = {0.0, 0.0, 0.0};
  s.beta = Matrix(3, 3, 0.0);
  s.B = Matrix::from_rows({{0.0, p.B, p.A}, {p.D, 0.0, p.C}, {0.0, 0.0, 1.0}});
  return s;
}

Example4Limits example4_limits(const Example4Params& p) {
  require_positive(p);
  const double A = p.A, B = p.B, C = p.C, D = p.D, z0 = p.z0;
  const double root = std::sqrt((D - A * C - B) * (D - A * C - B) + 4.0 * A * D * C);

  Example4Limits out;
  out.u = (D - A * C - B + root) / (2.0 * A * D);
  out.v = 2.0 * A / (A * C + D - B + root);
  out.even = {z0 * (D - A * C - B + root) / (2.0 * A * D),
              z0 * 2.0 * A / (A * C + D - B + root), z0};
  out.odd = {(D - A * C - B + root) / (2.0 * A * D * z0),
             2.0 * A / (z0 * (A * C + D - B + root)), 1.0 / z0};
  return out;
}

double example4_u_recurrence(const Example4Params& p, double u_prev) {
  return (p.C + p.D * u_prev) / (p.A * p.C + p.A * p.D * u_prev + p.B);
}

}  // namespace projsys
