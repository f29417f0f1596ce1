#include "projsys/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace projsys {

namespace {

void require_positive_state(std::span<const double> x, std::size_t dim) {
  if (x.size() != dim) {
    throw std::invalid_argument("initial condition has " + std::to_string(x.size()) +
                                " components, expected " + std::to_string(dim));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !std::isfinite(x[i])) {
      throw std::invalid_argument("initial condition component " + std::to_string(i + 1) +
                                  " must be finite and positive");
    }
  }
}

template <typename StepFn>
Orbit run_orbit(std::span<const double> x0, std::size_t n_steps, StepFn&& step_fn) {
  Orbit orbit;
  orbit.states.reserve(n_steps + 1);
  orbit.states.emplace_back(x0.begin(), x0.end());
  State next;
  for (std::size_t n = 0; n < n_steps; ++n) {
    if (auto failure = step_fn(orbit.states.back(), next)) {
      orbit.breakdown = Breakdown{n + 1, failure->cause, failure->component};
      break;
    }
    orbit.states.push_back(next);
  }
  return orbit;
}

}  // namespace

Orbit iterate(const SystemSpec& spec, std::span<const double> x0, std::size_t n_steps) {
  require_valid(spec);
  require_positive_state(x0, spec.k);
  return run_orbit(x0, n_steps,
                   [&](const State& x, State& out) { return step_into(spec, x, out); });
}

Orbit iterate(const ReducedSystem& red, std::span<const double> u0, std::size_t n_steps) {
  require_positive_state(u0, red.dim());
  return run_orbit(u0, n_steps,
                   [&](const State& u, State& out) { return eval_reduced_into(red, u, out); });
}

const char* behavior_name(const LimitBehavior& behavior) {
  struct Visitor {
    const char* operator()(const ConvergedPoint&) const { return "ConvergedPoint"; }
    const char* operator()(const ConvergedPeriod2&) const { return "ConvergedPeriod2"; }
    const char* operator()(const DivergentComponent&) const { return "DivergentComponent"; }
    const char* operator()(const Undecided&) const { return "Undecided"; }
  };
  return std::visit(Visitor{}, behavior);
}

namespace {

double max_relative_change(const State& a, const State& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, relative_difference(a[i], b[i]));
  return worst;
}

// Largest relative change between states[n - lag] and states[n] over the last
// `count` admissible n.
double tail_change(const std::vector<State>& states, std::size_t lag, std::size_t count) {
  double worst = 0.0;
  const std::size_t last = states.size() - 1;
  for (std::size_t c = 0; c < count; ++c) {
    const std::size_t n = last - c;
    worst = std::max(worst, max_relative_change(states[n - lag], states[n]));
  }
  return worst;
}

std::optional<DivergentComponent> detect_divergence(const std::vector<State>& states,
                                                    std::size_t window) {
  if (states.size() < 2) return std::nullopt;
  const std::size_t span_len = std::min(window + 1, states.size());
  const std::size_t first = states.size() - span_len;
  DivergentComponent result;
  for (std::size_t i = 0; i < states.front().size(); ++i) {
    bool increasing = true;
    bool decreasing = true;
    for (std::size_t n = first + 1; n < states.size(); ++n) {
      increasing = increasing && states[n][i] > states[n - 1][i];
      decreasing = decreasing && states[n][i] < states[n - 1][i];
    }
    const double last = states.back()[i];
    if (increasing && last > kDivergenceHigh) result.to_infinity.push_back(i);
    if (decreasing && last < kDivergenceLow) result.to_zero.push_back(i);
  }
  if (result.to_infinity.empty() && result.to_zero.empty()) return std::nullopt;
  return result;
}

}  // namespace

LimitReport detect_limit(const Orbit& orbit, double tol, std::size_t window) {
  if (window == 0) throw std::invalid_argument("window must be positive");
  const auto& states = orbit.states;
  LimitReport report{Undecided{}, states.empty() ? 0 : states.size() - 1, tol};

  if (states.size() < 2 * window) {
    if (!orbit.breakdown) {
      throw InsufficientData("orbit has " + std::to_string(states.size()) +
                             " states, need at least " + std::to_string(2 * window));
    }
    if (auto divergent = detect_divergence(states, window)) report.behavior = *divergent;
    return report;
  }

  if (tail_change(states, 1, window) < tol) {
    report.behavior = ConvergedPoint{states.back()};
    return report;
  }

  // Each parity gets `window` comparisons when the orbit is long enough.
  const std::size_t period2_pairs = std::min(2 * window, states.size() - 2);
  if (tail_change(states, 2, period2_pairs) < tol) {
    const std::size_t last = states.size() - 1;
    const State& at_last = states[last];
    const State& at_prev = states[last - 1];
    const State& even = (last % 2 == 0) ? at_last : at_prev;
    const State& odd = (last % 2 == 0) ? at_prev : at_last;
    if (max_relative_change(even, odd) > tol) {
      report.behavior = ConvergedPeriod2{even, odd};
    } else {
      report.behavior = ConvergedPoint{at_last};
    }
    return report;
  }

  if (auto divergent = detect_divergence(states, window)) report.behavior = *divergent;
  return report;
}

ConjugacyReport check_conjugacy(const SystemSpec& spec, const ReducedSystem& red,
                                std::span<const double> x0, std::size_t n_steps, double tol) {
  require_valid(spec);
  require_positive_state(x0, spec.k);
  if (red.original_dim() != spec.k) {
    throw std::invalid_argument("reduced system dimension does not match the original system");
  }
  ConjugacyReport report;
  report.tolerance = tol;

  State x(x0.begin(), x0.end());
  Vector u = project(x, red.pivot);
  State x_next;
  Vector u_next;
  for (std::size_t n = 0;; ++n) {
    const Vector projected = project(x, red.pivot);
    report.max_deviation = std::max(report.max_deviation, max_relative_change(projected, u));
    report.steps_compared = n + 1;
    if (n == n_steps) break;
    if (auto failure = step_into(spec, x, x_next)) {
      report.breakdown = Breakdown{n + 1, failure->cause, failure->component};
      break;
    }
    if (auto failure = eval_reduced_into(red, u, u_next)) {
      report.breakdown = Breakdown{n + 1, failure->cause, failure->component};
      break;
    }
    std::swap(x, x_next);
    std::swap(u, u_next);
  }
  report.passed = report.max_deviation < tol;
  return report;
}

ConjugacyReport check_conjugacy(const SystemSpec& spec, std::span<const double> x0,
                                std::size_t pivot, std::size_t n_steps, double tol) {
  return check_conjugacy(spec, reduce(spec, pivot), x0, n_steps, tol);
}

void write_orbit_csv(std::ostream& os, const Orbit& orbit) {
  os << 'n';
  for (std::size_t i = 0; i < orbit.dim(); ++i) os << ",x" << (i + 1);
  os << '\n';
  char buf[32];
  for (std::size_t n = 0; n < orbit.states.size(); ++n) {
    os << n;
    for (double v : orbit.states[n]) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << ',' << buf;
    }
    os << '\n';
  }
  if (orbit.breakdown) {
    os << "# breakdown at n=" << orbit.breakdown->step
       << ", cause=" << to_string(orbit.breakdown->cause) << '\n';
  }
}

}  // namespace projsys
