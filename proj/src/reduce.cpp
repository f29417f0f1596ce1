#include "projsys/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace projsys {

double AffineForm::operator()(std::span<const double> u) const {
  double value = c;
  for (std::size_t i = 0; i < coeffs.size(); ++i) value += coeffs[i] * u[i];
  return value;
}

const char* to_string(ReducedKind kind) {
  switch (kind) {
    case ReducedKind::Homogeneous: return "HomogeneousReduced";
    case ReducedKind::Linear: return "LinearReduced";
    case ReducedKind::Hyperbolic: return "HyperbolicReduced";
  }
  return "?";
}

std::optional<ReducedKind> reduced_kind_from_string(const std::string& name) {
  for (auto kind : {ReducedKind::Homogeneous, ReducedKind::Linear, ReducedKind::Hyperbolic}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

namespace {

std::vector<std::size_t> non_pivot_indices(std::size_t k, std::size_t pivot0) {
  std::vector<std::size_t> others;
  others.reserve(k - 1);
  for (std::size_t i = 0; i < k; ++i) {
    if (i != pivot0) others.push_back(i);
  }
  return others;
}

// Row r of m with column pivot0 moved into the constant slot.
AffineForm row_form(const Matrix& m, std::size_t r, std::size_t pivot0,
                    const std::vector<std::size_t>& others) {
  AffineForm form{m(r, pivot0), {}};
  form.coeffs.reserve(others.size());
  for (std::size_t i : others) form.coeffs.push_back(m(r, i));
  return form;
}

}  // namespace

ReducedSystem reduce(const SystemSpec& spec, std::size_t pivot) {
  require_valid(spec);
  if (spec.k < 2) throw DimensionTooSmall();
  if (pivot < 1 || pivot > spec.k) {
    throw std::out_of_range("pivot " + std::to_string(pivot) + " outside 1.." +
                            std::to_string(spec.k));
  }
  const ProjectivityClass cls = classify(spec);
  if (!is_projective(cls)) throw NotProjective();

  const std::size_t p = pivot - 1;
  const auto others = non_pivot_indices(spec.k, p);
  const std::size_t dim = others.size();
  const AffineForm one = AffineForm::constant(1.0, dim);

  ReducedSystem red;
  red.pivot = pivot;
  red.components.reserve(dim);
  for (std::size_t j : others) {
    ReducedComponent comp;
    switch (cls) {
      case ProjectivityClass::Homogeneous:
        comp = {row_form(spec.beta, j, p, others), row_form(spec.B, p, p, others),
                row_form(spec.beta, p, p, others), row_form(spec.B, j, p, others)};
        break;
      case ProjectivityClass::LinearType:
        comp = {row_form(spec.beta, j, p, others), one, row_form(spec.beta, p, p, others), one};
        break;
      case ProjectivityClass::HyperbolicType:
        comp = {row_form(spec.B, p, p, others), one, row_form(spec.B, j, p, others), one};
        break;
      case ProjectivityClass::NonProjective:
        throw NotProjective();
    }
    red.components.push_back(std::move(comp));
  }
  red.kind = cls == ProjectivityClass::Homogeneous  ? ReducedKind::Homogeneous
             : cls == ProjectivityClass::LinearType ? ReducedKind::Linear
                                                    : ReducedKind::Hyperbolic;
  return red;
}

std::optional<StepFailure> eval_reduced_into(const ReducedSystem& red,
                                             std::span<const double> u, Vector& out) {
  out.resize(red.dim());
  for (std::size_t j = 0; j < red.dim(); ++j) {
    const auto& comp = red.components[j];
    const double den = comp.den_a(u) * comp.den_b(u);
    if (!(den >= kBreakdownThreshold)) return StepFailure{BreakdownCause::DenominatorUnderflow, j};
    const double value = comp.num_a(u) * comp.num_b(u) / den;
    if (!std::isfinite(value)) return StepFailure{BreakdownCause::Overflow, j};
    if (!(value >= kBreakdownThreshold)) return StepFailure{BreakdownCause::StateUnderflow, j};
    out[j] = value;
  }
  return std::nullopt;
}

Vector eval_reduced(const ReducedSystem& red, std::span<const double> u) {
  Vector out;
  if (auto failure = eval_reduced_into(red, u, out)) {
    throw OrbitBreakdown(failure->cause, failure->component);
  }
  return out;
}

Vector project(std::span<const double> x, std::size_t pivot) {
  if (pivot < 1 || pivot > x.size()) {
    throw std::out_of_range("pivot " + std::to_string(pivot) + " outside 1.." +
                            std::to_string(x.size()));
  }
  const double denom = x[pivot - 1];
  Vector u;
  u.reserve(x.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i != pivot - 1) u.push_back(x[i] / denom);
  }
  return u;
}

namespace {

void print_form(std::ostream& os, const AffineForm& form) {
  os << '(';
  bool first = true;
  if (form.c != 0.0 || std::all_of(form.coeffs.begin(), form.coeffs.end(),
                                    [](double a) { return a == 0.0; })) {
    os << form.c;
    first = false;
  }
  for (std::size_t i = 0; i < form.coeffs.size(); ++i) {
    if (form.coeffs[i] == 0.0) continue;
    if (!first) os << " + ";
    os << form.coeffs[i] << "*u" << (i + 1);
    first = false;
  }
  os << ')';
}

bool is_unit(const AffineForm& form) {
  return form.c == 1.0 &&
         std::all_of(form.coeffs.begin(), form.coeffs.end(), [](double a) { return a == 0.0; });
}

}  // namespace

std::string to_string(const ReducedSystem& red) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t j = 0; j < red.dim(); ++j) {
    const auto& comp = red.components[j];
    os << 'u' << (j + 1) << "' = ";
    print_form(os, comp.num_a);
    if (!is_unit(comp.num_b)) print_form(os, comp.num_b);
    os << " / ";
    print_form(os, comp.den_a);
    if (!is_unit(comp.den_b)) print_form(os, comp.den_b);
    os << '\n';
  }
  return os.str();
}

std::vector<std::pair<double, double>> RiccatiLift::trajectory(std::size_t n_steps) const {
  std::vector<std::pair<double, double>> out;
  out.reserve(n_steps + 1);
  out.emplace_back(y0, z0);
  for (std::size_t n = 0; n < n_steps; ++n) {
    auto next = step(out.back().first, out.back().second);
    if (!std::isnormal(next.first) || !std::isnormal(next.second)) break;
    out.push_back(next);
  }
  return out;
}

Vector RiccatiLift::ratios(std::size_t n_steps) const {
  Vector out;
  for (const auto& [y, z] : trajectory(n_steps)) out.push_back(y / z);
  return out;
}

RiccatiLift lift_riccati(double alpha, double beta, double A, double B, double x0) {
  for (double v : {alpha, beta, A, B}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw DegenerateRiccati("Riccati parameters must be finite and nonnegative");
    }
  }
  if ((A + B) * (alpha + beta) == 0.0) {
    throw DegenerateRiccati("(A+B)(alpha+beta) must be nonzero");
  }
  if (!(x0 > 0.0) || !std::isfinite(x0)) {
    throw DegenerateRiccati("initial condition must be positive");
  }
  return RiccatiLift{alpha, beta, A, B, x0, 1.0};
}

}  // namespace projsys
