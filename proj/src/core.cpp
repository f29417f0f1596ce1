#include "projsys/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace projsys {

const char* to_string(BreakdownCause cause) {
  switch (cause) {
    case BreakdownCause::DenominatorUnderflow: return "DenominatorUnderflow";
    case BreakdownCause::Overflow: return "Overflow";
    case BreakdownCause::StateUnderflow: return "StateUnderflow";
  }
  return "?";
}

const char* to_string(ProjectivityClass c) {
  switch (c) {
    case ProjectivityClass::Homogeneous: return "Homogeneous";
    case ProjectivityClass::LinearType: return "LinearType";
    case ProjectivityClass::HyperbolicType: return "HyperbolicType";
    case ProjectivityClass::NonProjective: return "NonProjective";
  }
  return "?";
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw ValidationError("ragged matrix: row " + std::to_string(r + 1) + " has " +
                            std::to_string(rows[r].size()) + " entries, expected " +
                            std::to_string(cols));
    }
    std::copy(rows[r].begin(), rows[r].end(), m.data_.begin() + r * cols);
  }
  return m;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    os << issues[i].message;
  }
  return os.str();
}

namespace {

void check_entries(std::span<const double> values, const std::string& field, std::size_t cols,
                   ValidationReport& report) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::vector<std::size_t> index = cols ? std::vector<std::size_t>{i / cols, i % cols}
                                          : std::vector<std::size_t>{i};
    std::string where = field + "[" + std::to_string(index[0] + 1) +
                        (cols ? "," + std::to_string(index[1] + 1) : std::string()) + "]";
    if (!std::isfinite(values[i])) {
      report.issues.push_back({ValidationIssue::Kind::NonFinite, field, index,
                               where + " is not finite"});
    } else if (values[i] < 0.0) {
      report.issues.push_back({ValidationIssue::Kind::NegativeEntry, field, index,
                               where + " is negative"});
    }
  }
}

bool check_matrix_shape(const Matrix& m, const std::string& field, std::size_t k,
                        ValidationReport& report) {
  if (m.rows() == k && m.cols() == k) return true;
  report.issues.push_back({ValidationIssue::Kind::ShapeMismatch, field, {},
                           field + " must be " + std::to_string(k) + "x" + std::to_string(k) +
                               ", got " + std::to_string(m.rows()) + "x" +
                               std::to_string(m.cols())});
  return false;
}

bool check_vector_shape(const Vector& v, const std::string& field, std::size_t k,
                        ValidationReport& report) {
  if (v.size() == k) return true;
  report.issues.push_back({ValidationIssue::Kind::ShapeMismatch, field, {},
                           field + " must have length " + std::to_string(k) + ", got " +
                               std::to_string(v.size())});
  return false;
}

}  // namespace

ValidationReport validate(const SystemSpec& spec) {
  ValidationReport report;
  const std::size_t k = spec.k;
  if (k == 0) {
    report.issues.push_back({ValidationIssue::Kind::DimensionZero, "k", {}, "k must be >= 1"});
    return report;
  }
  bool shapes = check_vector_shape(spec.alpha, "alpha", k, report);
  shapes &= check_matrix_shape(spec.beta, "beta", k, report);
  shapes &= check_vector_shape(spec.A, "A", k, report);
  shapes &= check_matrix_shape(spec.B, "B", k, report);
  if (!shapes) return report;

  check_entries(spec.alpha, "alpha", 0, report);
  check_entries(spec.beta.data(), "beta", k, report);
  check_entries(spec.A, "A", 0, report);
  check_entries(spec.B.data(), "B", k, report);
  if (!report.ok()) return report;

  for (std::size_t l = 0; l < k; ++l) {
    double num = spec.alpha[l];
    double den = spec.A[l];
    for (std::size_t i = 0; i < k; ++i) {
      num += spec.beta(l, i);
      den += spec.B(l, i);
    }
    if (!(num > 0.0)) {
      report.issues.push_back({ValidationIssue::Kind::ZeroNumeratorRow, "beta", {l},
                               "numerator of row " + std::to_string(l + 1) +
                                   " is identically zero (alpha and beta row all zero)"});
    }
    if (!(den > 0.0)) {
      report.issues.push_back({ValidationIssue::Kind::ZeroDenominatorRow, "B", {l},
                               "denominator of row " + std::to_string(l + 1) +
                                   " is identically zero (A and B row all zero)"});
    }
  }
  return report;
}

void require_valid(const SystemSpec& spec) {
  auto report = validate(spec);
  if (!report.ok()) throw ValidationError("invalid system: " + report.summary());
}

namespace {

bool all_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

bool all_equal(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

bool rows_identical(const Matrix& m) {
  for (std::size_t r = 1; r < m.rows(); ++r) {
    if (!std::equal(m.row(r).begin(), m.row(r).end(), m.row(0).begin())) return false;
  }
  return true;
}

}  // namespace

bool is_homogeneous(const SystemSpec& spec) { return all_zero(spec.alpha) && all_zero(spec.A); }

bool is_linear_type(const SystemSpec& spec) {
  return all_zero(spec.alpha) && all_equal(spec.A) && rows_identical(spec.B);
}

bool is_hyperbolic_type(const SystemSpec& spec) {
  return all_zero(spec.A) && all_equal(spec.alpha) && rows_identical(spec.beta);
}

ProjectivityClass classify(const SystemSpec& spec) {
  require_valid(spec);
  if (is_homogeneous(spec)) return ProjectivityClass::Homogeneous;
  if (is_linear_type(spec)) return ProjectivityClass::LinearType;
  if (is_hyperbolic_type(spec)) return ProjectivityClass::HyperbolicType;
  return ProjectivityClass::NonProjective;
}

std::optional<StepFailure> step_into(const SystemSpec& spec, std::span<const double> x,
                                     State& out) {
  const std::size_t k = spec.k;
  out.resize(k);
  for (std::size_t l = 0; l < k; ++l) {
    double num = spec.alpha[l];
    double den = spec.A[l];
    const auto brow = spec.beta.row(l);
    const auto Brow = spec.B.row(l);
    for (std::size_t i = 0; i < k; ++i) {
      num += brow[i] * x[i];
      den += Brow[i] * x[i];
    }
    if (!(den >= kBreakdownThreshold)) return StepFailure{BreakdownCause::DenominatorUnderflow, l};
    const double value = num / den;
    if (!std::isfinite(value)) return StepFailure{BreakdownCause::Overflow, l};
    if (!(value >= kBreakdownThreshold)) return StepFailure{BreakdownCause::StateUnderflow, l};
    out[l] = value;
  }
  return std::nullopt;
}

State step(const SystemSpec& spec, std::span<const double> x) {
  State out;
  if (auto failure = step_into(spec, x, out)) {
    throw OrbitBreakdown(failure->cause, failure->component);
  }
  return out;
}

double relative_difference(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30});
}

bool line_image_parallel(const SystemSpec& spec, std::span<const double> x, double lambda,
                         double tol) {
  State scaled(x.begin(), x.end());
  for (double& v : scaled) v *= lambda;
  const State base = step(spec, x);
  const State image = step(spec, scaled);
  for (std::size_t i = 0; i < spec.k; ++i) {
    for (std::size_t j = i + 1; j < spec.k; ++j) {
      if (relative_difference(image[i] / image[j], base[i] / base[j]) > tol) return false;
    }
  }
  return true;
}

}  // namespace projsys
