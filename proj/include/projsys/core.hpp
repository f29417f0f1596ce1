#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "projsys/errors.hpp"

namespace projsys {

using Vector = std::vector<double>;

/// Dense row-major square or rectangular matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  /// Builds from nested rows; all rows must have the same length.
  static Matrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> data() const { return data_; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector data_;
};

/// Coefficients of the first-order linear-fractional system
///
///   x'_l = (alpha_l + sum_i beta(l,i) x_i) / (A_l + sum_i B(l,i) x_i),  l = 1..k.
///
/// The struct is a plain aggregate so that malformed input can be represented
/// and reported on by validate(); operations that need a well-formed system
/// check it themselves.
struct SystemSpec {
  std::size_t k = 0;
  Vector alpha;
  Matrix beta;
  Vector A;
  Matrix B;

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

/// A point of the state space; valid states are strictly positive.
using State = Vector;

// Denominators below this signal OrbitBreakdown rather than a huge quotient.
inline constexpr double kBreakdownThreshold = 1e-300;

struct ValidationIssue {
  enum class Kind {
    DimensionZero,
    ShapeMismatch,
    NonFinite,
    NegativeEntry,
    ZeroNumeratorRow,
    ZeroDenominatorRow,
  };
  Kind kind;
  std::string field;              ///< "k", "alpha", "beta", "A" or "B"
  std::vector<std::size_t> index; ///< 0-based offending position(s)
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const noexcept { return issues.empty(); }
  /// All messages joined with "; ".
  std::string summary() const;
};

ValidationReport validate(const SystemSpec& spec);

/// Throws ValidationError carrying the report summary when spec is invalid.
void require_valid(const SystemSpec& spec);

enum class ProjectivityClass { Homogeneous, LinearType, HyperbolicType, NonProjective };

const char* to_string(ProjectivityClass c);

inline bool is_projective(ProjectivityClass c) {
  return c != ProjectivityClass::NonProjective;
}

/// Individual class conditions; classify() applies them with precedence
/// Homogeneous > LinearType > HyperbolicType. Comparisons are exact.
bool is_homogeneous(const SystemSpec& spec);
bool is_linear_type(const SystemSpec& spec);
bool is_hyperbolic_type(const SystemSpec& spec);

ProjectivityClass classify(const SystemSpec& spec);

/// One application of the map. Throws OrbitBreakdown on denominator underflow,
/// non-finite output or a component underflowing to zero.
State step(const SystemSpec& spec, std::span<const double> x);

/// Non-throwing form used in hot loops: writes into out (resized to k) and
/// returns the failure on breakdown.
std::optional<StepFailure> step_into(const SystemSpec& spec, std::span<const double> x,
                                        State& out);

/// True iff step(lambda * x) and step(x) are parallel: every ratio
/// step_i / step_j agrees within relative tolerance tol.
bool line_image_parallel(const SystemSpec& spec, std::span<const double> x, double lambda,
                         double tol);

/// |a-b| / max(|a|, |b|, 1e-30).
double relative_difference(double a, double b);

}  // namespace projsys
