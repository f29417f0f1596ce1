#pragma once

// Batch kernels over independent cells. Each parallel kernel has a serial
// twin with identical output, kept as the reference for tests and benchmarks.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "projsys/analysis.hpp"
#include "projsys/dynamics.hpp"

namespace projsys {

/// `count` evenly spaced values from lo to hi inclusive; count = 1 gives lo.
struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 1;

  double at(std::size_t i) const;
};

/// Cells are ordered lexicographically: alpha outermost, then A1, then A2.
struct Example3Grid {
  GridAxis alpha;
  GridAxis A1;
  GridAxis A2;

  std::size_t size() const noexcept { return alpha.count * A1.count * A2.count; }
  Example3Params cell(std::size_t index) const;
};

struct SweepRow {
  Example3Params params;
  Example3Case regime;
  std::optional<double> w1;
  std::optional<double> w2;
};

SweepRow analyze_cell(const Example3Params& params);

std::vector<SweepRow> sweep_example3_serial(const Example3Grid& grid);

/// workers <= 0 uses the OpenMP default team size.
std::vector<SweepRow> sweep_example3(const Example3Grid& grid, int workers = 0);

/// Header "alpha,A1,A2,case,w1,w2"; roots left empty outside the bistable case.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

struct ConjugacyCase {
  SystemSpec spec;
  State x0;
  std::size_t pivot;  ///< 1-based
};

std::vector<ConjugacyReport> check_conjugacy_batch_serial(std::span<const ConjugacyCase> cases,
                                                          std::size_t n_steps, double tol);

std::vector<ConjugacyReport> check_conjugacy_batch(std::span<const ConjugacyCase> cases,
                                                   std::size_t n_steps, double tol,
                                                   int workers = 0);

}  // namespace projsys
