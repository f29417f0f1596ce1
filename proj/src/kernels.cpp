#include "projsys/kernels.hpp"

#include <cstdio>
#include <exception>
#include <ostream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace projsys {

double GridAxis::at(std::size_t i) const {
  if (count <= 1 || i == 0) return lo;
  if (i + 1 == count) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

Example3Params Example3Grid::cell(std::size_t index) const {
  const std::size_t i2 = index % A2.count;
  const std::size_t i1 = (index / A2.count) % A1.count;
  const std::size_t i0 = index / (A2.count * A1.count);
  return {alpha.at(i0), A1.at(i1), A2.at(i2)};
}

SweepRow analyze_cell(const Example3Params& params) {
  const auto analysis = example3_analyze(params);
  SweepRow row{params, analysis.regime, std::nullopt, std::nullopt};
  if (analysis.roots) {
    row.w1 = analysis.roots->first;
    row.w2 = analysis.roots->second;
  }
  return row;
}

namespace {

// Runs body(i) for i in [0, n), collecting the first exception and rethrowing
// it after the parallel region.
template <typename Body>
void parallel_for(std::size_t n, int workers, Body&& body) {
  std::exception_ptr error;
#ifdef _OPENMP
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(projsys_parallel_for_error)
#endif
      if (!error) error = std::current_exception();
    }
  }
  (void)workers;
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<SweepRow> sweep_example3_serial(const Example3Grid& grid) {
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) rows.push_back(analyze_cell(grid.cell(i)));
  return rows;
}

std::vector<SweepRow> sweep_example3(const Example3Grid& grid, int workers) {
  std::vector<SweepRow> rows(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) { rows[i] = analyze_cell(grid.cell(i)); });
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  os << "alpha,A1,A2,case,w1,w2\n";
  for (const auto& row : rows) {
    put(row.params.alpha);
    os << ',';
    put(row.params.A1);
    os << ',';
    put(row.params.A2);
    os << ',' << to_string(row.regime) << ',';
    if (row.w1) put(*row.w1);
    os << ',';
    if (row.w2) put(*row.w2);
    os << '\n';
  }
}

std::vector<ConjugacyReport> check_conjugacy_batch_serial(std::span<const ConjugacyCase> cases,
                                                          std::size_t n_steps, double tol) {
  std::vector<ConjugacyReport> out;
  out.reserve(cases.size());
  for (const auto& c : cases) out.push_back(check_conjugacy(c.spec, c.x0, c.pivot, n_steps, tol));
  return out;
}

std::vector<ConjugacyReport> check_conjugacy_batch(std::span<const ConjugacyCase> cases,
                                                   std::size_t n_steps, double tol,
                                                   int workers) {
  std::vector<ConjugacyReport> out(cases.size());
  parallel_for(cases.size(), workers, [&](std::size_t i) {
    out[i] = check_conjugacy(cases[i].spec, cases[i].x0, cases[i].pivot, n_steps, tol);
  });
  return out;
}

}  // namespace projsys
