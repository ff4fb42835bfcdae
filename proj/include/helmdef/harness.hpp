// Experiment runner: declarative JSON configs, preconditioned GMRES sweeps
// over (k, p, preconditioner) grids, result serialization, and comparison
// against reference tables.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "helmdef/analysis.hpp"
#include "helmdef/linalg.hpp"
#include "helmdef/problems.hpp"

namespace helmdef {

/// One preconditioner column of a sweep. `beta2` is a literal number or one
/// of the k-dependent forms "1/k" and "1/(3k)".
struct PrecondConfig {
  std::string tag = "D";  // D | D_eps | C_ex | DC_MG | Deps_C_MG | none
  double epsilon = 0.1;
  std::string beta2 = "1";
  int cycles = 1;
  int smoothing = 1;
  double omega = 0.6;
  std::map<int, int> smoothing_by_p;     // per-degree override
  std::map<int, double> omega_by_p;      // per-degree override

  /// Column label carried into records: multigrid tags get the cycle count
  /// appended so different cycle budgets stay distinguishable.
  std::string label() const;
};

struct ExperimentConfig {
  std::string study = "iterations";  // iterations | convergence | pollution | spectrum
  std::string problem = "point_source_1d";
  std::vector<double> wave_numbers;
  std::vector<int> orders;
  double kh = 0.625;
  std::vector<int> elements;  // explicit mesh sizes (error studies)
  std::vector<PrecondConfig> preconditioners;
  GmresOptions gmres;
  std::string compare_mode = "iterations";  // iterations | factor
  double compare_tolerance = 2.0;
  bool check_direct = false;
  long direct_cap = 10000;  // largest system checked against the direct solve
  int samples = 1000;
  std::array<double, 16> multipliers{};
  bool has_multipliers = false;
  // spectrum-study settings
  std::string composition = "deflated";  // plain | deflated | deflated-shifted | shifted
  double epsilon = 0.0;
  double beta2 = 1.0;
  int smoothing = 1;
  double omega = 0.6;
  long dense_cap = 4000;

  std::string raw_dump;  // canonical serialized form of the config
  std::string hash;      // FNV-1a of raw_dump, embedded in every record
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Numeric shift for one run: literal value or k-dependent form.
double resolve_beta2(const std::string& expr, double k);

/// Element count for iteration and spectrum sweeps: the smallest mesh with
/// k/elements <= kh, adjusted by 1 - order so the retained basis size per
/// direction is odd and every second knot lines up with the coarse level.
int derived_elements(double k, double kh, int order);

/// Problem instance for one sweep cell.
Problem make_problem(const ExperimentConfig& cfg, int elements, int order,
                     double k);

struct RunRecord {
  std::string problem;
  std::string tag;
  double k = 0.0;
  int order = 0;
  int elements = 0;
  long dofs = 0;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;  // relative true residual at exit
  double direct_gap = std::numeric_limits<double>::quiet_NaN();
  long matvecs = 0;
  long shift_solves = 0;
  long vcycles = 0;
  long coarse_solves = 0;
  double seconds = 0.0;
  std::string config_hash;
};

/// Full cartesian sweep (preconditioner x p x k). Cells run on a work pool
/// of `threads`; results come back in deterministic config order. Cells
/// whose system size exceeds `max_n` (when positive) are skipped.
std::vector<RunRecord> run_iteration_sweep(const ExperimentConfig& cfg,
                                           int threads = 1, long max_n = 0);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

void write_records_csv(const std::vector<RunRecord>& records, std::ostream& os);
std::vector<RunRecord> read_records_csv(std::istream& is);
std::string records_to_json(const std::vector<RunRecord>& records,
                            const std::string& config_dump);
std::vector<RunRecord> records_from_json(const std::string& text);

/// One comparable cell of a produced table.
struct ResultCell {
  std::string tag;
  double k = 0.0;
  int p = 0;
  int elements = 0;
  double value = 0.0;
  bool star = false;  // iteration limit reached
};

std::vector<ResultCell> cells_from_records(const std::vector<RunRecord>& records);

/// Error-study cells for the config (convergence or pollution study).
std::vector<ResultCell> error_cells(const ExperimentConfig& cfg);

/// Reference CSV row; empty fields are wildcards, value "*" marks a
/// non-converged reference cell, `tol` optionally overrides the tolerance.
struct GoldenRow {
  std::string tag, k, p, elements, value;
  double tol = std::numeric_limits<double>::quiet_NaN();
};

std::vector<GoldenRow> read_golden_csv(const std::string& path);

struct DiffLine {
  std::string key;
  std::string expected;
  std::string actual;
  bool ok = false;
  bool missing = false;  // reference cell had no produced counterpart
};

struct DiffReport {
  std::vector<DiffLine> lines;
  int matched = 0;
  int mismatched = 0;
  int missing = 0;
  bool pass() const { return matched > 0 && mismatched == 0; }
};

/// Cell-by-cell diff. Mode "iterations": absolute difference within
/// tolerance and agreement on non-convergence markers. Mode "factor":
/// ratio within tolerance.
DiffReport compare_cells(const std::vector<ResultCell>& cells,
                         const std::vector<GoldenRow>& golden,
                         const std::string& mode, double tolerance);

struct SpectrumRun {
  double k = 0.0;
  int p = 0;
  Eigen::VectorXcd values;
};

/// Dense spectra over the config's (k, p) grid; systems above the cap are
/// skipped with a note on stderr.
std::vector<SpectrumRun> run_spectrum_sweep(const ExperimentConfig& cfg);

void write_spectrum_csv(const Eigen::VectorXcd& values, std::ostream& os);

}  // namespace helmdef
