#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gdlab/bounds.hpp"
#include "gdlab/distribution.hpp"
#include "gdlab/loss.hpp"

namespace gdlab {

enum class LossFamily { cross_entropy, sum_univariate };
enum class DistKind { random, hard_lower_n, hard_lower_t };
enum class EpsilonPolicyKind { one_over_T, corpol_formula, explicit_value };
enum class FeasibilityGate { upper, lower, none };

struct LossSpec {
  LossFamily family = LossFamily::cross_entropy;
  double alpha = 1.0;  // CE sharpness, or the tail parameter
  PhiVariant phi = PhiVariant::quadratic_tail;
  TailKind tail_kind = TailKind::exponential;

  MulticlassLoss instantiate(int k) const;
  TailFunction tail() const;
  std::string describe() const;
};

// One sweep: a loss family, a distribution kind, grids over (k, T, n), a
// margin, seeds and an epsilon policy. Cells failing the feasibility gate
// are emitted as skipped rows rather than silently run.
struct ExperimentSpec {
  LossSpec loss;

  DistKind dist_kind = DistKind::random;
  int dist_d = 20;
  int support_size = 40;
  ProbProfile profile = ProbProfile::uniform;
  double ladder_top = 4e-3;
  double ladder_bottom = 2e-4;

  std::vector<int> k_grid;
  std::vector<long> T_grid;
  std::vector<long> n_grid;
  double gamma = 0.125;

  int seed_count = 1;
  std::uint64_t seed_base = 1;

  EpsilonPolicyKind eps_policy = EpsilonPolicyKind::one_over_T;
  double eps_explicit = 0.01;
  FeasibilityGate gate = FeasibilityGate::upper;

  std::string output;  // CSV path; empty keeps the result in memory only

  void validate() const;
  double epsilon_for(int k, long T, double eta) const;

  static ExperimentSpec from_json_text(const std::string& text);
  static ExperimentSpec from_json_file(const std::string& path);
};

struct SweepRow {
  int k = 0;
  long T = 0, n = 0;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  double eta = 0.0;
  double emp_risk = 0.0, pop_risk = 0.0, frob_norm = 0.0;
  double bound_opt = 0.0, bound_gen = 0.0;
  std::string status = "ok";
  double wall_time = 0.0;  // seconds; excluded from determinism comparisons
};

struct SweepResult {
  std::vector<SweepRow> rows;

  void write_csv(std::ostream& os) const;
  static SweepResult read_csv(std::istream& is);
};

// Executes the sweep cell by cell in deterministic grid order; per-cell
// failures land in the status column and the sweep continues. When
// spec.output is set rows are appended to the CSV as they are produced.
SweepResult run_sweep(const ExperimentSpec& spec);

enum class SweepAxis { k, T, n };

struct FitResult {
  double slope = 0.0;
  double stderr_ = 0.0;
  long points = 0;
};

// Least-squares slope of log(y) against log(x).
FitResult fit_loglog(const std::vector<std::pair<double, double>>& xy);

// Slope of seed-averaged population risk against the chosen axis, log-log.
// Needs >= 3 distinct axis values with positive mean risk.
FitResult fit_scaling(const SweepResult& result, SweepAxis axis);

// Summary table plus standalone SVG log-log plots (one per axis that has at
// least two distinct values), one curve per labeled result. Regenerating
// from the same inputs writes identical bytes.
void emit_report(const std::vector<std::pair<std::string, SweepResult>>& results,
                 const std::string& out_dir);

}  // namespace gdlab
