#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "wl1/solver.hpp"
#include "wl1/types.hpp"

namespace wl1 {

struct VideoConfig {
  /// yuv: raw planar 4:2:0 file; pgm: directory of numbered 8-bit PGM
  /// frames; synthetic: generated sequence (input ignored).
  std::string format = "synthetic";
  std::string input;
  std::size_t frames = 20;
  std::size_t width = 176;
  std::size_t height = 144;
  std::size_t block_rows = 72;
  std::size_t block_cols = 88;
  std::size_t m = 3168;  // per block
  double top_fraction = 0.10;
  /// Any of l1, single, adaptive, oracle. "single" runs once per entry of
  /// single_weights.
  std::vector<std::string> methods = {"l1", "single", "adaptive", "oracle"};
  std::vector<double> single_weights = {0.2, 0.5};
  double step_tol = 1e-5;
  int max_iterations = 10000;
};

/// Serializable description of one run.
struct ExperimentSpec {
  std::string id = "fig2a";  // fig1a fig1b fig2a fig2b power tree video tiny-theorem
  std::size_t n = 256;
  std::size_t s = 16;
  double sigma = 0.01;
  std::size_t trials = 100;
  std::vector<std::size_t> m_grid = {32, 48, 64, 80, 96, 112, 128};
  /// Single-weight strategies.
  std::vector<double> single_weights = {0.5, 0.25};
  /// Weights (w1, w2) of the two-estimate strategies.
  std::vector<double> pair_weights = {0.5, 0.25};
  /// fig2a: rho_1 values; fig2b: alpha_1 values.
  std::vector<double> sweep = {0.25, 0.5, 0.75};
  double rho = 1.0;
  double alpha = 1.0;
  /// oracle: eps = ||z||; fixed: eps = epsilon; percentile: sigma sqrt(m + 2 sqrt(2m)).
  std::string epsilon_policy = "oracle";
  double epsilon = 0.0;
  double a = 3.0;
  /// tree prior: sparsity of generated supports and trials of the estimate.
  std::size_t tree_s = 24;
  std::size_t prior_trials = 10000;
  /// tiny-theorem instance count.
  std::size_t instances = 200;
  double step_tol = 1e-8;
  double feas_tol = 1e-6;
  int max_iterations = 50000;
  std::uint64_t seed = 20240101;
  std::string output;
  VideoConfig video;

  /// Defaults for an experiment id (trials reduced to desk scale).
  static ExperimentSpec defaults(const std::string& id);

  SolverConfig solver_config() const;
};

std::string to_json(const ExperimentSpec& spec);
/// Fields missing from `json` keep the values already in `base`.
ExperimentSpec spec_from_json(const std::string& json, ExperimentSpec base);
/// JSON object, or "key = value" lines whose values are JSON literals or bare strings.
ExperimentSpec load_spec_file(const std::string& path, ExperimentSpec base);

/// FNV-1a 64 of the canonical JSON with the output path cleared.
std::uint64_t spec_hash(const ExperimentSpec& spec);

/// RFC 4180 table preceded by one "# ..." line carrying experiment, spec
/// hash and seed.
class CsvTable {
 public:
  CsvTable(const ExperimentSpec& spec, std::vector<std::string> columns);

  void add_row(std::vector<std::string> cells);
  void add_row(const std::vector<double>& values);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t column(const std::string& name) const;
  double value(std::size_t row, const std::string& name) const;

  void write(std::ostream& os) const;
  std::string str() const;
  /// Writes to spec.output when set.
  void save() const;

 private:
  std::string comment_;
  std::string output_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Shortest round-trip decimal; "inf" / "-inf" / "nan" for non-finite.
std::string format_number(double v);

// fig1a / fig1b threshold sweeps at step 0.01.
CsvTable run_fig1(const ExperimentSpec& spec);

struct StrategyStats {
  std::string name;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t used = 0;
  std::size_t nonconverged = 0;
};

struct SweepPoint {
  std::size_t m = 0;
  std::vector<StrategyStats> strategies;
  const StrategyStats& at(const std::string& name) const;
};

struct SweepResult {
  std::vector<std::string> strategy_names;
  std::vector<SweepPoint> points;
  /// errors[point][strategy][trial]; NaN for excluded solves.
  std::vector<std::vector<std::vector<double>>> errors;
  std::size_t solves = 0;
  std::size_t nonconverged = 0;
  bool ok = true;  // non-convergence within 1%

  const SweepPoint& at_m(std::size_t m) const;
  /// Mean and standard error of per-trial error(a) - error(b) at point p,
  /// over trials where both converged.
  std::pair<double, double> paired_difference(std::size_t point, const std::string& a,
                                              const std::string& b) const;
};

// fig2a / fig2b: two support estimates vs one.
SweepResult run_synth(const ExperimentSpec& spec);
// power / tree priors: non-uniform weights vs single weights.
SweepResult run_prior(const ExperimentSpec& spec);

CsvTable sweep_table(const ExperimentSpec& spec, const SweepResult& result);

struct TinyTheoremReport {
  std::size_t instances = 0;
  std::size_t qualifying = 0;
  std::size_t excluded = 0;
  std::size_t violations = 0;
  std::size_t nonconverged = 0;
  double worst_ratio = 0.0;  // max actual / bound among qualifying
  bool conclusive() const { return qualifying > 0; }
  bool passed(std::size_t min_qualifying) const {
    return qualifying >= min_qualifying && violations == 0;
  }
};

/// Empty per-instance table for run_tiny_theorem.
CsvTable tiny_theorem_table(const ExperimentSpec& spec);
TinyTheoremReport run_tiny_theorem(const ExperimentSpec& spec, CsvTable* table = nullptr);

}  // namespace wl1
