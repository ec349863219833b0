#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ikrylov/problems.hpp"
#include "ikrylov/solvers.hpp"

namespace ikrylov {

/// Experiment grid methods: exact baselines and their inexact variants.
enum class ExpMethod { Fom, IFom, Cg, Cgr, ICg, ICgr };

const char* to_string(ExpMethod method);
std::optional<ExpMethod> parse_method(const std::string& name);

enum class OracleKind { Continuous, MultiPrecision };

struct SyntheticSource {
  std::size_t n = 200;
  std::vector<double> kappa_list;
  double lambda_max = 1.0;
  std::uint64_t seed = 1;
};

struct MatrixMarketSource {
  struct File {
    std::string path;
    std::optional<double> lambda_min;  // estimate overrides
    std::optional<double> lambda_max;
  };
  std::vector<File> files;
  std::uint64_t rhs_seed = 1;
};

struct ExperimentSpec {
  std::optional<SyntheticSource> synthetic;
  std::optional<MatrixMarketSource> matrix_market;
  std::vector<double> eps_list;
  std::vector<ExpMethod> methods;
  OracleKind oracle = OracleKind::Continuous;
  SolveMode mode = SolveMode::Practical;  // for the inexact variants
  bool estimate_perturbation = false;
  int delay_d = 10;
  int k_max_user = 0;            // 0 -> 3n
  bool reorth_override = false;  // forces reorthogonalization onto CG/iCG
  std::vector<std::uint64_t> seeds;
};

struct ResultRow {
  std::string method;
  std::string problem_id;
  double kappa = 0.0;
  double eps = 0.0;  // grouping key; not a CSV column
  int n_it = 0;
  double cost = 0.0;
  double r_res_gap = 0.0;
  double r_sol_err = 0.0;
  double r_val_err = 0.0;
  std::string termination;
  std::uint64_t seed = 0;
};

/// Runs every (problem, eps, method, seed) combination. Rows come back in
/// canonical order (problem, eps, method, seed) and solver failures are
/// recorded as rows, never aborting the grid.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

enum class TableFormat { Csv, Text };

/// CSV: fixed header, 6-significant-digit scientific floats, LF endings.
/// Text: column-aligned tables grouped per problem and accuracy target.
std::string emit_table(const std::vector<ResultRow>& rows, TableFormat format);

struct AuditCheck {
  std::string name;
  std::string cell;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
};

struct AuditReport {
  std::vector<AuditCheck> checks;
  bool all_pass() const;
};

/// Runs the grid in theoretical mode with full iterate recording and checks
/// the residual-gap recurrence, the dual-norm gap bound, the decrease and
/// value-error bounds and the budget sum, reporting measured slack.
AuditReport audit(const ExperimentSpec& spec);
std::string format_audit(const AuditReport& report);

}  // namespace ikrylov
