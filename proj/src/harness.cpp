#include "ikrylov/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>
#include <utility>

#include "ikrylov/budget.hpp"
#include "ikrylov/errors.hpp"
#include "ikrylov/metrics.hpp"
#include "ikrylov/oracle.hpp"

namespace ikrylov {

namespace {

struct GridProblem {
  std::string id;
  double kappa = 0.0;
  QuadraticProblem problem;
};

std::string basename_no_ext(const std::string& path) {
  std::size_t slash = path.find_last_of("/\\");
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  std::size_t dot = name.find_last_of('.');
  return dot == std::string::npos ? name : name.substr(0, dot);
}

std::vector<GridProblem> build_problems(const ExperimentSpec& spec) {
  std::vector<GridProblem> out;
  if (spec.synthetic) {
    const auto& src = *spec.synthetic;
    std::vector<double> kappas = src.kappa_list;
    std::sort(kappas.begin(), kappas.end());
    kappas.erase(std::unique(kappas.begin(), kappas.end()), kappas.end());
    for (double kappa : kappas) {
      GridProblem gp;
      gp.id = "synth_n" + std::to_string(src.n);
      gp.kappa = kappa;
      gp.problem = gen_synthetic(
          SpectrumSpec{src.n, kappa, src.lambda_max}, src.seed);
      out.push_back(std::move(gp));
    }
  }
  if (spec.matrix_market) {
    const auto& src = *spec.matrix_market;
    for (const auto& file : src.files) {
      SymMatrix a;
      try {
        a = parse_matrix_market(file.path);
      } catch (const MalformedFile& e) {
        throw ConfigError(e.what());
      }
      GridProblem gp;
      gp.id = basename_no_ext(file.path);
      if (file.lambda_min && file.lambda_max) {
        SpectralEstimates est;
        est.lambda_min_est = *file.lambda_min;
        est.lambda_max_est = *file.lambda_max;
        est.trace = a.trace();
        est.n = a.order();
        gp.problem = make_problem(std::move(a), src.rhs_seed, est);
      } else {
        gp.problem = make_problem(std::move(a), src.rhs_seed);
      }
      gp.kappa = gp.problem.spectral_true.lambda_max_est /
                 gp.problem.spectral_true.lambda_min_est;
      out.push_back(std::move(gp));
    }
  }
  if (out.empty()) throw ConfigError("experiment grid has no problems");
  return out;
}

void validate_spec(const ExperimentSpec& spec) {
  if (spec.eps_list.empty()) throw ConfigError("eps list is empty");
  for (double eps : spec.eps_list) {
    if (!(eps > 0.0) || !(eps < 1.0)) {
      throw ConfigError("eps values must lie in (0, 1)");
    }
  }
  if (spec.methods.empty()) throw ConfigError("method list is empty");
  if (spec.seeds.empty()) throw ConfigError("seed list is empty");
  if (!spec.synthetic && !spec.matrix_market) {
    throw ConfigError("no problem source given");
  }
  if (spec.mode == SolveMode::Exact) {
    throw ConfigError("mode applies to inexact variants: theoretical|practical");
  }
}

bool is_inexact(ExpMethod m) {
  return m == ExpMethod::IFom || m == ExpMethod::ICg || m == ExpMethod::ICgr;
}

struct CellResult {
  ResultRow row;
  SolveReport report;
  bool solved = false;
};

CellResult run_cell(const GridProblem& gp, double eps, ExpMethod method,
                    std::uint64_t seed, const ExperimentSpec& spec,
                    bool record_iterates) {
  const QuadraticProblem& problem = gp.problem;
  SolverConfig config;
  config.eps = eps;
  config.delay_d = spec.delay_d;
  config.k_max_user = spec.k_max_user;
  config.seed = seed;
  config.record_iterates = record_iterates;
  const bool inexact = is_inexact(method);
  config.mode = inexact ? spec.mode : SolveMode::Exact;
  config.method = (method == ExpMethod::Fom || method == ExpMethod::IFom)
                      ? Method::Fom
                      : Method::Cg;
  config.reorth = method == ExpMethod::Cgr || method == ExpMethod::ICgr ||
                  (spec.reorth_override &&
                   (method == ExpMethod::Cg || method == ExpMethod::ICg));

  SpectralEstimates est = problem.spectral_true;
  if (inexact && config.mode == SolveMode::Practical &&
      spec.estimate_perturbation) {
    est = perturb_estimates(est, seed);
  }

  std::unique_ptr<ProductOracle> oracle;
  if (!inexact) {
    oracle = std::make_unique<ExactOracle>(problem.a);
  } else if (spec.oracle == OracleKind::Continuous) {
    oracle = std::make_unique<ContinuousOracle>(problem.a, est, &problem.chol,
                                                seed);
  } else {
    oracle = std::make_unique<MultiPrecisionOracle>(problem.a, est,
                                                    &problem.chol, seed);
  }

  const int k_user = config.k_max_user > 0
                         ? config.k_max_user
                         : 3 * static_cast<int>(problem.a.order());
  BudgetState budget = budget_init(k_user, k_max_spectral(eps, est));

  CellResult cell;
  cell.row.method = to_string(method);
  cell.row.problem_id = gp.id;
  cell.row.kappa = gp.kappa;
  cell.row.eps = eps;
  cell.row.seed = seed;
  try {
    cell.report = config.method == Method::Fom
                      ? solve_fom(problem, est, *oracle, budget, config)
                      : solve_cg(problem, est, *oracle, budget, config);
    EvalResult metrics = evaluate(problem, cell.report.x_final,
                                  cell.report.r_recurred_final,
                                  cell.report.q_recurred_final);
    cell.row.n_it = cell.report.n_it;
    cell.row.cost = cell.report.total_cost;
    cell.row.r_res_gap = metrics.r_res_gap;
    cell.row.r_sol_err = metrics.r_sol_err;
    cell.row.r_val_err = metrics.r_val_err;
    cell.row.termination = to_string(cell.report.termination_reason);
    cell.solved = true;
  } catch (const IndefiniteCurvature&) {
    cell.row.termination = "error:indefinite_curvature";
  } catch (const SingularMatrix&) {
    cell.row.termination = "error:singular_hessenberg";
  } catch (const std::exception&) {
    cell.row.termination = "error";
  }
  return cell;
}

std::string fmt_sci(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", value);
  return buf;
}

}  // namespace

const char* to_string(ExpMethod method) {
  switch (method) {
    case ExpMethod::Fom: return "FOM";
    case ExpMethod::IFom: return "iFOM";
    case ExpMethod::Cg: return "CG";
    case ExpMethod::Cgr: return "CGR";
    case ExpMethod::ICg: return "iCG";
    case ExpMethod::ICgr: return "iCGR";
  }
  return "?";
}

std::optional<ExpMethod> parse_method(const std::string& name) {
  std::string low;
  for (char c : name) {
    low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (low == "fom") return ExpMethod::Fom;
  if (low == "ifom") return ExpMethod::IFom;
  if (low == "cg") return ExpMethod::Cg;
  if (low == "cgr") return ExpMethod::Cgr;
  if (low == "icg") return ExpMethod::ICg;
  if (low == "icgr") return ExpMethod::ICgr;
  return std::nullopt;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  validate_spec(spec);
  std::vector<GridProblem> problems = build_problems(spec);

  std::vector<double> eps_list = spec.eps_list;
  std::sort(eps_list.begin(), eps_list.end());
  std::vector<ExpMethod> methods = spec.methods;
  std::sort(methods.begin(), methods.end());
  methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
  std::vector<std::uint64_t> seeds = spec.seeds;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  std::vector<ResultRow> rows;
  for (const auto& gp : problems) {
    for (double eps : eps_list) {
      for (ExpMethod method : methods) {
        for (std::uint64_t seed : seeds) {
          rows.push_back(run_cell(gp, eps, method, seed, spec, false).row);
        }
      }
    }
  }
  return rows;
}

std::string emit_table(const std::vector<ResultRow>& rows,
                       TableFormat format) {
  if (rows.empty()) throw ConfigError("emit_table: no rows");
  std::string out;
  if (format == TableFormat::Csv) {
    out += "method,problem,kappa,n_it,cost,r_res_gap,r_sol_err,r_val_err,"
           "termination,seed\n";
    for (const auto& r : rows) {
      out += r.method;
      out += ',';
      out += r.problem_id;
      out += ',';
      out += fmt_sci(r.kappa);
      out += ',';
      out += std::to_string(r.n_it);
      out += ',';
      out += fmt_sci(r.cost);
      out += ',';
      out += fmt_sci(r.r_res_gap);
      out += ',';
      out += fmt_sci(r.r_sol_err);
      out += ',';
      out += fmt_sci(r.r_val_err);
      out += ',';
      out += r.termination;
      out += ',';
      out += std::to_string(r.seed);
      out += '\n';
    }
    return out;
  }

  // text: one aligned block per (problem, eps) group, rows in given order
  std::string current_group;
  for (const auto& r : rows) {
    std::string group = r.problem_id + "|" + fmt_sci(r.eps) + "|" +
                        fmt_sci(r.kappa);
    if (group != current_group) {
      char head[160];
      std::snprintf(head, sizeof head,
                    "\n%s  kappa=%s  eps=%s\n%-6s %6s %12s %12s %12s %12s  %s\n",
                    r.problem_id.c_str(), fmt_sci(r.kappa).c_str(),
                    fmt_sci(r.eps).c_str(), "method", "n_it", "cost",
                    "r.res.gap", "r.sol.err", "r.val.err", "termination");
      out += head;
      current_group = group;
    }
    char line[200];
    std::snprintf(line, sizeof line,
                  "%-6s %6d %12s %12s %12s %12s  %s\n", r.method.c_str(),
                  r.n_it, fmt_sci(r.cost).c_str(), fmt_sci(r.r_res_gap).c_str(),
                  fmt_sci(r.r_sol_err).c_str(), fmt_sci(r.r_val_err).c_str(),
                  r.termination.c_str());
    out += line;
  }
  return out;
}

bool AuditReport::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

AuditReport audit(const ExperimentSpec& spec) {
  if (spec.mode != SolveMode::Theoretical) {
    throw ConfigError("audit requires theoretical mode");
  }
  validate_spec(spec);
  std::vector<GridProblem> problems = build_problems(spec);
  AuditReport report;

  auto add = [&](const std::string& name, const std::string& cell,
                 double measured, double bound) {
    report.checks.push_back(AuditCheck{name, cell, measured <= bound,
                                       measured, bound});
  };

  for (const auto& gp : problems) {
    for (double eps : spec.eps_list) {
      for (ExpMethod method : spec.methods) {
        for (std::uint64_t seed : spec.seeds) {
          CellResult cell = run_cell(gp, eps, method, seed, spec, true);
          std::ostringstream id;
          id << gp.id << " kappa=" << gp.kappa << " eps=" << eps << " "
             << to_string(method) << " seed=" << seed;
          if (!cell.solved) {
            report.checks.push_back(
                AuditCheck{"solved", id.str(), false, 0.0, 0.0});
            continue;
          }
          const QuadraticProblem& problem = gp.problem;
          const SolveReport& rep = cell.report;
          const double eps_pi = 0.5 * std::sqrt(eps);
          const double b_dual = dual_norm(problem.chol, problem.b);
          const double b_2 = norm2(problem.b);

          // residual-gap recurrence, per iteration; a plain-CG identity
          // (reorthogonalization edits r beyond the recurrence)
          const bool plain_cg =
              method == ExpMethod::Cg || method == ExpMethod::ICg;
          if (plain_cg && rep.audit && !rep.audit->alphas.empty()) {
            double worst = 0.0;
            for (std::size_t k = 1; k <= rep.audit->alphas.size(); ++k) {
              worst = std::max(
                  worst, norm2(residual_gap_audit(problem, *rep.audit, k)));
            }
            add("rgap_recurrence", id.str(), worst, 1e-10 * b_2);
          }

          Vector gap = subtract(true_residual(problem, rep.x_final),
                                rep.r_recurred_final);
          add("gap_dual_bound", id.str(), dual_norm(problem.chol, gap),
              eps_pi * b_dual);

          if (rep.termination_reason == TerminationReason::DualNormTest) {
            add("decrease_bound", id.str(), cell.row.r_sol_err, eps);
            add("residual_gap_bound", id.str(), cell.row.r_res_gap,
                0.25 * eps);
          }

          add("value_error_bound", id.str(), cell.row.r_val_err,
              std::sqrt(eps) * (1.0 + std::sqrt(eps)));

          if (is_inexact(method) && rep.n_it <= rep.k_max) {
            add("budget_sum", id.str(), rep.sum_inv_phi_hat, 1.0 + 1e-12);
          }
        }
      }
    }
  }
  return report;
}

std::string format_audit(const AuditReport& report) {
  std::string out;
  for (const auto& c : report.checks) {
    char line[256];
    std::snprintf(line, sizeof line, "[%s] %-20s measured=%.3e bound=%.3e  %s\n",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured,
                  c.bound, c.cell.c_str());
    out += line;
  }
  out += report.all_pass() ? "audit: all checks passed\n"
                           : "audit: FAILURES present\n";
  return out;
}

}  // namespace ikrylov
