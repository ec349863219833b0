// Command-line driver: builds an experiment grid from flags or a plain
// key = value config file, runs it and writes CSV or aligned-text tables.
// With --audit the grid runs in theoretical mode and the invariant report
// is emitted instead.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ikrylov/errors.hpp"
#include "ikrylov/harness.hpp"

namespace {

using ikrylov::ConfigError;
using ikrylov::ExperimentSpec;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string token;
  std::istringstream in(s);
  while (std::getline(in, token, sep)) out.push_back(token);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + what + ": '" + s + "'");
  }
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad integer value for " + what + ": '" + s + "'");
  }
}

void add_problem_token(ExperimentSpec& spec, const std::string& token) {
  if (token.rfind("synth:", 0) == 0) {
    // repeated synth tokens accumulate kappas; n/seed last-wins
    if (!spec.synthetic) spec.synthetic = ikrylov::SyntheticSource{};
    auto& src = *spec.synthetic;
    for (const std::string& kv : split(token.substr(6), ',')) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("bad synth field: " + kv);
      std::string key = trim(kv.substr(0, eq));
      std::string value = trim(kv.substr(eq + 1));
      if (key == "n") {
        src.n = static_cast<std::size_t>(parse_u64(value, "n"));
      } else if (key == "kappa") {
        src.kappa_list.push_back(parse_double(value, "kappa"));
      } else if (key == "lambda_max") {
        src.lambda_max = parse_double(value, "lambda_max");
      } else if (key == "seed") {
        src.seed = parse_u64(value, "seed");
      } else {
        throw ConfigError("unknown synth field: " + key);
      }
    }
    if (src.kappa_list.empty()) {
      throw ConfigError("synth problem needs at least one kappa");
    }
  } else if (token.rfind("mm:", 0) == 0) {
    if (!spec.matrix_market) spec.matrix_market = ikrylov::MatrixMarketSource{};
    auto& src = *spec.matrix_market;
    ikrylov::MatrixMarketSource::File file;
    std::vector<std::string> parts = split(token.substr(3), ',');
    if (parts.empty() || parts[0].empty()) {
      throw ConfigError("mm problem needs a path");
    }
    file.path = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) {
      auto eq = parts[i].find('=');
      if (eq == std::string::npos) {
        throw ConfigError("bad mm field: " + parts[i]);
      }
      std::string key = trim(parts[i].substr(0, eq));
      std::string value = trim(parts[i].substr(eq + 1));
      if (key == "lmin") {
        file.lambda_min = parse_double(value, "lmin");
      } else if (key == "lmax") {
        file.lambda_max = parse_double(value, "lmax");
      } else if (key == "rhs_seed") {
        src.rhs_seed = parse_u64(value, "rhs_seed");
      } else {
        throw ConfigError("unknown mm field: " + key);
      }
    }
    src.files.push_back(std::move(file));
  } else {
    throw ConfigError("problem must start with synth: or mm: -- got " + token);
  }
}

struct CliValues {
  std::vector<std::string> problems;
  std::vector<double> eps;
  std::vector<std::string> methods;
  std::string mode = "practical";
  std::string oracle = "continuous";
  bool reorth = false;
  int delay = 10;
  int kmax = 0;
  std::vector<std::uint64_t> seeds;
  bool perturb = false;
  std::string out_path;
  std::string format = "csv";
  bool run_audit = false;
  std::string config_path;
};

struct CliSetFlags {
  bool mode = false, oracle = false, reorth = false, delay = false;
  bool kmax = false, perturb = false, out = false, format = false;
  bool audit = false;
};

/// Plain "key = value" file; repeated keys accumulate for list-valued
/// options. CLI flags override whatever the file set.
void load_config_file(const std::string& path, CliValues& v,
                      const CliSetFlags& set) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  CliValues file;
  CliSetFlags fset;
  std::string line;
  while (std::getline(in, line)) {
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ": expected key = value, got '" + s + "'");
    }
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key == "problem") file.problems.push_back(value);
    else if (key == "eps") file.eps.push_back(parse_double(value, "eps"));
    else if (key == "method") file.methods.push_back(value);
    else if (key == "mode") file.mode = value, fset.mode = true;
    else if (key == "oracle") file.oracle = value, fset.oracle = true;
    else if (key == "reorth")
      file.reorth = value == "true" || value == "1", fset.reorth = true;
    else if (key == "delay")
      file.delay = static_cast<int>(parse_u64(value, "delay")),
      fset.delay = true;
    else if (key == "kmax")
      file.kmax = static_cast<int>(parse_u64(value, "kmax")), fset.kmax = true;
    else if (key == "seed") file.seeds.push_back(parse_u64(value, "seed"));
    else if (key == "perturb-estimates")
      file.perturb = value == "true" || value == "1", fset.perturb = true;
    else if (key == "out") file.out_path = value, fset.out = true;
    else if (key == "format") file.format = value, fset.format = true;
    else if (key == "audit")
      file.run_audit = value == "true" || value == "1", fset.audit = true;
    else throw ConfigError(path + ": unknown key '" + key + "'");
  }
  // file fills anything the command line did not set explicitly
  if (v.problems.empty()) v.problems = file.problems;
  if (v.eps.empty()) v.eps = file.eps;
  if (v.methods.empty()) v.methods = file.methods;
  if (!set.mode && fset.mode) v.mode = file.mode;
  if (!set.oracle && fset.oracle) v.oracle = file.oracle;
  if (!set.reorth && fset.reorth) v.reorth = file.reorth;
  if (!set.delay && fset.delay) v.delay = file.delay;
  if (!set.kmax && fset.kmax) v.kmax = file.kmax;
  if (v.seeds.empty()) v.seeds = file.seeds;
  if (!set.perturb && fset.perturb) v.perturb = file.perturb;
  if (!set.out && fset.out) v.out_path = file.out_path;
  if (!set.format && fset.format) v.format = file.format;
  if (!set.audit && fset.audit) v.run_audit = file.run_audit;
}

ExperimentSpec build_spec(const CliValues& v) {
  ExperimentSpec spec;
  for (const std::string& token : v.problems) add_problem_token(spec, token);
  spec.eps_list = v.eps;
  for (const std::string& name : v.methods) {
    auto m = ikrylov::parse_method(name);
    if (!m) throw ConfigError("unknown method: " + name);
    spec.methods.push_back(*m);
  }
  if (v.mode == "theoretical") spec.mode = ikrylov::SolveMode::Theoretical;
  else if (v.mode == "practical") spec.mode = ikrylov::SolveMode::Practical;
  else throw ConfigError("mode must be theoretical or practical");
  if (v.oracle == "continuous") spec.oracle = ikrylov::OracleKind::Continuous;
  else if (v.oracle == "multiprecision")
    spec.oracle = ikrylov::OracleKind::MultiPrecision;
  else throw ConfigError("oracle must be continuous or multiprecision");
  spec.estimate_perturbation = v.perturb;
  spec.delay_d = v.delay;
  spec.k_max_user = v.kmax;
  spec.reorth_override = v.reorth;
  spec.seeds = v.seeds.empty() ? std::vector<std::uint64_t>{1} : v.seeds;
  return spec;
}

int run(const CliValues& values) {
  ExperimentSpec spec = build_spec(values);
  std::string output;
  bool audit_failed = false;
  if (values.run_audit) {
    ikrylov::AuditReport report = ikrylov::audit(spec);
    output = ikrylov::format_audit(report);
    audit_failed = !report.all_pass();
  } else {
    std::vector<ikrylov::ResultRow> rows = ikrylov::run_experiment(spec);
    ikrylov::TableFormat format;
    if (values.format == "csv") format = ikrylov::TableFormat::Csv;
    else if (values.format == "text") format = ikrylov::TableFormat::Text;
    else throw ConfigError("format must be csv or text");
    output = ikrylov::emit_table(rows, format);
  }
  if (values.out_path.empty()) {
    std::cout << output;
  } else {
    std::ofstream out(values.out_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file: " + values.out_path);
    out << output;
  }
  return audit_failed ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inexact-product FOM/CG experiment driver"};
  CliValues v;
  app.add_option("--problem", v.problems,
                 "problem source: synth:n=200,kappa=1e2 or mm:path.mtx"
                 "[,lmin=..,lmax=..,rhs_seed=..]");
  app.add_option("--eps", v.eps, "target relative decrease (repeatable)");
  app.add_option("--method", v.methods,
                 "FOM | iFOM | CG | CGR | iCG | iCGR (repeatable)");
  app.add_option("--mode", v.mode, "theoretical | practical");
  app.add_option("--oracle", v.oracle, "continuous | multiprecision");
  app.add_flag("--reorth", v.reorth, "force reorthogonalization on CG/iCG");
  app.add_option("--delay", v.delay, "stabilization delay d");
  app.add_option("--kmax", v.kmax, "iteration cap (0 = 3n)");
  app.add_option("--seed", v.seeds, "run seed (repeatable)");
  app.add_flag("--perturb-estimates", v.perturb,
               "randomly perturb the spectral estimates per seed");
  app.add_option("--out", v.out_path, "output path (default stdout)");
  app.add_option("--format", v.format, "csv | text");
  app.add_flag("--audit", v.run_audit,
               "run the theoretical-mode invariant audit");
  app.add_option("--config", v.config_path, "key = value config file");

  try {
    app.parse(argc, argv);
    if (!v.config_path.empty()) {
      CliSetFlags set;
      set.mode = app.count("--mode") > 0;
      set.oracle = app.count("--oracle") > 0;
      set.reorth = app.count("--reorth") > 0;
      set.delay = app.count("--delay") > 0;
      set.kmax = app.count("--kmax") > 0;
      set.perturb = app.count("--perturb-estimates") > 0;
      set.out = app.count("--out") > 0;
      set.format = app.count("--format") > 0;
      set.audit = app.count("--audit") > 0;
      load_config_file(v.config_path, v, set);
    }
    return run(v);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
