// Copyright 2026 The bistopriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: build and analyze bistochastic matrices,
// anonymize datasets, estimate original frequencies, decompose matrices
// into probabilistic permutations, and reproduce the reference guarantee
// grid.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error, 3 numerical
// failure (singular matrix / no perfect matching).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bistopriv/bistopriv.hpp"

namespace {

using namespace bistopriv;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case errc::io_failure:
      return 2;
    case errc::singular_matrix:
    case errc::no_perfect_matching:
      return 3;
    default:
      return 1;
  }
}

std::string percent(double beta_value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f%%", decimals, 100.0 * beta_value);
  return buf;
}

void print_matrix_stats(const BistochasticMatrix& m, int decimals) {
  const double h = entropy_rate(m);
  const double budget = std::log2(double(m.size()));
  std::cout << "H(P) = " << detail::format_shortest(h) << " bits\n";
  std::cout << "budget = " << detail::format_shortest(budget) << " bits\n";
  if (m.size() >= 2) {
    std::cout << "beta = " << percent(beta(m), decimals) << " ("
              << detail::format_shortest(beta(m)) << ")\n";
  }
  const double bound = dp_epsilon_bound(m);
  std::cout << "dp epsilon bound = "
            << (std::isinf(bound) ? std::string("inf")
                                  : detail::format_shortest(bound))
            << "\n";
}

// Finds the scalar parameter of a monotone matrix family whose beta matches
// the target within 1e-4.
double bisect_for_beta(const std::function<double(double)>& beta_of,
                       double lo, double hi, double target) {
  double beta_lo = beta_of(lo);
  double beta_hi = beta_of(hi);
  const bool decreasing = beta_lo > beta_hi;
  const double reachable_max = decreasing ? beta_lo : beta_hi;
  const double reachable_min = decreasing ? beta_hi : beta_lo;
  if (target > reachable_max + 1e-4 || target < reachable_min - 1e-4) {
    throw Error(errc::invalid_argument,
                "target beta " + detail::format_shortest(target) +
                    " unattainable in this family (range " +
                    detail::format_shortest(reachable_min) + ".." +
                    detail::format_shortest(reachable_max) + ")");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double b = beta_of(mid);
    if (std::abs(b - target) <= 1e-6) return mid;
    if ((b > target) == decreasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double achieved = beta_of(0.5 * (lo + hi));
  if (std::abs(achieved - target) > 1e-4) {
    throw Error(errc::invalid_argument,
                "bisection stalled at beta " +
                    detail::format_shortest(achieved));
  }
  return 0.5 * (lo + hi);
}

AnatomyPartition load_partition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::io_failure, "cannot open " + path);
  std::vector<std::vector<int>> classes;
  std::string line;
  while (std::getline(in, line)) {
    const auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::vector<int> cls;
    std::string token;
    for (char c : trimmed) {
      if (c == ' ' || c == '\t' || c == ',') {
        if (!token.empty()) {
          cls.push_back(std::stoi(token));
          token.clear();
        }
      } else {
        token += c;
      }
    }
    if (!token.empty()) cls.push_back(std::stoi(token));
    if (!cls.empty()) classes.push_back(std::move(cls));
  }
  return AnatomyPartition::validate(std::move(classes));
}

// Transition-matrix loader for the estimator: requires right stochasticity
// (rows sum to 1) but not bistochasticity, since the classical estimator
// predates that constraint.
Eigen::MatrixXd load_right_stochastic(const std::string& path,
                                      double tolerance) {
  std::ifstream in(path);
  if (!in) throw Error(errc::io_failure, "cannot open " + path);
  const auto rows = detail::parse_csv(in);
  if (rows.empty()) throw Error(errc::io_failure, "empty matrix file " + path);
  const auto r = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd entries(r, r);
  for (Eigen::Index u = 0; u < r; ++u) {
    if (static_cast<Eigen::Index>(rows[u].size()) != r) {
      throw Error(errc::not_square,
                  path + ": row " + std::to_string(u) + " has " +
                      std::to_string(rows[u].size()) + " fields, expected " +
                      std::to_string(r));
    }
    for (Eigen::Index v = 0; v < r; ++v) {
      double value = 0.0;
      if (!detail::parse_double(rows[u][v], value)) {
        throw Error(errc::unparseable_cell,
                    path + ": row " + std::to_string(u) + " col " +
                        std::to_string(v) + ": not a number");
      }
      if (value < 0.0) {
        throw Error(errc::negative_entry,
                    path + ": negative entry at row " + std::to_string(u));
      }
      entries(u, v) = value;
    }
    const double sum = entries.row(u).sum();
    if (std::abs(sum - 1.0) > tolerance) {
      throw Error(errc::row_sum_violation,
                  path + ": row " + std::to_string(u) + " sums to " +
                      detail::format_shortest(sum));
    }
  }
  return entries;
}

struct ConfigEntry {
  std::optional<ColumnMode> mode;
  std::string matrix_path;
};

std::optional<ColumnMode> parse_mode(std::string_view token) {
  if (token == "sample") return ColumnMode::sample;
  if (token == "linear") return ColumnMode::linear;
  if (token == "permute") return ColumnMode::permute;
  return std::nullopt;
}

// Anonymization config: one line per column, `column: mode matrix_path` or
// `column: matrix_path` (mode then comes from --mode).
std::map<std::string, ConfigEntry> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::io_failure, "cannot open " + path);
  std::map<std::string, ConfigEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    const auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto colon = trimmed.find(':');
    if (colon == std::string_view::npos) {
      throw Error(errc::invalid_schema,
                  path + ": expected 'column: [mode] matrix_path', got '" +
                      std::string(trimmed) + "'");
    }
    const std::string column(detail::trim(trimmed.substr(0, colon)));
    auto rhs = detail::trim(trimmed.substr(colon + 1));
    ConfigEntry entry;
    const auto space = rhs.find_first_of(" \t");
    if (space != std::string_view::npos) {
      if (auto mode = parse_mode(rhs.substr(0, space))) {
        entry.mode = mode;
        rhs = detail::trim(rhs.substr(space + 1));
      }
    }
    if (rhs.empty()) {
      throw Error(errc::invalid_schema,
                  path + ": no matrix path for column '" + column + "'");
    }
    entry.matrix_path = std::string(rhs);
    if (!entries.emplace(column, std::move(entry)).second) {
      throw Error(errc::invalid_schema,
                  path + ": duplicate column '" + column + "'");
    }
  }
  return entries;
}

std::string join(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += detail::format_shortest(v(i));
  }
  return out;
}

// ---- subcommand implementations -------------------------------------------

int run_matrix_build(const std::string& kind, int size, double epsilon,
                     int k, const std::string& partition_path, double p11,
                     double alpha, std::optional<double> target_beta,
                     double gamma, const std::string& out_path,
                     int precision) {
  std::optional<BistochasticMatrix> m;
  if (kind == "dp") {
    if (target_beta) {
      double hi = 1.0;
      while (beta(dp_matrix(size, hi)) > *target_beta && hi < 4096.0) {
        hi *= 2.0;
      }
      epsilon = bisect_for_beta(
          [&](double e) { return beta(dp_matrix(size, e)); }, 0.0, hi,
          *target_beta);
      std::cout << "epsilon = " << detail::format_shortest(epsilon) << "\n";
    }
    m = dp_matrix(size, epsilon);
  } else if (kind == "secrecy") {
    m = perfect_secrecy_matrix(size);
  } else if (kind == "anatomy") {
    if (!partition_path.empty()) {
      m = anatomy_matrix(load_partition(partition_path));
    } else {
      m = anatomy_matrix(contiguous_partition(size, k));
    }
  } else if (kind == "circulant") {
    if (target_beta) {
      p11 = bisect_for_beta(
          [&](double p) { return beta(constant_circulant(size, p)); },
          1.0 / double(size), 1.0, *target_beta);
      std::cout << "p11 = " << detail::format_shortest(p11) << "\n";
    }
    m = constant_circulant(size, p11);
  } else if (kind == "tridiagonal") {
    auto family = [&](double a) {
      return beta(tridiagonal_matrix(std::vector<double>(size - 1, a)));
    };
    if (target_beta) {
      // beta is increasing in alpha only up to 1/3 (the middle-row entropy
      // peaks there); bisection is restricted to that monotone range
      alpha = bisect_for_beta(family, 0.0, 1.0 / 3.0, *target_beta);
      std::cout << "alpha = " << detail::format_shortest(alpha) << "\n";
    }
    m = tridiagonal_matrix(std::vector<double>(size - 1, alpha));
  } else {
    throw Error(errc::invalid_argument, "unknown matrix kind '" + kind + "'");
  }

  if (gamma > 0.0) {
    m = ergodicize(*m, gamma);
    std::cout << "ergodicized with gamma = " << detail::format_shortest(gamma)
              << " (row/column sums may exceed 1 by up to "
              << detail::format_shortest(m->super_slack()) << ")\n";
  }
  save_matrix(*m, out_path);
  std::cout << "wrote " << out_path << " (" << m->size() << "x" << m->size()
            << " " << kind << ")\n";
  print_matrix_stats(*m, precision);
  return 0;
}

int run_analyze(const std::vector<std::string>& paths, double tolerance,
                bool kv, int precision) {
  std::vector<BistochasticMatrix> matrices;
  PrivacyReport report;
  report.mode = PrivacyMode::conservative;
  for (const auto& path : paths) {
    try {
      matrices.push_back(load_matrix(path, tolerance));
    } catch (const Error& e) {
      throw Error(e.code(), "file " + path + ": " + e.what());
    }
    PrivacyReport::Attribute attr;
    attr.name = path;
    attr.entropy_bits = entropy_rate(matrices.back());
    attr.budget_bits = std::log2(double(matrices.back().size()));
    attr.beta = beta(matrices.back());
    report.per_attribute.push_back(std::move(attr));
  }
  report.aggregate_beta = conservative_beta(matrices);
  std::cout << (kv ? report.to_kv() : report.to_text(4, precision));
  return 0;
}

int run_anonymize(const std::string& data_path, const std::string& schema_path,
                  const std::string& config_path, std::uint64_t seed,
                  const std::string& out_path, std::string report_path,
                  const std::string& default_mode, bool parallel,
                  double tolerance, bool kv, int precision) {
  const SchemaSpec schema = load_schema(schema_path);
  const Dataset ds = load_dataset(data_path, schema);
  const auto config = load_config(config_path);

  std::vector<BistochasticMatrix> matrices;
  std::vector<ColumnMode> modes;
  for (const auto& col : ds.columns()) {
    const auto it = config.find(col.name());
    if (it == config.end()) {
      throw Error(errc::missing_column,
                  "config has no entry for column '" + col.name() + "'");
    }
    std::optional<ColumnMode> mode = it->second.mode;
    if (!mode) mode = parse_mode(default_mode);
    if (!mode) {
      throw Error(errc::invalid_argument,
                  "no mode for column '" + col.name() +
                      "' (set one in the config or pass --mode)");
    }
    modes.push_back(*mode);
    matrices.push_back(load_matrix(it->second.matrix_path, tolerance));
  }
  for (const auto& [column, entry] : config) {
    bool known = false;
    for (const auto& col : ds.columns()) known |= (col.name() == column);
    if (!known) {
      throw Error(errc::missing_column,
                  "config names unknown column '" + column + "'");
    }
  }

  const AnonymizeResult result =
      anonymize_conservative(ds, matrices, modes, seed, parallel);
  save_dataset(result.dataset, out_path);
  if (report_path.empty()) report_path = out_path + ".report.txt";
  std::ofstream report_out(report_path);
  if (!report_out) {
    throw Error(errc::io_failure, "cannot write " + report_path);
  }
  report_out << result.report.to_text(4, precision);
  std::cout << "wrote " << out_path << " and " << report_path << "\n";
  std::cout << (kv ? result.report.to_kv()
                   : result.report.to_text(4, precision));
  return 0;
}

int run_estimate(const std::string& counts_path, const std::string& matrix_path,
                 double tolerance) {
  std::ifstream in(counts_path);
  if (!in) throw Error(errc::io_failure, "cannot open " + counts_path);
  std::vector<double> counts;
  std::string line;
  while (std::getline(in, line)) {
    const auto trimmed = detail::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    double value = 0.0;
    if (!detail::parse_double(trimmed, value) || value < 0.0) {
      throw Error(errc::unparseable_cell,
                  counts_path + ": '" + std::string(trimmed) +
                      "' is not a nonnegative count");
    }
    counts.push_back(value);
  }
  double total = 0.0;
  for (double c : counts) total += c;
  if (counts.empty() || total <= 0.0) {
    throw Error(errc::not_a_distribution,
                counts_path + ": counts must be nonempty with positive sum");
  }
  Eigen::VectorXd lambda(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) lambda(i) = counts[i] / total;

  const Eigen::MatrixXd transition =
      load_right_stochastic(matrix_path, tolerance);
  const FrequencyEstimate est =
      estimate_frequencies(Distribution(lambda), transition);
  std::cout << "lambda: " << join(lambda) << "\n";
  std::cout << "pi_hat: " << join(est.pi_hat) << "\n";
  if (est.has_negative) {
    std::cout << "warning: pi_hat has negative components (sampling noise); "
                 "values reported raw\n";
  }
  return 0;
}

int run_decompose(const std::string& matrix_path, double tolerance,
                  double zero_threshold) {
  const BistochasticMatrix m = load_matrix(matrix_path, tolerance);
  const BirkhoffDecomposition d = decompose(m, zero_threshold);
  std::cout << d.to_lines();
  const double err = (recompose(d) - m.entries()).cwiseAbs().maxCoeff();
  std::cout << "recomposition max error: " << detail::format_shortest(err)
            << "\n";
  return 0;
}

int run_table1(int precision) {
  std::cout << format_table1(table1_rows(), precision);
  std::cout << "\nMISMATCH marks cells where the entropy-rate formula "
               "disagrees with the\nreported percentage by more than one "
               "point.\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bistochastic privacy toolkit"};
  app.require_subcommand(1);

  // matrix-build
  auto* build = app.add_subcommand(
      "matrix-build", "build a named bistochastic matrix and report its "
                      "privacy guarantee");
  std::string build_kind;
  int build_size = 12;
  double build_epsilon = 1.0;
  int build_k = 2;
  std::string build_partition;
  double build_p11 = 0.9;
  double build_alpha = 0.1;
  double build_gamma = 0.0;
  std::optional<double> build_target_beta;
  std::string build_out;
  int precision = 0;
  build->add_option("--kind", build_kind,
                    "dp | secrecy | anatomy | circulant | tridiagonal")
      ->required();
  build->add_option("--size", build_size, "matrix size r (default 12)");
  build->add_option("--epsilon", build_epsilon, "dp: privacy budget");
  build->add_option("--k", build_k,
                    "anatomy: contiguous classes of size k; the final class "
                    "absorbs any remainder so every class has >= k members");
  build->add_option("--partition", build_partition,
                    "anatomy: file with one class of indices per line");
  build->add_option("--p11", build_p11, "circulant: diagonal probability");
  build->add_option("--alpha", build_alpha,
                    "tridiagonal: constant off-diagonal parameter");
  build->add_option("--gamma", build_gamma,
                    "replace zeros by gamma (super doubly stochastic)");
  double target_beta_raw = -1.0;
  build->add_option("--target-beta", target_beta_raw,
                    "choose the family parameter to hit this beta in (0,1]");
  build->add_option("--out", build_out, "output matrix file")->required();
  build->add_option("--precision", precision,
                    "decimal places on displayed percentages");

  // analyze
  auto* analyze =
      app.add_subcommand("analyze", "privacy report for matrix files");
  std::vector<std::string> analyze_paths;
  double tolerance = kFileTolerance;
  bool kv = false;
  analyze->add_option("files", analyze_paths, "matrix files")->required();
  analyze->add_option("--tolerance", tolerance, "validation tolerance");
  analyze->add_flag("--kv", kv, "machine-readable key=value output");
  analyze->add_option("--precision", precision, "percentage decimals");

  // anonymize
  auto* anonymize = app.add_subcommand(
      "anonymize", "apply per-column bistochastic matrices to a dataset");
  std::string an_data, an_schema, an_config, an_out, an_report;
  std::uint64_t an_seed = 0;
  std::string an_mode;
  bool an_parallel = false;
  anonymize->add_option("--data", an_data, "input dataset (CSV with header)")
      ->required();
  anonymize->add_option("--schema", an_schema, "schema file")->required();
  anonymize->add_option("--config", an_config,
                        "per-column matrix/mode config file")
      ->required();
  anonymize->add_option("--seed", an_seed, "64-bit unsigned master seed")
      ->required();
  anonymize->add_option("--out", an_out, "output dataset file")->required();
  anonymize->add_option("--report", an_report,
                        "report file (default <out>.report.txt)");
  anonymize->add_option("--mode", an_mode,
                        "default mode for config lines that omit one "
                        "(sample | linear | permute)");
  anonymize->add_flag("--parallel", an_parallel,
                      "process columns in parallel (output is identical to "
                      "serial execution)");
  anonymize->add_option("--tolerance", tolerance, "matrix load tolerance");
  anonymize->add_flag("--kv", kv, "machine-readable report on stdout");
  anonymize->add_option("--precision", precision, "percentage decimals");

  // estimate
  auto* estimate = app.add_subcommand(
      "estimate", "recover original frequencies from randomized counts");
  std::string est_counts, est_matrix;
  estimate->add_option("--counts", est_counts,
                       "file with one observed count per level")
      ->required();
  estimate->add_option("--matrix", est_matrix, "transition matrix file")
      ->required();
  estimate->add_option("--tolerance", tolerance, "row-sum tolerance");

  // decompose
  auto* decompose_cmd = app.add_subcommand(
      "decompose", "Birkhoff decomposition into weighted permutations");
  std::string dec_matrix;
  double dec_threshold = kDefaultZeroThreshold;
  decompose_cmd->add_option("matrix", dec_matrix, "matrix file")->required();
  decompose_cmd->add_option("--tolerance", tolerance,
                            "matrix load tolerance");
  decompose_cmd->add_option("--zero-threshold", dec_threshold,
                            "entries below this are treated as zero");

  // table1
  auto* table1 = app.add_subcommand(
      "table1", "reference guarantee grid for twelve 12x12 matrices");
  table1->add_option("--precision", precision, "percentage decimals");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (build->parsed()) {
      if (target_beta_raw >= 0.0) {
        if (target_beta_raw <= 0.0 || target_beta_raw > 1.0) {
          throw Error(errc::invalid_argument, "target beta must be in (0,1]");
        }
        build_target_beta = target_beta_raw;
      }
      return run_matrix_build(build_kind, build_size, build_epsilon, build_k,
                              build_partition, build_p11, build_alpha,
                              build_target_beta, build_gamma, build_out,
                              precision);
    }
    if (analyze->parsed()) {
      return run_analyze(analyze_paths, tolerance, kv, precision);
    }
    if (anonymize->parsed()) {
      return run_anonymize(an_data, an_schema, an_config, an_seed, an_out,
                           an_report, an_mode, an_parallel, tolerance, kv,
                           precision);
    }
    if (estimate->parsed()) {
      return run_estimate(est_counts, est_matrix, tolerance);
    }
    if (decompose_cmd->parsed()) {
      return run_decompose(dec_matrix, tolerance, dec_threshold);
    }
    if (table1->parsed()) {
      return run_table1(precision);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << errc_name(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
