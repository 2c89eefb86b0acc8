// Copyright 2026 The nlspectra Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS-IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// nlspectra: command-line front end.
//
//   nlspectra eval     --d 3 --alpha 2 --delta 1 --k 6
//   nlspectra table    --d 2 --alpha-min 0 --alpha-max 3.75 --alpha-steps 16 \
//                      --kdelta-min 0.1 --kdelta-max 100 --kdelta-steps 20 --kdelta-log
//   nlspectra spectrum --d 3 --alpha 2 --delta 0.1 --kmax 32 --out spectrum.csv
//   nlspectra phase    --alpha 1 --beta 1 --order 1000 --nx 400 --ny 400 --out phase.csv
//   nlspectra bench    --d 3 --alpha 2 --delta 1 --k 6 --reps 1000000
//
// Exit codes: 0 success, 2 invalid parameters, 3 non-convergence,
// 1 anything else.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "nlspectra/drummond.hpp"
#include "nlspectra/lattice.hpp"
#include "nlspectra/oracle.hpp"
#include "nlspectra/spectra.hpp"

namespace {

using nlspectra::EvalResult;
using nlspectra::KernelParams;
using nlspectra::Method;
using json = nlohmann::json;

constexpr int kExitInvalid = 2;
constexpr int kExitNoConvergence = 3;
constexpr double kMaxGridCells = 1e6;
constexpr double kMaxPhasePoints = 4e6;
constexpr int kMaxPhaseOrder = 5000;

using Cell = std::variant<double, std::int64_t, std::string>;

std::string format_cell(const Cell& c) {
  if (const auto* v = std::get_if<double>(&c)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return buf;
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

json cell_json(const Cell& c) {
  if (const auto* v = std::get_if<double>(&c)) return std::isfinite(*v) ? json(*v) : json(nullptr);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void write(std::ostream& os, const std::string& format, bool header = true) const {
    if (format == "json") {
      json out = json::array();
      for (const auto& row : rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = cell_json(row[i]);
        out.push_back(std::move(obj));
      }
      if (out.size() == 1) {
        os << out.front().dump() << '\n';
      } else {
        os << out.dump() << '\n';
      }
      return;
    }
    auto line = [&os](const auto& cells, auto fmt) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << fmt(cells[i]);
      os << '\n';
    };
    if (header) line(columns, [](const std::string& s) { return s; });
    for (const auto& row : rows) line(row, format_cell);
  }
};

const std::vector<std::string> kEigenColumns = {"d",      "alpha",  "delta", "m",          "k_mod",
                                                "lambda", "method", "terms", "est_rel_err"};

std::vector<Cell> eigen_row(const KernelParams& p, Cell m, double k_mod, const EvalResult& r) {
  return {std::int64_t{p.d},      p.alpha, p.delta, std::move(m), k_mod, r.lambda,
          std::string(nlspectra::to_string(r.method)), std::int64_t{r.terms}, r.est_rel_err};
}

// Writes through a temporary sibling that is renamed on success and removed
// on failure; "-" or empty means stdout.
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  const std::string partial = path + ".partial";
  try {
    {
      std::ofstream os(partial, std::ios::binary | std::ios::trunc);
      if (!os) throw std::runtime_error("cannot open " + partial);
      fn(os);
      if (!os) throw std::runtime_error("write failed: " + partial);
    }
    std::filesystem::rename(partial, path);
  } catch (...) {
    std::error_code ignored;
    std::filesystem::remove(partial, ignored);
    throw;
  }
}

std::vector<double> grid(double lo, double hi, int steps, bool logarithmic) {
  if (steps < 1) throw nlspectra::domain_error("grid steps must be >= 1");
  if (logarithmic && !(lo > 0 && hi > 0))
    throw nlspectra::domain_error("logarithmic grid needs positive bounds");
  std::vector<double> out(steps);
  for (int i = 0; i < steps; ++i) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    out[i] = logarithmic ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                         : lo + t * (hi - lo);
  }
  if (steps > 1) out.back() = hi;
  return out;
}

EvalResult evaluate(const std::string& method, const KernelParams& p, double k, double tol) {
  if (method == "mac") return nlspectra::lambda_maclaurin(p, k, tol);
  if (method == "asy") return nlspectra::lambda_asymptotic(p, k, tol);
  return nlspectra::lambda_hybrid(p, k, tol);
}

// --- eval -----------------------------------------------------------------

struct EvalArgs {
  KernelParams params;
  double k = 0;
  double tol = nlspectra::kDefaultTolerance;
  std::string format = "csv";
  bool no_header = false;
};

int run_eval(const EvalArgs& a) {
  const auto r = nlspectra::lambda_hybrid(a.params, a.k, a.tol);
  Table t{kEigenColumns, {eigen_row(a.params, a.k * a.k, a.k, r)}};
  t.write(std::cout, a.format, !a.no_header);
  return 0;
}

// --- table ----------------------------------------------------------------

struct TableArgs {
  int d = 1;
  double delta = 1;
  double alpha_min = 0, alpha_max = 0;
  int alpha_steps = 1;
  double kdelta_min = 6, kdelta_max = 6;
  int kdelta_steps = 1;
  bool kdelta_log = false;
  std::string method = "hybrid";
  bool with_oracle = false;
  double tol = nlspectra::kDefaultTolerance;
  unsigned jobs = 0;
  std::string out;
  std::string format = "csv";
};

int run_table(const TableArgs& a) {
  const auto alphas = grid(a.alpha_min, a.alpha_max, a.alpha_steps, false);
  const auto kdeltas = grid(a.kdelta_min, a.kdelta_max, a.kdelta_steps, a.kdelta_log);
  if (static_cast<double>(alphas.size()) * kdeltas.size() > kMaxGridCells)
    throw nlspectra::domain_error("table: more than 1e6 grid cells");
  for (double alpha : alphas) KernelParams{a.d, alpha, a.delta}.validate();
  if (a.with_oracle && a.kdelta_max > 200)
    throw nlspectra::domain_error("table: --with-oracle supports k*delta <= 200");

  const bool both = a.method == "both";
  Table t;
  t.columns = {"d", "alpha", "delta", "kdelta", "k_mod"};
  if (both) {
    t.columns.insert(t.columns.end(), {"lambda_mac", "terms_mac", "est_rel_err_mac",
                                       "lambda_asy", "terms_asy", "est_rel_err_asy"});
  } else {
    t.columns.insert(t.columns.end(), {"method", "lambda", "terms", "est_rel_err"});
  }
  if (a.with_oracle) {
    t.columns.push_back("lambda_oracle");
    if (both) {
      t.columns.insert(t.columns.end(), {"rel_err_mac", "rel_err_asy"});
    } else {
      t.columns.push_back("rel_err");
    }
  }

  const std::size_t cells = alphas.size() * kdeltas.size();
  t.rows.resize(cells);
  std::vector<std::exception_ptr> errors(cells);
  nlspectra::detail::parallel_for(cells, a.jobs, [&](std::size_t i) {
    try {
      const KernelParams p{a.d, alphas[i / kdeltas.size()], a.delta};
      const double kd = kdeltas[i % kdeltas.size()];
      const double k = kd / a.delta;
      std::vector<Cell> row = {std::int64_t{p.d}, p.alpha, p.delta, kd, k};
      std::vector<double> lambdas;
      if (both) {
        for (const char* m : {"mac", "asy"}) {
          const auto r = evaluate(m, p, k, a.tol);
          row.insert(row.end(), {r.lambda, std::int64_t{r.terms}, r.est_rel_err});
          lambdas.push_back(r.lambda);
        }
      } else {
        const auto r = evaluate(a.method, p, k, a.tol);
        row.insert(row.end(), {std::string(nlspectra::to_string(r.method)), r.lambda,
                               std::int64_t{r.terms}, r.est_rel_err});
        lambdas.push_back(r.lambda);
      }
      if (a.with_oracle) {
        const auto ref = nlspectra::oracle::lambda_maclaurin(p, k);
        row.push_back(nlspectra::oracle::to_double(ref));
        for (double v : lambdas) {
          const auto err = abs((nlspectra::oracle::BigReal(v) - ref) / ref);
          row.push_back(nlspectra::oracle::to_double(err));
        }
      }
      t.rows[i] = std::move(row);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  with_output(a.out, [&](std::ostream& os) { t.write(os, a.format); });
  return 0;
}

// --- spectrum -------------------------------------------------------------

struct SpectrumArgs {
  KernelParams params;
  int kmax = 0;
  double tol = nlspectra::kDefaultTolerance;
  unsigned jobs = 0;
  std::string out;
  std::string format = "csv";
};

int run_spectrum(const SpectrumArgs& a) {
  const auto table = nlspectra::lattice_spectrum(a.params, a.kmax, a.tol, a.jobs);
  Table t{kEigenColumns, {}};
  for (const auto& [m, r] : table.entries)
    t.rows.push_back(eigen_row(a.params, static_cast<std::int64_t>(m),
                               nlspectra::WavenumberKey{m}.k_mod(), r));
  with_output(a.out, [&](std::ostream& os) { t.write(os, a.format); });
  return 0;
}

// --- phase ----------------------------------------------------------------

struct PhaseArgs {
  double alpha = 1, beta = 1;
  int order = 1000;
  double re_min = -10, re_max = 10, im_min = -10, im_max = 10;
  int nx = 100, ny = 100;
  unsigned jobs = 0;
  std::string out;
  std::string format = "csv";
};

int run_phase(const PhaseArgs& a) {
  if (a.nx < 1 || a.ny < 1 || static_cast<double>(a.nx) * a.ny > kMaxPhasePoints)
    throw nlspectra::domain_error("phase: need 1 <= nx*ny <= 4e6");
  if (a.order < 0 || a.order > kMaxPhaseOrder)
    throw nlspectra::domain_error("phase: order must be in [0, 5000]");
  const auto xs = grid(a.re_min, a.re_max, a.nx, false);
  const auto ys = grid(a.im_min, a.im_max, a.ny, false);
  using C = std::complex<double>;
  Table t{{"re_z", "im_z", "re_T", "im_T", "finite"}, {}};
  t.rows.resize(xs.size() * ys.size());
  nlspectra::detail::parallel_for(t.rows.size(), a.jobs, [&](std::size_t i) {
    const C z(xs[i % xs.size()], ys[i / xs.size()]);
    C value(std::nan(""), std::nan(""));
    if (z != C(0)) {
      const nlspectra::HypTerm2F0<C> term{C(a.alpha), C(a.beta), z};
      value = nlspectra::drummond_2f0_at_order(term, 0, static_cast<std::size_t>(a.order)) - C(1);
    }
    const bool finite = std::isfinite(value.real()) && std::isfinite(value.imag());
    if (!finite) value = C(std::nan(""), std::nan(""));
    t.rows[i] = {z.real(), z.imag(), value.real(), value.imag(), std::int64_t{finite ? 1 : 0}};
  });
  with_output(a.out, [&](std::ostream& os) { t.write(os, a.format); });
  return 0;
}

// --- bench ----------------------------------------------------------------

struct BenchArgs {
  KernelParams params;
  double k = 0;
  long long reps = 1000;
  std::string method = "hybrid";
};

int run_bench(const BenchArgs& a) {
  if (a.reps < 1) throw nlspectra::domain_error("bench: reps must be >= 1");
  a.params.validate();
  using clock = std::chrono::steady_clock;
  volatile double sink = 0;
  EvalResult last;
  const long long warmup = std::min<long long>(a.reps, 1000);
  for (long long i = 0; i < warmup; ++i)
    sink = sink + evaluate(a.method, a.params, a.k, nlspectra::kDefaultTolerance).lambda;

  const long long batch = std::min<long long>(a.reps, 1000);
  double total_ns = 0, min_ns = std::numeric_limits<double>::infinity();
  long long done = 0;
  while (done < a.reps) {
    const long long n = std::min(batch, a.reps - done);
    const auto start = clock::now();
    for (long long i = 0; i < n; ++i) {
      last = evaluate(a.method, a.params, a.k, nlspectra::kDefaultTolerance);
      sink = sink + last.lambda;
    }
    const double ns = std::chrono::duration<double, std::nano>(clock::now() - start).count();
    total_ns += ns;
    min_ns = std::min(min_ns, ns / n);
    done += n;
  }
  json out = {{"d", a.params.d},
              {"alpha", a.params.alpha},
              {"delta", a.params.delta},
              {"k", a.k},
              {"method", std::string(nlspectra::to_string(last.method))},
              {"reps", a.reps},
              {"mean_ns", total_ns / a.reps},
              {"min_ns", min_ns},
              {"lambda", last.lambda}};
  std::cout << out.dump() << '\n';
  return 0;
}

void add_kernel_options(CLI::App* cmd, KernelParams& p, bool with_delta = true) {
  cmd->add_option("--d", p.d, "spatial dimension (1..10)")->required();
  cmd->add_option("--alpha", p.alpha, "kernel singularity strength, 0 <= alpha < d+2")->required();
  if (with_delta) cmd->add_option("--delta", p.delta, "horizon > 0")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier spectra of nonlocal diffusion operators with algebraic kernels"};
  app.require_subcommand(1);
  const auto formats = CLI::IsMember({"csv", "json"});

  EvalArgs eval;
  auto* cmd_eval = app.add_subcommand("eval", "one eigenvalue lambda_delta(k)");
  add_kernel_options(cmd_eval, eval.params);
  cmd_eval->add_option("--k", eval.k, "wavenumber |k| >= 0")->required();
  cmd_eval->add_option("--tol", eval.tol, "relative tolerance");
  cmd_eval->add_option("--format", eval.format)->check(formats);
  cmd_eval->add_flag("--no-header", eval.no_header, "omit the CSV header line");

  TableArgs table;
  auto* cmd_table = app.add_subcommand("table", "sweep over (alpha, k*delta)");
  cmd_table->add_option("--d", table.d)->required();
  cmd_table->add_option("--delta", table.delta, "horizon (default 1)");
  cmd_table->add_option("--alpha-min", table.alpha_min)->required();
  cmd_table->add_option("--alpha-max", table.alpha_max)->required();
  cmd_table->add_option("--alpha-steps", table.alpha_steps)->required();
  cmd_table->add_option("--kdelta-min", table.kdelta_min)->required();
  cmd_table->add_option("--kdelta-max", table.kdelta_max)->required();
  cmd_table->add_option("--kdelta-steps", table.kdelta_steps)->required();
  cmd_table->add_flag("--kdelta-log", table.kdelta_log, "logarithmic k*delta spacing");
  cmd_table->add_option("--method", table.method)
      ->check(CLI::IsMember({"mac", "asy", "hybrid", "both"}));
  cmd_table->add_flag("--with-oracle", table.with_oracle,
                      "add extended-precision reference and relative errors");
  cmd_table->add_option("--tol", table.tol);
  cmd_table->add_option("--jobs", table.jobs, "worker threads (0 = all cores)");
  cmd_table->add_option("--out", table.out, "output file (default stdout)");
  cmd_table->add_option("--format", table.format)->check(formats);

  SpectrumArgs spectrum;
  auto* cmd_spectrum = app.add_subcommand("spectrum", "lambda for every distinct |k|^2 of a lattice block");
  add_kernel_options(cmd_spectrum, spectrum.params);
  cmd_spectrum->add_option("--kmax", spectrum.kmax, "block {-kmax..kmax}^d")->required();
  cmd_spectrum->add_option("--tol", spectrum.tol);
  cmd_spectrum->add_option("--jobs", spectrum.jobs, "worker threads (0 = all cores)");
  cmd_spectrum->add_option("--out", spectrum.out, "output file (default stdout)");
  cmd_spectrum->add_option("--format", spectrum.format)->check(formats);

  PhaseArgs phase;
  auto* cmd_phase = app.add_subcommand("phase", "T_0^(K)(z) - 1 on a complex grid");
  cmd_phase->add_option("--alpha", phase.alpha)->required();
  cmd_phase->add_option("--beta", phase.beta)->required();
  cmd_phase->add_option("--order", phase.order, "Drummond order K")->required();
  cmd_phase->add_option("--re-min", phase.re_min);
  cmd_phase->add_option("--re-max", phase.re_max);
  cmd_phase->add_option("--im-min", phase.im_min);
  cmd_phase->add_option("--im-max", phase.im_max);
  cmd_phase->add_option("--nx", phase.nx);
  cmd_phase->add_option("--ny", phase.ny);
  cmd_phase->add_option("--jobs", phase.jobs, "worker threads (0 = all cores)");
  cmd_phase->add_option("--out", phase.out, "output file (default stdout)");
  cmd_phase->add_option("--format", phase.format)->check(formats);

  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand("bench", "per-call timing of one eigenvalue");
  add_kernel_options(cmd_bench, bench.params);
  cmd_bench->add_option("--k", bench.k)->required();
  cmd_bench->add_option("--reps", bench.reps)->required();
  cmd_bench->add_option("--method", bench.method, "force a path: mac, asy or hybrid")
      ->check(CLI::IsMember({"mac", "asy", "hybrid"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*cmd_eval) return run_eval(eval);
    if (*cmd_table) return run_table(table);
    if (*cmd_spectrum) return run_spectrum(spectrum);
    if (*cmd_phase) return run_phase(phase);
    if (*cmd_bench) return run_bench(bench);
  } catch (const nlspectra::convergence_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const nlspectra::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
