#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "sparseshare/errors.hpp"
#include "sparseshare/leakage.hpp"
#include "sparseshare/optimizer.hpp"
#include "sparseshare/reference_data.hpp"
#include "sparseshare/rng.hpp"
#include "sparseshare/sharing.hpp"
#include "sparseshare/simulator.hpp"

namespace sparseshare::cli {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw UsageError("not a number: '" + text + "'");
  return v;
}

const char* kCurveHeader = "s_d,n,q,p1,p_star,leakage,relative_leakage";

std::string curve_row(const TradeoffPoint& p) {
  return num(p.s_d) + "," + std::to_string(p.n) + "," + std::to_string(p.q) + "," + num(p.p1) +
         "," + num(p.p_star) + "," + num(p.leakage) + "," + num(p.relative);
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  if (spec == "figure") {
    std::vector<double> grid;
    for (const auto& p : reference::kTwoShareCurve) grid.push_back(p.s_d);
    return grid;
  }
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) throw UsageError("grid range must be lo:hi:step");
    const double lo = parse_double(parts[0]), hi = parse_double(parts[1]),
                 step = parse_double(parts[2]);
    if (!(step > 0.0) || !(hi >= lo)) throw UsageError("grid range needs hi >= lo and step > 0");
    return make_grid(lo, hi, step);
  }
  std::vector<double> grid;
  for (const auto& item : split(spec, ',')) grid.push_back(parse_double(item));
  if (grid.empty()) throw UsageError("empty grid");
  return grid;
}

std::vector<std::uint32_t> parse_uint_list(const std::string& spec) {
  std::vector<std::uint32_t> out;
  for (const auto& item : split(spec, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("not a non-negative integer: '" + item + "'");
    }
    out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
  }
  return out;
}

void validate_field(std::uint32_t q, std::uint32_t n) {
  if (!is_prime(q)) throw UsageError("--q " + std::to_string(q) + " is not prime");
  if (n < 2 || n >= q) {
    throw UsageError("need 2 <= n < q (got n = " + std::to_string(n) + ", q = " +
                     std::to_string(q) + ")");
  }
}

void validate_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw UsageError(std::string(name) + " must lie in [0, 1]");
}

int cmd_optimize(const OptimizeArgs& a) {
  validate_field(a.q, a.n);
  validate_probability(a.s, "--s");
  validate_probability(a.sd, "--sd");
  const SymmetricSharePMF pmf = solve_optimal_pmf(a.s, a.sd, a.q, a.n);
  const TradeoffPoint p = optimal_tradeoff_point(a.s, a.sd, a.q, a.n);
  if (a.format == "csv") {
    std::cout << kCurveHeader << '\n' << curve_row(p) << '\n';
  } else {
    std::cout << "s=" << num(a.s) << "\ns_d=" << num(a.sd) << "\nq=" << a.q << "\nn=" << a.n
              << "\np1=" << num(pmf.p1()) << "\np1_inv=" << num(pmf.p1_inv())
              << "\np_star=" << num(pmf.p_star()) << "\np_star_inv=" << num(pmf.p_star_inv())
              << "\nleakage=" << num(p.leakage) << "\nentropy=" << num(q_entropy(a.s, a.q))
              << "\nrelative_leakage=" << num(p.relative)
              << "\nboundary=" << (p.boundary ? "true" : "false") << '\n';
  }
  return kOk;
}

int cmd_sweep(const SweepArgs& a) {
  validate_probability(a.s, "--s");
  auto ns = parse_uint_list(a.n_list);
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  if (ns.empty()) throw UsageError("--n-list is empty");
  for (std::uint32_t n : ns) validate_field(a.q, n);
  const auto grid = parse_grid(a.sd_grid);
  for (double x : grid) validate_probability(x, "grid value");

  std::vector<TradeoffCurve> curves;
  for (std::uint32_t n : ns) curves.push_back(sweep_tradeoff(a.s, a.q, n, grid, a.threads));

  std::ofstream file;
  if (a.out != "-") {
    file.open(a.out);
    if (!file) throw std::runtime_error("cannot write " + a.out);
  }
  std::ostream& out = a.out == "-" ? std::cout : file;
  out << kCurveHeader << '\n';
  for (const auto& c : curves) {
    for (const auto& p : c.points) out << curve_row(p) << '\n';
  }
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (!curves[i].monotone) {
      std::cerr << "note: n = " << ns[i] << " curve not monotone in s_d (max violation "
                << num(curves[i].max_monotonicity_violation) << ")\n";
    }
  }
  return kOk;
}

int cmd_sample(const SampleArgs& a) {
  if (!is_prime(a.q)) throw UsageError("--q is not prime");
  validate_probability(a.s, "--s");
  if (a.rows == 0 || a.cols == 0) throw UsageError("dimensions must be positive");
  write_matrix(sample_source_matrix(SourceModel(PrimeField(a.q), a.s), a.rows, a.cols, a.seed),
               std::filesystem::path(a.out));
  return kOk;
}

int cmd_encode(const EncodeArgs& a) {
  validate_probability(a.sd, "--sd");
  const SparseMatrix m = read_matrix(std::filesystem::path(a.in));
  const std::uint32_t q = m.field().modulus();
  validate_field(q, a.n);
  double s = a.s;
  if (s < 0.0) {
    s = empirical_sparsity(m);
  } else {
    validate_probability(s, "--s");
  }
  if (a.sd < 1.0 / q) {
    std::cerr << "warning: s_d = " << num(a.sd) << " is below 1/q = " << num(1.0 / q)
              << "; shares will be denser than with uniform padding\n";
  }
  const SymmetricSharePMF pmf = solve_optimal_pmf(s, a.sd, q, a.n);
  const ShareSet set = encode(m, pmf, ShareParams::canonical(m.field(), a.n), a.seed);
  write_share_set(set, std::filesystem::path(a.outdir));
  std::cout << "s=" << num(s) << "\ns_d=" << num(a.sd) << "\np1=" << num(pmf.p1())
            << "\np_star=" << num(pmf.p_star()) << '\n';
  for (std::size_t i = 0; i < set.shares.size(); ++i) {
    std::cout << "share" << i + 1 << "_sparsity=" << num(empirical_sparsity(set.shares[i]))
              << '\n';
  }
  return kOk;
}

int cmd_multiply(const MultiplyArgs& a) {
  const auto picks = parse_uint_list(a.pick);
  if (picks.size() < 3) {
    std::cerr << "error: decoding needs three distinct evaluations, got " << picks.size()
              << '\n';
    return kDomain;
  }
  const ShareSet sa = read_share_set(std::filesystem::path(a.shares_a));
  const ShareSet sb = read_share_set(std::filesystem::path(a.shares_b));
  std::vector<ProductEvaluation> evals;
  for (std::uint32_t p : picks) {
    if (p == 0 || p > sa.shares.size()) {
      std::cerr << "error: share index " << p << " out of range 1.." << sa.shares.size() << '\n';
      return kDomain;
    }
    evals.push_back(evaluate_task(sa, sb, p - 1));
  }
  const SparseMatrix c = reconstruct_product(evals, evals.size() > 3);
  if (!a.out.empty()) write_matrix(c, std::filesystem::path(a.out));
  std::cout << "rows=" << c.rows() << "\ncols=" << c.cols() << "\nnnz=" << c.nnz() << '\n';
  if (!a.check_a.empty() || !a.check_b.empty()) {
    if (a.check_a.empty() || a.check_b.empty()) {
      throw UsageError("--check-a and --check-b go together");
    }
    const bool ok = sp_mul(read_matrix(std::filesystem::path(a.check_a)),
                           read_matrix(std::filesystem::path(a.check_b))) == c;
    std::cout << "matches_direct_product=" << (ok ? "true" : "false") << '\n';
    if (!ok) return kVerifyFailed;
  }
  return kOk;
}

namespace {

int run_compare(const SimulateArgs& a, const SimConfig& base) {
  const PrimeField field(a.q);
  CompareConfig cfg;
  cfg.s_a = base.s_a;
  cfg.s_b = base.s_b;
  cfg.s_d_a = base.s_d_a;
  cfg.s_d_b = base.s_d_b;
  cfg.n = a.n;
  std::cout << "# four-task padding: two-share optimum (R and A+R sparse); three-task padding: "
               "n = 3 optimum with special values 0, -a, -2a\n";
  std::cout << "seed,scheme,workers,task_costs,total_cost,decode_ok,relative_leakage\n";
  bool all_ok = true;
  for (std::size_t run = 0; run < a.runs; ++run) {
    const std::uint64_t seed = a.seed + run;
    const auto m_a = sample_source_matrix(SourceModel(field, base.s_a), a.rows, a.inner,
                                          derive_seed(seed, 100));
    const auto m_b = sample_source_matrix(SourceModel(field, base.s_b), a.inner, a.cols,
                                          derive_seed(seed, 101));
    const std::uint64_t seeds[] = {seed};
    for (const auto& row : compare_schemes(m_a, m_b, cfg, seeds)) {
      std::uint64_t total = 0;
      std::string costs;
      for (std::uint64_t c : row.task_costs) {
        total += c;
        costs += (costs.empty() ? "" : ";") + std::to_string(c);
      }
      all_ok = all_ok && row.decode_ok;
      std::cout << row.seed << ',' << row.scheme << ',' << row.workers << ',' << costs << ','
                << total << ',' << (row.decode_ok ? 1 : 0) << ',' << num(row.relative_leakage_a)
                << '\n';
    }
  }
  return all_ok ? kOk : kVerifyFailed;
}

}  // namespace

int cmd_simulate(const SimulateArgs& a) {
  if (!is_prime(a.q)) throw UsageError("--q is not prime");
  if (a.n < 3 || a.n >= a.q) throw UsageError("simulation needs 3 <= n < q");
  validate_probability(a.s, "--s");
  validate_probability(a.sd, "--sd");
  if (a.runs == 0) throw UsageError("--runs must be positive");
  if (!(a.rate > 0.0) || a.base < 0.0 || a.per_op < 0.0) {
    throw UsageError("delay model needs rate > 0, base >= 0, per-op >= 0");
  }
  SimConfig cfg;
  cfg.n = a.n;
  cfg.q = a.q;
  cfg.rows = a.rows;
  cfg.inner = a.inner;
  cfg.cols = a.cols;
  cfg.s_a = a.s;
  cfg.s_b = a.s_b < 0.0 ? a.s : a.s_b;
  cfg.s_d_a = a.sd;
  cfg.s_d_b = a.sd_b < 0.0 ? a.sd : a.sd_b;
  validate_probability(cfg.s_b, "--s-b");
  validate_probability(cfg.s_d_b, "--sd-b");
  cfg.delay = {a.base, a.rate, a.per_op};
  if (a.straggler_delay >= 0.0) cfg.straggler_delay = a.straggler_delay;
  if (!a.stragglers.empty()) {
    for (std::uint32_t w : parse_uint_list(a.stragglers)) {
      if (w == 0 || w > a.n) throw UsageError("straggler index out of range 1..n");
      cfg.stragglers.push_back(w - 1);
    }
  }
  if (a.compare) return run_compare(a, cfg);

  int code = kOk;
  if (a.format == "csv") std::cout << csv_header() << '\n';
  for (std::size_t run = 0; run < a.runs; ++run) {
    cfg.seed = a.seed + run;
    const SimReport r = run_simulation(cfg);
    if (a.format == "csv") {
      std::cout << csv_row(r) << '\n';
    } else {
      if (run > 0) std::cout << '\n';
      std::cout << format_report(r);
    }
    if (r.used_workers.size() < 3) {
      std::cerr << "seed " << cfg.seed << ": fewer than three workers finished\n";
      code = std::max(code, static_cast<int>(kDomain));
    } else if (!r.decode_ok) {
      code = kVerifyFailed;
    }
  }
  return code;
}

}  // namespace sparseshare::cli
