#include "sparseshare/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "sparseshare/leakage.hpp"
#include "sparseshare/optimizer.hpp"
#include "sparseshare/rng.hpp"
#include "sparseshare/sharing.hpp"

namespace sparseshare {

namespace {

enum Stream : std::uint64_t {
  kStreamA = 0,
  kStreamB = 1,
  kStreamR = 2,
  kStreamS = 3,
  kStreamDelay = 4,
  kStreamBaselineR = 5,
  kStreamBaselineS = 6,
};

double mean(std::span<const std::uint64_t> xs) {
  if (xs.empty()) return 0.0;
  return static_cast<double>(std::accumulate(xs.begin(), xs.end(), std::uint64_t{0})) /
         static_cast<double>(xs.size());
}

// Decodes from the given workers; false if the result differs from `expected`.
bool decode_matches(const ShareSet& sa, const ShareSet& sb, std::span<const std::uint32_t> who,
                    const SparseMatrix& expected) {
  std::vector<std::future<ProductEvaluation>> tasks;
  for (std::uint32_t w : who) {
    tasks.push_back(std::async(std::launch::async, [&, w] { return evaluate_task(sa, sb, w); }));
  }
  std::vector<ProductEvaluation> evals;
  for (auto& t : tasks) evals.push_back(t.get());
  return reconstruct_product(evals) == expected;
}

}  // namespace

SimReport run_simulation(const SimConfig& config) {
  if (config.n < 3) {
    throw std::invalid_argument("run_simulation: need n >= 3 workers to decode");
  }
  const PrimeField field(config.q);
  if (config.n >= config.q) throw std::invalid_argument("run_simulation: need n < q");
  for (std::uint32_t w : config.stragglers) {
    if (w >= config.n) throw std::invalid_argument("run_simulation: straggler index out of range");
  }
  const std::uint64_t seed = config.seed;

  const SparseMatrix a = sample_source_matrix(SourceModel(field, config.s_a), config.rows,
                                              config.inner, derive_seed(seed, kStreamA));
  const SparseMatrix b = sample_source_matrix(SourceModel(field, config.s_b), config.inner,
                                              config.cols, derive_seed(seed, kStreamB));
  const SymmetricSharePMF pmf_a = solve_optimal_pmf(config.s_a, config.s_d_a, config.q, config.n);
  const SymmetricSharePMF pmf_b = solve_optimal_pmf(config.s_b, config.s_d_b, config.q, config.n);
  const ShareParams params = ShareParams::canonical(field, config.n);

  const ShareSet shares_a = encode(a, pmf_a, params, derive_seed(seed, kStreamR));
  const ShareSet shares_b = encode(b, pmf_b, params, derive_seed(seed, kStreamS));
  const SymmetricSharePMF uniform = SymmetricSharePMF::uniform(field, config.n);
  const ShareSet dense_a = encode(a, uniform, params, derive_seed(seed, kStreamBaselineR));
  const ShareSet dense_b = encode(b, uniform, params, derive_seed(seed, kStreamBaselineS));

  SimReport report{};
  report.config = config;
  Xoshiro256ss delay_rng(derive_seed(seed, kStreamDelay));
  for (std::uint32_t i = 0; i < config.n; ++i) {
    WorkerOutcome w{};
    w.alpha = params.alpha(i).value;
    w.cost = multiply_cost(shares_a.shares[i], shares_b.shares[i]);
    w.baseline_cost = multiply_cost(dense_a.shares[i], dense_b.shares[i]);
    w.straggler = std::find(config.stragglers.begin(), config.stragglers.end(), i) !=
                  config.stragglers.end();
    const double exp_draw = -std::log1p(-delay_rng.uniform()) / config.delay.rate;
    w.finish_time = config.delay.base_seconds + exp_draw +
                    static_cast<double>(w.cost) * config.delay.seconds_per_op +
                    (w.straggler ? config.straggler_delay : 0.0);
    w.sparsity_a = empirical_sparsity(shares_a.shares[i]);
    w.sparsity_b = empirical_sparsity(shares_b.shares[i]);
    report.workers.push_back(w);
  }

  std::vector<std::uint32_t> order(config.n);
  std::iota(order.begin(), order.end(), 0U);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
    return report.workers[x].finish_time < report.workers[y].finish_time;
  });
  for (std::uint32_t w : order) {
    if (report.used_workers.size() == 3) break;
    if (std::isfinite(report.workers[w].finish_time)) report.used_workers.push_back(w);
  }

  const SparseMatrix expected = sp_mul(a, b);
  if (report.used_workers.size() == 3) {
    report.completion_time = report.workers[report.used_workers.back()].finish_time;
    report.decode_ok = decode_matches(shares_a, shares_b, report.used_workers, expected);
    report.baseline_decode_ok = decode_matches(dense_a, dense_b, report.used_workers, expected);
  } else {
    report.completion_time = std::numeric_limits<double>::infinity();
    report.decode_ok = false;
    report.baseline_decode_ok = false;
  }

  std::vector<std::uint64_t> costs, baseline;
  for (const auto& w : report.workers) {
    costs.push_back(w.cost);
    baseline.push_back(w.baseline_cost);
  }
  report.cost_sparse = mean(costs);
  report.cost_dense_baseline = mean(baseline);

  const LeakageReport la = make_report(
      analytic_leakage(pmf_a, config.s_a, share_sparsity(pmf_a, config.s_a)),
      q_entropy(config.s_a, config.q));
  const LeakageReport lb = make_report(
      analytic_leakage(pmf_b, config.s_b, share_sparsity(pmf_b, config.s_b)),
      q_entropy(config.s_b, config.q));
  report.leakage_a = la.leakage;
  report.relative_leakage_a = la.relative;
  report.leakage_b = lb.leakage;
  report.relative_leakage_b = lb.relative;
  return report;
}

namespace {

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(15) << x;
  return os.str();
}

}  // namespace

std::string format_report(const SimReport& r) {
  std::ostringstream os;
  const SimConfig& c = r.config;
  os << "seed=" << c.seed << '\n'
     << "n=" << c.n << '\n'
     << "q=" << c.q << '\n'
     << "dims=" << c.rows << 'x' << c.inner << 'x' << c.cols << '\n'
     << "s_a=" << num(c.s_a) << '\n'
     << "s_b=" << num(c.s_b) << '\n'
     << "s_d_a=" << num(c.s_d_a) << '\n'
     << "s_d_b=" << num(c.s_d_b) << '\n'
     << "completion_time=" << num(r.completion_time) << '\n'
     << "used_workers=";
  for (std::size_t i = 0; i < r.used_workers.size(); ++i) {
    os << (i ? "," : "") << r.used_workers[i] + 1;
  }
  os << '\n'
     << "decode_ok=" << (r.decode_ok ? "true" : "false") << '\n'
     << "baseline_decode_ok=" << (r.baseline_decode_ok ? "true" : "false") << '\n'
     << "cost_sparse=" << num(r.cost_sparse) << '\n'
     << "cost_dense_baseline=" << num(r.cost_dense_baseline) << '\n'
     << "leakage_a=" << num(r.leakage_a) << '\n'
     << "relative_leakage_a=" << num(r.relative_leakage_a) << '\n'
     << "leakage_b=" << num(r.leakage_b) << '\n'
     << "relative_leakage_b=" << num(r.relative_leakage_b) << '\n';
  for (std::size_t i = 0; i < r.workers.size(); ++i) {
    const WorkerOutcome& w = r.workers[i];
    os << "worker" << i + 1 << "=alpha:" << w.alpha << ",cost:" << w.cost
       << ",baseline_cost:" << w.baseline_cost << ",finish:" << num(w.finish_time)
       << ",sparsity_a:" << num(w.sparsity_a) << ",sparsity_b:" << num(w.sparsity_b)
       << ",straggler:" << (w.straggler ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string csv_header() {
  return "seed,n,q,s,s_d,completion_time,decode_ok,cost_sparse,cost_dense_baseline,"
         "leakage_per_share,relative_leakage";
}

std::string csv_row(const SimReport& r) {
  std::ostringstream os;
  const SimConfig& c = r.config;
  os << c.seed << ',' << c.n << ',' << c.q << ',' << num(c.s_a) << ',' << num(c.s_d_a) << ','
     << num(r.completion_time) << ',' << (r.decode_ok ? 1 : 0) << ',' << num(r.cost_sparse)
     << ',' << num(r.cost_dense_baseline) << ',' << num(r.leakage_a) << ','
     << num(r.relative_leakage_a);
  return os.str();
}

std::vector<SchemeRow> compare_schemes(const SparseMatrix& a, const SparseMatrix& b,
                                       const CompareConfig& config,
                                       std::span<const std::uint64_t> seeds) {
  const PrimeField& field = a.field();
  const std::uint32_t q = field.modulus();
  if (q < 3) throw std::invalid_argument("compare_schemes: needs q >= 3");
  if (config.n < 3) throw std::invalid_argument("compare_schemes: n-share scheme needs n >= 3");
  const SparseMatrix expected = sp_mul(a, b);

  const SymmetricSharePMF two_a = solve_optimal_pmf(config.s_a, config.s_d_a, q, 2);
  const SymmetricSharePMF two_b = solve_optimal_pmf(config.s_b, config.s_d_b, q, 2);
  const SymmetricSharePMF three_a = solve_optimal_pmf(config.s_a, config.s_d_a, q, 3);
  const SymmetricSharePMF three_b = solve_optimal_pmf(config.s_b, config.s_d_b, q, 3);
  const SymmetricSharePMF many_a = solve_optimal_pmf(config.s_a, config.s_d_a, q, config.n);
  const SymmetricSharePMF many_b = solve_optimal_pmf(config.s_b, config.s_d_b, q, config.n);
  const double h_a = q_entropy(config.s_a, q);
  auto relative = [&](const SymmetricSharePMF& pmf) {
    return make_report(analytic_leakage(pmf, config.s_a, share_sparsity(pmf, config.s_a)), h_a)
        .relative;
  };

  std::vector<SchemeRow> rows;
  for (std::uint64_t seed : seeds) {
    // Four tasks over the shares R, A+R (and S, B+S).
    {
      const AsymmetricSharePMF pa(field, two_a.p1(), two_a.p_star(), two_a.p_star());
      const AsymmetricSharePMF pb(field, two_b.p1(), two_b.p_star(), two_b.p_star());
      const SparseMatrix r = sample_padding_asymmetric(a, pa, derive_seed(seed, kStreamR));
      const SparseMatrix s = sample_padding_asymmetric(b, pb, derive_seed(seed, kStreamS));
      const SparseMatrix a_r = add(a, r), b_s = add(b, s);
      const FourTaskResult res = four_task_scheme(a, b, r, s);
      rows.push_back({seed, "four-task", 4,
                      {multiply_cost(a_r, b_s), multiply_cost(a_r, s), multiply_cost(r, b_s),
                       multiply_cost(r, s)},
                      res.c == expected, relative(two_a)});
    }
    // Three tasks; R, A+R and A+R/2 must all be sparse: zero at r = 0, -a, -2a.
    {
      const std::uint32_t kappa[] = {0, 1, 2};
      const double mass_a[] = {three_a.p_star(), three_a.p_star(), three_a.p_star()};
      const double mass_b[] = {three_b.p_star(), three_b.p_star(), three_b.p_star()};
      const SparseMatrix r =
          sample_padding_special(a, three_a.p1(), kappa, mass_a, derive_seed(seed, kStreamR));
      const SparseMatrix s =
          sample_padding_special(b, three_b.p1(), kappa, mass_b, derive_seed(seed, kStreamS));
      const std::uint32_t half = field.raw_inverse(2);
      const ThreeTaskResult res = three_task_scheme(a, b, r, s);
      rows.push_back({seed, "three-task", 3,
                      {multiply_cost(add(a, r), add(b, s)), multiply_cost(add_scaled(a, r, half), s),
                       multiply_cost(r, add_scaled(b, s, half))},
                      res.c == expected, relative(three_a)});
    }
    // n shares A + alpha_i R, any three suffice.
    {
      const ShareParams params = ShareParams::canonical(field, config.n);
      const ShareSet sa = encode(a, many_a, params, derive_seed(seed, kStreamR));
      const ShareSet sb = encode(b, many_b, params, derive_seed(seed, kStreamS));
      std::vector<std::uint64_t> costs;
      std::vector<ProductEvaluation> evals;
      for (std::uint32_t i = 0; i < config.n; ++i) {
        costs.push_back(multiply_cost(sa.shares[i], sb.shares[i]));
        evals.push_back(evaluate_task(sa, sb, i));
      }
      bool ok = true;
      try {
        ok = reconstruct_product(evals, true) == expected;
      } catch (const std::exception&) {
        ok = false;
      }
      rows.push_back({seed, "n-share", config.n, std::move(costs), ok, relative(many_a)});
    }
  }
  return rows;
}

}  // namespace sparseshare
