#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sparseshare/field.hpp"
#include "sparseshare/spmat.hpp"

namespace sparseshare {

/// Worker finish time = base + Exp(rate) + cost * seconds_per_op, plus
/// `straggler_delay` for workers listed as forced stragglers.
struct DelayModel {
  double base_seconds = 0.5;
  double rate = 2.0;  ///< 1/seconds
  double seconds_per_op = 1e-6;
};

struct SimConfig {
  std::uint32_t n = 5;
  std::uint32_t q = 89;
  std::size_t rows = 50;   ///< A is rows x inner
  std::size_t inner = 40;
  std::size_t cols = 60;   ///< B is inner x cols
  double s_a = 0.95;
  double s_b = 0.95;
  double s_d_a = 0.9;
  double s_d_b = 0.9;
  std::uint64_t seed = 1;
  DelayModel delay;
  std::vector<std::uint32_t> stragglers;  ///< 0-based worker indices
  double straggler_delay = std::numeric_limits<double>::infinity();
};

struct WorkerOutcome {
  std::uint32_t alpha;
  std::uint64_t cost;           ///< multiply-cost proxy of the sparse task
  std::uint64_t baseline_cost;  ///< same for uniformly padded (dense) shares
  double finish_time;
  bool straggler;
  double sparsity_a;            ///< empirical sparsity of this worker's A share
  double sparsity_b;
};

struct SimReport {
  SimConfig config;
  std::vector<WorkerOutcome> workers;
  std::vector<std::uint32_t> used_workers;  ///< the three earliest, 0-based
  double completion_time;                   ///< finish of the 3rd-fastest worker
  bool decode_ok;
  bool baseline_decode_ok;
  double cost_sparse;          ///< mean cost proxy per worker
  double cost_dense_baseline;  ///< mean cost proxy per worker, uniform padding
  double leakage_a;            ///< analytic q-ary leakage per A share
  double relative_leakage_a;
  double leakage_b;
  double relative_leakage_b;
};

/// Runs the full protocol: sample A, B; optimal paddings; n shares each;
/// simulated finish times; decode from the first three results; verify
/// against sp_mul(A, B). Throws std::invalid_argument for n < 3 or n >= q and
/// InfeasibleError for unreachable share sparsities.
SimReport run_simulation(const SimConfig& config);

/// Flat key=value block.
std::string format_report(const SimReport& report);

/// seed,n,q,s,s_d,completion_time,decode_ok,cost_sparse,cost_dense_baseline,
/// leakage_per_share,relative_leakage
std::string csv_header();
std::string csv_row(const SimReport& report);

struct CompareConfig {
  double s_a = 0.95;
  double s_b = 0.95;
  double s_d_a = 0.9;
  double s_d_b = 0.9;
  std::uint32_t n = 3;
};

struct SchemeRow {
  std::uint64_t seed;
  std::string scheme;  ///< "four-task", "three-task" or "n-share"
  std::uint32_t workers;
  std::vector<std::uint64_t> task_costs;
  bool decode_ok;
  double relative_leakage_a;  ///< per share of A at the matched s_d_a
};

/// Runs the four-task, three-task and n-share schemes on the same inputs for
/// each seed. The three-task padding uses the three-constraint (n = 3)
/// optimum, the four-task padding the two-share optimum.
std::vector<SchemeRow> compare_schemes(const SparseMatrix& a, const SparseMatrix& b,
                                       const CompareConfig& config,
                                       std::span<const std::uint64_t> seeds);

}  // namespace sparseshare
