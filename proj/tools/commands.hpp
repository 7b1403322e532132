#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparseshare::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDomain = 2,
  kVerifyFailed = 3,
};

/// Bad flag values; reported with exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OptimizeArgs {
  double s = 0.0;
  double sd = 0.0;
  std::uint32_t q = 89;
  std::uint32_t n = 2;
  std::string format = "text";
};

struct SweepArgs {
  double s = 0.95;
  std::uint32_t q = 89;
  std::string n_list = "2";
  std::string sd_grid;
  std::string out = "-";
  unsigned threads = 0;
};

struct SampleArgs {
  std::uint32_t q = 89;
  double s = 0.95;
  std::size_t rows = 50;
  std::size_t cols = 40;
  std::uint64_t seed = 1;
  std::string out;
};

struct EncodeArgs {
  std::string in;
  std::uint32_t n = 3;
  double sd = 0.0;
  double s = -1.0;  ///< source sparsity; negative means "empirical"
  std::uint64_t seed = 1;
  std::string outdir;
};

struct MultiplyArgs {
  std::string shares_a;
  std::string shares_b;
  std::string pick;
  std::string out;
  std::string check_a;
  std::string check_b;
};

struct SimulateArgs {
  std::uint32_t n = 5;
  std::uint32_t q = 89;
  double s = 0.95;
  double s_b = -1.0;
  double sd = 0.9;
  double sd_b = -1.0;
  std::uint64_t seed = 1;
  std::size_t runs = 1;
  std::size_t rows = 50;
  std::size_t inner = 40;
  std::size_t cols = 60;
  std::string stragglers;
  double straggler_delay = -1.0;  ///< negative means infinite
  double base = 0.5;
  double rate = 2.0;
  double per_op = 1e-6;
  std::string format = "text";
  bool compare = false;
};

struct VerifyArgs {
  std::string suite = "all";
  std::uint64_t seed = 1;
};

int cmd_optimize(const OptimizeArgs& a);
int cmd_sweep(const SweepArgs& a);
int cmd_sample(const SampleArgs& a);
int cmd_encode(const EncodeArgs& a);
int cmd_multiply(const MultiplyArgs& a);
int cmd_simulate(const SimulateArgs& a);
int cmd_verify(const VerifyArgs& a);

/// %.15g
std::string num(double x);
std::vector<double> parse_grid(const std::string& spec);
std::vector<std::uint32_t> parse_uint_list(const std::string& spec);

void validate_field(std::uint32_t q, std::uint32_t n);
void validate_probability(double p, const char* name);

}  // namespace sparseshare::cli
