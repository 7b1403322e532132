#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "sparseshare/errors.hpp"

using namespace sparseshare;
using namespace sparseshare::cli;

int main(int argc, char** argv) {
  CLI::App app{"Sparse secret sharing for distributed matrix multiplication"};
  app.require_subcommand(1);
  const auto formats = CLI::IsMember({"text", "csv"});

  OptimizeArgs opt;
  auto* optimize = app.add_subcommand("optimize", "Leakage-optimal padding for one target sparsity");
  optimize->add_option("--s", opt.s, "Source sparsity")->required();
  optimize->add_option("--sd", opt.sd, "Desired share sparsity")->required();
  optimize->add_option("--q", opt.q, "Field size (prime)")->capture_default_str();
  optimize->add_option("--n", opt.n, "Number of shares")->capture_default_str();
  optimize->add_option("--format", opt.format)->check(formats)->capture_default_str();

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Trade-off curve over a grid of share sparsities");
  sweep->add_option("--s", sw.s, "Source sparsity")->capture_default_str();
  sweep->add_option("--q", sw.q, "Field size (prime)")->capture_default_str();
  sweep->add_option("--n-list", sw.n_list, "Comma-separated share counts")->capture_default_str();
  sweep->add_option("--sd-grid", sw.sd_grid, "lo:hi:step, a comma list, or 'figure'")->required();
  sweep->add_option("--out", sw.out, "CSV output path ('-' for stdout)")->capture_default_str();
  sweep->add_option("--threads", sw.threads, "Worker threads (0 = hardware)");

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Write a random sparse source matrix");
  sample->add_option("--q", sa.q)->capture_default_str();
  sample->add_option("--s", sa.s)->capture_default_str();
  sample->add_option("--rows", sa.rows)->capture_default_str();
  sample->add_option("--cols", sa.cols)->capture_default_str();
  sample->add_option("--seed", sa.seed)->capture_default_str();
  sample->add_option("--out", sa.out)->required();

  EncodeArgs en;
  auto* enc = app.add_subcommand("encode", "Split a matrix into n sparse shares");
  enc->add_option("--in", en.in, "SPFQ input matrix")->required();
  enc->add_option("--n", en.n)->capture_default_str();
  enc->add_option("--sd", en.sd, "Desired share sparsity")->required();
  enc->add_option("--s", en.s, "Source sparsity (default: empirical)");
  enc->add_option("--seed", en.seed)->capture_default_str();
  enc->add_option("--outdir", en.outdir)->required();

  MultiplyArgs mu;
  auto* mul = app.add_subcommand("multiply", "Multiply paired shares and decode A*B");
  mul->add_option("--shares-a", mu.shares_a)->required();
  mul->add_option("--shares-b", mu.shares_b)->required();
  mul->add_option("--pick", mu.pick, "1-based share indices, e.g. 1,3,4")->required();
  mul->add_option("--out", mu.out, "SPFQ output for the product");
  mul->add_option("--check-a", mu.check_a, "Original A, to verify the product");
  mul->add_option("--check-b", mu.check_b, "Original B, to verify the product");

  SimulateArgs si;
  auto* sim = app.add_subcommand("simulate", "Straggler simulation of the n-worker protocol");
  sim->add_option("--n", si.n)->capture_default_str();
  sim->add_option("--q", si.q)->capture_default_str();
  sim->add_option("--s", si.s, "Sparsity of A (and B unless --s-b)")->capture_default_str();
  sim->add_option("--s-b", si.s_b, "Sparsity of B");
  sim->add_option("--sd", si.sd, "Share sparsity for A (and B unless --sd-b)")->capture_default_str();
  sim->add_option("--sd-b", si.sd_b, "Share sparsity for B");
  sim->add_option("--seed", si.seed)->capture_default_str();
  sim->add_option("--runs", si.runs, "Consecutive seeds to run")->capture_default_str();
  sim->add_option("--rows", si.rows)->capture_default_str();
  sim->add_option("--inner", si.inner)->capture_default_str();
  sim->add_option("--cols", si.cols)->capture_default_str();
  sim->add_option("--stragglers", si.stragglers, "1-based worker indices forced to straggle");
  sim->add_option("--straggler-delay", si.straggler_delay, "Extra seconds (default: never finish)");
  sim->add_option("--base", si.base, "Delay shift, seconds")->capture_default_str();
  sim->add_option("--rate", si.rate, "Exponential rate, 1/seconds")->capture_default_str();
  sim->add_option("--per-op", si.per_op, "Seconds per cost unit")->capture_default_str();
  sim->add_option("--format", si.format)->check(formats)->capture_default_str();
  sim->add_flag("--compare", si.compare, "Compare the four-task, three-task and n-share schemes");

  VerifyArgs ve;
  auto* ver = app.add_subcommand("verify", "Run an invariant battery");
  ver->add_option("--suite", ve.suite)
      ->check(CLI::IsMember({"oracle", "lemma1", "stationarity", "figure1", "all"}))
      ->capture_default_str();
  ver->add_option("--seed", ve.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*optimize) return cmd_optimize(opt);
    if (*sweep) return cmd_sweep(sw);
    if (*sample) return cmd_sample(sa);
    if (*enc) return cmd_encode(en);
    if (*mul) return cmd_multiply(mu);
    if (*sim) return cmd_simulate(si);
    if (*ver) return cmd_verify(ve);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DecodeError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kVerifyFailed;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  }
  return kUsage;
}
