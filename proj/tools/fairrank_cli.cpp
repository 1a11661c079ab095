// fairrank command line: experiment runs, solver verification, and noise
// distribution audits.
//
// Exit codes: 0 success, 1 validation failure, 2 ingestion error,
// 3 invariant violation.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairrank/data_io.hpp"
#include "fairrank/diagnostics.hpp"
#include "fairrank/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIngestion = 2;
constexpr int kExitInvariant = 3;

struct RunOptions {
  fairrank::eval::ExperimentConfig config;
  std::string scaling = "none";
  std::string noise = "on";
  std::string delta_f = "eq10";
  std::string transport = "inproc";
  std::string synth = "uniform";
};

int cmd_run(RunOptions& opt) {
  auto& cfg = opt.config;
  cfg.scaling = opt.scaling == "literal" ? fairrank::ScalingMode::literal
                                         : fairrank::ScalingMode::none;
  cfg.noise = opt.noise == "on";
  cfg.force_unit_sensitivity = opt.delta_f == "one";
  cfg.transport = opt.transport == "tcp"
                      ? fairrank::protocol::TransportMode::tcp
                      : fairrank::protocol::TransportMode::inproc;
  cfg.distribution = opt.synth == "skew" ? fairrank::io::SynthDistribution::skewed
                                         : fairrank::io::SynthDistribution::uniform;

  const auto rows = fairrank::eval::run_experiment(cfg);

  std::printf("%10s %6s %12s %12s %12s %10s %10s %7s %11s\n", "epsilon", "seed",
              "unf_none", "unf_central", "unf_private", "mean_ndcg", "min_ndcg",
              "aborts", "runtime_ms");
  for (const auto& r : rows)
    std::printf("%10.4g %6llu %12.6f %12.6f %12.6f %10.6f %10.6f %7zu %11.1f\n",
                r.epsilon, static_cast<unsigned long long>(r.seed),
                r.unfairness_none, r.unfairness_central_fair,
                r.unfairness_private, r.mean_ndcg, r.min_ndcg, r.aborts,
                r.runtime_ms);
  if (!cfg.output_path.empty())
    std::printf("report written to %s\n", cfg.output_path.c_str());

  // Reranked lists must never drop below the configured quality floor.
  for (const auto& r : rows) {
    if (r.aborts == std::size_t(cfg.users)) continue;
    if (r.min_ndcg < cfg.theta - 1e-9) {
      std::fprintf(stderr,
                   "invariant violation: min NDCG %.12f below theta %.3f "
                   "(epsilon=%g seed=%llu)\n",
                   r.min_ndcg, cfg.theta, r.epsilon,
                   static_cast<unsigned long long>(r.seed));
      return kExitInvariant;
    }
  }
  return kExitOk;
}

int cmd_verify_solver(std::size_t trials, std::size_t max_n, std::uint64_t seed) {
  const auto audit = fairrank::diag::verify_solver(trials, max_n, seed);
  std::printf("verify-solver: %zu trials, %zu mismatches -> %s\n", audit.trials,
              audit.mismatches, audit.pass() ? "PASS" : "FAIL");
  return audit.pass() ? kExitOk : kExitInvariant;
}

int cmd_noise_audit(double b, std::size_t samples, std::uint64_t seed) {
  const auto audit = fairrank::diag::noise_audit(b, samples, seed);
  std::printf("noise-audit: scale=%g samples=%zu\n", audit.scale, audit.samples);
  std::printf("  mean            %.6f\n", audit.mean);
  std::printf("  variance        %.6f (target %.6f, %s)\n", audit.variance,
              2.0 * b * b, audit.variance_pass ? "pass" : "FAIL");
  std::printf("  ks statistic    %.6f (critical %.6f at alpha=0.01, %s)\n",
              audit.ks_statistic, audit.ks_critical,
              audit.ks_pass ? "pass" : "FAIL");
  std::printf("noise-audit: %s\n", audit.pass() ? "PASS" : "FAIL");
  return audit.pass() ? kExitOk : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"privacy-preserving fair item reranking experiments"};
  app.require_subcommand(1);

  RunOptions run_opts;
  std::vector<double> epsilons;
  std::vector<std::uint64_t> seeds;

  auto* run = app.add_subcommand(
      "run", "run the no-fairness, centralized-fair, and private pipelines");
  run->add_option("--n", run_opts.config.items, "items per ranking")
      ->capture_default_str();
  run->add_option("--users", run_opts.config.users, "number of user sessions")
      ->capture_default_str();
  run->add_option("--k", run_opts.config.k,
                  "quality constraint depth (0 = full list)")
      ->capture_default_str();
  run->add_option("--theta", run_opts.config.theta, "quality floor in [0, 1]")
      ->capture_default_str();
  run->add_option("--epsilon", epsilons,
                  "privacy budget; repeat for a sweep (default: "
                  "0.5 1 10 100 1000 10000 100000)");
  run->add_option("--seed", seeds, "experiment seed; repeatable (default: 1)");
  run->add_option("--fractional-bits", run_opts.config.fractional_bits,
                  "fixed-point fractional bits")
      ->capture_default_str();
  run->add_option("--scaling", run_opts.scaling, "gap scaling mode")
      ->check(CLI::IsMember({"none", "literal"}))
      ->capture_default_str();
  run->add_option("--noise", run_opts.noise, "Laplace perturbation")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  run->add_option("--delta-f", run_opts.delta_f,
                  "sensitivity: exact formula or forced to 1")
      ->check(CLI::IsMember({"eq10", "one"}))
      ->capture_default_str();
  run->add_option("--transport", run_opts.transport, "server-to-server link")
      ->check(CLI::IsMember({"inproc", "tcp"}))
      ->capture_default_str();
  auto* input = run->add_option("--input", run_opts.config.input_path,
                                "relevance score CSV (users x items)");
  run->add_option("--synth", run_opts.synth,
                  "synthetic score distribution when no input file is given")
      ->check(CLI::IsMember({"uniform", "skew"}))
      ->excludes(input)
      ->capture_default_str();
  run->add_option("--rating-min", run_opts.config.scale.min, "rating scale minimum")
      ->capture_default_str();
  run->add_option("--rating-max", run_opts.config.scale.max, "rating scale maximum")
      ->capture_default_str();
  run->add_option("--output", run_opts.config.output_path, "report CSV path");

  std::size_t vs_trials = 100, vs_max_n = 7;
  std::uint64_t vs_seed = 1;
  auto* verify = app.add_subcommand(
      "verify-solver", "cross-check the solver against factorial enumeration");
  verify->add_option("--trials", vs_trials, "random instances")
      ->capture_default_str();
  verify->add_option("--max-n", vs_max_n, "largest instance size (<= 7)")
      ->capture_default_str();
  verify->add_option("--seed", vs_seed, "instance stream seed")
      ->capture_default_str();

  double na_b = 1.0;
  std::size_t na_samples = 100000;
  std::uint64_t na_seed = 1;
  auto* noise = app.add_subcommand(
      "noise-audit", "compare joint noise samples against Laplace(0, b)");
  noise->add_option("--b", na_b, "Laplace scale")->capture_default_str();
  noise->add_option("--samples", na_samples, "sample count (>= 1000)")
      ->capture_default_str();
  noise->add_option("--seed", na_seed, "sampling seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  if (!epsilons.empty()) run_opts.config.epsilons = epsilons;
  if (!seeds.empty()) run_opts.config.seeds = seeds;

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (verify->parsed()) return cmd_verify_solver(vs_trials, vs_max_n, vs_seed);
    if (noise->parsed()) return cmd_noise_audit(na_b, na_samples, na_seed);
  } catch (const fairrank::io::IngestError& e) {
    std::fprintf(stderr, "ingestion error: %s\n", e.what());
    return kExitIngestion;
  } catch (const fairrank::mpc::ProtocolError& e) {
    std::fprintf(stderr, "protocol violation: %s\n", e.what());
    return kExitInvariant;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kExitValidation;
  } catch (const std::logic_error& e) {
    std::fprintf(stderr, "invariant violation: %s\n", e.what());
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitValidation;
}
