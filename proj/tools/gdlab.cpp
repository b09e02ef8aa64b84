// Command line front end: train / sweep / verify / rademacher / report.
// Exit codes: 0 success, 1 check failure, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gdlab/check.hpp"
#include "gdlab/distribution.hpp"
#include "gdlab/gd.hpp"
#include "gdlab/loss_template.hpp"
#include "gdlab/rademacher.hpp"
#include "gdlab/rng.hpp"
#include "gdlab/sweep.hpp"

namespace {

gdlab::MulticlassLoss make_loss_by_name(const std::string& name, int k,
                                        double alpha) {
  using namespace gdlab;
  if (name == "ce") return make_cross_entropy(k, alpha);
  if (name == "sum_quad_exp") {
    return make_sum_univariate(k, make_phi_quadratic_tail(make_exponential_tail(alpha)));
  }
  if (name == "sum_lin_exp") {
    return make_sum_univariate(k, make_phi_linear_tail(make_exponential_tail(alpha)));
  }
  if (name == "sum_quad_poly") {
    return make_sum_univariate(k, make_phi_quadratic_tail(make_polynomial_tail(alpha)));
  }
  if (name == "sum_raw_exp") {
    return make_sum_univariate(k, make_phi_raw_exponential());
  }
  throw CLI::ValidationError("--loss", "unknown loss " + name);
}

gdlab::TailFunction tail_for(const std::string& loss_name, double alpha) {
  using namespace gdlab;
  if (loss_name == "sum_quad_poly") return make_polynomial_tail(alpha);
  return make_exponential_tail(loss_name == "ce" ? alpha : alpha);
}

int cmd_train(int k, int d, long T, long n, double gamma, double eta,
              std::uint64_t seed, const std::string& loss_name, double alpha,
              const std::string& dist_name, double epsilon,
              const std::string& out) {
  using namespace gdlab;
  const MulticlassLoss loss = make_loss_by_name(loss_name, k, alpha);
  const double beta = loss.tmpl().beta();
  const double p = loss.tmpl().p();
  if (eta <= 0.0) eta = default_step_size(beta, k, p);

  FiniteSupportDistribution dist;
  if (dist_name == "random") {
    dist = make_random_separable(d, k, gamma, std::max(2 * k, 16),
                                 derive_seed(seed, 1));
  } else if (dist_name == "hard_n") {
    dist = make_hard_lower_n(gamma, n, k);
  } else if (dist_name == "hard_t") {
    dist = make_hard_lower_t(gamma, k, static_cast<double>(T), eta, epsilon,
                             tail_for(loss_name, alpha));
  } else {
    throw CLI::ValidationError("--dist", "unknown distribution " + dist_name);
  }

  const Dataset data = sample(dist, static_cast<int>(n), derive_seed(seed, 2));
  GDConfig cfg;
  cfg.eta = eta;
  cfg.T = T;
  cfg.record_every = std::max<long>(1, T / 100);
  cfg.seed = seed;
  const GDTrace trace = gd_run(loss, data, cfg);
  const double pop = population_risk_exact(loss, trace.final_w, dist);

  std::printf("loss            %s\n", loss.name().c_str());
  std::printf("distribution    %s (d=%d, margin gamma=%g)\n", dist_name.c_str(),
              dist.d, dist.gamma);
  std::printf("eta             %.10g\n", eta);
  std::printf("T               %ld\n", T);
  std::printf("n               %ld\n", n);
  std::printf("initial risk    %.10g\n", trace.points.front().emp_risk);
  std::printf("final emp risk  %.10g\n", trace.final_risk());
  std::printf("final pop risk  %.10g\n", pop);
  std::printf("final ||W||_F   %.10g\n", trace.final_norm());

  if (!out.empty()) {
    std::ofstream os(out, std::ios::trunc);
    if (!os) {
      std::fprintf(stderr, "cannot open %s\n", out.c_str());
      return 1;
    }
    trace.write_csv(os);
    std::printf("trace           %s\n", out.c_str());
  }
  return 0;
}

int cmd_verify(long samples, std::uint64_t seed, const std::string& json_out) {
  using namespace gdlab;
  VerifyOptions opt;
  opt.samples = samples;
  opt.seed = seed;
  const auto reports = run_verify_suite(opt);

  int failures = 0;
  std::printf("%-64s %-6s %12s %10s\n", "check", "state", "worst_ratio",
              "samples");
  for (const auto& r : reports) {
    const char* state = r.skipped_precondition ? "skip"
                        : r.passed             ? "ok"
                                               : "FAIL";
    if (!r.passed && !r.skipped_precondition) ++failures;
    std::printf("%-64s %-6s %12.4g %10ld\n", r.name.c_str(), state,
                r.worst_ratio, r.samples_used);
    if (!r.passed && !r.skipped_precondition && !r.witness.empty()) {
      std::printf("    witness: %s\n", r.witness.c_str());
    }
  }
  std::printf("%d checks, %d failures\n", static_cast<int>(reports.size()),
              failures);
  if (!json_out.empty()) {
    std::ofstream os(json_out, std::ios::trunc);
    write_reports_json(reports, os);
  }
  return failures == 0 ? 0 : 1;
}

int cmd_rademacher(int k, int d, int n, double B, double r, int draws,
                   int restarts, int steps, std::uint64_t seed, bool exact,
                   bool penalty, const std::string& loss_name, double alpha) {
  using namespace gdlab;
  const MulticlassLoss loss = make_loss_by_name(loss_name, k, alpha);
  const auto dist =
      make_random_separable(d, k, 0.1, std::max(2 * k, 8), derive_seed(seed, 1));
  RademacherQuery query;
  query.data = sample(dist, n, derive_seed(seed, 2));
  query.B = B;
  query.r = r;
  query.draws = draws;
  query.restarts = restarts;
  query.ascent_steps = steps;
  query.penalty_mode = penalty;

  RademacherDiagnostics diag;
  double estimate;
  if (exact) {
    estimate = estimate_rademacher_exact(loss, query, derive_seed(seed, 3), &diag);
  } else {
    estimate = estimate_rademacher(loss, query, derive_seed(seed, 3), &diag);
  }
  std::printf("empirical Rademacher complexity (lower estimate): %.10g\n",
              estimate);
  std::printf("mode: %s, draws: %s, n=%d, B=%g, r=%g\n",
              exact ? "exact sign enumeration" : "monte carlo",
              exact ? "all" : std::to_string(draws).c_str(), n, B, r);
  if (diag.infeasible_trajectories > 0) {
    std::printf("note: %ld of %ld ascent trajectories never reached the "
                "feasible set\n",
                diag.infeasible_trajectories, diag.total_trajectories);
  }
  return 0;
}

int cmd_sweep(const std::string& config, const std::string& out_override) {
  using namespace gdlab;
  ExperimentSpec spec = ExperimentSpec::from_json_file(config);
  if (!out_override.empty()) spec.output = out_override;
  const SweepResult result = run_sweep(spec);
  long ok = 0, bad = 0;
  for (const auto& row : result.rows) {
    if (row.status == "ok") {
      ++ok;
    } else if (row.status != "skipped_infeasible") {
      ++bad;
    }
  }
  std::printf("sweep: %zu rows (%ld ok, %ld errors)%s%s\n", result.rows.size(),
              ok, bad, spec.output.empty() ? "" : ", csv: ",
              spec.output.c_str());
  return bad == 0 ? 0 : 1;
}

int cmd_report(const std::vector<std::string>& csvs, const std::string& out) {
  using namespace gdlab;
  std::vector<std::pair<std::string, SweepResult>> labeled;
  for (const auto& path : csvs) {
    std::ifstream is(path);
    if (!is) {
      std::fprintf(stderr, "cannot open %s\n", path.c_str());
      return 1;
    }
    labeled.emplace_back(std::filesystem::path(path).stem().string(),
                         SweepResult::read_csv(is));
  }
  emit_report(labeled, out);
  std::printf("report written to %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradient descent laboratory for separable multiclass linear "
               "classification"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "single GD run, prints a trace summary");
  int k = 4, d = 10;
  long T = 1000, n = 100;
  double gamma = 0.1, eta = 0.0, alpha = 1.0, epsilon = 1.0 / 16.0;
  std::uint64_t seed = 1;
  std::string loss_name = "ce", dist_name = "random", out;
  train->add_option("--k", k, "number of classes")->check(CLI::Range(2, 1 << 20));
  train->add_option("--d", d, "feature dimension")->check(CLI::Range(2, 1 << 20));
  train->add_option("--T", T, "iterations")->check(CLI::PositiveNumber);
  train->add_option("--n", n, "sample size")->check(CLI::PositiveNumber);
  train->add_option("--gamma", gamma, "margin");
  train->add_option("--eta", eta, "step size (default 1/(6 beta k^{2/p}))");
  train->add_option("--seed", seed, "RNG seed");
  train->add_option("--loss", loss_name,
                    "ce | sum_quad_exp | sum_lin_exp | sum_quad_poly | sum_raw_exp");
  train->add_option("--alpha", alpha, "loss/tail parameter");
  train->add_option("--dist", dist_name, "random | hard_n | hard_t");
  train->add_option("--epsilon", epsilon, "epsilon for hard_t");
  train->add_option("--out", out, "write the trace CSV here");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a sweep from a JSON config");
  std::string config, sweep_out;
  sweep->add_option("--config", config, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--out", sweep_out, "override the output CSV path");

  // verify
  auto* verify = app.add_subcommand("verify", "run the full lemma-checker suite");
  long samples = 10000;
  std::uint64_t vseed = 74;
  std::string vjson;
  verify->add_option("--samples", samples, "samples per check")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", vseed, "RNG seed");
  verify->add_option("--json", vjson, "also write reports as JSON");

  // rademacher
  auto* rad = app.add_subcommand("rademacher", "estimate empirical Rademacher complexity");
  int rk = 3, rd = 4, rn = 8, draws = 64, restarts = 8, steps = 200;
  double B = 1.0, rcap = std::numeric_limits<double>::infinity();
  double ralpha = 1.0;
  std::uint64_t rseed = 7;
  bool exact = false, penalty = false;
  std::string rloss = "ce";
  rad->add_option("--k", rk)->check(CLI::Range(2, 4096));
  rad->add_option("--d", rd)->check(CLI::Range(2, 4096));
  rad->add_option("--n", rn)->check(CLI::PositiveNumber);
  rad->add_option("--B", B, "Frobenius ball radius");
  rad->add_option("--r", rcap, "empirical risk cap");
  rad->add_option("--draws", draws)->check(CLI::PositiveNumber);
  rad->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
  rad->add_option("--steps", steps)->check(CLI::PositiveNumber);
  rad->add_option("--seed", rseed);
  rad->add_flag("--exact", exact, "exact sign enumeration (n <= 4)");
  rad->add_flag("--penalty", penalty, "penalty mode for the risk cap");
  rad->add_option("--loss", rloss);
  rad->add_option("--alpha", ralpha);

  // report
  auto* report = app.add_subcommand("report", "summary table and SVG plots from sweep CSVs");
  std::vector<std::string> csvs;
  std::string report_out = "report";
  report->add_option("csv", csvs, "sweep CSV files")->required();
  report->add_option("--out", report_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(train)) {
      return cmd_train(k, d, T, n, gamma, eta, seed, loss_name, alpha,
                       dist_name, epsilon, out);
    }
    if (app.got_subcommand(sweep)) return cmd_sweep(config, sweep_out);
    if (app.got_subcommand(verify)) return cmd_verify(samples, vseed, vjson);
    if (app.got_subcommand(rad)) {
      return cmd_rademacher(rk, rd, rn, B, rcap, draws, restarts, steps, rseed,
                            exact, penalty, rloss, ralpha);
    }
    if (app.got_subcommand(report)) return cmd_report(csvs, report_out);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
