// Acceptance suite: one pass/fail line per criterion.
//   acceptance                 run everything
//   acceptance --criterion N   run one criterion
// Exit code 0 iff every selected criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gdlab/check.hpp"
#include "gdlab/distribution.hpp"
#include "gdlab/finite_diff.hpp"
#include "gdlab/gd.hpp"
#include "gdlab/loss_template.hpp"
#include "gdlab/rademacher.hpp"
#include "gdlab/rng.hpp"
#include "gdlab/sweep.hpp"

using namespace gdlab;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

// ---------------------------------------------------------------- helpers

Dataset prefix(const Dataset& full, int n) {
  Dataset out;
  out.k = full.k;
  out.xs = full.xs.leftCols(n);
  out.ys.assign(full.ys.begin(), full.ys.begin() + n);
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

// ------------------------------------------------------------ criterion 1

Outcome criterion1() {
  struct Case {
    std::string name;
    std::function<MulticlassLoss(int)> make;
  };
  const std::vector<Case> cases = {
      {"ce(alpha=1)", [](int k) { return make_cross_entropy(k, 1.0); }},
      {"ce(alpha=2)", [](int k) { return make_cross_entropy(k, 2.0); }},
      {"sum raw exp",
       [](int k) { return make_sum_univariate(k, make_phi_raw_exponential()); }},
      {"sum quad tail",
       [](int k) {
         return make_sum_univariate(k, make_phi_quadratic_tail(make_exponential_tail(1.0)));
       }},
      {"sum lin tail",
       [](int k) {
         return make_sum_univariate(k, make_phi_linear_tail(make_exponential_tail(1.0)));
       }},
      {"sum quad poly",
       [](int k) {
         return make_sum_univariate(k, make_phi_quadratic_tail(make_polynomial_tail(1.0)));
       }},
  };

  const int d = 5;
  double worst = 0.0;
  std::string worst_case;
  RandomStream rng(2024);
  for (const auto& c : cases) {
    for (int k : {2, 4, 8}) {
      const MulticlassLoss loss = c.make(k);
      for (int trial = 0; trial < 100; ++trial) {
        Eigen::MatrixXd W(k, d);
        for (int r = 0; r < k; ++r) W.row(r) = rng.box_vector(d, 2.0).transpose();
        const Eigen::VectorXd x = rng.unit_sphere(d) * rng.uniform(0.1, 1.0);
        const int y = rng.uniform_int(k);
        const Eigen::MatrixXd analytic = loss.model_gradient(W, x, y);

        const double h = 1e-6 * std::max(1.0, W.norm());
        Eigen::MatrixXd numeric(k, d);
        Eigen::MatrixXd Wp = W;
        for (int r = 0; r < k; ++r) {
          for (int col = 0; col < d; ++col) {
            const double orig = Wp(r, col);
            Wp(r, col) = orig + h;
            const double fp = loss.value(Wp * x, y);
            Wp(r, col) = orig - h;
            const double fm = loss.value(Wp * x, y);
            Wp(r, col) = orig;
            numeric(r, col) = (fp - fm) / (2.0 * h);
          }
        }
        const double rel =
            (analytic - numeric).norm() / std::max(1.0, analytic.norm());
        if (rel > worst) {
          worst = rel;
          worst_case = c.name + " k=" + std::to_string(k);
        }
      }
    }
  }
  Outcome out;
  out.passed = worst <= 1e-5;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "max relative gradient error %.3g (worst: %s), threshold 1e-5",
                worst, worst_case.c_str());
  out.detail = buf;
  return out;
}

// ------------------------------------------------------------ criterion 2

Outcome criterion2() {
  VerifyOptions opt;
  opt.samples = 10000;
  const auto reports = run_verify_suite(opt);
  long failures = 0;
  std::string first_failure;
  for (const auto& r : reports) {
    if (!r.passed && !r.skipped_precondition) {
      ++failures;
      if (first_failure.empty()) first_failure = r.name;
    }
  }
  Outcome out;
  out.passed = failures == 0;
  out.detail = std::to_string(reports.size()) + " checks (incl. falsifications), " +
               std::to_string(failures) + " failures" +
               (failures ? " (first: " + first_failure + ")" : "");
  return out;
}

// ------------------------------------------------------------ criterion 3

Outcome criterion3() {
  const TailFunction exp1 = make_exponential_tail(1.0);
  long violations = 0;
  double worst = 0.0;
  int idx = 0;
  for (int rep = 0; rep < 10; ++rep) {
    for (int which = 0; which < 2; ++which, ++idx) {
      const int k = 2 + (rep % 4) * 2;
      const int d = 6 + 3 * (rep % 5);
      const double gamma = 0.05 + 0.025 * (rep % 3);
      const auto dist = make_random_separable(d, k, gamma, 4 * k,
                                              derive_seed(33, idx));
      const Dataset data = sample(dist, 150, derive_seed(34, idx));
      const MulticlassLoss loss =
          which == 0 ? make_cross_entropy(k, 1.0)
                     : make_sum_univariate(k, make_phi_quadratic_tail(exp1));
      const double beta = loss.tmpl().beta();
      const double p = loss.tmpl().p();
      GDConfig cfg;
      cfg.eta = default_step_size(beta, k, p);
      cfg.T = 1500;
      cfg.record_every = 1500;
      const GDTrace trace = gd_run(loss, data, cfg);
      const double eps = 1.0 / static_cast<double>(cfg.T);
      const Eigen::MatrixXd comp = comparator_model(dist, eps, exp1);
      const CheckReport r = check_opt_error(trace, comp, beta, k, p, eps);
      worst = std::max(worst, r.worst_ratio);
      if (!r.passed) ++violations;
    }
  }
  Outcome out;
  out.passed = violations == 0;
  out.detail = "20 instances, " + std::to_string(violations) +
               " violations, worst observed/bound ratio " +
               std::to_string(worst);
  return out;
}

// ------------------------------------------------------------ criterion 4

Outcome criterion4() {
  std::vector<std::string> problems;

  {
    const double gamma = 0.125;
    const auto dist = make_hard_lower_n(gamma, 100, 4);
    const double pn = 1.0 / 100.0;
    const bool coords_ok =
        dist.support[0].x[0] == 1.0 && dist.support[0].x[1] == 0.0 &&
        dist.support[0].x[2] == 0.0 && dist.support[1].x[0] == -0.5 &&
        dist.support[1].x[1] == 3.0 * gamma && dist.support[1].x[2] == 0.0 &&
        dist.support[2].x[0] == 0.0 && dist.support[2].x[1] == -0.125 &&
        dist.support[2].x[2] == 4.0 * gamma + 0.25;
    const bool probs_ok =
        dist.support[0].prob == (59.0 / 64.0) * (1.0 - pn) &&
        dist.support[1].prob == (5.0 / 64.0) * (1.0 - pn) &&
        dist.support[2].prob == pn;
    if (!coords_ok) problems.push_back("hard_lower_n coordinates");
    if (!probs_ok) problems.push_back("hard_lower_n probabilities");
    if (std::abs(margin_certificate_check(dist) - gamma) > 1e-12) {
      problems.push_back("hard_lower_n margin");
    }
  }

  {
    const double gamma = 0.125, eta = 1.0 / 24.0, eps = 1.0 / 16.0;
    const double T = 1e6;
    const int k = 4;
    const auto tail = make_exponential_tail(1.0);
    const auto dist = make_hard_lower_t(gamma, k, T, eta, eps, tail);
    // independent evaluation: rho^{-1}(16 eps / k) = ln(1/(1/4)) = ln 4
    const double expected = std::log(4.0) / (72.0 * gamma * gamma * T * k * eta);
    const double p = dist.support[1].prob;
    if (std::abs(p - expected) > 1e-12 * expected) {
      problems.push_back("hard_lower_t probability");
    }
    if (std::abs(expected - 7.39e-6) > 0.01 * 7.39e-6) {
      problems.push_back("hard_lower_t worked example magnitude");
    }
    if (std::abs(margin_certificate_check(dist) - gamma) > 1e-12) {
      problems.push_back("hard_lower_t margin");
    }
  }

  Outcome out;
  out.passed = problems.empty();
  out.detail = problems.empty()
                   ? "coordinates, probabilities and margins exact"
                   : "mismatch: " + problems.front();
  return out;
}

// ------------------------------------------------------------ criterion 5

Outcome criterion5() {
  const double gamma = 0.125;
  const long T = 2000, n = 2000;
  const std::vector<int> ks = {4, 8, 16, 32, 64};
  const int seeds = 50;
  const TailFunction exp1 = make_exponential_tail(1.0);

  std::vector<std::pair<double, double>> hard_xy, ce_xy;
  for (int k : ks) {
    const auto dist = make_hard_lower_n(gamma, n, k);
    const MulticlassLoss hard_loss =
        make_sum_univariate(k, make_phi_quadratic_tail(exp1));
    const MulticlassLoss ce = make_cross_entropy(k, 1.0);

    std::vector<double> hard_risks, ce_risks;
    for (int s = 0; s < seeds; ++s) {
      const Dataset data = sample(dist, n, derive_seed(55, k, s));

      GDConfig cfg_hard;
      cfg_hard.eta = default_step_size(1.0, k, 2.0);
      cfg_hard.T = T;
      cfg_hard.record_every = T;
      const GDTrace th = gd_run(hard_loss, data, cfg_hard);
      hard_risks.push_back(population_risk_exact(hard_loss, th.final_w, dist));

      GDConfig cfg_ce;
      cfg_ce.eta = default_step_size(1.0, k, kPInfinity);
      cfg_ce.T = T;
      cfg_ce.record_every = T;
      const GDTrace tc = gd_run(ce, data, cfg_ce);
      ce_risks.push_back(population_risk_exact(ce, tc.final_w, dist));
    }
    hard_xy.emplace_back(k, mean(hard_risks));
    ce_xy.emplace_back(k, mean(ce_risks));
  }

  const FitResult hard_fit = fit_loglog(hard_xy);
  const FitResult ce_fit = fit_loglog(ce_xy);

  Outcome out;
  out.passed = hard_fit.slope >= 0.6 && ce_fit.slope <= 0.35;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "hard p=2 slope %.3f (need >= 0.6), cross-entropy slope %.3f "
                "(need <= 0.35), %d seeds",
                hard_fit.slope, ce_fit.slope, seeds);
  out.detail = buf;
  return out;
}

// ------------------------------------------------------------ criterion 6

Outcome criterion6() {
  const double gamma = 0.125;
  const int k = 8, d = 64, support = 80;
  const int seeds = 6;
  const std::vector<long> grid = {250, 1000, 4000, 16000};
  const MulticlassLoss ce = make_cross_entropy(k, 1.0);
  const double eta = default_step_size(1.0, k, kPInfinity);

  // long-tailed support: the rare-point band is restricted to sampling
  // scales that remain trainable at T = 1e4 (p >= ~1.5e-3), which maximizes
  // the seen/unseen contrast the n-sweep can show
  RandomSeparableOptions opt;
  opt.profile = ProbProfile::long_tailed;
  opt.ladder_top = 4e-3;
  opt.ladder_bottom = 1.5e-3;

  // risk vs T at fixed n = 1e4
  std::vector<std::pair<double, double>> t_xy;
  {
    std::vector<std::vector<double>> risks(grid.size());
    for (int s = 0; s < seeds; ++s) {
      const auto dist = make_random_separable(d, k, gamma, support,
                                              derive_seed(66, 0, s), opt);
      const Dataset data = sample(dist, 10000, derive_seed(66, 1, s));
      for (size_t gi = 0; gi < grid.size(); ++gi) {
        GDConfig cfg;
        cfg.eta = eta;
        cfg.T = grid[gi];
        cfg.record_every = grid[gi];
        const GDTrace trace = gd_run(ce, data, cfg);
        risks[gi].push_back(population_risk_exact(ce, trace.final_w, dist));
      }
    }
    for (size_t gi = 0; gi < grid.size(); ++gi) {
      t_xy.emplace_back(static_cast<double>(grid[gi]), mean(risks[gi]));
    }
  }
  const FitResult t_fit = fit_loglog(t_xy);

  // risk vs n at fixed T = 1e4, nested samples per seed
  std::vector<std::pair<double, double>> n_xy;
  {
    std::vector<std::vector<double>> risks(grid.size());
    for (int s = 0; s < seeds; ++s) {
      const auto dist = make_random_separable(d, k, gamma, support,
                                              derive_seed(67, 0, s), opt);
      const Dataset full = sample(dist, 16000, derive_seed(67, 1, s));
      for (size_t gi = 0; gi < grid.size(); ++gi) {
        const Dataset data = prefix(full, static_cast<int>(grid[gi]));
        GDConfig cfg;
        cfg.eta = eta;
        cfg.T = 10000;
        cfg.record_every = 10000;
        const GDTrace trace = gd_run(ce, data, cfg);
        risks[gi].push_back(population_risk_exact(ce, trace.final_w, dist));
      }
    }
    for (size_t gi = 0; gi < grid.size(); ++gi) {
      n_xy.emplace_back(static_cast<double>(grid[gi]), mean(risks[gi]));
    }
  }
  const FitResult n_fit = fit_loglog(n_xy);

  Outcome out;
  out.passed = t_fit.slope <= -0.7 && n_fit.slope <= -0.7;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "risk vs T slope %.3f, risk vs n slope %.3f (both need <= -0.7)",
                t_fit.slope, n_fit.slope);
  out.detail = buf;
  return out;
}

// ------------------------------------------------------------ criterion 7

Outcome criterion7() {
  const auto ce = make_cross_entropy(3, 1.0);
  std::vector<std::string> problems;

  // exact enumeration vs monte carlo within 2 standard errors
  {
    const auto dist = make_random_separable(4, 3, 0.1, 6, 71);
    RademacherQuery q;
    q.data = sample(dist, 4, 72);
    q.B = 1.5;
    q.r = 2.0;
    q.draws = 400;
    q.restarts = 4;
    q.ascent_steps = 120;
    std::vector<double> per_draw;
    const double mc = estimate_rademacher(ce, q, 73, nullptr, &per_draw);
    const double exact = estimate_rademacher_exact(ce, q, 74);
    double var = 0.0;
    for (double v : per_draw) var += (v - mc) * (v - mc);
    var /= per_draw.size() - 1;
    const double se = std::sqrt(var / per_draw.size());
    if (std::abs(mc - exact) > 2.0 * se + 1e-6) {
      problems.push_back("exact vs monte carlo: |" + std::to_string(mc) + " - " +
                         std::to_string(exact) + "| > 2se=" +
                         std::to_string(2 * se));
    }
  }

  // monotone in B and r on a shared-seed grid
  {
    const auto dist = make_random_separable(4, 3, 0.1, 8, 75);
    RademacherQuery q;
    q.data = sample(dist, 10, 76);
    q.draws = 24;
    q.restarts = 4;
    q.ascent_steps = 100;
    // r >= risk(0) = log 3 keeps every localized cell nonempty
    const std::vector<double> Bs = {0.25, 0.5, 1.0, 2.0};
    const std::vector<double> rs = {1.2, 1.6, 2.2, 3.0};
    const Eigen::MatrixXd grid = rademacher_grid(ce, q, Bs, rs, 77);
    for (int bi = 0; bi < grid.rows(); ++bi) {
      for (int ri = 0; ri < grid.cols(); ++ri) {
        if (bi > 0 && grid(bi, ri) < grid(bi - 1, ri) - 1e-12) {
          problems.push_back("not monotone in B");
        }
        if (ri > 0 && grid(bi, ri) < grid(bi, ri - 1) - 1e-12) {
          problems.push_back("not monotone in r");
        }
      }
    }
  }

  // sqrt(r) scaling in the active-constraint regime
  double ratio = 0.0;
  {
    // B = 10, r = 2.8 sits in the regime where the risk cap binds at both
    // r and 2r (the uncapped estimate is ~1.6 here)
    const auto dist = make_random_separable(3, 3, 0.1, 6, 78);
    RademacherQuery q;
    q.data = sample(dist, 12, 79);
    q.B = 10.0;
    q.draws = 200;
    q.restarts = 6;
    q.ascent_steps = 150;
    q.r = 2.8;
    const double at_r = estimate_rademacher(ce, q, 80);
    q.r = 5.6;
    const double at_2r = estimate_rademacher(ce, q, 80);
    ratio = at_2r / at_r;
    const double target = std::sqrt(2.0);
    if (ratio < 0.7 * target || ratio > 1.3 * target) {
      problems.push_back("doubling r scaled the estimate by " +
                         std::to_string(ratio) + ", outside sqrt(2) +/- 30%");
    }
  }

  Outcome out;
  out.passed = problems.empty();
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "exact-vs-mc ok, grid monotone, doubling-r ratio %.3f%s%s",
                ratio, problems.empty() ? "" : "; FAIL: ",
                problems.empty() ? "" : problems.front().c_str());
  out.detail = buf;
  return out;
}

// ------------------------------------------------------------ criterion 8

Outcome criterion8() {
  ExperimentSpec spec;
  spec.loss.family = LossFamily::cross_entropy;
  spec.loss.alpha = 1.0;
  spec.dist_kind = DistKind::random;
  spec.dist_d = 8;
  spec.support_size = 16;
  spec.k_grid = {3, 4};
  spec.T_grid = {200};
  spec.n_grid = {100};
  spec.gamma = 0.1;
  spec.seed_count = 2;
  spec.seed_base = 88;

  auto csv_of = [&](const std::string& path) {
    spec.output = path;
    run_sweep(spec);
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  };
  const std::string a = csv_of("acceptance_sweep_a.csv");
  const std::string b = csv_of("acceptance_sweep_b.csv");
  std::filesystem::remove("acceptance_sweep_a.csv");
  std::filesystem::remove("acceptance_sweep_b.csv");

  auto strip_wall_time = [](const std::string& csv) {
    std::istringstream is(csv);
    std::ostringstream os;
    std::string line;
    while (std::getline(is, line)) {
      const auto pos = line.rfind(',');
      os << (pos == std::string::npos ? line : line.substr(0, pos)) << "\n";
    }
    return os.str();
  };

  Outcome out;
  out.passed = strip_wall_time(a) == strip_wall_time(b) && !a.empty();
  out.detail = out.passed ? "repeated sweep CSVs byte-identical (timing excluded)"
                          : "CSV bytes differ between identical runs";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected = std::atoi(argv[i + 1]);
      ++i;
    } else {
      std::fprintf(stderr, "usage: acceptance [--criterion N]\n");
      return 2;
    }
  }

  const struct {
    int id;
    const char* title;
    Outcome (*run)();
    double time_limit;  // seconds; 0 = none stated
  } criteria[] = {
      {1, "gradient correctness vs finite differences", criterion1, 10.0},
      {2, "lemma checker suite green (with falsifications)", criterion2, 300.0},
      {3, "optimization error bound, explicit constants", criterion3, 0.0},
      {4, "hard-instance fidelity", criterion4, 0.0},
      {5, "separation experiment (hard p=2 vs cross-entropy)", criterion5, 1800.0},
      {6, "risk decay in T and n", criterion6, 0.0},
      {7, "Rademacher estimator sanity", criterion7, 0.0},
      {8, "sweep determinism", criterion8, 0.0},
  };

  bool all_passed = true;
  for (const auto& c : criteria) {
    if (selected != 0 && c.id != selected) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.passed = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (c.time_limit > 0.0 && secs > c.time_limit) {
      out.passed = false;
      out.detail += " [exceeded the " + std::to_string(c.time_limit) +
                    "s budget]";
    }
    std::printf("[%s] criterion %d: %s -- %s (%.1fs)\n",
                out.passed ? "PASS" : "FAIL", c.id, c.title,
                out.detail.c_str(), secs);
    std::fflush(stdout);
    all_passed = all_passed && out.passed;
  }
  return all_passed ? 0 : 1;
}
