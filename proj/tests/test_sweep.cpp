#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gdlab/sweep.hpp"

using namespace gdlab;

namespace {

ExperimentSpec tiny_spec() {
  ExperimentSpec spec;
  spec.loss.family = LossFamily::cross_entropy;
  spec.loss.alpha = 1.0;
  spec.dist_kind = DistKind::random;
  spec.dist_d = 6;
  spec.support_size = 12;
  spec.k_grid = {3};
  spec.T_grid = {50};
  spec.n_grid = {40};
  spec.gamma = 0.1;
  spec.seed_count = 1;
  spec.seed_base = 9;
  spec.eps_policy = EpsilonPolicyKind::one_over_T;
  return spec;
}

std::string strip_wall_time(const std::string& csv) {
  std::istringstream is(csv);
  std::ostringstream os;
  std::string line;
  while (std::getline(is, line)) {
    const auto pos = line.rfind(',');
    os << (pos == std::string::npos ? line : line.substr(0, pos)) << "\n";
  }
  return os.str();
}

}  // namespace

TEST_CASE("single-cell sweep emits one data row with ok status") {
  const SweepResult result = run_sweep(tiny_spec());
  REQUIRE(result.rows.size() == 1);
  const auto& r = result.rows[0];
  CHECK(r.status == "ok");
  CHECK(r.k == 3);
  CHECK(r.pop_risk > 0.0);
  CHECK(r.emp_risk > 0.0);
  CHECK(r.bound_opt > 0.0);

  std::ostringstream os;
  result.write_csv(os);
  const std::string csv = os.str();
  CHECK(csv.find("# gdlab sweep csv v1") == 0);
  CHECK(csv.find("schema_version,k,T,n,gamma,seed,eta,emp_risk,pop_risk,"
                 "frob_norm,bound_opt,bound_gen,status,wall_time") !=
        std::string::npos);

  std::istringstream is(csv);
  const SweepResult back = SweepResult::read_csv(is);
  REQUIRE(back.rows.size() == 1);
  CHECK(back.rows[0].pop_risk == r.pop_risk);
  CHECK(back.rows[0].status == "ok");
}

TEST_CASE("repeated sweeps are byte-identical outside the timing column") {
  ExperimentSpec spec = tiny_spec();
  spec.seed_count = 2;
  std::ostringstream a, b;
  run_sweep(spec).write_csv(a);
  run_sweep(spec).write_csv(b);
  CHECK(strip_wall_time(a.str()) == strip_wall_time(b.str()));
}

TEST_CASE("infeasible cells are skipped, not run") {
  ExperimentSpec spec = tiny_spec();
  // lower-side gate with a tiny horizon can never satisfy
  // eta gamma^2 T >= rho^{-1}(eps/k)^2 / eps
  spec.gate = FeasibilityGate::lower;
  const SweepResult result = run_sweep(spec);
  REQUIRE(result.rows.size() == 1);
  CHECK(result.rows[0].status == "skipped_infeasible");
  CHECK(result.rows[0].pop_risk == 0.0);
}

TEST_CASE("per-cell errors are recorded and the sweep continues") {
  ExperimentSpec spec = tiny_spec();
  spec.dist_kind = DistKind::hard_lower_n;
  spec.n_grid = {20, 40};  // hard_lower_n requires n >= 35: first cell errors
  spec.gate = FeasibilityGate::none;
  const SweepResult result = run_sweep(spec);
  REQUIRE(result.rows.size() == 2);
  CHECK(result.rows[0].status.rfind("error:", 0) == 0);
  CHECK(result.rows[1].status == "ok");
}

TEST_CASE("fit_loglog recovers exact power laws") {
  std::vector<std::pair<double, double>> xy;
  for (double x : {4.0, 8.0, 16.0, 32.0, 64.0}) xy.emplace_back(x, 3.0 * x);
  const FitResult fit = fit_loglog(xy);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.stderr_ <= 1e-6);

  std::vector<std::pair<double, double>> constant;
  for (double x : {4.0, 8.0, 16.0}) constant.emplace_back(x, 2.5);
  CHECK(fit_loglog(constant).slope == doctest::Approx(0.0).epsilon(1e-12));

  std::vector<std::pair<double, double>> two = {{1.0, 1.0}, {2.0, 2.0}};
  CHECK_THROWS_AS(fit_loglog(two), std::invalid_argument);
}

TEST_CASE("logarithmic growth over the integer range has a shallow slope") {
  // regression evaluated on exact c*log(x) data over x = 4..64; the slope is
  // 0.35129, far from the slope-1 signature of linear growth
  std::vector<std::pair<double, double>> xy;
  for (int x = 4; x <= 64; ++x) xy.emplace_back(x, 2.0 * std::log(double(x)));
  const FitResult fit = fit_loglog(xy);
  CHECK(fit.slope == doctest::Approx(0.35129).epsilon(1e-3));
  CHECK(fit.slope <= 0.36);
  CHECK(fit.slope > 0.0);
}

TEST_CASE("fit_scaling averages over seeds before fitting") {
  SweepResult result;
  for (int k : {2, 4, 8}) {
    for (int s = 0; s < 3; ++s) {
      SweepRow r;
      r.k = k;
      r.T = 100;
      r.n = 100;
      r.seed = s;
      r.pop_risk = 0.5 * k + 0.01 * s;  // mean ~ linear in k
      r.status = "ok";
      result.rows.push_back(r);
    }
  }
  const FitResult fit = fit_scaling(result, SweepAxis::k);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("config parsing round trip") {
  const std::string text = R"json({
    "loss": {"family": "sum_univariate", "phi": "quadratic_tail",
             "tail": {"kind": "exponential", "alpha": 1.0}},
    "distribution": {"kind": "hard_lower_n"},
    "grid": {"k": [4, 8], "T": [100], "n": [50]},
    "gamma": 0.125,
    "seeds": {"count": 2, "base": 7},
    "epsilon_policy": {"kind": "one_over_T"},
    "feasibility_gate": "none",
    "output": ""
  })json";
  const ExperimentSpec spec = ExperimentSpec::from_json_text(text);
  CHECK(spec.loss.family == LossFamily::sum_univariate);
  CHECK(spec.dist_kind == DistKind::hard_lower_n);
  CHECK(spec.k_grid.size() == 2);
  CHECK(spec.seed_count == 2);
  CHECK(spec.gate == FeasibilityGate::none);

  const SweepResult result = run_sweep(spec);
  CHECK(result.rows.size() == 4);
  for (const auto& r : result.rows) CHECK(r.status == "ok");

  CHECK_THROWS(ExperimentSpec::from_json_text("{\"loss\": {\"family\": \"nope\"}}"));
}

TEST_CASE("corpol epsilon policy evaluates the published formula") {
  ExperimentSpec spec = tiny_spec();
  spec.loss.family = LossFamily::sum_univariate;
  spec.loss.phi = PhiVariant::quadratic_tail;
  spec.loss.tail_kind = TailKind::polynomial;
  spec.loss.alpha = 1.0;
  spec.eps_policy = EpsilonPolicyKind::corpol_formula;
  const double eta = 1.0 / 18.0;  // beta = 2, k = 3, p = 2 -> 1/(6*2*3) = 1/36
  const double expected = std::pow(3.0, 2.0 / 3.0) /
                          std::pow((1.0 / 36.0) * 0.01 * 5000.0, 1.0 / 3.0);
  CHECK(spec.epsilon_for(3, 5000, 1.0 / 36.0) ==
        doctest::Approx(expected).epsilon(1e-12));
  (void)eta;
}

TEST_CASE("report emission is deterministic and handles empty results") {
  const std::string dir = "test_report_out";
  std::filesystem::remove_all(dir);
  SweepResult empty;
  emit_report({{"empty", empty}}, dir);
  CHECK(std::filesystem::exists(dir + "/summary.txt"));

  const SweepResult result = run_sweep(tiny_spec());
  emit_report({{"a", result}}, dir);
  std::ifstream f1(dir + "/summary.txt");
  std::stringstream s1;
  s1 << f1.rdbuf();
  emit_report({{"a", result}}, dir);
  std::ifstream f2(dir + "/summary.txt");
  std::stringstream s2;
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
  std::filesystem::remove_all(dir);
}
