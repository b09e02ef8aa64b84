#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gdlab/distribution.hpp"
#include "gdlab/finite_diff.hpp"
#include "gdlab/gd.hpp"
#include "gdlab/loss_template.hpp"
#include "gdlab/rng.hpp"

using namespace gdlab;

namespace {

Dataset one_point_dataset() {
  Dataset data;
  data.k = 2;
  data.xs.resize(2, 1);
  data.xs.col(0) << 1.0, 0.0;
  data.ys = {0};
  return data;
}

}  // namespace

TEST_CASE("default step size formula") {
  CHECK(default_step_size(1.0, 4, 2.0) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
  CHECK(default_step_size(1.0, 4, kPInfinity) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  for (int k = 2; k <= 1 << 16; k *= 4) {
    CHECK(default_step_size(1.0, k, kPInfinity) >= 1.0 / (6.0 * std::exp(1.0)) - 1e-15);
  }
  CHECK_THROWS_AS(default_step_size(0.0, 4, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(default_step_size(1.0, 1, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(default_step_size(1.0, 4, 1.5), std::invalid_argument);
}

TEST_CASE("two-step hand-simulated run on one point") {
  const auto ce = make_cross_entropy(2, 1.0);
  const Dataset data = one_point_dataset();
  GDConfig cfg;
  cfg.eta = 1.0 / 12.0;
  cfg.T = 2;
  const GDTrace trace = gd_run(ce, data, cfg);

  REQUIRE(trace.points.size() == 2);
  CHECK(trace.points[0].t == 1);
  CHECK(trace.points[0].frob_norm == 0.0);
  CHECK(trace.points[0].emp_risk == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  CHECK(trace.final_w(0, 0) == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
  CHECK(trace.final_w(0, 1) == 0.0);
  CHECK(trace.final_w(1, 0) == doctest::Approx(-1.0 / 24.0).epsilon(1e-14));
  CHECK(trace.final_w(1, 1) == 0.0);

  CHECK(trace.points[1].emp_risk ==
        doctest::Approx(std::log(1.0 + std::exp(-1.0 / 12.0))).epsilon(1e-14));
  CHECK(trace.points[1].emp_risk == doctest::Approx(0.6523).epsilon(1e-4));
}

TEST_CASE("T=1 performs no update") {
  const auto ce = make_cross_entropy(2, 1.0);
  GDConfig cfg;
  cfg.eta = 0.1;
  cfg.T = 1;
  const GDTrace trace = gd_run(ce, one_point_dataset(), cfg);
  CHECK(trace.points.size() == 1);
  CHECK(trace.final_w.norm() == 0.0);
}

TEST_CASE("empirical risk basics") {
  const auto ce = make_cross_entropy(3, 1.0);
  Dataset data;
  data.k = 3;
  data.xs.resize(2, 2);
  data.xs.col(0) << 1.0, 0.0;
  data.xs.col(1) << 0.0, 1.0;
  data.ys = {0, 2};
  const Eigen::MatrixXd W0 = Eigen::MatrixXd::Zero(3, 2);
  CHECK(empirical_risk(ce, W0, data) == doctest::Approx(std::log(3.0)).epsilon(1e-14));

  RandomStream rng(5);
  Eigen::MatrixXd W(3, 2);
  for (int r = 0; r < 3; ++r) W.row(r) = rng.box_vector(2, 1.0).transpose();
  const double direct = 0.5 * (ce.value(W * data.xs.col(0), 0) +
                               ce.value(W * data.xs.col(1), 2));
  CHECK(empirical_risk(ce, W, data) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("duplicated points do not change the gradient") {
  const auto ce = make_cross_entropy(2, 1.0);
  Dataset single = one_point_dataset();
  Dataset doubled;
  doubled.k = 2;
  doubled.xs.resize(2, 2);
  doubled.xs.col(0) << 1.0, 0.0;
  doubled.xs.col(1) << 1.0, 0.0;
  doubled.ys = {0, 0};

  RandomStream rng(6);
  Eigen::MatrixXd W(2, 2);
  for (int r = 0; r < 2; ++r) W.row(r) = rng.box_vector(2, 1.0).transpose();
  const Eigen::MatrixXd g1 = empirical_risk_gradient(ce, W, single);
  const Eigen::MatrixXd g2 = empirical_risk_gradient(ce, W, doubled);
  CHECK((g1 - g2).norm() == 0.0);

  // the aggregated gd path gives the same trajectory for both datasets
  GDConfig cfg;
  cfg.eta = 1.0 / 12.0;
  cfg.T = 20;
  const GDTrace ta = gd_run(ce, single, cfg);
  const GDTrace tb = gd_run(ce, doubled, cfg);
  CHECK((ta.final_w - tb.final_w).norm() == 0.0);
}

TEST_CASE("empirical risk gradient matches finite differences") {
  RandomStream rng(7);
  const auto dist = make_random_separable(5, 3, 0.1, 12, 31);
  const Dataset data = sample(dist, 10, 32);
  const auto ce = make_cross_entropy(3, 1.0);

  Eigen::MatrixXd W(3, 5);
  for (int r = 0; r < 3; ++r) W.row(r) = rng.box_vector(5, 1.5).transpose();
  const Eigen::MatrixXd analytic = empirical_risk_gradient(ce, W, data);

  const double h = 1e-6;
  Eigen::MatrixXd numeric(3, 5);
  Eigen::MatrixXd Wp = W;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 5; ++c) {
      const double orig = Wp(r, c);
      Wp(r, c) = orig + h;
      const double fp = empirical_risk(ce, Wp, data);
      Wp(r, c) = orig - h;
      const double fm = empirical_risk(ce, Wp, data);
      Wp(r, c) = orig;
      numeric(r, c) = (fp - fm) / (2.0 * h);
    }
  }
  CHECK((analytic - numeric).norm() / std::max(1.0, analytic.norm()) <= 1e-5);
}

TEST_CASE("risk is nonincreasing in the monotone step-size regime") {
  const auto dist = make_random_separable(8, 4, 0.1, 20, 41);
  const Dataset data = sample(dist, 60, 42);
  for (const auto& loss :
       {make_cross_entropy(4, 1.0),
        make_sum_univariate(4, make_phi_quadratic_tail(make_exponential_tail(1.0)))}) {
    const double beta = loss.tmpl().beta();
    const double p = loss.tmpl().p();
    GDConfig cfg;
    cfg.eta = 1.0 / (3.0 * beta * k_smoothness_factor(4, p));
    cfg.T = 400;
    cfg.record_every = 1;
    const GDTrace trace = gd_run(loss, data, cfg);
    for (size_t i = 1; i < trace.points.size(); ++i) {
      CHECK(trace.points[i].emp_risk <=
            trace.points[i - 1].emp_risk * (1.0 + 1e-12) + 1e-15);
    }
  }
}

TEST_CASE("identical inputs give bitwise identical traces") {
  const auto dist = make_random_separable(6, 3, 0.1, 15, 51);
  const Dataset data = sample(dist, 40, 52);
  const auto ce = make_cross_entropy(3, 1.0);
  GDConfig cfg;
  cfg.eta = default_step_size(1.0, 3, kPInfinity);
  cfg.T = 300;
  cfg.record_every = 7;
  const GDTrace a = gd_run(ce, data, cfg);
  const GDTrace b = gd_run(ce, data, cfg);
  REQUIRE(a.points.size() == b.points.size());
  for (size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].emp_risk == b.points[i].emp_risk);
    CHECK(a.points[i].frob_norm == b.points[i].frob_norm);
  }
  CHECK((a.final_w - b.final_w).norm() == 0.0);
}

TEST_CASE("recording stride always includes the endpoints") {
  const auto ce = make_cross_entropy(2, 1.0);
  GDConfig cfg;
  cfg.eta = 0.05;
  cfg.T = 10;
  cfg.record_every = 4;
  const GDTrace trace = gd_run(ce, one_point_dataset(), cfg);
  REQUIRE(trace.points.size() == 4);  // t = 1, 5, 9, 10
  CHECK(trace.points.front().t == 1);
  CHECK(trace.points.back().t == 10);
}

TEST_CASE("trace csv export") {
  const auto ce = make_cross_entropy(2, 1.0);
  GDConfig cfg;
  cfg.eta = 0.1;
  cfg.T = 3;
  const GDTrace trace = gd_run(ce, one_point_dataset(), cfg);
  std::ostringstream os;
  trace.write_csv(os);
  const std::string csv = os.str();
  CHECK(csv.rfind("t,frob_norm,empirical_risk\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("diverging steps raise a numeric error naming the iteration") {
  const auto loss = make_sum_univariate(2, make_phi_quadratic_tail(make_exponential_tail(1.0)));
  // obtuse same-label points make the huge step overshoot one margin into
  // the quadratic branch, which then amplifies every oscillation
  Dataset data;
  data.k = 2;
  data.xs.resize(2, 2);
  data.xs.col(0) << 1.0, 0.0;
  data.xs.col(1) << -0.9, 0.2;
  data.ys = {0, 0};
  GDConfig cfg;
  cfg.eta = 1e18;
  cfg.T = 2000;
  CHECK_THROWS_AS(gd_run(loss, data, cfg), std::runtime_error);
}

TEST_CASE("config validation") {
  GDConfig cfg;
  cfg.eta = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.eta = 0.1;
  cfg.T = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
