#include "gdlab/check.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gdlab/loss_template.hpp"
#include "gdlab/rng.hpp"

namespace gdlab {

namespace {

std::string fmt_vec(const Eigen::VectorXd& v, int max_entries = 6) {
  std::ostringstream os;
  os << "[";
  const int m = static_cast<int>(v.size());
  for (int i = 0; i < std::min(m, max_entries); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  if (m > max_entries) os << ", ...";
  os << "]";
  return os.str();
}

Eigen::VectorXd sample_in_box(RandomStream& rng, int dim, double lo, double hi) {
  Eigen::VectorXd u(dim);
  for (int i = 0; i < dim; ++i) u[i] = rng.uniform(lo, hi);
  return u;
}

// Tracks the worst observed/bound ratio and its witness.
struct RatioTracker {
  double worst = 0.0;
  std::string witness;

  void observe(double observed, double bound, const std::string& where) {
    double ratio;
    if (bound > 0.0) {
      ratio = observed / bound;
    } else {
      ratio = (observed <= 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
    }
    if (ratio > worst) {
      worst = ratio;
      if (ratio > 1.0) witness = where;
    }
  }

  CheckReport report(std::string name, long samples) const {
    CheckReport r;
    r.name = std::move(name);
    r.worst_ratio = worst;
    r.passed = worst <= 1.0;
    r.witness = r.passed ? "" : witness;
    r.samples_used = samples;
    return r;
  }
};

}  // namespace

void write_reports_json(const std::vector<CheckReport>& reports,
                        std::ostream& os) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json e;
    e["name"] = r.name;
    e["passed"] = r.passed;
    e["skipped_precondition"] = r.skipped_precondition;
    e["worst_ratio"] = r.worst_ratio;
    e["witness"] = r.witness;
    e["samples_used"] = r.samples_used;
    j.push_back(std::move(e));
  }
  os << j.dump(2) << "\n";
}

CheckReport check_self_bounding(const LossTemplate& tmpl, long samples,
                                std::uint64_t seed, double beta_override) {
  const double beta = beta_override > 0.0 ? beta_override : tmpl.beta();
  const double q = tmpl.q();
  RandomStream rng(seed);
  RatioTracker tracker;
  for (long s = 0; s < samples; ++s) {
    const Eigen::VectorXd u =
        sample_in_box(rng, tmpl.dim(), tmpl.sample_lo(), tmpl.sample_hi());
    const double val = tmpl.value(u);
    const double gq = lq_norm(tmpl.gradient(u), q);
    tracker.observe(gq * gq, 2.0 * beta * val, "u=" + fmt_vec(u));
  }
  return tracker.report("self_bounding[" + tmpl.name() + "]", samples);
}

CheckReport check_diff_self_bound(const LossTemplate& tmpl, long pairs,
                                  std::uint64_t seed, double beta_override) {
  const double beta = beta_override > 0.0 ? beta_override : tmpl.beta();
  const double p = tmpl.p();
  RandomStream rng(seed);
  RatioTracker tracker;
  for (long s = 0; s < pairs; ++s) {
    const Eigen::VectorXd u =
        sample_in_box(rng, tmpl.dim(), tmpl.sample_lo(), tmpl.sample_hi());
    Eigen::VectorXd v;
    if (s % 2 == 0) {
      v = sample_in_box(rng, tmpl.dim(), tmpl.sample_lo(), tmpl.sample_hi());
    } else {
      // near pair; the bound is tightest at small separations
      v = u + 1e-3 * rng.gaussian_vector(tmpl.dim());
    }
    const double fu = tmpl.value(u);
    const double fv = tmpl.value(v);
    const double dist = lq_norm(u - v, p);
    const double lhs = (fu - fv) * (fu - fv);
    const double rhs = 6.0 * beta * std::max(fu, fv) * dist * dist;
    tracker.observe(lhs, rhs, "u=" + fmt_vec(u) + " v=" + fmt_vec(v));
  }
  return tracker.report("diff_self_bound[" + tmpl.name() + "]", pairs);
}

CheckReport estimate_grad_lipschitz_W(const MulticlassLoss& loss, long samples,
                                      std::uint64_t seed, int d,
                                      double bound_override) {
  const LossTemplate& tmpl = loss.tmpl();
  const int k = loss.k();
  const double bound =
      bound_override > 0.0
          ? bound_override
          : 3.0 * tmpl.beta() * k_smoothness_factor(k, tmpl.p());
  RandomStream rng(seed);
  RatioTracker tracker;
  for (long s = 0; s < samples; ++s) {
    Eigen::MatrixXd W(k, d);
    for (int r = 0; r < k; ++r) W.row(r) = sample_in_box(rng, d, -4.0, 4.0);
    // log-uniform separation; near pairs probe the supremum
    const double delta = std::pow(10.0, rng.uniform(-3.0, 0.5));
    Eigen::MatrixXd dir(k, d);
    for (int r = 0; r < k; ++r) dir.row(r) = rng.gaussian_vector(d);
    dir /= dir.norm();
    const Eigen::MatrixXd W2 = W + delta * dir;
    const Eigen::VectorXd x = rng.unit_sphere(d) * rng.uniform(0.2, 1.0);
    const int y = rng.uniform_int(k);
    const Eigen::MatrixXd g1 = loss.model_gradient(W, x, y);
    const Eigen::MatrixXd g2 = loss.model_gradient(W2, x, y);
    const double ratio_num = (g1 - g2).norm();
    const double sep = (W - W2).norm();
    tracker.observe(ratio_num, bound * sep,
                    "y=" + std::to_string(y) + " delta=" + std::to_string(delta));
  }
  return tracker.report("grad_lipschitz_W[" + tmpl.name() +
                            " k=" + std::to_string(k) + "]",
                        samples);
}

CheckReport check_template_membership(const MulticlassLoss& loss, long samples,
                                      std::uint64_t seed) {
  const LossTemplate& tmpl = loss.tmpl();
  const int dim = tmpl.dim();
  const double lo = tmpl.sample_lo();
  const double hi = tmpl.sample_hi();
  RandomStream rng(seed);
  RatioTracker tracker;
  const long per_part = samples / 4 + 1;

  // nonnegativity and midpoint convexity
  for (long s = 0; s < per_part; ++s) {
    const Eigen::VectorXd u = sample_in_box(rng, dim, lo, hi);
    const Eigen::VectorXd v = sample_in_box(rng, dim, lo, hi);
    const double fu = tmpl.value(u);
    const double fv = tmpl.value(v);
    if (fu < -1e-12) {
      tracker.observe(2.0, 1.0, "negative value at u=" + fmt_vec(u));
    }
    const double mid = tmpl.value(0.5 * (u + v));
    const double chord = 0.5 * (fu + fv);
    tracker.observe(mid, chord * (1.0 + 1e-9) + 1e-12,
                    "convexity at u=" + fmt_vec(u) + " v=" + fmt_vec(v));
  }

  // sampled L_p smoothness of the gradient
  const double p = tmpl.p();
  const double q = tmpl.q();
  for (long s = 0; s < per_part; ++s) {
    const Eigen::VectorXd u = sample_in_box(rng, dim, lo, hi);
    Eigen::VectorXd v;
    if (s % 2 == 0) {
      v = sample_in_box(rng, dim, lo, hi);
    } else {
      v = u + 1e-3 * rng.gaussian_vector(dim);
    }
    const double lhs = lq_norm(tmpl.gradient(u) - tmpl.gradient(v), q);
    const double rhs = tmpl.beta() * lq_norm(u - v, p);
    tracker.observe(lhs, rhs * (1.0 + 1e-9) + 1e-15,
                    "smoothness at u=" + fmt_vec(u) + " v=" + fmt_vec(v));
  }

  // tail domination on the positive orthant
  const TailFunction& tail = tmpl.tail();
  for (long s = 0; s < per_part; ++s) {
    const Eigen::VectorXd u = sample_in_box(rng, dim, 0.0, std::max(hi, 1.0));
    double dom = 0.0;
    for (int j = 0; j < dim; ++j) dom += tail.rho(u[j]);
    tracker.observe(tmpl.value(u), dom * (1.0 + 1e-9) + 1e-12,
                    "domination at u=" + fmt_vec(u));
  }

  // decay to zero along positive rays
  const double multipliers[] = {1.0, 10.0, 100.0, 1000.0};
  for (long s = 0; s < per_part; ++s) {
    Eigen::VectorXd u(dim);
    for (int j = 0; j < dim; ++j) u[j] = rng.uniform(0.05, std::max(hi, 1.0));
    double prev = std::numeric_limits<double>::infinity();
    double first = 0.0, last = 0.0;
    for (int m = 0; m < 4; ++m) {
      const double val = tmpl.value(multipliers[m] * u);
      if (m == 0) first = val;
      last = val;
      tracker.observe(val, prev * (1.0 + 1e-9) + 1e-15,
                      "ray not decreasing at u=" + fmt_vec(u) +
                          " t=" + std::to_string(multipliers[m]));
      prev = val;
    }
    tracker.observe(last, 0.5 * first + 1e-12,
                    "ray fails to decay at u=" + fmt_vec(u));
  }

  return tracker.report("template_membership[" + tmpl.name() + "]",
                        4 * per_part);
}

CheckReport check_tail_invariants(const TailFunction& tail, long samples,
                                  std::uint64_t seed) {
  RandomStream rng(seed);
  RatioTracker tracker;
  const double r0 = tail.rho(0.0);

  tracker.observe(1.0, r0 * (1.0 + 1e-12), "rho(0) < 1");
  tracker.observe(0.5, std::abs(tail.rho_prime(0.0)) * (1.0 + 1e-12),
                  "|rho'(0)| < 1/2");

  // strict decrease on a fixed grid, decay at the far end
  double prev = tail.rho(0.0);
  for (int i = 1; i <= 300; ++i) {
    const double x = 0.1 * i;
    const double val = tail.rho(x);
    if (val >= prev) {
      tracker.observe(2.0, 1.0, "not strictly decreasing at x=" + std::to_string(x));
    }
    prev = val;
  }
  tracker.observe(tail.rho(1e6), 0.05 * r0, "rho(1e6) not near 0");

  for (long s = 0; s < samples; ++s) {
    const double a = rng.uniform(0.0, 30.0);
    const double b = (s % 2 == 0) ? rng.uniform(0.0, 30.0)
                                  : a + rng.uniform(-1e-3, 1e-3);
    const double bb = std::max(0.0, b);
    tracker.observe(std::abs(tail.rho_prime(a)), 1.0 + 1e-12,
                    "not 1-Lipschitz at x=" + std::to_string(a));
    tracker.observe(std::abs(tail.rho_prime(a) - tail.rho_prime(bb)),
                    tail.beta * std::abs(a - bb) * (1.0 + 1e-9) + 1e-15,
                    "not beta-smooth at (" + std::to_string(a) + ", " +
                        std::to_string(bb) + ")");
    tracker.observe(tail.rho(0.5 * (a + bb)),
                    0.5 * (tail.rho(a) + tail.rho(bb)) * (1.0 + 1e-9) + 1e-15,
                    "not convex at (" + std::to_string(a) + ", " +
                        std::to_string(bb) + ")");
    if (tail.rho(a) < -1e-12) {
      tracker.observe(2.0, 1.0, "negative value at x=" + std::to_string(a));
    }
  }

  // inverse round trip on log-spaced eps
  for (long s = 0; s < std::min<long>(samples, 200); ++s) {
    const double eps = r0 * std::pow(10.0, rng.uniform(-9.0, 0.0));
    const double back = tail.rho(tail.inverse(eps));
    tracker.observe(std::abs(back - eps), 1e-10 * eps,
                    "inverse round trip off at eps=" + std::to_string(eps));
  }

  return tracker.report("tail_invariants[" + tail.name + "]", samples);
}

Eigen::MatrixXd comparator_model(const FiniteSupportDistribution& dist,
                                 double epsilon, const TailFunction& tail) {
  if (!(epsilon > 0.0) || !(epsilon < 0.5)) {
    throw std::invalid_argument("comparator_model: epsilon must lie in (0, 1/2)");
  }
  const double inv = tail.inverse(epsilon / dist.k);
  const double scale = inv / dist.gamma;
  Eigen::MatrixXd W = scale * dist.certificate;

  // every support margin must clear rho^{-1}(eps/k), which caps each of the
  // k-1 tail terms at eps/k
  for (const auto& pt : dist.support) {
    const Eigen::VectorXd scores = W * pt.x;
    for (int j = 0; j < dist.k; ++j) {
      if (j == pt.y) continue;
      if (scores[pt.y] - scores[j] < inv - 1e-9 * std::max(1.0, inv)) {
        throw std::runtime_error(
            "comparator_model: scaled certificate margin fell below "
            "rho^{-1}(eps/k) on the support");
      }
    }
  }
  return W;
}

CheckReport check_opt_error(const GDTrace& trace,
                            const Eigen::MatrixXd& comparator, double beta,
                            int k, double p, double epsilon) {
  CheckReport r;
  r.name = "opt_error";
  r.samples_used = 1;
  const double eta = trace.config.eta;
  const double eta_default = default_step_size(beta, k, p);
  const double comp_sq = comparator.squaredNorm();
  const double T = static_cast<double>(trace.config.T);

  double bound;
  if (std::abs(eta - eta_default) <= 1e-9 * eta_default) {
    bound = 6.0 * k_smoothness_factor(k, p) * beta * comp_sq / T + 2.0 * epsilon;
  } else if (eta < eta_default) {
    bound = comp_sq / (eta * T) + 2.0 * epsilon;
  } else {
    r.skipped_precondition = true;
    r.passed = false;
    r.witness = "eta exceeds 1/(6 beta k^{2/p}), lemma does not apply";
    return r;
  }
  const double observed = trace.final_risk();
  r.worst_ratio = bound > 0.0 ? observed / bound
                              : (observed <= 0.0 ? 0.0 : 2.0);
  r.passed = r.worst_ratio <= 1.0 + 1e-12;
  if (!r.passed) {
    r.witness = "final risk " + std::to_string(observed) + " > bound " +
                std::to_string(bound);
  }
  return r;
}

CheckReport check_norm_bound(const GDTrace& trace,
                             const Eigen::MatrixXd& comparator, double eta,
                             double epsilon, double beta, int k, double p) {
  CheckReport r;
  r.name = "norm_bound";
  const double eta_max = default_step_size(beta, k, p);
  if (eta > eta_max * (1.0 + 1e-9)) {
    r.skipped_precondition = true;
    r.passed = false;
    r.witness = "eta exceeds 1/(6 beta k^{2/p}), lemma does not apply";
    return r;
  }
  const double comp = comparator.norm();
  RatioTracker tracker;
  long used = 0;
  for (const auto& pt : trace.points) {
    const double slack = 2.0 * std::sqrt(eta * epsilon * pt.t);
    tracker.observe(pt.frob_norm, (2.0 * comp + slack) * (1.0 + 1e-12) + 1e-12,
                    "||W_t|| at t=" + std::to_string(pt.t));
    ++used;
  }
  auto check_diff = [&](const Eigen::MatrixXd& W, long t) {
    const double slack = 2.0 * std::sqrt(eta * epsilon * t);
    tracker.observe((W - comparator).norm(),
                    (comp + slack) * (1.0 + 1e-12) + 1e-12,
                    "||W_t - W*|| at t=" + std::to_string(t));
  };
  if (!trace.snapshots.empty()) {
    for (size_t i = 0; i < trace.snapshots.size(); ++i) {
      check_diff(trace.snapshots[i], trace.points[i].t);
    }
  } else {
    check_diff(trace.final_w, trace.config.T);
  }
  CheckReport out = tracker.report("norm_bound", used);
  return out;
}

CheckReport check_row_equality(const GDTrace& trace, const Dataset& data,
                               const MulticlassLoss& loss) {
  CheckReport r;
  r.name = "row_equality";
  if (dynamic_cast<const SumUnivariateTemplate*>(&loss.tmpl()) == nullptr) {
    r.skipped_precondition = true;
    r.passed = false;
    r.witness = "loss is not sum-univariate";
    return r;
  }
  for (int y : data.ys) {
    if (y != 0) {
      r.skipped_precondition = true;
      r.passed = false;
      r.witness = "dataset has labels other than class 0";
      return r;
    }
  }
  if (trace.snapshots.empty()) {
    r.skipped_precondition = true;
    r.passed = false;
    r.witness = "trace has no snapshots";
    return r;
  }
  RatioTracker tracker;
  for (size_t i = 0; i < trace.snapshots.size(); ++i) {
    const Eigen::MatrixXd& W = trace.snapshots[i];
    for (int row = 2; row < W.rows(); ++row) {
      const double diff = (W.row(row) - W.row(1)).lpNorm<Eigen::Infinity>();
      tracker.observe(diff, 1e-12,
                      "rows 1 and " + std::to_string(row) + " differ at t=" +
                          std::to_string(trace.points[i].t));
    }
  }
  CheckReport out =
      tracker.report("row_equality", static_cast<long>(trace.snapshots.size()));
  return out;
}

double gen_gap(const MulticlassLoss& loss, const Eigen::MatrixXd& W,
               const Dataset& data, const FiniteSupportDistribution& dist) {
  return population_risk_exact(loss, W, dist) - empirical_risk(loss, W, data);
}

// ---------------------------------------------------------------------------
// suite assembly

namespace {

// Template wrapper with deliberately wrong declared constants; only used to
// prove that the checkers can fail.
class RedeclaredTemplate final : public LossTemplate {
 public:
  RedeclaredTemplate(std::shared_ptr<const LossTemplate> base, double beta,
                     double lo, double hi)
      : LossTemplate("redeclared[" + base->name() + "]", base->dim(), base->p(),
                     beta, base->tail(), lo, hi),
        base_(std::move(base)) {}
  double value(const Eigen::VectorXd& u) const override { return base_->value(u); }
  Eigen::VectorXd gradient(const Eigen::VectorXd& u) const override {
    return base_->gradient(u);
  }

 private:
  std::shared_ptr<const LossTemplate> base_;
};

// Offset template: breaks decay to zero and tail domination.
class OffsetTemplate final : public LossTemplate {
 public:
  OffsetTemplate(std::shared_ptr<const LossTemplate> base, double offset)
      : LossTemplate("offset[" + base->name() + "]", base->dim(), base->p(),
                     base->beta(), base->tail(), base->sample_lo(),
                     base->sample_hi()),
        base_(std::move(base)),
        offset_(offset) {}
  double value(const Eigen::VectorXd& u) const override {
    return base_->value(u) + offset_;
  }
  Eigen::VectorXd gradient(const Eigen::VectorXd& u) const override {
    return base_->gradient(u);
  }

 private:
  std::shared_ptr<const LossTemplate> base_;
  double offset_;
};

struct NamedLoss {
  std::string tag;
  MulticlassLoss loss;
};

std::vector<NamedLoss> shipped_losses(int k) {
  const TailFunction exp1 = make_exponential_tail(1.0);
  const TailFunction poly1 = make_polynomial_tail(1.0);
  std::vector<NamedLoss> out;
  out.push_back({"ce_a1", make_cross_entropy(k, 1.0)});
  out.push_back({"ce_a2", make_cross_entropy(k, 2.0)});
  out.push_back({"sum_quad_exp", make_sum_univariate(k, make_phi_quadratic_tail(exp1))});
  out.push_back({"sum_lin_exp", make_sum_univariate(k, make_phi_linear_tail(exp1))});
  out.push_back({"sum_quad_poly", make_sum_univariate(k, make_phi_quadratic_tail(poly1))});
  return out;
}

}  // namespace

std::vector<CheckReport> run_verify_suite(const VerifyOptions& options) {
  std::vector<CheckReport> reports;
  const long samples = options.samples;
  std::uint64_t seq = 0;
  auto next_seed = [&] { return derive_seed(options.seed, seq++); };

  reports.push_back(check_tail_invariants(make_exponential_tail(1.0), samples, next_seed()));
  reports.push_back(check_tail_invariants(make_polynomial_tail(0.5), samples, next_seed()));
  reports.push_back(check_tail_invariants(make_polynomial_tail(1.0), samples, next_seed()));

  for (int k : {2, 4, 8, 16}) {
    for (const auto& nl : shipped_losses(k)) {
      const std::string suffix = " k=" + std::to_string(k);
      auto tag = [&](CheckReport r) {
        r.name += suffix;
        reports.push_back(std::move(r));
      };
      tag(check_self_bounding(nl.loss.tmpl(), samples, next_seed()));
      tag(check_diff_self_bound(nl.loss.tmpl(), samples, next_seed()));
      tag(check_template_membership(nl.loss, samples, next_seed()));
      tag(estimate_grad_lipschitz_W(nl.loss, samples, next_seed()));
    }
  }

  if (options.include_gd_checks) {
    const TailFunction exp1 = make_exponential_tail(1.0);
    const double gamma = 0.08;
    for (int k : {2, 4, 8, 16}) {
      const auto dist =
          make_random_separable(20, k, gamma, 40, next_seed());
      const Dataset data = sample(dist, 200, next_seed());
      struct RunCase {
        std::string tag;
        MulticlassLoss loss;
      };
      const std::vector<RunCase> cases = {
          {"ce_a1", make_cross_entropy(k, 1.0)},
          {"sum_quad_exp",
           make_sum_univariate(k, make_phi_quadratic_tail(exp1))},
      };
      for (const auto& rc : cases) {
        const double beta = rc.loss.tmpl().beta();
        const double p = rc.loss.tmpl().p();
        GDConfig cfg;
        cfg.eta = default_step_size(beta, k, p);
        cfg.T = 5000;
        cfg.record_every = 100;
        const GDTrace trace = gd_run(rc.loss, data, cfg);
        const double eps = 1.0 / static_cast<double>(cfg.T);
        const Eigen::MatrixXd comp = comparator_model(dist, eps, exp1);
        auto tag = [&](CheckReport r) {
          r.name += "[" + rc.tag + " random k=" + std::to_string(k) + "]";
          reports.push_back(std::move(r));
        };
        tag(check_opt_error(trace, comp, beta, k, p, eps));
        tag(check_norm_bound(trace, comp, cfg.eta, eps, beta, k, p));
      }
    }

    // hard instance runs, all labels class 0
    {
      const int k = 8;
      const auto dist = make_hard_lower_n(0.125, 200, k);
      const Dataset data = sample(dist, 200, next_seed());
      const TailFunction exp1b = make_exponential_tail(1.0);
      const MulticlassLoss hard_loss =
          make_sum_univariate(k, make_phi_quadratic_tail(exp1b));
      GDConfig cfg;
      cfg.eta = default_step_size(1.0, k, 2.0);
      cfg.T = 1000;
      cfg.record_every = 10;
      cfg.record_snapshots = true;
      const GDTrace trace = gd_run(hard_loss, data, cfg);
      const double eps = 1.0 / static_cast<double>(cfg.T);
      const Eigen::MatrixXd comp = comparator_model(dist, eps, exp1b);
      auto tag = [&](CheckReport r) {
        r.name += "[sum_quad_exp hard_lower_n k=8]";
        reports.push_back(std::move(r));
      };
      tag(check_row_equality(trace, data, hard_loss));
      tag(check_opt_error(trace, comp, 1.0, k, 2.0, eps));
      tag(check_norm_bound(trace, comp, cfg.eta, eps, 1.0, k, 2.0));

      const MulticlassLoss ce = make_cross_entropy(k, 1.0);
      GDConfig cfg2 = cfg;
      cfg2.record_snapshots = false;
      cfg2.eta = default_step_size(1.0, k, kPInfinity);
      const GDTrace trace2 = gd_run(ce, data, cfg2);
      auto tag2 = [&](CheckReport r) {
        r.name += "[ce_a1 hard_lower_n k=8]";
        reports.push_back(std::move(r));
      };
      tag2(check_opt_error(trace2, comp, 1.0, k, kPInfinity, eps));
      tag2(check_norm_bound(trace2, comp, cfg2.eta, eps, 1.0, k, kPInfinity));
    }
  }

  auto falsified = run_falsification_suite(derive_seed(options.seed, 9999));
  reports.insert(reports.end(), falsified.begin(), falsified.end());
  return reports;
}

std::vector<CheckReport> run_falsification_suite(std::uint64_t seed) {
  std::vector<CheckReport> reports;
  std::uint64_t seq = 0;
  auto next_seed = [&] { return derive_seed(seed, seq++); };

  auto expect_fail = [&](CheckReport inner) {
    CheckReport r;
    r.name = "falsify:" + inner.name;
    r.passed = !inner.passed && !inner.skipped_precondition;
    r.worst_ratio = inner.worst_ratio;
    r.samples_used = inner.samples_used;
    r.witness = r.passed ? "" : "falsified check did not fail";
    return r;
  };

  const int k = 4;
  const auto ce = make_cross_entropy(k, 1.0);
  const auto broken = std::make_shared<RedeclaredTemplate>(
      ce.tmpl_ptr(), ce.tmpl().beta() / 50.0, 0.0, 6.0);

  reports.push_back(expect_fail(check_self_bounding(*broken, 2000, next_seed())));
  reports.push_back(expect_fail(check_diff_self_bound(*broken, 2000, next_seed())));
  reports.push_back(expect_fail(estimate_grad_lipschitz_W(
      ce, 2000, next_seed(), 6,
      3.0 * (ce.tmpl().beta() / 50.0) * k_smoothness_factor(k, ce.tmpl().p()))));

  const MulticlassLoss off_loss(
      k, std::make_shared<OffsetTemplate>(ce.tmpl_ptr(), 1.0));
  reports.push_back(expect_fail(check_template_membership(off_loss, 2000, next_seed())));

  reports.push_back(expect_fail(
      check_tail_invariants(make_exponential_tail(1.5), 2000, next_seed())));

  // GD-based falsifications: claim a zero comparator with near-zero epsilon
  {
    const auto dist = make_random_separable(6, 3, 0.1, 9, next_seed());
    const Dataset data = sample(dist, 30, next_seed());
    const auto loss = make_cross_entropy(3, 1.0);
    GDConfig cfg;
    cfg.eta = default_step_size(1.0, 3, kPInfinity);
    cfg.T = 50;
    const GDTrace trace = gd_run(loss, data, cfg);
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 6);
    reports.push_back(
        expect_fail(check_opt_error(trace, zero, 1.0, 3, kPInfinity, 1e-12)));
    reports.push_back(expect_fail(
        check_norm_bound(trace, zero, cfg.eta, 1e-12, 1.0, 3, kPInfinity)));
  }

  // row equality on a perturbed snapshot
  {
    const int kk = 4;
    const auto dist = make_hard_lower_n(0.125, 50, kk);
    const Dataset data = sample(dist, 50, next_seed());
    const auto loss =
        make_sum_univariate(kk, make_phi_quadratic_tail(make_exponential_tail(1.0)));
    GDConfig cfg;
    cfg.eta = default_step_size(1.0, kk, 2.0);
    cfg.T = 50;
    cfg.record_every = 10;
    cfg.record_snapshots = true;
    GDTrace trace = gd_run(loss, data, cfg);
    trace.snapshots.back()(2, 0) += 1e-6;
    reports.push_back(expect_fail(check_row_equality(trace, data, loss)));
  }

  return reports;
}

}  // namespace gdlab
