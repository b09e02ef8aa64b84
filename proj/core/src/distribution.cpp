#include "gdlab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gdlab/loss.hpp"
#include "gdlab/rng.hpp"

namespace gdlab {

namespace {

double support_margin(const FiniteSupportDistribution& dist,
                      const SupportPoint& pt) {
  double m = std::numeric_limits<double>::infinity();
  const Eigen::VectorXd scores = dist.certificate * pt.x;
  for (int j = 0; j < dist.k; ++j) {
    if (j == pt.y) continue;
    m = std::min(m, scores[pt.y] - scores[j]);
  }
  return m;
}

}  // namespace

void FiniteSupportDistribution::validate() const {
  if (support.empty()) throw std::invalid_argument("distribution: empty support");
  if (k < 2) throw std::invalid_argument("distribution: k >= 2 required");
  if (certificate.rows() != k || certificate.cols() != d) {
    throw std::invalid_argument("distribution: certificate must be k x d");
  }
  double total = 0.0;
  for (const auto& pt : support) {
    if (!(pt.prob > 0.0)) {
      throw std::invalid_argument("distribution: probabilities must be positive");
    }
    total += pt.prob;
    if (pt.y < 0 || pt.y >= k) {
      throw std::invalid_argument("distribution: label outside [0, k)");
    }
    if (pt.x.size() != d) {
      throw std::invalid_argument("distribution: point dimension mismatch");
    }
    if (pt.x.norm() > 1.0 + 1e-12) {
      throw std::invalid_argument("distribution: ||x||_2 > 1 on the support");
    }
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("distribution: probabilities sum to " +
                                std::to_string(total) + ", not 1");
  }
  if (certificate.norm() > 1.0 + 1e-12) {
    throw std::invalid_argument("distribution: certificate norm exceeds 1");
  }
  for (const auto& pt : support) {
    if (support_margin(*this, pt) < gamma - 1e-12) {
      throw std::invalid_argument("distribution: certificate margin below gamma");
    }
  }
}

void FiniteSupportDistribution::save(std::ostream& os) const {
  nlohmann::json j;
  j["d"] = d;
  j["k"] = k;
  j["gamma"] = gamma;
  auto& sup = j["support"] = nlohmann::json::array();
  for (const auto& pt : support) {
    nlohmann::json e;
    e["x"] = std::vector<double>(pt.x.data(), pt.x.data() + pt.x.size());
    e["y"] = pt.y;
    e["prob"] = pt.prob;
    sup.push_back(std::move(e));
  }
  auto& cert = j["certificate"] = nlohmann::json::array();
  for (int r = 0; r < k; ++r) {
    cert.push_back(std::vector<double>(certificate.row(r).begin(),
                                       certificate.row(r).end()));
  }
  os << j.dump(2) << "\n";
}

FiniteSupportDistribution FiniteSupportDistribution::load(std::istream& is) {
  nlohmann::json j;
  is >> j;
  FiniteSupportDistribution dist;
  dist.d = j.at("d").get<int>();
  dist.k = j.at("k").get<int>();
  dist.gamma = j.at("gamma").get<double>();
  for (const auto& e : j.at("support")) {
    SupportPoint pt;
    const auto xs = e.at("x").get<std::vector<double>>();
    pt.x = Eigen::Map<const Eigen::VectorXd>(xs.data(), xs.size());
    pt.y = e.at("y").get<int>();
    pt.prob = e.at("prob").get<double>();
    dist.support.push_back(std::move(pt));
  }
  dist.certificate.resize(dist.k, dist.d);
  const auto& cert = j.at("certificate");
  for (int r = 0; r < dist.k; ++r) {
    const auto row = cert.at(r).get<std::vector<double>>();
    dist.certificate.row(r) =
        Eigen::Map<const Eigen::RowVectorXd>(row.data(), row.size());
  }
  dist.validate();
  return dist;
}

FiniteSupportDistribution make_random_separable(
    int d, int k, double gamma, int support_size, std::uint64_t seed,
    const RandomSeparableOptions& options) {
  if (d < 2) throw std::invalid_argument("make_random_separable: d >= 2 required");
  if (k < 2) throw std::invalid_argument("make_random_separable: k >= 2 required");
  if (!(gamma > 0.0) || gamma >= 1.0 / std::sqrt(2.0)) {
    throw std::invalid_argument(
        "make_random_separable: gamma must lie in (0, 1/sqrt(2))");
  }
  if (support_size < k) {
    throw std::invalid_argument("make_random_separable: support_size >= k required");
  }

  RandomStream rng(seed);
  FiniteSupportDistribution dist;
  dist.d = d;
  dist.k = k;
  dist.gamma = gamma;

  // certificate: rows on the sphere of radius 1/sqrt(k)
  dist.certificate.resize(k, d);
  for (int r = 0; r < k; ++r) {
    dist.certificate.row(r) = rng.unit_sphere(d).transpose() / std::sqrt(double(k));
  }

  const int max_mix_iters = 2000;
  const int max_resamples = 50;
  const double step = 0.05;

  for (int i = 0; i < support_size; ++i) {
    const int y = (i < k) ? i : rng.uniform_int(k);
    bool placed = false;
    for (int attempt = 0; attempt < max_resamples && !placed; ++attempt) {
      Eigen::VectorXd x = rng.unit_sphere(d);
      for (int it = 0; it < max_mix_iters; ++it) {
        const Eigen::VectorXd scores = dist.certificate * x;
        double margin = std::numeric_limits<double>::infinity();
        int rival = -1;
        double rival_score = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < k; ++j) {
          if (j == y) continue;
          margin = std::min(margin, scores[y] - scores[j]);
          if (scores[j] > rival_score) {
            rival_score = scores[j];
            rival = j;
          }
        }
        if (margin >= gamma) {
          placed = true;
          dist.support.push_back({x, y, 0.0});
          break;
        }
        Eigen::VectorXd dir =
            (dist.certificate.row(y) - dist.certificate.row(rival)).transpose();
        const double dn = dir.norm();
        if (dn < 1e-14) break;
        x = (x + step * dir / dn).normalized();
      }
    }
    if (!placed) {
      throw std::runtime_error(
          "make_random_separable: margin " + std::to_string(gamma) +
          " infeasible for this certificate after bounded retries");
    }
  }

  const int s = support_size;
  if (options.profile == ProbProfile::uniform) {
    for (auto& pt : dist.support) pt.prob = 1.0 / s;
  } else {
    // geometric ladder over the non-anchor points
    const int ladder = s - k;
    if (ladder < 1) {
      for (auto& pt : dist.support) pt.prob = 1.0 / s;
    } else {
      const double top = options.ladder_top;
      const double bottom = options.ladder_bottom;
      if (!(top > 0.0) || !(bottom > 0.0) || bottom > top) {
        throw std::invalid_argument("make_random_separable: bad ladder profile");
      }
      const double ratio =
          (ladder == 1) ? 1.0 : std::pow(bottom / top, 1.0 / (ladder - 1));
      double mass = 0.0;
      for (int i = 0; i < ladder; ++i) {
        const double p = top * std::pow(ratio, i);
        dist.support[k + i].prob = p;
        mass += p;
      }
      if (mass >= 0.5) {
        throw std::invalid_argument(
            "make_random_separable: ladder mass >= 1/2, lower ladder_top");
      }
      for (int i = 0; i < k; ++i) dist.support[i].prob = (1.0 - mass) / k;
    }
  }

  dist.validate();
  return dist;
}

FiniteSupportDistribution make_hard_lower_n(double gamma, long n, int k) {
  if (!(gamma > 0.0) || gamma > 0.125 + 1e-15) {
    throw std::invalid_argument("make_hard_lower_n: gamma must lie in (0, 1/8]");
  }
  if (n < 35) throw std::invalid_argument("make_hard_lower_n: n >= 35 required");
  if (k < 2) throw std::invalid_argument("make_hard_lower_n: k >= 2 required");

  FiniteSupportDistribution dist;
  dist.d = 3;
  dist.k = k;
  dist.gamma = gamma;

  const double pn = 1.0 / static_cast<double>(n);
  Eigen::VectorXd x1(3), x2(3), x3(3);
  x1 << 1.0, 0.0, 0.0;
  x2 << -0.5, 3.0 * gamma, 0.0;
  x3 << 0.0, -0.125, 4.0 * gamma + 0.25;
  dist.support.push_back({x1, 0, (59.0 / 64.0) * (1.0 - pn)});
  dist.support.push_back({x2, 0, (5.0 / 64.0) * (1.0 - pn)});
  dist.support.push_back({x3, 0, pn});

  dist.certificate = Eigen::MatrixXd::Zero(k, 3);
  dist.certificate.row(0) << gamma, 0.5, 0.25;

  dist.validate();
  return dist;
}

FiniteSupportDistribution make_hard_lower_t(double gamma, int k, double T,
                                            double eta, double epsilon,
                                            const TailFunction& tail) {
  if (!(gamma > 0.0) || gamma > 0.125 + 1e-15) {
    throw std::invalid_argument("make_hard_lower_t: gamma must lie in (0, 1/8]");
  }
  if (!(epsilon > 0.0) || epsilon > 1.0 / 16.0 + 1e-15) {
    throw std::invalid_argument("make_hard_lower_t: epsilon must lie in (0, 1/16]");
  }
  if (k < 2 || !(T >= 1.0) || !(eta > 0.0)) {
    throw std::invalid_argument("make_hard_lower_t: bad k, T or eta");
  }

  const double inv = tail.inverse(16.0 * epsilon / k);
  const double lhs = inv * inv / (gamma * gamma * eta * T);
  if (lhs > epsilon) {
    throw std::runtime_error(
        "make_hard_lower_t: infeasible epsilon, rho^{-1}(16 eps/k)^2 / "
        "(gamma^2 eta T) = " +
        std::to_string(lhs) + " > eps = " + std::to_string(epsilon));
  }
  const double p = inv / (72.0 * gamma * gamma * T * k * eta);
  if (p > epsilon) {
    throw std::runtime_error("make_hard_lower_t: p = " + std::to_string(p) +
                             " exceeds epsilon, outside the construction's regime");
  }

  FiniteSupportDistribution dist;
  dist.d = 2;
  dist.k = k;
  dist.gamma = gamma;
  Eigen::VectorXd x1(2), x2(2);
  x1 << 1.0, 0.0;
  x2 << -0.5, 3.0 * gamma;
  dist.support.push_back({x1, 0, 1.0 - p});
  dist.support.push_back({x2, 0, p});

  dist.certificate = Eigen::MatrixXd::Zero(k, 2);
  dist.certificate.row(0) << gamma, 0.5;

  dist.validate();
  return dist;
}

Dataset sample(const FiniteSupportDistribution& dist, int n,
               std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample: n >= 1 required");
  const int s = static_cast<int>(dist.support.size());
  std::vector<double> cum(s);
  double acc = 0.0;
  for (int i = 0; i < s; ++i) {
    acc += dist.support[i].prob;
    cum[i] = acc;
  }
  cum[s - 1] = 1.0;

  RandomStream rng(seed);
  Dataset data;
  data.k = dist.k;
  data.xs.resize(dist.d, n);
  data.ys.resize(n);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const int idx = static_cast<int>(
        std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    const auto& pt = dist.support[std::min(idx, s - 1)];
    data.xs.col(i) = pt.x;
    data.ys[i] = pt.y;
  }
  return data;
}

double population_risk_exact(const MulticlassLoss& loss,
                             const Eigen::MatrixXd& W,
                             const FiniteSupportDistribution& dist) {
  if (loss.k() != dist.k) {
    throw std::invalid_argument("population_risk_exact: k mismatch");
  }
  if (W.rows() != dist.k || W.cols() != dist.d) {
    throw std::invalid_argument("population_risk_exact: W shape mismatch");
  }
  double risk = 0.0;
  for (const auto& pt : dist.support) {
    risk += pt.prob * loss.value(W * pt.x, pt.y);
  }
  return risk;
}

double margin_certificate_check(const FiniteSupportDistribution& dist) {
  if (dist.certificate.norm() > 1.0 + 1e-12) {
    throw std::invalid_argument(
        "margin_certificate_check: ||W*||_F = " +
        std::to_string(dist.certificate.norm()) + " exceeds 1");
  }
  double m = std::numeric_limits<double>::infinity();
  for (const auto& pt : dist.support) {
    m = std::min(m, support_margin(dist, pt));
  }
  return m;
}

}  // namespace gdlab
