#include "gdlab/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gdlab/gd.hpp"
#include "gdlab/loss_template.hpp"
#include "gdlab/rng.hpp"

namespace gdlab {

MulticlassLoss LossSpec::instantiate(int k) const {
  if (family == LossFamily::cross_entropy) {
    return make_cross_entropy(k, alpha);
  }
  switch (phi) {
    case PhiVariant::quadratic_tail:
      return make_sum_univariate(k, make_phi_quadratic_tail(tail()));
    case PhiVariant::linear_tail:
      return make_sum_univariate(k, make_phi_linear_tail(tail()));
    case PhiVariant::raw:
      return make_sum_univariate(k, make_phi_raw_exponential());
  }
  throw std::invalid_argument("LossSpec: unknown phi variant");
}

TailFunction LossSpec::tail() const {
  if (family == LossFamily::cross_entropy) return make_exponential_tail(alpha);
  if (phi == PhiVariant::raw) return make_exponential_tail(1.0);
  return make_tail(tail_kind, alpha);
}

std::string LossSpec::describe() const {
  if (family == LossFamily::cross_entropy) {
    return "cross_entropy(alpha=" + std::to_string(alpha) + ")";
  }
  std::string v = phi == PhiVariant::quadratic_tail ? "quadratic_tail"
                  : phi == PhiVariant::linear_tail  ? "linear_tail"
                                                    : "raw";
  std::string t = tail_kind == TailKind::exponential ? "exp" : "poly";
  return "sum_univariate(" + v + ", " + t + ", alpha=" + std::to_string(alpha) + ")";
}

void ExperimentSpec::validate() const {
  if (k_grid.empty() || T_grid.empty() || n_grid.empty()) {
    throw std::invalid_argument("ExperimentSpec: empty grid");
  }
  for (int k : k_grid) {
    if (k < 2) throw std::invalid_argument("ExperimentSpec: k >= 2 required");
  }
  for (long T : T_grid) {
    if (T < 1) throw std::invalid_argument("ExperimentSpec: T >= 1 required");
  }
  for (long n : n_grid) {
    if (n < 1) throw std::invalid_argument("ExperimentSpec: n >= 1 required");
  }
  if (!(gamma > 0.0)) throw std::invalid_argument("ExperimentSpec: gamma > 0 required");
  if (seed_count < 1) throw std::invalid_argument("ExperimentSpec: seeds >= 1 required");
}

double ExperimentSpec::epsilon_for(int k, long T, double eta) const {
  switch (eps_policy) {
    case EpsilonPolicyKind::one_over_T:
      return std::min(0.5, 1.0 / static_cast<double>(T));
    case EpsilonPolicyKind::corpol_formula: {
      const double a = loss.alpha;
      const double denom =
          std::pow(eta * gamma * gamma * static_cast<double>(T), a / (2.0 + a));
      return std::pow(static_cast<double>(k), 2.0 / (a + 2.0)) / denom;
    }
    case EpsilonPolicyKind::explicit_value:
      return eps_explicit;
  }
  throw std::invalid_argument("ExperimentSpec: unknown epsilon policy");
}

namespace {

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

void write_row(std::ostream& os, const SweepRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "1,%d,%ld,%ld,%.17g,%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%.6g\n",
                r.k, r.T, r.n, r.gamma,
                static_cast<unsigned long long>(r.seed), r.eta, r.emp_risk,
                r.pop_risk, r.frob_norm, r.bound_opt, r.bound_gen,
                sanitize(r.status).c_str(), r.wall_time);
  os << buf;
}

constexpr const char* kHeaderComment = "# gdlab sweep csv v1\n";
constexpr const char* kHeader =
    "schema_version,k,T,n,gamma,seed,eta,emp_risk,pop_risk,frob_norm,"
    "bound_opt,bound_gen,status,wall_time\n";

}  // namespace

void SweepResult::write_csv(std::ostream& os) const {
  os << kHeaderComment << kHeader;
  for (const auto& r : rows) write_row(os, r);
}

SweepResult SweepResult::read_csv(std::istream& is) {
  SweepResult result;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("schema_version", 0) == 0) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 14) {
      throw std::runtime_error("sweep csv: malformed row: " + line);
    }
    SweepRow r;
    r.k = std::stoi(fields[1]);
    r.T = std::stol(fields[2]);
    r.n = std::stol(fields[3]);
    r.gamma = std::stod(fields[4]);
    r.seed = std::stoull(fields[5]);
    r.eta = std::stod(fields[6]);
    r.emp_risk = std::stod(fields[7]);
    r.pop_risk = std::stod(fields[8]);
    r.frob_norm = std::stod(fields[9]);
    r.bound_opt = std::stod(fields[10]);
    r.bound_gen = std::stod(fields[11]);
    r.status = fields[12];
    r.wall_time = std::stod(fields[13]);
    result.rows.push_back(std::move(r));
  }
  return result;
}

SweepResult run_sweep(const ExperimentSpec& spec) {
  spec.validate();
  SweepResult result;

  std::ofstream out;
  if (!spec.output.empty()) {
    out.open(spec.output, std::ios::trunc);
    if (!out) throw std::runtime_error("run_sweep: cannot open " + spec.output);
    out << kHeaderComment << kHeader;
  }

  long cell_index = 0;
  for (int k : spec.k_grid) {
    for (long T : spec.T_grid) {
      for (long n : spec.n_grid) {
        const MulticlassLoss loss = spec.loss.instantiate(k);
        const double beta = loss.tmpl().beta();
        const double p = loss.tmpl().p();
        const double eta = default_step_size(beta, k, p);
        const double epsilon = spec.epsilon_for(k, T, eta);
        const TailFunction tail = spec.loss.tail();

        std::string cell_status = "ok";
        BoundTerms terms;
        if (epsilon > 0.5 || !(epsilon > 0.0)) {
          cell_status = "skipped_infeasible";
        } else {
          BoundInputs bi;
          bi.rho = tail;
          bi.beta = beta;
          bi.p = p;
          bi.k = k;
          bi.gamma = spec.gamma;
          bi.T = static_cast<double>(T);
          bi.n = static_cast<double>(n);
          bi.eta = eta;
          bi.epsilon = epsilon;
          terms = bound_values(bi);
          if (spec.gate != FeasibilityGate::none) {
            const auto side = spec.gate == FeasibilityGate::upper
                                  ? FeasibilitySide::upper
                                  : FeasibilitySide::lower;
            if (!epsilon_feasible(bi, side)) cell_status = "skipped_infeasible";
          }
        }

        for (int s = 0; s < spec.seed_count; ++s) {
          SweepRow row;
          row.k = k;
          row.T = T;
          row.n = n;
          row.gamma = spec.gamma;
          row.seed = s;
          row.eta = eta;
          row.bound_opt = terms.opt_term;
          row.bound_gen = terms.gen_term;
          row.status = cell_status;

          if (cell_status == "ok") {
            const auto t0 = std::chrono::steady_clock::now();
            try {
              const std::uint64_t stream =
                  derive_seed(spec.seed_base, cell_index, s);
              FiniteSupportDistribution dist;
              switch (spec.dist_kind) {
                case DistKind::random: {
                  RandomSeparableOptions opt;
                  opt.profile = spec.profile;
                  opt.ladder_top = spec.ladder_top;
                  opt.ladder_bottom = spec.ladder_bottom;
                  dist = make_random_separable(spec.dist_d, k, spec.gamma,
                                               spec.support_size,
                                               derive_seed(stream, 1), opt);
                  break;
                }
                case DistKind::hard_lower_n:
                  dist = make_hard_lower_n(spec.gamma, n, k);
                  break;
                case DistKind::hard_lower_t:
                  dist = make_hard_lower_t(spec.gamma, k,
                                           static_cast<double>(T), eta,
                                           epsilon, tail);
                  break;
              }
              const Dataset data = sample(dist, static_cast<int>(n),
                                          derive_seed(stream, 2));
              GDConfig cfg;
              cfg.eta = eta;
              cfg.T = T;
              cfg.record_every = std::max<long>(1, T / 8);
              const GDTrace trace = gd_run(loss, data, cfg);
              row.emp_risk = trace.final_risk();
              row.frob_norm = trace.final_norm();
              row.pop_risk = population_risk_exact(loss, trace.final_w, dist);
            } catch (const std::exception& e) {
              row.status = std::string("error: ") + e.what();
            }
            const auto t1 = std::chrono::steady_clock::now();
            row.wall_time =
                std::chrono::duration<double>(t1 - t0).count();
          }

          if (out.is_open()) {
            write_row(out, row);
            out.flush();
          }
          result.rows.push_back(std::move(row));
        }
        ++cell_index;
      }
    }
  }
  return result;
}

FitResult fit_loglog(const std::vector<std::pair<double, double>>& xy) {
  if (xy.size() < 3) {
    throw std::invalid_argument("fit_loglog: need >= 3 points");
  }
  const long m = static_cast<long>(xy.size());
  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(m), ly(m);
  for (long i = 0; i < m; ++i) {
    if (!(xy[i].first > 0.0) || !(xy[i].second > 0.0)) {
      throw std::invalid_argument("fit_loglog: nonpositive coordinate");
    }
    lx[i] = std::log(xy[i].first);
    ly[i] = std::log(xy[i].second);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (long i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) throw std::invalid_argument("fit_loglog: degenerate x values");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.points = m;
  double ss_res = 0.0;
  for (long i = 0; i < m; ++i) {
    const double pred = my + fit.slope * (lx[i] - mx);
    ss_res += (ly[i] - pred) * (ly[i] - pred);
  }
  fit.stderr_ = (m > 2) ? std::sqrt(ss_res / (m - 2) / sxx) : 0.0;
  return fit;
}

FitResult fit_scaling(const SweepResult& result, SweepAxis axis) {
  std::map<double, std::pair<double, long>> groups;  // axis value -> (sum, count)
  for (const auto& r : result.rows) {
    if (r.status != "ok") continue;
    const double x = axis == SweepAxis::k   ? static_cast<double>(r.k)
                     : axis == SweepAxis::T ? static_cast<double>(r.T)
                                            : static_cast<double>(r.n);
    auto& g = groups[x];
    g.first += r.pop_risk;
    g.second += 1;
  }
  std::vector<std::pair<double, double>> xy;
  for (const auto& [x, g] : groups) {
    const double mean = g.first / g.second;
    if (mean > 0.0) xy.emplace_back(x, mean);
  }
  return fit_loglog(xy);
}

ExperimentSpec ExperimentSpec::from_json_text(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ExperimentSpec spec;

  const auto& jl = j.at("loss");
  const std::string family = jl.at("family").get<std::string>();
  if (family == "cross_entropy") {
    spec.loss.family = LossFamily::cross_entropy;
    spec.loss.alpha = jl.value("alpha", 1.0);
  } else if (family == "sum_univariate") {
    spec.loss.family = LossFamily::sum_univariate;
    const std::string phi = jl.value("phi", "quadratic_tail");
    if (phi == "quadratic_tail") {
      spec.loss.phi = PhiVariant::quadratic_tail;
    } else if (phi == "linear_tail") {
      spec.loss.phi = PhiVariant::linear_tail;
    } else if (phi == "raw_exponential") {
      spec.loss.phi = PhiVariant::raw;
    } else {
      throw std::invalid_argument("config: unknown phi variant " + phi);
    }
    if (jl.contains("tail")) {
      const auto& jt = jl.at("tail");
      const std::string kind = jt.at("kind").get<std::string>();
      if (kind == "exponential") {
        spec.loss.tail_kind = TailKind::exponential;
      } else if (kind == "polynomial") {
        spec.loss.tail_kind = TailKind::polynomial;
      } else {
        throw std::invalid_argument("config: unknown tail kind " + kind);
      }
      spec.loss.alpha = jt.value("alpha", 1.0);
    }
  } else {
    throw std::invalid_argument("config: unknown loss family " + family);
  }

  const auto& jd = j.at("distribution");
  const std::string kind = jd.at("kind").get<std::string>();
  if (kind == "random") {
    spec.dist_kind = DistKind::random;
  } else if (kind == "hard_lower_n") {
    spec.dist_kind = DistKind::hard_lower_n;
  } else if (kind == "hard_lower_t") {
    spec.dist_kind = DistKind::hard_lower_t;
  } else {
    throw std::invalid_argument("config: unknown distribution kind " + kind);
  }
  spec.dist_d = jd.value("d", 20);
  spec.support_size = jd.value("support_size", 40);
  const std::string profile = jd.value("profile", "uniform");
  if (profile == "uniform") {
    spec.profile = ProbProfile::uniform;
  } else if (profile == "long_tailed") {
    spec.profile = ProbProfile::long_tailed;
  } else {
    throw std::invalid_argument("config: unknown profile " + profile);
  }
  spec.ladder_top = jd.value("ladder_top", 4e-3);
  spec.ladder_bottom = jd.value("ladder_bottom", 2e-4);

  const auto& jg = j.at("grid");
  spec.k_grid = jg.at("k").get<std::vector<int>>();
  spec.T_grid = jg.at("T").get<std::vector<long>>();
  spec.n_grid = jg.at("n").get<std::vector<long>>();

  spec.gamma = j.at("gamma").get<double>();
  const auto& js = j.at("seeds");
  spec.seed_count = js.at("count").get<int>();
  spec.seed_base = js.value("base", 1ULL);

  const auto& je = j.at("epsilon_policy");
  const std::string pol = je.at("kind").get<std::string>();
  if (pol == "one_over_T") {
    spec.eps_policy = EpsilonPolicyKind::one_over_T;
  } else if (pol == "corpol_formula") {
    spec.eps_policy = EpsilonPolicyKind::corpol_formula;
  } else if (pol == "explicit") {
    spec.eps_policy = EpsilonPolicyKind::explicit_value;
    spec.eps_explicit = je.at("value").get<double>();
  } else {
    throw std::invalid_argument("config: unknown epsilon policy " + pol);
  }

  const std::string gate = j.value("feasibility_gate", "upper");
  if (gate == "upper") {
    spec.gate = FeasibilityGate::upper;
  } else if (gate == "lower") {
    spec.gate = FeasibilityGate::lower;
  } else if (gate == "none") {
    spec.gate = FeasibilityGate::none;
  } else {
    throw std::invalid_argument("config: unknown feasibility gate " + gate);
  }

  spec.output = j.value("output", "");
  spec.validate();
  return spec;
}

ExperimentSpec ExperimentSpec::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

}  // namespace gdlab
