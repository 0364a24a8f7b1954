#include "tweetmine/dpgmm.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "json.hpp"
#include "tweetmine/error.hpp"

namespace tweetmine {

std::size_t ClusterModel::effective_components(double min_weight) const {
  return static_cast<std::size_t>(
      std::count_if(weights.begin(), weights.end(), [&](double w) { return w > min_weight; }));
}

namespace {

using Matrix = std::vector<std::vector<double>>;

double digamma(double x) { return boost::math::digamma(x); }

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

// k-means++ seeding plus Lloyd refinement. Labels are renumbered so that the
// largest cluster comes first, matching the stick-breaking order.
std::vector<std::size_t> kmeans_labels(const Matrix& x, std::size_t k, int iters, std::uint64_t seed) {
  const std::size_t n = x.size();
  std::mt19937_64 rng(seed);
  Matrix centers;
  centers.push_back(x[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]);
  std::vector<double> d2(n);
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      for (const auto& c : centers) best = std::min(best, sq_dist(x[i], c));
      d2[i] = best;
      total += best;
    }
    if (total <= 0.0) break;  // every point coincides with a center
    double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    std::size_t pick = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      u -= d2[i];
      if (u <= 0.0 && d2[i] > 0.0) {
        pick = i;
        break;
      }
    }
    centers.push_back(x[pick]);
  }

  std::vector<std::size_t> label(n, 0);
  for (int it = 0; it <= iters; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::max();
      for (std::size_t c = 0; c < centers.size(); ++c) {
        double dist = sq_dist(x[i], centers[c]);
        if (dist < best) {
          best = dist;
          label[i] = c;
        }
      }
    }
    if (it == iters) break;
    Matrix sum(centers.size(), std::vector<double>(x[0].size(), 0.0));
    std::vector<std::size_t> cnt(centers.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++cnt[label[i]];
      for (std::size_t j = 0; j < x[i].size(); ++j) sum[label[i]][j] += x[i][j];
    }
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (cnt[c] == 0) continue;
      for (std::size_t j = 0; j < sum[c].size(); ++j) centers[c][j] = sum[c][j] / static_cast<double>(cnt[c]);
    }
  }

  std::vector<std::size_t> cnt(centers.size(), 0);
  for (auto l : label) ++cnt[l];
  std::vector<std::size_t> order(centers.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cnt[a] > cnt[b]; });
  std::vector<std::size_t> rename(centers.size());
  for (std::size_t r = 0; r < order.size(); ++r) rename[order[r]] = r;
  for (auto& l : label) l = rename[l];
  return label;
}

// Conjugate variational state. Component k has q(v_k) = Beta(g1, g2) and,
// per dimension, q(mu, lambda) = Normal(m, (beta*lambda)^-1) Gamma(a, b).
struct State {
  std::vector<double> g1, g2, beta, a;
  Matrix m, b;
};

struct Prior {
  std::vector<double> m0, b0;
  double beta0 = 1.0;
  double a0 = 1.0;
  double alpha = 1.0;
};

void update_params(const Matrix& x, const Matrix& r, const Prior& pr, State& st) {
  const std::size_t n = x.size(), d = x[0].size(), K = r[0].size();
  std::vector<double> nk(K, 0.0);
  Matrix xbar(K, std::vector<double>(d, 0.0)), sk(K, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      nk[k] += r[i][k];
      for (std::size_t j = 0; j < d; ++j) xbar[k][j] += r[i][k] * x[i][j];
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < d; ++j) xbar[k][j] = nk[k] > 0.0 ? xbar[k][j] / nk[k] : 0.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      if (r[i][k] == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) {
        const double dx = x[i][j] - xbar[k][j];
        sk[k][j] += r[i][k] * dx * dx;  // N_k * S_k
      }
    }
  }
  double tail = std::accumulate(nk.begin(), nk.end(), 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    tail -= nk[k];
    st.g1[k] = 1.0 + nk[k];
    st.g2[k] = pr.alpha + std::max(tail, 0.0);
    st.beta[k] = pr.beta0 + nk[k];
    st.a[k] = pr.a0 + 0.5 * nk[k];
    for (std::size_t j = 0; j < d; ++j) {
      const double dm = xbar[k][j] - pr.m0[j];
      st.m[k][j] = (pr.beta0 * pr.m0[j] + nk[k] * xbar[k][j]) / st.beta[k];
      st.b[k][j] = pr.b0[j] + 0.5 * (sk[k][j] + pr.beta0 * nk[k] * dm * dm / st.beta[k]);
    }
  }
}

// E[ln pi_k] under truncated stick breaking (v_K = 1).
std::vector<double> expected_log_weights(const State& st) {
  const std::size_t K = st.g1.size();
  std::vector<double> out(K);
  double acc = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double dsum = digamma(st.g1[k] + st.g2[k]);
    const double elog_v = k + 1 < K ? digamma(st.g1[k]) - dsum : 0.0;
    out[k] = elog_v + acc;
    if (k + 1 < K) acc += digamma(st.g2[k]) - dsum;
  }
  return out;
}

// Per-point expected log-likelihood under each component, without weights.
double expected_loglik(const std::vector<double>& xi, const State& st, std::size_t k) {
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  const double dig_a = digamma(st.a[k]);
  double s = 0.0;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    const double elog_lambda = dig_a - std::log(st.b[k][j]);
    const double dx = xi[j] - st.m[k][j];
    const double equad = 1.0 / st.beta[k] + st.a[k] / st.b[k][j] * dx * dx;
    s += 0.5 * elog_lambda - half_log_2pi - 0.5 * equad;
  }
  return s;
}

void update_responsibilities(const Matrix& x, const State& st, Matrix& r) {
  const auto elog_pi = expected_log_weights(st);
  const std::size_t K = elog_pi.size();
  std::vector<double> logp(K);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) {
      logp[k] = elog_pi[k] + expected_loglik(x[i], st, k);
      mx = std::max(mx, logp[k]);
    }
    double z = 0.0;
    for (std::size_t k = 0; k < K; ++k) z += std::exp(logp[k] - mx);
    for (std::size_t k = 0; k < K; ++k) r[i][k] = std::exp(logp[k] - mx) / z;
  }
}

double elbo(const Matrix& x, const Matrix& r, const Prior& pr, const State& st) {
  const std::size_t K = st.g1.size(), d = x[0].size();
  const auto elog_pi = expected_log_weights(st);
  double total = 0.0;

  // E[ln p(x | z, mu, lambda)] + E[ln p(z | v)] - E[ln q(z)]
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      const double rik = r[i][k];
      if (rik <= 0.0) continue;
      total += rik * (expected_loglik(x[i], st, k) + elog_pi[k] - std::log(rik));
    }
  }
  // E[ln p(v)] - E[ln q(v)] over the K-1 free sticks.
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const double dsum = digamma(st.g1[k] + st.g2[k]);
    const double elog_v = digamma(st.g1[k]) - dsum;
    const double elog_1mv = digamma(st.g2[k]) - dsum;
    total += std::log(pr.alpha) + (pr.alpha - 1.0) * elog_1mv;
    total -= std::lgamma(st.g1[k] + st.g2[k]) - std::lgamma(st.g1[k]) - std::lgamma(st.g2[k]) +
             (st.g1[k] - 1.0) * elog_v + (st.g2[k] - 1.0) * elog_1mv;
  }
  // E[ln p(mu, lambda)] - E[ln q(mu, lambda)] per component and dimension.
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  for (std::size_t k = 0; k < K; ++k) {
    const double a = st.a[k], beta = st.beta[k];
    const double dig_a = digamma(a), lg_a = std::lgamma(a);
    for (std::size_t j = 0; j < d; ++j) {
      const double b = st.b[k][j];
      const double elog_lambda = dig_a - std::log(b);
      const double e_lambda = a / b;
      const double dm = st.m[k][j] - pr.m0[j];
      const double p_mu = 0.5 * (std::log(pr.beta0) - log_2pi + elog_lambda -
                                 pr.beta0 * (1.0 / beta + e_lambda * dm * dm));
      const double p_lambda = pr.a0 * std::log(pr.b0[j]) - std::lgamma(pr.a0) +
                              (pr.a0 - 1.0) * elog_lambda - pr.b0[j] * e_lambda;
      const double q_mu = 0.5 * (std::log(beta) - log_2pi + elog_lambda - 1.0);
      const double q_lambda = a * std::log(b) - lg_a + (a - 1.0) * elog_lambda - a;
      total += p_mu + p_lambda - q_mu - q_lambda;
    }
  }
  return total;
}

}  // namespace

ClusterModel fit_dpgmm(const Matrix& x, const DpgmmConfig& cfg) {
  if (x.size() < 2) throw InvalidArgument("cluster_dpgmm: need at least 2 points");
  if (cfg.max_components < 1) throw InvalidArgument("cluster_dpgmm: max_components must be >= 1");
  if (!(cfg.concentration > 0.0)) throw InvalidArgument("cluster_dpgmm: concentration must be > 0");
  const std::size_t n = x.size(), d = x[0].size(), K = cfg.max_components;
  if (d == 0) throw InvalidArgument("cluster_dpgmm: zero-dimensional points");
  for (const auto& row : x) {
    if (row.size() != d) throw InvalidArgument("cluster_dpgmm: ragged point matrix");
  }

  Prior pr;
  pr.alpha = cfg.concentration;
  pr.m0.assign(d, 0.0);
  pr.b0.assign(d, 0.0);
  for (const auto& row : x) {
    for (std::size_t j = 0; j < d; ++j) pr.m0[j] += row[j] / static_cast<double>(n);
  }
  for (const auto& row : x) {
    for (std::size_t j = 0; j < d; ++j) pr.b0[j] += (row[j] - pr.m0[j]) * (row[j] - pr.m0[j]) / static_cast<double>(n);
  }
  // Prior mean precision a0/b0 is the inverse of the pooled variance.
  for (auto& b : pr.b0) b = pr.a0 * std::max(b, cfg.variance_floor);

  Matrix r(n, std::vector<double>(K, 0.0));
  {
    auto labels = kmeans_labels(x, std::min(K, n), cfg.kmeans_iters, cfg.seed);
    for (std::size_t i = 0; i < n; ++i) r[i][labels[i]] = 1.0;
  }

  State st{std::vector<double>(K), std::vector<double>(K), std::vector<double>(K), std::vector<double>(K),
           Matrix(K, std::vector<double>(d)), Matrix(K, std::vector<double>(d))};
  ClusterModel out;
  out.dim = d;
  for (int it = 0; it < cfg.max_iters; ++it) {
    update_params(x, r, pr, st);
    const double bound = elbo(x, r, pr, st);
    out.elbo_trace.push_back(bound);
    out.iterations = it + 1;
    if (it > 0 && bound - out.elbo_trace[out.elbo_trace.size() - 2] < cfg.tol) {
      out.converged = true;
      break;
    }
    update_responsibilities(x, st, r);
  }

  // Expected stick-breaking weights.
  out.weights.assign(K, 0.0);
  double rest = 1.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double ev = k + 1 < K ? st.g1[k] / (st.g1[k] + st.g2[k]) : 1.0;
    out.weights[k] = rest * ev;
    rest *= 1.0 - ev;
  }
  const double wsum = std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
  for (auto& w : out.weights) w /= wsum;

  out.means = st.m;
  out.variances.assign(K, std::vector<double>(d));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < d; ++j) out.variances[k][j] = std::max(st.b[k][j] / st.a[k], cfg.variance_floor);
  }
  out.assignments.resize(n);
  out.responsibility.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = std::max_element(r[i].begin(), r[i].end());
    out.assignments[i] = static_cast<std::size_t>(it - r[i].begin());
    out.responsibility[i] = *it;
  }
  return out;
}

ClusterModel cluster_dpgmm(const EmbeddingModel& model, const std::vector<std::string>& words,
                           const DpgmmConfig& config) {
  Matrix x;
  x.reserve(words.size());
  std::string missing;
  for (const auto& w : words) {
    auto v = model.vector(w);
    if (!v) {
      missing += (missing.empty() ? "" : ", ") + w;
      continue;
    }
    x.emplace_back(v->begin(), v->end());
  }
  if (!missing.empty()) throw InvalidArgument("cluster_dpgmm: not in vocabulary: " + missing);
  auto out = fit_dpgmm(x, config);
  out.words = words;
  return out;
}

void write_clusters_jsonl(const ClusterModel& clusters, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  for (std::size_t i = 0; i < clusters.assignments.size(); ++i) {
    nlohmann::json rec = {{"word", i < clusters.words.size() ? clusters.words[i] : std::to_string(i)},
                          {"component", clusters.assignments[i]},
                          {"responsibility", clusters.responsibility[i]}};
    out << rec.dump() << '\n';
  }
}

}  // namespace tweetmine
