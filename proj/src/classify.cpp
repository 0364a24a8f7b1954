#include "tweetmine/classify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "tweetmine/error.hpp"

namespace tweetmine {

namespace {

double dot(std::span<const double> w, const SparseVector& x) {
  double s = 0.0;
  for (const auto& [id, v] : x.entries) {
    if (id < w.size()) s += w[id] * v;
  }
  return s;
}

double squared_norm(std::span<const double> w) {
  double s = 0.0;
  for (double x : w) s += x * x;
  return s;
}

// log(1 + exp(-m)) without overflow.
double log1p_exp_neg(double m) { return m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m)); }

void check_labels(const Rows& X, std::span<const int> y) {
  if (X.size() != y.size()) throw InvalidArgument("rows and labels differ in length");
  bool pos = false, neg = false;
  for (int v : y) {
    if (v == 1) {
      pos = true;
    } else if (v == -1) {
      neg = true;
    } else {
      throw InvalidArgument("labels must be +1 or -1");
    }
  }
  if (!pos || !neg) throw DataError("training set has a single class");
}

using Objective = std::function<double(std::span<const double>, double)>;
using GradientFn = std::function<Gradient(std::span<const double>, double)>;

// Gradient descent with a Barzilai-Borwein trial step and Armijo backtracking.
void descend(LinearModel& m, const Objective& f, const GradientFn& grad, const LogisticConfig& cfg) {
  const std::size_t dim = m.weights.size();
  double fx = f(m.weights, m.bias);
  Gradient g = grad(m.weights, m.bias);
  double step = 1.0;
  std::vector<double> w_new(dim), prev_w;
  double prev_b = 0.0;
  Gradient prev_g;
  for (int it = 0; it < cfg.max_iters; ++it) {
    double gnorm_inf = std::abs(g.b), gnorm2 = g.b * g.b;
    for (double v : g.w) {
      gnorm_inf = std::max(gnorm_inf, std::abs(v));
      gnorm2 += v * v;
    }
    if (gnorm_inf < cfg.tol) break;
    if (it > 0) {
      double ss = (m.bias - prev_b) * (m.bias - prev_b), sy = (m.bias - prev_b) * (g.b - prev_g.b);
      for (std::size_t j = 0; j < dim; ++j) {
        const double s = m.weights[j] - prev_w[j];
        ss += s * s;
        sy += s * (g.w[j] - prev_g.w[j]);
      }
      if (sy > 0.0 && std::isfinite(ss / sy)) step = ss / sy;
    }
    double f_new = 0.0, b_new = 0.0;
    bool accepted = false;
    for (int back = 0; back < 60; ++back) {
      for (std::size_t j = 0; j < dim; ++j) w_new[j] = m.weights[j] - step * g.w[j];
      b_new = m.bias - step * g.b;
      f_new = f(w_new, b_new);
      if (f_new <= fx - 1e-4 * step * gnorm2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no representable descent step left
    prev_w = m.weights;
    prev_b = m.bias;
    prev_g = std::move(g);
    m.weights.swap(w_new);
    w_new.resize(dim);
    m.bias = b_new;
    fx = f_new;
    m.objective_trace.push_back(fx);
    m.iterations = it + 1;
    g = grad(m.weights, m.bias);
  }
}

}  // namespace

ClassWeights ClassWeights::from_labels(std::span<const int> y, bool balanced) {
  ClassWeights w;
  if (!balanced) return w;
  const auto pos = static_cast<double>(std::count(y.begin(), y.end(), 1));
  const auto neg = static_cast<double>(y.size()) - pos;
  if (pos > 0) w.positive = static_cast<double>(y.size()) / (2.0 * pos);
  if (neg > 0) w.negative = static_cast<double>(y.size()) / (2.0 * neg);
  return w;
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Logistic:
      return "logistic";
    case ModelKind::Hinge:
      return "hinge";
    case ModelKind::NbSvmHinge:
      return "nbsvm-hinge";
    case ModelKind::Ridge:
      return "ridge";
  }
  return "?";
}

double logistic_objective(std::span<const double> w, double b, const Rows& X, std::span<const int> y, double lambda,
                   const ClassWeights& cw) {
  double loss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) loss += cw.of(y[i]) * log1p_exp_neg(y[i] * (dot(w, X[i]) + b));
  return loss / static_cast<double>(X.size()) + 0.5 * lambda * squared_norm(w);
}

Gradient logistic_gradient(std::span<const double> w, double b, const Rows& X, std::span<const int> y, double lambda,
                   const ClassWeights& cw) {
  Gradient g{std::vector<double>(w.begin(), w.end()), 0.0};
  for (auto& v : g.w) v *= lambda;
  const double inv_n = 1.0 / static_cast<double>(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double m = y[i] * (dot(w, X[i]) + b);
    // d/dm log(1 + e^-m) = -1 / (1 + e^m)
    const double coef = -y[i] * cw.of(y[i]) * inv_n / (1.0 + std::exp(m));
    for (const auto& [id, v] : X[i].entries) {
      if (id < w.size()) g.w[id] += coef * v;
    }
    g.b += coef;
  }
  return g;
}

double hinge_objective(std::span<const double> w, double b, const Rows& X, std::span<const int> y, double lambda,
                   const ClassWeights& cw) {
  double loss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) loss += cw.of(y[i]) * std::max(0.0, 1.0 - y[i] * (dot(w, X[i]) + b));
  return loss / static_cast<double>(X.size()) + 0.5 * lambda * (squared_norm(w) + b * b);
}

Gradient hinge_subgradient(std::span<const double> w, double b, const Rows& X, std::span<const int> y, double lambda,
                   const ClassWeights& cw) {
  Gradient g{std::vector<double>(w.begin(), w.end()), lambda * b};
  for (auto& v : g.w) v *= lambda;
  const double inv_n = 1.0 / static_cast<double>(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (y[i] * (dot(w, X[i]) + b) >= 1.0) continue;
    const double coef = -y[i] * cw.of(y[i]) * inv_n;
    for (const auto& [id, v] : X[i].entries) {
      if (id < w.size()) g.w[id] += coef * v;
    }
    g.b += coef;
  }
  return g;
}

double ridge_objective(std::span<const double> w, double b, const Rows& X, std::span<const int> y, double lambda,
                   const ClassWeights& cw) {
  double loss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double r = dot(w, X[i]) + b - y[i];
    loss += cw.of(y[i]) * 0.5 * r * r;
  }
  return loss / static_cast<double>(X.size()) + 0.5 * lambda * squared_norm(w);
}

Gradient ridge_gradient(std::span<const double> w, double b, const Rows& X, std::span<const int> y, double lambda,
                   const ClassWeights& cw) {
  Gradient g{std::vector<double>(w.begin(), w.end()), 0.0};
  for (auto& v : g.w) v *= lambda;
  const double inv_n = 1.0 / static_cast<double>(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double coef = cw.of(y[i]) * (dot(w, X[i]) + b - y[i]) * inv_n;
    for (const auto& [id, v] : X[i].entries) {
      if (id < w.size()) g.w[id] += coef * v;
    }
    g.b += coef;
  }
  return g;
}

LinearModel train_logistic(const Rows& X, std::span<const int> y, std::size_t dim, const LogisticConfig& config) {
  check_labels(X, y);
  LinearModel m;
  m.kind = ModelKind::Logistic;
  m.l2_lambda = config.l2_lambda;
  m.weights.assign(dim, 0.0);
  const double lambda = config.l2_lambda;
  const auto cw = ClassWeights::from_labels(y, config.balanced);
  descend(
      m, [&](std::span<const double> w, double b) { return logistic_objective(w, b, X, y, lambda, cw); },
      [&](std::span<const double> w, double b) { return logistic_gradient(w, b, X, y, lambda, cw); }, config);
  return m;
}

LinearModel train_ridge(const Rows& X, std::span<const int> y, std::size_t dim, const LogisticConfig& config) {
  check_labels(X, y);
  LinearModel m;
  m.kind = ModelKind::Ridge;
  m.l2_lambda = config.l2_lambda;
  m.weights.assign(dim, 0.0);
  const double lambda = config.l2_lambda;
  const auto cw = ClassWeights::from_labels(y, config.balanced);
  descend(
      m, [&](std::span<const double> w, double b) { return ridge_objective(w, b, X, y, lambda, cw); },
      [&](std::span<const double> w, double b) { return ridge_gradient(w, b, X, y, lambda, cw); }, config);
  return m;
}

LinearModel train_svm(const Rows& X, std::span<const int> y, std::size_t dim, const SvmConfig& config) {
  check_labels(X, y);
  if (config.l2_lambda <= 0.0) throw InvalidArgument("train_svm: lambda must be positive");
  if (config.epochs < 1) throw InvalidArgument("train_svm: epochs must be positive");
  const double lambda = config.l2_lambda;
  const double radius = 1.0 / std::sqrt(lambda);
  const std::size_t n = X.size();
  const auto cw = ClassWeights::from_labels(y, config.balanced);

  // w = s * v, with the bias stored in v[dim]. The running sum of iterates is
  // a + c * v, so sparse updates to v stay O(nnz).
  std::vector<double> v(dim + 1, 0.0), a(dim + 1, 0.0);
  double s = 1.0, vnorm2 = 0.0, c = 0.0;
  std::size_t averaged = 0;
  const int average_from = config.epochs / 2;

  std::vector<double> sq_norm(n);
  for (std::size_t i = 0; i < n; ++i) {
    double q = 1.0;
    for (const auto& [id, x] : X[i].entries) {
      if (id < dim) q += x * x;
    }
    sq_norm[i] = q;
  }

  LinearModel m;
  m.kind = ModelKind::Hinge;
  m.l2_lambda = lambda;
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  double t = 0.0;
  auto averaged_weights = [&](std::vector<double>& w, double& b) {
    w.assign(dim, 0.0);
    const double k = averaged ? 1.0 / static_cast<double>(averaged) : 0.0;
    for (std::size_t j = 0; j < dim; ++j) w[j] = averaged ? (a[j] + c * v[j]) * k : s * v[j];
    b = averaged ? (a[dim] + c * v[dim]) * k : s * v[dim];
  };

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    const bool averaging = epoch >= average_from;
    for (std::size_t i : order) {
      t += 1.0;
      const double eta = 1.0 / (lambda * (t + config.t0 - 1.0));
      const double vx = dot(std::span<const double>(v.data(), dim), X[i]) + v[dim];
      const double margin = y[i] * s * vx;
      s *= 1.0 - eta * lambda;
      if (margin < 1.0) {
        const double delta = eta * y[i] * cw.of(y[i]) / s;
        for (const auto& [id, x] : X[i].entries) {
          if (id >= dim) continue;
          v[id] += delta * x;
          if (averaging) a[id] -= c * delta * x;
        }
        v[dim] += delta;
        if (averaging) a[dim] -= c * delta;
        vnorm2 = std::max(0.0, vnorm2 + 2.0 * delta * vx + delta * delta * sq_norm[i]);
      }
      const double norm = s * std::sqrt(vnorm2);
      if (norm > radius) s *= radius / norm;
      if (s < 1e-6) {
        for (auto& x : v) x *= s;
        c /= s;
        vnorm2 = squared_norm(v);
        s = 1.0;
      }
      if (averaging) {
        c += s;
        ++averaged;
      }
    }
    std::vector<double> w;
    double b;
    averaged_weights(w, b);
    m.objective_trace.push_back(hinge_objective(w, b, X, y, lambda, cw));
  }
  averaged_weights(m.weights, m.bias);
  m.iterations = config.epochs;
  return m;
}

void interpolate_nbsvm(LinearModel& model, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw InvalidArgument("interpolation beta must be in [0, 1]");
  if (model.weights.empty()) return;
  double mean_abs = 0.0;
  for (double w : model.weights) mean_abs += std::abs(w);
  mean_abs /= static_cast<double>(model.weights.size());
  for (double& w : model.weights) {
    const double sign = w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0);
    w = (1.0 - beta) * mean_abs * sign + beta * w;
  }
  model.kind = ModelKind::NbSvmHinge;
  model.nbsvm_beta = beta;
}

Prediction predict(const LinearModel& model, const SparseVector& x) {
  const double score = dot(model.weights, x) + model.bias;
  return {score > 0.0 ? 1 : -1, score};
}

double probability(double score) { return 1.0 / (1.0 + std::exp(-score)); }

Metrics Metrics::from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
  Metrics m;
  m.tp = tp;
  m.fp = fp;
  m.tn = tn;
  m.fn = fn;
  const double total = static_cast<double>(tp + fp + tn + fn);
  m.accuracy = total > 0 ? static_cast<double>(tp + tn) / total : 0.0;
  m.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  m.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  m.f1 = m.precision + m.recall > 0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

Metrics evaluate(std::span<const int> predictions, std::span<const int> gold, int positive_class) {
  if (predictions.empty()) throw InvalidArgument("evaluate: empty input");
  if (predictions.size() != gold.size()) throw InvalidArgument("evaluate: predictions and gold differ in length");
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool p = predictions[i] == positive_class, g = gold[i] == positive_class;
    if (p && g) {
      ++tp;
    } else if (p) {
      ++fp;
    } else if (g) {
      ++fn;
    } else {
      ++tn;
    }
  }
  return Metrics::from_counts(tp, fp, tn, fn);
}

}  // namespace tweetmine
