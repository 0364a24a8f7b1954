#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tweetmine/features.hpp"

namespace tweetmine {

// Labels throughout this header are +1 (positive) / -1 (negative).
using Rows = std::vector<SparseVector>;

enum class ModelKind { Logistic, Hinge, NbSvmHinge, Ridge };
std::string_view to_string(ModelKind kind);

struct LinearModel {
  ModelKind kind = ModelKind::Logistic;
  std::vector<double> weights;
  double bias = 0.0;
  double l2_lambda = 0.0;
  std::optional<double> nbsvm_beta;
  // Objective after each iteration (logistic, ridge) or epoch (hinge).
  std::vector<double> objective_trace;
  int iterations = 0;
};

struct LogisticConfig {
  double l2_lambda = 1e-4;
  int max_iters = 1000;
  double tol = 1e-6;  // on the gradient's infinity norm
  bool balanced = false;  // weight classes by n / (2 n_class)
};

struct SvmConfig {
  double l2_lambda = 1e-4;
  int epochs = 20;
  std::uint64_t seed = 0;
  // Offset added to the step counter so the first shrink factor is not zero.
  double t0 = 2.0;
  bool balanced = false;
};

/// Per-class loss multipliers.
struct ClassWeights {
  double positive = 1.0;
  double negative = 1.0;

  double of(int label) const { return label > 0 ? positive : negative; }
  /// n / (2 n_class) for each class, or unit weights when not `balanced`.
  static ClassWeights from_labels(std::span<const int> y, bool balanced);
};

struct Gradient {
  std::vector<double> w;
  double b = 0.0;
};

/// Losses are weighted per class and averaged over n.
/// mean log(1 + exp(-y (w.x + b))) + lambda/2 |w|^2; the bias is not penalized.
double logistic_objective(std::span<const double> w, double b, const Rows& X, std::span<const int> y, double lambda,
                   const ClassWeights& weights = {});
Gradient logistic_gradient(std::span<const double> w, double b, const Rows& X, std::span<const int> y, double lambda,
                   const ClassWeights& weights = {});

/// mean max(0, 1 - y (w.x + b)) + lambda/2 (|w|^2 + b^2); the bias is a
/// regularized constant feature.
double hinge_objective(std::span<const double> w, double b, const Rows& X, std::span<const int> y, double lambda,
                   const ClassWeights& weights = {});
/// Subgradient taking 0 from the hinge at exact kinks.
Gradient hinge_subgradient(std::span<const double> w, double b, const Rows& X, std::span<const int> y, double lambda,
                   const ClassWeights& weights = {});

/// mean (w.x + b - y)^2 / 2 + lambda/2 |w|^2.
double ridge_objective(std::span<const double> w, double b, const Rows& X, std::span<const int> y, double lambda,
                   const ClassWeights& weights = {});
Gradient ridge_gradient(std::span<const double> w, double b, const Rows& X, std::span<const int> y, double lambda,
                   const ClassWeights& weights = {});

/// Full-batch gradient descent with Armijo backtracking. Throws DataError if
/// only one class is present, InvalidArgument for labels other than +-1.
LinearModel train_logistic(const Rows& X, std::span<const int> y, std::size_t dim, const LogisticConfig& config = {});
/// Least-squares on +-1 targets with the same optimizer; read out by sign.
LinearModel train_ridge(const Rows& X, std::span<const int> y, std::size_t dim, const LogisticConfig& config = {});
/// Pegasos with seeded per-epoch shuffling; returns the iterate averaged over
/// the second half of the epochs.
LinearModel train_svm(const Rows& X, std::span<const int> y, std::size_t dim, const SvmConfig& config = {});

/// Replaces trained weights by (1 - beta) mean|w| sign(w) + beta w and marks
/// the model as NB-SVM.
void interpolate_nbsvm(LinearModel& model, double beta);

struct Prediction {
  int label = -1;
  double score = 0.0;
};

/// Positive iff the score is strictly greater than zero.
Prediction predict(const LinearModel& model, const SparseVector& x);
double probability(double score);

struct Metrics {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0;

  static Metrics from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn);
};

/// Metrics for `positive_class`. Throws InvalidArgument on empty or
/// misaligned input.
Metrics evaluate(std::span<const int> predictions, std::span<const int> gold, int positive_class = 1);

}  // namespace tweetmine
