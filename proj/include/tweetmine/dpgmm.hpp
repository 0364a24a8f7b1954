#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tweetmine/embedding.hpp"

namespace tweetmine {

struct DpgmmConfig {
  std::size_t max_components = 30;
  double concentration = 1.0;  // stick-breaking Beta(1, concentration)
  double tol = 1e-4;           // stop once the ELBO gains less than this
  int max_iters = 500;
  double variance_floor = 1e-6;
  int kmeans_iters = 10;
  std::uint64_t seed = 0;
};

/// Variational Dirichlet-process mixture of diagonal Gaussians.
struct ClusterModel {
  std::size_t dim = 0;
  std::vector<double> weights;                 // K, sums to 1
  std::vector<std::vector<double>> means;      // K x d
  std::vector<std::vector<double>> variances;  // K x d, >= variance floor
  std::vector<std::size_t> assignments;        // per point, argmax responsibility
  std::vector<double> responsibility;          // per point, value at the argmax
  std::vector<double> elbo_trace;              // one entry per iteration
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> words;  // set when clustering a vocabulary

  std::size_t components() const { return weights.size(); }
  std::size_t effective_components(double min_weight = 0.05) const;
};

/// Fits the truncated stick-breaking mixture by coordinate ascent on the
/// evidence lower bound, starting from k-means++ hard assignments. Points are
/// rows of equal length; throws InvalidArgument for fewer than 2 points.
ClusterModel fit_dpgmm(const std::vector<std::vector<double>>& points, const DpgmmConfig& config);

/// Clusters the vectors of `words` (all must be in the model's vocabulary).
ClusterModel cluster_dpgmm(const EmbeddingModel& model, const std::vector<std::string>& words,
                           const DpgmmConfig& config);

/// One `{"word","component","responsibility"}` record per clustered word.
void write_clusters_jsonl(const ClusterModel& clusters, const std::string& path);

}  // namespace tweetmine
