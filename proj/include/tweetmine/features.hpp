#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tweetmine/embedding.hpp"

namespace tweetmine {

/// Sorted (feature id, weight) pairs with no zero weights.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  std::size_t nnz() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  double sum() const;
  /// Builds from unsorted pairs, summing duplicates and dropping zeros.
  static SparseVector from_pairs(std::vector<std::pair<std::uint32_t, double>> pairs);
  static SparseVector from_dense(std::span<const double> values);
};

/// Append-only string -> feature id map, frozen after the training pass.
class FeatureRegistry {
 public:
  std::optional<std::uint32_t> find(std::string_view name) const;
  /// Registers `name` if new. Throws InvalidArgument once frozen.
  std::uint32_t intern(std::string_view name);
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }
  std::size_t size() const { return names_.size(); }
  const std::string& name(std::uint32_t id) const { return names_.at(id); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> names_;
  bool frozen_ = false;
};

/// A fixed English function-word list.
const std::unordered_set<std::string>& english_stopwords();

struct FeaturizerConfig {
  std::set<int> orders = {1};
  bool remove_stopwords = false;
  std::unordered_set<std::string> stopwords;

  /// Throws InvalidArgument if orders is empty, outside 1..3, or stopword
  /// removal is combined with any order other than unigrams alone.
  void validate() const;

  /// Unigrams with the built-in stopword list removed.
  static FeaturizerConfig bag_of_words();
  /// Orders 1..max_order, stop words kept.
  static FeaturizerConfig ngrams(int max_order);
};

/// Relative n-gram frequencies of one document. During the training pass
/// (`training` true) unseen grams are registered; otherwise they are dropped.
SparseVector ngram_featurize(const std::vector<std::string>& tokens, const FeaturizerConfig& config,
                             FeatureRegistry& registry, bool training);

struct FeatureMatrix {
  std::vector<SparseVector> rows;
  std::size_t cols = 0;

  std::size_t nnz() const;
};

/// "rows cols nnz" header followed by "row col value" triplets.
void write_sparse(const FeatureMatrix& matrix, const std::string& path);
FeatureMatrix read_sparse(const std::string& path);

/// Presence/absence version of a document vector.
SparseVector binarize(const SparseVector& doc);

/// Naive-Bayes log-count ratios over binarized documents.
struct NbSvmTransform {
  std::vector<double> r;
  double alpha = 1.0;
  double interpolation_beta = 0.25;

  /// r (elementwise) binarized doc; features without a ratio are omitted.
  SparseVector apply(const SparseVector& doc) const;
};

/// `labels` are +1 / -1. Throws DataError if either class has no documents.
NbSvmTransform nbsvm_fit(const std::vector<SparseVector>& docs, std::span<const int> labels,
                         std::size_t num_features, double alpha = 1.0);

struct PooledFeatures {
  std::vector<double> mu;
  std::vector<double> sigma;  // empty for mean-only pooling
  std::size_t embedded_tokens = 0;

  bool all_oov() const { return embedded_tokens == 0; }
  /// mu followed by sigma.
  std::vector<double> combined() const;
};

/// Mean of the embedded tokens' vectors; OOV tokens skipped, all-OOV input
/// yields a zero vector with `all_oov()` set.
PooledFeatures pool_mean(const EmbeddingModel& model, const std::vector<std::string>& tokens);
/// Mean and population standard deviation (divisor N) per dimension.
PooledFeatures pool_mean_std(const EmbeddingModel& model, const std::vector<std::string>& tokens);

}  // namespace tweetmine
