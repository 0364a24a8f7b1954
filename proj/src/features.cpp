#include "tweetmine/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "tweetmine/error.hpp"

namespace tweetmine {

double SparseVector::sum() const {
  double s = 0.0;
  for (const auto& [_, w] : entries) s += w;
  return s;
}

SparseVector SparseVector::from_pairs(std::vector<std::pair<std::uint32_t, double>> pairs) {
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVector v;
  for (const auto& [id, w] : pairs) {
    if (!v.entries.empty() && v.entries.back().first == id) {
      v.entries.back().second += w;
    } else {
      v.entries.emplace_back(id, w);
    }
  }
  std::erase_if(v.entries, [](const auto& e) { return e.second == 0.0; });
  return v;
}

SparseVector SparseVector::from_dense(std::span<const double> values) {
  SparseVector v;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) v.entries.emplace_back(static_cast<std::uint32_t>(i), values[i]);
  }
  return v;
}

std::optional<std::uint32_t> FeatureRegistry::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t FeatureRegistry::intern(std::string_view name) {
  if (auto id = find(name)) return *id;
  if (frozen_) throw InvalidArgument("feature registry is frozen");
  auto id = static_cast<std::uint32_t>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

const std::unordered_set<std::string>& english_stopwords() {
  static const std::unordered_set<std::string> words = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any", "are",
      "as", "at", "be", "because", "been", "before", "being", "below", "between", "both", "but",
      "by", "can", "could", "did", "do", "does", "doing", "down", "during", "each", "few", "for",
      "from", "further", "had", "has", "have", "having", "he", "her", "here", "hers", "herself",
      "him", "himself", "his", "how", "i", "if", "in", "into", "is", "it", "its", "itself", "just",
      "me", "more", "most", "my", "myself", "no", "nor", "not", "now", "of", "off", "on", "once",
      "only", "or", "other", "ought", "our", "ours", "ourselves", "out", "over", "own", "same",
      "she", "should", "so", "some", "such", "than", "that", "the", "their", "theirs", "them",
      "themselves", "then", "there", "these", "they", "this", "those", "through", "to", "too",
      "under", "until", "up", "very", "was", "we", "were", "what", "when", "where", "which",
      "while", "who", "whom", "why", "will", "with", "would", "you", "your", "yours", "yourself",
      "yourselves", "s", "t", "d", "ll", "m", "re", "ve", "y", "also", "around", "upon", "within",
      "without", "yet", "however", "although", "though", "whether", "either", "neither", "shall",
      "may", "might", "must", "us", "let", "via", "among", "amongst", "onto", "per"};
  return words;
}

void FeaturizerConfig::validate() const {
  if (orders.empty()) throw InvalidArgument("featurizer needs at least one n-gram order");
  for (int n : orders) {
    if (n < 1 || n > 3) throw InvalidArgument("n-gram orders must be in 1..3");
  }
  if (remove_stopwords && orders != std::set<int>{1}) {
    throw InvalidArgument("stopword removal is only defined for unigram features");
  }
}

FeaturizerConfig FeaturizerConfig::bag_of_words() {
  return {{1}, true, english_stopwords()};
}

FeaturizerConfig FeaturizerConfig::ngrams(int max_order) {
  FeaturizerConfig c;
  c.orders.clear();
  for (int n = 1; n <= max_order; ++n) c.orders.insert(n);
  return c;
}

SparseVector ngram_featurize(const std::vector<std::string>& tokens, const FeaturizerConfig& config,
                             FeatureRegistry& registry, bool training) {
  config.validate();
  std::vector<std::string> kept;
  const auto* source = &tokens;
  if (config.remove_stopwords) {
    for (const auto& t : tokens) {
      if (config.stopwords.count(t) == 0) kept.push_back(t);
    }
    source = &kept;
  }
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;
  for (int n : config.orders) {
    const auto order = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + order <= source->size(); ++i) {
      std::string gram = (*source)[i];
      for (std::size_t k = 1; k < order; ++k) gram += ' ' + (*source)[i + k];
      ++counts[gram];
      ++total;
    }
  }
  std::vector<std::pair<std::uint32_t, double>> pairs;
  for (const auto& [gram, c] : counts) {
    std::optional<std::uint32_t> id = training ? std::optional(registry.intern(gram)) : registry.find(gram);
    if (id) pairs.emplace_back(*id, static_cast<double>(c) / static_cast<double>(total));
  }
  return SparseVector::from_pairs(std::move(pairs));
}

std::size_t FeatureMatrix::nnz() const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.nnz();
  return n;
}

void write_sparse(const FeatureMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << m.rows.size() << ' ' << m.cols << ' ' << m.nnz() << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    for (const auto& [c, v] : m.rows[i].entries) out << i << ' ' << c << ' ' << v << '\n';
  }
}

FeatureMatrix read_sparse(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(in >> rows >> cols >> nnz)) throw FormatError(path + ": bad header");
  FeatureMatrix m;
  m.cols = cols;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> pairs(rows);
  for (std::size_t k = 0; k < nnz; ++k) {
    std::size_t r = 0, c = 0;
    double v = 0.0;
    if (!(in >> r >> c >> v)) throw FormatError(path + ": expected " + std::to_string(nnz) + " triplets");
    if (r >= rows || c >= cols) throw FormatError(path + ": triplet out of range");
    pairs[r].emplace_back(static_cast<std::uint32_t>(c), v);
  }
  for (auto& p : pairs) m.rows.push_back(SparseVector::from_pairs(std::move(p)));
  return m;
}

SparseVector binarize(const SparseVector& doc) {
  SparseVector out;
  out.entries.reserve(doc.entries.size());
  for (const auto& [id, w] : doc.entries) {
    if (w != 0.0) out.entries.emplace_back(id, 1.0);
  }
  return out;
}

SparseVector NbSvmTransform::apply(const SparseVector& doc) const {
  SparseVector out;
  for (const auto& [id, w] : doc.entries) {
    if (id >= r.size() || w == 0.0 || r[id] == 0.0) continue;
    out.entries.emplace_back(id, r[id]);
  }
  return out;
}

NbSvmTransform nbsvm_fit(const std::vector<SparseVector>& docs, std::span<const int> labels,
                         std::size_t num_features, double alpha) {
  if (docs.size() != labels.size()) throw InvalidArgument("nbsvm_fit: docs and labels differ in length");
  if (!(alpha > 0.0)) throw InvalidArgument("nbsvm_fit: alpha must be > 0");
  std::vector<double> p(num_features, alpha), q(num_features, alpha);
  std::size_t npos = 0, nneg = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    auto& side = labels[i] > 0 ? p : q;
    (labels[i] > 0 ? npos : nneg) += 1;
    for (const auto& [id, w] : docs[i].entries) {
      if (id >= num_features) throw InvalidArgument("nbsvm_fit: feature id beyond num_features");
      if (w != 0.0) side[id] += 1.0;
    }
  }
  if (npos == 0 || nneg == 0) throw DataError("nbsvm_fit: both classes need at least one document");
  double pnorm = 0.0, qnorm = 0.0;
  for (std::size_t f = 0; f < num_features; ++f) {
    pnorm += p[f];
    qnorm += q[f];
  }
  NbSvmTransform t;
  t.alpha = alpha;
  t.r.resize(num_features);
  for (std::size_t f = 0; f < num_features; ++f) t.r[f] = std::log((p[f] / pnorm) / (q[f] / qnorm));
  return t;
}

std::vector<double> PooledFeatures::combined() const {
  std::vector<double> out(mu);
  out.insert(out.end(), sigma.begin(), sigma.end());
  return out;
}

namespace {

std::vector<std::span<const float>> embedded_rows(const EmbeddingModel& model,
                                                  const std::vector<std::string>& tokens) {
  std::vector<std::span<const float>> rows;
  rows.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (auto v = model.vector(t)) rows.push_back(*v);
  }
  return rows;
}

}  // namespace

PooledFeatures pool_mean(const EmbeddingModel& model, const std::vector<std::string>& tokens) {
  const std::size_t d = model.dim();
  PooledFeatures out;
  out.mu.assign(d, 0.0);
  const auto rows = embedded_rows(model, tokens);
  out.embedded_tokens = rows.size();
  if (rows.empty()) return out;
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < d; ++k) out.mu[k] += r[k];
  }
  for (auto& m : out.mu) m /= static_cast<double>(rows.size());
  return out;
}

PooledFeatures pool_mean_std(const EmbeddingModel& model, const std::vector<std::string>& tokens) {
  PooledFeatures out = pool_mean(model, tokens);
  const std::size_t d = model.dim();
  out.sigma.assign(d, 0.0);
  if (out.all_oov()) return out;
  const auto rows = embedded_rows(model, tokens);
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < d; ++k) {
      const double dx = r[k] - out.mu[k];
      out.sigma[k] += dx * dx;
    }
  }
  for (auto& s : out.sigma) s = std::sqrt(s / static_cast<double>(rows.size()));
  return out;
}

}  // namespace tweetmine
