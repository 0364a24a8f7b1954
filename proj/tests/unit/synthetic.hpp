#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace test {

/// Sentences that only mix words of one of two planted groups (g0_*, g1_*).
inline std::vector<std::vector<std::string>> planted_groups(std::uint64_t seed, int sentences = 2000,
                                                            int group_size = 10, int length = 8) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> word(0, group_size - 1);
  std::vector<std::vector<std::string>> out;
  for (int s = 0; s < sentences; ++s) {
    const int g = static_cast<int>(rng() % 2);
    std::vector<std::string> sent;
    for (int i = 0; i < length; ++i) sent.push_back("g" + std::to_string(g) + "_" + std::to_string(word(rng)));
    out.push_back(std::move(sent));
  }
  return out;
}

}  // namespace test

namespace test {

/// `per_cluster` points from each of `clusters` diagonal Gaussians in `dim`-D
/// with centers uniform in [-10, 10] and per-dimension std in [0.5, 1.5].
inline std::vector<std::vector<double>> gaussian_blobs(std::uint64_t seed, int clusters = 3,
                                                       int per_cluster = 100, int dim = 5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> center(-10.0, 10.0), spread(0.5, 1.5);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> mu(clusters, std::vector<double>(dim)), sd = mu;
  for (auto& c : mu)
    for (auto& v : c) v = center(rng);
  for (auto& s : sd)
    for (auto& v : s) v = spread(rng);
  std::vector<std::vector<double>> x;
  for (int i = 0; i < clusters * per_cluster; ++i) {
    const int c = i % clusters;
    std::vector<double> p(dim);
    for (int j = 0; j < dim; ++j) p[j] = mu[c][j] + sd[c][j] * g(rng);
    x.push_back(std::move(p));
  }
  return x;
}

}  // namespace test

namespace test {

struct PlantedDocs {
  std::vector<std::vector<std::string>> docs;
  std::vector<std::string> ids;
  std::vector<int> labels;  // which vocabulary a doc was drawn from
};

/// Documents drawn uniformly from one of two disjoint vocabularies (a*, b*).
inline PlantedDocs disjoint_vocab_docs(std::uint64_t seed, int docs = 200, int vocab = 20, int length = 12) {
  std::mt19937_64 rng(seed);
  PlantedDocs out;
  for (int d = 0; d < docs; ++d) {
    const int g = d % 2;
    std::vector<std::string> doc;
    for (int i = 0; i < length; ++i) doc.push_back((g ? "b" : "a") + std::to_string(rng() % vocab));
    out.docs.push_back(std::move(doc));
    out.ids.push_back("d" + std::to_string(d));
    out.labels.push_back(g);
  }
  return out;
}

}  // namespace test

#include "tweetmine/corpus.hpp"

namespace test {

/// Labeled tweets: positives mix cue words (peace, unity, ...) into shared
/// filler vocabulary, negatives draw from conflict words. `noise` is the chance
/// that any single token comes from the other class's cue list.
inline tweetmine::Corpus labeled_corpus(std::uint64_t seed, int n = 400, double positive_fraction = 0.3,
                                        double noise = 0.1, int length = 10) {
  static const std::vector<std::string> pos = {"peace", "unity", "together", "pray", "love", "hope", "calm", "condolences"};
  static const std::vector<std::string> neg = {"attack", "blame", "hate", "kill", "enemy", "revenge", "burn", "fear"};
  static const std::vector<std::string> filler = {"the", "in", "of", "kenya", "today", "people", "we", "is", "a", "news",
                                                  "nairobi", "and", "to", "for", "this", "URL", "USER", "!"};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  tweetmine::Corpus corpus;
  for (int i = 0; i < n; ++i) {
    const bool positive = u(rng) < positive_fraction;
    tweetmine::Tweet t;
    t.id = "t" + std::to_string(i);
    t.label = positive ? tweetmine::Label::Positive : tweetmine::Label::Negative;
    for (int k = 0; k < length; ++k) {
      const double r = u(rng);
      if (r < 0.5) {
        t.tokens.push_back(filler[rng() % filler.size()]);
      } else {
        const bool own = u(rng) >= noise;
        const auto& cues = (positive == own) ? pos : neg;
        t.tokens.push_back(cues[rng() % cues.size()]);
      }
    }
    for (const auto& tok : t.tokens) t.raw_text += (t.raw_text.empty() ? "" : " ") + tok;
    corpus.add(std::move(t));
  }
  return corpus;
}

}  // namespace test

#include <map>

namespace test {

struct MislabeledCorpus {
  tweetmine::Corpus corpus;                     // observed labels
  std::map<std::string, tweetmine::Label> truth;  // hidden labels
  std::size_t true_positives = 0;
};

/// `labeled_corpus` with `positive_fraction` true positives, of which every
/// other one is observed as negative.
inline MislabeledCorpus mislabeled_corpus(std::uint64_t seed, int n = 5000, double positive_fraction = 0.01,
                                          double noise = 0.1) {
  auto clean = labeled_corpus(seed, n, positive_fraction, noise);
  MislabeledCorpus out;
  std::size_t seen = 0;
  for (auto t : clean.tweets()) {
    out.truth[t.id] = t.label;
    if (t.label == tweetmine::Label::Positive) {
      ++out.true_positives;
      if (seen++ % 2 == 1) t.label = tweetmine::Label::Negative;
    }
    out.corpus.add(std::move(t));
  }
  return out;
}

/// Tweets whose hidden and observed labels are both positive.
inline std::size_t recovered(const tweetmine::Corpus& corpus, const std::map<std::string, tweetmine::Label>& truth) {
  std::size_t n = 0;
  for (const auto& t : corpus.tweets()) {
    n += t.label == tweetmine::Label::Positive && truth.at(t.id) == tweetmine::Label::Positive;
  }
  return n;
}

}  // namespace test
