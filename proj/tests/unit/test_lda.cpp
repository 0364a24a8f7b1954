#include <cmath>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "synthetic.hpp"
#include "test_util.hpp"
#include "tweetmine/error.hpp"
#include "tweetmine/lda.hpp"

using namespace tweetmine;

namespace {

std::vector<std::uint32_t> majority_topics(const TopicModel& m) {
  std::vector<std::uint32_t> out;
  for (const auto& zd : m.z) {
    std::vector<int> c(m.K, 0);
    for (auto t : zd) ++c[t];
    out.push_back(static_cast<std::uint32_t>(std::max_element(c.begin(), c.end()) - c.begin()));
  }
  return out;
}

double best_purity(const std::vector<std::uint32_t>& topics, const std::vector<int>& labels) {
  int same = 0;
  for (std::size_t i = 0; i < topics.size(); ++i) same += static_cast<int>(topics[i]) == labels[i];
  const double p = static_cast<double>(same) / static_cast<double>(topics.size());
  return std::max(p, 1.0 - p);
}

}  // namespace

TEST_CASE("gibbs conditional hand evaluation") {
  // n_d1=2, n_d2=0; n_1w=3, n_2w=0; n_1=10, n_2=5; V=4, alpha=1, beta=0.5.
  CHECK(gibbs_weight(2, 3, 10, 4, 1.0, 0.5) == doctest::Approx(0.875).epsilon(1e-12));
  CHECK(gibbs_weight(0, 0, 5, 4, 1.0, 0.5) == doctest::Approx(0.5 / 7.0).epsilon(1e-12));
}

TEST_CASE("single word single document with one topic") {
  LdaConfig cfg;
  cfg.topics = 1;
  cfg.sweeps = 5;
  auto m = fit_lda({{"flood"}}, {"t1"}, cfg);
  REQUIRE(m.phi.size() == 1);
  CHECK(m.phi[0][0] == doctest::Approx(1.0));
  CHECK(m.theta[0][0] == doctest::Approx(1.0));
  auto top = top_words(m, 0, 5);
  REQUIRE(top.size() == 1);
  CHECK(top[0].first == "flood");
  CHECK(top[0].second == doctest::Approx(1.0));
}

TEST_CASE("lda errors") {
  LdaConfig cfg;
  cfg.topics = 4;
  CHECK_THROWS_AS(fit_lda({{"a", "b"}}, {"x"}, cfg), InvalidArgument);
  CHECK_THROWS_AS(fit_lda({{}, {}}, {"x", "y"}, cfg), DataError);
  CHECK_THROWS_AS(fit_lda(std::vector<std::vector<std::string>>{}, {}, cfg), DataError);
  cfg.topics = 0;
  CHECK_THROWS_AS(fit_lda({{"a"}}, {"x"}, cfg), InvalidArgument);
}

TEST_CASE("planted vocabularies are separated") {
  auto data = test::disjoint_vocab_docs(3);
  LdaConfig cfg;
  cfg.topics = 2;
  cfg.sweeps = 500;
  cfg.alpha = 0.1;
  cfg.seed = 11;
  auto m = fit_lda(data.docs, data.ids, cfg);
  CHECK(best_purity(majority_topics(m), data.labels) >= 0.95);
  for (std::size_t t = 0; t < 2; ++t) {
    auto top = top_words(m, t, 10);
    int a = 0;
    for (const auto& [w, p] : top) a += w[0] == 'a';
    CHECK(std::max(a, 10 - a) >= 10);
    for (std::size_t i = 1; i < top.size(); ++i) CHECK(top[i].second <= top[i - 1].second);
  }
}

TEST_CASE("normalization, ranges, and count consistency") {
  auto data = test::disjoint_vocab_docs(4, 60, 15, 8);
  data.docs.push_back({});
  data.ids.push_back("empty");
  LdaConfig cfg;
  cfg.topics = 5;
  cfg.sweeps = 30;
  cfg.verify_counts = true;
  for (int avg : {0, 10}) {
    cfg.average_last = avg;
    auto m = fit_lda(data.docs, data.ids, cfg);
    for (const auto& row : m.phi) {
      double s = 0;
      for (double x : row) s += x;
      CHECK(std::abs(s - 1.0) <= 1e-8);
    }
    for (const auto& row : m.theta) {
      double s = 0;
      for (double x : row) s += x;
      CHECK(std::abs(s - 1.0) <= 1e-8);
    }
    for (const auto& zd : m.z)
      for (auto t : zd) CHECK(t < m.K);
    CHECK(m.theta.back()[0] == doctest::Approx(0.2));
  }
  // Final-sample phi is exactly the smoothed recount from z.
  cfg.average_last = 0;
  auto m = fit_lda(data.docs, data.ids, cfg);
  std::vector<std::vector<double>> n(m.K, std::vector<double>(m.V(), 0.0));
  std::vector<double> nk(m.K, 0.0);
  for (std::size_t d = 0; d < m.D(); ++d)
    for (std::size_t i = 0; i < m.words[d].size(); ++i) {
      n[m.z[d][i]][m.words[d][i]] += 1;
      nk[m.z[d][i]] += 1;
    }
  for (std::size_t t = 0; t < m.K; ++t)
    for (std::size_t w = 0; w < m.V(); ++w)
      CHECK(m.phi[t][w] == doctest::Approx((n[t][w] + m.beta) / (nk[t] + m.V() * m.beta)).epsilon(1e-12));
}

TEST_CASE("seeded chains are reproducible") {
  auto data = test::disjoint_vocab_docs(5, 50);
  LdaConfig cfg;
  cfg.topics = 3;
  cfg.sweeps = 40;
  cfg.seed = 9;
  auto a = fit_lda(data.docs, data.ids, cfg);
  auto b = fit_lda(data.docs, data.ids, cfg);
  CHECK(a.z == b.z);
  CHECK(a.phi == b.phi);
  cfg.seed = 10;
  CHECK(fit_lda(data.docs, data.ids, cfg).z != a.z);
}

TEST_CASE("annotation, rendering and search") {
  auto data = test::disjoint_vocab_docs(6, 40);
  LdaConfig cfg;
  cfg.topics = 2;
  cfg.sweeps = 50;
  auto m = fit_lda(data.docs, data.ids, cfg);
  auto a = annotate(m, "d3");
  REQUIRE(a.tokens.size() == data.docs[3].size());
  for (std::size_t i = 0; i < a.tokens.size(); ++i) {
    CHECK(a.tokens[i].first == data.docs[3][i]);
    CHECK(a.tokens[i].second < 2);
  }
  CHECK(render(a) == render(annotate(m, "d3")));
  CHECK(render(TopicAnnotation{"x", {{"victims", 6}, {"the", 1}}}) == "victims(6) the(1)");
  CHECK_THROWS_AS(annotate(m, "nope"), InvalidArgument);

  const auto& [word, topic] = a.tokens[0];
  auto hits = search(m, word, topic);
  CHECK(std::find(hits.begin(), hits.end(), "d3") != hits.end());
  for (const auto& id : hits) {
    bool found = false;
    for (const auto& [w, t] : annotate(m, id).tokens) found |= w == word && t == topic;
    CHECK(found);
  }
  CHECK(search(m, "not-a-word", 0).empty());
  CHECK_THROWS_AS(top_words(m, 2, 3), InvalidArgument);
  CHECK(top_words(m, 0, 10000).size() == m.V());
}

TEST_CASE("topic count sweep and reports") {
  auto data = test::disjoint_vocab_docs(7, 40);
  Corpus corpus;
  for (std::size_t i = 0; i < data.docs.size(); ++i) {
    Tweet t;
    t.id = data.ids[i];
    t.tokens = data.docs[i];
    corpus.add(t);
  }
  CHECK(default_topic_counts() == std::vector<std::size_t>{5, 10, 15, 20, 25});
  CHECK(default_topic_counts(true).size() == 8);
  LdaConfig cfg;
  cfg.sweeps = 20;
  auto serial = sweep_topic_counts(corpus, {4, 2, 3}, cfg, 1);
  auto parallel = sweep_topic_counts(corpus, {4, 2, 3}, cfg, 3);
  REQUIRE(serial.size() == 3);
  CHECK(serial[0].K == 4);
  CHECK(serial[1].K == 2);
  CHECK(serial[1].alpha == doctest::Approx(25.0));
  for (std::size_t i = 0; i < 3; ++i) CHECK(serial[i].z == parallel[i].z);
  CHECK(sweep_topic_counts(corpus, {2}, cfg).size() == 1);

  test::TempDir dir;
  write_topic_report(serial, 3, dir.file("topics.tsv"));
  std::ifstream in(dir.file("topics.tsv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "K\ttopic\trank\tword\tprobability");
  std::getline(in, line);
  CHECK(line.rfind("4\t0\t1\t", 0) == 0);
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == (4 + 2 + 3) * 3);

  write_annotations_jsonl(serial[1], dir.file("ann.jsonl"));
  std::ifstream ann(dir.file("ann.jsonl"));
  std::getline(ann, line);
  auto j = nlohmann::json::parse(line);
  CHECK(j["id"] == "d0");
  CHECK(j["tokens"].size() == data.docs[0].size());
}
