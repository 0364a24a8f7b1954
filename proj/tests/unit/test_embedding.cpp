#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "doctest.h"
#include "synthetic.hpp"
#include "test_util.hpp"
#include "tweetmine/embedding.hpp"
#include "tweetmine/error.hpp"

using namespace tweetmine;

TEST_CASE("build_vocab orders by count then word") {
  Sentences s = {{"a", "a", "b"}};
  auto v = Vocabulary::build(s, 1);
  REQUIRE(v.size() == 2);
  CHECK(v[0].word == "a");
  CHECK(v[0].count == 2);
  CHECK(*v.index("b") == 1);
  CHECK(v.total_tokens() == 3);
  auto v2 = Vocabulary::build(s, 2);
  CHECK(v2.size() == 1);
  CHECK_FALSE(v2.index("b"));

  Sentences ties = {{"z", "y", "x", "y", "z"}};
  auto a = Vocabulary::build(ties, 1), b = Vocabulary::build(ties, 1);
  CHECK(a[0].word == "y");
  CHECK(a[1].word == "z");
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].word == b[i].word);
  CHECK_THROWS_AS(Vocabulary::build(Sentences{}, 1), DataError);
  CHECK_THROWS_AS(Vocabulary::build(Sentences{{}}, 1), DataError);
}

TEST_CASE("skip-gram window pairs") {
  using P = std::vector<std::pair<std::size_t, std::size_t>>;
  CHECK(skipgram_pairs(3, 1) == P{{0, 1}, {1, 0}, {1, 2}, {2, 1}});
  CHECK(skipgram_pairs(1, 5).empty());
  CHECK(skipgram_pairs(4, 5).size() == 12);
}

TEST_CASE("subsampling never drops rare words") {
  CHECK(discard_probability(1e-3, 1e-3) == 0.0);
  CHECK(discard_probability(1e-5, 1e-3) == 0.0);
  CHECK(discard_probability(0.1, 1e-3) == doctest::Approx(1.0 - std::sqrt(0.01)));
}

TEST_CASE("huffman tree: hierarchical softmax sums to one") {
  std::vector<std::uint64_t> counts = {50, 20, 15, 10, 5};
  auto codes = build_huffman(counts);
  REQUIRE(codes.size() == 5);
  // Frequent words get codes no longer than rare ones.
  CHECK(codes[0].code.size() <= codes[4].code.size());
  // Prefix-free: no code is a prefix of another.
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(codes[i].points.front() == 3);  // root is inner node V-2
    for (std::size_t j = 0; j < 5; ++j) {
      if (i == j) continue;
      const auto& a = codes[i].code;
      const auto& b = codes[j].code;
      CHECK_FALSE((a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin())));
    }
  }
  std::mt19937 rng(11);
  std::normal_distribution<float> g(0.0f, 1.0f);
  const std::size_t d = 4;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<float> inner(4 * d), input(d);
    for (auto& x : inner) x = g(rng);
    for (auto& x : input) x = g(rng);
    double total = 0.0;
    for (std::size_t w = 0; w < 5; ++w) total += hs_probability(codes, inner, input, w);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(build_huffman(std::vector<std::uint64_t>{3}), InvalidArgument);
}

namespace {
double group_gap(const EmbeddingModel& m, int group_size = 10) {
  double within = 0.0, across = 0.0;
  int nw = 0, na = 0;
  for (int g = 0; g < 2; ++g) {
    for (int i = 0; i < group_size; ++i) {
      auto a = *m.vector("g" + std::to_string(g) + "_" + std::to_string(i));
      for (int h = 0; h < 2; ++h) {
        for (int j = 0; j < group_size; ++j) {
          if (g == h && i == j) continue;
          double c = cosine(a, *m.vector("g" + std::to_string(h) + "_" + std::to_string(j)));
          if (g == h) {
            within += c;
            ++nw;
          } else {
            across += c;
            ++na;
          }
        }
      }
    }
  }
  return within / nw - across / na;
}
}  // namespace

TEST_CASE("skip-gram separates planted co-occurrence groups") {
  SkipGramConfig cfg;
  cfg.dim = 20;
  cfg.epochs = 3;
  cfg.seed = 5;
  auto m = train_skipgram(test::planted_groups(1, 1000), cfg);
  CHECK(group_gap(m) >= 0.2);
}

TEST_CASE("single-thread training is bit-reproducible") {
  SkipGramConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 2;
  cfg.seed = 9;
  auto data = test::planted_groups(2, 200);
  auto a = train_skipgram(data, cfg), b = train_skipgram(data, cfg);
  CHECK(a.data() == b.data());
  cfg.seed = 10;
  CHECK(train_skipgram(data, cfg).data() != a.data());
  for (float x : a.data()) CHECK(std::isfinite(x));
}

TEST_CASE("parallel training runs and stays finite") {
  SkipGramConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 2;
  cfg.threads = 3;
  auto m = train_skipgram(test::planted_groups(3, 300), cfg);
  for (float x : m.data()) CHECK(std::isfinite(x));
}

TEST_CASE("training input errors") {
  CHECK_THROWS_AS(train_skipgram(Sentences{{"a", "a"}}, SkipGramConfig{}), DataError);
  CHECK_THROWS_AS(train_skipgram(Sentences{}, SkipGramConfig{}), DataError);
}

TEST_CASE("most_similar and cosine") {
  Sentences s = {{"a", "b", "c"}};
  auto vocab = Vocabulary::build(s, 1);  // a, b, c (all count 1)
  EmbeddingModel m(vocab, 2, {1, 0, 0.9f, 0.1f, -1, 0});
  auto r = most_similar(m, {"a"}, 10);
  REQUIRE(r.size() == 2);
  CHECK(r[0].first == "b");
  CHECK(r[1].first == "c");
  CHECK(r[1].second == doctest::Approx(-1.0));
  for (const auto& [w, _] : r) CHECK(w != "a");
  CHECK(cosine(m.row(1), m.row(1)) == doctest::Approx(1.0));
  CHECK(most_similar(m, {"a", "c"}, 1).size() == 1);
  try {
    most_similar(m, {"a", "zz", "yy"}, 3);
    FAIL("expected error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("zz, yy") != std::string::npos);
  }
}

TEST_CASE("medium-frequency selection skips the head percent") {
  std::vector<Vocabulary::Entry> entries;
  for (int i = 0; i < 100; ++i) entries.push_back({"w" + std::to_string(i), static_cast<std::uint64_t>(1000 - i)});
  auto v = Vocabulary::from_entries(entries);
  auto words = select_medium_frequency(v, 10);
  REQUIRE(words.size() == 10);
  CHECK(words.front() == "w1");
  CHECK(words.back() == "w10");
  CHECK(select_medium_frequency(v, 500).size() == 99);
}

TEST_CASE("model text format round trip") {
  test::TempDir dir;
  SkipGramConfig cfg;
  cfg.dim = 6;
  cfg.epochs = 1;
  auto m = train_skipgram(test::planted_groups(4, 100), cfg);
  save_model(m, dir.file("m.vec"));
  auto back = load_model(dir.file("m.vec"));
  REQUIRE(back.size() == m.size());
  REQUIRE(back.dim() == m.dim());
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(back.vocab()[i].word == m.vocab()[i].word);
    for (std::size_t k = 0; k < m.dim(); ++k) CHECK(std::abs(back.row(i)[k] - m.row(i)[k]) <= 1e-6);
  }
  for (std::size_t i = 0; i + 1 < m.size(); ++i) {
    CHECK(std::abs(cosine(back.row(i), back.row(i + 1)) - cosine(m.row(i), m.row(i + 1))) <= 1e-5);
  }

  Sentences s = {{"a", "b"}};
  EmbeddingModel small(Vocabulary::build(s, 1), 3, {1, 2, 3, 4, 5, 6});
  save_model(small, dir.file("small.vec"));
  std::ifstream in(dir.file("small.vec"));
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == 3);

  std::ofstream(dir.file("trunc.vec")) << "3 2\na 1 2\nb 3 4\n";
  CHECK_THROWS_AS(load_model(dir.file("trunc.vec")), FormatError);
  std::ofstream(dir.file("short.vec")) << "1 3\na 1 2\n";
  CHECK_THROWS_AS(load_model(dir.file("short.vec")), FormatError);
  std::ofstream(dir.file("long.vec")) << "1 2\na 1 2\nb 1 2\n";
  CHECK_THROWS_AS(load_model(dir.file("long.vec")), FormatError);
}
