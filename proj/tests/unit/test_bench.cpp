#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "synthetic.hpp"
#include "test_util.hpp"
#include "tweetmine/bench.hpp"
#include "tweetmine/error.hpp"

using namespace tweetmine;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.fractions = {0.5, 1.0};
  cfg.features = {FeatureSpec::parse("ngrams:1"), FeatureSpec::parse("mu")};
  cfg.classifiers = {ClassifierSpec::parse("logistic"), ClassifierSpec::parse("svm")};
  cfg.repetitions = 1;
  cfg.folds = 3;
  cfg.seed = 3;
  cfg.embedding.dim = 8;
  cfg.embedding.epochs = 10;
  cfg.embedding.subsample_t = 0.0;
  return cfg;
}

}  // namespace

TEST_CASE("tables round-trip through both text forms") {
  std::mt19937 rng(9);
  const std::vector<std::string> pool = {"mu", "ngrams:1,2", "0.76", "ERR", "1%", "0.1%", "12.345", "x", "logistic"};
  for (int trial = 0; trial < 100; ++trial) {
    Table t;
    t.title = "table " + std::to_string(trial);
    const std::size_t cols = 1 + rng() % 5, rows = rng() % 6;
    for (std::size_t c = 0; c < cols; ++c) t.header.push_back("col" + std::to_string(c) + (c % 2 ? "_long_name" : ""));
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<std::string> row;
      for (std::size_t c = 0; c < cols; ++c) row.push_back(pool[rng() % pool.size()]);
      t.rows.push_back(row);
    }
    CHECK(parse_aligned(to_aligned(t)) == t);
    auto back = parse_tsv(to_tsv(t));
    back.title = t.title;
    CHECK(back == t);
  }
  CHECK_THROWS_AS(parse_tsv("a\tb\nonly-one\n"), FormatError);
}

TEST_CASE("fraction labels") {
  CHECK(fraction_label(0.001) == "0.1%");
  CHECK(fraction_label(0.01) == "1%");
  CHECK(fraction_label(0.1) == "10%");
  CHECK(fraction_label(1.0) == "100%");
}

TEST_CASE("config validation") {
  auto cfg = small_config();
  CHECK_NOTHROW(cfg.validate());
  cfg.fractions = {0.0};
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg.fractions = {1.5};
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = small_config();
  cfg.classifiers.clear();
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("bench matrix shape, determinism and ERR cells") {
  auto corpus = test::labeled_corpus(6, 240, 0.4);
  auto cfg = small_config();
  auto a = run_bench(corpus, cfg);
  REQUIRE(a.cells.size() == 8);
  CHECK(a.f_scores.header == std::vector<std::string>{"features", "classifier", "50%", "100%"});
  REQUIRE(a.f_scores.rows.size() == 4);
  CHECK(a.f_scores.rows[0][0] == "ngrams:1");
  CHECK(a.f_scores.rows[0][1] == "logistic");
  CHECK(a.f_scores.rows[3][0] == "mu");
  for (const auto& row : a.f_scores.rows) {
    for (std::size_t c = 2; c < row.size(); ++c) {
      CHECK(row[c].size() == 4);  // "0.xx"
      CHECK(std::stod(row[c]) > 0.5);
    }
  }
  CHECK(a.embedding_time.rows.size() == 2);
  CHECK(a.cells[0].fraction == 0.5);
  CHECK(a.cells[0].report->dataset == "50%");

  auto b = run_bench(corpus, cfg);
  CHECK(a.f_scores == b.f_scores);
  cfg.jobs = 3;
  CHECK(run_bench(corpus, cfg).f_scores == a.f_scores);

  auto single = small_config();
  single.fractions = {1.0};
  single.features = {FeatureSpec::parse("ngrams:1,2")};
  single.classifiers = {ClassifierSpec::parse("logistic")};
  auto s = run_bench(corpus, single);
  CHECK(s.f_scores.rows.size() == 1);
  CHECK(s.timing.rows.size() == 1);
  CHECK(s.embedding_time.rows.empty());

  // At most one positive at 1%, so no split has both classes on both sides.
  single.fractions = {0.01, 1.0};
  auto e = run_bench(corpus, single);
  CHECK(e.f_scores.rows[0][2] == "ERR");
  CHECK(e.f_scores.rows[0][3] != "ERR");
  CHECK_FALSE(e.cells[0].error.empty());
}

TEST_CASE("bench writes tables and per-cell reports") {
  test::TempDir dir;
  auto corpus = test::labeled_corpus(7, 120, 0.4);
  corpus.preprocess_all();
  write_jsonl(corpus, dir.file("data.jsonl"));
  auto cfg = small_config();
  cfg.dataset = dir.file("data.jsonl");
  cfg.format = "jsonl";
  cfg.features = {FeatureSpec::parse("ngrams:1,2")};
  cfg.output_dir = dir.file("out");
  auto r = run_bench(cfg);
  for (const char* f : {"f_scores.tsv", "f_scores.txt", "timing.tsv", "timing.txt", "w2v_time.tsv"}) {
    CHECK(std::filesystem::exists(dir.file(std::string("out/") + f)));
  }
  CHECK(parse_tsv(slurp(dir.file("out/f_scores.tsv"))).rows == r.f_scores.rows);
  CHECK(parse_aligned(slurp(dir.file("out/timing.txt"))) == r.timing);
  CHECK(std::filesystem::exists(dir.file("out/cv_50__ngrams_1_2_logistic.tsv")));
}
