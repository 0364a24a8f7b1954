// One PASS/FAIL/BLOCKED line per acceptance criterion. Tolerances live here.
//
//   acceptance [--group synthetic|sentiment140|all]
//
// The sentiment140 group reads TWEETMINE_SENTIMENT140 (training CSV); the
// full-data check also needs TWEETMINE_SENTIMENT140_TEST and
// TWEETMINE_FULL_RUN=1. Exit 0 when nothing failed, 1 on any failure, 77 when
// every requested criterion was blocked.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/oracles.hpp"
#include "../unit/synthetic.hpp"
#include "tweetmine/bench.hpp"
#include "tweetmine/classify.hpp"
#include "tweetmine/cv.hpp"
#include "tweetmine/dpgmm.hpp"
#include "tweetmine/embedding.hpp"
#include "tweetmine/features.hpp"
#include "tweetmine/lda.hpp"
#include "tweetmine/relabel.hpp"

using namespace tweetmine;
using Clock = std::chrono::steady_clock;

namespace {

// Pinned tolerances and thresholds.
constexpr double kPoolTol = 1e-9;
constexpr double kPoolBudgetS = 5.0;
constexpr double kNbExactTol = 1e-12;
constexpr double kNbOracleTol = 1e-9;
constexpr double kGradRelTol = 1e-4;
constexpr double kPurityMin = 0.95;
constexpr double kRowSumTol = 1e-8;
constexpr double kLdaBudgetS = 60.0;
constexpr double kGapMin = 0.2;
constexpr double kSkipgramBudgetS = 120.0;
constexpr double kComponentWeight = 0.05;
constexpr double kReplicationBudgetS = 30 * 60.0;
constexpr double kNgramFMin = 0.70;
constexpr double kMuSigmaFMin = 0.64;
constexpr double kFullAccuracyMin = 0.81;

enum class Status { Pass, Fail, Blocked };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome pass_if(bool ok, std::string detail) { return {ok ? Status::Pass : Status::Fail, std::move(detail)}; }

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0, blocked = 0, ran = 0;

void report(const std::string& name, const std::function<Outcome()>& fn) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {Status::Fail, std::string("exception: ") + e.what()};
  }
  const char* tag = o.status == Status::Pass ? "PASS" : o.status == Status::Fail ? "FAIL" : "BLOCKED";
  std::printf("%-7s %-28s %s [%.1fs]\n", tag, name.c_str(), o.detail.c_str(), seconds_since(t0));
  std::fflush(stdout);
  ++ran;
  failures += o.status == Status::Fail;
  blocked += o.status == Status::Blocked;
}

// ---------------------------------------------------------------- synthetic

EmbeddingModel matrix_model(const std::vector<std::vector<float>>& rows) {
  std::vector<Vocabulary::Entry> entries;
  std::vector<float> data;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    entries.push_back({"w" + std::to_string(i), rows.size() - i});
    data.insert(data.end(), rows[i].begin(), rows[i].end());
  }
  return EmbeddingModel(Vocabulary::from_entries(entries), rows[0].size(), data);
}

Outcome pooling() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::normal_distribution<float> g(0.0f, 1.0f);
  std::uniform_int_distribution<int> rows_dist(1, 40);
  const std::size_t d = 50;
  double worst = 0.0;
  for (int c = 0; c < 1000; ++c) {
    std::vector<std::vector<float>> m(rows_dist(rng), std::vector<float>(d));
    for (auto& r : m)
      for (auto& x : r) x = g(rng);
    auto model = matrix_model(m);
    std::vector<std::string> toks;
    for (std::size_t i = 0; i < m.size(); ++i) toks.push_back("w" + std::to_string(i));
    std::vector<double> mu, sd;
    test::oracle::mean_std(m, mu, sd);
    auto a = pool_mean(model, toks);
    auto b = pool_mean_std(model, toks);
    for (std::size_t j = 0; j < d; ++j) {
      worst = std::max({worst, std::abs(a.mu[j] - mu[j]), std::abs(b.mu[j] - mu[j]), std::abs(b.sigma[j] - sd[j])});
    }
  }
  const double t = seconds_since(t0);
  return pass_if(worst <= kPoolTol && t < kPoolBudgetS,
                 "max abs err " + fmt("%.2e", worst) + " over 1000 cases, " + fmt("%.2f", t) + "s");
}

Outcome nbsvm() {
  std::vector<SparseVector> two = {SparseVector::from_pairs({{0, 1.0}}), SparseVector::from_pairs({{1, 1.0}})};
  std::vector<int> y2 = {1, -1};
  auto t = nbsvm_fit(two, y2, 2, 1.0);
  const double e_exact = std::max(std::abs(t.r[0] - std::log(2.0)), std::abs(t.r[1] + std::log(2.0)));

  std::mt19937 rng(99);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f", "g", "h"};
  double e_oracle = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::set<std::string>> raw(10);
    std::vector<int> y(10);
    FeatureRegistry reg;
    for (const auto& w : vocab) reg.intern(w);
    std::vector<SparseVector> docs;
    for (int i = 0; i < 10; ++i) {
      y[i] = i % 3 == 0 ? 1 : -1;
      std::vector<std::pair<std::uint32_t, double>> p;
      for (const auto& w : vocab) {
        if (rng() % 3 == 0) {
          raw[i].insert(w);
          p.emplace_back(*reg.find(w), 1.0 + rng() % 4);
        }
      }
      docs.push_back(SparseVector::from_pairs(p));
    }
    auto fit = nbsvm_fit(docs, y, reg.size(), 1.0);
    for (const auto& [w, r] : test::oracle::nbsvm_ratios(raw, y, 1.0, vocab)) {
      e_oracle = std::max(e_oracle, std::abs(fit.r[*reg.find(w)] - r));
    }
  }
  return pass_if(e_exact <= kNbExactTol && e_oracle <= kNbOracleTol,
                 "ln2 example err " + fmt("%.1e", e_exact) + ", 10-doc oracle max err " + fmt("%.1e", e_oracle));
}

double central(const std::function<double(const std::vector<double>&, double)>& f, std::vector<double> w, double b,
               std::size_t j, double h) {
  auto eval = [&](double delta) {
    auto w2 = w;
    double b2 = b;
    (j == w.size() ? b2 : w2[j]) += delta;
    return f(w2, b2);
  };
  return (eval(h) - eval(-h)) / (2.0 * h);
}

Outcome gradients() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  const std::size_t dim = 6, n = 60;
  Rows X;
  std::vector<int> y;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i % 2 ? 1 : -1;
    std::vector<double> x(dim);
    for (auto& v : x) v = g(rng) + 0.8 * label;
    X.push_back(SparseVector::from_dense(x));
    y.push_back(label);
  }
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max({1e-8, std::abs(a), std::abs(b)}); };
  const double lambda = 0.1;
  double worst_lr = 0.0, worst_hinge = 0.0;
  int hinge_points = 0;
  for (int p = 0; p < 20; ++p) {
    std::vector<double> w(dim);
    for (auto& v : w) v = g(rng);
    const double b = g(rng);
    auto grad = logistic_gradient(w, b, X, y, lambda);
    auto f = [&](const std::vector<double>& ww, double bb) { return logistic_objective(ww, bb, X, y, lambda); };
    for (std::size_t j = 0; j <= dim; ++j) worst_lr = std::max(worst_lr, rel(j == dim ? grad.b : grad.w[j], central(f, w, b, j, 1e-5)));
  }
  while (hinge_points < 20) {
    std::vector<double> w(dim);
    for (auto& v : w) v = g(rng);
    const double b = g(rng), h = 1e-6;
    bool kink = false;
    for (std::size_t i = 0; i < n; ++i) {
      double s = b;
      for (const auto& [id, x] : X[i].entries) s += w[id] * x;
      kink |= std::abs(1.0 - y[i] * s) < 1e-3;
    }
    if (kink) continue;
    ++hinge_points;
    auto grad = hinge_subgradient(w, b, X, y, lambda);
    auto f = [&](const std::vector<double>& ww, double bb) { return hinge_objective(ww, bb, X, y, lambda); };
    for (std::size_t j = 0; j <= dim; ++j) worst_hinge = std::max(worst_hinge, rel(j == dim ? grad.b : grad.w[j], central(f, w, b, j, h)));
  }
  return pass_if(worst_lr < kGradRelTol && worst_hinge < kGradRelTol,
                 "max rel err logistic " + fmt("%.1e", worst_lr) + ", hinge " + fmt("%.1e", worst_hinge) + " (20 points each)");
}

Outcome lda_recovery() {
  const auto t0 = Clock::now();
  auto data = test::disjoint_vocab_docs(3, 200, 20);
  LdaConfig cfg;
  cfg.topics = 2;
  cfg.sweeps = 500;
  cfg.alpha = 0.1;  // symmetric 50/K over-smooths two topics; see README
  cfg.seed = 11;
  auto m = fit_lda(data.docs, data.ids, cfg);
  int same = 0;
  for (std::size_t d = 0; d < m.z.size(); ++d) {
    std::vector<int> c(m.K, 0);
    for (auto t : m.z[d]) ++c[t];
    same += (std::max_element(c.begin(), c.end()) - c.begin()) == data.labels[d];
  }
  const double p = static_cast<double>(same) / static_cast<double>(m.z.size());
  const double purity = std::max(p, 1.0 - p);
  double worst = 0.0;
  for (const auto* rows : {&m.phi, &m.theta}) {
    for (const auto& r : *rows) {
      long double s = 0.0L;
      for (double v : r) s += v;
      worst = std::max(worst, static_cast<double>(std::abs(s - 1.0L)));
    }
  }
  const double t = seconds_since(t0);
  return pass_if(purity >= kPurityMin && worst <= kRowSumTol && t < kLdaBudgetS,
                 "purity " + fmt("%.3f", purity) + ", max row-sum err " + fmt("%.1e", worst) + ", alpha 0.1, 500 sweeps");
}

double group_gap(const EmbeddingModel& m, int group_size) {
  double within = 0.0, across = 0.0;
  int nw = 0, na = 0;
  for (int g = 0; g < 2; ++g) {
    for (int i = 0; i < group_size; ++i) {
      auto a = *m.vector("g" + std::to_string(g) + "_" + std::to_string(i));
      for (int h = 0; h < 2; ++h) {
        for (int j = 0; j < group_size; ++j) {
          if (g == h && i == j) continue;
          const double c = cosine(a, *m.vector("g" + std::to_string(h) + "_" + std::to_string(j)));
          (g == h ? within : across) += c;
          ++(g == h ? nw : na);
        }
      }
    }
  }
  return within / nw - across / na;
}

Outcome skipgram() {
  const auto t0 = Clock::now();
  int hits = 0;
  std::string gaps;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SkipGramConfig cfg;
    cfg.dim = 50;
    cfg.seed = seed;
    auto m = train_skipgram(test::planted_groups(seed * 101, 2000), cfg);
    const double gap = group_gap(m, 10);
    hits += gap >= kGapMin;
    gaps += (gaps.empty() ? "" : " ") + fmt("%.2f", gap);
  }
  const double t = seconds_since(t0);
  return pass_if(hits >= 4 && t < kSkipgramBudgetS, std::to_string(hits) + "/5 seeds gap >= 0.2 (gaps " + gaps + ")");
}

Outcome dpgmm() {
  int hits = 0;
  bool monotone = true;
  std::string counts;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    DpgmmConfig cfg;
    cfg.max_components = 30;
    cfg.seed = seed;
    auto m = fit_dpgmm(test::gaussian_blobs(seed * 31, 3, 100, 5), cfg);
    for (std::size_t i = 1; i < m.elbo_trace.size(); ++i) {
      // relative slack only for floating-point noise in the bound itself
      monotone &= m.elbo_trace[i] >= m.elbo_trace[i - 1] - 1e-9 * std::abs(m.elbo_trace[i - 1]);
    }
    const auto k = m.effective_components(kComponentWeight);
    hits += k == 3;
    counts += (counts.empty() ? "" : " ") + std::to_string(k);
  }
  return pass_if(hits >= 4 && monotone, std::to_string(hits) + "/5 seeds with 3 components (found " + counts +
                                            "), ELBO " + (monotone ? "non-decreasing" : "DECREASED"));
}

Outcome relabel_loop() {
  auto data = test::mislabeled_corpus(21, 5000, 0.01);
  RelabelConfig cfg;
  cfg.seed = 4;
  auto state = RelabelState::create(data.corpus, cfg);
  std::size_t prev = test::recovered(state.corpus, data.truth);
  std::string trail = std::to_string(prev);
  bool strict = true;
  for (std::size_t it = 0; it < 4; ++it) {
    auto r = run_iteration(state);
    decide(state, oracle_decisions(r.queue, data.truth));
    const auto now = test::recovered(state.corpus, data.truth);
    trail += " -> " + std::to_string(now);
    const bool exhausted = now == prev;
    if (exhausted) {
      // no further true positives left in the queue
      std::size_t left = 0;
      for (const auto& item : r.queue) left += data.truth.at(item.tweet_id) == Label::Positive;
      strict &= left == 0;
      break;
    }
    strict &= now > prev;
    prev = now;
  }
  auto replayed = replay(data.corpus, state.log.entries());
  bool same = replayed.size() == state.corpus.size();
  for (std::size_t i = 0; same && i < replayed.size(); ++i) same = replayed[i].label == state.corpus[i].label;
  return pass_if(strict && same, "recovered " + trail + " of " + std::to_string(data.true_positives) +
                                     " true positives; replay " + (same ? "exact" : "DIFFERS"));
}

Outcome determinism() {
  auto corpus = test::labeled_corpus(5, 300, 0.3);
  CvConfig cv;
  cv.repetitions = 2;
  cv.folds = 3;
  cv.seed = 8;
  cv.embedding.dim = 16;
  cv.embedding.epochs = 3;
  std::vector<std::string> bad;
  for (const char* f : {"mu-sigma", "nbsvm", "ngrams:1,2"}) {
    for (const char* c : {"logistic", "svm"}) {
      auto a = format_cv_report(cross_validate(corpus, FeatureSpec::parse(f), ClassifierSpec::parse(c), cv), true);
      auto b = format_cv_report(cross_validate(corpus, FeatureSpec::parse(f), ClassifierSpec::parse(c), cv), true);
      if (a != b) bad.push_back(std::string("cv ") + f + "/" + c);
    }
  }
  LdaConfig lc;
  lc.topics = 4;
  lc.sweeps = 100;
  lc.seed = 3;
  auto l1 = fit_lda(corpus, lc), l2 = fit_lda(corpus, lc);
  auto bytes_equal = [](const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].size() != b[i].size() || std::memcmp(a[i].data(), b[i].data(), a[i].size() * sizeof(double)) != 0) return false;
    }
    return true;
  };
  if (l1.z != l2.z || !bytes_equal(l1.phi, l2.phi) || !bytes_equal(l1.theta, l2.theta)) bad.push_back("lda");
  SkipGramConfig sc;
  sc.dim = 32;
  sc.seed = 6;
  sc.threads = 1;
  auto sentences = test::planted_groups(9, 1000);
  auto e1 = train_skipgram(sentences, sc), e2 = train_skipgram(sentences, sc);
  if (e1.data().size() != e2.data().size() ||
      std::memcmp(e1.data().data(), e2.data().data(), e1.data().size() * sizeof(float)) != 0) {
    bad.push_back("embeddings");
  }
  std::string detail = "cv reports (6 pipelines, timing masked), lda z/phi/theta, single-thread embeddings";
  if (!bad.empty()) {
    detail = "differs:";
    for (const auto& b : bad) detail += " " + b;
  }
  return pass_if(bad.empty(), detail);
}

// ------------------------------------------------------------ sentiment140

const char* env(const char* name) {
  const char* v = std::getenv(name);
  return v && *v ? v : nullptr;
}

// Bench over 0.1% and 1% for every feature set and both classifiers; shared
// by the three desk-scale criteria.
struct Sentiment140Run {
  std::optional<BenchResult> result;
  double seconds = 0.0;
  std::string error;
};

Sentiment140Run& sentiment140_bench() {
  static Sentiment140Run run = [] {
    Sentiment140Run r;
    const char* path = env("TWEETMINE_SENTIMENT140");
    if (!path) return r;
    ExperimentConfig cfg;
    cfg.dataset = path;
    cfg.format = "sentiment140";
    cfg.fractions = {0.001, 0.01};
    for (const char* f : {"mu", "mu-sigma", "nbsvm", "ngrams:1", "ngrams:1,2", "ngrams:1,2,3"}) {
      cfg.features.push_back(FeatureSpec::parse(f));
    }
    cfg.classifiers = {ClassifierSpec::parse("logistic"), ClassifierSpec::parse("svm")};
    cfg.seed = 2016;
    const auto t0 = Clock::now();
    try {
      auto corpus = ingest_sentiment140(path).corpus;
      corpus.preprocess_all();
      r.result = run_bench(corpus, cfg);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.seconds = seconds_since(t0);
    return r;
  }();
  return run;
}

const CvReport* cell(const BenchResult& r, double fraction, const std::string& features, const std::string& clf) {
  for (const auto& c : r.cells) {
    if (std::abs(c.fraction - fraction) < 1e-12 && c.features == features && c.classifier == clf && c.report) {
      return &*c.report;
    }
  }
  return nullptr;
}

Outcome blocked_without_data() {
  return {Status::Blocked, "set TWEETMINE_SENTIMENT140 to the 1.6M-row training CSV (not available offline)"};
}

Outcome replication() {
  auto& run = sentiment140_bench();
  if (!run.result && run.error.empty()) return blocked_without_data();
  if (!run.result) return {Status::Fail, run.error};
  const auto label = [](const char* s) { return FeatureSpec::parse(s).label(); };
  const auto* ng = cell(*run.result, 0.01, label("ngrams:1,2"), "logistic");
  const auto* ms = cell(*run.result, 0.01, label("mu-sigma"), "logistic");
  const auto* mu = cell(*run.result, 0.01, label("mu"), "logistic");
  if (!ng || !ms || !mu) return {Status::Fail, "a required cell failed"};
  const bool ok = ng->f1.mean >= kNgramFMin && ms->f1.mean >= kMuSigmaFMin && ng->f1.mean > mu->f1.mean &&
                  run.seconds < kReplicationBudgetS;
  return pass_if(ok, "1% logistic F: 1,2-grams " + fmt("%.3f", ng->f1.mean) + ", mu,sigma " + fmt("%.3f", ms->f1.mean) +
                         ", mu " + fmt("%.3f", mu->f1.mean) + "; grid took " + fmt("%.0f", run.seconds) + "s");
}

// Wall time of a whole CV cell: every run's featurize + train + predict, plus
// skip-gram training for embedding features.
double cell_seconds(const CvReport& r, bool with_embedding) {
  double s = 0.0;
  for (const auto& run : r.runs) s += run.featurize_s + run.train_s + run.predict_s;
  if (with_embedding) {
    for (double e : r.embedding_train_s) s += e;
  }
  return s;
}

Outcome timing_pattern() {
  auto& run = sentiment140_bench();
  if (!run.result && run.error.empty()) return blocked_without_data();
  if (!run.result) return {Status::Fail, run.error};
  const auto label = [](const char* s) { return FeatureSpec::parse(s).label(); };
  const auto* g1 = cell(*run.result, 0.01, label("ngrams:1"), "svm");
  const auto* g3 = cell(*run.result, 0.01, label("ngrams:1,2,3"), "svm");
  const auto* emb = cell(*run.result, 0.01, label("mu"), "svm");
  if (!g1 || !g3 || !emb) return {Status::Fail, "a required cell failed"};
  const double t1 = cell_seconds(*g1, false), t3 = cell_seconds(*g3, false);
  const double te = cell_seconds(*emb, true), te_bare = cell_seconds(*emb, false);
  return pass_if(t1 < t3 && t1 < te && t3 < te,
                 "1% svm cell seconds: 1-gram " + fmt("%.2f", t1) + ", 1,2,3-gram " + fmt("%.2f", t3) +
                     ", mu pooling incl. skip-gram training " + fmt("%.2f", te) + " (" + fmt("%.2f", te_bare) +
                     " without)");
}

Outcome monotone_fractions() {
  auto& run = sentiment140_bench();
  if (!run.result && run.error.empty()) return blocked_without_data();
  if (!run.result) return {Status::Fail, run.error};
  std::string bad;
  for (const char* f : {"mu", "mu-sigma", "nbsvm", "ngrams:1", "ngrams:1,2", "ngrams:1,2,3"}) {
    for (const char* c : {"logistic", "svm"}) {
      const auto fl = FeatureSpec::parse(f).label();
      const auto* a = cell(*run.result, 0.001, fl, c);
      const auto* b = cell(*run.result, 0.01, fl, c);
      if (!a || !b || b->f1.mean < a->f1.mean) bad += " " + fl + "/" + c;
    }
  }
  return pass_if(bad.empty(), bad.empty() ? "F non-decreasing 0.1% -> 1% for 6 feature sets x 2 classifiers"
                                          : "decreased or failed:" + bad);
}

Outcome full_data() {
  const char* train_path = env("TWEETMINE_SENTIMENT140");
  const char* test_path = env("TWEETMINE_SENTIMENT140_TEST");
  if (!train_path || !test_path || !env("TWEETMINE_FULL_RUN")) {
    return {Status::Blocked, "extended run: needs TWEETMINE_SENTIMENT140, TWEETMINE_SENTIMENT140_TEST and TWEETMINE_FULL_RUN=1"};
  }
  auto train = ingest_sentiment140(train_path).corpus;
  auto test = ingest_sentiment140(test_path).corpus;
  train.preprocess_all();
  test.preprocess_all();
  std::vector<const std::vector<std::string>*> docs;
  std::vector<int> y;
  for (const auto& t : train.tweets()) {
    docs.push_back(&t.tokens);
    y.push_back(t.label == Label::Positive ? 1 : -1);
  }
  SkipGramConfig sc;
  sc.seed = 2016;
  auto embedding = train_skipgram(train, sc);
  std::string detail;
  bool ok = true;
  for (const char* f : {"ngrams:1,2", "mu-sigma"}) {
    auto spec = FeatureSpec::parse(f);
    Rows X;
    auto pipe = FeaturePipeline::fit(spec, docs, y, &embedding, X);
    auto model = train_classifier(ClassifierSpec::parse("logistic"), spec, X, y, pipe.dim(), 2016);
    std::vector<int> pred, gold;
    for (const auto& t : test.tweets()) {
      pred.push_back(predict(model, pipe.transform(t.tokens)).label);
      gold.push_back(t.label == Label::Positive ? 1 : -1);
    }
    const double acc = evaluate(pred, gold).accuracy;
    ok &= acc >= kFullAccuracyMin;
    detail += spec.label() + " acc " + fmt("%.3f", acc) + "; ";
  }
  return pass_if(ok, detail + "logistic trained on all rows");
}

}  // namespace

int main(int argc, char** argv) {
  std::string group = "synthetic";
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--group") == 0 && i + 1 < argc) {
      group = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--group synthetic|sentiment140|all]\n");
      return 2;
    }
  }
  if (group != "synthetic" && group != "sentiment140" && group != "all") {
    std::fprintf(stderr, "unknown group %s\n", group.c_str());
    return 2;
  }
  if (group != "sentiment140") {
    report("pooling-oracle", pooling);
    report("nbsvm-oracle", nbsvm);
    report("gradient-checks", gradients);
    report("lda-recovery", lda_recovery);
    report("skipgram-sanity", skipgram);
    report("dpgmm-components", dpgmm);
    report("relabel-simulation", relabel_loop);
    report("determinism", determinism);
  }
  if (group != "synthetic") {
    report("sentiment140-1pct", replication);
    report("sentiment140-timing", timing_pattern);
    report("sentiment140-monotone", monotone_fractions);
    report("sentiment140-full-data", full_data);
  }
  std::printf("%d criteria: %d passed, %d failed, %d blocked\n", ran, ran - failures - blocked, failures, blocked);
  if (failures) return 1;
  return blocked == ran ? 77 : 0;
}
