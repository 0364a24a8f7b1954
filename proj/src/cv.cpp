#include "tweetmine/cv.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "tweetmine/error.hpp"

namespace tweetmine {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

MeanStd summarize(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return out;
}

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

FeatureSpec FeatureSpec::parse(std::string_view text) {
  FeatureSpec spec;
  if (text == "mu") {
    spec.kind = Kind::Mu;
    spec.orders.clear();
    return spec;
  }
  if (text == "mu-sigma") {
    spec.kind = Kind::MuSigma;
    spec.orders.clear();
    return spec;
  }
  if (text == "nbsvm") {
    spec.kind = Kind::NbSvm;
    spec.orders = {1, 2};
    return spec;
  }
  if (text == "ngrams:1") {
    spec.orders = {1};
  } else if (text == "ngrams:1,2") {
    spec.orders = {1, 2};
  } else if (text == "ngrams:1,2,3") {
    spec.orders = {1, 2, 3};
  } else {
    throw InvalidArgument("unknown feature set '" + std::string(text) +
                          "' (expected mu, mu-sigma, nbsvm, ngrams:1, ngrams:1,2 or ngrams:1,2,3)");
  }
  spec.kind = Kind::NGrams;
  return spec;
}

std::string FeatureSpec::label() const {
  switch (kind) {
    case Kind::Mu:
      return "mu";
    case Kind::MuSigma:
      return "mu-sigma";
    case Kind::NbSvm:
      return "nbsvm";
    case Kind::NGrams: {
      std::string s = "ngrams:";
      for (int o : orders) s += (s.back() == ':' ? "" : ",") + std::to_string(o);
      return s;
    }
  }
  return "?";
}

ClassifierSpec ClassifierSpec::parse(std::string_view text) {
  ClassifierSpec spec;
  if (text == "logistic" || text == "lr") {
    spec.kind = Kind::Logistic;
  } else if (text == "svm") {
    spec.kind = Kind::Svm;
  } else if (text == "ridge") {
    spec.kind = Kind::Ridge;
  } else {
    throw InvalidArgument("unknown classifier '" + std::string(text) + "' (expected logistic, svm or ridge)");
  }
  return spec;
}

std::string ClassifierSpec::label() const {
  switch (kind) {
    case Kind::Logistic:
      return "logistic";
    case Kind::Svm:
      return "svm";
    case Kind::Ridge:
      return "ridge";
  }
  return "?";
}

FeaturePipeline FeaturePipeline::fit(const FeatureSpec& spec, std::span<const std::vector<std::string>* const> docs,
                                     std::span<const int> labels, const EmbeddingModel* embedding, Rows& train_rows) {
  FeaturePipeline p;
  p.spec_ = spec;
  train_rows.clear();
  train_rows.reserve(docs.size());
  if (spec.uses_embedding()) {
    if (!embedding) throw InvalidArgument("feature set " + spec.label() + " needs an embedding model");
    p.embedding_ = embedding;
    p.dim_ = embedding->dim() * (spec.kind == FeatureSpec::Kind::MuSigma ? 2 : 1);
    for (const auto* d : docs) train_rows.push_back(p.transform(*d));
    return p;
  }

  p.ngram_config_ = spec.kind == FeatureSpec::Kind::NGrams && spec.orders == std::set<int>{1}
                        ? FeaturizerConfig::bag_of_words()
                        : FeaturizerConfig{spec.orders, false, {}};
  p.ngram_config_.validate();
  p.registry_ = std::make_shared<FeatureRegistry>();
  for (const auto* d : docs) train_rows.push_back(ngram_featurize(*d, p.ngram_config_, *p.registry_, true));
  p.registry_->freeze();
  p.dim_ = p.registry_->size();
  if (spec.kind == FeatureSpec::Kind::NbSvm) {
    p.nb_ = nbsvm_fit(train_rows, labels, p.dim_);
    for (auto& row : train_rows) row = p.nb_->apply(row);
  }
  return p;
}

SparseVector FeaturePipeline::transform(const std::vector<std::string>& tokens) const {
  if (embedding_) {
    if (spec_.kind == FeatureSpec::Kind::Mu) return SparseVector::from_dense(pool_mean(*embedding_, tokens).mu);
    return SparseVector::from_dense(pool_mean_std(*embedding_, tokens).combined());
  }
  auto row = ngram_featurize(tokens, ngram_config_, *registry_, false);
  return nb_ ? nb_->apply(row) : row;
}

LinearModel train_classifier(const ClassifierSpec& classifier, const FeatureSpec& features, const Rows& X,
                             std::span<const int> y, std::size_t dim, std::uint64_t run_seed) {
  switch (classifier.kind) {
    case ClassifierSpec::Kind::Logistic:
      return train_logistic(X, y, dim, classifier.logistic);
    case ClassifierSpec::Kind::Ridge:
      return train_ridge(X, y, dim, classifier.logistic);
    case ClassifierSpec::Kind::Svm: {
      SvmConfig cfg = classifier.svm;
      cfg.seed = mix_seed(cfg.seed, run_seed);
      auto m = train_svm(X, y, dim, cfg);
      if (features.kind == FeatureSpec::Kind::NbSvm) interpolate_nbsvm(m, classifier.nbsvm_beta);
      return m;
    }
  }
  throw InvalidArgument("unknown classifier");
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t folds,
                                                       std::uint64_t seed) {
  if (folds < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> out(folds);
  for (int cls : {1, -1}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) idx.push_back(i);
    }
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng() % i]);
    for (std::size_t k = 0; k < idx.size(); ++k) out[k % folds].push_back(idx[k]);
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

CvReport cross_validate(const Corpus& corpus, const FeatureSpec& features, const ClassifierSpec& classifier,
                        const CvConfig& config) {
  if (config.repetitions == 0) throw InvalidArgument("cross-validation needs at least one repetition");
  std::vector<const std::vector<std::string>*> docs;
  std::vector<int> y;
  for (const auto& t : corpus.tweets()) {
    if (t.label == Label::Unlabeled) continue;
    docs.push_back(&t.tokens);
    y.push_back(t.label == Label::Positive ? 1 : -1);
  }
  if (docs.empty()) throw DataError("cross-validation needs labeled tweets");

  CvReport report;
  report.dataset = config.dataset_label;
  report.features = features.label();
  report.classifier = classifier.label();
  report.runs.resize(config.repetitions * config.folds);

  for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
    const std::uint64_t rep_seed = mix_seed(config.seed, rep);
    std::optional<EmbeddingModel> embedding;
    if (features.uses_embedding()) {
      SkipGramConfig ecfg = config.embedding;
      ecfg.seed = rep_seed;
      const auto start = Clock::now();
      embedding = train_skipgram(corpus, ecfg);
      report.embedding_train_s.push_back(seconds_since(start));
    }
    const auto folds = stratified_folds(y, config.folds, rep_seed);

    auto run_fold = [&](std::size_t f) {
      RunResult& run = report.runs[rep * config.folds + f];
      run.repetition = rep;
      run.fold = f;
      std::vector<char> in_test(docs.size(), 0);
      for (auto i : folds[f]) in_test[i] = 1;
      std::vector<const std::vector<std::string>*> train_docs, test_docs;
      std::vector<int> train_y, test_y;
      for (std::size_t i = 0; i < docs.size(); ++i) {
        (in_test[i] ? test_docs : train_docs).push_back(docs[i]);
        (in_test[i] ? test_y : train_y).push_back(y[i]);
      }
      auto has_both = [](const std::vector<int>& v) {
        return std::count(v.begin(), v.end(), 1) > 0 && std::count(v.begin(), v.end(), -1) > 0;
      };
      if (!has_both(train_y) || !has_both(test_y)) {
        run.failure = !has_both(train_y) ? "training split lacks a class" : "test split lacks a class";
        return;
      }
      try {
        auto start = Clock::now();
        Rows train_rows;
        auto pipeline = FeaturePipeline::fit(features, train_docs, train_y, embedding ? &*embedding : nullptr,
                                             train_rows);
        Rows test_rows;
        test_rows.reserve(test_docs.size());
        for (const auto* d : test_docs) test_rows.push_back(pipeline.transform(*d));
        run.featurize_s = seconds_since(start);

        start = Clock::now();
        auto model = train_classifier(classifier, features, train_rows, train_y, pipeline.dim(),
                                      rep * config.folds + f);
        run.train_s = seconds_since(start);

        start = Clock::now();
        std::vector<int> pred;
        pred.reserve(test_rows.size());
        for (const auto& row : test_rows) pred.push_back(predict(model, row).label);
        run.predict_s = seconds_since(start);

        run.metrics = evaluate(pred, test_y);
        run.ok = true;
      } catch (const DataError& e) {
        run.failure = e.what();
      }
    };

    const unsigned n = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(config.folds)));
    if (n == 1) {
      for (std::size_t f = 0; f < config.folds; ++f) run_fold(f);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::exception_ptr> errors(n);
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < n; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t f; (f = next.fetch_add(1)) < config.folds;) run_fold(f);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      pool.clear();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
  }

  std::vector<double> acc, prec, rec, f1, fz, tr, pr;
  for (const auto& run : report.runs) {
    if (!run.ok) {
      ++report.failed;
      continue;
    }
    acc.push_back(run.metrics.accuracy);
    prec.push_back(run.metrics.precision);
    rec.push_back(run.metrics.recall);
    f1.push_back(run.metrics.f1);
    fz.push_back(run.featurize_s);
    tr.push_back(run.train_s);
    pr.push_back(run.predict_s);
  }
  report.accuracy = summarize(acc);
  report.precision = summarize(prec);
  report.recall = summarize(rec);
  report.f1 = summarize(f1);
  report.featurize_s = summarize(fz);
  report.train_s = summarize(tr);
  report.predict_s = summarize(pr);
  return report;
}

std::string format_cv_report(const CvReport& report, bool mask_timing) {
  std::ostringstream out;
  out << "dataset\tfeatures\tclassifier\trun\taccuracy\tprecision\trecall\tf1\tfeaturize_s\ttrain_s\tpredict_s\tstatus\n";
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    const auto& r = report.runs[i];
    out << report.dataset << '\t' << report.features << '\t' << report.classifier << '\t' << i;
    if (r.ok) {
      out << '\t' << fixed(r.metrics.accuracy) << '\t' << fixed(r.metrics.precision) << '\t'
          << fixed(r.metrics.recall) << '\t' << fixed(r.metrics.f1);
    } else {
      out << "\tNA\tNA\tNA\tNA";
    }
    for (double t : {r.featurize_s, r.train_s, r.predict_s}) out << '\t' << (mask_timing ? "-" : fixed(t));
    out << '\t' << (r.ok ? "ok" : "failed: " + r.failure) << '\n';
  }
  return out.str();
}

void write_cv_report(const CvReport& report, const std::string& path, bool mask_timing) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << format_cv_report(report, mask_timing);
}

std::string format_cv_summary(const CvReport& report) {
  std::ostringstream out;
  out << "metric\tmean\tstd\n";
  auto row = [&](const char* name, const MeanStd& m) { out << name << '\t' << fixed(m.mean) << '\t' << fixed(m.std) << '\n'; };
  row("accuracy", report.accuracy);
  row("precision", report.precision);
  row("recall", report.recall);
  row("f1", report.f1);
  row("featurize_s", report.featurize_s);
  row("train_s", report.train_s);
  row("predict_s", report.predict_s);
  out << "runs\t" << report.runs.size() << "\t\nfailed\t" << report.failed << "\t\n";
  return out.str();
}

}  // namespace tweetmine
