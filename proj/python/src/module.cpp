#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tweetmine/corpus.hpp"
#include "tweetmine/cv.hpp"
#include "tweetmine/dpgmm.hpp"
#include "tweetmine/embedding.hpp"
#include "tweetmine/error.hpp"
#include "tweetmine/features.hpp"
#include "tweetmine/lda.hpp"
#include "tweetmine/preprocess.hpp"

namespace py = pybind11;
using namespace tweetmine;

namespace {

Corpus make_corpus(const std::vector<std::tuple<std::string, std::string, std::string>>& rows) {
  Corpus c;
  for (const auto& [id, text, label] : rows) {
    Tweet t;
    t.id = id;
    t.raw_text = text;
    t.label = parse_label(label);
    if (!c.add(std::move(t))) throw InvalidArgument("duplicate id " + id);
  }
  c.preprocess_all();
  return c;
}

py::dict stats(const MeanStd& m) { return py::dict(py::arg("mean") = m.mean, py::arg("std") = m.std); }

}  // namespace

PYBIND11_MODULE(_tweetmine, m) {
  m.doc() = "Rare-class short-text mining";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<DataError>(m, "DataError", error.ptr());

  m.def("preprocess", [](const std::string& text) { return preprocess(text); }, py::arg("text"));

  py::class_<Corpus>(m, "Corpus")
      .def(py::init(&make_corpus), py::arg("rows"), "rows of (id, text, label)")
      .def_static("load_jsonl", [](const std::string& path) {
        auto r = ingest_jsonl(path);
        r.corpus.preprocess_all();
        return std::move(r.corpus);
      })
      .def_static("load_sentiment140", [](const std::string& path, std::optional<std::size_t> limit) {
        auto r = ingest_sentiment140(path, limit);
        r.corpus.preprocess_all();
        return std::move(r.corpus);
      }, py::arg("path"), py::arg("limit") = py::none())
      .def("__len__", &Corpus::size)
      .def("count", [](const Corpus& c, const std::string& label) { return c.count(parse_label(label)); })
      .def("ids", [](const Corpus& c) {
        std::vector<std::string> out;
        for (const auto& t : c.tweets()) out.push_back(t.id);
        return out;
      })
      .def("tokens", [](const Corpus& c, const std::string& id) {
        auto i = c.index_of(id);
        if (!i) throw py::key_error(id);
        return c[*i].tokens;
      })
      .def("save_jsonl", [](const Corpus& c, const std::string& path) { write_jsonl(c, path); });

  py::class_<SkipGramConfig>(m, "SkipGramConfig")
      .def(py::init<>())
      .def_readwrite("dim", &SkipGramConfig::dim)
      .def_readwrite("window", &SkipGramConfig::window)
      .def_readwrite("epochs", &SkipGramConfig::epochs)
      .def_readwrite("subsample_t", &SkipGramConfig::subsample_t)
      .def_readwrite("learning_rate", &SkipGramConfig::learning_rate)
      .def_readwrite("min_count", &SkipGramConfig::min_count)
      .def_readwrite("seed", &SkipGramConfig::seed)
      .def_readwrite("threads", &SkipGramConfig::threads);

  py::class_<EmbeddingModel>(m, "EmbeddingModel")
      .def_property_readonly("dim", &EmbeddingModel::dim)
      .def("__len__", &EmbeddingModel::size)
      .def("__contains__", [](const EmbeddingModel& e, const std::string& w) { return e.vector(w).has_value(); })
      .def("vector", [](const EmbeddingModel& e, const std::string& w) {
        auto v = e.vector(w);
        if (!v) throw py::key_error(w);
        return std::vector<float>(v->begin(), v->end());
      })
      .def("most_similar", &most_similar, py::arg("query"), py::arg("k") = 10)
      .def("save", [](const EmbeddingModel& e, const std::string& path) { save_model(e, path); })
      .def_static("load", &load_model);

  m.def("train_skipgram", py::overload_cast<const Sentences&, const SkipGramConfig&>(&train_skipgram),
        py::arg("sentences"), py::arg("config") = SkipGramConfig{}, py::call_guard<py::gil_scoped_release>());
  m.def("train_skipgram", py::overload_cast<const Corpus&, const SkipGramConfig&>(&train_skipgram),
        py::arg("corpus"), py::arg("config") = SkipGramConfig{}, py::call_guard<py::gil_scoped_release>());

  m.def("pool", [](const EmbeddingModel& e, const std::vector<std::string>& tokens, bool with_std) {
    auto p = with_std ? pool_mean_std(e, tokens) : pool_mean(e, tokens);
    return py::make_tuple(p.mu, p.sigma, p.embedded_tokens);
  }, py::arg("model"), py::arg("tokens"), py::arg("with_std") = false,
     "(mu, sigma, embedded_tokens); sigma is empty without with_std");

  m.def("nbsvm_ratios", [](const std::vector<std::vector<std::string>>& docs, const std::vector<int>& labels,
                           double alpha) {
    FeatureRegistry reg;
    auto cfg = FeaturizerConfig::ngrams(1);
    std::vector<SparseVector> rows;
    for (const auto& d : docs) rows.push_back(ngram_featurize(d, cfg, reg, true));
    auto t = nbsvm_fit(rows, labels, reg.size(), alpha);
    std::map<std::string, double> out;
    for (std::uint32_t i = 0; i < reg.size(); ++i) out[reg.name(i)] = t.r[i];
    return out;
  }, py::arg("docs"), py::arg("labels"), py::arg("alpha") = 1.0, "unigram log-count ratio per word");

  py::class_<DpgmmConfig>(m, "DpgmmConfig")
      .def(py::init<>())
      .def_readwrite("max_components", &DpgmmConfig::max_components)
      .def_readwrite("concentration", &DpgmmConfig::concentration)
      .def_readwrite("tol", &DpgmmConfig::tol)
      .def_readwrite("max_iters", &DpgmmConfig::max_iters)
      .def_readwrite("seed", &DpgmmConfig::seed);

  py::class_<ClusterModel>(m, "ClusterModel")
      .def_readonly("weights", &ClusterModel::weights)
      .def_readonly("means", &ClusterModel::means)
      .def_readonly("assignments", &ClusterModel::assignments)
      .def_readonly("elbo_trace", &ClusterModel::elbo_trace)
      .def_readonly("converged", &ClusterModel::converged)
      .def("effective_components", &ClusterModel::effective_components, py::arg("min_weight") = 0.05);

  m.def("fit_dpgmm", &fit_dpgmm, py::arg("points"), py::arg("config") = DpgmmConfig{},
        py::call_guard<py::gil_scoped_release>());

  py::class_<TopicModel>(m, "TopicModel")
      .def_readonly("K", &TopicModel::K)
      .def_readonly("alpha", &TopicModel::alpha)
      .def_readonly("beta", &TopicModel::beta)
      .def_readonly("vocab", &TopicModel::vocab)
      .def_readonly("phi", &TopicModel::phi)
      .def_readonly("theta", &TopicModel::theta)
      .def("top_words", [](const TopicModel& t, std::size_t topic, std::size_t n) { return top_words(t, topic, n); },
           py::arg("topic"), py::arg("n") = 10)
      .def("search", [](const TopicModel& t, const std::string& w, std::uint32_t k) { return search(t, w, k); });

  m.def("fit_lda", [](const Corpus& c, std::size_t topics, std::optional<double> alpha, double beta,
                      std::size_t sweeps, std::uint64_t seed) {
    LdaConfig cfg;
    cfg.topics = topics;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.sweeps = sweeps;
    cfg.seed = seed;
    py::gil_scoped_release release;
    return fit_lda(c, cfg);
  }, py::arg("corpus"), py::arg("topics") = 10, py::arg("alpha") = py::none(), py::arg("beta") = 0.01,
     py::arg("sweeps") = 1000, py::arg("seed") = 0);

  m.def("cross_validate", [](const Corpus& c, const std::string& features, const std::string& classifier,
                             std::size_t repetitions, std::size_t folds, std::uint64_t seed,
                             const SkipGramConfig& embedding) {
    CvConfig cfg;
    cfg.repetitions = repetitions;
    cfg.folds = folds;
    cfg.seed = seed;
    cfg.embedding = embedding;
    auto fs = FeatureSpec::parse(features);
    auto cs = ClassifierSpec::parse(classifier);
    CvReport r;
    {
      py::gil_scoped_release release;
      r = cross_validate(c, fs, cs, cfg);
    }
    py::list f1s;
    for (const auto& run : r.runs) f1s.append(run.ok ? py::cast(run.metrics.f1) : py::object(py::none()));
    return py::dict(py::arg("accuracy") = stats(r.accuracy), py::arg("precision") = stats(r.precision),
                    py::arg("recall") = stats(r.recall), py::arg("f1") = stats(r.f1),
                    py::arg("failed") = r.failed, py::arg("run_f1") = f1s,
                    py::arg("report") = format_cv_report(r, true));
  }, py::arg("corpus"), py::arg("features"), py::arg("classifier") = "logistic", py::arg("repetitions") = 5,
     py::arg("folds") = 5, py::arg("seed") = 0, py::arg("embedding") = SkipGramConfig{});
}
