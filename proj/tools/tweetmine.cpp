// Command-line front end. Exit codes: 0 ok, 1 usage, 2 data error, 3 internal.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tweetmine/bench.hpp"
#include "tweetmine/corpus.hpp"
#include "tweetmine/cv.hpp"
#include "tweetmine/dpgmm.hpp"
#include "tweetmine/embedding.hpp"
#include "tweetmine/error.hpp"
#include "tweetmine/language.hpp"
#include "tweetmine/lda.hpp"
#include "tweetmine/lexicon.hpp"
#include "tweetmine/preprocess.hpp"
#include "tweetmine/relabel.hpp"
#include "tweetmine/service.hpp"

using namespace tweetmine;

namespace {

std::string detect_format(const std::string& path, const std::string& format) {
  if (format != "auto") return format;
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0 ? "sentiment140" : "jsonl";
}

Corpus load_corpus(const std::string& path, const std::string& format, std::optional<std::size_t> limit = {}) {
  const auto fmt = detect_format(path, format);
  IngestResult r;
  if (fmt == "sentiment140") {
    r = ingest_sentiment140(path, limit);
  } else if (fmt == "jsonl") {
    r = ingest_jsonl(path);
  } else {
    throw InvalidArgument("unknown format " + format + " (expected auto, sentiment140 or jsonl)");
  }
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  r.corpus.preprocess_all();
  return std::move(r.corpus);
}

template <class T>
std::vector<T> split_list(const std::string& text, T (*convert)(const std::string&)) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(convert(item));
  }
  return out;
}

std::string identity(const std::string& s) { return s; }
double to_double(const std::string& s) { return std::stod(s); }
std::size_t to_size(const std::string& s) { return std::stoul(s); }

// Feature specs contain commas themselves ("ngrams:1,2"), so lists of them are
// separated by ';' or given as repeated flags.
std::vector<FeatureSpec> parse_feature_list(const std::vector<std::string>& items) {
  std::vector<FeatureSpec> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ';')) {
      if (!part.empty()) out.push_back(FeatureSpec::parse(part));
    }
  }
  return out;
}

struct EmbeddingFlags {
  SkipGramConfig cfg;
  void add(CLI::App* cmd) {
    cmd->add_option("--dim", cfg.dim, "Vector dimension")->capture_default_str();
    cmd->add_option("--window", cfg.window, "Context radius")->capture_default_str();
    cmd->add_option("--epochs", cfg.epochs, "Training epochs")->capture_default_str();
    cmd->add_option("--subsample", cfg.subsample_t, "Frequent-word subsampling threshold")->capture_default_str();
    cmd->add_option("--min-count", cfg.min_count, "Minimum word count")->capture_default_str();
    cmd->add_option("--threads", cfg.threads, "Training threads (1 is reproducible)")->capture_default_str();
  }
};

RelabelService* g_service = nullptr;
void on_signal(int) {
  if (g_service) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rare-class short-text mining toolkit"};
  app.set_config("--config", "", "Read options from a TOML or INI file");
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  auto add_seed = [&](CLI::App* cmd) { cmd->add_option("--seed", seed, "Random seed")->capture_default_str(); };

  // ingest
  std::string in_path, out_path, format = "auto";
  std::optional<std::size_t> limit;
  auto* ingest = app.add_subcommand("ingest", "Read a Sentiment140 CSV or JSONL corpus and write JSONL");
  ingest->add_option("--input", in_path)->required()->check(CLI::ExistingFile);
  ingest->add_option("--output", out_path)->required();
  ingest->add_option("--format", format, "auto, sentiment140 or jsonl")->capture_default_str();
  ingest->add_option("--limit", limit, "Read at most this many rows");

  auto* prep = app.add_subcommand("preprocess", "Write {id, tokens} records");
  prep->add_option("--input", in_path)->required()->check(CLI::ExistingFile);
  prep->add_option("--output", out_path)->required();
  prep->add_option("--format", format)->capture_default_str();

  std::string lang = "en";
  double min_score = 0.0;
  std::vector<std::string> profiles;
  auto* langf = app.add_subcommand("lang-filter", "Keep tweets identified as one language");
  langf->add_option("--input", in_path)->required()->check(CLI::ExistingFile);
  langf->add_option("--output", out_path)->required();
  langf->add_option("--format", format)->capture_default_str();
  langf->add_option("--lang", lang, "Language code to keep")->capture_default_str();
  langf->add_option("--min-score", min_score, "Minimum detection score")->capture_default_str();
  langf->add_option("--profile", profiles, "Extra language profile files")->check(CLI::ExistingFile);

  auto* dd = app.add_subcommand("dedup", "Drop retweets and near-duplicate texts");
  dd->add_option("--input", in_path)->required()->check(CLI::ExistingFile);
  dd->add_option("--output", out_path)->required();
  dd->add_option("--format", format)->capture_default_str();

  EmbeddingFlags emb;
  auto* te = app.add_subcommand("train-embeddings", "Train skip-gram vectors");
  te->add_option("--input", in_path)->required()->check(CLI::ExistingFile);
  te->add_option("--output", out_path)->required();
  te->add_option("--format", format)->capture_default_str();
  emb.add(te);
  add_seed(te);

  std::string model_path, query;
  std::size_t k = 10;
  auto* sim = app.add_subcommand("similar", "Nearest words by cosine");
  sim->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
  sim->add_option("--query", query, "Word, or comma-separated words to average")->required();
  sim->add_option("--k", k)->capture_default_str();

  DpgmmConfig dp;
  std::size_t cluster_words = 9000;
  auto* cl = app.add_subcommand("cluster", "DPGMM clustering of medium-frequency word vectors");
  cl->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
  cl->add_option("--output", out_path)->required();
  cl->add_option("--words", cluster_words, "Medium-frequency words to cluster")->capture_default_str();
  cl->add_option("--max-components", dp.max_components)->capture_default_str();
  cl->add_option("--concentration", dp.concentration)->capture_default_str();
  cl->add_option("--max-iters", dp.max_iters)->capture_default_str();
  add_seed(cl);

  std::string ks = "5,10,15,20,25", annotations, search_term;
  bool large = false;
  LdaConfig lda;
  double lda_alpha = 0.0;
  std::size_t top = 10;
  unsigned lda_threads = 1;
  auto* ld = app.add_subcommand("lda", "Topic models over a grid of K");
  ld->add_option("--input", in_path)->required()->check(CLI::ExistingFile);
  ld->add_option("--output", out_path, "Topic report TSV")->required();
  ld->add_option("--format", format)->capture_default_str();
  ld->add_option("--k", ks, "Comma-separated topic counts")->capture_default_str();
  ld->add_flag("--large", large, "Add 35, 45 and 50 topics");
  ld->add_option("--sweeps", lda.sweeps)->capture_default_str();
  ld->add_option("--alpha", lda_alpha, "Document-topic prior (default 50/K)");
  ld->add_option("--beta", lda.beta)->capture_default_str();
  ld->add_option("--average-last", lda.average_last, "Average estimates over the last N sweeps");
  ld->add_option("--top", top, "Words per topic in the report")->capture_default_str();
  ld->add_option("--threads", lda_threads, "Models fitted in parallel")->capture_default_str();
  ld->add_option("--annotations", annotations, "JSONL annotations for the first K");
  ld->add_option("--search", search_term, "word(k): list tweets where word was assigned topic k (first K)");
  add_seed(ld);

  std::string seeds, lexicon_in, accept;
  std::size_t candidates = 50;
  std::optional<double> auto_threshold;
  auto* lx = app.add_subcommand("lexicon", "One bootstrapping round: match, score candidates, accept");
  lx->add_option("--input", in_path)->required()->check(CLI::ExistingFile);
  lx->add_option("--format", format)->capture_default_str();
  auto* seeds_opt = lx->add_option("--seeds", seeds, "Comma-separated seed terms");
  lx->add_option("--lexicon", lexicon_in, "Existing lexicon JSONL")->excludes(seeds_opt)->check(CLI::ExistingFile);
  lx->add_option("--candidates", candidates, "Candidates to list")->capture_default_str();
  lx->add_option("--accept", accept, "Comma-separated candidates to accept");
  lx->add_option("--auto-threshold", auto_threshold, "Accept candidates scoring at least this");
  lx->add_option("--output", out_path, "Write the expanded lexicon here");

  std::vector<std::string> feature_items = {"ngrams:1,2"};
  std::string classifier = "logistic";
  CvConfig cvc;
  std::optional<double> fraction;
  auto* cv = app.add_subcommand("cv", "Repeated stratified cross-validation");
  cv->add_option("--input", in_path)->required()->check(CLI::ExistingFile);
  cv->add_option("--output", out_path, "Per-run report TSV")->required();
  cv->add_option("--format", format)->capture_default_str();
  cv->add_option("--limit", limit);
  cv->add_option("--fraction", fraction, "Stratified subsample before CV");
  cv->add_option("--features", feature_items, "mu | mu-sigma | nbsvm | ngrams:1 | ngrams:1,2 | ngrams:1,2,3");
  cv->add_option("--classifier", classifier, "logistic | svm | ridge")->capture_default_str();
  cv->add_option("--repetitions", cvc.repetitions)->capture_default_str();
  cv->add_option("--folds", cvc.folds)->capture_default_str();
  cv->add_option("--jobs", cvc.threads, "Runs in flight")->capture_default_str();
  EmbeddingFlags cv_emb;
  cv_emb.add(cv);
  add_seed(cv);

  ExperimentConfig bc;
  std::string fractions = "0.001,0.01,0.1", classifiers = "logistic,svm";
  std::vector<std::string> bench_features = {"mu;mu-sigma;nbsvm;ngrams:1;ngrams:1,2;ngrams:1,2,3"};
  auto* bench = app.add_subcommand("bench", "Fraction x features x classifier matrix with F-score and timing tables");
  bench->add_option("--dataset", bc.dataset)->required()->check(CLI::ExistingFile);
  bench->add_option("--format", format)->capture_default_str();
  bench->add_option("--limit", limit);
  bench->add_option("--fractions", fractions)->capture_default_str();
  bench->add_option("--features", bench_features, "Feature sets separated by ';' or repeated");
  bench->add_option("--classifiers", classifiers)->capture_default_str();
  bench->add_option("--repetitions", bc.repetitions)->capture_default_str();
  bench->add_option("--folds", bc.folds)->capture_default_str();
  bench->add_option("--jobs", bc.jobs, "Matrix cells in flight")->capture_default_str();
  bench->add_option("--output", bc.output_dir)->required();
  EmbeddingFlags bench_emb;
  bench_emb.add(bench);
  add_seed(bench);

  // relabel serve / relabel-serve share one option set.
  std::string corpus_path, audit_path, host = "127.0.0.1", static_dir, topics_k, lexicon_path, truth_path;
  std::string relabel_features = "ngrams:1,2";
  int port = 8080;
  std::size_t iterations = 4;
  bool include_fn = false;
  auto add_relabel = [&](CLI::App* cmd, bool serve) {
    cmd->add_option("--corpus", corpus_path)->required()->check(CLI::ExistingFile);
    cmd->add_option("--format", format)->capture_default_str();
    cmd->add_option("--features", relabel_features, "mu | mu-sigma | ngrams:1,2 ...")->capture_default_str();
    cmd->add_option("--classifier", classifier)->capture_default_str();
    cmd->add_flag("--include-false-negatives", include_fn);
    add_seed(cmd);
    if (serve) {
      cmd->add_option("--port", port)->capture_default_str();
      cmd->add_option("--host", host)->capture_default_str();
      cmd->add_option("--audit", audit_path, "Append-only audit log; replayed on start");
      cmd->add_option("--static-dir", static_dir, "Review UI bundle");
      cmd->add_option("--topics", topics_k, "Fit an LDA model with this many topics for annotations");
      cmd->add_option("--lexicon", lexicon_path, "Lexicon JSONL for hit highlighting")->check(CLI::ExistingFile);
    } else {
      cmd->add_option("--truth", truth_path, "JSONL with hidden labels")->required()->check(CLI::ExistingFile);
      cmd->add_option("--iterations", iterations)->capture_default_str();
      cmd->add_option("--audit", audit_path);
    }
  };
  auto* rserve_flat = app.add_subcommand("relabel-serve", "Serve the relabeling loop over HTTP");
  add_relabel(rserve_flat, true);
  auto* relabel = app.add_subcommand("relabel", "Relabeling loop");
  relabel->require_subcommand(1);
  auto* rserve = relabel->add_subcommand("serve", "Serve the relabeling loop over HTTP");
  add_relabel(rserve, true);
  auto* rsim = relabel->add_subcommand("simulate", "Run the loop with an oracle reading hidden labels");
  add_relabel(rsim, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*ingest) {
      auto fmt = detect_format(in_path, format);
      auto r = fmt == "sentiment140" ? ingest_sentiment140(in_path, limit) : ingest_jsonl(in_path);
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
      write_jsonl(r.corpus, out_path);
      std::cout << "tweets\t" << r.corpus.size() << "\nskipped\t" << r.skipped << "\npositive\t"
                << r.corpus.count(Label::Positive) << "\nnegative\t" << r.corpus.count(Label::Negative) << '\n';
    } else if (*prep) {
      auto corpus = load_corpus(in_path, format);
      std::ofstream out(out_path);
      if (!out) throw DataError("cannot write " + out_path);
      for (const auto& t : corpus.tweets()) out << nlohmann::json{{"id", t.id}, {"tokens", t.tokens}}.dump() << '\n';
    } else if (*langf) {
      LanguageIdentifier id = LanguageIdentifier::builtin();
      for (const auto& p : profiles) id.add(LanguageProfile::load(p));
      auto corpus = load_corpus(in_path, format);
      Corpus kept;
      for (const auto& t : corpus.tweets()) {
        if (t.raw_text.empty()) continue;
        auto g = id.detect(t.raw_text);
        if (g.lang_code == lang && g.score >= min_score) kept.add(t);
      }
      write_jsonl(kept, out_path);
      std::cout << "kept\t" << kept.size() << "\ndropped\t" << corpus.size() - kept.size() << '\n';
    } else if (*dd) {
      auto corpus = load_corpus(in_path, format);
      auto out = dedup(corpus);
      write_jsonl(out, out_path);
      std::cout << "kept\t" << out.size() << "\ndropped\t" << corpus.size() - out.size() << '\n';
    } else if (*te) {
      auto corpus = load_corpus(in_path, format);
      emb.cfg.seed = seed;
      auto model = train_skipgram(corpus, emb.cfg);
      save_model(model, out_path);
      std::cout << "vocabulary\t" << model.size() << "\ndim\t" << model.dim() << '\n';
    } else if (*sim) {
      auto model = load_model(model_path);
      for (const auto& [word, c] : most_similar(model, split_list<std::string>(query, identity), k)) {
        std::printf("%s\t%.4f\n", word.c_str(), c);
      }
    } else if (*cl) {
      auto model = load_model(model_path);
      dp.seed = seed;
      auto words = select_medium_frequency(model.vocab(), cluster_words);
      auto clusters = cluster_dpgmm(model, words, dp);
      write_clusters_jsonl(clusters, out_path);
      std::cout << "words\t" << words.size() << "\neffective_components\t" << clusters.effective_components()
                << "\niterations\t" << clusters.iterations << "\nconverged\t" << (clusters.converged ? "yes" : "no")
                << '\n';
    } else if (*ld) {
      auto corpus = load_corpus(in_path, format);
      auto grid = split_list<std::size_t>(ks, to_size);
      if (large) {
        for (auto extra : {35, 45, 50}) {
          if (std::find(grid.begin(), grid.end(), static_cast<std::size_t>(extra)) == grid.end()) grid.push_back(extra);
        }
      }
      if (grid.empty()) throw InvalidArgument("--k needs at least one topic count");
      lda.seed = seed;
      if (ld->count("--alpha")) lda.alpha = lda_alpha;
      auto models = sweep_topic_counts(corpus, grid, lda, lda_threads);
      write_topic_report(models, top, out_path);
      if (!annotations.empty()) write_annotations_jsonl(models.front(), annotations);
      if (!search_term.empty()) {
        auto open = search_term.rfind('(');
        if (open == std::string::npos || search_term.back() != ')') throw InvalidArgument("--search expects word(k)");
        auto topic = static_cast<std::uint32_t>(std::stoul(search_term.substr(open + 1)));
        for (const auto& id : search(models.front(), search_term.substr(0, open), topic)) std::cout << id << '\n';
      }
    } else if (*lx) {
      auto corpus = load_corpus(in_path, format);
      Lexicon lexicon;
      if (!lexicon_in.empty()) {
        lexicon = Lexicon::load_jsonl(lexicon_in);
      } else if (!seeds.empty()) {
        lexicon = Lexicon::from_seeds(split_list<std::string>(seeds, identity));
      } else {
        throw InvalidArgument("give --seeds or --lexicon");
      }
      auto matched = match_tweets(corpus, lexicon);
      auto cands = score_candidates(corpus, matched, lexicon, candidates);
      std::cout << "matched\t" << matched.size() << '\n';
      for (const auto& c : cands) std::printf("%s\t%.4f\t%zu\t%zu\n", c.term.c_str(), c.score, c.matched_count, c.unmatched_count);
      if (!out_path.empty()) {
        ExpandResult r;
        if (auto_threshold) {
          r = expand_round(lexicon, auto_accept(cands, *auto_threshold), cands, AcceptedBy::Auto);
        } else {
          r = expand_round(lexicon, split_list<std::string>(accept, identity), cands, AcceptedBy::Human);
        }
        for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
        r.lexicon.save_jsonl(out_path);
        std::cout << "lexicon_size\t" << r.lexicon.size() << "\nround\t" << r.lexicon.round() << '\n';
      }
    } else if (*cv) {
      auto corpus = load_corpus(in_path, format, limit);
      if (fraction) corpus = stratified_subsample(corpus, *fraction, seed);
      auto features = parse_feature_list(feature_items);
      if (features.size() != 1) throw InvalidArgument("cv takes exactly one feature set");
      cvc.seed = seed;
      cvc.embedding = cv_emb.cfg;
      cvc.dataset_label = in_path;
      auto report = cross_validate(corpus, features[0], ClassifierSpec::parse(classifier), cvc);
      write_cv_report(report, out_path);
      std::cout << format_cv_summary(report);
    } else if (*bench) {
      bc.format = detect_format(bc.dataset, format);
      bc.limit = limit;
      bc.fractions = split_list<double>(fractions, to_double);
      bc.features = parse_feature_list(bench_features);
      for (const auto& c : split_list<std::string>(classifiers, identity)) bc.classifiers.push_back(ClassifierSpec::parse(c));
      bc.seed = seed;
      bc.embedding = bench_emb.cfg;
      auto r = run_bench(bc);
      std::cout << to_aligned(r.f_scores) << '\n' << to_aligned(r.timing) << '\n';
      if (!r.embedding_time.rows.empty()) std::cout << to_aligned(r.embedding_time);
      for (const auto& cell : r.cells) {
        if (!cell.report) std::cerr << "ERR " << fraction_label(cell.fraction) << ' ' << cell.features << ' ' << cell.classifier << ": " << cell.error << '\n';
      }
    } else if (*rserve_flat || *rserve) {
      auto corpus = load_corpus(corpus_path, format);
      RelabelConfig cfg;
      cfg.features = FeatureSpec::parse(relabel_features);
      cfg.classifier = balanced_classifier(ClassifierSpec::parse(classifier).kind);
      cfg.seed = seed;
      cfg.include_false_negatives = include_fn;
      AuditLog log;
      if (!audit_path.empty()) {
        log = AuditLog::open(audit_path);
        corpus = replay(corpus, log.entries());
      }
      auto state = RelabelState::create(std::move(corpus), cfg, std::move(log));
      run_iteration(state);
      ServiceOptions opts;
      opts.static_dir = static_dir;
      if (!topics_k.empty()) {
        LdaConfig tl;
        tl.topics = std::stoul(topics_k);
        tl.seed = seed;
        tl.sweeps = 200;
        opts.topics = fit_lda(state.corpus, tl);
      }
      if (!lexicon_path.empty()) opts.lexicon = Lexicon::load_jsonl(lexicon_path);
      std::cerr << "iteration " << state.iteration << ": " << state.queue.size() << " items queued\n";
      RelabelService service(std::move(state), std::move(opts));
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "serving on http://" << host << ':' << port << "/\n";
      service.listen(host, port);
      g_service = nullptr;
    } else if (*rsim) {
      auto corpus = load_corpus(corpus_path, format);
      auto truth_corpus = load_corpus(truth_path, "jsonl");
      std::map<std::string, Label> truth;
      for (const auto& t : truth_corpus.tweets()) truth[t.id] = t.label;
      RelabelConfig cfg;
      cfg.features = FeatureSpec::parse(relabel_features);
      cfg.classifier = balanced_classifier(ClassifierSpec::parse(classifier).kind);
      cfg.seed = seed;
      cfg.include_false_negatives = include_fn;
      auto state = RelabelState::create(std::move(corpus), cfg,
                                        audit_path.empty() ? AuditLog{} : AuditLog::open(audit_path));
      std::cout << "iteration\ttp\tfp\tqueued\taccepted\ttotal_positives\n";
      for (const auto& s : simulate(state, truth, iterations)) {
        std::cout << s.iteration << '\t' << s.tp << '\t' << s.fp << '\t' << s.queued << '\t' << s.accepted << '\t'
                  << s.total_positives << '\n';
      }
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad number: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
