#include "tweetmine/relabel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <set>

#include "json.hpp"
#include "tweetmine/error.hpp"

namespace tweetmine {

using nlohmann::json;

std::string_view to_string(Decider decider) { return decider == Decider::Human ? "human" : "oracle-sim"; }

Decider parse_decider(std::string_view text) {
  if (text == "human") return Decider::Human;
  if (text == "oracle-sim") return Decider::OracleSim;
  throw InvalidArgument("unknown decider '" + std::string(text) + "'");
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

std::string audit_to_json(const AuditEntry& e) {
  json j{{"seq", e.seq},
         {"iteration", e.iteration},
         {"tweet_id", e.tweet_id},
         {"old_label", to_string(e.old_label)},
         {"new_label", to_string(e.new_label)},
         {"decider", to_string(e.decider)},
         {"timestamp", e.timestamp},
         {"applied", e.applied}};
  if (!e.reason.empty()) j["reason"] = e.reason;
  return j.dump();
}

AuditEntry audit_from_json(std::string_view line) {
  try {
    auto j = json::parse(line);
    AuditEntry e;
    e.seq = j.at("seq").get<std::size_t>();
    e.iteration = j.at("iteration").get<std::size_t>();
    e.tweet_id = j.at("tweet_id").get<std::string>();
    e.old_label = parse_label(j.at("old_label").get<std::string>());
    e.new_label = parse_label(j.at("new_label").get<std::string>());
    e.decider = parse_decider(j.at("decider").get<std::string>());
    e.timestamp = j.value("timestamp", "");
    e.applied = j.at("applied").get<bool>();
    e.reason = j.value("reason", "");
    return e;
  } catch (const json::exception& ex) {
    throw FormatError(std::string("bad audit record: ") + ex.what());
  } catch (const InvalidArgument& ex) {
    throw FormatError(std::string("bad audit record: ") + ex.what());
  }
}

std::vector<AuditEntry> AuditLog::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  std::vector<AuditEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(audit_from_json(line));
    } catch (const FormatError& e) {
      throw FormatError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

AuditLog AuditLog::open(const std::string& path) {
  AuditLog log;
  if (std::ifstream(path).good()) log.entries_ = read(path);
  log.sink_ = std::make_shared<std::ofstream>(path, std::ios::app);
  if (!*log.sink_) throw DataError("cannot append to " + path);
  return log;
}

void AuditLog::append(AuditEntry entry) {
  entry.seq = entries_.size();
  if (sink_) {
    *sink_ << audit_to_json(entry) << '\n';
    sink_->flush();
  }
  entries_.push_back(std::move(entry));
}

std::vector<ReviewItem> rank_from_scores(const Corpus& corpus, const std::vector<double>& scores,
                                         std::size_t iteration, bool include_false_negatives) {
  if (scores.size() != corpus.size()) throw InvalidArgument("rank: one score per tweet is required");
  std::vector<std::size_t> fps, fns;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (std::isnan(scores[i])) continue;
    const Label l = corpus[i].label;
    if (l == Label::Negative && scores[i] > 0.0) fps.push_back(i);
    if (include_false_negatives && l == Label::Positive && !(scores[i] > 0.0)) fns.push_back(i);
  }
  std::stable_sort(fps.begin(), fps.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });
  std::stable_sort(fns.begin(), fns.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });
  std::vector<ReviewItem> out;
  auto emit = [&](std::size_t i, Label predicted) {
    ReviewItem item;
    item.tweet_id = corpus[i].id;
    item.text = corpus[i].raw_text;
    item.score = scores[i];
    item.current = corpus[i].label;
    item.predicted = predicted;
    item.iteration = iteration;
    out.push_back(std::move(item));
  };
  for (auto i : fps) emit(i, Label::Positive);
  for (auto i : fns) emit(i, Label::Negative);
  return out;
}

std::vector<ReviewItem> rank_false_positives(const LinearModel& model, const FeaturePipeline& pipeline,
                                             const Corpus& corpus, std::size_t iteration,
                                             bool include_false_negatives) {
  std::vector<double> scores(corpus.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].label != Label::Unlabeled) scores[i] = predict(model, pipeline.transform(corpus[i].tokens)).score;
  }
  return rank_from_scores(corpus, scores, iteration, include_false_negatives);
}

ApplyResult apply_decisions(Corpus& corpus, const std::vector<ReviewDecision>& decisions, std::size_t iteration,
                            AuditLog& log, const std::vector<ReviewItem>* queued) {
  std::set<std::string_view> allowed;
  if (queued) {
    for (const auto& item : *queued) allowed.insert(item.tweet_id);
  }
  ApplyResult result;
  for (const auto& d : decisions) {
    AuditEntry e;
    e.iteration = iteration;
    e.tweet_id = d.tweet_id;
    e.new_label = d.new_label;
    e.decider = d.decider;
    e.timestamp = d.timestamp.empty() ? utc_timestamp() : d.timestamp;
    auto idx = corpus.index_of(d.tweet_id);
    if (d.new_label == Label::Unlabeled) {
      e.reason = "new label must be positive or negative";
    } else if (!idx) {
      e.reason = "unknown tweet id";
    } else if (queued && !allowed.count(d.tweet_id)) {
      e.reason = "tweet is not in the current queue";
    }
    if (idx) e.old_label = corpus[*idx].label;
    if (!e.reason.empty()) {
      ++result.rejected;
      log.append(std::move(e));
      continue;
    }
    corpus.set_label(*idx, d.new_label);
    e.applied = true;
    ++result.applied;
    if (d.new_label == Label::Positive && e.old_label != Label::Positive) ++result.accepted;
    log.append(std::move(e));
  }
  return result;
}

Corpus replay(const Corpus& initial, const std::vector<AuditEntry>& log) {
  Corpus out = initial;
  for (const auto& e : log) {
    if (!e.applied) continue;
    auto idx = out.index_of(e.tweet_id);
    if (!idx) throw DataError("audit log references unknown tweet " + e.tweet_id);
    out.set_label(*idx, e.new_label);
  }
  return out;
}

ClassifierSpec balanced_classifier(ClassifierSpec::Kind kind) {
  ClassifierSpec spec;
  spec.kind = kind;
  spec.logistic.balanced = true;
  spec.svm.balanced = true;
  return spec;
}

IterationResult compute_iteration(const Corpus& corpus, const RelabelConfig& config, std::size_t iteration,
                                  const EmbeddingModel* embedding) {
  std::vector<std::size_t> labeled;
  std::vector<int> y;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].label == Label::Unlabeled) continue;
    labeled.push_back(i);
    y.push_back(corpus[i].label == Label::Positive ? 1 : -1);
  }
  const auto positives = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
  if (positives == 0 || positives == y.size()) throw DataError("relabel: training data has a single class");

  std::vector<double> scores(corpus.size(), std::numeric_limits<double>::quiet_NaN());
  auto fit_and_score = [&](const std::vector<std::size_t>& train, const std::vector<std::size_t>& score,
                           std::uint64_t run) {
    std::vector<const std::vector<std::string>*> docs;
    std::vector<int> ty;
    for (auto k : train) {
      docs.push_back(&corpus[labeled[k]].tokens);
      ty.push_back(y[k]);
    }
    Rows rows;
    auto pipeline = FeaturePipeline::fit(config.features, docs, ty, embedding, rows);
    ClassifierSpec cls = config.classifier;
    cls.svm.seed ^= config.seed;
    auto model = train_classifier(cls, config.features, rows, ty, pipeline.dim(), run);
    for (auto k : score) scores[labeled[k]] = predict(model, pipeline.transform(corpus[labeled[k]].tokens)).score;
  };

  std::vector<std::size_t> all(labeled.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  const std::size_t negatives = y.size() - positives;
  if (config.folds >= 2 && positives >= config.folds && negatives >= config.folds) {
    auto folds = stratified_folds(y, config.folds, config.seed + iteration);
    for (std::size_t f = 0; f < folds.size(); ++f) {
      std::vector<char> held(labeled.size(), 0);
      for (auto k : folds[f]) held[k] = 1;
      std::vector<std::size_t> train;
      for (std::size_t k = 0; k < labeled.size(); ++k) {
        if (!held[k]) train.push_back(k);
      }
      fit_and_score(train, folds[f], f);
    }
  } else {
    fit_and_score(all, all, 0);
  }

  IterationResult r;
  r.queue = rank_from_scores(corpus, scores, iteration, config.include_false_negatives);
  r.stats.iteration = iteration;
  for (std::size_t k = 0; k < labeled.size(); ++k) {
    if (!(scores[labeled[k]] > 0.0)) continue;
    (y[k] == 1 ? r.stats.tp : r.stats.fp) += 1;
  }
  r.stats.queued = r.queue.size();
  r.stats.total_positives = positives;
  return r;
}

RelabelState RelabelState::create(Corpus corpus, RelabelConfig config, AuditLog log) {
  RelabelState s;
  s.corpus = std::move(corpus);
  s.config = std::move(config);
  s.log = std::move(log);
  if (s.config.features.uses_embedding()) {
    SkipGramConfig ecfg = s.config.embedding;
    ecfg.seed ^= s.config.seed;
    s.embedding = std::make_shared<const EmbeddingModel>(train_skipgram(s.corpus, ecfg));
  }
  for (const auto& e : s.log.entries()) s.iteration = std::max(s.iteration, e.iteration);
  return s;
}

IterationResult run_iteration(RelabelState& state) {
  auto r = compute_iteration(state.corpus, state.config, state.iteration + 1, state.embedding.get());
  ++state.iteration;
  state.queue = r.queue;
  state.history.push_back(r.stats);
  return r;
}

ApplyResult decide(RelabelState& state, const std::vector<ReviewDecision>& decisions) {
  auto res = apply_decisions(state.corpus, decisions, state.iteration, state.log, &state.queue);
  if (!state.history.empty()) {
    auto& last = state.history.back();
    last.accepted += res.accepted;
    last.total_positives = state.corpus.count(Label::Positive);
  }
  return res;
}

std::vector<ReviewDecision> oracle_decisions(const std::vector<ReviewItem>& queue,
                                             const std::map<std::string, Label>& truth) {
  std::vector<ReviewDecision> out;
  for (const auto& item : queue) {
    auto it = truth.find(item.tweet_id);
    const Label truth_label = it == truth.end() ? item.current : it->second;
    out.push_back({item.tweet_id, truth_label == Label::Positive ? Label::Positive : Label::Negative,
                   Decider::OracleSim, ""});
  }
  return out;
}

std::vector<IterationStats> simulate(RelabelState& state, const std::map<std::string, Label>& truth,
                                     std::size_t max_iterations) {
  for (std::size_t i = 0; i < max_iterations; ++i) {
    auto r = run_iteration(state);
    if (r.queue.empty()) break;
    if (decide(state, oracle_decisions(r.queue, truth)).accepted == 0) break;
  }
  return state.history;
}

}  // namespace tweetmine
