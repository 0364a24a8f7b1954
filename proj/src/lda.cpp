#include "tweetmine/lda.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <random>
#include <thread>

#include "json.hpp"
#include "tweetmine/error.hpp"

namespace tweetmine {

namespace {

// 53 random bits as a double in [0, 1); same stream on every platform.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Counts {
  std::vector<std::vector<std::uint32_t>> dk;  // D x K
  std::vector<std::vector<std::uint32_t>> kw;  // K x V
  std::vector<std::uint32_t> k;

  Counts(std::size_t D, std::size_t K, std::size_t V)
      : dk(D, std::vector<std::uint32_t>(K, 0)), kw(K, std::vector<std::uint32_t>(V, 0)), k(K, 0) {}

  void add(std::size_t d, std::uint32_t w, std::uint32_t t) {
    ++dk[d][t];
    ++kw[t][w];
    ++k[t];
  }
  void remove(std::size_t d, std::uint32_t w, std::uint32_t t) {
    --dk[d][t];
    --kw[t][w];
    --k[t];
  }
  bool operator==(const Counts&) const = default;
};

Counts recount(const TopicModel& m) {
  Counts c(m.D(), m.K, m.V());
  for (std::size_t d = 0; d < m.D(); ++d) {
    for (std::size_t i = 0; i < m.words[d].size(); ++i) c.add(d, m.words[d][i], m.z[d][i]);
  }
  return c;
}

void accumulate_estimates(const TopicModel& m, const Counts& c, std::vector<std::vector<double>>& phi,
                          std::vector<std::vector<double>>& theta) {
  const double Vb = static_cast<double>(m.V()) * m.beta;
  const double Ka = static_cast<double>(m.K) * m.alpha;
  for (std::size_t t = 0; t < m.K; ++t) {
    const double denom = c.k[t] + Vb;
    for (std::size_t w = 0; w < m.V(); ++w) phi[t][w] += (c.kw[t][w] + m.beta) / denom;
  }
  for (std::size_t d = 0; d < m.D(); ++d) {
    const double denom = static_cast<double>(m.words[d].size()) + Ka;
    for (std::size_t t = 0; t < m.K; ++t) theta[d][t] += (c.dk[d][t] + m.alpha) / denom;
  }
}

}  // namespace

std::optional<std::size_t> TopicModel::doc_index(std::string_view id) const {
  for (std::size_t d = 0; d < doc_ids.size(); ++d) {
    if (doc_ids[d] == id) return d;
  }
  return std::nullopt;
}

double gibbs_weight(double n_dk, double n_kw, double n_k, std::size_t V, double alpha, double beta) {
  return (n_dk + alpha) * (n_kw + beta) / (n_k + static_cast<double>(V) * beta);
}

TopicModel fit_lda(const std::vector<std::vector<std::string>>& docs, const std::vector<std::string>& doc_ids,
                   const LdaConfig& config) {
  if (docs.size() != doc_ids.size()) throw InvalidArgument("fit_lda: documents and ids differ in length");
  if (config.topics == 0) throw InvalidArgument("fit_lda: topic count must be positive");
  if (config.beta <= 0.0) throw InvalidArgument("fit_lda: beta must be positive");
  if (config.sweeps < 1) throw InvalidArgument("fit_lda: sweeps must be positive");

  TopicModel m;
  m.K = config.topics;
  m.alpha = config.alpha.value_or(50.0 / static_cast<double>(m.K));
  if (m.alpha <= 0.0) throw InvalidArgument("fit_lda: alpha must be positive");
  m.beta = config.beta;
  m.seed = config.seed;
  m.doc_ids = doc_ids;

  std::unordered_map<std::string, std::uint32_t> index;
  std::size_t tokens = 0;
  m.words.reserve(docs.size());
  for (const auto& doc : docs) {
    auto& ids = m.words.emplace_back();
    for (const auto& tok : doc) {
      auto [it, fresh] = index.emplace(tok, static_cast<std::uint32_t>(m.vocab.size()));
      if (fresh) m.vocab.push_back(tok);
      ids.push_back(it->second);
    }
    tokens += doc.size();
  }
  if (tokens == 0) throw DataError("fit_lda: corpus has no tokens");
  if (m.K > tokens) {
    throw InvalidArgument("fit_lda: " + std::to_string(m.K) + " topics exceed " + std::to_string(tokens) + " tokens");
  }

  const std::size_t K = m.K, V = m.V(), D = m.D();
  std::mt19937_64 rng(config.seed);
  Counts c(D, K, V);
  m.z.resize(D);
  for (std::size_t d = 0; d < D; ++d) {
    m.z[d].resize(m.words[d].size());
    for (std::size_t i = 0; i < m.words[d].size(); ++i) {
      auto t = static_cast<std::uint32_t>(rng() % K);
      m.z[d][i] = t;
      c.add(d, m.words[d][i], t);
    }
  }

  const int averaged = std::max(1, std::min(config.average_last, config.sweeps));
  m.phi.assign(K, std::vector<double>(V, 0.0));
  m.theta.assign(D, std::vector<double>(K, 0.0));
  std::vector<double> cumulative(K);
  const double Vb = static_cast<double>(V) * m.beta;

  for (int sweep = 0; sweep < config.sweeps; ++sweep) {
    for (std::size_t d = 0; d < D; ++d) {
      auto& zd = m.z[d];
      const auto& wd = m.words[d];
      auto& ndk = c.dk[d];
      for (std::size_t i = 0; i < wd.size(); ++i) {
        const std::uint32_t w = wd[i];
        c.remove(d, w, zd[i]);
        double total = 0.0;
        for (std::size_t t = 0; t < K; ++t) {
          total += (ndk[t] + m.alpha) * (c.kw[t][w] + m.beta) / (c.k[t] + Vb);
          cumulative[t] = total;
        }
        const double u = uniform01(rng) * total;
        auto t = static_cast<std::uint32_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                            cumulative.begin());
        if (t >= K) t = static_cast<std::uint32_t>(K - 1);
        zd[i] = t;
        c.add(d, w, t);
      }
    }
    if (config.verify_counts && !(recount(m) == c)) {
      throw Error("fit_lda: count caches diverged from assignments after sweep " + std::to_string(sweep));
    }
    if (sweep >= config.sweeps - averaged) accumulate_estimates(m, c, m.phi, m.theta);
  }

  for (auto& row : m.phi) {
    for (auto& x : row) x /= averaged;
  }
  for (auto& row : m.theta) {
    for (auto& x : row) x /= averaged;
  }
  return m;
}

TopicModel fit_lda(const Corpus& corpus, const LdaConfig& config) {
  std::vector<std::vector<std::string>> docs;
  std::vector<std::string> ids;
  docs.reserve(corpus.size());
  ids.reserve(corpus.size());
  for (const auto& t : corpus.tweets()) {
    docs.push_back(t.tokens);
    ids.push_back(t.id);
  }
  return fit_lda(docs, ids, config);
}

std::vector<std::size_t> default_topic_counts(bool large_preset) {
  std::vector<std::size_t> ks = {5, 10, 15, 20, 25};
  if (large_preset) ks.insert(ks.end(), {35, 45, 50});
  return ks;
}

std::vector<TopicModel> sweep_topic_counts(const Corpus& corpus, const std::vector<std::size_t>& topic_counts,
                                           const LdaConfig& base, unsigned threads) {
  std::vector<std::vector<std::string>> docs;
  std::vector<std::string> ids;
  for (const auto& t : corpus.tweets()) {
    docs.push_back(t.tokens);
    ids.push_back(t.id);
  }
  std::vector<TopicModel> out(topic_counts.size());
  std::vector<std::exception_ptr> errors(topic_counts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < topic_counts.size();) {
      try {
        LdaConfig cfg = base;
        cfg.topics = topic_counts[j];
        if (!base.alpha) cfg.alpha.reset();
        out[j] = fit_lda(docs, ids, cfg);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(topic_counts.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<std::pair<std::string, double>> top_words(const TopicModel& model, std::size_t topic, std::size_t k) {
  if (topic >= model.K) {
    throw InvalidArgument("top_words: topic " + std::to_string(topic) + " out of range for K=" +
                          std::to_string(model.K));
  }
  const auto& row = model.phi[topic];
  std::vector<std::uint32_t> order(model.V());
  for (std::uint32_t w = 0; w < order.size(); ++w) order[w] = w;
  k = std::min(k, order.size());
  auto better = [&](std::uint32_t a, std::uint32_t b) {
    if (row[a] != row[b]) return row[a] > row[b];
    return model.vocab[a] < model.vocab[b];
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), better);
  std::vector<std::pair<std::string, double>> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.emplace_back(model.vocab[order[i]], row[order[i]]);
  return out;
}

TopicAnnotation annotate(const TopicModel& model, std::string_view tweet_id) {
  auto d = model.doc_index(tweet_id);
  if (!d) throw InvalidArgument("annotate: unknown tweet id " + std::string(tweet_id));
  TopicAnnotation a{std::string(tweet_id), {}};
  for (std::size_t i = 0; i < model.words[*d].size(); ++i) {
    a.tokens.emplace_back(model.vocab[model.words[*d][i]], model.z[*d][i]);
  }
  return a;
}

std::string render(const TopicAnnotation& annotation) {
  std::string out;
  for (const auto& [word, topic] : annotation.tokens) {
    if (!out.empty()) out += ' ';
    out += word + "(" + std::to_string(topic) + ")";
  }
  return out;
}

std::vector<std::string> search(const TopicModel& model, std::string_view word, std::uint32_t topic) {
  std::vector<std::string> ids;
  auto it = std::find(model.vocab.begin(), model.vocab.end(), word);
  if (it == model.vocab.end()) return ids;
  const auto w = static_cast<std::uint32_t>(it - model.vocab.begin());
  for (std::size_t d = 0; d < model.D(); ++d) {
    for (std::size_t i = 0; i < model.words[d].size(); ++i) {
      if (model.words[d][i] == w && model.z[d][i] == topic) {
        ids.push_back(model.doc_ids[d]);
        break;
      }
    }
  }
  return ids;
}

void write_topic_report(const std::vector<TopicModel>& models, std::size_t top_k, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "K\ttopic\trank\tword\tprobability\n";
  out << std::setprecision(6) << std::fixed;
  for (const auto& m : models) {
    for (std::size_t t = 0; t < m.K; ++t) {
      std::size_t rank = 1;
      for (const auto& [word, p] : top_words(m, t, top_k)) {
        out << m.K << '\t' << t << '\t' << rank++ << '\t' << word << '\t' << p << '\n';
      }
    }
  }
}

void write_annotations_jsonl(const TopicModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  for (std::size_t d = 0; d < model.D(); ++d) {
    nlohmann::json tokens = nlohmann::json::array();
    for (std::size_t i = 0; i < model.words[d].size(); ++i) {
      tokens.push_back({model.vocab[model.words[d][i]], model.z[d][i]});
    }
    out << nlohmann::json{{"id", model.doc_ids[d]}, {"tokens", tokens}}.dump() << '\n';
  }
}

}  // namespace tweetmine
