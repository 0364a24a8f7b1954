#include "tweetmine/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "tweetmine/error.hpp"
#include "tweetmine/preprocess.hpp"

namespace tweetmine {

Sentences corpus_sentences(const Corpus& corpus) {
  Sentences out;
  out.reserve(corpus.size());
  for (const auto& t : corpus.tweets()) {
    out.push_back(t.tokens.empty() ? preprocess(t.raw_text) : t.tokens);
  }
  return out;
}

Vocabulary Vocabulary::from_entries(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.word < b.word;
  });
  Vocabulary v;
  v.entries_ = std::move(entries);
  for (std::size_t i = 0; i < v.entries_.size(); ++i) {
    v.index_.emplace(v.entries_[i].word, i);
    v.total_ += v.entries_[i].count;
  }
  return v;
}

Vocabulary Vocabulary::build(const Sentences& sentences, std::uint64_t min_count) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& s : sentences) {
    for (const auto& w : s) ++counts[w];
  }
  if (counts.empty()) throw DataError("build_vocab: corpus has no tokens");
  std::vector<Entry> entries;
  for (auto& [w, c] : counts) {
    if (c >= min_count) entries.push_back({w, c});
  }
  return from_entries(std::move(entries));
}

Vocabulary Vocabulary::build(const Corpus& corpus, std::uint64_t min_count) {
  return build(corpus_sentences(corpus), min_count);
}

std::optional<std::size_t> Vocabulary::index(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<HuffmanCode> build_huffman(std::span<const std::uint64_t> counts) {
  const std::size_t v = counts.size();
  if (v < 2) throw InvalidArgument("build_huffman: need at least two symbols");
  // Leaves 0..v-1 sorted by descending count; inner node i lives at v + i.
  std::vector<std::size_t> order(v);
  for (std::size_t i = 0; i < v; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });

  std::vector<std::uint64_t> weight(2 * v - 1);
  std::vector<std::size_t> parent(2 * v - 1, 0);
  std::vector<std::uint8_t> branch(2 * v - 1, 0);
  for (std::size_t i = 0; i < v; ++i) weight[i] = counts[order[i]];

  // Two-queue merge: leaves consumed from the tail, inner nodes in creation order.
  std::ptrdiff_t leaf = static_cast<std::ptrdiff_t>(v) - 1;
  std::size_t inner = v;
  std::size_t next_new = v;
  auto pop_min = [&]() {
    const bool leaf_ok = leaf >= 0;
    const bool inner_ok = inner < next_new;
    std::size_t pick;
    if (leaf_ok && (!inner_ok || weight[static_cast<std::size_t>(leaf)] < weight[inner])) {
      pick = static_cast<std::size_t>(leaf--);
    } else {
      pick = inner++;
    }
    return pick;
  };
  for (std::size_t k = 0; k + 1 < v; ++k) {
    std::size_t a = pop_min();
    std::size_t b = pop_min();
    weight[next_new] = weight[a] + weight[b];
    parent[a] = next_new;
    parent[b] = next_new;
    branch[b] = 1;
    ++next_new;
  }

  const std::size_t root = 2 * v - 2;
  std::vector<HuffmanCode> codes(v);
  for (std::size_t i = 0; i < v; ++i) {
    HuffmanCode hc;
    std::size_t node = i;
    while (node != root) {
      hc.code.push_back(branch[node]);
      node = parent[node];
      hc.points.push_back(static_cast<std::uint32_t>(node - v));
    }
    std::reverse(hc.code.begin(), hc.code.end());
    std::reverse(hc.points.begin(), hc.points.end());
    codes[order[i]] = std::move(hc);
  }
  return codes;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

double hs_probability(const std::vector<HuffmanCode>& codes, std::span<const float> inner,
                      std::span<const float> input, std::size_t target) {
  const std::size_t d = input.size();
  const auto& hc = codes.at(target);
  double p = 1.0;
  for (std::size_t j = 0; j < hc.points.size(); ++j) {
    double dot = 0.0;
    const float* node = inner.data() + static_cast<std::size_t>(hc.points[j]) * d;
    for (std::size_t k = 0; k < d; ++k) dot += static_cast<double>(input[k]) * node[k];
    const double s = sigmoid(dot);
    p *= hc.code[j] ? 1.0 - s : s;
  }
  return p;
}

std::vector<std::pair<std::size_t, std::size_t>> skipgram_pairs(std::size_t length, int window) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const auto w = static_cast<std::size_t>(std::max(window, 0));
  for (std::size_t c = 0; c < length; ++c) {
    const std::size_t lo = c >= w ? c - w : 0;
    const std::size_t hi = std::min(length - 1, c + w);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (j != c) out.emplace_back(c, j);
    }
  }
  return out;
}

double discard_probability(double freq, double t) {
  if (freq <= 0.0 || t <= 0.0) return 0.0;
  return std::max(0.0, 1.0 - std::sqrt(t / freq));
}

EmbeddingModel::EmbeddingModel(Vocabulary vocab, std::size_t dim, std::vector<float> vectors,
                               SkipGramConfig config)
    : vocab_(std::move(vocab)), dim_(dim), vectors_(std::move(vectors)), config_(config) {
  config_.dim = dim;
  if (dim == 0) throw InvalidArgument("embedding dimension must be >= 1");
  if (vectors_.size() != vocab_.size() * dim_) {
    throw InvalidArgument("embedding matrix does not match vocabulary size x dimension");
  }
}

std::optional<std::span<const float>> EmbeddingModel::vector(std::string_view word) const {
  auto i = vocab_.index(word);
  if (!i) return std::nullopt;
  return row(*i);
}

namespace {

// Parameter access for the training kernel. The parallel path reads and writes
// through relaxed atomic_ref so concurrent updates are well defined.
template <bool Atomic>
struct Cell {
  static float load(float& x) {
    if constexpr (Atomic) {
      return std::atomic_ref<float>(x).load(std::memory_order_relaxed);
    } else {
      return x;
    }
  }
  static void add(float& x, float delta) {
    if constexpr (Atomic) {
      std::atomic_ref<float> r(x);
      r.store(r.load(std::memory_order_relaxed) + delta, std::memory_order_relaxed);
    } else {
      x += delta;
    }
  }
};

struct TrainState {
  const SkipGramConfig& cfg;
  const std::vector<HuffmanCode>& codes;
  const std::vector<double>& keep_prob;
  std::vector<float>& syn0;
  std::vector<float>& syn1;
  std::uint64_t total_steps;  // epochs * retained-vocab token count
  std::atomic<std::uint64_t> processed{0};
};

template <bool Atomic>
void train_shard(TrainState& st, const std::vector<std::vector<std::uint32_t>>& encoded,
                 std::size_t begin, std::size_t end, std::uint64_t seed) {
  using C = Cell<Atomic>;
  const std::size_t d = st.cfg.dim;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<float> grad(d);
  std::vector<float> in(d);
  std::vector<std::uint32_t> kept;
  const double start = st.cfg.learning_rate;

  for (int epoch = 0; epoch < st.cfg.epochs; ++epoch) {
    for (std::size_t s = begin; s < end; ++s) {
      const auto& sent = encoded[s];
      kept.clear();
      for (auto w : sent) {
        if (st.keep_prob[w] >= 1.0 || unif(rng) < st.keep_prob[w]) kept.push_back(w);
      }
      const std::uint64_t done = st.processed.fetch_add(sent.size(), std::memory_order_relaxed);
      double alpha = start * (1.0 - static_cast<double>(done) / static_cast<double>(st.total_steps + 1));
      alpha = std::max(alpha, start * 1e-4);
      if (kept.size() < 2) continue;

      for (const auto& [c, j] : skipgram_pairs(kept.size(), st.cfg.window)) {
        float* x = st.syn0.data() + static_cast<std::size_t>(kept[c]) * d;
        for (std::size_t k = 0; k < d; ++k) in[k] = C::load(x[k]);
        std::fill(grad.begin(), grad.end(), 0.0f);
        const auto& hc = st.codes[kept[j]];
        for (std::size_t p = 0; p < hc.points.size(); ++p) {
          float* node = st.syn1.data() + static_cast<std::size_t>(hc.points[p]) * d;
          double dot = 0.0;
          for (std::size_t k = 0; k < d; ++k) dot += static_cast<double>(in[k]) * C::load(node[k]);
          // label = 1 - code; g = (label - sigma) * alpha
          const auto g = static_cast<float>((1.0 - hc.code[p] - sigmoid(dot)) * alpha);
          for (std::size_t k = 0; k < d; ++k) {
            grad[k] += g * C::load(node[k]);
            C::add(node[k], g * in[k]);
          }
        }
        for (std::size_t k = 0; k < d; ++k) C::add(x[k], grad[k]);
      }
    }
  }
}

}  // namespace

EmbeddingModel train_skipgram(const Sentences& sentences, const SkipGramConfig& cfg) {
  if (cfg.dim == 0) throw InvalidArgument("train_skipgram: dim must be >= 1");
  if (cfg.epochs < 1 || cfg.window < 1) throw InvalidArgument("train_skipgram: epochs and window must be >= 1");
  auto vocab = Vocabulary::build(sentences, cfg.min_count);
  if (vocab.size() < 2) throw DataError("train_skipgram: need at least 2 distinct words");
  const std::size_t v = vocab.size();
  const std::size_t d = cfg.dim;

  std::vector<std::uint64_t> counts(v);
  for (std::size_t i = 0; i < v; ++i) counts[i] = vocab[i].count;
  const auto codes = build_huffman(counts);

  std::vector<double> keep(v);
  const auto total = static_cast<double>(vocab.total_tokens());
  for (std::size_t i = 0; i < v; ++i) {
    keep[i] = 1.0 - discard_probability(static_cast<double>(counts[i]) / total, cfg.subsample_t);
  }

  std::vector<std::vector<std::uint32_t>> encoded;
  encoded.reserve(sentences.size());
  for (const auto& s : sentences) {
    std::vector<std::uint32_t> ids;
    ids.reserve(s.size());
    for (const auto& w : s) {
      if (auto i = vocab.index(w)) ids.push_back(static_cast<std::uint32_t>(*i));
    }
    encoded.push_back(std::move(ids));
  }

  std::vector<float> syn0(v * d);
  std::vector<float> syn1((v - 1) * d, 0.0f);
  {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<float> init(-0.5f, 0.5f);
    for (auto& x : syn0) x = init(rng) / static_cast<float>(d);
  }

  TrainState st{cfg, codes, keep, syn0, syn1, vocab.total_tokens() * static_cast<std::uint64_t>(cfg.epochs)};
  if (cfg.threads <= 1) {
    train_shard<false>(st, encoded, 0, encoded.size(), cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  } else {
    const auto n = static_cast<std::size_t>(cfg.threads);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t b = encoded.size() * t / n, e = encoded.size() * (t + 1) / n;
      pool.emplace_back([&, b, e, t] { train_shard<true>(st, encoded, b, e, cfg.seed + 1000003 * (t + 1)); });
    }
    for (auto& th : pool) th.join();
  }
  return EmbeddingModel(std::move(vocab), d, std::move(syn0), cfg);
}

EmbeddingModel train_skipgram(const Corpus& corpus, const SkipGramConfig& config) {
  return train_skipgram(corpus_sentences(corpus), config);
}

double cosine(std::span<const float> a, std::span<const float> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += static_cast<double>(a[k]) * b[k];
    na += static_cast<double>(a[k]) * a[k];
    nb += static_cast<double>(b[k]) * b[k];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

std::vector<std::pair<std::string, double>> most_similar(const EmbeddingModel& model,
                                                         const std::vector<std::string>& query,
                                                         std::size_t k) {
  if (query.empty()) throw InvalidArgument("most_similar: empty query");
  std::vector<std::size_t> ids;
  std::string missing;
  for (const auto& w : query) {
    if (auto i = model.vocab().index(w)) {
      ids.push_back(*i);
    } else {
      missing += (missing.empty() ? "" : ", ") + w;
    }
  }
  if (!missing.empty()) throw InvalidArgument("most_similar: not in vocabulary: " + missing);

  const std::size_t d = model.dim();
  std::vector<float> mean(d, 0.0f);
  for (auto i : ids) {
    auto r = model.row(i);
    for (std::size_t j = 0; j < d; ++j) mean[j] += r[j] / static_cast<float>(ids.size());
  }
  std::vector<std::pair<std::string, double>> scored;
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (std::find(ids.begin(), ids.end(), i) != ids.end()) continue;
    scored.emplace_back(model.vocab()[i].word, cosine(mean, model.row(i)));
  }
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(),
                    [](const auto& a, const auto& b) {
                      if (a.second != b.second) return a.second > b.second;
                      return a.first < b.first;
                    });
  scored.resize(take);
  return scored;
}

std::vector<std::string> select_medium_frequency(const Vocabulary& vocab, std::size_t n) {
  const std::size_t skip = vocab.size() / 100;
  std::vector<std::string> out;
  for (std::size_t i = skip; i < vocab.size() && out.size() < n; ++i) out.push_back(vocab[i].word);
  return out;
}

void save_model(const EmbeddingModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << model.size() << ' ' << model.dim() << '\n';
  out << std::fixed << std::setprecision(6);
  for (std::size_t i = 0; i < model.size(); ++i) {
    out << model.vocab()[i].word;
    for (float x : model.row(i)) out << ' ' << x;
    out << '\n';
  }
}

EmbeddingModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  std::string line;
  std::size_t v = 0, d = 0;
  if (!std::getline(in, line)) throw FormatError(path + ": missing header");
  {
    std::istringstream hs(line);
    if (!(hs >> v >> d) || d == 0) throw FormatError(path + ": bad header '" + line + "'");
  }
  std::vector<Vocabulary::Entry> entries;
  std::vector<float> data;
  data.reserve(v * d);
  for (std::size_t i = 0; i < v; ++i) {
    if (!std::getline(in, line)) {
      throw FormatError(path + ": expected " + std::to_string(v) + " rows, found " + std::to_string(i));
    }
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    for (std::size_t k = 0; k < d; ++k) {
      float x;
      if (!(ls >> x)) throw FormatError(path + ": row " + std::to_string(i + 1) + " has too few values");
      data.push_back(x);
    }
    float extra;
    if (ls >> extra) throw FormatError(path + ": row " + std::to_string(i + 1) + " has too many values");
    // Counts are not stored; rank order is kept via descending synthetic counts.
    entries.push_back({word, static_cast<std::uint64_t>(v - i)});
  }
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) throw FormatError(path + ": more rows than header");
  }
  auto vocab = Vocabulary::from_entries(std::move(entries));
  if (vocab.size() != v) throw FormatError(path + ": repeated word");
  return EmbeddingModel(std::move(vocab), d, std::move(data));
}

}  // namespace tweetmine
