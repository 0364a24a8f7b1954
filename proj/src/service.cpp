#include "tweetmine/service.hpp"

#include <atomic>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "tweetmine/error.hpp"

namespace tweetmine {

using nlohmann::json;

namespace {

const char* kStubPage =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>tweetmine review</title></head>"
    "<body><h1>tweetmine review</h1><p>The review UI bundle is not installed. The JSON API is available under "
    "<code>/api/</code>.</p></body></html>";

json stats_json(const IterationStats& s) {
  return {{"iteration", s.iteration}, {"tp", s.tp},           {"fp", s.fp},
          {"queued", s.queued},       {"accepted", s.accepted}, {"total_positives", s.total_positives}};
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

}  // namespace

struct RelabelService::Impl {
  RelabelState state;
  ServiceOptions options;
  mutable std::shared_mutex state_mutex;  // guards state and decided
  std::mutex writer;                      // serializes label mutations
  std::set<std::string> decided;          // ids decided in the current iteration
  std::atomic<bool> busy{false};
  std::string last_error;
  std::thread retrain_thread;
  std::mutex retrain_mutex;  // guards retrain_thread
  httplib::Server server;
  std::thread server_thread;

  Impl(RelabelState s, ServiceOptions o) : state(std::move(s)), options(std::move(o)) { routes(); }

  std::vector<std::string> lexicon_hits(const Tweet& t) const {
    std::vector<std::string> hits;
    if (!options.lexicon) return hits;
    std::set<std::string> seen;
    for (const auto& tok : t.tokens) {
      if (options.lexicon->contains(tok) && seen.insert(tok).second) hits.push_back(tok);
    }
    return hits;
  }

  json topic_json(const std::string& id) const {
    if (!options.topics || !options.topics->doc_index(id)) return nullptr;
    return render(annotate(*options.topics, id));
  }

  json item_json(const ReviewItem& item) const {
    json j{{"tweet_id", item.tweet_id},
           {"text", item.text},
           {"score", item.score},
           {"current_label", to_string(item.current)},
           {"predicted_label", to_string(item.predicted)},
           {"iteration", item.iteration},
           {"topic_annotation", topic_json(item.tweet_id)},
           {"lexicon_hits", json::array()}};
    if (auto idx = state.corpus.index_of(item.tweet_id)) j["lexicon_hits"] = lexicon_hits(state.corpus[*idx]);
    return j;
  }

  void retrain_job(Corpus snapshot, std::size_t iteration) {
    try {
      auto result = compute_iteration(snapshot, state.config, iteration, state.embedding.get());
      std::unique_lock lock(state_mutex);
      // Labels may have changed while training; keep only items still negative.
      std::erase_if(result.queue, [&](const ReviewItem& item) {
        auto idx = state.corpus.index_of(item.tweet_id);
        return !idx || state.corpus[*idx].label != item.current;
      });
      result.stats.queued = result.queue.size();
      result.stats.total_positives = state.corpus.count(Label::Positive);
      state.iteration = iteration;
      state.queue = std::move(result.queue);
      state.history.push_back(result.stats);
      decided.clear();
      last_error.clear();
    } catch (const std::exception& e) {
      std::unique_lock lock(state_mutex);
      last_error = e.what();
    }
    busy = false;
  }

  void routes() {
    server.Get("/api/queue", [this](const httplib::Request& req, httplib::Response& res) {
      std::size_t limit = std::numeric_limits<std::size_t>::max();
      if (req.has_param("limit")) {
        try {
          limit = std::stoul(req.get_param_value("limit"));
        } catch (const std::exception&) {
          return reply(res, 400, {{"error", "limit must be a non-negative integer"}});
        }
      }
      std::shared_lock lock(state_mutex);
      json items = json::array();
      for (const auto& item : state.queue) {
        if (items.size() >= limit) break;
        if (!decided.count(item.tweet_id)) items.push_back(item_json(item));
      }
      reply(res, 200, items);
    });

    server.Post("/api/decisions", [this](const httplib::Request& req, httplib::Response& res) {
      std::vector<ReviewDecision> decisions;
      try {
        auto body = json::parse(req.body);
        if (!body.is_array()) return reply(res, 400, {{"error", "expected a JSON array of decisions"}});
        for (const auto& d : body) {
          ReviewDecision rd;
          rd.tweet_id = d.at("tweet_id").get<std::string>();
          rd.new_label = parse_label(d.at("new_label").get<std::string>());
          rd.decider = parse_decider(d.value("decider", "human"));
          decisions.push_back(std::move(rd));
        }
      } catch (const json::exception& e) {
        return reply(res, 400, {{"error", std::string("malformed decisions: ") + e.what()}});
      } catch (const InvalidArgument& e) {
        return reply(res, 400, {{"error", e.what()}});
      }
      std::lock_guard write(writer);
      std::unique_lock lock(state_mutex);
      auto result = decide(state, decisions);
      for (const auto& e : std::span(state.log.entries()).last(decisions.size())) {
        if (e.applied) decided.insert(e.tweet_id);
      }
      reply(res, 200, {{"applied", result.applied}, {"rejected", result.rejected}, {"accepted", result.accepted}});
    });

    server.Post("/api/retrain", [this](const httplib::Request&, httplib::Response& res) {
      bool expected = false;
      if (!busy.compare_exchange_strong(expected, true)) return reply(res, 409, {{"error", "busy"}});
      std::lock_guard guard(retrain_mutex);
      if (retrain_thread.joinable()) retrain_thread.join();
      Corpus snapshot;
      std::size_t next;
      {
        std::shared_lock lock(state_mutex);
        snapshot = state.corpus;
        next = state.iteration + 1;
      }
      retrain_thread = std::thread([this, snapshot = std::move(snapshot), next]() mutable {
        retrain_job(std::move(snapshot), next);
      });
      reply(res, 202, {{"iteration", next}});
    });

    server.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) {
      std::shared_lock lock(state_mutex);
      json rows = json::array();
      for (const auto& s : state.history) rows.push_back(stats_json(s));
      res.set_header("X-Retraining", busy ? "true" : "false");
      if (!last_error.empty()) res.set_header("X-Last-Error", last_error);
      reply(res, 200, rows);
    });

    server.Get(R"(/api/tweets/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      std::shared_lock lock(state_mutex);
      auto idx = state.corpus.index_of(id);
      if (!idx) return reply(res, 404, {{"error", "unknown tweet id"}});
      const auto& t = state.corpus[*idx];
      reply(res, 200,
            {{"id", t.id},
             {"text", t.raw_text},
             {"tokens", t.tokens},
             {"label", to_string(t.label)},
             {"topic_annotation", topic_json(t.id)},
             {"lexicon_hits", lexicon_hits(t)}});
    });

    if (!options.static_dir.empty()) {
      if (!server.set_mount_point("/", options.static_dir)) {
        throw DataError("cannot serve UI bundle from " + options.static_dir);
      }
    } else {
      server.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(kStubPage, "text/html; charset=utf-8");
      });
    }
  }
};

RelabelService::RelabelService(RelabelState state, ServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(state), std::move(options))) {}

RelabelService::~RelabelService() {
  stop();
  wait_for_retrain();
}

int RelabelService::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->server_thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void RelabelService::listen(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) throw Error("cannot listen on " + host + ":" + std::to_string(port));
}

void RelabelService::stop() {
  impl_->server.stop();
  if (impl_->server_thread.joinable()) impl_->server_thread.join();
}

bool RelabelService::retraining() const { return impl_->busy; }

void RelabelService::wait_for_retrain() {
  std::lock_guard guard(impl_->retrain_mutex);
  if (impl_->retrain_thread.joinable()) impl_->retrain_thread.join();
}

}  // namespace tweetmine
