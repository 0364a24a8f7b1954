#pragma once

#include <memory>
#include <optional>
#include <string>

#include "tweetmine/lda.hpp"
#include "tweetmine/lexicon.hpp"
#include "tweetmine/relabel.hpp"

namespace tweetmine {

struct ServiceOptions {
  std::optional<TopicModel> topics;  // adds per-tweet topic annotations
  std::optional<Lexicon> lexicon;    // adds lexicon hits
  std::string static_dir;            // review UI bundle served at /; a stub page when empty
};

/// HTTP front end of the relabeling loop. Reads run concurrently; label
/// mutations are serialized; at most one retrain runs in the background.
///
///   GET  /api/queue?limit=N   undecided items of the current queue
///   POST /api/decisions       [{tweet_id, new_label[, decider]}] -> {applied, rejected, accepted}
///   POST /api/retrain         202 {iteration} or 409 while a retrain runs
///   GET  /api/stats           iteration stats history
///   GET  /api/tweets/{id}     tweet detail with topic annotation and lexicon hits
///   GET  /                    review UI
class RelabelService {
 public:
  RelabelService(RelabelState state, ServiceOptions options = {});
  ~RelabelService();
  RelabelService(const RelabelService&) = delete;
  RelabelService& operator=(const RelabelService&) = delete;

  /// Binds (port 0 picks a free port) and serves on a background thread.
  /// Returns the bound port; throws Error if binding fails.
  int start(const std::string& host, int port);
  /// Binds and serves on the calling thread until stop().
  void listen(const std::string& host, int port);
  void stop();

  bool retraining() const;
  /// Blocks until the current background retrain, if any, has finished.
  void wait_for_retrain();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tweetmine
