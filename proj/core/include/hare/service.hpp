#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hare/corpus.hpp"
#include "hare/embed.hpp"
#include "hare/errors.hpp"
#include "hare/policies.hpp"
#include "hare/trace.hpp"

namespace hare::service {

// Error carrying the HTTP status it maps to (400, 404 or 409).
class ServiceError : public Error {
 public:
  ServiceError(int status, const std::string& what) : Error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

enum class Phase { kReading, kReview, kClosed };
std::string_view phase_name(Phase p);

struct ServedSentence {
  std::size_t index = 0;
  std::string text;
};

// Next sentence to read, or nothing when the policy has reached the end.
struct Step {
  std::optional<ServedSentence> sentence;
  bool done = false;
};

struct Created {
  std::string session_id;
  std::string article_id;
  std::size_t sentences = 0;
  std::string policy;
  std::uint64_t policy_seed = 0;  // replays the session with make_policy
  Step first;
};

struct ReviewOutcome {
  std::vector<std::size_t> interesting;
  std::optional<double> coverage;
  int coherence = 0;
  int ease = 0;
};

struct SessionStats {
  Phase phase = Phase::kReading;
  std::size_t sentences = 0;
  std::size_t shown = 0;
  std::size_t hidden = 0;
  std::size_t accepted = 0;
  std::optional<double> acceptance_rate;
  double percent_read = 0.0;
};

struct ArticleInfo {
  std::string id;
  std::size_t sentences = 0;
  std::string preview;
};

struct ServiceOptions {
  std::chrono::seconds ttl = std::chrono::hours(24);
  std::uint64_t seed = 42;
  // Append-only event log; events are also kept in memory for export.
  std::optional<std::filesystem::path> event_log;
  std::function<std::chrono::system_clock::time_point()> clock = [] {
    return std::chrono::system_clock::now();
  };
};

// Either a corpus article id or raw text to split on the fly.
struct ArticleRef {
  std::optional<std::string> id;
  std::optional<std::string> text;
};

// Live reading sessions. Calls on distinct sessions run concurrently; calls on
// one session are serialized.
class SessionManager {
 public:
  SessionManager(Corpus corpus, std::shared_ptr<const EmbeddingProvider> provider,
                 ServiceOptions options = {});
  ~SessionManager();

  std::vector<ArticleInfo> articles() const;

  Created create_session(const ArticleRef& article, std::string_view policy_spec);
  Step submit_feedback(const std::string& session_id, std::size_t index, bool accept);
  std::vector<ServedSentence> stop_session(const std::string& session_id);
  ReviewOutcome submit_review(const std::string& session_id,
                              const std::vector<std::size_t>& interesting, int coherence,
                              int ease);
  SessionStats session_stats(const std::string& session_id) const;

  // Interaction so far, in simulator trace form.
  SessionTrace trace(const std::string& session_id) const;

  // One JSON object per line, in append order.
  std::string export_events() const;

  // Drops sessions idle for longer than the TTL; returns how many.
  std::size_t expire_idle();
  std::size_t session_count() const;

 private:
  struct Live;
  std::shared_ptr<Live> find(const std::string& session_id) const;
  void log_event(const std::string& json_line);

  Corpus corpus_;
  std::shared_ptr<const EmbeddingProvider> provider_;
  ServiceOptions options_;

  mutable std::mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<Live>> sessions_;
  std::uint64_t counter_ = 0;

  mutable std::mutex log_mu_;
  std::vector<std::string> events_;
  std::unique_ptr<std::ofstream> log_file_;

  mutable std::mutex embed_mu_;
  std::map<std::string, std::shared_ptr<const EmbeddedDocument>> embedded_;
};

// HTTP+JSON binding of SessionManager (cpp-httplib).
class HttpServer {
 public:
  explicit HttpServer(SessionManager& manager);
  ~HttpServer();

  // Binds and serves until stop(); returns false when binding fails.
  bool listen(const std::string& host, int port);
  // Binds to a free port and returns it; serve with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  bool running() const;
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hare::service
