#include "hare/service.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "hare/rng.hpp"
#include "hare/simharness.hpp"
#include "json.hpp"

namespace hare::service {

using nlohmann::json;

std::string_view phase_name(Phase p) {
  switch (p) {
    case Phase::kReading:
      return "reading";
    case Phase::kReview:
      return "review";
    case Phase::kClosed:
      return "closed";
  }
  return "unknown";
}

struct SessionManager::Live {
  std::mutex mu;
  std::string id;
  std::string policy;
  std::shared_ptr<const EmbeddedDocument> doc;
  std::unique_ptr<PolicySession> session;
  Phase phase = Phase::kReading;
  std::vector<Decision> decisions;
  std::vector<std::size_t> served;
  std::size_t hidden = 0;
  std::vector<FeedbackEntry> feedback;
  std::optional<std::size_t> awaiting;  // served, no feedback yet
  std::optional<ReviewOutcome> review;
  std::chrono::system_clock::time_point created;
  std::chrono::system_clock::time_point last_active;

  std::size_t accepted() const {
    return static_cast<std::size_t>(std::count_if(
        feedback.begin(), feedback.end(), [](const FeedbackEntry& f) { return f.value == 1; }));
  }

  // Moves through hidden sentences to the next one the policy shows.
  Step advance() {
    const std::size_t n = doc->size();
    while (session->cursor() < n) {
      const std::size_t i = session->cursor();
      const Decision d = session->decide(i);
      decisions.push_back(d);
      if (d == Decision::kShow) {
        served.push_back(i);
        awaiting = i;
        return {ServedSentence{i, doc->document[i].text}, false};
      }
      ++hidden;
    }
    return {std::nullopt, true};
  }
};

namespace {

std::string session_id_for(std::uint64_t seed, std::uint64_t counter) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "s%016llx",
                static_cast<unsigned long long>(derive_seed({seed, counter, 0x5e55})));
  return buf;
}

long long millis(std::chrono::system_clock::time_point t) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
}

}  // namespace

SessionManager::SessionManager(Corpus corpus, std::shared_ptr<const EmbeddingProvider> provider,
                               ServiceOptions options)
    : corpus_(std::move(corpus)), provider_(std::move(provider)), options_(std::move(options)) {
  if (!provider_) throw ConfigError("service needs an embedding provider");
  if (options_.event_log) {
    log_file_ = std::make_unique<std::ofstream>(*options_.event_log, std::ios::app);
    if (!*log_file_) throw IoError("cannot open event log " + options_.event_log->string());
  }
}

SessionManager::~SessionManager() = default;

std::vector<ArticleInfo> SessionManager::articles() const {
  std::vector<ArticleInfo> out;
  for (const auto& d : corpus_.documents) {
    out.push_back({d.id, d.size(), d.sentences.front().text});
  }
  return out;
}

void SessionManager::log_event(const std::string& line) {
  std::lock_guard lock(log_mu_);
  events_.push_back(line);
  if (log_file_) {
    *log_file_ << line << '\n';
    log_file_->flush();
  }
}

std::shared_ptr<SessionManager::Live> SessionManager::find(const std::string& id) const {
  std::lock_guard lock(sessions_mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "unknown session '" + id + "'");
  return it->second;
}

Created SessionManager::create_session(const ArticleRef& article, std::string_view policy_spec) {
  PolicySpec spec;
  try {
    spec = PolicySpec::parse(policy_spec);
  } catch (const ConfigError& e) {
    throw ServiceError(400, std::string("bad policy spec: ") + e.what());
  }
  if (spec.requires_user()) {
    throw ServiceError(400, "policy '" + spec.name() +
                                "' needs the reader's true interests and cannot run live");
  }

  std::shared_ptr<const EmbeddedDocument> doc;
  std::uint64_t number = 0;
  {
    std::lock_guard lock(sessions_mu_);
    number = ++counter_;
  }
  try {
    if (article.id) {
      const Document* d = corpus_.find(*article.id);
      if (!d) throw ServiceError(404, "unknown article '" + *article.id + "'");
      std::lock_guard lock(embed_mu_);
      auto& slot = embedded_[d->id];
      if (!slot) slot = std::make_shared<const EmbeddedDocument>(provider_->embed_document(*d));
      doc = slot;
    } else if (article.text) {
      Document d{"adhoc-" + std::to_string(number), split_sentences(*article.text)};
      doc = std::make_shared<const EmbeddedDocument>(provider_->embed_document(d));
    } else {
      throw ServiceError(400, "request needs \"article\" or \"text\"");
    }
  } catch (const EmptyDocument& e) {
    throw ServiceError(400, e.what());
  } catch (const MissingEmbedding& e) {
    throw ServiceError(400, e.what());
  }

  auto live = std::make_shared<Live>();
  live->id = session_id_for(options_.seed, number);
  live->policy = spec.canonical();
  live->doc = doc;
  const std::uint64_t policy_seed = derive_seed({options_.seed, number});
  try {
    live->session = make_policy(spec, {*doc, nullptr, policy_seed, nullptr});
  } catch (const Error& e) {
    throw ServiceError(400, e.what());
  }
  live->created = live->last_active = options_.clock();

  Created out;
  std::lock_guard session_lock(live->mu);
  out.session_id = live->id;
  out.article_id = doc->document.id;
  out.sentences = doc->size();
  out.policy = live->policy;
  out.policy_seed = policy_seed;
  out.first = live->advance();
  {
    std::lock_guard lock(sessions_mu_);
    sessions_[live->id] = live;
  }
  log_event(json{{"event", "create"},
                 {"session", live->id},
                 {"article", out.article_id},
                 {"policy", live->policy},
                 {"policy_seed", policy_seed},
                 {"t", millis(live->created)}}
                .dump());
  if (out.first.sentence) {
    log_event(json{{"event", "serve"}, {"session", live->id}, {"index", out.first.sentence->index}}
                  .dump());
  }
  return out;
}

Step SessionManager::submit_feedback(const std::string& session_id, std::size_t index,
                                     bool accept) {
  auto live = find(session_id);
  std::lock_guard lock(live->mu);
  if (live->phase != Phase::kReading) {
    throw ServiceError(409, "session is in the " + std::string(phase_name(live->phase)) +
                                " phase, not reading");
  }
  if (!live->awaiting || *live->awaiting != index) {
    throw ServiceError(409, "feedback for sentence " + std::to_string(index) +
                                " does not match the sentence being read");
  }
  const int value = accept ? 1 : 0;
  live->session->observe(index, value);
  live->feedback.push_back({index, value, 0.0});
  live->awaiting.reset();
  live->last_active = options_.clock();
  log_event(json{{"event", "feedback"}, {"session", live->id}, {"index", index}, {"accept", accept}}
                .dump());
  Step next = live->advance();
  if (next.sentence) {
    log_event(json{{"event", "serve"}, {"session", live->id}, {"index", next.sentence->index}}
                  .dump());
  }
  return next;
}

std::vector<ServedSentence> SessionManager::stop_session(const std::string& session_id) {
  auto live = find(session_id);
  std::lock_guard lock(live->mu);
  if (live->phase != Phase::kReading) {
    throw ServiceError(409, "session already stopped");
  }
  live->phase = Phase::kReview;
  live->awaiting.reset();
  live->last_active = options_.clock();
  const std::set<std::size_t> served(live->served.begin(), live->served.end());
  std::vector<ServedSentence> unseen;
  for (std::size_t i = 0; i < live->doc->size(); ++i) {
    if (!served.count(i)) unseen.push_back({i, live->doc->document[i].text});
  }
  log_event(json{{"event", "stop"}, {"session", live->id}, {"unseen", unseen.size()}}.dump());
  return unseen;
}

ReviewOutcome SessionManager::submit_review(const std::string& session_id,
                                            const std::vector<std::size_t>& interesting,
                                            int coherence, int ease) {
  auto live = find(session_id);
  std::lock_guard lock(live->mu);
  if (live->phase != Phase::kReview) {
    throw ServiceError(409, "review is only accepted after the session is stopped");
  }
  if (coherence < 1 || coherence > 5 || ease < 1 || ease > 5) {
    throw ServiceError(400, "coherence and ease ratings must be integers in 1..5");
  }
  const std::set<std::size_t> served(live->served.begin(), live->served.end());
  std::set<std::size_t> marked;
  for (std::size_t i : interesting) {
    if (i >= live->doc->size() || served.count(i)) {
      throw ServiceError(400, "sentence " + std::to_string(i) + " was not among the unseen");
    }
    marked.insert(i);
  }
  ReviewOutcome out;
  out.interesting.assign(marked.begin(), marked.end());
  out.coherence = coherence;
  out.ease = ease;
  const std::size_t accepted = live->accepted();
  const std::size_t denom = accepted + marked.size();
  if (denom > 0) out.coverage = static_cast<double>(accepted) / static_cast<double>(denom);
  live->review = out;
  live->phase = Phase::kClosed;
  live->last_active = options_.clock();
  log_event(json{{"event", "review"},
                 {"session", live->id},
                 {"interesting", out.interesting},
                 {"coverage", out.coverage ? json(*out.coverage) : json(nullptr)},
                 {"coherence", coherence},
                 {"ease", ease},
                 {"accepted", accepted},
                 {"shown", live->served.size()}}
                .dump());
  return out;
}

SessionStats SessionManager::session_stats(const std::string& session_id) const {
  auto live = find(session_id);
  std::lock_guard lock(live->mu);
  SessionStats s;
  s.phase = live->phase;
  s.sentences = live->doc->size();
  s.shown = live->served.size();
  s.hidden = live->hidden;
  s.accepted = live->accepted();
  if (s.shown > 0) s.acceptance_rate = static_cast<double>(s.accepted) / static_cast<double>(s.shown);
  s.percent_read = static_cast<double>(s.shown) / static_cast<double>(s.sentences);
  return s;
}

SessionTrace SessionManager::trace(const std::string& session_id) const {
  auto live = find(session_id);
  std::lock_guard lock(live->mu);
  SessionTrace t;
  t.doc_id = live->doc->document.id;
  t.decisions = live->decisions;
  t.feedback = live->feedback;
  t.shown = live->served;
  t.stop_index = live->decisions.empty() ? 0 : live->decisions.size() - 1;
  return t;
}

std::string SessionManager::export_events() const {
  std::lock_guard lock(log_mu_);
  std::string out;
  for (const auto& e : events_) out += e + '\n';
  return out;
}

std::size_t SessionManager::expire_idle() {
  const auto now = options_.clock();
  std::vector<std::shared_ptr<Live>> expired;
  {
    std::lock_guard lock(sessions_mu_);
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      std::unique_lock session_lock(it->second->mu, std::try_to_lock);
      if (session_lock.owns_lock() && now - it->second->last_active > options_.ttl) {
        expired.push_back(it->second);
        it = sessions_.erase(it);
      } else {
        ++it;
      }
    }
  }
  for (const auto& live : expired) {
    log_event(json{{"event", "expire"}, {"session", live->id}}.dump());
  }
  return expired.size();
}

std::size_t SessionManager::session_count() const {
  std::lock_guard lock(sessions_mu_);
  return sessions_.size();
}

}  // namespace hare::service
