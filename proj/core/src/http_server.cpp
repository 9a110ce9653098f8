#include <thread>

#include "hare/service.hpp"
#include "httplib.h"
#include "json.hpp"

namespace hare::service {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, json{{"error", message}});
}

json step_json(const Step& step) {
  json j;
  j["sentence"] = step.sentence ? json{{"index", step.sentence->index},
                                       {"text", step.sentence->text}}
                                : json(nullptr);
  j["done"] = step.done;
  return j;
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw ServiceError(400, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ServiceError(400, std::string("invalid JSON body: ") + e.what());
  }
}

template <typename T>
T required(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end()) throw ServiceError(400, std::string("missing field \"") + key + "\"");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ServiceError(400, std::string("field \"") + key + "\" has the wrong type");
  }
}

// Wraps a handler so library errors turn into JSON error responses.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const ServiceError& e) {
      send_error(res, e.status(), e.what());
    } catch (const ConfigError& e) {
      send_error(res, 400, e.what());
    } catch (const Error& e) {
      send_error(res, 500, e.what());
    }
  };
}

}  // namespace

struct HttpServer::Impl {
  SessionManager& manager;
  httplib::Server server;

  explicit Impl(SessionManager& m) : manager(m) { routes(); }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });

    server.Get("/articles", guarded([this](const httplib::Request&, httplib::Response& res) {
      json out = json::array();
      for (const auto& a : manager.articles()) {
        out.push_back({{"id", a.id}, {"sentences", a.sentences}, {"preview", a.preview}});
      }
      send_json(res, 200, out);
    }));

    server.Post("/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      ArticleRef ref;
      if (body.contains("article")) ref.id = required<std::string>(body, "article");
      if (body.contains("text")) ref.text = required<std::string>(body, "text");
      const auto policy = required<std::string>(body, "policy");
      manager.expire_idle();
      const Created c = manager.create_session(ref, policy);
      json out = step_json(c.first);
      out["session"] = c.session_id;
      out["article"] = c.article_id;
      out["sentences"] = c.sentences;
      out["policy"] = c.policy;
      send_json(res, 201, out);
    }));

    server.Post(R"(/sessions/([^/]+)/feedback)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const json body = parse_body(req);
                  const auto index = required<long long>(body, "index");
                  const auto accept = required<bool>(body, "accept");
                  if (index < 0) throw ServiceError(409, "negative sentence index");
                  const Step next = manager.submit_feedback(
                      req.matches[1], static_cast<std::size_t>(index), accept);
                  send_json(res, 200, step_json(next));
                }));

    server.Post(R"(/sessions/([^/]+)/stop)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  json unseen = json::array();
                  for (const auto& s : manager.stop_session(req.matches[1])) {
                    unseen.push_back({{"index", s.index}, {"text", s.text}});
                  }
                  send_json(res, 200, json{{"unseen", unseen}});
                }));

    server.Post(R"(/sessions/([^/]+)/review)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const json body = parse_body(req);
                  const auto raw = required<std::vector<long long>>(body, "interesting");
                  std::vector<std::size_t> interesting;
                  for (long long i : raw) {
                    if (i < 0) throw ServiceError(400, "negative sentence index");
                    interesting.push_back(static_cast<std::size_t>(i));
                  }
                  const auto out = manager.submit_review(req.matches[1], interesting,
                                                         required<int>(body, "coherence"),
                                                         required<int>(body, "ease"));
                  send_json(res, 200,
                            json{{"interesting", out.interesting},
                                 {"coverage", out.coverage ? json(*out.coverage) : json(nullptr)},
                                 {"coherence", out.coherence},
                                 {"ease", out.ease}});
                }));

    server.Get(R"(/sessions/([^/]+)/stats)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto s = manager.session_stats(req.matches[1]);
                 send_json(res, 200,
                           json{{"phase", phase_name(s.phase)},
                                {"sentences", s.sentences},
                                {"shown", s.shown},
                                {"hidden", s.hidden},
                                {"accepted", s.accepted},
                                {"acceptance_rate",
                                 s.acceptance_rate ? json(*s.acceptance_rate) : json(nullptr)},
                                {"percent_read", s.percent_read}});
               }));

    server.Get("/study/export", guarded([this](const httplib::Request&, httplib::Response& res) {
      res.status = 200;
      res.set_content(manager.export_events(), "application/x-ndjson");
    }));
  }
};

HttpServer::HttpServer(SessionManager& manager) : impl_(std::make_unique<Impl>(manager)) {}
HttpServer::~HttpServer() { stop(); }

bool HttpServer::listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

int HttpServer::bind_any_port(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace hare::service
