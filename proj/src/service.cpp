#include "fuzzylex/service.hpp"

#include <map>
#include <mutex>

#include <httplib.h>

#include "fuzzylex/error.hpp"

namespace fuzzylex {

using nlohmann::json;

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::parse_error: return 400;
    case ErrorCode::not_found: return 404;
    case ErrorCode::conflict: return 409;
    case ErrorCode::domain_error: return 422;
    case ErrorCode::state_error: return 409;
    case ErrorCode::internal_error: return 500;
  }
  return 500;
}

json to_json(const DecisionResult& decision) {
  json scores = json::array();
  for (const auto& s : decision.scores) {
    scores.push_back({{"candidate", s.candidate}, {"coefficient", s.coefficient}});
  }
  return json{{"final_coefficient", decision.final_coefficient},
              {"chosen", decision.chosen},
              {"winners", decision.winners},
              {"scores", std::move(scores)}};
}

json to_json(const Session& session) {
  json out{{"session_id", session.id},
           {"status", status_name(session.state)},
           {"query",
            {{"raw", session.query.raw},
             {"goal", session.query.goal_surface},
             {"object", session.query.object_surface}}}};

  json decisions = json::array();
  for (const auto& d : session.decisions) {
    decisions.push_back(
        {{"surface", d.surface}, {"kind", to_string(d.kind)}, {"decision", to_json(d.decision)}});
  }
  out["decisions"] = std::move(decisions);

  if (const auto* pending = std::get_if<NeedsElicitation>(&session.state)) {
    out["unknown"] = {{"surface", pending->surface}, {"kind", to_string(pending->kind)}};
    out["candidates"] = pending->candidates;
  } else if (const auto* decided = std::get_if<Decided>(&session.state)) {
    out["decision"] = to_json(decided->decision);
    out["rewritten"] = decided->rewritten;
  } else {
    out["rewritten"] = rewrite(session);
  }
  return out;
}

json entry_view(const UserWordEntry& entry) {
  json functions = json::array();
  std::vector<CandidateScore> scores;
  for (const auto& f : entry.functions) {
    json item = to_json(f.function);
    item["candidate"] = f.candidate;
    const double dc = decision_coefficient(f.function);
    item["decision_coefficient"] = dc;
    functions.push_back(std::move(item));
    scores.push_back({f.candidate, dc});
  }
  json out{{"surface", entry.surface},
           {"kind", to_string(entry.kind)},
           {"functions", std::move(functions)}};
  if (!scores.empty()) out["decision"] = to_json(final_decision(scores));
  return out;
}

json lexicon_view(const Lexicon& lexicon) {
  json entries = json::array();
  for (const auto& entry : lexicon.entries()) entries.push_back(entry_view(entry));
  return json{{"version", kLexiconSchema},
              {"vocabulary", to_json(lexicon.vocabulary())},
              {"entries", std::move(entries)}};
}

Lexicon load_or_empty(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return Lexicon{};
  return load(path);
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  send_json(res, http_status(code),
            json{{"error", {{"code", to_string(code)}, {"message", message}}}});
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw_error(ErrorCode::parse_error, std::string("request body is not JSON: ") + e.what());
  }
}

const UserWordEntry& require_entry(const Lexicon& lexicon, const std::string& kind,
                                   const std::string& surface) {
  const auto term_kind = [&] {
    try {
      return parse_term_kind(kind);
    } catch (const Error& e) {
      throw_error(ErrorCode::not_found, e.what());
    }
  }();
  const auto* entry = lexicon.find_entry(surface, term_kind);
  if (entry == nullptr) {
    throw_error(ErrorCode::not_found,
                "no learned " + std::string(to_string(term_kind)) + " '" + surface + "'");
  }
  return *entry;
}

}  // namespace

struct Service::Impl {
  using Clock = std::chrono::steady_clock;

  struct StoredSession {
    Session session;
    Clock::time_point expires;
  };

  ServiceConfig config;
  httplib::Server server;

  mutable std::mutex snapshot_mutex;
  std::shared_ptr<const Lexicon> current;

  // Held for the whole of every lexicon mutation, persistence included.
  std::mutex writer_mutex;

  std::mutex sessions_mutex;
  std::map<std::string, StoredSession> sessions;

  Impl(ServiceConfig cfg, Lexicon lexicon)
      : config(std::move(cfg)), current(std::make_shared<const Lexicon>(std::move(lexicon))) {
    // httplib also sets SO_REUSEPORT, which lets a second instance share a
    // busy port silently. Keep only fast rebinding after a restart.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
    });
    routes();
  }

  std::shared_ptr<const Lexicon> snapshot() const {
    std::lock_guard lock(snapshot_mutex);
    return current;
  }

  void publish(Lexicon next) {
    if (config.lexicon_path) save(next, *config.lexicon_path);
    auto shared = std::make_shared<const Lexicon>(std::move(next));
    std::lock_guard lock(snapshot_mutex);
    current = std::move(shared);
  }

  void purge_expired(Clock::time_point now) {
    std::erase_if(sessions, [&](const auto& item) { return item.second.expires <= now; });
  }

  void store(const Session& session) {
    std::lock_guard lock(sessions_mutex);
    const auto now = Clock::now();
    purge_expired(now);
    sessions.insert_or_assign(session.id, StoredSession{session, now + config.session_ttl});
  }

  Session find_session(const std::string& id) {
    std::lock_guard lock(sessions_mutex);
    purge_expired(Clock::now());
    const auto it = sessions.find(id);
    if (it == sessions.end()) throw_error(ErrorCode::not_found, "unknown session " + id);
    return it->second.session;
  }

  template <typename Handler>
  httplib::Server::Handler guarded(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      try {
        handler(req, res);
      } catch (const Error& e) {
        send_error(res, e.code(), e.what());
      } catch (const std::exception& e) {
        send_error(res, ErrorCode::internal_error, e.what());
      }
    };
  }

  void post_query(const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    if (!body.is_object() || !body.contains("text") || !body["text"].is_string()) {
      throw_error(ErrorCode::parse_error, "body must be {\"text\": <query>}");
    }
    auto query = parse_query(body["text"].get<std::string>());
    auto session = start_session(*snapshot(), std::move(query), config.policy);
    store(session);
    send_json(res, 200, to_json(session));
  }

  void post_ratings(const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    if (!body.is_object() || !body.contains("ratings") || !body["ratings"].is_object()) {
      throw_error(ErrorCode::domain_error, "body must be {\"ratings\": {<candidate>: <degree>}}");
    }
    Ratings ratings;
    for (const auto& [candidate, value] : body["ratings"].items()) {
      if (!value.is_number()) {
        throw_error(ErrorCode::domain_error, "rating for '" + candidate + "' must be a number");
      }
      ratings.emplace_back(candidate, value.get<double>());
    }

    std::lock_guard writer(writer_mutex);
    const auto session = find_session(req.matches[1].str());
    auto outcome = submit_ratings(*snapshot(), session, ratings, config.policy);
    publish(std::move(outcome.lexicon));
    store(outcome.session);
    send_json(res, 200, to_json(outcome.session));
  }

  void put_vocabulary(const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    Vocabulary vocabulary;
    try {
      vocabulary = vocabulary_from_json(body, "body");
    } catch (const Error& e) {
      throw_error(ErrorCode::domain_error, e.what());
    }

    std::lock_guard writer(writer_mutex);
    Lexicon next = *snapshot();
    next.replace_vocabulary(std::move(vocabulary));
    publish(std::move(next));
    send_json(res, 200, json{{"status", "ok"}, {"vocabulary", to_json(snapshot()->vocabulary())}});
  }

  void get_curve(const httplib::Request& req, httplib::Response& res) {
    int samples = 101;
    if (req.has_param("samples")) {
      const auto text = req.get_param_value("samples");
      try {
        std::size_t used = 0;
        samples = std::stoi(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
      } catch (const std::exception&) {
        throw_error(ErrorCode::parse_error, "samples must be an integer, got '" + text + "'");
      }
    }
    if (samples < 2) throw_error(ErrorCode::parse_error, "samples must be at least 2");

    const auto lexicon = snapshot();
    const auto& entry = require_entry(*lexicon, req.matches[1].str(), req.matches[2].str());
    const auto candidate = req.matches[3].str();
    const auto* function = entry.find(candidate);
    if (function == nullptr) {
      throw_error(ErrorCode::not_found,
                  "'" + entry.surface + "' has no function for '" + candidate + "'");
    }
    json points = json::array();
    for (const auto& p : sample(*function, samples)) points.push_back(json::array({p.x, p.mu}));
    json fn = to_json(*function);
    fn["decision_coefficient"] = decision_coefficient(*function);
    send_json(res, 200,
              json{{"surface", entry.surface},
                   {"kind", to_string(entry.kind)},
                   {"candidate", *lexicon->vocabulary().canonical(entry.kind, candidate)},
                   {"function", std::move(fn)},
                   {"vertices", json::array({json::array({function->gamma(), 0.0}),
                                             json::array({function->alpha(), 1.0}),
                                             json::array({function->beta(), 1.0}),
                                             json::array({function->delta(), 0.0})})},
                   {"points", std::move(points)}});
  }

  void routes() {
    server.Post("/api/query", guarded([this](const auto& req, auto& res) { post_query(req, res); }));
    server.Post(R"(/api/sessions/([^/]+)/ratings)",
                guarded([this](const auto& req, auto& res) { post_ratings(req, res); }));
    server.Put("/api/vocabulary",
               guarded([this](const auto& req, auto& res) { put_vocabulary(req, res); }));
    server.Get("/api/lexicon", guarded([this](const auto&, auto& res) {
                 send_json(res, 200, lexicon_view(*snapshot()));
               }));
    server.Get(R"(/api/lexicon/([^/]+)/([^/]+))", guarded([this](const auto& req, auto& res) {
                 const auto lexicon = snapshot();
                 send_json(res, 200,
                           entry_view(require_entry(*lexicon, req.matches[1].str(),
                                                    req.matches[2].str())));
               }));
    server.Get(R"(/api/lexicon/([^/]+)/([^/]+)/([^/]+)/curve)",
               guarded([this](const auto& req, auto& res) { get_curve(req, res); }));
    if (config.ui_dir) server.set_mount_point("/", config.ui_dir->string());
  }
};

Service::Service(ServiceConfig config, Lexicon lexicon)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(lexicon))) {}

Service::~Service() { stop(); }

int Service::bind() {
  auto& cfg = impl_->config;
  if (cfg.port == 0) {
    const int port = impl_->server.bind_to_any_port(cfg.host);
    if (port < 0) throw_error(ErrorCode::internal_error, "cannot bind " + cfg.host);
    cfg.port = port;
  } else if (!impl_->server.bind_to_port(cfg.host, cfg.port)) {
    throw_error(ErrorCode::internal_error,
                "cannot listen on " + cfg.host + ":" + std::to_string(cfg.port));
  }
  return cfg.port;
}

void Service::run() { impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool Service::is_running() const { return impl_->server.is_running(); }

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

std::shared_ptr<const Lexicon> Service::snapshot() const { return impl_->snapshot(); }

void Service::persist() const {
  if (impl_->config.lexicon_path) save(*snapshot(), *impl_->config.lexicon_path);
}

}  // namespace fuzzylex
