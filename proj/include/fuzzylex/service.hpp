#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "fuzzylex/dialogue.hpp"
#include "fuzzylex/error.hpp"
#include "fuzzylex/lexicon.hpp"

namespace fuzzylex {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8714;  // 0 binds any free port
  std::optional<std::filesystem::path> lexicon_path;
  std::optional<std::filesystem::path> ui_dir;
  Policy policy;
  std::chrono::seconds session_ttl{3600};
};

/// HTTP status used for an error category.
int http_status(ErrorCode code) noexcept;

nlohmann::json to_json(const DecisionResult& decision);
nlohmann::json to_json(const Session& session);
/// Learned functions with their coefficients plus the entry's decision.
nlohmann::json entry_view(const UserWordEntry& entry);
nlohmann::json lexicon_view(const Lexicon& lexicon);

/// Reads `path` when it exists, otherwise returns an empty lexicon.
Lexicon load_or_empty(const std::filesystem::path& path);

/// JSON facade over the dialogue and lexicon modules.
///
/// Mutations are serialized through one writer that persists the lexicon
/// before publishing it; readers work on the last published snapshot.
class Service {
 public:
  explicit Service(ServiceConfig config, Lexicon lexicon = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the listening socket and returns the port. Throws
  /// ErrorCode::internal_error when the address is unavailable.
  int bind();
  /// Serves until stop(). Requires a successful bind().
  void run();
  void stop();
  bool is_running() const;
  /// Blocks until run() has started accepting connections.
  void wait_until_ready() const;

  std::shared_ptr<const Lexicon> snapshot() const;
  /// Saves the current snapshot when a lexicon path is configured.
  void persist() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fuzzylex
