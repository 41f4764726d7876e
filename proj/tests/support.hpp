#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "fuzzylex/lexicon.hpp"
#include "fuzzylex/service.hpp"

namespace fuzzylex::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("fuzzylex-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

/// The vocabulary of the "how to Gum Word?" scenario plus the Example 2 objects.
inline Lexicon scenario_lexicon() {
  Lexicon lex;
  for (const auto* object : {"Word", "Character", "ChaineofChar"}) lex.add_term(TermKind::object, object);
  for (const auto* goal : {"EraseWithMenu", "EraseWithKey", "CutWithMenu", "Copy", "Select"}) {
    lex.add_term(TermKind::goal, goal);
  }
  for (const auto* goal : {"EraseWithMenu", "EraseWithKey", "CutWithMenu", "Copy"}) {
    lex.set_applicable(goal, "Word");
  }
  for (const auto* object : {"Word", "Character", "ChaineofChar"}) lex.set_applicable("Select", object);
  return lex;
}

/// `scenario_lexicon` plus the learned Object "Substantive" whose nuclei are
/// (0.3, 0.6), (0.2, 0.7), (0.4, 0.5) against Character, Word, ChaineofChar.
inline Lexicon example2_lexicon() {
  auto doc = to_json(scenario_lexicon());
  doc["entries"] = nlohmann::json::parse(R"([{
    "surface": "Substantive", "kind": "Object", "functions": [
      {"candidate": "Character",    "gamma": 0.1, "alpha": 0.3, "beta": 0.6, "delta": 0.8, "left_count": 2, "right_count": 1},
      {"candidate": "Word",         "gamma": 0.0, "alpha": 0.2, "beta": 0.7, "delta": 0.9, "left_count": 1, "right_count": 2},
      {"candidate": "ChaineofChar", "gamma": 0.2, "alpha": 0.4, "beta": 0.5, "delta": 0.7, "left_count": 1, "right_count": 1}
    ]}])");
  return lexicon_from_json(doc);
}

/// A Service serving on an ephemeral port from a background thread.
class RunningService {
 public:
  explicit RunningService(ServiceConfig config, Lexicon lexicon = {}) {
    config.host = "127.0.0.1";
    config.port = 0;
    service_ = std::make_unique<Service>(std::move(config), std::move(lexicon));
    port_ = service_->bind();
    thread_ = std::thread([this] { service_->run(); });
    service_->wait_until_ready();
  }
  ~RunningService() {
    service_->stop();
    if (thread_.joinable()) thread_.join();
  }
  RunningService(const RunningService&) = delete;
  RunningService& operator=(const RunningService&) = delete;

  Service& service() { return *service_; }
  int port() const { return port_; }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

 private:
  std::unique_ptr<Service> service_;
  int port_ = 0;
  std::thread thread_;
};

inline nlohmann::json body_of(const httplib::Result& r) { return nlohmann::json::parse(r->body); }

}  // namespace fuzzylex::testing
