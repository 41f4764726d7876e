// fuzzylex: learn unknown query words as trapezoidal membership functions.
//
//   fuzzylex serve      HTTP/JSON service (and optional web UI)
//   fuzzylex repl       terminal dialogue
//   fuzzylex simulate   fold a CSV of ratings and report the result
//   fuzzylex demo-paper reproduce the two worked examples
//   fuzzylex export     print the lexicon document

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "fuzzylex/commands.hpp"
#include "fuzzylex/error.hpp"
#include "fuzzylex/service.hpp"

namespace {

struct GlobalOptions {
  std::string lexicon;
  bool always_elicit = false;
  std::optional<double> min_final;

  fuzzylex::Policy policy() const { return {always_elicit, min_final}; }
};

int cmd_serve(const GlobalOptions& global, const std::string& listen, const std::string& ui_dir,
              int ttl_seconds) {
  fuzzylex::ServiceConfig config;
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "fuzzylex: --listen expects host:port\n";
    return 2;
  }
  config.host = listen.substr(0, colon);
  try {
    config.port = std::stoi(listen.substr(colon + 1));
  } catch (const std::exception&) {
    std::cerr << "fuzzylex: bad port in --listen " << listen << '\n';
    return 2;
  }
  if (!global.lexicon.empty()) config.lexicon_path = global.lexicon;
  if (!ui_dir.empty()) config.ui_dir = ui_dir;
  config.policy = global.policy();
  config.session_ttl = std::chrono::seconds(ttl_seconds);

  // Signals are taken synchronously by a watcher thread so shutdown runs
  // outside signal-handler context.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  fuzzylex::Lexicon lexicon =
      config.lexicon_path ? fuzzylex::load_or_empty(*config.lexicon_path) : fuzzylex::Lexicon{};
  fuzzylex::Service service(config, std::move(lexicon));
  const int port = service.bind();
  std::cerr << "fuzzylex: listening on " << config.host << ':' << port << '\n';

  std::thread watcher([&service, signals] {
    int received = 0;
    sigwait(&signals, &received);
    service.stop();
  });
  watcher.detach();

  service.run();
  service.persist();
  std::cerr << "fuzzylex: stopped\n";
  return 0;
}

int cmd_repl(const GlobalOptions& global) {
  auto lexicon = global.lexicon.empty() ? fuzzylex::Lexicon{}
                                        : fuzzylex::load_or_empty(global.lexicon);
  auto persist = [&](const fuzzylex::Lexicon& lex) {
    if (!global.lexicon.empty()) fuzzylex::save(lex, global.lexicon);
  };
  return fuzzylex::run_repl(lexicon, global.policy(), std::cin, std::cout, persist);
}

int cmd_simulate(const GlobalOptions& global, const std::string& input, bool write_back) {
  std::ifstream csv(input);
  if (!csv) {
    std::cerr << "fuzzylex: cannot open " << input << '\n';
    return 1;
  }
  auto lexicon = global.lexicon.empty() ? fuzzylex::Lexicon{}
                                        : fuzzylex::load_or_empty(global.lexicon);
  try {
    fuzzylex::fold_records(lexicon, fuzzylex::read_simulation(csv));
  } catch (const fuzzylex::Error& e) {
    std::cerr << "fuzzylex: " << input << ": " << e.what() << '\n';
    return 1;
  }
  fuzzylex::write_report(lexicon, std::cout);
  if (write_back && !global.lexicon.empty()) fuzzylex::save(lexicon, global.lexicon);
  return 0;
}

int cmd_export(const GlobalOptions& global) {
  auto lexicon = global.lexicon.empty() ? fuzzylex::Lexicon{}
                                        : fuzzylex::load_or_empty(global.lexicon);
  std::cout << fuzzylex::serialize(lexicon);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn unknown query words as trapezoidal membership functions"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--lexicon", global.lexicon, "Lexicon JSON file (created on first save)");
  app.add_flag("--always-elicit", global.always_elicit,
               "Ask for ratings even when a learned entry could decide");
  app.add_option("--min-final", global.min_final,
                 "Minimum final decision coefficient accepted without re-asking")
      ->check(CLI::Range(0.0, 1.0));

  std::string listen = "127.0.0.1:8714";
  std::string ui_dir;
  int ttl_seconds = 3600;
  auto* serve = app.add_subcommand("serve", "Run the HTTP/JSON service");
  serve->add_option("--listen", listen, "host:port to listen on")->capture_default_str();
  serve->add_option("--ui-dir", ui_dir, "Directory of static web UI files");
  serve->add_option("--session-ttl", ttl_seconds, "Session lifetime in seconds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* repl = app.add_subcommand("repl", "Interactive terminal dialogue");

  std::string input;
  bool write_back = false;
  auto* simulate = app.add_subcommand("simulate", "Fold a CSV of ratings and print a report");
  simulate->add_option("input", input, "CSV with header surface,kind,candidate,theta")
      ->required();
  simulate->add_flag("--save", write_back, "Write the folded lexicon back to --lexicon");

  auto* demo = app.add_subcommand("demo-paper", "Reproduce the two worked examples");
  auto* exporter = app.add_subcommand("export", "Print the lexicon document");

  CLI11_PARSE(app, argc, argv);

  try {
    if (serve->parsed()) return cmd_serve(global, listen, ui_dir, ttl_seconds);
    if (repl->parsed()) return cmd_repl(global);
    if (simulate->parsed()) return cmd_simulate(global, input, write_back);
    if (demo->parsed()) return fuzzylex::run_demo_paper(std::cout);
    if (exporter->parsed()) return cmd_export(global);
  } catch (const std::exception& e) {
    std::cerr << "fuzzylex: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
