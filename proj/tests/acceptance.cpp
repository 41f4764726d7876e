// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fuzzylex/commands.hpp"
#include "fuzzylex/decision.hpp"
#include "fuzzylex/service.hpp"
#include "fuzzylex/trapezoid.hpp"
#include "process.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace fuzzylex;
using namespace fuzzylex::testing;
using nlohmann::json;

namespace {

constexpr double kTol = 1e-12;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
  void near(const std::string& label, double got, double want, double tol = kTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << label << " = " << got << ", expected " << want;
    require(std::abs(got - want) <= tol, msg.str());
  }
};

struct Criterion {
  std::string id;
  std::string title;
  std::function<Outcome()> check;
};

Outcome example1_construction() {
  Outcome o;
  const auto t = construct(Rating(0.7));
  o.near("gamma", t.gamma(), 0.4);
  o.near("alpha", t.alpha(), 0.7);
  o.near("beta", t.beta(), 0.7);
  o.near("delta", t.delta(), 1.0);
  return o;
}

Outcome example1_adjustment() {
  Outcome o;
  const auto t = adjust(construct(Rating(0.7)), Rating(0.5));
  o.near("alpha", t.alpha(), 0.6);
  o.near("gamma", t.gamma(), 0.45);
  o.require(t.beta() == 0.7, "beta moved");
  o.require(t.delta() == 1.0, "delta moved");
  return o;
}

Outcome example2_decision() {
  Outcome o;
  const std::vector<std::pair<std::string, Trapezoid>> functions{
      {"Character", Trapezoid::from_parts(0.1, 0.3, 0.6, 0.8)},
      {"Word", Trapezoid::from_parts(0.0, 0.2, 0.7, 0.9)},
      {"ChaineofChar", Trapezoid::from_parts(0.2, 0.4, 0.5, 0.7)},
  };
  const double expected[] = {0.525, 0.575, 0.475};
  std::vector<CandidateScore> scores;
  for (std::size_t i = 0; i < functions.size(); ++i) {
    const double dc = decision_coefficient(functions[i].second);
    o.near("D_c(" + functions[i].first + ")", dc, expected[i], 0.0);
    scores.push_back({functions[i].first, dc});
  }
  const auto d = final_decision(scores);
  o.near("D_c^f", d.final_coefficient, 0.575, 0.0);
  const auto* chosen = &functions[0].second;
  for (const auto& [name, t] : functions) {
    if (name == d.chosen) chosen = &t;
  }
  o.require(chosen->alpha() == 0.2 && chosen->beta() == 0.7,
            "chosen " + d.chosen + " does not have nucleus (0.2, 0.7)");
  return o;
}

Outcome demo_paper_command() {
  Outcome o;
  const auto r = run(FUZZYLEX_EXE, {"demo-paper"});
  o.require(r.status == 0, "exit status " + std::to_string(r.status) + "\n" + r.out);
  o.require(r.out.find("MISMATCH") == std::string::npos, "output reports a mismatch");
  return o;
}

Outcome property_suite() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  SequenceStats stats;
  const auto failure = check_rating_sequences(20240611, 10000, 60, &stats);
  o.require(failure.empty(), failure);
  o.require(stats.sequences >= 10000, "fewer than 10^4 sequences ran");

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20 && o.pass; ++i) {
    const double a = u(rng), b = u(rng);
    const auto stream_failure = check_constant_stream(std::max(a, b), std::min(a, b), 1000);
    o.require(stream_failure.empty(), stream_failure);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(seconds < 30.0, "took " + std::to_string(seconds) + " s");
  if (o.pass) {
    std::ostringstream msg;
    msg << stats.sequences << " sequences, " << stats.steps << " steps, worst mean error "
        << stats.worst_average_error << ", " << seconds << " s";
    o.detail = msg.str();
  }
  return o;
}

Outcome replay_determinism() {
  Outcome o;
  TempDir dir;
  const auto csv = dir / "ratings.csv";
  {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> word(0, 49), candidate(0, 5), kind(0, 1);
    std::uniform_real_distribution<double> theta(0.0, 1.0);
    std::ostringstream rows;
    rows << "surface,kind,candidate,theta\n";
    for (int i = 0; i < 10000; ++i) {
      const int k = kind(rng);
      rows << "w" << word(rng) << ',' << (k == 0 ? "Object" : "Goal") << ','
           << (k == 0 ? "obj" : "goal") << candidate(rng) << ',' << format_degree(theta(rng))
           << '\n';
    }
    write_file(csv, rows.str());
  }

  auto fold = [&] {
    std::ifstream in(csv);
    Lexicon lex;
    fold_records(lex, read_simulation(in));
    return lex;
  };
  auto report = [](const Lexicon& lex) {
    std::ostringstream out;
    write_report(lex, out);
    return out.str();
  };
  const auto first = fold();
  const auto second = fold();
  o.require(report(first) == report(second), "library reports differ");

  const auto cli_a = run(FUZZYLEX_EXE, {"simulate", csv.string()});
  const auto cli_b = run(FUZZYLEX_EXE, {"simulate", csv.string()});
  o.require(cli_a.status == 0 && cli_a.out == cli_b.out, "CLI reports differ");
  o.require(cli_a.out == report(first), "CLI report differs from the library report");

  save(first, dir / "lex.json");
  const auto loaded = load(dir / "lex.json");
  o.require(loaded == first, "save/load changed the lexicon");
  o.require(serialize(loaded) == serialize(first), "re-serialized document differs");
  std::size_t functions = 0;
  for (const auto& e : loaded.entries()) {
    const auto* original = first.find_entry(e.surface, e.kind);
    for (const auto& f : e.functions) {
      const auto* before = original->find(f.candidate);
      o.require(before && before->left_count() == f.function.left_count() &&
                    before->right_count() == f.function.right_count(),
                "counters lost for " + e.surface + "/" + f.candidate);
      ++functions;
    }
  }
  if (o.pass) o.detail = std::to_string(functions) + " functions, reports byte-identical";
  return o;
}

Outcome service_flow() {
  Outcome o;
  TempDir dir;
  ServiceConfig config;
  config.lexicon_path = dir / "lex.json";
  const auto goals = json::array({"EraseWithMenu", "EraseWithKey", "CutWithMenu", "Copy"});
  json learned;
  {
    RunningService server(config);
    auto c = server.client();
    json vocabulary{{"objects", json::array({"Word"})}, {"goals", goals}, {"applicability", json::array()}};
    for (const auto& g : goals) vocabulary["applicability"].push_back({g, "Word"});
    auto r = c.Put("/api/vocabulary", vocabulary.dump(), "application/json");
    o.require(r && r->status == 200, "vocabulary seeding failed");

    r = c.Post("/api/query", R"({"text": "how to Gum Word?"})", "application/json");
    o.require(r && r->status == 200, "query failed");
    if (!o.pass) return o;
    const auto session = json::parse(r->body);
    o.require(session["status"] == "needs_ratings", "status " + session["status"].dump());
    o.require(session["candidates"] == goals, "candidates " + session["candidates"].dump());

    const json ratings{{"ratings",
                        {{"EraseWithMenu", 0.9}, {"EraseWithKey", 0.7}, {"CutWithMenu", 0.3},
                         {"Copy", 0.1}}}};
    r = c.Post("/api/sessions/" + session["session_id"].get<std::string>() + "/ratings",
               ratings.dump(), "application/json");
    o.require(r && r->status == 200, "ratings failed");
    if (!o.pass) return o;
    const auto decided = json::parse(r->body);
    o.require(decided["status"] == "decided", "status " + decided["status"].dump());
    o.require(decided["decision"]["chosen"] == "EraseWithMenu",
              "chosen " + decided["decision"]["chosen"].dump());
    o.require(decided["rewritten"] == "How to EraseWithMenu a Word?",
              "rewritten " + decided["rewritten"].dump());
    learned = json::parse(c.Get("/api/lexicon/Goal/Gum")->body);
  }
  RunningService restarted(config, load_or_empty(dir / "lex.json"));
  auto c = restarted.client();
  const auto r = c.Get("/api/lexicon");
  o.require(r && r->status == 200, "lexicon unavailable after restart");
  if (!o.pass) return o;
  const auto entries = json::parse(r->body)["entries"];
  o.require(entries.size() == 1 && entries[0] == learned,
            "learned entry not reproduced: " + entries.dump());
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC-1", "Example 1 construction", example1_construction},
      {"AC-2", "Example 1 adjustment", example1_adjustment},
      {"AC-3", "Example 2 coefficients and choice", example2_decision},
      {"AC-4", "demo-paper command exits 0", demo_paper_command},
      {"AC-5", "learning-rule property suite", property_suite},
      {"AC-6", "replay determinism and lossless save/load", replay_determinism},
      {"AC-7", "end-to-end service flow with restart", service_flow},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << ' ' << c.title;
    if (!o.detail.empty()) std::cout << " (" << o.detail << ')';
    std::cout << '\n';
    if (!o.pass) ++failed;
  }
  std::cout << criteria.size() - failed << '/' << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
