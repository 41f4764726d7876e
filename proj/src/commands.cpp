#include "fuzzylex/commands.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "fuzzylex/error.hpp"

namespace fuzzylex {

std::string format_degree(double value) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return ec == std::errc{} ? std::string(buffer, end) : std::to_string(value);
}

std::string sparkline(const Trapezoid& t) {
  static constexpr std::string_view ramp = " .:-=+*#%@";
  std::string line;
  for (int i = 0; i <= 20; ++i) {
    const double mu = evaluate(t, i / 20.0);
    const auto level = static_cast<std::size_t>(std::lround(mu * double(ramp.size() - 1)));
    line.push_back(ramp[level]);
  }
  return line;
}

// ---------------------------------------------------------------------------
// simulate

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

[[noreturn]] void line_error(ErrorCode code, std::size_t line, const std::string& what) {
  throw_error(code, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::vector<SimulationRecord> read_simulation(std::istream& csv) {
  std::vector<SimulationRecord> records;
  std::string line;
  std::size_t number = 0;
  bool header_seen = false;
  while (std::getline(csv, line)) {
    ++number;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    if (!header_seen) {
      header_seen = true;
      std::vector<std::string> folded;
      for (auto c : cells) folded.push_back(fold_case(c));
      if (folded != std::vector<std::string>{"surface", "kind", "candidate", "theta"}) {
        line_error(ErrorCode::parse_error, number,
                   "expected header surface,kind,candidate,theta");
      }
      continue;
    }
    if (cells.size() != 4) {
      line_error(ErrorCode::parse_error, number,
                 "expected 4 columns, found " + std::to_string(cells.size()));
    }
    if (cells[0].empty() || cells[2].empty()) {
      line_error(ErrorCode::parse_error, number, "surface and candidate must not be empty");
    }
    double theta = 0.0;
    const auto [end, ec] =
        std::from_chars(cells[3].data(), cells[3].data() + cells[3].size(), theta);
    if (ec != std::errc{} || end != cells[3].data() + cells[3].size()) {
      line_error(ErrorCode::parse_error, number,
                 "theta '" + std::string(cells[3]) + "' is not a number");
    }
    TermKind kind{};
    try {
      kind = parse_term_kind(cells[1]);
    } catch (const Error& e) {
      line_error(ErrorCode::parse_error, number, e.what());
    }
    try {
      records.push_back({std::string(cells[0]), kind, std::string(cells[2]), Rating(theta)});
    } catch (const Error& e) {
      line_error(e.code(), number, e.what());
    }
  }
  return records;
}

void fold_records(Lexicon& lexicon, const std::vector<SimulationRecord>& records) {
  for (const auto& r : records) {
    if (!lexicon.vocabulary().contains(r.kind, r.candidate)) lexicon.add_term(r.kind, r.candidate);
    lexicon.record_rating(r.surface, r.kind, r.candidate, r.theta);
  }
}

void write_report(const Lexicon& lexicon, std::ostream& out) {
  out << "surface,kind,candidate,gamma,alpha,beta,delta,left_count,right_count,"
         "decision_coefficient,final_coefficient,chosen\n";
  for (const auto& entry : lexicon.entries()) {
    const auto decision = lexicon.interpret(entry.surface, entry.kind);
    for (const auto& f : entry.functions) {
      const auto& t = f.function;
      out << entry.surface << ',' << to_string(entry.kind) << ',' << f.candidate << ','
          << format_degree(t.gamma()) << ',' << format_degree(t.alpha()) << ','
          << format_degree(t.beta()) << ',' << format_degree(t.delta()) << ','
          << t.left_count() << ',' << t.right_count() << ','
          << format_degree(decision_coefficient(t)) << ','
          << format_degree(decision.final_coefficient) << ',' << decision.chosen << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// demo-paper

namespace {

class ExampleCheck {
 public:
  explicit ExampleCheck(std::ostream& out) : out_(out) {}

  void expect(std::string_view label, double expected, double computed) {
    const bool ok = std::abs(expected - computed) <= 1e-12;
    out_ << "  " << std::left << std::setw(34) << label << " expected " << std::setw(8)
         << format_degree(expected) << " computed " << std::setw(22) << format_degree(computed)
         << (ok ? "ok" : "MISMATCH") << '\n';
    if (!ok) failures_.emplace_back(label);
  }

  void expect(std::string_view label, const std::string& expected, const std::string& computed) {
    const bool ok = expected == computed;
    out_ << "  " << std::left << std::setw(34) << label << " expected " << std::setw(8)
         << expected << " computed " << std::setw(22) << computed
         << (ok ? "ok" : "MISMATCH") << '\n';
    if (!ok) failures_.emplace_back(label);
  }

  int finish() {
    if (failures_.empty()) {
      out_ << "all worked-example values reproduced\n";
      return 0;
    }
    out_ << failures_.size() << " mismatch(es):\n";
    for (const auto& f : failures_) out_ << "  " << f << '\n';
    return 1;
  }

 private:
  std::ostream& out_;
  std::vector<std::string> failures_;
};

}  // namespace

int run_demo_paper(std::ostream& out, const ExampleFormulas& formulas) {
  ExampleCheck check(out);
  try {
    out << "Example 1: 'Substantive' rated against the Object 'Word'\n";
    const auto first = formulas.construct(Rating(0.7));
    check.expect("construct(0.7).gamma", 0.4, first.gamma());
    check.expect("construct(0.7).alpha", 0.7, first.alpha());
    check.expect("construct(0.7).beta", 0.7, first.beta());
    check.expect("construct(0.7).delta", 1.0, first.delta());
    const auto second = formulas.adjust(first, Rating(0.5));
    check.expect("adjust(0.5).alpha", 0.6, second.alpha());
    check.expect("adjust(0.5).gamma", 0.45, second.gamma());
    check.expect("adjust(0.5).beta", 0.7, second.beta());
    check.expect("adjust(0.5).delta", 1.0, second.delta());

    out << "Example 2: decision over {Character, Word, ChaineofChar}\n";
    const std::vector<std::pair<std::string, Trapezoid>> functions{
        {"Character", Trapezoid::from_parts(0.1, 0.3, 0.6, 0.8)},
        {"Word", Trapezoid::from_parts(0.0, 0.2, 0.7, 0.9)},
        {"ChaineofChar", Trapezoid::from_parts(0.2, 0.4, 0.5, 0.7)},
    };
    const double expected[] = {0.525, 0.575, 0.475};
    std::vector<CandidateScore> scores;
    for (std::size_t i = 0; i < functions.size(); ++i) {
      const double dc = formulas.decision_coefficient(functions[i].second);
      check.expect("D_c(" + functions[i].first + ")", expected[i], dc);
      scores.push_back({functions[i].first, dc});
    }
    const auto decision = final_decision(scores);
    check.expect("D_c^f", 0.575, decision.final_coefficient);
    check.expect("chosen", std::string("Word"), decision.chosen);
  } catch (const std::exception& e) {
    out << "worked examples aborted: " << e.what() << '\n';
    return 1;
  }
  return check.finish();
}

// ---------------------------------------------------------------------------
// repl

namespace {

void print_entry(const Lexicon& lexicon, const WordDecision& word, std::ostream& out) {
  const auto* entry = lexicon.find_entry(word.surface, word.kind);
  out << "  " << std::left << std::setw(16) << "candidate" << std::setw(40)
      << "[gamma, alpha, beta, delta]" << std::setw(10) << "D_c" << "membership\n";
  for (const auto& f : entry->functions) {
    const auto& t = f.function;
    const std::string tuple = "[" + format_degree(t.gamma()) + ", " + format_degree(t.alpha()) +
                              ", " + format_degree(t.beta()) + ", " +
                              format_degree(t.delta()) + "]";
    out << "  " << std::setw(16) << f.candidate << std::setw(40) << tuple << std::setw(10)
        << format_degree(decision_coefficient(t)) << '|' << sparkline(t) << "|\n";
  }
  out << "  D_c^f = " << format_degree(word.decision.final_coefficient) << " -> "
      << word.decision.chosen;
  if (word.decision.winners.size() > 1) {
    out << " (tied with " << word.decision.winners.size() - 1 << " other candidate(s))";
  }
  out << '\n';
}

enum class Prompt { value, skip, quit };

// Reads one degree, re-prompting on malformed input.
Prompt read_degree(std::istream& in, std::ostream& out, const std::string& candidate,
                   double& value) {
  std::string line;
  while (true) {
    out << "  " << candidate << " [0..1, blank to skip]: " << std::flush;
    if (!std::getline(in, line)) return Prompt::quit;
    const auto text = trim(line);
    if (text.empty()) return Prompt::skip;
    if (fold_case(text) == "quit") return Prompt::quit;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc{} && end == text.data() + text.size() && value >= 0.0 && value <= 1.0) {
      return Prompt::value;
    }
    out << "  please enter a number between 0 and 1\n";
  }
}

}  // namespace

int run_repl(Lexicon& lexicon, const Policy& policy, std::istream& in, std::ostream& out,
             const std::function<void(const Lexicon&)>& persist) {
  out << "Ask \"how to <goal> a <object>?\" or type quit.\n";
  std::string line;
  while (true) {
    out << "fuzzylex> " << std::flush;
    if (!std::getline(in, line)) return 0;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (fold_case(text) == "quit" || fold_case(text) == "exit") return 0;

    try {
      auto session = start_session(lexicon, parse_query(text), policy);
      std::size_t shown = 0;
      while (const auto* pending = std::get_if<NeedsElicitation>(&session.state)) {
        out << "Unknown " << to_string(pending->kind) << " '" << pending->surface
            << "'. Rate how well each candidate matches it:\n";
        Ratings ratings;
        for (const auto& candidate : pending->candidates) {
          double value = 0.0;
          switch (read_degree(in, out, candidate, value)) {
            case Prompt::quit: return 0;
            case Prompt::skip: break;
            case Prompt::value: ratings.emplace_back(candidate, value); break;
          }
        }
        if (ratings.empty()) {
          out << "at least one rating required\n";
          continue;
        }
        auto outcome = submit_ratings(lexicon, session, ratings, policy);
        lexicon = std::move(outcome.lexicon);
        session = std::move(outcome.session);
        if (persist) persist(lexicon);
        if (session.decisions.size() == shown) {
          out << "final coefficient below the acceptance threshold; please rate again\n";
        }
        for (; shown < session.decisions.size(); ++shown) {
          print_entry(lexicon, session.decisions[shown], out);
        }
      }
      for (; shown < session.decisions.size(); ++shown) {
        print_entry(lexicon, session.decisions[shown], out);
      }
      out << (std::holds_alternative<Resolved>(session.state) ? "Resolved: " : "Rewritten: ")
          << rewrite(session) << '\n';
    } catch (const Error& e) {
      out << "error: " << e.what() << '\n';
    }
  }
}

}  // namespace fuzzylex
