#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "fuzzylex/decision.hpp"
#include "fuzzylex/dialogue.hpp"
#include "fuzzylex/lexicon.hpp"
#include "fuzzylex/trapezoid.hpp"

namespace fuzzylex {

/// Shortest decimal text that reads back to the same double.
std::string format_degree(double value);

/// 21 samples of the membership function over [0, 1] as an ASCII ramp.
std::string sparkline(const Trapezoid& t);

/// One row of a simulation CSV: surface,kind,candidate,theta.
struct SimulationRecord {
  std::string surface;
  TermKind kind;
  std::string candidate;
  Rating theta;
};

/// Reads the header row and every record. Throws ErrorCode::parse_error
/// or ErrorCode::domain_error with the 1-based line number.
std::vector<SimulationRecord> read_simulation(std::istream& csv);

/// Folds the records in order. Candidates missing from the vocabulary are
/// registered under the record's kind first.
void fold_records(Lexicon& lexicon, const std::vector<SimulationRecord>& records);

/// CSV with one row per learned function: its stones, counters, its
/// coefficient and the word's final coefficient and choice.
void write_report(const Lexicon& lexicon, std::ostream& out);

/// The formulas exercised by the worked-example self check. Swappable so
/// the check itself can be tested against a broken formula.
struct ExampleFormulas {
  std::function<Trapezoid(Rating)> construct = fuzzylex::construct;
  std::function<Trapezoid(const Trapezoid&, Rating)> adjust = fuzzylex::adjust;
  std::function<double(const Trapezoid&)> decision_coefficient = fuzzylex::decision_coefficient;
};

/// Recomputes both worked examples and prints expected against computed
/// values. Returns 0 when every quantity matches within 1e-12, else 1.
int run_demo_paper(std::ostream& out, const ExampleFormulas& formulas = {});

/// Terminal dialogue. `persist` runs after every committed decision.
/// Returns the exit code.
int run_repl(Lexicon& lexicon, const Policy& policy, std::istream& in, std::ostream& out,
             const std::function<void(const Lexicon&)>& persist);

}  // namespace fuzzylex
