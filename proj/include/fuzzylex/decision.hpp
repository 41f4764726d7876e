#pragma once

#include <span>
#include <string>
#include <vector>

#include "fuzzylex/trapezoid.hpp"

namespace fuzzylex {

struct CandidateScore {
  std::string candidate;
  double coefficient;

  friend bool operator==(const CandidateScore&, const CandidateScore&) = default;
};

/// Outcome of ranking the candidate terms of one user word.
struct DecisionResult {
  double final_coefficient;
  std::vector<std::string> winners;  // every argmax candidate, input order
  std::string chosen;                // winners.front()
  std::vector<CandidateScore> scores;

  friend bool operator==(const DecisionResult&, const DecisionResult&) = default;
};

/// (alpha + 3 beta) / 4. Weighs the upper nucleus stone so that nuclei with
/// equal centres but different widths still rank apart.
double decision_coefficient(const Trapezoid& t) noexcept;

/// Maximum coefficient and its argmax set. Ties keep input order and the
/// first one is chosen. Throws ErrorCode::domain_error on an empty list.
DecisionResult final_decision(std::span<const CandidateScore> scores);

}  // namespace fuzzylex
