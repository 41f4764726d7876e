#include "fuzzylex/decision.hpp"

#include <algorithm>
#include <cmath>

#include "fuzzylex/error.hpp"

namespace fuzzylex {

double decision_coefficient(const Trapezoid& t) noexcept {
  // Single rounding for alpha + 3 beta; the division by 4 is exact.
  const double dc = std::fma(3.0, t.beta(), t.alpha()) / 4.0;
  return std::clamp(dc, t.alpha(), t.beta());
}

DecisionResult final_decision(std::span<const CandidateScore> scores) {
  if (scores.empty()) throw_error(ErrorCode::domain_error, "no candidates");

  double best = scores.front().coefficient;
  for (const auto& s : scores) best = std::max(best, s.coefficient);

  DecisionResult result{best, {}, {}, {scores.begin(), scores.end()}};
  for (const auto& s : scores) {
    if (s.coefficient == best) result.winners.push_back(s.candidate);
  }
  result.chosen = result.winners.front();
  return result;
}

}  // namespace fuzzylex
