#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fuzzylex/decision.hpp"
#include "fuzzylex/lexicon.hpp"

namespace fuzzylex {

/// A query of the form "how to <goal> [a|an|the] <object>?".
struct Query {
  std::string goal_surface;
  std::string object_surface;
  std::string raw;

  friend bool operator==(const Query&, const Query&) = default;
};

/// Case-insensitive; article and trailing '?' are optional, surfaces are
/// single tokens. Throws ErrorCode::parse_error naming the template.
Query parse_query(std::string_view text);

struct Policy {
  /// Ask again even when a learned entry could decide the word.
  bool always_elicit = false;
  /// Final coefficients below this keep the word in elicitation.
  std::optional<double> min_final_coefficient;
};

/// Both words were system terms; `text` echoes the query.
struct Resolved {
  std::string text;
  friend bool operator==(const Resolved&, const Resolved&) = default;
};

/// One unknown word awaits ratings over `candidates`.
struct NeedsElicitation {
  std::string surface;
  TermKind kind;
  std::vector<std::string> candidates;
  friend bool operator==(const NeedsElicitation&, const NeedsElicitation&) = default;
};

/// Every unknown word has been interpreted. `decision` belongs to the word
/// decided last.
struct Decided {
  DecisionResult decision;
  std::string rewritten;
  friend bool operator==(const Decided&, const Decided&) = default;
};

using SessionState = std::variant<Resolved, NeedsElicitation, Decided>;

/// Decision taken for one user word during a session.
struct WordDecision {
  std::string surface;
  TermKind kind;
  DecisionResult decision;
  friend bool operator==(const WordDecision&, const WordDecision&) = default;
};

struct Session {
  std::string id;
  Query query;
  SessionState state;
  /// System terms settled so far for each slot of the query.
  std::optional<std::string> goal_term;
  std::optional<std::string> object_term;
  std::vector<WordDecision> decisions;

  friend bool operator==(const Session&, const Session&) = default;
};

std::string_view status_name(const SessionState& state) noexcept;

/// Random 128-bit hex identifier.
std::string new_session_id();

/// Settles what it can from the vocabulary and learned entries and stops at
/// the first word that needs ratings. The object is settled before the goal.
/// Throws ErrorCode::domain_error when an unknown word has no candidates.
Session start_session(const Lexicon& lexicon, Query query, const Policy& policy,
                      std::string id = new_session_id());

using Ratings = std::vector<std::pair<std::string, double>>;

struct SubmitOutcome {
  Lexicon lexicon;
  Session session;
};

/// Folds the ratings for the pending word into a copy of the lexicon,
/// decides it, and continues with the other word if it is still open.
/// Ratings are applied in the session's candidate order.
/// Throws ErrorCode::state_error outside elicitation and
/// ErrorCode::domain_error for empty ratings, non-candidates or bad degrees.
SubmitOutcome submit_ratings(const Lexicon& lexicon, const Session& session,
                             const Ratings& ratings, const Policy& policy);

/// "How to <goal> a <object>?" with system terms in both slots.
/// Throws ErrorCode::state_error while a word is still being elicited.
std::string rewrite(const Session& session);

}  // namespace fuzzylex
