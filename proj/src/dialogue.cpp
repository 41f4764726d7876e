#include "fuzzylex/dialogue.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <regex>

#include "fuzzylex/error.hpp"

namespace fuzzylex {

namespace {

constexpr std::string_view kTemplate = "how to <goal> [a|an|the] <object>?";

std::optional<std::string>& slot_term(Session& s, TermKind kind) {
  return kind == TermKind::object ? s.object_term : s.goal_term;
}

const std::string& slot_surface(const Session& s, TermKind kind) {
  return kind == TermKind::object ? s.query.object_surface : s.query.goal_surface;
}

std::string rewrite_terms(const Session& s) {
  return "How to " + *s.goal_term + " a " + *s.object_term + "?";
}

bool meets_threshold(const DecisionResult& d, const Policy& policy) {
  return !policy.min_final_coefficient || d.final_coefficient >= *policy.min_final_coefficient;
}

std::vector<std::string> candidates_for_slot(const Lexicon& lexicon, const Session& s,
                                             TermKind kind) {
  if (kind == TermKind::goal) {
    return lexicon.candidates_for(*s.object_term, TermKind::object);
  }
  // With no known goal to ground the object, every object is a candidate.
  if (auto goal = lexicon.vocabulary().canonical(TermKind::goal, s.query.goal_surface)) {
    return lexicon.candidates_for(*goal, TermKind::goal);
  }
  return lexicon.vocabulary().terms(TermKind::object);
}

// Settles open slots in object-then-goal order until one needs ratings.
void advance(const Lexicon& lexicon, Session& s, const Policy& policy) {
  for (const auto kind : {TermKind::object, TermKind::goal}) {
    auto& term = slot_term(s, kind);
    if (term) continue;
    const auto& surface = slot_surface(s, kind);

    if (auto known = lexicon.vocabulary().canonical(kind, surface)) {
      term = std::move(known);
      continue;
    }
    if (!policy.always_elicit && lexicon.find_entry(surface, kind) != nullptr) {
      auto decision = lexicon.interpret(surface, kind);
      if (meets_threshold(decision, policy)) {
        term = decision.chosen;
        s.decisions.push_back({surface, kind, std::move(decision)});
        continue;
      }
    }
    auto candidates = candidates_for_slot(lexicon, s, kind);
    if (candidates.empty()) {
      throw_error(ErrorCode::domain_error, "no applicable candidates for " +
                                               std::string(to_string(kind)) + " '" + surface +
                                               "'");
    }
    s.state = NeedsElicitation{surface, kind, std::move(candidates)};
    return;
  }

  if (s.decisions.empty()) {
    s.state = Resolved{s.query.raw};
  } else {
    s.state = Decided{s.decisions.back().decision, rewrite_terms(s)};
  }
}

}  // namespace

Query parse_query(std::string_view text) {
  static const std::regex pattern(
      R"(^\s*how\s+to\s+([^\s?]+)\s+(?:(?:a|an|the)\s+)?([^\s?]+)\s*\??\s*$)",
      std::regex::icase | std::regex::ECMAScript);
  const std::string raw(text);
  std::smatch match;
  if (!std::regex_match(raw, match, pattern)) {
    throw_error(ErrorCode::parse_error,
                "query does not match the template \"" + std::string(kTemplate) + "\"");
  }
  return Query{match[1].str(), match[2].str(), raw};
}

std::string_view status_name(const SessionState& state) noexcept {
  switch (state.index()) {
    case 0: return "resolved";
    case 1: return "needs_ratings";
    default: return "decided";
  }
}

std::string new_session_id() {
  static thread_local std::mt19937_64 engine{[] {
    std::random_device device;
    std::seed_seq seq{device(), device(), device(), device()};
    return std::mt19937_64(seq);
  }()};
  char buffer[33];
  std::snprintf(buffer, sizeof buffer, "%016llx%016llx",
                static_cast<unsigned long long>(engine()),
                static_cast<unsigned long long>(engine()));
  return buffer;
}

Session start_session(const Lexicon& lexicon, Query query, const Policy& policy, std::string id) {
  Session s{std::move(id), std::move(query), Resolved{}, std::nullopt, std::nullopt, {}};
  advance(lexicon, s, policy);
  return s;
}

SubmitOutcome submit_ratings(const Lexicon& lexicon, const Session& session,
                             const Ratings& ratings, const Policy& policy) {
  const auto* pending = std::get_if<NeedsElicitation>(&session.state);
  if (pending == nullptr) {
    throw_error(ErrorCode::state_error, "session " + session.id + " is " +
                                            std::string(status_name(session.state)) +
                                            ", not awaiting ratings");
  }
  if (ratings.empty()) throw_error(ErrorCode::domain_error, "at least one rating required");

  // Validate everything before touching the lexicon copy.
  std::vector<std::optional<Rating>> by_candidate(pending->candidates.size());
  for (const auto& [name, value] : ratings) {
    const auto key = fold_case(name);
    const auto it = std::find_if(pending->candidates.begin(), pending->candidates.end(),
                                 [&](const std::string& c) { return fold_case(c) == key; });
    if (it == pending->candidates.end()) {
      throw_error(ErrorCode::domain_error, "'" + name + "' is not a candidate for '" +
                                               pending->surface + "'");
    }
    auto& slot = by_candidate[static_cast<std::size_t>(it - pending->candidates.begin())];
    if (slot) throw_error(ErrorCode::domain_error, "candidate '" + name + "' rated twice");
    slot = Rating(value);
  }

  SubmitOutcome out{lexicon, session};
  for (std::size_t i = 0; i < by_candidate.size(); ++i) {
    if (by_candidate[i]) {
      out.lexicon.record_rating(pending->surface, pending->kind, pending->candidates[i],
                                *by_candidate[i]);
    }
  }

  auto decision = out.lexicon.interpret(pending->surface, pending->kind);
  if (!meets_threshold(decision, policy)) return out;

  slot_term(out.session, pending->kind) = decision.chosen;
  out.session.decisions.push_back({pending->surface, pending->kind, std::move(decision)});
  advance(out.lexicon, out.session, policy);
  return out;
}

std::string rewrite(const Session& session) {
  if (std::holds_alternative<NeedsElicitation>(session.state)) {
    throw_error(ErrorCode::state_error,
                "session " + session.id + " is still waiting for ratings");
  }
  return rewrite_terms(session);
}

}  // namespace fuzzylex
