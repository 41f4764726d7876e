#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fuzzylex/decision.hpp"
#include "fuzzylex/trapezoid.hpp"

namespace fuzzylex {

enum class TermKind { object, goal };

/// "Object" or "Goal".
std::string_view to_string(TermKind kind) noexcept;

/// Case-insensitive inverse of to_string. Throws ErrorCode::domain_error.
TermKind parse_term_kind(std::string_view text);

/// ASCII lower-casing used for every identifier and surface comparison.
std::string fold_case(std::string_view text);

/// System Objects and Goals plus the relation saying which goals apply to
/// which objects. Identifiers keep their original casing and are unique per
/// kind under case-insensitive comparison. Every list preserves insertion order.
class Vocabulary {
 public:
  /// Throws ErrorCode::domain_error for an empty identifier and
  /// ErrorCode::conflict when the identifier already exists under `kind`.
  void add_term(TermKind kind, std::string identifier);

  /// Idempotent. Throws ErrorCode::not_found when either term is missing.
  void set_applicable(std::string_view goal, std::string_view object);

  bool contains(TermKind kind, std::string_view identifier) const;

  /// The stored spelling of `identifier`, if present.
  std::optional<std::string> canonical(TermKind kind, std::string_view identifier) const;

  const std::vector<std::string>& terms(TermKind kind) const noexcept;

  /// (goal, object) pairs in insertion order.
  const std::vector<std::pair<std::string, std::string>>& applicability() const noexcept {
    return applicability_;
  }

  bool applicable(std::string_view goal, std::string_view object) const;

  /// Goals applicable to a known object, or objects a known goal applies
  /// to, in the order the pairs were added. Throws ErrorCode::not_found
  /// for an unknown term.
  std::vector<std::string> candidates_for(std::string_view known, TermKind known_kind) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.objects_ == b.objects_ && a.goals_ == b.goals_ &&
           a.applicability_ == b.applicability_;
  }

 private:
  std::vector<std::string>& terms_mut(TermKind kind) noexcept;
  std::map<std::string, std::size_t>& index_mut(TermKind kind) noexcept;
  const std::map<std::string, std::size_t>& index(TermKind kind) const noexcept;

  std::vector<std::string> objects_;
  std::vector<std::string> goals_;
  std::map<std::string, std::size_t> object_index_;
  std::map<std::string, std::size_t> goal_index_;
  std::vector<std::pair<std::string, std::string>> applicability_;
  std::map<std::pair<std::string, std::string>, std::size_t> applicability_index_;
};

struct LearnedFunction {
  std::string candidate;
  Trapezoid function;

  friend bool operator==(const LearnedFunction&, const LearnedFunction&) = default;
};

/// Everything learned about one user word: a membership function per
/// candidate system term of the same kind, in the order they were first rated.
struct UserWordEntry {
  std::string surface;
  TermKind kind;
  std::vector<LearnedFunction> functions;

  const Trapezoid* find(std::string_view candidate) const;

  friend bool operator==(const UserWordEntry&, const UserWordEntry&) = default;
};

/// The vocabulary together with every learned user word. Lookups on
/// surfaces and identifiers are case-insensitive.
///
/// Plain value type: copies are independent snapshots. Mutators either
/// succeed completely or throw without changing the lexicon.
class Lexicon {
 public:
  Lexicon() = default;

  const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
  const std::vector<UserWordEntry>& entries() const noexcept { return entries_; }
  const UserWordEntry* find_entry(std::string_view surface, TermKind kind) const;

  void add_term(TermKind kind, std::string identifier);
  void set_applicable(std::string_view goal, std::string_view object);
  std::vector<std::string> candidates_for(std::string_view known, TermKind known_kind) const {
    return vocabulary_.candidates_for(known, known_kind);
  }

  /// Constructs the function for (surface, candidate) from the first rating
  /// and adjusts it with every later one. Returns the stored function.
  const Trapezoid& record_rating(std::string_view surface, TermKind kind,
                                 std::string_view candidate, Rating theta);

  /// Scores every learned candidate of the entry and picks the maximum.
  DecisionResult interpret(std::string_view surface, TermKind kind) const;

  /// Swaps in a new vocabulary. Throws ErrorCode::conflict when a learned
  /// function would lose its candidate term; the lexicon is left unchanged.
  void replace_vocabulary(Vocabulary vocabulary);

  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.vocabulary_ == b.vocabulary_ && a.entries_ == b.entries_;
  }

 private:
  using EntryKey = std::pair<std::string, TermKind>;

  void add_entry(UserWordEntry entry);

  Vocabulary vocabulary_;
  std::vector<UserWordEntry> entries_;
  std::map<EntryKey, std::size_t> entry_index_;

  friend Lexicon lexicon_from_json(const nlohmann::json& document);
};

inline constexpr std::string_view kLexiconSchema = "fuzzylex-v1";

nlohmann::json to_json(const Lexicon& lexicon);
nlohmann::json to_json(const Vocabulary& vocabulary);
nlohmann::json to_json(const Trapezoid& t);

/// Throws ErrorCode::parse_error naming the offending field, including an
/// unsupported `version`.
Lexicon lexicon_from_json(const nlohmann::json& document);
Vocabulary vocabulary_from_json(const nlohmann::json& document, std::string_view where = "vocabulary");

std::string serialize(const Lexicon& lexicon);
/// Throws ErrorCode::parse_error with line and column for malformed JSON.
Lexicon parse_lexicon(std::string_view text);

/// Writes a temporary sibling file and renames it over `destination`.
void save(const Lexicon& lexicon, const std::filesystem::path& destination);
Lexicon load(const std::filesystem::path& source);

}  // namespace fuzzylex
