#include "fuzzylex/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <system_error>

#include "fuzzylex/error.hpp"

namespace fuzzylex {

using nlohmann::json;

std::string_view to_string(TermKind kind) noexcept {
  return kind == TermKind::object ? "Object" : "Goal";
}

TermKind parse_term_kind(std::string_view text) {
  const auto folded = fold_case(text);
  if (folded == "object") return TermKind::object;
  if (folded == "goal") return TermKind::goal;
  throw_error(ErrorCode::domain_error,
              "term kind must be Object or Goal, got '" + std::string(text) + "'");
}

std::string fold_case(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// ---------------------------------------------------------------------------
// Vocabulary

std::vector<std::string>& Vocabulary::terms_mut(TermKind kind) noexcept {
  return kind == TermKind::object ? objects_ : goals_;
}

const std::vector<std::string>& Vocabulary::terms(TermKind kind) const noexcept {
  return kind == TermKind::object ? objects_ : goals_;
}

std::map<std::string, std::size_t>& Vocabulary::index_mut(TermKind kind) noexcept {
  return kind == TermKind::object ? object_index_ : goal_index_;
}

const std::map<std::string, std::size_t>& Vocabulary::index(TermKind kind) const noexcept {
  return kind == TermKind::object ? object_index_ : goal_index_;
}

void Vocabulary::add_term(TermKind kind, std::string identifier) {
  if (identifier.empty()) {
    throw_error(ErrorCode::domain_error,
                std::string(to_string(kind)) + " identifier must not be empty");
  }
  auto key = fold_case(identifier);
  auto& idx = index_mut(kind);
  if (idx.contains(key)) {
    throw_error(ErrorCode::conflict,
                std::string(to_string(kind)) + " '" + identifier + "' already exists");
  }
  auto& list = terms_mut(kind);
  idx.emplace(std::move(key), list.size());
  list.push_back(std::move(identifier));
}

bool Vocabulary::contains(TermKind kind, std::string_view identifier) const {
  return index(kind).contains(fold_case(identifier));
}

std::optional<std::string> Vocabulary::canonical(TermKind kind, std::string_view identifier) const {
  const auto& idx = index(kind);
  const auto it = idx.find(fold_case(identifier));
  if (it == idx.end()) return std::nullopt;
  return terms(kind)[it->second];
}

void Vocabulary::set_applicable(std::string_view goal, std::string_view object) {
  auto g = canonical(TermKind::goal, goal);
  if (!g) throw_error(ErrorCode::not_found, "unknown Goal '" + std::string(goal) + "'");
  auto o = canonical(TermKind::object, object);
  if (!o) throw_error(ErrorCode::not_found, "unknown Object '" + std::string(object) + "'");

  auto key = std::make_pair(fold_case(*g), fold_case(*o));
  if (applicability_index_.contains(key)) return;
  applicability_index_.emplace(std::move(key), applicability_.size());
  applicability_.emplace_back(std::move(*g), std::move(*o));
}

bool Vocabulary::applicable(std::string_view goal, std::string_view object) const {
  return applicability_index_.contains({fold_case(goal), fold_case(object)});
}

std::vector<std::string> Vocabulary::candidates_for(std::string_view known,
                                                    TermKind known_kind) const {
  const auto term = canonical(known_kind, known);
  if (!term) {
    throw_error(ErrorCode::not_found,
                "unknown " + std::string(to_string(known_kind)) + " '" + std::string(known) + "'");
  }
  std::vector<std::string> out;
  for (const auto& [goal, object] : applicability_) {
    if (known_kind == TermKind::object && object == *term) out.push_back(goal);
    if (known_kind == TermKind::goal && goal == *term) out.push_back(object);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lexicon

const Trapezoid* UserWordEntry::find(std::string_view candidate) const {
  const auto key = fold_case(candidate);
  for (const auto& f : functions) {
    if (fold_case(f.candidate) == key) return &f.function;
  }
  return nullptr;
}

const UserWordEntry* Lexicon::find_entry(std::string_view surface, TermKind kind) const {
  const auto it = entry_index_.find({fold_case(surface), kind});
  return it == entry_index_.end() ? nullptr : &entries_[it->second];
}

void Lexicon::add_term(TermKind kind, std::string identifier) {
  vocabulary_.add_term(kind, std::move(identifier));
}

void Lexicon::set_applicable(std::string_view goal, std::string_view object) {
  vocabulary_.set_applicable(goal, object);
}

void Lexicon::add_entry(UserWordEntry entry) {
  entry_index_.emplace(EntryKey{fold_case(entry.surface), entry.kind}, entries_.size());
  entries_.push_back(std::move(entry));
}

const Trapezoid& Lexicon::record_rating(std::string_view surface, TermKind kind,
                                        std::string_view candidate, Rating theta) {
  if (surface.empty()) throw_error(ErrorCode::domain_error, "user word must not be empty");
  auto term = vocabulary_.canonical(kind, candidate);
  if (!term) {
    throw_error(ErrorCode::not_found,
                "unknown " + std::string(to_string(kind)) + " '" + std::string(candidate) + "'");
  }

  const auto it = entry_index_.find({fold_case(surface), kind});
  if (it == entry_index_.end()) {
    add_entry(UserWordEntry{std::string(surface), kind, {{std::move(*term), construct(theta)}}});
    return entries_.back().functions.back().function;
  }

  auto& functions = entries_[it->second].functions;
  const auto key = fold_case(*term);
  for (auto& f : functions) {
    if (fold_case(f.candidate) == key) {
      f.function = adjust(f.function, theta);
      return f.function;
    }
  }
  functions.push_back({std::move(*term), construct(theta)});
  return functions.back().function;
}

DecisionResult Lexicon::interpret(std::string_view surface, TermKind kind) const {
  const auto* entry = find_entry(surface, kind);
  if (entry == nullptr) {
    throw_error(ErrorCode::not_found, "no learned " + std::string(to_string(kind)) + " '" +
                                          std::string(surface) + "'");
  }
  if (entry->functions.empty()) {
    throw_error(ErrorCode::internal_error,
                "learned word '" + entry->surface + "' has no membership functions");
  }
  std::vector<CandidateScore> scores;
  scores.reserve(entry->functions.size());
  for (const auto& f : entry->functions) {
    scores.push_back({f.candidate, decision_coefficient(f.function)});
  }
  return final_decision(scores);
}

void Lexicon::replace_vocabulary(Vocabulary vocabulary) {
  for (const auto& entry : entries_) {
    for (const auto& f : entry.functions) {
      if (!vocabulary.contains(entry.kind, f.candidate)) {
        throw_error(ErrorCode::conflict,
                    "removing " + std::string(to_string(entry.kind)) + " '" + f.candidate +
                        "' would orphan the learned word '" + entry.surface + "'");
      }
    }
  }
  // Learned functions keep pointing at the new spelling of their candidate.
  for (auto& entry : entries_) {
    for (auto& f : entry.functions) f.candidate = *vocabulary.canonical(entry.kind, f.candidate);
  }
  vocabulary_ = std::move(vocabulary);
}

// ---------------------------------------------------------------------------
// JSON document

json to_json(const Trapezoid& t) {
  return json{{"gamma", t.gamma()},           {"alpha", t.alpha()},
              {"beta", t.beta()},             {"delta", t.delta()},
              {"left_count", t.left_count()}, {"right_count", t.right_count()}};
}

json to_json(const Vocabulary& vocabulary) {
  json applicability = json::array();
  for (const auto& [goal, object] : vocabulary.applicability()) {
    applicability.push_back(json::array({goal, object}));
  }
  return json{{"objects", vocabulary.terms(TermKind::object)},
              {"goals", vocabulary.terms(TermKind::goal)},
              {"applicability", std::move(applicability)}};
}

json to_json(const Lexicon& lexicon) {
  json entries = json::array();
  for (const auto& entry : lexicon.entries()) {
    json functions = json::array();
    for (const auto& f : entry.functions) {
      json item = to_json(f.function);
      item["candidate"] = f.candidate;
      functions.push_back(std::move(item));
    }
    entries.push_back(json{{"surface", entry.surface},
                           {"kind", to_string(entry.kind)},
                           {"functions", std::move(functions)}});
  }
  return json{{"version", kLexiconSchema},
              {"vocabulary", to_json(lexicon.vocabulary())},
              {"entries", std::move(entries)}};
}

namespace {

[[noreturn]] void schema_error(std::string_view where, const std::string& what) {
  throw_error(ErrorCode::parse_error, std::string(where) + ": " + what);
}

const json& member(const json& object, const char* key, std::string_view where) {
  if (!object.is_object()) schema_error(where, "expected an object");
  const auto it = object.find(key);
  if (it == object.end()) schema_error(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string string_at(const json& value, std::string_view where) {
  if (!value.is_string()) schema_error(where, "expected a string");
  return value.get<std::string>();
}

const json& array_at(const json& value, std::string_view where) {
  if (!value.is_array()) schema_error(where, "expected an array");
  return value;
}

double number_field(const json& object, const char* key, std::string_view where) {
  const auto& v = member(object, key, where);
  if (!v.is_number()) schema_error(std::string(where) + "." + key, "expected a number");
  return v.get<double>();
}

Trapezoid::Count count_field(const json& object, const char* key, std::string_view where) {
  const auto& v = member(object, key, where);
  if (!v.is_number_unsigned()) {
    schema_error(std::string(where) + "." + key, "expected a positive integer");
  }
  return v.get<Trapezoid::Count>();
}

std::string indexed(std::string_view base, std::size_t i) {
  return std::string(base) + "[" + std::to_string(i) + "]";
}

}  // namespace

Vocabulary vocabulary_from_json(const json& document, std::string_view where) {
  Vocabulary vocabulary;
  const std::string base(where);
  try {
    for (const auto kind : {TermKind::object, TermKind::goal}) {
      const char* key = kind == TermKind::object ? "objects" : "goals";
      const auto path = base + "." + key;
      const auto& list = array_at(member(document, key, where), path);
      for (std::size_t i = 0; i < list.size(); ++i) {
        vocabulary.add_term(kind, string_at(list[i], indexed(path, i)));
      }
    }
    const auto path = base + ".applicability";
    const auto& pairs = array_at(member(document, "applicability", where), path);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto at = indexed(path, i);
      if (!pairs[i].is_array() || pairs[i].size() != 2) {
        schema_error(at, "expected a [goal, object] pair");
      }
      vocabulary.set_applicable(string_at(pairs[i][0], at + "[0]"),
                                string_at(pairs[i][1], at + "[1]"));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse_error) throw;
    schema_error(where, e.what());
  }
  return vocabulary;
}

Lexicon lexicon_from_json(const json& document) {
  const auto& version = member(document, "version", "document");
  if (!version.is_string() || version.get<std::string>() != kLexiconSchema) {
    throw_error(ErrorCode::parse_error, "unsupported lexicon version " + version.dump() +
                                            " (expected \"" + std::string(kLexiconSchema) +
                                            "\")");
  }

  Lexicon lexicon;
  lexicon.vocabulary_ = vocabulary_from_json(member(document, "vocabulary", "document"));

  const auto& entries = array_at(member(document, "entries", "document"), "entries");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto at = indexed("entries", i);
    const auto& item = entries[i];
    auto surface = string_at(member(item, "surface", at), at + ".surface");
    if (surface.empty()) schema_error(at + ".surface", "must not be empty");
    TermKind kind;
    try {
      kind = parse_term_kind(string_at(member(item, "kind", at), at + ".kind"));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::parse_error) throw;
      schema_error(at + ".kind", e.what());
    }
    if (lexicon.find_entry(surface, kind) != nullptr) {
      schema_error(at, "duplicate entry for '" + surface + "'");
    }

    UserWordEntry entry{std::move(surface), kind, {}};
    const auto fpath = at + ".functions";
    const auto& functions = array_at(member(item, "functions", at), fpath);
    if (functions.empty()) schema_error(fpath, "an entry needs at least one function");
    for (std::size_t j = 0; j < functions.size(); ++j) {
      const auto fat = indexed(fpath, j);
      const auto& fn = functions[j];
      const auto candidate = string_at(member(fn, "candidate", fat), fat + ".candidate");
      const auto term = lexicon.vocabulary_.canonical(kind, candidate);
      if (!term) {
        schema_error(fat + ".candidate", "unknown " + std::string(to_string(kind)) + " '" +
                                             candidate + "'");
      }
      if (entry.find(*term) != nullptr) {
        schema_error(fat + ".candidate", "duplicate candidate '" + candidate + "'");
      }
      const double gamma = number_field(fn, "gamma", fat);
      const double alpha = number_field(fn, "alpha", fat);
      const double beta = number_field(fn, "beta", fat);
      const double delta = number_field(fn, "delta", fat);
      const auto left = count_field(fn, "left_count", fat);
      const auto right = count_field(fn, "right_count", fat);
      try {
        entry.functions.push_back(
            {*term, Trapezoid::from_parts(gamma, alpha, beta, delta, left, right)});
      } catch (const Error& e) {
        schema_error(fat, e.what());
      }
    }
    lexicon.add_entry(std::move(entry));
  }
  return lexicon;
}

std::string serialize(const Lexicon& lexicon) { return to_json(lexicon).dump(2) + "\n"; }

Lexicon parse_lexicon(std::string_view text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    throw_error(ErrorCode::parse_error, std::string("malformed lexicon document: ") + e.what());
  }
  return lexicon_from_json(document);
}

void save(const Lexicon& lexicon, const std::filesystem::path& destination) {
  auto temporary = destination;
  temporary += ".tmp";
  {
    std::ofstream out(temporary, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw_error(ErrorCode::internal_error, "cannot write " + temporary.string());
    }
    out << serialize(lexicon);
    out.flush();
    if (!out) throw_error(ErrorCode::internal_error, "failed writing " + temporary.string());
  }
  std::error_code ec;
  std::filesystem::rename(temporary, destination, ec);
  if (ec) {
    std::filesystem::remove(temporary, ec);
    throw_error(ErrorCode::internal_error,
                "cannot replace " + destination.string() + ": " + ec.message());
  }
}

Lexicon load(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw_error(ErrorCode::not_found, "cannot open lexicon " + source.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_lexicon(buffer.str());
}

}  // namespace fuzzylex
