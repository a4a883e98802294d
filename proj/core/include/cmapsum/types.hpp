#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cmapsum {

// Character offsets into a document's raw text, end exclusive.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

struct Token {
  std::string text;
  std::string pos;   // Penn-style tag, empty until tagged
  std::string stem;  // empty until stemmed
  Span span;
  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::size_t index = 0;
  std::vector<Token> tokens;
};

struct Document {
  std::string id;
  std::string raw_text;
  std::vector<Sentence> sentences;

  bool tokenized() const { return !sentences.empty(); }
  std::size_t token_count() const;
};

struct TopicCluster {
  std::string id;
  std::string description;  // the topic prompt shown in crowd tasks
  std::vector<Document> documents;

  std::size_t token_count() const;
};

// Throws ValidationError if ids clash, the cluster is empty, the
// description is missing, or token spans are out of range / overlapping.
void validate(const TopicCluster& cluster);

// A contiguous run of tokens lifted out of a sentence. The label is the
// whitespace-joined surface string.
struct Phrase {
  std::vector<Token> tokens;
  std::string label;

  static Phrase of(std::vector<Token> tokens);

  bool empty() const { return tokens.empty(); }
  std::size_t size() const { return tokens.size(); }

  // Space-joined token stems; falls back to stemming the lowercased
  // text for tokens that have not been stemmed yet.
  std::string stem_key() const;
};

struct Provenance {
  std::string document_id;
  std::size_t sentence_index = 0;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// (argument, relation, argument) tuple; the unit of extraction,
// annotation and matching.
struct Proposition {
  std::string id;
  Phrase arg1;
  Phrase relation;
  Phrase arg2;
  double confidence = 0.0;
  std::optional<double> suitability;  // unset until filtered
  std::optional<double> importance;   // unset until annotated
  Provenance provenance;
};

void validate(const Proposition& p);

struct Concept {
  std::string id;
  std::string label;
  std::set<std::string> surface_forms;  // merged labels; contains `label`
  double score = 0.0;
};

struct Relation {
  std::string source;  // concept id
  std::string target;  // concept id
  std::string label;
  Provenance provenance;
};

// Labeled graph of concepts and relations. Summary maps must be
// connected (undirected view) and hold at most `size_limit` concepts.
struct ConceptMap {
  std::vector<Concept> concepts;
  std::vector<Relation> relations;
  int size_limit = 25;

  const Concept* find_concept(const std::string& id) const;
  bool connected() const;

  // Human-readable invariant violations; empty means valid. With
  // `summary` set, connectedness, the size limit and label uniqueness
  // are enforced on top of the structural checks.
  std::vector<std::string> violations(bool summary = true) const;
};

// Throws ValidationError listing every violated invariant.
void validate_map(const ConceptMap& map, bool summary = true);

}  // namespace cmapsum
