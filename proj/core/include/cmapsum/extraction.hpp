#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cmapsum/linguistic.hpp"
#include "cmapsum/types.hpp"

namespace cmapsum::extraction {

struct ExtractionOptions {
  bool merge_of_chunks = false;
  std::size_t max_relation_tokens = 10;  // longer candidate relations are dropped
};

// For each ordered pair of NP chunks, emits a proposition when the
// intervening span contains at least one verb. The relation is the
// intervening span with edge punctuation trimmed; confidence comes
// from score_confidence.
std::vector<Proposition> extract_propositions(const Sentence& sentence,
                                              const std::string& document_id,
                                              const ExtractionOptions& opts = {});

std::vector<Proposition> extract_propositions(const Document& doc,
                                              const ExtractionOptions& opts = {});
std::vector<Proposition> extract_propositions(const TopicCluster& cluster,
                                              const ExtractionOptions& opts = {});

// Deterministic logistic-shaped heuristic. Weight table (applied to the
// logit, then squashed through 1/(1+e^-z)):
//   +1.20  bias
//   -0.25  per relation token beyond the first
//   -0.15  per token of argument gap beyond the relation itself
//   +0.90  exactly one finite verb (VBZ/VBD/VBP/MD) in the relation
//   -1.50  clause punctuation (. ! ? ; : ,) inside the relation
// The two-argument overload passes the argument gap explicitly; the
// single-argument form assumes the gap equals the relation length.
double score_confidence(const Proposition& p);
double score_confidence(const Proposition& p, std::size_t arg_gap_tokens);

// Keeps propositions with confidence >= threshold, stable order.
std::vector<Proposition> filter_by_confidence(std::vector<Proposition> props,
                                              double threshold = 0.5);

// Splits top-level NP coordination in either argument into one
// proposition per conjunct; relations are never split.
std::vector<Proposition> split_conjunctions(const Proposition& p);
std::vector<Proposition> split_conjunctions(const std::vector<Proposition>& props);

// Removes duplicates on (stemmed arg1, stemmed relation, stemmed arg2),
// keeping the highest-confidence instance at its first position.
std::vector<Proposition> dedupe(std::vector<Proposition> props);

}  // namespace cmapsum::extraction
