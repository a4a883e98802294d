#pragma once

#include <map>
#include <string>
#include <vector>

#include "cmapsum/types.hpp"

namespace cmapsum::mapbuild {

// Merge key: stemmed tokens after stripping leading determiners and
// possessive pronouns, space-joined. Shared by concept merging,
// relation mapping and reference-label matching.
std::string concept_key(const Phrase& phrase);
std::string concept_key(const std::string& label);

// One concept per key. The representative label is the most frequent
// surface form (ties: shortest, then lexicographic); all forms are
// recorded. Ids are assigned in key order.
std::vector<Concept> merge_concepts(const std::vector<Phrase>& phrases);

// Groups candidate relations by unordered concept pair and keeps the
// shortest label (tokens, then characters, then lexicographic).
// Self-loops are discarded. Arguments must map onto the given concepts.
std::vector<Relation> select_relations(const std::vector<Proposition>& props,
                                       const std::vector<Concept>& concepts);

// Full candidate graph; size limit not yet enforced, connectedness not
// required. Throws on dangling relation endpoints.
ConceptMap build_graph(std::vector<Concept> concepts, std::vector<Relation> relations);

// Iteratively removes the lowest-scoring concept (tie: label) with its
// incident relations until a single connected component within the
// limit remains. The optional trace receives (concept id, score) in
// removal order.
ConceptMap extract_summary_subgraph(const ConceptMap& map,
                                    const std::map<std::string, double>& scores,
                                    int limit = 25,
                                    std::vector<std::pair<std::string, double>>* trace = nullptr);

}  // namespace cmapsum::mapbuild
