#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cmapsum/types.hpp"

namespace cmapsum::eval {

struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static PRF from_pr(double precision, double recall);
};

// Optional word -> synonym set table for METEOR's third match stage.
// File format: word<TAB>comma,joined,synonyms
class SynonymTable {
 public:
  void add(const std::string& word, const std::vector<std::string>& synonyms);
  bool related(const std::string& a, const std::string& b) const;
  bool empty() const { return table_.empty(); }

  static SynonymTable from_stream(std::istream& in, const std::string& name = "<synonyms>");
  static SynonymTable load(const std::filesystem::path& path);

 private:
  std::map<std::string, std::set<std::string>> table_;
};

struct MeteorParams {
  double alpha = 0.9;
  double beta = 3.0;
  double gamma = 0.5;
  // Exhaustive alignment search up to this many tokens per side; the
  // polynomial matcher takes over beyond it.
  std::size_t exhaustive_limit = 12;
  const SynonymTable* synonyms = nullptr;
};

// "arg1 relation arg2", single-space joined, lowercased, trimmed.
std::string proposition_string(const Proposition& p);
std::string proposition_string(const ConceptMap& map, const Relation& relation);
std::vector<std::string> proposition_strings(const ConceptMap& map);

// Proposition-level exact match after token-wise stemming.
PRF strict_match(const ConceptMap& gen, const ConceptMap& ref,
                 std::vector<std::string>* warnings = nullptr);

// Unigram-alignment METEOR over two token lists: staged matching
// (exact, then stem, then synonyms), Fmean = PR/(alpha*P+(1-alpha)*R),
// penalty = gamma*(chunks/m)^beta, score = (1-penalty)*Fmean.
double meteor_score(std::span<const std::string> hyp, std::span<const std::string> ref,
                    const MeteorParams& params = {});

// Alignment internals exposed for the exhaustive-vs-greedy oracle test.
struct MeteorAlignment {
  std::size_t matches = 0;
  std::size_t chunks = 0;
};
enum class AlignMode { kAuto, kExhaustive, kGreedy };
MeteorAlignment align_unigrams(std::span<const std::string> hyp,
                               std::span<const std::string> ref, const MeteorParams& params,
                               AlignMode mode = AlignMode::kAuto);

// Precision: mean over generated propositions of the best METEOR score
// against any reference proposition; recall symmetric; F1 harmonic.
PRF meteor_prf(const ConceptMap& gen, const ConceptMap& ref, const MeteorParams& params = {},
               std::vector<std::string>* warnings = nullptr);

// Clipped bigram overlap between the stemmed concatenations of all
// proposition strings (sorted per side for determinism).
PRF rouge2(const ConceptMap& gen, const ConceptMap& ref,
           std::vector<std::string>* warnings = nullptr);

struct MatchDetail {
  std::string generated;
  std::string reference;  // best-matching reference proposition
  double score = 0.0;     // 1.0 for strict matches
};

struct EvalReport {
  PRF strict;
  PRF meteor;
  PRF rouge2;
  std::vector<MatchDetail> strict_matches;
  std::vector<MatchDetail> meteor_matches;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

// Validates both maps, runs all three metrics.
EvalReport evaluate_map(const ConceptMap& gen, const ConceptMap& ref,
                        const MeteorParams& params = {});

}  // namespace cmapsum::eval
