#include "cmapsum/errors.hpp"
#include "cmapsum/linguistic.hpp"

namespace cmapsum::ling {

namespace {

bool is_det(const std::string& tag) { return tag == "DT" || tag == "PRP$"; }

bool is_modifier(const std::string& tag) {
  return tag == "JJ" || tag == "JJR" || tag == "JJS" || tag == "VBN" || tag == "VBG";
}

bool is_noun(const std::string& tag) {
  return tag == "NN" || tag == "NNS" || tag == "NNP" || tag == "NNPS";
}

// Longest base NP starting at `start`: (DT|PRP$)? (JJ|...)* (NN|...)+.
// Returns end index (exclusive), or `start` when there is no match.
std::size_t match_base_np(const Sentence& sentence, std::size_t start) {
  const auto& toks = sentence.tokens;
  std::size_t i = start;
  if (i < toks.size() && is_det(toks[i].pos)) ++i;
  while (i < toks.size() && is_modifier(toks[i].pos)) ++i;
  std::size_t nouns = 0;
  while (i < toks.size() && is_noun(toks[i].pos)) {
    ++i;
    ++nouns;
  }
  return nouns > 0 ? i : start;
}

}  // namespace

std::vector<Chunk> chunk_np(const Sentence& sentence, bool merge_of) {
  const auto& toks = sentence.tokens;
  for (const auto& tok : toks) {
    if (tok.pos.empty()) {
      throw ValidationError("chunk_np: sentence is not POS tagged");
    }
  }

  std::vector<Chunk> chunks;
  std::size_t i = 0;
  while (i < toks.size()) {
    const std::size_t end = match_base_np(sentence, i);
    if (end == i) {
      ++i;
      continue;
    }
    std::size_t chunk_end = end;
    if (merge_of && chunk_end < toks.size() && toks[chunk_end].text == "of") {
      const std::size_t extended = match_base_np(sentence, chunk_end + 1);
      if (extended > chunk_end + 1) chunk_end = extended;
    }
    chunks.push_back({i, chunk_end});
    i = chunk_end;
  }
  return chunks;
}

}  // namespace cmapsum::ling
