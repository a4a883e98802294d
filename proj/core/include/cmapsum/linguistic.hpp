#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cmapsum/types.hpp"

namespace cmapsum::ling {

// Word -> Penn tag frequencies, highest count first.
class Lexicon {
 public:
  using TagCounts = std::vector<std::pair<std::string, int>>;

  void add(const std::string& word, const std::string& tag, int count);
  const TagCounts* lookup(const std::string& word) const;
  bool has_tag(const std::string& word, std::string_view tag_prefix) const;
  std::size_t size() const { return entries_.size(); }

  static Lexicon from_stream(std::istream& in, const std::string& name = "<lexicon>");

 private:
  std::unordered_map<std::string, TagCounts> entries_;
};

// Bundled resources, loaded once from the data directory (see
// resources.cpp for the lookup order).
const Lexicon& default_lexicon();
const std::set<std::string>& abbreviations();
std::filesystem::path data_dir();

// Splits on whitespace and punctuation; abbreviations and internal
// periods (e.g. "U.S.") keep their dot. Token text always equals the
// covered slice of the input, so the original text can be rebuilt from
// spans. Tokens carry no POS/stem yet.
std::vector<Token> tokenize(std::string_view text);

// Partitions tokens into sentences at sentence-final punctuation.
// Trailing closers (quotes, brackets) attach to the finished sentence.
std::vector<Sentence> split_sentences(std::vector<Token> tokens);

// Lexicon lookup with suffix and local context rules; unknown words
// fall back to NN/NNP by capitalization. Deterministic.
void pos_tag(Sentence& sentence, const Lexicon& lexicon = default_lexicon());

// Fills token.stem (Porter over the lowercased text).
void stem_tokens(Sentence& sentence);

// Noun phrase chunk: token index range [begin, end) within a sentence.
struct Chunk {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Maximal non-overlapping matches of
//   (DT|PRP$)? (JJ|JJR|JJS|VBN|VBG)* (NN|NNS|NNP|NNPS)+
// optionally extended once by "of" + another base NP.
std::vector<Chunk> chunk_np(const Sentence& sentence, bool merge_of = false);

// Tokenize + split + tag + stem, in place.
void annotate(Document& doc, const Lexicon& lexicon = default_lexicon());
void annotate(TopicCluster& cluster, const Lexicon& lexicon = default_lexicon());

// CoNLL-style pre-annotated input: one "token<TAB>tag" per line, blank
// line between sentences. Lets callers substitute a stronger tagger.
std::vector<Sentence> read_conll(std::istream& in, const std::string& name = "<conll>");

// Builds a document from CoNLL input; raw text is the space-joined
// token stream and spans are synthesized accordingly.
Document document_from_conll(const std::string& id, std::istream& in);

}  // namespace cmapsum::ling
