#include "cmapsum/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <span>

#include "cmapsum/errors.hpp"

namespace cmapsum::extraction {

namespace {

bool is_verb_tag(const std::string& tag) { return tag.starts_with("VB"); }

bool is_finite_tag(const std::string& tag) {
  return tag == "VBZ" || tag == "VBD" || tag == "VBP" || tag == "MD";
}

bool is_clause_punct(const std::string& text) {
  return text == "." || text == "!" || text == "?" || text == ";" || text == ":" ||
         text == ",";
}

bool is_punct_token(const Token& tok) {
  return !tok.text.empty() &&
         std::all_of(tok.text.begin(), tok.text.end(),
                     [](char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; });
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct ConfidenceFeatures {
  std::size_t relation_tokens = 0;
  std::size_t gap_tokens = 0;
  bool one_finite_verb = false;
  bool clause_punct = false;
};

double confidence_from_features(const ConfidenceFeatures& f) {
  const double extra_rel = std::max(0.0, static_cast<double>(f.relation_tokens) - 1.0);
  const double extra_gap =
      std::max(0.0, static_cast<double>(f.gap_tokens) - static_cast<double>(f.relation_tokens));
  const double z = 1.20 - 0.25 * extra_rel - 0.15 * extra_gap +
                   (f.one_finite_verb ? 0.90 : 0.0) + (f.clause_punct ? -1.50 : 0.0);
  return sigmoid(z);
}

ConfidenceFeatures features_of(const Proposition& p, std::size_t gap) {
  ConfidenceFeatures f;
  f.relation_tokens = p.relation.size();
  f.gap_tokens = gap;
  std::size_t finite = 0;
  for (const auto& tok : p.relation.tokens) {
    if (is_finite_tag(tok.pos)) ++finite;
    if (is_clause_punct(tok.text)) f.clause_punct = true;
  }
  f.one_finite_verb = finite == 1;
  return f;
}

}  // namespace

double score_confidence(const Proposition& p, std::size_t arg_gap_tokens) {
  if (p.relation.empty()) throw ValidationError("score_confidence: empty relation");
  return confidence_from_features(features_of(p, arg_gap_tokens));
}

double score_confidence(const Proposition& p) {
  return score_confidence(p, p.relation.size());
}

std::vector<Proposition> extract_propositions(const Sentence& sentence,
                                              const std::string& document_id,
                                              const ExtractionOptions& opts) {
  for (const auto& tok : sentence.tokens) {
    if (tok.pos.empty()) {
      throw ValidationError("extract_propositions: sentence is not POS tagged");
    }
  }
  const auto chunks = ling::chunk_np(sentence, opts.merge_of_chunks);

  std::vector<Proposition> props;
  std::size_t counter = 0;
  for (std::size_t a = 0; a < chunks.size(); ++a) {
    for (std::size_t b = a + 1; b < chunks.size(); ++b) {
      const std::size_t between_begin = chunks[a].end;
      const std::size_t between_end = chunks[b].begin;
      if (between_end <= between_begin) continue;

      bool has_verb = false;
      for (std::size_t i = between_begin; i < between_end; ++i) {
        if (is_verb_tag(sentence.tokens[i].pos)) {
          has_verb = true;
          break;
        }
      }
      if (!has_verb) continue;

      // Trim edge punctuation off the relation span.
      std::size_t rel_begin = between_begin;
      std::size_t rel_end = between_end;
      while (rel_begin < rel_end && is_punct_token(sentence.tokens[rel_begin])) ++rel_begin;
      while (rel_end > rel_begin && is_punct_token(sentence.tokens[rel_end - 1])) --rel_end;
      if (rel_end <= rel_begin) continue;
      if (rel_end - rel_begin > opts.max_relation_tokens) continue;

      Proposition p;
      p.arg1 = Phrase::of({sentence.tokens.begin() + static_cast<std::ptrdiff_t>(chunks[a].begin),
                           sentence.tokens.begin() + static_cast<std::ptrdiff_t>(chunks[a].end)});
      p.relation = Phrase::of({sentence.tokens.begin() + static_cast<std::ptrdiff_t>(rel_begin),
                               sentence.tokens.begin() + static_cast<std::ptrdiff_t>(rel_end)});
      p.arg2 = Phrase::of({sentence.tokens.begin() + static_cast<std::ptrdiff_t>(chunks[b].begin),
                           sentence.tokens.begin() + static_cast<std::ptrdiff_t>(chunks[b].end)});
      p.provenance = {document_id, sentence.index};
      p.confidence = score_confidence(p, between_end - between_begin);
      p.id = document_id + ":" + std::to_string(sentence.index) + ":" +
             std::to_string(counter++);
      props.push_back(std::move(p));
    }
  }
  return props;
}

std::vector<Proposition> extract_propositions(const Document& doc,
                                              const ExtractionOptions& opts) {
  std::vector<Proposition> props;
  for (const auto& sent : doc.sentences) {
    auto batch = extract_propositions(sent, doc.id, opts);
    props.insert(props.end(), std::make_move_iterator(batch.begin()),
                 std::make_move_iterator(batch.end()));
  }
  return props;
}

std::vector<Proposition> extract_propositions(const TopicCluster& cluster,
                                              const ExtractionOptions& opts) {
  std::vector<Proposition> props;
  for (const auto& doc : cluster.documents) {
    auto batch = extract_propositions(doc, opts);
    props.insert(props.end(), std::make_move_iterator(batch.begin()),
                 std::make_move_iterator(batch.end()));
  }
  return props;
}

std::vector<Proposition> filter_by_confidence(std::vector<Proposition> props,
                                              double threshold) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw ValidationError("filter_by_confidence: threshold outside [0,1]");
  }
  std::vector<Proposition> kept;
  kept.reserve(props.size());
  for (auto& p : props) {
    if (p.confidence >= threshold) kept.push_back(std::move(p));
  }
  return kept;
}

namespace {

bool is_coordination(const Token& tok) {
  return tok.pos == "CC" || tok.text == "and" || tok.text == "or";
}

// (DT|PRP$)? (JJ|JJR|JJS|VBN|VBG)* (NN|NNS|NNP|NNPS)+ over a token run.
bool matches_base_np(std::span<const Token> toks) {
  if (toks.empty()) return false;
  std::size_t i = 0;
  if (toks[i].pos == "DT" || toks[i].pos == "PRP$") ++i;
  while (i < toks.size() && (toks[i].pos == "JJ" || toks[i].pos == "JJR" ||
                             toks[i].pos == "JJS" || toks[i].pos == "VBN" ||
                             toks[i].pos == "VBG")) {
    ++i;
  }
  std::size_t nouns = 0;
  while (i < toks.size() && toks[i].pos.starts_with("NN")) {
    ++i;
    ++nouns;
  }
  return nouns > 0 && i == toks.size();
}

// Splits "X and Y" / "X, Y, and Z" when every conjunct is a base NP.
std::vector<Phrase> np_conjuncts(const Phrase& phrase) {
  bool has_coord = false;
  for (const auto& tok : phrase.tokens) {
    if (is_coordination(tok) || tok.text == ",") has_coord = true;
    if (tok.pos.empty()) {
      throw ValidationError("split_conjunctions: phrase is not POS tagged");
    }
  }
  if (!has_coord) return {};

  std::vector<std::vector<Token>> segments(1);
  bool saw_cc = false;
  for (const auto& tok : phrase.tokens) {
    if (is_coordination(tok) || tok.text == ",") {
      if (is_coordination(tok)) saw_cc = true;
      if (!segments.back().empty()) segments.emplace_back();
      continue;
    }
    segments.back().push_back(tok);
  }
  if (segments.back().empty()) segments.pop_back();
  if (!saw_cc || segments.size() < 2) return {};

  for (const auto& seg : segments) {
    if (!matches_base_np(seg)) return {};
  }
  std::vector<Phrase> out;
  out.reserve(segments.size());
  for (auto& seg : segments) out.push_back(Phrase::of(std::move(seg)));
  return out;
}

}  // namespace

std::vector<Proposition> split_conjunctions(const Proposition& p) {
  for (int arg_index : {1, 2}) {
    const Phrase& arg = arg_index == 1 ? p.arg1 : p.arg2;
    const auto conjuncts = np_conjuncts(arg);
    if (conjuncts.size() < 2) continue;

    std::vector<Proposition> out;
    for (std::size_t i = 0; i < conjuncts.size(); ++i) {
      Proposition part = p;
      part.id = p.id + "#" + std::to_string(i + 1);
      (arg_index == 1 ? part.arg1 : part.arg2) = conjuncts[i];
      // The other argument may itself be coordinated.
      auto expanded = split_conjunctions(part);
      out.insert(out.end(), std::make_move_iterator(expanded.begin()),
                 std::make_move_iterator(expanded.end()));
    }
    return out;
  }
  return {p};
}

std::vector<Proposition> split_conjunctions(const std::vector<Proposition>& props) {
  std::vector<Proposition> out;
  out.reserve(props.size());
  for (const auto& p : props) {
    auto parts = split_conjunctions(p);
    out.insert(out.end(), std::make_move_iterator(parts.begin()),
               std::make_move_iterator(parts.end()));
  }
  return out;
}

std::vector<Proposition> dedupe(std::vector<Proposition> props) {
  struct Slot {
    std::size_t position;
    double confidence;
  };
  std::map<std::string, Slot> best;  // key -> first position + best confidence
  std::vector<std::string> keys(props.size());
  for (std::size_t i = 0; i < props.size(); ++i) {
    keys[i] = props[i].arg1.stem_key() + "\t" + props[i].relation.stem_key() + "\t" +
              props[i].arg2.stem_key();
  }

  std::vector<Proposition> out;
  std::map<std::string, std::size_t> out_index;
  for (std::size_t i = 0; i < props.size(); ++i) {
    auto it = out_index.find(keys[i]);
    if (it == out_index.end()) {
      out_index.emplace(keys[i], out.size());
      out.push_back(std::move(props[i]));
    } else if (props[i].confidence > out[it->second].confidence) {
      out[it->second] = std::move(props[i]);
    }
  }
  return out;
}

}  // namespace cmapsum::extraction
