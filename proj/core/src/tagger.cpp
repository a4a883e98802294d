#include <cctype>
#include <string>

#include "cmapsum/linguistic.hpp"
#include "cmapsum/porter.hpp"

namespace cmapsum::ling {

namespace {

bool starts_upper(const std::string& w) {
  return !w.empty() && std::isupper(static_cast<unsigned char>(w[0])) != 0;
}

bool is_numeric(const std::string& w) {
  bool digit = false;
  for (char c : w) {
    if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
      digit = true;
    } else if (c != '.' && c != ',' && c != '-' && c != '%' && c != '$' && c != '/') {
      return false;
    }
  }
  return digit;
}

bool is_word(const std::string& w) {
  for (char c : w) {
    if (std::isalpha(static_cast<unsigned char>(c)) == 0 && c != '-' && c != '\'' &&
        c != '.') {
      return false;
    }
  }
  return !w.empty();
}

std::string lowercased(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string suffix_guess(const std::string& word, bool capitalized) {
  const std::string w = lowercased(word);
  if (capitalized) return ends_with(w, "s") && !ends_with(w, "ss") ? "NNPS" : "NNP";
  if (ends_with(w, "ly")) return "RB";
  if (ends_with(w, "ing") && w.size() > 4) return "VBG";
  if (ends_with(w, "ed") && w.size() > 3) return "VBD";
  for (const char* s : {"tion", "sion", "ment", "ness", "ship", "ance", "ence", "ity",
                        "ism", "ist", "hood", "dom"}) {
    if (ends_with(w, s)) return "NN";
    if (ends_with(w, std::string(s) + "s")) return "NNS";
  }
  for (const char* s : {"ous", "ful", "ive", "able", "ible", "ical", "less", "ish"}) {
    if (ends_with(w, s)) return "JJ";
  }
  if (ends_with(w, "est") && w.size() > 4) return "JJS";
  if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is") &&
      w.size() > 2) {
    return "NNS";
  }
  return "NN";
}

const Lexicon::TagCounts* lookup_word(const Lexicon& lexicon, const std::string& word,
                                      std::string* key_out) {
  if (const auto* counts = lexicon.lookup(word)) {
    if (key_out) *key_out = word;
    return counts;
  }
  const std::string lower = lowercased(word);
  if (lower != word) {
    if (const auto* counts = lexicon.lookup(lower)) {
      if (key_out) *key_out = lower;
      return counts;
    }
  }
  return nullptr;
}

// Best lexicon tag with the given prefix, or empty.
std::string reading(const Lexicon::TagCounts* counts, std::string_view prefix) {
  if (!counts) return {};
  for (const auto& [tag, count] : *counts) {
    if (tag.starts_with(prefix)) return tag;
  }
  return {};
}

std::string reading_in(const Lexicon::TagCounts* counts,
                       std::initializer_list<std::string_view> tags) {
  if (!counts) return {};
  for (const auto& [tag, count] : *counts) {
    for (auto want : tags) {
      if (tag == want) return tag;
    }
  }
  return {};
}

bool is_be_form(const std::string& lower) {
  return lower == "is" || lower == "are" || lower == "was" || lower == "were" ||
         lower == "be" || lower == "been" || lower == "being" || lower == "am";
}

bool is_have_form(const std::string& lower) {
  return lower == "has" || lower == "have" || lower == "had" || lower == "having";
}

}  // namespace

void pos_tag(Sentence& sentence, const Lexicon& lexicon) {
  auto& toks = sentence.tokens;
  std::vector<const Lexicon::TagCounts*> readings(toks.size(), nullptr);

  // Pass 1: lexicon lookup (with lowercase fallback), numbers, unknowns.
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const std::string& w = toks[i].text;
    if (w.size() == 1 && std::ispunct(static_cast<unsigned char>(w[0])) != 0) {
      toks[i].pos = (w == "," ? "," : (w == ":" || w == ";" ? ":" : "."));
      if (w == "(") toks[i].pos = "-LRB-";
      if (w == ")") toks[i].pos = "-RRB-";
      if (w == "\"" || w == "'" || w == "`") toks[i].pos = "''";
      continue;
    }
    if (!is_word(w)) {
      toks[i].pos = is_numeric(w) ? "CD" : ".";
      continue;
    }
    readings[i] = lookup_word(lexicon, w, nullptr);
    if (readings[i]) {
      toks[i].pos = readings[i]->front().first;
    } else {
      toks[i].pos = suffix_guess(w, starts_upper(w) && i != 0);
    }
  }

  // Pass 2: local context repairs.
  const auto prev_content = [&](std::size_t i) -> int {
    for (int p = static_cast<int>(i) - 1; p >= 0; --p) {
      const std::string& tag = toks[static_cast<std::size_t>(p)].pos;
      if (tag == "RB" || toks[static_cast<std::size_t>(p)].text == "not") continue;
      return p;
    }
    return -1;
  };

  for (std::size_t i = 0; i < toks.size(); ++i) {
    const std::string lower = lowercased(toks[i].text);
    const int p = prev_content(i);
    const std::string prev_tag = p >= 0 ? toks[static_cast<std::size_t>(p)].pos : "";
    const std::string prev_lower = p >= 0 ? lowercased(toks[static_cast<std::size_t>(p)].text) : "";

    // Infinitives and verbs after modals: "to lose", "should not lose".
    if ((prev_tag == "TO" || prev_tag == "MD")) {
      if (const auto base = reading_in(readings[i], {"VB"}); !base.empty()) {
        toks[i].pos = base;
        continue;
      }
      if (!readings[i] && toks[i].pos == "NN") toks[i].pos = "VB";
      continue;
    }

    // Past participles after have/be auxiliaries.
    if (p >= 0 && (is_have_form(prev_lower) || is_be_form(prev_lower))) {
      if (const auto part = reading_in(readings[i], {"VBN"}); !part.empty()) {
        toks[i].pos = part;
        continue;
      }
      if (!readings[i] && toks[i].pos == "VBD") toks[i].pos = "VBN";
      continue;
    }

    // Finite verb directly after a personal pronoun: "they borrowed".
    if (prev_tag == "PRP") {
      if (const auto fin = reading_in(readings[i], {"VBP", "VBD", "VBZ", "MD"});
          !fin.empty()) {
        toks[i].pos = fin;
      }
      continue;
    }

    // Nouns after determiners/adjectives: "the study", "their needs".
    if ((prev_tag == "DT" || prev_tag == "PRP$" || prev_tag == "JJ" || prev_tag == "CD") &&
        toks[i].pos.starts_with("VB")) {
      if (const auto noun = reading(readings[i], "NN"); !noun.empty()) {
        toks[i].pos = noun;
      }
    }
  }
}

void stem_tokens(Sentence& sentence) {
  for (auto& tok : sentence.tokens) {
    tok.stem = porter_stem(tok.text);
  }
}

void annotate(Document& doc, const Lexicon& lexicon) {
  doc.sentences = split_sentences(tokenize(doc.raw_text));
  for (auto& sent : doc.sentences) {
    pos_tag(sent, lexicon);
    stem_tokens(sent);
  }
}

void annotate(TopicCluster& cluster, const Lexicon& lexicon) {
  for (auto& doc : cluster.documents) annotate(doc, lexicon);
}

}  // namespace cmapsum::ling
