#include <cctype>
#include <string>

#include "cmapsum/linguistic.hpp"

namespace cmapsum::ling {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_opener(char c) {
  return c == '(' || c == '[' || c == '{' || c == '"' || c == '`' || c == '\'';
}

bool is_closer(char c) {
  return c == ')' || c == ']' || c == '}' || c == '"' || c == '\'';
}

bool is_trailing_punct(char c) {
  return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?' ||
         is_closer(c);
}

std::string lowercased(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

// "U.S.", "e.g.", "Ph.D." - two or more short letter segments, each
// closed by a period. Single trailing periods ("hope.", "A.") stay
// sentence-final.
bool looks_like_acronym(std::string_view s) {
  if (s.size() < 4 || s.back() != '.') return false;
  int segments = 0;
  std::size_t seg_len = 0;
  for (char c : s) {
    if (c == '.') {
      if (seg_len == 0 || seg_len > 2) return false;
      ++segments;
      seg_len = 0;
    } else if (std::isalpha(static_cast<unsigned char>(c)) != 0) {
      ++seg_len;
    } else {
      return false;
    }
  }
  return seg_len == 0 && segments >= 2;
}

bool keeps_final_period(std::string_view candidate) {
  if (candidate.size() < 2) return false;
  if (looks_like_acronym(candidate)) return true;
  return abbreviations().count(lowercased(candidate)) > 0;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  const auto emit = [&](std::size_t begin, std::size_t end) {
    if (end <= begin) return;
    Token tok;
    tok.text = std::string(text.substr(begin, end - begin));
    tok.span = {begin, end};
    tokens.push_back(std::move(tok));
  };

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < n && !is_space(text[end])) ++end;

    // Peel leading openers off the whitespace-delimited chunk.
    std::size_t begin = i;
    while (begin < end && is_opener(text[begin])) {
      emit(begin, begin + 1);
      ++begin;
    }

    // Peel trailing punctuation, abbreviation periods excepted.
    std::size_t core_end = end;
    while (core_end > begin && is_trailing_punct(text[core_end - 1])) {
      if (text[core_end - 1] == '.' &&
          keeps_final_period(text.substr(begin, core_end - begin))) {
        break;
      }
      --core_end;
    }
    if (core_end == begin && begin < end) {
      // Chunk was punctuation only; emit each char (dot runs merge).
      std::size_t p = begin;
      while (p < end) {
        std::size_t q = p + 1;
        if (text[p] == '.') {
          while (q < end && text[q] == '.') ++q;
        }
        emit(p, q);
        p = q;
      }
    } else {
      emit(begin, core_end);
      std::size_t p = core_end;
      while (p < end) {
        std::size_t q = p + 1;
        if (text[p] == '.') {
          while (q < end && text[q] == '.') ++q;
        }
        emit(p, q);
        p = q;
      }
    }
    i = end;
  }
  return tokens;
}

std::vector<Sentence> split_sentences(std::vector<Token> tokens) {
  std::vector<Sentence> sentences;
  Sentence current;
  const auto flush = [&]() {
    if (current.tokens.empty()) return;
    current.index = sentences.size();
    sentences.push_back(std::move(current));
    current = Sentence{};
  };

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const bool final_punct = tokens[i].text == "." || tokens[i].text == "!" ||
                             tokens[i].text == "?" ||
                             (tokens[i].text.size() >= 2 &&
                              tokens[i].text.find_first_not_of('.') == std::string::npos);
    current.tokens.push_back(std::move(tokens[i]));
    if (final_punct) {
      // Closers right after the boundary belong to this sentence.
      while (i + 1 < tokens.size() && tokens[i + 1].text.size() == 1 &&
             is_closer(tokens[i + 1].text[0])) {
        current.tokens.push_back(std::move(tokens[++i]));
      }
      flush();
    }
  }
  flush();
  return sentences;
}

}  // namespace cmapsum::ling
