#include <istream>
#include <sstream>

#include "cmapsum/errors.hpp"
#include "cmapsum/linguistic.hpp"
#include "cmapsum/porter.hpp"

namespace cmapsum::ling {

std::vector<Sentence> read_conll(std::istream& in, const std::string& name) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::string line;
  std::size_t line_no = 0;
  std::size_t offset = 0;

  const auto flush = [&]() {
    if (current.tokens.empty()) return;
    current.index = sentences.size();
    sentences.push_back(std::move(current));
    current = Sentence{};
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    auto sep = line.find('\t');
    if (sep == std::string::npos) sep = line.find(' ');
    if (sep == std::string::npos || sep == 0 || sep + 1 >= line.size()) {
      throw ParseError(name, line_no, "expected 'token<TAB>tag'");
    }
    Token tok;
    tok.text = line.substr(0, sep);
    tok.pos = line.substr(sep + 1);
    tok.stem = porter_stem(tok.text);
    tok.span = {offset, offset + tok.text.size()};
    offset += tok.text.size() + 1;  // synthetic single-space layout
    current.tokens.push_back(std::move(tok));
  }
  flush();
  return sentences;
}

Document document_from_conll(const std::string& id, std::istream& in) {
  Document doc;
  doc.id = id;
  doc.sentences = read_conll(in, id);
  std::string raw;
  for (const auto& sent : doc.sentences) {
    for (const auto& tok : sent.tokens) {
      if (!raw.empty()) raw += ' ';
      raw += tok.text;
    }
  }
  doc.raw_text = std::move(raw);
  return doc;
}

}  // namespace cmapsum::ling
