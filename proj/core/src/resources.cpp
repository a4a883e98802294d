#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cmapsum/errors.hpp"
#include "cmapsum/linguistic.hpp"

#ifndef CMAPSUM_SOURCE_DATA_DIR
#define CMAPSUM_SOURCE_DATA_DIR ""
#endif
#ifndef CMAPSUM_INSTALL_DATA_DIR
#define CMAPSUM_INSTALL_DATA_DIR ""
#endif

namespace cmapsum::ling {

namespace fs = std::filesystem;

fs::path data_dir() {
  if (const char* env = std::getenv("CMAPSUM_DATA_DIR"); env && *env) {
    return fs::path(env);
  }
  for (const char* candidate : {CMAPSUM_SOURCE_DATA_DIR, CMAPSUM_INSTALL_DATA_DIR}) {
    if (*candidate && fs::exists(candidate)) return fs::path(candidate);
  }
  throw IoError(
      "cmapsum data directory not found; set CMAPSUM_DATA_DIR to the "
      "directory holding lexicon.txt and abbreviations.txt");
}

void Lexicon::add(const std::string& word, const std::string& tag, int count) {
  auto& counts = entries_[word];
  for (auto& [t, c] : counts) {
    if (t == tag) {
      c += count;
      return;
    }
  }
  counts.emplace_back(tag, count);
  std::stable_sort(counts.begin(), counts.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
}

const Lexicon::TagCounts* Lexicon::lookup(const std::string& word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

bool Lexicon::has_tag(const std::string& word, std::string_view tag_prefix) const {
  const auto* counts = lookup(word);
  if (!counts) return false;
  for (const auto& [tag, count] : *counts) {
    if (tag.starts_with(tag_prefix)) return true;
  }
  return false;
}

// Format: word<TAB>TAG:COUNT[ TAG:COUNT...]   ('#' starts a comment)
Lexicon Lexicon::from_stream(std::istream& in, const std::string& name) {
  Lexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(name, line_no, "expected word<TAB>tags");
    const std::string word = line.substr(0, tab);
    std::istringstream rest(line.substr(tab + 1));
    std::string item;
    bool any = false;
    while (rest >> item) {
      const auto colon = item.rfind(':');
      if (colon == std::string::npos) throw ParseError(name, line_no, "expected TAG:COUNT");
      const std::string tag = item.substr(0, colon);
      int count = 0;
      try {
        count = std::stoi(item.substr(colon + 1));
      } catch (const std::exception&) {
        throw ParseError(name, line_no, "bad count in '" + item + "'");
      }
      lex.add(word, tag, count);
      any = true;
    }
    if (!any) throw ParseError(name, line_no, "no tags for '" + word + "'");
  }
  return lex;
}

namespace {

Lexicon load_default_lexicon() {
  const auto path = data_dir() / "lexicon.txt";
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon file: " + path.string());
  return Lexicon::from_stream(in, path.string());
}

std::set<std::string> load_abbreviations() {
  const auto path = data_dir() / "abbreviations.txt";
  std::ifstream in(path);
  if (!in) throw IoError("cannot open abbreviation list: " + path.string());
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::string lowered;
    for (char c : line) {
      if (c == '\r') continue;
      lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (!lowered.empty()) out.insert(lowered);
  }
  return out;
}

}  // namespace

const Lexicon& default_lexicon() {
  static const Lexicon lexicon = load_default_lexicon();
  return lexicon;
}

const std::set<std::string>& abbreviations() {
  static const std::set<std::string> abbrevs = load_abbreviations();
  return abbrevs;
}

}  // namespace cmapsum::ling
