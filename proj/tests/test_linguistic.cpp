#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "cmapsum/linguistic.hpp"
#include "support/helpers.hpp"

using namespace cmapsum;
using namespace cmapsum::ling;

namespace {

std::string join_texts(const std::vector<Token>& toks) {
  std::string out;
  for (const auto& t : toks) {
    if (!out.empty()) out += ' ';
    out += t.text;
  }
  return out;
}

Sentence tagged(const std::string& text) {
  Sentence s;
  s.tokens = tokenize(text);
  pos_tag(s);
  stem_tokens(s);
  return s;
}

}  // namespace

TEST_CASE("tokenize splits punctuation and keeps abbreviations") {
  const auto toks = tokenize("Students with bad credit history should not lose hope.");
  CHECK(toks.size() == 10);
  CHECK(toks.back().text == ".");

  CHECK(tokenize("").empty());

  const auto us = tokenize("U.S. Department");
  REQUIRE(us.size() == 2);
  CHECK(us[0].text == "U.S.");
  CHECK(us[1].text == "Department");
}

TEST_CASE("tokenize reconstructs the input from spans") {
  const std::string texts[] = {
      "Students (and parents) pay $400 for books, pens... and laptops!",
      "Dr. Smith said: \"tuition rose 5.5% in the U.S. last year.\"",
      "  odd   spacing\tand\nnewlines here  ",
  };
  for (const auto& text : texts) {
    CAPTURE(text);
    std::size_t prev_end = 0;
    for (const auto& tok : tokenize(text)) {
      CHECK(tok.span.begin >= prev_end);
      CHECK(tok.text == text.substr(tok.span.begin, tok.span.end - tok.span.begin));
      prev_end = tok.span.end;
    }
  }
}

TEST_CASE("tokenize is idempotent on space-normalized text") {
  const auto once = tokenize("Loans , fees and interest rates matter .");
  const auto twice = tokenize(join_texts(once));
  REQUIRE(once.size() == twice.size());
  for (std::size_t i = 0; i < once.size(); ++i) CHECK(once[i].text == twice[i].text);
}

TEST_CASE("sentence splitting") {
  CHECK(split_sentences(tokenize("A. B? C!")).size() == 3);
  CHECK(split_sentences(tokenize("no terminal punctuation here")).size() == 1);
  CHECK(split_sentences(tokenize("Dr. Smith left. He returned.")).size() == 2);
  const auto sents = split_sentences(tokenize("One. Two. Three."));
  REQUIRE(sents.size() == 3);
  CHECK(sents[0].index == 0);
  CHECK(sents[2].index == 2);
}

TEST_CASE("pos tagging basics") {
  auto s = tagged("The loans are offered to students.");
  CHECK(s.tokens[1].text == "loans");
  CHECK(s.tokens[1].pos == "NNS");

  auto borrowed = tagged("They borrowed money from the bank.");
  CHECK(borrowed.tokens[1].text == "borrowed");
  CHECK(borrowed.tokens[1].pos == "VBD");

  auto inf = tagged("Students want to apply for loans.");
  CHECK(inf.tokens[2].pos == "TO");
  CHECK(inf.tokens[3].pos == "VB");
}

TEST_CASE("tagger determinism") {
  const std::string text = "Private lenders regularly offer student loans to families.";
  auto a = tagged(text);
  auto b = tagged(text);
  REQUIRE(a.tokens.size() == b.tokens.size());
  for (std::size_t i = 0; i < a.tokens.size(); ++i) {
    CHECK(a.tokens[i].pos == b.tokens[i].pos);
    CHECK(a.tokens[i].stem == b.tokens[i].stem);
  }
}

TEST_CASE("tagger accuracy on the golden file") {
  std::ifstream in(testsupport::core_data_dir() / "golden_pos.conll");
  REQUIRE(in.good());
  const auto golden = read_conll(in, "golden_pos.conll");
  REQUIRE(golden.size() == 500);

  std::size_t total = 0, correct = 0;
  for (const auto& gold : golden) {
    Sentence test;
    for (const auto& tok : gold.tokens) {
      Token t;
      t.text = tok.text;
      test.tokens.push_back(std::move(t));
    }
    pos_tag(test);
    for (std::size_t i = 0; i < gold.tokens.size(); ++i) {
      ++total;
      if (test.tokens[i].pos == gold.tokens[i].pos) ++correct;
    }
  }
  const double accuracy = static_cast<double>(correct) / static_cast<double>(total);
  CHECK(accuracy >= 0.85);
}

TEST_CASE("np chunking") {
  auto s = tagged("Students with bad credit history often lose hope.");
  const auto chunks = chunk_np(s);
  REQUIRE(chunks.size() >= 2);
  // "bad credit history" is one chunk
  bool found = false;
  for (const auto& c : chunks) {
    std::string label;
    for (std::size_t i = c.begin; i < c.end; ++i) {
      if (!label.empty()) label += ' ';
      label += s.tokens[i].text;
    }
    if (label == "bad credit history") found = true;
  }
  CHECK(found);

  auto no_nouns = tagged("quickly and carefully");
  CHECK(chunk_np(no_nouns).empty());
}

TEST_CASE("of-merge extends a chunk once") {
  auto s = tagged("Students pay the cost of their college education today.");
  const auto merged = chunk_np(s, /*merge_of=*/true);
  bool found = false;
  for (const auto& c : merged) {
    std::string label;
    for (std::size_t i = c.begin; i < c.end; ++i) {
      if (!label.empty()) label += ' ';
      label += s.tokens[i].text;
    }
    if (label == "the cost of their college education") found = true;
  }
  CHECK(found);

  const auto plain = chunk_np(s, /*merge_of=*/false);
  CHECK(plain.size() > merged.size());
}

TEST_CASE("chunks never overlap and stay in bounds") {
  const char* texts[] = {
      "The new student receives a federal loan from the bank.",
      "Many families save money for college tuition and fees.",
      "It is hard.",
  };
  for (const char* text : texts) {
    auto s = tagged(text);
    std::size_t prev_end = 0;
    for (const auto& c : chunk_np(s)) {
      CHECK(c.begin >= prev_end);
      CHECK(c.end <= s.tokens.size());
      CHECK(c.begin < c.end);
      prev_end = c.end;
    }
  }
}

TEST_CASE("conll round trip") {
  const std::string conll = "Students\tNNS\npay\tVBP\ntuition\tNN\n.\t.\n\nIt\tPRP\nworks\tVBZ\n.\t.\n";
  std::istringstream in(conll);
  const auto sents = read_conll(in, "inline");
  REQUIRE(sents.size() == 2);
  CHECK(sents[0].tokens.size() == 4);
  CHECK(sents[0].tokens[0].pos == "NNS");
  CHECK(sents[0].tokens[0].stem == "student");
  CHECK(sents[1].tokens[1].pos == "VBZ");

  std::istringstream in2(conll);
  const auto doc = document_from_conll("byo", in2);
  CHECK(doc.raw_text == "Students pay tuition . It works .");
  for (const auto& sent : doc.sentences) {
    for (const auto& tok : sent.tokens) {
      CHECK(doc.raw_text.substr(tok.span.begin, tok.span.end - tok.span.begin) == tok.text);
    }
  }
}

TEST_CASE("malformed conll reports the line") {
  std::istringstream in("Students NNS\nbroken_line_without_tag\n");
  try {
    read_conll(in, "bad.conll");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("bad.conll:2") != std::string::npos);
  }
}
