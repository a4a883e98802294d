#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmapsum/errors.hpp"
#include "cmapsum/linguistic.hpp"
#include "cmapsum/suitability.hpp"
#include "support/helpers.hpp"

using namespace cmapsum;
using namespace cmapsum::extraction;

namespace {

Proposition make_prop(const std::string& a1, const std::string& rel, const std::string& a2,
                      double confidence = 0.8) {
  const auto phrase = [](const std::string& text) {
    Sentence s;
    s.tokens = ling::tokenize(text);
    ling::pos_tag(s);
    ling::stem_tokens(s);
    return Phrase::of(std::move(s.tokens));
  };
  Proposition p;
  p.id = a1 + "|" + rel + "|" + a2;
  p.arg1 = phrase(a1);
  p.relation = phrase(rel);
  p.arg2 = phrase(a2);
  p.confidence = confidence;
  return p;
}

}  // namespace

TEST_CASE("pronoun-only arguments are forced to zero") {
  const auto& model = default_suitability_model();
  CHECK(model.score(make_prop("they", "have", "loans", 0.95)) == 0.0);
  CHECK(model.score(make_prop("students", "trust", "them", 0.95)) == 0.0);
}

TEST_CASE("clause arguments score below threshold") {
  const auto& model = default_suitability_model();
  const auto clause = make_prop(
      "students who borrowed money from several banks last year", "regret", "loans", 0.6);
  CHECK(model.score(clause) < 0.5);
}

TEST_CASE("well-formed short tuples pass") {
  const auto& model = default_suitability_model();
  const auto good = make_prop("private lenders", "require", "a credit check", 0.9);
  CHECK(model.score(good) > 0.5);
}

TEST_CASE("untagged phrases are a precondition error") {
  const auto& model = default_suitability_model();
  Proposition p = make_prop("students", "need", "loans");
  for (auto& tok : p.arg1.tokens) tok.pos.clear();
  CHECK_THROWS_AS(model.score(p), ValidationError);
}

TEST_CASE("held-out negative precision meets the bar") {
  const auto tuples = load_labeled_tuples(testsupport::core_data_dir() /
                                          "suitability_tuples.tsv");
  REQUIRE(tuples.size() == 500);
  const std::vector<LabeledTuple> train(tuples.begin(), tuples.begin() + 250);
  const std::vector<LabeledTuple> held_out(tuples.begin() + 250, tuples.end());

  const auto model = SuitabilityModel::train(train);
  std::size_t predicted_negative = 0, correct_negative = 0;
  for (const auto& t : held_out) {
    if (model.score(t.prop) < 0.5) {
      ++predicted_negative;
      if (!t.suitable) ++correct_negative;
    }
  }
  REQUIRE(predicted_negative > 0);
  const double precision =
      static_cast<double>(correct_negative) / static_cast<double>(predicted_negative);
  CHECK(precision >= 0.90);
}

TEST_CASE("training is deterministic") {
  const auto tuples = load_labeled_tuples(testsupport::core_data_dir() /
                                          "suitability_tuples.tsv");
  const std::vector<LabeledTuple> train(tuples.begin(), tuples.begin() + 250);
  const auto a = SuitabilityModel::train(train);
  const auto b = SuitabilityModel::train(train);
  CHECK(a.to_json() == b.to_json());
}

TEST_CASE("filter_by_suitability annotates survivors") {
  std::vector<Proposition> props{make_prop("private lenders", "require", "a credit check", 0.9),
                                 make_prop("they", "have", "loans", 0.9)};
  const auto kept = filter_by_suitability(props, 0.5);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].arg1.label == "private lenders");
  REQUIRE(kept[0].suitability.has_value());
  CHECK(*kept[0].suitability > 0.5);
}

TEST_CASE("labeled tuple parser validates labels") {
  std::istringstream bad("a\thas\tb\t0.5\tmaybe\n");
  CHECK_THROWS_AS(read_labeled_tuples(bad, "bad.tsv"), ParseError);
  std::istringstream good("a thing\thas\tb part\t0.5\tsuitable\n");
  const auto tuples = read_labeled_tuples(good, "good.tsv");
  REQUIRE(tuples.size() == 1);
  CHECK(tuples[0].suitable);
  CHECK(tuples[0].prop.confidence == doctest::Approx(0.5));
}
