// Copyright 2026 The ltkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "ltkit/corpus.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "ltkit/errors.hpp"
#include "test_util.hpp"

using namespace ltkit;
using namespace ltkit::corpus;

namespace {

Problem make_problem(const std::string& id, const std::string& statement,
                     std::optional<std::string> gold) {
  io::Json obj;
  obj["id"] = id;
  obj["source"] = "test";
  obj["statement"] = statement;
  if (gold.has_value()) {
    obj["gold_answer"] = *gold;
  } else {
    obj["gold_answer"] = nullptr;
  }
  return problem_from_json(obj, 1, "inline");
}

}  // namespace

TEST_CASE("load_problems preserves order") {
  test_util::TempDir tmp;
  test_util::write_file(
      tmp.file("p.jsonl"),
      R"({"id": "a", "source": "s", "statement": "Compute 1+1.", "gold_answer": "2", "metadata": {}})"
      "\n"
      R"({"id": "b", "source": "s", "statement": "Compute 2+2.", "gold_answer": "4", "metadata": {"year": "2024"}})"
      "\n"
      R"({"id": "c", "source": "s", "statement": "Compute 3+3.", "gold_answer": "6", "metadata": {}})"
      "\n");
  ProblemSet ps = load_problems(tmp.file("p.jsonl"));
  REQUIRE(ps.size() == 3);
  CHECK(ps.problems[0].id == "a");
  CHECK(ps.problems[1].id == "b");
  CHECK(ps.problems[2].id == "c");
  CHECK(ps.problems[1].metadata.at("year") == "2024");
}

TEST_CASE("load_problems reports the offending line") {
  test_util::TempDir tmp;
  SUBCASE("missing id") {
    test_util::write_file(tmp.file("p.jsonl"),
                          R"({"id": "a", "statement": "x", "gold_answer": "1"})"
                          "\n"
                          R"({"statement": "no id here"})"
                          "\n");
    CHECK_THROWS_WITH_AS(load_problems(tmp.file("p.jsonl")),
                         doctest::Contains(":2:"), ValidationError);
  }
  SUBCASE("malformed json") {
    test_util::write_file(tmp.file("p.jsonl"), "{\"id\": \"a\"\n");
    CHECK_THROWS_WITH_AS(load_problems(tmp.file("p.jsonl")),
                         doctest::Contains(":1:"), ValidationError);
  }
  SUBCASE("duplicate id names the id") {
    test_util::write_file(tmp.file("p.jsonl"),
                          R"({"id": "dup", "statement": "x", "gold_answer": "1"})"
                          "\n"
                          R"({"id": "dup", "statement": "y", "gold_answer": "2"})"
                          "\n");
    CHECK_THROWS_WITH_AS(load_problems(tmp.file("p.jsonl")),
                         doctest::Contains("dup"), ValidationError);
  }
  SUBCASE("missing file is a config error") {
    CHECK_THROWS_AS(load_problems(tmp.file("nope.jsonl")), ConfigError);
  }
}

TEST_CASE("answer_kind assignment goes through the numeric grammar") {
  CHECK(make_problem("a", "x", "1/2").answer_kind == AnswerKind::numeric);
  CHECK(make_problem("b", "x", "42").answer_kind == AnswerKind::numeric);
  CHECK(make_problem("c", "x", "an isosceles triangle").answer_kind ==
        AnswerKind::non_numeric);
  CHECK(make_problem("d", "x", std::nullopt).answer_kind ==
        AnswerKind::unknown);
}

TEST_CASE("is_image_dependent") {
  CHECK(is_image_dependent(make_problem("a", "area of [asy] unit circle", "1")));
  CHECK_FALSE(is_image_dependent(make_problem("b", "plain algebra", "1")));
  // Case-insensitive scan.
  CHECK(is_image_dependent(
      make_problem("c", "As shown in the Figure below, compute x.", "1")));
  CHECK(is_image_dependent(
      make_problem("d", "see \\includegraphics{f.png}", "1")));
}

TEST_CASE("is_proof_based") {
  CHECK(is_proof_based(make_problem("a", "Prove that for all n it holds.", "0")));
  CHECK_FALSE(is_proof_based(make_problem("b", "Find the remainder.", "0")));
  CHECK(is_proof_based(
      make_problem("c", "...then show that the triangle is isosceles", "0")));
  // Leading-clause "prove" without a marker phrase.
  CHECK(is_proof_based(make_problem("d", "Prove the inequality.", "0")));
  // "prove" buried mid-sentence without a marker phrase is not a match.
  CHECK_FALSE(is_proof_based(
      make_problem("e", "The prover writes down an equation.", "0")));
}

TEST_CASE("has_labeled_numeric_answer") {
  CHECK_FALSE(has_labeled_numeric_answer(make_problem("a", "x", std::nullopt)));
  CHECK(has_labeled_numeric_answer(make_problem("b", "x", "42")));
  CHECK_FALSE(has_labeled_numeric_answer(
      make_problem("c", "x", "an isosceles triangle")));
  CHECK_FALSE(has_labeled_numeric_answer(make_problem("d", "x", "")));
}

TEST_CASE("curate on the 5-problem example") {
  ProblemSet ps;
  ps.problems = {
      make_problem("p1", "area of [asy] something", "3"),
      make_problem("p2", "Prove that n^2 >= 0.", "0"),
      make_problem("p3", "Compute 2+2.", std::nullopt),
      make_problem("p4", "Compute 3+3.", "6"),
      make_problem("p5", "Compute 4+4.", "8"),
  };
  auto [kept, report] = curate(ps);
  CHECK(kept.size() == 2);
  CHECK(report.kept_count == 2);
  CHECK(report.rule_stats.at("image") == 1);
  CHECK(report.rule_stats.at("proof") == 1);
  CHECK(report.rule_stats.at("answer") == 1);
  REQUIRE(report.rejected.size() == 3);
  CHECK(report.rejected[0].problem_id == "p1");
  CHECK(report.rejected[0].rule_id == "image");
}

TEST_CASE("curate edge cases") {
  SUBCASE("empty set") {
    auto [kept, report] = curate(ProblemSet{});
    CHECK(kept.empty());
    CHECK(report.kept_count == 0);
    CHECK(report.rejected.empty());
  }
  SUBCASE("all-clean identity") {
    ProblemSet ps;
    ps.problems = {make_problem("a", "Compute 1.", "1"),
                   make_problem("b", "Compute 2.", "2")};
    auto [kept, report] = curate(ps);
    CHECK(kept.size() == 2);
    CHECK(report.rejected.empty());
  }
}

TEST_CASE("first matching rule wins attribution") {
  // Image marker and proof marker in the same statement: image is first.
  ProblemSet ps;
  ps.problems = {make_problem(
      "both", "Prove that the [asy] diagram has area 1.", std::nullopt)};
  auto [kept, report] = curate(ps);
  REQUIRE(report.rejected.size() == 1);
  CHECK(report.rejected[0].rule_id == "image");
}

TEST_CASE("curation partition and idempotence under random fixtures") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    ProblemSet ps;
    auto n = 1 + rng() % 30;
    for (std::size_t i = 0; i < n; ++i) {
      std::string statement = "Compute the value of item " + std::to_string(i) + ".";
      std::optional<std::string> gold = std::to_string(rng() % 1000);
      switch (rng() % 6) {
        case 0: statement += " [asy] diagram"; break;
        case 1: statement = "Prove that " + statement; break;
        case 2: gold = std::nullopt; break;
        case 3: gold = "a literal answer"; break;
        default: break;
      }
      ps.problems.push_back(
          make_problem("p" + std::to_string(i), statement, gold));
    }
    auto [kept, report] = curate(ps);

    // Partition: kept and rejected ids cover the input exactly, disjointly.
    std::set<std::string> kept_ids, rejected_ids, input_ids;
    for (const auto& p : ps.problems) input_ids.insert(p.id);
    for (const auto& p : kept.problems) kept_ids.insert(p.id);
    for (const auto& r : report.rejected) rejected_ids.insert(r.problem_id);
    CHECK(kept_ids.size() + rejected_ids.size() == input_ids.size());
    CHECK(report.kept_count + rejected_ids.size() == input_ids.size());
    std::set<std::string> uni;
    std::set_union(kept_ids.begin(), kept_ids.end(), rejected_ids.begin(),
                   rejected_ids.end(), std::inserter(uni, uni.begin()));
    CHECK(uni == input_ids);

    // Idempotence: curating the kept set changes nothing.
    auto [kept2, report2] = curate(kept);
    CHECK(kept2.size() == kept.size());
    CHECK(report2.rejected.empty());

    // Rule order moves attributions, never membership.
    CurationRules reordered;
    reordered.rule_order = {"answer", "proof", "image"};
    auto [kept3, report3] = curate(ps, reordered);
    std::set<std::string> kept3_ids;
    for (const auto& p : kept3.problems) kept3_ids.insert(p.id);
    CHECK(kept3_ids == kept_ids);
  }
}

TEST_CASE("every rule-order permutation keeps the same set") {
  ProblemSet ps;
  // One problem per rule, one triggering all three, one clean.
  ps.problems = {
      make_problem("img", "See [asy] the diagram.", "1"),
      make_problem("prf", "Prove that 1 = 1.", "1"),
      make_problem("ans", "Compute the thing.", std::nullopt),
      make_problem("all", "Prove the [asy] claim.", std::nullopt),
      make_problem("ok", "Compute 2+2.", "4"),
  };
  std::vector<std::string> order = {"answer", "image", "proof"};
  std::sort(order.begin(), order.end());
  std::set<std::set<std::string>> kept_variants;
  std::set<std::string> all_attributions;
  do {
    CurationRules rules;
    rules.rule_order = order;
    auto [kept, report] = curate(ps, rules);
    std::set<std::string> ids;
    for (const auto& p : kept.problems) ids.insert(p.id);
    kept_variants.insert(ids);
    for (const auto& r : report.rejected) {
      if (r.problem_id == "all") all_attributions.insert(r.rule_id);
    }
  } while (std::next_permutation(order.begin(), order.end()));
  // Membership is order-free; the triple-trigger problem's attribution
  // ranges over all three rules.
  CHECK(kept_variants == std::set<std::set<std::string>>{{"ok"}});
  CHECK(all_attributions == std::set<std::string>{"image", "proof", "answer"});
}

TEST_CASE("curate rejects an empty or unknown rule list") {
  CurationRules rules;
  rules.rule_order = {};
  CHECK_THROWS_AS(curate(ProblemSet{}, rules), ltkit::ValidationError);
  rules.rule_order = {"image", "mystery"};
  CHECK_THROWS_AS(curate(ProblemSet{}, rules), ltkit::ValidationError);
}

TEST_CASE("curation report is deterministic") {
  test_util::TempDir tmp;
  auto path = test_util::data_dir() / "fixtures/curation20.jsonl";
  ProblemSet ps = load_problems(path);
  auto first = curate(ps);
  auto second = curate(ps);
  CHECK(first.report.to_json().dump() == second.report.to_json().dump());
}

TEST_CASE("write_problems round-trips") {
  test_util::TempDir tmp;
  ProblemSet ps;
  ps.problems = {make_problem("a", "Compute 1+1.", "2"),
                 make_problem("b", "Compute 5-9.", "-4")};
  write_problems(ps, tmp.file("out.jsonl"));
  ProblemSet back = load_problems(tmp.file("out.jsonl"));
  REQUIRE(back.size() == 2);
  CHECK(back.problems[0].id == "a");
  CHECK(back.problems[1].gold_answer == "-4");
  CHECK(back.problems[1].answer_kind == AnswerKind::numeric);
}
