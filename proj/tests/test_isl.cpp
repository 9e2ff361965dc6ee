#include <doctest.h>

#include "helpers.hpp"
#include "listqa/corpus/html_parser.hpp"
#include "listqa/corpus/io.hpp"
#include "listqa/isl/isl.hpp"
#include "listqa/util/text.hpp"

using namespace listqa;
using isl::FindingKind;
using isl::IslAnswer;
using listlogic::ListType;
using listlogic::LogicalRelation;
using listlogic::UserItemStatus;
namespace lt = listqa::testing;

namespace {

IslAnswer condition_block(std::vector<std::pair<int, UserItemStatus>> statuses,
                            std::string response) {
  IslAnswer a;
  a.block.relevant_passage = 2;
  a.block.list_type = ListType::kCondition;
  a.block.user_item_statuses = std::move(statuses);
  a.block.logical_relation = LogicalRelation::kAnd;
  a.response = std::move(response);
  return a;
}

// Randomized valid answers for round-trip checks.
IslAnswer random_answer(SplitMix64& rng) {
  static const std::vector<std::string> words{"yes", "no", "maybe", "bursary", "grant",
                                              "apply", "next", "form", "online"};
  IslAnswer a;
  if (rng.next_below(10) == 0) {
    a.response = rng.next_below(2) == 0 ? "" : "Nothing relevant was retrieved.";
    return a;  // unanswerable
  }
  a.block.relevant_passage = 1 + static_cast<int>(rng.next_below(5));
  auto type = static_cast<ListType>(rng.next_below(4));
  a.block.list_type = type;
  int n = 1 + static_cast<int>(rng.next_below(3));
  int id = 1 + static_cast<int>(rng.next_below(4));
  if (type == ListType::kCondition) {
    for (int i = 0; i < n; ++i) {
      a.block.user_item_statuses.emplace_back(
          id, static_cast<UserItemStatus>(rng.next_below(3)));
      id += 1 + static_cast<int>(rng.next_below(3));
    }
    a.block.logical_relation =
        rng.next_below(2) == 0 ? LogicalRelation::kAnd : LogicalRelation::kOr;
  } else if (type == ListType::kStep || type == ListType::kOption) {
    for (int i = 0; i < n; ++i) {
      a.block.selected_items.push_back(id);
      id += 1 + static_cast<int>(rng.next_below(3));
    }
  }
  int w = 1 + static_cast<int>(rng.next_below(12));
  for (int i = 0; i < w; ++i) {
    if (i > 0) a.response += rng.next_below(8) == 0 ? "\n" : " ";
    a.response += words[rng.next_below(words.size())];
  }
  return a;
}

bool answers_equal(const IslAnswer& a, const IslAnswer& b) {
  return a.block.relevant_passage == b.block.relevant_passage &&
         a.block.list_type == b.block.list_type &&
         a.block.user_item_statuses == b.block.user_item_statuses &&
         a.block.selected_items == b.block.selected_items &&
         a.block.logical_relation == b.block.logical_relation && a.response == b.response;
}

}  // namespace

TEST_CASE("canonical condition rendering matches the versioned fixture") {
  IslAnswer a = condition_block(
      {{7, UserItemStatus::kUnknown}, {8, UserItemStatus::kContradicted}},
      "No, you are not eligible for a social work bursary because you hold a higher education "
      "social work qualification.");
  std::string rendered = isl::render_isl(a);
  CHECK(rendered == rtrim(lt::read_file(lt::fixtures_dir() / "isl" / "v1" / "condition.txt")));
  CHECK(rendered.find("User-to-Item Status: [7]Unknown, [8]Contradicted") != std::string::npos);
  CHECK(rendered.find("Logical Relation: And") != std::string::npos);
}

TEST_CASE("unanswerable rendering goes straight to the response") {
  IslAnswer a;
  a.response = "I could not find the information needed to answer this question in the available documents.";
  std::string rendered = isl::render_isl(a);
  CHECK(rendered == rtrim(lt::read_file(lt::fixtures_dir() / "isl" / "v1" / "unanswerable.txt")));
  CHECK(rendered.find("Relevant Passage: none") != std::string::npos);
  CHECK(rendered.find("List Type:") == std::string::npos);
}

TEST_CASE("step rendering carries selected items and no relation") {
  IslAnswer a;
  a.block.relevant_passage = 1;
  a.block.list_type = ListType::kStep;
  a.block.selected_items = {3};
  a.response = "Next, you need to submit the premises form.";
  std::string rendered = isl::render_isl(a);
  CHECK(rendered == rtrim(lt::read_file(lt::fixtures_dir() / "isl" / "v1" / "step.txt")));
  CHECK(rendered.find("Selected Items: [3]") != std::string::npos);
  CHECK(rendered.find("Logical Relation") == std::string::npos);
  CHECK(answers_equal(isl::parse_isl(rendered), a));
}

TEST_CASE("every versioned fixture parses and re-renders identically") {
  for (const std::string name : {"condition.txt", "step.txt", "option.txt",
                                 "non_action_info.txt", "unanswerable.txt"}) {
    std::string text = rtrim(lt::read_file(lt::fixtures_dir() / "isl" / "v1" / name));
    IslAnswer parsed = isl::parse_isl(text);
    CHECK(isl::render_isl(parsed) == text);
  }
}

TEST_CASE("verbatim output block parses to the expected structure") {
  std::string text = lt::read_file(lt::fixtures_dir() / "isl" / "v1" / "condition.txt");
  IslAnswer a = isl::parse_isl(text);
  CHECK(a.block.relevant_passage == 2);
  CHECK(a.block.list_type == ListType::kCondition);
  REQUIRE(a.block.user_item_statuses.size() == 2);
  CHECK(a.block.user_item_statuses[0] == std::make_pair(7, UserItemStatus::kUnknown));
  CHECK(a.block.user_item_statuses[1] == std::make_pair(8, UserItemStatus::kContradicted));
  CHECK(a.block.logical_relation == LogicalRelation::kAnd);
  CHECK(a.response.substr(0, 31) == "No, you are not eligible for a ");
}

TEST_CASE("parsing tolerates label case and spacing drift") {
  std::string text =
      "intermediate steps:\n  relevant passage:  2 \n  LIST TYPE: condition\n"
      "  user-to-item status: [7] unknown ,[8]CONTRADICTED\n  logical relation: and\n"
      "response:   No, not eligible.";
  IslAnswer a = isl::parse_isl(text);
  CHECK(a.block.relevant_passage == 2);
  CHECK(a.block.list_type == ListType::kCondition);
  CHECK(a.block.user_item_statuses[1].second == UserItemStatus::kContradicted);
  CHECK(a.response == "No, not eligible.");
}

TEST_CASE("grammar violations raise ParseError with the offending line") {
  // grounded block without a list type
  CHECK_THROWS_AS(isl::parse_isl("Intermediate Steps:\n  Relevant Passage: 1\n\nResponse: hi"),
                  isl::ParseError);
  // unknown label
  try {
    isl::parse_isl("Intermediate Steps:\n  Banana: 2\n\nResponse: hi");
    FAIL("expected ParseError");
  } catch (const isl::ParseError& e) {
    CHECK(e.offending_line.find("Banana") != std::string::npos);
  }
  // no response marker at all
  CHECK_THROWS_AS(isl::parse_isl("Intermediate Steps:\n  Relevant Passage: 1"),
                  isl::MissingResponse);
  // condition without relation
  CHECK_THROWS_AS(
      isl::parse_isl("Intermediate Steps:\n  Relevant Passage: 1\n  List Type: Condition\n"
                     "  User-to-Item Status: [1]Supported\n\nResponse: yes"),
      isl::ParseError);
}

TEST_CASE("round trip holds on 1000 randomized answers") {
  SplitMix64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    IslAnswer a = random_answer(rng);
    IslAnswer b = isl::parse_isl(isl::render_isl(a));
    CHECK(answers_equal(a, b));
  }
}

TEST_CASE("render emits exactly one response marker") {
  SplitMix64 rng(9);
  for (int i = 0; i < 200; ++i) {
    std::string rendered = isl::render_isl(random_answer(rng));
    std::size_t first = rendered.find("Response:");
    REQUIRE(first != std::string::npos);
    CHECK(rendered.find("\nResponse:", first + 1) == std::string::npos);
  }
}

TEST_CASE("parse_isl survives fuzzed input") {
  SplitMix64 rng(555);
  const std::string alphabet =
      "Intermediate Steps:Relevant Passage List Type Condition[]0123456789,respnse\n \t:";
  int parsed_ok = 0;
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    std::size_t len = rng.next_below(160);
    for (std::size_t j = 0; j < len; ++j) s.push_back(alphabet[rng.next_below(alphabet.size())]);
    try {
      isl::parse_isl(s);
      ++parsed_ok;
    } catch (const isl::ParseError&) {
    } catch (const isl::MissingResponse&) {
    }
  }
  CHECK(parsed_ok >= 0);  // reaching here without a crash is the property
}

TEST_CASE("invalid blocks are rejected by render") {
  IslAnswer a;
  a.block.relevant_passage = 1;
  a.block.list_type = ListType::kCondition;  // no statuses, no relation
  a.response = "text";
  CHECK_THROWS_AS(isl::render_isl(a), isl::InvalidBlock);

  IslAnswer b;
  b.block.relevant_passage = 1;
  b.block.list_type = ListType::kStep;
  b.block.selected_items = {1};
  b.response = "";  // grounded answers need a response
  CHECK_THROWS_AS(isl::render_isl(b), isl::InvalidBlock);

  IslAnswer c;  // unanswerable with leftover fields
  c.block.list_type = ListType::kStep;
  CHECK_THROWS_AS(isl::render_isl(c), isl::InvalidBlock);
}

namespace {

std::vector<corpus::Passage> answer_fixture_passages() {
  std::vector<corpus::Passage> passages;
  for (const auto& e :
       corpus::read_manifest(lt::fixtures_dir() / "corpus" / "answer_manifest.txt")) {
    auto doc = corpus::parse_html(lt::read_file(e.path), e.doc_id, e.source_name);
    passages.push_back(doc.passages.at(0));
  }
  return passages;
}

}  // namespace

TEST_CASE("consistency check accepts a block aligned with the prompt numbering") {
  auto passages = answer_fixture_passages();
  // Passage 2 spans prompt ids [6..10]; its list items sit at [9] and [10].
  IslAnswer a = condition_block(
      {{9, UserItemStatus::kUnknown}, {10, UserItemStatus::kContradicted}},
      "No, you are not eligible for a social work bursary because you hold a higher education "
      "social work qualification.");
  auto report = isl::check_consistency(a, passages);
  CHECK(report.consistent());
  REQUIRE(report.deduced.has_value());
  CHECK(*report.deduced == listlogic::ShortAnswer::kNo);
}

TEST_CASE("consistency check flags line ids outside the referenced passage's blocks") {
  auto passages = answer_fixture_passages();
  IslAnswer a = condition_block(
      {{7, UserItemStatus::kUnknown}, {8, UserItemStatus::kContradicted}},
      "No, you are not eligible for a social work bursary.");
  auto report = isl::check_consistency(a, passages);
  CHECK(report.has(FindingKind::kUnknownLineId));
  // the deduced answer still matches the response polarity
  CHECK_FALSE(report.has(FindingKind::kPolarityMismatch));
  CHECK(*report.deduced == listlogic::ShortAnswer::kNo);
}

TEST_CASE("consistency check flags out-of-range ordinals") {
  auto passages = answer_fixture_passages();
  IslAnswer a = condition_block({{9, UserItemStatus::kSupported}}, "Yes, you are eligible.");
  a.block.relevant_passage = 9;
  auto report = isl::check_consistency(a, passages);
  CHECK(report.has(FindingKind::kOrdinalOutOfRange));
}

TEST_CASE("consistency check flags polarity mismatches") {
  auto passages = answer_fixture_passages();
  IslAnswer a = condition_block({{9, UserItemStatus::kSupported}},
                                  "No, you are not eligible for the bursary.");
  auto report = isl::check_consistency(a, passages);
  CHECK(report.has(FindingKind::kPolarityMismatch));

  // a response that opens with neither yes nor no skips the polarity check
  IslAnswer b = condition_block({{9, UserItemStatus::kUnknown}},
                                  "It depends on your funding situation.");
  CHECK_FALSE(isl::check_consistency(b, passages).has(FindingKind::kPolarityMismatch));

  // unanswerable blocks have nothing to check
  IslAnswer c;
  c.response = "";
  CHECK(isl::check_consistency(c, passages).consistent());
}
