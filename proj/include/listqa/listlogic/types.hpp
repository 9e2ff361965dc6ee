#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace listqa::listlogic {

// The four categories of list content found in support documents.
enum class ListType { kCondition, kStep, kOption, kNonActionInfo };

// How the items of a condition list combine.
enum class LogicalRelation { kAnd, kOr };

// Relation of the user's stated background to one list item.
enum class UserItemStatus { kSupported, kContradicted, kUnknown };

// Verdict deduced from a logical relation plus per-item statuses.
enum class ShortAnswer { kYes, kNo, kUncertain };

// --- token helpers -----------------------------------------------------------
// Lowercase wire tokens; these strings appear verbatim in dataset files.

std::string_view to_token(ListType t);
std::string_view to_token(LogicalRelation r);
std::string_view to_token(UserItemStatus s);
std::string_view to_token(ShortAnswer a);

// Canonical labels as rendered in intermediate-step blocks.
std::string_view to_label(ListType t);
std::string_view to_label(LogicalRelation r);
std::string_view to_label(UserItemStatus s);

std::optional<ListType> list_type_from_token(std::string_view token);
std::optional<LogicalRelation> relation_from_token(std::string_view token);
std::optional<UserItemStatus> status_from_token(std::string_view token);
std::optional<ShortAnswer> answer_from_token(std::string_view token);

// --- status assignment --------------------------------------------------------

// Per-item user statuses for one list block, plus the deduced short answer for
// condition lists. `items` is kept in ascending line-id order.
struct StatusAssignment {
  std::string passage_id;
  int block_index = 0;
  std::vector<std::pair<int, UserItemStatus>> items;
  std::optional<ShortAnswer> deduced_answer;
  std::uint64_t rng_seed = 0;
};

struct EmptyStatuses : std::runtime_error {
  EmptyStatuses() : std::runtime_error("deduce_answer: empty status list") {}
};

struct NOutOfRange : std::runtime_error {
  explicit NOutOfRange(int n)
      : std::runtime_error("enumerate_answer_table: n out of range [1,6]: " + std::to_string(n)) {}
};

struct MissingListType : std::runtime_error {
  MissingListType() : std::runtime_error("sample_status_assignment: list type not set") {}
};

struct MissingRelation : std::runtime_error {
  MissingRelation() : std::runtime_error("sample_status_assignment: condition list without logical relation") {}
};

}  // namespace listqa::listlogic
