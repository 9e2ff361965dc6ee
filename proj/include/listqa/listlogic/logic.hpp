#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "listqa/listlogic/types.hpp"

namespace listqa::listlogic {

// Deduces the short answer for a condition list from the logical relation and
// the user-to-item statuses, using Kleene three-valued conjunction/disjunction:
//   And: all supported -> yes; any contradicted -> no; otherwise uncertain.
//   Or:  any supported -> yes; all contradicted -> no; otherwise uncertain.
// Throws EmptyStatuses when `statuses` is empty.
ShortAnswer deduce_answer(LogicalRelation relation, std::span<const UserItemStatus> statuses);

// Complete 3^n truth table for n-item status vectors, 1 <= n <= 6.
// Consistent with deduce_answer by construction of the tests, not by sharing
// code paths: callers use it as a fixture/oracle source.
std::map<std::vector<UserItemStatus>, ShortAnswer> enumerate_answer_table(LogicalRelation relation,
                                                                          int n);

// Identifies the list block an assignment was sampled for.
struct BlockRef {
  std::string passage_id;
  int block_index = 0;
};

// Draws a user-to-item status assignment for one list block. Deterministic in
// (item_line_ids, ref, list_type, relation, seed).
//
//   Condition:      k items, k uniform in [1, min(3, n)], each status uniform;
//                   deduced_answer filled in.
//   Step:           one item, uniform over items 1..n-1 when n >= 2 (so that a
//                   next step exists), otherwise the single item.
//   Option:         one item, uniform over all items.
//   NonActionInfo:  empty assignment (questions carry no user background).
StatusAssignment sample_status_assignment(const std::vector<int>& item_line_ids,
                                          const BlockRef& ref,
                                          std::optional<ListType> list_type,
                                          std::optional<LogicalRelation> relation,
                                          std::uint64_t seed);

}  // namespace listqa::listlogic
