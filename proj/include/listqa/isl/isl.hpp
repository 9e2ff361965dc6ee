#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "listqa/corpus/types.hpp"
#include "listqa/listlogic/types.hpp"

namespace listqa::isl {

// The structured block a model emits before its response: which prompt passage
// it grounds on, the list type, and either per-item statuses (condition) or
// selected items (step/option). Line ids are prompt-scope ids.
struct IslBlock {
  std::optional<int> relevant_passage;  // 1-based prompt ordinal; unset = unanswerable
  std::optional<listlogic::ListType> list_type;
  std::vector<std::pair<int, listlogic::UserItemStatus>> user_item_statuses;
  std::vector<int> selected_items;
  std::optional<listlogic::LogicalRelation> logical_relation;
};

struct IslAnswer {
  IslBlock block;
  std::string response;
};

struct InvalidBlock : std::runtime_error {
  explicit InvalidBlock(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what, std::string offending = "")
      : std::runtime_error(what + (offending.empty() ? "" : ": " + offending)),
        offending_line(std::move(offending)) {}
  std::string offending_line;
};

struct MissingResponse : std::runtime_error {
  MissingResponse() : std::runtime_error("no 'Response:' marker found") {}
};

// Throws InvalidBlock when the answer violates the grammar's invariants
// (relation iff condition, statuses iff condition, selected iff step/option,
// unanswerable blocks carry no step fields, response required when grounded).
void validate(const IslAnswer& answer);

// Canonical line-oriented rendering:
//
//   Intermediate Steps:
//     Relevant Passage: 2
//     List Type: Condition
//     User-to-Item Status: [7]Unknown, [8]Contradicted
//     Logical Relation: And
//
//   Response: No, you are not eligible ...
//
// Step/Option blocks carry `Selected Items: [3]` in place of the status and
// relation lines; unanswerable renders `Relevant Passage: none` and goes
// straight to the response.
std::string render_isl(const IslAnswer& answer);

// Inverse of render_isl on its image. Total over strings: any input either
// yields an IslAnswer or throws ParseError / MissingResponse. Field labels
// match case-insensitively with flexible whitespace; everything after the
// first `Response:` marker is the response.
IslAnswer parse_isl(std::string_view text);

enum class FindingKind { kOrdinalOutOfRange, kUnknownLineId, kPolarityMismatch };

struct Finding {
  FindingKind kind;
  std::string message;
};

struct ConsistencyReport {
  std::vector<Finding> findings;
  std::optional<listlogic::ShortAnswer> deduced;  // set for condition blocks
  bool consistent() const { return findings.empty(); }
  bool has(FindingKind k) const {
    for (const auto& f : findings)
      if (f.kind == k) return true;
    return false;
  }
};

// Checks an answer against the passages that were shown in its prompt, in
// prompt order with contiguous line numbering:
//   - the passage ordinal is in range
//   - status / selected line ids belong to the referenced passage's list blocks
//   - for condition blocks, the deduced short answer matches the response's
//     leading Yes/No token (skipped when the response starts with neither)
ConsistencyReport check_consistency(const IslAnswer& answer,
                                    const std::vector<corpus::Passage>& prompt_passages);

}  // namespace listqa::isl
