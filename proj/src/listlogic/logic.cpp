#include "listqa/listlogic/logic.hpp"

#include <algorithm>
#include <stdexcept>

#include "listqa/util/rng.hpp"
#include "listqa/util/text.hpp"

namespace listqa::listlogic {

std::string_view to_token(ListType t) {
  switch (t) {
    case ListType::kCondition: return "condition";
    case ListType::kStep: return "step";
    case ListType::kOption: return "option";
    case ListType::kNonActionInfo: return "non-action info";
  }
  return "";
}

std::string_view to_token(LogicalRelation r) {
  return r == LogicalRelation::kAnd ? "and" : "or";
}

std::string_view to_token(UserItemStatus s) {
  switch (s) {
    case UserItemStatus::kSupported: return "supported";
    case UserItemStatus::kContradicted: return "contradicted";
    case UserItemStatus::kUnknown: return "unknown";
  }
  return "";
}

std::string_view to_token(ShortAnswer a) {
  switch (a) {
    case ShortAnswer::kYes: return "yes";
    case ShortAnswer::kNo: return "no";
    case ShortAnswer::kUncertain: return "uncertain";
  }
  return "";
}

std::string_view to_label(ListType t) {
  switch (t) {
    case ListType::kCondition: return "Condition";
    case ListType::kStep: return "Step";
    case ListType::kOption: return "Option";
    case ListType::kNonActionInfo: return "Non-Action Info";
  }
  return "";
}

std::string_view to_label(LogicalRelation r) {
  return r == LogicalRelation::kAnd ? "And" : "Or";
}

std::string_view to_label(UserItemStatus s) {
  switch (s) {
    case UserItemStatus::kSupported: return "Supported";
    case UserItemStatus::kContradicted: return "Contradicted";
    case UserItemStatus::kUnknown: return "Unknown";
  }
  return "";
}

namespace {

// Normalizes a classifier/label token: lowercase, hyphens and underscores to
// spaces, whitespace collapsed.
std::string canon_token(std::string_view token) {
  std::string t;
  t.reserve(token.size());
  for (char c : token) {
    if (c == '-' || c == '_') c = ' ';
    t.push_back(ascii_lower(c));
  }
  return normalize_ws(t);
}

}  // namespace

std::optional<ListType> list_type_from_token(std::string_view token) {
  std::string t = canon_token(token);
  if (t == "condition" || t == "conditions") return ListType::kCondition;
  if (t == "step" || t == "steps") return ListType::kStep;
  if (t == "option" || t == "options") return ListType::kOption;
  if (t == "non action info" || t == "nonaction info" || t == "non action information")
    return ListType::kNonActionInfo;
  return std::nullopt;
}

std::optional<LogicalRelation> relation_from_token(std::string_view token) {
  std::string t = canon_token(token);
  if (t == "and" || t == "and (conjunctive)" || t == "conjunctive") return LogicalRelation::kAnd;
  if (t == "or" || t == "or (disjunctive)" || t == "disjunctive") return LogicalRelation::kOr;
  return std::nullopt;
}

std::optional<UserItemStatus> status_from_token(std::string_view token) {
  std::string t = canon_token(token);
  if (t == "supported") return UserItemStatus::kSupported;
  if (t == "contradicted") return UserItemStatus::kContradicted;
  if (t == "unknown") return UserItemStatus::kUnknown;
  return std::nullopt;
}

std::optional<ShortAnswer> answer_from_token(std::string_view token) {
  std::string t = canon_token(token);
  if (t == "yes") return ShortAnswer::kYes;
  if (t == "no") return ShortAnswer::kNo;
  if (t == "uncertain") return ShortAnswer::kUncertain;
  return std::nullopt;
}

ShortAnswer deduce_answer(LogicalRelation relation, std::span<const UserItemStatus> statuses) {
  if (statuses.empty()) throw EmptyStatuses();
  bool any_supported = false;
  bool any_contradicted = false;
  bool any_unknown = false;
  for (UserItemStatus s : statuses) {
    switch (s) {
      case UserItemStatus::kSupported: any_supported = true; break;
      case UserItemStatus::kContradicted: any_contradicted = true; break;
      case UserItemStatus::kUnknown: any_unknown = true; break;
    }
  }
  if (relation == LogicalRelation::kAnd) {
    if (any_contradicted) return ShortAnswer::kNo;
    if (any_unknown) return ShortAnswer::kUncertain;
    return ShortAnswer::kYes;
  }
  // Or
  if (any_supported) return ShortAnswer::kYes;
  if (any_unknown) return ShortAnswer::kUncertain;
  return ShortAnswer::kNo;
}

std::map<std::vector<UserItemStatus>, ShortAnswer> enumerate_answer_table(LogicalRelation relation,
                                                                          int n) {
  if (n < 1 || n > 6) throw NOutOfRange(n);
  static constexpr UserItemStatus kAll[] = {UserItemStatus::kSupported,
                                            UserItemStatus::kContradicted,
                                            UserItemStatus::kUnknown};
  std::map<std::vector<UserItemStatus>, ShortAnswer> table;
  std::vector<UserItemStatus> vec(static_cast<std::size_t>(n), UserItemStatus::kSupported);
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (int i = 0; i < n; ++i) {
      vec[static_cast<std::size_t>(i)] = kAll[c % 3];
      c /= 3;
    }
    table.emplace(vec, deduce_answer(relation, vec));
  }
  return table;
}

StatusAssignment sample_status_assignment(const std::vector<int>& item_line_ids,
                                          const BlockRef& ref,
                                          std::optional<ListType> list_type,
                                          std::optional<LogicalRelation> relation,
                                          std::uint64_t seed) {
  if (!list_type.has_value()) throw MissingListType();
  if (*list_type == ListType::kCondition && !relation.has_value()) throw MissingRelation();
  if (*list_type != ListType::kCondition && relation.has_value())
    throw std::invalid_argument("sample_status_assignment: relation set for non-condition list");
  if (item_line_ids.empty())
    throw std::invalid_argument("sample_status_assignment: empty list block");

  // Mix the block identity into the stream so equal seeds on different blocks
  // draw independently. Pure in (items, ref, seed).
  std::string ident = ref.passage_id + "#" + std::to_string(ref.block_index);
  for (int id : item_line_ids) ident += "," + std::to_string(id);
  SplitMix64 rng(mix_seed(seed, fnv1a64(ident)));

  StatusAssignment out;
  out.passage_id = ref.passage_id;
  out.block_index = ref.block_index;
  out.rng_seed = seed;

  const auto n = item_line_ids.size();
  static constexpr UserItemStatus kAll[] = {UserItemStatus::kSupported,
                                            UserItemStatus::kContradicted,
                                            UserItemStatus::kUnknown};

  switch (*list_type) {
    case ListType::kCondition: {
      std::size_t max_k = std::min<std::size_t>(3, n);
      std::size_t k = 1 + rng.next_below(max_k);
      // Partial Fisher-Yates to pick k distinct items, then restore line order.
      std::vector<std::size_t> idx(n);
      for (std::size_t i = 0; i < n; ++i) idx[i] = i;
      for (std::size_t i = 0; i < k; ++i)
        std::swap(idx[i], idx[i + rng.next_below(n - i)]);
      idx.resize(k);
      std::sort(idx.begin(), idx.end());
      std::vector<UserItemStatus> statuses;
      statuses.reserve(k);
      for (std::size_t i : idx) {
        UserItemStatus s = kAll[rng.next_below(3)];
        out.items.emplace_back(item_line_ids[i], s);
        statuses.push_back(s);
      }
      out.deduced_answer = deduce_answer(*relation, statuses);
      break;
    }
    case ListType::kStep: {
      // Never mark the final step so "what should I do next?" has an answer;
      // a single-step list marks its only item.
      std::size_t pick = n >= 2 ? rng.next_below(n - 1) : 0;
      out.items.emplace_back(item_line_ids[pick], UserItemStatus::kSupported);
      break;
    }
    case ListType::kOption: {
      std::size_t pick = rng.next_below(n);
      out.items.emplace_back(item_line_ids[pick], UserItemStatus::kSupported);
      break;
    }
    case ListType::kNonActionInfo:
      break;
  }
  return out;
}

}  // namespace listqa::listlogic
