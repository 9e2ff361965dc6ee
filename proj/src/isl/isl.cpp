#include "listqa/isl/isl.hpp"

#include <sstream>

#include "listqa/listlogic/logic.hpp"
#include "listqa/util/text.hpp"

namespace listqa::isl {

using listlogic::ListType;
using listlogic::LogicalRelation;
using listlogic::ShortAnswer;
using listlogic::UserItemStatus;

void validate(const IslAnswer& answer) {
  const IslBlock& b = answer.block;
  if (!b.relevant_passage.has_value()) {
    if (b.list_type || !b.user_item_statuses.empty() || !b.selected_items.empty() ||
        b.logical_relation)
      throw InvalidBlock("unanswerable block must carry no step fields");
    return;
  }
  if (*b.relevant_passage < 1) throw InvalidBlock("passage ordinal must be >= 1");
  if (!b.list_type) throw InvalidBlock("grounded block requires a list type");
  if (answer.response.empty()) throw InvalidBlock("grounded answer requires a response");
  switch (*b.list_type) {
    case ListType::kCondition:
      if (b.user_item_statuses.empty())
        throw InvalidBlock("condition block requires user-to-item statuses");
      if (!b.logical_relation) throw InvalidBlock("condition block requires a logical relation");
      if (!b.selected_items.empty())
        throw InvalidBlock("condition block must not carry selected items");
      break;
    case ListType::kStep:
    case ListType::kOption:
      if (b.selected_items.empty())
        throw InvalidBlock("step/option block requires selected items");
      if (!b.user_item_statuses.empty() || b.logical_relation)
        throw InvalidBlock("step/option block must not carry statuses or a relation");
      break;
    case ListType::kNonActionInfo:
      if (!b.user_item_statuses.empty() || !b.selected_items.empty() || b.logical_relation)
        throw InvalidBlock("non-action info block carries no statuses or selected items");
      break;
  }
}

std::string render_isl(const IslAnswer& answer) {
  validate(answer);
  const IslBlock& b = answer.block;
  std::ostringstream out;
  out << "Intermediate Steps:\n";
  if (!b.relevant_passage) {
    out << "  Relevant Passage: none\n";
  } else {
    out << "  Relevant Passage: " << *b.relevant_passage << '\n';
    out << "  List Type: " << listlogic::to_label(*b.list_type) << '\n';
    if (*b.list_type == ListType::kCondition) {
      out << "  User-to-Item Status: ";
      for (std::size_t i = 0; i < b.user_item_statuses.size(); ++i) {
        if (i > 0) out << ", ";
        out << '[' << b.user_item_statuses[i].first << ']'
            << listlogic::to_label(b.user_item_statuses[i].second);
      }
      out << '\n';
      out << "  Logical Relation: " << listlogic::to_label(*b.logical_relation) << '\n';
    } else if (*b.list_type != ListType::kNonActionInfo) {
      out << "  Selected Items: ";
      for (std::size_t i = 0; i < b.selected_items.size(); ++i) {
        if (i > 0) out << ", ";
        out << '[' << b.selected_items[i] << ']';
      }
      out << '\n';
    }
  }
  out << "\nResponse: " << answer.response;
  return out.str();
}

namespace {

// Lowercases and strips spaces/hyphens so label variants compare equal.
std::string squash_label(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == ' ' || c == '-' || c == '_' || c == '\t') continue;
    out.push_back(ascii_lower(c));
  }
  return out;
}

// Parses "[7]Unknown, [8]Contradicted".
std::vector<std::pair<int, UserItemStatus>> parse_status_list(std::string_view value,
                                                              const std::string& line) {
  std::vector<std::pair<int, UserItemStatus>> out;
  std::size_t pos = 0;
  while (pos < value.size()) {
    while (pos < value.size() && (is_space(value[pos]) || value[pos] == ',')) ++pos;
    if (pos >= value.size()) break;
    if (value[pos] != '[') throw ParseError("expected '[id]Status'", line);
    std::size_t close = value.find(']', pos);
    if (close == std::string_view::npos) throw ParseError("unterminated item id", line);
    int id = 0;
    try {
      id = std::stoi(std::string(value.substr(pos + 1, close - pos - 1)));
    } catch (const std::exception&) {
      throw ParseError("bad item id", line);
    }
    pos = close + 1;
    std::size_t end = value.find(',', pos);
    if (end == std::string_view::npos) end = value.size();
    auto status = listlogic::status_from_token(trim(value.substr(pos, end - pos)));
    if (!status) throw ParseError("unknown user-to-item status", line);
    out.emplace_back(id, *status);
    pos = end;
  }
  if (out.empty()) throw ParseError("empty status list", line);
  return out;
}

std::vector<int> parse_item_list(std::string_view value, const std::string& line) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < value.size()) {
    while (pos < value.size() && (is_space(value[pos]) || value[pos] == ',')) ++pos;
    if (pos >= value.size()) break;
    if (value[pos] != '[') throw ParseError("expected '[id]'", line);
    std::size_t close = value.find(']', pos);
    if (close == std::string_view::npos) throw ParseError("unterminated item id", line);
    try {
      out.push_back(std::stoi(std::string(value.substr(pos + 1, close - pos - 1))));
    } catch (const std::exception&) {
      throw ParseError("bad item id", line);
    }
    pos = close + 1;
  }
  if (out.empty()) throw ParseError("empty selected-items list", line);
  return out;
}

}  // namespace

IslAnswer parse_isl(std::string_view text) {
  IslAnswer answer;
  IslBlock& b = answer.block;
  bool saw_passage = false;
  bool saw_type = false;
  bool saw_statuses = false;
  bool saw_selected = false;
  bool saw_relation = false;
  bool saw_response = false;

  std::size_t pos = 0;
  while (pos <= text.size() && !saw_response) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw =
        eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
    std::size_t next = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    std::string_view line = trim_view(raw);
    if (line.empty()) {
      pos = next;
      continue;
    }
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos)
      throw ParseError("expected 'Label: value'", std::string(raw));
    std::string label = squash_label(line.substr(0, colon));
    std::string_view value_view = trim_view(line.substr(colon + 1));
    std::string value(value_view);
    std::string raw_line(raw);

    if (label == "response") {
      // Response runs to the end of the whole text, newlines included. The
      // first ':' in this raw line is the marker's colon.
      std::size_t marker = pos + raw.find(':');
      std::string_view rest = text.substr(marker + 1);
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
      answer.response = std::string(rest);
      saw_response = true;
      break;
    }
    if (label == "intermediatesteps") {
      if (!value.empty()) throw ParseError("unexpected text after header", raw_line);
      pos = next;
      continue;
    }
    if (label == "relevantpassage") {
      if (saw_passage) throw ParseError("duplicate Relevant Passage", raw_line);
      saw_passage = true;
      if (iequals(value, "none")) {
        b.relevant_passage = std::nullopt;
      } else {
        try {
          b.relevant_passage = std::stoi(value);
        } catch (const std::exception&) {
          throw ParseError("bad passage ordinal", raw_line);
        }
      }
      pos = next;
      continue;
    }
    if (label == "listtype") {
      if (saw_type) throw ParseError("duplicate List Type", raw_line);
      saw_type = true;
      auto t = listlogic::list_type_from_token(value);
      if (!t) throw ParseError("unknown list type", raw_line);
      b.list_type = t;
      pos = next;
      continue;
    }
    if (label == "usertoitemstatus" || label == "usertoitemstatuses") {
      if (saw_statuses) throw ParseError("duplicate User-to-Item Status", raw_line);
      saw_statuses = true;
      b.user_item_statuses = parse_status_list(value, raw_line);
      pos = next;
      continue;
    }
    if (label == "logicalrelation") {
      if (saw_relation) throw ParseError("duplicate Logical Relation", raw_line);
      saw_relation = true;
      auto r = listlogic::relation_from_token(value);
      if (!r) throw ParseError("unknown logical relation", raw_line);
      b.logical_relation = r;
      pos = next;
      continue;
    }
    if (label == "selecteditems" || label == "selecteditem") {
      if (saw_selected) throw ParseError("duplicate Selected Items", raw_line);
      saw_selected = true;
      b.selected_items = parse_item_list(value, raw_line);
      pos = next;
      continue;
    }
    throw ParseError("unknown field label", raw_line);
  }

  if (!saw_response) throw MissingResponse();
  if (!saw_passage) throw ParseError("missing Relevant Passage field");
  try {
    validate(answer);
  } catch (const InvalidBlock& e) {
    throw ParseError(e.what());
  }
  return answer;
}

namespace {

// First alphabetic token of the response, lowercased.
std::string leading_word(std::string_view response) {
  std::size_t i = 0;
  while (i < response.size() && std::isalpha(static_cast<unsigned char>(response[i])) == 0) ++i;
  std::size_t j = i;
  std::string word;
  while (j < response.size() && std::isalpha(static_cast<unsigned char>(response[j])) != 0)
    word.push_back(ascii_lower(response[j++]));
  return word;
}

}  // namespace

ConsistencyReport check_consistency(const IslAnswer& answer,
                                    const std::vector<corpus::Passage>& prompt_passages) {
  ConsistencyReport report;
  const IslBlock& b = answer.block;
  if (!b.relevant_passage) return report;  // unanswerable: nothing to check

  int ordinal = *b.relevant_passage;
  if (ordinal < 1 || ordinal > static_cast<int>(prompt_passages.size())) {
    report.findings.push_back({FindingKind::kOrdinalOutOfRange,
                               "passage ordinal " + std::to_string(ordinal) + " of " +
                                   std::to_string(prompt_passages.size())});
    return report;
  }

  // Prompt-scope line numbering is contiguous over the shown passages.
  int offset = 0;
  for (int i = 0; i + 1 < ordinal; ++i)
    offset += static_cast<int>(prompt_passages[static_cast<std::size_t>(i)].lines.size());
  const corpus::Passage& passage = prompt_passages[static_cast<std::size_t>(ordinal - 1)];

  auto is_block_item = [&](int prompt_id) {
    int local = prompt_id - offset;
    for (const auto& block : passage.list_blocks)
      for (int id : block.item_line_ids)
        if (id == local) return true;
    return false;
  };

  std::vector<int> referenced;
  for (const auto& [id, status] : b.user_item_statuses) referenced.push_back(id);
  for (int id : b.selected_items) referenced.push_back(id);
  for (int id : referenced) {
    if (!is_block_item(id))
      report.findings.push_back({FindingKind::kUnknownLineId,
                                 "line [" + std::to_string(id) +
                                     "] is not a list item of passage " + std::to_string(ordinal)});
  }

  if (b.list_type == ListType::kCondition && b.logical_relation && !b.user_item_statuses.empty()) {
    std::vector<UserItemStatus> statuses;
    for (const auto& [id, s] : b.user_item_statuses) statuses.push_back(s);
    ShortAnswer deduced = listlogic::deduce_answer(*b.logical_relation, statuses);
    report.deduced = deduced;
    std::string word = leading_word(answer.response);
    if (word == "yes" || word == "no") {
      bool match = (word == "yes" && deduced == ShortAnswer::kYes) ||
                   (word == "no" && deduced == ShortAnswer::kNo);
      if (!match)
        report.findings.push_back(
            {FindingKind::kPolarityMismatch,
             "deduced answer '" + std::string(listlogic::to_token(deduced)) +
                 "' but response starts with '" + word + "'"});
    }
  }
  return report;
}

}  // namespace listqa::isl
