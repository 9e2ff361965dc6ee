#include "listqa/corpus/types.hpp"

#include <set>

namespace listqa::corpus {

void validate_passage(const Passage& passage) {
  for (std::size_t i = 0; i < passage.lines.size(); ++i) {
    const Line& l = passage.lines[i];
    if (l.id != static_cast<int>(i) + 1)
      throw InvalidPassage(passage.passage_id + ": line ids must be consecutive from 1");
    if (l.text.empty())
      throw InvalidPassage(passage.passage_id + ": empty line text");
  }
  std::set<int> seen;
  for (const auto& block : passage.list_blocks) {
    if (block.item_line_ids.empty())
      throw InvalidPassage(passage.passage_id + ": empty list block");
    if (block.logical_relation.has_value() &&
        block.list_type != listlogic::ListType::kCondition)
      throw InvalidPassage(passage.passage_id + ": logical relation on non-condition block");
    for (int id : block.item_line_ids) {
      if (!seen.insert(id).second)
        throw InvalidPassage(passage.passage_id + ": line " + std::to_string(id) +
                             " referenced by more than one block");
      const Line* line = passage.line_by_id(id);
      if (line == nullptr)
        throw InvalidPassage(passage.passage_id + ": block references missing line " +
                             std::to_string(id));
      if (!line->is_list_item)
        throw InvalidPassage(passage.passage_id + ": block references non-list line " +
                             std::to_string(id));
    }
    if (block.lead_in_line_id.has_value() &&
        passage.line_by_id(*block.lead_in_line_id) == nullptr)
      throw InvalidPassage(passage.passage_id + ": lead-in references missing line");
  }
}

Passage number_lines(Passage passage) {
  if (passage.lines.empty())
    throw InvalidPassage(passage.passage_id + ": cannot number a passage with no lines");
  // Renumber 1..n preserving order and remap block references.
  std::vector<std::pair<int, int>> remap;  // old -> new
  for (std::size_t i = 0; i < passage.lines.size(); ++i) {
    remap.emplace_back(passage.lines[i].id, static_cast<int>(i) + 1);
    passage.lines[i].id = static_cast<int>(i) + 1;
  }
  auto mapped = [&remap](int old_id) {
    for (auto [from, to] : remap)
      if (from == old_id) return to;
    return old_id;
  };
  for (auto& block : passage.list_blocks) {
    for (int& id : block.item_line_ids) id = mapped(id);
    if (block.lead_in_line_id) block.lead_in_line_id = mapped(*block.lead_in_line_id);
  }
  validate_passage(passage);
  return passage;
}

std::vector<Passage> select_list_passages(const std::vector<Document>& corpus) {
  std::vector<Passage> out;
  for (const auto& doc : corpus)
    for (const auto& p : doc.passages)
      if (p.has_list()) out.push_back(p);
  return out;
}

}  // namespace listqa::corpus
