#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "listqa/listlogic/types.hpp"

namespace listqa::corpus {

struct Line {
  int id = 0;  // 1-based, consecutive within the passage
  std::string text;
  bool is_list_item = false;
};

// A run of list-item lines plus the non-list line that introduces them.
// list_type / logical_relation stay unset until classification.
struct ListBlock {
  std::optional<int> lead_in_line_id;
  std::vector<int> item_line_ids;
  std::optional<listlogic::ListType> list_type;
  std::optional<listlogic::LogicalRelation> logical_relation;
};

struct Passage {
  std::string passage_id;
  std::string title;  // heading text; empty for content before the first heading
  std::vector<Line> lines;
  std::vector<ListBlock> list_blocks;

  bool empty() const { return lines.empty(); }
  bool has_list() const { return !list_blocks.empty(); }
  const Line* line_by_id(int id) const {
    for (const auto& l : lines)
      if (l.id == id) return &l;
    return nullptr;
  }
};

struct Document {
  std::string doc_id;
  std::string source_name;
  std::vector<Passage> passages;
};

struct EmptyDocument : std::runtime_error {
  explicit EmptyDocument(const std::string& doc_id)
      : std::runtime_error("document has no textual content: " + doc_id) {}
};

struct InvalidPassage : std::runtime_error {
  explicit InvalidPassage(const std::string& what) : std::runtime_error(what) {}
};

// Structural checks: line ids are 1..n in order, every block item references an
// existing list-item line exactly once, relation only on condition blocks.
void validate_passage(const Passage& passage);

// Assigns line ids 1..n in document order. Idempotent.
Passage number_lines(Passage passage);

// Passages with at least one list block, in corpus order.
std::vector<Passage> select_list_passages(const std::vector<Document>& corpus);

}  // namespace listqa::corpus
