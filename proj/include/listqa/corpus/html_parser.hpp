#pragma once

#include <string>
#include <string_view>

#include "listqa/corpus/types.hpp"

namespace listqa::corpus {

// Splits an HTML support document into titled, line-numbered passages.
//
// Rules:
//   - every <h1>..<h6> starts a new passage titled with the heading text;
//     content before the first heading forms an untitled passage
//   - one line per block-level element; <li> lines are marked as list items
//     and consecutive list-item lines form one ListBlock (nested and adjacent
//     sibling lists flatten into the enclosing run)
//   - a block's lead-in is the nearest preceding non-list line
//   - script/style/nav subtrees are stripped; entities are decoded; table rows
//     render as plain lines
//
// Tolerant of malformed fragments: unknown or unbalanced tags never abort the
// parse. Throws EmptyDocument when nothing textual survives.
Document parse_html(std::string_view raw_html, const std::string& doc_id,
                    const std::string& source_name = "");

}  // namespace listqa::corpus
