#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "listqa/corpus/types.hpp"

namespace listqa::corpus {

// Plain-text passage rendering used inside model prompts:
//
//   Passage 2: Workplace pensions
//   [1] You can get free, impartial information about your workplace pension options from:
//   • [2] the Money Advice Service
//
// The header carries the ordinal and (when present) the title; body lines are
// numbered `[id]` with a bullet prefix on list items. `start_id` shifts the
// printed ids so several passages can share one contiguous numbering inside a
// prompt; the passage's own ids stay 1-based.
std::string render_prompt_text(const Passage& passage, int ordinal, int start_id = 1);

// Contiguous rendering of several passages, ids spanning 1..N across them.
std::string render_prompt_passages(const std::vector<Passage>& passages);

struct PromptParseError : std::runtime_error {
  explicit PromptParseError(const std::string& what) : std::runtime_error(what) {}
};

// Inverse of render_prompt_text for a single passage (ids are re-based to 1).
// Round-trips exactly on passages produced by parse_html.
Passage parse_prompt_text(std::string_view text);

}  // namespace listqa::corpus
