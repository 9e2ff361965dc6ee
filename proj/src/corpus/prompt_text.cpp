#include "listqa/corpus/prompt_text.hpp"

#include <sstream>

#include "listqa/util/text.hpp"

namespace listqa::corpus {

namespace {
constexpr std::string_view kBullet = "\xE2\x80\xA2 ";  // "• "
}

std::string render_prompt_text(const Passage& passage, int ordinal, int start_id) {
  std::ostringstream out;
  out << "Passage " << ordinal;
  if (!passage.title.empty()) out << ": " << passage.title;
  out << '\n';
  for (const auto& line : passage.lines) {
    if (line.is_list_item) out << kBullet;
    out << '[' << (start_id + line.id - 1) << "] " << line.text << '\n';
  }
  return out.str();
}

std::string render_prompt_passages(const std::vector<Passage>& passages) {
  std::string out;
  int next_id = 1;
  int ordinal = 0;
  for (const auto& p : passages) {
    ++ordinal;
    out += render_prompt_text(p, ordinal, next_id);
    next_id += static_cast<int>(p.lines.size());
  }
  return out;
}

Passage parse_prompt_text(std::string_view text) {
  Passage passage;
  bool saw_header = false;
  bool block_open = false;
  int last_non_list_id = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw =
        eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    std::string_view line = trim_view(raw);
    if (line.empty()) continue;

    if (!saw_header) {
      if (line.substr(0, 8) != "Passage ")
        throw PromptParseError("expected 'Passage <k>' header, got: " + std::string(line));
      std::size_t colon = line.find(':');
      passage.title = colon == std::string_view::npos
                          ? ""
                          : std::string(trim_view(line.substr(colon + 1)));
      saw_header = true;
      continue;
    }

    bool is_item = false;
    if (line.substr(0, kBullet.size()) == kBullet) {
      is_item = true;
      line = trim_view(line.substr(kBullet.size()));
    }
    if (line.empty() || line[0] != '[')
      throw PromptParseError("expected '[id] text' line, got: " + std::string(raw));
    std::size_t close = line.find(']');
    if (close == std::string_view::npos)
      throw PromptParseError("unterminated line id: " + std::string(raw));
    std::string body = std::string(trim_view(line.substr(close + 1)));
    if (body.empty()) throw PromptParseError("empty line body: " + std::string(raw));

    int id = static_cast<int>(passage.lines.size()) + 1;
    passage.lines.push_back(Line{id, body, is_item});
    if (is_item) {
      if (!block_open) {
        passage.list_blocks.push_back(
            ListBlock{last_non_list_id > 0 ? std::optional<int>(last_non_list_id) : std::nullopt,
                      {},
                      std::nullopt,
                      std::nullopt});
        block_open = true;
      }
      passage.list_blocks.back().item_line_ids.push_back(id);
    } else {
      block_open = false;
      last_non_list_id = id;
    }
  }
  if (!saw_header) throw PromptParseError("no passage header found");
  validate_passage(passage);
  return passage;
}

}  // namespace listqa::corpus
