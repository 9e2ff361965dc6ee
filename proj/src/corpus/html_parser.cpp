#include "listqa/corpus/html_parser.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

#include "listqa/util/text.hpp"

namespace listqa::corpus {

namespace {

bool is_heading_tag(std::string_view name) {
  return name.size() == 2 && name[0] == 'h' && name[1] >= '1' && name[1] <= '6';
}

// Tags that terminate the current text line when they open or close.
bool is_block_tag(std::string_view name) {
  static constexpr std::array<std::string_view, 22> kBlock = {
      "p", "div", "li", "ul", "ol", "table", "tr", "br", "hr", "blockquote",
      "pre", "section", "article", "header", "footer", "main", "aside",
      "dl", "dt", "dd", "figure", "figcaption"};
  return std::find(kBlock.begin(), kBlock.end(), name) != kBlock.end() || is_heading_tag(name);
}

bool is_stripped_tag(std::string_view name) {
  return name == "script" || name == "style" || name == "nav";
}

void append_entity(std::string& out, std::string_view entity) {
  // entity excludes '&' and ';'
  if (entity.empty()) {
    out += "&;";
    return;
  }
  if (entity[0] == '#') {
    long code = 0;
    if (entity.size() > 2 && (entity[1] == 'x' || entity[1] == 'X'))
      code = std::strtol(std::string(entity.substr(2)).c_str(), nullptr, 16);
    else
      code = std::strtol(std::string(entity.substr(1)).c_str(), nullptr, 10);
    if (code <= 0) return;
    // Minimal UTF-8 encode.
    auto c = static_cast<unsigned long>(code);
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
    return;
  }
  std::string name = to_lower(entity);
  if (name == "amp") out.push_back('&');
  else if (name == "lt") out.push_back('<');
  else if (name == "gt") out.push_back('>');
  else if (name == "quot") out.push_back('"');
  else if (name == "apos") out.push_back('\'');
  else if (name == "nbsp") out.push_back(' ');
  else if (name == "ndash" || name == "mdash") out.push_back('-');
  else if (name == "rsquo" || name == "lsquo") out.push_back('\'');
  else {
    // Unknown entity: keep it verbatim rather than guessing.
    out.push_back('&');
    out.append(entity);
    out.push_back(';');
  }
}

std::string decode_entities(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '&') {
      std::size_t semi = raw.find(';', i + 1);
      if (semi != std::string_view::npos && semi - i <= 10) {
        append_entity(out, raw.substr(i + 1, semi - i - 1));
        i = semi;
        continue;
      }
    }
    out.push_back(raw[i]);
  }
  return out;
}

struct Tag {
  std::string name;
  bool closing = false;
};

// Document assembler: receives flushed text lines and list/heading events.
class Builder {
 public:
  Builder(std::string doc_id, std::string source_name)
      : doc_(Document{std::move(doc_id), std::move(source_name), {}}) {}

  void add_line(std::string text, bool is_list_item) {
    std::string norm = normalize_ws(text);
    if (norm.empty()) return;
    ensure_passage();
    Passage& p = doc_.passages.back();
    int id = static_cast<int>(p.lines.size()) + 1;
    p.lines.push_back(Line{id, std::move(norm), is_list_item});
    if (is_list_item) {
      if (!block_open_) {
        p.list_blocks.push_back(ListBlock{last_non_list_id_ ? std::optional<int>(last_non_list_id_)
                                                            : std::nullopt,
                                          {}, std::nullopt, std::nullopt});
        block_open_ = true;
      }
      p.list_blocks.back().item_line_ids.push_back(id);
    } else {
      block_open_ = false;
      last_non_list_id_ = id;
    }
  }

  void start_passage(std::string title) {
    doc_.passages.push_back(Passage{});
    doc_.passages.back().title = normalize_ws(title);
    block_open_ = false;
    last_non_list_id_ = 0;
  }

  Document finish() {
    // Drop a leading untitled passage that never received content.
    auto& ps = doc_.passages;
    ps.erase(std::remove_if(ps.begin(), ps.end(),
                            [](const Passage& p) { return p.title.empty() && p.lines.empty(); }),
             ps.end());
    int ordinal = 0;
    bool any_text = false;
    for (auto& p : ps) {
      ++ordinal;
      p.passage_id = doc_.doc_id + "#p" + std::to_string(ordinal);
      if (!p.title.empty() || !p.lines.empty()) any_text = true;
      validate_passage(p);
    }
    if (!any_text) throw EmptyDocument(doc_.doc_id);
    return std::move(doc_);
  }

 private:
  void ensure_passage() {
    if (doc_.passages.empty()) start_passage("");
  }

  Document doc_;
  bool block_open_ = false;
  int last_non_list_id_ = 0;
};

}  // namespace

Document parse_html(std::string_view raw_html, const std::string& doc_id,
                    const std::string& source_name) {
  Builder builder(doc_id, source_name);

  std::string buffer;           // text of the line being assembled
  bool buffer_is_list = false;  // whether it came from an <li>
  int list_depth = 0;
  int li_depth = 0;
  int strip_depth = 0;  // inside script/style/nav
  std::string strip_tag;
  bool in_heading = false;
  std::string heading_text;

  auto flush = [&]() {
    if (strip_depth == 0) builder.add_line(buffer, buffer_is_list);
    buffer.clear();
    buffer_is_list = li_depth > 0;
  };

  std::size_t i = 0;
  const std::size_t n = raw_html.size();
  while (i < n) {
    char c = raw_html[i];
    if (c != '<') {
      std::size_t next = raw_html.find('<', i);
      if (next == std::string_view::npos) next = n;
      std::string text = decode_entities(raw_html.substr(i, next - i));
      if (strip_depth == 0) {
        if (in_heading) heading_text += text;
        else buffer += text;
      }
      i = next;
      continue;
    }
    // Comments and declarations.
    if (raw_html.compare(i, 4, "<!--") == 0) {
      std::size_t end = raw_html.find("-->", i + 4);
      i = end == std::string_view::npos ? n : end + 3;
      continue;
    }
    if (i + 1 < n && (raw_html[i + 1] == '!' || raw_html[i + 1] == '?')) {
      std::size_t end = raw_html.find('>', i + 1);
      i = end == std::string_view::npos ? n : end + 1;
      continue;
    }
    std::size_t end = raw_html.find('>', i + 1);
    if (end == std::string_view::npos) {
      // Unterminated tag: treat the rest as text and stop.
      buffer += decode_entities(raw_html.substr(i));
      break;
    }
    std::string_view inner = raw_html.substr(i + 1, end - i - 1);
    i = end + 1;

    Tag tag;
    std::size_t p = 0;
    if (p < inner.size() && inner[p] == '/') {
      tag.closing = true;
      ++p;
    }
    std::size_t name_start = p;
    while (p < inner.size() && (std::isalnum(static_cast<unsigned char>(inner[p])) != 0)) ++p;
    tag.name = to_lower(inner.substr(name_start, p - name_start));
    if (tag.name.empty()) continue;  // stray '<' noise
    bool self_closing = !inner.empty() && inner.back() == '/';

    if (is_stripped_tag(tag.name)) {
      if (self_closing) continue;
      if (!tag.closing) {
        if (strip_depth == 0) strip_tag = tag.name;
        if (tag.name == strip_tag) ++strip_depth;
      } else if (strip_depth > 0 && tag.name == strip_tag) {
        --strip_depth;
      }
      continue;
    }
    if (strip_depth > 0) continue;

    if (is_heading_tag(tag.name)) {
      if (!tag.closing) {
        flush();
        in_heading = true;
        heading_text.clear();
      } else if (in_heading) {
        in_heading = false;
        builder.start_passage(heading_text);
        heading_text.clear();
      }
      continue;
    }
    if (in_heading) continue;  // ignore markup inside a heading

    if (tag.name == "li") {
      flush();
      if (!tag.closing) ++li_depth;
      else if (li_depth > 0) --li_depth;
      buffer_is_list = li_depth > 0;
      continue;
    }
    if (tag.name == "ul" || tag.name == "ol") {
      flush();
      if (!tag.closing) ++list_depth;
      else if (list_depth > 0) {
        --list_depth;
        if (list_depth == 0) li_depth = 0;  // recover from unclosed <li>
      }
      buffer_is_list = li_depth > 0;
      continue;
    }
    if (tag.name == "td" || tag.name == "th") {
      // Cells of one row join into a single line.
      buffer += ' ';
      continue;
    }
    if (is_block_tag(tag.name)) {
      flush();
      continue;
    }
    // Inline tag (a, b, em, span, ...): contributes word separation only when
    // authors rely on it; keep the text stream unbroken.
  }
  flush();
  if (in_heading) builder.start_passage(heading_text);

  return builder.finish();
}

}  // namespace listqa::corpus
