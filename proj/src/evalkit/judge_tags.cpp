#include "listqa/evalkit/judge_tags.hpp"

#include "listqa/util/text.hpp"

namespace listqa::evalkit {

std::string_view grade_token(Grade g, std::string_view positive, std::string_view negative) {
  switch (g) {
    case Grade::kPositive: return positive;
    case Grade::kNegative: return negative;
    case Grade::kNa: return "na";
  }
  return "na";
}

namespace {

// Finds <tag>...</tag> case-insensitively; returns the trimmed inner text.
std::optional<std::string> extract_tag(std::string_view raw, std::string_view tag) {
  std::string haystack = to_lower(raw);
  std::string open = "<" + std::string(tag) + ">";
  std::string close = "</" + std::string(tag) + ">";
  std::size_t begin = haystack.find(open);
  if (begin == std::string::npos) return std::nullopt;
  begin += open.size();
  std::size_t end = haystack.find(close, begin);
  if (end == std::string::npos) return std::nullopt;
  return trim(raw.substr(begin, end - begin));
}

Grade parse_grade(std::string_view raw, std::string_view tag, std::string_view positive,
                  std::string_view negative) {
  auto value = extract_tag(raw, tag);
  if (!value) throw JudgeTagParseError("missing <" + std::string(tag) + "> tag");
  std::string v = to_lower(*value);
  if (v == positive) return Grade::kPositive;
  if (v == negative) return Grade::kNegative;
  if (v == "na" || v == "n/a") return Grade::kNa;
  throw JudgeTagParseError("unexpected <" + std::string(tag) + "> value: " + *value);
}

}  // namespace

JudgeTags parse_judge_tags(std::string_view raw, bool require_answerable) {
  JudgeTags tags;
  auto answerable = extract_tag(raw, "answerable");
  if (answerable) {
    std::string v = to_lower(*answerable);
    if (v == "answerable") tags.answerable = true;
    else if (v == "unanswerable") tags.answerable = false;
    else throw JudgeTagParseError("unexpected <answerable> value: " + *answerable);
  } else if (require_answerable) {
    throw JudgeTagParseError("missing <answerable> tag");
  }

  if (tags.answerable.has_value() && !*tags.answerable) {
    // Unanswerable: dimensions are NA by definition; tolerate their absence.
    return tags;
  }
  tags.correctness = parse_grade(raw, "correctness", "correct", "incorrect");
  tags.faithfulness = parse_grade(raw, "faithfulness", "faithful", "unfaithful");
  tags.completeness = parse_grade(raw, "completeness", "complete", "incomplete");
  return tags;
}

}  // namespace listqa::evalkit
