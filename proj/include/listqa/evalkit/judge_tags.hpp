#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace listqa::evalkit {

// Three-way judgment for one quality dimension. kNa marks dimensions the judge
// was told to skip (unanswerable questions).
enum class Grade { kPositive, kNegative, kNa };

std::string_view grade_token(Grade g, std::string_view positive, std::string_view negative);

struct JudgeTagParseError : std::runtime_error {
  explicit JudgeTagParseError(const std::string& what) : std::runtime_error(what) {}
};

// Parsed contents of the `<answerable>/<correctness>/<faithfulness>/
// <completeness>` tag protocol emitted by judge prompts.
struct JudgeTags {
  std::optional<bool> answerable;  // absent for response-evaluation prompts
  Grade correctness = Grade::kNa;
  Grade faithfulness = Grade::kNa;
  Grade completeness = Grade::kNa;
};

// Extracts the assessment tags from raw judge output. Tag names match
// case-insensitively; values come from the fixed vocabulary
// correct/incorrect/NA, faithful/unfaithful/NA, complete/incomplete/NA and
// answerable/unanswerable. `require_answerable` controls whether a missing
// <answerable> tag is an error (filtering prompt) or fine (evaluation prompt).
// When the question is judged unanswerable the three dimensions are forced to
// kNa regardless of what the judge emitted.
JudgeTags parse_judge_tags(std::string_view raw, bool require_answerable);

}  // namespace listqa::evalkit
