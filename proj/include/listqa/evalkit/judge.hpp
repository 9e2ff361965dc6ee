#pragma once

#include <string>

#include "listqa/evalkit/judge_tags.hpp"
#include "listqa/gateway/gateway.hpp"
#include "listqa/prompts.hpp"

namespace listqa::evalkit {

struct JudgeSettings {
  std::string model;
  int max_output_tokens = 1024;
  std::string template_name = "response_judge";
};

struct JudgeOutcome {
  Grade correctness = Grade::kNa;
  Grade faithfulness = Grade::kNa;
  Grade completeness = Grade::kNa;
  std::string raw_text;
};

// Grades one response against its grounding context with the model judge
// (temperature 0). One reprompt on unparseable tag output, then the error
// propagates as JudgeTagParseError.
JudgeOutcome judge_response(gateway::Gateway& gw, const PromptLibrary& prompts,
                            const JudgeSettings& settings, const std::string& context,
                            const std::string& question, const std::string& response);

}  // namespace listqa::evalkit
