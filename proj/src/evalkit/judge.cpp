#include "listqa/evalkit/judge.hpp"

namespace listqa::evalkit {

JudgeOutcome judge_response(gateway::Gateway& gw, const PromptLibrary& prompts,
                            const JudgeSettings& settings, const std::string& context,
                            const std::string& question, const std::string& response) {
  gateway::CompletionRequest request;
  request.model = settings.model;
  request.max_output_tokens = settings.max_output_tokens;
  request.temperature = 0.0;
  request.request_tag = "eval_judge";
  request.user_text = prompts.render(settings.template_name, {{"CONTEXT", context},
                                                              {"QUESTION", question},
                                                              {"RESPONSE", response}});

  auto grade = [](const std::string& raw) {
    JudgeTags tags = parse_judge_tags(raw, /*require_answerable=*/false);
    return JudgeOutcome{tags.correctness, tags.faithfulness, tags.completeness, raw};
  };

  std::string raw = gw.complete(request).text;
  try {
    return grade(raw);
  } catch (const JudgeTagParseError&) {
    gateway::CompletionRequest retry = request;
    retry.user_text += "\n\nRemember to output every assessment inside its tags.";
    return grade(gw.complete(retry).text);
  }
}

}  // namespace listqa::evalkit
