#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

namespace listqa {

struct TemplateError : std::runtime_error {
  explicit TemplateError(const std::string& what) : std::runtime_error(what) {}
};

// Plain-text prompt templates with {{SLOT}} placeholders, one file per
// template. Rendering replaces every provided slot and rejects templates that
// still contain an unresolved placeholder afterwards.
class PromptLibrary {
 public:
  explicit PromptLibrary(const std::filesystem::path& dir);

  std::string render(const std::string& name,
                     const std::map<std::string, std::string>& slots) const;
  const std::string& raw(const std::string& name) const;

 private:
  std::map<std::string, std::string> templates_;
  std::filesystem::path dir_;
};

}  // namespace listqa
