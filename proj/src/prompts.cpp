#include "listqa/prompts.hpp"

#include <fstream>
#include <sstream>

namespace listqa {

PromptLibrary::PromptLibrary(const std::filesystem::path& dir) : dir_(dir) {
  if (!std::filesystem::is_directory(dir))
    throw TemplateError("prompt template directory not found: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    std::ifstream in(entry.path());
    std::ostringstream buf;
    buf << in.rdbuf();
    templates_[entry.path().stem().string()] = buf.str();
  }
}

const std::string& PromptLibrary::raw(const std::string& name) const {
  auto it = templates_.find(name);
  if (it == templates_.end())
    throw TemplateError("no prompt template '" + name + "' in " + dir_.string());
  return it->second;
}

std::string PromptLibrary::render(const std::string& name,
                                  const std::map<std::string, std::string>& slots) const {
  std::string text = raw(name);
  for (const auto& [key, value] : slots) {
    std::string needle = "{{" + key + "}}";
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
      text.replace(pos, needle.size(), value);
      pos += value.size();
    }
  }
  std::size_t leftover = text.find("{{");
  if (leftover != std::string::npos && text.find("}}", leftover) != std::string::npos)
    throw TemplateError("unresolved placeholder in template '" + name +
                        "': " + text.substr(leftover, 30));
  return text;
}

}  // namespace listqa
