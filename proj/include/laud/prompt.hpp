#pragma once

#include <string>
#include <string_view>
#include <utility>

namespace laud {

/// Sentence-pair prompt for next-sentence-style scoring: s1 carries the item
/// text, s2 the category claim.
class PromptTemplate {
 public:
  static constexpr std::string_view commodity_placeholder = "{commodity}";
  static constexpr std::string_view category_placeholder = "{category}";
  static constexpr std::string_view default_s1 = "Commodity with name {commodity}";
  static constexpr std::string_view default_s2 = "is belong to {category} category.";

  /// Throws InvalidArgument unless each template holds its placeholder
  /// exactly once.
  PromptTemplate(std::string s1_template, std::string s2_template, std::string category);
  explicit PromptTemplate(std::string category)
      : PromptTemplate(std::string(default_s1), std::string(default_s2), std::move(category)) {}

  const std::string& s1_template() const noexcept { return s1_; }
  const std::string& s2_template() const noexcept { return s2_; }
  const std::string& category() const noexcept { return category_; }

 private:
  std::string s1_;
  std::string s2_;
  std::string category_;
};

struct RenderedPrompt {
  std::string s1;
  std::string s2;
  friend bool operator==(const RenderedPrompt&, const RenderedPrompt&) = default;
};

/// Single-pass substitution: inserted text is never re-expanded.
RenderedPrompt render_prompt(const PromptTemplate& tmpl, std::string_view commodity);

}  // namespace laud
