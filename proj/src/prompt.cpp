#include "laud/prompt.hpp"

#include "laud/errors.hpp"

namespace laud {

namespace {

std::size_t count_of(std::string_view haystack, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos; pos = haystack.find(needle, pos + needle.size()))
    ++n;
  return n;
}

std::string substitute_once(std::string_view tmpl, std::string_view placeholder, std::string_view value) {
  const auto pos = tmpl.find(placeholder);
  std::string out;
  out.reserve(tmpl.size() + value.size());
  out.append(tmpl.substr(0, pos));
  out.append(value);
  out.append(tmpl.substr(pos + placeholder.size()));
  return out;
}

}  // namespace

PromptTemplate::PromptTemplate(std::string s1_template, std::string s2_template, std::string category)
    : s1_(std::move(s1_template)), s2_(std::move(s2_template)), category_(std::move(category)) {
  if (count_of(s1_, commodity_placeholder) != 1)
    throw InvalidArgument("s1 template must contain {commodity} exactly once");
  if (count_of(s2_, category_placeholder) != 1) throw InvalidArgument("s2 template must contain {category} exactly once");
}

RenderedPrompt render_prompt(const PromptTemplate& tmpl, std::string_view commodity) {
  return {substitute_once(tmpl.s1_template(), PromptTemplate::commodity_placeholder, commodity),
          substitute_once(tmpl.s2_template(), PromptTemplate::category_placeholder, tmpl.category())};
}

}  // namespace laud
