// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "nl2sva/errors.hpp"

namespace nl2sva {

struct PromptTemplate {
  std::string id;
  std::string system;               // system message, no placeholders
  std::string user;                 // user message with {{name}} placeholders
  std::vector<std::string> required_vars;
};

/// A rendered prompt, still carrying the template identity and bindings so
/// providers can key replay fixtures off them.
struct PromptRender {
  std::string template_id;
  std::map<std::string, std::string> bindings;
  std::string system;
  std::string user;
};

/// Template ids: initial_generation, keyword_extraction, operator_extraction,
/// sva_rechecking, derivation_generation.
const PromptTemplate& get_template(const std::string& id);
std::vector<std::string> template_ids();

/// Substitutes {{name}} placeholders. Throws Error(MissingVariable) listing
/// every required variable absent from `bindings`; unknown bindings are
/// ignored. The result never contains an unbound placeholder.
PromptRender render_prompt(const std::string& template_id,
                           const std::map<std::string, std::string>& bindings);

} // namespace nl2sva
