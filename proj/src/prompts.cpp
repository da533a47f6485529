// SPDX-License-Identifier: Apache-2.0
#include "nl2sva/prompts.hpp"

#include <algorithm>
#include <array>

namespace nl2sva {

namespace {

const std::array<PromptTemplate, 5> kTemplates = {{
    {
        "initial_generation",
        "You are an expert in formal hardware verification and SystemVerilog "
        "Assertions. You translate natural language property descriptions "
        "into concurrent assertions.",
        "Design context:\n"
        "{{design_context}}\n"
        "\n"
        "Reference material retrieved for this property (may be empty):\n"
        "{{retrieved_context}}\n"
        "\n"
        "Translate the following natural language description into a single "
        "SystemVerilog concurrent assertion. Use only the signals named in "
        "the design context. Include the clocking event.\n"
        "\n"
        "Description: {{spec}}\n"
        "\n"
        "Reply with exactly one `assert property (...);` statement inside a "
        "fenced code block.",
        {"spec", "design_context", "retrieved_context"},
    },
    {
        "keyword_extraction",
        "You analyze natural language descriptions of hardware properties.",
        "Decompose the natural language description below into parts, each "
        "representing an operation over a single signal or a group of "
        "signals. Report each part as a short keyword phrase taken from the "
        "description.\n"
        "\n"
        "Description: {{spec}}\n"
        "\n"
        "Reply with a JSON list of keyword phrases, nothing else.",
        {"spec"},
    },
    {
        "operator_extraction",
        "You map hardware property phrases onto SystemVerilog Assertion "
        "operators.",
        "For each keyword phrase below, pick the single most relevant SVA "
        "operator from this fixed list of ten:\n"
        "\n"
        "  ##N            delay between sequence points\n"
        "  $rose          signal changed to 1\n"
        "  $fell          signal changed to 0\n"
        "  $past          value in a previous clock cycle\n"
        "  $stable        value did not change\n"
        "  $onehot        exactly one bit is 1\n"
        "  $onehot0       at most one bit is 1\n"
        "  |->            overlapping implication\n"
        "  |=>            non-overlapping implication\n"
        "  s_eventually   holds at some current or future cycle\n"
        "\n"
        "Keyword phrases:\n"
        "{{keywords}}\n"
        "\n"
        "Reply with a JSON object mapping each phrase to one operator name "
        "spelled exactly as in the list.",
        {"keywords"},
    },
    {
        "sva_rechecking",
        "You review SystemVerilog Assertions against their natural language "
        "intent, paying close attention to the semantics of each operator.",
        "Property description: {{spec}}\n"
        "\n"
        "Candidate assertion:\n"
        "{{candidate}}\n"
        "\n"
        "Operator semantics relevant to the candidate:\n"
        "{{explanations}}\n"
        "\n"
        "{{syntax_feedback}}\n"
        "\n"
        "Decide whether the candidate assertion implements the description. "
        "If it does, reply with the single line:\n"
        "VERDICT: CORRECT\n"
        "If it does not, reply with the line:\n"
        "VERDICT: REVISED\n"
        "followed by the corrected assertion inside a fenced code block.",
        {"spec", "candidate", "explanations", "syntax_feedback"},
    },
    {
        "derivation_generation",
        "You explain SystemVerilog Assertions step by step.",
        "The one-sentence explanation below describes an assertion whose "
        "top-level operator is {{operator}}. Split the explanation into "
        "exactly {{fragment_count}} parts, one per operand of that operator, "
        "in operand order.\n"
        "\n"
        "Explanation: {{explanation}}\n"
        "\n"
        "Reply with a JSON list of exactly {{fragment_count}} fragment "
        "strings, nothing else.",
        {"explanation", "operator", "fragment_count"},
    },
}};

std::string substitute(const std::string& text,
                       const std::map<std::string, std::string>& bindings) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{' && i + 1 < text.size() && text[i + 1] == '{') {
      std::size_t end = text.find("}}", i + 2);
      if (end == std::string::npos)
        throw Error(ErrorCode::InvalidConfig,
                    "template has an unterminated placeholder");
      std::string name = text.substr(i + 2, end - i - 2);
      auto it = bindings.find(name);
      if (it == bindings.end())
        throw Error(ErrorCode::MissingVariable,
                    "no binding for template variable '" + name + "'");
      out += it->second;
      i = end + 2;
    } else {
      out.push_back(text[i]);
      ++i;
    }
  }
  return out;
}

} // namespace

const PromptTemplate& get_template(const std::string& id) {
  for (const auto& t : kTemplates)
    if (t.id == id) return t;
  throw Error(ErrorCode::InvalidConfig, "unknown prompt template '" + id + "'");
}

std::vector<std::string> template_ids() {
  std::vector<std::string> out;
  for (const auto& t : kTemplates) out.push_back(t.id);
  return out;
}

PromptRender render_prompt(const std::string& template_id,
                           const std::map<std::string, std::string>& bindings) {
  const PromptTemplate& t = get_template(template_id);
  std::vector<std::string> missing;
  for (const auto& name : t.required_vars)
    if (!bindings.count(name)) missing.push_back(name);
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size(); ++i) {
      if (i) list += ", ";
      list += missing[i];
    }
    throw Error(ErrorCode::MissingVariable,
                "template '" + template_id +
                    "' is missing required variables: " + list);
  }
  PromptRender r;
  r.template_id = template_id;
  r.bindings = bindings;
  r.system = t.system;
  r.user = substitute(t.user, bindings);
  return r;
}

} // namespace nl2sva
