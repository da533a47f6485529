// SPDX-License-Identifier: Apache-2.0
#include "nl2sva/derivation.hpp"

#include <array>
#include <fstream>

#include "json.hpp"

#include "nl2sva/parser.hpp"

namespace nl2sva {

namespace {

// Iff has no retrieval token, so fall back to the kind name.
std::string op_label(OpKind kind) {
  const char* surface = operator_surface_token(kind);
  return surface ? surface : op_kind_name(kind);
}

std::string cycles(long n) {
  return n == 1 ? "1 clock cycle" : std::to_string(n) + " clock cycles";
}

std::string term(const Expr& e);

std::string describe(const Expr& e) {
  switch (e.kind) {
  case OpKind::SignalRef:
    return "signal " + e.name + " is high";
  case OpKind::IntLiteral:
    return "the constant " + std::to_string(e.value);
  case OpKind::Select:
    return term(e) + " is high";
  case OpKind::Not:
    return "it is not the case that " + describe(*e.children[0]);
  case OpKind::And:
    return describe(*e.children[0]) + " and " + describe(*e.children[1]);
  case OpKind::Or:
    return describe(*e.children[0]) + " or " + describe(*e.children[1]);
  case OpKind::Eq:
    return term(*e.children[0]) + " equals " + term(*e.children[1]);
  case OpKind::Neq:
    return term(*e.children[0]) + " differs from " + term(*e.children[1]);
  case OpKind::Rose:
    return term(*e.children[0]) + " changed to 1";
  case OpKind::Fell:
    return term(*e.children[0]) + " changed to 0";
  case OpKind::Stable:
    return term(*e.children[0]) + " did not change";
  case OpKind::Past:
    return term(e) + " is high";
  case OpKind::Onehot:
    return "exactly one bit of " + term(*e.children[0]) + " is high";
  case OpKind::Onehot0:
    return "at most one bit of " + term(*e.children[0]) + " is high";
  case OpKind::Delay:
    if (e.children.size() == 1)
      return "after " + cycles(e.param) + ", " + describe(*e.children[0]);
    return describe(*e.children[0]) + ", then " + cycles(e.param) +
           " later, " + describe(*e.children[1]);
  case OpKind::OverlapImpl:
    return "whenever " + describe(*e.children[0]) +
           ", in the same clock cycle " + describe(*e.children[1]);
  case OpKind::NonOverlapImpl:
    return "whenever " + describe(*e.children[0]) +
           ", in the next clock cycle " + describe(*e.children[1]);
  case OpKind::SEventually:
    return "at some current or future clock cycle, " +
           describe(*e.children[0]);
  case OpKind::Iff:
    return describe(*e.children[0]) + " exactly when " +
           describe(*e.children[1]);
  }
  return "";
}

std::string term(const Expr& e) {
  switch (e.kind) {
  case OpKind::SignalRef:
    return e.name;
  case OpKind::IntLiteral:
    return std::to_string(e.value);
  case OpKind::Select:
    if (e.has_range)
      return e.children[0]->name + " bits " + std::to_string(e.msb) +
             " down to " + std::to_string(e.lsb);
    return "bit " + std::to_string(e.lsb) + " of " + e.children[0]->name;
  case OpKind::Past:
    if (e.param == 1)
      return "the value of " + term(*e.children[0]) +
             " in the previous clock cycle";
    return "the value of " + term(*e.children[0]) + " " +
           cycles(e.param) + " earlier";
  case OpKind::Rose:
    return "the rise of " + term(*e.children[0]);
  case OpKind::Fell:
    return "the fall of " + term(*e.children[0]);
  case OpKind::Stable:
    return "the stability of " + term(*e.children[0]);
  case OpKind::Not:
    return "the negation of " + term(*e.children[0]);
  default:
    return "(" + describe(e) + ")";
  }
}

} // namespace

std::string describe_expr(const Expr& expr) { return describe(expr); }

std::string describe_assertion(const SvaAst& ast) {
  std::string out = "On every ";
  out += ast.clocking.edge == ClockingEvent::Edge::Posedge ? "rising"
                                                           : "falling";
  out += " edge of " + ast.clocking.clock_signal + ", ";
  if (ast.disable_condition)
    out += "unless " + describe(*ast.disable_condition) + " at any point, ";
  out += describe(*ast.body) + ".";
  return out;
}

std::vector<std::string> LlmFragmenter::split(const std::string& explanation,
                                              OpKind op, std::size_t count) {
  auto prompt = render_prompt(
      "derivation_generation",
      {{"explanation", explanation},
       {"operator", op_label(op)},
       {"fragment_count", std::to_string(count)}});
  auto fragments = parse_string_list(gateway_.complete(prompt).response);
  if (fragments.size() != count)
    throw Error(ErrorCode::Data,
                "fragment count mismatch: expected " + std::to_string(count) +
                    ", got " + std::to_string(fragments.size()));
  return fragments;
}

namespace {

void walk(const Expr& node, const std::string& nl, Fragmenter* fragmenter,
          DerivationTrace& out) {
  if (!is_property_operator(node.kind)) {
    DerivationStep step;
    step.kind = DerivationStep::Kind::TranslateSequence;
    step.fragment = nl;
    step.sva = render_expr(node);
    out.steps.push_back(std::move(step));
    return;
  }

  DerivationStep identify;
  identify.kind = DerivationStep::Kind::IdentifyPropertyOp;
  identify.op = op_label(node.kind);
  identify.sva = render_expr(node);
  out.steps.push_back(std::move(identify));

  const auto& kids = node.children;
  std::vector<std::string> fragments;
  if (fragmenter) {
    try {
      fragments = fragmenter->split(nl, node.kind, kids.size());
      if (fragments.size() != kids.size())
        throw Error(ErrorCode::Data, "fragmenter returned a wrong count");
    } catch (const Error& e) {
      out.notes.push_back("fragmenter fallback at '" + render_expr(node) +
                          "': " + e.what());
      fragments.clear();
    }
  }
  if (fragments.empty())
    for (const auto& kid : kids) fragments.push_back(describe(*kid));

  DerivationStep split;
  split.kind = DerivationStep::Kind::SplitFragments;
  split.fragments = fragments;
  out.steps.push_back(std::move(split));

  for (std::size_t i = 0; i < kids.size(); ++i) {
    DerivationStep classify;
    classify.kind = DerivationStep::Kind::ClassifyFragment;
    classify.fragment_index = static_cast<int>(i);
    classify.fragment_class =
        is_property_operator(kids[i]->kind) ? "property" : "sequence";
    out.steps.push_back(std::move(classify));

    if (is_property_operator(kids[i]->kind)) {
      walk(*kids[i], fragments[i], fragmenter, out);
    } else {
      DerivationStep translate;
      translate.kind = DerivationStep::Kind::TranslateSequence;
      translate.fragment = fragments[i];
      translate.sva = render_expr(*kids[i]);
      out.steps.push_back(std::move(translate));
    }
  }

  DerivationStep combine;
  combine.kind = DerivationStep::Kind::Combine;
  combine.op = op_label(node.kind);
  for (const auto& kid : kids) combine.parts.push_back(render_expr(*kid));
  combine.sva = render_expr(node);
  out.steps.push_back(std::move(combine));
}

} // namespace

DerivationTrace derive_trace(const SvaAst& ast, const std::string& explanation,
                             Fragmenter* fragmenter) {
  DerivationTrace out;
  out.sva = render(ast);
  out.explanation =
      explanation.empty() ? describe_assertion(ast) : explanation;

  walk(*ast.body, out.explanation, fragmenter, out);

  DerivationStep wrap;
  wrap.kind = DerivationStep::Kind::Wrap;
  wrap.clocking = std::string(ast.clocking.edge == ClockingEvent::Edge::Posedge
                                  ? "posedge "
                                  : "negedge ") +
                  ast.clocking.clock_signal;
  if (ast.disable_condition) wrap.disable = render_expr(*ast.disable_condition);
  wrap.sva = out.sva;
  out.steps.push_back(std::move(wrap));
  return out;
}

SvaAst replay_trace(const DerivationTrace& trace) {
  std::vector<ExprPtr> stack;
  bool wrapped = false;
  SvaAst ast;

  for (const auto& step : trace.steps) {
    switch (step.kind) {
    case DerivationStep::Kind::TranslateSequence:
      stack.push_back(parse_expression(step.sva));
      break;
    case DerivationStep::Kind::Combine: {
      auto kind = op_kind_from_name(step.op);
      if (!kind || !is_property_operator(*kind))
        throw Error(ErrorCode::Data,
                    "combine step names no property operator: " + step.op);
      std::size_t arity = *kind == OpKind::SEventually ? 1 : 2;
      if (step.parts.size() != arity)
        throw Error(ErrorCode::Data, "combine step has " +
                                         std::to_string(step.parts.size()) +
                                         " parts, operator takes " +
                                         std::to_string(arity));
      if (stack.size() < arity)
        throw Error(ErrorCode::Data, "combine step underflows the operand stack");
      auto node = std::make_shared<Expr>();
      node->kind = *kind;
      node->children.assign(stack.end() - static_cast<long>(arity), stack.end());
      stack.resize(stack.size() - arity);
      stack.push_back(node);
      break;
    }
    case DerivationStep::Kind::Wrap: {
      if (stack.size() != 1)
        throw Error(ErrorCode::Data,
                    "wrap step expects exactly one derived expression, have " +
                        std::to_string(stack.size()));
      std::size_t space = step.clocking.find(' ');
      if (space == std::string::npos)
        throw Error(ErrorCode::Data, "wrap step has a malformed clocking event");
      std::string edge = step.clocking.substr(0, space);
      if (edge != "posedge" && edge != "negedge")
        throw Error(ErrorCode::Data, "wrap step names edge '" + edge + "'");
      ast.clocking.edge = edge == "posedge" ? ClockingEvent::Edge::Posedge
                                            : ClockingEvent::Edge::Negedge;
      ast.clocking.clock_signal = step.clocking.substr(space + 1);
      if (!step.disable.empty())
        ast.disable_condition = parse_expression(step.disable);
      ast.body = stack.back();
      stack.pop_back();
      wrapped = true;
      break;
    }
    case DerivationStep::Kind::IdentifyPropertyOp:
    case DerivationStep::Kind::SplitFragments:
    case DerivationStep::Kind::ClassifyFragment:
      break;
    }
  }
  if (!wrapped)
    throw Error(ErrorCode::Data, "trace has no wrap step");
  return ast;
}

bool replay_matches(const DerivationTrace& trace) {
  try {
    SvaAst replayed = replay_trace(trace);
    SvaAst parsed = parse_assertion(trace.sva);
    return structurally_equal(replayed, parsed);
  } catch (const Error&) {
    return false;
  }
}

const char* derivation_step_kind_name(DerivationStep::Kind kind) {
  switch (kind) {
  case DerivationStep::Kind::IdentifyPropertyOp: return "identify_property_op";
  case DerivationStep::Kind::SplitFragments: return "split_fragments";
  case DerivationStep::Kind::ClassifyFragment: return "classify_fragment";
  case DerivationStep::Kind::TranslateSequence: return "translate_sequence";
  case DerivationStep::Kind::Combine: return "combine";
  case DerivationStep::Kind::Wrap: return "wrap";
  }
  return "";
}

namespace {

DerivationStep::Kind step_kind_from_name(const std::string& name) {
  static const std::array<DerivationStep::Kind, 6> kinds = {
      DerivationStep::Kind::IdentifyPropertyOp,
      DerivationStep::Kind::SplitFragments,
      DerivationStep::Kind::ClassifyFragment,
      DerivationStep::Kind::TranslateSequence,
      DerivationStep::Kind::Combine,
      DerivationStep::Kind::Wrap,
  };
  for (auto k : kinds)
    if (name == derivation_step_kind_name(k)) return k;
  throw Error(ErrorCode::Data, "unknown derivation step kind '" + name + "'");
}

} // namespace

std::string trace_to_json(const DerivationTrace& trace) {
  nlohmann::json j;
  j["sva"] = trace.sva;
  j["explanation"] = trace.explanation;
  j["steps"] = nlohmann::json::array();
  int number = 1;
  for (const auto& step : trace.steps) {
    nlohmann::json s;
    s["step"] = number++;
    s["kind"] = derivation_step_kind_name(step.kind);
    switch (step.kind) {
    case DerivationStep::Kind::IdentifyPropertyOp:
      s["op"] = step.op;
      s["sva"] = step.sva;
      break;
    case DerivationStep::Kind::SplitFragments:
      s["fragments"] = step.fragments;
      break;
    case DerivationStep::Kind::ClassifyFragment:
      s["fragment_index"] = step.fragment_index;
      s["class"] = step.fragment_class;
      break;
    case DerivationStep::Kind::TranslateSequence:
      s["fragment"] = step.fragment;
      s["sva"] = step.sva;
      break;
    case DerivationStep::Kind::Combine:
      s["op"] = step.op;
      s["parts"] = step.parts;
      s["sva"] = step.sva;
      break;
    case DerivationStep::Kind::Wrap:
      s["clocking"] = step.clocking;
      if (!step.disable.empty()) s["disable"] = step.disable;
      s["sva"] = step.sva;
      break;
    }
    j["steps"].push_back(std::move(s));
  }
  if (!trace.notes.empty()) j["notes"] = trace.notes;
  return j.dump();
}

DerivationTrace trace_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Data,
                std::string("derivation trace is not valid JSON: ") + e.what());
  }
  DerivationTrace trace;
  trace.sva = j.value("sva", "");
  trace.explanation = j.value("explanation", "");
  if (j.contains("notes")) trace.notes = j["notes"].get<std::vector<std::string>>();
  if (!j.contains("steps") || !j["steps"].is_array())
    throw Error(ErrorCode::Data, "derivation trace lacks a steps array");
  for (const auto& s : j["steps"]) {
    DerivationStep step;
    step.kind = step_kind_from_name(s.value("kind", ""));
    step.op = s.value("op", "");
    if (s.contains("fragments"))
      step.fragments = s["fragments"].get<std::vector<std::string>>();
    step.fragment_index = s.value("fragment_index", -1);
    step.fragment_class = s.value("class", "");
    step.fragment = s.value("fragment", "");
    step.sva = s.value("sva", "");
    if (s.contains("parts"))
      step.parts = s["parts"].get<std::vector<std::string>>();
    step.clocking = s.value("clocking", "");
    step.disable = s.value("disable", "");
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

std::vector<FinetunePair> load_finetune_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::Io, "cannot open pair file '" + path + "'");
  std::vector<FinetunePair> pairs;
  bool jsonl = path.size() >= 6 && path.rfind(".jsonl") == path.size() - 6;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    std::size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    std::size_t end = line.find_last_not_of(" \t\r");
    std::string body = line.substr(begin, end - begin + 1);
    if (jsonl) {
      nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.contains("sva"))
        throw Error(ErrorCode::Data, "bad pair at " + path + ":" +
                                         std::to_string(lineno) +
                                         ": expected {\"sva\": ...}");
      pairs.push_back({j["sva"].get<std::string>(), j.value("explanation", "")});
    } else {
      if (body.rfind("//", 0) == 0) continue;
      pairs.push_back({body, ""});
    }
  }
  return pairs;
}

FinetuneBuild build_finetune_records(const std::vector<FinetunePair>& pairs,
                                     Fragmenter* fragmenter) {
  FinetuneBuild out;
  for (const auto& pair : pairs) {
    try {
      SvaAst ast = parse_assertion(pair.sva);
      DerivationTrace trace = derive_trace(ast, pair.explanation, fragmenter);
      if (!replay_matches(trace)) {
        out.rejects.emplace_back(pair.sva,
                                 "replaying the derivation does not "
                                 "reconstruct the parsed assertion");
        continue;
      }
      FinetuneRecord record;
      record.sva = pair.sva;
      record.explanation = trace.explanation;
      record.prompt_guided_explanation = trace_to_json(trace);
      out.records.push_back(std::move(record));
    } catch (const Error& e) {
      out.rejects.emplace_back(pair.sva, e.what());
    }
  }
  return out;
}

std::string finetune_record_to_json(const FinetuneRecord& record) {
  nlohmann::json j;
  j["sva"] = record.sva;
  j["explanation"] = record.explanation;
  j["prompt_guided_explanation"] = record.prompt_guided_explanation;
  return j.dump();
}

} // namespace nl2sva
