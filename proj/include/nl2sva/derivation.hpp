// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "nl2sva/gateway.hpp"
#include "nl2sva/sva.hpp"

namespace nl2sva {

/// One step of a prompt-guided explanation. Field use by kind:
///   IdentifyPropertyOp: op, sva (the node this op roots)
///   SplitFragments:     fragments
///   ClassifyFragment:   fragment_index, fragment_class
///   TranslateSequence:  fragment, sva
///   Combine:            op, parts, sva
///   Wrap:               clocking, disable, sva (the full assertion)
struct DerivationStep {
  enum class Kind {
    IdentifyPropertyOp,
    SplitFragments,
    ClassifyFragment,
    TranslateSequence,
    Combine,
    Wrap,
  };
  Kind kind = Kind::TranslateSequence;
  std::string op;
  std::vector<std::string> fragments;
  int fragment_index = -1;
  std::string fragment_class;
  std::string fragment;
  std::string sva;
  std::vector<std::string> parts;
  std::string clocking;
  std::string disable;
};

const char* derivation_step_kind_name(DerivationStep::Kind kind);

struct DerivationTrace {
  std::string sva;         // canonical rendering of the derived assertion
  std::string explanation; // sentence the fragments were cut from
  std::vector<DerivationStep> steps;
  std::vector<std::string> notes; // e.g. fragmenter fallbacks
};

/// Splits an explanation into one fragment per operand of a property
/// operator. Implementations throw Error(Data) when they cannot produce
/// exactly `count` fragments.
class Fragmenter {
public:
  virtual ~Fragmenter() = default;
  virtual std::vector<std::string> split(const std::string& explanation,
                                         OpKind op, std::size_t count) = 0;
};

/// Asks the model to cut the explanation; a response with the wrong fragment
/// count throws Error(Data) so derive_trace can fall back.
class LlmFragmenter final : public Fragmenter {
public:
  explicit LlmFragmenter(Gateway& gateway) : gateway_(gateway) {}
  std::vector<std::string> split(const std::string& explanation, OpKind op,
                                 std::size_t count) override;

private:
  Gateway& gateway_;
};

/// Deterministic English phrase for an expression (used for fragments and
/// generated explanations).
std::string describe_expr(const Expr& expr);
std::string describe_assertion(const SvaAst& ast);

/// Builds the step-by-step derivation for an assertion. Property operators
/// are identified, their explanation split into operand fragments, sequence
/// operands translated in one step each, results combined, and the clocking
/// wrapped last. When `fragmenter` is null or fails, fragments come from
/// describe_expr and the fallback is recorded in notes.
DerivationTrace derive_trace(const SvaAst& ast, const std::string& explanation,
                             Fragmenter* fragmenter = nullptr);

/// Rebuilds an assertion from the steps alone (translate results parsed,
/// combines reapplied bottom-up, wrap last). Throws Error(Data) on malformed
/// traces.
SvaAst replay_trace(const DerivationTrace& trace);

/// True when replay_trace(trace) is structurally equal to
/// parse_assertion(trace.sva).
bool replay_matches(const DerivationTrace& trace);

std::string trace_to_json(const DerivationTrace& trace);
DerivationTrace trace_from_json(const std::string& text);

struct FinetunePair {
  std::string sva;
  std::string explanation; // optional; generated when empty
};

/// Reads assertion/explanation pairs. JSONL files carry one
/// {"sva": ..., "explanation": ...} object per line; anything else is treated
/// as a plain assertion list (// comments and blank lines skipped).
std::vector<FinetunePair> load_finetune_pairs(const std::string& path);

struct FinetuneRecord {
  std::string sva;
  std::string explanation;
  std::string prompt_guided_explanation; // serialized DerivationTrace
};

struct FinetuneBuild {
  std::vector<FinetuneRecord> records;
  std::vector<std::pair<std::string, std::string>> rejects; // (sva, reason)
};

/// Derives a record per pair; assertions that fail to parse or whose trace
/// fails replay land in rejects instead.
FinetuneBuild build_finetune_records(const std::vector<FinetunePair>& pairs,
                                     Fragmenter* fragmenter = nullptr);

std::string finetune_record_to_json(const FinetuneRecord& record);

} // namespace nl2sva
