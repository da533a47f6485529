// SPDX-License-Identifier: Apache-2.0
//
// Four-layer AST for concurrent SystemVerilog assertions: boolean
// connectives at the bottom, sequence operators above them, property
// operators above those, and the assert/clocking/disable wrapper as the
// verification layer.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nl2sva/errors.hpp"

namespace nl2sva {

enum class OpKind : std::uint8_t {
  // Leaves.
  SignalRef,
  IntLiteral,
  // Boolean connectives (never reported by extract_operators).
  Not,
  And,
  Or,
  Eq,
  Neq,
  Select,
  // Sequence operators.
  Delay,
  Rose,
  Fell,
  Past,
  Stable,
  Onehot,
  Onehot0,
  // Property operators.
  OverlapImpl,
  NonOverlapImpl,
  SEventually,
  Iff,
};

enum class Layer : std::uint8_t { Boolean = 0, Sequence = 1, Property = 2 };

/// Name used in JSON output and CLI messages, e.g. "NonOverlapImpl".
const char* op_kind_name(OpKind kind);

/// Inverse of op_kind_name; also accepts the operator's source spelling
/// ("|=>", "$past", "##", ...). Returns nullopt for unknown names.
std::optional<OpKind> op_kind_from_name(const std::string& name);

/// True for the ten operators of the sequence/property reference tables.
bool is_reference_operator(OpKind kind);
bool is_sequence_operator(OpKind kind);
bool is_property_operator(OpKind kind);

/// Lowest layer at which the operator may appear.
Layer intrinsic_layer(OpKind kind);

/// Source spelling used for lexical chunk matching ("##", "$rose", "|=>", ...).
/// Only defined for the ten reference operators.
const char* operator_surface_token(OpKind kind);

/// Verbatim explanation row for one of the ten reference operators, as fed
/// to the rechecking prompt. Throws Error(UnknownOperator) for any other kind.
const std::string& operator_explanation(OpKind kind);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// One node of the assertion body. Immutable after parsing; which fields are
/// meaningful depends on `kind`.
struct Expr {
  OpKind kind = OpKind::SignalRef;
  /// Layer at which this node is used, assigned during validation. A leaf
  /// standing alone as the body carries Layer::Property (promotion).
  Layer layer = Layer::Boolean;

  // SignalRef
  std::string name;

  // IntLiteral
  std::uint64_t value = 0;
  int width = 0;     // declared width; 32 for plain decimals
  bool sized = false; // spelled with an explicit width (1'b0 style)

  // Select: children[0] is the base, bits [lsb, msb] are taken.
  int msb = 0;
  int lsb = 0;
  bool has_range = false; // spelled x[3:1] rather than x[2]

  // Delay (##N) and Past ($past(s,N)).
  int param = 0;

  // Delay with one child is the prefix form `##N s`; with two children it is
  // the concatenation `s1 ##N s2`.
  std::vector<ExprPtr> children;

  /// Byte offset of the node's first token in the original source, for
  /// diagnostics. Not part of structural identity.
  std::size_t offset = 0;
};

struct ClockingEvent {
  enum class Edge { Posedge, Negedge };
  Edge edge = Edge::Posedge;
  std::string clock_signal;
};

struct SignalInfo {
  std::string name;
  int width = 1;
  std::string description;
};

/// Declared signals of a design. Names unique, widths >= 1.
class SignalTable {
public:
  SignalTable() = default;
  explicit SignalTable(std::vector<SignalInfo> entries);

  const std::vector<SignalInfo>& entries() const { return entries_; }
  const SignalInfo* find(const std::string& name) const;
  bool empty() const { return entries_.empty(); }

private:
  std::vector<SignalInfo> entries_;
};

/// A parsed concurrent assertion. The verification layer is the clocking
/// event plus the optional disable condition plus the assert wrapper.
struct SvaAst {
  ClockingEvent clocking;
  ExprPtr disable_condition; // null when absent
  ExprPtr body;              // property-layer root
};

/// Structural equality: kinds, parameters, leaf payloads and children.
/// Layer tags and source offsets are derived data and never diverge for
/// equal structures.
bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const SvaAst& a, const SvaAst& b);

/// Canonical, fully parenthesized source form. parse_assertion(render(ast))
/// is structurally equal to ast.
std::string render(const SvaAst& ast);
std::string render_expr(const Expr& expr);

/// Reference-table operator kinds occurring in the body, deduplicated, in
/// first-occurrence (preorder) order. Boolean connectives are excluded.
std::vector<OpKind> extract_operators(const SvaAst& ast);

/// All signal names referenced by the expression, in first-occurrence order.
std::vector<std::string> referenced_signals(const Expr& expr);
/// Referenced signals of body plus disable condition.
std::vector<std::string> referenced_signals(const SvaAst& ast);

/// Verifies that every referenced signal is declared and every bit select
/// stays within the declared width. Throws Error(UnknownSignal) or
/// Error(WidthMismatch).
void check_against_signal_table(const SvaAst& ast, const SignalTable& table);

} // namespace nl2sva
