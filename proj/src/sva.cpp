// SPDX-License-Identifier: Apache-2.0

#include "nl2sva/sva.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace nl2sva {

namespace {

struct OpInfo {
  OpKind kind;
  const char* name;
  const char* surface; // nullptr when the op has no retrieval token
  Layer layer;
};

constexpr std::array<OpInfo, 19> kOpTable = {{
    {OpKind::SignalRef, "SignalRef", nullptr, Layer::Boolean},
    {OpKind::IntLiteral, "IntLiteral", nullptr, Layer::Boolean},
    {OpKind::Not, "Not", nullptr, Layer::Boolean},
    {OpKind::And, "And", nullptr, Layer::Boolean},
    {OpKind::Or, "Or", nullptr, Layer::Boolean},
    {OpKind::Eq, "Eq", nullptr, Layer::Boolean},
    {OpKind::Neq, "Neq", nullptr, Layer::Boolean},
    {OpKind::Select, "Select", nullptr, Layer::Boolean},
    {OpKind::Delay, "Delay", "##", Layer::Sequence},
    {OpKind::Rose, "Rose", "$rose", Layer::Sequence},
    {OpKind::Fell, "Fell", "$fell", Layer::Sequence},
    {OpKind::Past, "Past", "$past", Layer::Sequence},
    {OpKind::Stable, "Stable", "$stable", Layer::Sequence},
    {OpKind::Onehot, "Onehot", "$onehot", Layer::Sequence},
    {OpKind::Onehot0, "Onehot0", "$onehot0", Layer::Sequence},
    {OpKind::OverlapImpl, "OverlapImpl", "|->", Layer::Property},
    {OpKind::NonOverlapImpl, "NonOverlapImpl", "|=>", Layer::Property},
    {OpKind::SEventually, "SEventually", "s_eventually", Layer::Property},
    {OpKind::Iff, "Iff", nullptr, Layer::Property},
}};

const OpInfo& info_for(OpKind kind) {
  return kOpTable[static_cast<std::size_t>(kind)];
}

} // namespace

const char* op_kind_name(OpKind kind) { return info_for(kind).name; }

std::optional<OpKind> op_kind_from_name(const std::string& name) {
  static const std::unordered_map<std::string, OpKind> aliases = {
      {"##", OpKind::Delay},       {"$rose", OpKind::Rose},
      {"$fell", OpKind::Fell},     {"$past", OpKind::Past},
      {"$stable", OpKind::Stable}, {"$onehot", OpKind::Onehot},
      {"$onehot0", OpKind::Onehot0}, {"|->", OpKind::OverlapImpl},
      {"|=>", OpKind::NonOverlapImpl}, {"s_eventually", OpKind::SEventually},
      {"iff", OpKind::Iff},
  };
  for (const OpInfo& op : kOpTable) {
    if (name == op.name) return op.kind;
  }
  auto it = aliases.find(name);
  if (it != aliases.end()) return it->second;
  return std::nullopt;
}

bool is_sequence_operator(OpKind kind) {
  switch (kind) {
  case OpKind::Delay:
  case OpKind::Rose:
  case OpKind::Fell:
  case OpKind::Past:
  case OpKind::Stable:
  case OpKind::Onehot:
  case OpKind::Onehot0:
    return true;
  default:
    return false;
  }
}

bool is_property_operator(OpKind kind) {
  switch (kind) {
  case OpKind::OverlapImpl:
  case OpKind::NonOverlapImpl:
  case OpKind::SEventually:
    return true;
  default:
    return false;
  }
}

bool is_reference_operator(OpKind kind) {
  return is_sequence_operator(kind) || is_property_operator(kind);
}

Layer intrinsic_layer(OpKind kind) { return info_for(kind).layer; }

const char* operator_surface_token(OpKind kind) {
  const char* tok = info_for(kind).surface;
  if (!tok)
    throw Error(ErrorCode::UnknownOperator,
                std::string("no surface token for operator ") + op_kind_name(kind));
  return tok;
}

const std::string& operator_explanation(OpKind kind) {
  static const std::unordered_map<OpKind, std::string> rows = {
      {OpKind::Delay,
       "The evaluation of sequence expression s is delayed by N clock cycles."},
      {OpKind::Rose,
       "Returns 1 if the LSB of sequence expression s changed to 1. Otherwise, "
       "returns 0."},
      {OpKind::Fell,
       "Returns 1 if the LSB of sequence expression s changed to 0. Otherwise, "
       "returns 0."},
      {OpKind::Past,
       "Returns the value of sequence s in a N clock cycle step prior to the "
       "current one."},
      {OpKind::Stable,
       "Returns 1 if the value of sequence expression s did not change. "
       "Otherwise, returns 0."},
      {OpKind::Onehot,
       "Returns 1 if one bit of sequence expression s is 1. Otherwise, returns "
       "0."},
      {OpKind::Onehot0,
       "Returns 1 if no more than one bit of sequence expression s is 1. "
       "Otherwise, returns 0."},
      {OpKind::OverlapImpl,
       "for every match of the sequence expression s beginning at the start "
       "point, the evaluation of property expression p beginning in the current "
       "clock cycle at the end point of the match succeeds and returns 1."},
      {OpKind::NonOverlapImpl,
       "for every match of the sequence expression s beginning at the start "
       "point, the evaluation of property expression p beginning in the next "
       "clock cycle at the end point of the match succeeds and returns 1."},
      {OpKind::SEventually,
       "Return 1 if there exists a current or future clock cycle at which "
       "property expression p is 1."},
  };
  auto it = rows.find(kind);
  if (it == rows.end())
    throw Error(ErrorCode::UnknownOperator,
                std::string("no explanation row for operator ") + op_kind_name(kind));
  return it->second;
}

SignalTable::SignalTable(std::vector<SignalInfo> entries)
    : entries_(std::move(entries)) {
  std::unordered_set<std::string> seen;
  for (const SignalInfo& s : entries_) {
    if (s.name.empty())
      throw Error(ErrorCode::Data, "signal with empty name");
    if (s.width < 1)
      throw Error(ErrorCode::Data, "signal '" + s.name + "' has width < 1");
    if (!seen.insert(s.name).second)
      throw Error(ErrorCode::Data, "duplicate signal '" + s.name + "'");
  }
}

const SignalInfo* SignalTable::find(const std::string& name) const {
  for (const SignalInfo& s : entries_)
    if (s.name == name) return &s;
  return nullptr;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
  case OpKind::SignalRef:
    if (a.name != b.name) return false;
    break;
  case OpKind::IntLiteral:
    if (a.value != b.value || a.width != b.width || a.sized != b.sized)
      return false;
    break;
  case OpKind::Select:
    if (a.msb != b.msb || a.lsb != b.lsb || a.has_range != b.has_range)
      return false;
    break;
  case OpKind::Delay:
  case OpKind::Past:
    if (a.param != b.param) return false;
    break;
  default:
    break;
  }
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  return true;
}

bool structurally_equal(const SvaAst& a, const SvaAst& b) {
  if (a.clocking.edge != b.clocking.edge) return false;
  if (a.clocking.clock_signal != b.clocking.clock_signal) return false;
  if (static_cast<bool>(a.disable_condition) != static_cast<bool>(b.disable_condition))
    return false;
  if (a.disable_condition &&
      !structurally_equal(*a.disable_condition, *b.disable_condition))
    return false;
  return structurally_equal(*a.body, *b.body);
}

namespace {

void render_expr_into(const Expr& e, std::ostream& os) {
  switch (e.kind) {
  case OpKind::SignalRef:
    os << e.name;
    return;
  case OpKind::IntLiteral:
    if (e.sized) {
      std::string bits;
      std::uint64_t v = e.value;
      do {
        bits.push_back(v & 1 ? '1' : '0');
        v >>= 1;
      } while (v);
      std::reverse(bits.begin(), bits.end());
      os << e.width << "'b" << bits;
    } else {
      os << e.value;
    }
    return;
  case OpKind::Select:
    render_expr_into(*e.children[0], os);
    if (e.has_range)
      os << '[' << e.msb << ':' << e.lsb << ']';
    else
      os << '[' << e.lsb << ']';
    return;
  case OpKind::Not:
    os << "(!";
    render_expr_into(*e.children[0], os);
    os << ')';
    return;
  case OpKind::And:
  case OpKind::Or:
  case OpKind::Eq:
  case OpKind::Neq: {
    const char* sym = e.kind == OpKind::And  ? " && "
                      : e.kind == OpKind::Or ? " || "
                      : e.kind == OpKind::Eq ? " == "
                                             : " != ";
    os << '(';
    render_expr_into(*e.children[0], os);
    os << sym;
    render_expr_into(*e.children[1], os);
    os << ')';
    return;
  }
  case OpKind::Delay:
    os << '(';
    if (e.children.size() == 2) {
      render_expr_into(*e.children[0], os);
      os << " ##" << e.param << ' ';
      render_expr_into(*e.children[1], os);
    } else {
      os << "##" << e.param << ' ';
      render_expr_into(*e.children[0], os);
    }
    os << ')';
    return;
  case OpKind::Rose:
  case OpKind::Fell:
  case OpKind::Stable:
  case OpKind::Onehot:
  case OpKind::Onehot0: {
    const char* fn = e.kind == OpKind::Rose     ? "$rose"
                     : e.kind == OpKind::Fell   ? "$fell"
                     : e.kind == OpKind::Stable ? "$stable"
                     : e.kind == OpKind::Onehot ? "$onehot"
                                                : "$onehot0";
    os << fn << '(';
    render_expr_into(*e.children[0], os);
    os << ')';
    return;
  }
  case OpKind::Past:
    os << "$past(";
    render_expr_into(*e.children[0], os);
    if (e.param != 1) os << ", " << e.param;
    os << ')';
    return;
  case OpKind::OverlapImpl:
  case OpKind::NonOverlapImpl: {
    os << '(';
    render_expr_into(*e.children[0], os);
    os << (e.kind == OpKind::OverlapImpl ? " |-> " : " |=> ");
    render_expr_into(*e.children[1], os);
    os << ')';
    return;
  }
  case OpKind::SEventually:
    os << "(s_eventually ";
    render_expr_into(*e.children[0], os);
    os << ')';
    return;
  case OpKind::Iff:
    os << '(';
    render_expr_into(*e.children[0], os);
    os << " iff ";
    render_expr_into(*e.children[1], os);
    os << ')';
    return;
  }
  throw Error(ErrorCode::Data, "render: unreachable op kind");
}

} // namespace

std::string render_expr(const Expr& expr) {
  std::ostringstream os;
  render_expr_into(expr, os);
  return os.str();
}

std::string render(const SvaAst& ast) {
  std::ostringstream os;
  os << "assert property (@("
     << (ast.clocking.edge == ClockingEvent::Edge::Posedge ? "posedge" : "negedge")
     << ' ' << ast.clocking.clock_signal << ") ";
  if (ast.disable_condition) {
    os << "disable iff (";
    render_expr_into(*ast.disable_condition, os);
    os << ") ";
  }
  render_expr_into(*ast.body, os);
  os << ");";
  return os.str();
}

namespace {

void collect_operators(const Expr& e, std::vector<OpKind>& out) {
  if (is_reference_operator(e.kind) &&
      std::find(out.begin(), out.end(), e.kind) == out.end())
    out.push_back(e.kind);
  for (const ExprPtr& c : e.children) collect_operators(*c, out);
}

void collect_signals(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == OpKind::SignalRef &&
      std::find(out.begin(), out.end(), e.name) == out.end())
    out.push_back(e.name);
  for (const ExprPtr& c : e.children) collect_signals(*c, out);
}

} // namespace

std::vector<OpKind> extract_operators(const SvaAst& ast) {
  std::vector<OpKind> out;
  collect_operators(*ast.body, out);
  return out;
}

std::vector<std::string> referenced_signals(const Expr& expr) {
  std::vector<std::string> out;
  collect_signals(expr, out);
  return out;
}

std::vector<std::string> referenced_signals(const SvaAst& ast) {
  std::vector<std::string> out;
  collect_signals(*ast.body, out);
  if (ast.disable_condition) collect_signals(*ast.disable_condition, out);
  return out;
}

namespace {

void check_expr_signals(const Expr& e, const SignalTable& table) {
  if (e.kind == OpKind::SignalRef) {
    if (!table.find(e.name))
      throw Error(ErrorCode::UnknownSignal, "undeclared signal '" + e.name + "'");
  }
  if (e.kind == OpKind::Select) {
    const Expr& base = *e.children[0];
    if (base.kind == OpKind::SignalRef) {
      const SignalInfo* info = table.find(base.name);
      if (!info)
        throw Error(ErrorCode::UnknownSignal,
                    "undeclared signal '" + base.name + "'");
      int hi = e.has_range ? e.msb : e.lsb;
      if (e.lsb < 0 || hi >= info->width || (e.has_range && e.msb < e.lsb))
        throw Error(ErrorCode::WidthMismatch,
                    "bit select [" + std::to_string(hi) +
                        (e.has_range ? ":" + std::to_string(e.lsb) : "") +
                        "] out of range for '" + base.name + "' of width " +
                        std::to_string(info->width));
    }
  }
  for (const ExprPtr& c : e.children) check_expr_signals(*c, table);
}

} // namespace

void check_against_signal_table(const SvaAst& ast, const SignalTable& table) {
  if (!table.find(ast.clocking.clock_signal))
    throw Error(ErrorCode::UnknownSignal,
                "undeclared clock signal '" + ast.clocking.clock_signal + "'");
  check_expr_signals(*ast.body, table);
  if (ast.disable_condition) check_expr_signals(*ast.disable_condition, table);
}

} // namespace nl2sva
