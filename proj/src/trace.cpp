// SPDX-License-Identifier: Apache-2.0

#include "nl2sva/trace.hpp"

#include <sstream>

namespace nl2sva {

int Trace::column_of(const std::string& name) const {
  for (std::size_t i = 0; i < signals.size(); ++i)
    if (signals[i].name == name) return static_cast<int>(i);
  return -1;
}

Trace make_trace(std::vector<Trace::Column> signals,
                 std::vector<std::vector<std::uint64_t>> values_by_signal) {
  if (signals.empty())
    throw Error(ErrorCode::Data, "trace needs at least one signal");
  if (values_by_signal.size() != signals.size())
    throw Error(ErrorCode::Data, "trace value rows do not match signal count");
  Trace t;
  t.signals = std::move(signals);
  t.values = std::move(values_by_signal);
  t.length = t.values[0].size();
  if (t.length < 1) throw Error(ErrorCode::Data, "trace length must be >= 1");
  for (std::size_t s = 0; s < t.signals.size(); ++s) {
    const Trace::Column& col = t.signals[s];
    if (col.width < 1 || col.width > 64)
      throw Error(ErrorCode::Data,
                  "signal '" + col.name + "' has unsupported width");
    if (t.values[s].size() != t.length)
      throw Error(ErrorCode::Data,
                  "signal '" + col.name + "' has a ragged value column");
    for (std::uint64_t v : t.values[s]) {
      if (col.width < 64 && v >= (std::uint64_t{1} << col.width))
        throw Error(ErrorCode::Data,
                    "value " + std::to_string(v) + " does not fit signal '" +
                        col.name + "' of width " + std::to_string(col.width));
    }
  }
  return t;
}

Trace parse_trace(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Trace::Column> cols;
  std::vector<std::vector<std::uint64_t>> vals;
  bool header_done = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream row(line);
    std::string tok;
    std::vector<std::string> toks;
    while (row >> tok) {
      if (tok[0] == '#') break; // comment to end of line
      toks.push_back(tok);
    }
    if (toks.empty()) continue;
    if (!header_done) {
      for (const std::string& h : toks) {
        std::size_t colon = h.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 >= h.size())
          throw Error(ErrorCode::Data,
                      "trace header token '" + h + "' is not name:width");
        Trace::Column c;
        c.name = h.substr(0, colon);
        try {
          c.width = std::stoi(h.substr(colon + 1));
        } catch (const std::exception&) {
          throw Error(ErrorCode::Data,
                      "trace header token '" + h + "' has a bad width");
        }
        cols.push_back(c);
      }
      vals.assign(cols.size(), {});
      header_done = true;
      continue;
    }
    if (toks.size() != cols.size())
      throw Error(ErrorCode::Data,
                  "trace line " + std::to_string(lineno) + " has " +
                      std::to_string(toks.size()) + " values, expected " +
                      std::to_string(cols.size()));
    for (std::size_t i = 0; i < toks.size(); ++i) {
      try {
        vals[i].push_back(std::stoull(toks[i]));
      } catch (const std::exception&) {
        throw Error(ErrorCode::Data,
                    "bad trace value '" + toks[i] + "' on line " +
                        std::to_string(lineno));
      }
    }
  }
  if (!header_done) throw Error(ErrorCode::Data, "trace text has no header row");
  return make_trace(std::move(cols), std::move(vals));
}

std::string format_trace(const Trace& trace) {
  std::ostringstream out;
  for (std::size_t i = 0; i < trace.signals.size(); ++i) {
    if (i) out << ' ';
    out << trace.signals[i].name << ':' << trace.signals[i].width;
  }
  out << '\n';
  for (std::size_t c = 0; c < trace.length; ++c) {
    for (std::size_t s = 0; s < trace.signals.size(); ++s) {
      if (s) out << ' ';
      out << trace.values[s][c];
    }
    out << '\n';
  }
  return out.str();
}

} // namespace nl2sva
