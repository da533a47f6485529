// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nl2sva/errors.hpp"

namespace nl2sva {

/// A finite sampled trace: one row per clock tick, one column per signal.
/// The clock itself is not materialized; row i is tick i.
struct Trace {
  struct Column {
    std::string name;
    int width = 1;
  };

  std::vector<Column> signals;
  std::size_t length = 0;
  /// values[signal][cycle], each < 2^width.
  std::vector<std::vector<std::uint64_t>> values;

  int column_of(const std::string& name) const;
  std::uint64_t at(std::size_t signal, std::size_t cycle) const {
    return values[signal][cycle];
  }
};

/// Builds a trace and validates the Trace invariants (length >= 1, values
/// fit their widths). Throws Error(Data) on violation.
Trace make_trace(std::vector<Trace::Column> signals,
                 std::vector<std::vector<std::uint64_t>> values_by_signal);

/// Plain-text fixture format: a header row of `name:width` tokens, then one
/// whitespace-separated row of decimal values per cycle.
Trace parse_trace(const std::string& text);
std::string format_trace(const Trace& trace);

} // namespace nl2sva
