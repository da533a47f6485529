// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nl2sva {

enum class ErrorCode {
  Syntax,
  Layer,
  UnknownSignal,
  UnknownOperator,
  WidthMismatch,
  InvalidConfig,
  DimMismatch,
  EmptyText,
  Provider,
  MockMiss,
  MissingVariable,
  NoAssertionFound,
  MalformedResponse,
  BudgetExceeded,
  ClockMismatch,
  Manifest,
  GoldenParse,
  Data,
  Io,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

/// Parse failure with the byte offset of the offending token and the set of
/// token spellings that would have been accepted there.
class SyntaxError : public Error {
public:
  SyntaxError(std::size_t offset, std::string message, std::vector<std::string> expected)
      : Error(ErrorCode::Syntax, std::move(message)), offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class LayerError : public Error {
public:
  LayerError(std::size_t offset, std::string message)
      : Error(ErrorCode::Layer, std::move(message)), offset_(offset) {}

  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

} // namespace nl2sva
