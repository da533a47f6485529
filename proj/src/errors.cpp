// SPDX-License-Identifier: Apache-2.0
#include "nl2sva/errors.hpp"

namespace nl2sva {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "Syntax";
    case ErrorCode::Layer: return "Layer";
    case ErrorCode::UnknownSignal: return "UnknownSignal";
    case ErrorCode::UnknownOperator: return "UnknownOperator";
    case ErrorCode::WidthMismatch: return "WidthMismatch";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::Provider: return "Provider";
    case ErrorCode::MockMiss: return "MockMiss";
    case ErrorCode::MissingVariable: return "MissingVariable";
    case ErrorCode::NoAssertionFound: return "NoAssertionFound";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ClockMismatch: return "ClockMismatch";
    case ErrorCode::Manifest: return "Manifest";
    case ErrorCode::GoldenParse: return "GoldenParse";
    case ErrorCode::Data: return "Data";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

} // namespace nl2sva
