// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "nl2sva/sva.hpp"

namespace nl2sva {

/// Parses a single `assert property (...)` statement, optionally preceded by
/// a `label:` and optionally terminated by `;`. The returned AST carries
/// layer tags satisfying layer monotonicity. Throws SyntaxError on malformed
/// input and LayerError on layer violations.
SvaAst parse_assertion(const std::string& text);

/// Parses a bare property expression (no assert wrapper, no clocking). The
/// root is tagged property-layer.
ExprPtr parse_expression(const std::string& text);

} // namespace nl2sva
