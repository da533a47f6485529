// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "nl2sva/sva.hpp"

namespace nl2sva {

/// Layout on disk:
///   <root>/manifest.json               {"designs": [...], "records": [...]}
///   <root>/<design_id>/design.v
///   <root>/<design_id>/signals.json    [{"name","width","description"}...]
///   <root>/<design_id>/<record_id>.property.txt
///   <root>/<design_id>/<record_id>.golden.sva
struct DatasetDesign {
  std::string design_id;
  std::string verilog;
  SignalTable signals;
};

struct DatasetRecord {
  std::string record_id;
  std::string design_id;
  std::string property_text; // natural language description
  std::string golden_sva;
};

struct EvalDataset {
  std::string root;
  std::vector<DatasetDesign> designs;
  std::vector<DatasetRecord> records;

  const DatasetDesign* design(const std::string& design_id) const;
};

/// Throws Error(Manifest) on structural problems (missing manifest, missing
/// files, dangling design references, bad signals) and Error(GoldenParse)
/// when a golden assertion does not parse or names unknown signals.
EvalDataset load_dataset(const std::string& root);

/// Prompt block describing a design: its signals with widths and
/// descriptions followed by the RTL source.
std::string design_context_text(const DatasetDesign& design);

} // namespace nl2sva
