// SPDX-License-Identifier: Apache-2.0
#include "nl2sva/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "nl2sva/parser.hpp"

namespace fs = std::filesystem;

namespace nl2sva {

namespace {

std::string read_file(const fs::path& path, ErrorCode missing_code) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(missing_code, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

SignalTable load_signals(const fs::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path, ErrorCode::Manifest));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Manifest,
                path.string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_array())
    throw Error(ErrorCode::Manifest,
                path.string() + " must be a JSON array of signals");
  std::vector<SignalInfo> entries;
  for (const auto& item : j) {
    if (!item.contains("name") || !item["name"].is_string())
      throw Error(ErrorCode::Manifest,
                  path.string() + " has a signal without a name");
    SignalInfo info;
    info.name = item["name"].get<std::string>();
    info.width = item.value("width", 1);
    info.description = item.value("description", "");
    entries.push_back(std::move(info));
  }
  try {
    return SignalTable(std::move(entries));
  } catch (const Error& e) {
    throw Error(ErrorCode::Manifest, path.string() + ": " + e.what());
  }
}

} // namespace

const DatasetDesign* EvalDataset::design(const std::string& design_id) const {
  for (const auto& d : designs)
    if (d.design_id == design_id) return &d;
  return nullptr;
}

EvalDataset load_dataset(const std::string& root) {
  fs::path root_path(root);
  if (!fs::is_directory(root_path))
    throw Error(ErrorCode::Manifest, "dataset directory does not exist: " + root);

  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(
        read_file(root_path / "manifest.json", ErrorCode::Manifest));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Manifest,
                std::string("manifest.json is not valid JSON: ") + e.what());
  }
  if (!manifest.contains("designs") || !manifest["designs"].is_array() ||
      !manifest.contains("records") || !manifest["records"].is_array())
    throw Error(ErrorCode::Manifest,
                "manifest.json needs 'designs' and 'records' arrays");

  EvalDataset dataset;
  dataset.root = root;

  std::set<std::string> design_ids;
  for (const auto& item : manifest["designs"]) {
    if (!item.contains("design_id") || !item["design_id"].is_string())
      throw Error(ErrorCode::Manifest, "manifest design entry lacks design_id");
    DatasetDesign design;
    design.design_id = item["design_id"].get<std::string>();
    if (!design_ids.insert(design.design_id).second)
      throw Error(ErrorCode::Manifest,
                  "duplicate design_id '" + design.design_id + "'");
    fs::path dir = root_path / design.design_id;
    design.verilog = read_file(dir / "design.v", ErrorCode::Manifest);
    design.signals = load_signals(dir / "signals.json");
    dataset.designs.push_back(std::move(design));
  }

  std::set<std::string> record_ids;
  for (const auto& item : manifest["records"]) {
    if (!item.contains("record_id") || !item["record_id"].is_string() ||
        !item.contains("design_id") || !item["design_id"].is_string())
      throw Error(ErrorCode::Manifest,
                  "manifest record entry needs record_id and design_id");
    DatasetRecord record;
    record.record_id = item["record_id"].get<std::string>();
    record.design_id = item["design_id"].get<std::string>();
    if (!record_ids.insert(record.record_id).second)
      throw Error(ErrorCode::Manifest,
                  "duplicate record_id '" + record.record_id + "'");
    const DatasetDesign* design = dataset.design(record.design_id);
    if (!design)
      throw Error(ErrorCode::Manifest,
                  "record '" + record.record_id + "' references unknown design '" +
                      record.design_id + "'");
    fs::path dir = root_path / record.design_id;
    record.property_text =
        trim(read_file(dir / (record.record_id + ".property.txt"),
                       ErrorCode::Manifest));
    record.golden_sva = trim(read_file(
        dir / (record.record_id + ".golden.sva"), ErrorCode::Manifest));
    if (record.property_text.empty())
      throw Error(ErrorCode::Manifest,
                  "record '" + record.record_id + "' has an empty description");

    try {
      SvaAst golden = parse_assertion(record.golden_sva);
      check_against_signal_table(golden, design->signals);
    } catch (const Error& e) {
      throw Error(ErrorCode::GoldenParse,
                  "record '" + record.record_id +
                      "': golden assertion is invalid: " + e.what());
    }
    dataset.records.push_back(std::move(record));
  }
  if (dataset.records.empty())
    throw Error(ErrorCode::Manifest, "dataset has no records");
  return dataset;
}

std::string design_context_text(const DatasetDesign& design) {
  std::string out = "Design " + design.design_id + " signals:\n";
  for (const auto& sig : design.signals.entries()) {
    out += "  " + sig.name + " (" + std::to_string(sig.width) +
           (sig.width == 1 ? " bit)" : " bits)");
    if (!sig.description.empty()) out += ": " + sig.description;
    out += "\n";
  }
  out += "\nRTL source:\n" + design.verilog;
  return out;
}

} // namespace nl2sva
