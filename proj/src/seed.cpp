// SPDX-License-Identifier: Apache-2.0
#include "nl2sva/seed.hpp"

#include <filesystem>

#include "json.hpp"

#include "nl2sva/chunk_store.hpp"
#include "nl2sva/dataset.hpp"
#include "nl2sva/pipeline.hpp"

namespace fs = std::filesystem;

namespace nl2sva {

namespace {

struct RecheckScript {
  bool correct = false;    // reply VERDICT: CORRECT
  const char* revised_sva; // otherwise: the revision to propose
};

struct ScenarioRow {
  const char* record_id;
  std::vector<std::string> keywords;
  std::vector<std::pair<std::string, std::string>> operators;
  const char* llm_sva;
  const char* rag_sva;
  std::vector<RecheckScript> recheck;
};

// Scripted model behavior for the bundled dataset. The llm column is the
// plain baseline's answer; the rag column is the retrieval-augmented initial
// answer, refined by the recheck scripts.
const std::vector<ScenarioRow>& scenario() {
  static const std::vector<ScenarioRow> rows = {
      {"ff_past",
       {"enable is high", "equals the input value from the previous clock cycle",
        "one cycle later"},
       {{"enable is high", "boolean"},
        {"equals the input value from the previous clock cycle", "$past"},
        {"one cycle later", "|=>"}},
       "assert property (@(posedge clk) disable iff (rst) en |-> (out == $past(in)));",
       "assert property (@(posedge clk) disable iff (rst) en |-> (out == $past(in)));",
       {{false,
         "assert property (@(posedge clk) disable iff (rst) en |=> (out == $past(in)));"},
        {true, nullptr}}},
      {"ff_hold",
       {"enable is low", "does not change", "on the following cycle"},
       {{"enable is low", "boolean"},
        {"does not change", "$stable"},
        {"on the following cycle", "|=>"}},
       "assert property (@(posedge clk) disable iff (rst) !en |=> $stable(out));",
       "assert property (@(posedge clk) disable iff (rst) !en |=> $stable(out));",
       {{true, nullptr}}},
      {"arb_onehot",
       {"any request is high", "at most one bit set"},
       {{"any request is high", "|->"}, {"at most one bit set", "$onehot0"}},
       "assert property (@(posedge clk) (req0 || req1) |-> $onehot(gnt));",
       "assert property (@(posedge clk) (req0 || req1) |-> $onehot0(gnt));",
       {{true, nullptr}}},
      {"arb_grant_delay",
       {"request zero rises", "two clock cycles later", "grant bit zero is high"},
       {{"request zero rises", "$rose"},
        {"two clock cycles later", "##N"},
        {"grant bit zero is high", "bit select"}},
       "assert property (@(posedge clk) $rose(req0) |-> ##[1:2] gnt[0]);",
       "assert property (@(posedge clk) $rose(req0) |-> ##2 gnt[0]);",
       {{true, nullptr}}},
      {"fifo_flags",
       {"never full and empty at the same time"},
       {{"never full and empty at the same time", "invariant"}},
       "assert property (@(posedge clk) disable iff (!rstn) !(full && empty));",
       "assert property (@(posedge clk) disable iff (!rstn) !(full && empty));",
       {{true, nullptr}}},
      {"fifo_full_hold",
       {"push arrives with the FIFO full", "no pop in the same cycle",
        "still full on the next cycle"},
       {{"push arrives with the FIFO full", "boolean"},
        {"no pop in the same cycle", "boolean"},
        {"still full on the next cycle", "|=>"}},
       "assert property (@(posedge clk) disable iff (!rstn) (push && full) |=> full throughout !pop);",
       "assert property (@(posedge clk) disable iff (!rstn) (push && full) |=> full);",
       {{true, nullptr}}},
      {"fifo_drain",
       {"pop occurs without a push", "eventually raised"},
       {{"pop occurs without a push", "|->"},
        {"eventually raised", "s_eventually"}},
       "assert property (@(posedge clk) disable iff (!rstn) (pop && !push) |-> eventually empty);",
       "assert property (@(posedge clk) disable iff (!rstn) (pop && !push) |-> s_eventually empty);",
       {{true, nullptr}}},
      {"hs_valid_hold",
       {"valid is high but ready is low", "stays high on the next cycle"},
       {{"valid is high but ready is low", "boolean"},
        {"stays high on the next cycle", "|=>"}},
       "assert property (@(posedge clk) (valid && !ready) |=> valid);",
       "assert property (@(posedge clk) (valid && !ready) |=> valid);",
       {{true, nullptr}}},
      {"hs_ack",
       {"asserted exactly when", "valid and ready are both high"},
       {{"asserted exactly when", "iff"},
        {"valid and ready are both high", "boolean"}},
       "assert property (@(posedge clk) ack |-> (valid && ready));",
       "assert property (@(posedge clk) ack iff (valid && ready));",
       {{true, nullptr}}},
      {"hs_start",
       {"rising start pulse", "followed by valid in the next clock cycle"},
       {{"rising start pulse", "$rose"},
        {"followed by valid in the next clock cycle", "|=>"}},
       "assert property (@(posedge clk) $rose(start) |=> valid);",
       "assert property (@(posedge clk) $rose(start) |=> valid);",
       {{true, nullptr}}},
      {"pwm_fall",
       {"modulator is busy", "eventually goes low"},
       {{"modulator is busy", "|->"}, {"eventually goes low", "s_eventually"}},
       "assert property (@(posedge clk) busy |-> (!pulse) within [1:5]);",
       "assert property (@(posedge clk) busy |-> (!pulse) within [1:5]);",
       {{false, "assert property (@(posedge clk) busy |-> !pulse within [0:5]);"},
        {false, "assert property (@(posedge clk) busy |-> !pulse within [0:5]);"}}},
      {"pwm_err",
       {"error flag never rises", "modulator is idle"},
       {{"error flag never rises", "$rose"}, {"modulator is idle", "|->"}},
       "assert property (@(posedge clk) !busy |-> !$rose(err));",
       "assert property (@(posedge clk) !busy |=> !$rose(err));",
       {{true, nullptr}}},
  };
  return rows;
}

std::string assertion_response(const std::string& sva) {
  return "Here is the assertion implementing the property:\n\n"
         "```systemverilog\n" +
         sva + "\n```\n";
}

std::string recheck_response(const RecheckScript& script) {
  if (script.correct)
    return "The operators match the described timing and conditions.\n\n"
           "VERDICT: CORRECT\n";
  return "The candidate does not implement the described behavior "
         "faithfully.\n\nVERDICT: REVISED\n```systemverilog\n" +
         std::string(script.revised_sva) + "\n```\n";
}

const ScenarioRow* row_for(const std::string& record_id) {
  for (const auto& row : scenario())
    if (record_id == row.record_id) return &row;
  return nullptr;
}

} // namespace

SeedReport seed_demo(const AppConfig& config,
                     const std::string& fixtures_root) {
  SeedReport report;
  report.store_dir = config.store_dir;
  report.mock_dir = config.mock_dir;

  // 1. Chunk the documentation corpus and persist it with embeddings.
  FallbackEmbedder embedder(config.embedding_dim);
  ChunkStore store;
  auto docs = load_corpus(fixtures_root + "/docs");
  report.document_count = docs.size();
  for (const auto& doc : docs)
    for (auto& chunk : dynamic_split(doc)) {
      std::string chunk_id = chunk.chunk_id;
      std::vector<float> vec = embedder.embed(chunk.retrieval_text());
      store.add(std::move(chunk));
      store.set_embedding(chunk_id, std::move(vec));
    }
  report.chunk_count = store.size();
  fs::create_directories(config.store_dir);
  store.save(config.store_dir);

  // 2. Script every exchange the pipeline will make over the dataset.
  EvalDataset dataset = load_dataset(config.dataset_dir);
  fs::create_directories(config.mock_dir);
  VectorIndex index = build_index(store, embedder);
  auto gateway = Gateway(std::make_shared<MockChatProvider>(config.mock_dir));

  auto install = [&](const std::string& template_id,
                     const std::map<std::string, std::string>& bindings,
                     const std::string& response) {
    mock_install(config.mock_dir, template_id, bindings, response);
    report.fixture_count++;
  };

  for (const auto& record : dataset.records) {
    const ScenarioRow* row = row_for(record.record_id);
    if (!row)
      throw Error(ErrorCode::Data,
                  "no scripted scenario for record '" + record.record_id + "'");
    const DatasetDesign* design = dataset.design(record.design_id);
    std::string spec = record.property_text;
    std::string design_ctx = design_context_text(*design);

    // Plain baseline answer (no retrieved context).
    install("initial_generation",
            {{"spec", spec},
             {"design_context", design_ctx},
             {"retrieved_context", ""}},
            assertion_response(row->llm_sva));

    // Keyword and operator extraction stages.
    install("keyword_extraction", {{"spec", spec}},
            nlohmann::json(row->keywords).dump());
    nlohmann::ordered_json op_map = nlohmann::ordered_json::object();
    for (const auto& [phrase, label] : row->operators) op_map[phrase] = label;
    install("operator_extraction",
            {{"keywords", format_keyword_binding(row->keywords)}},
            op_map.dump());

    // The retrieval-augmented prompt embeds the rendered context, so run the
    // same retrieval the pipeline will run.
    RetrievalContext ctx = hybrid_retrieve(store, index, embedder, gateway,
                                           spec, config.retrieval);
    std::string rendered = render_retrieved_context(store, ctx);
    install("initial_generation",
            {{"spec", spec},
             {"design_context", design_ctx},
             {"retrieved_context", rendered}},
            assertion_response(row->rag_sva));

    // Recheck rounds, keyed by the candidate under review.
    std::string candidate =
        extract_sva_from_response(assertion_response(row->rag_sva));
    for (const auto& script : row->recheck) {
      std::string explanations, syntax_feedback;
      recheck_feedback(candidate, explanations, syntax_feedback);
      std::string response = recheck_response(script);
      install("sva_rechecking",
              {{"spec", spec},
               {"candidate", candidate},
               {"explanations", explanations},
               {"syntax_feedback", syntax_feedback}},
              response);
      if (script.correct) break;
      candidate = extract_sva_from_response(response);
    }
  }
  return report;
}

} // namespace nl2sva
