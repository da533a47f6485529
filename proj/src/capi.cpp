// SPDX-License-Identifier: Apache-2.0
#include "nl2sva.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "nl2sva/chunk_store.hpp"
#include "nl2sva/config.hpp"
#include "nl2sva/dataset.hpp"
#include "nl2sva/derivation.hpp"
#include "nl2sva/eval.hpp"
#include "nl2sva/parser.hpp"
#include "nl2sva/pipeline.hpp"
#include "nl2sva/seed.hpp"

using namespace nl2sva;

// The lazily built members exist so that a context over a config whose store
// or fixtures are not on disk yet can still seed them.
struct nl2sva_ctx {
  AppConfig config;
  std::unique_ptr<Gateway> gateway;
  std::unique_ptr<Embedder> embedder;
  std::optional<ChunkStore> store;
  std::optional<VectorIndex> index;
  std::optional<EvalDataset> dataset;
};

namespace {

thread_local std::string t_error;
thread_local std::string t_error_json = "{}";

void clear_error() {
  t_error.clear();
  t_error_json = "{}";
}

nl2sva_status status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig:
      return NL2SVA_E_USAGE;
    case ErrorCode::Provider:
    case ErrorCode::MockMiss:
    case ErrorCode::MalformedResponse:
      return NL2SVA_E_PROVIDER;
    default:
      return NL2SVA_E_DATA;
  }
}

nl2sva_status fail(nl2sva_status status, const char* code_name,
                   const std::string& message,
                   const SyntaxError* syntax = nullptr) {
  t_error = message;
  nlohmann::json j;
  j["code"] = code_name;
  j["message"] = message;
  if (syntax) {
    j["offset"] = syntax->offset();
    j["expected"] = syntax->expected();
  }
  t_error_json = j.dump();
  return status;
}

template <typename F>
nl2sva_status guarded(F&& fn) {
  clear_error();
  try {
    fn();
    return NL2SVA_OK;
  } catch (const SyntaxError& e) {
    return fail(NL2SVA_E_DATA, error_code_name(e.code()), e.what(), &e);
  } catch (const Error& e) {
    return fail(status_for(e.code()), error_code_name(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(NL2SVA_E_INTERNAL, "Internal", e.what());
  }
}

void set_out(char** out, const std::string& text) {
  char* copy = static_cast<char*>(std::malloc(text.size() + 1));
  if (!copy) throw std::bad_alloc();
  std::memcpy(copy, text.c_str(), text.size() + 1);
  *out = copy;
}

void require(const void* arg, const char* what) {
  if (!arg)
    throw Error(ErrorCode::InvalidConfig, std::string(what) + " is null");
}

SignalTable parse_signals_json(const char* text) {
  if (!text || !*text) return SignalTable{};
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_array())
    throw Error(ErrorCode::Data,
                "signals must be a JSON array of {name, width} objects");
  std::vector<SignalInfo> entries;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("name") || !e["name"].is_string())
      throw Error(ErrorCode::Data,
                  "signals must be a JSON array of {name, width} objects");
    SignalInfo info;
    info.name = e["name"].get<std::string>();
    info.width = e.value("width", 1);
    info.description = e.value("description", "");
    entries.push_back(std::move(info));
  }
  return SignalTable(std::move(entries));
}

SignalTable one_bit_table(const SvaAst& a, const SvaAst& b) {
  std::vector<SignalInfo> entries;
  auto add = [&](const std::string& name) {
    for (const auto& e : entries)
      if (e.name == name) return;
    entries.push_back({name, 1, ""});
  };
  for (const auto& name : referenced_signals(a)) add(name);
  for (const auto& name : referenced_signals(b)) add(name);
  return SignalTable(std::move(entries));
}

Gateway& get_gateway(nl2sva_ctx* ctx) {
  if (!ctx->gateway) {
    std::shared_ptr<ChatProvider> provider;
    if (ctx->config.provider == "http")
      provider = std::make_shared<HttpChatProvider>(ctx->config.chat_http);
    else
      provider = std::make_shared<MockChatProvider>(ctx->config.mock_dir);
    ctx->gateway =
        std::make_unique<Gateway>(provider, ctx->config.transcript_path);
  }
  return *ctx->gateway;
}

Embedder& get_embedder(nl2sva_ctx* ctx) {
  if (!ctx->embedder) {
    if (ctx->config.embedding_provider == "http")
      ctx->embedder = std::make_unique<HttpEmbedder>(ctx->config.embed_http);
    else
      ctx->embedder =
          std::make_unique<FallbackEmbedder>(ctx->config.embedding_dim);
  }
  return *ctx->embedder;
}

const ChunkStore& get_store(nl2sva_ctx* ctx) {
  if (!ctx->store) ctx->store = ChunkStore::load(ctx->config.store_dir);
  return *ctx->store;
}

const VectorIndex& get_index(nl2sva_ctx* ctx) {
  if (!ctx->index) ctx->index = build_index(get_store(ctx), get_embedder(ctx));
  return *ctx->index;
}

const EvalDataset& get_dataset(nl2sva_ctx* ctx) {
  if (!ctx->dataset) ctx->dataset = load_dataset(ctx->config.dataset_dir);
  return *ctx->dataset;
}

PipelineDeps make_deps(nl2sva_ctx* ctx, bool retrieval) {
  PipelineDeps deps;
  deps.gateway = &get_gateway(ctx);
  if (retrieval) {
    deps.embedder = &get_embedder(ctx);
    deps.store = &get_store(ctx);
    deps.index = &get_index(ctx);
  }
  return deps;
}

PipelineConfig make_pipeline_config(const nl2sva_ctx* ctx) {
  PipelineConfig config;
  config.retrieval = ctx->config.retrieval;
  config.recheck_max_iters = ctx->config.recheck_max_iters;
  config.chat = ctx->config.chat;
  return config;
}

nlohmann::json trace_json(const Trace& trace) {
  nlohmann::json j;
  j["length"] = trace.length;
  j["signals"] = nlohmann::json::array();
  for (std::size_t s = 0; s < trace.signals.size(); ++s) {
    nlohmann::json col;
    col["name"] = trace.signals[s].name;
    col["width"] = trace.signals[s].width;
    col["values"] = trace.values[s];
    j["signals"].push_back(std::move(col));
  }
  j["text"] = format_trace(trace);
  return j;
}

nlohmann::json scored_json(const std::vector<ScoredChunk>& chunks) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& sc : chunks)
    arr.push_back({{"chunk_id", sc.chunk_id}, {"score", sc.score}});
  return arr;
}

nlohmann::json retrieval_json(const ChunkStore& store,
                              const RetrievalContext& context) {
  nlohmann::json j;
  j["global"] = scored_json(context.global_chunks);
  j["keyword_map"] = nlohmann::json::array();
  for (const auto& [phrase, op] : context.keyword_map)
    j["keyword_map"].push_back({{"keyword", phrase}, {"operator", op}});
  j["operator_hits"] = nlohmann::json::array();
  for (const auto& hit : context.operator_hits) {
    nlohmann::json h;
    h["operator"] = operator_surface_token(hit.op);
    h["keyword"] = hit.keyword;
    h["chunks"] = scored_json(hit.chunks);
    j["operator_hits"].push_back(std::move(h));
  }
  j["warnings"] = context.warnings;
  j["global_degraded"] = context.global_degraded;
  j["operator_degraded"] = context.operator_degraded;
  j["rendered"] = render_retrieved_context(store, context);
  return j;
}

} // namespace

extern "C" {

const char* nl2sva_version(void) { return "1.0.0"; }

const char* nl2sva_last_error(void) { return t_error.c_str(); }

const char* nl2sva_last_error_json(void) { return t_error_json.c_str(); }

void nl2sva_string_free(char* text) { std::free(text); }

nl2sva_status nl2sva_ctx_new(const char* config_path, nl2sva_ctx** out_ctx) {
  return guarded([&] {
    require(out_ctx, "out_ctx");
    auto ctx = std::make_unique<nl2sva_ctx>();
    if (config_path && *config_path)
      ctx->config = load_config(config_path);
    else
      validate_config(ctx->config);
    *out_ctx = ctx.release();
  });
}

void nl2sva_ctx_free(nl2sva_ctx* ctx) { delete ctx; }

nl2sva_status nl2sva_ctx_set_provider(nl2sva_ctx* ctx, const char* provider) {
  return guarded([&] {
    require(ctx, "ctx");
    require(provider, "provider");
    std::string name = provider;
    if (name != "mock" && name != "http")
      throw Error(ErrorCode::InvalidConfig,
                  "provider must be 'mock' or 'http', got '" + name + "'");
    ctx->config.provider = name;
    ctx->gateway.reset();
  });
}

nl2sva_status nl2sva_ctx_set_path(nl2sva_ctx* ctx, const char* key,
                                  const char* value) {
  return guarded([&] {
    require(ctx, "ctx");
    require(key, "key");
    require(value, "value");
    std::string name = key;
    if (name == "store_dir") {
      ctx->config.store_dir = value;
      ctx->store.reset();
      ctx->index.reset();
    } else if (name == "dataset_dir") {
      ctx->config.dataset_dir = value;
      ctx->dataset.reset();
    } else if (name == "mock_dir") {
      ctx->config.mock_dir = value;
      ctx->gateway.reset();
    } else if (name == "transcript_path") {
      ctx->config.transcript_path = value;
      ctx->gateway.reset();
    } else {
      throw Error(ErrorCode::InvalidConfig,
                  "unknown path key '" + name + "'");
    }
  });
}

int nl2sva_ctx_uses_mock(const nl2sva_ctx* ctx) {
  return ctx && ctx->config.provider == "mock" ? 1 : 0;
}

nl2sva_status nl2sva_parse(const char* sva, const char* signals_json,
                           char** out_json) {
  return guarded([&] {
    require(sva, "sva");
    require(out_json, "out_json");
    SvaAst ast = parse_assertion(sva);
    SignalTable table = parse_signals_json(signals_json);
    if (!table.empty()) check_against_signal_table(ast, table);
    nlohmann::json j;
    j["sva"] = sva;
    j["canonical"] = render(ast);
    j["clock"] = ast.clocking.clock_signal;
    j["edge"] =
        ast.clocking.edge == ClockingEvent::Edge::Posedge ? "posedge"
                                                          : "negedge";
    j["has_disable"] = ast.disable_condition != nullptr;
    j["operators"] = nlohmann::json::array();
    for (OpKind op : extract_operators(ast))
      j["operators"].push_back(op_kind_name(op));
    j["signals"] = referenced_signals(ast);
    set_out(out_json, j.dump(2));
  });
}

nl2sva_status nl2sva_check(nl2sva_ctx* ctx, const char* golden_sva,
                           const char* candidate_sva, const char* signals_json,
                           char** out_json) {
  return guarded([&] {
    require(ctx, "ctx");
    require(golden_sva, "golden_sva");
    require(candidate_sva, "candidate_sva");
    require(out_json, "out_json");
    SvaAst golden = parse_assertion(golden_sva);
    SvaAst candidate = parse_assertion(candidate_sva);
    SignalTable table = parse_signals_json(signals_json);
    if (table.empty()) table = one_bit_table(golden, candidate);
    EquivalenceResult result =
        equivalent(golden, candidate, table, ctx->config.equivalence);
    nlohmann::json j;
    switch (result.kind) {
      case EquivalenceResult::Kind::Equivalent:
        j["verdict"] = "equivalent";
        break;
      case EquivalenceResult::Kind::Inequivalent:
        j["verdict"] = "inequivalent";
        break;
      case EquivalenceResult::Kind::ClockMismatch:
        j["verdict"] = "clock_mismatch";
        break;
    }
    j["traces_checked"] = result.traces_checked;
    j["compared_bodies_only"] = result.compared_bodies_only;
    j["note"] = result.note;
    if (result.counterexample) {
      j["counterexample"] = trace_json(*result.counterexample);
      j["cex_cycle"] = result.cex_cycle;
    }
    set_out(out_json, j.dump(2));
  });
}

nl2sva_status nl2sva_ingest(nl2sva_ctx* ctx, const char* corpus_dir,
                            const char* mode, size_t size, size_t overlap,
                            const char* out_dir, char** out_json) {
  return guarded([&] {
    require(ctx, "ctx");
    require(corpus_dir, "corpus_dir");
    require(mode, "mode");
    require(out_dir, "out_dir");
    require(out_json, "out_json");
    std::string mode_name = mode;
    if (mode_name != "dynamic" && mode_name != "static")
      throw Error(ErrorCode::InvalidConfig,
                  "ingest mode must be 'dynamic' or 'static', got '" +
                      mode_name + "'");
    Embedder& embedder = get_embedder(ctx);
    ChunkStore store;
    auto docs = load_corpus(corpus_dir);
    for (const auto& doc : docs) {
      auto chunks = mode_name == "dynamic" ? dynamic_split(doc)
                                           : static_split(doc, size, overlap);
      for (auto& chunk : chunks) {
        std::string chunk_id = chunk.chunk_id;
        std::vector<float> vec = embedder.embed(chunk.retrieval_text());
        store.add(std::move(chunk));
        store.set_embedding(chunk_id, std::move(vec));
      }
    }
    store.save(out_dir);
    nlohmann::json j;
    j["documents"] = docs.size();
    j["chunks"] = store.size();
    j["store_dir"] = out_dir;
    set_out(out_json, j.dump(2));
    // A rebuilt store invalidates anything loaded from the same directory.
    if (ctx->config.store_dir == out_dir) {
      ctx->store.reset();
      ctx->index.reset();
    }
  });
}

nl2sva_status nl2sva_retrieve(nl2sva_ctx* ctx, const char* spec_text,
                              const char* mode, char** out_json) {
  return guarded([&] {
    require(ctx, "ctx");
    require(spec_text, "spec_text");
    require(mode, "mode");
    require(out_json, "out_json");
    const ChunkStore& store = get_store(ctx);
    const VectorIndex& index = get_index(ctx);
    Embedder& embedder = get_embedder(ctx);
    const RetrievalOptions& options = ctx->config.retrieval;
    std::string mode_name = mode;
    RetrievalContext context;
    if (mode_name == "global") {
      context.global_chunks =
          retrieve_global(index, embedder, spec_text, options.k_global);
    } else if (mode_name == "operator") {
      context.operator_hits = retrieve_operator_guided(
          store, index, embedder, get_gateway(ctx), spec_text, options,
          &context.keyword_map, &context.warnings);
    } else if (mode_name == "hybrid") {
      context = hybrid_retrieve(store, index, embedder, get_gateway(ctx),
                                spec_text, options);
    } else {
      throw Error(ErrorCode::InvalidConfig,
                  "retrieve mode must be 'global', 'operator', or 'hybrid', "
                  "got '" + mode_name + "'");
    }
    nlohmann::json j = retrieval_json(store, context);
    j["mode"] = mode_name;
    set_out(out_json, j.dump(2));
  });
}

nl2sva_status nl2sva_generate(nl2sva_ctx* ctx, const char* spec_text,
                              const char* design_context, const char* mode,
                              char** out_json) {
  return guarded([&] {
    require(ctx, "ctx");
    require(spec_text, "spec_text");
    require(mode, "mode");
    require(out_json, "out_json");
    GenerationJob job;
    job.spec = spec_text;
    job.design_context = design_context ? design_context : "";
    job.mode = mode_from_name(mode);
    PipelineDeps deps = make_deps(ctx, mode_uses_retrieval(job.mode));
    GenerationResult result =
        run_nl2sva(job, deps, make_pipeline_config(ctx));
    set_out(out_json, generation_result_to_json(result));
  });
}

nl2sva_status nl2sva_recheck(nl2sva_ctx* ctx, const char* spec_text,
                             const char* candidate_sva, char** out_json) {
  return guarded([&] {
    require(ctx, "ctx");
    require(spec_text, "spec_text");
    require(candidate_sva, "candidate_sva");
    require(out_json, "out_json");
    RecheckOutcome outcome =
        run_recheck(spec_text, candidate_sva, get_gateway(ctx),
                    ctx->config.recheck_max_iters, ctx->config.chat);
    nlohmann::json j;
    j["final_sva"] = outcome.final_sva;
    j["termination"] = outcome.termination;
    j["degraded"] = outcome.degraded;
    if (outcome.degraded) j["degraded_reason"] = outcome.degraded_reason;
    j["iterations"] = nlohmann::json::array();
    for (const auto& it : outcome.iterations)
      j["iterations"].push_back({{"candidate_in", it.candidate_in},
                                 {"verdict", it.verdict},
                                 {"candidate_out", it.candidate_out},
                                 {"reported_syntax_error",
                                  it.reported_syntax_error}});
    set_out(out_json, j.dump(2));
  });
}

nl2sva_status nl2sva_derive(nl2sva_ctx* ctx, const char* pairs_path,
                            char** out_json) {
  return guarded([&] {
    require(ctx, "ctx");
    require(pairs_path, "pairs_path");
    require(out_json, "out_json");
    auto pairs = load_finetune_pairs(pairs_path);
    FinetuneBuild build = build_finetune_records(pairs);
    nlohmann::json j;
    j["records"] = nlohmann::json::array();
    for (const auto& record : build.records)
      j["records"].push_back(
          nlohmann::json::parse(finetune_record_to_json(record)));
    j["rejects"] = nlohmann::json::array();
    for (const auto& [sva, reason] : build.rejects)
      j["rejects"].push_back({{"sva", sva}, {"reason", reason}});
    set_out(out_json, j.dump(2));
  });
}

nl2sva_status nl2sva_eval(nl2sva_ctx* ctx, const char* modes_csv,
                          char** out_json) {
  return guarded([&] {
    require(ctx, "ctx");
    require(modes_csv, "modes_csv");
    require(out_json, "out_json");
    std::vector<Mode> modes;
    std::string csv = modes_csv;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
      std::size_t comma = csv.find(',', pos);
      if (comma == std::string::npos) comma = csv.size();
      std::string name = csv.substr(pos, comma - pos);
      std::size_t b = name.find_first_not_of(" \t");
      if (b != std::string::npos) {
        std::size_t e = name.find_last_not_of(" \t");
        modes.push_back(mode_from_name(name.substr(b, e - b + 1)));
      }
      pos = comma + 1;
    }
    if (modes.empty())
      throw Error(ErrorCode::InvalidConfig, "no evaluation modes given");

    bool retrieval = false;
    for (Mode m : modes) retrieval = retrieval || mode_uses_retrieval(m);
    PipelineDeps deps = make_deps(ctx, retrieval);
    EvalRunResult result =
        run_eval(get_dataset(ctx), modes, deps, make_pipeline_config(ctx),
                 ctx->config.equivalence);

    nlohmann::json j;
    j["outcomes"] = nlohmann::json::array();
    for (const auto& outcome : result.outcomes) {
      nlohmann::json o;
      o["record_id"] = outcome.record_id;
      o["mode"] = mode_name(outcome.mode);
      o["final_sva"] = outcome.final_sva;
      o["sc"] = outcome.sc;
      if (!outcome.sc) o["sc_error"] = outcome.sc_error;
      o["fm"] = {{"method", outcome.fm.method},
                 {"known", outcome.fm.known},
                 {"matched", outcome.fm.matched},
                 {"note", outcome.fm.note}};
      o["degraded"] = outcome.degraded;
      j["outcomes"].push_back(std::move(o));
    }
    j["report"] = nlohmann::json::parse(metrics_to_json(result.report));
    j["text"] = metrics_to_text(result.report);
    if (ctx->config.provider == "mock")
      j["banner"] = non_reproduction_banner();
    set_out(out_json, j.dump(2));
  });
}

nl2sva_status nl2sva_export_fpv(nl2sva_ctx* ctx, const char* record_id,
                                const char* candidate_sva, const char* out_dir,
                                char** out_json) {
  return guarded([&] {
    require(ctx, "ctx");
    require(record_id, "record_id");
    require(candidate_sva, "candidate_sva");
    require(out_dir, "out_dir");
    require(out_json, "out_json");
    const EvalDataset& dataset = get_dataset(ctx);
    const DatasetRecord* record = nullptr;
    for (const auto& r : dataset.records)
      if (r.record_id == record_id) record = &r;
    if (!record)
      throw Error(ErrorCode::Data, "no record '" + std::string(record_id) +
                                       "' in dataset " + dataset.root);
    const DatasetDesign* design = dataset.design(record->design_id);
    FpvExport fpv = export_fpv(*design, *record, candidate_sva, out_dir);
    nlohmann::json j;
    j["checker"] = fpv.checker_path;
    j["script"] = fpv.script_path;
    j["design"] = fpv.design_path;
    set_out(out_json, j.dump(2));
  });
}

nl2sva_status nl2sva_seed_demo(nl2sva_ctx* ctx, const char* fixtures_root,
                               char** out_json) {
  return guarded([&] {
    require(ctx, "ctx");
    require(out_json, "out_json");
    std::string root =
        fixtures_root && *fixtures_root ? fixtures_root : "fixtures";
    SeedReport report = seed_demo(ctx->config, root);
    nlohmann::json j;
    j["store_dir"] = report.store_dir;
    j["mock_dir"] = report.mock_dir;
    j["documents"] = report.document_count;
    j["chunks"] = report.chunk_count;
    j["fixtures"] = report.fixture_count;
    set_out(out_json, j.dump(2));
    // Seeding rewrites the store and fixtures, so drop cached state.
    ctx->store.reset();
    ctx->index.reset();
    ctx->gateway.reset();
  });
}

} // extern "C"
