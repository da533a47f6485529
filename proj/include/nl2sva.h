/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to the nl2sva library: natural-language hardware property
 * descriptions in, SystemVerilog Assertions out, with retrieval, rechecking,
 * derivation traces, bounded-trace equivalence checking, and dataset
 * evaluation behind one opaque context handle.
 *
 * Every function returning nl2sva_status sets a thread-local error message
 * (see nl2sva_last_error) on failure. Strings returned through char** are
 * owned by the caller and must be released with nl2sva_string_free.
 */
#ifndef NL2SVA_H
#define NL2SVA_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nl2sva_status {
  NL2SVA_OK = 0,
  NL2SVA_E_USAGE = 1,    /* bad arguments or configuration */
  NL2SVA_E_DATA = 2,     /* malformed input, dataset, fixture, or store */
  NL2SVA_E_PROVIDER = 3, /* chat/embedding provider failure */
  NL2SVA_E_INTERNAL = 4
} nl2sva_status;

/* Owns the loaded configuration, provider wiring, and (lazily) the chunk
 * store and vector index. Not thread-safe; create one per thread. */
typedef struct nl2sva_ctx nl2sva_ctx;

const char* nl2sva_version(void);

/* Message for the most recent failure on this thread; empty when the last
 * call succeeded. Valid until the next library call on the same thread. */
const char* nl2sva_last_error(void);

/* Same failure as a JSON object: {"code": ..., "message": ...} plus
 * "offset" and "expected" for assertion syntax errors. */
const char* nl2sva_last_error_json(void);

void nl2sva_string_free(char* text);

/* config_path may be NULL for built-in defaults. */
nl2sva_status nl2sva_ctx_new(const char* config_path, nl2sva_ctx** out_ctx);
void nl2sva_ctx_free(nl2sva_ctx* ctx);

/* Replaces the configured chat provider: "mock" or "http". */
nl2sva_status nl2sva_ctx_set_provider(nl2sva_ctx* ctx, const char* provider);

/* Overrides one path-valued configuration entry. Keys: "store_dir",
 * "dataset_dir", "mock_dir", "transcript_path". */
nl2sva_status nl2sva_ctx_set_path(nl2sva_ctx* ctx, const char* key,
                                  const char* value);

/* 1 while the context answers prompts from the bundled mock fixtures. */
int nl2sva_ctx_uses_mock(const nl2sva_ctx* ctx);

/* ----- assertion level ------------------------------------------------ */

/* Parses one concurrent assertion and re-renders it canonically.
 * signals_json: NULL, or a JSON array [{"name": ..., "width": N}, ...];
 * when given, undeclared signals and out-of-range selects are rejected.
 * out_json: {"sva", "canonical", "clock", "edge", "operators": [...],
 *            "signals": [...]}. */
nl2sva_status nl2sva_parse(const char* sva, const char* signals_json,
                           char** out_json);

/* Bounded-trace equivalence of two assertions over the declared signals.
 * signals_json: as in nl2sva_parse; NULL assumes every referenced signal is
 * one bit wide.
 * out_json: {"verdict": "equivalent"|"inequivalent"|"clock_mismatch",
 *            "traces_checked", "compared_bodies_only", "note",
 *            "counterexample"?, "cex_cycle"?}. */
nl2sva_status nl2sva_check(nl2sva_ctx* ctx, const char* golden_sva,
                           const char* candidate_sva, const char* signals_json,
                           char** out_json);

/* ----- corpus and retrieval -------------------------------------------- */

/* Chunks every .md/.txt document under corpus_dir, embeds the chunks, and
 * saves the store to out_dir. mode: "dynamic" (code-aware) or "static"
 * (fixed windows of `size` chars advancing by size - overlap; both ignored
 * for dynamic mode). out_json: {"documents", "chunks", "store_dir"}. */
nl2sva_status nl2sva_ingest(nl2sva_ctx* ctx, const char* corpus_dir,
                            const char* mode, size_t size, size_t overlap,
                            const char* out_dir, char** out_json);

/* Retrieves context for a property description from the configured store.
 * mode: "global", "operator", or "hybrid". out_json mirrors the retrieval
 * context: {"global", "keyword_map", "operator_hits", "warnings",
 *           "rendered", ...}. */
nl2sva_status nl2sva_retrieve(nl2sva_ctx* ctx, const char* spec_text,
                              const char* mode, char** out_json);

/* ----- generation pipeline --------------------------------------------- */

/* One end-to-end translation of a property description. design_context may
 * be NULL. mode: llm, static-rag, dynamic-rag, hr-p0, hr-p1, hr, sor, or
 * ragsvag. out_json is the full generation artifact (responses, retrieval,
 * recheck iterations, final assertion, warnings). */
nl2sva_status nl2sva_generate(nl2sva_ctx* ctx, const char* spec_text,
                              const char* design_context, const char* mode,
                              char** out_json);

/* Reviews an existing candidate assertion against the description for up to
 * the configured number of rounds. out_json: {"final_sva", "termination",
 * "iterations": [...], ...}. */
nl2sva_status nl2sva_recheck(nl2sva_ctx* ctx, const char* spec_text,
                             const char* candidate_sva, char** out_json);

/* ----- derivation ------------------------------------------------------ */

/* Builds derivation-trace finetune records from a pair file (.jsonl with
 * {"sva", "explanation"} per line, or a plain assertion list).
 * out_json: {"records": [{"sva", "explanation",
 *                         "prompt_guided_explanation"}, ...],
 *            "rejects": [{"sva", "reason"}, ...]}. */
nl2sva_status nl2sva_derive(nl2sva_ctx* ctx, const char* pairs_path,
                            char** out_json);

/* ----- evaluation ------------------------------------------------------ */

/* Runs the configured dataset through the comma-separated mode list and
 * scores syntax correctness and functionality match.
 * out_json: {"outcomes": [...], "report": {...}, "text": ..., "banner"?}.
 * "banner" is present whenever the mock provider served the run. */
nl2sva_status nl2sva_eval(nl2sva_ctx* ctx, const char* modes_csv,
                          char** out_json);

/* Writes FPV collateral (combined checker module, design copy, tool script)
 * for one dataset record and a candidate assertion.
 * out_json: {"checker", "script", "design"}. */
nl2sva_status nl2sva_export_fpv(nl2sva_ctx* ctx, const char* record_id,
                                const char* candidate_sva, const char* out_dir,
                                char** out_json);

/* Builds the offline demo collateral: chunk store plus the scripted mock
 * exchanges for the bundled dataset. fixtures_root defaults to "fixtures"
 * when NULL. out_json: {"store_dir", "mock_dir", "documents", "chunks",
 * "fixtures"}. */
nl2sva_status nl2sva_seed_demo(nl2sva_ctx* ctx, const char* fixtures_root,
                               char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* NL2SVA_H */
