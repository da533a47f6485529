// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Talks to the library exclusively through the C API
// in nl2sva.h; the JSON payloads it returns are reshaped here for humans.
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nl2sva.h"

namespace {

struct CliFailure {
  int exit_code;
  std::string message;
};

int status_to_exit(nl2sva_status status) {
  switch (status) {
    case NL2SVA_OK:
      return 0;
    case NL2SVA_E_USAGE:
      return 1;
    case NL2SVA_E_PROVIDER:
      return 3;
    default:
      return 2;
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliFailure{2, "cannot read file '" + path + "'"};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string trimmed(const std::string& text) {
  std::size_t begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  std::size_t end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

// Owned C-API string.
struct OutString {
  char* value = nullptr;
  ~OutString() { nl2sva_string_free(value); }
  std::string str() const { return value ? value : ""; }
};

// Raises CliFailure carrying the thread-local error of a failed call.
void check(nl2sva_status status, bool json_out) {
  if (status == NL2SVA_OK) return;
  throw CliFailure{status_to_exit(status),
                   json_out ? nl2sva_last_error_json() : nl2sva_last_error()};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliFailure{2, "cannot write file '" + path + "'"};
  out << content;
}

// `arg` names a file when one exists; otherwise it is taken literally.
std::string file_or_literal(const std::string& arg) {
  std::ifstream probe(arg);
  if (probe.good()) return slurp(arg);
  return arg;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Translate natural-language hardware properties into "
               "SystemVerilog Assertions and check them on bounded traces"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string provider;
  bool json_out = false;
  bool seed_store = false;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--provider", provider, "Chat provider override")
      ->check(CLI::IsMember({"mock", "http"}));
  app.add_flag("--json", json_out, "Print machine-readable JSON");
  app.add_flag("--seed-store", seed_store,
               "Rebuild the demo chunk store and mock fixtures first");

  auto* ingest = app.add_subcommand("ingest", "Chunk and embed a corpus");
  std::string ingest_corpus, ingest_mode = "dynamic", ingest_out;
  std::size_t ingest_size = 400, ingest_overlap = 100;
  ingest->add_option("--corpus", ingest_corpus, "Directory of .md/.txt docs")
      ->required();
  ingest->add_option("--mode", ingest_mode, "dynamic or static")
      ->check(CLI::IsMember({"dynamic", "static"}));
  ingest->add_option("--size", ingest_size, "Static window size (chars)");
  ingest->add_option("--overlap", ingest_overlap, "Static window overlap");
  ingest->add_option("--out", ingest_out, "Store directory")->required();

  auto* retrieve = app.add_subcommand("retrieve", "Query the chunk store");
  std::string retrieve_spec, retrieve_mode = "hybrid", retrieve_store;
  retrieve->add_option("--spec", retrieve_spec, "Property description file")
      ->required();
  retrieve->add_option("--mode", retrieve_mode, "global, operator, or hybrid")
      ->check(CLI::IsMember({"global", "operator", "hybrid"}));
  retrieve->add_option("--store", retrieve_store, "Store directory override");

  auto* generate = app.add_subcommand("generate", "Translate one property");
  std::string gen_spec, gen_design, gen_mode = "ragsvag", gen_out;
  generate->add_option("--spec", gen_spec, "Property description file")
      ->required();
  generate->add_option("--design", gen_design,
                       "Design context: a file or literal text");
  generate
      ->add_option("--mode", gen_mode,
                   "llm, static-rag, dynamic-rag, hr-p0, hr-p1, hr, sor, or "
                   "ragsvag")
      ->required();
  generate->add_option("--out", gen_out, "Write the full JSON artifact here");

  auto* recheck = app.add_subcommand("recheck", "Review an existing candidate");
  std::string recheck_spec, recheck_candidate;
  recheck->add_option("--spec", recheck_spec, "Property description file")
      ->required();
  recheck->add_option("--candidate", recheck_candidate, "Assertion file")
      ->required();

  auto* derive = app.add_subcommand("derive", "Build finetune records");
  std::string derive_pairs, derive_out;
  derive->add_option("--pairs", derive_pairs,
                     "JSONL {sva, explanation} pairs or an assertion list")
      ->required();
  derive->add_option("--out", derive_out, "Output records (JSONL)")
      ->required();

  auto* eval = app.add_subcommand("eval", "Score modes over the dataset");
  std::string eval_modes = "llm,ragsvag", eval_out, eval_dataset;
  eval->add_option("--modes", eval_modes, "Comma-separated mode list");
  eval->add_option("--dataset", eval_dataset, "Dataset directory override");
  eval->add_option("--out", eval_out, "Write the full JSON report here");

  auto* export_fpv = app.add_subcommand(
      "export-fpv", "Write FPV collateral for one dataset record");
  std::string fpv_record, fpv_candidate, fpv_out;
  export_fpv->add_option("--record", fpv_record, "Record id")->required();
  export_fpv->add_option("--candidate", fpv_candidate, "Assertion file")
      ->required();
  export_fpv->add_option("--out", fpv_out, "Output directory")->required();

  auto* check_cmd =
      app.add_subcommand("check", "Bounded-trace equivalence of two assertions");
  std::string check_golden, check_candidate, check_signals;
  check_cmd->add_option("--golden", check_golden, "Assertion file")
      ->required();
  check_cmd->add_option("--candidate", check_candidate, "Assertion file")
      ->required();
  check_cmd->add_option("--signals", check_signals,
                        "signals.json declaring names and widths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  nl2sva_ctx* raw_ctx = nullptr;
  nl2sva_status status =
      nl2sva_ctx_new(config_path.empty() ? nullptr : config_path.c_str(),
                     &raw_ctx);
  if (status != NL2SVA_OK) {
    std::fprintf(stderr, "error: %s\n",
                 json_out ? nl2sva_last_error_json() : nl2sva_last_error());
    return status_to_exit(status);
  }
  std::unique_ptr<nl2sva_ctx, void (*)(nl2sva_ctx*)> ctx(raw_ctx,
                                                         nl2sva_ctx_free);

  try {
    if (!provider.empty())
      check(nl2sva_ctx_set_provider(ctx.get(), provider.c_str()), json_out);

    if (seed_store) {
      OutString seeded;
      check(nl2sva_seed_demo(ctx.get(), nullptr, &seeded.value), json_out);
      auto j = nlohmann::json::parse(seeded.str());
      std::fprintf(stderr, "seeded %llu chunks and %llu mock fixtures\n",
                   static_cast<unsigned long long>(j.value("chunks", 0ull)),
                   static_cast<unsigned long long>(j.value("fixtures", 0ull)));
    }

    if (ingest->parsed()) {
      OutString out;
      check(nl2sva_ingest(ctx.get(), ingest_corpus.c_str(),
                          ingest_mode.c_str(), ingest_size, ingest_overlap,
                          ingest_out.c_str(), &out.value),
            json_out);
      if (json_out) {
        std::printf("%s\n", out.value);
      } else {
        auto j = nlohmann::json::parse(out.str());
        std::printf("ingested %llu documents into %llu chunks at %s\n",
                    j["documents"].get<unsigned long long>(),
                    j["chunks"].get<unsigned long long>(),
                    j["store_dir"].get<std::string>().c_str());
      }
    } else if (retrieve->parsed()) {
      if (!retrieve_store.empty())
        check(nl2sva_ctx_set_path(ctx.get(), "store_dir",
                                  retrieve_store.c_str()),
              json_out);
      std::string spec = trimmed(slurp(retrieve_spec));
      OutString out;
      check(nl2sva_retrieve(ctx.get(), spec.c_str(), retrieve_mode.c_str(),
                            &out.value),
            json_out);
      if (json_out) {
        std::printf("%s\n", out.value);
      } else {
        auto j = nlohmann::json::parse(out.str());
        for (const auto& w : j["warnings"])
          std::fprintf(stderr, "warning: %s\n",
                       w.get<std::string>().c_str());
        std::printf("%s\n", j["rendered"].get<std::string>().c_str());
      }
    } else if (generate->parsed()) {
      std::string spec = trimmed(slurp(gen_spec));
      std::string design =
          gen_design.empty() ? "" : file_or_literal(gen_design);
      OutString out;
      check(nl2sva_generate(ctx.get(), spec.c_str(), design.c_str(),
                            gen_mode.c_str(), &out.value),
            json_out);
      if (!gen_out.empty()) write_file(gen_out, out.str() + "\n");
      if (json_out) {
        std::printf("%s\n", out.value);
      } else {
        auto j = nlohmann::json::parse(out.str());
        for (const auto& w : j["warnings"])
          std::fprintf(stderr, "warning: %s\n",
                       w.get<std::string>().c_str());
        if (!j["syntax_valid"].get<bool>())
          std::fprintf(stderr, "syntax error: %s\n",
                       j.value("syntax_error", "").c_str());
        std::printf("%s\n", j["final_sva"].get<std::string>().c_str());
      }
    } else if (recheck->parsed()) {
      std::string spec = trimmed(slurp(recheck_spec));
      std::string candidate = trimmed(slurp(recheck_candidate));
      OutString out;
      check(nl2sva_recheck(ctx.get(), spec.c_str(), candidate.c_str(),
                           &out.value),
            json_out);
      if (json_out) {
        std::printf("%s\n", out.value);
      } else {
        auto j = nlohmann::json::parse(out.str());
        std::fprintf(stderr, "termination: %s after %zu iteration(s)\n",
                     j["termination"].get<std::string>().c_str(),
                     j["iterations"].size());
        std::printf("%s\n", j["final_sva"].get<std::string>().c_str());
      }
    } else if (derive->parsed()) {
      OutString out;
      check(nl2sva_derive(ctx.get(), derive_pairs.c_str(), &out.value),
            json_out);
      auto j = nlohmann::json::parse(out.str());
      std::string lines;
      for (const auto& record : j["records"]) lines += record.dump() + "\n";
      write_file(derive_out, lines);
      for (const auto& reject : j["rejects"])
        std::fprintf(stderr, "reject: %s: %s\n",
                     reject["sva"].get<std::string>().c_str(),
                     reject["reason"].get<std::string>().c_str());
      if (json_out)
        std::printf("%s\n", out.value);
      else
        std::printf("derived %zu records (%zu rejected) into %s\n",
                    j["records"].size(), j["rejects"].size(),
                    derive_out.c_str());
    } else if (eval->parsed()) {
      if (!eval_dataset.empty())
        check(nl2sva_ctx_set_path(ctx.get(), "dataset_dir",
                                  eval_dataset.c_str()),
              json_out);
      OutString out;
      check(nl2sva_eval(ctx.get(), eval_modes.c_str(), &out.value), json_out);
      if (!eval_out.empty()) write_file(eval_out, out.str() + "\n");
      if (json_out) {
        std::printf("%s\n", out.value);
      } else {
        auto j = nlohmann::json::parse(out.str());
        std::printf("%s", j["text"].get<std::string>().c_str());
        if (j.contains("banner"))
          std::printf("\n%s\n", j["banner"].get<std::string>().c_str());
      }
    } else if (export_fpv->parsed()) {
      std::string candidate = trimmed(slurp(fpv_candidate));
      OutString out;
      check(nl2sva_export_fpv(ctx.get(), fpv_record.c_str(),
                              candidate.c_str(), fpv_out.c_str(), &out.value),
            json_out);
      if (json_out) {
        std::printf("%s\n", out.value);
      } else {
        auto j = nlohmann::json::parse(out.str());
        std::printf("checker: %s\nscript:  %s\ndesign:  %s\n",
                    j["checker"].get<std::string>().c_str(),
                    j["script"].get<std::string>().c_str(),
                    j["design"].get<std::string>().c_str());
      }
    } else if (check_cmd->parsed()) {
      std::string golden = trimmed(slurp(check_golden));
      std::string candidate = trimmed(slurp(check_candidate));
      std::string signals =
          check_signals.empty() ? "" : slurp(check_signals);
      OutString out;
      check(nl2sva_check(ctx.get(), golden.c_str(), candidate.c_str(),
                         signals.empty() ? nullptr : signals.c_str(),
                         &out.value),
            json_out);
      if (json_out) {
        std::printf("%s\n", out.value);
      } else {
        auto j = nlohmann::json::parse(out.str());
        std::printf("verdict: %s (%llu traces checked)\n",
                    j["verdict"].get<std::string>().c_str(),
                    j["traces_checked"].get<unsigned long long>());
        if (!j["note"].get<std::string>().empty())
          std::printf("note: %s\n", j["note"].get<std::string>().c_str());
        if (j.contains("counterexample"))
          std::printf("counterexample (first divergence at cycle %llu):\n%s",
                      j["cex_cycle"].get<unsigned long long>(),
                      j["counterexample"]["text"].get<std::string>().c_str());
      }
    }
  } catch (const CliFailure& failure) {
    std::fprintf(stderr, "error: %s\n", failure.message.c_str());
    return failure.exit_code;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
