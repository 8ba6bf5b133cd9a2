// Command-line front end over the pipeline. Exit codes: 0 success, 1 usage,
// 2 input error, 3 internal error. The last stdout line is a JSON summary.
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "srcwb/error.hpp"
#include "srcwb/pipeline.hpp"
#include "srcwb/properties.hpp"

namespace {

using srcwb::Summary;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

void emit(Summary s, const std::string& status) {
  Summary out;
  out["status"] = status;
  for (auto& [k, v] : s.items()) out[k] = v;
  std::cout << out.dump() << std::endl;
}

int fail(const std::string& command, const std::string& kind, const std::string& message, int code) {
  std::cerr << "srcwb " << command << ": " << message << "\n";
  Summary s;
  s["command"] = command;
  s["kind"] = kind;
  s["message"] = message;
  emit(s, "error");
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Source-code corpus workbench"};
  app.require_subcommand(1);

  srcwb::RunConfig cfg;
  std::string workspace;
  if (const char* env = std::getenv("SRCWB_WORKSPACE")) workspace = env;
  std::string corpus;
  app.add_option("-w,--workspace", workspace, "Output workspace (default: $SRCWB_WORKSPACE)");
  app.add_option("--corpus", corpus, "Corpus root (default: recorded by catalog)");
  app.add_option("--seed", cfg.seed, "Seed for every sampled artifact");
  app.add_flag("--fail-fast", cfg.fail_fast, "Abort on the first unparseable file");

  auto* catalog = app.add_subcommand("catalog", "Catalog every project under the corpus root");

  auto* add = app.add_subcommand("add-project", "Catalog one project and regenerate per-method artifacts");
  std::string project_dir;
  bool replace = false;
  add->add_option("project", project_dir, "Project directory")->required();
  add->add_flag("--replace", replace, "Replace an already cataloged project");

  auto* repr = app.add_subcommand("repr", "Write representation CSVs");
  std::string repr_types = "TEXT,TKNA,TKNB,ASTS,C2VC,C2SQ,FTGR";
  srcwb::PathConfig paths;
  bool no_limits = false;
  repr->add_option("--types", repr_types, "Comma-separated representation types");
  repr->add_option("--max-length", paths.max_length, "Longest path context, in nodes");
  repr->add_option("--max-width", paths.max_width, "Widest path context");
  repr->add_option("--max-contexts", paths.max_contexts, "Path contexts sampled per method");
  repr->add_flag("--no-limits", no_limits, "Keep every terminal pair");
  repr->add_flag("--lowercase-terminals", paths.normalize_terminals, "Lowercase C2VC terminals");

  auto* metrics = app.add_subcommand("metrics", "Compute per-method metric properties");

  auto* callgraph = app.add_subcommand("callgraph", "Build the call graph and connectivity properties");
  bool no_ctors = false;
  callgraph->add_flag("--no-constructors", no_ctors, "Skip `new` expressions");

  auto* props = app.add_subcommand("props-import", "Import an external property CSV");
  std::string key, type_name = "Text", prop_file;
  const CLI::Validator key_code(
      [](std::string& code) {
        return srcwb::valid_key_code(code) ? std::string() : "property code '" + code + "' must be 4-16 uppercase letters";
      },
      "KEY");
  props->add_option("key", key, "Property code")->required()->check(key_code);
  props->add_option("file", prop_file, "CSV with method_id,value")->required();
  props->add_option("--type", type_name, "Integer, Text or Flag")
      ->check(CLI::IsMember({"Integer", "Text", "Flag"}, CLI::ignore_case));

  auto* taskgen = app.add_subcommand("taskgen", "Build a task dataset");
  srcwb::TaskgenArgs targs;
  std::string filters, baselines, payload = "TKNA", predictions;
  std::vector<double> fracs;
  taskgen->add_option("--task", targs.task, "property, call-mask or arg-swap")
      ->required()
      ->check(CLI::IsMember({"property", "call-mask", "arg-swap"}));
  taskgen->add_option("--name", targs.name, "Dataset file stem");
  taskgen->add_option("--key", targs.key, "Property to predict");
  taskgen->add_option("--filter", filters, "Comma-separated filters such as SLOC>=5");
  taskgen->add_flag("--balance", targs.balance, "Down-sample every label to the rarest count");
  taskgen->add_option("--payload", payload, "Representation used as input");
  taskgen->add_option("--split", fracs, "Train, valid and test fractions")->expected(3)->check(CLI::Range(0.0, 1.0));
  taskgen->add_option("--context-hops", targs.context_hops, "Callee context hops appended after <CTX>");
  taskgen->add_flag("--include-constructors", targs.include_constructors, "Allow masking `new` sites");
  taskgen->add_flag("!--keep-label-context", targs.exclude_label,
                    "Keep the masked callee's name in the context");
  taskgen->add_option("--p-mutate", targs.p_mutate, "Mutation probability");
  taskgen->add_option("--baseline", baselines, "Comma-separated: most-frequent, unigram");
  taskgen->add_option("--predictions", predictions, "Prediction CSV to evaluate");

  auto* tokenstats = app.add_subcommand("tokenstats", "Train vocabularies and compute window fit");
  srcwb::TokenstatsArgs sargs;
  std::string english;
  std::vector<std::int64_t> thresholds;
  bool no_buckets = false;
  tokenstats->add_option("--vocab-size", sargs.vocab_size, "Symbols per vocabulary");
  tokenstats->add_option("--english", english, "Plain-text corpus for the English vocabulary");
  tokenstats->add_option("--thresholds", thresholds, "Comma-separated window sizes")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  tokenstats->add_flag("--no-buckets", no_buckets, "Skip the per-size-bucket rows");

  auto* report = app.add_subcommand("report", "Write a study report");
  std::string study;
  std::size_t bins = 10;
  report->add_option("--study", study, "calls, windows or bias")
      ->required()
      ->check(CLI::IsMember({"calls", "windows", "bias"}));
  report->add_option("--bins", bins, "Bins per axis for the bias study");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return fail("usage", "usage", e.what(), kExitUsage);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (workspace.empty()) {
    return fail(command, "usage", "no workspace: pass --workspace or set SRCWB_WORKSPACE", kExitUsage);
  }
  cfg.ws.root = workspace;
  cfg.corpus = corpus;

  try {
    Summary s;
    if (*catalog) {
      s = srcwb::cmd_catalog(cfg);
    } else if (*add) {
      s = srcwb::cmd_add_project(cfg, project_dir, replace);
    } else if (*repr) {
      std::vector<srcwb::Repr> types;
      for (const std::string& t : split_list(repr_types)) {
        auto r = srcwb::parse_repr(t);
        if (!r) {
          return fail(command, "usage",
                      "unknown representation '" + t + "'; valid types: TEXT,TKNA,TKNB,ASTS,C2VC,C2SQ,FTGR",
                      kExitUsage);
        }
        types.push_back(*r);
      }
      paths.limits = !no_limits;
      paths.seed = cfg.seed;
      s = srcwb::cmd_repr(cfg, types, paths);
    } else if (*metrics) {
      s = srcwb::cmd_metrics(cfg);
    } else if (*callgraph) {
      srcwb::CallGraphOptions opts;
      opts.include_constructors = !no_ctors;
      s = srcwb::cmd_callgraph(cfg, opts);
    } else if (*props) {
      s = srcwb::cmd_props_import(cfg, key, srcwb::parse_value_type(type_name), prop_file);
    } else if (*taskgen) {
      targs.filters = split_list(filters);
      targs.baselines = split_list(baselines);
      auto r = srcwb::parse_repr(payload);
      if (!r) return fail(command, "usage", "unknown payload representation '" + payload + "'", kExitUsage);
      targs.payload = *r;
      if (!fracs.empty()) {
        targs.fracs = {fracs[0], fracs[1], fracs[2]};
        try {
          targs.fracs.validate();
        } catch (const srcwb::Error& e) {
          return fail(command, "usage", e.what(), kExitUsage);
        }
      }
      targs.predictions = predictions;
      s = srcwb::cmd_taskgen(cfg, targs);
    } else if (*tokenstats) {
      sargs.english = english;
      sargs.buckets = !no_buckets;
      if (!thresholds.empty()) sargs.thresholds = thresholds;
      s = srcwb::cmd_tokenstats(cfg, sargs);
    } else if (*report) {
      s = srcwb::cmd_report(cfg, study, bins);
    }
    emit(s, "ok");
    return kExitOk;
  } catch (const srcwb::Error& e) {
    const bool internal = e.kind() == srcwb::ErrorKind::Internal;
    return fail(command, std::string(srcwb::to_string(e.kind())), e.what(),
                internal ? kExitInternal : kExitInput);
  } catch (const std::invalid_argument& e) {
    return fail(command, "invalid-argument", e.what(), kExitInput);
  } catch (const std::exception& e) {
    return fail(command, "internal", e.what(), kExitInternal);
  }
}
