#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "srcwb/callgraph.hpp"
#include "srcwb/catalog.hpp"
#include "srcwb/pathcontexts.hpp"
#include "srcwb/representations.hpp"
#include "srcwb/taskgen.hpp"
#include "srcwb/tokenstats.hpp"

namespace srcwb {

using Summary = nlohmann::ordered_json;

/// Directory layout of an output workspace. Each command owns one subtree
/// (properties/ is shared by metrics, callgraph and props-import, but each
/// writes its own key files).
struct Workspace {
  std::filesystem::path root;

  std::filesystem::path metadata() const { return root / "metadata"; }
  std::filesystem::path representations() const { return root / "representations"; }
  std::filesystem::path properties() const { return root / "properties"; }
  std::filesystem::path callgraph_file() const { return root / "callgraph" / "callgraph.csv"; }
  std::filesystem::path tasks() const { return root / "tasks"; }
  std::filesystem::path tokenstats() const { return root / "tokenstats"; }
  std::filesystem::path reports() const { return root / "reports"; }
  std::filesystem::path manifest(const std::string& command) const {
    return root / "manifest" / (command + ".json");
  }
};

struct RunConfig {
  Workspace ws;
  /// Empty means the corpus recorded by the last catalog run.
  std::filesystem::path corpus;
  std::uint64_t seed = 0;
  /// Abort on the first unparseable file instead of skipping it.
  bool fail_fast = false;
};

/// Throws MissingArtifact naming `what` and the command that produces it.
void require_artifact(const std::filesystem::path& file, const std::string& producer);

/// Representation payload of one method. FTGR uses `resolver` for
/// FormalArgName edges; path contexts sample with `paths.seed`.
std::string method_representation(Repr r, const MethodSource& m, const PathConfig& paths,
                                  const FormalResolver& resolver = {});

extern const std::vector<std::string> kReprHeader;

Summary cmd_catalog(const RunConfig& cfg);
Summary cmd_add_project(const RunConfig& cfg, const std::filesystem::path& project_dir, bool replace);
Summary cmd_repr(const RunConfig& cfg, const std::vector<Repr>& types, const PathConfig& paths);
Summary cmd_metrics(const RunConfig& cfg);
Summary cmd_callgraph(const RunConfig& cfg, const CallGraphOptions& opts);
Summary cmd_props_import(const RunConfig& cfg, const std::string& key, ValueType type,
                         const std::filesystem::path& file);

struct TaskgenArgs {
  std::string task;  // "property", "call-mask" or "arg-swap"
  std::string name;  // dataset file stem; defaults from the task
  std::string key;   // property task
  std::vector<std::string> filters;
  bool balance = false;
  Repr payload = Repr::TKNA;
  SplitFractions fracs;
  int context_hops = 0;
  bool include_constructors = false;
  bool exclude_label = true;
  double p_mutate = 0.5;
  /// Built-in baselines to evaluate on the test split: "most-frequent", "unigram".
  std::vector<std::string> baselines;
  /// External predictions (sample_id,prediction) to evaluate.
  std::filesystem::path predictions;
};
Summary cmd_taskgen(const RunConfig& cfg, const TaskgenArgs& args);

struct TokenstatsArgs {
  std::size_t vocab_size = 1000;
  std::filesystem::path english;  // defaults to the bundled text
  std::vector<std::int64_t> thresholds{kThresholds.begin(), kThresholds.end()};
  bool buckets = true;
};
Summary cmd_tokenstats(const RunConfig& cfg, const TokenstatsArgs& args);

/// "calls", "windows" or "bias".
Summary cmd_report(const RunConfig& cfg, const std::string& study, std::size_t bins = 10);

/// Evaluation table rows: scope ("overall", "stratum", "bucket"), key, total, correct, accuracy.
extern const std::vector<std::string> kEvalHeader;
void write_eval(const EvalReport& r, const std::filesystem::path& file);

}  // namespace srcwb
