#include "srcwb/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "srcwb/csv.hpp"
#include "srcwb/error.hpp"
#include "srcwb/featuregraph.hpp"
#include "srcwb/metrics.hpp"
#include "srcwb/properties.hpp"

namespace srcwb {

namespace fs = std::filesystem;

const std::vector<std::string> kReprHeader = {"method_id", "payload"};
const std::vector<std::string> kEvalHeader = {"scope", "key", "total", "correct", "accuracy"};

namespace {

const std::vector<std::string> kDiagnosticsHeader = {"file", "line", "col", "message"};
const std::vector<std::string> kConnectivityCodes = {"NUPC", "NUCC", "NMLC", "NMNC"};

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_manifest(const Workspace& ws, const std::string& command, const Summary& body) {
  csv::write_text(ws.manifest(command), body.dump(2) + "\n");
}

std::optional<Summary> read_manifest(const Workspace& ws, const std::string& command) {
  const fs::path p = ws.manifest(command);
  if (!fs::exists(p)) return std::nullopt;
  try {
    return Summary::parse(csv::read_text(p));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, p.string() + ": " + e.what());
  }
}

Catalog load_catalog(const Workspace& ws) {
  require_artifact(ws.metadata() / "projects.csv", "catalog");
  return read_metadata(ws.metadata());
}

fs::path corpus_root(const RunConfig& cfg) {
  if (!cfg.corpus.empty()) return cfg.corpus;
  if (auto m = read_manifest(cfg.ws, "catalog"); m && m->contains("corpus")) {
    return fs::path(m->at("corpus").get<std::string>());
  }
  throw Error(ErrorKind::MissingArtifact,
              "no corpus root recorded in " + cfg.ws.manifest("catalog").string() +
                  "; run catalog or pass --corpus");
}

std::map<EntityId, const MethodSource*> index_methods(const std::vector<SourceFile>& files) {
  std::map<EntityId, const MethodSource*> out;
  for (const SourceFile& f : files) {
    for (const MethodSource& m : f.methods) out[m.method_id] = &m;
  }
  return out;
}

std::vector<csv::Row> read_diagnostics(const Workspace& ws) {
  const fs::path p = ws.metadata() / "diagnostics.csv";
  if (!fs::exists(p)) return {};
  return csv::read_file(p, kDiagnosticsHeader).rows;
}

void write_diagnostics(const Workspace& ws, std::vector<csv::Row> rows) {
  std::sort(rows.begin(), rows.end(), [](const csv::Row& a, const csv::Row& b) {
    if (a[0] != b[0]) return a[0] < b[0];
    if (a[1] != b[1]) return std::stoi(a[1]) < std::stoi(b[1]);
    return std::stoi(a[2]) < std::stoi(b[2]);
  });
  csv::write_file(ws.metadata() / "diagnostics.csv", kDiagnosticsHeader, rows);
}

csv::Row diagnostic_row(const Diagnostic& d) {
  return {d.file, std::to_string(d.line), std::to_string(d.col), d.message};
}

// Catalogs one project under the configured strictness; nullopt when the
// project has no usable file and skipping is allowed.
std::optional<ProjectCatalog> catalog_one(const RunConfig& cfg, const fs::path& corpus,
                                          const fs::path& dir, std::vector<csv::Row>& diags) {
  try {
    ProjectCatalog pc = catalog_project(corpus, dir);
    if (cfg.fail_fast && !pc.diagnostics.empty()) {
      const Diagnostic& d = pc.diagnostics.front();
      throw Error(ErrorKind::Parse,
                  d.file + ":" + std::to_string(d.line) + ":" + std::to_string(d.col) + ": " + d.message);
    }
    for (const Diagnostic& d : pc.diagnostics) {
      std::cerr << "skipped " << d.file << ":" << d.line << ":" << d.col << ": " << d.message << "\n";
      diags.push_back(diagnostic_row(d));
    }
    return pc;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::EmptyProject || cfg.fail_fast) throw;
    const std::string rel = fs::relative(dir, corpus).generic_string();
    std::cerr << "skipped project " << rel << ": " << e.what() << "\n";
    diags.push_back({rel, "0", "0", e.what()});
    return std::nullopt;
  }
}

std::uint64_t method_seed(std::uint64_t seed, const EntityId& id) {
  return seed ^ std::stoull(id.hex().substr(0, 16), nullptr, 16);
}

Summary path_config_json(const PathConfig& p) {
  Summary j;
  j["max_length"] = p.max_length;
  j["max_width"] = p.max_width;
  j["max_contexts"] = p.max_contexts;
  j["seed"] = p.seed;
  j["limits"] = p.limits;
  j["normalize_terminals"] = p.normalize_terminals;
  return j;
}

PathConfig path_config_from(const Summary& j) {
  PathConfig p;
  p.max_length = j.at("max_length").get<int>();
  p.max_width = j.at("max_width").get<int>();
  p.max_contexts = j.at("max_contexts").get<std::size_t>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.limits = j.at("limits").get<bool>();
  p.normalize_terminals = j.at("normalize_terminals").get<bool>();
  return p;
}

// ---- stage bodies shared by the commands and add-project ------------------------

std::size_t write_representations(const Workspace& ws, const Catalog& cat,
                                  const std::vector<SourceFile>& files, const std::vector<Repr>& types,
                                  const PathConfig& paths) {
  const auto methods = index_methods(files);
  const bool need_graph = std::find(types.begin(), types.end(), Repr::FTGR) != types.end();
  const CallGraph graph = need_graph ? build_callgraph(cat, files) : CallGraph{};
  for (Repr r : types) {
    std::vector<csv::Row> rows;
    for (const MethodMeta& meta : cat.methods()) {
      auto it = methods.find(meta.method_id);
      if (it == methods.end()) {
        throw Error(ErrorKind::MissingArtifact, "no source for method " + meta.method_id.hex());
      }
      const MethodSource& m = *it->second;
      PathConfig pc = paths;
      pc.seed = method_seed(paths.seed, m.method_id);
      FormalResolver resolver;
      if (r == Repr::FTGR) resolver = make_formal_resolver(graph, m, methods);
      rows.push_back({m.method_id.hex(), method_representation(r, m, pc, resolver)});
    }
    csv::write_file(ws.representations() / (std::string(to_string(r)) + ".csv"), kReprHeader, rows);
  }
  return cat.methods().size();
}

void write_metric_tables(const Workspace& ws, const Catalog& cat, const std::vector<SourceFile>& files) {
  const auto methods = index_methods(files);
  std::vector<MetricRecord> records;
  for (const MethodMeta& meta : cat.methods()) {
    auto it = methods.find(meta.method_id);
    if (it == methods.end()) {
      throw Error(ErrorKind::MissingArtifact, "no source for method " + meta.method_id.hex());
    }
    records.push_back(compute_metrics(*it->second));
  }
  PropertyStore store(cat);
  store_metrics(records, store);
  for (const std::string& code : metric_codes()) store.write_table(code, ws.properties());
}

CallGraph write_callgraph_tables(const Workspace& ws, const Catalog& cat,
                                 const std::vector<SourceFile>& files, const CallGraphOptions& opts) {
  CallGraph g = build_callgraph(cat, files, opts);
  write_callgraph(g, ws.callgraph_file());
  PropertyStore store(cat);
  connectivity_props(g, cat, store);
  for (const std::string& code : kConnectivityCodes) store.write_table(code, ws.properties());
  return g;
}

// Loads a property table with its registered or imported type.
void load_property(const Workspace& ws, PropertyStore& store, const std::string& code) {
  const fs::path file = ws.properties() / (code + ".csv");
  require_artifact(file, "metrics, callgraph or props-import");
  if (!store.key(code)) {
    ValueType type = ValueType::Text;
    if (auto m = read_manifest(ws, "props-import"); m && m->contains(code)) {
      type = parse_value_type(m->at(code).get<std::string>());
    }
    store.register_key(code, type);
  }
  store.read_table(code, ws.properties());
}

std::map<EntityId, std::string> read_representation(const Workspace& ws, Repr r) {
  const fs::path file = ws.representations() / (std::string(to_string(r)) + ".csv");
  require_artifact(file, "repr");
  const csv::Table t = csv::read_file(file, kReprHeader);
  std::map<EntityId, std::string> out;
  for (const auto& row : t.rows) out[EntityId::from_hex(row[0])] = row[1];
  return out;
}

Summary eval_json(const EvalReport& r) {
  Summary j;
  j["overall"] = r.overall.accuracy();
  j["samples"] = r.overall.total;
  j["missing"] = r.missing.size();
  Summary strata = Summary::object();
  for (const auto& [k, c] : r.by_stratum) strata[k.empty() ? "-" : k] = c.accuracy();
  j["by_stratum"] = strata;
  Summary buckets = Summary::object();
  for (const auto& [k, c] : r.by_bucket) buckets[std::string(1, k)] = c.accuracy();
  j["by_bucket"] = buckets;
  return j;
}

}  // namespace

void require_artifact(const fs::path& file, const std::string& producer) {
  if (!fs::exists(file)) {
    throw Error(ErrorKind::MissingArtifact,
                "missing artifact " + file.string() + "; run `srcwb " + producer + "` first");
  }
}

std::string method_representation(Repr r, const MethodSource& m, const PathConfig& paths,
                                  const FormalResolver& resolver) {
  switch (r) {
    case Repr::TEXT: return repr_text(m);
    case Repr::TKNA: return tokens_tkna(m);
    case Repr::TKNB: return tokens_tknb(m);
    case Repr::ASTS: return serialize_graph(ast_graph(m));
    case Repr::C2VC: return to_c2vc(m, extract_paths(m.ast, paths), paths);
    case Repr::C2SQ: return to_c2sq(m, extract_paths(m.ast, paths));
    case Repr::FTGR: return serialize_graph(build_feature_graph(m, resolver));
  }
  throw Error(ErrorKind::Internal, "unhandled representation");
}

void write_eval(const EvalReport& r, const fs::path& file) {
  std::vector<csv::Row> rows;
  auto add = [&](const std::string& scope, const std::string& key, const AccuracyCell& c) {
    rows.push_back({scope, key, std::to_string(c.total), std::to_string(c.correct), fixed(c.accuracy(), 9)});
  };
  add("overall", "all", r.overall);
  for (const auto& [k, c] : r.by_stratum) add("stratum", k.empty() ? "-" : k, c);
  for (const auto& [k, c] : r.by_bucket) add("bucket", std::string(1, k), c);
  rows.push_back({"missing", "all", std::to_string(r.missing.size()), "0", fixed(0.0, 9)});
  csv::write_file(file, kEvalHeader, rows);
}

// ---- commands --------------------------------------------------------------------

Summary cmd_catalog(const RunConfig& cfg) {
  if (cfg.corpus.empty()) throw Error(ErrorKind::InvalidArgument, "catalog needs a corpus root");
  if (!fs::is_directory(cfg.corpus)) {
    throw Error(ErrorKind::NotFound, "corpus root " + cfg.corpus.string() + " is not a directory");
  }
  Catalog cat;
  std::vector<csv::Row> diags;
  for (const fs::path& dir : list_projects(cfg.corpus)) {
    if (auto pc = catalog_one(cfg, cfg.corpus, dir, diags)) cat.add_project(*pc);
  }
  if (cat.projects().empty()) throw Error(ErrorKind::EmptyProject, "no project could be cataloged");
  cat.validate();
  write_metadata(cat, cfg.ws.metadata());
  write_diagnostics(cfg.ws, diags);
  Summary m;
  m["corpus"] = cfg.corpus.generic_string();
  m["seed"] = cfg.seed;
  write_manifest(cfg.ws, "catalog", m);

  Summary s;
  s["command"] = "catalog";
  s["projects"] = cat.projects().size();
  s["packages"] = cat.packages().size();
  s["classes"] = cat.classes().size();
  s["methods"] = cat.methods().size();
  s["skipped_files"] = diags.size();
  return s;
}

Summary cmd_add_project(const RunConfig& cfg, const fs::path& project_dir, bool replace) {
  if (!fs::is_directory(project_dir)) {
    throw Error(ErrorKind::NotFound, "project directory " + project_dir.string() + " does not exist");
  }
  fs::path corpus;
  if (!cfg.corpus.empty()) {
    corpus = cfg.corpus;
  } else if (auto m = read_manifest(cfg.ws, "catalog")) {
    corpus = m->at("corpus").get<std::string>();
  } else {
    corpus = fs::absolute(project_dir).lexically_normal().parent_path();
  }
  const fs::path rel = fs::relative(fs::absolute(project_dir), fs::absolute(corpus));
  if (rel.empty() || *rel.begin() == ".." || std::distance(rel.begin(), rel.end()) != 1) {
    throw Error(ErrorKind::InvalidArgument,
                "project " + project_dir.string() + " is not a direct child of corpus " + corpus.string());
  }

  Catalog cat = fs::exists(cfg.ws.metadata() / "projects.csv") ? read_metadata(cfg.ws.metadata()) : Catalog{};
  std::vector<csv::Row> diags = read_diagnostics(cfg.ws);
  const std::string prefix = rel.generic_string() + "/";
  std::erase_if(diags, [&](const csv::Row& r) {
    return r[0] == rel.generic_string() || r[0].rfind(prefix, 0) == 0;
  });
  std::vector<csv::Row> fresh;
  auto pc = catalog_one(cfg, corpus, corpus / rel, fresh);
  if (!pc) throw Error(ErrorKind::EmptyProject, "project " + rel.generic_string() + " has no usable source file");
  const bool existed = cat.find_project(pc->project.project_id) != nullptr;
  if (existed && !replace) {
    throw Error(ErrorKind::Duplicate, "project " + rel.generic_string() +
                                          " is already cataloged; pass --replace to regenerate it");
  }
  if (existed) cat.remove_project(pc->project.project_id);
  cat.add_project(*pc);
  cat.validate();
  diags.insert(diags.end(), fresh.begin(), fresh.end());
  write_metadata(cat, cfg.ws.metadata());
  write_diagnostics(cfg.ws, diags);
  Summary man;
  man["corpus"] = corpus.generic_string();
  man["seed"] = cfg.seed;
  write_manifest(cfg.ws, "catalog", man);

  // Regenerate every per-method artifact; other projects' rows come out unchanged.
  const std::vector<SourceFile> files = load_sources(corpus, cat);
  std::vector<Repr> types = all_reprs();
  PathConfig paths;
  paths.seed = cfg.seed;
  if (auto m = read_manifest(cfg.ws, "repr")) {
    types.clear();
    for (const auto& t : m->at("types")) types.push_back(*parse_repr(t.get<std::string>()));
    paths = path_config_from(m->at("paths"));
  } else {
    Summary rm;
    rm["types"] = Summary::array();
    for (Repr r : types) rm["types"].push_back(std::string(to_string(r)));
    rm["paths"] = path_config_json(paths);
    write_manifest(cfg.ws, "repr", rm);
  }
  write_representations(cfg.ws, cat, files, types, paths);
  write_metric_tables(cfg.ws, cat, files);
  CallGraphOptions cg;
  if (auto m = read_manifest(cfg.ws, "callgraph")) cg.include_constructors = m->at("include_constructors").get<bool>();
  const CallGraph g = write_callgraph_tables(cfg.ws, cat, files, cg);

  // Imported tables lose rows of methods that no longer exist.
  if (auto m = read_manifest(cfg.ws, "props-import")) {
    for (const auto& [code, type] : m->items()) {
      const fs::path file = cfg.ws.properties() / (code + ".csv");
      if (!fs::exists(file)) continue;
      csv::Table t = csv::read_file(file, kPropertyHeader);
      std::erase_if(t.rows, [&](const csv::Row& r) {
        return !cat.find_method(EntityId::from_hex(r[0]));
      });
      csv::write_file(file, kPropertyHeader, t.rows);
    }
  }

  std::size_t methods = 0, edges = 0;
  for (const MethodMeta& m : cat.methods()) {
    if (m.project_id == pc->project.project_id) {
      ++methods;
      edges += g.outgoing(m.method_id).size();
    }
  }
  Summary s;
  s["command"] = "add-project";
  s["project"] = pc->project.project_path;
  s["replaced"] = existed;
  s["packages"] = pc->packages.size();
  s["classes"] = pc->classes.size();
  s["methods"] = methods;
  s["callgraph_edges"] = edges;
  s["skipped_files"] = fresh.size();
  return s;
}

Summary cmd_repr(const RunConfig& cfg, const std::vector<Repr>& types, const PathConfig& paths) {
  if (types.empty()) throw Error(ErrorKind::InvalidArgument, "no representation types requested");
  const Catalog cat = load_catalog(cfg.ws);
  const std::vector<SourceFile> files = load_sources(corpus_root(cfg), cat);
  const std::size_t n = write_representations(cfg.ws, cat, files, types, paths);
  Summary m;
  m["types"] = Summary::array();
  for (Repr r : types) m["types"].push_back(std::string(to_string(r)));
  m["paths"] = path_config_json(paths);
  write_manifest(cfg.ws, "repr", m);

  Summary s;
  s["command"] = "repr";
  s["types"] = m["types"];
  s["methods"] = n;
  return s;
}

Summary cmd_metrics(const RunConfig& cfg) {
  const Catalog cat = load_catalog(cfg.ws);
  const std::vector<SourceFile> files = load_sources(corpus_root(cfg), cat);
  write_metric_tables(cfg.ws, cat, files);
  Summary s;
  s["command"] = "metrics";
  s["methods"] = cat.methods().size();
  s["keys"] = metric_codes();
  return s;
}

Summary cmd_callgraph(const RunConfig& cfg, const CallGraphOptions& opts) {
  const Catalog cat = load_catalog(cfg.ws);
  const std::vector<SourceFile> files = load_sources(corpus_root(cfg), cat);
  const CallGraph g = write_callgraph_tables(cfg.ws, cat, files, opts);
  Summary m;
  m["include_constructors"] = opts.include_constructors;
  write_manifest(cfg.ws, "callgraph", m);

  const auto counts = call_type_counts(g);
  Summary s;
  s["command"] = "callgraph";
  s["edges"] = g.edges().size();
  for (CallType t : kCallTypes) s[std::string(to_string(t))] = counts[static_cast<std::size_t>(t)];
  return s;
}

Summary cmd_props_import(const RunConfig& cfg, const std::string& key, ValueType type,
                         const fs::path& file) {
  const Catalog cat = load_catalog(cfg.ws);
  for (const PropertyKeyInfo& k : builtin_keys()) {
    if (k.code == key && k.computed) {
      throw Error(ErrorKind::InvalidArgument, key + " is computed by srcwb and cannot be imported");
    }
  }
  if (!fs::exists(file)) throw Error(ErrorKind::NotFound, "property file " + file.string() + " not found");
  PropertyStore store(cat);
  const AddResult r = store.import_csv(key, type, file);
  store.write_table(key, cfg.ws.properties());
  Summary m = read_manifest(cfg.ws, "props-import").value_or(Summary::object());
  m[key] = std::string(to_string(store.key(key)->type));
  write_manifest(cfg.ws, "props-import", m);

  Summary s;
  s["command"] = "props-import";
  s["key"] = key;
  s["stored"] = r.stored;
  s["rejected"] = r.rejected.size();
  return s;
}

Summary cmd_taskgen(const RunConfig& cfg, const TaskgenArgs& args) {
  const Catalog cat = load_catalog(cfg.ws);
  TaskDataset ds;
  std::string name = args.name;
  if (args.task == "property") {
    if (args.key.empty()) throw Error(ErrorKind::InvalidArgument, "property task needs --key");
    PropertyStore store(cat);
    load_property(cfg.ws, store, args.key);
    PropertyTaskOptions opts;
    opts.key = args.key;
    for (const std::string& f : args.filters) {
      opts.filters.push_back(PropertyFilter::parse(f));
      if (!store.has_table(opts.filters.back().key)) load_property(cfg.ws, store, opts.filters.back().key);
    }
    opts.balance = args.balance;
    opts.fracs = args.fracs;
    opts.seed = cfg.seed;
    ds = make_property_task(cat, store, read_representation(cfg.ws, args.payload), opts);
    if (name.empty()) name = "property-" + args.key;
  } else if (args.task == "call-mask") {
    require_artifact(cfg.ws.callgraph_file(), "callgraph");
    const CallGraph g = read_callgraph(cfg.ws.callgraph_file());
    const std::vector<SourceFile> files = load_sources(corpus_root(cfg), cat);
    MaskingOptions opts;
    opts.seed = cfg.seed;
    opts.fracs = args.fracs;
    opts.include_constructors = args.include_constructors;
    opts.context_hops = args.context_hops;
    opts.exclude_label = args.exclude_label;
    ds = make_call_masking_task(cat, files, g, opts);
    if (name.empty()) name = args.context_hops > 0 ? "call-mask-ctx" + std::to_string(args.context_hops) : "call-mask";
  } else if (args.task == "arg-swap") {
    const std::vector<SourceFile> files = load_sources(corpus_root(cfg), cat);
    MutationOptions opts;
    opts.p_mutate = args.p_mutate;
    opts.seed = cfg.seed;
    opts.fracs = args.fracs;
    ds = make_mutation_task(cat, files, opts);
    if (name.empty()) name = "arg-swap";
  } else {
    throw Error(ErrorKind::InvalidArgument,
                "unknown task '" + args.task + "'; expected property, call-mask or arg-swap");
  }

  const fs::path dir = cfg.ws.tasks();
  write_dataset(ds, dir / (name + ".csv"));
  write_sites(ds, dir / (name + ".sites.csv"));

  Summary s;
  s["command"] = "taskgen";
  s["task"] = ds.spec;
  s["dataset"] = name;
  s["samples"] = ds.samples.size();
  for (Split sp : {Split::Train, Split::Valid, Split::Test}) {
    s[std::string(to_string(sp))] = ds.split_indices(sp).size();
  }
  s["split_violations"] = split_violations(ds, cat).size();

  Summary evals = Summary::object();
  for (const std::string& b : args.baselines) {
    std::map<std::string, std::string> preds;
    if (b == "most-frequent") {
      preds = most_frequent_name_baseline(ds);
    } else if (b == "unigram") {
      preds = unigram_context_baseline(ds);
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown baseline '" + b + "'; expected most-frequent or unigram");
    }
    write_predictions(preds, dir / (name + ".pred." + b + ".csv"));
    const EvalReport r = evaluate_exact_match(ds, preds);
    write_eval(r, dir / (name + ".eval." + b + ".csv"));
    evals[b] = eval_json(r);
  }
  if (!args.predictions.empty()) {
    if (!fs::exists(args.predictions)) {
      throw Error(ErrorKind::NotFound, "predictions file " + args.predictions.string() + " not found");
    }
    const EvalReport r = evaluate_exact_match(ds, read_predictions(args.predictions));
    write_eval(r, dir / (name + ".eval.external.csv"));
    evals["external"] = eval_json(r);
  }
  if (!evals.empty()) s["evaluation"] = evals;

  Summary m;
  m["task"] = ds.spec;
  m["seed"] = cfg.seed;
  m["fractions"] = {args.fracs.train, args.fracs.valid, args.fracs.test};
  if (args.task == "property") {
    m["key"] = args.key;
    m["filters"] = args.filters;
    m["balance"] = args.balance;
    m["payload"] = std::string(to_string(args.payload));
  } else if (args.task == "call-mask") {
    m["context_hops"] = args.context_hops;
    m["include_constructors"] = args.include_constructors;
    m["exclude_label"] = args.exclude_label;
  } else {
    m["p_mutate"] = args.p_mutate;
  }
  write_manifest(cfg.ws, "taskgen-" + name, m);
  return s;
}

Summary cmd_tokenstats(const RunConfig& cfg, const TokenstatsArgs& args) {
  const Catalog cat = load_catalog(cfg.ws);
  const std::vector<SourceFile> files = load_sources(corpus_root(cfg), cat);
  const fs::path english = args.english.empty() ? fs::path(SRCWB_DATA_DIR) / "english.txt" : args.english;
  if (!fs::exists(english)) throw Error(ErrorKind::NotFound, "English corpus " + english.string() + " not found");

  std::vector<const MethodSource*> methods;
  const auto index = index_methods(files);
  for (const MethodMeta& m : cat.methods()) methods.push_back(index.at(m.method_id));

  // The code vocabulary learns from method texts, the unit it is measured on.
  std::vector<std::string> code_docs, english_docs;
  for (const MethodSource* m : methods) code_docs.push_back(m->text);
  {
    std::istringstream in(csv::read_text(english));
    std::string para, line;
    while (std::getline(in, line)) {
      if (line.empty()) {
        if (!para.empty()) english_docs.push_back(para);
        para.clear();
      } else {
        para += line + "\n";
      }
    }
    if (!para.empty()) english_docs.push_back(para);
  }
  std::vector<std::string> mixed_docs = code_docs;
  mixed_docs.insert(mixed_docs.end(), english_docs.begin(), english_docs.end());

  const fs::path dir = cfg.ws.tokenstats();
  std::vector<std::pair<std::string, BpeVocab>> vocabs = {
      {"bpe-code", train_bpe(code_docs, args.vocab_size, "code")},
      {"bpe-english", train_bpe(english_docs, args.vocab_size, "english")},
      {"bpe-mixed", train_bpe(mixed_docs, args.vocab_size, "mixed")}};
  std::vector<NamedTokenizer> tokenizers = {lexer_tokenizer()};
  for (const auto& [tag, v] : vocabs) {
    write_vocab(v, dir / ("vocab-" + tag + ".txt"));
    tokenizers.push_back(bpe_tokenizer(tag, v));
  }

  std::vector<csv::Row> ratio_rows;
  Summary ratios = Summary::object();
  for (const NamedTokenizer& t : tokenizers) {
    std::size_t size = 0;
    for (const auto& [tag, v] : vocabs) {
      if (tag == t.tag) size = v.size();
    }
    const double mean = tokenizer_ratio(t, methods, false);
    const double pooled = tokenizer_ratio(t, methods, true);
    ratio_rows.push_back({t.tag, std::to_string(size), "mean", fixed(mean, 4), std::to_string(methods.size())});
    ratio_rows.push_back({t.tag, std::to_string(size), "pooled", fixed(pooled, 4), std::to_string(methods.size())});
    ratios[t.tag] = std::stod(fixed(mean, 4));
  }
  csv::write_file(dir / "ratios.csv", {"tokenizer_tag", "vocab_size", "mode", "ratio", "methods"},
                  ratio_rows);

  const std::vector<SizeRow> sizes = compute_sizes(cat, files, tokenizers);
  write_sizes(sizes, dir / "sizes.csv");
  const std::vector<FitRow> fit = window_fit(cat, sizes, args.thresholds, args.buckets);
  write_fit(fit, dir / "fit.csv");

  Summary m;
  m["seed"] = cfg.seed;
  m["vocab_size"] = args.vocab_size;
  m["english"] = english.filename().string();
  m["thresholds"] = args.thresholds;
  m["buckets"] = args.buckets;
  write_manifest(cfg.ws, "tokenstats", m);

  Summary s;
  s["command"] = "tokenstats";
  s["methods"] = methods.size();
  Summary sizes_json = Summary::object();
  for (const auto& [tag, v] : vocabs) sizes_json[tag] = v.size();
  s["vocab_sizes"] = sizes_json;
  s["ratios"] = ratios;
  s["fit_rows"] = fit.size();
  return s;
}

Summary cmd_report(const RunConfig& cfg, const std::string& study, std::size_t bins) {
  const fs::path dir = cfg.ws.reports();
  Summary s;
  s["command"] = "report";
  s["study"] = study;
  if (study == "calls") {
    require_artifact(cfg.ws.callgraph_file(), "callgraph");
    const CallGraph g = read_callgraph(cfg.ws.callgraph_file());
    const auto counts = call_type_counts(g);
    const auto dist = classify_distribution(g);
    std::vector<csv::Row> rows;
    std::string text = "call type   edges   percent\n";
    for (CallType t : kCallTypes) {
      const auto i = static_cast<std::size_t>(t);
      rows.push_back({std::string(to_string(t)), std::to_string(counts[i]), fixed(dist[i])});
      char line[96];
      std::snprintf(line, sizeof line, "%-10s %6zu %8.2f%%\n", std::string(to_string(t)).c_str(),
                    counts[i], 100.0 * dist[i]);
      text += line;
      s[std::string(to_string(t))] = counts[i];
    }
    text += "total      " + std::to_string(g.edges().size()) + "\n";
    csv::write_file(dir / "calls.csv", {"call_type", "edges", "fraction"}, rows);
    csv::write_text(dir / "calls.txt", text);
    s["edges"] = g.edges().size();
  } else if (study == "windows") {
    require_artifact(cfg.ws.tokenstats() / "fit.csv", "tokenstats");
    require_artifact(cfg.ws.tokenstats() / "ratios.csv", "tokenstats");
    const csv::Table fit = csv::read_file(cfg.ws.tokenstats() / "fit.csv", kFitHeader);
    const csv::Table ratios = csv::read_file(cfg.ws.tokenstats() / "ratios.csv");
    std::vector<csv::Row> rows;
    std::string text = "subtokens per 100 lexical tokens\n";
    for (const auto& r : ratios.rows) {
      if (r[2] == "mean") text += "  " + r[0] + ": " + r[3] + "\n";
    }
    text += "\ngranularity tokenizer    bucket threshold  fit%\n";
    for (const auto& r : fit.rows) {
      const double pct = 100.0 * std::stod(r[6]);
      rows.push_back({r[0], r[1], r[2], r[3], fixed(pct, 2)});
      char line[160];
      std::snprintf(line, sizeof line, "%-11s %-12s %-6s %9s %6.2f\n", r[0].c_str(), r[1].c_str(),
                    r[2].c_str(), r[3].c_str(), pct);
      text += line;
    }
    csv::write_file(dir / "windows.csv", {"granularity", "tokenizer_tag", "size_bucket", "threshold", "fit_percent"}, rows);
    csv::write_text(dir / "windows.txt", text);
    s["rows"] = rows.size();
  } else if (study == "bias") {
    const Catalog cat = load_catalog(cfg.ws);
    PropertyStore store(cat);
    load_property(cfg.ws, store, "SLOC");
    load_property(cfg.ws, store, "CMPX");
    const CorrelationTable t = property_correlation_report(store.table("SLOC"), store.table("CMPX"), bins);
    std::vector<csv::Row> rows;
    std::string text = "methods per SLOC bin (rows) and CMPX bin (columns)\n";
    for (std::size_t x = 0; x < t.x_bins; ++x) {
      const std::int64_t xlo = t.x_lo + static_cast<std::int64_t>(x) * t.x_width;
      text += "SLOC " + std::to_string(xlo) + "-" + std::to_string(xlo + t.x_width - 1) + ":";
      for (std::size_t y = 0; y < t.y_bins; ++y) {
        const std::int64_t ylo = t.y_lo + static_cast<std::int64_t>(y) * t.y_width;
        rows.push_back({std::to_string(xlo), std::to_string(xlo + t.x_width - 1), std::to_string(ylo),
                        std::to_string(ylo + t.y_width - 1), std::to_string(t.counts[x][y])});
        text += " " + std::to_string(t.counts[x][y]);
      }
      text += "\n";
    }
    csv::write_file(dir / "bias.csv", {"sloc_lo", "sloc_hi", "cmpx_lo", "cmpx_hi", "methods"}, rows);
    csv::write_text(dir / "bias.txt", text);
    s["methods"] = t.total();
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown study '" + study + "'; expected calls, windows or bias");
  }
  return s;
}

}  // namespace srcwb
