#include "srcwb/taskgen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "srcwb/csv.hpp"
#include "srcwb/error.hpp"
#include "srcwb/representations.hpp"
#include "srcwb/rng.hpp"

namespace srcwb {

const std::vector<std::string> kDatasetHeader = {"sample_id", "method_id", "split", "stratum",
                                                 "size_bucket", "label", "payload"};
const std::vector<std::string> kSitesHeader = {"sample_id", "mask_offset", "masked_callee",
                                               "site_line", "site_col",    "arg_a",
                                               "arg_b"};
const std::vector<std::string> kPredictionsHeader = {"sample_id", "prediction"};

std::string_view to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Valid: return "valid";
    case Split::Test: return "test";
  }
  return "train";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::Train;
  if (text == "valid") return Split::Valid;
  if (text == "test") return Split::Test;
  throw Error(ErrorKind::InvalidArgument, "unknown split '" + std::string(text) + "'");
}

void SplitFractions::validate() const {
  for (double f : {train, valid, test}) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "split fractions must lie in [0,1]");
    }
  }
  if (std::abs(train + valid + test - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidArgument, "split fractions must sum to 1");
  }
}

std::vector<std::size_t> TaskDataset::split_indices(Split s) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].split == s) out.push_back(i);
  }
  return out;
}

std::map<EntityId, Split> assign_project_splits(const std::map<EntityId, std::size_t>& samples_per_project,
                                                const SplitFractions& fracs, std::uint64_t seed) {
  fracs.validate();
  std::vector<EntityId> order;
  std::size_t total = 0;
  for (const auto& [id, n] : samples_per_project) {
    order.push_back(id);
    total += n;
  }
  Rng rng(seed);
  rng.shuffle(order);
  const std::array<double, 3> target = {fracs.train * static_cast<double>(total),
                                        fracs.valid * static_cast<double>(total),
                                        fracs.test * static_cast<double>(total)};
  const std::array<double, 3> share = {fracs.train, fracs.valid, fracs.test};
  std::array<double, 3> assigned{};
  std::map<EntityId, Split> out;
  for (const EntityId& id : order) {
    int best = -1;
    for (int s = 0; s < 3; ++s) {
      if (share[static_cast<std::size_t>(s)] <= 0.0) continue;
      const double deficit = target[static_cast<std::size_t>(s)] - assigned[static_cast<std::size_t>(s)];
      if (best < 0 || deficit > target[static_cast<std::size_t>(best)] - assigned[static_cast<std::size_t>(best)]) {
        best = s;
      }
    }
    assigned[static_cast<std::size_t>(best)] += static_cast<double>(samples_per_project.at(id));
    out[id] = static_cast<Split>(best);
  }
  return out;
}

std::vector<EntityId> split_violations(const TaskDataset& ds, const Catalog& catalog) {
  std::map<EntityId, std::set<Split>> seen;
  for (const TaskSample& s : ds.samples) {
    const MethodMeta* m = catalog.find_method(s.method_id);
    if (!m) throw Error(ErrorKind::NotFound, "sample method " + s.method_id.hex() + " not cataloged");
    seen[m->project_id].insert(s.split);
  }
  std::vector<EntityId> out;
  for (const auto& [project, splits] : seen) {
    if (splits.size() > 1) out.push_back(project);
  }
  return out;
}

namespace {

// Splits and buckets for samples already holding their method ids.
void finish_dataset(TaskDataset& ds, const Catalog& catalog, const SplitFractions& fracs) {
  std::map<EntityId, std::size_t> per_project;
  for (const TaskSample& s : ds.samples) ++per_project[catalog.find_method(s.method_id)->project_id];
  const auto splits = assign_project_splits(per_project, fracs, ds.seed);
  for (TaskSample& s : ds.samples) {
    const EntityId& project = catalog.find_method(s.method_id)->project_id;
    s.split = splits.at(project);
    s.size_bucket = size_bucket(catalog.class_count(project));
    s.sample_id = s.method_id.hex();
  }
}

std::map<EntityId, const MethodSource*> index_methods(const std::vector<SourceFile>& files) {
  std::map<EntityId, const MethodSource*> out;
  for (const SourceFile& f : files) {
    for (const MethodSource& m : f.methods) out[m.method_id] = &m;
  }
  return out;
}

int token_at(const MethodSource& m, int line, int col) {
  for (std::size_t i = 0; i < m.tokens.size(); ++i) {
    if (m.tokens[i].line == line && m.tokens[i].col == col) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

// ---- property tasks --------------------------------------------------------------

PropertyFilter PropertyFilter::parse(std::string_view text) {
  for (std::string_view op : {">=", "<=", "==", "!=", ">", "<"}) {
    const auto pos = text.find(op);
    if (pos == std::string_view::npos) continue;
    PropertyFilter f{std::string(text.substr(0, pos)), std::string(op),
                     std::string(text.substr(pos + op.size()))};
    if (!valid_key_code(f.key) || f.value.empty()) break;
    return f;
  }
  throw Error(ErrorKind::InvalidArgument, "malformed filter '" + std::string(text) + "'");
}

bool PropertyFilter::accepts(const PropertyStore& store, const EntityId& method) const {
  const PropertyKeyInfo* info = store.key(key);
  if (!info || !store.has_table(key)) {
    throw Error(ErrorKind::NotFound, "filter key " + key + " has no values");
  }
  const auto& table = store.table(key);
  auto it = table.find(method);
  if (it == table.end()) return false;
  if (info->type == ValueType::Integer) {
    const auto lhs = std::get<std::int64_t>(it->second);
    const auto rhs = std::get<std::int64_t>(parse_value(ValueType::Integer, value));
    if (op == ">=") return lhs >= rhs;
    if (op == "<=") return lhs <= rhs;
    if (op == ">") return lhs > rhs;
    if (op == "<") return lhs < rhs;
    if (op == "==") return lhs == rhs;
    return lhs != rhs;
  }
  if (op != "==" && op != "!=") {
    throw Error(ErrorKind::InvalidArgument, "key " + key + " only supports == and !=");
  }
  const bool equal = it->second == parse_value(info->type, value);
  return op == "==" ? equal : !equal;
}

TaskDataset make_property_task(const Catalog& catalog, const PropertyStore& store,
                               const std::map<EntityId, std::string>& payloads,
                               const PropertyTaskOptions& opts) {
  opts.fracs.validate();
  if (!store.has_table(opts.key)) {
    throw Error(ErrorKind::NotFound, "property " + opts.key + " has not been computed");
  }
  const auto& values = store.table(opts.key);
  TaskDataset ds;
  ds.spec = "property:" + opts.key;
  ds.seed = opts.seed;
  for (const MethodMeta& m : catalog.methods()) {
    auto v = values.find(m.method_id);
    auto p = payloads.find(m.method_id);
    if (v == values.end() || p == payloads.end()) continue;
    if (!std::all_of(opts.filters.begin(), opts.filters.end(),
                     [&](const PropertyFilter& f) { return f.accepts(store, m.method_id); })) {
      continue;
    }
    TaskSample s;
    s.method_id = m.method_id;
    s.label = render_value(v->second);
    s.payload = p->second;
    ds.samples.push_back(std::move(s));
  }
  if (ds.samples.empty()) {
    throw Error(ErrorKind::EmptyTask, "no method satisfies the property task filters");
  }
  if (opts.balance) {
    std::map<std::string, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < ds.samples.size(); ++i) by_label[ds.samples[i].label].push_back(i);
    std::size_t keep = SIZE_MAX;
    for (const auto& [label, idx] : by_label) keep = std::min(keep, idx.size());
    Rng rng(opts.seed);
    std::vector<std::size_t> kept;
    for (const auto& [label, idx] : by_label) {
      for (std::size_t k : rng.sample_indices(idx.size(), keep)) kept.push_back(idx[k]);
    }
    std::sort(kept.begin(), kept.end());
    std::vector<TaskSample> balanced;
    for (std::size_t i : kept) balanced.push_back(std::move(ds.samples[i]));
    ds.samples = std::move(balanced);
  }
  finish_dataset(ds, catalog, opts.fracs);
  return ds;
}

// ---- call masking ----------------------------------------------------------------

TaskDataset make_call_masking_task(const Catalog& catalog, const std::vector<SourceFile>& files,
                                   const CallGraph& g, const MaskingOptions& opts) {
  opts.fracs.validate();
  if (opts.context_hops < 0) throw Error(ErrorKind::InvalidArgument, "context hops must be non-negative");
  const auto methods = index_methods(files);
  TaskDataset ds;
  ds.spec = "call-mask";
  ds.seed = opts.seed;
  Rng rng(opts.seed);
  for (const MethodMeta& meta : catalog.methods()) {
    auto mit = methods.find(meta.method_id);
    if (mit == methods.end()) continue;
    const MethodSource& m = *mit->second;
    std::vector<std::pair<std::size_t, int>> eligible;  // edge index, token index
    for (std::size_t e : g.outgoing(m.method_id)) {
      const CallEdge& edge = g.edges()[e];
      if (edge.is_constructor() && !opts.include_constructors) continue;
      const int tok = token_at(m, edge.line, edge.col);
      if (tok < 0) continue;
      const Token& t = m.tokens[static_cast<std::size_t>(tok)];
      if (t.kind != TokenKind::Identifier || t.lexeme != edge.callee_name()) continue;
      eligible.emplace_back(e, tok);
    }
    if (eligible.empty()) continue;
    const auto [edge_index, tok] = eligible[static_cast<std::size_t>(rng.below(eligible.size()))];
    const CallEdge& edge = g.edges()[edge_index];

    TaskSample s;
    s.method_id = m.method_id;
    s.stratum = edge.call_type;
    s.label = m.tokens[static_cast<std::size_t>(tok)].lexeme;
    s.masked_callee = edge.callee;
    s.site_line = edge.line;
    s.site_col = edge.col;
    std::vector<Token> masked = m.tokens;
    masked[static_cast<std::size_t>(tok)].lexeme = std::string(kMaskToken);
    std::size_t offset = 0;
    for (int i = 0; i < tok; ++i) offset += m.tokens[static_cast<std::size_t>(i)].lexeme.size() + 1;
    s.mask_offset = offset;
    s.payload = tokens_tkna(masked);

    if (opts.context_hops > 0) {
      std::set<EntityId> excluded;
      if (opts.exclude_label && edge.resolved()) {
        bool elsewhere = false;
        for (std::size_t e : g.outgoing(m.method_id)) {
          if (e != edge_index && g.edges()[e].callee == edge.callee) elsewhere = true;
        }
        if (!elsewhere) excluded.insert(edge.callee);
      }
      const ContextBundle bundle =
          n_hop_context(g, catalog, m.method_id, opts.context_hops, Direction::Callees);
      s = augment_with_context(s, bundle, catalog, opts.context_hops, excluded);
    }
    ds.samples.push_back(std::move(s));
  }
  if (ds.samples.empty()) throw Error(ErrorKind::EmptyTask, "no method has a maskable call site");
  finish_dataset(ds, catalog, opts.fracs);
  return ds;
}

TaskSample augment_with_context(const TaskSample& sample, const ContextBundle& bundle,
                                const Catalog& catalog, int hop, const std::set<EntityId>& excluded) {
  if (bundle.center != sample.method_id) {
    throw Error(ErrorKind::InvalidArgument, "context bundle is centered on another method");
  }
  const std::string marker = " " + std::string(kContextToken) + " ";
  if (sample.payload.find(marker) != std::string::npos) {
    throw Error(ErrorKind::InvalidArgument, "sample " + sample.sample_id + " already has context");
  }
  if (hop < 0) throw Error(ErrorKind::InvalidArgument, "hop must be non-negative");
  TaskSample out = sample;
  if (hop == 0 || bundle.hop_sets.empty()) return out;
  const auto& reach = bundle.hop_sets[std::min(static_cast<std::size_t>(hop), bundle.hop_sets.size() - 1)];
  std::set<std::string> names;
  for (const EntityId& id : reach) {
    if (id == bundle.center || excluded.count(id)) continue;
    if (const MethodMeta* m = catalog.find_method(id)) names.insert(m->method_name);
  }
  if (names.empty()) return out;
  out.payload += marker;
  bool first = true;
  for (const std::string& n : names) {
    if (!first) out.payload += ' ';
    out.payload += n;
    first = false;
  }
  return out;
}

std::string unmask(const TaskSample& sample) {
  if (!sample.mask_offset) throw Error(ErrorKind::InvalidArgument, "sample has no mask");
  std::string text = sample.payload;
  const auto ctx = text.rfind(" " + std::string(kContextToken) + " ");
  if (ctx != std::string::npos && ctx > *sample.mask_offset) text.resize(ctx);
  if (text.compare(*sample.mask_offset, kMaskToken.size(), kMaskToken) != 0) {
    throw Error(ErrorKind::InvalidArgument, "mask offset does not point at " + std::string(kMaskToken));
  }
  return text.replace(*sample.mask_offset, kMaskToken.size(), sample.label);
}

// ---- argument swap -------------------------------------------------------------

namespace {

struct SwapSite {
  int call_node;
  std::vector<int> args;  // argument nodes
  std::vector<std::pair<int, int>> pairs;  // positions with different text
};

std::vector<SwapSite> swap_sites(const MethodSource& m) {
  std::vector<SwapSite> out;
  const Ast& ast = m.ast;
  for (int n = 0; n < static_cast<int>(ast.size()); ++n) {
    const auto& type = ast.node(n).type;
    if (type != node::MethodCallExpr && type != node::ObjectCreationExpr) continue;
    auto kids = ast.children(n);
    const int args_node = type == node::MethodCallExpr ? kids.back() : kids[2];
    SwapSite site{n, {}, {}};
    for (int c : ast.children(args_node)) {
      if (ast.node(c).type != terminal_type(TokenKind::Separator)) site.args.push_back(c);
    }
    std::vector<std::string> texts;
    for (int a : site.args) texts.push_back(subtree_text(ast, m.tokens, a));
    for (std::size_t i = 0; i < texts.size(); ++i) {
      for (std::size_t j = i + 1; j < texts.size(); ++j) {
        if (texts[i] != texts[j]) site.pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
    if (!site.pairs.empty()) out.push_back(std::move(site));
  }
  return out;
}

// Token range [first, last] covered by a subtree.
std::pair<int, int> token_span(const Ast& ast, int n) {
  const auto terms = ast.terminals(n);
  return {ast.node(terms.front()).token, ast.node(terms.back()).token};
}

}  // namespace

bool has_swappable_call(const MethodSource& m) { return !swap_sites(m).empty(); }

TaskDataset make_mutation_task(const Catalog& catalog, const std::vector<SourceFile>& files,
                               const MutationOptions& opts) {
  opts.fracs.validate();
  if (!(opts.p_mutate > 0.0 && opts.p_mutate <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "p_mutate must lie in (0,1]");
  }
  const auto methods = index_methods(files);
  TaskDataset ds;
  ds.spec = "arg-swap";
  ds.seed = opts.seed;
  Rng rng(opts.seed);
  for (const MethodMeta& meta : catalog.methods()) {
    auto mit = methods.find(meta.method_id);
    if (mit == methods.end()) continue;
    const MethodSource& m = *mit->second;
    TaskSample s;
    s.method_id = m.method_id;
    s.label = "clean";
    s.payload = tokens_tkna(m.tokens);
    const bool draw = rng.unit() < opts.p_mutate;
    const auto sites = swap_sites(m);
    if (draw && !sites.empty()) {
      const SwapSite& site = sites[static_cast<std::size_t>(rng.below(sites.size()))];
      const auto [a, b] = site.pairs[static_cast<std::size_t>(rng.below(site.pairs.size()))];
      const auto [a0, a1] = token_span(m.ast, site.args[static_cast<std::size_t>(a)]);
      const auto [b0, b1] = token_span(m.ast, site.args[static_cast<std::size_t>(b)]);
      std::vector<Token> out(m.tokens.begin(), m.tokens.begin() + a0);
      out.insert(out.end(), m.tokens.begin() + b0, m.tokens.begin() + b1 + 1);
      out.insert(out.end(), m.tokens.begin() + a1 + 1, m.tokens.begin() + b0);
      out.insert(out.end(), m.tokens.begin() + a0, m.tokens.begin() + a1 + 1);
      out.insert(out.end(), m.tokens.begin() + b1 + 1, m.tokens.end());
      s.payload = tokens_tkna(out);
      s.label = "mutated";
      s.arg_a = a;
      s.arg_b = b;
      const int site_node = call_site_node(m.ast, site.call_node);
      const Token& t = m.tokens[static_cast<std::size_t>(m.ast.node(site_node).token)];
      s.site_line = t.line;
      s.site_col = t.col;
    }
    ds.samples.push_back(std::move(s));
  }
  if (ds.samples.empty()) throw Error(ErrorKind::EmptyTask, "no methods to mutate");
  finish_dataset(ds, catalog, opts.fracs);
  return ds;
}

// ---- evaluation ------------------------------------------------------------------

EvalReport evaluate_exact_match(const TaskDataset& ds,
                                const std::map<std::string, std::string>& predictions, Split split) {
  EvalReport r;
  for (std::size_t i : ds.split_indices(split)) {
    const TaskSample& s = ds.samples[i];
    auto it = predictions.find(s.sample_id);
    const bool correct = it != predictions.end() && it->second == s.label;
    if (it == predictions.end()) r.missing.push_back(s.sample_id);
    for (AccuracyCell* cell : {&r.overall,
                               &r.by_stratum[s.stratum ? std::string(to_string(*s.stratum)) : ""],
                               &r.by_bucket[s.size_bucket]}) {
      ++cell->total;
      if (correct) ++cell->correct;
    }
  }
  return r;
}

namespace {

std::map<std::string, std::size_t> train_label_counts(const TaskDataset& ds) {
  std::map<std::string, std::size_t> counts;
  for (std::size_t i : ds.split_indices(Split::Train)) ++counts[ds.samples[i].label];
  return counts;
}

std::string most_frequent(const std::map<std::string, std::size_t>& counts) {
  std::string best;
  std::size_t best_n = 0;
  for (const auto& [label, n] : counts) {
    if (n > best_n) {
      best = label;
      best_n = n;
    }
  }
  return best;
}

bool is_identifier(const std::string& w) {
  if (w.empty() || !(std::isalpha(static_cast<unsigned char>(w[0])) || w[0] == '_' || w[0] == '$')) {
    return false;
  }
  return std::all_of(w.begin(), w.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '$';
  });
}

}  // namespace

std::map<std::string, std::string> most_frequent_name_baseline(const TaskDataset& ds) {
  const std::string guess = most_frequent(train_label_counts(ds));
  std::map<std::string, std::string> out;
  for (std::size_t i : ds.split_indices(Split::Test)) out[ds.samples[i].sample_id] = guess;
  return out;
}

std::map<std::string, std::string> unigram_context_baseline(const TaskDataset& ds) {
  const auto counts = train_label_counts(ds);
  const std::string fallback = most_frequent(counts);
  std::map<std::string, std::string> out;
  for (std::size_t i : ds.split_indices(Split::Test)) {
    const TaskSample& s = ds.samples[i];
    std::map<std::string, std::size_t> seen;
    std::size_t start = 0;
    while (start <= s.payload.size()) {
      std::size_t end = s.payload.find(' ', start);
      if (end == std::string::npos) end = s.payload.size();
      std::string w = s.payload.substr(start, end - start);
      if (is_identifier(w)) ++seen[w];
      start = end + 1;
    }
    std::string best = fallback;
    std::size_t best_label = 0, best_seen = 0;
    bool any = false;
    for (const auto& [w, n] : seen) {
      auto c = counts.find(w);
      const std::size_t label_n = c == counts.end() ? 0 : c->second;
      if (!any || label_n > best_label || (label_n == best_label && n > best_seen)) {
        best = w;
        best_label = label_n;
        best_seen = n;
        any = true;
      }
    }
    out[s.sample_id] = best;
  }
  return out;
}

// ---- IO --------------------------------------------------------------------------

void write_dataset(const TaskDataset& ds, const std::filesystem::path& file) {
  std::vector<csv::Row> rows;
  for (const TaskSample& s : ds.samples) {
    rows.push_back({s.sample_id, s.method_id.hex(), std::string(to_string(s.split)),
                    s.stratum ? std::string(to_string(*s.stratum)) : std::string{},
                    std::string(1, s.size_bucket), s.label, s.payload});
  }
  csv::write_file(file, kDatasetHeader, rows);
}

void write_sites(const TaskDataset& ds, const std::filesystem::path& file) {
  std::vector<csv::Row> rows;
  for (const TaskSample& s : ds.samples) {
    rows.push_back({s.sample_id, s.mask_offset ? std::to_string(*s.mask_offset) : std::string{},
                    s.masked_callee.hex(), std::to_string(s.site_line), std::to_string(s.site_col),
                    std::to_string(s.arg_a), std::to_string(s.arg_b)});
  }
  csv::write_file(file, kSitesHeader, rows);
}

TaskDataset read_dataset(const std::filesystem::path& file) {
  const csv::Table t = csv::read_file(file, kDatasetHeader);
  TaskDataset ds;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    try {
      TaskSample s;
      s.sample_id = row[0];
      s.method_id = EntityId::from_hex(row[1]);
      s.split = parse_split(row[2]);
      if (!row[3].empty()) s.stratum = parse_call_type(row[3]);
      if (row[4].size() != 1 || row[4][0] < 'A' || row[4][0] > 'D') {
        throw Error(ErrorKind::InvalidArgument, "bad size bucket '" + row[4] + "'");
      }
      s.size_bucket = row[4][0];
      if (row[5].empty()) throw Error(ErrorKind::InvalidArgument, "empty label");
      s.label = row[5];
      s.payload = row[6];
      ds.samples.push_back(std::move(s));
    } catch (const Error& e) {
      throw PositionedError(ErrorKind::Parse, t.row_lines[r], 1, e.what());
    }
  }
  return ds;
}

void read_sites(TaskDataset& ds, const std::filesystem::path& file) {
  const csv::Table t = csv::read_file(file, kSitesHeader);
  std::map<std::string, const csv::Row*> by_id;
  for (const auto& row : t.rows) by_id[row[0]] = &row;
  for (TaskSample& s : ds.samples) {
    auto it = by_id.find(s.sample_id);
    if (it == by_id.end()) throw Error(ErrorKind::NotFound, "no site row for " + s.sample_id);
    const auto& row = *it->second;
    if (!row[1].empty()) s.mask_offset = std::stoull(row[1]);
    if (!row[2].empty()) s.masked_callee = EntityId::from_hex(row[2]);
    s.site_line = std::stoi(row[3]);
    s.site_col = std::stoi(row[4]);
    s.arg_a = std::stoi(row[5]);
    s.arg_b = std::stoi(row[6]);
  }
}

void write_predictions(const std::map<std::string, std::string>& predictions,
                       const std::filesystem::path& file) {
  std::vector<csv::Row> rows;
  for (const auto& [id, p] : predictions) rows.push_back({id, p});
  csv::write_file(file, kPredictionsHeader, rows);
}

std::map<std::string, std::string> read_predictions(const std::filesystem::path& file) {
  const csv::Table t = csv::read_file(file, kPredictionsHeader);
  std::map<std::string, std::string> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (!out.emplace(t.rows[r][0], t.rows[r][1]).second) {
      throw PositionedError(ErrorKind::Duplicate, t.row_lines[r], 1,
                            "duplicate prediction for " + t.rows[r][0]);
    }
  }
  return out;
}

}  // namespace srcwb
