#include "srcwb/tokenstats.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>

#include "srcwb/csv.hpp"
#include "srcwb/error.hpp"
#include "srcwb/lexer.hpp"

namespace srcwb {

const std::vector<std::string> kSizesHeader = {"entity_id", "granularity", "tokenizer_tag",
                                               "subtoken_count"};
const std::vector<std::string> kFitHeader = {"granularity", "tokenizer_tag", "size_bucket",
                                             "threshold",   "entities",      "fitting",
                                             "fit_fraction"};

// ---- pre-tokenization ----------------------------------------------------------

std::vector<std::string_view> pretokenize(std::string_view text) {
  std::vector<std::string_view> out;
  const std::size_t n = text.size();
  auto space = [&](std::size_t k) { return std::isspace(static_cast<unsigned char>(text[k])) != 0; };
  std::size_t i = 0;
  while (i < n) {
    const std::size_t start = i;
    while (i < n && space(i)) ++i;
    while (i < n && !space(i)) ++i;
    out.push_back(text.substr(start, i - start));
  }
  return out;
}

// ---- training ------------------------------------------------------------------

BpeVocab train_bpe(const std::vector<std::string>& documents, std::size_t vocab_size,
                   std::string corpus_tag) {
  if (vocab_size <= 256) throw Error(ErrorKind::InvalidArgument, "vocab size must exceed 256");
  std::map<std::string, std::int64_t> piece_counts;
  for (const std::string& d : documents) {
    for (std::string_view p : pretokenize(d)) ++piece_counts[std::string(p)];
  }
  if (piece_counts.empty()) throw Error(ErrorKind::InvalidArgument, "training corpus is empty");

  std::vector<std::string> text(256);
  for (int b = 0; b < 256; ++b) text[static_cast<std::size_t>(b)] = std::string(1, static_cast<char>(b));

  struct Word {
    std::vector<int> syms;
    std::int64_t count;
  };
  using Pair = std::pair<int, int>;
  std::vector<Word> words;
  std::map<Pair, std::int64_t> pair_count;
  std::map<Pair, std::set<std::size_t>> where;
  for (const auto& [piece, count] : piece_counts) {
    Word w{{}, count};
    for (unsigned char c : piece) w.syms.push_back(c);
    words.push_back(std::move(w));
  }
  auto add_pairs = [&](std::size_t wi, int sign) {
    const Word& w = words[wi];
    for (std::size_t k = 0; k + 1 < w.syms.size(); ++k) {
      const Pair p{w.syms[k], w.syms[k + 1]};
      pair_count[p] += sign * w.count;
      if (sign > 0) {
        where[p].insert(wi);
      } else {
        where[p].erase(wi);
      }
    }
  };
  for (std::size_t wi = 0; wi < words.size(); ++wi) add_pairs(wi, +1);

  BpeVocab v;
  v.corpus_tag = std::move(corpus_tag);
  while (v.size() < vocab_size) {
    const Pair* best = nullptr;
    std::int64_t best_count = 0;
    for (auto it = pair_count.begin(); it != pair_count.end(); ++it) {
      const std::int64_t c = it->second;
      if (c < best_count || c < 2) continue;
      if (c > best_count || std::tie(text[static_cast<std::size_t>(it->first.first)],
                                     text[static_cast<std::size_t>(it->first.second)]) <
                                std::tie(text[static_cast<std::size_t>(best->first)],
                                         text[static_cast<std::size_t>(best->second)])) {
        best = &it->first;
        best_count = c;
      }
    }
    if (!best) break;
    const Pair merge = *best;
    const int merged = static_cast<int>(text.size());
    text.push_back(text[static_cast<std::size_t>(merge.first)] + text[static_cast<std::size_t>(merge.second)]);
    v.merges.emplace_back(text[static_cast<std::size_t>(merge.first)],
                          text[static_cast<std::size_t>(merge.second)]);
    const std::set<std::size_t> affected = where[merge];
    for (std::size_t wi : affected) {
      add_pairs(wi, -1);
      std::vector<int>& s = words[wi].syms;
      std::vector<int> next;
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (k + 1 < s.size() && s[k] == merge.first && s[k + 1] == merge.second) {
          next.push_back(merged);
          ++k;
        } else {
          next.push_back(s[k]);
        }
      }
      s = std::move(next);
      add_pairs(wi, +1);
    }
    for (auto it = pair_count.begin(); it != pair_count.end();) {
      it = it->second == 0 ? pair_count.erase(it) : std::next(it);
    }
  }
  return v;
}

// ---- encoding ------------------------------------------------------------------

BpeEncoder::BpeEncoder(BpeVocab vocab) : vocab_(std::move(vocab)) {
  for (std::size_t i = 0; i < vocab_.merges.size(); ++i) ranks_.emplace(vocab_.merges[i], i);
}

const std::vector<std::string>& BpeEncoder::encode_piece(std::string_view piece) const {
  auto [it, fresh] = cache_.try_emplace(std::string(piece));
  if (!fresh) return it->second;
  std::vector<std::string>& syms = it->second;
  for (char c : piece) syms.emplace_back(1, c);
  while (syms.size() > 1) {
    std::size_t best_rank = SIZE_MAX;
    for (std::size_t k = 0; k + 1 < syms.size(); ++k) {
      auto r = ranks_.find({syms[k], syms[k + 1]});
      if (r != ranks_.end()) best_rank = std::min(best_rank, r->second);
    }
    if (best_rank == SIZE_MAX) break;
    const auto& [left, right] = vocab_.merges[best_rank];
    std::vector<std::string> next;
    for (std::size_t k = 0; k < syms.size(); ++k) {
      if (k + 1 < syms.size() && syms[k] == left && syms[k + 1] == right) {
        next.push_back(left + right);
        ++k;
      } else {
        next.push_back(std::move(syms[k]));
      }
    }
    syms = std::move(next);
  }
  return syms;
}

std::vector<std::string> BpeEncoder::encode(std::string_view text) const {
  std::vector<std::string> out;
  for (std::string_view p : pretokenize(text)) {
    const auto& syms = encode_piece(p);
    out.insert(out.end(), syms.begin(), syms.end());
  }
  return out;
}

std::size_t BpeEncoder::count(std::string_view text) const {
  std::size_t n = 0;
  for (std::string_view p : pretokenize(text)) n += encode_piece(p).size();
  return n;
}

std::vector<std::string> bpe_encode(const BpeVocab& v, std::string_view text) {
  return BpeEncoder(v).encode(text);
}

std::string bpe_decode(const std::vector<std::string>& symbols) {
  std::string out;
  for (const std::string& s : symbols) out += s;
  return out;
}

// ---- vocab files -----------------------------------------------------------------

namespace {

std::string utf8(std::uint32_t cp) {
  std::string s;
  if (cp < 0x80) {
    s.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    s.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    s.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    s.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    s.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    s.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return s;
}

std::string to_printable(const std::string& raw) {
  std::string s;
  for (unsigned char c : raw) s += byte_to_unicode()[c];
  return s;
}

std::string from_printable(std::string_view text, int line) {
  static const std::map<std::string, char> inverse = [] {
    std::map<std::string, char> m;
    for (int b = 0; b < 256; ++b) m[byte_to_unicode()[static_cast<std::size_t>(b)]] = static_cast<char>(b);
    return m;
  }();
  std::string raw;
  std::size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    const std::size_t len = c < 0x80 ? 1 : c < 0xE0 ? 2 : 3;
    auto it = inverse.find(std::string(text.substr(i, len)));
    if (it == inverse.end()) throw PositionedError(ErrorKind::Parse, line, static_cast<int>(i) + 1, "unknown vocab symbol");
    raw.push_back(it->second);
    i += len;
  }
  return raw;
}

}  // namespace

const std::array<std::string, 256>& byte_to_unicode() {
  static const std::array<std::string, 256> table = [] {
    std::array<std::string, 256> t;
    std::uint32_t extra = 0;
    for (std::uint32_t b = 0; b < 256; ++b) {
      const bool printable = (b >= '!' && b <= '~') || (b >= 0xA1 && b <= 0xAC) || (b >= 0xAE);
      t[b] = utf8(printable ? b : 256 + extra++);
    }
    return t;
  }();
  return table;
}

void write_vocab(const BpeVocab& v, const std::filesystem::path& file) {
  std::string text = "#version: 0.2\n";
  if (!v.corpus_tag.empty()) text += "#corpus: " + v.corpus_tag + "\n";
  for (const auto& [l, r] : v.merges) text += to_printable(l) + " " + to_printable(r) + "\n";
  csv::write_text(file, text);
}

BpeVocab read_vocab(const std::filesystem::path& file) {
  const std::string text = csv::read_text(file);
  BpeVocab v;
  std::size_t pos = 0;
  int line = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string_view row(text.data() + pos, end - pos);
    ++line;
    pos = end + 1;
    if (row.empty()) continue;
    if (row.rfind("#corpus: ", 0) == 0) {
      v.corpus_tag = std::string(row.substr(9));
      continue;
    }
    if (row[0] == '#') continue;
    const auto space = row.find(' ');
    if (space == std::string_view::npos || row.find(' ', space + 1) != std::string_view::npos) {
      throw PositionedError(ErrorKind::Parse, line, 1, "merge line must hold two symbols");
    }
    v.merges.emplace_back(from_printable(row.substr(0, space), line),
                          from_printable(row.substr(space + 1), line));
  }
  return v;
}

// ---- tokenizers and ratios -----------------------------------------------------

NamedTokenizer lexer_tokenizer() {
  return {"lexer", [](std::string_view text) -> std::size_t {
            try {
              return lex(text).size();
            } catch (const Error&) {
              return 0;
            }
          }};
}

NamedTokenizer bpe_tokenizer(std::string tag, BpeVocab vocab) {
  auto enc = std::make_shared<BpeEncoder>(std::move(vocab));
  return {std::move(tag), [enc](std::string_view text) { return enc->count(text); }};
}

double tokenizer_ratio(const NamedTokenizer& t, const std::vector<const MethodSource*>& methods,
                       bool pooled) {
  double sum = 0.0;
  std::size_t n = 0, sub_total = 0, lex_total = 0;
  for (const MethodSource* m : methods) {
    if (m->tokens.empty()) continue;
    const std::size_t sub = t.count(m->text);
    sum += 100.0 * static_cast<double>(sub) / static_cast<double>(m->tokens.size());
    sub_total += sub;
    lex_total += m->tokens.size();
    ++n;
  }
  if (n == 0) throw Error(ErrorKind::EmptyDistribution, "no method has lexical tokens");
  return pooled ? 100.0 * static_cast<double>(sub_total) / static_cast<double>(lex_total)
                : sum / static_cast<double>(n);
}

// ---- sizes and window fit --------------------------------------------------------

std::string_view to_string(Granularity g) {
  switch (g) {
    case Granularity::Method: return "method";
    case Granularity::Class: return "class";
    case Granularity::Package: return "package";
    case Granularity::Project: return "project";
  }
  return "method";
}

Granularity parse_granularity(std::string_view text) {
  for (Granularity g : kGranularities) {
    if (to_string(g) == text) return g;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown granularity '" + std::string(text) + "'");
}

std::vector<SizeRow> compute_sizes(const Catalog& catalog, const std::vector<SourceFile>& files,
                                   const std::vector<NamedTokenizer>& tokenizers) {
  std::map<std::string, const SourceFile*> by_path;
  std::map<EntityId, const MethodSource*> methods;
  for (const SourceFile& f : files) {
    by_path[f.relpath] = &f;
    for (const MethodSource& m : f.methods) methods[m.method_id] = &m;
  }
  std::vector<SizeRow> out;
  for (const NamedTokenizer& t : tokenizers) {
    for (const MethodMeta& m : catalog.methods()) {
      auto it = methods.find(m.method_id);
      if (it == methods.end()) throw Error(ErrorKind::MissingArtifact, "no source for method " + m.method_id.hex());
      out.push_back({m.method_id, Granularity::Method, t.tag,
                     static_cast<std::int64_t>(t.count(it->second->text))});
    }
    std::map<std::string, std::int64_t> file_size;
    std::map<EntityId, std::int64_t> package_size, project_size;
    for (const ClassMeta& c : catalog.classes()) {
      auto f = by_path.find(c.class_path);
      if (f == by_path.end()) throw Error(ErrorKind::MissingArtifact, "no source for " + c.class_path);
      auto [fs, fresh] = file_size.try_emplace(c.class_path, 0);
      if (fresh) fs->second = static_cast<std::int64_t>(t.count(f->second->text));
      out.push_back({c.class_id, Granularity::Class, t.tag, fs->second});
      package_size[c.package_id] += fs->second;
      project_size[c.project_id] += fs->second;
    }
    for (const PackageMeta& p : catalog.packages()) {
      out.push_back({p.package_id, Granularity::Package, t.tag, package_size[p.package_id]});
    }
    for (const ProjectMeta& p : catalog.projects()) {
      out.push_back({p.project_id, Granularity::Project, t.tag, project_size[p.project_id]});
    }
  }
  return out;
}

namespace {

EntityId owning_project(const Catalog& catalog, const EntityId& id, Granularity g) {
  switch (g) {
    case Granularity::Method:
      if (const MethodMeta* m = catalog.find_method(id)) return m->project_id;
      break;
    case Granularity::Class:
      if (const ClassMeta* c = catalog.find_class(id)) return c->project_id;
      break;
    case Granularity::Package:
      if (const PackageMeta* p = catalog.find_package(id)) return p->project_id;
      break;
    case Granularity::Project:
      if (catalog.find_project(id)) return id;
      break;
  }
  throw Error(ErrorKind::NotFound, "size row for unknown " + std::string(to_string(g)) + " " + id.hex());
}

}  // namespace

std::vector<FitRow> window_fit(const Catalog& catalog, const std::vector<SizeRow>& sizes,
                               const std::vector<std::int64_t>& thresholds, bool buckets) {
  std::vector<std::string> tags;
  for (const SizeRow& s : sizes) {
    if (std::find(tags.begin(), tags.end(), s.tokenizer) == tags.end()) tags.push_back(s.tokenizer);
  }
  std::vector<char> bucket_keys = {'*'};
  if (buckets) bucket_keys.insert(bucket_keys.end(), {'A', 'B', 'C', 'D'});
  std::map<EntityId, char> project_bucket;
  for (const ProjectMeta& p : catalog.projects()) {
    project_bucket[p.project_id] = size_bucket(catalog.class_count(p.project_id));
  }
  std::vector<FitRow> out;
  for (Granularity g : kGranularities) {
    for (const std::string& tag : tags) {
      std::map<char, std::vector<std::int64_t>> pop;
      for (const SizeRow& s : sizes) {
        if (s.granularity != g || s.tokenizer != tag) continue;
        pop['*'].push_back(s.subtokens);
        if (buckets) pop[project_bucket.at(owning_project(catalog, s.entity, g))].push_back(s.subtokens);
      }
      for (char b : bucket_keys) {
        const auto& values = pop[b];
        if (values.empty()) continue;
        for (std::int64_t tau : thresholds) {
          FitRow r{g, tag, b, tau, values.size(), 0};
          r.fitting = static_cast<std::size_t>(
              std::count_if(values.begin(), values.end(), [tau](std::int64_t v) { return v <= tau; }));
          out.push_back(r);
        }
      }
    }
  }
  return out;
}

void write_sizes(const std::vector<SizeRow>& sizes, const std::filesystem::path& file) {
  std::vector<csv::Row> rows;
  for (const SizeRow& s : sizes) {
    rows.push_back({s.entity.hex(), std::string(to_string(s.granularity)), s.tokenizer,
                    std::to_string(s.subtokens)});
  }
  csv::write_file(file, kSizesHeader, rows);
}

std::vector<SizeRow> read_sizes(const std::filesystem::path& file) {
  const csv::Table t = csv::read_file(file, kSizesHeader);
  std::vector<SizeRow> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    try {
      out.push_back({EntityId::from_hex(row[0]), parse_granularity(row[1]), row[2], std::stoll(row[3])});
    } catch (const std::exception& e) {
      throw PositionedError(ErrorKind::Parse, t.row_lines[r], 1, e.what());
    }
  }
  return out;
}

void write_fit(const std::vector<FitRow>& rows, const std::filesystem::path& file) {
  std::vector<csv::Row> out;
  for (const FitRow& r : rows) {
    char frac[32];
    std::snprintf(frac, sizeof frac, "%.6f", r.fraction());
    out.push_back({std::string(to_string(r.granularity)), r.tokenizer, std::string(1, r.bucket),
                   std::to_string(r.threshold), std::to_string(r.entities),
                   std::to_string(r.fitting), frac});
  }
  csv::write_file(file, kFitHeader, out);
}

}  // namespace srcwb
