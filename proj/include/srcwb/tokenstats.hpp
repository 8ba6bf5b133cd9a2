#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "srcwb/catalog.hpp"

namespace srcwb {

/// Splits text into whitespace-delimited words, each carrying the whitespace
/// run before it as a prefix; trailing whitespace forms its own piece. Merges
/// never cross a piece boundary. Concatenating the pieces gives back the input.
std::vector<std::string_view> pretokenize(std::string_view text);

/// Byte-level BPE vocabulary: the 256 byte symbols plus ordered merges.
struct BpeVocab {
  std::vector<std::pair<std::string, std::string>> merges;  // raw bytes
  std::string corpus_tag;

  std::size_t size() const { return 256 + merges.size(); }
  bool operator==(const BpeVocab&) const = default;
};

/// Merges the most frequent adjacent pair, ties to the lexicographically
/// smallest (left, right), until `vocab_size` symbols exist or no pair occurs
/// twice. Throws InvalidArgument for vocab_size <= 256 and for an empty corpus.
BpeVocab train_bpe(const std::vector<std::string>& documents, std::size_t vocab_size,
                   std::string corpus_tag = {});

/// Encoder with a per-pretoken cache. Not thread-safe.
class BpeEncoder {
 public:
  explicit BpeEncoder(BpeVocab vocab);
  std::vector<std::string> encode(std::string_view text) const;
  std::size_t count(std::string_view text) const;
  const BpeVocab& vocab() const { return vocab_; }

 private:
  const std::vector<std::string>& encode_piece(std::string_view piece) const;

  BpeVocab vocab_;
  std::map<std::pair<std::string, std::string>, std::size_t> ranks_;
  mutable std::unordered_map<std::string, std::vector<std::string>> cache_;
};

std::vector<std::string> bpe_encode(const BpeVocab& v, std::string_view text);
std::string bpe_decode(const std::vector<std::string>& symbols);

/// GPT-2 byte-to-printable-character table, as UTF-8 strings.
const std::array<std::string, 256>& byte_to_unicode();

/// "#version: 0.2" then one "left right" merge per line in byte_to_unicode form.
void write_vocab(const BpeVocab& v, const std::filesystem::path& file);
BpeVocab read_vocab(const std::filesystem::path& file);

/// A tokenizer reduced to what the study needs: symbols per text.
struct NamedTokenizer {
  std::string tag;
  std::function<std::size_t(std::string_view)> count;
};

/// Counts lexical tokens. Unlexable text counts zero.
NamedTokenizer lexer_tokenizer();
NamedTokenizer bpe_tokenizer(std::string tag, BpeVocab vocab);

/// Mean over methods of 100 * subtokens(text) / lexical tokens, or with
/// `pooled` 100 * sum(subtokens) / sum(lexical tokens). Methods without
/// lexical tokens are skipped; throws EmptyDistribution if none remain.
double tokenizer_ratio(const NamedTokenizer& t, const std::vector<const MethodSource*>& methods,
                       bool pooled = false);

enum class Granularity { Method, Class, Package, Project };
std::string_view to_string(Granularity g);
Granularity parse_granularity(std::string_view text);
inline constexpr std::array<Granularity, 4> kGranularities = {
    Granularity::Method, Granularity::Class, Granularity::Package, Granularity::Project};

struct SizeRow {
  EntityId entity;
  Granularity granularity = Granularity::Method;
  std::string tokenizer;
  std::int64_t subtokens = 0;

  bool operator==(const SizeRow&) const = default;
};

/// Method size from the method text, class size from the whole source file,
/// package and project sizes as sums of their class sizes.
std::vector<SizeRow> compute_sizes(const Catalog& catalog, const std::vector<SourceFile>& files,
                                   const std::vector<NamedTokenizer>& tokenizers);

inline constexpr std::array<std::int64_t, 5> kThresholds = {256, 512, 1024, 2048, 4096};

struct FitRow {
  Granularity granularity = Granularity::Method;
  std::string tokenizer;
  char bucket = '*';  // '*' for all projects, else the owning project's size bucket
  std::int64_t threshold = 0;
  std::size_t entities = 0;
  std::size_t fitting = 0;  // entities with size <= threshold

  double fraction() const {
    return entities ? static_cast<double>(fitting) / static_cast<double>(entities) : 0.0;
  }
  bool operator==(const FitRow&) const = default;
};

/// Rows ordered by granularity, tokenizer (first appearance), bucket, threshold.
/// Populations without entities produce no rows.
std::vector<FitRow> window_fit(const Catalog& catalog, const std::vector<SizeRow>& sizes,
                               const std::vector<std::int64_t>& thresholds, bool buckets);

extern const std::vector<std::string> kSizesHeader;
extern const std::vector<std::string> kFitHeader;
void write_sizes(const std::vector<SizeRow>& sizes, const std::filesystem::path& file);
std::vector<SizeRow> read_sizes(const std::filesystem::path& file);
void write_fit(const std::vector<FitRow>& rows, const std::filesystem::path& file);

}  // namespace srcwb
