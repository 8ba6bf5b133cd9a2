#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "srcwb/callgraph.hpp"
#include "srcwb/catalog.hpp"
#include "srcwb/properties.hpp"

namespace srcwb {

enum class Split { Train, Valid, Test };
std::string_view to_string(Split s);
Split parse_split(std::string_view text);

inline constexpr std::string_view kMaskToken = "<MASK>";
inline constexpr std::string_view kContextToken = "<CTX>";

struct SplitFractions {
  double train = 0.8;
  double valid = 0.05;
  double test = 0.15;
  /// Throws InvalidArgument unless every fraction is in [0,1] and they sum to 1.
  void validate() const;
};

struct TaskSample {
  std::string sample_id;  // method id hex; one sample per method per dataset
  EntityId method_id;
  Split split = Split::Train;
  std::optional<CallType> stratum;  // call masking only
  char size_bucket = 'A';
  std::string label;
  std::string payload;

  // Sidecar, not part of the dataset CSV.
  /// Byte offset of <MASK> in the payload.
  std::optional<std::size_t> mask_offset;
  /// Callee of the masked site when it is a corpus method.
  EntityId masked_callee;
  /// Site of the masked or mutated call.
  int site_line = 0;
  int site_col = 0;
  /// Swapped argument positions of a mutated call.
  int arg_a = -1;
  int arg_b = -1;

  bool operator==(const TaskSample&) const = default;
};

struct TaskDataset {
  std::string spec;  // task descriptor, e.g. "property:CMPX"
  std::uint64_t seed = 0;
  std::vector<TaskSample> samples;

  std::vector<std::size_t> split_indices(Split s) const;
};

/// Seeded project order, then each project goes to the split whose sample
/// count is furthest below its target. Every project lands in exactly one split.
std::map<EntityId, Split> assign_project_splits(const std::map<EntityId, std::size_t>& samples_per_project,
                                                const SplitFractions& fracs, std::uint64_t seed);

/// Projects that contribute samples to more than one split.
std::vector<EntityId> split_violations(const TaskDataset& ds, const Catalog& catalog);

/// "KEY>=5", "KEY<3", "KEY==x", "KEY!=x", "KEY<=5", "KEY>5". Integer keys compare
/// numerically, text and flag keys only support == and !=.
struct PropertyFilter {
  std::string key;
  std::string op;
  std::string value;

  static PropertyFilter parse(std::string_view text);
  /// False when the method has no value for the key.
  bool accepts(const PropertyStore& store, const EntityId& method) const;
};

struct PropertyTaskOptions {
  std::string key;
  std::vector<PropertyFilter> filters;
  bool balance = false;
  SplitFractions fracs;
  std::uint64_t seed = 0;
};

/// One sample per method with a value for `key` and a payload. Filters run
/// before balancing; balancing down-samples every label to the rarest count.
/// Throws NotFound for a missing table and EmptyTask for an empty selection.
TaskDataset make_property_task(const Catalog& catalog, const PropertyStore& store,
                               const std::map<EntityId, std::string>& payloads,
                               const PropertyTaskOptions& opts);

struct MaskingOptions {
  std::uint64_t seed = 0;
  SplitFractions fracs;
  bool include_constructors = false;
  /// Hops of callee context appended after <CTX>; 0 disables augmentation.
  int context_hops = 0;
  /// Drop the masked callee's name from the context unless another site reaches it.
  bool exclude_label = true;
};

/// Masks one uniformly chosen call site per method in its TKNA payload.
/// Methods without an eligible site are skipped. Throws EmptyTask when no
/// method qualifies.
TaskDataset make_call_masking_task(const Catalog& catalog, const std::vector<SourceFile>& files,
                                   const CallGraph& g, const MaskingOptions& opts);

/// Appends " <CTX> " and the sorted unique names of hop-`hop` methods other
/// than the center and `excluded`. Payload unchanged for hop 0 or an empty
/// name list. Throws InvalidArgument when the bundle is centered elsewhere or
/// the payload already carries a context.
TaskSample augment_with_context(const TaskSample& sample, const ContextBundle& bundle,
                                const Catalog& catalog, int hop,
                                const std::set<EntityId>& excluded = {});

/// The original TKNA text for a masked sample: the label put back at the mask.
std::string unmask(const TaskSample& sample);

struct MutationOptions {
  double p_mutate = 0.5;
  std::uint64_t seed = 0;
  SplitFractions fracs;
};

/// Label "mutated" or "clean". A method is mutated with probability p_mutate
/// when it has a call with two textually different arguments; the swap is
/// recorded in arg_a/arg_b and the site fields.
TaskDataset make_mutation_task(const Catalog& catalog, const std::vector<SourceFile>& files,
                               const MutationOptions& opts);

/// Whether a method has a call site with two textually different arguments.
bool has_swappable_call(const MethodSource& m);

struct AccuracyCell {
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy() const { return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
};

struct EvalReport {
  AccuracyCell overall;
  std::map<std::string, AccuracyCell> by_stratum;  // call-type name; "" for unstratified samples
  std::map<char, AccuracyCell> by_bucket;
  std::vector<std::string> missing;  // sample ids without a prediction, counted incorrect
};

/// Exact string match over the samples of `split`.
EvalReport evaluate_exact_match(const TaskDataset& ds,
                                const std::map<std::string, std::string>& predictions,
                                Split split = Split::Test);

/// Predicts the most frequent training label everywhere; ties go to the
/// lexicographically smallest label.
std::map<std::string, std::string> most_frequent_name_baseline(const TaskDataset& ds);

/// Predicts the identifier visible in the payload with the highest training
/// label frequency, then the highest in-payload count, then the smallest text.
/// Falls back to the most frequent training label when the payload has none.
std::map<std::string, std::string> unigram_context_baseline(const TaskDataset& ds);

extern const std::vector<std::string> kDatasetHeader;
extern const std::vector<std::string> kSitesHeader;
extern const std::vector<std::string> kPredictionsHeader;

void write_dataset(const TaskDataset& ds, const std::filesystem::path& file);
/// Sidecar rows: sample_id,mask_offset,masked_callee,site_line,site_col,arg_a,arg_b.
void write_sites(const TaskDataset& ds, const std::filesystem::path& file);
TaskDataset read_dataset(const std::filesystem::path& file);
/// Fills the sidecar fields of `ds` from a sites file.
void read_sites(TaskDataset& ds, const std::filesystem::path& file);

void write_predictions(const std::map<std::string, std::string>& predictions,
                       const std::filesystem::path& file);
std::map<std::string, std::string> read_predictions(const std::filesystem::path& file);

}  // namespace srcwb
