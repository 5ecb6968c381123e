#ifndef LCQ_TAXONOMY_H_
#define LCQ_TAXONOMY_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lcq {

// Dense identifiers, assigned in first-seen order during ingestion.
enum class ConceptId : std::uint32_t {};
enum class EntityId : std::uint32_t {};

inline std::size_t Index(ConceptId id) { return static_cast<std::size_t>(id); }
inline std::size_t Index(EntityId id) { return static_cast<std::size_t>(id); }

// One ingestion row: concept, entity and their co-occurrence count.
struct CooccurrenceRecord {
  std::string concept_name;
  std::string entity_name;
  std::int64_t count = 0;
};

// A neighbour in the bipartite concept/entity graph with the edge count.
template <typename Id>
struct Member {
  Id id;
  std::uint64_t count;
};

// Lowercases ASCII letters, trims, and collapses inner whitespace runs to a
// single space.
std::string NormalizeName(std::string_view raw);

// Immutable bipartite co-occurrence store. Absent pairs have count zero and
// every probability involving an unknown item is zero.
class Taxonomy {
 public:
  enum class Direction { kConceptGivenEntity, kEntityGivenConcept };

  Taxonomy() = default;

  // Merges duplicate (concept, entity) rows by summing counts. Throws
  // Error(kData) naming the 1-based row of the first malformed record.
  static Taxonomy Ingest(std::span<const CooccurrenceRecord> records);

  std::size_t num_concepts() const { return concept_names_.size(); }
  std::size_t num_entities() const { return entity_names_.size(); }
  std::size_t num_edges() const { return num_edges_; }
  std::uint64_t grand_total() const { return grand_total_; }

  // Lookups normalize the name first.
  std::optional<ConceptId> FindConcept(std::string_view name) const;
  std::optional<EntityId> FindEntity(std::string_view name) const;

  const std::string &name(ConceptId c) const { return concept_names_[Index(c)]; }
  const std::string &name(EntityId e) const { return entity_names_[Index(e)]; }

  // Members are sorted by id. Unknown ids yield an empty span.
  std::span<const Member<EntityId>> EntitiesOf(ConceptId c) const;
  std::span<const Member<ConceptId>> ConceptsOf(EntityId e) const;
  std::span<const Member<EntityId>> EntitiesOf(std::string_view concept_name) const;
  std::span<const Member<ConceptId>> ConceptsOf(std::string_view entity_name) const;

  std::uint64_t Count(ConceptId c, EntityId e) const;
  std::uint64_t ConceptTotal(ConceptId c) const;
  std::uint64_t EntityTotal(EntityId e) const;

  // n(c,e)/n(e) or n(c,e)/n(c).
  double CondProb(Direction direction, ConceptId c, EntityId e) const;
  double ProbConceptGivenEntity(ConceptId c, EntityId e) const {
    return CondProb(Direction::kConceptGivenEntity, c, e);
  }
  double ProbEntityGivenConcept(ConceptId c, EntityId e) const {
    return CondProb(Direction::kEntityGivenConcept, c, e);
  }

  // n(.)/grand_total.
  double ConceptPrior(ConceptId c) const;
  double EntityPrior(EntityId e) const;

  // All edges, grouped by concept in id order.
  std::vector<CooccurrenceRecord> Records() const;

  // Copy without the edges for which `drop` returns true. Identifiers are
  // reassigned; items left without edges disappear.
  Taxonomy WithoutEdges(
      const std::function<bool(ConceptId, EntityId)> &drop) const;

  // Recomputes marginals from the edge lists and compares them with the
  // stored totals.
  bool VerifyMarginals() const;

  // Content equality on normalized names and counts, independent of the
  // identifier assignment order.
  friend bool operator==(const Taxonomy &a, const Taxonomy &b);

 private:
  friend class TaxonomyBuilder;

  std::vector<std::string> concept_names_;
  std::vector<std::string> entity_names_;
  std::unordered_map<std::string, ConceptId> concept_index_;
  std::unordered_map<std::string, EntityId> entity_index_;
  std::vector<std::vector<Member<EntityId>>> concept_members_;
  std::vector<std::vector<Member<ConceptId>>> entity_members_;
  std::vector<std::uint64_t> concept_totals_;
  std::vector<std::uint64_t> entity_totals_;
  std::uint64_t grand_total_ = 0;
  std::size_t num_edges_ = 0;
};

// Incremental ingestion used by Ingest and the file reader.
class TaxonomyBuilder {
 public:
  // `row_label` prefixes error positions ("row 3", "line 3").
  explicit TaxonomyBuilder(std::string row_label = "row")
      : row_label_(std::move(row_label)) {}

  // `row` is reported in the error message if the record is malformed.
  void Add(const CooccurrenceRecord &record, std::size_t row);
  Taxonomy Build() &&;

 private:
  struct PairHash {
    std::size_t operator()(std::uint64_t key) const {
      return std::hash<std::uint64_t>()(key * 0x9E3779B97F4A7C15ull);
    }
  };

  std::string row_label_;
  Taxonomy taxonomy_;
  std::unordered_map<std::uint64_t, std::uint64_t, PairHash> counts_;
  std::vector<std::uint64_t> edge_order_;
};

// Reads `concept<TAB>entity<TAB>count` lines. Blank lines and lines starting
// with '#' are skipped. Errors name the 1-based line number.
Taxonomy ReadTaxonomy(std::istream &in);
Taxonomy ReadTaxonomyFile(const std::string &path);

}  // namespace lcq

#endif  // LCQ_TAXONOMY_H_
