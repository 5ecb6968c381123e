#ifndef LCQ_QUERY_H_
#define LCQ_QUERY_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lcq/taxonomy.h"

namespace lcq {

// A head noun with one or more modifiers, e.g. "top american private
// university" -> head "university", modifiers [top, american, private].
struct LongConceptQuery {
  std::string raw;  // normalized
  std::string head;
  std::vector<std::string> modifiers;
};

// The head is the last token unless `head_override` is given, in which case
// it must be a whole-token suffix of the query. Repeated modifiers are kept
// once. Throws Error(kUnanswerable) when no modifier remains.
LongConceptQuery ParseQuery(std::string_view raw,
                            std::optional<std::string_view> head_override = {});

// Short concepts "modifier head" that exist in the taxonomy.
struct Decomposition {
  std::vector<ConceptId> short_concepts;
  std::vector<std::string> unresolved;
};

// Throws Error(kUnanswerable) if no short concept resolves.
Decomposition Decompose(const LongConceptQuery &query, const Taxonomy &taxonomy);

// E(C') for one subset C' of the query concepts. Members are sorted by
// concept name, entities by id.
struct SubsetIntersection {
  std::vector<ConceptId> subset;
  std::vector<EntityId> entities;

  std::size_t size() const { return subset.size(); }
};

struct SubsetEnumeration {
  // E(C_q) over the whole query concept set; may have no entities.
  SubsetIntersection full;
  // Proper non-empty subsets with a non-empty intersection, by size
  // descending then lexicographic member names.
  std::vector<SubsetIntersection> proper;
  // Number of proper subsets intersected, 2^n - 2.
  std::size_t examined = 0;

  // The full set (when its intersection is non-empty) followed by `proper`.
  std::vector<SubsetIntersection> NonEmpty() const;
};

inline constexpr std::size_t kMaxQueryConcepts = 20;

// Throws Error(kInvalidArgument) for an empty set, duplicates, or more than
// kMaxQueryConcepts concepts.
SubsetEnumeration EnumerateSubsets(const Taxonomy &taxonomy,
                                   std::span<const ConceptId> query_concepts);

// Sorted entity ids of the intersection / union of e(c) over `concepts`.
std::vector<EntityId> IntersectEntities(const Taxonomy &taxonomy,
                                        std::span<const ConceptId> concepts);
std::vector<EntityId> UnionEntities(const Taxonomy &taxonomy,
                                    std::span<const ConceptId> concepts);

}  // namespace lcq

#endif  // LCQ_QUERY_H_
