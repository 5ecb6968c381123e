#include "lcq/query.h"

#include <algorithm>
#include <iterator>
#include <sstream>

#include <fmt/core.h>
#include <fmt/ranges.h>

#include "lcq/error.h"

namespace lcq {

namespace {

std::vector<std::string> Tokenize(const std::string &normalized) {
  std::vector<std::string> tokens;
  std::istringstream in(normalized);
  std::string token;
  while (in >> token) tokens.push_back(token);
  return tokens;
}

std::vector<EntityId> SortedEntities(const Taxonomy &taxonomy, ConceptId c) {
  std::vector<EntityId> out;
  for (const auto &m : taxonomy.EntitiesOf(c)) out.push_back(m.id);
  return out;  // EntitiesOf is already sorted by id
}

}  // namespace

LongConceptQuery ParseQuery(std::string_view raw,
                            std::optional<std::string_view> head_override) {
  LongConceptQuery query;
  query.raw = NormalizeName(raw);
  std::vector<std::string> tokens = Tokenize(query.raw);

  std::size_t head_tokens = 1;
  if (head_override) {
    std::vector<std::string> head = Tokenize(NormalizeName(*head_override));
    if (head.empty() || head.size() > tokens.size() ||
        !std::equal(head.rbegin(), head.rend(), tokens.rbegin())) {
      throw Error(ErrorKind::kUnanswerable,
                  fmt::format("head '{}' is not a suffix of query '{}'",
                              *head_override, query.raw));
    }
    head_tokens = head.size();
  }
  if (tokens.size() <= head_tokens) {
    throw Error(ErrorKind::kUnanswerable,
                fmt::format("query '{}' has no modifiers", query.raw));
  }

  std::size_t split = tokens.size() - head_tokens;
  query.head = fmt::format("{}", fmt::join(tokens.begin() + split, tokens.end(), " "));
  for (std::size_t i = 0; i < split; ++i) {
    if (std::find(query.modifiers.begin(), query.modifiers.end(), tokens[i]) ==
        query.modifiers.end()) {
      query.modifiers.push_back(tokens[i]);
    }
  }
  return query;
}

Decomposition Decompose(const LongConceptQuery &query,
                        const Taxonomy &taxonomy) {
  Decomposition out;
  for (const std::string &modifier : query.modifiers) {
    auto c = taxonomy.FindConcept(modifier + " " + query.head);
    if (c && std::find(out.short_concepts.begin(), out.short_concepts.end(),
                       *c) == out.short_concepts.end()) {
      out.short_concepts.push_back(*c);
    } else {
      out.unresolved.push_back(modifier);
    }
  }
  if (out.short_concepts.empty()) {
    throw Error(ErrorKind::kUnanswerable,
                fmt::format("query '{}' not answerable over this taxonomy",
                            query.raw));
  }
  return out;
}

std::vector<EntityId> IntersectEntities(const Taxonomy &taxonomy,
                                        std::span<const ConceptId> concepts) {
  if (concepts.empty()) return {};
  std::vector<EntityId> acc = SortedEntities(taxonomy, concepts.front());
  for (std::size_t i = 1; i < concepts.size() && !acc.empty(); ++i) {
    std::vector<EntityId> next = SortedEntities(taxonomy, concepts[i]);
    std::vector<EntityId> merged;
    std::set_intersection(acc.begin(), acc.end(), next.begin(), next.end(),
                          std::back_inserter(merged));
    acc = std::move(merged);
  }
  return acc;
}

std::vector<EntityId> UnionEntities(const Taxonomy &taxonomy,
                                    std::span<const ConceptId> concepts) {
  std::vector<EntityId> acc;
  for (ConceptId c : concepts) {
    for (const auto &m : taxonomy.EntitiesOf(c)) acc.push_back(m.id);
  }
  std::sort(acc.begin(), acc.end());
  acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
  return acc;
}

std::vector<SubsetIntersection> SubsetEnumeration::NonEmpty() const {
  std::vector<SubsetIntersection> out;
  if (!full.entities.empty()) out.push_back(full);
  out.insert(out.end(), proper.begin(), proper.end());
  return out;
}

SubsetEnumeration EnumerateSubsets(const Taxonomy &taxonomy,
                                   std::span<const ConceptId> query_concepts) {
  const std::size_t n = query_concepts.size();
  if (n == 0) {
    throw Error(ErrorKind::kInvalidArgument, "empty query concept set");
  }
  if (n > kMaxQueryConcepts) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("{} query concepts exceed the limit of {}", n,
                            kMaxQueryConcepts));
  }

  // Members ordered by name so each subset lists them lexicographically.
  std::vector<ConceptId> members(query_concepts.begin(), query_concepts.end());
  std::sort(members.begin(), members.end(), [&](ConceptId a, ConceptId b) {
    return taxonomy.name(a) < taxonomy.name(b);
  });
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw Error(ErrorKind::kInvalidArgument, "duplicate query concept");
  }

  SubsetEnumeration out;
  const std::uint32_t full_mask = (1u << n) - 1;
  auto make = [&](std::uint32_t mask) {
    SubsetIntersection s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) s.subset.push_back(members[i]);
    }
    s.entities = IntersectEntities(taxonomy, s.subset);
    return s;
  };

  out.full = make(full_mask);
  for (std::uint32_t mask = 1; mask < full_mask; ++mask) {
    ++out.examined;
    SubsetIntersection s = make(mask);
    if (!s.entities.empty()) out.proper.push_back(std::move(s));
  }

  std::sort(out.proper.begin(), out.proper.end(),
            [&](const SubsetIntersection &a, const SubsetIntersection &b) {
              if (a.size() != b.size()) return a.size() > b.size();
              return std::lexicographical_compare(
                  a.subset.begin(), a.subset.end(), b.subset.begin(),
                  b.subset.end(), [&](ConceptId x, ConceptId y) {
                    return taxonomy.name(x) < taxonomy.name(y);
                  });
            });
  return out;
}

}  // namespace lcq
