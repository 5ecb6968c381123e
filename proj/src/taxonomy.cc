#include "lcq/taxonomy.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <tuple>

#include <fmt/core.h>

#include "lcq/error.h"

namespace lcq {

namespace {

std::uint64_t PairKey(std::uint32_t c, std::uint32_t e) {
  return (static_cast<std::uint64_t>(c) << 32) | e;
}

template <typename Id>
const Member<Id> *FindMember(std::span<const Member<Id>> members, Id id) {
  auto it = std::lower_bound(
      members.begin(), members.end(), id,
      [](const Member<Id> &m, Id target) { return m.id < target; });
  if (it == members.end() || it->id != id) return nullptr;
  return &*it;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

}  // namespace

std::string NormalizeName(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char ch : raw) {
    auto uch = static_cast<unsigned char>(ch);
    if (std::isspace(uch)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(uch)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// TaxonomyBuilder

void TaxonomyBuilder::Add(const CooccurrenceRecord &record, std::size_t row) {
  std::string concept_name = NormalizeName(record.concept_name);
  std::string entity_name = NormalizeName(record.entity_name);
  if (concept_name.empty()) {
    throw Error(ErrorKind::kData,
                fmt::format("{} {}: empty concept", row_label_, row));
  }
  if (entity_name.empty()) {
    throw Error(ErrorKind::kData,
                fmt::format("{} {}: empty entity", row_label_, row));
  }
  if (record.count < 1) {
    throw Error(ErrorKind::kData,
                fmt::format("{} {}: count must be >= 1, got {}", row_label_,
                            row, record.count));
  }

  Taxonomy &t = taxonomy_;
  auto [cit, new_concept] = t.concept_index_.try_emplace(
      concept_name, static_cast<ConceptId>(t.concept_names_.size()));
  if (new_concept) t.concept_names_.push_back(std::move(concept_name));
  auto [eit, new_entity] = t.entity_index_.try_emplace(
      entity_name, static_cast<EntityId>(t.entity_names_.size()));
  if (new_entity) t.entity_names_.push_back(std::move(entity_name));

  std::uint64_t key = PairKey(static_cast<std::uint32_t>(cit->second),
                              static_cast<std::uint32_t>(eit->second));
  auto [pit, new_pair] = counts_.try_emplace(key, 0);
  if (new_pair) edge_order_.push_back(key);
  pit->second += static_cast<std::uint64_t>(record.count);
}

Taxonomy TaxonomyBuilder::Build() && {
  Taxonomy t = std::move(taxonomy_);
  t.concept_members_.assign(t.concept_names_.size(), {});
  t.entity_members_.assign(t.entity_names_.size(), {});
  t.concept_totals_.assign(t.concept_names_.size(), 0);
  t.entity_totals_.assign(t.entity_names_.size(), 0);

  for (std::uint64_t key : edge_order_) {
    auto c = static_cast<ConceptId>(key >> 32);
    auto e = static_cast<EntityId>(key & 0xffffffffu);
    std::uint64_t n = counts_.at(key);
    t.concept_members_[Index(c)].push_back({e, n});
    t.entity_members_[Index(e)].push_back({c, n});
    t.concept_totals_[Index(c)] += n;
    t.entity_totals_[Index(e)] += n;
    t.grand_total_ += n;
  }
  t.num_edges_ = edge_order_.size();

  for (auto &members : t.concept_members_) {
    std::sort(members.begin(), members.end(),
              [](const auto &a, const auto &b) { return a.id < b.id; });
  }
  for (auto &members : t.entity_members_) {
    std::sort(members.begin(), members.end(),
              [](const auto &a, const auto &b) { return a.id < b.id; });
  }
  counts_.clear();
  edge_order_.clear();
  return t;
}

// ---------------------------------------------------------------------------
// Taxonomy

Taxonomy Taxonomy::Ingest(std::span<const CooccurrenceRecord> records) {
  TaxonomyBuilder builder;
  for (std::size_t i = 0; i < records.size(); ++i) {
    builder.Add(records[i], i + 1);
  }
  return std::move(builder).Build();
}

std::optional<ConceptId> Taxonomy::FindConcept(std::string_view name) const {
  auto it = concept_index_.find(NormalizeName(name));
  if (it == concept_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EntityId> Taxonomy::FindEntity(std::string_view name) const {
  auto it = entity_index_.find(NormalizeName(name));
  if (it == entity_index_.end()) return std::nullopt;
  return it->second;
}

std::span<const Member<EntityId>> Taxonomy::EntitiesOf(ConceptId c) const {
  if (Index(c) >= concept_members_.size()) return {};
  return concept_members_[Index(c)];
}

std::span<const Member<ConceptId>> Taxonomy::ConceptsOf(EntityId e) const {
  if (Index(e) >= entity_members_.size()) return {};
  return entity_members_[Index(e)];
}

std::span<const Member<EntityId>> Taxonomy::EntitiesOf(
    std::string_view concept_name) const {
  auto c = FindConcept(concept_name);
  if (!c) return {};
  return EntitiesOf(*c);
}

std::span<const Member<ConceptId>> Taxonomy::ConceptsOf(
    std::string_view entity_name) const {
  auto e = FindEntity(entity_name);
  if (!e) return {};
  return ConceptsOf(*e);
}

std::uint64_t Taxonomy::Count(ConceptId c, EntityId e) const {
  const Member<EntityId> *m = FindMember(EntitiesOf(c), e);
  return m == nullptr ? 0 : m->count;
}

std::uint64_t Taxonomy::ConceptTotal(ConceptId c) const {
  return Index(c) < concept_totals_.size() ? concept_totals_[Index(c)] : 0;
}

std::uint64_t Taxonomy::EntityTotal(EntityId e) const {
  return Index(e) < entity_totals_.size() ? entity_totals_[Index(e)] : 0;
}

double Taxonomy::CondProb(Direction direction, ConceptId c, EntityId e) const {
  std::uint64_t joint = Count(c, e);
  if (joint == 0) return 0.0;
  std::uint64_t denom = direction == Direction::kConceptGivenEntity
                            ? EntityTotal(e)
                            : ConceptTotal(c);
  if (denom == 0) return 0.0;
  return static_cast<double>(joint) / static_cast<double>(denom);
}

double Taxonomy::ConceptPrior(ConceptId c) const {
  if (grand_total_ == 0) return 0.0;
  return static_cast<double>(ConceptTotal(c)) /
         static_cast<double>(grand_total_);
}

double Taxonomy::EntityPrior(EntityId e) const {
  if (grand_total_ == 0) return 0.0;
  return static_cast<double>(EntityTotal(e)) /
         static_cast<double>(grand_total_);
}

std::vector<CooccurrenceRecord> Taxonomy::Records() const {
  std::vector<CooccurrenceRecord> records;
  records.reserve(num_edges_);
  for (std::size_t c = 0; c < concept_members_.size(); ++c) {
    for (const auto &m : concept_members_[c]) {
      records.push_back({concept_names_[c], entity_names_[Index(m.id)],
                         static_cast<std::int64_t>(m.count)});
    }
  }
  return records;
}

Taxonomy Taxonomy::WithoutEdges(
    const std::function<bool(ConceptId, EntityId)> &drop) const {
  TaxonomyBuilder builder;
  std::size_t row = 0;
  for (std::size_t c = 0; c < concept_members_.size(); ++c) {
    for (const auto &m : concept_members_[c]) {
      ++row;
      if (drop(static_cast<ConceptId>(c), m.id)) continue;
      builder.Add({concept_names_[c], entity_names_[Index(m.id)],
                   static_cast<std::int64_t>(m.count)},
                  row);
    }
  }
  return std::move(builder).Build();
}

bool Taxonomy::VerifyMarginals() const {
  std::vector<std::uint64_t> by_concept(concept_members_.size(), 0);
  std::vector<std::uint64_t> by_entity(entity_members_.size(), 0);
  std::uint64_t total = 0;
  std::size_t edges = 0;
  for (std::size_t c = 0; c < concept_members_.size(); ++c) {
    for (const auto &m : concept_members_[c]) {
      if (m.count < 1) return false;
      by_concept[c] += m.count;
      by_entity[Index(m.id)] += m.count;
      total += m.count;
      ++edges;
    }
  }
  std::uint64_t entity_side = 0;
  for (std::size_t e = 0; e < entity_members_.size(); ++e) {
    for (const auto &m : entity_members_[e]) entity_side += m.count;
  }
  return by_concept == concept_totals_ && by_entity == entity_totals_ &&
         total == grand_total_ && entity_side == grand_total_ &&
         edges == num_edges_;
}

bool operator==(const Taxonomy &a, const Taxonomy &b) {
  if (a.num_concepts() != b.num_concepts() ||
      a.num_entities() != b.num_entities() ||
      a.num_edges() != b.num_edges() || a.grand_total() != b.grand_total()) {
    return false;
  }
  auto canonical = [](const Taxonomy &t) {
    auto records = t.Records();
    std::sort(records.begin(), records.end(), [](const auto &x, const auto &y) {
      return std::tie(x.concept_name, x.entity_name) <
             std::tie(y.concept_name, y.entity_name);
    });
    return records;
  };
  auto ra = canonical(a);
  auto rb = canonical(b);
  return std::equal(ra.begin(), ra.end(), rb.begin(), rb.end(),
                    [](const auto &x, const auto &y) {
                      return x.concept_name == y.concept_name &&
                             x.entity_name == y.entity_name &&
                             x.count == y.count;
                    });
}

// ---------------------------------------------------------------------------
// File reader

Taxonomy ReadTaxonomy(std::istream &in) {
  TaxonomyBuilder builder("line");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view view(line);
    if (view.find_first_not_of(" \t") == std::string_view::npos) continue;
    if (view.front() == '#') continue;

    auto fields = SplitTabs(view);
    if (fields.size() != 3) {
      throw Error(ErrorKind::kData,
                  fmt::format("line {}: expected 3 tab-separated fields, got {}",
                              line_no, fields.size()));
    }
    std::string_view count_text = fields[2];
    while (!count_text.empty() && count_text.back() == ' ') {
      count_text.remove_suffix(1);
    }
    while (!count_text.empty() && count_text.front() == ' ') {
      count_text.remove_prefix(1);
    }
    std::int64_t count = 0;
    auto [ptr, ec] = std::from_chars(
        count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size() ||
        count_text.empty()) {
      throw Error(ErrorKind::kData,
                  fmt::format("line {}: count '{}' is not an integer", line_no,
                              fields[2]));
    }
    builder.Add({std::string(fields[0]), std::string(fields[1]), count},
                line_no);
  }
  return std::move(builder).Build();
}

Taxonomy ReadTaxonomyFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kData, fmt::format("cannot open '{}'", path));
  }
  return ReadTaxonomy(in);
}

}  // namespace lcq
