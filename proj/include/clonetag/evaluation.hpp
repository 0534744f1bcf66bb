#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "clonetag/clustering.hpp"
#include "clonetag/tagging.hpp"

namespace clonetag {

// A partition of a clone class's fragments as canonical labels (first appearance order).
using Partition = std::vector<std::uint32_t>;

enum class Relation { Equal, Refines, Coarsens, Incomparable };

NLOHMANN_JSON_SERIALIZE_ENUM(Relation, {{Relation::Equal, "equal"},
                                        {Relation::Refines, "refines"},
                                        {Relation::Coarsens, "coarsens"},
                                        {Relation::Incomparable, "incomparable"}})

inline const char* to_string(Relation r) {
  switch (r) {
    case Relation::Equal: return "=";
    case Relation::Refines: return "<";
    case Relation::Coarsens: return ">";
    case Relation::Incomparable: return "~";
  }
  return "?";
}

namespace detail {

// a <= b: fragments together in a are together in b.
inline bool finer_or_equal(const Partition& a, const Partition& b) {
  // map each a-block to the b-block of its first member
  std::map<std::uint32_t, std::uint32_t> image;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [it, inserted] = image.emplace(a[i], b[i]);
    if (!inserted && it->second != b[i]) return false;
  }
  return true;
}

}  // namespace detail

inline Relation compare_partitions(const Partition& c, const Partition& d) {
  if (c.size() != d.size()) throw Error("clusterings cover different fragment sets");
  const bool le = detail::finer_or_equal(c, d);
  const bool ge = detail::finer_or_equal(d, c);
  if (le && ge) return Relation::Equal;
  if (le) return Relation::Refines;
  if (ge) return Relation::Coarsens;
  return Relation::Incomparable;
}

inline Relation compare_clusterings(const Clustering& c, const Clustering& d) {
  return compare_partitions(c.assignment, d.assignment);
}

enum class TagUniverse { WordsAndFilenames, FilenamesOnly };

struct TaggedGroup {
  Tag tag;
  std::vector<std::uint32_t> members;  // sorted fragment indices

  friend bool operator==(const TaggedGroup&, const TaggedGroup&) = default;
};

// Every tag that can name some cluster, with the only member set it can name.
// A word can tag cluster X only if its top-ranked holders are X and no fragment
// outside X ranks it within `block`; so X is its top holder set and the word is
// usable only when that equals its block holder set. A filename names exactly the
// fragments carrying it.
inline std::vector<TaggedGroup> candidate_groups(std::span<const ObFList> obf,
                                                 std::span<const std::string> basenames,
                                                 TagUniverse universe, std::uint32_t top = 3,
                                                 std::uint32_t block = 6) {
  if (obf.size() != basenames.size()) throw Error("ObF lists and basenames differ in length");
  if (top > block) throw Error("top must not exceed block");
  const auto n = static_cast<std::uint32_t>(obf.size());
  std::vector<TaggedGroup> out;

  std::map<std::string, std::vector<std::uint32_t>> by_name;
  for (std::uint32_t i = 0; i < n; ++i) by_name[basenames[i]].push_back(i);
  for (auto& [name, members] : by_name) out.push_back({Tag::filename(name), members});

  if (universe == TagUniverse::FilenamesOnly) return out;

  std::set<std::string> words;
  for (const auto& list : obf)
    for (const auto& e : list.ranked)
      if (e.rank <= top) words.insert(e.word);
  for (const auto& w : words) {
    std::vector<std::uint32_t> top_holders, block_holders;
    std::array<std::uint32_t, 3> ch{};
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto* e = obf[i].find(w);
      if (!e) continue;
      if (e->rank <= top) {
        top_holders.push_back(i);
        for (std::size_t k = 0; k < 3; ++k) ch[k] += e->channel_counts[k];
      }
      if (e->rank <= block) block_holders.push_back(i);
    }
    if (top_holders.empty() || top_holders != block_holders) continue;
    std::size_t pick = 0;
    for (std::size_t k = 1; k < 3; ++k)
      if (ch[k] > ch[pick]) pick = k;
    out.push_back({Tag::word(static_cast<Channel>(pick), w), std::move(top_holders)});
  }
  return out;
}

struct EnumeratedClustering {
  Partition partition;
  std::vector<Tag> witness;  // one tag per cluster index of `partition`

  friend bool operator==(const EnumeratedClustering&, const EnumeratedClustering&) = default;
};

struct EnumerationResult {
  std::vector<EnumeratedClustering> partitions;  // distinct, sorted by partition
  std::uint64_t nodes_expanded = 0;
  bool overflow = false;

  friend bool operator==(const EnumerationResult&, const EnumerationResult&) = default;
};

inline constexpr std::uint64_t kUnlimitedBudget = std::numeric_limits<std::uint64_t>::max();

// Exact covers of the fragment set by pairwise-disjoint groups, deduplicated by
// the partition they induce. Each group choice is one node; when the budget is
// used up and more work remains the search stops with overflow set.
inline EnumerationResult enumerate_tag_clusterings(std::span<const TaggedGroup> groups,
                                                   std::size_t fragment_count,
                                                   std::uint64_t budget = 100000) {
  if (budget < 1) throw Error("budget must be >= 1");
  EnumerationResult result;
  std::vector<std::vector<std::size_t>> containing(fragment_count);
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (auto m : groups[g].members) {
      if (m >= fragment_count) throw Error("group member out of range");
      containing[m].push_back(g);
    }

  std::map<Partition, std::vector<Tag>> found;
  std::vector<char> covered(fragment_count, 0);
  std::vector<std::size_t> chosen;
  std::size_t remaining = fragment_count;

  auto record = [&] {
    Partition labels(fragment_count);
    for (std::size_t c = 0; c < chosen.size(); ++c)
      for (auto m : groups[chosen[c]].members) labels[m] = static_cast<std::uint32_t>(c);
    const auto canon = canonical_labels(labels);
    if (found.count(canon)) return;
    std::vector<Tag> witness(chosen.size());
    for (std::size_t c = 0; c < chosen.size(); ++c)
      witness[canon[groups[chosen[c]].members.front()]] = groups[chosen[c]].tag;
    found.emplace(canon, std::move(witness));
  };

  auto rec = [&](auto&& self) -> bool {
    if (remaining == 0) {
      record();
      return true;
    }
    std::size_t f = 0;
    while (covered[f]) ++f;
    for (auto g : containing[f]) {
      const auto& members = groups[g].members;
      if (std::any_of(members.begin(), members.end(), [&](std::uint32_t m) { return covered[m]; }))
        continue;
      if (result.nodes_expanded >= budget) {
        result.overflow = true;
        return false;
      }
      ++result.nodes_expanded;
      for (auto m : members) covered[m] = 1;
      remaining -= members.size();
      chosen.push_back(g);
      const bool keep_going = self(self);
      chosen.pop_back();
      remaining += members.size();
      for (auto m : members) covered[m] = 0;
      if (!keep_going) return false;
    }
    return true;
  };
  if (fragment_count > 0) rec(rec);
  for (auto& [p, w] : found) result.partitions.push_back({p, std::move(w)});
  return result;
}

// Per-class input to the summary: the embedding clustering plus the tag
// clusterings enumerated for each tag universe.
struct ClassEvaluation {
  std::uint32_t class_id = 0;
  Partition embedding;
  std::uint32_t embedding_k = 1;
  EnumerationResult words_and_filenames;
  EnumerationResult filenames_only;

  friend bool operator==(const ClassEvaluation&, const ClassEvaluation&) = default;
};

struct SummaryRow {
  std::string label;
  std::uint64_t equal = 0;         // some tag clustering equals the embedding clustering
  std::uint64_t refines_or_equal = 0;
  std::uint64_t coarsens_or_equal = 0;
  std::uint64_t incomparable = 0;
  std::uint64_t overflow = 0;

  friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

struct SummaryTable {
  std::uint64_t classes_total = 0;
  std::uint64_t multi_cluster_classes = 0;  // embedding k >= 2; the denominator
  SummaryRow words_and_filenames{"Words and filenames"};
  SummaryRow filenames_only{"Filenames only"};

  friend bool operator==(const SummaryTable&, const SummaryTable&) = default;

  std::string render() const {
    std::ostringstream os;
    auto cell = [&](auto v, int w) { os << std::setw(w) << v; };
    os << std::left << std::setw(22) << "Clustering w/" << std::right;
    cell("= emb", 9);
    cell("<= emb", 9);
    cell(">= emb", 9);
    cell("~ emb", 9);
    cell("overflow", 10);
    os << '\n';
    os << std::left << std::setw(22) << "Embedding (k >= 2)" << std::right;
    cell(multi_cluster_classes, 9);
    cell("-", 9);
    cell("-", 9);
    cell("-", 9);
    cell("-", 10);
    os << '\n';
    for (const auto* row : {&words_and_filenames, &filenames_only}) {
      os << std::left << std::setw(22) << row->label << std::right;
      cell(row->equal, 9);
      cell(row->refines_or_equal, 9);
      cell(row->coarsens_or_equal, 9);
      cell(row->incomparable, 9);
      cell(row->overflow, 10);
      os << '\n';
    }
    return os.str();
  }
};

// Existence counts per class: a class counts in a column when at least one of
// its enumerated tag clusterings stands in that relation to the embedding
// clustering. Only classes whose embedding clustering has k >= 2 are counted.
inline SummaryTable rq_summary(std::span<const ClassEvaluation> classes) {
  SummaryTable t;
  t.classes_total = classes.size();
  auto fold = [](SummaryRow& row, const Partition& emb, const EnumerationResult& en) {
    bool eq = false, le = false, ge = false, inc = false;
    for (const auto& p : en.partitions) {
      const auto r = compare_partitions(p.partition, emb);
      eq |= r == Relation::Equal;
      le |= r == Relation::Equal || r == Relation::Refines;
      ge |= r == Relation::Equal || r == Relation::Coarsens;
      inc |= r == Relation::Incomparable;
    }
    row.equal += eq;
    row.refines_or_equal += le;
    row.coarsens_or_equal += ge;
    row.incomparable += inc;
    row.overflow += en.overflow;
  };
  for (const auto& c : classes) {
    if (c.embedding_k < 2) continue;
    ++t.multi_cluster_classes;
    fold(t.words_and_filenames, c.embedding, c.words_and_filenames);
    fold(t.filenames_only, c.embedding, c.filenames_only);
  }
  return t;
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EnumeratedClustering, partition, witness)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EnumerationResult, partitions, nodes_expanded, overflow)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ClassEvaluation, class_id, embedding, embedding_k, words_and_filenames,
                                   filenames_only)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SummaryRow, label, equal, refines_or_equal, coarsens_or_equal,
                                   incomparable, overflow)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SummaryTable, classes_total, multi_cluster_classes,
                                   words_and_filenames, filenames_only)

}  // namespace clonetag
