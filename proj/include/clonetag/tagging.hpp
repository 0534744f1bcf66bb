#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"

#include "clonetag/clustering.hpp"
#include "clonetag/embedding.hpp"
#include "clonetag/lexing.hpp"

namespace clonetag {

struct ObFEntry {
  std::string word;
  double tfidf = 0;
  std::uint32_t rank = 1;
  std::uint32_t count = 0;
  std::array<std::uint32_t, 3> channel_counts{};  // identifier, comment, literal occurrences

  friend bool operator==(const ObFEntry&, const ObFEntry&) = default;
};

// Distinct alphabetic words of a fragment by descending TF-IDF, with
// competition ranking (1, 1, 3, ...). Exact ties are listed lexicographically.
struct ObFList {
  std::vector<ObFEntry> ranked;

  std::optional<std::uint32_t> rank_of(const std::string& w) const {
    for (const auto& e : ranked)
      if (e.word == w) return e.rank;
    return std::nullopt;
  }

  const ObFEntry* find(const std::string& w) const {
    for (const auto& e : ranked)
      if (e.word == w) return &e;
    return nullptr;
  }

  friend bool operator==(const ObFList&, const ObFList&) = default;
};

// Assigns competition ranks to entries; sorts by (tfidf desc, word asc) first.
inline void rank_entries(std::vector<ObFEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const ObFEntry& a, const ObFEntry& b) {
    if (a.tfidf != b.tfidf) return a.tfidf > b.tfidf;
    return a.word < b.word;
  });
  for (std::size_t i = 0; i < entries.size(); ++i)
    entries[i].rank = (i > 0 && entries[i].tfidf == entries[i - 1].tfidf)
                          ? entries[i - 1].rank
                          : static_cast<std::uint32_t>(i + 1);
}

template <typename IdfFn>
  requires std::is_invocable_r_v<double, IdfFn, const std::string&>
ObFList obf_list(const WordSequence& fragment, IdfFn&& idf) {
  std::map<std::string, ObFEntry> by_word;
  for (const auto& w : fragment.words) {
    if (!is_alphabetic_channel(w.channel)) continue;
    auto& e = by_word[w.text];
    e.word = w.text;
    ++e.count;
    ++e.channel_counts[static_cast<std::size_t>(w.channel)];
  }
  ObFList out;
  for (auto& [word, e] : by_word) {
    e.tfidf = static_cast<double>(e.count) * idf(word);
    out.ranked.push_back(std::move(e));
  }
  rank_entries(out.ranked);
  return out;
}

inline ObFList obf_list(const WordSequence& fragment, const IdfTable& idf) {
  return obf_list(fragment, [&](const std::string& w) { return idf.value(w); });
}

using FragmentSet = std::vector<std::uint32_t>;  // indices into a clone class

// Words ranked <= top in every cluster fragment and ranked > block (or absent)
// in every other fragment.
inline std::vector<std::string> word_candidates(const FragmentSet& cluster, const FragmentSet& others,
                                                std::span<const ObFList> obf, std::uint32_t top = 3,
                                                std::uint32_t block = 6) {
  if (cluster.empty()) throw Error("word_candidates: empty cluster");
  std::vector<std::string> out;
  for (const auto& e : obf[cluster.front()].ranked) {
    if (e.rank > top) continue;
    const bool in_all = std::all_of(cluster.begin(), cluster.end(), [&](std::uint32_t f) {
      const auto r = obf[f].rank_of(e.word);
      return r && *r <= top;
    });
    if (!in_all) continue;
    const bool blocked = std::any_of(others.begin(), others.end(), [&](std::uint32_t f) {
      const auto r = obf[f].rank_of(e.word);
      return r && *r <= block;
    });
    if (!blocked) out.push_back(e.word);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::optional<std::string> filename_candidate(const FragmentSet& cluster, const FragmentSet& others,
                                                     std::span<const std::string> basenames) {
  if (cluster.empty()) return std::nullopt;
  const auto& name = basenames[cluster.front()];
  for (auto f : cluster)
    if (basenames[f] != name) return std::nullopt;
  for (auto f : others)
    if (basenames[f] == name) return std::nullopt;
  return name;
}

struct Tag {
  enum class Kind { Word, Filename };
  Kind kind = Kind::Word;
  Channel channel = Channel::Identifier;  // meaningful for word tags only
  std::string text;

  static Tag word(Channel ch, std::string text) { return {Kind::Word, ch, std::move(text)}; }
  static Tag filename(std::string base) { return {Kind::Filename, Channel::Identifier, std::move(base)}; }

  friend bool operator==(const Tag&, const Tag&) = default;
};

inline std::string render_tag(const Tag& tag) {
  if (tag.kind == Tag::Kind::Filename) return tag.text;
  const char* prefix = tag.channel == Channel::Comment ? "c:" : tag.channel == Channel::Literal ? "l:" : "i:";
  return prefix + tag.text;
}

// Untagged clusters show their serial number.
inline std::string render_label(const std::optional<Tag>& tag, std::uint32_t cluster_index) {
  return tag ? render_tag(*tag) : "#" + std::to_string(cluster_index);
}

struct TagAssignment {
  std::uint32_t class_id = 0;
  std::vector<std::optional<Tag>> tags;  // per cluster index

  friend bool operator==(const TagAssignment&, const TagAssignment&) = default;
};

inline std::vector<FragmentSet> clusters_of(const Clustering& c) {
  std::vector<FragmentSet> out(c.k);
  for (std::uint32_t i = 0; i < c.assignment.size(); ++i) out.at(c.assignment[i]).push_back(i);
  return out;
}

// One tag per cluster: the filename candidate when there is one, else the word
// candidate with the highest mean TF-IDF over the cluster (ties by text).
inline TagAssignment assign_tags(const Clustering& clustering, std::span<const ObFList> obf,
                                 std::span<const std::string> basenames, std::uint32_t top = 3,
                                 std::uint32_t block = 6) {
  if (top > block) throw Error("top must not exceed block");
  if (clustering.k < 1) throw Error("clustering has no clusters");
  const auto clusters = clusters_of(clustering);
  TagAssignment out{clustering.class_id, {}};
  std::set<std::pair<int, std::string>> used;
  for (std::uint32_t c = 0; c < clustering.k; ++c) {
    FragmentSet others;
    for (std::uint32_t i = 0; i < clustering.assignment.size(); ++i)
      if (clustering.assignment[i] != c) others.push_back(i);
    std::optional<Tag> tag;
    if (auto name = filename_candidate(clusters[c], others, basenames);
        name && !used.count({1, *name})) {
      tag = Tag::filename(*name);
    } else {
      double best = -1;
      for (const auto& w : word_candidates(clusters[c], others, obf, top, block)) {
        if (used.count({0, w})) continue;
        double sum = 0;
        for (auto f : clusters[c]) sum += obf[f].find(w)->tfidf;
        const double mean = sum / static_cast<double>(clusters[c].size());
        if (mean > best) {
          best = mean;
          std::array<std::uint32_t, 3> ch{};
          for (auto f : clusters[c])
            for (std::size_t k = 0; k < 3; ++k) ch[k] += obf[f].find(w)->channel_counts[k];
          // majority channel, ties prefer identifier, then comment, then literal
          std::size_t pick = 0;
          for (std::size_t k = 1; k < 3; ++k)
            if (ch[k] > ch[pick]) pick = k;
          tag = Tag::word(static_cast<Channel>(pick), w);
        }
      }
    }
    if (tag) used.insert({tag->kind == Tag::Kind::Filename ? 1 : 0, tag->text});
    out.tags.push_back(std::move(tag));
  }
  return out;
}

inline void to_json(nlohmann::json& j, const Tag& t) {
  j = nlohmann::json{{"kind", t.kind == Tag::Kind::Filename ? "filename" : "word"}, {"text", t.text}};
  if (t.kind == Tag::Kind::Word) j["channel"] = t.channel;
}

inline void from_json(const nlohmann::json& j, Tag& t) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "filename") {
    t = Tag::filename(j.at("text").get<std::string>());
  } else if (kind == "word") {
    t = Tag::word(j.at("channel").get<Channel>(), j.at("text").get<std::string>());
  } else {
    throw Error("unknown tag kind '" + kind + "'");
  }
}

}  // namespace clonetag
