#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "clonetag/corpus.hpp"
#include "clonetag/lexing.hpp"

namespace clonetag {

struct CodeFragment {
  FileId file_id = 0;
  std::uint32_t begin_line = 1;
  std::uint32_t end_line = 1;
  std::uint32_t begin_token = 0;  // index into the file's normalized token sequence
  std::uint32_t end_token = 1;    // exclusive
  Role role = Role::Reference;

  friend bool operator==(const CodeFragment&, const CodeFragment&) = default;
};

// Physical identity of a fragment: same file and same line range.
using FragmentKey = std::tuple<FileId, std::uint32_t, std::uint32_t>;

inline FragmentKey key_of(const CodeFragment& f) { return {f.file_id, f.begin_line, f.end_line}; }

struct CloneClass {
  std::uint32_t class_id = 0;
  std::vector<CodeFragment> fragments;

  friend bool operator==(const CloneClass&, const CloneClass&) = default;
};

struct DetectionParams {
  std::size_t min_tokens = 50;
  double min_rnr = 0.3;
  double timeout_seconds = 300;
};

struct TokenizedFile {
  FileId file_id = 0;
  Role role = Role::Reference;
  std::vector<std::string> tokens;   // normalized
  std::vector<std::uint32_t> lines;  // line of each normalized token
};

inline TokenizedFile tokenize_file(FileId id, Role role, std::string_view text) {
  const auto toks = tokenize(text);
  TokenizedFile f{id, role, {}, {}};
  for (auto& nt : normalize_tokens(toks)) {
    f.lines.push_back(toks[nt.source_index].line);
    f.tokens.push_back(std::move(nt.text));
  }
  return f;
}

// Ratio of distinct token 4-grams to all token 4-grams; 1.0 below four tokens.
inline double rnr(std::span<const std::string> tokens) {
  if (tokens.size() < 4) return 1.0;
  std::set<std::span<const std::string>, decltype([](auto a, auto b) {
             return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
           })>
      grams;
  const auto total = tokens.size() - 3;
  for (std::size_t i = 0; i < total; ++i) grams.insert(tokens.subspan(i, 4));
  return static_cast<double>(grams.size()) / static_cast<double>(total);
}

// Sorts fragments, collapses physical duplicates (first occurrence wins).
inline void canonicalize(CloneClass& c) {
  std::stable_sort(c.fragments.begin(), c.fragments.end(),
                   [](const CodeFragment& a, const CodeFragment& b) { return key_of(a) < key_of(b); });
  c.fragments.erase(std::unique(c.fragments.begin(), c.fragments.end(),
                                [](const CodeFragment& a, const CodeFragment& b) {
                                  return key_of(a) == key_of(b);
                                }),
                    c.fragments.end());
}

inline void renumber(std::vector<CloneClass>& classes) {
  std::sort(classes.begin(), classes.end(), [](const CloneClass& a, const CloneClass& b) {
    return std::lexicographical_compare(
        a.fragments.begin(), a.fragments.end(), b.fragments.begin(), b.fragments.end(),
        [](const CodeFragment& x, const CodeFragment& y) { return key_of(x) < key_of(y); });
  });
  for (std::size_t i = 0; i < classes.size(); ++i) classes[i].class_id = static_cast<std::uint32_t>(i);
}

namespace detail {

struct Timeout {};

class Deadline {
 public:
  explicit Deadline(double seconds)
      : end_(std::chrono::steady_clock::now() +
             std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                 std::chrono::duration<double>(seconds))) {}

  void check() {
    if ((++ticks_ & 0xFFF) == 0 && std::chrono::steady_clock::now() > end_) throw Timeout{};
  }
  void check_now() const {
    if (std::chrono::steady_clock::now() >= end_) throw Timeout{};
  }

 private:
  std::chrono::steady_clock::time_point end_;
  std::uint64_t ticks_ = 0;
};

// Prefix-doubling suffix array over integer symbols.
inline std::vector<std::uint32_t> suffix_array(const std::vector<std::int64_t>& s, Deadline& dl) {
  const auto n = s.size();
  std::vector<std::uint32_t> sa(n);
  std::iota(sa.begin(), sa.end(), 0u);
  if (n == 0) return sa;
  std::vector<std::int64_t> rank(s), tmp(n);
  for (std::size_t k = 1;; k <<= 1) {
    auto key2 = [&](std::uint32_t i) { return i + k < n ? rank[i + k] : std::int64_t{-1}; };
    std::sort(sa.begin(), sa.end(), [&](std::uint32_t a, std::uint32_t b) {
      dl.check();
      if (rank[a] != rank[b]) return rank[a] < rank[b];
      return key2(a) < key2(b);
    });
    tmp[sa[0]] = 0;
    for (std::size_t i = 1; i < n; ++i) {
      const bool differ = rank[sa[i - 1]] != rank[sa[i]] || key2(sa[i - 1]) != key2(sa[i]);
      tmp[sa[i]] = tmp[sa[i - 1]] + (differ ? 1 : 0);
    }
    rank.swap(tmp);
    if (rank[sa[n - 1]] == static_cast<std::int64_t>(n - 1)) break;
  }
  return sa;
}

// lcp[i] = longest common prefix of suffixes sa[i-1] and sa[i]; lcp[0] = 0.
inline std::vector<std::uint32_t> lcp_array(const std::vector<std::int64_t>& s,
                                            const std::vector<std::uint32_t>& sa) {
  const auto n = s.size();
  std::vector<std::uint32_t> rank(n), lcp(n, 0);
  for (std::size_t i = 0; i < n; ++i) rank[sa[i]] = static_cast<std::uint32_t>(i);
  std::size_t h = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rank[i] > 0) {
      const std::size_t j = sa[rank[i] - 1];
      while (i + h < n && j + h < n && s[i + h] == s[j + h]) ++h;
      lcp[rank[i]] = static_cast<std::uint32_t>(h);
      if (h > 0) --h;
    } else {
      h = 0;
    }
  }
  return lcp;
}

}  // namespace detail

struct PairResult {
  std::vector<CloneClass> classes;
  bool timed_out = false;
};

// Finds every maximal repeat of at least min_tokens normalized tokens across the
// given files and turns each one into a clone class of its occurrences.
inline PairResult detect_pairwise(std::span<const TokenizedFile> target,
                                  std::span<const TokenizedFile> reference,
                                  const DetectionParams& params) {
  if (params.min_tokens < 2) throw Error("min_tokens must be >= 2");
  std::vector<const TokenizedFile*> files;
  for (const auto& f : target) files.push_back(&f);
  for (const auto& f : reference) files.push_back(&f);

  std::unordered_map<std::string, std::int64_t> ids;
  std::vector<std::int64_t> seq;
  std::vector<std::uint32_t> owner;   // file index per position
  std::vector<std::uint32_t> offset;  // token offset within the file
  for (std::size_t fi = 0; fi < files.size(); ++fi) {
    const auto& toks = files[fi]->tokens;
    for (std::size_t k = 0; k < toks.size(); ++k) {
      auto [it, _] = ids.try_emplace(toks[k], static_cast<std::int64_t>(ids.size()));
      seq.push_back(it->second);
      owner.push_back(static_cast<std::uint32_t>(fi));
      offset.push_back(static_cast<std::uint32_t>(k));
    }
    seq.push_back(-1);  // sentinel placeholder, made unique below
    owner.push_back(static_cast<std::uint32_t>(fi));
    offset.push_back(static_cast<std::uint32_t>(toks.size()));
  }
  const auto vocab = static_cast<std::int64_t>(ids.size());
  std::int64_t next_sentinel = vocab;
  for (auto& v : seq)
    if (v < 0) v = next_sentinel++;

  PairResult result;
  detail::Deadline deadline(params.timeout_seconds);
  try {
    deadline.check_now();
    const auto sa = detail::suffix_array(seq, deadline);
    const auto lcp = detail::lcp_array(seq, sa);
    const auto m = static_cast<std::uint32_t>(params.min_tokens);

    auto emit = [&](std::uint32_t len, std::size_t lb, std::size_t rb) {
      if (len < m) return;
      std::int64_t left = -2;
      bool diverse = false;
      for (std::size_t i = lb; i <= rb && !diverse; ++i) {
        const auto p = sa[i];
        const std::int64_t prev = p == 0 ? -1 - static_cast<std::int64_t>(i) : seq[p - 1];
        if (prev >= vocab || prev < 0) {
          diverse = true;  // sentinel or start of input: unique left context
        } else if (left == -2) {
          left = prev;
        } else if (left != prev) {
          diverse = true;
        }
      }
      if (!diverse) return;
      const auto& first = *files[owner[sa[lb]]];
      const std::span<const std::string> content(first.tokens.data() + offset[sa[lb]], len);
      if (rnr(content) < params.min_rnr) return;
      CloneClass c;
      for (std::size_t i = lb; i <= rb; ++i) {
        deadline.check();
        const auto p = sa[i];
        const auto& f = *files[owner[p]];
        const auto b = offset[p];
        c.fragments.push_back({f.file_id, f.lines[b], f.lines[b + len - 1], b, b + len, f.role});
      }
      canonicalize(c);
      if (c.fragments.size() >= 2) result.classes.push_back(std::move(c));
    };

    struct Interval {
      std::uint32_t lcp;
      std::size_t lb;
    };
    std::vector<Interval> stack{{0, 0}};
    const auto n = seq.size();
    for (std::size_t i = 1; i <= n; ++i) {
      deadline.check();
      const std::uint32_t cur = i < n ? lcp[i] : 0;
      std::size_t lb = i - 1;
      while (cur < stack.back().lcp) {
        const auto top = stack.back();
        stack.pop_back();
        emit(top.lcp, top.lb, i - 1);
        lb = top.lb;
      }
      if (cur > stack.back().lcp) stack.push_back({cur, lb});
    }
  } catch (const detail::Timeout&) {
    result.classes.clear();
    result.timed_out = true;
    return result;
  }
  renumber(result.classes);
  return result;
}

// Union of classes that share a physically identical fragment (transitively).
inline std::vector<CloneClass> merge_clone_classes(const std::vector<std::vector<CloneClass>>& runs) {
  std::vector<const CloneClass*> all;
  for (const auto& run : runs)
    for (const auto& c : run) all.push_back(&c);

  std::vector<std::size_t> parent(all.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<FragmentKey, std::size_t> owner;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (const auto& f : all[i]->fragments) {
      auto [it, inserted] = owner.emplace(key_of(f), i);
      if (!inserted) {
        const auto a = find(it->second), b = find(i);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::map<std::size_t, CloneClass> groups;
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto& g = groups[find(i)];
    g.fragments.insert(g.fragments.end(), all[i]->fragments.begin(), all[i]->fragments.end());
  }
  std::vector<CloneClass> out;
  for (auto& [_, c] : groups) {
    canonicalize(c);
    if (c.fragments.size() >= 2) out.push_back(std::move(c));
  }
  renumber(out);
  return out;
}

inline std::vector<CloneClass> filter_target(const std::vector<CloneClass>& classes) {
  std::vector<CloneClass> out;
  for (const auto& c : classes)
    if (std::any_of(c.fragments.begin(), c.fragments.end(),
                    [](const CodeFragment& f) { return f.role == Role::Target; }))
      out.push_back(c);
  return out;
}

struct DetectionResult {
  std::vector<CloneClass> classes;
  std::vector<std::string> timeouts;  // reference product ids whose run was abandoned

  friend bool operator==(const DetectionResult&, const DetectionResult&) = default;
};

// Runs the target against every reference product (jobs workers), then merges
// and keeps only classes that touch the target.
inline DetectionResult detect_all(const ProductCatalog& catalog,
                                  const std::vector<TokenizedFile>& files,
                                  const DetectionParams& params, unsigned jobs = 1) {
  std::vector<TokenizedFile> target;
  std::map<std::string, std::vector<TokenizedFile>> refs;
  for (const auto& f : files) {
    const auto& rec = catalog.file(f.file_id);
    if (catalog.role_of(f.file_id) == Role::Target)
      target.push_back(f);
    else
      refs[rec.product_id].push_back(f);
  }
  std::vector<std::string> products = catalog.reference_product_ids();
  if (products.empty()) products.emplace_back();
  std::vector<PairResult> results(products.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto i = next++; i < products.size(); i = next++) {
      static const std::vector<TokenizedFile> none;
      const auto it = refs.find(products[i]);
      results[i] = detect_pairwise(target, it == refs.end() ? none : it->second, params);
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(products.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  DetectionResult out;
  std::vector<std::vector<CloneClass>> runs;
  for (std::size_t i = 0; i < products.size(); ++i) {
    if (results[i].timed_out) out.timeouts.push_back(products[i]);
    runs.push_back(std::move(results[i].classes));
  }
  out.classes = filter_target(merge_clone_classes(runs));
  renumber(out.classes);
  return out;
}

inline void to_json(nlohmann::json& j, const CodeFragment& f) {
  j = nlohmann::json{{"file_id", f.file_id},         {"begin_line", f.begin_line},
                     {"end_line", f.end_line},       {"begin_token", f.begin_token},
                     {"end_token", f.end_token},     {"role", f.role}};
}

inline void from_json(const nlohmann::json& j, CodeFragment& f) {
  f.file_id = j.at("file_id").get<FileId>();
  f.begin_line = j.at("begin_line").get<std::uint32_t>();
  f.end_line = j.at("end_line").get<std::uint32_t>();
  f.begin_token = j.value("begin_token", 0u);
  f.end_token = j.value("end_token", f.begin_token + 1);
  f.role = j.value("role", Role::Reference);
  if (f.begin_line > f.end_line) throw Error("fragment has begin_line > end_line");
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CloneClass, class_id, fragments)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DetectionResult, classes, timeouts)

struct ImportResult {
  std::vector<CloneClass> classes;
  std::vector<std::string> warnings;
};

// Reads an external clone report:
//   {"classes": [[{"path": P, "begin_line": B, "end_line": E}, ...], ...]}
// (a class may also be written as {"fragments": [...]}). P is either
// "<product_id>/<relative_path>", an absolute path below a product root, or a
// relative path that is unique in the catalog.
inline ImportResult import_report(const nlohmann::json& report, const ProductCatalog& catalog) {
  if (!report.is_object() || !report.contains("classes") || !report.at("classes").is_array())
    throw Error("import report must be an object with a 'classes' array");

  std::map<std::string, FileId> qualified, absolute;
  std::map<std::string, std::vector<FileId>> relative;
  for (const auto& f : catalog.files()) {
    qualified[f.product_id + "/" + f.relative_path] = f.file_id;
    absolute[catalog.absolute_path(f.file_id).lexically_normal().string()] = f.file_id;
    relative[f.relative_path].push_back(f.file_id);
  }
  auto resolve = [&](const std::string& path) -> std::optional<FileId> {
    if (auto it = qualified.find(path); it != qualified.end()) return it->second;
    const auto norm = std::filesystem::path(path).lexically_normal().string();
    if (auto it = absolute.find(norm); it != absolute.end()) return it->second;
    if (auto it = relative.find(path); it != relative.end() && it->second.size() == 1)
      return it->second.front();
    return std::nullopt;
  };

  std::map<FileId, TokenizedFile> token_cache;
  auto token_lines = [&](FileId id) -> const TokenizedFile& {
    auto it = token_cache.find(id);
    if (it == token_cache.end()) {
      it = token_cache
               .emplace(id, tokenize_file(id, catalog.role_of(id),
                                          read_source(catalog.absolute_path(id))))
               .first;
    }
    return it->second;
  };

  ImportResult out;
  std::size_t index = 0;
  for (const auto& entry : report.at("classes")) {
    const auto& frags = entry.is_object() ? entry.at("fragments") : entry;
    if (!frags.is_array()) throw Error("clone class " + std::to_string(index) + " is not a list");
    CloneClass c;
    bool ok = true;
    for (const auto& fj : frags) {
      const auto path = fj.at("path").get<std::string>();
      const auto b = fj.at("begin_line").get<std::uint32_t>();
      const auto e = fj.at("end_line").get<std::uint32_t>();
      if (b > e)
        throw Error("clone class " + std::to_string(index) + ": begin_line > end_line for " + path);
      if (b == 0) throw Error("clone class " + std::to_string(index) + ": line numbers start at 1");
      const auto id = resolve(path);
      if (!id) {
        out.warnings.push_back("class " + std::to_string(index) + ": unknown path '" + path +
                               "', class skipped");
        ok = false;
        continue;
      }
      CodeFragment f{*id, b, e, 0, 1, catalog.role_of(*id)};
      try {
        const auto& tf = token_lines(*id);
        const auto lo = std::lower_bound(tf.lines.begin(), tf.lines.end(), b) - tf.lines.begin();
        const auto hi = std::upper_bound(tf.lines.begin(), tf.lines.end(), e) - tf.lines.begin();
        if (hi > lo) {
          f.begin_token = static_cast<std::uint32_t>(lo);
          f.end_token = static_cast<std::uint32_t>(hi);
        }
      } catch (const Error& err) {
        out.warnings.push_back("class " + std::to_string(index) + ": " + err.what() +
                               "; token range unavailable");
      }
      c.fragments.push_back(f);
    }
    ++index;
    if (!ok) continue;
    canonicalize(c);
    if (c.fragments.size() < 2) {
      out.warnings.push_back("class " + std::to_string(index - 1) +
                             ": fewer than 2 distinct fragments, class skipped");
      continue;
    }
    out.classes.push_back(std::move(c));
  }
  renumber(out.classes);
  return out;
}

}  // namespace clonetag
