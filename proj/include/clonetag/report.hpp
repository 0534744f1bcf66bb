#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "clonetag/clonedetect.hpp"
#include "clonetag/clustering.hpp"
#include "clonetag/corpus.hpp"
#include "clonetag/error.hpp"
#include "clonetag/tagging.hpp"

namespace clonetag {

struct ReportFragment {
  FileId file_id = 0;
  std::uint32_t begin_line = 1;
  std::uint32_t end_line = 1;
  Role role = Role::Reference;
  std::uint32_t cluster = 0;
  std::optional<std::string> excerpt;  // present in bundled reports

  friend bool operator==(const ReportFragment&, const ReportFragment&) = default;
};

struct ReportCluster {
  std::uint32_t index = 0;
  std::string label;          // rendered tag, or "#index"
  std::optional<Tag> tag;
  std::vector<std::uint32_t> members;  // fragment indices within the class

  friend bool operator==(const ReportCluster&, const ReportCluster&) = default;
};

struct ReportClass {
  std::uint32_t class_id = 0;
  std::vector<ReportFragment> fragments;
  std::uint32_t k = 1;
  std::optional<double> silhouette;
  std::vector<ReportCluster> clusters;

  friend bool operator==(const ReportClass&, const ReportClass&) = default;
};

struct FileAnnotation {
  std::uint32_t begin_line = 1;
  std::uint32_t end_line = 1;
  std::uint32_t class_id = 0;
  std::uint32_t cluster_index = 0;

  friend bool operator==(const FileAnnotation&, const FileAnnotation&) = default;
  friend auto operator<=>(const FileAnnotation&, const FileAnnotation&) = default;
};

struct Summary {
  std::uint64_t count = 0;
  double max = 0;
  double min = 0;
  double mean = 0;

  friend bool operator==(const Summary&, const Summary&) = default;
};

struct ReportStatistics {
  std::uint64_t classes = 0;
  std::uint64_t fragments = 0;
  Summary fragments_per_class;
  Summary clusters_per_class;  // over classes with k >= 2

  friend bool operator==(const ReportStatistics&, const ReportStatistics&) = default;
};

struct InvestigationReport {
  ProductCatalog catalog;
  std::vector<ReportClass> classes;
  std::map<FileId, std::vector<FileAnnotation>> file_index;
  ReportStatistics statistics;
  std::vector<std::string> timeouts;

  friend bool operator==(const InvestigationReport&, const InvestigationReport&) = default;

  const ReportClass* find_class(std::uint32_t class_id) const {
    auto it = std::lower_bound(classes.begin(), classes.end(), class_id,
                               [](const ReportClass& c, std::uint32_t id) { return c.class_id < id; });
    return it != classes.end() && it->class_id == class_id ? &*it : nullptr;
  }
};

inline Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  s.max = *std::max_element(xs.begin(), xs.end());
  s.min = *std::min_element(xs.begin(), xs.end());
  double sum = 0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  return s;
}

inline ReportStatistics compute_statistics(const std::vector<ReportClass>& classes) {
  ReportStatistics st;
  std::vector<double> frags, clusters;
  for (const auto& c : classes) {
    frags.push_back(static_cast<double>(c.fragments.size()));
    st.fragments += c.fragments.size();
    if (c.k >= 2) clusters.push_back(c.k);
  }
  st.classes = classes.size();
  st.fragments_per_class = summarize(frags);
  st.clusters_per_class = summarize(clusters);
  return st;
}

inline std::map<FileId, std::vector<FileAnnotation>> build_file_index(const std::vector<ReportClass>& classes) {
  std::map<FileId, std::vector<FileAnnotation>> index;
  for (const auto& c : classes)
    for (const auto& f : c.fragments) index[f.file_id].push_back({f.begin_line, f.end_line, c.class_id, f.cluster});
  for (auto& [_, v] : index) std::sort(v.begin(), v.end());
  return index;
}

// Joins clone classes with their clusterings and tag assignments (all keyed by
// class_id). Classes without a clustering are reported as one cluster.
inline InvestigationReport build_report(const ProductCatalog& catalog, const std::vector<CloneClass>& classes,
                                        const std::vector<Clustering>& clusterings,
                                        const std::vector<TagAssignment>& tags,
                                        std::vector<std::string> timeouts = {}) {
  std::map<std::uint32_t, const Clustering*> by_class;
  for (const auto& c : clusterings) by_class[c.class_id] = &c;
  std::map<std::uint32_t, const TagAssignment*> tags_by_class;
  for (const auto& t : tags) tags_by_class[t.class_id] = &t;

  InvestigationReport r;
  r.catalog = catalog;
  r.timeouts = std::move(timeouts);
  for (const auto& cc : classes) {
    ReportClass rc;
    rc.class_id = cc.class_id;
    Clustering cl{cc.class_id, std::vector<std::uint32_t>(cc.fragments.size(), 0), 1, std::nullopt};
    if (auto it = by_class.find(cc.class_id); it != by_class.end()) cl = *it->second;
    if (cl.assignment.size() != cc.fragments.size())
      throw Error("clustering of class " + std::to_string(cc.class_id) + " does not match its fragments");
    rc.k = cl.k;
    rc.silhouette = cl.silhouette;
    for (std::size_t i = 0; i < cc.fragments.size(); ++i) {
      const auto& f = cc.fragments[i];
      catalog.file(f.file_id);
      rc.fragments.push_back({f.file_id, f.begin_line, f.end_line, catalog.role_of(f.file_id), cl.assignment[i], {}});
    }
    const TagAssignment* ta = nullptr;
    if (auto it = tags_by_class.find(cc.class_id); it != tags_by_class.end()) ta = it->second;
    if (ta && ta->tags.size() != cl.k)
      throw Error("tag assignment of class " + std::to_string(cc.class_id) + " does not match its clusters");
    const auto members = clusters_of(cl);
    for (std::uint32_t c = 0; c < cl.k; ++c) {
      std::optional<Tag> tag = ta ? ta->tags[c] : std::nullopt;
      rc.clusters.push_back({c, render_label(tag, c), tag, members[c]});
    }
    r.classes.push_back(std::move(rc));
  }
  std::sort(r.classes.begin(), r.classes.end(),
            [](const ReportClass& a, const ReportClass& b) { return a.class_id < b.class_id; });
  for (std::size_t i = 1; i < r.classes.size(); ++i)
    if (r.classes[i].class_id == r.classes[i - 1].class_id)
      throw Error("duplicate class_id " + std::to_string(r.classes[i].class_id));
  r.file_index = build_file_index(r.classes);
  r.statistics = compute_statistics(r.classes);
  return r;
}

// Checks the structural invariants of a loaded report.
inline void validate_report(const InvestigationReport& r) {
  for (std::size_t i = 1; i < r.classes.size(); ++i)
    if (r.classes[i].class_id <= r.classes[i - 1].class_id) throw Error("classes must be sorted by unique class_id");
  for (const auto& c : r.classes) {
    const auto id = std::to_string(c.class_id);
    if (c.k < 1 || c.clusters.size() != c.k) throw Error("class " + id + ": cluster count does not match k");
    std::vector<std::uint32_t> seen(c.fragments.size(), 0);
    for (std::uint32_t ci = 0; ci < c.k; ++ci) {
      const auto& cl = c.clusters[ci];
      if (cl.index != ci) throw Error("class " + id + ": cluster indices must be 0..k-1");
      if (cl.label != render_label(cl.tag, ci)) throw Error("class " + id + ": label does not match tag");
      for (auto m : cl.members) {
        if (m >= c.fragments.size() || c.fragments[m].cluster != ci) throw Error("class " + id + ": bad member");
        ++seen[m];
      }
    }
    if (std::any_of(seen.begin(), seen.end(), [](std::uint32_t s) { return s != 1; }))
      throw Error("class " + id + ": clusters do not partition the fragments");
    for (const auto& f : c.fragments) {
      r.catalog.file(f.file_id);
      if (f.begin_line > f.end_line) throw Error("class " + id + ": inverted line range");
    }
  }
  if (build_file_index(r.classes) != r.file_index) throw Error("file index does not match classes");
  if (compute_statistics(r.classes) != r.statistics) throw Error("statistics do not match classes");
}

inline std::string line_range(const std::string& text, std::uint32_t begin, std::uint32_t end) {
  std::string out;
  std::uint32_t line = 1;
  std::size_t start = 0;
  while (start <= text.size() && line <= end) {
    auto nl = text.find('\n', start);
    const auto stop = nl == std::string::npos ? text.size() : nl + 1;
    if (line >= begin) out.append(text, start, stop - start);
    if (nl == std::string::npos) break;
    start = stop;
    ++line;
  }
  return out;
}

// Resolves a file's source on disk: source_root/product_id/relative_path when a
// root is given, otherwise the product root recorded in the catalog.
inline std::filesystem::path source_path(const ProductCatalog& catalog, FileId id,
                                         const std::filesystem::path& source_root = {}) {
  if (source_root.empty()) return catalog.absolute_path(id);
  const auto& f = catalog.file(id);
  return source_root / f.product_id / f.relative_path;
}

// Inlines each fragment's source lines into the report.
inline void bundle_excerpts(InvestigationReport& r, const std::filesystem::path& source_root = {}) {
  std::map<FileId, std::string> cache;
  for (auto& c : r.classes)
    for (auto& f : c.fragments) {
      auto it = cache.find(f.file_id);
      if (it == cache.end()) it = cache.emplace(f.file_id, read_source(source_path(r.catalog, f.file_id, source_root))).first;
      f.excerpt = line_range(it->second, f.begin_line, f.end_line);
    }
}

inline void to_json(nlohmann::json& j, const ReportFragment& f) {
  j = nlohmann::json{{"file_id", f.file_id}, {"begin_line", f.begin_line}, {"end_line", f.end_line},
                     {"role", f.role}, {"cluster", f.cluster}};
  if (f.excerpt) j["excerpt"] = *f.excerpt;
}

inline void from_json(const nlohmann::json& j, ReportFragment& f) {
  f.file_id = j.at("file_id").get<FileId>();
  f.begin_line = j.at("begin_line").get<std::uint32_t>();
  f.end_line = j.at("end_line").get<std::uint32_t>();
  f.role = j.at("role").get<Role>();
  f.cluster = j.at("cluster").get<std::uint32_t>();
  f.excerpt = j.contains("excerpt") ? std::optional<std::string>(j["excerpt"].get<std::string>()) : std::nullopt;
}

inline void to_json(nlohmann::json& j, const ReportCluster& c) {
  j = nlohmann::json{{"index", c.index}, {"label", c.label}, {"members", c.members}};
  j["tag"] = c.tag ? nlohmann::json(*c.tag) : nlohmann::json(nullptr);
}

inline void from_json(const nlohmann::json& j, ReportCluster& c) {
  c.index = j.at("index").get<std::uint32_t>();
  c.label = j.at("label").get<std::string>();
  c.members = j.at("members").get<std::vector<std::uint32_t>>();
  const auto& t = j.at("tag");
  c.tag = t.is_null() ? std::nullopt : std::optional<Tag>(t.get<Tag>());
}

inline void to_json(nlohmann::json& j, const ReportClass& c) {
  j = nlohmann::json{{"class_id", c.class_id}, {"fragments", c.fragments}, {"k", c.k}, {"clusters", c.clusters}};
  j["silhouette"] = c.silhouette ? nlohmann::json(*c.silhouette) : nlohmann::json(nullptr);
}

inline void from_json(const nlohmann::json& j, ReportClass& c) {
  c.class_id = j.at("class_id").get<std::uint32_t>();
  c.fragments = j.at("fragments").get<std::vector<ReportFragment>>();
  c.k = j.at("k").get<std::uint32_t>();
  c.clusters = j.at("clusters").get<std::vector<ReportCluster>>();
  const auto& s = j.at("silhouette");
  c.silhouette = s.is_null() ? std::nullopt : std::optional<double>(s.get<double>());
}

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FileAnnotation, begin_line, end_line, class_id, cluster_index)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Summary, count, max, min, mean)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ReportStatistics, classes, fragments, fragments_per_class, clusters_per_class)

inline void to_json(nlohmann::json& j, const InvestigationReport& r) {
  const auto& target = r.catalog.products().empty() ? std::string() : r.catalog.target().product_id;
  auto files = nlohmann::json::array();
  for (const auto& [id, anns] : r.file_index) files.push_back({{"file_id", id}, {"fragments", anns}});
  j = nlohmann::json{{"format", "clonetag-report"},
                     {"version", 1},
                     {"catalog", r.catalog},
                     {"summary", {{"target", target},
                                  {"products", r.catalog.products().size()},
                                  {"files", r.catalog.files().size()}}},
                     {"classes", r.classes},
                     {"file_index", files},
                     {"statistics", r.statistics},
                     {"timeouts", r.timeouts}};
}

inline void from_json(const nlohmann::json& j, InvestigationReport& r) {
  if (j.value("format", "") != "clonetag-report") throw Error("not a clonetag report");
  if (j.at("version").get<int>() != 1) throw Error("unsupported report version");
  r.catalog = j.at("catalog").get<ProductCatalog>();
  r.classes = j.at("classes").get<std::vector<ReportClass>>();
  r.file_index.clear();
  for (const auto& e : j.at("file_index"))
    r.file_index[e.at("file_id").get<FileId>()] = e.at("fragments").get<std::vector<FileAnnotation>>();
  r.statistics = j.at("statistics").get<ReportStatistics>();
  r.timeouts = j.at("timeouts").get<std::vector<std::string>>();
}

inline std::string serialize_report(const InvestigationReport& r) { return nlohmann::json(r).dump(1) + "\n"; }

inline InvestigationReport parse_report(const std::string& text) {
  InvestigationReport r;
  try {
    r = nlohmann::json::parse(text).get<InvestigationReport>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
  validate_report(r);
  return r;
}

inline InvestigationReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read report " + path.string());
  return parse_report(std::string(std::istreambuf_iterator<char>(in), {}));
}

}  // namespace clonetag
