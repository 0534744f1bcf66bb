#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "clonetag/clonedetect.hpp"
#include "clonetag/clustering.hpp"
#include "clonetag/corpus.hpp"
#include "clonetag/embedding.hpp"
#include "clonetag/error.hpp"
#include "clonetag/evaluation.hpp"
#include "clonetag/lexing.hpp"
#include "clonetag/report.hpp"
#include "clonetag/tagging.hpp"

namespace clonetag {

namespace fs = std::filesystem;

// ---- file helpers ----------------------------------------------------------

inline std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

inline void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("cannot write " + path.string());
  }
  fs::rename(tmp, path);
}

inline nlohmann::json read_json_file(const fs::path& path) {
  try {
    return nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("malformed JSON in " + path.string() + ": " + e.what());
  }
}

inline void write_json_file(const fs::path& path, const nlohmann::json& j) { write_text_file(path, j.dump(1) + "\n"); }

// ---- words -----------------------------------------------------------------

// Whole-file word sequences plus the catalog they were extracted from; stored
// as <dir>/words.jsonl (one record per file, in file_id order) and
// <dir>/catalog.json.
struct WordsBundle {
  ProductCatalog catalog;
  std::vector<WordSequence> files;

  WordSequence fragment(FileId file, std::uint32_t begin_line, std::uint32_t end_line) const {
    return files.at(file).slice(begin_line, end_line);
  }

  std::vector<WordSequence> sampled_reference(std::size_t stride) const {
    std::vector<WordSequence> out;
    for (const auto& rec : sample_reference_files(catalog, stride)) out.push_back(files.at(rec.file_id));
    return out;
  }
};

inline WordSequence file_words(const ProductCatalog& catalog, FileId id) {
  const auto text = read_source(catalog.absolute_path(id));
  const auto toks = tokenize(text);
  return extract_words(toks, 1, std::max<std::uint32_t>(1, count_lines(text)), id);
}

inline WordsBundle extract_corpus_words(const ProductCatalog& catalog) {
  WordsBundle b{catalog, {}};
  for (const auto& f : catalog.files()) b.files.push_back(file_words(catalog, f.file_id));
  return b;
}

inline void save_words(const fs::path& dir, const WordsBundle& b) {
  std::string lines;
  for (const auto& s : b.files) lines += nlohmann::json(s).dump() + "\n";
  write_text_file(dir / "words.jsonl", lines);
  write_json_file(dir / "catalog.json", b.catalog);
}

inline WordsBundle load_words(const fs::path& dir) {
  WordsBundle b;
  b.catalog = read_json_file(dir / "catalog.json").get<ProductCatalog>();
  std::istringstream in(read_text_file(dir / "words.jsonl"));
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      b.files.push_back(nlohmann::json::parse(line).get<WordSequence>());
    } catch (const nlohmann::json::exception& e) {
      throw Error("words.jsonl line " + std::to_string(n) + ": " + e.what());
    }
  }
  if (b.files.size() != b.catalog.files().size()) throw Error("words.jsonl does not match its catalog");
  for (std::size_t i = 0; i < b.files.size(); ++i)
    if (b.files[i].file_id != i) throw Error("words.jsonl records must be in file_id order");
  return b;
}

// ---- detection -------------------------------------------------------------

inline DetectionResult detect_catalog(const ProductCatalog& catalog, const DetectionParams& params, unsigned jobs) {
  std::vector<TokenizedFile> files;
  for (const auto& f : catalog.files())
    files.push_back(tokenize_file(f.file_id, catalog.role_of(f.file_id), read_source(catalog.absolute_path(f.file_id))));
  return detect_all(catalog, files, params, jobs);
}

// ---- clustering ------------------------------------------------------------

struct FragmentRef {
  FileId file_id = 0;
  std::uint32_t begin_line = 1;
  std::uint32_t end_line = 1;

  friend bool operator==(const FragmentRef&, const FragmentRef&) = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FragmentRef, file_id, begin_line, end_line)

// One clone class with its embedding clustering; what `tag` and `eval` consume.
struct ClusterRecord {
  Clustering clustering;
  std::vector<FragmentRef> fragments;

  friend bool operator==(const ClusterRecord&, const ClusterRecord&) = default;
};

inline void to_json(nlohmann::json& j, const ClusterRecord& r) {
  j = r.clustering;
  j["fragments"] = r.fragments;
}

inline void from_json(const nlohmann::json& j, ClusterRecord& r) {
  r.clustering = j.get<Clustering>();
  r.fragments = j.at("fragments").get<std::vector<FragmentRef>>();
  if (r.fragments.size() != r.clustering.assignment.size())
    throw Error("class " + std::to_string(r.clustering.class_id) + ": assignment does not match fragments");
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex m;
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        for (auto i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(m);
            if (!failure) failure = std::current_exception();
          }
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
}

// Infers a vector per fragment (one fixed seed, so equal word sequences get
// equal vectors) and clusters each class independently.
inline std::vector<ClusterRecord> cluster_classes(const std::vector<CloneClass>& classes, const WordsBundle& words,
                                                  const DocEmbeddingModel& model, const ClusterParams& params,
                                                  unsigned jobs = 1) {
  std::vector<ClusterRecord> out(classes.size());
  parallel_for(classes.size(), jobs, [&](std::size_t i) {
    const auto& cc = classes[i];
    std::vector<Vector> vecs;
    ClusterRecord rec;
    for (const auto& f : cc.fragments) {
      rec.fragments.push_back({f.file_id, f.begin_line, f.end_line});
      vecs.push_back(infer_vector(model, words.fragment(f.file_id, f.begin_line, f.end_line), params.seed).values);
    }
    rec.clustering = cluster_clone_class(vecs, params);
    rec.clustering.class_id = cc.class_id;
    out[i] = std::move(rec);
  });
  return out;
}

// ---- tagging and evaluation ------------------------------------------------

struct ClassTagInput {
  std::vector<ObFList> obf;
  std::vector<std::string> basenames;
};

inline ClassTagInput tag_input(const ClusterRecord& rec, const WordsBundle& words, const IdfTable& idf) {
  ClassTagInput in;
  for (const auto& f : rec.fragments) {
    in.obf.push_back(obf_list(words.fragment(f.file_id, f.begin_line, f.end_line), idf));
    in.basenames.push_back(words.catalog.file(f.file_id).basename);
  }
  return in;
}

inline std::vector<TagAssignment> tag_classes(const std::vector<ClusterRecord>& records, const WordsBundle& words,
                                              const IdfTable& idf, std::uint32_t top = 3, std::uint32_t block = 6) {
  std::vector<TagAssignment> out;
  for (const auto& rec : records) {
    const auto in = tag_input(rec, words, idf);
    out.push_back(assign_tags(rec.clustering, in.obf, in.basenames, top, block));
  }
  return out;
}

inline void to_json(nlohmann::json& j, const TagAssignment& t) {
  auto tags = nlohmann::json::array();
  auto labels = nlohmann::json::array();
  for (std::uint32_t i = 0; i < t.tags.size(); ++i) {
    tags.push_back(t.tags[i] ? nlohmann::json(*t.tags[i]) : nlohmann::json(nullptr));
    labels.push_back(render_label(t.tags[i], i));
  }
  j = nlohmann::json{{"class_id", t.class_id}, {"tags", tags}, {"labels", labels}};
}

inline void from_json(const nlohmann::json& j, TagAssignment& t) {
  t.class_id = j.at("class_id").get<std::uint32_t>();
  t.tags.clear();
  for (const auto& x : j.at("tags")) t.tags.push_back(x.is_null() ? std::nullopt : std::optional<Tag>(x.get<Tag>()));
}

struct EvaluationOutput {
  std::vector<ClassEvaluation> classes;
  SummaryTable summary;
};

inline void to_json(nlohmann::json& j, const EvaluationOutput& e) {
  j = nlohmann::json{{"classes", e.classes}, {"summary", e.summary}, {"table", e.summary.render()}};
}

inline void from_json(const nlohmann::json& j, EvaluationOutput& e) {
  e.classes = j.at("classes").get<std::vector<ClassEvaluation>>();
  e.summary = j.at("summary").get<SummaryTable>();
}

inline EvaluationOutput evaluate_classes(const std::vector<ClusterRecord>& records, const WordsBundle& words,
                                         const IdfTable& idf, std::uint64_t budget = 100000, std::uint32_t top = 3,
                                         std::uint32_t block = 6) {
  EvaluationOutput out;
  for (const auto& rec : records) {
    const auto in = tag_input(rec, words, idf);
    const auto n = rec.fragments.size();
    ClassEvaluation ce;
    ce.class_id = rec.clustering.class_id;
    ce.embedding = rec.clustering.assignment;
    ce.embedding_k = rec.clustering.k;
    ce.words_and_filenames = enumerate_tag_clusterings(
        candidate_groups(in.obf, in.basenames, TagUniverse::WordsAndFilenames, top, block), n, budget);
    ce.filenames_only = enumerate_tag_clusterings(
        candidate_groups(in.obf, in.basenames, TagUniverse::FilenamesOnly, top, block), n, budget);
    out.classes.push_back(std::move(ce));
  }
  out.summary = rq_summary(out.classes);
  return out;
}

// ---- pipeline --------------------------------------------------------------

struct PipelineConfig {
  std::string target;
  std::vector<std::string> references;
  std::vector<std::string> extensions{".c", ".h"};
  std::vector<std::string> exclude;
  std::string catalog;        // precomputed catalog.json; replaces scanning
  std::string clones;         // precomputed clone classes; replaces detection
  std::string clones_format = "native";  // native (file_id based) or import (path based)
  std::string work_dir = "clonetag-work";
  std::string out;            // report path; defaults to <work_dir>/report.json
  std::string source_root;    // used for bundled excerpts
  DetectionParams detection;
  unsigned jobs = 1;
  std::size_t stride = 20;
  TrainParams train;
  ClusterParams cluster;
  std::uint32_t top = 3;
  std::uint32_t block = 6;
  std::uint64_t budget = 100000;
  bool evaluate = false;
  bool bundle = false;
  bool force = false;  // ignore cached stage outputs

  void set_seed(std::uint64_t s) {
    train.seed = s;
    cluster.seed = s;
  }
};

struct StageRecord {
  std::string stage;
  bool cached = false;
};

struct PipelineResult {
  InvestigationReport report;
  std::vector<StageRecord> stages;
  std::optional<EvaluationOutput> evaluation;
  std::vector<std::string> warnings;

  bool was_cached(const std::string& stage) const {
    for (const auto& s : stages)
      if (s.stage == stage) return s.cached;
    throw Error("stage '" + stage + "' did not run");
  }
};

namespace detail {

inline std::string fingerprint(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

template <typename... Parts>
std::string key(const Parts&... parts) {
  std::ostringstream os;
  os.precision(17);
  ((os << parts << '\x1f'), ...);
  return fingerprint(os.str());
}

// Records the input key of every stage output in <work_dir>/stamps.json; an
// output is reused only when its recorded key matches.
class StageCache {
 public:
  StageCache(fs::path dir, bool force) : dir_(std::move(dir)), force_(force) {
    fs::create_directories(dir_);
    if (fs::exists(dir_ / "stamps.json")) {
      try {
        stamps_ = read_json_file(dir_ / "stamps.json");
      } catch (const Error&) {
        stamps_ = nlohmann::json::object();
      }
    }
    if (!stamps_.is_object()) stamps_ = nlohmann::json::object();
  }

  bool fresh(const std::string& stage, const std::string& key, const fs::path& output) const {
    return !force_ && fs::exists(output) && stamps_.value(stage, "") == key;
  }

  void stamp(const std::string& stage, const std::string& key) {
    stamps_[stage] = key;
    write_json_file(dir_ / "stamps.json", stamps_);
  }

  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  bool force_;
  nlohmann::json stamps_ = nlohmann::json::object();
};

inline std::string source_state(const ProductCatalog& catalog) {
  std::ostringstream os;
  for (const auto& f : catalog.files()) {
    const auto p = catalog.absolute_path(f.file_id);
    std::error_code ec;
    const auto size = fs::file_size(p, ec);
    const auto mtime = fs::last_write_time(p, ec).time_since_epoch().count();
    os << f.file_id << ':' << size << ':' << mtime << ';';
  }
  return os.str();
}

template <typename Fn>
auto stage(const std::string& name, std::ostream* out, Fn&& fn) {
  if (out) *out << "[" << name << "] ..." << std::endl;
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace detail

inline ProductCatalog scan_from_config(const PipelineConfig& cfg) {
  if (cfg.target.empty()) throw Error("no target product configured");
  std::vector<ScanRoot> roots{{cfg.target, Role::Target}};
  for (const auto& r : cfg.references) roots.push_back({r, Role::Reference});
  ScanOptions opts;
  opts.extensions = {cfg.extensions.begin(), cfg.extensions.end()};
  opts.exclude = cfg.exclude;
  return scan_products(roots, opts);
}

// scan -> words -> detect/import -> merge -> filter -> train/idf -> cluster ->
// tag -> report, caching every stage output in the work directory.
inline PipelineResult run_pipeline(const PipelineConfig& cfg, std::ostream* log = nullptr) {
  PipelineResult res;
  auto& stages = res.stages;
  detail::StageCache cache(cfg.work_dir, cfg.force);
  const fs::path dir = cfg.work_dir;
  auto note = [&](const std::string& s, bool cached) {
    stages.push_back({s, cached});
    if (log) *log << "  " << (cached ? "cached" : "done") << std::endl;
  };

  const auto catalog = detail::stage("scan", log, [&] {
    auto c = cfg.catalog.empty() ? scan_from_config(cfg) : read_json_file(cfg.catalog).get<ProductCatalog>();
    write_json_file(dir / "catalog.json", c);
    return c;
  });
  note("scan", false);
  const auto catalog_key = detail::key(nlohmann::json(catalog).dump(), detail::source_state(catalog));

  const auto words_key = detail::key("words", catalog_key);
  const auto words_dir = dir / "words.dir";
  const bool words_cached = cache.fresh("words", words_key, words_dir / "words.jsonl");
  const auto words = detail::stage("words", log, [&] {
    if (words_cached) return load_words(words_dir);
    auto b = extract_corpus_words(catalog);
    save_words(words_dir, b);
    cache.stamp("words", words_key);
    return b;
  });
  note("words", words_cached);

  std::string detect_key;
  if (cfg.clones.empty()) {
    detect_key = detail::key("detect", catalog_key, cfg.detection.min_tokens, cfg.detection.min_rnr,
                             cfg.detection.timeout_seconds);
  } else {
    detect_key = detail::key("import", catalog_key, cfg.clones_format, read_text_file(cfg.clones));
  }
  const bool detect_cached = cache.fresh("detect", detect_key, dir / "clones.json");
  const auto detection = detail::stage("detect", log, [&] {
    if (detect_cached) return read_json_file(dir / "clones.json").get<DetectionResult>();
    DetectionResult d;
    if (cfg.clones.empty()) {
      d = detect_catalog(catalog, cfg.detection, cfg.jobs);
    } else if (cfg.clones_format == "native") {
      d = read_json_file(cfg.clones).get<DetectionResult>();
      for (const auto& c : d.classes)
        for (const auto& f : c.fragments) catalog.file(f.file_id);
    } else if (cfg.clones_format == "import") {
      auto imported = import_report(read_json_file(cfg.clones), catalog);
      for (auto& w : imported.warnings) res.warnings.push_back(std::move(w));
      d.classes = filter_target(merge_clone_classes({imported.classes}));
      renumber(d.classes);
    } else {
      throw Error("unknown clones format '" + cfg.clones_format + "'");
    }
    write_json_file(dir / "clones.json", d);
    cache.stamp("detect", detect_key);
    return d;
  });
  note("detect", detect_cached);

  const auto& tp = cfg.train;
  const auto train_key = detail::key("train", words_key, cfg.stride, tp.dimension, tp.epochs, tp.negative, tp.alpha,
                                     tp.min_alpha, tp.seed);
  const bool train_cached = cache.fresh("train", train_key, dir / "model.bin");
  const auto model = detail::stage("train", log, [&] {
    if (train_cached) return DocEmbeddingModel::load((dir / "model.bin").string());
    const auto corpus = words.sampled_reference(cfg.stride);
    if (corpus.empty()) throw Error("no reference files to train on");
    auto m = train_doc_model(corpus, tp);
    m.save((dir / "model.bin").string());
    cache.stamp("train", train_key);
    return m;
  });
  note("train", train_cached);

  const auto idf_key = detail::key("idf", words_key, cfg.stride);
  const bool idf_cached = cache.fresh("idf", idf_key, dir / "idf.json");
  const auto idf = detail::stage("idf", log, [&] {
    if (idf_cached) return read_json_file(dir / "idf.json").get<IdfTable>();
    auto t = compute_idf(words.sampled_reference(cfg.stride));
    write_json_file(dir / "idf.json", t);
    cache.stamp("idf", idf_key);
    return t;
  });
  note("idf", idf_cached);

  const auto& cp = cfg.cluster;
  const auto cluster_key = detail::key("cluster", detect_key, train_key, words_key, cp.seed, cp.min_silhouette,
                                       cp.restarts, cp.max_iters);
  const bool cluster_cached = cache.fresh("cluster", cluster_key, dir / "clusters.json");
  const auto records = detail::stage("cluster", log, [&] {
    if (cluster_cached) return read_json_file(dir / "clusters.json").at("classes").get<std::vector<ClusterRecord>>();
    auto r = cluster_classes(detection.classes, words, model, cp, cfg.jobs);
    write_json_file(dir / "clusters.json", {{"classes", r}});
    cache.stamp("cluster", cluster_key);
    return r;
  });
  note("cluster", cluster_cached);

  const auto tag_key = detail::key("tag", cluster_key, idf_key, cfg.top, cfg.block);
  const bool tag_cached = cache.fresh("tag", tag_key, dir / "tags.json");
  const auto tags = detail::stage("tag", log, [&] {
    if (tag_cached) return read_json_file(dir / "tags.json").at("classes").get<std::vector<TagAssignment>>();
    auto t = tag_classes(records, words, idf, cfg.top, cfg.block);
    write_json_file(dir / "tags.json", {{"classes", t}});
    cache.stamp("tag", tag_key);
    return t;
  });
  note("tag", tag_cached);

  if (cfg.evaluate) {
    const auto eval_key = detail::key("eval", cluster_key, idf_key, cfg.budget, cfg.top, cfg.block);
    const bool eval_cached = cache.fresh("eval", eval_key, dir / "eval.json");
    res.evaluation = detail::stage("eval", log, [&] {
      if (eval_cached) return read_json_file(dir / "eval.json").get<EvaluationOutput>();
      auto e = evaluate_classes(records, words, idf, cfg.budget, cfg.top, cfg.block);
      write_json_file(dir / "eval.json", e);
      cache.stamp("eval", eval_key);
      return e;
    });
    note("eval", eval_cached);
  }

  res.report = detail::stage("report", log, [&] {
    std::vector<Clustering> clusterings;
    for (const auto& r : records) clusterings.push_back(r.clustering);
    auto rep = build_report(catalog, detection.classes, clusterings, tags, detection.timeouts);
    if (cfg.bundle) bundle_excerpts(rep, cfg.source_root);
    write_text_file(cfg.out.empty() ? dir / "report.json" : fs::path(cfg.out), serialize_report(rep));
    return rep;
  });
  note("report", false);
  return res;
}

}  // namespace clonetag
