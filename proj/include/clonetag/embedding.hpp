#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "clonetag/error.hpp"
#include "clonetag/lexing.hpp"

namespace clonetag {

struct TrainParams {
  std::uint32_t dimension = 100;
  std::uint32_t epochs = 20;
  std::uint32_t negative = 5;
  double alpha = 0.025;
  double min_alpha = 0.0001;
  std::uint64_t seed = 1;

  friend bool operator==(const TrainParams&, const TrainParams&) = default;
};

// Deterministic 64-bit generator; doubles are built from the top 53 bits so that
// streams are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Distributed bag-of-words paragraph vectors trained with negative sampling.
// Word output weights are shared; each training document owns one vector.
class DocEmbeddingModel {
 public:
  static constexpr std::uint32_t kVersion = 1;
  static constexpr char kMagic[8] = {'C', 'L', 'N', 'T', 'A', 'G', 'D', 'V'};

  DocEmbeddingModel() = default;

  std::uint32_t dimension() const noexcept { return params_.dimension; }
  const TrainParams& params() const noexcept { return params_; }
  std::size_t vocabulary_size() const noexcept { return words_.size(); }
  std::size_t document_count() const noexcept {
    return params_.dimension ? doc_vectors_.size() / params_.dimension : 0;
  }
  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  const std::vector<double>& output_weights() const noexcept { return output_; }

  std::optional<std::uint32_t> index_of(const std::string& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::span<const double> doc_vector(std::size_t doc) const {
    return {doc_vectors_.data() + doc * params_.dimension, params_.dimension};
  }

  bool all_finite() const {
    auto finite = [](double v) { return std::isfinite(v); };
    return std::all_of(output_.begin(), output_.end(), finite) &&
           std::all_of(doc_vectors_.begin(), doc_vectors_.end(), finite);
  }

  friend bool operator==(const DocEmbeddingModel& a, const DocEmbeddingModel& b) {
    return a.params_ == b.params_ && a.words_ == b.words_ && a.counts_ == b.counts_ &&
           bitwise_equal(a.output_, b.output_) && bitwise_equal(a.doc_vectors_, b.doc_vectors_);
  }

  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write model " + path);
    out.write(kMagic, sizeof kMagic);
    put32(out, kVersion);
    put32(out, params_.dimension);
    put32(out, static_cast<std::uint32_t>(words_.size()));
    put32(out, static_cast<std::uint32_t>(document_count()));
    put32(out, params_.epochs);
    put32(out, params_.negative);
    putf(out, params_.alpha);
    putf(out, params_.min_alpha);
    put64(out, params_.seed);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      put32(out, static_cast<std::uint32_t>(words_[i].size()));
      out.write(words_[i].data(), static_cast<std::streamsize>(words_[i].size()));
      put64(out, counts_[i]);
    }
    for (double v : output_) putf(out, v);
    for (double v : doc_vectors_) putf(out, v);
    if (!out) throw Error("error writing model " + path);
  }

  static DocEmbeddingModel load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read model " + path);
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0)
      throw Error(path + " is not a document embedding model");
    if (get32(in) != kVersion) throw Error(path + ": unsupported model version");
    DocEmbeddingModel m;
    m.params_.dimension = get32(in);
    const auto vocab = get32(in);
    const auto docs = get32(in);
    m.params_.epochs = get32(in);
    m.params_.negative = get32(in);
    m.params_.alpha = getf(in);
    m.params_.min_alpha = getf(in);
    m.params_.seed = get64(in);
    for (std::uint32_t i = 0; i < vocab; ++i) {
      std::string w(get32(in), '\0');
      in.read(w.data(), static_cast<std::streamsize>(w.size()));
      m.words_.push_back(std::move(w));
      m.counts_.push_back(get64(in));
    }
    m.output_.resize(static_cast<std::size_t>(vocab) * m.params_.dimension);
    for (auto& v : m.output_) v = getf(in);
    m.doc_vectors_.resize(static_cast<std::size_t>(docs) * m.params_.dimension);
    for (auto& v : m.doc_vectors_) v = getf(in);
    if (!in) throw Error(path + ": truncated model file");
    m.build_index();
    return m;
  }

 private:
  friend DocEmbeddingModel train_doc_model(const std::vector<WordSequence>&, const TrainParams&);
  friend std::vector<double> infer_vector_impl(const DocEmbeddingModel&, const WordSequence&,
                                               std::uint64_t, bool*);

  static bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
  }

  void build_index() {
    index_.clear();
    for (std::size_t i = 0; i < words_.size(); ++i)
      index_[words_[i]] = static_cast<std::uint32_t>(i);
    cumulative_.resize(counts_.size());
    double total = 0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      total += std::pow(static_cast<double>(counts_[i]), 0.75);
      cumulative_[i] = total;
    }
  }

  std::uint32_t sample_negative(Rng& rng) const {
    const double r = rng.uniform() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
    return static_cast<std::uint32_t>(
        std::min<std::ptrdiff_t>(it - cumulative_.begin(), cumulative_.size() - 1));
  }

  // One positive plus `negative` sampled targets. The vector is moved along the
  // accumulated gradient; output weights are updated only when `trainable` is
  // non-null (it then aliases output_).
  void step(std::span<double> vec, std::uint32_t word, double alpha, Rng& rng,
            std::vector<double>& grad, double* trainable) const {
    const auto dim = params_.dimension;
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::uint32_t s = 0; s <= params_.negative; ++s) {
      std::uint32_t target = word;
      double label = 1.0;
      if (s > 0) {
        target = sample_negative(rng);
        if (target == word) continue;
        label = 0.0;
      }
      const std::size_t row = static_cast<std::size_t>(target) * dim;
      const double* w = output_.data() + row;
      double dot = 0;
      for (std::uint32_t k = 0; k < dim; ++k) dot += vec[k] * w[k];
      const double f = dot > 30 ? 1.0 : dot < -30 ? 0.0 : 1.0 / (1.0 + std::exp(-dot));
      const double g = (label - f) * alpha;
      for (std::uint32_t k = 0; k < dim; ++k) grad[k] += g * w[k];
      if (trainable)
        for (std::uint32_t k = 0; k < dim; ++k) trainable[row + k] += g * vec[k];
    }
    for (std::uint32_t k = 0; k < dim; ++k) vec[k] += grad[k];
  }

  static void put32(std::ostream& o, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) o.put(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  static void put64(std::ostream& o, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) o.put(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  static void putf(std::ostream& o, double v) { put64(o, std::bit_cast<std::uint64_t>(v)); }
  static std::uint32_t get32(std::istream& in) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in.get())) << (8 * i);
    return v;
  }
  static std::uint64_t get64(std::istream& in) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in.get())) << (8 * i);
    return v;
  }
  static double getf(std::istream& in) { return std::bit_cast<double>(get64(in)); }

  TrainParams params_;
  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<double> cumulative_;
  std::vector<double> output_;       // vocab x dimension
  std::vector<double> doc_vectors_;  // documents x dimension
};

// Trains single-threaded; the result is a pure function of (corpus, params).
inline DocEmbeddingModel train_doc_model(const std::vector<WordSequence>& corpus,
                                         const TrainParams& params) {
  if (corpus.empty()) throw Error("cannot train a document model on an empty corpus");
  if (params.dimension < 2) throw Error("embedding dimension must be >= 2");
  if (params.epochs == 0) throw Error("epochs must be >= 1");

  DocEmbeddingModel m;
  m.params_ = params;
  std::map<std::string, std::uint64_t> freq;
  std::uint64_t total_words = 0;
  for (const auto& doc : corpus)
    for (const auto& w : doc.words) {
      ++freq[w.text];
      ++total_words;
    }
  std::vector<std::pair<std::string, std::uint64_t>> vocab(freq.begin(), freq.end());
  std::stable_sort(vocab.begin(), vocab.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (auto& [w, c] : vocab) {
    m.words_.push_back(w);
    m.counts_.push_back(c);
  }
  m.build_index();

  const auto dim = params.dimension;
  m.output_.assign(m.words_.size() * dim, 0.0);
  m.doc_vectors_.resize(corpus.size() * dim);
  Rng rng(params.seed);
  for (auto& v : m.doc_vectors_) v = (rng.uniform() - 0.5) / dim;

  std::vector<std::vector<std::uint32_t>> docs;
  for (const auto& d : corpus) {
    std::vector<std::uint32_t> ids;
    for (const auto& w : d.words) ids.push_back(m.index_.at(w.text));
    docs.push_back(std::move(ids));
  }

  std::vector<double> grad(dim);
  const double total = static_cast<double>(params.epochs) * static_cast<double>(std::max<std::uint64_t>(total_words, 1));
  double done = 0;
  for (std::uint32_t epoch = 0; epoch < params.epochs; ++epoch) {
    for (std::size_t d = 0; d < docs.size(); ++d) {
      std::span<double> vec(m.doc_vectors_.data() + d * dim, dim);
      for (auto word : docs[d]) {
        const double alpha =
            std::max(params.min_alpha, params.alpha - (params.alpha - params.min_alpha) * done / total);
        m.step(vec, word, alpha, rng, grad, m.output_.data());
        done += 1;
      }
    }
  }
  return m;
}

inline std::vector<double> infer_vector_impl(const DocEmbeddingModel& model, const WordSequence& doc,
                                             std::uint64_t seed, bool* out_of_vocabulary) {
  const auto dim = model.params_.dimension;
  std::vector<std::uint32_t> ids;
  for (const auto& w : doc.words)
    if (auto id = model.index_of(w.text)) ids.push_back(*id);
  if (out_of_vocabulary) *out_of_vocabulary = ids.empty();
  std::vector<double> vec(dim, 0.0);
  if (ids.empty()) return vec;

  Rng rng(seed);
  for (auto& v : vec) v = (rng.uniform() - 0.5) / dim;
  std::vector<double> grad(dim);
  const auto& p = model.params_;
  const double total = static_cast<double>(p.epochs) * static_cast<double>(ids.size());
  double done = 0;
  for (std::uint32_t epoch = 0; epoch < p.epochs; ++epoch) {
    for (auto word : ids) {
      const double alpha = std::max(p.min_alpha, p.alpha - (p.alpha - p.min_alpha) * done / total);
      model.step(vec, word, alpha, rng, grad, nullptr);
      done += 1;
    }
  }
  return vec;
}

struct InferredVector {
  std::vector<double> values;
  bool out_of_vocabulary = false;  // no known words: values are all zero
};

// Fits a fresh document vector against the frozen output weights. Unknown words
// are ignored.
inline InferredVector infer_vector(const DocEmbeddingModel& model, const WordSequence& doc,
                                   std::uint64_t seed) {
  InferredVector r;
  r.values = infer_vector_impl(model, doc, seed, &r.out_of_vocabulary);
  return r;
}

inline double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0;
  return dot / std::sqrt(na * nb);
}

// Inverse document frequency over reference files:
//   idf(w) = ln((d + 1) / (c(w) + 1)) + 1
class IdfTable {
 public:
  IdfTable() = default;
  IdfTable(std::uint64_t d, std::map<std::string, std::uint64_t> counts)
      : d_(d), counts_(std::move(counts)) {
    for (const auto& [w, c] : counts_) {
      if (c > d_) throw Error("document count of '" + w + "' exceeds d");
      values_[w] = formula(d_, c);
    }
  }

  static double formula(std::uint64_t d, std::uint64_t c) {
    return std::log((static_cast<double>(d) + 1.0) / (static_cast<double>(c) + 1.0)) + 1.0;
  }

  std::uint64_t d() const noexcept { return d_; }
  const std::map<std::string, std::uint64_t>& counts() const noexcept { return counts_; }

  std::uint64_t count(const std::string& w) const {
    auto it = counts_.find(w);
    return it == counts_.end() ? 0 : it->second;
  }

  double value(const std::string& w) const {
    auto it = values_.find(w);
    return it == values_.end() ? formula(d_, 0) : it->second;
  }

  friend bool operator==(const IdfTable& a, const IdfTable& b) {
    return a.d_ == b.d_ && a.counts_ == b.counts_;
  }

 private:
  std::uint64_t d_ = 0;
  std::map<std::string, std::uint64_t> counts_;
  std::map<std::string, double> values_;
};

inline IdfTable compute_idf(const std::vector<WordSequence>& files) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& f : files) {
    std::vector<std::string> seen;
    for (const auto& w : f.words) seen.push_back(w.text);
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (auto& w : seen) ++counts[w];
  }
  return IdfTable(files.size(), std::move(counts));
}

inline void to_json(nlohmann::json& j, const IdfTable& t) {
  j = nlohmann::json{{"d", t.d()}, {"counts", t.counts()}};
}

inline void from_json(const nlohmann::json& j, IdfTable& t) {
  t = IdfTable(j.at("d").get<std::uint64_t>(),
               j.at("counts").get<std::map<std::string, std::uint64_t>>());
}

}  // namespace clonetag
