#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "json.hpp"

#include "clonetag/embedding.hpp"
#include "clonetag/error.hpp"

namespace clonetag {

using Vector = std::vector<double>;

struct Clustering {
  std::uint32_t class_id = 0;
  std::vector<std::uint32_t> assignment;  // fragment index -> cluster index
  std::uint32_t k = 1;
  std::optional<double> silhouette;      // unset when k == 1

  friend bool operator==(const Clustering&, const Clustering&) = default;
};

struct KMeansResult {
  std::vector<std::uint32_t> assignment;
  std::vector<Vector> centroids;
  double sse = 0;
};

inline double squared_distance(const Vector& a, const Vector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

inline double euclidean(const Vector& a, const Vector& b) { return std::sqrt(squared_distance(a, b)); }

// Relabels clusters 0..k-1 in order of first appearance.
inline std::vector<std::uint32_t> canonical_labels(const std::vector<std::uint32_t>& labels) {
  std::vector<std::uint32_t> out(labels.size());
  std::vector<std::int64_t> map;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= map.size()) map.resize(labels[i] + 1, -1);
    if (map[labels[i]] < 0)
      map[labels[i]] = static_cast<std::int64_t>(
          std::count_if(map.begin(), map.end(), [](std::int64_t v) { return v >= 0; }));
    out[i] = static_cast<std::uint32_t>(map[labels[i]]);
  }
  return out;
}

namespace detail {

inline KMeansResult lloyd(const std::vector<Vector>& pts, std::size_t k, Rng& rng,
                          std::size_t max_iters) {
  const auto n = pts.size();
  const auto dim = pts.front().size();
  std::vector<Vector> centers;
  std::vector<bool> chosen(n, false);

  // k-means++ seeding
  std::size_t first = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
  first = std::min(first, n - 1);
  centers.push_back(pts[first]);
  chosen[first] = true;
  std::vector<double> d2(n);
  while (centers.size() < k) {
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centers) best = std::min(best, squared_distance(pts[i], c));
      d2[i] = chosen[i] ? 0.0 : best;
      total += d2[i];
    }
    std::size_t pick = n;
    if (total > 0) {
      const double r = rng.uniform() * total;
      double acc = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] == 0) continue;
        acc += d2[i];
        if (r < acc) {
          pick = i;
          break;
        }
      }
      if (pick == n)
        for (std::size_t i = n; i-- > 0;)
          if (d2[i] > 0) {
            pick = i;
            break;
          }
    } else {
      for (std::size_t i = 0; i < n; ++i)
        if (!chosen[i]) {
          pick = i;
          break;
        }
    }
    chosen[pick] = true;
    centers.push_back(pts[pick]);
  }

  std::vector<std::uint32_t> assign(n, 0);
  auto assign_all = [&] {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::uint32_t best = 0;
      double best_d = squared_distance(pts[i], centers[0]);
      for (std::uint32_t c = 1; c < k; ++c) {
        const double d = squared_distance(pts[i], centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[i] != best) changed = true;
      assign[i] = best;
    }
    return changed;
  };
  auto fix_empty = [&] {
    std::vector<std::size_t> size(k, 0);
    for (auto a : assign) ++size[a];
    for (std::uint32_t c = 0; c < k; ++c) {
      if (size[c] != 0) continue;
      // steal the point farthest from its centroid among clusters with > 1 member
      std::size_t victim = n;
      double far = -1;
      for (std::size_t i = 0; i < n; ++i) {
        if (size[assign[i]] < 2) continue;
        const double d = squared_distance(pts[i], centers[assign[i]]);
        if (d > far) {
          far = d;
          victim = i;
        }
      }
      --size[assign[victim]];
      assign[victim] = c;
      size[c] = 1;
      centers[c] = pts[victim];
    }
  };
  auto update = [&] {
    std::vector<Vector> sums(k, Vector(dim, 0.0));
    std::vector<std::size_t> size(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++size[assign[i]];
      for (std::size_t d = 0; d < dim; ++d) sums[assign[i]][d] += pts[i][d];
    }
    for (std::size_t c = 0; c < k; ++c)
      if (size[c] > 0)
        for (std::size_t d = 0; d < dim; ++d) centers[c][d] = sums[c][d] / static_cast<double>(size[c]);
  };

  assign_all();
  fix_empty();
  update();
  for (std::size_t it = 0; it < max_iters; ++it) {
    const bool changed = assign_all();
    fix_empty();
    update();
    if (!changed) break;
  }
  KMeansResult r{assign, centers, 0.0};
  for (std::size_t i = 0; i < n; ++i) r.sse += squared_distance(pts[i], centers[assign[i]]);
  return r;
}

}  // namespace detail

// Lloyd's algorithm from k-means++ seeds, best of `restarts` by within-cluster
// SSE. Points are put in lexicographic order before seeding so the result does
// not depend on input order; labels are canonical (first appearance).
inline KMeansResult kmeans(const std::vector<Vector>& vectors, std::size_t k, std::uint64_t seed,
                           std::size_t restarts = 10, std::size_t max_iters = 100) {
  const auto n = vectors.size();
  if (k < 1) throw Error("k must be >= 1");
  if (k > n) throw Error("k exceeds the number of vectors");
  for (const auto& v : vectors)
    if (v.size() != vectors.front().size()) throw Error("vectors differ in dimension");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return vectors[a] < vectors[b]; });
  std::vector<Vector> sorted;
  for (auto i : order) sorted.push_back(vectors[i]);

  Rng rng(seed);
  KMeansResult best;
  best.sse = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    auto res = detail::lloyd(sorted, k, rng, max_iters);
    if (res.sse < best.sse) best = std::move(res);
  }
  std::vector<std::uint32_t> assign(n);
  for (std::size_t i = 0; i < n; ++i) assign[order[i]] = best.assignment[i];
  const auto labels = canonical_labels(assign);
  std::vector<Vector> centroids(k);
  for (std::size_t i = 0; i < n; ++i) centroids[labels[i]] = best.centroids[assign[i]];
  return {labels, centroids, best.sse};
}

inline double within_cluster_sse(const std::vector<Vector>& vectors,
                                 const std::vector<std::uint32_t>& assignment) {
  const auto k = assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
  const auto dim = vectors.empty() ? 0 : vectors.front().size();
  std::vector<Vector> mean(k, Vector(dim, 0.0));
  std::vector<std::size_t> size(k, 0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    ++size[assignment[i]];
    for (std::size_t d = 0; d < dim; ++d) mean[assignment[i]][d] += vectors[i][d];
  }
  for (std::size_t c = 0; c < k; ++c)
    for (auto& v : mean[c]) v /= static_cast<double>(size[c]);
  double sse = 0;
  for (std::size_t i = 0; i < vectors.size(); ++i) sse += squared_distance(vectors[i], mean[assignment[i]]);
  return sse;
}

// Mean silhouette over all points with Euclidean distance. Points in singleton
// clusters score 0, as do points with a == b == 0.
inline double silhouette(const std::vector<Vector>& vectors, const std::vector<std::uint32_t>& assignment) {
  if (assignment.size() != vectors.size()) throw Error("assignment size mismatch");
  const std::size_t k =
      assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
  if (k < 2) throw Error("silhouette is undefined for fewer than 2 clusters");
  const auto n = vectors.size();
  std::vector<std::size_t> size(k, 0);
  for (auto a : assignment) ++size[a];
  double total = 0;
  std::vector<double> sum(k);
  for (std::size_t i = 0; i < n; ++i) {
    const auto own = assignment[i];
    if (size[own] == 1) continue;
    std::fill(sum.begin(), sum.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) sum[assignment[j]] += euclidean(vectors[i], vectors[j]);
    const double a = sum[own] / static_cast<double>(size[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c)
      if (c != own && size[c] > 0) b = std::min(b, sum[c] / static_cast<double>(size[c]));
    const double denom = std::max(a, b);
    if (denom > 0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

struct ClusterParams {
  std::uint64_t seed = 1;
  double min_silhouette = 0.05;
  std::size_t restarts = 10;
  std::size_t max_iters = 100;
};

// Picks k in [2, n-1] (just 2 when n == 2) maximizing the silhouette; ties go
// to the smaller k. Falls back to a single cluster below min_silhouette.
inline Clustering cluster_clone_class(const std::vector<Vector>& vectors, const ClusterParams& p = {}) {
  const auto n = vectors.size();
  if (n < 2) throw Error("a clone class needs at least 2 fragments");
  const std::size_t k_max = n == 2 ? 2 : n - 1;
  Clustering best;
  best.k = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 2; k <= k_max; ++k) {
    auto res = kmeans(vectors, k, p.seed + k, p.restarts, p.max_iters);
    const double s = silhouette(vectors, res.assignment);
    if (s > best_score) {
      best_score = s;
      best.assignment = std::move(res.assignment);
      best.k = static_cast<std::uint32_t>(k);
      best.silhouette = s;
    }
  }
  if (best_score < p.min_silhouette) {
    best.assignment.assign(n, 0);
    best.k = 1;
    best.silhouette.reset();
  }
  return best;
}

inline void to_json(nlohmann::json& j, const Clustering& c) {
  j = nlohmann::json{{"class_id", c.class_id}, {"k", c.k}, {"assignment", c.assignment}};
  j["silhouette"] = c.silhouette ? nlohmann::json(*c.silhouette) : nlohmann::json(nullptr);
}

inline void from_json(const nlohmann::json& j, Clustering& c) {
  c.class_id = j.at("class_id").get<std::uint32_t>();
  c.k = j.at("k").get<std::uint32_t>();
  c.assignment = j.at("assignment").get<std::vector<std::uint32_t>>();
  const auto& s = j.at("silhouette");
  c.silhouette = s.is_null() ? std::nullopt : std::optional<double>(s.get<double>());
}

}  // namespace clonetag
