#pragma once

#include <fnmatch.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "clonetag/error.hpp"

namespace clonetag {

enum class Role { Target, Reference };

NLOHMANN_JSON_SERIALIZE_ENUM(Role, {{Role::Target, "target"}, {Role::Reference, "reference"}})

using FileId = std::uint32_t;

struct Product {
  std::string product_id;
  Role role = Role::Reference;
  std::string root_path;

  friend bool operator==(const Product&, const Product&) = default;
};

struct SourceFileRecord {
  FileId file_id = 0;
  std::string product_id;
  std::string relative_path;  // '/'-separated, relative to the product root
  std::string basename;
  std::uint32_t line_count = 0;

  friend bool operator==(const SourceFileRecord&, const SourceFileRecord&) = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Product, product_id, role, root_path)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SourceFileRecord, file_id, product_id, relative_path, basename,
                                   line_count)

class ProductCatalog {
 public:
  ProductCatalog() = default;
  ProductCatalog(std::vector<Product> products, std::vector<SourceFileRecord> files)
      : products_(std::move(products)), files_(std::move(files)) {
    validate();
  }

  const std::vector<Product>& products() const noexcept { return products_; }
  const std::vector<SourceFileRecord>& files() const noexcept { return files_; }

  const SourceFileRecord& file(FileId id) const {
    if (id >= files_.size()) throw Error("unknown file_id " + std::to_string(id));
    return files_[id];
  }

  const Product& product(std::string_view product_id) const {
    for (const auto& p : products_)
      if (p.product_id == product_id) return p;
    throw Error("unknown product '" + std::string(product_id) + "'");
  }

  Role role_of(FileId id) const { return product(file(id).product_id).role; }

  const Product& target() const {
    for (const auto& p : products_)
      if (p.role == Role::Target) return p;
    throw Error("catalog has no target product");
  }

  std::vector<std::string> reference_product_ids() const {
    std::vector<std::string> out;
    for (const auto& p : products_)
      if (p.role == Role::Reference) out.push_back(p.product_id);
    return out;
  }

  std::vector<FileId> files_of(std::string_view product_id) const {
    std::vector<FileId> out;
    for (const auto& f : files_)
      if (f.product_id == product_id) out.push_back(f.file_id);
    return out;
  }

  std::filesystem::path absolute_path(FileId id) const {
    const auto& f = file(id);
    return std::filesystem::path(product(f.product_id).root_path) / f.relative_path;
  }

  friend bool operator==(const ProductCatalog&, const ProductCatalog&) = default;

 private:
  void validate() const {
    std::size_t targets = 0;
    std::set<std::string> ids;
    for (const auto& p : products_) {
      if (p.role == Role::Target) ++targets;
      if (!ids.insert(p.product_id).second)
        throw Error("duplicate product id '" + p.product_id + "'");
    }
    if (targets != 1)
      throw Error("catalog must contain exactly one target product, found " +
                  std::to_string(targets));
    for (std::size_t i = 0; i < files_.size(); ++i) {
      const auto& f = files_[i];
      if (f.file_id != i) throw Error("file_ids must be dense and ordered");
      if (!ids.count(f.product_id))
        throw Error("file '" + f.relative_path + "' belongs to unknown product '" + f.product_id +
                    "'");
      if (f.basename.find('/') != std::string::npos || f.basename.find('\\') != std::string::npos)
        throw Error("basename contains a path separator: " + f.basename);
    }
  }

  std::vector<Product> products_;
  std::vector<SourceFileRecord> files_;
};

inline void to_json(nlohmann::json& j, const ProductCatalog& c) {
  j = nlohmann::json{{"products", c.products()}, {"files", c.files()}};
}

inline void from_json(const nlohmann::json& j, ProductCatalog& c) {
  c = ProductCatalog(j.at("products").get<std::vector<Product>>(),
                     j.at("files").get<std::vector<SourceFileRecord>>());
}

// Replaces every byte sequence that is not well-formed UTF-8 with U+FFFD.
inline std::string sanitize_utf8(std::string_view in) {
  static constexpr std::string_view replacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  const auto n = in.size();
  auto cont = [&](std::size_t k) {
    return k < n && (static_cast<unsigned char>(in[k]) & 0xC0) == 0x80;
  };
  while (i < n) {
    const auto c = static_cast<unsigned char>(in[i]);
    std::size_t len = 0;
    if (c < 0x80) {
      len = 1;
    } else if (c >= 0xC2 && c <= 0xDF) {
      len = cont(i + 1) ? 2 : 0;
    } else if (c >= 0xE0 && c <= 0xEF) {
      if (cont(i + 1) && cont(i + 2)) {
        const auto c1 = static_cast<unsigned char>(in[i + 1]);
        const bool overlong = c == 0xE0 && c1 < 0xA0;
        const bool surrogate = c == 0xED && c1 >= 0xA0;
        len = (overlong || surrogate) ? 0 : 3;
      }
    } else if (c >= 0xF0 && c <= 0xF4) {
      if (cont(i + 1) && cont(i + 2) && cont(i + 3)) {
        const auto c1 = static_cast<unsigned char>(in[i + 1]);
        const bool overlong = c == 0xF0 && c1 < 0x90;
        const bool too_big = c == 0xF4 && c1 >= 0x90;
        len = (overlong || too_big) ? 0 : 4;
      }
    }
    if (len == 0) {
      out += replacement;
      ++i;
    } else {
      out.append(in.substr(i, len));
      i += len;
    }
  }
  return out;
}

inline std::string read_source(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return sanitize_utf8(ss.str());
}

inline std::uint32_t count_lines(std::string_view text) {
  if (text.empty()) return 0;
  auto lines = static_cast<std::uint32_t>(std::count(text.begin(), text.end(), '\n'));
  if (text.back() != '\n') ++lines;
  return lines;
}

struct ScanRoot {
  std::filesystem::path path;
  Role role = Role::Reference;
};

struct ScanOptions {
  std::set<std::string> extensions{".c", ".h"};
  std::vector<std::string> exclude;  // fnmatch globs tested against relative paths and path components
};

namespace detail {

inline bool excluded(const std::string& rel, const std::vector<std::string>& globs) {
  for (const auto& g : globs) {
    if (::fnmatch(g.c_str(), rel.c_str(), 0) == 0) return true;
    std::size_t start = 0;
    while (start <= rel.size()) {
      const auto end = rel.find('/', start);
      const auto part = rel.substr(start, end == std::string::npos ? std::string::npos : end - start);
      if (::fnmatch(g.c_str(), part.c_str(), 0) == 0) return true;
      if (end == std::string::npos) break;
      start = end + 1;
    }
  }
  return false;
}

}  // namespace detail

// Walks each root (symlinks are not followed) and builds a catalog whose file_ids
// follow lexicographic (product_id, relative_path) order. The product id is the
// root directory's name.
inline ProductCatalog scan_products(const std::vector<ScanRoot>& roots, const ScanOptions& opts = {}) {
  namespace fs = std::filesystem;
  std::vector<Product> products;
  std::vector<SourceFileRecord> files;
  for (const auto& root : roots) {
    std::error_code ec;
    if (!fs::is_directory(root.path, ec))
      throw Error("cannot read product root " + root.path.string());
    auto canonical = fs::weakly_canonical(root.path, ec);
    if (ec) canonical = root.path;
    auto id = canonical.filename().string();
    if (id.empty()) id = canonical.parent_path().filename().string();
    products.push_back({id, root.role, canonical.string()});

    fs::recursive_directory_iterator it(canonical, fs::directory_options::none, ec);
    if (ec) throw Error("cannot read product root " + root.path.string() + ": " + ec.message());
    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
      if (ec) throw Error("error while scanning " + root.path.string() + ": " + ec.message());
      const auto& entry = *it;
      if (entry.is_symlink(ec)) {
        if (entry.is_directory(ec)) it.disable_recursion_pending();
        continue;
      }
      auto rel = fs::relative(entry.path(), canonical).generic_string();
      if (detail::excluded(rel, opts.exclude)) {
        if (entry.is_directory(ec)) it.disable_recursion_pending();
        continue;
      }
      if (!entry.is_regular_file(ec)) continue;
      if (!opts.extensions.count(entry.path().extension().string())) continue;
      SourceFileRecord rec;
      rec.product_id = id;
      rec.relative_path = rel;
      rec.basename = entry.path().filename().string();
      rec.line_count = count_lines(read_source(entry.path()));
      files.push_back(std::move(rec));
    }
  }
  std::sort(products.begin(), products.end(),
            [](const Product& a, const Product& b) { return a.product_id < b.product_id; });
  std::sort(files.begin(), files.end(), [](const SourceFileRecord& a, const SourceFileRecord& b) {
    return std::tie(a.product_id, a.relative_path) < std::tie(b.product_id, b.relative_path);
  });
  for (std::size_t i = 0; i < files.size(); ++i) files[i].file_id = static_cast<FileId>(i);

  bool has_target_file = false;
  for (const auto& f : files)
    for (const auto& p : products)
      if (p.product_id == f.product_id && p.role == Role::Target) has_target_file = true;
  std::size_t targets = std::count_if(products.begin(), products.end(),
                                      [](const Product& p) { return p.role == Role::Target; });
  if (targets == 1 && !has_target_file) throw Error("empty target product");
  return ProductCatalog(std::move(products), std::move(files));
}

// Every `stride`-th reference file in catalog order, starting at index 0.
inline std::vector<SourceFileRecord> sample_reference_files(const ProductCatalog& catalog,
                                                            std::size_t stride) {
  if (stride == 0) throw Error("stride must be >= 1");
  std::vector<SourceFileRecord> refs;
  for (const auto& f : catalog.files())
    if (catalog.role_of(f.file_id) == Role::Reference) refs.push_back(f);
  std::vector<SourceFileRecord> out;
  for (std::size_t i = 0; i < refs.size(); i += stride) out.push_back(refs[i]);
  return out;
}

}  // namespace clonetag
