#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "clonetag/error.hpp"
#include "clonetag/report.hpp"

namespace clonetag {

struct ApiResponse {
  int status = 200;
  std::string body;
};

// Read-only JSON API over an immutable report. Every tag in a payload carries
// the (class_id, cluster_index) it links to.
class ReportService {
 public:
  static constexpr std::uint32_t kDefaultPageSize = 50;
  static constexpr std::uint32_t kMaxPageSize = 1000;

  explicit ReportService(InvestigationReport report, std::filesystem::path source_root = {})
      : report_(std::move(report)), source_root_(std::move(source_root)) {}

  const InvestigationReport& report() const noexcept { return report_; }

  ApiResponse handle(std::string_view method, std::string_view path,
                     const std::map<std::string, std::string>& query = {}) const {
    try {
      return route(method, path, query);
    } catch (const BadRequest& e) {
      return error(400, e.what());
    } catch (const std::exception& e) {
      return error(500, e.what());
    }
  }

 private:
  struct BadRequest : Error {
    using Error::Error;
  };

  static ApiResponse json_response(const nlohmann::json& j, int status = 200) { return {status, j.dump()}; }
  static ApiResponse error(int status, const std::string& message) {
    return json_response({{"error", message}, {"status", status}}, status);
  }

  static std::vector<std::string_view> segments(std::string_view path) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i <= path.size()) {
      const auto j = path.find('/', i);
      const auto end = j == std::string_view::npos ? path.size() : j;
      if (end > i) out.push_back(path.substr(i, end - i));
      if (j == std::string_view::npos) break;
      i = j + 1;
    }
    return out;
  }

  static std::uint32_t parse_id(std::string_view s, const char* what) {
    std::uint32_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
      throw BadRequest(std::string("malformed ") + what + " '" + std::string(s) + "'");
    return v;
  }

  static std::uint32_t query_number(const std::map<std::string, std::string>& q, const std::string& key,
                                    std::uint32_t fallback) {
    const auto it = q.find(key);
    return it == q.end() ? fallback : parse_id(it->second, key.c_str());
  }

  ApiResponse route(std::string_view method, std::string_view path,
                    const std::map<std::string, std::string>& query) const {
    const auto seg = segments(path);
    if (seg.empty() || seg[0] != "api") return error(404, "not found");
    if (method != "GET") return error(405, "method not allowed");
    if (seg.size() == 2 && seg[1] == "classes") return classes(query);
    if (seg.size() == 3 && seg[1] == "classes") return class_detail(parse_id(seg[2], "class id"));
    if (seg.size() == 3 && seg[1] == "files") return file_detail(parse_id(seg[2], "file id"));
    if (seg.size() == 4 && seg[1] == "clusters")
      return cluster_detail(parse_id(seg[2], "class id"), parse_id(seg[3], "cluster index"));
    if (seg.size() == 2 && seg[1] == "stats") return stats();
    return error(404, "no such endpoint");
  }

  static nlohmann::json tag_link(const ReportClass& c, const ReportCluster& cl) {
    nlohmann::json j{{"class_id", c.class_id},
                     {"cluster_index", cl.index},
                     {"label", cl.label},
                     {"tag_text", cl.tag ? cl.tag->text : cl.label},
                     {"tagged", cl.tag.has_value()},
                     {"size", cl.members.size()}};
    j["tag"] = cl.tag ? nlohmann::json(*cl.tag) : nlohmann::json(nullptr);
    return j;
  }

  static nlohmann::json tag_links(const ReportClass& c) {
    auto out = nlohmann::json::array();
    for (const auto& cl : c.clusters) out.push_back(tag_link(c, cl));
    return out;
  }

  nlohmann::json fragment_json(const ReportClass& c, std::uint32_t index) const {
    const auto& f = c.fragments.at(index);
    const auto& rec = report_.catalog.file(f.file_id);
    nlohmann::json j{{"index", index},
                     {"class_id", c.class_id},
                     {"file_id", f.file_id},
                     {"product_id", rec.product_id},
                     {"relative_path", rec.relative_path},
                     {"basename", rec.basename},
                     {"begin_line", f.begin_line},
                     {"end_line", f.end_line},
                     {"role", f.role},
                     {"cluster_index", f.cluster},
                     {"tag", tag_link(c, c.clusters.at(f.cluster))}};
    if (f.excerpt) j["excerpt"] = *f.excerpt;
    return j;
  }

  ApiResponse classes(const std::map<std::string, std::string>& q) const {
    const auto offset = query_number(q, "offset", 0);
    const auto limit = query_number(q, "limit", kDefaultPageSize);
    if (limit == 0 || limit > kMaxPageSize)
      throw BadRequest("limit must be in 1.." + std::to_string(kMaxPageSize));
    auto items = nlohmann::json::array();
    for (std::size_t i = offset; i < report_.classes.size() && i < std::size_t{offset} + limit; ++i) {
      const auto& c = report_.classes[i];
      nlohmann::json item{{"class_id", c.class_id},
                          {"fragment_count", c.fragments.size()},
                          {"k", c.k},
                          {"tags", tag_links(c)}};
      item["silhouette"] = c.silhouette ? nlohmann::json(*c.silhouette) : nlohmann::json(nullptr);
      items.push_back(std::move(item));
    }
    return json_response(
        {{"total", report_.classes.size()}, {"offset", offset}, {"limit", limit}, {"classes", items}});
  }

  ApiResponse class_detail(std::uint32_t id) const {
    const auto* c = report_.find_class(id);
    if (!c) return error(404, "unknown class " + std::to_string(id));
    auto frags = nlohmann::json::array();
    for (std::uint32_t i = 0; i < c->fragments.size(); ++i) frags.push_back(fragment_json(*c, i));
    auto clusters = nlohmann::json::array();
    for (const auto& cl : c->clusters) {
      auto j = tag_link(*c, cl);
      j["members"] = cl.members;
      clusters.push_back(std::move(j));
    }
    nlohmann::json out{{"class_id", c->class_id}, {"k", c->k}, {"fragments", frags}, {"clusters", clusters}};
    out["silhouette"] = c->silhouette ? nlohmann::json(*c->silhouette) : nlohmann::json(nullptr);
    return json_response(out);
  }

  ApiResponse cluster_detail(std::uint32_t id, std::uint32_t idx) const {
    const auto* c = report_.find_class(id);
    if (!c) return error(404, "unknown class " + std::to_string(id));
    if (idx >= c->clusters.size())
      return error(404, "class " + std::to_string(id) + " has no cluster " + std::to_string(idx));
    const auto& cl = c->clusters[idx];
    auto frags = nlohmann::json::array();
    for (auto m : cl.members) frags.push_back(fragment_json(*c, m));
    auto out = tag_link(*c, cl);
    out["fragments"] = frags;
    out["siblings"] = tag_links(*c);
    return json_response(out);
  }

  ApiResponse file_detail(std::uint32_t file_id) const {
    if (file_id >= report_.catalog.files().size()) return error(404, "unknown file " + std::to_string(file_id));
    const auto& rec = report_.catalog.file(file_id);
    auto annotations = nlohmann::json::array();
    if (auto it = report_.file_index.find(file_id); it != report_.file_index.end())
      for (const auto& a : it->second) {
        const auto* c = report_.find_class(a.class_id);
        annotations.push_back({{"begin_line", a.begin_line},
                               {"end_line", a.end_line},
                               {"class_id", a.class_id},
                               {"cluster_index", a.cluster_index},
                               {"tags", c ? tag_links(*c) : nlohmann::json::array()}});
      }
    nlohmann::json out{{"file_id", file_id},
                       {"product_id", rec.product_id},
                       {"relative_path", rec.relative_path},
                       {"basename", rec.basename},
                       {"line_count", rec.line_count},
                       {"role", report_.catalog.role_of(file_id)},
                       {"annotations", annotations}};
    try {
      out["text"] = read_source(source_path(report_.catalog, file_id, source_root_));
    } catch (const Error& e) {
      out["text"] = nullptr;
      out["text_error"] = e.what();
    }
    return json_response(out);
  }

  ApiResponse stats() const {
    return json_response({{"statistics", report_.statistics},
                          {"products", report_.catalog.products().size()},
                          {"files", report_.catalog.files().size()},
                          {"target", report_.catalog.products().empty() ? "" : report_.catalog.target().product_id},
                          {"timeouts", report_.timeouts}});
  }

  InvestigationReport report_;
  std::filesystem::path source_root_;
};

struct BindAddress {
  std::string host = "127.0.0.1";
  int port = 8877;
};

inline BindAddress parse_bind_address(std::string_view s) {
  const auto colon = s.rfind(':');
  if (colon == std::string_view::npos) throw Error("bind address must be host:port");
  BindAddress b;
  b.host = std::string(s.substr(0, colon));
  const auto port = s.substr(colon + 1);
  const auto [p, ec] = std::from_chars(port.data(), port.data() + port.size(), b.port);
  if (b.host.empty() || port.empty() || ec != std::errc() || p != port.data() + port.size() || b.port < 0 ||
      b.port > 65535)
    throw Error("invalid bind address '" + std::string(s) + "'");
  return b;
}

// HTTP front end for a ReportService; port 0 picks a free port.
class HttpServer {
 public:
  HttpServer(std::shared_ptr<const ReportService> service, const std::string& static_dir = {})
      : service_(std::move(service)) {
    auto api = [svc = service_](const httplib::Request& req, httplib::Response& res) {
      std::map<std::string, std::string> query;
      for (const auto& [k, v] : req.params) query.emplace(k, v);
      const auto r = svc->handle(req.method, req.path, query);
      res.status = r.status;
      res.set_content(r.body, "application/json");
    };
    for (auto* route : {"/api", R"(/api/.*)"}) {
      server_.Get(route, api);
      server_.Post(route, api);
      server_.Put(route, api);
      server_.Delete(route, api);
      server_.Patch(route, api);
    }
    if (!static_dir.empty() && !server_.set_mount_point("/", static_dir))
      throw Error("cannot serve static files from " + static_dir);
  }

  ~HttpServer() { stop(); }

  int bind(const BindAddress& addr) {
    port_ = addr.port == 0 ? server_.bind_to_any_port(addr.host) : (server_.bind_to_port(addr.host, addr.port) ? addr.port : -1);
    if (port_ < 0) throw Error("cannot bind " + addr.host + ":" + std::to_string(addr.port));
    return port_;
  }

  // Blocks until stop() is called from another thread.
  void listen() { server_.listen_after_bind(); }

  void start() {
    thread_ = std::thread([this] { listen(); });
    server_.wait_until_ready();
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  int port() const noexcept { return port_; }

 private:
  std::shared_ptr<const ReportService> service_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = -1;
};

}  // namespace clonetag
