#include <cstring>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "clonetag/config.hpp"
#include "clonetag/pipeline.hpp"
#include "clonetag/service.hpp"

using namespace clonetag;

namespace {

int run_main(int argc, char** argv) {
  CLI::App app("Run every stage, caching outputs in the work directory", "clonetag run");
  PipelineConfig cfg;
  add_pipeline_options(app, cfg);
  try {
    app.parse(argc, argv);
    std::vector<std::string> given(argv + 1, argv + argc);
    apply_env_overrides(app, given);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (cfg.top > cfg.block) throw Error("top must not exceed block");
  const auto res = run_pipeline(cfg, &std::clog);
  for (const auto& w : res.warnings) std::clog << "warning: " << w << '\n';
  const auto& s = res.report.statistics;
  std::cout << "classes: " << s.classes << ", fragments: " << s.fragments
            << ", multi-cluster classes: " << s.clusters_per_class.count << '\n';
  if (!res.report.timeouts.empty()) {
    std::cout << "timed out:";
    for (const auto& t : res.report.timeouts) std::cout << ' ' << t;
    std::cout << '\n';
  }
  if (res.evaluation) std::cout << res.evaluation->summary.render();
  std::cout << "report: " << (cfg.out.empty() ? (std::filesystem::path(cfg.work_dir) / "report.json").string() : cfg.out)
            << '\n';
  return 0;
}

std::vector<CloneClass> load_classes(const std::string& path) {
  return read_json_file(path).get<DetectionResult>().classes;
}

std::vector<ClusterRecord> load_clusters(const std::string& path) {
  return read_json_file(path).at("classes").get<std::vector<ClusterRecord>>();
}

int cli_main(int argc, char** argv) {
  CLI::App app("Clone-class clustering and tagging toolkit", "clonetag");
  app.require_subcommand(1);
  app.add_subcommand("run", "run the whole pipeline (see `clonetag run --help`)");

  auto* scan = app.add_subcommand("scan", "scan product trees into a catalog");
  std::string target, out;
  std::vector<std::string> references, exts{".c", ".h"}, exclude;
  scan->add_option("--target", target, "target product root")->required();
  scan->add_option("--reference", references, "reference product roots");
  scan->add_option("--ext", exts, "source extensions")->delimiter(',')->capture_default_str();
  scan->add_option("--exclude", exclude, "glob patterns to skip")->delimiter(',');
  scan->add_option("--out", out, "catalog.json")->required();

  auto* words = app.add_subcommand("words", "extract word sequences for every file");
  std::string catalog_path;
  words->add_option("--catalog", catalog_path, "catalog.json")->required();
  words->add_option("--out", out, "output directory")->required();

  auto* detect = app.add_subcommand("detect", "detect type-1/2 clone classes");
  DetectionParams dp;
  unsigned jobs = 1;
  detect->add_option("--catalog", catalog_path, "catalog.json")->required();
  detect->add_option("--min-tokens", dp.min_tokens, "minimum clone length")->capture_default_str();
  detect->add_option("--min-rnr", dp.min_rnr, "minimum ratio of non-repeated 4-grams")->capture_default_str();
  detect->add_option("--timeout", dp.timeout_seconds, "seconds per reference product")->capture_default_str();
  detect->add_option("--jobs", jobs, "worker threads")->capture_default_str();
  detect->add_option("--out", out, "clones.json")->required();

  auto* import = app.add_subcommand("import", "import clone classes from an external report");
  std::string report_path, format = "json";
  import->add_option("--report", report_path, "external clone report")->required();
  import->add_option("--format", format, "report format")->check(CLI::IsMember({"json"}))->capture_default_str();
  import->add_option("--catalog", catalog_path, "catalog.json")->required();
  import->add_option("--out", out, "clones.json")->required();

  std::string words_dir;
  std::size_t stride = 20;
  TrainParams tp;
  auto* train = app.add_subcommand("train", "train the document embedding model");
  train->add_option("--words", words_dir, "words directory")->required();
  train->add_option("--stride", stride, "reference sampling stride")->capture_default_str();
  train->add_option("--dim", tp.dimension, "embedding dimension")->capture_default_str();
  train->add_option("--epochs", tp.epochs, "training epochs")->capture_default_str();
  train->add_option("--negative", tp.negative, "negative samples")->capture_default_str();
  train->add_option("--alpha", tp.alpha, "initial learning rate")->capture_default_str();
  train->add_option("--min-alpha", tp.min_alpha, "final learning rate")->capture_default_str();
  train->add_option("--seed", tp.seed, "random seed")->capture_default_str();
  train->add_option("--out", out, "model.bin")->required();

  auto* idf = app.add_subcommand("idf", "count document frequencies over sampled reference files");
  idf->add_option("--words", words_dir, "words directory")->required();
  idf->add_option("--stride", stride, "reference sampling stride")->capture_default_str();
  idf->add_option("--out", out, "idf.json")->required();

  auto* cluster = app.add_subcommand("cluster", "cluster the fragments of every clone class");
  std::string clones_path, model_path;
  ClusterParams cp;
  cluster->add_option("--clones", clones_path, "clones.json")->required();
  cluster->add_option("--model", model_path, "model.bin")->required();
  cluster->add_option("--words", words_dir, "words directory")->required();
  cluster->add_option("--seed", cp.seed, "random seed")->capture_default_str();
  cluster->add_option("--min-silhouette", cp.min_silhouette, "single-cluster threshold")->capture_default_str();
  cluster->add_option("--jobs", jobs, "worker threads")->capture_default_str();
  cluster->add_option("--out", out, "clusters.json")->required();

  auto* tag = app.add_subcommand("tag", "assign one tag per cluster");
  std::string clusters_path, idf_path;
  std::uint32_t top = 3, block = 6;
  tag->add_option("--clusters", clusters_path, "clusters.json")->required();
  tag->add_option("--words", words_dir, "words directory")->required();
  tag->add_option("--idf", idf_path, "idf.json")->required();
  tag->add_option("--top", top, "required rank inside the cluster")->capture_default_str();
  tag->add_option("--block", block, "blocking rank outside the cluster")->capture_default_str();
  tag->add_option("--out", out, "tags.json")->required();

  auto* eval = app.add_subcommand("eval", "compare embedding clusterings with all tag clusterings");
  std::uint64_t budget = 100000;
  eval->add_option("--clusters", clusters_path, "clusters.json")->required();
  eval->add_option("--words", words_dir, "words directory")->required();
  eval->add_option("--idf", idf_path, "idf.json")->required();
  eval->add_option("--budget", budget, "search nodes per class and universe")->capture_default_str();
  eval->add_option("--top", top, "required rank inside the cluster")->capture_default_str();
  eval->add_option("--block", block, "blocking rank outside the cluster")->capture_default_str();
  eval->add_option("--out", out, "eval.json")->required();

  auto* report = app.add_subcommand("report", "assemble a report from stage outputs");
  std::string tags_path, source_root;
  bool bundle = false;
  report->add_option("--clones", clones_path, "clones.json")->required();
  report->add_option("--clusters", clusters_path, "clusters.json")->required();
  report->add_option("--tags", tags_path, "tags.json")->required();
  report->add_option("--words", words_dir, "words directory (for its catalog)")->required();
  report->add_option("--source-root", source_root, "source tree laid out as <root>/<product>/<path>");
  report->add_flag("--bundle", bundle, "inline source excerpts");
  report->add_option("--out", out, "report.json")->required();

  auto* serve = app.add_subcommand("serve", "serve a report over HTTP");
  std::string bind = "127.0.0.1:8877", static_dir;
  serve->add_option("--report", report_path, "report.json")->required();
  serve->add_option("--source-root", source_root, "source tree laid out as <root>/<product>/<path>");
  serve->add_option("--bind", bind, "host:port")->capture_default_str();
  serve->add_option("--static-dir", static_dir, "viewer bundle to serve at /");

  CLI11_PARSE(app, argc, argv);

  if (scan->parsed()) {
    std::vector<ScanRoot> roots{{target, Role::Target}};
    for (const auto& r : references) roots.push_back({r, Role::Reference});
    ScanOptions opts;
    opts.extensions = {exts.begin(), exts.end()};
    opts.exclude = exclude;
    const auto c = scan_products(roots, opts);
    write_json_file(out, c);
    std::cout << c.products().size() << " products, " << c.files().size() << " files\n";
  } else if (words->parsed()) {
    const auto b = extract_corpus_words(read_json_file(catalog_path).get<ProductCatalog>());
    save_words(out, b);
    std::cout << b.files.size() << " word sequences\n";
  } else if (detect->parsed()) {
    const auto d = detect_catalog(read_json_file(catalog_path).get<ProductCatalog>(), dp, jobs);
    write_json_file(out, d);
    std::cout << d.classes.size() << " clone classes";
    if (!d.timeouts.empty()) std::cout << ", " << d.timeouts.size() << " timed out";
    std::cout << '\n';
  } else if (import->parsed()) {
    const auto catalog = read_json_file(catalog_path).get<ProductCatalog>();
    auto imported = import_report(read_json_file(report_path), catalog);
    for (const auto& w : imported.warnings) std::clog << "warning: " << w << '\n';
    DetectionResult d;
    d.classes = filter_target(merge_clone_classes({imported.classes}));
    renumber(d.classes);
    write_json_file(out, d);
    std::cout << d.classes.size() << " clone classes\n";
  } else if (train->parsed()) {
    const auto corpus = load_words(words_dir).sampled_reference(stride);
    const auto m = train_doc_model(corpus, tp);
    m.save(out);
    std::cout << "trained on " << corpus.size() << " files, vocabulary " << m.vocabulary_size() << '\n';
  } else if (idf->parsed()) {
    const auto t = compute_idf(load_words(words_dir).sampled_reference(stride));
    write_json_file(out, t);
    std::cout << "d = " << t.d() << '\n';
  } else if (cluster->parsed()) {
    const auto recs = cluster_classes(load_classes(clones_path), load_words(words_dir),
                                      DocEmbeddingModel::load(model_path), cp, jobs);
    write_json_file(out, {{"classes", recs}});
    std::cout << recs.size() << " classes clustered\n";
  } else if (tag->parsed()) {
    if (top > block) throw Error("top must not exceed block");
    const auto t = tag_classes(load_clusters(clusters_path), load_words(words_dir),
                               read_json_file(idf_path).get<IdfTable>(), top, block);
    write_json_file(out, {{"classes", t}});
    std::cout << t.size() << " classes tagged\n";
  } else if (eval->parsed()) {
    if (top > block) throw Error("top must not exceed block");
    const auto e = evaluate_classes(load_clusters(clusters_path), load_words(words_dir),
                                    read_json_file(idf_path).get<IdfTable>(), budget, top, block);
    write_json_file(out, e);
    std::cout << e.summary.render();
  } else if (report->parsed()) {
    const auto det = read_json_file(clones_path).get<DetectionResult>();
    std::vector<Clustering> clusterings;
    for (const auto& r : load_clusters(clusters_path)) clusterings.push_back(r.clustering);
    const auto tags = read_json_file(tags_path).at("classes").get<std::vector<TagAssignment>>();
    auto rep = build_report(load_words(words_dir).catalog, det.classes, clusterings, tags, det.timeouts);
    if (bundle) bundle_excerpts(rep, source_root);
    write_text_file(out, serialize_report(rep));
    std::cout << rep.classes.size() << " classes\n";
  } else if (serve->parsed()) {
    auto service = std::make_shared<const ReportService>(load_report(report_path), source_root);
    HttpServer server(service, static_dir);
    const auto addr = parse_bind_address(bind);
    const int port = server.bind(addr);
    std::cout << "serving " << service->report().classes.size() << " classes on http://" << addr.host << ':' << port
              << std::endl;
    server.listen();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    if (argc >= 2 && std::strcmp(argv[1], "run") == 0) return run_main(argc - 1, argv + 1);
    return cli_main(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
