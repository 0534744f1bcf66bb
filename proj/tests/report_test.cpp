#include <gtest/gtest.h>

#include "api_fixture.hpp"
#include "clonetag/report.hpp"

using namespace clonetag;

TEST(Report, ClassesCarryClustersAndLabels) {
  apifixture::Fixture fx;
  const auto& r = fx.report;
  ASSERT_EQ(r.classes.size(), 2u);
  const auto& c0 = r.classes[0];
  EXPECT_EQ(c0.k, 3u);
  EXPECT_EQ(c0.silhouette, 0.25);
  std::vector<std::string> labels;
  for (const auto& cl : c0.clusters) labels.push_back(cl.label);
  EXPECT_EQ(labels, (std::vector<std::string>{"F.c", "i:t", "#2"}));
  EXPECT_EQ(c0.clusters[1].members, (std::vector<std::uint32_t>{2, 3}));
  EXPECT_EQ(c0.fragments[3].role, Role::Reference);
  EXPECT_EQ(c0.fragments[0].role, Role::Target);
  EXPECT_EQ(r.classes[1].clusters[0].label, "#0");
  EXPECT_EQ(r.timeouts, std::vector<std::string>{"gamma"});
}

TEST(Report, FileIndexPointsIntoClasses) {
  apifixture::Fixture fx;
  const auto& r = fx.report;
  ASSERT_EQ(r.file_index.at(1).size(), 2u);
  EXPECT_EQ(r.file_index.at(1)[0], (FileAnnotation{3, 6, 0, 1}));
  EXPECT_EQ(r.file_index.at(1)[1], (FileAnnotation{8, 9, 1, 0}));
  std::size_t total = 0;
  for (const auto& [file, anns] : r.file_index)
    for (const auto& a : anns) {
      ++total;
      const auto* c = r.find_class(a.class_id);
      ASSERT_NE(c, nullptr);
      const auto hits = std::count_if(c->fragments.begin(), c->fragments.end(), [&](const ReportFragment& f) {
        return f.file_id == file && f.begin_line == a.begin_line && f.end_line == a.end_line;
      });
      EXPECT_EQ(hits, 1);
    }
  EXPECT_EQ(total, 7u);
}

TEST(Report, StatisticsRecomputed) {
  apifixture::Fixture fx;
  const auto& s = fx.report.statistics;
  EXPECT_EQ(s.classes, 2u);
  EXPECT_EQ(s.fragments, 7u);
  EXPECT_EQ(s.fragments_per_class, (Summary{2, 5, 2, 3.5}));
  EXPECT_EQ(s.clusters_per_class, (Summary{1, 3, 3, 3}));
  EXPECT_EQ(compute_statistics({}), ReportStatistics{});
}

TEST(Report, RoundTripIsByteIdentical) {
  apifixture::Fixture fx;
  auto r = fx.report;
  r.classes[0].silhouette = 0.1 + 0.2;
  r.statistics = compute_statistics(r.classes);
  const auto text = serialize_report(r);
  const auto back = parse_report(text);
  EXPECT_EQ(back, r);
  EXPECT_EQ(serialize_report(back), text);
  bundle_excerpts(r);
  const auto bundled = serialize_report(r);
  EXPECT_EQ(serialize_report(parse_report(bundled)), bundled);
}

TEST(Report, BundledExcerptsHoldFragmentLines) {
  apifixture::Fixture fx;
  auto r = fx.report;
  bundle_excerpts(r);
  EXPECT_EQ(*r.classes[0].fragments[0].excerpt, "int alpha0_2;\nint alpha0_3;\nint alpha0_4;\nint alpha0_5;\n");
  auto moved = fx.report;
  bundle_excerpts(moved, fx.dir.path());
  EXPECT_EQ(moved.classes[0].fragments[0].excerpt, r.classes[0].fragments[0].excerpt);
  EXPECT_EQ(line_range("a\nb", 2, 5), "b");
  EXPECT_EQ(line_range("a\nb\n", 3, 3), "");
}

TEST(Report, ValidationRejectsInconsistentReports) {
  apifixture::Fixture fx;
  auto stats = nlohmann::json(fx.report);
  stats["statistics"]["fragments"] = 99;
  EXPECT_THROW(parse_report(stats.dump()), Error);
  auto index = nlohmann::json(fx.report);
  index["file_index"][0]["fragments"][0]["class_id"] = 1;
  EXPECT_THROW(parse_report(index.dump()), Error);
  auto label = nlohmann::json(fx.report);
  label["classes"][0]["clusters"][2]["label"] = "#7";
  EXPECT_THROW(parse_report(label.dump()), Error);
  EXPECT_THROW(parse_report("{"), Error);
  EXPECT_THROW(parse_report("{\"format\": \"other\"}"), Error);
}

TEST(Report, BuildRejectsMismatchedInputs) {
  apifixture::Fixture fx;
  const CloneClass c{0, {{0, 1, 2}, {2, 1, 2}}};
  EXPECT_THROW(build_report(fx.catalog, {c}, {Clustering{0, {0, 1, 0}, 2, 0.5}}, {}), Error);
  EXPECT_THROW(build_report(fx.catalog, {c}, {Clustering{0, {0, 1}, 2, 0.5}}, {TagAssignment{0, {std::nullopt}}}),
               Error);
  EXPECT_THROW(build_report(fx.catalog, {c, c}, {}, {}), Error);
  const auto plain = build_report(fx.catalog, {c}, {}, {});
  EXPECT_EQ(plain.classes[0].k, 1u);
}

TEST(Report, EmptyReport) {
  apifixture::Fixture fx;
  const auto r = build_report(fx.catalog, {}, {}, {});
  EXPECT_TRUE(r.classes.empty());
  EXPECT_TRUE(r.file_index.empty());
  EXPECT_EQ(r.statistics.classes, 0u);
  EXPECT_EQ(parse_report(serialize_report(r)), r);
}
