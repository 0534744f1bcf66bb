#include <gtest/gtest.h>

#include <random>

#include "clonetag/evaluation.hpp"
#include "walkthrough_fixture.hpp"
#include "oracles.hpp"
#include "random_obf.hpp"

using namespace clonetag;

namespace {

std::map<std::string, std::vector<std::uint32_t>> by_tag(const std::vector<TaggedGroup>& gs) {
  std::map<std::string, std::vector<std::uint32_t>> out;
  for (const auto& g : gs) out[g.tag.text] = g.members;
  return out;
}

std::set<Partition> partitions(const EnumerationResult& r) {
  std::set<Partition> out;
  for (const auto& p : r.partitions) out.insert(p.partition);
  return out;
}

Partition random_partition(std::mt19937& rng, std::size_t n) {
  Partition p(n);
  const auto k = 1 + rng() % n;
  for (auto& x : p) x = static_cast<std::uint32_t>(rng() % k);
  return canonical_labels(p);
}

}  // namespace

TEST(CandidateGroups, Illustration) {
  const auto obf = walkthrough::obf();
  const auto names = walkthrough::basenames();
  const auto all = by_tag(candidate_groups(obf, names, TagUniverse::WordsAndFilenames));
  const std::map<std::string, std::vector<std::uint32_t>> expected = {
      {"F.c", {0, 1}}, {"G.c", {2, 4}}, {"H.c", {3}}, {"b", {0, 1}}, {"t", {2, 3}}, {"u", {2, 3, 4}}};
  EXPECT_EQ(all, expected);
  const auto files = by_tag(candidate_groups(obf, names, TagUniverse::FilenamesOnly));
  EXPECT_EQ(files, (std::map<std::string, std::vector<std::uint32_t>>{
                       {"F.c", {0, 1}}, {"G.c", {2, 4}}, {"H.c", {3}}}));
}

TEST(CandidateGroups, WordGroupsMatchNaiveValidity) {
  // each word group must be exactly a cluster its word can tag, in any partition containing it
  std::mt19937 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rc = testgen::random_class(rng, 2 + rng() % 5);
    const auto n = rc.obf.size();
    for (const auto& g : candidate_groups(rc.obf, rc.names, TagUniverse::WordsAndFilenames)) {
      if (g.tag.kind != Tag::Kind::Word) continue;
      FragmentSet others;
      for (std::uint32_t i = 0; i < n; ++i)
        if (!std::binary_search(g.members.begin(), g.members.end(), i)) others.push_back(i);
      const auto cands = word_candidates(g.members, others, rc.obf);
      EXPECT_NE(std::find(cands.begin(), cands.end(), g.tag.text), cands.end());
    }
  }
}

TEST(Enumerate, IllustrationYieldsC1AndC2) {
  const auto obf = walkthrough::obf();
  const auto groups = candidate_groups(obf, walkthrough::basenames(), TagUniverse::WordsAndFilenames);
  const auto r = enumerate_tag_clusterings(groups, 5);
  EXPECT_FALSE(r.overflow);
  EXPECT_EQ(partitions(r), (std::set<Partition>{walkthrough::c1(), walkthrough::c2()}));
  for (const auto& p : r.partitions) {
    const auto k = *std::max_element(p.partition.begin(), p.partition.end()) + 1;
    EXPECT_EQ(p.witness.size(), k);
  }
  const auto files = candidate_groups(obf, walkthrough::basenames(), TagUniverse::FilenamesOnly);
  EXPECT_EQ(partitions(enumerate_tag_clusterings(files, 5)), (std::set<Partition>{walkthrough::c1()}));
}

TEST(Enumerate, NoExactCover) {
  const std::vector<TaggedGroup> groups = {{Tag::filename("a.c"), {0, 1}}, {Tag::word(Channel::Identifier, "w"), {1, 2}}};
  const auto r = enumerate_tag_clusterings(groups, 3);
  EXPECT_TRUE(r.partitions.empty());
  EXPECT_FALSE(r.overflow);
}

TEST(Enumerate, BudgetOneOverflows) {
  const auto groups = candidate_groups(walkthrough::obf(), walkthrough::basenames(), TagUniverse::WordsAndFilenames);
  const auto r = enumerate_tag_clusterings(groups, 5, 1);
  EXPECT_TRUE(r.overflow);
  EXPECT_EQ(r.nodes_expanded, 1u);
  EXPECT_THROW(enumerate_tag_clusterings(groups, 5, 0), Error);
}

TEST(Enumerate, ExactBudgetIsNotOverflow) {
  const auto groups = candidate_groups(walkthrough::obf(), walkthrough::basenames(), TagUniverse::WordsAndFilenames);
  const auto full = enumerate_tag_clusterings(groups, 5, kUnlimitedBudget);
  const auto tight = enumerate_tag_clusterings(groups, 5, full.nodes_expanded);
  EXPECT_FALSE(tight.overflow);
  EXPECT_EQ(partitions(tight), partitions(full));
  EXPECT_TRUE(enumerate_tag_clusterings(groups, 5, full.nodes_expanded - 1).overflow);
}

TEST(Enumerate, AgreesWithBruteForceAndIsOrderIndependent) {
  std::mt19937 rng(8080);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 5;
    const auto rc = testgen::random_class(rng, n);
    for (auto universe : {TagUniverse::WordsAndFilenames, TagUniverse::FilenamesOnly}) {
      auto groups = candidate_groups(rc.obf, rc.names, universe);
      const auto got = partitions(enumerate_tag_clusterings(groups, n, kUnlimitedBudget));
      std::set<Partition> expected;
      for (const auto& p : oracle::all_partitions(n))
        if (oracle::taggable(p, rc.ranks, rc.names, universe == TagUniverse::WordsAndFilenames))
          expected.insert(p);
      EXPECT_EQ(got, expected) << "trial " << trial;
      std::shuffle(groups.begin(), groups.end(), rng);
      EXPECT_EQ(partitions(enumerate_tag_clusterings(groups, n, kUnlimitedBudget)), got);
    }
  }
}

TEST(ComparePartitions, IllustrationRelations) {
  const auto c0 = walkthrough::c0().assignment;
  EXPECT_EQ(compare_partitions(c0, walkthrough::c2()), Relation::Refines);
  EXPECT_EQ(compare_partitions(walkthrough::c1(), walkthrough::c2()), Relation::Refines);
  EXPECT_EQ(compare_partitions(c0, walkthrough::c1()), Relation::Incomparable);
  EXPECT_EQ(compare_partitions(walkthrough::c2(), c0), Relation::Coarsens);
  EXPECT_EQ(compare_partitions(c0, c0), Relation::Equal);
  EXPECT_THROW(compare_partitions({0, 1}, {0, 0, 1}), Error);
}

TEST(ComparePartitions, PartialOrderProperties) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const auto a = random_partition(rng, n), b = random_partition(rng, n), c = random_partition(rng, n);
    const auto ab = compare_partitions(a, b), ba = compare_partitions(b, a);
    EXPECT_EQ(compare_partitions(a, a), Relation::Equal);
    EXPECT_EQ(ab == Relation::Refines, ba == Relation::Coarsens);
    EXPECT_EQ(ab == Relation::Equal, ba == Relation::Equal);
    EXPECT_EQ(ab == Relation::Equal, a == b);
    const bool le_ab = oracle::leq(a, b), le_ba = oracle::leq(b, a);
    EXPECT_EQ(ab == Relation::Equal || ab == Relation::Refines, le_ab);
    EXPECT_EQ(ab == Relation::Incomparable, !le_ab && !le_ba);
    auto leq = [](const Partition& x, const Partition& y) {
      const auto r = compare_partitions(x, y);
      return r == Relation::Equal || r == Relation::Refines;
    };
    if (leq(a, b) && leq(b, c)) EXPECT_TRUE(leq(a, c));
    Partition singletons(n), one(n, 0);
    std::iota(singletons.begin(), singletons.end(), 0u);
    EXPECT_TRUE(leq(singletons, a));
    EXPECT_TRUE(leq(a, one));
  }
}

TEST(RqSummary, EqualCountsInEveryExistenceColumn) {
  ClassEvaluation c;
  c.embedding = {0, 0, 1};
  c.embedding_k = 2;
  c.words_and_filenames.partitions = {{{0, 0, 1}, {}}};
  const auto t = rq_summary(std::vector<ClassEvaluation>{c});
  EXPECT_EQ(t.multi_cluster_classes, 1u);
  EXPECT_EQ(t.words_and_filenames.equal, 1u);
  EXPECT_EQ(t.words_and_filenames.refines_or_equal, 1u);
  EXPECT_EQ(t.words_and_filenames.coarsens_or_equal, 1u);
  EXPECT_EQ(t.words_and_filenames.incomparable, 0u);
  EXPECT_EQ(t.filenames_only, (SummaryRow{"Filenames only"}));
}

TEST(RqSummary, SingleClusterClassesAreExcluded) {
  ClassEvaluation c;
  c.embedding = {0, 0};
  c.embedding_k = 1;
  c.words_and_filenames.partitions = {{{0, 0}, {}}};
  const auto t = rq_summary(std::vector<ClassEvaluation>{c});
  EXPECT_EQ(t.classes_total, 1u);
  EXPECT_EQ(t.multi_cluster_classes, 0u);
  EXPECT_EQ(t.words_and_filenames.equal, 0u);
}

TEST(RqSummary, MatchesBruteForceEvaluator) {
  std::mt19937 rng(606);
  std::vector<ClassEvaluation> evals;
  std::uint64_t eq = 0, le = 0, ge = 0, inc = 0, multi = 0;
  for (int i = 0; i < 150; ++i) {
    const std::size_t n = 3;
    const auto rc = testgen::random_class(rng, n);
    ClassEvaluation e;
    e.class_id = static_cast<std::uint32_t>(i);
    e.embedding = random_partition(rng, n);
    e.embedding_k = *std::max_element(e.embedding.begin(), e.embedding.end()) + 1;
    e.words_and_filenames = enumerate_tag_clusterings(
        candidate_groups(rc.obf, rc.names, TagUniverse::WordsAndFilenames), n, kUnlimitedBudget);
    e.filenames_only = enumerate_tag_clusterings(candidate_groups(rc.obf, rc.names, TagUniverse::FilenamesOnly),
                                                 n, kUnlimitedBudget);
    evals.push_back(e);
    if (e.embedding_k < 2) continue;
    ++multi;
    bool x_eq = false, x_le = false, x_ge = false, x_inc = false;
    for (const auto& p : oracle::all_partitions(n)) {
      if (!oracle::taggable(p, rc.ranks, rc.names, true)) continue;
      const bool a = oracle::leq(p, e.embedding), b = oracle::leq(e.embedding, p);
      x_eq |= a && b;
      x_le |= a;
      x_ge |= b;
      x_inc |= !a && !b;
    }
    eq += x_eq;
    le += x_le;
    ge += x_ge;
    inc += x_inc;
  }
  const auto t = rq_summary(evals);
  EXPECT_EQ(t.multi_cluster_classes, multi);
  EXPECT_EQ(t.words_and_filenames.equal, eq);
  EXPECT_EQ(t.words_and_filenames.refines_or_equal, le);
  EXPECT_EQ(t.words_and_filenames.coarsens_or_equal, ge);
  EXPECT_EQ(t.words_and_filenames.incomparable, inc);
  EXPECT_GT(eq, 0u);
  const auto text = t.render();
  EXPECT_NE(text.find("Words and filenames"), std::string::npos);
  EXPECT_NE(text.find("Filenames only"), std::string::npos);
  EXPECT_EQ(nlohmann::json(t).get<SummaryTable>(), t);
}
