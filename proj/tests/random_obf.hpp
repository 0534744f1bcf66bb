#pragma once

#include <random>
#include <string>
#include <vector>

#include "clonetag/tagging.hpp"
#include "oracles.hpp"

namespace testgen {

// A random clone class: ObF lists over a small vocabulary with frequent TF-IDF
// ties, plus basenames from a small pool.
struct RandomClass {
  std::vector<clonetag::ObFList> obf;
  std::vector<std::string> names;
  std::vector<oracle::Ranks> ranks;
};

inline RandomClass random_class(std::mt19937& rng, std::size_t n) {
  static const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f", "g", "h", "i"};
  static const std::vector<std::string> files = {"A.c", "B.c", "C.c", "D.h"};
  RandomClass rc;
  for (std::size_t f = 0; f < n; ++f) {
    std::vector<std::string> words = vocab;
    std::shuffle(words.begin(), words.end(), rng);
    words.resize(2 + rng() % (vocab.size() - 1));
    std::vector<clonetag::ObFEntry> entries;
    for (const auto& w : words) {
      clonetag::ObFEntry e;
      e.word = w;
      e.count = 1 + rng() % 3;
      e.tfidf = static_cast<double>(1 + rng() % 6);
      e.channel_counts = {e.count, 0, 0};
      entries.push_back(e);
    }
    clonetag::rank_entries(entries);
    oracle::Ranks r;
    for (const auto& e : entries) r[e.word] = e.rank;
    rc.obf.push_back({entries});
    rc.ranks.push_back(std::move(r));
    rc.names.push_back(files[rng() % (rng() % 2 ? 2 : files.size())]);
  }
  return rc;
}

}  // namespace testgen
