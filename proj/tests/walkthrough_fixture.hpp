#pragma once

// Five fragments f1..f5 in three clusters c1 = {f1, f2}, c2 = {f3, f4},
// c3 = {f5}, with filenames F.c F.c G.c H.c G.c and ObF lists chosen so that:
//   c1 may be tagged by F.c or b (c is ranked top-6 by f4 and f5),
//   c2 may be tagged by t (u is top-3 for f5),
//   c3 has no tag (c, d, u all rank top-6 in c1 or c2; G.c is used by f3).

#include <string>
#include <vector>

#include "clonetag/clustering.hpp"
#include "clonetag/tagging.hpp"

namespace walkthrough {

inline clonetag::ObFList ranked(const std::vector<std::string>& words) {
  clonetag::ObFList l;
  for (std::size_t i = 0; i < words.size(); ++i) {
    clonetag::ObFEntry e;
    e.word = words[i];
    e.tfidf = static_cast<double>(words.size() - i);
    e.rank = static_cast<std::uint32_t>(i + 1);
    e.count = 1;
    e.channel_counts = {1, 0, 0};
    l.ranked.push_back(e);
  }
  return l;
}

inline std::vector<clonetag::ObFList> obf() {
  return {
      ranked({"b", "c", "a", "d", "e", "z1", "y1"}),  // f1
      ranked({"c", "b", "e", "a", "z2", "z3", "y2"}),  // f2
      ranked({"t", "u", "s", "v", "z4", "z5", "y3"}),  // f3
      ranked({"u", "t", "v", "s", "c", "z6", "y4"}),   // f4
      ranked({"c", "d", "u", "z7", "z8", "z9", "y5"}), // f5
  };
}

inline std::vector<std::string> basenames() { return {"F.c", "F.c", "G.c", "H.c", "G.c"}; }

// C0: the clustering of the illustration.
inline clonetag::Clustering c0() { return {0, {0, 0, 1, 1, 2}, 3, std::nullopt}; }
// C1: filename clustering F.c {f1,f2}, G.c {f3,f5}, H.c {f4}.
inline std::vector<std::uint32_t> c1() { return {0, 0, 1, 2, 1}; }
// C2: F.c {f1,f2}, u {f3,f4,f5}.
inline std::vector<std::uint32_t> c2() { return {0, 0, 1, 1, 1}; }

}  // namespace walkthrough
