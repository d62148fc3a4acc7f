#pragma once

// Brute-force evaluators written straight from the definitions, sharing no
// code with the library's discovery routines.

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "fixtures.hpp"

namespace oracle {

using Pair = std::pair<std::string, std::string>;
using Seq = std::vector<std::string>;

std::vector<Seq> sequences(const fixtures::RawLog& log);
std::set<std::string> alphabet(const fixtures::RawLog& log);

struct Dfg {
  std::map<Pair, long> edges;
  std::map<std::string, long> starts, ends;
};
Dfg dfg(const fixtures::RawLog& log);

std::map<Seq, long> variants(const fixtures::RawLog& log);

struct Timing {
  double mean = 0, stdev = 0;
  long count = 0;
};
std::map<Pair, Timing> temporal_profile(const fixtures::RawLog& log);

struct Skeleton {
  std::set<Pair> equivalence, always_before, always_after, never_together, directly_follows;
  std::map<std::string, std::pair<long, long>> frequencies;
};
Skeleton log_skeleton(const fixtures::RawLog& log);

/// template name -> parameter lists holding in every case.
std::map<std::string, std::set<Seq>> declare(const fixtures::RawLog& log);

}  // namespace oracle
