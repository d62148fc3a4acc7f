#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace oracle {

std::vector<Seq> sequences(const fixtures::RawLog& log) {
  std::vector<Seq> out;
  for (const auto& c : log) {
    Seq s;
    for (const auto& e : c.events) s.push_back(e.activity);
    out.push_back(s);
  }
  return out;
}

std::set<std::string> alphabet(const fixtures::RawLog& log) {
  std::set<std::string> out;
  for (const auto& c : log)
    for (const auto& e : c.events) out.insert(e.activity);
  return out;
}

Dfg dfg(const fixtures::RawLog& log) {
  Dfg g;
  for (const auto& s : sequences(log)) {
    g.starts[s.front()]++;
    g.ends[s.back()]++;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) g.edges[{s[i], s[i + 1]}]++;
  }
  return g;
}

std::map<Seq, long> variants(const fixtures::RawLog& log) {
  std::map<Seq, long> out;
  for (const auto& s : sequences(log)) out[s]++;
  return out;
}

std::map<Pair, Timing> temporal_profile(const fixtures::RawLog& log) {
  std::map<Pair, std::vector<double>> obs;
  for (const auto& c : log)
    for (std::size_t i = 0; i < c.events.size(); ++i)
      for (std::size_t j = i + 1; j < c.events.size(); ++j)
        obs[{c.events[i].activity, c.events[j].activity}].push_back(
            static_cast<double>(c.events[j].seconds - c.events[i].seconds));
  std::map<Pair, Timing> out;
  for (const auto& [p, xs] : obs) {
    double sum = 0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double sq = 0;
    for (double x : xs) sq += (x - mean) * (x - mean);
    out[p] = {mean, std::sqrt(sq / static_cast<double>(xs.size())), static_cast<long>(xs.size())};
  }
  return out;
}

namespace {

long count(const Seq& s, const std::string& a) { return static_cast<long>(std::count(s.begin(), s.end(), a)); }

bool has_before(const Seq& s, std::size_t j, const std::string& a) {
  for (std::size_t i = 0; i < j; ++i)
    if (s[i] == a) return true;
  return false;
}

bool has_after(const Seq& s, std::size_t i, const std::string& b) {
  for (std::size_t j = i + 1; j < s.size(); ++j)
    if (s[j] == b) return true;
  return false;
}

}  // namespace

Skeleton log_skeleton(const fixtures::RawLog& log) {
  const auto seqs = sequences(log);
  const auto acts = alphabet(log);
  Skeleton k;
  for (const auto& a : acts) {
    long lo = 1L << 40, hi = 0;
    for (const auto& s : seqs) {
      lo = std::min(lo, count(s, a));
      hi = std::max(hi, count(s, a));
    }
    k.frequencies[a] = {lo, hi};
  }
  for (const auto& a : acts)
    for (const auto& b : acts) {
      if (a == b) continue;
      bool equal = true, together = false, before = true, after = true;
      for (const auto& s : seqs) {
        equal = equal && count(s, a) == count(s, b);
        together = together || (count(s, a) > 0 && count(s, b) > 0);
        for (std::size_t j = 0; j < s.size(); ++j) {
          if (s[j] == b && !has_before(s, j, a)) before = false;  // b needs an earlier a
          if (s[j] == a && !has_after(s, j, b)) after = false;    // a needs a later b
        }
      }
      if (a < b && equal) k.equivalence.insert({a, b});
      if (a < b && !together) k.never_together.insert({a, b});
      if (before) k.always_before.insert({b, a});
      if (after) k.always_after.insert({a, b});
    }
  for (const auto& [e, n] : dfg(log).edges) k.directly_follows.insert(e);
  return k;
}

std::map<std::string, std::set<Seq>> declare(const fixtures::RawLog& log) {
  const auto seqs = sequences(log);
  const auto acts = alphabet(log);
  std::map<std::string, std::set<Seq>> out;
  auto all = [&](const std::function<bool(const Seq&)>& pred) {
    return std::all_of(seqs.begin(), seqs.end(), pred);
  };
  for (const auto& a : acts) {
    if (all([&](const Seq& s) { return count(s, a) >= 1; })) out["existence"].insert({a});
    if (all([&](const Seq& s) { return count(s, a) == 1; })) out["exactly_one"].insert({a});
    if (all([&](const Seq& s) { return s.front() == a; })) out["init"].insert({a});
    if (all([&](const Seq& s) { return s.back() == a; })) out["end"].insert({a});
  }
  for (const auto& a : acts)
    for (const auto& b : acts) {
      if (a == b) continue;
      auto response = [&](const Seq& s) {
        for (std::size_t i = 0; i < s.size(); ++i)
          if (s[i] == a && !has_after(s, i, b)) return false;
        return true;
      };
      auto precedence = [&](const Seq& s) {
        for (std::size_t j = 0; j < s.size(); ++j)
          if (s[j] == b && !has_before(s, j, a)) return false;
        return true;
      };
      if (all([&](const Seq& s) { return count(s, a) == 0 || count(s, b) > 0; }))
        out["responded_existence"].insert({a, b});
      if (all(response)) out["response"].insert({a, b});
      if (all(precedence)) out["precedence"].insert({a, b});
      if (all([&](const Seq& s) { return response(s) && precedence(s); })) out["succession"].insert({a, b});
      if (all([&](const Seq& s) {
            for (std::size_t i = 0; i < s.size(); ++i)
              if (s[i] == a && (i + 1 >= s.size() || s[i + 1] != b)) return false;
            return true;
          }))
        out["chain_response"].insert({a, b});
      if (all([&](const Seq& s) {
            for (std::size_t j = 0; j < s.size(); ++j)
              if (s[j] == b && (j == 0 || s[j - 1] != a)) return false;
            return true;
          }))
        out["chain_precedence"].insert({a, b});
      if (a < b) {
        if (all([&](const Seq& s) { return (count(s, a) > 0) == (count(s, b) > 0); }))
          out["coexistence"].insert({a, b});
        if (all([&](const Seq& s) { return !(count(s, a) > 0 && count(s, b) > 0); }))
          out["noncoexistence"].insert({a, b});
      }
    }
  return out;
}

}  // namespace oracle
