#include "oracle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace oracle {

std::vector<Relation> subsets(const Relation& universe, std::size_t max_size) {
  std::vector<Relation> out;
  const std::size_t n = universe.size();
  if (n >= 63) throw std::length_error("universe too large for a mask");
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Relation r;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) r.push_back(universe[i]);
    }
    if (r.size() <= max_size) out.push_back(r);
  }
  return out;
}

Relation cube(int k, int arity) {
  Relation out{Row{}};
  for (int a = 0; a < arity; ++a) {
    Relation next;
    for (const auto& row : out) {
      for (int v = 0; v < k; ++v) {
        auto r = row;
        r.push_back(v);
        next.push_back(r);
      }
    }
    out = next;
  }
  return out;
}

bool fd_holds(const Relation& r, const std::vector<int>& lhs, const std::vector<int>& rhs) {
  std::map<Row, Row> seen;
  for (const auto& row : r) {
    Row k, v;
    for (int c : lhs) k.push_back(row[c]);
    for (int c : rhs) v.push_back(row[c]);
    auto [it, fresh] = seen.emplace(k, v);
    if (!fresh && it->second != v) return false;
  }
  return true;
}

Relation project(const Relation& r, const std::vector<int>& cols) {
  std::set<Row> out;
  for (const auto& row : r) {
    Row p;
    for (int c : cols) p.push_back(row[c]);
    out.insert(p);
  }
  return {out.begin(), out.end()};
}

Relation natural_join_on(const Relation& l, int lcol, const Relation& r, int rcol) {
  std::set<Row> out;
  for (const auto& a : l) {
    for (const auto& b : r) {
      if (a[lcol] != b[rcol]) continue;
      Row j = a;
      for (int i = 0; i < static_cast<int>(b.size()); ++i) {
        if (i != rcol) j.push_back(b[i]);
      }
      out.insert(j);
    }
  }
  return {out.begin(), out.end()};
}

std::size_t count_if_subsets(const Relation& universe, std::size_t max_size,
                             const std::function<bool(const Relation&)>& pred) {
  // Size-bounded combinations; the universe may exceed a 64-bit mask.
  std::size_t n = 0;
  Relation cur;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    n += pred(cur) ? 1 : 0;
    if (cur.size() == max_size) return;
    for (std::size_t i = from; i < universe.size(); ++i) {
      cur.push_back(universe[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return n;
}

}  // namespace oracle
