#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <iterator>
#include <utility>
#include <vector>

namespace occt {

/// A finite or cofinite set of singletons of one base kind.
///
/// `cofinite == false` denotes exactly `elems`; `cofinite == true` denotes
/// every element of the kind except `elems`. `elems` is kept sorted and
/// duplicate-free so that equal sets compare equal.
template <class T>
struct BasicSet {
  bool cofinite = false;
  std::vector<T> elems;

  static BasicSet none() { return {}; }
  static BasicSet all() { return {true, {}}; }
  static BasicSet of(std::vector<T> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return {false, std::move(xs)};
  }

  bool is_empty() const { return !cofinite && elems.empty(); }
  bool is_full() const { return cofinite && elems.empty(); }

  bool contains(const T& x) const {
    bool in = std::binary_search(elems.begin(), elems.end(), x);
    return cofinite ? !in : in;
  }

  BasicSet complement() const { return {!cofinite, elems}; }

  friend BasicSet operator|(const BasicSet& a, const BasicSet& b) {
    if (!a.cofinite && !b.cofinite) return {false, set_union(a.elems, b.elems)};
    if (a.cofinite && b.cofinite) return {true, set_inter(a.elems, b.elems)};
    const BasicSet& co = a.cofinite ? a : b;
    const BasicSet& fin = a.cofinite ? b : a;
    return {true, set_diff(co.elems, fin.elems)};
  }

  friend BasicSet operator&(const BasicSet& a, const BasicSet& b) {
    if (!a.cofinite && !b.cofinite) return {false, set_inter(a.elems, b.elems)};
    if (a.cofinite && b.cofinite) return {true, set_union(a.elems, b.elems)};
    const BasicSet& co = a.cofinite ? a : b;
    const BasicSet& fin = a.cofinite ? b : a;
    return {false, set_diff(fin.elems, co.elems)};
  }

  friend BasicSet operator-(const BasicSet& a, const BasicSet& b) { return a & b.complement(); }

  friend bool operator==(const BasicSet&, const BasicSet&) = default;

  std::size_t hash() const {
    std::size_t h = cofinite ? 0x9e3779b97f4a7c15ULL : 0x1234567ULL;
    for (const auto& e : elems) h = h * 1000003u ^ std::hash<T>{}(e);
    return h;
  }

 private:
  static std::vector<T> set_union(const std::vector<T>& a, const std::vector<T>& b) {
    std::vector<T> r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
  }
  static std::vector<T> set_inter(const std::vector<T>& a, const std::vector<T>& b) {
    std::vector<T> r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
  }
  static std::vector<T> set_diff(const std::vector<T>& a, const std::vector<T>& b) {
    std::vector<T> r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
  }
};

}  // namespace occt
