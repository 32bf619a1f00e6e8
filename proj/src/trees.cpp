#include "sint/trees.hpp"

#include <algorithm>
#include <map>

#include "sint/errors.hpp"

namespace sint {

int rho(const RootedTree& t) {
  if (t.is_empty) return 0;
  int n = 1;
  for (const auto& c : t.children) n += rho(c);
  return n;
}

Rational alpha(const RootedTree& t) {
  if (t.is_empty || t.children.empty()) return Rational(1);
  // Children of a canonical tree are sorted, so equal subtrees are adjacent.
  Rational result(1);
  std::size_t i = 0;
  while (i < t.children.size()) {
    std::size_t j = i;
    while (j < t.children.size() && t.children[j] == t.children[i]) ++j;
    std::int64_t fact = 1;
    for (std::int64_t r = 2; r <= static_cast<std::int64_t>(j - i); ++r) fact *= r;
    result = result / Rational(fact);
    i = j;
  }
  for (const auto& c : t.children) result = result * alpha(c);
  return result;
}

std::int64_t gamma_density(const RootedTree& t) {
  if (t.is_empty || t.children.empty()) return 1;
  std::int64_t g = rho(t);
  for (const auto& c : t.children) g *= gamma_density(c);
  return g;
}

bool tree_less(const RootedTree& a, const RootedTree& b) {
  const int ra = rho(a), rb = rho(b);
  if (ra != rb) return ra < rb;
  return std::lexicographical_compare(a.children.begin(), a.children.end(), b.children.begin(),
                                      b.children.end(), tree_less);
}

RootedTree canonicalize(RootedTree t) {
  for (auto& c : t.children) c = canonicalize(std::move(c));
  // Larger subtrees first, matching the display convention.
  std::sort(t.children.begin(), t.children.end(),
            [](const RootedTree& a, const RootedTree& b) { return tree_less(b, a); });
  return t;
}

int max_out_degree(const RootedTree& t) {
  int deg = static_cast<int>(t.children.size());
  for (const auto& c : t.children) deg = std::max(deg, max_out_degree(c));
  return deg;
}

namespace {

// Appends, to `out`, all canonical trees whose root joins a non-ascending
// (under tree_less, largest first) sequence of subtrees drawn from `pool`
// with node counts summing exactly to `budget`. `pool` holds all canonical
// trees of order < current order, sorted descending; `start` enforces the
// non-ascending choice so each multiset is produced once.
void extend_children(const std::vector<RootedTree>& pool, std::size_t start, int budget,
                     std::vector<RootedTree>& current, std::vector<RootedTree>& out) {
  if (budget == 0) {
    RootedTree t;
    t.children = current;
    out.push_back(std::move(t));
    return;
  }
  for (std::size_t i = start; i < pool.size(); ++i) {
    const int r = rho(pool[i]);
    if (r > budget) continue;
    current.push_back(pool[i]);
    extend_children(pool, i, budget - r, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<RootedTree> enumerate_trees(int n_max, int cap) {
  if (n_max > cap)
    throw size_limit_error("tree enumeration order " + std::to_string(n_max) +
                           " exceeds cap " + std::to_string(cap));
  std::vector<std::vector<RootedTree>> by_order;  // by_order[n-1]: trees of order n
  std::vector<RootedTree> pool;                   // all smaller trees, descending
  for (int n = 1; n <= n_max; ++n) {
    std::vector<RootedTree> level;
    if (n == 1) {
      level.push_back(RootedTree::leaf());
    } else {
      std::vector<RootedTree> current;
      extend_children(pool, 0, n - 1, current, level);
    }
    std::sort(level.begin(), level.end(), tree_less);
    // Prepend this level to the pool, keeping the pool descending by order.
    pool.insert(pool.begin(), level.rbegin(), level.rend());
    by_order.push_back(std::move(level));
  }
  std::vector<RootedTree> result;
  for (auto& level : by_order)
    for (auto& t : level) result.push_back(std::move(t));
  return result;
}

std::string to_string(const RootedTree& t) {
  if (t.is_empty) return "{}";
  if (t.children.empty()) return ".";
  std::string s = "[";
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i > 0) s += ",";
    s += to_string(t.children[i]);
  }
  s += "]";
  return s;
}

}  // namespace sint
