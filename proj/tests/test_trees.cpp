#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sint/errors.hpp"
#include "sint/trees.hpp"

using sint::RootedTree;

namespace {

RootedTree node(std::vector<RootedTree> children) {
  RootedTree t;
  t.children = std::move(children);
  return t;
}

RootedTree chain(int n) {
  RootedTree t = RootedTree::leaf();
  for (int i = 1; i < n; ++i) t = node({t});
  return t;
}

// Independent enumerator: every labeled rooted tree on n nodes is a parent
// array with parent[v] < v; dedupe by canonical form. (n-1)! candidates.
std::set<std::string> brute_force_forms(int n) {
  std::set<std::string> forms;
  std::vector<int> parent(n, -1);
  std::function<void(int)> rec = [&](int i) {
    if (i == n) {
      std::vector<RootedTree> nodes(n);
      for (int v = n - 1; v >= 1; --v)
        nodes[parent[v]].children.push_back(std::move(nodes[v]));
      forms.insert(sint::to_string(sint::canonicalize(std::move(nodes[0]))));
      return;
    }
    for (int p = 0; p < i; ++p) {
      parent[i] = p;
      rec(i + 1);
    }
  };
  rec(1);
  return forms;
}

}  // namespace

TEST_CASE("node counts") {
  CHECK(sint::rho(RootedTree::empty_tree()) == 0);
  CHECK(sint::rho(RootedTree::leaf()) == 1);
  CHECK(sint::rho(chain(4)) == 4);
  CHECK(sint::rho(node({chain(2), RootedTree::leaf()})) == 4);
}

TEST_CASE("string form") {
  CHECK(sint::to_string(RootedTree::empty_tree()) == "{}");
  CHECK(sint::to_string(RootedTree::leaf()) == ".");
  CHECK(sint::to_string(chain(3)) == "[[.]]");
  // larger subtree printed first in canonical form
  const RootedTree t = sint::canonicalize(node({RootedTree::leaf(), chain(2)}));
  CHECK(sint::to_string(t) == "[[.],.]");
}

TEST_CASE("hand table of alpha and gamma through order 4") {
  const auto trees = sint::enumerate_trees(4);
  const std::vector<std::tuple<std::string, std::string, std::int64_t>> expected = {
      {".", "1", 1},        {"[.]", "1", 2},      {"[[.]]", "1", 6},
      {"[.,.]", "1/2", 3},  {"[[[.]]]", "1", 24}, {"[[.,.]]", "1/2", 12},
      {"[[.],.]", "1", 8},  {"[.,.,.]", "1/6", 4},
  };
  REQUIRE(trees.size() == expected.size());
  for (const auto& tau : trees) {
    const std::string form = sint::to_string(tau);
    bool seen = false;
    for (const auto& [f, a, g] : expected) {
      if (f != form) continue;
      seen = true;
      CHECK(sint::alpha(tau).str() == a);
      CHECK(sint::gamma_density(tau) == g);
    }
    CHECK_MESSAGE(seen, "unexpected tree ", form);
  }
}

TEST_CASE("gamma of a chain is the factorial") {
  std::int64_t factorial = 1;
  for (int n = 1; n <= 9; ++n) {
    factorial *= n;
    CHECK(sint::gamma_density(chain(n)) == factorial);
  }
}

TEST_CASE("enumeration matches the brute-force labeled enumerator") {
  const std::vector<std::size_t> expected_counts = {1, 1, 2, 4, 9, 20, 48, 115};
  const auto trees = sint::enumerate_trees(8);
  std::vector<std::set<std::string>> by_order(8);
  for (const auto& tau : trees) by_order[sint::rho(tau) - 1].insert(sint::to_string(tau));
  std::size_t total = 0;
  for (int n = 1; n <= 8; ++n) {
    CHECK(by_order[n - 1].size() == expected_counts[n - 1]);
    CHECK(by_order[n - 1] == brute_force_forms(n));
    total += by_order[n - 1].size();
  }
  CHECK(trees.size() == total);
}

TEST_CASE("enumeration is sorted and duplicate-free") {
  const auto trees = sint::enumerate_trees(7);
  for (std::size_t i = 1; i < trees.size(); ++i) {
    const int ra = sint::rho(trees[i - 1]), rb = sint::rho(trees[i]);
    CHECK(ra <= rb);
    if (ra == rb) CHECK(sint::tree_less(trees[i - 1], trees[i]));
  }
}

TEST_CASE("order cap") {
  CHECK_THROWS_AS((void)sint::enumerate_trees(sint::kTreeOrderCap + 1), sint::size_limit_error);
  CHECK_THROWS_AS((void)sint::enumerate_trees(3, 2), sint::size_limit_error);
}

TEST_CASE("canonicalize is invariant under child shuffles") {
  std::mt19937 gen(12345);
  std::function<RootedTree(RootedTree)> shuffle = [&](RootedTree t) {
    for (auto& c : t.children) c = shuffle(std::move(c));
    std::shuffle(t.children.begin(), t.children.end(), gen);
    return t;
  };
  for (const auto& tau : sint::enumerate_trees(6)) {
    CHECK(sint::canonicalize(tau) == tau);  // idempotent on canonical input
    for (int trial = 0; trial < 5; ++trial) {
      const RootedTree scrambled = shuffle(tau);
      CHECK(sint::canonicalize(scrambled) == tau);
      CHECK(sint::alpha(sint::canonicalize(scrambled)) == sint::alpha(tau));
      CHECK(sint::gamma_density(scrambled) == sint::gamma_density(tau));
    }
  }
}

TEST_CASE("max out-degree") {
  CHECK(sint::max_out_degree(RootedTree::leaf()) == 0);
  CHECK(sint::max_out_degree(chain(5)) == 1);
  CHECK(sint::max_out_degree(node({RootedTree::leaf(), RootedTree::leaf(),
                                   RootedTree::leaf()})) == 3);
  CHECK(sint::max_out_degree(node({node({RootedTree::leaf(), RootedTree::leaf()})})) == 2);
}

TEST_CASE("alpha accounts for repeated subtrees") {
  // three equal children: 1/3! times the children's own coefficients
  const RootedTree bushy = node({chain(2), chain(2), chain(2)});
  CHECK(sint::alpha(bushy).str() == "1/6");
  // two distinct children: no symmetry factor
  const RootedTree mixed = sint::canonicalize(node({chain(2), RootedTree::leaf()}));
  CHECK(sint::alpha(mixed).str() == "1");
}
