#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sint/rational.hpp"

namespace sint {

/// Canonical non-colored rooted tree. The empty tree is a distinguished
/// value; the single-node tree has an empty child list. Children of a
/// canonical tree are sorted under tree_less, so two isomorphic trees have
/// identical representations.
struct RootedTree {
  std::vector<RootedTree> children;
  bool is_empty = false;

  static RootedTree empty_tree() {
    RootedTree t;
    t.is_empty = true;
    return t;
  }
  static RootedTree leaf() { return RootedTree{}; }

  bool operator==(const RootedTree& other) const {
    return is_empty == other.is_empty && children == other.children;
  }
};

inline constexpr int kTreeOrderCap = 10;

/// Number of nodes (0 for the empty tree).
int rho(const RootedTree& t);

/// Symmetry-normalized multiplicity coefficient, exact.
Rational alpha(const RootedTree& t);

/// Tree density: gamma(empty) = gamma(leaf) = 1, gamma(tau) = rho(tau) * prod gamma(child).
std::int64_t gamma_density(const RootedTree& t);

/// Total order on canonical trees: by node count, then lexicographically on
/// the (recursively compared) child lists. Stable across runs.
bool tree_less(const RootedTree& a, const RootedTree& b);

/// Sorts child lists recursively; idempotent; isomorphic inputs map to the
/// same representative.
RootedTree canonicalize(RootedTree t);

/// Maximum root-out-degree over all nodes (derivative order needed to
/// evaluate the elementary differential).
int max_out_degree(const RootedTree& t);

/// All canonical trees with 1 <= rho(tau) <= n_max, grouped by order
/// (ascending) and sorted within each order. Throws size_limit_error if
/// n_max exceeds the cap.
std::vector<RootedTree> enumerate_trees(int n_max, int cap = kTreeOrderCap);

/// Nested-bracket form: "." for the single node, "[...]" joining child
/// strings, "{}" for the empty tree.
std::string to_string(const RootedTree& t);

}  // namespace sint
