#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>

#include "sint/errors.hpp"
#include "sint/trees.hpp"
#include "sint/vecops.hpp"

namespace sint {

/// Vector field with multilinear derivative contractions. contractions[k-1]
/// evaluates f^{(k)}(x)(v_1, ..., v_k); entries beyond the polynomial degree
/// of f are identically zero but must still be present up to max_derivative.
template <class S>
struct DerivativeOracle {
  int dim = 0;
  std::function<Vec<S>(const Vec<S>&)> f;
  std::vector<std::function<Vec<S>(const Vec<S>&, const std::vector<Vec<S>>&)>> contractions;

  int max_derivative() const { return static_cast<int>(contractions.size()); }
};

/// Recursive elementary differential F(tau)(x). F(empty) = x, F(leaf) = f(x),
/// F([t1..tk]) = f^(k)(x)(F(t1), ..., F(tk)). Child evaluations are memoized
/// per call via the canonical string key (subtree sharing dominates the cost
/// at order >= 5).
template <class S>
Vec<S> elementary_differential_memo(const RootedTree& tau, const DerivativeOracle<S>& oracle,
                                    const Vec<S>& x, std::map<std::string, Vec<S>>& cache) {
  if (tau.is_empty) return x;
  if (tau.children.empty()) return oracle.f(x);
  const std::string key = to_string(tau);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const int k = static_cast<int>(tau.children.size());
  if (k > oracle.max_derivative())
    throw capability_error("elementary differential of " + key + " needs derivative order " +
                           std::to_string(k) + ", oracle provides " +
                           std::to_string(oracle.max_derivative()));
  std::vector<Vec<S>> args;
  args.reserve(tau.children.size());
  for (const auto& child : tau.children)
    args.push_back(elementary_differential_memo(child, oracle, x, cache));
  Vec<S> value = oracle.contractions[k - 1](x, args);
  cache.emplace(key, value);
  return value;
}

template <class S>
Vec<S> elementary_differential(const RootedTree& tau, const DerivativeOracle<S>& oracle,
                               const Vec<S>& x) {
  std::map<std::string, Vec<S>> cache;
  return elementary_differential_memo(tau, oracle, x, cache);
}

/// Weight of the exact solution: dmu^rho(tau) / gamma(tau); 1 at the empty tree.
template <class S>
S exact_weight(const RootedTree& tau, const S& dmu) {
  if (tau.is_empty) return S(1);
  S p(1);
  for (int i = 0; i < rho(tau); ++i) p *= dmu;
  return p / S(gamma_density(tau));
}

/// Truncated B-series sum over all trees with rho(tau) <= n_max, including
/// the empty-tree term x.
template <class S>
Vec<S> evaluate_bseries(const std::function<S(const RootedTree&)>& weight,
                        const DerivativeOracle<S>& oracle, const Vec<S>& x, int n_max) {
  Vec<S> sum = x;
  if (n_max <= 0) return sum;
  std::map<std::string, Vec<S>> cache;
  for (const auto& tau : enumerate_trees(n_max)) {
    const S w = weight(tau);
    if (w == S(0)) continue;
    const Vec<S> ft = elementary_differential_memo(tau, oracle, x, cache);
    const S a = S(alpha(tau).num()) / S(alpha(tau).den());
    axpy_inplace(sum, a * w, ft);
  }
  return sum;
}

/// Nested central difference of order k along the argument directions; the
/// step is the cube root of machine epsilon scaled by 1 + |x|.
template <class S>
Vec<S> fd_contract(const std::function<Vec<S>(const Vec<S>&)>& f, int k, const Vec<S>& x,
                   const std::vector<Vec<S>>& vs, std::size_t which) {
  const S eps =
      S(std::cbrt(std::numeric_limits<double>::epsilon())) * (S(1) + norm_inf(x));
  const Vec<S> xp = axpy(x, eps, vs[which]);
  const Vec<S> xm = axpy(x, -eps, vs[which]);
  Vec<S> fp, fm;
  if (k == 1) {
    fp = f(xp);
    fm = f(xm);
  } else {
    fp = fd_contract(f, k - 1, xp, vs, which - 1);
    fm = fd_contract(f, k - 1, xm, vs, which - 1);
  }
  Vec<S> r(fp.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = (fp[i] - fm[i]) / (S(2) * eps);
  return r;
}

/// Central finite-difference oracle built from f alone; validation aid for
/// analytic contractions, not used in any integration path.
template <class S>
DerivativeOracle<S> finite_difference_oracle(int dim, std::function<Vec<S>(const Vec<S>&)> f,
                                             int k_max) {
  DerivativeOracle<S> oracle;
  oracle.dim = dim;
  oracle.f = f;
  for (int k = 1; k <= k_max; ++k) {
    oracle.contractions.push_back([k, f](const Vec<S>& x, const std::vector<Vec<S>>& vs) {
      return fd_contract<S>(f, k, x, vs, static_cast<std::size_t>(k - 1));
    });
  }
  return oracle;
}

}  // namespace sint
