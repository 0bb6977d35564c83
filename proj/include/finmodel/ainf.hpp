#pragma once
// Stasheff identities, DG algebras, minimal models by homotopy transfer and
// the structural predicates (connective, proper, minimal, ...).
//
// Sign convention for the unshifted identities:
//   sum_{r+s+t=l} (-1)^{r+st} m_{r+1+t}(1^{(x)r} (x) m_s (x) 1^{(x)t}) = 0,
// where 1^{(x)r} (x) m_s (x) 1^{(x)t} is applied with the Koszul rule.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "finmodel/algebra.hpp"
#include "finmodel/complexes.hpp"
#include "finmodel/errors.hpp"
#include "finmodel/exactlin.hpp"
#include "finmodel/graded.hpp"

namespace finmodel {

template <class K>
struct StasheffReport {
  bool stasheff_ok = true;
  bool unit_ok = true;
  int failing_arity = 0;          // 0 when the identities hold
  std::vector<std::string> witness;  // basis names of the failing tuple
  SparseVec<K> residual;          // value of the failing identity
  std::string message;

  bool passed() const { return stasheff_ok && unit_ok; }
};

/// Left-hand side of the l-th Stasheff identity evaluated on a basis tuple.
template <class K>
SparseVec<K> stasheff_residual(const AInfinityAlgebra<K>& a, const Tuple& x) {
  const int l = static_cast<int>(x.size());
  SparseVec<K> total;
  for (const auto& [s, inner_op] : a.ops()) {
    if (s > l) break;
    const int u = l - s + 1;
    if (!a.op(u)) continue;
    int passed = 0;  // |x_1| + ... + |x_r|
    for (int r = 0; r + s <= l; ++r) {
      if (r > 0) passed += a.space().degree(x[r - 1]);
      const int t = l - r - s;
      Tuple block(x.begin() + r, x.begin() + r + s);
      const auto* inner = inner_op.find(block);
      if (!inner) continue;
      long exponent = r + static_cast<long>(s) * t + static_cast<long>(2 - s) * passed;
      K sign = signed_one<K>(parity_sign(exponent));
      Tuple outer(x.begin(), x.begin() + r);
      outer.push_back(0);
      outer.insert(outer.end(), x.begin() + r + s, x.end());
      for (const auto& [j, c] : *inner) {
        outer[r] = j;
        if (const auto* v = a.op(u)->find(outer)) sparse_axpy(total, sign * c, *v);
      }
    }
  }
  return total;
}

/// Checks the Stasheff identities for every arity up to max_arity on every
/// basis tuple, then strict unitality.  Reports the first failure.
template <class K>
StasheffReport<K> validate(const AInfinityAlgebra<K>& a, int max_arity) {
  StasheffReport<K> rep;
  for (int l = 1; l <= max_arity && rep.stasheff_ok; ++l) {
    for_each_tuple(a.dim(), static_cast<std::size_t>(l), [&](const Tuple& x) {
      if (!rep.stasheff_ok) return;
      SparseVec<K> res = stasheff_residual(a, x);
      if (res.empty()) return;
      rep.stasheff_ok = false;
      rep.failing_arity = l;
      for (auto i : x) rep.witness.push_back(a.space().name(i));
      rep.residual = std::move(res);
      rep.message = "Stasheff identity of arity " + std::to_string(l) + " fails on " + a.describe(x);
    });
  }
  const std::size_t one = a.unit();
  for (const auto& [k, op] : a.ops()) {
    for (const auto& [in, out] : op.entries()) {
      if (k == 2 || std::find(in.begin(), in.end(), one) == in.end()) continue;
      rep.unit_ok = false;
      if (rep.message.empty()) rep.message = "m_" + std::to_string(k) + " does not vanish on " + a.describe(in);
    }
  }
  for (std::size_t x = 0; x < a.dim(); ++x) {
    SparseVec<K> e{{x, K(1)}};
    if (a.evaluate(Tuple{one, x}) != e || a.evaluate(Tuple{x, one}) != e) {
      rep.unit_ok = false;
      if (rep.message.empty()) rep.message = "unit is not strict on " + a.space().name(x);
    }
  }
  return rep;
}

/// A DG algebra: an A-infinity algebra with operations only in arities 1 and
/// 2 satisfying d^2 = 0, Leibniz and associativity, with a strict unit.
template <class K>
class DGAlgebra {
 public:
  explicit DGAlgebra(AInfinityAlgebra<K> a) : a_(std::move(a)) {
    if (!a_.is_dg()) throw PropertyError("DG algebra has an operation of arity > 2");
    auto rep = validate(a_, 3);
    if (!rep.passed()) throw PropertyError("not a DG algebra: " + rep.message);
  }
  const AInfinityAlgebra<K>& algebra() const { return a_; }

 private:
  AInfinityAlgebra<K> a_;
};

/// The A-infinity algebra with m_1 = d, m_2 = product and no higher operations.
template <class K>
AInfinityAlgebra<K> from_dg(const DGAlgebra<K>& b) {
  return b.algebra();
}

template <class K>
struct MinimalModel {
  AInfinityAlgebra<K> algebra;  // minimal, on H^*(B)
  GradedLinearMap<K> f1;        // H -> B, the cocycle representatives
  CohomologyData<K> contraction;
  int max_arity = 2;            // arities computed
};

/// Largest arity that can carry a nonzero operation on a minimal algebra
/// concentrated in [a, 0]: m_k maps degrees >= k a to degrees >= a.
inline int connective_arity_bound(int a) { return std::max(2, 2 - a); }

/// Minimal model by homotopy transfer along the contraction returned by
/// cohomology(): with G_1 = -iota and G_n = h lambda_n,
///   lambda_n = sum_{s+t=n} (-1)^{s+1} mu(G_s (x) G_t),   m_n = pi lambda_n.
/// When H is connective all arities above 2 - a vanish and are computed
/// exactly; otherwise arities up to max_arity (default 2 - a, at least 3).
template <class K>
MinimalModel<K> minimal_model(const DGAlgebra<K>& dg, std::optional<int> max_arity = std::nullopt) {
  const AInfinityAlgebra<K>& b = dg.algebra();
  std::size_t unit = b.unit();
  CohomologyData<K> coh = cohomology(underlying_complex(b), std::span<const std::size_t>(&unit, 1));
  const GradedSpace& hs = coh.H;
  const std::size_t nh = hs.dim(), nb = b.dim();

  auto interval = hs.interval();
  int bound = 2;
  if (interval) {
    auto [lo, hi] = *interval;
    bound = hi <= 0 ? connective_arity_bound(lo) : std::max(3, 2 - lo);
  }
  if (max_arity) bound = *max_arity;

  Matrix<K> pi = coh.pi.full(), h = coh.h.full();
  std::vector<SparseVec<K>> rep(nh);
  for (std::size_t i = 0; i < nh; ++i) rep[i] = sparsify(coh.representatives[i]);
  auto apply = [&](const Matrix<K>& m, const SparseVec<K>& v) { return sparsify(m * densify(v, nb)); };

  // G_s on H-basis tuples.
  std::map<Tuple, SparseVec<K>> g_memo;
  std::map<int, Operation<K>> ops;
  std::function<SparseVec<K>(const Tuple&)> lambda;
  std::function<const SparseVec<K>&(const Tuple&)> g = [&](const Tuple& t) -> const SparseVec<K>& {
    auto it = g_memo.find(t);
    if (it != g_memo.end()) return it->second;
    SparseVec<K> val;
    if (t.size() == 1)
      sparse_axpy(val, K(-1), rep[t[0]]);
    else
      val = apply(h, lambda(t));
    return g_memo.emplace(t, std::move(val)).first->second;
  };
  lambda = [&](const Tuple& x) {
    const int n = static_cast<int>(x.size());
    SparseVec<K> out;
    int passed = 0;
    for (int s = 1; s < n; ++s) {
      passed += hs.degree(x[s - 1]);
      const int t = n - s;
      Tuple left(x.begin(), x.begin() + s), right(x.begin() + s, x.end());
      const SparseVec<K>& gl = g(left);
      if (gl.empty()) continue;
      const SparseVec<K>& gr = g(right);
      if (gr.empty()) continue;
      long exponent = (s + 1) + static_cast<long>(1 - t) * passed;
      SparseVec<K> prod = b.evaluate(std::vector<SparseVec<K>>{gl, gr});
      sparse_axpy(out, signed_one<K>(parity_sign(exponent)), prod);
    }
    return out;
  };

  for (int n = 2; n <= bound; ++n) {
    Operation<K> op(n);
    for_each_tuple(nh, static_cast<std::size_t>(n), [&](const Tuple& x) {
      SparseVec<K> val = apply(pi, lambda(x));
      if (!val.empty()) op.set(x, std::move(val));
    });
    if (!op.empty()) ops.emplace(n, std::move(op));
  }

  std::size_t h_unit = nh;
  for (std::size_t i = 0; i < nh; ++i)
    if (rep[i] == SparseVec<K>{{b.unit(), K(1)}}) h_unit = i;
  if (h_unit == nh) throw PropertyError("the unit of B is not a cohomology basis element (H^0 = 0?)");

  return {AInfinityAlgebra<K>(hs, h_unit, std::move(ops)), coh.iota, coh, bound};
}

struct Predicates {
  bool connective = true;
  bool proper = true;
  bool minimal = false;
  bool locally_finite = true;
  std::optional<std::pair<int, int>> interval;  // of H^*(A)
  std::map<int, std::size_t> cohomology_dims;
  bool end_locally_finite = true;   // Hom(A, A) locally finite (b <= 0)
  bool end_bounded_below = true;    // Hom(A, A) bounded below (b <= 1)
};

/// Structural predicates, computed on cohomology (which is A itself when A is
/// minimal).  Finite-dimensional inputs are always proper and locally finite.
template <class K>
Predicates predicates(const AInfinityAlgebra<K>& a) {
  Predicates p;
  p.minimal = a.is_minimal();
  p.cohomology_dims = p.minimal ? a.space().dims() : cohomology(underlying_complex(a)).dims();
  if (!p.cohomology_dims.empty())
    p.interval = std::make_pair(p.cohomology_dims.begin()->first, p.cohomology_dims.rbegin()->first);
  int top = p.interval ? p.interval->second : 0;
  p.connective = top <= 0;
  p.end_locally_finite = top <= 0;
  p.end_bounded_below = top <= 1;
  return p;
}

}  // namespace finmodel
