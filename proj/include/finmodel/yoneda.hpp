#pragma once
// The endomorphism DG algebra Hom(A, A) of a minimal A-infinity algebra A in
// the category of A-infinity modules, restricted to a finite window of
// degrees, and the finite-dimensional DG model obtained by truncating it.
//
// Everything is computed on the suspension V = Sigma A, where the structure
// maps b_k : V^{(x)k} -> V all have degree +1 and only the Koszul rule
// produces signs.  An element of degree n is a family (phi_m) with
// phi_m : V^{(x)m} -> V of degree n; the basis used here consists of the
// elementary maps sending one basis tuple to one basis vector.
//
//   (d phi)_l    = sum_i b_{l-i+1}(1^{l-i} (x) phi_i)
//                  - (-1)^n sum_{r+s+t=l} phi_{r+1+t}(1^r (x) b_s (x) 1^t)
//   (psi phi)_l  = sum_i psi_{l-i+1}(1^{l-i} (x) phi_i)
//
// The module slot is the last tensor factor, so right multiplications
// v -> b_2(v, s x) are the module endomorphisms and x -> rho(x) reverses
// products: Hom(A, A) models the opposite algebra of A.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finmodel/ainf.hpp"
#include "finmodel/algebra.hpp"
#include "finmodel/complexes.hpp"
#include "finmodel/errors.hpp"
#include "finmodel/exactlin.hpp"
#include "finmodel/graded.hpp"

namespace finmodel {

struct DegreeInterval {
  long lo = 0;
  long hi = 0;
  friend bool operator==(const DegreeInterval&, const DegreeInterval&) = default;
};

/// Degrees occupied by the arity-m factor of Hom(A, A) when A is minimal and
/// concentrated in [a, b]:  [a + m(1-b) - 1, b + m(1-a) - 1].
inline DegreeInterval end_degree_interval(long a, long b, long m) {
  if (m < 1) throw ValidationError("arity m must be >= 1");
  if (a > 0 || b < 0) throw ValidationError("concentration interval must satisfy a <= 0 <= b");
  return {a + m * (1 - b) - 1, b + m * (1 - a) - 1};
}

/// Arities contributing to degree n when b = 0:  ceil((n+1)/(1-a)) <= m <= n+1-a,
/// intersected with m >= 1.  Empty (lo > hi) below degree a.
inline std::pair<long, long> connective_arity_range(long a, long n) {
  const long q = 1 - a;
  const long num = n + 1;
  long lo = num >= 0 ? (num + q - 1) / q : -((-num) / q);
  return {std::max(1L, lo), n + 1 - a};
}

/// Elementary map in Hom(V^{(x)m}, V): the tuple of input basis indices and
/// the output basis index.
struct EndKey {
  Tuple inputs;
  std::size_t output = 0;
  friend auto operator<=>(const EndKey&, const EndKey&) = default;
};

template <class K>
class EndomorphismWindow {
 public:
  /// Requires A minimal and connective with a finite window lo <= hi.
  EndomorphismWindow(AInfinityAlgebra<K> a, int lo, int hi) : a_(std::move(a)), lo_(lo), hi_(hi) {
    if (!a_.is_minimal()) throw PropertyError("endomorphism window needs a minimal algebra (m_1 = 0)");
    auto iv = a_.space().interval();
    if (!iv) throw PropertyError("endomorphism window of the zero algebra");
    if (iv->second > 0) throw PropertyError("algebra is not connective: top degree " + std::to_string(iv->second));
    if (lo > hi) throw ValidationError("empty degree window");
    bottom_ = iv->first;
    build_shifted_ops();
    for (int n = lo_; n <= hi_; ++n) build_degree(n);
  }

  const AInfinityAlgebra<K>& source() const { return a_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  int bottom() const { return bottom_; }
  bool contains(int n) const { return n >= lo_ && n <= hi_; }

  std::size_t dim(int n) const { return contains(n) ? basis_.at(n).size() : 0; }
  std::map<int, std::size_t> dims() const {
    std::map<int, std::size_t> out;
    for (int n = lo_; n <= hi_; ++n) out[n] = dim(n);
    return out;
  }
  const EndKey& key(int n, std::size_t i) const { return basis_.at(n).at(i); }
  std::optional<std::size_t> index(int n, const EndKey& k) const {
    if (!contains(n)) return std::nullopt;
    auto it = index_.at(n).find(k);
    if (it == index_.at(n).end()) return std::nullopt;
    return it->second;
  }
  /// Arities present in degree n.
  std::pair<long, long> arity_range(int n) const { return connective_arity_range(bottom_, n); }

  /// Human-readable label such as "(x,y)->z" (A-basis names).
  std::string label(int n, std::size_t i) const {
    const auto& k = key(n, i);
    std::string s = "(";
    for (std::size_t j = 0; j < k.inputs.size(); ++j) s += (j ? "," : "") + a_.space().name(k.inputs[j]);
    return s + ")->" + a_.space().name(k.output);
  }

  /// Shifted degree |s v_j| = |v_j| - 1.
  int sdeg(std::size_t j) const { return a_.space().degree(j) - 1; }
  int sdeg(const Tuple& t) const {
    int d = 0;
    for (auto j : t) d += sdeg(j);
    return d;
  }

  /// b_k on a basis tuple of V.
  const SparseVec<K>* shifted_op(const Tuple& t) const {
    auto it = shifted_.find(t);
    return it == shifted_.end() ? nullptr : &it->second;
  }

  /// d of a basis element of degree n (needs n+1 in the window).
  SparseVec<K> differential(int n, std::size_t i) const {
    require(n + 1);
    const EndKey& e = key(n, i);
    const Tuple& j = e.inputs;
    std::map<EndKey, K> acc;
    auto add = [&](EndKey k, const K& c) {
      auto [it, fresh] = acc.try_emplace(std::move(k), c);
      if (!fresh) it->second += c;
    };
    // b_{p}(X (x) phi(J)) with sign (-1)^{n |X|}.
    auto it = by_last_.find(e.output);
    if (it != by_last_.end())
      for (const auto* entry : it->second) {
        const Tuple& w = entry->first;
        Tuple x(w.begin(), w.end() - 1);
        K sign = signed_one<K>(parity_sign(static_cast<long>(n) * sdeg(x)));
        Tuple in = x;
        in.insert(in.end(), j.begin(), j.end());
        for (const auto& [o, c] : entry->second) add({in, o}, sign * c);
      }
    // -(-1)^n phi(1^r (x) b_s (x) 1^t), sign (-1)^{|J_{<r}|} from b passing J_{<r}.
    int passed = 0;
    for (std::size_t r = 0; r < j.size(); ++r) {
      if (r > 0) passed += sdeg(j[r - 1]);
      auto ot = by_output_.find(j[r]);
      if (ot == by_output_.end()) continue;
      K sign = signed_one<K>(-parity_sign(n) * parity_sign(passed));
      for (const auto& [w, c] : ot->second) {
        Tuple in(j.begin(), j.begin() + static_cast<long>(r));
        in.insert(in.end(), w->begin(), w->end());
        in.insert(in.end(), j.begin() + static_cast<long>(r) + 1, j.end());
        add({in, e.output}, sign * c);
      }
    }
    return to_sparse(n + 1, acc);
  }

  SparseVec<K> differential(int n, const SparseVec<K>& v) const {
    SparseVec<K> out;
    for (const auto& [i, c] : v) sparse_axpy(out, c, differential(n, i));
    return out;
  }

  /// Dense matrix of d : degree n -> degree n+1.
  Matrix<K> differential_block(int n) const {
    Matrix<K> m(dim(n + 1), dim(n));
    for (std::size_t i = 0; i < dim(n); ++i)
      for (const auto& [o, c] : differential(n, i)) m(o, i) = c;
    return m;
  }

  /// Product of basis elements psi (degree p) after phi (degree q): either
  /// zero or +-1 times a basis element of degree p+q.
  std::optional<std::pair<std::size_t, K>> product(int p, std::size_t psi, int q, std::size_t phi) const {
    require(p + q);
    const EndKey& a = key(p, psi);
    const EndKey& b = key(q, phi);
    if (a.inputs.back() != b.output) return std::nullopt;
    Tuple x(a.inputs.begin(), a.inputs.end() - 1);
    K sign = signed_one<K>(parity_sign(static_cast<long>(q) * sdeg(x)));
    Tuple in = x;
    in.insert(in.end(), b.inputs.begin(), b.inputs.end());
    auto idx = index(p + q, EndKey{in, a.output});
    if (!idx) throw InvariantError("product left the arity range of its degree");
    return std::make_pair(*idx, sign);
  }

  SparseVec<K> product(int p, const SparseVec<K>& psi, int q, const SparseVec<K>& phi) const {
    SparseVec<K> out;
    for (const auto& [i, a] : psi)
      for (const auto& [j, b] : phi)
        if (auto r = product(p, i, q, j)) sparse_add(out, r->first, r->second * a * b);
    return out;
  }

  /// The identity family (phi_1 = id, phi_m = 0 otherwise) in degree 0.
  SparseVec<K> unit() const {
    require(0);
    SparseVec<K> out;
    for (std::size_t j = 0; j < a_.dim(); ++j) sparse_add(out, *index(0, EndKey{{j}, j}), K(1));
    return out;
  }

  /// rho(x)_l(v_1..v_l) = (-1)^{|s x| |v|} b_{l+1}(v_1, ..., v_l, s x): right
  /// multiplication by x and its higher corrections.  Lies in degree |x|.
  SparseVec<K> rho(std::size_t x) const {
    const int n = a_.space().degree(x);
    require(n);
    std::map<EndKey, K> acc;
    auto it = by_last_.find(x);
    if (it != by_last_.end())
      for (const auto* entry : it->second) {
        Tuple v(entry->first.begin(), entry->first.end() - 1);
        if (v.empty()) continue;
        K sign = signed_one<K>(parity_sign(static_cast<long>(sdeg(x)) * sdeg(v)));
        for (const auto& [o, c] : entry->second) {
          auto [slot, fresh] = acc.try_emplace(EndKey{v, o}, sign * c);
          if (!fresh) slot->second += sign * c;
        }
      }
    return to_sparse(n, acc);
  }

  /// The window as a cochain complex.  The differential out of the top
  /// degree is dropped, so cohomology is only meaningful below hi.
  CochainComplex<K> complex() const {
    std::vector<BasisElement> basis;
    for (int n = lo_; n <= hi_; ++n)
      for (std::size_t i = 0; i < dim(n); ++i) basis.push_back({std::to_string(n) + ":" + label(n, i), n});
    GradedSpace space(basis);
    std::map<int, Matrix<K>> blocks;
    for (int n = lo_; n < hi_; ++n)
      if (dim(n) > 0 && dim(n + 1) > 0) blocks[n] = differential_block(n);
    return CochainComplex<K>::from_blocks(space, std::move(blocks));
  }

 private:
  void require(int n) const {
    if (!contains(n))
      throw ValidationError("degree " + std::to_string(n) + " lies outside the window [" + std::to_string(lo_) + "," +
                            std::to_string(hi_) + "]");
  }

  SparseVec<K> to_sparse(int n, const std::map<EndKey, K>& acc) const {
    SparseVec<K> out;
    for (const auto& [k, c] : acc) {
      if (c.is_zero()) continue;
      auto idx = index(n, k);
      if (!idx) throw InvariantError("elementary map outside the arity range of degree " + std::to_string(n));
      out.emplace(*idx, c);
    }
    return out;
  }

  // b_k(s x_1, ..., s x_k) = (-1)^{sum_i (k-i)(|x_i|-1)} s m_k(x_1, ..., x_k)
  void build_shifted_ops() {
    for (const auto& [k, op] : a_.ops())
      for (const auto& [in, out] : op.entries()) {
        long exponent = 0;
        for (std::size_t i = 0; i < in.size(); ++i) exponent += static_cast<long>(in.size() - 1 - i) * sdeg(in[i]);
        SparseVec<K> v;
        sparse_axpy(v, signed_one<K>(parity_sign(exponent)), out);
        shifted_.emplace(in, std::move(v));
      }
    for (const auto& entry : shifted_) {
      by_last_[entry.first.back()].push_back(&entry);
      for (const auto& [o, c] : entry.second) by_output_[o].push_back({&entry.first, c});
    }
  }

  void build_degree(int n) {
    auto& keys = basis_[n];
    auto& idx = index_[n];
    const std::size_t na = a_.dim();
    auto [mlo, mhi] = arity_range(n);
    for (long m = mlo; m <= mhi; ++m)
      for_each_tuple(na, static_cast<std::size_t>(m), [&](const Tuple& t) {
        const int target = sdeg(t) + n;
        for (std::size_t o = 0; o < na; ++o)
          if (sdeg(o) == target) {
            idx.emplace(EndKey{t, o}, keys.size());
            keys.push_back(EndKey{t, o});
          }
      });
  }

  AInfinityAlgebra<K> a_;
  int lo_ = 0, hi_ = 0, bottom_ = 0;
  std::map<Tuple, SparseVec<K>> shifted_;
  std::map<std::size_t, std::vector<const std::pair<const Tuple, SparseVec<K>>*>> by_last_;
  std::map<std::size_t, std::vector<std::pair<const Tuple*, K>>> by_output_;
  std::map<int, std::vector<EndKey>> basis_;
  std::map<int, std::map<EndKey, std::size_t>> index_;
};

template <class K>
EndomorphismWindow<K> endomorphism_dg(const AInfinityAlgebra<K>& a, int lo, int hi) {
  return EndomorphismWindow<K>(a, lo, hi);
}

/// Finite-dimensional DG model of a minimal connective proper A together
/// with the data it was built from.
template <class K>
struct FiniteModel {
  AInfinityAlgebra<K> algebra;  // DG algebra concentrated in [a, 0]
  EndomorphismWindow<K> window;
  /// Basis element i of the model as an element of the window in degree
  /// algebra.space().degree(i).
  std::vector<SparseVec<K>> embedding;
  std::vector<std::string> warnings;
};

namespace detail {

/// The part of the window in degrees <= 0 packaged as an AInfinityAlgebra
/// whose degree-0 basis has the identity family in place of the elementary
/// map (1)->1, so that the unit is a basis element.  Products are recorded
/// only when they land in degrees <= 0.  Returns the algebra and, per basis
/// element, its value in the window's elementary basis.
template <class K>
std::pair<AInfinityAlgebra<K>, std::vector<SparseVec<K>>> window_algebra(const EndomorphismWindow<K>& w) {
  const auto& a = w.source();
  const int lo = w.lo();
  const int top = std::min(w.hi(), 1);
  std::vector<BasisElement> basis;
  std::vector<SparseVec<K>> elem;
  std::vector<std::pair<int, std::size_t>> pos;  // (degree, window index)
  const std::size_t unit_key = *w.index(0, EndKey{{a.unit()}, a.unit()});
  std::map<std::pair<int, std::size_t>, std::size_t> global;
  for (int n = lo; n <= top; ++n)
    for (std::size_t i = 0; i < w.dim(n); ++i) {
      global[{n, i}] = basis.size();
      if (n == 0 && i == unit_key) {
        basis.push_back({"id", 0});
        elem.push_back(w.unit());
      } else {
        basis.push_back({std::to_string(n) + ":" + w.label(n, i), n});
        elem.push_back({{i, K(1)}});
      }
      pos.push_back({n, i});
    }
  // Window element of degree n -> coordinates in this basis.
  auto coords = [&](int n, const SparseVec<K>& v) {
    SparseVec<K> out;
    if (n != 0) {
      for (const auto& [i, c] : v) out.emplace(global.at({n, i}), c);
      return out;
    }
    K u = v.count(unit_key) ? v.at(unit_key) : K(0);
    if (!u.is_zero()) out.emplace(global.at({0, unit_key}), u);
    SparseVec<K> rest = v;
    rest.erase(unit_key);
    for (std::size_t j = 0; j < a.dim(); ++j) {
      if (j == a.unit()) continue;
      sparse_add(rest, *w.index(0, EndKey{{j}, j}), -u);
    }
    for (const auto& [i, c] : rest) out.emplace(global.at({0, i}), c);
    return out;
  };

  std::map<int, Operation<K>> ops;
  Operation<K> m1(1), m2(2);
  for (std::size_t g = 0; g < basis.size(); ++g) {
    auto [n, i] = pos[g];
    if (n + 1 <= top) m1.set({g}, coords(n + 1, w.differential(n, elem[g])));
    for (std::size_t h = 0; h < basis.size(); ++h) {
      const int q = pos[h].first;
      if (n + q > 0 || n + q < lo) continue;
      m2.set({g, h}, coords(n + q, w.product(n, elem[g], q, elem[h])));
    }
  }
  if (!m1.empty()) ops.emplace(1, std::move(m1));
  if (!m2.empty()) ops.emplace(2, std::move(m2));
  std::size_t unit = global.at({0, unit_key});
  return {AInfinityAlgebra<K>(GradedSpace(basis), unit, std::move(ops)), elem};
}

/// x . y = (-1)^{|x||y|} y x.
template <class K>
AInfinityAlgebra<K> opposite(const AInfinityAlgebra<K>& b) {
  std::map<int, Operation<K>> ops;
  if (const auto* d = b.op(1)) ops.emplace(1, *d);
  if (const auto* m = b.op(2)) {
    Operation<K> op(2);
    for (const auto& [in, out] : m->entries()) {
      SparseVec<K> v;
      sparse_axpy(v, signed_one<K>(parity_sign(static_cast<long>(b.space().degree(in[0])) * b.space().degree(in[1]))),
                  out);
      op.set({in[1], in[0]}, std::move(v));
    }
    ops.emplace(2, std::move(op));
  }
  return AInfinityAlgebra<K>(b.space(), b.unit(), std::move(ops));
}

}  // namespace detail

/// Finite DG model of a minimal, connective, proper, strictly unital A:
/// the window [a, 1] of Hom(A, A), truncated to tau_{<=0}, taken opposite so
/// that its cohomology algebra is A (not A^op).
template <class K>
FiniteModel<K> finite_model(const AInfinityAlgebra<K>& a) {
  if (!a.is_minimal()) throw PropertyError("finite_model needs a minimal algebra; compute a minimal model first");
  auto iv = a.space().interval();
  if (!iv || iv->second > 0) throw PropertyError("finite_model needs a connective algebra");
  auto units = validate(a, 0);
  if (!units.unit_ok) throw PropertyError("finite_model needs a strictly unital algebra: " + units.message);

  EndomorphismWindow<K> w(a, iv->first, 1);
  auto [walg, welem] = detail::window_algebra(w);
  auto trunc = smart_truncate_leq0(walg, /*check_positive=*/false);

  FiniteModel<K> fm{detail::opposite(trunc.algebra), std::move(w), {}, trunc.warnings};
  Matrix<K> inc = trunc.inclusion.full();
  for (std::size_t j = 0; j < inc.cols(); ++j) {
    SparseVec<K> v;
    for (std::size_t i = 0; i < inc.rows(); ++i)
      if (!inc(i, j).is_zero()) sparse_axpy(v, inc(i, j), welem[i]);
    fm.embedding.push_back(std::move(v));
  }
  DGAlgebra<K> check(fm.algebra);  // throws if the truncation is not a DG algebra
  return fm;
}

struct ModelReport {
  bool dims_ok = false;      // H-dims of B equal the dims of A
  bool cocycles_ok = false;  // rho(x) is a cocycle of B and the classes form a basis of H(B)
  bool products_ok = false;  // [rho x][rho y] = [rho m_2(x, y)]
  std::string failure;       // first failing check, naming the basis pair

  bool passed() const { return dims_ok && cocycles_ok && products_ok; }
};

/// Checks a finite model against A at the level of cohomology, using
/// rho : A -> Hom(A, A) as the comparison map.
template <class K>
ModelReport verify_model(const AInfinityAlgebra<K>& a, const FiniteModel<K>& fm) {
  ModelReport rep;
  const auto& bs = fm.algebra.space();
  std::optional<CohomologyData<K>> coh;
  try {
    coh = cohomology(underlying_complex(fm.algebra));
  } catch (const PropertyError& e) {
    rep.failure = std::string("model is not a complex: ") + e.what();
    return rep;
  }
  rep.dims_ok = coh->dims() == a.space().dims();
  if (!rep.dims_ok) {
    rep.failure = "cohomology dimensions of the model differ from the dimensions of A";
    return rep;
  }

  // rho(x) in model coordinates.
  std::vector<Vec<K>> rho_b(a.dim());
  for (std::size_t x = 0; x < a.dim(); ++x) {
    const int n = a.space().degree(x);
    std::vector<Vec<K>> cols;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < bs.dim(); ++i)
      if (bs.degree(i) == n) {
        cols.push_back(densify(fm.embedding[i], fm.window.dim(n)));
        idx.push_back(i);
      }
    auto y = solve(Matrix<K>::from_columns(fm.window.dim(n), cols), densify(fm.window.rho(x), fm.window.dim(n)));
    if (!y) {
      rep.failure = "rho(" + a.space().name(x) + ") does not lie in the model";
      return rep;
    }
    rho_b[x] = Vec<K>(bs.dim(), K(0));
    for (std::size_t k = 0; k < idx.size(); ++k) rho_b[x][idx[k]] = (*y)[k];
    SparseVec<K> dx = fm.algebra.evaluate(std::vector<SparseVec<K>>{sparsify(rho_b[x])});
    if (!dx.empty()) {
      rep.failure = "rho(" + a.space().name(x) + ") is not a cocycle";
      return rep;
    }
  }
  Matrix<K> pi = coh->pi.full();
  std::vector<Vec<K>> classes;
  for (const auto& v : rho_b) classes.push_back(pi * v);
  Matrix<K> cls = Matrix<K>::from_columns(coh->total_dim(), classes);
  rep.cocycles_ok = rank(cls) == a.dim();
  if (!rep.cocycles_ok) {
    rep.failure = "classes of rho do not form a basis of H(B)";
    return rep;
  }
  for (std::size_t x = 0; x < a.dim(); ++x)
    for (std::size_t y = 0; y < a.dim(); ++y) {
      SparseVec<K> prod = fm.algebra.evaluate(std::vector<SparseVec<K>>{sparsify(rho_b[x]), sparsify(rho_b[y])});
      Vec<K> lhs = pi * densify(prod, bs.dim());
      Vec<K> rhs(coh->total_dim(), K(0));
      for (const auto& [z, c] : a.evaluate(Tuple{x, y}))
        for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] += c * classes[z][k];
      if (lhs != rhs) {
        rep.failure = "product of classes differs on (" + a.space().name(x) + "," + a.space().name(y) + ")";
        return rep;
      }
    }
  rep.products_ok = true;
  return rep;
}

}  // namespace finmodel
