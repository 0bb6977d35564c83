#pragma once
// Cochain complexes, cohomology with an explicit contraction, mapping cones,
// quasi-isomorphism checks, DG modules and the smart truncation of a
// DG algebra to degrees <= 0.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "finmodel/algebra.hpp"
#include "finmodel/errors.hpp"
#include "finmodel/exactlin.hpp"
#include "finmodel/graded.hpp"

namespace finmodel {

template <class K>
class CochainComplex {
 public:
  CochainComplex() = default;

  /// Throws PropertyError unless d has degree +1 and squares to zero.
  CochainComplex(GradedSpace space, GradedLinearMap<K> d) : space_(std::move(space)), d_(std::move(d)) {
    if (!(d_.source() == space_) || !(d_.target() == space_))
      throw ValidationError("differential does not act on the complex");
    if (d_.degree() != 1) throw ValidationError("differential must have degree +1");
    for (auto n : space_.degrees())
      if (!(d_block(n + 1) * d_block(n)).is_zero())
        throw PropertyError("d^2 != 0 starting in degree " + std::to_string(n));
  }

  static CochainComplex from_blocks(const GradedSpace& space, std::map<int, Matrix<K>> blocks) {
    return CochainComplex(space, GradedLinearMap<K>(space, space, 1, std::move(blocks)));
  }

  /// Complex with zero differential.
  static CochainComplex trivial(const GradedSpace& space) {
    return CochainComplex(space, GradedLinearMap<K>(space, space, 1));
  }

  const GradedSpace& space() const { return space_; }
  const GradedLinearMap<K>& d() const { return d_; }
  /// d : C^n -> C^{n+1}
  Matrix<K> d_block(int n) const { return d_.block(n); }

 private:
  GradedSpace space_;
  GradedLinearMap<K> d_;
};

/// The complex (A, m_1) underlying an A-infinity algebra.
template <class K>
CochainComplex<K> underlying_complex(const AInfinityAlgebra<K>& a) {
  std::map<int, Matrix<K>> blocks;
  for (auto n : a.space().degrees())
    if (a.space().dim(n + 1) > 0) blocks[n] = a.differential_block(n);
  return CochainComplex<K>::from_blocks(a.space(), std::move(blocks));
}

/// Cohomology H together with a contraction: iota : H -> C (onto chosen
/// cocycle representatives), pi : C -> H and h : C -> C of degree -1 with
///   pi iota = 1,  1 - iota pi = d h + h d,  h iota = 0,  pi h = 0,  h h = 0.
template <class K>
struct CohomologyData {
  GradedSpace H;
  GradedLinearMap<K> iota;
  GradedLinearMap<K> pi;
  GradedLinearMap<K> h;
  /// Representatives of each H basis element in C coordinates (= columns of iota).
  std::vector<Vec<K>> representatives;

  std::map<int, std::size_t> dims() const { return H.dims(); }
  std::size_t total_dim() const { return H.dim(); }
};

namespace detail {

inline std::string fresh_name(std::set<std::string>& used, std::string base) {
  while (!used.insert(base).second) base += "'";
  return base;
}

}  // namespace detail

/// Computes cohomology with a deterministic splitting.  Cocycle
/// representatives are chosen greedily: first the indices in `preferred`
/// (when they are cocycles), then the remaining cocycle basis vectors, then
/// kernel vectors.  A representative that is a single basis vector keeps its
/// name.
template <class K>
CohomologyData<K> cohomology(const CochainComplex<K>& c, std::span<const std::size_t> preferred = {}) {
  const GradedSpace& space = c.space();
  struct DegreeData {
    Matrix<K> reps;   // C^n x H^n
    Matrix<K> pi;     // H^n x C^n
    Matrix<K> w;      // C^n x W^n, complement of the cocycles
    Matrix<K> h;      // C^{n-1} x C^n
  };
  std::map<int, DegreeData> per;
  std::vector<BasisElement> h_basis;
  std::set<std::string> used;

  for (int n : space.degrees()) {
    const std::size_t dn = space.dim(n);
    const std::size_t off = space.offset(n);
    Matrix<K> d_out = c.d_block(n);
    Matrix<K> d_in = c.d_block(n - 1);
    Matrix<K> z = kernel_basis(d_out);
    Matrix<K> bd = column_space(d_in);

    // Candidate cocycles: preferred basis vectors, other basis vectors, then kernel basis.
    std::vector<Vec<K>> cand;
    std::vector<std::optional<std::size_t>> cand_basis;
    std::vector<bool> taken(dn, false);
    auto push_basis = [&](std::size_t local) {
      if (taken[local]) return;
      Vec<K> e(dn, K(0));
      e[local] = K(1);
      if (!is_zero_vec(d_out * e)) return;
      taken[local] = true;
      cand.push_back(std::move(e));
      cand_basis.push_back(local);
    };
    for (auto g : preferred)
      if (g >= off && g < off + dn) push_basis(g - off);
    for (std::size_t i = 0; i < dn; ++i) push_basis(i);
    for (auto& col : z.columns()) {
      cand.push_back(col);
      cand_basis.push_back(std::nullopt);
    }

    Matrix<K> stacked = bd.hstack(Matrix<K>::from_columns(dn, cand));
    auto piv = independent_columns(stacked);
    std::vector<Vec<K>> reps;
    std::size_t k = 0;
    for (auto p : piv) {
      if (p < bd.cols()) continue;
      std::size_t ci = p - bd.cols();
      reps.push_back(cand[ci]);
      std::string nm = cand_basis[ci] ? space.name(off + *cand_basis[ci])
                                      : "c" + std::to_string(n) + "_" + std::to_string(k);
      h_basis.push_back({detail::fresh_name(used, nm), n});
      ++k;
    }

    // Complement W of Z^n spanned by standard basis vectors.
    Matrix<K> zi = z.hstack(Matrix<K>::identity(dn));
    std::vector<Vec<K>> wcols;
    for (auto p : independent_columns(zi))
      if (p >= z.cols()) wcols.push_back(zi.column(p));

    DegreeData dd;
    dd.reps = Matrix<K>::from_columns(dn, reps);
    dd.w = Matrix<K>::from_columns(dn, wcols);
    Matrix<K> basis_change = bd.hstack(dd.reps).hstack(dd.w);
    if (basis_change.cols() != dn) throw InvariantError("cohomology splitting has wrong size");
    Matrix<K> inv = inverse(basis_change);
    std::vector<std::size_t> rows_b, rows_h;
    for (std::size_t i = 0; i < bd.cols(); ++i) rows_b.push_back(i);
    for (std::size_t i = 0; i < reps.size(); ++i) rows_h.push_back(bd.cols() + i);
    dd.pi = inv.select_rows(rows_h);

    // h on boundaries: the unique preimage in W^{n-1}.
    const std::size_t dprev = space.dim(n - 1);
    dd.h = Matrix<K>(dprev, dn);
    if (bd.cols() > 0) {
      const Matrix<K>& wprev = per.at(n - 1).w;
      Matrix<K> dw = d_in * wprev;
      std::vector<Vec<K>> pre;
      for (std::size_t j = 0; j < bd.cols(); ++j) {
        auto y = solve(dw, bd.column(j));
        if (!y) throw InvariantError("boundary has no preimage in the chosen complement");
        pre.push_back(wprev * *y);
      }
      dd.h = Matrix<K>::from_columns(dprev, pre) * inv.select_rows(rows_b);
    }
    per[n] = std::move(dd);
  }

  CohomologyData<K> out;
  out.H = GradedSpace(h_basis);
  out.iota = GradedLinearMap<K>(out.H, space, 0);
  out.pi = GradedLinearMap<K>(space, out.H, 0);
  out.h = GradedLinearMap<K>(space, space, -1);
  for (auto& [n, dd] : per) {
    if (out.H.dim(n) > 0) {
      out.iota.set_block(n, dd.reps);
      out.pi.set_block(n, dd.pi);
    }
    if (space.dim(n - 1) > 0) out.h.set_block(n, dd.h);
  }
  Matrix<K> iota_full = out.iota.full();
  out.representatives = iota_full.columns();
  return out;
}

template <class K>
bool is_acyclic(const CochainComplex<K>& c) {
  for (int n : c.space().degrees())
    if (rank(c.d_block(n)) + rank(c.d_block(n - 1)) != c.space().dim(n)) return false;
  return true;
}

template <class K>
class ChainMap {
 public:
  /// Throws PropertyError if f is not a degree-0 chain map.
  ChainMap(CochainComplex<K> source, CochainComplex<K> target, GradedLinearMap<K> f)
      : source_(std::move(source)), target_(std::move(target)), f_(std::move(f)) {
    if (!(f_.source() == source_.space()) || !(f_.target() == target_.space()))
      throw ValidationError("chain map spaces do not match its complexes");
    if (f_.degree() != 0) throw ValidationError("chain map must have degree 0");
    if (!(f_.compose(source_.d()) == target_.d().compose(f_))) throw PropertyError("map is not a chain map");
  }

  static ChainMap identity(const CochainComplex<K>& c) {
    return ChainMap(c, c, GradedLinearMap<K>::identity(c.space()));
  }

  const CochainComplex<K>& source() const { return source_; }
  const CochainComplex<K>& target() const { return target_; }
  const GradedLinearMap<K>& map() const { return f_; }

 private:
  CochainComplex<K> source_;
  CochainComplex<K> target_;
  GradedLinearMap<K> f_;
};

/// Triangle C -> D -> cone(f) -> Sigma C.
template <class K>
struct ConeData {
  CochainComplex<K> cone;
  GradedLinearMap<K> inclusion;   // D -> cone
  GradedLinearMap<K> projection;  // cone -> Sigma C (the C-part, unsigned)
};

/// cone^n = C^{n+1} (+) D^n with d(c, x) = (-d c, f(c) + d x).
template <class K>
ConeData<K> mapping_cone(const ChainMap<K>& f) {
  const GradedSpace& cs = f.source().space();
  const GradedSpace& ds = f.target().space();
  std::vector<BasisElement> basis;
  for (const auto& b : cs.basis()) basis.push_back({"c:" + b.name, b.degree - 1});
  for (const auto& b : ds.basis()) basis.push_back({"d:" + b.name, b.degree});
  GradedSpace space(basis);
  const std::size_t nc = cs.dim(), nd = ds.dim();
  auto cidx = [&](std::size_t i) { return space.require("c:" + cs.name(i)); };
  auto didx = [&](std::size_t i) { return space.require("d:" + ds.name(i)); };

  Matrix<K> dcf = f.source().d().full(), ddf = f.target().d().full(), ff = f.map().full();
  Matrix<K> full(space.dim(), space.dim());
  for (std::size_t j = 0; j < nc; ++j) {
    for (std::size_t i = 0; i < nc; ++i)
      if (!dcf(i, j).is_zero()) full(cidx(i), cidx(j)) = -dcf(i, j);
    for (std::size_t i = 0; i < nd; ++i)
      if (!ff(i, j).is_zero()) full(didx(i), cidx(j)) = ff(i, j);
  }
  for (std::size_t j = 0; j < nd; ++j)
    for (std::size_t i = 0; i < nd; ++i)
      if (!ddf(i, j).is_zero()) full(didx(i), didx(j)) = ddf(i, j);

  Matrix<K> inc(space.dim(), nd);
  for (std::size_t j = 0; j < nd; ++j) inc(didx(j), j) = K(1);
  GradedSpace sigma_c = shift(cs, 1);
  Matrix<K> proj(nc, space.dim());
  for (std::size_t j = 0; j < nc; ++j) proj(j, cidx(j)) = K(1);

  return {CochainComplex<K>(space, GradedLinearMap<K>::from_full(space, space, 1, full)),
          GradedLinearMap<K>::from_full(ds, space, 0, inc),
          GradedLinearMap<K>::from_full(space, sigma_c, 0, proj)};
}

/// True iff the mapping cone of f is acyclic.
template <class K>
bool quasi_iso_check(const ChainMap<K>& f) {
  return is_acyclic(mapping_cone(f).cone);
}

/// Right DG module over a DG algebra R (an AInfinityAlgebra with ops in
/// arities 1 and 2).  The action is a sparse table (m, r) -> m . r.
template <class K>
class DGModule {
 public:
  using ActionTable = std::map<std::pair<std::size_t, std::size_t>, SparseVec<K>>;

  /// Checks degrees, unit action, associativity and the Leibniz rule
  ///   d(m r) = d(m) r + (-1)^{|m|} m d(r).
  /// Missing unit entries m . 1 are filled in as m.
  DGModule(CochainComplex<K> complex, AInfinityAlgebra<K> algebra, ActionTable action)
      : complex_(std::move(complex)), algebra_(std::move(algebra)), action_(std::move(action)) {
    if (!algebra_.is_dg()) throw PropertyError("DG module requires a DG algebra (no m_k with k > 2)");
    const auto& ms = complex_.space();
    const auto& rs = algebra_.space();
    for (auto it = action_.begin(); it != action_.end();) {
      auto [m, r] = it->first;
      if (m >= ms.dim() || r >= rs.dim()) throw ValidationError("module action index out of range");
      for (const auto& [o, c] : it->second)
        if (ms.degree(o) != ms.degree(m) + rs.degree(r))
          throw ValidationError("module action " + ms.name(m) + "." + rs.name(r) + " has wrong degree");
      it = it->second.empty() ? action_.erase(it) : std::next(it);
    }
    for (std::size_t m = 0; m < ms.dim(); ++m) {
      auto key = std::make_pair(m, algebra_.unit());
      if (!action_.count(key)) action_[key] = SparseVec<K>{{m, K(1)}};
      if (action_.at(key) != SparseVec<K>{{m, K(1)}})
        throw PropertyError("unit does not act as identity on " + ms.name(m));
    }
    check_axioms();
  }

  /// R as a right module over itself.
  static DGModule regular(const AInfinityAlgebra<K>& r) {
    ActionTable act;
    if (const auto* m2 = r.op(2))
      for (const auto& [in, out] : m2->entries()) act[{in[0], in[1]}] = out;
    return DGModule(underlying_complex(r), r, std::move(act));
  }

  const CochainComplex<K>& complex() const { return complex_; }
  const GradedSpace& space() const { return complex_.space(); }
  const AInfinityAlgebra<K>& algebra() const { return algebra_; }
  const ActionTable& action() const { return action_; }

  SparseVec<K> act(std::size_t m, std::size_t r) const {
    auto it = action_.find({m, r});
    return it == action_.end() ? SparseVec<K>{} : it->second;
  }
  SparseVec<K> act(const SparseVec<K>& m, const SparseVec<K>& r) const {
    SparseVec<K> out;
    for (const auto& [i, a] : m)
      for (const auto& [j, b] : r) sparse_axpy(out, a * b, act(i, j));
    return out;
  }
  SparseVec<K> differential(const SparseVec<K>& m) const {
    Matrix<K> full = complex_.d().full();
    return sparsify(full * densify(m, space().dim()));
  }

 private:
  void check_axioms() const {
    const auto& ms = complex_.space();
    const auto& rs = algebra_.space();
    Matrix<K> dm = complex_.d().full();
    auto dmod = [&](std::size_t m) { return sparsify(dm.column(m)); };
    auto dalg = [&](std::size_t r) { return algebra_.evaluate(Tuple{r}); };
    auto mul = [&](std::size_t a, std::size_t b) { return algebra_.evaluate(Tuple{a, b}); };
    for (std::size_t m = 0; m < ms.dim(); ++m)
      for (std::size_t r = 0; r < rs.dim(); ++r) {
        SparseVec<K> lhs = differential(act(m, r));
        SparseVec<K> rhs = act(dmod(m), SparseVec<K>{{r, K(1)}});
        sparse_axpy(rhs, signed_one<K>(parity_sign(ms.degree(m))), act(SparseVec<K>{{m, K(1)}}, dalg(r)));
        if (lhs != rhs) throw PropertyError("module Leibniz rule fails on (" + ms.name(m) + "," + rs.name(r) + ")");
        for (std::size_t s = 0; s < rs.dim(); ++s) {
          SparseVec<K> left = act(act(m, r), SparseVec<K>{{s, K(1)}});
          SparseVec<K> right = act(SparseVec<K>{{m, K(1)}}, mul(r, s));
          if (left != right)
            throw PropertyError("module action not associative on (" + ms.name(m) + "," + rs.name(r) + "," +
                                rs.name(s) + ")");
        }
      }
  }

  CochainComplex<K> complex_;
  AInfinityAlgebra<K> algebra_;
  ActionTable action_;
};

/// Sub-DG-algebra tau_{<=0} B: B^n for n < 0, Z^0(B) in degree 0.
template <class K>
struct Truncation {
  AInfinityAlgebra<K> algebra;
  GradedLinearMap<K> inclusion;  // truncation -> B
  std::vector<std::string> warnings;
};

/// Smart truncation of a unital DG algebra.  The inclusion is a
/// quasi-isomorphism exactly when H^{>0}(B) = 0; otherwise a warning is
/// recorded.  Pass check_positive = false when B is only a window whose top
/// degree has no outgoing differential.
template <class K>
Truncation<K> smart_truncate_leq0(const AInfinityAlgebra<K>& b, bool check_positive = true) {
  if (!b.is_dg()) throw PropertyError("smart truncation needs a DG algebra");
  const GradedSpace& bs = b.space();
  std::vector<BasisElement> basis;
  std::vector<SparseVec<K>> embed;
  for (std::size_t i = 0; i < bs.dim() && bs.degree(i) < 0; ++i) {
    basis.push_back(bs[i]);
    embed.push_back({{i, K(1)}});
  }
  const std::size_t neg_count = basis.size();

  // Z^0, preferring the unit and other cocycle basis vectors.
  const std::size_t d0 = bs.dim(0), off0 = bs.offset(0);
  Matrix<K> d_out = b.differential_block(0);
  std::vector<Vec<K>> cand;
  std::vector<std::optional<std::size_t>> cand_basis;
  std::vector<std::size_t> order;
  if (d0 > 0) order.push_back(b.unit() - off0);
  for (std::size_t i = 0; i < d0; ++i)
    if (i != b.unit() - off0) order.push_back(i);
  for (auto i : order) {
    Vec<K> e(d0, K(0));
    e[i] = K(1);
    if (is_zero_vec(d_out * e)) {
      cand.push_back(std::move(e));
      cand_basis.push_back(i);
    }
  }
  for (auto& col : kernel_basis(d_out).columns()) {
    cand.push_back(col);
    cand_basis.push_back(std::nullopt);
  }
  std::vector<Vec<K>> z0;
  std::set<std::string> used;
  for (const auto& e : basis) used.insert(e.name);
  std::size_t gen = 0;
  for (auto p : independent_columns(Matrix<K>::from_columns(d0, cand))) {
    z0.push_back(cand[p]);
    std::string nm = cand_basis[p] ? bs.name(off0 + *cand_basis[p]) : "z" + std::to_string(gen++);
    basis.push_back({detail::fresh_name(used, nm), 0});
    SparseVec<K> s;
    for (std::size_t i = 0; i < d0; ++i) sparse_add(s, off0 + i, cand[p][i]);
    embed.push_back(std::move(s));
  }
  Matrix<K> z0mat = Matrix<K>::from_columns(d0, z0);

  GradedSpace ts(basis);
  // Coordinates of an element of B^{<=0} (known to lie in the truncation).
  auto coords = [&](const SparseVec<K>& v) {
    SparseVec<K> out;
    Vec<K> deg0(d0, K(0));
    bool has0 = false;
    for (const auto& [i, c] : v) {
      if (bs.degree(i) < 0) {
        sparse_add(out, i, c);  // negative part keeps B's indices
      } else if (bs.degree(i) == 0) {
        deg0[i - off0] = c;
        has0 = true;
      } else {
        throw InvariantError("truncation: element leaves degrees <= 0");
      }
    }
    if (has0) {
      auto y = solve(z0mat, deg0);
      if (!y) throw InvariantError("truncation: degree-0 element is not a cocycle");
      for (std::size_t k = 0; k < y->size(); ++k) sparse_add(out, neg_count + k, (*y)[k]);
    }
    return out;
  };

  std::map<int, Operation<K>> ops;
  Operation<K> m1(1), m2(2);
  for (std::size_t i = 0; i < ts.dim(); ++i) {
    if (ts.degree(i) < 0) {
      SparseVec<K> img = b.evaluate(std::vector<SparseVec<K>>{embed[i]});
      m1.set({i}, coords(img));
    }
    for (std::size_t j = 0; j < ts.dim(); ++j) {
      if (ts.degree(i) + ts.degree(j) > 0) continue;
      SparseVec<K> prod = b.evaluate(std::vector<SparseVec<K>>{embed[i], embed[j]});
      m2.set({i, j}, coords(prod));
    }
  }
  if (!m1.empty()) ops.emplace(1, std::move(m1));
  if (!m2.empty()) ops.emplace(2, std::move(m2));
  std::size_t unit = neg_count;  // the unit is the first degree-0 candidate
  if (d0 == 0 || !(embed[unit] == SparseVec<K>{{b.unit(), K(1)}}))
    throw PropertyError("unit of B is not a degree-0 cocycle");

  Truncation<K> out{AInfinityAlgebra<K>(ts, unit, std::move(ops)), GradedLinearMap<K>(ts, bs, 0), {}};
  Matrix<K> inc(bs.dim(), ts.dim());
  for (std::size_t j = 0; j < ts.dim(); ++j)
    for (const auto& [i, c] : embed[j]) inc(i, j) = c;
  out.inclusion = GradedLinearMap<K>::from_full(ts, bs, 0, inc);

  if (!check_positive) return out;
  auto hb = cohomology(underlying_complex(b));
  for (auto [n, d] : hb.dims())
    if (n > 0)
      out.warnings.push_back("H^" + std::to_string(n) + "(B) has dimension " + std::to_string(d) +
                             "; truncation is not a quasi-isomorphism");
  return out;
}

}  // namespace finmodel
