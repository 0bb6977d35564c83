#pragma once
// H^0, its Jacobson radical, radical filtrations of modules, the generation
// bound (N, N', N'') and cone-tower certificates.
//
// A certificate for a DG module M over a DG algebra R concentrated in
// degrees <= 0 is a chain of sub-DG-modules 0 = G_0 < G_1 < ... < G_L = M.
// Each quotient G_{j+1}/G_j has cohomology in a single degree n and that
// cohomology is a finite sum of summands eS[-n] of S = H^0(R)/J.  The chain
// refines the standard truncations of M by the radical series of each
// H^n(M):
//   G = M^{<n} (+) {z in Z^n(M) : [z] in H^n(M) J^i}.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "finmodel/ainf.hpp"
#include "finmodel/algebra.hpp"
#include "finmodel/complexes.hpp"
#include "finmodel/errors.hpp"
#include "finmodel/exactlin.hpp"
#include "finmodel/graded.hpp"

namespace finmodel {

/// Finite-dimensional unital associative algebra given by structure
/// constants: product(i, j) = e_i e_j.
template <class K>
class OrdinaryAlgebra {
 public:
  OrdinaryAlgebra(std::vector<std::string> names, std::size_t unit, std::vector<std::vector<Vec<K>>> table)
      : names_(std::move(names)), unit_(unit), table_(std::move(table)) {
    const std::size_t n = names_.size();
    if (n == 0) throw ValidationError("algebra of dimension 0");
    if (unit_ >= n) throw ValidationError("unit index out of range");
    if (table_.size() != n) throw ValidationError("structure constant table has wrong size");
    for (const auto& row : table_) {
      if (row.size() != n) throw ValidationError("structure constant table has wrong size");
      for (const auto& v : row)
        if (v.size() != n) throw ValidationError("structure constant has wrong length");
    }
    for (std::size_t i = 0; i < n; ++i) {
      Vec<K> e = basis_vector(i);
      if (table_[unit_][i] != e || table_[i][unit_] != e)
        throw PropertyError("unit law fails on " + names_[i]);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (multiply(table_[i][j], basis_vector(k)) != multiply(basis_vector(i), table_[j][k]))
            throw PropertyError("not associative on (" + names_[i] + "," + names_[j] + "," + names_[k] + ")");
  }

  std::size_t dim() const { return names_.size(); }
  std::size_t unit() const { return unit_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  const Vec<K>& product(std::size_t i, std::size_t j) const { return table_.at(i).at(j); }

  Vec<K> basis_vector(std::size_t i) const {
    Vec<K> e(dim(), K(0));
    e[i] = K(1);
    return e;
  }
  Vec<K> unit_vector() const { return basis_vector(unit_); }

  Vec<K> multiply(const Vec<K>& a, const Vec<K>& b) const {
    Vec<K> out(dim(), K(0));
    for (std::size_t i = 0; i < dim(); ++i) {
      if (a[i].is_zero()) continue;
      for (std::size_t j = 0; j < dim(); ++j) {
        if (b[j].is_zero()) continue;
        K c = a[i] * b[j];
        const Vec<K>& p = table_[i][j];
        for (std::size_t k = 0; k < dim(); ++k)
          if (!p[k].is_zero()) out[k] += c * p[k];
      }
    }
    return out;
  }

  /// Matrix of y -> x y.
  Matrix<K> left(const Vec<K>& x) const {
    std::vector<Vec<K>> cols;
    for (std::size_t j = 0; j < dim(); ++j) cols.push_back(multiply(x, basis_vector(j)));
    return Matrix<K>::from_columns(dim(), cols);
  }
  /// Matrix of y -> y x.
  Matrix<K> right(const Vec<K>& x) const {
    std::vector<Vec<K>> cols;
    for (std::size_t j = 0; j < dim(); ++j) cols.push_back(multiply(basis_vector(j), x));
    return Matrix<K>::from_columns(dim(), cols);
  }

 private:
  std::vector<std::string> names_;
  std::size_t unit_ = 0;
  std::vector<std::vector<Vec<K>>> table_;
};

/// Degree-0 part of a minimal connective algebra with its product m_2.
template <class K>
OrdinaryAlgebra<K> h0_algebra(const AInfinityAlgebra<K>& a) {
  if (!a.is_minimal()) throw PropertyError("h0_algebra needs a minimal algebra");
  auto iv = a.space().interval();
  if (iv && iv->second > 0) throw PropertyError("h0_algebra needs a connective algebra");
  const auto& s = a.space();
  const std::size_t off = s.offset(0), d = s.dim(0);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < d; ++i) names.push_back(s.name(off + i));
  std::vector<std::vector<Vec<K>>> table(d, std::vector<Vec<K>>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Vec<K> v(d, K(0));
      for (const auto& [o, c] : a.evaluate(Tuple{off + i, off + j})) v[o - off] = c;
      table[i][j] = std::move(v);
    }
  return OrdinaryAlgebra<K>(std::move(names), a.unit() - off, std::move(table));
}

/// H^0 of a DG algebra together with cocycle representatives.
template <class K>
struct H0Data {
  OrdinaryAlgebra<K> algebra;
  Matrix<K> reps;  // R coordinates, one column per H^0 basis element
  Matrix<K> proj;  // H^0 coordinates of a degree-0 cocycle of R
};

template <class K>
H0Data<K> h0_of(const AInfinityAlgebra<K>& r) {
  if (!r.is_dg()) throw PropertyError("H^0 of a non-DG algebra: use h0_algebra on a minimal model");
  std::size_t unit = r.unit();
  auto coh = cohomology(underlying_complex(r), std::span<const std::size_t>(&unit, 1));
  const std::size_t off = coh.H.offset(0), d = coh.H.dim(0);
  std::vector<Vec<K>> reps;
  std::vector<std::string> names;
  std::vector<std::size_t> rows;
  std::size_t h_unit = d;
  for (std::size_t k = 0; k < d; ++k) {
    reps.push_back(coh.representatives[off + k]);
    names.push_back(coh.H.name(off + k));
    rows.push_back(off + k);
    if (sparsify(reps.back()) == SparseVec<K>{{r.unit(), K(1)}}) h_unit = k;
  }
  if (h_unit == d) throw PropertyError("the unit is not a cohomology class (H^0 = 0?)");
  Matrix<K> proj = coh.pi.full().select_rows(rows);
  std::vector<std::vector<Vec<K>>> table(d, std::vector<Vec<K>>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      SparseVec<K> p = r.evaluate(std::vector<SparseVec<K>>{sparsify(reps[i]), sparsify(reps[j])});
      table[i][j] = proj * densify(p, r.dim());
    }
  return {OrdinaryAlgebra<K>(std::move(names), h_unit, std::move(table)), Matrix<K>::from_columns(r.dim(), reps),
          std::move(proj)};
}

namespace detail {

template <class K>
Matrix<K> span_of(std::size_t n, const std::vector<Vec<K>>& vecs) {
  return column_space(Matrix<K>::from_columns(n, vecs));
}

/// span{a b : a in I, b in J}
template <class K>
Matrix<K> product_space(const OrdinaryAlgebra<K>& l, const Matrix<K>& i, const Matrix<K>& j) {
  std::vector<Vec<K>> out;
  for (const auto& a : i.columns())
    for (const auto& b : j.columns()) out.push_back(l.multiply(a, b));
  return span_of(l.dim(), out);
}

/// Two-sided ideal generated by the columns of g.
template <class K>
Matrix<K> ideal_closure(const OrdinaryAlgebra<K>& l, const Matrix<K>& g) {
  Matrix<K> cur = column_space(g);
  while (true) {
    std::vector<Vec<K>> vecs = cur.columns();
    for (const auto& x : cur.columns())
      for (std::size_t b = 0; b < l.dim(); ++b) {
        vecs.push_back(l.multiply(l.basis_vector(b), x));
        vecs.push_back(l.multiply(x, l.basis_vector(b)));
      }
    Matrix<K> next = span_of(l.dim(), vecs);
    if (next.cols() == cur.cols()) return cur;
    cur = std::move(next);
  }
}

/// Least k with I^k = 0, or nullopt when I is not nilpotent.
template <class K>
std::optional<std::size_t> nilpotency(const OrdinaryAlgebra<K>& l, const Matrix<K>& ideal) {
  if (ideal.cols() == 0) return 1;
  Matrix<K> power = ideal;
  for (std::size_t k = 1; k <= l.dim() + 1; ++k) {
    Matrix<K> next = product_space(l, power, ideal);
    if (next.cols() == 0) return k + 1;
    if (next.cols() == power.cols()) return std::nullopt;
    power = std::move(next);
  }
  return std::nullopt;
}

}  // namespace detail

template <class K>
struct RadicalIdeal {
  Matrix<K> basis;                  // columns in algebra coordinates
  std::size_t nilpotency_index = 1;  // least k with J^k = 0
  bool brute_force = false;          // found by exhaustive search over a prime field

  std::size_t dim() const { return basis.cols(); }
};

inline constexpr std::size_t kBruteForceMaxDim = 8;
inline constexpr std::uint64_t kBruteForceMaxElements = std::uint64_t{1} << 22;

/// Largest nilpotent two-sided ideal.  Uses the trace form
/// {x : tr(L_{xy}) = 0 for all y} when the characteristic is 0 or exceeds
/// the dimension; otherwise accumulates nilpotent ideals generated by every
/// element of the (finite) algebra.
template <class K>
RadicalIdeal<K> jacobson_radical(const OrdinaryAlgebra<K>& l) {
  const std::size_t n = l.dim();
  const std::uint64_t p = FieldTraits<K>::characteristic();
  RadicalIdeal<K> out;
  if (p == 0 || p > n) {
    Matrix<K> form(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Matrix<K> lm = l.left(l.product(i, j));
        K tr(0);
        for (std::size_t k = 0; k < n; ++k) tr += lm(k, k);
        form(i, j) = tr;
      }
    out.basis = kernel_basis(form.transpose());
  } else {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < n && count <= kBruteForceMaxElements; ++i) count *= p;
    if (n > kBruteForceMaxDim || count > kBruteForceMaxElements)
      throw ValidationError("radical over F_" + std::to_string(p) + " of an algebra of dimension " +
                            std::to_string(n) + " is beyond the brute-force limit");
    out.brute_force = true;
    Matrix<K> acc(n, 0);
    for_each_tuple(p, n, [&](const Tuple& t) {
      Vec<K> x(n, K(0));
      for (std::size_t i = 0; i < n; ++i) x[i] = K(static_cast<long>(t[i]));
      if (is_zero_vec(x) || in_column_span(acc, x)) return;
      Matrix<K> cand = detail::ideal_closure(l, acc.hstack(Matrix<K>::from_columns(n, {x})));
      if (detail::nilpotency(l, cand)) acc = std::move(cand);
    });
    out.basis = std::move(acc);
  }
  auto idx = detail::nilpotency(l, out.basis);
  if (!idx) throw InvariantError("computed radical is not nilpotent");
  Matrix<K> closed = detail::ideal_closure(l, out.basis);
  if (closed.cols() != out.basis.cols()) throw InvariantError("computed radical is not an ideal");
  out.nilpotency_index = *idx;
  return out;
}

/// Quotient algebra with lift and projection maps.  The basis of the
/// quotient consists of classes of basis vectors, the unit's class first.
template <class K>
struct QuotientAlgebra {
  OrdinaryAlgebra<K> algebra;
  Matrix<K> lift;  // algebra coords x quotient coords
  Matrix<K> proj;  // quotient coords x algebra coords
};

template <class K>
QuotientAlgebra<K> quotient(const OrdinaryAlgebra<K>& l, const Matrix<K>& ideal) {
  const std::size_t n = l.dim(), k = ideal.cols();
  if (k == n) throw PropertyError("quotient by the whole algebra");
  std::vector<std::size_t> order{l.unit()};
  for (std::size_t i = 0; i < n; ++i)
    if (i != l.unit()) order.push_back(i);
  std::vector<Vec<K>> cand = ideal.columns();
  for (auto i : order) cand.push_back(l.basis_vector(i));
  std::vector<std::size_t> chosen;
  for (auto c : independent_columns(Matrix<K>::from_columns(n, cand)))
    if (c >= k) chosen.push_back(order[c - k]);
  std::vector<Vec<K>> comp;
  std::vector<std::string> names;
  for (auto i : chosen) {
    comp.push_back(l.basis_vector(i));
    names.push_back(l.name(i));
  }
  Matrix<K> lift = Matrix<K>::from_columns(n, comp);
  Matrix<K> inv = inverse(ideal.hstack(lift));
  std::vector<std::size_t> rows;
  for (std::size_t r = k; r < n; ++r) rows.push_back(r);
  Matrix<K> proj = inv.select_rows(rows);
  const std::size_t q = comp.size();
  std::vector<std::vector<Vec<K>>> table(q, std::vector<Vec<K>>(q));
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j) table[i][j] = proj * l.multiply(comp[i], comp[j]);
  return {OrdinaryAlgebra<K>(std::move(names), 0, std::move(table)), std::move(lift), std::move(proj)};
}

namespace detail {

/// Candidate roots in the base field of a polynomial given by coefficients
/// c_0, ..., c_m.
inline std::vector<Rational> root_candidates(const std::vector<Rational>& poly) {
  mpz_class den = 1;
  for (const auto& c : poly) den = lcm(den, c.value().get_den());
  std::vector<mpz_class> ints;
  for (const auto& c : poly) ints.push_back(mpz_class(c.value() * den));
  std::vector<Rational> out;
  std::size_t low = 0;
  while (low < ints.size() && ints[low] == 0) ++low;
  if (low > 0) out.push_back(Rational(0));
  if (low >= ints.size()) return out;
  mpz_class a0 = abs(ints[low]), an = abs(ints.back());
  const mpz_class limit = mpz_class(1) << 40;
  if (a0 > limit || an > limit) return out;
  auto divisors = [](const mpz_class& v) {
    std::vector<mpz_class> ds;
    for (mpz_class d = 1; d * d <= v; ++d)
      if (v % d == 0) {
        ds.push_back(d);
        if (d * d != v) ds.push_back(v / d);
      }
    return ds;
  };
  for (const auto& num : divisors(a0))
    for (const auto& dd : divisors(an)) {
      out.push_back(Rational(mpq_class(num, dd)));
      out.push_back(Rational(mpq_class(-num, dd)));
    }
  return out;
}

inline std::vector<ModP> root_candidates(const std::vector<ModP>& poly) {
  const std::uint32_t p = PrimeField::current();
  std::vector<ModP> out;
  if (p <= (1u << 16)) {
    for (std::uint32_t r = 0; r < p; ++r) out.emplace_back(r, p);
  } else {
    for (long r : {0L, 1L, -1L}) out.emplace_back(r);
  }
  (void)poly;
  return out;
}

template <class K>
K evaluate_poly(const std::vector<K>& poly, const K& x) {
  K acc(0);
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// Splits e = e1 + e2 into orthogonal nonzero idempotents using an element
/// of eSe whose minimal polynomial has a root in the base field.
template <class K>
std::optional<std::pair<Vec<K>, Vec<K>>> split_idempotent(const OrdinaryAlgebra<K>& s, const Vec<K>& e) {
  const std::size_t n = s.dim();
  std::vector<Vec<K>> corner;
  for (std::size_t b = 0; b < n; ++b) corner.push_back(s.multiply(s.multiply(e, s.basis_vector(b)), e));
  for (const auto& x : span_of(n, corner).columns()) {
    // Minimal polynomial of x in eSe, whose identity is e.
    std::vector<Vec<K>> powers{e};
    std::optional<Vec<K>> rel;
    while (powers.size() <= n + 1) {
      Vec<K> next = s.multiply(powers.back(), x);
      auto y = solve(Matrix<K>::from_columns(n, powers), next);
      if (y) {
        rel = *y;
        powers.push_back(next);
        break;
      }
      powers.push_back(next);
    }
    if (!rel || rel->size() < 2) continue;  // x is a multiple of e
    std::vector<K> poly;                      // t^m - sum y_i t^i
    for (const auto& c : *rel) poly.push_back(-c);
    poly.push_back(K(1));
    for (const auto& r : root_candidates(poly)) {
      if (!evaluate_poly(poly, r).is_zero()) continue;
      // g = poly / (t - r) by synthetic division.
      const std::size_t m = poly.size() - 1;
      std::vector<K> g(m, K(0));
      K carry(0);
      for (std::size_t i = m; i-- > 0;) {
        carry = poly[i + 1] + carry * r;
        g[i] = carry;
      }
      K gr = evaluate_poly(g, r);
      if (gr.is_zero()) continue;
      Vec<K> e1(n, K(0));
      for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t k = 0; k < n; ++k) e1[k] += g[i] * powers[i][k];
      for (auto& c : e1) c = c / gr;
      Vec<K> e2(n, K(0));
      for (std::size_t k = 0; k < n; ++k) e2[k] = e[k] - e1[k];
      if (is_zero_vec(e1) || is_zero_vec(e2)) continue;
      if (s.multiply(e1, e1) != e1 || !is_zero_vec(s.multiply(e1, e2)))
        throw InvariantError("idempotent splitting produced a non-idempotent");
      return std::make_pair(e1, e2);
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Orthogonal idempotents summing to 1 that cannot be split further by
/// elements with a root of their minimal polynomial in the base field.  For
/// split semisimple algebras these are primitive.
template <class K>
std::vector<Vec<K>> primitive_idempotents(const OrdinaryAlgebra<K>& s) {
  std::vector<Vec<K>> done, todo{s.unit_vector()};
  while (!todo.empty()) {
    Vec<K> e = todo.back();
    todo.pop_back();
    if (auto sp = detail::split_idempotent(s, e)) {
      todo.push_back(sp->second);
      todo.push_back(sp->first);
    } else {
      done.push_back(e);
    }
  }
  return done;
}

/// Right module over an OrdinaryAlgebra: action[j] is the matrix of v -> v e_j.
template <class K>
struct RightModule {
  std::size_t dim = 0;
  std::vector<Matrix<K>> action;

  Matrix<K> act(const Vec<K>& x) const {
    Matrix<K> m(dim, dim);
    for (std::size_t j = 0; j < x.size(); ++j)
      if (!x[j].is_zero()) m = m + x[j] * action[j];
    return m;
  }
};

/// Throws PropertyError unless the unit acts as the identity and
/// v (a b) = (v a) b on basis elements.
template <class K>
void check_module(const OrdinaryAlgebra<K>& l, const RightModule<K>& m) {
  if (m.action.size() != l.dim()) throw ValidationError("module action has the wrong number of matrices");
  for (const auto& a : m.action)
    if (a.rows() != m.dim || a.cols() != m.dim) throw ValidationError("module action matrix has the wrong shape");
  if (!(m.action[l.unit()] == Matrix<K>::identity(m.dim))) throw PropertyError("unit does not act as the identity");
  for (std::size_t a = 0; a < l.dim(); ++a)
    for (std::size_t b = 0; b < l.dim(); ++b)
      if (!(m.act(l.product(a, b)) == m.action[b] * m.action[a]))
        throw PropertyError("module action is not associative on (" + l.name(a) + "," + l.name(b) + ")");
}

template <class K>
struct RadicalLayer {
  Matrix<K> basis;                 // module coordinates; complement of M J^{i+1} in M J^i
  std::vector<Matrix<K>> action;   // on layer coordinates, per algebra basis element
};

template <class K>
struct RadicalFiltration {
  std::vector<Matrix<K>> powers;  // M J^i for i = 0..N' (the last one is 0)
  std::vector<RadicalLayer<K>> layers;

  std::size_t loewy_length() const { return layers.size(); }
};

namespace detail {

/// Coordinates of v in the complement c of the subspace u (v in u + c).
template <class K>
Vec<K> mod_coords(const Matrix<K>& u, const Matrix<K>& c, const Vec<K>& v) {
  auto y = solve(u.hstack(c), v);
  if (!y) throw InvariantError("vector outside the expected subspace");
  return Vec<K>(y->begin() + static_cast<long>(u.cols()), y->end());
}

template <class K>
Matrix<K> complement_in(const Matrix<K>& u, const Matrix<K>& v) {
  std::vector<std::size_t> chosen;
  for (auto c : independent_columns(u.hstack(v)))
    if (c >= u.cols()) chosen.push_back(c - u.cols());
  return v.select_columns(chosen);
}

}  // namespace detail

/// Radical series M ⊇ MJ ⊇ MJ^2 ⊇ ... ⊇ 0 and its layers.
template <class K>
RadicalFiltration<K> radical_filtration(const RightModule<K>& m, const OrdinaryAlgebra<K>& l,
                                        const RadicalIdeal<K>& j) {
  check_module(l, m);
  RadicalFiltration<K> f;
  Matrix<K> cur = Matrix<K>::identity(m.dim);
  std::vector<Matrix<K>> jact;
  for (const auto& x : j.basis.columns()) jact.push_back(m.act(x));
  while (cur.cols() > 0) {
    f.powers.push_back(cur);
    std::vector<Vec<K>> next;
    for (const auto& v : cur.columns())
      for (const auto& a : jact) next.push_back(a * v);
    Matrix<K> nm = detail::span_of(m.dim, next);
    if (nm.cols() == cur.cols()) throw InvariantError("radical series does not terminate");
    cur = std::move(nm);
  }
  f.powers.push_back(Matrix<K>(m.dim, 0));
  for (std::size_t i = 0; i + 1 < f.powers.size(); ++i) {
    RadicalLayer<K> layer;
    layer.basis = detail::complement_in(f.powers[i + 1], f.powers[i]);
    for (const auto& a : m.action) {
      std::vector<Vec<K>> cols;
      for (const auto& v : layer.basis.columns()) cols.push_back(detail::mod_coords(f.powers[i + 1], layer.basis, a * v));
      layer.action.push_back(Matrix<K>::from_columns(layer.basis.cols(), cols));
    }
    f.layers.push_back(std::move(layer));
  }
  return f;
}

/// Layers F_i = M J^i / M J^{i+1}.
template <class K>
std::vector<RadicalLayer<K>> radical_layers(const RightModule<K>& m, const OrdinaryAlgebra<K>& l,
                                            const RadicalIdeal<K>& j) {
  return radical_filtration(m, l, j).layers;
}

struct GenerationBound {
  std::size_t N = 0;   // number of nonzero cohomology degrees
  std::size_t N1 = 0;  // Loewy length over H^0
  std::size_t N2 = 0;  // N * N1
  friend bool operator==(const GenerationBound&, const GenerationBound&) = default;
};

/// A minimal connective algebra as a right module over its degree-0 part.
template <class K>
RightModule<K> right_module_over_h0(const AInfinityAlgebra<K>& a) {
  const auto& s = a.space();
  const std::size_t off = s.offset(0), d = s.dim(0);
  RightModule<K> m{a.dim(), {}};
  for (std::size_t j = 0; j < d; ++j) {
    Matrix<K> act(a.dim(), a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (const auto& [o, c] : a.evaluate(Tuple{i, off + j})) act(o, i) = c;
    m.action.push_back(std::move(act));
  }
  return m;
}

template <class K>
GenerationBound generation_bound(const AInfinityAlgebra<K>& a) {
  OrdinaryAlgebra<K> h0 = h0_algebra(a);
  auto j = jacobson_radical(h0);
  auto f = radical_filtration(right_module_over_h0(a), h0, j);
  GenerationBound b;
  b.N = a.space().dims().size();
  b.N1 = f.loewy_length();
  b.N2 = b.N * b.N1;
  return b;
}

// ---------------------------------------------------------------------------
// Certificates

template <class K>
struct CertificateTerm {
  int shift = 0;         // the term is (eS)[shift], cohomology in degree -shift
  Vec<K> idempotent;     // degree-0 element of R lifting e
  Vec<K> generator;      // cocycle of M whose class generates the summand
};

template <class K>
struct CertificateStep {
  std::vector<Vec<K>> submodule;  // homogeneous basis of G_{j+1} in M coordinates
  std::vector<CertificateTerm<K>> terms;
};

template <class K>
struct GenerationCertificate {
  DGModule<K> module;  // over module.algebra(), concentrated in degrees <= 0
  GenerationBound bound;
  int window_lo = 0;
  int window_hi = 0;
  std::vector<CertificateStep<K>> steps;

  const AInfinityAlgebra<K>& algebra() const { return module.algebra(); }
  std::size_t length() const { return steps.size(); }
};

struct CertificateReport {
  bool ok = false;
  int failing_step = -1;  // -1 for global checks
  std::string message;
};

namespace detail {

template <class K>
void require_nonpositive_dg(const AInfinityAlgebra<K>& r) {
  if (!r.is_dg()) throw ValidationError("certificates need a DG algebra");
  auto iv = r.space().interval();
  if (iv && iv->second > 0) throw ValidationError("certificates need an algebra concentrated in degrees <= 0");
}

/// Everything derived from (R, M) that the certificate refers to.
template <class K>
struct CertificateContext {
  H0Data<K> h0;
  RadicalIdeal<K> radical;
  QuotientAlgebra<K> s;
  CohomologyData<K> coh;                 // of M
  std::map<int, RightModule<K>> hmods;   // H^n(M) over H^0(R), in H^n coordinates
  GenerationBound bound;

  /// Degree-0 element of R lifting an element of S.
  Vec<K> lift_s(const Vec<K>& x) const { return h0.reps * (s.lift * x); }
};

template <class K>
CertificateContext<K> certificate_context(const DGModule<K>& m) {
  const auto& r = m.algebra();
  require_nonpositive_dg(r);
  DGAlgebra<K> check(r);
  H0Data<K> h0 = h0_of(r);
  auto rad = jacobson_radical(h0.algebra);
  auto s = quotient(h0.algebra, rad.basis);
  auto coh = cohomology(m.complex());
  std::map<int, RightModule<K>> hmods;
  std::size_t loewy = 0;
  for (auto [n, d] : coh.dims()) {
    const std::size_t off = coh.H.offset(n);
    RightModule<K> hm{d, {}};
    Matrix<K> pi = coh.pi.full();
    for (std::size_t j = 0; j < h0.algebra.dim(); ++j) {
      SparseVec<K> rj = sparsify(h0.reps.column(j));
      std::vector<Vec<K>> cols;
      for (std::size_t k = 0; k < d; ++k) {
        SparseVec<K> prod = m.act(sparsify(coh.representatives[off + k]), rj);
        Vec<K> cls = pi * densify(prod, m.space().dim());
        cols.push_back(Vec<K>(cls.begin() + static_cast<long>(off), cls.begin() + static_cast<long>(off + d)));
      }
      hm.action.push_back(Matrix<K>::from_columns(d, cols));
    }
    loewy = std::max(loewy, radical_filtration(hm, h0.algebra, rad).loewy_length());
    hmods.emplace(n, std::move(hm));
  }
  // Loewy length of the whole of H^*(M) is the maximum over degrees.
  GenerationBound b{hmods.size(), loewy, hmods.size() * loewy};
  return {std::move(h0), std::move(rad), std::move(s), std::move(coh), std::move(hmods), b};
}

}  // namespace detail

/// Builds the cone tower of M by truncations and radical series.  The
/// declared shift window defaults to the shifts actually used.
template <class K>
GenerationCertificate<K> cone_certificate(const DGModule<K>& m, std::optional<std::pair<int, int>> window = {}) {
  auto ctx = detail::certificate_context(m);
  const auto& ms = m.space();
  const std::size_t nm = ms.dim();
  const auto& sa = ctx.s.algebra;
  std::vector<Vec<K>> idems = primitive_idempotents(sa);

  GenerationCertificate<K> cert{m, ctx.bound, 0, 0, {}};
  if (ctx.hmods.empty()) throw PropertyError("module is acyclic; the empty tower already reaches it");
  cert.window_lo = -ctx.hmods.rbegin()->first;
  cert.window_hi = -ctx.hmods.begin()->first;
  if (window) std::tie(cert.window_lo, cert.window_hi) = *window;

  for (const auto& [n, hm] : ctx.hmods) {
    const std::size_t hoff = ctx.coh.H.offset(n);
    auto filt = radical_filtration(hm, ctx.h0.algebra, ctx.radical);
    auto iota = [&](const Vec<K>& h) {
      Vec<K> out(nm, K(0));
      for (std::size_t k = 0; k < h.size(); ++k)
        if (!h[k].is_zero())
          for (std::size_t i = 0; i < nm; ++i) out[i] += h[k] * ctx.coh.representatives[hoff + k][i];
      return out;
    };
    std::vector<Vec<K>> base;  // M^{<n} and B^n
    for (std::size_t i = 0; i < ms.offset(n); ++i) {
      Vec<K> e(nm, K(0));
      e[i] = K(1);
      base.push_back(std::move(e));
    }
    Matrix<K> dfull = m.complex().d().full();
    for (std::size_t i = 0; i < ms.offset(n); ++i)
      if (ms.degree(i) == n - 1) base.push_back(dfull.column(i));

    for (std::size_t i = filt.loewy_length(); i-- > 0;) {
      CertificateStep<K> step;
      std::vector<Vec<K>> gens = base;
      for (const auto& h : filt.powers[i].columns()) gens.push_back(iota(h));
      step.submodule = detail::span_of(nm, gens).columns();

      Matrix<K> used = filt.powers[i + 1];
      const std::size_t target = filt.powers[i].cols();
      for (const auto& v : filt.layers[i].basis.columns()) {
        for (const auto& e : idems) {
          if (used.cols() == target) break;
          Vec<K> w = hm.act(ctx.s.lift * e) * v;
          std::vector<Vec<K>> es;
          for (std::size_t b = 0; b < sa.dim(); ++b) es.push_back(sa.multiply(e, sa.basis_vector(b)));
          Matrix<K> es_basis = detail::span_of(sa.dim(), es);
          std::vector<Vec<K>> image;
          for (const auto& sb : es_basis.columns()) image.push_back(hm.act(ctx.s.lift * sb) * w);
          Matrix<K> grown = detail::span_of(hm.dim, [&] {
            auto all = used.columns();
            all.insert(all.end(), image.begin(), image.end());
            return all;
          }());
          if (grown.cols() != used.cols() + es_basis.cols()) continue;
          used = std::move(grown);
          step.terms.push_back({-n, ctx.h0.reps * (ctx.s.lift * e), iota(w)});
        }
      }
      if (used.cols() != target)
        throw PropertyError("radical layer " + std::to_string(i) + " of H^" + std::to_string(n) +
                            " could not be split into summands eS over the base field");
      cert.steps.push_back(std::move(step));
    }
  }
  cert.steps.back().submodule = Matrix<K>::identity(nm).columns();
  return cert;
}

namespace detail {

/// tau_{<=n} Q -> Q and tau_{<=n} Q -> H^n(Q)[-n] are quasi-isomorphisms.
template <class K>
bool truncation_triangle_ok(const CochainComplex<K>& q, const CohomologyData<K>& cq, int n) {
  const auto& qs = q.space();
  const std::size_t low = qs.offset(n);
  Matrix<K> zn = kernel_basis(q.d_block(n));
  std::vector<BasisElement> tb;
  for (std::size_t i = 0; i < low; ++i) tb.push_back(qs[i]);
  for (std::size_t k = 0; k < zn.cols(); ++k) tb.push_back({"z" + std::to_string(k) + "@" + std::to_string(n), n});
  std::set<std::string> seen;
  for (auto& b : tb) b.name = fresh_name(seen, b.name);
  GradedSpace ts(tb);
  Matrix<K> inc(qs.dim(), ts.dim());
  for (std::size_t i = 0; i < low; ++i) inc(i, i) = K(1);
  for (std::size_t k = 0; k < zn.cols(); ++k)
    for (std::size_t r = 0; r < zn.rows(); ++r) inc(low + r, low + k) = zn(r, k);
  Matrix<K> dq = q.d().full();
  std::vector<Vec<K>> dcols;
  for (std::size_t c = 0; c < ts.dim(); ++c) {
    auto y = solve(inc, dq * inc.column(c));
    if (!y) return false;
    dcols.push_back(*y);
  }
  CochainComplex<K> tau(ts, GradedLinearMap<K>::from_full(ts, ts, 1, Matrix<K>::from_columns(ts.dim(), dcols)));
  ChainMap<K> into(tau, q, GradedLinearMap<K>::from_full(ts, qs, 0, inc));
  if (!quasi_iso_check(into)) return false;

  const std::size_t hoff = cq.H.offset(n), hd = cq.H.dim(n);
  std::vector<BasisElement> hb;
  for (std::size_t k = 0; k < hd; ++k) hb.push_back({"h" + std::to_string(k), n});
  GradedSpace hs(hb);
  Matrix<K> pi = cq.pi.full();
  Matrix<K> to_h(hd, ts.dim());
  for (std::size_t k = 0; k < zn.cols(); ++k) {
    Vec<K> cls = pi * inc.column(low + k);
    for (std::size_t r = 0; r < hd; ++r) to_h(r, low + k) = cls[hoff + r];
  }
  ChainMap<K> out(tau, CochainComplex<K>::trivial(hs), GradedLinearMap<K>::from_full(ts, hs, 0, to_h));
  return quasi_iso_check(out);
}

}  // namespace detail

/// Checks every step of the tower.  Failures are reported, not thrown.
template <class K>
CertificateReport verify_certificate(const GenerationCertificate<K>& cert) {
  CertificateReport rep;
  const DGModule<K>& m = cert.module;
  const auto& ms = m.space();
  const auto& r = m.algebra();
  const std::size_t nm = ms.dim();
  std::optional<detail::CertificateContext<K>> ctx;
  try {
    ctx = detail::certificate_context(m);
  } catch (const Error& e) {
    rep.message = std::string("invalid algebra or module: ") + e.what();
    return rep;
  }
  if (!(ctx->bound == cert.bound)) {
    rep.message = "declared bound (N, N', N'') does not match the module";
    return rep;
  }
  if (cert.steps.empty() || cert.steps.size() > cert.bound.N2) {
    rep.message = "tower length " + std::to_string(cert.steps.size()) + " exceeds N'' = " +
                  std::to_string(cert.bound.N2);
    return rep;
  }
  if (cert.window_lo > cert.window_hi) {
    rep.message = "empty shift window";
    return rep;
  }
  const auto& sa = ctx->s.algebra;
  Matrix<K> dfull = m.complex().d().full();

  Matrix<K> prev(nm, 0);
  for (std::size_t j = 0; j < cert.steps.size(); ++j) {
    rep.failing_step = static_cast<int>(j);
    const auto& step = cert.steps[j];
    try {
      // Sub-DG-module containing the previous one.
      for (const auto& v : step.submodule)
        if (v.size() != nm || !homogeneous_degree(ms, v))
          throw PropertyError("submodule basis vector is not homogeneous");
      Matrix<K> next = Matrix<K>::from_columns(nm, step.submodule);
      if (rank(next) != next.cols()) throw PropertyError("submodule basis is not linearly independent");
      for (const auto& v : prev.columns())
        if (!in_column_span(next, v)) throw PropertyError("previous submodule is not contained in this one");
      for (const auto& v : next.columns()) {
        if (!in_column_span(next, dfull * v)) throw PropertyError("submodule is not closed under d");
        for (std::size_t b = 0; b < r.dim(); ++b) {
          Vec<K> vb = densify(m.act(sparsify(v), SparseVec<K>{{b, K(1)}}), nm);
          if (!in_column_span(next, vb))
            throw PropertyError("submodule is not closed under the action of " + r.space().name(b));
        }
      }
      if (j + 1 == cert.steps.size() && next.cols() != nm) throw PropertyError("the tower does not end at M");

      // The quotient Q = next / prev.
      Matrix<K> comp = detail::complement_in(prev, next);
      std::vector<BasisElement> qb;
      for (std::size_t k = 0; k < comp.cols(); ++k)
        qb.push_back({"q" + std::to_string(k), *homogeneous_degree(ms, comp.column(k))});
      std::vector<std::size_t> order(qb.size());
      for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return qb[a].degree < qb[b].degree; });
      comp = comp.select_columns(order);
      std::vector<BasisElement> sorted;
      for (auto k : order) sorted.push_back(qb[k]);
      GradedSpace qs(sorted);
      auto qcoords = [&](const Vec<K>& v) { return detail::mod_coords(prev, comp, v); };
      std::vector<Vec<K>> dq;
      for (const auto& c : comp.columns()) dq.push_back(qcoords(dfull * c));
      CochainComplex<K> qc(qs, GradedLinearMap<K>::from_full(qs, qs, 1, Matrix<K>::from_columns(qs.dim(), dq)));
      typename DGModule<K>::ActionTable act;
      for (std::size_t k = 0; k < comp.cols(); ++k)
        for (std::size_t b = 0; b < r.dim(); ++b)
          act[{k, b}] = sparsify(qcoords(densify(m.act(sparsify(comp.column(k)), SparseVec<K>{{b, K(1)}}), nm)));
      DGModule<K> q(qc, r, std::move(act));
      auto cq = cohomology(qc);

      // Cohomology in the single degree named by the shifts.
      if (step.terms.empty()) throw PropertyError("step has no third term");
      const int shift = step.terms.front().shift;
      for (const auto& t : step.terms)
        if (t.shift != shift) throw PropertyError("terms of one step have different shifts");
      if (shift < cert.window_lo || shift > cert.window_hi)
        throw PropertyError("shift " + std::to_string(shift) + " lies outside the window [" +
                            std::to_string(cert.window_lo) + "," + std::to_string(cert.window_hi) + "]");
      const int n = -shift;
      for (auto [deg, d] : cq.dims())
        if (deg != n)
          throw PropertyError("cone has cohomology in degree " + std::to_string(deg) + ", expected only " +
                              std::to_string(n));
      const std::size_t hd = cq.H.dim(n), hoff = cq.H.offset(n);
      if (!detail::truncation_triangle_ok(qc, cq, n))
        throw PropertyError("cone is not quasi-isomorphic to its cohomology in degree " + std::to_string(n));

      Matrix<K> piq = cq.pi.full();
      auto hclass = [&](const Vec<K>& qv) {
        Vec<K> c = piq * qv;
        return Vec<K>(c.begin() + static_cast<long>(hoff), c.begin() + static_cast<long>(hoff + hd));
      };
      auto qact = [&](const Vec<K>& qv, const Vec<K>& rv) {
        return densify(q.act(sparsify(qv), sparsify(rv)), qs.dim());
      };

      // J acts by zero on H^n(Q).
      for (const auto& jv : ctx->radical.basis.columns()) {
        Vec<K> lifted = ctx->h0.reps * jv;
        for (std::size_t k = 0; k < hd; ++k)
          if (!is_zero_vec(hclass(qact(cq.representatives[hoff + k], lifted))))
            throw PropertyError("the radical does not act by zero on the cone's cohomology");
      }

      std::vector<Vec<K>> images;
      std::size_t total = 0;
      for (std::size_t t = 0; t < step.terms.size(); ++t) {
        const auto& term = step.terms[t];
        const std::string tag = "term " + std::to_string(t) + ": ";
        if (term.idempotent.size() != r.dim() || term.generator.size() != nm)
          throw ValidationError(tag + "vector of the wrong length");
        auto ed = homogeneous_degree(r.space(), term.idempotent);
        if (!ed || *ed != 0) throw PropertyError(tag + "idempotent is not a degree-0 element");
        Vec<K> ebar = ctx->s.proj * (ctx->h0.proj * term.idempotent);
        if (is_zero_vec(ebar)) throw PropertyError(tag + "idempotent is zero in H^0/J");
        if (sa.multiply(ebar, ebar) != ebar) throw PropertyError(tag + "element is not idempotent in H^0/J");
        if (!in_column_span(next, term.generator)) throw PropertyError(tag + "generator does not lie in the step");
        Vec<K> z = qcoords(term.generator);
        auto zd = homogeneous_degree(qs, z);
        if (!zd || *zd != n || !is_zero_vec(qc.d().full() * z))
          throw PropertyError(tag + "generator is not a degree-" + std::to_string(n) + " cocycle of the cone");
        Vec<K> cls = hclass(z);
        if (hclass(qact(z, term.idempotent)) != cls) throw PropertyError(tag + "[z] e != [z]");
        std::vector<Vec<K>> es;
        for (std::size_t b = 0; b < sa.dim(); ++b) es.push_back(sa.multiply(ebar, sa.basis_vector(b)));
        Matrix<K> es_basis = detail::span_of(sa.dim(), es);
        total += es_basis.cols();
        for (const auto& sb : es_basis.columns()) images.push_back(hclass(qact(z, ctx->lift_s(sb))));
      }
      if (total != hd)
        throw PropertyError("third term has dimension " + std::to_string(total) + " but the cone's cohomology has " +
                            std::to_string(hd));
      if (rank(Matrix<K>::from_columns(hd, images)) != hd)
        throw PropertyError("third term does not map onto the cone's cohomology");
      prev = std::move(next);
    } catch (const Error& e) {
      rep.message = "step " + std::to_string(j) + ": " + e.what();
      return rep;
    }
  }
  rep.ok = true;
  rep.failing_step = -1;
  return rep;
}

}  // namespace finmodel
