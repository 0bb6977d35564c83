#pragma once
// Fixture loading and property checks shared by the test binaries.

#include <string>
#include <vector>

#include "finmodel/finmodel.hpp"
#include "oracles.hpp"

namespace support {

using namespace finmodel;
using Q = Rational;

inline std::string fixture_path(const std::string& name) { return std::string(FINMODEL_FIXTURES) + "/" + name + ".json"; }

inline const std::vector<std::string>& corpus() {
  static const std::vector<std::string> names = {"k",           "k_times_k",        "dual_numbers",   "exterior",
                                                 "exterior2",   "upper_triangular", "truncated_poly", "massey_dga"};
  return names;
}

template <class K = Q>
AInfinityAlgebra<K> load(const std::string& name) {
  return build_algebra<K>(load_description(fixture_path(name)));
}

/// The algebra itself if minimal, else its transferred minimal model.
template <class K = Q>
AInfinityAlgebra<K> minimal(const std::string& name) {
  auto a = load<K>(name);
  return a.is_minimal() ? a : minimal_model(DGAlgebra<K>(a)).algebra;
}

/// Counts of failures of d^2 = 0 and of the Leibniz rule on basis elements,
/// over all pairs whose terms stay in the window.
struct WindowAudit {
  std::size_t d_squared = 0;
  std::size_t leibniz = 0;
  std::size_t checked = 0;
};

template <class K>
WindowAudit audit_window(const EndomorphismWindow<K>& w) {
  WindowAudit out;
  for (int n = w.lo(); n + 2 <= w.hi(); ++n)
    for (std::size_t i = 0; i < w.dim(n); ++i) {
      ++out.checked;
      if (!w.differential(n + 1, w.differential(n, i)).empty()) ++out.d_squared;
    }
  for (int p = w.lo(); p <= w.hi(); ++p)
    for (int q = w.lo(); q <= w.hi(); ++q) {
      if (p + q < w.lo() || p + q + 1 > w.hi() || p + 1 > w.hi() || q + 1 > w.hi()) continue;
      for (std::size_t i = 0; i < w.dim(p); ++i)
        for (std::size_t j = 0; j < w.dim(q); ++j) {
          ++out.checked;
          SparseVec<K> a{{i, K(1)}}, b{{j, K(1)}};
          auto lhs = w.differential(p + q, w.product(p, a, q, b));
          SparseVec<K> rhs = w.product(p + 1, w.differential(p, a), q, b);
          sparse_axpy(rhs, signed_one<K>(parity_sign(p)), w.product(p, a, q + 1, w.differential(q, b)));
          if (lhs != rhs) ++out.leibniz;
        }
    }
  return out;
}

/// Oracle table of a DG algebra, read off the library's structure constants.
template <class K>
oracle::DgTable dg_table(const AInfinityAlgebra<K>& a) {
  oracle::DgTable t;
  const auto& s = a.space();
  for (std::size_t i = 0; i < s.dim(); ++i) {
    t.names.push_back(s.name(i));
    t.degrees.push_back(s.degree(i));
  }
  auto row = [&](const SparseVec<K>& v) {
    oracle::Row r(s.dim(), 0);
    for (const auto& [k, c] : v) r[k] = mpq_class(c.to_string());
    return r;
  };
  if (const auto* d = a.op(1))
    for (const auto& [in, out] : d->entries()) t.d[in[0]] = row(out);
  if (const auto* m = a.op(2))
    for (const auto& [in, out] : m->entries()) t.prod[{in[0], in[1]}] = row(out);
  return t;
}

/// Oracle table of an ordinary algebra.  Scalars are read through their
/// decimal string so the oracle sees plain integers or rationals.
template <class K>
oracle::AlgTable alg_table(const OrdinaryAlgebra<K>& l) {
  oracle::AlgTable t;
  t.n = l.dim();
  t.table.assign(t.n, std::vector<oracle::Row>(t.n, oracle::Row(t.n, 0)));
  for (std::size_t i = 0; i < t.n; ++i)
    for (std::size_t j = 0; j < t.n; ++j) {
      Vec<K> v = l.product(i, j);
      for (std::size_t k = 0; k < t.n; ++k) t.table[i][j][k] = mpq_class(v[k].to_string());
    }
  return t;
}

/// Regular module, over the finite model when A has higher operations.
template <class K>
DGModule<K> regular_module(const AInfinityAlgebra<K>& minimal_a) {
  return DGModule<K>::regular(minimal_a.is_dg() ? minimal_a : finite_model(minimal_a).algebra);
}

}  // namespace support
