#pragma once
// A-infinity algebras with finite-dimensional underlying space and finitely
// many nonzero operations m_k : A^{(x)k} -> A of degree 2 - k.
//
// Operations are stored sparsely: for each input basis tuple the output is a
// sparse vector.  Unit products m_2(1, x) = x = m_2(x, 1) are stored
// explicitly like every other entry.

#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "finmodel/errors.hpp"
#include "finmodel/exactlin.hpp"
#include "finmodel/graded.hpp"

namespace finmodel {

using Tuple = std::vector<std::size_t>;

template <class K>
class Operation {
 public:
  Operation() = default;
  explicit Operation(int arity) : arity_(arity) {}

  int arity() const { return arity_; }
  const std::map<Tuple, SparseVec<K>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// Adds coeff * e_out to the value on the given input tuple.
  void add(const Tuple& inputs, std::size_t out, const K& coeff) {
    if (static_cast<int>(inputs.size()) != arity_) throw ValidationError("operation entry has wrong arity");
    auto& v = entries_[inputs];
    sparse_add(v, out, coeff);
    if (v.empty()) entries_.erase(inputs);
  }
  void set(const Tuple& inputs, SparseVec<K> value) {
    if (static_cast<int>(inputs.size()) != arity_) throw ValidationError("operation entry has wrong arity");
    if (value.empty())
      entries_.erase(inputs);
    else
      entries_[inputs] = std::move(value);
  }

  const SparseVec<K>* find(const Tuple& inputs) const {
    auto it = entries_.find(inputs);
    return it == entries_.end() ? nullptr : &it->second;
  }

  friend bool operator==(const Operation& a, const Operation& b) {
    return a.arity_ == b.arity_ && a.entries_ == b.entries_;
  }

 private:
  int arity_ = 0;
  std::map<Tuple, SparseVec<K>> entries_;
};

template <class K>
class AInfinityAlgebra {
 public:
  AInfinityAlgebra() = default;

  /// Checks that every entry of m_k has output degree (sum of inputs) + 2 - k
  /// and that the unit sits in degree 0.  Stasheff identities are not checked
  /// here; see validate().
  AInfinityAlgebra(GradedSpace space, std::size_t unit, std::map<int, Operation<K>> ops)
      : space_(std::move(space)), unit_(unit), ops_(std::move(ops)) {
    if (unit_ >= space_.dim()) throw ValidationError("unit index out of range");
    if (space_.degree(unit_) != 0) throw ValidationError("unit '" + space_.name(unit_) + "' is not in degree 0");
    for (auto it = ops_.begin(); it != ops_.end();) {
      const auto& [k, op] = *it;
      if (k < 1 || op.arity() != k) throw ValidationError("operation arity mismatch for m_" + std::to_string(k));
      for (const auto& [in, out] : op.entries()) {
        int deg = 2 - k;
        for (auto i : in) {
          if (i >= space_.dim()) throw ValidationError("m_" + std::to_string(k) + ": input index out of range");
          deg += space_.degree(i);
        }
        for (const auto& [o, c] : out) {
          if (o >= space_.dim()) throw ValidationError("m_" + std::to_string(k) + ": output index out of range");
          if (space_.degree(o) != deg)
            throw ValidationError("m_" + std::to_string(k) + " entry " + describe(in) + " -> " + space_.name(o) +
                                  " has target degree " + std::to_string(space_.degree(o)) + ", expected " +
                                  std::to_string(deg));
        }
      }
      it = op.empty() ? ops_.erase(it) : std::next(it);
    }
  }

  const GradedSpace& space() const { return space_; }
  std::size_t dim() const { return space_.dim(); }
  std::size_t unit() const { return unit_; }
  const std::map<int, Operation<K>>& ops() const { return ops_; }

  const Operation<K>* op(int k) const {
    auto it = ops_.find(k);
    return it == ops_.end() ? nullptr : &it->second;
  }
  int max_arity() const { return ops_.empty() ? 0 : ops_.rbegin()->first; }
  bool is_minimal() const { return op(1) == nullptr; }
  bool is_dg() const { return ops_.empty() || max_arity() <= 2; }

  /// m_k on a basis tuple.
  SparseVec<K> evaluate(const Tuple& inputs) const {
    const auto* o = op(static_cast<int>(inputs.size()));
    if (!o) return {};
    const auto* v = o->find(inputs);
    return v ? *v : SparseVec<K>{};
  }

  /// Multilinear extension of m_k to sparse arguments.
  SparseVec<K> evaluate(std::span<const SparseVec<K>> args) const {
    SparseVec<K> out;
    const auto* o = op(static_cast<int>(args.size()));
    if (!o) return out;
    Tuple idx(args.size());
    auto rec = [&](auto&& self, std::size_t j, const K& coeff) -> void {
      if (j == args.size()) {
        if (const auto* v = o->find(idx)) sparse_axpy(out, coeff, *v);
        return;
      }
      for (const auto& [i, c] : args[j]) {
        idx[j] = i;
        self(self, j + 1, coeff * c);
      }
    };
    rec(rec, 0, K(1));
    return out;
  }

  int degree_of(const Tuple& t) const {
    int d = 0;
    for (auto i : t) d += space_.degree(i);
    return d;
  }

  std::string describe(const Tuple& t) const {
    std::string s = "(";
    for (std::size_t j = 0; j < t.size(); ++j) s += (j ? "," : "") + space_.name(t[j]);
    return s + ")";
  }

  /// Dense matrix of m_1 restricted to degree n (rows: degree n+1).
  Matrix<K> differential_block(int n) const {
    Matrix<K> b(space_.dim(n + 1), space_.dim(n));
    if (const auto* d = op(1))
      for (const auto& [in, out] : d->entries()) {
        if (space_.degree(in[0]) != n) continue;
        for (const auto& [o, c] : out) b(o - space_.offset(n + 1), in[0] - space_.offset(n)) = c;
      }
    return b;
  }

  friend bool operator==(const AInfinityAlgebra& a, const AInfinityAlgebra& b) {
    return a.space_ == b.space_ && a.unit_ == b.unit_ && a.ops_ == b.ops_;
  }

 private:
  GradedSpace space_;
  std::size_t unit_ = 0;
  std::map<int, Operation<K>> ops_;
};

/// Iterates over every tuple of length len with entries in [0, n).
template <class F>
void for_each_tuple(std::size_t n, std::size_t len, F&& f) {
  Tuple t(len, 0);
  if (len > 0 && n == 0) return;
  while (true) {
    f(static_cast<const Tuple&>(t));
    std::size_t j = len;
    while (j > 0) {
      --j;
      if (++t[j] < n) break;
      t[j] = 0;
      if (j == 0) return;
    }
    if (len == 0) return;
  }
}

}  // namespace finmodel
