#pragma once
// Graded vector spaces with named bases, graded linear maps between them,
// shifts, tensor products and the Koszul sign rule.
//
// A GradedSpace keeps its basis sorted by degree (stably), so the part of
// degree n is a contiguous index range.  Global indices are what sparse
// vectors and operation tables refer to.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "finmodel/errors.hpp"
#include "finmodel/exactlin.hpp"

namespace finmodel {

struct BasisElement {
  std::string name;
  int degree = 0;
  friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

class GradedSpace {
 public:
  GradedSpace() = default;

  explicit GradedSpace(std::vector<BasisElement> basis) : basis_(std::move(basis)) {
    std::stable_sort(basis_.begin(), basis_.end(),
                     [](const BasisElement& x, const BasisElement& y) { return x.degree < y.degree; });
    std::set<std::string> seen;
    for (const auto& b : basis_)
      if (!seen.insert(b.name).second) throw ValidationError("duplicate basis name '" + b.name + "'");
    index_();
  }

  /// A space with the given dimensions and generated labels "<prefix><deg>.<i>".
  static GradedSpace from_dims(const std::map<int, std::size_t>& dims, const std::string& prefix = "e") {
    std::vector<BasisElement> basis;
    for (const auto& [deg, n] : dims)
      for (std::size_t i = 0; i < n; ++i) basis.push_back({prefix + std::to_string(deg) + "." + std::to_string(i), deg});
    return GradedSpace(std::move(basis));
  }

  std::size_t dim() const { return basis_.size(); }
  std::size_t dim(int degree) const {
    auto it = ranges_.find(degree);
    return it == ranges_.end() ? 0 : it->second.second - it->second.first;
  }
  /// First global index of the given degree (end of the preceding block if absent).
  std::size_t offset(int degree) const {
    auto it = ranges_.lower_bound(degree);
    return it == ranges_.end() ? basis_.size() : it->second.first;
  }
  /// Nonzero dimensions only.
  std::map<int, std::size_t> dims() const {
    std::map<int, std::size_t> out;
    for (const auto& [deg, r] : ranges_) out[deg] = r.second - r.first;
    return out;
  }
  std::vector<int> degrees() const {
    std::vector<int> out;
    for (const auto& [deg, r] : ranges_) out.push_back(deg);
    return out;
  }
  /// Smallest interval [a,b] containing the support; nullopt for the zero space.
  std::optional<std::pair<int, int>> interval() const {
    if (ranges_.empty()) return std::nullopt;
    return std::make_pair(ranges_.begin()->first, ranges_.rbegin()->first);
  }

  const BasisElement& operator[](std::size_t i) const { return basis_.at(i); }
  const std::vector<BasisElement>& basis() const { return basis_; }
  int degree(std::size_t i) const { return basis_.at(i).degree; }
  const std::string& name(std::size_t i) const { return basis_.at(i).name; }

  std::optional<std::size_t> index_of(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t require(const std::string& name) const {
    auto i = index_of(name);
    if (!i) throw ValidationError("unknown basis element '" + name + "'");
    return *i;
  }

  friend bool operator==(const GradedSpace& a, const GradedSpace& b) { return a.basis_ == b.basis_; }

 private:
  void index_() {
    ranges_.clear();
    by_name_.clear();
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      auto [it, fresh] = ranges_.try_emplace(basis_[i].degree, i, i + 1);
      if (!fresh) it->second.second = i + 1;
      by_name_[basis_[i].name] = i;
    }
  }

  std::vector<BasisElement> basis_;
  std::map<int, std::pair<std::size_t, std::size_t>> ranges_;
  std::map<std::string, std::size_t> by_name_;
};

/// Result^n = V^{n+s}; shift(V, 1) is the suspension.
inline GradedSpace shift(const GradedSpace& v, int s) {
  std::vector<BasisElement> basis = v.basis();
  for (auto& b : basis) b.degree -= s;
  return GradedSpace(std::move(basis));
}

/// Tensor product.  Basis labels are "(x,y)"; within each degree the order is
/// lexicographic in the pair of source indices.
inline GradedSpace tensor(const GradedSpace& v, const GradedSpace& w) {
  std::vector<BasisElement> basis;
  basis.reserve(v.dim() * w.dim());
  for (std::size_t i = 0; i < v.dim(); ++i)
    for (std::size_t j = 0; j < w.dim(); ++j)
      basis.push_back({"(" + v.name(i) + "," + w.name(j) + ")", v.degree(i) + w.degree(j)});
  return GradedSpace(std::move(basis));
}

/// Position of (i, j) in tensor(v, w).
inline std::size_t tensor_index(const GradedSpace& v, const GradedSpace& w, std::size_t i, std::size_t j) {
  // tensor() sorts stably by degree, so count how many pairs precede (i, j).
  const int deg = v.degree(i) + w.degree(j);
  std::size_t before = 0;
  for (std::size_t x = 0; x < v.dim(); ++x)
    for (std::size_t y = 0; y < w.dim(); ++y) {
      int d = v.degree(x) + w.degree(y);
      if (d < deg || (d == deg && (x < i || (x == i && y < j)))) ++before;
    }
  return before;
}

inline int parity_sign(long exponent) { return (exponent % 2 == 0) ? 1 : -1; }

/// Sign (-1)^{sum_j |f_j| (|x_1| + ... + |x_{j-1}|)} picked up when
/// f_1 (x) ... (x) f_k is applied to x_1 (x) ... (x) x_k.
inline int koszul_sign(std::span<const int> map_degrees, std::span<const int> arg_degrees) {
  if (map_degrees.size() != arg_degrees.size()) throw ValidationError("koszul_sign: arity mismatch");
  long exponent = 0, passed = 0;
  for (std::size_t j = 0; j < map_degrees.size(); ++j) {
    exponent += static_cast<long>(map_degrees[j]) * passed;
    passed += arg_degrees[j];
  }
  return parity_sign(exponent);
}

template <class K>
K signed_one(int sign) {
  return sign > 0 ? K(1) : K(-1);
}

/// Homogeneous linear map of the given degree, stored as one block per
/// source degree n: V^n -> W^{n+degree}.  Blocks are only kept where both
/// sides are nonzero.
template <class K>
class GradedLinearMap {
 public:
  GradedLinearMap() = default;
  GradedLinearMap(GradedSpace source, GradedSpace target, int degree)
      : source_(std::move(source)), target_(std::move(target)), degree_(degree) {}

  GradedLinearMap(GradedSpace source, GradedSpace target, int degree, std::map<int, Matrix<K>> blocks)
      : GradedLinearMap(std::move(source), std::move(target), degree) {
    for (auto& [n, b] : blocks) set_block(n, std::move(b));
  }

  static GradedLinearMap identity(const GradedSpace& v) {
    GradedLinearMap m(v, v, 0);
    for (auto [n, d] : v.dims()) m.set_block(n, Matrix<K>::identity(d));
    return m;
  }

  /// Builds a map from a full (target.dim x source.dim) matrix, checking
  /// that it is homogeneous of the stated degree.
  static GradedLinearMap from_full(const GradedSpace& source, const GradedSpace& target, int degree,
                                   const Matrix<K>& full) {
    if (full.rows() != target.dim() || full.cols() != source.dim())
      throw ValidationError("graded map: full matrix has wrong shape");
    GradedLinearMap m(source, target, degree);
    for (std::size_t j = 0; j < source.dim(); ++j)
      for (std::size_t i = 0; i < target.dim(); ++i)
        if (!full(i, j).is_zero() && target.degree(i) != source.degree(j) + degree)
          throw ValidationError("graded map: entry (" + target.name(i) + " <- " + source.name(j) +
                                ") violates degree " + std::to_string(degree));
    for (auto [n, d] : source.dims()) {
      std::size_t tn = target.dim(n + degree);
      if (tn == 0) continue;
      Matrix<K> b(tn, d);
      for (std::size_t i = 0; i < tn; ++i)
        for (std::size_t j = 0; j < d; ++j) b(i, j) = full(target.offset(n + degree) + i, source.offset(n) + j);
      m.set_block(n, std::move(b));
    }
    return m;
  }

  const GradedSpace& source() const { return source_; }
  const GradedSpace& target() const { return target_; }
  int degree() const { return degree_; }

  /// Block V^n -> W^{n+degree}; a zero matrix of the right shape if absent.
  Matrix<K> block(int n) const {
    auto it = blocks_.find(n);
    if (it != blocks_.end()) return it->second;
    return Matrix<K>(target_.dim(n + degree_), source_.dim(n));
  }
  const std::map<int, Matrix<K>>& blocks() const { return blocks_; }

  void set_block(int n, Matrix<K> b) {
    if (b.rows() != target_.dim(n + degree_) || b.cols() != source_.dim(n))
      throw ValidationError("graded map: block at degree " + std::to_string(n) + " has wrong shape");
    if (b.rows() == 0 || b.cols() == 0) {
      blocks_.erase(n);
      return;
    }
    blocks_[n] = std::move(b);
  }

  Matrix<K> full() const {
    Matrix<K> f(target_.dim(), source_.dim());
    for (const auto& [n, b] : blocks_)
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) f(target_.offset(n + degree_) + i, source_.offset(n) + j) = b(i, j);
    return f;
  }

  Vec<K> apply(const Vec<K>& v) const { return full() * v; }

  bool is_zero() const {
    return std::all_of(blocks_.begin(), blocks_.end(), [](const auto& kv) { return kv.second.is_zero(); });
  }

  /// this after other.
  GradedLinearMap compose(const GradedLinearMap& other) const {
    if (!(other.target_ == source_)) throw ValidationError("compose: spaces do not match");
    GradedLinearMap out(other.source_, target_, degree_ + other.degree_);
    for (auto [n, d] : other.source_.dims()) {
      if (target_.dim(n + other.degree_ + degree_) == 0) continue;
      out.set_block(n, block(n + other.degree_) * other.block(n));
    }
    return out;
  }

  friend GradedLinearMap operator+(const GradedLinearMap& a, const GradedLinearMap& b) {
    a.check_compatible(b);
    GradedLinearMap out(a.source_, a.target_, a.degree_);
    for (auto [n, d] : a.source_.dims())
      if (a.target_.dim(n + a.degree_) > 0) out.set_block(n, a.block(n) + b.block(n));
    return out;
  }
  friend GradedLinearMap operator-(const GradedLinearMap& a, const GradedLinearMap& b) {
    return a + K(-1) * b;
  }
  friend GradedLinearMap operator*(const K& s, GradedLinearMap a) {
    for (auto& [n, b] : a.blocks_) b = s * b;
    return a;
  }
  friend bool operator==(const GradedLinearMap& a, const GradedLinearMap& b) {
    if (!(a.source_ == b.source_) || !(a.target_ == b.target_) || a.degree_ != b.degree_) return false;
    for (auto [n, d] : a.source_.dims())
      if (!(a.block(n) == b.block(n))) return false;
    return true;
  }

 private:
  void check_compatible(const GradedLinearMap& b) const {
    if (!(source_ == b.source_) || !(target_ == b.target_) || degree_ != b.degree_)
      throw ValidationError("graded maps are not compatible");
  }

  GradedSpace source_;
  GradedSpace target_;
  int degree_ = 0;
  std::map<int, Matrix<K>> blocks_;
};

/// Element of a tensor product of several spaces, keyed by index tuples.
template <class K>
using TensorElement = std::map<std::vector<std::size_t>, K>;

/// Degree of a homogeneous vector; nullopt for zero.  Throws if the vector
/// has components of different degrees.
template <class K>
std::optional<int> homogeneous_degree(const GradedSpace& v, const Vec<K>& x) {
  std::optional<int> deg;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    if (deg && *deg != v.degree(i)) throw ValidationError("element is not homogeneous");
    deg = v.degree(i);
  }
  return deg;
}

/// Applies f_1 (x) ... (x) f_k to x_1 (x) ... (x) x_k with the Koszul sign.
template <class K>
TensorElement<K> koszul_apply(std::span<const GradedLinearMap<K>> maps, std::span<const Vec<K>> args) {
  if (maps.size() != args.size()) throw ValidationError("koszul_apply: arity mismatch");
  std::vector<int> map_deg, arg_deg;
  std::vector<Vec<K>> images;
  for (std::size_t j = 0; j < maps.size(); ++j) {
    if (args[j].size() != maps[j].source().dim())
      throw ValidationError("koszul_apply: argument " + std::to_string(j) + " has wrong dimension");
    auto deg = homogeneous_degree(maps[j].source(), args[j]);
    if (!deg) return {};
    map_deg.push_back(maps[j].degree());
    arg_deg.push_back(*deg);
    images.push_back(maps[j].apply(args[j]));
    auto out_deg = homogeneous_degree(maps[j].target(), images.back());
    if (out_deg && *out_deg != *deg + maps[j].degree())
      throw ValidationError("koszul_apply: degree bookkeeping mismatch in factor " + std::to_string(j));
  }
  K sign = signed_one<K>(koszul_sign(map_deg, arg_deg));
  TensorElement<K> out;
  std::vector<std::size_t> idx(images.size());
  // Expand the tensor product of the images.
  auto rec = [&](auto&& self, std::size_t j, K coeff) -> void {
    if (j == images.size()) {
      out[idx] = sign * coeff;
      return;
    }
    for (std::size_t i = 0; i < images[j].size(); ++i) {
      if (images[j][i].is_zero()) continue;
      idx[j] = i;
      self(self, j + 1, coeff * images[j][i]);
    }
  };
  rec(rec, 0, K(1));
  return out;
}

}  // namespace finmodel
