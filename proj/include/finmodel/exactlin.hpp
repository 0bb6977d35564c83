#pragma once
// Exact scalars (rationals and prime-field residues) and dense linear algebra.
//
// Everything above this header is templated on a scalar type K which is
// either Rational or ModP.  Both are constructible from a machine integer,
// which is how generic code spells 0 and 1.  For ModP the modulus comes from
// the innermost PrimeField::Session active on the calling thread.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "finmodel/errors.hpp"

namespace finmodel {

class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  /// Parses "n" or "n/d" with optional sign.  Throws ValidationError.
  static Rational parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw ValidationError("empty rational literal");
    auto ok_int = [](std::string_view t) {
      if (!t.empty() && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
      return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!ok_int(num) || !ok_int(den) || den[0] == '-' || den[0] == '+')
      throw ValidationError("malformed rational literal '" + s + "'");
    if (num[0] == '+') num.erase(0, 1);
    mpz_class n(num), d(den);
    if (d == 0) throw ValidationError("zero denominator in '" + s + "'");
    return Rational(mpq_class(n, d));
  }

  const mpq_class& value() const { return q_; }
  bool is_zero() const { return sgn(q_) == 0; }
  std::string to_string() const { return q_.get_str(); }

  Rational inverse() const {
    if (is_zero()) throw PropertyError("division by zero");
    return Rational(mpq_class(1) / q_);
  }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) { *this *= o.inverse(); return *this; }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return Rational(mpq_class(-q_)); }
  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  mpq_class q_;
};

/// Thread-local choice of the prime used when a ModP is built from an integer.
class PrimeField {
 public:
  static bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

  static std::uint32_t current() {
    if (slot() == 0) throw ValidationError("no prime field session is active");
    return slot();
  }

  /// RAII scope selecting the prime for the current thread.  Nests.
  class Session {
   public:
    explicit Session(std::uint64_t p) : saved_(slot()) {
      if (!is_prime(p) || p >= (1u << 31)) throw ValidationError("not a supported prime: " + std::to_string(p));
      slot() = static_cast<std::uint32_t>(p);
    }
    ~Session() { slot() = saved_; }
    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

   private:
    std::uint32_t saved_;
  };

 private:
  static std::uint32_t& slot() {
    thread_local std::uint32_t p = 0;
    return p;
  }
};

class ModP {
 public:
  ModP() : ModP(0) {}
  ModP(long v) : p_(PrimeField::current()) {  // NOLINT(google-explicit-constructor)
    long r = v % static_cast<long>(p_);
    v_ = static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
  }
  ModP(std::uint32_t residue, std::uint32_t p) : v_(residue % p), p_(p) {}

  static ModP parse(std::string_view text) {
    Rational q = Rational::parse(text);
    std::uint32_t p = PrimeField::current();
    auto reduce = [p](const mpz_class& z) {
      mpz_class r = z % p;
      if (r < 0) r += p;
      return ModP(static_cast<std::uint32_t>(r.get_ui()), p);
    };
    ModP num = reduce(q.value().get_num());
    ModP den = reduce(q.value().get_den());
    if (den.is_zero()) throw ValidationError("denominator of '" + std::string(text) + "' vanishes mod " + std::to_string(p));
    return num / den;
  }

  std::uint32_t residue() const { return v_; }
  std::uint32_t modulus() const { return p_; }
  bool is_zero() const { return v_ == 0; }
  std::string to_string() const { return std::to_string(v_); }

  ModP inverse() const {
    if (is_zero()) throw PropertyError("division by zero");
    // Fermat
    std::uint64_t result = 1, base = v_, e = p_ - 2;
    while (e > 0) {
      if (e & 1) result = result * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return ModP(static_cast<std::uint32_t>(result), p_);
  }

  ModP& operator+=(const ModP& o) { check(o); v_ = static_cast<std::uint32_t>((std::uint64_t{v_} + o.v_) % p_); return *this; }
  ModP& operator-=(const ModP& o) { check(o); v_ = static_cast<std::uint32_t>((std::uint64_t{v_} + p_ - o.v_) % p_); return *this; }
  ModP& operator*=(const ModP& o) { check(o); v_ = static_cast<std::uint32_t>(std::uint64_t{v_} * o.v_ % p_); return *this; }
  ModP& operator/=(const ModP& o) { check(o); return *this *= o.inverse(); }
  friend ModP operator+(ModP a, const ModP& b) { return a += b; }
  friend ModP operator-(ModP a, const ModP& b) { return a -= b; }
  friend ModP operator*(ModP a, const ModP& b) { return a *= b; }
  friend ModP operator/(ModP a, const ModP& b) { return a /= b; }
  ModP operator-() const { return ModP(v_ == 0 ? 0 : p_ - v_, p_); }
  friend bool operator==(const ModP& a, const ModP& b) { a.check(b); return a.v_ == b.v_; }
  friend std::ostream& operator<<(std::ostream& os, const ModP& r) { return os << r.v_; }

 private:
  void check(const ModP& o) const {
    if (o.p_ != p_)
      throw ValidationError("mixed-field arithmetic: F_" + std::to_string(p_) + " and F_" + std::to_string(o.p_));
  }

  std::uint32_t v_ = 0;
  std::uint32_t p_ = 2;
};

template <class K>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static std::uint32_t characteristic() { return 0; }
  static std::string name() { return "Q"; }
};

template <>
struct FieldTraits<ModP> {
  static std::uint32_t characteristic() { return PrimeField::current(); }
  static std::string name() { return std::to_string(PrimeField::current()); }
};

template <class K>
using Vec = std::vector<K>;

/// Sparse vector keyed by basis index; never stores zeros.
template <class K>
using SparseVec = std::map<std::size_t, K>;

template <class K>
void sparse_add(SparseVec<K>& into, std::size_t index, const K& coeff) {
  if (coeff.is_zero()) return;
  auto [it, inserted] = into.try_emplace(index, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) into.erase(it);
  }
}

template <class K>
void sparse_axpy(SparseVec<K>& into, const K& scale, const SparseVec<K>& x) {
  if (scale.is_zero()) return;
  for (const auto& [i, c] : x) sparse_add(into, i, scale * c);
}

template <class K>
Vec<K> densify(const SparseVec<K>& s, std::size_t n) {
  Vec<K> v(n, K(0));
  for (const auto& [i, c] : s) {
    if (i >= n) throw InvariantError("sparse index out of range");
    v[i] = c;
  }
  return v;
}

template <class K>
SparseVec<K> sparsify(const Vec<K>& v) {
  SparseVec<K> s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) s.emplace(i, v[i]);
  return s;
}

template <class K>
bool is_zero_vec(const Vec<K>& v) {
  return std::all_of(v.begin(), v.end(), [](const K& x) { return x.is_zero(); });
}

/// Dense row-major matrix.
template <class K>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, K(0)) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<K> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) throw ValidationError("matrix entry count does not match shape");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = K(1);
    return m;
  }

  /// Builds a matrix whose columns are the given vectors (all of length rows).
  static Matrix from_columns(std::size_t rows, const std::vector<Vec<K>>& columns) {
    Matrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) throw ValidationError("column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  K& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const K& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec<K> column(std::size_t j) const {
    Vec<K> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }
  std::vector<Vec<K>> columns() const {
    std::vector<Vec<K>> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }
  Vec<K> row(std::size_t i) const { return Vec<K>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }

  bool is_zero() const { return is_zero_vec(data_); }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Columns of *this followed by columns of other.
  Matrix hstack(const Matrix& other) const {
    if (other.rows_ != rows_) throw ValidationError("hstack row mismatch");
    Matrix m(rows_, cols_ + other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
      for (std::size_t j = 0; j < other.cols_; ++j) m(i, cols_ + j) = other(i, j);
    }
    return m;
  }

  Matrix select_columns(const std::vector<std::size_t>& idx) const {
    Matrix m(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
    return m;
  }
  Matrix select_rows(const std::vector<std::size_t>& idx) const {
    Matrix m(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(idx[i], j);
    return m;
  }

  Vec<K> operator*(const Vec<K>& v) const {
    if (v.size() != cols_) throw ValidationError("matrix-vector dimension mismatch");
    Vec<K> out(rows_, K(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!(*this)(i, j).is_zero() && !v[j].is_zero()) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw ValidationError("matrix product dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const K& aik = a(i, k);
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!b(k, j).is_zero()) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    a.same_shape(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    a.same_shape(b);
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }
  friend Matrix operator*(const K& s, Matrix a) {
    for (auto& x : a.data_) x *= s;
    return a;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  void same_shape(const Matrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw ValidationError("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<K> data_;
};

template <class K>
struct RrefResult {
  Matrix<K> reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank() const { return pivots.size(); }
};

/// Reduced row echelon form.  The pivot in each column is the first nonzero
/// entry at or below the current row, so the result is deterministic.
template <class K>
RrefResult<K> rref(Matrix<K> m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    K inv = m(row, col).inverse();
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      K f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        if (!m(row, j).is_zero()) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

template <class K>
std::size_t rank(const Matrix<K>& m) {
  return rref(m).rank();
}

/// Basis of the null space, one vector per column; free variables in
/// increasing order.
template <class K>
Matrix<K> kernel_basis(const Matrix<K>& m) {
  auto [r, pivots] = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vec<K>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec<K> v(m.cols(), K(0));
    v[free] = K(1);
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, free);
    basis.push_back(std::move(v));
  }
  return Matrix<K>::from_columns(m.cols(), basis);
}

/// Some x with m x = v, or nullopt when the system is inconsistent.
template <class K>
std::optional<Vec<K>> solve(const Matrix<K>& m, const Vec<K>& v) {
  if (v.size() != m.rows()) throw ValidationError("solve: right-hand side has wrong dimension");
  Matrix<K> aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = v[i];
  }
  auto [r, pivots] = rref(std::move(aug));
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  Vec<K> x(m.cols(), K(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = r(i, m.cols());
  return x;
}

/// Indices of a maximal linearly independent subfamily of the columns,
/// chosen greedily left to right.
template <class K>
std::vector<std::size_t> independent_columns(const Matrix<K>& m) {
  return rref(m).pivots;
}

/// Columns spanning the column space (greedy selection).
template <class K>
Matrix<K> column_space(const Matrix<K>& m) {
  return m.select_columns(independent_columns(m));
}

/// Inverse of a square matrix; throws PropertyError when singular.
template <class K>
Matrix<K> inverse(const Matrix<K>& m) {
  if (m.rows() != m.cols()) throw ValidationError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  auto [r, pivots] = rref(m.hstack(Matrix<K>::identity(n)));
  if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1)) throw PropertyError("matrix is singular");
  Matrix<K> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = r(i, n + j);
  return inv;
}

/// True iff v lies in the column span of m.
template <class K>
bool in_column_span(const Matrix<K>& m, const Vec<K>& v) {
  return solve(m, v).has_value();
}

}  // namespace finmodel
