#include <catch_amalgamated.hpp>

#include <random>

#include "finmodel/exactlin.hpp"

using namespace finmodel;
using Q = Rational;

namespace {

template <class K>
Matrix<K> mat(std::initializer_list<std::initializer_list<long>> rows) {
  std::size_t r = rows.size(), c = rows.begin()->size();
  Matrix<K> m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (long v : row) m(i, j++) = K(v);
    ++i;
  }
  return m;
}

template <class K>
Vec<K> vec(std::initializer_list<long> xs) {
  Vec<K> v;
  for (long x : xs) v.push_back(K(x));
  return v;
}

}  // namespace

TEST_CASE("rational literals parse exactly") {
  CHECK(Q::parse("3/4") * Q(4) == Q(3));
  CHECK(Q::parse("-6/8") == Q::parse("-3/4"));
  CHECK(Q::parse("+2") == Q(2));
  CHECK_THROWS_AS(Q::parse("1.5"), ValidationError);
  CHECK_THROWS_AS(Q::parse("1/0"), ValidationError);
  CHECK_THROWS_AS(Q::parse("3/-4"), ValidationError);
  CHECK_THROWS_AS(Q(0).inverse(), PropertyError);
}

TEST_CASE("prime field sessions") {
  CHECK_THROWS_AS(PrimeField::Session(4), ValidationError);
  PrimeField::Session s(7);
  CHECK(ModP(3) * ModP(5) == ModP(1));
  CHECK(ModP(3).inverse() == ModP(5));
  CHECK(ModP::parse("1/3") == ModP(5));
  CHECK(ModP(-1) == ModP(6));
  CHECK_THROWS(ModP::parse("2/7"));
  {
    PrimeField::Session inner(5);
    CHECK(FieldTraits<ModP>::characteristic() == 5);
    ModP five_side(2);
    CHECK_THROWS_AS(five_side + ModP(2, 7), ValidationError);
  }
  CHECK(FieldTraits<ModP>::characteristic() == 7);
}

TEST_CASE("rref examples") {
  auto id = Matrix<Q>::identity(3);
  auto r = rref(id);
  CHECK(r.reduced == id);
  CHECK(r.pivots == std::vector<std::size_t>{0, 1, 2});

  auto r2 = rref(mat<Q>({{2, 4}, {1, 2}}));
  CHECK(r2.reduced == mat<Q>({{1, 2}, {0, 0}}));
  CHECK(r2.pivots == std::vector<std::size_t>{0});

  PrimeField::Session f2(2);
  auto r3 = rref(mat<ModP>({{1, 1}}));
  CHECK(r3.reduced == mat<ModP>({{1, 1}}));
  CHECK(r3.pivots == std::vector<std::size_t>{0});
}

TEST_CASE("kernel examples") {
  CHECK(kernel_basis(Matrix<Q>::identity(3)).cols() == 0);
  auto k0 = kernel_basis(Matrix<Q>(2, 2));
  CHECK(k0 == Matrix<Q>::identity(2));
  PrimeField::Session f2(2);
  auto k = kernel_basis(mat<ModP>({{1, 1}}));
  REQUIRE(k.cols() == 1);
  CHECK(k.column(0) == vec<ModP>({1, 1}));
}

TEST_CASE("solve examples") {
  auto v = vec<Q>({3, -2, 5});
  CHECK(solve(Matrix<Q>::identity(3), v) == v);
  CHECK_FALSE(solve(mat<Q>({{1}, {0}}), vec<Q>({0, 1})).has_value());
  auto m = mat<Q>({{1, 2}, {0, 0}});
  auto x = solve(m, vec<Q>({3, 0}));
  REQUIRE(x.has_value());
  CHECK((*x)[0] + Q(2) * (*x)[1] == Q(3));
  CHECK(m * *x == vec<Q>({3, 0}));
}

TEST_CASE("rank-nullity and inverse on a fixed family") {
  // Hilbert-like integer matrices with known ranks.
  for (long n = 1; n <= 5; ++n) {
    Matrix<Q> h(n, n);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) h(i, j) = Q(1) / Q(i + j + 1);
    CHECK(rank(h) == static_cast<std::size_t>(n));
    CHECK(h * inverse(h) == Matrix<Q>::identity(n));
    Matrix<Q> outer(n, n + 1);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j <= n; ++j) outer(i, j) = Q((i + 1) * (j + 2));
    CHECK(rank(outer) == 1);
    auto k = kernel_basis(outer);
    CHECK(k.cols() == static_cast<std::size_t>(n));
    CHECK((outer * k).is_zero());
  }
  CHECK_THROWS(inverse(mat<Q>({{1, 2}, {2, 4}})));
}

TEST_CASE("rank agrees across fields where it should") {
  auto m = mat<Q>({{1, 1}, {1, -1}});
  CHECK(rank(m) == 2);
  PrimeField::Session f2(2);
  CHECK(rank(mat<ModP>({{1, 1}, {1, -1}})) == 1);
}

TEST_CASE("sparse helpers") {
  SparseVec<Q> s;
  sparse_add(s, 2, Q(3));
  sparse_add(s, 2, Q(-3));
  CHECK(s.empty());
  sparse_axpy(s, Q(2), SparseVec<Q>{{1, Q(1)}, {3, Q(4)}});
  CHECK(densify(s, 4) == vec<Q>({0, 2, 0, 8}));
  CHECK(sparsify(densify(s, 4)) == s);
  CHECK(in_column_span(mat<Q>({{1, 0}, {0, 0}, {0, 1}}), vec<Q>({5, 0, 7})));
  CHECK_FALSE(in_column_span(mat<Q>({{1, 0}, {0, 0}, {0, 1}}), vec<Q>({5, 1, 7})));
}

namespace {

template <class K>
Matrix<K> random_matrix(std::mt19937& rng, std::size_t r, std::size_t c) {
  std::uniform_int_distribution<long> coeff(-3, 3), sparse(0, 2);
  Matrix<K> m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (sparse(rng) != 0) m(i, j) = K(coeff(rng));
  return m;
}

template <class K>
void random_properties(std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> size(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = random_matrix<K>(rng, size(rng), size(rng));
    auto k = kernel_basis(m);
    CHECK((m * k).is_zero());
    CHECK(rref(m).rank() + k.cols() == m.cols());
    CHECK(rank(k) == k.cols());
    Vec<K> x0(m.cols());
    for (auto& v : x0) v = K(static_cast<long>(rng() % 7) - 3);
    auto v = m * x0;
    auto x = solve(m, v);
    REQUIRE(x.has_value());
    CHECK(m * *x == v);
    Vec<K> w(m.rows());
    for (auto& e : w) e = K(static_cast<long>(rng() % 7) - 3);
    if (auto y = solve(m, w)) CHECK(m * *y == w);
    else CHECK_FALSE(in_column_span(m, w));
  }
}

}  // namespace

TEST_CASE("random matrices over Q") { random_properties<Q>(12345); }

TEST_CASE("random matrices over F_p") {
  for (std::uint32_t p : {2u, 3u, 5u, 101u}) {
    PrimeField::Session s(p);
    random_properties<ModP>(p);
  }
}
