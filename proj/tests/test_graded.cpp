#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "finmodel/graded.hpp"

using namespace finmodel;
using Q = Rational;
using Dims = std::map<int, std::size_t>;

TEST_CASE("graded spaces") {
  GradedSpace v({{"b", 0}, {"a", -1}, {"c", 0}});
  CHECK(v.dims() == Dims{{-1, 1}, {0, 2}});
  CHECK(v.name(0) == "a");
  CHECK(v.offset(0) == 1);
  CHECK(v.interval() == std::make_pair(-1, 0));
  CHECK_THROWS_AS(GradedSpace({{"a", 0}, {"a", 1}}), ValidationError);
  CHECK_THROWS_AS(v.require("zz"), ValidationError);
  CHECK_FALSE(GradedSpace(std::vector<BasisElement>{}).interval().has_value());
}

TEST_CASE("shift") {
  CHECK(shift(GradedSpace::from_dims({{0, 1}}), 1).dims() == Dims{{-1, 1}});
  CHECK(shift(GradedSpace::from_dims({{-1, 1}, {0, 2}}), -2).dims() == Dims{{1, 1}, {2, 2}});
  auto v = GradedSpace::from_dims({{-3, 2}, {1, 1}});
  CHECK(shift(v, 0).dims() == v.dims());
}

TEST_CASE("tensor") {
  auto v = GradedSpace::from_dims({{-1, 1}, {0, 1}});
  CHECK(tensor(v, v).dims() == Dims{{-2, 1}, {-1, 2}, {0, 1}});
  auto unit = GradedSpace::from_dims({{0, 1}});
  auto w = GradedSpace::from_dims({{-2, 3}, {0, 1}, {4, 2}});
  CHECK(tensor(w, unit).dims() == w.dims());
  // m-fold powers of a space concentrated in [a,b] live in [ma, mb].
  auto ab = GradedSpace::from_dims({{-2, 1}, {-1, 2}, {1, 1}});
  GradedSpace power = ab;
  for (int m = 2; m <= 4; ++m) {
    power = tensor(power, ab);
    CHECK(power.interval() == std::make_pair(-2 * m, m));
    CHECK(power.dim() == static_cast<std::size_t>(std::pow(4, m)));
  }
}

TEST_CASE("koszul signs") {
  auto v = GradedSpace::from_dims({{0, 1}, {1, 1}, {2, 1}}, "v");
  auto g = GradedLinearMap<Q>::from_full(v, v, 1, [] {
    Matrix<Q> m(3, 3);
    m(1, 0) = Q(1);
    m(2, 1) = Q(1);
    return m;
  }());
  auto id = GradedLinearMap<Q>::identity(v);
  Vec<Q> x1{Q(0), Q(1), Q(0)};  // degree 1
  Vec<Q> y0{Q(1), Q(0), Q(0)};  // degree 0

  SECTION("degree-zero maps give no sign") {
    std::vector<GradedLinearMap<Q>> maps{id, id};
    std::vector<Vec<Q>> args{x1, x1};
    auto out = koszul_apply<Q>(maps, args);
    CHECK(out == TensorElement<Q>{{{1, 1}, Q(1)}});
  }
  SECTION("(id (x) g) past an odd element") {
    std::vector<GradedLinearMap<Q>> maps{id, g};
    std::vector<Vec<Q>> args{x1, y0};
    CHECK(koszul_apply<Q>(maps, args) == TensorElement<Q>{{{1, 1}, Q(-1)}});
  }
  SECTION("(g (x) id) passes nothing") {
    std::vector<GradedLinearMap<Q>> maps{g, id};
    for (const auto& y : {x1, y0}) {
      std::vector<Vec<Q>> args{x1, y};
      auto out = koszul_apply<Q>(maps, args);
      REQUIRE(out.size() == 1);
      CHECK(out.begin()->second == Q(1));
    }
  }
  CHECK(koszul_sign(std::vector<int>{1, 1}, std::vector<int>{1, 0}) == -1);
  CHECK(koszul_sign(std::vector<int>{1, 1, 1}, std::vector<int>{1, 1, 0}) == -1);
  CHECK(koszul_sign(std::vector<int>{0, 1, 1}, std::vector<int>{1, 0, 1}) == 1);
}

TEST_CASE("homogeneity") {
  auto v = GradedSpace::from_dims({{0, 1}, {1, 1}});
  CHECK_FALSE(homogeneous_degree(v, Vec<Q>{Q(0), Q(0)}).has_value());
  CHECK(homogeneous_degree(v, Vec<Q>{Q(0), Q(2)}) == 1);
  CHECK_THROWS_AS(homogeneous_degree(v, Vec<Q>{Q(1), Q(2)}), ValidationError);
}

TEST_CASE("graded maps compose blockwise") {
  auto v = GradedSpace::from_dims({{0, 2}, {1, 1}});
  Matrix<Q> d(3, 3);
  d(2, 0) = Q(1);
  d(2, 1) = Q(-1);
  auto f = GradedLinearMap<Q>::from_full(v, v, 1, d);
  CHECK(f.compose(f).is_zero());
  CHECK(f.block(0).rows() == 1);
  Matrix<Q> bad(3, 3);
  bad(0, 0) = Q(1);
  CHECK_THROWS_AS(GradedLinearMap<Q>::from_full(v, v, 1, bad), ValidationError);
}

namespace {

/// Applies maps factorwise to every term of a tensor element.
TensorElement<Q> apply_all(const std::vector<GradedLinearMap<Q>>& maps, const TensorElement<Q>& t) {
  TensorElement<Q> out;
  for (const auto& [idx, c] : t) {
    std::vector<Vec<Q>> args;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      Vec<Q> e(maps[j].source().dim(), Q(0));
      e[idx[j]] = Q(1);
      args.push_back(e);
    }
    for (const auto& [k, v] : koszul_apply<Q>(maps, args)) {
      out[k] += c * v;
      if (out[k].is_zero()) out.erase(k);
    }
  }
  return out;
}

GradedLinearMap<Q> random_map(std::mt19937& rng, const GradedSpace& v, int degree) {
  Matrix<Q> m(v.dim(), v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i)
    for (std::size_t j = 0; j < v.dim(); ++j)
      if (v.degree(i) == v.degree(j) + degree) m(i, j) = Q(static_cast<long>(rng() % 5) - 2);
  return GradedLinearMap<Q>::from_full(v, v, degree, m);
}

}  // namespace

TEST_CASE("Koszul interchange on all basis tensors") {
  std::mt19937 rng(7);
  auto v = GradedSpace::from_dims({{-1, 2}, {0, 1}, {1, 2}});
  auto id = GradedLinearMap<Q>::identity(v);
  for (int df : {-1, 0, 1, 2})
    for (int dg : {-1, 0, 1, 2}) {
      auto f = random_map(rng, v, df);
      auto g = random_map(rng, v, dg);
      for (std::size_t i = 0; i < v.dim(); ++i)
        for (std::size_t j = 0; j < v.dim(); ++j) {
          TensorElement<Q> x{{{i, j}, Q(1)}};
          auto fg = apply_all({f, g}, x);
          auto f_then_g = apply_all({id, g}, apply_all({f, id}, x));
          auto g_then_f = apply_all({f, id}, apply_all({id, g}, x));
          CHECK(g_then_f == fg);
          TensorElement<Q> signed_fg = fg;
          if ((df * dg) % 2 != 0)
            for (auto& [k, c] : signed_fg) c = -c;
          CHECK(f_then_g == signed_fg);
        }
    }
}

TEST_CASE("tensor dimensions match basis enumeration") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::map<int, std::size_t> dv, dw;
    for (int n = -2; n <= 2; ++n) {
      dv[n] = rng() % 3;
      dw[n] = rng() % 3;
    }
    auto v = GradedSpace::from_dims(dv, "v"), w = GradedSpace::from_dims(dw, "w");
    std::map<int, std::size_t> count;
    for (std::size_t i = 0; i < v.dim(); ++i)
      for (std::size_t j = 0; j < w.dim(); ++j) ++count[v.degree(i) + w.degree(j)];
    CHECK(tensor(v, w).dims() == count);
    CHECK(tensor(v, w).dim() == v.dim() * w.dim());
  }
}
