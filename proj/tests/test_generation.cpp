#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace finmodel;
using Q = Rational;
using Dims = std::map<int, std::size_t>;

namespace {

template <class K>
OrdinaryAlgebra<K> h0(const std::string& name) {
  return h0_algebra(support::minimal<K>(name));
}

template <class K>
Vec<K> coords(const OrdinaryAlgebra<K>& l, const std::string& name) {
  for (std::size_t i = 0; i < l.dim(); ++i)
    if (l.name(i) == name) return l.basis_vector(i);
  FAIL("no basis element " << name);
  return {};
}

template <class K>
RightModule<K> regular_right(const OrdinaryAlgebra<K>& l) {
  RightModule<K> m{l.dim(), {}};
  for (std::size_t j = 0; j < l.dim(); ++j) m.action.push_back(l.right(l.basis_vector(j)));
  return m;
}

template <class K>
GenerationCertificate<K> regular_certificate(const std::string& name) {
  return cone_certificate(support::regular_module(support::minimal<K>(name)));
}

}  // namespace

TEST_CASE("degree-zero algebras") {
  CHECK(h0<Q>("k").dim() == 1);
  CHECK(h0<Q>("exterior").dim() == 1);
  auto d = h0<Q>("dual_numbers");
  REQUIRE(d.dim() == 2);
  auto eps = coords(d, "eps");
  CHECK(is_zero_vec(d.multiply(eps, eps)));
  CHECK(h0<Q>("massey_dga").dim() == 4);
  auto r = h0_of(support::load("massey_dga"));
  CHECK(r.algebra.dim() == 4);
  CHECK_THROWS_AS(h0_algebra(support::load("massey_dga")), PropertyError);
}

TEST_CASE("Jacobson radical examples over Q") {
  CHECK(jacobson_radical(h0<Q>("k_times_k")).dim() == 0);
  CHECK(jacobson_radical(h0<Q>("k")).dim() == 0);

  auto d = h0<Q>("dual_numbers");
  auto jd = jacobson_radical(d);
  REQUIRE(jd.dim() == 1);
  CHECK(in_column_span(jd.basis, coords(d, "eps")));
  CHECK(jd.nilpotency_index == 2);

  auto t = h0<Q>("upper_triangular");
  auto jt = jacobson_radical(t);
  REQUIRE(jt.dim() == 1);
  CHECK(in_column_span(jt.basis, coords(t, "e12")));
  CHECK(jt.nilpotency_index == 2);

  auto p = h0<Q>("truncated_poly");
  auto jp = jacobson_radical(p);
  CHECK(jp.dim() == 2);
  CHECK(jp.nilpotency_index == 3);
  CHECK_FALSE(jp.brute_force);
}

TEST_CASE("Jacobson radical in small characteristic") {
  PrimeField::Session f2(2);
  auto p = h0<ModP>("truncated_poly");
  auto jp = jacobson_radical(p);
  CHECK(jp.brute_force);
  CHECK(jp.dim() == 2);
  auto kk = h0<ModP>("k_times_k");
  auto jk = jacobson_radical(kk);
  CHECK(jk.brute_force);
  CHECK(jk.dim() == 0);
  // k[x]/(x^2 - 1) = k[x]/(x+1)^2 in characteristic 2.
  auto sq = build_algebra<ModP>(parse_description_text(R"({"field":"2","basis":[{"name":"1","degree":0},
    {"name":"x","degree":0}],"unit":"1","ops":{"2":[{"in":["x","x"],"out":{"1":"1"}}]}})"));
  auto js = jacobson_radical(h0_algebra(sq));
  CHECK(js.dim() == 1);
}

TEST_CASE("radical layers") {
  SECTION("semisimple module: a single layer") {
    auto kk = h0<Q>("k_times_k");
    auto layers = radical_layers(regular_right(kk), kk, jacobson_radical(kk));
    REQUIRE(layers.size() == 1);
    CHECK(layers[0].basis.cols() == 2);
  }
  SECTION("dual numbers over themselves: k then k") {
    auto d = h0<Q>("dual_numbers");
    auto j = jacobson_radical(d);
    auto layers = radical_layers(regular_right(d), d, j);
    REQUIRE(layers.size() == 2);
    for (const auto& layer : layers) {
      CHECK(layer.basis.cols() == 1);
      for (const auto& x : j.basis.columns()) {
        Matrix<Q> act(layer.basis.cols(), layer.basis.cols());
        for (std::size_t i = 0; i < d.dim(); ++i)
          if (!x[i].is_zero()) act = act + x[i] * layer.action[i];
        CHECK(act.is_zero());
      }
    }
  }
  SECTION("zero module") {
    auto d = h0<Q>("dual_numbers");
    RightModule<Q> zero{0, std::vector<Matrix<Q>>(d.dim(), Matrix<Q>(0, 0))};
    CHECK(radical_layers(zero, d, jacobson_radical(d)).empty());
  }
  SECTION("layer dimensions sum to dim H(A)") {
    for (const auto& name : support::corpus()) {
      INFO(name);
      auto a = support::minimal(name);
      auto l = h0_algebra(a);
      auto layers = radical_layers(right_module_over_h0(a), l, jacobson_radical(l));
      std::size_t total = 0;
      for (const auto& layer : layers) total += layer.basis.cols();
      CHECK(total == a.dim());
    }
  }
}

TEST_CASE("idempotents and quotients") {
  auto kk = h0<Q>("k_times_k");
  auto es = primitive_idempotents(kk);
  REQUIRE(es.size() == 2);
  for (const auto& e : es) CHECK(kk.multiply(e, e) == e);
  CHECK(is_zero_vec(kk.multiply(es[0], es[1])));
  Vec<Q> sum = es[0];
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += es[1][i];
  CHECK(sum == kk.unit_vector());

  auto t = h0<Q>("upper_triangular");
  auto s = quotient(t, jacobson_radical(t).basis);
  CHECK(s.algebra.dim() == 2);
  CHECK(primitive_idempotents(s.algebra).size() == 2);
  auto d = h0<Q>("dual_numbers");
  CHECK(quotient(d, jacobson_radical(d).basis).algebra.dim() == 1);
}

TEST_CASE("generation bounds") {
  CHECK(generation_bound(support::load("k")) == GenerationBound{1, 1, 1});
  CHECK(generation_bound(support::load("dual_numbers")) == GenerationBound{1, 2, 2});
  CHECK(generation_bound(support::load("exterior")) == GenerationBound{2, 1, 2});
  CHECK(generation_bound(support::load("upper_triangular")) == GenerationBound{1, 2, 2});
  CHECK(generation_bound(support::load("truncated_poly")) == GenerationBound{1, 3, 3});
  CHECK(generation_bound(support::minimal("massey_dga")) == GenerationBound{2, 2, 4});
  PrimeField::Session f5(5);
  CHECK(generation_bound(support::load<ModP>("dual_numbers")) == GenerationBound{1, 2, 2});
}

TEST_CASE("cone certificates") {
  SECTION("semisimple in one degree: length 1") {
    auto c = regular_certificate<Q>("k_times_k");
    CHECK(c.length() == 1);
    CHECK(verify_certificate(c).ok);
    auto r = support::load("dual_numbers");
    DGModule<Q> simple(CochainComplex<Q>::trivial(GradedSpace({{"m", 0}})), r, {});
    auto cs = cone_certificate(simple);
    CHECK(cs.length() == 1);
    CHECK(verify_certificate(cs).ok);
  }
  SECTION("dual numbers: 0 -> (eps) -> M") {
    auto c = regular_certificate<Q>("dual_numbers");
    REQUIRE(c.length() == 2);
    CHECK(c.steps[0].submodule.size() == 1);
    CHECK(c.steps[0].terms.size() == 1);
    CHECK(c.steps[1].terms.size() == 1);
    CHECK(c.steps[0].terms[0].shift == 0);
    CHECK(verify_certificate(c).ok);
  }
  SECTION("Lambda(x): third terms k and a shift of k") {
    auto c = regular_certificate<Q>("exterior");
    CHECK(c.length() <= 2);
    std::set<int> shifts;
    for (const auto& st : c.steps)
      for (const auto& t : st.terms) shifts.insert(t.shift);
    CHECK(shifts == std::set<int>{0, 1});
    CHECK(verify_certificate(c).ok);
  }
  SECTION("all corpus modules, over Q and F5") {
    for (const auto& name : support::corpus()) {
      INFO(name);
      auto c = regular_certificate<Q>(name);
      auto rep = verify_certificate(c);
      INFO(rep.message);
      CHECK(rep.ok);
      CHECK(c.length() <= c.bound.N2);
      PrimeField::Session f5(5);
      auto c5 = regular_certificate<ModP>(name);
      CHECK(verify_certificate(c5).ok);
    }
  }
  SECTION("acyclic module is rejected") {
    auto r = support::load("k");
    GradedSpace s({{"a", -1}, {"b", 0}});
    Matrix<Q> d(2, 2);
    d(1, 0) = Q(1);
    DGModule<Q> acyclic(CochainComplex<Q>(s, GradedLinearMap<Q>::from_full(s, s, 1, d)), r, {});
    CHECK_THROWS_AS(cone_certificate(acyclic), PropertyError);
  }
}

TEST_CASE("certificate mutations are rejected") {
  auto base = regular_certificate<Q>("exterior");
  REQUIRE(verify_certificate(base).ok);

  SECTION("wrong shift inside the window") {
    auto c = base;
    auto& t = c.steps[0].terms[0];
    t.shift = t.shift == 0 ? 1 : 0;
    CHECK_FALSE(verify_certificate(c).ok);
  }
  SECTION("shift outside the window") {
    auto c = base;
    c.steps[1].terms[0].shift = c.window_hi + 1;
    auto rep = verify_certificate(c);
    CHECK_FALSE(rep.ok);
    CHECK(rep.failing_step == 1);
  }
  SECTION("shrunken window") {
    auto c = base;
    c.window_hi = c.window_lo;
    CHECK_FALSE(verify_certificate(c).ok);
  }
  SECTION("wrong third term: generator replaced") {
    auto c = base;
    auto& g = c.steps[1].terms[0].generator;
    for (auto& v : g) v = Q(0);
    CHECK_FALSE(verify_certificate(c).ok);
  }
  SECTION("wrong third term: idempotent replaced by zero") {
    auto c = base;
    for (auto& v : c.steps[0].terms[0].idempotent) v = Q(0);
    CHECK_FALSE(verify_certificate(c).ok);
  }
  SECTION("extra summand") {
    auto c = base;
    c.steps[0].terms.push_back(c.steps[0].terms[0]);
    CHECK_FALSE(verify_certificate(c).ok);
  }
  SECTION("missing step") {
    auto c = base;
    c.steps.erase(c.steps.begin());
    CHECK_FALSE(verify_certificate(c).ok);
  }
  SECTION("submodule not closed under d") {
    auto c = cone_certificate(DGModule<Q>::regular(support::load("massey_dga")));
    REQUIRE(verify_certificate(c).ok);
    const auto& ms = c.module.space();
    Vec<Q> u(ms.dim(), Q(0));
    u[ms.require("u")] = Q(1);
    c.steps[0].submodule = {u};
    CHECK_FALSE(verify_certificate(c).ok);
  }
  SECTION("length above the bound") {
    auto c = regular_certificate<Q>("dual_numbers");
    c.bound.N2 = 1;
    CHECK_FALSE(verify_certificate(c).ok);
  }
}

TEST_CASE("radical layers are killed by J on the corpus") {
  for (const auto& name : support::corpus()) {
    INFO(name);
    auto a = support::minimal(name);
    auto l = h0_algebra(a);
    auto j = jacobson_radical(l);
    for (const auto& layer : radical_layers(right_module_over_h0(a), l, j))
      for (const auto& x : j.basis.columns()) {
        Matrix<Q> act(layer.basis.cols(), layer.basis.cols());
        for (std::size_t i = 0; i < l.dim(); ++i)
          if (!x[i].is_zero()) act = act + x[i] * layer.action[i];
        CHECK(act.is_zero());
      }
  }
}
