#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace finmodel;
using Q = Rational;
using Dims = std::map<int, std::size_t>;

namespace {

AInfinityAlgebra<Q> from_text(const std::string& text) { return build_algebra<Q>(parse_description_text(text)); }

/// Copy of a with one m_k entry replaced.
AInfinityAlgebra<Q> perturbed(const AInfinityAlgebra<Q>& a, int k, const std::vector<std::string>& in,
                              const std::map<std::string, long>& out) {
  auto ops = a.ops();
  if (!ops.count(k)) ops.emplace(k, Operation<Q>(k));
  Tuple t;
  for (const auto& n : in) t.push_back(a.space().require(n));
  SparseVec<Q> v;
  for (const auto& [n, c] : out) v[a.space().require(n)] = Q(c);
  ops.at(k).set(t, v);
  return AInfinityAlgebra<Q>(a.space(), a.unit(), ops);
}

}  // namespace

TEST_CASE("from_dg on ordinary and graded algebras") {
  for (const auto& name : support::corpus()) {
    INFO(name);
    auto a = support::load(name);
    auto dg = from_dg(DGAlgebra<Q>(a));
    CHECK(dg == a);
    CHECK(validate(dg, 4).passed());
  }
  auto k = support::load("k");
  CHECK(k.dim() == 1);
  CHECK(k.evaluate(Tuple{0, 0}) == SparseVec<Q>{{0, Q(1)}});

  auto dual = support::load("dual_numbers");
  auto eps = dual.space().require("eps");
  CHECK(dual.evaluate(Tuple{eps, eps}).empty());

  auto ext = support::load("exterior");
  auto x = ext.space().require("x");
  CHECK(ext.evaluate(Tuple{x, x}).empty());
  // Graded commutativity: x.1 = (-1)^{|x||1|} 1.x.
  CHECK(ext.evaluate(Tuple{x, ext.unit()}) == ext.evaluate(Tuple{ext.unit(), x}));
  auto ext2 = support::load("exterior2");
  auto x2 = ext2.space().require("x"), y2 = ext2.space().require("y");
  SparseVec<Q> yx = ext2.evaluate(Tuple{y2, x2});
  for (auto& [i, c] : yx) c = -c;
  CHECK(ext2.evaluate(Tuple{x2, y2}) == yx);
}

TEST_CASE("Stasheff mutations fail at the predicted arity") {
  SECTION("d^2 != 0 fails at l = 1") {
    auto a = from_text(R"({"field":"Q","basis":[{"name":"a","degree":-2},{"name":"b","degree":-1},
      {"name":"1","degree":0},{"name":"c","degree":0}],"unit":"1",
      "ops":{"1":[{"in":["a"],"out":{"b":"1"}},{"in":["b"],"out":{"c":"1"}}]}})");
    auto rep = validate(a, 3);
    CHECK_FALSE(rep.passed());
    CHECK(rep.failing_arity == 1);
    CHECK(rep.witness == std::vector<std::string>{"a"});
  }
  SECTION("Leibniz failure at l = 2") {
    auto m = support::load("massey_dga");
    auto bad = perturbed(m, 2, {"u", "z"}, {{"s", 1}, {"u", 1}});
    auto rep = validate(bad, 3);
    CHECK(rep.failing_arity == 2);
  }
  SECTION("non-associative product fails at l = 3") {
    auto t = support::load("truncated_poly");
    auto bad = perturbed(t, 2, {"t", "t2"}, {{"1", 1}});
    auto rep = validate(bad, 4);
    CHECK(rep.failing_arity == 3);
    CHECK(rep.witness == std::vector<std::string>{"t", "t", "t"});
  }
  SECTION("doubling an idempotent action fails at l = 3") {
    auto u = support::load("upper_triangular");
    auto bad = perturbed(u, 2, {"e11", "e12"}, {{"e12", 2}});
    auto rep = validate(bad, 3);
    CHECK(rep.failing_arity == 3);
  }
  SECTION("unit violations") {
    auto e = support::load("exterior");
    auto bad = perturbed(e, 3, {"1", "1", "1"}, {{"x", 1}});
    auto rep = validate(bad, 2);
    CHECK(rep.stasheff_ok);
    CHECK_FALSE(rep.unit_ok);
  }
}

TEST_CASE("minimal models") {
  SECTION("d = 0 is formal") {
    for (const auto& name : {"k", "dual_numbers", "exterior", "upper_triangular", "exterior2"}) {
      INFO(name);
      auto b = support::load(name);
      auto mm = minimal_model(DGAlgebra<Q>(b));
      CHECK(mm.algebra.space().dims() == b.space().dims());
      CHECK(mm.algebra.max_arity() <= 2);
      CHECK(validate(mm.algebra, 4).passed());
    }
  }
  SECTION("an acyclic extension of k") {
    auto b = from_text(R"({"field":"Q","basis":[{"name":"u","degree":-1},{"name":"1","degree":0},
      {"name":"v","degree":0}],"unit":"1","ops":{"1":[{"in":["u"],"out":{"v":"1"}}],
      "2":[{"in":["v","v"],"out":{"v":"1"}},{"in":["u","v"],"out":{"u":"1"}},{"in":["v","u"],"out":{"u":"1"}}]}})");
    REQUIRE(validate(b, 3).passed());
    auto mm = minimal_model(DGAlgebra<Q>(b));
    CHECK(mm.algebra.space().dims() == Dims{{0, 1}});
    CHECK(validate(mm.algebra, 4).passed());
  }
  SECTION("the Massey DGA carries a nonzero m_3") {
    auto mm = minimal_model(DGAlgebra<Q>(support::load("massey_dga")));
    CHECK(mm.algebra.space().dims() == Dims{{-1, 1}, {0, 4}});
    REQUIRE(mm.algebra.op(3) != nullptr);
    CHECK_FALSE(mm.algebra.op(3)->empty());
    CHECK(validate(mm.algebra, 5).passed());
    CHECK(mm.max_arity == connective_arity_bound(-1));
  }
}

TEST_CASE("predicates") {
  auto pk = predicates(support::load("k"));
  CHECK(pk.connective);
  CHECK(pk.proper);
  CHECK(pk.minimal);
  CHECK(pk.interval == std::make_pair(0, 0));

  auto pe = predicates(support::load("exterior"));
  CHECK(pe.connective);
  CHECK(pe.interval == std::make_pair(-1, 0));

  auto py = predicates(from_text(R"({"field":"Q","basis":[{"name":"1","degree":0},{"name":"y","degree":1}],
    "unit":"1","ops":{}})"));
  CHECK_FALSE(py.connective);
  CHECK_FALSE(py.end_locally_finite);
  CHECK(py.end_bounded_below);

  auto pm = predicates(support::load("massey_dga"));
  CHECK_FALSE(pm.minimal);
  CHECK(pm.cohomology_dims == Dims{{-1, 1}, {0, 4}});
}

TEST_CASE("DG algebra construction rejects bad input") {
  auto t = support::load("truncated_poly");
  auto ops = t.ops();
  ops.at(2).set({t.space().require("t"), t.space().require("t2")}, {{t.unit(), Q(1)}});
  CHECK_THROWS_AS(DGAlgebra<Q>(AInfinityAlgebra<Q>(t.space(), t.unit(), ops)), PropertyError);
  auto mm = minimal_model(DGAlgebra<Q>(support::load("massey_dga")));
  CHECK_THROWS_AS(DGAlgebra<Q>(mm.algebra), PropertyError);
}

TEST_CASE("minimal model properties on the corpus") {
  for (const auto& name : support::corpus()) {
    INFO(name);
    auto b = support::load(name);
    auto mm = minimal_model(DGAlgebra<Q>(b));
    const auto& a = mm.algebra;
    const int lo = a.space().interval()->first;
    CHECK(validate(a, (2 - lo) + 1).passed());
    CHECK(a.space().dims() == cohomology(underlying_complex(b)).dims());
    for (const auto& [k, op] : a.ops()) CHECK(k <= 2 - lo);
    // m_2 against products of representatives.
    Matrix<Q> f1 = mm.f1.full(), pi = mm.contraction.pi.full();
    for (std::size_t x = 0; x < a.dim(); ++x)
      for (std::size_t y = 0; y < a.dim(); ++y) {
        std::vector<SparseVec<Q>> reps{sparsify(f1.column(x)), sparsify(f1.column(y))};
        Vec<Q> prod = pi * densify(b.evaluate(reps), b.dim());
        CHECK(sparsify(prod) == a.evaluate(Tuple{x, y}));
      }
  }
}
