#pragma once
// JSON form of DG modules and generation certificates.
//
//   {"field": ..., "algebra": <algebra description>,
//    "module": {"basis": [...], "d": [{"in": "m", "out": {...}}],
//               "action": [{"in": ["m", "r"], "out": {...}}]},
//    "bound": {"N": 2, "N1": 1, "N2": 2}, "window": [lo, hi],
//    "steps": [{"submodule": [{...}], "terms": [{"shift": 1, "idempotent": {...}, "generator": {...}}]}]}

#include <string>
#include <utility>
#include <vector>

#include "finmodel/complexes.hpp"
#include "finmodel/generation.hpp"
#include "finmodel/io.hpp"

namespace finmodel {

template <class K>
Json module_to_json(const DGModule<K>& m) {
  const auto& ms = m.space();
  const auto& rs = m.algebra().space();
  Json basis = Json::array();
  for (const auto& b : ms.basis()) basis.push_back(Json{{"name", b.name}, {"degree", b.degree}});
  Matrix<K> d = m.complex().d().full();
  Json dj = Json::array();
  for (std::size_t i = 0; i < ms.dim(); ++i) {
    SparseVec<K> col = sparsify(d.column(i));
    if (!col.empty()) dj.push_back(Json{{"in", ms.name(i)}, {"out", sparse_to_json(ms, col)}});
  }
  Json act = Json::array();
  for (const auto& [key, out] : m.action()) {
    if (key.second == m.algebra().unit() && out == SparseVec<K>{{key.first, K(1)}}) continue;
    act.push_back(Json{{"in", Json::array({ms.name(key.first), rs.name(key.second)})}, {"out", sparse_to_json(ms, out)}});
  }
  return Json{{"basis", std::move(basis)}, {"d", std::move(dj)}, {"action", std::move(act)}};
}

template <class K>
DGModule<K> module_from_json(const Json& j, const AInfinityAlgebra<K>& r) {
  const Json& basis = detail::member(j, "basis", "module");
  if (!basis.is_array()) throw ValidationError("module.basis: expected an array");
  std::vector<BasisElement> elems;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::string w = "module.basis[" + std::to_string(i) + "]";
    const Json& deg = detail::member(basis[i], "degree", w);
    if (!deg.is_number_integer()) throw ValidationError(w + ".degree: expected an integer");
    elems.push_back({detail::as_string(detail::member(basis[i], "name", w), w + ".name"), deg.get<int>()});
  }
  GradedSpace ms(elems);
  Matrix<K> d(ms.dim(), ms.dim());
  if (j.contains("d"))
    for (const auto& e : j.at("d")) {
      std::size_t i = ms.require(detail::as_string(detail::member(e, "in", "module.d"), "module.d.in"));
      for (const auto& [o, c] : sparse_from_json<K>(ms, detail::member(e, "out", "module.d"), "module.d.out")) d(o, i) = c;
    }
  CochainComplex<K> complex(ms, GradedLinearMap<K>::from_full(ms, ms, 1, d));
  typename DGModule<K>::ActionTable act;
  if (j.contains("action"))
    for (const auto& e : j.at("action")) {
      const Json& in = detail::member(e, "in", "module.action");
      if (!in.is_array() || in.size() != 2) throw ValidationError("module.action.in: expected [module name, algebra name]");
      std::size_t mi = ms.require(detail::as_string(in[0], "module.action.in[0]"));
      std::size_t ri = r.space().require(detail::as_string(in[1], "module.action.in[1]"));
      act[{mi, ri}] = sparse_from_json<K>(ms, detail::member(e, "out", "module.action"), "module.action.out");
    }
  return DGModule<K>(std::move(complex), r, std::move(act));
}

template <class K>
Json certificate_to_json(const GenerationCertificate<K>& cert, const std::string& field) {
  const auto& ms = cert.module.space();
  const auto& rs = cert.algebra().space();
  Json steps = Json::array();
  for (const auto& step : cert.steps) {
    Json sub = Json::array();
    for (const auto& v : step.submodule) sub.push_back(sparse_to_json(ms, sparsify(v)));
    Json terms = Json::array();
    for (const auto& t : step.terms)
      terms.push_back(Json{{"shift", t.shift},
                           {"idempotent", sparse_to_json(rs, sparsify(t.idempotent))},
                           {"generator", sparse_to_json(ms, sparsify(t.generator))}});
    steps.push_back(Json{{"submodule", std::move(sub)}, {"terms", std::move(terms)}});
  }
  Json j;
  j["field"] = normalize_field(field);
  j["algebra"] = to_json(describe_algebra(cert.algebra(), field));
  j["module"] = module_to_json(cert.module);
  j["bound"] = Json{{"N", cert.bound.N}, {"N1", cert.bound.N1}, {"N2", cert.bound.N2}};
  j["window"] = Json::array({cert.window_lo, cert.window_hi});
  j["steps"] = std::move(steps);
  return j;
}

/// Field tag of a certificate document.
inline std::string certificate_field(const Json& j) {
  const Json& f = detail::member(j, "field", "certificate");
  return normalize_field(f.is_number_integer() ? std::to_string(f.get<long long>()) : detail::as_string(f, "field"));
}

/// Reads a certificate.  For a prime field the caller holds the session.
template <class K>
GenerationCertificate<K> certificate_from_json(const Json& j) {
  auto desc = parse_description(detail::member(j, "algebra", "certificate"));
  auto r = build_algebra<K>(desc);
  auto m = module_from_json<K>(detail::member(j, "module", "certificate"), r);
  const Json& b = detail::member(j, "bound", "certificate");
  auto count = [&](const char* key) {
    const Json& v = detail::member(b, key, "bound");
    if (!v.is_number_unsigned() && !v.is_number_integer()) throw ValidationError(std::string("bound.") + key + ": expected an integer");
    long long x = v.get<long long>();
    if (x < 0) throw ValidationError(std::string("bound.") + key + ": negative");
    return static_cast<std::size_t>(x);
  };
  GenerationBound bound{count("N"), count("N1"), count("N2")};
  const Json& w = detail::member(j, "window", "certificate");
  if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer() || !w[1].is_number_integer())
    throw ValidationError("window: expected [lo, hi]");
  GenerationCertificate<K> cert{std::move(m), bound, w[0].get<int>(), w[1].get<int>(), {}};
  const auto& ms = cert.module.space();
  const auto& rs = cert.algebra().space();
  const Json& steps = detail::member(j, "steps", "certificate");
  if (!steps.is_array()) throw ValidationError("steps: expected an array");
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const std::string where = "steps[" + std::to_string(s) + "]";
    CertificateStep<K> step;
    for (const auto& v : detail::member(steps[s], "submodule", where))
      step.submodule.push_back(densify(sparse_from_json<K>(ms, v, where + ".submodule"), ms.dim()));
    for (const auto& t : detail::member(steps[s], "terms", where)) {
      const Json& sh = detail::member(t, "shift", where + ".terms");
      if (!sh.is_number_integer()) throw ValidationError(where + ".terms.shift: expected an integer");
      step.terms.push_back({sh.get<int>(),
                            densify(sparse_from_json<K>(rs, detail::member(t, "idempotent", where), where + ".idempotent"), rs.dim()),
                            densify(sparse_from_json<K>(ms, detail::member(t, "generator", where), where + ".generator"), ms.dim())});
    }
    cert.steps.push_back(std::move(step));
  }
  return cert;
}

}  // namespace finmodel
