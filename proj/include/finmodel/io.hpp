#pragma once
// JSON form of algebra descriptions.
//
//   {"field": "Q" | "<prime>",
//    "basis": [{"name": "1", "degree": 0}, ...],
//    "unit": "1",
//    "ops": {"2": [{"in": ["x", "y"], "out": {"z": "3/4"}}], ...}}
//
// Coefficients are strings so that they stay exact.  Unit products
// m_2(1, x) = x = m_2(x, 1) may be omitted; the serializer omits them.

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "finmodel/algebra.hpp"
#include "finmodel/errors.hpp"
#include "finmodel/exactlin.hpp"
#include "finmodel/graded.hpp"

namespace finmodel {

using Json = nlohmann::ordered_json;

struct OpEntry {
  std::vector<std::string> in;
  std::vector<std::pair<std::string, std::string>> out;  // basis name, coefficient
};

struct AlgebraDescription {
  std::string field = "Q";
  std::vector<BasisElement> basis;
  std::string unit;
  std::map<int, std::vector<OpEntry>> ops;

  /// 0 for Q, otherwise the prime.
  std::uint32_t characteristic() const { return field == "Q" ? 0 : static_cast<std::uint32_t>(std::stoul(field)); }
};

namespace detail {

inline const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ValidationError(where + ": expected a string");
  return j.get<std::string>();
}

inline std::string coefficient_text(const Json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ValidationError(where + ": coefficient must be a string such as \"3/4\" or an integer");
}

}  // namespace detail

/// Normalizes a field tag: "Q", a prime such as "5", or "F5".
inline std::string normalize_field(const std::string& tag) {
  if (tag == "Q" || tag == "q") return "Q";
  std::string digits = tag;
  if (!digits.empty() && (digits[0] == 'F' || digits[0] == 'f')) digits = digits.substr(1);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 10)
    throw ValidationError("field: '" + tag + "' is neither Q nor a prime");
  std::uint64_t p = std::stoull(digits);
  if (!PrimeField::is_prime(p)) throw ValidationError("field: '" + tag + "' is not prime");
  if (p >= (1u << 31)) throw ValidationError("field: prime " + digits + " is too large");
  return std::to_string(p);
}

inline AlgebraDescription parse_description(const Json& j) {
  if (!j.is_object()) throw ValidationError("description must be a JSON object");
  AlgebraDescription d;
  const Json& f = detail::member(j, "field", "description");
  d.field = normalize_field(f.is_number_integer() ? std::to_string(f.get<long long>()) : detail::as_string(f, "field"));

  const Json& basis = detail::member(j, "basis", "description");
  if (!basis.is_array() || basis.empty()) throw ValidationError("basis: expected a nonempty array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::string where = "basis[" + std::to_string(i) + "]";
    std::string name = detail::as_string(detail::member(basis[i], "name", where), where + ".name");
    const Json& deg = detail::member(basis[i], "degree", where);
    if (!deg.is_number_integer()) throw ValidationError(where + ".degree: expected an integer");
    if (name.empty()) throw ValidationError(where + ".name: empty name");
    if (!names.insert(name).second) throw ValidationError(where + ".name: duplicate basis name '" + name + "'");
    d.basis.push_back({name, deg.get<int>()});
  }
  d.unit = detail::as_string(detail::member(j, "unit", "description"), "unit");
  if (!names.count(d.unit)) throw ValidationError("unit: '" + d.unit + "' is not a basis name");

  if (j.contains("ops")) {
    const Json& ops = j.at("ops");
    if (!ops.is_object()) throw ValidationError("ops: expected an object keyed by arity");
    for (const auto& [key, list] : ops.items()) {
      const std::string where = "ops." + key;
      if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos || key.size() > 3)
        throw ValidationError(where + ": arity must be a positive integer");
      int k = std::stoi(key);
      if (k < 1) throw ValidationError(where + ": arity must be a positive integer");
      if (!list.is_array()) throw ValidationError(where + ": expected an array of entries");
      auto& entries = d.ops[k];
      for (std::size_t e = 0; e < list.size(); ++e) {
        const std::string w = where + "[" + std::to_string(e) + "]";
        OpEntry entry;
        const Json& in = detail::member(list[e], "in", w);
        if (!in.is_array() || static_cast<int>(in.size()) != k)
          throw ValidationError(w + ".in: expected " + std::to_string(k) + " basis names");
        for (std::size_t s = 0; s < in.size(); ++s) {
          std::string n = detail::as_string(in[s], w + ".in[" + std::to_string(s) + "]");
          if (!names.count(n)) throw ValidationError(w + ".in: unknown basis name '" + n + "'");
          entry.in.push_back(std::move(n));
        }
        const Json& out = detail::member(list[e], "out", w);
        if (!out.is_object()) throw ValidationError(w + ".out: expected an object name -> coefficient");
        for (const auto& [n, c] : out.items()) {
          if (!names.count(n)) throw ValidationError(w + ".out: unknown basis name '" + n + "'");
          entry.out.emplace_back(n, detail::coefficient_text(c, w + ".out." + n));
        }
        entries.push_back(std::move(entry));
      }
    }
  }
  return d;
}

inline AlgebraDescription parse_description_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  return parse_description(j);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline AlgebraDescription load_description(const std::string& path) {
  try {
    return parse_description_text(read_file(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

template <class K>
K parse_scalar(const std::string& text);

template <>
inline Rational parse_scalar<Rational>(const std::string& text) {
  return Rational::parse(text);
}
template <>
inline ModP parse_scalar<ModP>(const std::string& text) {
  return ModP::parse(text);
}

/// Builds the algebra.  For a prime field the caller must hold a matching
/// PrimeField::Session.
template <class K>
AInfinityAlgebra<K> build_algebra(const AlgebraDescription& d) {
  GradedSpace space(d.basis);
  std::map<int, Operation<K>> ops;
  for (const auto& [k, entries] : d.ops) {
    Operation<K> op(k);
    std::set<Tuple> seen;
    for (std::size_t e = 0; e < entries.size(); ++e) {
      Tuple in;
      for (const auto& n : entries[e].in) in.push_back(space.require(n));
      if (!seen.insert(in).second)
        throw ValidationError("ops." + std::to_string(k) + "[" + std::to_string(e) + "]: duplicate entry for " +
                              std::to_string(k) + "-tuple");
      SparseVec<K> v;
      for (const auto& [n, c] : entries[e].out) {
        K coeff;
        try {
          coeff = parse_scalar<K>(c);
        } catch (const ValidationError& err) {
          throw ValidationError("ops." + std::to_string(k) + "[" + std::to_string(e) + "].out." + n + ": " +
                                err.what());
        }
        sparse_add(v, space.require(n), coeff);
      }
      op.set(in, std::move(v));
    }
    ops.emplace(k, std::move(op));
  }
  const std::size_t unit = space.require(d.unit);
  auto& m2 = ops.try_emplace(2, Operation<K>(2)).first->second;
  for (std::size_t x = 0; x < space.dim(); ++x) {
    if (!m2.find({unit, x})) m2.set({unit, x}, {{x, K(1)}});
    if (!m2.find({x, unit})) m2.set({x, unit}, {{x, K(1)}});
  }
  return AInfinityAlgebra<K>(std::move(space), unit, std::move(ops));
}

/// Canonical description: basis in graded order, entries sorted by input
/// tuple, unit products omitted when they are the identity.
template <class K>
AlgebraDescription describe_algebra(const AInfinityAlgebra<K>& a, const std::string& field) {
  AlgebraDescription d;
  d.field = normalize_field(field);
  d.basis = a.space().basis();
  d.unit = a.space().name(a.unit());
  for (const auto& [k, op] : a.ops()) {
    std::vector<OpEntry> entries;
    for (const auto& [in, out] : op.entries()) {
      if (k == 2 && (in[0] == a.unit() || in[1] == a.unit())) {
        std::size_t other = in[0] == a.unit() ? in[1] : in[0];
        if (out == SparseVec<K>{{other, K(1)}}) continue;
      }
      OpEntry e;
      for (auto i : in) e.in.push_back(a.space().name(i));
      for (const auto& [o, c] : out) e.out.emplace_back(a.space().name(o), c.to_string());
      entries.push_back(std::move(e));
    }
    if (!entries.empty()) d.ops.emplace(k, std::move(entries));
  }
  return d;
}

inline Json to_json(const AlgebraDescription& d) {
  Json j;
  j["field"] = d.field;
  Json basis = Json::array();
  for (const auto& b : d.basis) basis.push_back(Json{{"name", b.name}, {"degree", b.degree}});
  j["basis"] = std::move(basis);
  j["unit"] = d.unit;
  Json ops = Json::object();
  for (const auto& [k, entries] : d.ops) {
    Json list = Json::array();
    for (const auto& e : entries) {
      Json out = Json::object();
      for (const auto& [n, c] : e.out) out[n] = c;
      list.push_back(Json{{"in", e.in}, {"out", std::move(out)}});
    }
    ops[std::to_string(k)] = std::move(list);
  }
  j["ops"] = std::move(ops);
  return j;
}

inline std::string serialize(const AlgebraDescription& d) { return to_json(d).dump(2) + "\n"; }

/// Sparse vector as {"name": "coeff"} over the given space.
template <class K>
Json sparse_to_json(const GradedSpace& space, const SparseVec<K>& v) {
  Json out = Json::object();
  for (const auto& [i, c] : v) out[space.name(i)] = c.to_string();
  return out;
}

template <class K>
SparseVec<K> sparse_from_json(const GradedSpace& space, const Json& j, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object name -> coefficient");
  SparseVec<K> v;
  for (const auto& [n, c] : j.items()) {
    auto idx = space.index_of(n);
    if (!idx) throw ValidationError(where + ": unknown basis name '" + n + "'");
    sparse_add(v, *idx, parse_scalar<K>(detail::coefficient_text(c, where + "." + n)));
  }
  return v;
}

}  // namespace finmodel
