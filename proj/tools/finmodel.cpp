// finmodel <command> --input FILE [--format text|json] [--max-arity N] [--window LO HI]
//
// Exit codes: 0 success, 1 invalid input, 2 mathematical property violated,
// 3 internal invariant breached.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "finmodel/finmodel.hpp"

namespace {

using namespace finmodel;

constexpr int kOk = 0;
constexpr int kInput = 1;
constexpr int kProperty = 2;
constexpr int kInvariant = 3;

struct Options {
  std::string command;
  std::string input;
  std::string format = "text";
  std::optional<int> max_arity;
  std::vector<int> window;
  std::optional<long> a, b, m;
};

/// Collects the payload for both output formats.
struct Report {
  std::string command;
  Json payload = Json::object();
  std::vector<std::string> diagnostics;
  std::ostringstream text;
  int code = kOk;
  std::string status = "ok";
};

Json dims_json(const std::map<int, std::size_t>& dims) {
  Json j = Json::object();
  for (auto [n, d] : dims) j[std::to_string(n)] = d;
  return j;
}

std::string dims_text(const std::map<int, std::size_t>& dims) {
  std::string s = "{";
  bool first = true;
  for (auto [n, d] : dims) {
    s += (first ? "" : ", ") + std::to_string(n) + ":" + std::to_string(d);
    first = false;
  }
  return s + "}";
}

std::optional<std::pair<int, int>> window_of(const Options& o) {
  if (o.window.empty()) return std::nullopt;
  if (o.window.size() != 2) throw ValidationError("--window takes two integers LO HI");
  return std::make_pair(o.window[0], o.window[1]);
}

template <class K>
AInfinityAlgebra<K> minimal_of(const AInfinityAlgebra<K>& a, const Options& o, Report& r) {
  if (a.is_minimal()) return a;
  if (!a.is_dg()) throw PropertyError("input has m_1 != 0 and operations above arity 2; only DG inputs are reduced");
  auto mm = minimal_model(DGAlgebra<K>(a), o.max_arity);
  r.diagnostics.push_back("input is not minimal; replaced by its minimal model (arities <= " +
                          std::to_string(mm.max_arity) + ")");
  return mm.algebra;
}

template <class K>
int default_arity(const AInfinityAlgebra<K>& a) {
  int bound = std::max(3, a.max_arity() + 1);
  if (auto iv = a.space().interval(); iv && iv->second <= 0) bound = std::max(bound, 3 - iv->first);
  return bound;
}

template <class K>
void cmd_info(const AInfinityAlgebra<K>& a, const std::string& field, Report& r) {
  auto p = predicates(a);
  Json j;
  j["field"] = field;
  j["dimension"] = a.dim();
  j["dims"] = dims_json(a.space().dims());
  j["minimal"] = p.minimal;
  j["dg"] = a.is_dg();
  j["max_arity"] = a.max_arity();
  j["connective"] = p.connective;
  j["proper"] = p.proper;
  j["locally_finite"] = p.locally_finite;
  j["cohomology_dims"] = dims_json(p.cohomology_dims);
  j["interval"] = p.interval ? Json::array({p.interval->first, p.interval->second}) : Json();
  j["end_locally_finite"] = p.end_locally_finite;
  j["end_bounded_below"] = p.end_bounded_below;
  r.payload = j;
  r.text << "field: " << field << "\n"
         << "dimension: " << a.dim() << " " << dims_text(a.space().dims()) << "\n"
         << "minimal: " << p.minimal << "  dg: " << a.is_dg() << "  max arity: " << a.max_arity() << "\n"
         << "cohomology: " << dims_text(p.cohomology_dims) << "\n";
  if (p.interval) r.text << "interval: [" << p.interval->first << "," << p.interval->second << "]\n";
  r.text << "connective: " << p.connective << "  proper: " << p.proper << "  locally finite: " << p.locally_finite
         << "\n"
         << "Hom(A,A) locally finite: " << p.end_locally_finite
         << "  bounded below: " << p.end_bounded_below << "\n";
}

template <class K>
void cmd_validate(const AInfinityAlgebra<K>& a, const Options& o, Report& r) {
  const int arity = o.max_arity.value_or(default_arity(a));
  auto rep = validate(a, arity);
  r.payload["max_arity"] = arity;
  r.payload["stasheff"] = rep.stasheff_ok;
  r.payload["strict_unit"] = rep.unit_ok;
  if (!rep.passed()) {
    r.payload["failing_arity"] = rep.failing_arity;
    r.payload["witness"] = rep.witness;
    r.payload["message"] = rep.message;
    r.code = kProperty;
    r.status = "fail";
    r.text << "FAIL: " << rep.message << "\n";
    return;
  }
  r.text << "Stasheff identities hold up to arity " << arity << "; unit is strict\n";
}

template <class K>
void cmd_minimal_model(const AInfinityAlgebra<K>& a, const std::string& field, const Options& o, Report& r) {
  if (!a.is_dg()) throw ValidationError("minimal-model needs a DG algebra (operations in arities 1 and 2)");
  auto mm = minimal_model(DGAlgebra<K>(a), o.max_arity);
  auto desc = describe_algebra(mm.algebra, field);
  r.payload["model"] = to_json(desc);
  r.payload["dims"] = dims_json(mm.algebra.space().dims());
  r.payload["computed_arity"] = mm.max_arity;
  r.text << "minimal model on H = " << dims_text(mm.algebra.space().dims()) << ", arities <= " << mm.max_arity
         << "\n"
         << serialize(desc);
}

template <class K>
void cmd_finite_model(const AInfinityAlgebra<K>& input, const std::string& field, const Options& o, Report& r,
                      bool verify) {
  auto a = minimal_of(input, o, r);
  auto fm = finite_model(a);
  for (const auto& w : fm.warnings) r.diagnostics.push_back(w);
  auto hdims = cohomology(underlying_complex(fm.algebra)).dims();
  r.payload["window"] = Json::array({fm.window.lo(), fm.window.hi()});
  r.payload["model_dims"] = dims_json(fm.algebra.space().dims());
  r.payload["cohomology_dims"] = dims_json(hdims);
  r.text << "window: [" << fm.window.lo() << "," << fm.window.hi() << "]\n"
         << "model dims: " << dims_text(fm.algebra.space().dims()) << "\n"
         << "H-dims: " << dims_text(hdims) << "\n";
  if (!verify) {
    r.payload["model"] = to_json(describe_algebra(fm.algebra, field));
    return;
  }
  auto rep = verify_model(a, fm);
  r.payload["dims_ok"] = rep.dims_ok;
  r.payload["cocycles_ok"] = rep.cocycles_ok;
  r.payload["products_ok"] = rep.products_ok;
  r.text << "(i) H-dims equal dims of A: " << (rep.dims_ok ? "pass" : "FAIL") << "\n"
         << "(ii) rho lands in cocycles and spans H: " << (rep.cocycles_ok ? "pass" : "FAIL") << "\n"
         << "(iii) products agree with m_2: " << (rep.products_ok ? "pass" : "FAIL") << "\n";
  if (!rep.passed()) {
    r.payload["failure"] = rep.failure;
    r.text << rep.failure << "\n";
    r.code = kProperty;
    r.status = "fail";
  }
}

template <class K>
void cmd_generation_bound(const AInfinityAlgebra<K>& input, const Options& o, Report& r) {
  auto a = minimal_of(input, o, r);
  auto b = generation_bound(a);
  r.payload["N"] = b.N;
  r.payload["N1"] = b.N1;
  r.payload["N2"] = b.N2;
  r.text << "(N, N', N'') = (" << b.N << ", " << b.N1 << ", " << b.N2 << ")\n";
}

/// A DG algebra concentrated in degrees <= 0 quasi-isomorphic to the input.
template <class K>
AInfinityAlgebra<K> certificate_algebra(const AInfinityAlgebra<K>& input, const Options& o, Report& r) {
  if (input.is_minimal()) {
    if (input.is_dg()) return input;
    r.diagnostics.push_back("input has higher operations; certifying over its finite DG model");
    return finite_model(input).algebra;
  }
  if (!input.is_dg()) throw ValidationError("certify needs a minimal or DG algebra");
  auto iv = input.space().interval();
  if (iv && iv->second <= 0) return input;
  auto t = smart_truncate_leq0(input);
  if (!t.warnings.empty()) throw PropertyError("input is not connective: " + t.warnings.front());
  r.diagnostics.push_back("positive degrees removed by smart truncation");
  (void)o;
  return t.algebra;
}

template <class K>
void report_certificate(const GenerationCertificate<K>& cert, const CertificateReport& rep, Report& r) {
  r.text << "bound (N, N', N'') = (" << cert.bound.N << ", " << cert.bound.N1 << ", " << cert.bound.N2 << ")\n"
         << "window: [" << cert.window_lo << "," << cert.window_hi << "]\n"
         << "tower length: " << cert.length() << "\n";
  for (std::size_t j = 0; j < cert.steps.size(); ++j) {
    r.text << "  G_" << j << " -> G_" << j + 1 << " -> ";
    const auto& terms = cert.steps[j].terms;
    for (std::size_t t = 0; t < terms.size(); ++t) r.text << (t ? " + " : "") << "eS[" << terms[t].shift << "]";
    r.text << "\n";
  }
  r.text << "verification: " << (rep.ok ? "pass" : "FAIL " + rep.message) << "\n";
  r.payload["verified"] = rep.ok;
  if (!rep.ok) {
    r.payload["failure"] = rep.message;
    r.payload["failing_step"] = rep.failing_step;
    r.code = kProperty;
    r.status = "fail";
  }
}

template <class K>
void cmd_certify(const AInfinityAlgebra<K>& input, const std::string& field, const Options& o, Report& r) {
  auto alg = certificate_algebra(input, o, r);
  auto cert = cone_certificate(DGModule<K>::regular(alg), window_of(o));
  auto rep = verify_certificate(cert);
  r.payload["certificate"] = certificate_to_json(cert, field);
  report_certificate(cert, rep, r);
}

template <class K>
void cmd_verify_cert(const Json& doc, Report& r) {
  auto cert = certificate_from_json<K>(doc);
  report_certificate(cert, verify_certificate(cert), r);
}

template <class K>
void cmd_end_window(const AInfinityAlgebra<K>& input, const Options& o, Report& r) {
  auto a = minimal_of(input, o, r);
  auto iv = a.space().interval();
  if (!iv || iv->second > 0)
    throw PropertyError("Hom(A,A) is not locally finite for a non-connective algebra; no window is computed");
  auto w = window_of(o).value_or(std::make_pair(iv->first, 2));
  EndomorphismWindow<K> end(a, w.first, w.second);
  r.payload["interval"] = Json::array({iv->first, iv->second});
  r.payload["window"] = Json::array({w.first, w.second});
  r.payload["dims"] = dims_json(end.dims());
  Json arities = Json::object();
  for (int n = w.first; n <= w.second; ++n) {
    auto [lo, hi] = end.arity_range(n);
    arities[std::to_string(n)] = Json::array({lo, hi});
  }
  r.payload["arities"] = arities;
  r.text << "A concentrated in [" << iv->first << "," << iv->second << "]\n"
         << "Hom(A,A) dims on [" << w.first << "," << w.second << "]: " << dims_text(end.dims()) << "\n";
}

void cmd_interval(const Options& o, Report& r) {
  if (!o.a || !o.b || !o.m) throw ValidationError("end-window needs --input FILE or all of --a, --b, --m");
  auto iv = end_degree_interval(*o.a, *o.b, *o.m);
  r.payload["interval"] = Json::array({iv.lo, iv.hi});
  r.text << "[" << iv.lo << "," << iv.hi << "]\n";
}

template <class K>
void run_on_algebra(const AlgebraDescription& desc, const Options& o, Report& r) {
  auto a = build_algebra<K>(desc);
  const std::string& f = desc.field;
  const std::string& c = o.command;
  if (c == "info") return cmd_info(a, f, r);
  if (c == "validate") return cmd_validate(a, o, r);
  // Remaining commands need a valid algebra.
  auto rep = validate(a, default_arity(a));
  if (!rep.passed()) throw PropertyError("input is not a strictly unital A-infinity algebra: " + rep.message);
  if (c == "minimal-model") return cmd_minimal_model(a, f, o, r);
  if (c == "finite-model") return cmd_finite_model(a, f, o, r, false);
  if (c == "verify-model") return cmd_finite_model(a, f, o, r, true);
  if (c == "generation-bound") return cmd_generation_bound(a, o, r);
  if (c == "certify") return cmd_certify(a, f, o, r);
  if (c == "end-window") return cmd_end_window(a, o, r);
  throw ValidationError("unknown command '" + c + "'");
}

template <class F>
void with_field(const std::string& field, F&& f) {
  if (field == "Q") {
    f.template operator()<Rational>();
  } else {
    PrimeField::Session session(static_cast<std::uint32_t>(std::stoul(field)));
    f.template operator()<ModP>();
  }
}

void dispatch(const Options& o, Report& r) {
  if (o.command == "end-window" && o.input.empty()) return cmd_interval(o, r);
  if (o.input.empty()) throw ValidationError("--input FILE is required");
  if (o.command == "verify-cert") {
    Json doc;
    try {
      doc = Json::parse(read_file(o.input));
    } catch (const Json::parse_error& e) {
      throw ValidationError(o.input + ": malformed JSON: " + e.what());
    }
    with_field(certificate_field(doc), [&]<class K>() { cmd_verify_cert<K>(doc, r); });
    return;
  }
  auto desc = load_description(o.input);
  with_field(desc.field, [&]<class K>() { run_on_algebra<K>(desc, o, r); });
}

void emit(const Options& o, Report& r) {
  if (o.format == "json") {
    Json j;
    j["command"] = r.command;
    j["status"] = r.status;
    j["exit_code"] = r.code;
    j["payload"] = r.payload;
    j["diagnostics"] = r.diagnostics;
    std::cout << j.dump(2) << "\n";
    return;
  }
  for (const auto& d : r.diagnostics) std::cerr << "note: " << d << "\n";
  std::cout << r.text.str();
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Finite DG models of proper connective A-infinity algebras and generation certificates"};
  app.require_subcommand(1, 1);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"info", "structural predicates and concentration interval"},
      {"validate", "check the Stasheff identities and the strict unit"},
      {"minimal-model", "minimal A-infinity model of a DG algebra by homotopy transfer"},
      {"finite-model", "finite-dimensional DG model built from Hom(A,A)"},
      {"verify-model", "build the finite model and check it against A"},
      {"generation-bound", "the bound (N, N', N'')"},
      {"certify", "cone-tower certificate for A as a module over itself"},
      {"verify-cert", "check a certificate file"},
      {"end-window", "degree intervals and dimensions of Hom(A,A)"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--input,-i", o.input, "input JSON file");
    sub->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--max-arity", o.max_arity, "largest arity to compute or check")->check(CLI::PositiveNumber);
    sub->add_option("--window", o.window, "degree window LO HI")->expected(2);
    if (name == "end-window") {
      sub->add_option("--a", o.a, "lowest degree of A");
      sub->add_option("--b", o.b, "highest degree of A");
      sub->add_option("--m", o.m, "arity");
    }
    sub->callback([&o, name = name] { o.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  Report r;
  r.command = o.command;
  try {
    dispatch(o, r);
  } catch (const ValidationError& e) {
    r.code = kInput;
    r.status = "invalid-input";
    r.diagnostics.push_back(e.what());
  } catch (const PropertyError& e) {
    r.code = kProperty;
    r.status = "property-violation";
    r.diagnostics.push_back(e.what());
  } catch (const InvariantError& e) {
    r.code = kInvariant;
    r.status = "internal-error";
    r.diagnostics.push_back(e.what());
  } catch (const std::exception& e) {
    r.code = kInvariant;
    r.status = "internal-error";
    r.diagnostics.push_back(e.what());
  }
  if (r.code != kOk && r.status != "fail" && o.format != "json")
    std::cerr << "error: " << r.diagnostics.back() << "\n";
  if (r.code != kOk && r.status != "fail" && o.format != "json") return r.code;
  emit(o, r);
  return r.code;
}
