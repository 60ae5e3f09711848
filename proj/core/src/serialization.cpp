#include "starq/serialization.hpp"

#include "starq/error.hpp"

namespace starq {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw ParseError("malformed document: " + what); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) malformed(std::string("missing field '") + name + "'");
  return j.at(name);
}

std::string string_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_string()) malformed(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

int int_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number_integer()) malformed(std::string("field '") + name + "' must be an integer");
  return v.get<int>();
}

Json slots_json(const SlotTuple& slots) {
  Json out = Json::array();
  for (const auto& s : slots) out.push_back(s.indices());
  return out;
}

SlotTuple slots_from_json(const Json& j) {
  if (!j.is_array()) malformed("slots must be a list");
  SlotTuple out;
  for (const auto& s : j) {
    if (!s.is_array()) malformed("each slot must be a list of indices");
    std::vector<int> indices;
    for (const auto& i : s) {
      if (!i.is_number_integer()) malformed("slot indices must be integers");
      indices.push_back(i.get<int>());
    }
    try {
      out.push_back(MultiIndex::from_indices(indices));
    } catch (const std::out_of_range&) {
      malformed("slot index outside 1..3");
    }
  }
  return out;
}

template <class Poly, class Factors>
Json polynomial_json(const Poly& p, Factors&& factors) {
  Json out = Json::array();
  for (const auto& [key, value] : p.terms()) {
    out.push_back(Json{{"coeff", to_string(value)}, {"factors", factors(key)}});
  }
  return out;
}

template <class Coeff>
Json cochain_json(const BasicCochain<Coeff>& c) {
  Json terms = Json::array();
  for (const auto& [slots, coefficient] : c.terms()) {
    terms.push_back(Json{{"coeff", to_json(coefficient)}, {"slots", slots_json(slots)}});
  }
  return Json{{"arity", c.arity()}, {"terms", std::move(terms)}};
}

template <class Coeff, class ParseCoeff>
BasicCochain<Coeff> cochain_parse(const Json& j, ParseCoeff&& parse_coeff) {
  const int arity = int_field(j, "arity");
  if (arity < 1) malformed("arity must be >= 1");
  const Json& terms = field(j, "terms");
  if (!terms.is_array()) malformed("terms must be a list");
  BasicCochain<Coeff> out(arity);
  for (const auto& t : terms) {
    const SlotTuple slots = slots_from_json(field(t, "slots"));
    if (static_cast<int>(slots.size()) != arity) malformed("slot count does not match arity");
    out.add_term(slots, parse_coeff(field(t, "coeff")));
  }
  return out;
}

template <class Coeff>
Json report_json(const BasicObstructionReport<Coeff>& r) {
  Json out{{"level", r.level},
           {"method", r.method == BasicObstructionReport<Coeff>::Method::Parity ? "parity" : "direct"},
           {"isZero", r.is_zero},
           {"coordinateWitness", to_json(r.coordinate_witness)},
           {"AR", to_json(r.antisymmetrized)}};
  if (r.shortcut) {
    out["shortcut"] = to_json(*r.shortcut);
    out["shortcutAgrees"] = r.shortcut_agrees;
  }
  return out;
}

template <class Coeff, class ParseCoeff>
BasicObstructionReport<Coeff> report_parse(const Json& j, ParseCoeff&& parse_coeff) {
  BasicObstructionReport<Coeff> r;
  r.level = int_field(j, "level");
  const std::string method = string_field(j, "method");
  if (method != "parity" && method != "direct") malformed("unknown obstruction method '" + method + "'");
  r.method = method == "parity" ? BasicObstructionReport<Coeff>::Method::Parity
                                : BasicObstructionReport<Coeff>::Method::Direct;
  const Json& zero = field(j, "isZero");
  if (!zero.is_boolean()) malformed("isZero must be a boolean");
  r.is_zero = zero.get<bool>();
  r.coordinate_witness = parse_coeff(field(j, "coordinateWitness"));
  r.antisymmetrized = cochain_parse<Coeff>(field(j, "AR"), parse_coeff);
  if (j.contains("shortcut")) {
    r.shortcut = cochain_parse<Coeff>(j.at("shortcut"), parse_coeff);
    r.shortcut_agrees = j.value("shortcutAgrees", true);
  }
  return r;
}

template <class Coeff>
Json star_json(const BasicStarProduct<Coeff>& s, const char* kind) {
  Json levels = Json::array();
  for (const auto& l : s.levels) levels.push_back(to_json(l));
  Json reports = Json::array();
  for (const auto& r : s.reports) reports.push_back(to_json(r));
  return Json{{"mode", std::string(to_string(s.mode))},
              {"order", s.order},
              {"coefficients", kind},
              {"phi", s.phi_source},
              {"psi", s.psi_source},
              {"levels", std::move(levels)},
              {"obstructionReports", std::move(reports)}};
}

template <class Coeff, class ParseCoeff>
BasicStarProduct<Coeff> star_parse(const Json& j, ParseCoeff&& parse_coeff) {
  BasicStarProduct<Coeff> s;
  s.mode = parse_mode(string_field(j, "mode"));
  s.order = int_field(j, "order");
  s.phi_source = string_field(j, "phi");
  s.psi_source = j.contains("psi") ? string_field(j, "psi") : std::string();
  const Json& levels = field(j, "levels");
  if (!levels.is_array()) malformed("levels must be a list");
  for (const auto& l : levels) {
    auto c = cochain_parse<Coeff>(l, parse_coeff);
    if (c.arity() != 2) malformed("levels must be bilinear");
    s.levels.push_back(std::move(c));
  }
  if (s.levels.empty() || static_cast<int>(s.levels.size()) != s.order + 1) {
    malformed("order does not match the number of levels");
  }
  if (j.contains("obstructionReports")) {
    for (const auto& r : j.at("obstructionReports")) s.reports.push_back(report_parse<Coeff>(r, parse_coeff));
  }
  return s;
}

Rational rational_field(const Json& j) { return parse_rational(string_field(j, "coeff")); }

}  // namespace

Json to_json(const JetPolynomial& p) {
  return polynomial_json(p, [](const JetMonomial& m) {
    Json f = Json::array();
    for (const auto& v : m.factors()) f.push_back(v.name());
    return f;
  });
}

Json to_json(const Polynomial& p) {
  return polynomial_json(p, [](const Exponents& e) {
    Json f = Json::array();
    for (int i = 0; i < 3; ++i) {
      for (int n = 0; n < e.e[i]; ++n) f.push_back("x" + std::to_string(i + 1));
    }
    return f;
  });
}

JetPolynomial jet_polynomial_from_json(const Json& j) {
  if (!j.is_array()) malformed("a polynomial must be a list of terms");
  std::vector<RawJetTerm> raw;
  for (const auto& t : j) {
    RawJetTerm term;
    term.coefficient = rational_field(t);
    const Json& factors = field(t, "factors");
    if (!factors.is_array()) malformed("factors must be a list");
    for (const auto& f : factors) {
      if (!f.is_string()) malformed("factor names must be strings");
      term.factors.push_back(JetVariable::parse(f.get<std::string>()));
    }
    raw.push_back(std::move(term));
  }
  return canonicalize(raw);
}

Polynomial polynomial_from_json(const Json& j) {
  if (!j.is_array()) malformed("a polynomial must be a list of terms");
  Polynomial out;
  for (const auto& t : j) {
    const Rational c = rational_field(t);
    Exponents e;
    const Json& factors = field(t, "factors");
    if (!factors.is_array()) malformed("factors must be a list");
    for (const auto& f : factors) {
      const std::string name = f.is_string() ? f.get<std::string>() : std::string();
      if (name != "x1" && name != "x2" && name != "x3") malformed("unknown coordinate '" + name + "'");
      ++e.e[name[1] - '1'];
    }
    out.add_term(e, c);
  }
  return out;
}

Json to_json(const Cochain& c) { return cochain_json(c); }
Json to_json(const ExplicitCochain& c) { return cochain_json(c); }

Cochain cochain_from_json(const Json& j) { return cochain_parse<JetPolynomial>(j, jet_polynomial_from_json); }

ExplicitCochain explicit_cochain_from_json(const Json& j) {
  return cochain_parse<Polynomial>(j, polynomial_from_json);
}

Json to_json(const ObstructionReport& r) { return report_json(r); }
Json to_json(const ExplicitObstructionReport& r) { return report_json(r); }

Json to_json(const StarProduct& s) { return star_json(s, "jet"); }
Json to_json(const ExplicitStarProduct& s) { return star_json(s, "explicit"); }

AnyStarProduct star_from_json(const Json& j) {
  const std::string kind = string_field(j, "coefficients");
  if (kind == "jet") return star_parse<JetPolynomial>(j, jet_polynomial_from_json);
  if (kind == "explicit") return star_parse<Polynomial>(j, polynomial_from_json);
  malformed("coefficients must be 'jet' or 'explicit'");
}

Json to_json(const AbstractTerm& t) {
  const auto opo = is_opo(t);
  Json out{{"coeff", to_string(t.coefficient)}, {"text", to_string(t)}, {"opo", opo.is_opo}};
  if (opo.is_opo) out["arrangement"] = opo.arrangement;
  return out;
}

Json to_json(const VerificationReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back(Json{{"name", c.name}, {"inputs", c.inputs}, {"residual", c.residual}, {"pass", c.pass}});
  }
  Json out{{"pass", r.pass()}, {"checks", std::move(checks)}};
  if (r.witness) {
    auto name = [](const Exponents& e) { return to_string(Polynomial::monomial(e)); };
    out["witness"] = Json{{"f", name(r.witness->f)},
                          {"g", name(r.witness->g)},
                          {"h", name(r.witness->h)},
                          {"order", r.witness->order},
                          {"residual", to_string(r.witness->residual)}};
  }
  return out;
}

Json to_json(const std::vector<LevelAudit>& audit) {
  Json out = Json::array();
  for (const auto& a : audit) {
    Json level{{"level", a.level},
               {"status", std::string(to_string(a.status))},
               {"orderedGraphs", a.ordered_graphs},
               {"allGraphs", a.all_graphs}};
    if (a.ordered_representative) level["orderedRepresentative"] = *a.ordered_representative;
    out.push_back(std::move(level));
  }
  return out;
}

namespace {

template <class Coeff>
Json search_json(const BasicOrderedSearchReport<Coeff>& r) {
  Json out{{"mode", std::string(to_string(r.mode))},
           {"maxLevel", r.max_level},
           {"level2Graphs", r.level2_graphs},
           {"level3Graphs", r.level3_graphs},
           {"equations", r.equations},
           {"rank", r.rank},
           {"level2Feasible", r.level2_feasible},
           {"coboundFeasible", r.cobound_feasible},
           {"restrictedFeasible", r.restricted_feasible},
           {"seconds", r.seconds}};
  if (r.ar4) out["AR4"] = to_json(*r.ar4);
  if (r.unrestricted_feasible) out["unrestrictedFeasible"] = *r.unrestricted_feasible;
  if (r.unrestricted_ar4_zero) out["unrestrictedAR4Zero"] = *r.unrestricted_ar4_zero;
  auto coefficients = [](const std::vector<Rational>& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(to_string(x));
    return out;
  };
  out["level2Coefficients"] = coefficients(r.level2_coefficients);
  out["level3Coefficients"] = coefficients(r.level3_coefficients);
  if (r.m2) out["M2"] = to_json(*r.m2);
  if (r.m3) out["M3"] = to_json(*r.m3);
  if (r.refutes_expectation()) {
    Json terms = Json::array();
    for (std::size_t j = 0; j < r.level3_coefficients.size(); ++j) {
      if (r.level3_coefficients[j] == 0) continue;
      terms.push_back(Json{{"coeff", to_string(r.level3_coefficients[j])}, {"graph", r.level3_graphs[j]}});
    }
    out["refutation"] = Json{{"claim", "ordered M_2, M_3 with AR_4 = 0 exist"}, {"M3Graphs", std::move(terms)}};
  }
  return out;
}

}  // namespace

Json to_json(const OrderedSearchReport& r) { return search_json(r); }
Json to_json(const ExplicitOrderedSearchReport& r) { return search_json(r); }

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace starq
