#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "starq/cochain.hpp"
#include "starq/opo.hpp"
#include "starq/star.hpp"
#include "starq/verification.hpp"

namespace starq {

using Json = nlohmann::ordered_json;

// Polynomials are lists of {"coeff": "num/den", "factors": [...]}, with
// factors "phi_112", "psi_" for jets and "x1", "x2", "x3" for coordinates.
Json to_json(const JetPolynomial& p);
Json to_json(const Polynomial& p);
JetPolynomial jet_polynomial_from_json(const Json& j);
Polynomial polynomial_from_json(const Json& j);

// {"arity": n, "terms": [{"coeff": polynomial, "slots": [[1,1,2], [3]]}]}
Json to_json(const Cochain& c);
Json to_json(const ExplicitCochain& c);
Cochain cochain_from_json(const Json& j);
ExplicitCochain explicit_cochain_from_json(const Json& j);

Json to_json(const ObstructionReport& r);
Json to_json(const ExplicitObstructionReport& r);

// {"mode", "order", "coefficients": "jet" | "explicit", "phi", "psi",
//  "levels": [cochain...], "obstructionReports": [...]}
Json to_json(const StarProduct& s);
Json to_json(const ExplicitStarProduct& s);

using AnyStarProduct = std::variant<StarProduct, ExplicitStarProduct>;

/// Throws ParseError on malformed documents.
AnyStarProduct star_from_json(const Json& j);

Json to_json(const AbstractTerm& t);
Json to_json(const VerificationReport& r);
Json to_json(const std::vector<LevelAudit>& audit);
Json to_json(const OrderedSearchReport& r);
Json to_json(const ExplicitOrderedSearchReport& r);

/// Parses JSON text, converting library exceptions to ParseError.
Json parse_json(const std::string& text);

}  // namespace starq
