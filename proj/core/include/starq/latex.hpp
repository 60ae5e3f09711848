#pragma once

#include <string>

#include "starq/cochain.hpp"
#include "starq/star.hpp"

namespace starq {

/// LaTeX math for a coefficient, e.g. "\frac{1}{2}\varphi_{1}\varphi_{23}".
std::string to_latex(const JetPolynomial& p);
std::string to_latex(const Polynomial& p);

/// "\frac{1}{2}\varphi_{3}\,\partial_{1}f\,\partial_{2}g + …" for a bilinear
/// cochain; arity-3 cochains use f, g, h.
std::string to_latex(const Cochain& c);
std::string to_latex(const ExplicitCochain& c);

/// A standalone document listing M_0 … M_N and the obstruction reports.
std::string to_latex_document(const StarProduct& s);
std::string to_latex_document(const ExplicitStarProduct& s);

}  // namespace starq
