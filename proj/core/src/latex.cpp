#include "starq/latex.hpp"

#include <sstream>

namespace starq {

namespace {

std::string rational_latex(const Rational& q, bool leading, bool unit_is_implicit) {
  std::string out;
  const bool negative = q < 0;
  if (negative) {
    out += leading ? "-" : " - ";
  } else if (!leading) {
    out += " + ";
  }
  const Rational a = abs(q);
  if (a == 1 && unit_is_implicit) return out;
  if (a.get_den() == 1) return out + a.get_num().get_str();
  return out + "\\frac{" + a.get_num().get_str() + "}{" + a.get_den().get_str() + "}";
}

std::string jet_latex(const JetMonomial& m) {
  std::string out;
  for (const auto& v : m.factors()) {
    out += v.potential() == Potential::Phi ? "\\varphi" : "\\psi";
    if (!v.index().empty()) out += "_{" + v.index().digits() + "}";
  }
  return out;
}

std::string coordinate_latex(const Exponents& e) {
  std::string out;
  for (int i = 0; i < 3; ++i) {
    if (e.e[i] == 0) continue;
    out += "x_{" + std::to_string(i + 1) + "}";
    if (e.e[i] > 1) out += "^{" + std::to_string(e.e[i]) + "}";
  }
  return out;
}

template <class Poly, class Monomial>
std::string polynomial_latex(const Poly& p, Monomial&& monomial) {
  if (p.is_zero()) return "0";
  std::string out;
  bool leading = true;
  for (const auto& [key, value] : p.terms()) {
    const std::string m = monomial(key);
    out += rational_latex(value, leading, !m.empty());
    out += m;
    leading = false;
  }
  return out;
}

template <class Coeff>
std::string cochain_latex(const BasicCochain<Coeff>& c) {
  if (c.is_zero()) return "0";
  static const char* names[] = {"f", "g", "h", "k"};
  std::ostringstream out;
  bool first = true;
  for (const auto& [slots, coefficient] : c.terms()) {
    if (!first) out << " + ";
    first = false;
    out << "\\left(" << to_latex(coefficient) << "\\right)";
    for (std::size_t i = 0; i < slots.size(); ++i) {
      out << "\\,";
      if (!slots[i].empty()) out << "\\partial_{" << slots[i].digits() << "}";
      out << (i < 4 ? names[i] : "u");
    }
  }
  return out.str();
}

std::string verbatim(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (c == '^') {
      out += "\\^{}";
    } else {
      out += c;
    }
  }
  return out;
}

template <class Coeff>
std::string document_latex(const BasicStarProduct<Coeff>& s) {
  std::ostringstream out;
  out << "\\documentclass{article}\n\\usepackage{amsmath}\n\\allowdisplaybreaks\n\\begin{document}\n";
  out << "Mode: \\texttt{" << to_string(s.mode) << "}, order $" << s.order << "$";
  if (!s.phi_source.empty()) out << ", $\\varphi$: \\texttt{" << verbatim(s.phi_source) << "}";
  if (!s.psi_source.empty()) out << ", $\\psi$: \\texttt{" << verbatim(s.psi_source) << "}";
  out << ".\n\\begin{align*}\n";
  for (std::size_t k = 0; k < s.levels.size(); ++k) {
    out << "M_{" << k << "}(f,g) &= " << cochain_latex(s.levels[k]) << "\\\\\n";
  }
  out << "\\end{align*}\n";
  for (const auto& r : s.reports) {
    out << "$AR_{" << r.level << "}$ " << (r.is_zero ? "vanishes" : "does not vanish") << " ("
        << (r.method == BasicObstructionReport<Coeff>::Method::Parity ? "parity" : "direct") << ").\n\n";
  }
  out << "\\end{document}\n";
  return out.str();
}

}  // namespace

std::string to_latex(const JetPolynomial& p) { return polynomial_latex(p, jet_latex); }
std::string to_latex(const Polynomial& p) { return polynomial_latex(p, coordinate_latex); }
std::string to_latex(const Cochain& c) { return cochain_latex(c); }
std::string to_latex(const ExplicitCochain& c) { return cochain_latex(c); }
std::string to_latex_document(const StarProduct& s) { return document_latex(s); }
std::string to_latex_document(const ExplicitStarProduct& s) { return document_latex(s); }

}  // namespace starq
