#include "starq_cli/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <CLI11.hpp>

#include "starq/error.hpp"
#include "starq/expression.hpp"
#include "starq/latex.hpp"
#include "starq/opo.hpp"
#include "starq/serialization.hpp"
#include "starq/star.hpp"
#include "starq/verification.hpp"

namespace starq::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool is_symbolic(const std::string& source) { return source == "sym"; }

std::string resolve_source(const std::string& source) {
  if (!source.empty() && source.front() == '@') return read_file(source.substr(1));
  return source;
}

Polynomial parse_potential(const std::string& source, const char* name) {
  if (source.empty()) throw ParseError(std::string("missing --") + name);
  return parse_polynomial(resolve_source(source));
}

/// The explicit potentials of a job; psi only in psi-nabla-phi mode.
JetContext explicit_context(PoissonMode mode, const std::string& phi, const std::string& psi) {
  JetContext ctx{parse_potential(phi, "phi"), std::nullopt};
  if (mode == PoissonMode::PsiNablaPhi) ctx.psi = parse_potential(psi, "psi");
  return ctx;
}

/// Symbolic iff phi is "sym"; in psi mode psi must then be symbolic too.
bool symbolic_job(PoissonMode mode, const JobConfig& config) {
  if (!is_symbolic(config.phi)) {
    if (is_symbolic(config.psi)) throw std::invalid_argument("--psi sym requires --phi sym");
    return false;
  }
  if (mode == PoissonMode::PsiNablaPhi && !config.psi.empty() && !is_symbolic(config.psi)) {
    throw std::invalid_argument("--phi sym requires a symbolic psi");
  }
  return true;
}

Gauge job_gauge(const JobConfig& config) {
  return config.opo_restrict ? Gauge::Ordered : parse_gauge(config.gauge);
}

void emit(const JobConfig& config, const std::string& content, std::ostream& out) {
  if (config.output.empty()) {
    out << content;
  } else {
    write_atomically(config.output, content);
  }
}

template <class Coeff>
std::string describe_report(const BasicObstructionReport<Coeff>& r) {
  using Method = typename BasicObstructionReport<Coeff>::Method;
  std::string s = "AR_" + std::to_string(r.level) + ": ";
  if (r.is_zero) {
    s += r.method == Method::Parity ? "zero (parity)" : "zero";
  } else {
    s += "NONZERO, coordinate witness " + to_string(r.coordinate_witness);
  }
  if (r.shortcut) s += r.shortcut_agrees ? "; cyclic shortcut agrees" : "; cyclic shortcut DISAGREES";
  return s;
}

template <class Coeff>
std::string describe_search(const BasicOrderedSearchReport<Coeff>& r) {
  std::ostringstream s;
  s << "ordered graphs: " << r.level2_graphs.size() << " at level 2, " << r.level3_graphs.size() << " at level 3\n";
  s << "  delta M_2 = R_2 solvable: " << (r.level2_feasible ? "yes" : "no") << "\n";
  if (r.max_level >= 3) s << "  delta M_3 = R_3 solvable: " << (r.cobound_feasible ? "yes" : "no") << "\n";
  if (r.max_level >= 4) s << "  with AR_4 = 0: " << (r.restricted_feasible ? "yes" : "no") << "\n";
  return s.str();
}

template <class Coeff>
std::string describe_star(const BasicBuildResult<Coeff>& result, Gauge gauge) {
  std::ostringstream s;
  const auto& star = result.star;
  s << "mode " << to_string(star.mode) << ", gauge " << to_string(gauge) << ", built to order " << star.order
    << "\n";
  for (std::size_t k = 1; k < star.levels.size(); ++k) {
    s << "  M_" << k << ": " << star.levels[k].size() << " slot terms\n";
  }
  if (result.ordered_search) s << describe_search(*result.ordered_search);
  for (const auto& r : star.reports) s << "  " << describe_report(r) << "\n";
  if (result.obstructed_level) s << "obstructed at level " << *result.obstructed_level << "\n";
  return s.str();
}

template <class Coeff>
int finish_construct(const JobConfig& config, const BasicBuildResult<Coeff>& result, std::ostream& out) {
  const Gauge gauge = job_gauge(config);
  Json doc = to_json(result.star);
  doc["gauge"] = std::string(to_string(gauge));
  if (result.obstructed_level) doc["obstructedLevel"] = *result.obstructed_level;
  if (result.ordered_search) doc["orderedSearch"] = to_json(*result.ordered_search);
  switch (config.format) {
    case EmitFormat::Latex:
      emit(config, to_latex_document(result.star), out);
      out << (config.output.empty() ? "" : describe_star(result, gauge));
      break;
    case EmitFormat::Json:
      if (config.output.empty()) {
        out << doc.dump(2) << "\n";
      } else {
        write_atomically(config.output, doc.dump(2) + "\n");
        out << describe_star(result, gauge);
      }
      break;
    case EmitFormat::Text:
      if (!config.output.empty()) write_atomically(config.output, doc.dump(2) + "\n");
      out << describe_star(result, gauge);
      break;
  }
  return result.obstructed_level ? kObstructed : kOk;
}

Json load_json_file(const std::string& path) {
  if (path.empty()) throw ParseError("missing input file");
  return parse_json(read_file(path));
}

std::string check_lines(const VerificationReport& report) {
  std::ostringstream s;
  for (const auto& c : report.checks) {
    s << (c.pass ? "PASS " : "FAIL ") << c.name << " [" << c.inputs << "]";
    if (!c.pass) s << " residual: " << c.residual;
    s << "\n";
  }
  return s.str();
}

}  // namespace

EmitFormat parse_format(const std::string& text) {
  if (text == "json") return EmitFormat::Json;
  if (text == "latex") return EmitFormat::Latex;
  if (text == "text") return EmitFormat::Text;
  throw std::invalid_argument("unknown format '" + text + "' (json, latex, text)");
}

void validate(const JobConfig& config) {
  const bool builds = config.command == "construct";
  if (builds && config.order < 1) throw std::invalid_argument("--order must be >= 1");
  if (builds && config.jet_order != 0 && config.jet_order < config.order + 1) {
    throw std::invalid_argument("--jet-order must be >= order + 1");
  }
  if (config.degree && *config.degree < 1) throw std::invalid_argument("--degree must be >= 1");
  if (config.command == "obstruction" && config.level < 1) throw std::invalid_argument("--k must be >= 1");
}

void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path temp = target;
  temp += ".tmp";
  {
    std::ofstream f(temp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + temp.string());
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + temp.string());
  }
  std::error_code ec;
  fs::rename(temp, target, ec);
  if (ec) {
    fs::remove(temp);
    throw std::runtime_error("cannot move " + temp.string() + " into place: " + ec.message());
  }
}

int cmd_construct(const JobConfig& config, std::ostream& out, std::ostream&) {
  validate(config);
  const PoissonMode mode = parse_mode(config.mode);
  BuildOptions options;
  options.gauge = job_gauge(config);
  options.jet_order = config.jet_order;
  if (symbolic_job(mode, config)) {
    return finish_construct(config, build_star_symbolic(mode, config.order, options), out);
  }
  const JetContext ctx = explicit_context(mode, config.phi, config.psi);
  return finish_construct(config, build_star_explicit(mode, ctx, config.order, options), out);
}

int cmd_verify(const JobConfig& config, std::ostream& out, std::ostream&) {
  validate(config);
  const std::string text = read_file(config.input);
  const AnyStarProduct loaded = star_from_json(parse_json(text));
  ExplicitStarProduct star;
  if (const auto* jets = std::get_if<StarProduct>(&loaded)) {
    if (config.phi.empty() || is_symbolic(config.phi)) {
      throw ParseError("a symbolic star needs explicit --phi (and --psi) to be verified");
    }
    star = specialize(*jets, explicit_context(jets->mode, config.phi, config.psi));
  } else {
    star = std::get<ExplicitStarProduct>(loaded);
  }
  VerifyOptions options;
  options.degree = config.degree.value_or(std::max(1, 2 * star.order));
  options.digest = "fnv1a:" + fnv1a_hex(text);
  if (!is_symbolic(star.phi_source) && !star.phi_source.empty()) {
    options.poisson = poisson_vector(explicit_context(star.mode, star.phi_source, star.psi_source));
  }
  const VerificationReport report = verify_star(star, options);
  if (config.format == EmitFormat::Json) {
    emit(config, to_json(report).dump(2) + "\n", out);
  } else {
    emit(config, check_lines(report), out);
  }
  return report.pass() ? kOk : kCheckFailed;
}

int cmd_jacobi(const JobConfig& config, std::ostream& out, std::ostream&) {
  validate(config);
  Json doc;
  bool zero = true;
  if (!config.poisson.empty()) {
    const Polynomial r = jacobi_residual(parse_poisson_vector(resolve_source(config.poisson)));
    zero = r.is_zero();
    doc = Json{{"P", config.poisson}, {"residual", to_string(r)}};
  } else {
    const PoissonMode mode = parse_mode(config.mode);
    if (symbolic_job(mode, config)) {
      const int jets = config.jet_order == 0 ? 4 : config.jet_order;
      Json residuals = Json::array();
      for (const auto& r : jacobi_residual_jets(mode, jets)) {
        zero = zero && r.is_zero();
        residuals.push_back(to_string(r));
      }
      doc = Json{{"mode", to_string(mode)}, {"jetOrder", jets}, {"residuals", residuals}};
    } else {
      const Polynomial r = jacobi_residual(poisson_vector(explicit_context(mode, config.phi, config.psi)));
      zero = r.is_zero();
      doc = Json{{"mode", to_string(mode)}, {"phi", config.phi}, {"residual", to_string(r)}};
    }
  }
  doc["zero"] = zero;
  if (config.format == EmitFormat::Json) {
    emit(config, doc.dump(2) + "\n", out);
  } else if (doc.contains("residual")) {
    emit(config, "residual: " + doc["residual"].get<std::string>() + "\n", out);
  } else {
    emit(config, std::string("residual: ") + (zero ? "0" : "nonzero") + " through jet order " +
                     std::to_string(doc["jetOrder"].get<int>()) + "\n",
         out);
  }
  return zero ? kOk : kObstructed;
}

int cmd_obstruction(const JobConfig& config, std::ostream& out, std::ostream&) {
  validate(config);
  const PoissonMode mode = parse_mode(config.mode);
  const int k = config.level;
  BuildOptions options;
  options.gauge = job_gauge(config);
  options.report_next_obstruction = true;
  auto report_of = [&](const auto& result) -> int {
    const auto& reports = result.star.reports;
    const auto it = std::find_if(reports.begin(), reports.end(), [&](const auto& r) { return r.level == k; });
    if (it == reports.end()) {
      // A lower level was obstructed; the level asked for does not exist.
      out << "level " << k << " not reached: obstructed at level " << result.obstructed_level.value_or(0) << "\n";
      return kObstructed;
    }
    if (config.format == EmitFormat::Json) {
      emit(config, to_json(*it).dump(2) + "\n", out);
    } else {
      emit(config, describe_report(*it) + "\n", out);
    }
    return it->is_zero ? kOk : kObstructed;
  };
  if (k == 1) {
    out << "AR_1: zero (R_1 = 0)\n";
    return kOk;
  }
  if (symbolic_job(mode, config)) return report_of(build_star_symbolic(mode, k - 1, options));
  return report_of(build_star_explicit(mode, explicit_context(mode, config.phi, config.psi), k - 1, options));
}

int cmd_opo_check(const JobConfig& config, std::ostream& out, std::ostream&) {
  const AbstractOperator op = parse_abstract(resolve_source(config.term));
  if (op.empty()) throw ParseError("no term given");
  bool all = true;
  Json doc = Json::array();
  std::ostringstream text;
  for (const auto& t : op) {
    const OpoResult r = is_opo(t);
    all = all && r.is_opo;
    doc.push_back(to_json(t));
    text << (r.is_opo ? "OPO" : "NOT OPO") << ": " << to_string(t);
    if (r.is_opo) {
      text << "  arrangement:";
      for (std::size_t i : r.arrangement) text << " " << i;
    }
    text << "\n";
  }
  emit(config, config.format == EmitFormat::Json ? doc.dump(2) + "\n" : text.str(), out);
  return all ? kOk : kCheckFailed;
}

int cmd_export_latex(const JobConfig& config, std::ostream& out, std::ostream&) {
  const AnyStarProduct star = star_from_json(load_json_file(config.input));
  const std::string doc = std::visit([](const auto& s) { return to_latex_document(s); }, star);
  emit(config, doc, out);
  return kOk;
}

int run(const JobConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.command == "construct") return cmd_construct(config, out, err);
    if (config.command == "verify") return cmd_verify(config, out, err);
    if (config.command == "jacobi") return cmd_jacobi(config, out, err);
    if (config.command == "obstruction") return cmd_obstruction(config, out, err);
    if (config.command == "opo-check") return cmd_opo_check(config, out, err);
    if (config.command == "export-latex") return cmd_export_latex(config, out, err);
    err << "error: unknown command '" << config.command << "'\n";
    return kInvalidInput;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const InfeasibleSystem& e) {
    err << "infeasible: " << e.what() << "\n";
    return kObstructed;
  } catch (const GradingViolation& e) {
    err << "grading violation: " << e.what() << "\n";
    return kGradingViolation;
  } catch (const CocycleViolation& e) {
    err << "cocycle violation: " << e.what() << "\n";
    return kGradingViolation;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact construction and verification of star products for P = grad(phi) on R^3"};
  app.require_subcommand(1);
  JobConfig config;
  std::string format = "text";

  auto add_potentials = [&](CLI::App* c) {
    c->add_option("--mode", config.mode, "nabla-phi or psi-nabla-phi")->capture_default_str();
    c->add_option("--phi", config.phi, "polynomial, 'sym', or @file");
    c->add_option("--psi", config.psi, "polynomial, 'sym', or @file (psi-nabla-phi mode)");
  };
  auto add_output = [&](CLI::App* c) {
    c->add_option("--out", config.output, "output file (written atomically); stdout if omitted");
    c->add_option("--format", format, "json, latex or text")->capture_default_str();
  };
  auto add_gauge = [&](CLI::App* c) {
    c->add_option("--gauge", config.gauge, "ordered or block")->capture_default_str();
    c->add_flag("--opo-restrict", config.opo_restrict, "solve levels 2 and 3 among ordered index graphs");
  };

  auto* construct = app.add_subcommand("construct", "build M_0 ... M_N");
  add_potentials(construct);
  construct->add_option("--order,-N", config.order, "order N >= 1")->required();
  construct->add_option("--jet-order,-J", config.jet_order, "jet order bound J >= N+1 (default 2N+1)");
  add_gauge(construct);
  add_output(construct);

  auto* verify = app.add_subcommand("verify", "check associativity, parity and commutators of a star file");
  verify->add_option("input", config.input, "star product JSON")->required();
  verify->add_option("--degree", config.degree, "total degree bound of the test triples (default 2N)");
  add_potentials(verify);
  add_output(verify);

  auto* jacobi = app.add_subcommand("jacobi", "Jacobi residual P.(curl P)");
  jacobi->add_option("--P", config.poisson, "Poisson vector 'a,b,c'");
  add_potentials(jacobi);
  jacobi->add_option("--jet-order,-J", config.jet_order, "jet order for symbolic potentials (default 4)");
  add_output(jacobi);

  auto* obstruction = app.add_subcommand("obstruction", "obstruction AR_k after building M_1 ... M_{k-1}");
  add_potentials(obstruction);
  obstruction->add_option("--k", config.level, "level k")->required();
  add_gauge(obstruction);
  add_output(obstruction);

  auto* opo = app.add_subcommand("opo-check", "decide whether index-grammar terms are OPO");
  opo->add_option("term", config.term, "terms, e.g. \"dP(r;i,s) dP(s;j,r) @1(i) @2(j)\", or @file")->required();
  add_output(opo);

  auto* latex = app.add_subcommand("export-latex", "render a star file as LaTeX");
  latex->add_option("input", config.input, "star product JSON")->required();
  latex->add_option("--out", config.output, "output file; stdout if omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  config.command = app.get_subcommands().front()->get_name();
  try {
    config.format = parse_format(format);
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kInvalidInput;
  }
  return run(config, out, err);
}

}  // namespace starq::cli
