#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace starq::cli {

enum ExitStatus : int {
  kOk = 0,
  kCheckFailed = 1,
  kInvalidInput = 2,
  kObstructed = 3,
  kGradingViolation = 4,
};

enum class EmitFormat { Json, Latex, Text };

EmitFormat parse_format(const std::string& text);

/// One invocation. A potential is "sym" (independent jet variables), an
/// inline expression, or "@path" to read the expression from a file.
struct JobConfig {
  std::string command;
  std::string mode = "nabla-phi";
  std::string phi;
  std::string psi;
  int order = 0;
  /// 0 selects 2N+1.
  int jet_order = 0;
  /// Total degree bound of verification triples; unset selects 2N.
  std::optional<int> degree;
  /// Obstruction level for the obstruction command.
  int level = 0;
  std::string gauge = "ordered";
  bool opo_restrict = false;
  std::string poisson;       ///< "a,b,c" for jacobi
  std::string term;          ///< index-grammar text for opo-check
  std::string input;         ///< star file for verify / export-latex
  std::string output;        ///< empty: stdout
  EmitFormat format = EmitFormat::Text;
};

/// Throws std::invalid_argument when an invariant is violated.
void validate(const JobConfig& config);

int cmd_construct(const JobConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const JobConfig& config, std::ostream& out, std::ostream& err);
int cmd_jacobi(const JobConfig& config, std::ostream& out, std::ostream& err);
int cmd_obstruction(const JobConfig& config, std::ostream& out, std::ostream& err);
int cmd_opo_check(const JobConfig& config, std::ostream& out, std::ostream& err);
int cmd_export_latex(const JobConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.command and maps library exceptions to exit statuses.
int run(const JobConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (CLI11) and runs the job.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Writes through a temporary sibling file and renames it into place.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace starq::cli
