#pragma once

#include <stdexcept>
#include <string>

namespace starq {

/// Malformed input: expressions, index grammar, JSON documents.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A term of R_k does not carry the P-factor / derivative counts required at level k.
class GradingViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// δM = R has no solution in the requested ansatz.
class InfeasibleSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The lower levels of a star product do not produce a Hochschild cocycle.
class CocycleViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// AR_k != 0: the recursion cannot be continued.
class ObstructionError : public std::runtime_error {
 public:
  ObstructionError(int level, const std::string& what)
      : std::runtime_error(what), level_(level) {}
  int level() const noexcept { return level_; }

 private:
  int level_;
};

}  // namespace starq
