#include "starq/cochain.hpp"

#include <unordered_map>

namespace starq {

ExplicitCochain specialize(const Cochain& c, const JetContext& context) {
  ExplicitCochain out(c.arity());
  for (const auto& [slots, coefficient] : c.terms()) out.add_term(slots, eval_jets(coefficient, context));
  return out;
}

Polynomial eval(const ExplicitCochain& c, std::span<const Polynomial> args) {
  if (static_cast<int>(args.size()) != c.arity()) {
    throw std::invalid_argument("eval: " + std::to_string(args.size()) + " arguments for a cochain of arity " +
                                std::to_string(c.arity()));
  }
  std::vector<std::unordered_map<MultiIndex, Polynomial>> derivatives(args.size());
  auto d = [&](std::size_t arg, const MultiIndex& index) -> const Polynomial& {
    auto& cache = derivatives[arg];
    auto it = cache.find(index);
    if (it != cache.end()) return it->second;
    return cache.emplace(index, derivative(args[arg], index)).first->second;
  };
  Polynomial out;
  for (const auto& [slots, coefficient] : c.terms()) {
    Polynomial term = coefficient;
    for (std::size_t j = 0; j < slots.size() && !term.is_zero(); ++j) term = term * d(j, slots[j]);
    out += term;
  }
  return out;
}

Polynomial eval(const Cochain& c, const JetContext& context, std::span<const Polynomial> args) {
  return eval(specialize(c, context), args);
}

}  // namespace starq
