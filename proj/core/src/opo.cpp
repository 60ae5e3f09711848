#include "starq/opo.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include "starq/error.hpp"

namespace starq {

std::vector<Label> AbstractTerm::labels() const {
  std::set<Label> out;
  for (const auto& f : factors) {
    out.insert(f.upper.begin(), f.upper.end());
    out.insert(f.lower.begin(), f.lower.end());
  }
  for (const auto& a : args) out.insert(a.begin(), a.end());
  return {out.begin(), out.end()};
}

Label AbstractTerm::max_label() const {
  const auto all = labels();
  return all.empty() ? -1 : all.back();
}

std::vector<Contraction> wiring(const AbstractTerm& term) {
  std::map<Label, std::vector<Endpoint>> uppers;
  std::map<Label, std::vector<Endpoint>> lowers;
  for (int f = 0; f < static_cast<int>(term.factors.size()); ++f) {
    const auto& factor = term.factors[f];
    for (int p = 0; p < 2; ++p) uppers[factor.upper[p]].push_back({Endpoint::Kind::Upper, f, p});
    for (int p = 0; p < static_cast<int>(factor.lower.size()); ++p) {
      lowers[factor.lower[p]].push_back({Endpoint::Kind::FactorLower, f, p});
    }
  }
  for (int a = 0; a < term.arity(); ++a) {
    for (int p = 0; p < static_cast<int>(term.args[a].size()); ++p) {
      lowers[term.args[a][p]].push_back({Endpoint::Kind::ArgumentLower, a, p});
    }
  }
  std::vector<Contraction> out;
  for (const auto& [label, ups] : uppers) {
    auto it = lowers.find(label);
    if (ups.size() != 1 || it == lowers.end() || it->second.size() != 1) {
      throw std::invalid_argument("index " + std::to_string(label) +
                                  " must occur exactly once as an upper and once as a lower index");
    }
    out.push_back({label, ups.front(), it->second.front()});
  }
  for (const auto& [label, lows] : lowers) {
    if (!uppers.contains(label)) {
      throw std::invalid_argument("lower index " + std::to_string(label) + " is not contracted");
    }
  }
  return out;
}

void validate(const AbstractTerm& term) { (void)wiring(term); }

AbstractTerm with_canonical_signs(AbstractTerm term) {
  for (auto& f : term.factors) {
    if (f.upper[0] > f.upper[1]) {
      std::swap(f.upper[0], f.upper[1]);
      term.coefficient = -term.coefficient;
    }
  }
  return term;
}

namespace {

/// owner_of[label] = factor carrying `label` as a derivative index, or -1 if
/// it sits on an argument.
std::map<Label, int> lower_owner(const AbstractTerm& term) {
  std::map<Label, int> owner;
  for (int f = 0; f < static_cast<int>(term.factors.size()); ++f) {
    for (Label l : term.factors[f].lower) owner[l] = f;
  }
  for (const auto& a : term.args) {
    for (Label l : a) owner[l] = -1;
  }
  return owner;
}

}  // namespace

OpoResult is_opo(const AbstractTerm& term) {
  validate(term);
  const std::size_t n = term.factors.size();
  const auto owner = lower_owner(term);
  // Edge p -> q: factor p must stand left of factor q.
  std::vector<std::vector<std::size_t>> successors(n);
  std::vector<int> indegree(n, 0);
  for (std::size_t p = 0; p < n; ++p) {
    for (Label up : term.factors[p].upper) {
      const int q = owner.at(up);
      if (q < 0) continue;
      if (static_cast<std::size_t>(q) == p) return {};
      successors[p].push_back(static_cast<std::size_t>(q));
      ++indegree[q];
    }
  }
  // Kahn's algorithm with the smallest available factor first gives the
  // lexicographically least arrangement, or proves that none exists.
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t p = 0; p < n; ++p) {
    if (indegree[p] == 0) ready.push(p);
  }
  OpoResult result;
  while (!ready.empty()) {
    const std::size_t p = ready.top();
    ready.pop();
    result.arrangement.push_back(p);
    for (std::size_t q : successors[p]) {
      if (--indegree[q] == 0) ready.push(q);
    }
  }
  if (result.arrangement.size() != n) return {};
  result.is_opo = true;
  return result;
}

bool is_opo_arrangement(const AbstractTerm& term, std::span<const std::size_t> order) {
  const std::size_t n = term.factors.size();
  if (order.size() != n) throw std::invalid_argument("arrangement size mismatch");
  std::vector<std::size_t> position(n, n);
  for (std::size_t pos = 0; pos < n; ++pos) position.at(order[pos]) = pos;
  const auto owner = lower_owner(term);
  for (std::size_t p = 0; p < n; ++p) {
    for (Label up : term.factors[p].upper) {
      const int q = owner.at(up);
      if (q >= 0 && position[q] <= position[p]) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Concretization

Cochain concretize(const AbstractTerm& term, PoissonMode mode) {
  validate(term);
  const auto labels = term.labels();
  std::map<Label, std::size_t> slot_of;
  for (std::size_t i = 0; i < labels.size(); ++i) slot_of[labels[i]] = i;

  std::map<std::tuple<int, int, MultiIndex>, JetPolynomial> memo;
  auto p_jet = [&](int i, int j, const MultiIndex& lower) -> const JetPolynomial& {
    auto key = std::make_tuple(i, j, lower);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    return memo.emplace(key, substitute_P(PJet{i, j, lower}, mode)).first->second;
  };

  Cochain out(std::max(1, term.arity()));
  std::vector<int> value(labels.size(), 1);
  const JetPolynomial coefficient = JetPolynomial::constant(term.coefficient);
  for (;;) {
    JetPolynomial c = coefficient;
    for (const auto& f : term.factors) {
      const int i = value[slot_of[f.upper[0]]];
      const int j = value[slot_of[f.upper[1]]];
      if (i == j) {
        c = JetPolynomial{};
        break;
      }
      std::vector<int> lower;
      lower.reserve(f.lower.size());
      for (Label l : f.lower) lower.push_back(value[slot_of[l]]);
      c = c * p_jet(i, j, MultiIndex::from_indices(lower));
      if (c.is_zero()) break;
    }
    if (!c.is_zero()) {
      SlotTuple slots;
      slots.reserve(term.args.size());
      for (const auto& a : term.args) {
        std::vector<int> idx;
        idx.reserve(a.size());
        for (Label l : a) idx.push_back(value[slot_of[l]]);
        slots.push_back(MultiIndex::from_indices(idx));
      }
      out.add_term(slots, c);
    }
    std::size_t pos = 0;
    while (pos < value.size() && value[pos] == kDimension) value[pos++] = 1;
    if (pos == value.size()) break;
    ++value[pos];
  }
  return out;
}

Cochain concretize(const AbstractOperator& op, PoissonMode mode) {
  if (op.empty()) throw std::invalid_argument("cannot concretize an empty operator");
  Cochain out(std::max(1, op.front().arity()));
  for (const auto& t : op) out += concretize(t, mode);
  return out;
}

// ---------------------------------------------------------------------------
// Abstract Hochschild / Gerstenhaber operations

namespace {

/// Every assignment of `labels` to `targets` buckets.
void distribute(const std::vector<Label>& labels, std::size_t targets,
                const std::function<void(const std::vector<std::vector<Label>>&)>& emit) {
  std::vector<std::vector<Label>> buckets(targets);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == labels.size()) {
      emit(buckets);
      return;
    }
    for (std::size_t t = 0; t < targets; ++t) {
      buckets[t].push_back(labels[i]);
      rec(i + 1);
      buckets[t].pop_back();
    }
  };
  rec(0);
}

AbstractTerm relabeled(const AbstractTerm& term, Label offset) {
  AbstractTerm out = term;
  for (auto& f : out.factors) {
    for (auto& l : f.lower) l += offset;
    for (auto& l : f.upper) l += offset;
  }
  for (auto& a : out.args) {
    for (auto& l : a) l += offset;
  }
  return out;
}

}  // namespace

AbstractOperator abstract_delta(const AbstractTerm& term) {
  const int m = term.arity() - 1;
  AbstractOperator out;
  {
    AbstractTerm t = term;
    t.args.insert(t.args.begin(), std::vector<Label>{});
    out.push_back(std::move(t));
  }
  for (int i = 0; i <= m; ++i) {
    distribute(term.args[i], 2, [&](const std::vector<std::vector<Label>>& parts) {
      AbstractTerm t = term;
      t.coefficient = -term.coefficient * sign_power(i);
      t.args.erase(t.args.begin() + i);
      t.args.insert(t.args.begin() + i, parts.begin(), parts.end());
      out.push_back(std::move(t));
    });
  }
  {
    AbstractTerm t = term;
    t.coefficient = term.coefficient * sign_power(m);
    t.args.push_back({});
    out.push_back(std::move(t));
  }
  return out;
}

AbstractOperator abstract_product(const AbstractTerm& m, const AbstractTerm& n_in) {
  const AbstractTerm n = relabeled(n_in, m.max_label() + 1);
  const int n_degree = n.arity() - 1;
  const std::size_t n_factors = n.factors.size();
  const std::size_t targets = n_factors + n.args.size();
  AbstractOperator out;
  for (int i = 0; i < m.arity(); ++i) {
    const Rational sign = sign_power(i * n_degree);
    distribute(m.args[i], targets, [&](const std::vector<std::vector<Label>>& parts) {
      AbstractTerm t;
      t.coefficient = sign * m.coefficient * n.coefficient;
      t.factors = m.factors;
      for (std::size_t f = 0; f < n_factors; ++f) {
        PFactor factor = n.factors[f];
        factor.lower.insert(factor.lower.end(), parts[f].begin(), parts[f].end());
        t.factors.push_back(std::move(factor));
      }
      t.args.assign(m.args.begin(), m.args.begin() + i);
      for (std::size_t a = 0; a < n.args.size(); ++a) {
        auto arg = n.args[a];
        arg.insert(arg.end(), parts[n_factors + a].begin(), parts[n_factors + a].end());
        t.args.push_back(std::move(arg));
      }
      t.args.insert(t.args.end(), m.args.begin() + i + 1, m.args.end());
      out.push_back(std::move(t));
    });
  }
  return out;
}

AbstractOperator abstract_bracket(const AbstractTerm& m, const AbstractTerm& n) {
  AbstractOperator out = abstract_product(m, n);
  const Rational sign = -sign_power((m.arity() - 1) * (n.arity() - 1));
  for (auto t : abstract_product(n, m)) {
    t.coefficient *= sign;
    out.push_back(std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text grammar

namespace {

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  AbstractTerm parse() {
    AbstractTerm term;
    term.coefficient = coefficient();
    std::map<int, std::vector<Label>> args;
    int arity = 0;
    for (;;) {
      skip();
      if (pos_ >= text_.size()) break;
      if (text_[pos_] == '*') {
        ++pos_;
        continue;
      }
      if (consume("dP(")) {
        PFactor f;
        f.lower = label_list(';');
        auto up = label_list(')');
        if (up.size() != 2) fail("a P-factor needs exactly two upper indices");
        f.upper = {up[0], up[1]};
        term.factors.push_back(std::move(f));
      } else if (consume("P(")) {
        PFactor f;
        auto up = label_list(')');
        if (up.size() != 2) fail("a P-factor needs exactly two upper indices");
        f.upper = {up[0], up[1]};
        term.factors.push_back(std::move(f));
      } else if (consume("@")) {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an argument number after '@'");
        const int n = std::stoi(std::string(text_.substr(start, pos_ - start)));
        if (n < 1) fail("argument numbers start at 1");
        if (!consume("(")) fail("expected '(' after argument number");
        auto labels = label_list(')');
        auto& slot = args[n];
        slot.insert(slot.end(), labels.begin(), labels.end());
        arity = std::max(arity, n);
      } else {
        fail("unexpected '" + std::string(1, text_[pos_]) + "'");
      }
    }
    if (arity == 0) fail("a term needs at least one argument");
    term.args.resize(arity);
    for (auto& [n, labels] : args) term.args[n - 1] = labels;
    try {
      validate(term);
    } catch (const std::invalid_argument& e) {
      fail(std::string("bad contraction: ") + e.what());
    }
    return term;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError("index term '" + std::string(text_) + "': " + why);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(std::string_view token) {
    skip();
    if (text_.substr(pos_).starts_with(token)) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  Rational coefficient() {
    skip();
    Rational sign(1);
    while (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      if (text_[pos_] == '-') sign = -sign;
      ++pos_;
      skip();
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/')) {
      ++pos_;
    }
    if (start == pos_) return sign;
    Rational value = parse_rational(text_.substr(start, pos_ - start));
    return sign * value;
  }

  std::vector<Label> label_list(char terminator) {
    std::vector<Label> out;
    for (;;) {
      skip();
      if (pos_ >= text_.size()) fail("unterminated index list");
      if (text_[pos_] == terminator) {
        ++pos_;
        return out;
      }
      if (text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected an index name");
      const std::string name(text_.substr(start, pos_ - start));
      auto [it, inserted] = names_.try_emplace(name, static_cast<Label>(names_.size()));
      out.push_back(it->second);
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::map<std::string, Label> names_;
};

std::string label_name(Label l) {
  static constexpr std::string_view alphabet = "ijklmrstuvwabcdepq";
  if (l >= 0 && l < static_cast<Label>(alphabet.size())) return std::string(1, alphabet[l]);
  return "n" + std::to_string(l);
}

std::string join_labels(const std::vector<Label>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ",";
    out += label_name(labels[i]);
  }
  return out;
}

}  // namespace

AbstractTerm parse_abstract_term(std::string_view text) { return TermParser(text).parse(); }

AbstractOperator parse_abstract(std::string_view text) {
  AbstractOperator out;
  int depth = 0;
  std::size_t start = 0;
  bool seen_content = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && (c == '+' || c == '-') && seen_content) {
      out.push_back(parse_abstract_term(text.substr(start, i - start)));
      start = i;
      seen_content = false;
      continue;
    }
    if (!std::isspace(static_cast<unsigned char>(c)) && c != '+' && c != '-') seen_content = true;
  }
  out.push_back(parse_abstract_term(text.substr(start)));
  return out;
}

std::string to_string(const AbstractTerm& term) {
  std::string out;
  if (term.coefficient != 1) out += term.coefficient.get_str() + " ";
  for (const auto& f : term.factors) {
    if (f.lower.empty()) {
      out += "P(" + join_labels({f.upper[0], f.upper[1]}) + ") ";
    } else {
      out += "dP(" + join_labels(f.lower) + ";" + join_labels({f.upper[0], f.upper[1]}) + ") ";
    }
  }
  for (int a = 0; a < term.arity(); ++a) {
    out += "@" + std::to_string(a + 1) + "(" + join_labels(term.args[a]) + ")";
    if (a + 1 < term.arity()) out += " ";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Named operators

AbstractTerm poisson_bracket_term() { return parse_abstract_term("P(i,j) @1(i) @2(j)"); }

AbstractOperator jacobi_identity_terms() {
  // {{f,g},h} = P^{ij} ∂_i(P^{kl} ∂_k f ∂_l g) ∂_j h
  return parse_abstract(
      "dP(i;k,l) P(i,j) @1(k) @2(l) @3(j)"
      " + P(i,j) P(k,l) @1(i,k) @2(l) @3(j)"
      " + P(i,j) P(k,l) @1(k) @2(i,l) @3(j)");
}

AbstractOperator jacobi_example_terms() {
  // ∂_i applied to each of the three cyclic products P^{ar}∂_rP^{bc}.
  return parse_abstract(
      "dP(k;i,j) dP(i;k,r) dP(r;l,m) @1(j,l) @2(m)"
      " + dP(k;i,j) P(k,r) dP(i,r;l,m) @1(j,l) @2(m)"
      " + dP(k;i,j) dP(i;l,r) dP(r;m,k) @1(j,l) @2(m)"
      " + dP(k;i,j) P(l,r) dP(i,r;m,k) @1(j,l) @2(m)"
      " + dP(k;i,j) dP(i;m,r) dP(r;k,l) @1(j,l) @2(m)"
      " + dP(k;i,j) P(m,r) dP(i,r;k,l) @1(j,l) @2(m)");
}

AbstractTerm jacobi_example_opo_term() {
  return parse_abstract_term("dP(k;i,j) P(k,r) dP(i,r;l,m) @1(j,l) @2(m)");
}

Cochain jacobi_example_check(PoissonMode mode) { return concretize(jacobi_example_terms(), mode); }

// ---------------------------------------------------------------------------
// Enumeration and random generation

std::vector<AbstractTerm> enumerate_bilinear_graphs(int factor_count, bool opo_only) {
  if (factor_count < 1) throw std::invalid_argument("need at least one P-factor");
  // Targets 0..k-1 are factors, k and k+1 the two arguments.
  const int k = factor_count;
  std::vector<std::vector<std::pair<int, int>>> choices(k);
  for (int a = 0; a < k; ++a) {
    std::vector<int> targets;
    for (int t = opo_only ? a + 1 : 0; t < k; ++t) targets.push_back(t);
    targets.push_back(k);
    targets.push_back(k + 1);
    for (std::size_t x = 0; x < targets.size(); ++x) {
      for (std::size_t y = x + 1; y < targets.size(); ++y) choices[a].emplace_back(targets[x], targets[y]);
    }
  }
  std::vector<AbstractTerm> out;
  std::vector<std::size_t> pick(k, 0);
  for (;;) {
    AbstractTerm t;
    t.factors.resize(k);
    t.args.resize(2);
    Label next = 0;
    for (int a = 0; a < k; ++a) {
      const auto [x, y] = choices[a][pick[a]];
      for (int p = 0; p < 2; ++p) {
        const int target = p == 0 ? x : y;
        const Label l = next++;
        t.factors[a].upper[p] = l;
        if (target < k) {
          t.factors[target].lower.push_back(l);
        } else {
          t.args[target - k].push_back(l);
        }
      }
    }
    out.push_back(std::move(t));
    int a = k - 1;
    while (a >= 0 && ++pick[a] == choices[a].size()) pick[a--] = 0;
    if (a < 0) break;
  }
  return out;
}

AbstractTerm random_opo_term(std::mt19937_64& rng, const RandomTermOptions& options) {
  std::uniform_int_distribution<int> factor_dist(1, options.max_factors);
  std::uniform_int_distribution<int> arity_dist(1, options.max_arity);
  for (;;) {
    const int k = factor_dist(rng);
    const int arity = arity_dist(rng);
    AbstractTerm t;
    t.factors.resize(k);
    t.args.resize(arity);
    Label next = 0;
    for (int a = 0; a < k; ++a) {
      const int targets = (k - a - 1) + arity;
      if (targets < 2) break;
      std::uniform_int_distribution<int> pick(0, targets - 1);
      const int x = pick(rng);
      int y = pick(rng);
      while (y == x) y = pick(rng);
      for (int target : {x, y}) {
        const Label l = next++;
        t.factors[a].upper[target == x ? 0 : 1] = l;
        if (target < k - a - 1) {
          t.factors[a + 1 + target].lower.push_back(l);
        } else {
          t.args[target - (k - a - 1)].push_back(l);
        }
      }
    }
    bool ok = next == 2 * k;
    for (const auto& arg : t.args) {
      if (arg.empty() || static_cast<int>(arg.size()) > options.max_labels_per_argument) ok = false;
    }
    if (!ok) continue;
    // Hide the ordered form: shuffle factors and rename labels.
    std::shuffle(t.factors.begin(), t.factors.end(), rng);
    std::vector<Label> perm(static_cast<std::size_t>(next));
    for (Label l = 0; l < next; ++l) perm[l] = l;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (auto& f : t.factors) {
      for (auto& l : f.lower) l = perm[l];
      for (auto& l : f.upper) l = perm[l];
    }
    for (auto& arg : t.args) {
      for (auto& l : arg) l = perm[l];
    }
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    int n = num(rng);
    if (n == 0) n = 1;
    t.coefficient = Rational(n, den(rng));
    t.coefficient.canonicalize();
    return t;
  }
}

}  // namespace starq
