#include "soscert/groebner.hpp"

#include <algorithm>
#include <chrono>
#include <queue>
#include <tuple>
#include <unordered_map>

namespace soscert {

std::string to_string(GroebnerStatus s) {
  switch (s) {
    case GroebnerStatus::complete: return "complete";
    case GroebnerStatus::truncated: return "truncated";
    case GroebnerStatus::timed_out: return "timed_out";
  }
  return "?";
}

std::string to_string(SmoothnessStatus s) {
  switch (s) {
    case SmoothnessStatus::nonsingular: return "nonsingular";
    case SmoothnessStatus::not_certified: return "not_certified";
    case SmoothnessStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

Polynomial<Fp> reduce_mod_p(const QPoly& p) {
  return p.map_coefficients<Fp>([](const Rational& c) { return Fp(c); });
}

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
  std::optional<Clock::time_point> at;
  std::size_t ticks = 0;

  explicit Deadline(double seconds) {
    if (seconds > 0)
      at = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
  }
  void tick() {
    if (at && (++ticks & 1023U) == 0 && Clock::now() > *at) throw BudgetExceeded("groebner timeout");
  }
};

template <class F>
struct IPoly {
  std::vector<Monomial> mons;  // descending in the working order
  std::vector<F> coefs;

  bool empty() const { return mons.empty(); }
  const Monomial& lead() const { return mons.front(); }
};

template <class F>
IPoly<F> to_internal(const Polynomial<F>& p, MonomialOrder order) {
  std::vector<std::pair<Monomial, F>> terms(p.terms().begin(), p.terms().end());
  if (order.kind != MonomialOrderKind::degrevlex)
    std::sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) { return order.greater(a.first, b.first); });
  IPoly<F> out;
  for (auto& [m, c] : terms) {
    out.mons.push_back(m);
    out.coefs.push_back(std::move(c));
  }
  return out;
}

template <class F>
Polynomial<F> to_external(const IPoly<F>& p, const Variables& vars) {
  std::vector<std::pair<Monomial, F>> terms;
  terms.reserve(p.mons.size());
  for (std::size_t k = 0; k < p.mons.size(); ++k) terms.emplace_back(p.mons[k], p.coefs[k]);
  return Polynomial<F>::from_terms(vars, terms);
}

template <class F>
void make_monic(IPoly<F>& p) {
  if (p.empty()) return;
  const F inv = inverse(p.coefs.front());
  for (auto& c : p.coefs) c = c * inv;
}


template <class F>
class Reducer {
 public:
  explicit Reducer(MonomialOrder order) : order_(order) {}

  void set_basis(std::vector<const IPoly<F>*> basis) { basis_ = std::move(basis); }

  /// Reduces the sum of `terms` (duplicates allowed). With full = false only the leading
  /// term is reduced. Quotient terms are appended per basis position when requested.
  IPoly<F> reduce(const std::vector<std::pair<Monomial, F>>& terms, bool full,
                  std::vector<std::vector<std::pair<Monomial, F>>>* quotients, Deadline& deadline) const {
    auto cmp = [this](const Monomial& a, const Monomial& b) { return order_.greater(b, a); };
    std::priority_queue<Monomial, std::vector<Monomial>, decltype(cmp)> heap(cmp);
    std::unordered_map<Monomial, F, MonomialHash> acc;
    auto add = [&](const Monomial& m, const F& c) {
      auto [it, inserted] = acc.try_emplace(m, c);
      if (inserted) heap.push(m);
      else it->second += c;
    };
    for (const auto& [m, c] : terms) add(m, c);

    IPoly<F> out;
    while (!heap.empty()) {
      const Monomial m = heap.top();
      heap.pop();
      auto it = acc.find(m);
      F c = std::move(it->second);
      acc.erase(it);
      if (is_zero(c)) continue;
      deadline.tick();
      const std::optional<std::size_t> r = (full || out.empty()) ? find_reducer(m) : std::nullopt;
      if (!r) {
        out.mons.push_back(m);
        out.coefs.push_back(std::move(c));
        continue;
      }
      const IPoly<F>& g = *basis_[*r];
      const F q = c / g.coefs.front();
      const Monomial t = m / g.lead();
      if (quotients) (*quotients)[*r].emplace_back(t, q);
      for (std::size_t k = 1; k < g.mons.size(); ++k) add(t * g.mons[k], F(-(q * g.coefs[k])));
    }
    return out;
  }

  std::optional<std::size_t> find_reducer(const Monomial& m) const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i]->lead().divides(m)) return i;
    return std::nullopt;
  }

 private:
  MonomialOrder order_;
  std::vector<const IPoly<F>*> basis_;
};

template <class F>
std::vector<std::pair<Monomial, F>> s_polynomial_terms(const IPoly<F>& a, const IPoly<F>& b) {
  const Monomial l = a.lead().lcm(b.lead());
  const Monomial ta = l / a.lead(), tb = l / b.lead();
  const F ia = inverse(a.coefs.front()), ib = inverse(b.coefs.front());
  std::vector<std::pair<Monomial, F>> terms;
  terms.reserve(a.mons.size() + b.mons.size());
  for (std::size_t k = 1; k < a.mons.size(); ++k) terms.emplace_back(ta * a.mons[k], a.coefs[k] * ia);
  for (std::size_t k = 1; k < b.mons.size(); ++k) terms.emplace_back(tb * b.mons[k], F(-(b.coefs[k] * ib)));
  return terms;
}

template <class F>
std::vector<std::pair<Monomial, F>> terms_of(const IPoly<F>& p) {
  std::vector<std::pair<Monomial, F>> t;
  t.reserve(p.mons.size());
  for (std::size_t k = 0; k < p.mons.size(); ++k) t.emplace_back(p.mons[k], p.coefs[k]);
  return t;
}

struct Pair {
  std::size_t i, j;
  Monomial lcm;
};

template <class F>
class Buchberger {
 public:
  Buchberger(MonomialOrder order, const GroebnerOptions& opts)
      : order_(order), opts_(opts), deadline_(opts.timeout_seconds), reducer_(order) {}

  void add_generator(IPoly<F> p) {
    refresh_reducer();
    p = reducer_.reduce(terms_of(p), true, nullptr, deadline_);
    if (p.empty()) return;
    make_monic(p);
    insert(std::move(p));
  }

  /// Returns false when stopped by the degree bound with pairs left.
  bool run(std::size_t& reduced, std::size_t& skipped) {
    while (!pairs_.empty()) {
      auto best = std::min_element(pairs_.begin(), pairs_.end(), [&](const Pair& a, const Pair& b) {
        if (a.lcm.degree() != b.lcm.degree()) return a.lcm.degree() < b.lcm.degree();
        if (a.lcm != b.lcm) return order_.greater(b.lcm, a.lcm);
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
      });
      if (opts_.degree_bound && best->lcm.degree() > *opts_.degree_bound) {
        skipped = skipped_;
        return false;
      }
      const Pair p = *best;
      pairs_.erase(best);
      refresh_reducer();
      IPoly<F> h = reducer_.reduce(s_polynomial_terms(polys_[p.i], polys_[p.j]), true, nullptr, deadline_);
      ++reduced;
      if (h.empty()) continue;
      make_monic(h);
      insert(std::move(h));
    }
    skipped = skipped_;
    return true;
  }

  std::vector<IPoly<F>> reduced_basis() {
    std::vector<IPoly<F>> out;
    for (std::size_t i = 0; i < polys_.size(); ++i)
      if (active_[i]) out.push_back(polys_[i]);
    std::sort(out.begin(), out.end(), [&](const IPoly<F>& a, const IPoly<F>& b) { return order_.greater(a.lead(), b.lead()); });
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::vector<const IPoly<F>*> others;
      for (std::size_t j = 0; j < out.size(); ++j)
        if (j != i) others.push_back(&out[j]);
      Reducer<F> r(order_);
      r.set_basis(others);
      IPoly<F> g = r.reduce(terms_of(out[i]), true, nullptr, deadline_);
      make_monic(g);
      out[i] = std::move(g);
    }
    return out;
  }

  std::size_t skipped() const { return skipped_; }

 private:
  void refresh_reducer() {
    std::vector<const IPoly<F>*> b;
    for (std::size_t i = 0; i < polys_.size(); ++i)
      if (active_[i]) b.push_back(&polys_[i]);
    reducer_.set_basis(std::move(b));
  }

  // Gebauer-Moeller update.
  void insert(IPoly<F> h) {
    const std::size_t hi = polys_.size();
    polys_.push_back(std::move(h));
    active_.push_back(true);
    const Monomial lh = polys_[hi].lead();

    std::vector<Pair> c;
    for (std::size_t g = 0; g < hi; ++g)
      if (active_[g]) c.push_back({g, hi, lh.lcm(polys_[g].lead())});
    std::vector<Pair> d;
    for (std::size_t k = 0; k < c.size(); ++k) {
      const bool disjoint = lh.gcd(polys_[c[k].i].lead()).is_one();
      bool keep = disjoint;
      if (!keep) {
        keep = true;
        for (std::size_t l = k + 1; l < c.size() && keep; ++l)
          if (c[l].lcm.divides(c[k].lcm)) keep = false;
        for (const Pair& q : d)
          if (keep && q.lcm.divides(c[k].lcm)) keep = false;
      }
      if (keep) d.push_back(c[k]);
      else ++skipped_;
    }
    std::vector<Pair> kept;
    for (const Pair& p : pairs_) {
      const bool drop = lh.divides(p.lcm) && polys_[p.i].lead().lcm(lh) != p.lcm && polys_[p.j].lead().lcm(lh) != p.lcm;
      if (drop) ++skipped_;
      else kept.push_back(p);
    }
    for (const Pair& p : d) {
      if (lh.gcd(polys_[p.i].lead()).is_one()) ++skipped_;
      else kept.push_back(p);
    }
    pairs_ = std::move(kept);
    for (std::size_t g = 0; g < hi; ++g)
      if (active_[g] && lh.divides(polys_[g].lead())) active_[g] = false;
  }

  MonomialOrder order_;
  GroebnerOptions opts_;
  Deadline deadline_;
  Reducer<F> reducer_;
  std::vector<IPoly<F>> polys_;
  std::vector<bool> active_;
  std::vector<Pair> pairs_;
  std::size_t skipped_ = 0;
};

template <class F>
std::vector<IPoly<F>> internal_basis(const GroebnerBasis<F>& g) {
  std::vector<IPoly<F>> out;
  out.reserve(g.elements.size());
  for (const auto& e : g.elements) out.push_back(to_internal(e, g.order));
  return out;
}

template <class F>
Division<F> divide_internal(const Polynomial<F>& p, const GroebnerBasis<F>& g, const std::vector<IPoly<F>>& basis) {
  Reducer<F> r(g.order);
  std::vector<const IPoly<F>*> ptrs;
  for (const auto& b : basis) ptrs.push_back(&b);
  r.set_basis(ptrs);
  std::vector<std::vector<std::pair<Monomial, F>>> q(basis.size());
  Deadline none(0);
  const IPoly<F> rem = r.reduce(terms_of(to_internal(p, g.order)), true, &q, none);
  Division<F> out;
  for (const auto& terms : q) out.quotients.push_back(Polynomial<F>::from_terms(g.vars, terms));
  out.remainder = to_external(rem, g.vars);
  return out;
}

}  // namespace

template <class F>
Monomial leading_monomial(const Polynomial<F>& p, MonomialOrder order) {
  if (p.is_zero()) throw InputError("leading monomial of the zero polynomial");
  Monomial best = p.terms().front().first;
  for (const auto& [m, c] : p.terms())
    if (order.greater(m, best)) best = m;
  return best;
}

template <class F>
GroebnerBasis<F> buchberger(const Ideal<F>& ideal, const GroebnerOptions& options) {
  if (ideal.generators.empty()) throw InputError("ideal needs at least one generator");
  const Variables vars = ideal.generators.front().variables();
  for (const auto& g : ideal.generators) {
    if (!(g.variables() == vars)) throw InputError("generators over different variable lists");
    if (options.degree_bound && !g.is_homogeneous()) throw InputError("degree bound requires homogeneous generators");
  }
  const auto start = Clock::now();
  GroebnerBasis<F> out;
  out.vars = vars;
  out.order = ideal.order;
  out.degree_bound = options.degree_bound;
  Buchberger<F> bb(ideal.order, options);
  try {
    std::vector<IPoly<F>> gens;
    for (const auto& g : ideal.generators)
      if (!g.is_zero()) gens.push_back(to_internal(g, ideal.order));
    std::sort(gens.begin(), gens.end(), [&](const IPoly<F>& a, const IPoly<F>& b) {
      return a.lead().degree() < b.lead().degree();
    });
    for (auto& g : gens) bb.add_generator(std::move(g));
    const bool finished = bb.run(out.pairs_reduced, out.pairs_skipped);
    out.status = finished ? GroebnerStatus::complete : GroebnerStatus::truncated;
    for (const auto& e : bb.reduced_basis()) out.elements.push_back(to_external(e, vars));
  } catch (const BudgetExceeded&) {
    out.status = GroebnerStatus::timed_out;
    out.pairs_skipped = bb.skipped();
  }
  out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

template <class F>
Division<F> divide(const Polynomial<F>& p, const GroebnerBasis<F>& g) {
  return divide_internal(p, g, internal_basis(g));
}

template <class F>
Polynomial<F> normal_form(const Polynomial<F>& p, const GroebnerBasis<F>& g) {
  return divide(p, g).remainder;
}

template <class F>
bool satisfies_buchberger_criterion(const GroebnerBasis<F>& g) {
  const auto basis = internal_basis(g);
  Reducer<F> r(g.order);
  std::vector<const IPoly<F>*> ptrs;
  for (const auto& b : basis) ptrs.push_back(&b);
  r.set_basis(ptrs);
  Deadline none(0);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      const Monomial l = basis[i].lead().lcm(basis[j].lead());
      if (g.degree_bound && g.status == GroebnerStatus::truncated && l.degree() > *g.degree_bound) continue;
      if (!r.reduce(s_polynomial_terms(basis[i], basis[j]), true, nullptr, none).empty()) return false;
    }
  return true;
}

template <class F>
std::optional<PowerMembership<F>> variable_power_membership(const GroebnerBasis<F>& g, std::size_t var, unsigned max_n) {
  if (max_n < 1) throw InputError("max_n must be at least 1");
  if (var >= g.vars.size()) throw InputError("variable index out of range");
  if (!g.decides_degree(max_n)) throw InputError("basis does not decide membership in degree " + std::to_string(max_n));
  const auto basis = internal_basis(g);
  const Monomial x = Monomial::variable(var);
  // var^n = var * (sum q_i g_i + r) and var * r = sum q'_i g_i + r'.
  Division<F> acc{std::vector<Polynomial<F>>(basis.size(), Polynomial<F>(g.vars)), Polynomial<F>::constant(g.vars, F(1L))};
  for (unsigned n = 1; n <= max_n; ++n) {
    Division<F> step = divide_internal(acc.remainder.times_monomial(x), g, basis);
    for (std::size_t i = 0; i < basis.size(); ++i) acc.quotients[i] = acc.quotients[i].times_monomial(x) + step.quotients[i];
    acc.remainder = std::move(step.remainder);
    if (acc.remainder.is_zero()) return PowerMembership<F>{n, std::move(acc)};
  }
  return std::nullopt;
}

template <class F>
std::vector<Polynomial<F>> jacobian_generators(const Polynomial<F>& h) {
  std::vector<Polynomial<F>> out;
  for (std::size_t v = 0; v < h.variables().size(); ++v) out.push_back(partial_derivative(h, v));
  return out;
}

template <class F>
SmoothnessResult<F> projective_smoothness(const Polynomial<F>& h, unsigned max_n, double timeout_seconds) {
  if (h.is_zero() || !h.is_homogeneous()) throw InputError("smoothness check needs a nonzero homogeneous form");
  SmoothnessResult<F> out;
  Ideal<F> ideal;
  for (auto& p : jacobian_generators(h))
    if (!p.is_zero()) ideal.generators.push_back(std::move(p));
  if (ideal.generators.empty()) {
    out.status = SmoothnessStatus::not_certified;
    out.diagnostics = "constant form";
    return out;
  }
  out.basis = buchberger(ideal, {max_n, timeout_seconds});
  if (out.basis.status == GroebnerStatus::timed_out) {
    out.diagnostics = "Groebner basis computation timed out";
    return out;
  }
  std::vector<std::string> missing;
  for (std::size_t v = 0; v < h.variables().size(); ++v) {
    auto m = variable_power_membership(out.basis, v, max_n);
    if (m) {
      out.exponents.push_back(m->exponent);
      out.transcripts.push_back(std::move(m->transcript));
    } else {
      out.exponents.push_back(std::nullopt);
      out.transcripts.push_back({});
      missing.push_back(h.variables().name(v));
    }
  }
  if (missing.empty()) {
    out.status = SmoothnessStatus::nonsingular;
    out.diagnostics = "every variable has a power in the Jacobian ideal";
  } else {
    out.status = SmoothnessStatus::not_certified;
    out.diagnostics = "no power <= " + std::to_string(max_n) + " in the Jacobian ideal for:";
    for (const auto& n : missing) out.diagnostics += " " + n;
  }
  return out;
}

template <class F>
bool verify_cofactors(const Polynomial<F>& target, const std::vector<Polynomial<F>>& gens,
                      const std::vector<Polynomial<F>>& quotients) {
  if (gens.size() != quotients.size()) return false;
  Polynomial<F> sum(target.variables());
  for (std::size_t i = 0; i < gens.size(); ++i) sum += quotients[i] * gens[i];
  return sum == target;
}

ModularSmoothness modular_smoothness(const QPoly& h, unsigned max_degree, double timeout_seconds) {
  if (h.is_zero() || !h.is_homogeneous()) throw InputError("smoothness check needs a nonzero homogeneous form");
  ModularSmoothness out;
  Ideal<Fp> ideal;
  for (const auto& g : jacobian_generators(h)) {
    if (g.is_zero()) continue;
    std::vector<Rational> coefs;
    for (const auto& t : g.terms()) coefs.push_back(t.second);
    ideal.generators.push_back(reduce_mod_p(g.scaled(primitive_scale(coefs))));
  }
  if (ideal.generators.empty()) {
    out.status = SmoothnessStatus::not_certified;
    out.diagnostics = "constant form";
    return out;
  }
  const auto g = buchberger(ideal, {max_degree, timeout_seconds});
  out.basis_size = g.elements.size();
  out.basis_status = g.status;
  out.seconds = g.seconds;
  if (g.status == GroebnerStatus::timed_out) {
    out.diagnostics = "Groebner basis computation mod p timed out";
    return out;
  }
  std::vector<Monomial> leads;
  for (const auto& e : g.elements) leads.push_back(leading_monomial(e, g.order));
  const std::size_t n = h.variables().size();
  for (unsigned d = 1; d <= max_degree && !out.vanishing_degree; ++d) {
    bool all = true;
    for (const auto& m : monomial_basis(n, d)) {
      if (std::none_of(leads.begin(), leads.end(), [&](const Monomial& l) { return l.divides(m); })) {
        all = false;
        break;
      }
    }
    if (all) out.vanishing_degree = d;
  }
  for (std::size_t v = 0; v < n; ++v) {
    auto m = variable_power_membership(g, v, max_degree);
    out.exponents.push_back(m ? std::optional<unsigned>(m->exponent) : std::nullopt);
  }
  if (out.vanishing_degree) {
    out.status = SmoothnessStatus::nonsingular;
    out.diagnostics = "every form of degree " + std::to_string(*out.vanishing_degree) + " lies in the Jacobian ideal";
  } else {
    out.status = SmoothnessStatus::not_certified;
    out.diagnostics = "some form of degree " + std::to_string(max_degree) + " lies outside the Jacobian ideal mod p";
  }
  return out;
}

#define SOSCERT_INSTANTIATE_GROEBNER(F)                                                                       \
  template Monomial leading_monomial<F>(const Polynomial<F>&, MonomialOrder);                                 \
  template GroebnerBasis<F> buchberger<F>(const Ideal<F>&, const GroebnerOptions&);                           \
  template Division<F> divide<F>(const Polynomial<F>&, const GroebnerBasis<F>&);                              \
  template Polynomial<F> normal_form<F>(const Polynomial<F>&, const GroebnerBasis<F>&);                       \
  template bool satisfies_buchberger_criterion<F>(const GroebnerBasis<F>&);                                   \
  template std::optional<PowerMembership<F>> variable_power_membership<F>(const GroebnerBasis<F>&, std::size_t, \
                                                                          unsigned);                          \
  template std::vector<Polynomial<F>> jacobian_generators<F>(const Polynomial<F>&);                           \
  template SmoothnessResult<F> projective_smoothness<F>(const Polynomial<F>&, unsigned, double);              \
  template bool verify_cofactors<F>(const Polynomial<F>&, const std::vector<Polynomial<F>>&,                  \
                                    const std::vector<Polynomial<F>>&);

SOSCERT_INSTANTIATE_GROEBNER(Rational)
SOSCERT_INSTANTIATE_GROEBNER(Fp)

}  // namespace soscert
