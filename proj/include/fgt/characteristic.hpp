#pragma once

// Characteristic and relatively defined subgroups: closures, cores,
// normalizers, Sylow subgroups, O_pi, Frattini, the omega subgroup of a
// p-group, Fitting and generalized Fitting subgroups, hypercenters, and
// group-class classifiers.

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fgt/lattice.hpp"

namespace fgt {

// ---------------------------------------------------------------------------
// Prime sets

struct PrimeSet {
  std::vector<unsigned> primes; // sorted, unique
  enum class Role { pi_of_group, pi_of_section, parameter } role = Role::parameter;

  bool contains(unsigned p) const {
    return std::binary_search(primes.begin(), primes.end(), p);
  }
};

inline PrimeSet pi_of(unsigned long long n,
                      PrimeSet::Role role = PrimeSet::Role::pi_of_section) {
  PrimeSet s;
  s.primes = detail::prime_divisors(n);
  s.role = role;
  return s;
}

inline PrimeSet pi_of_group(const Group& g) {
  return pi_of(g.order(), PrimeSet::Role::pi_of_group);
}

// n is a pi-number iff every prime divisor of n lies in the set.
inline bool is_pi_number(unsigned long long n, const PrimeSet& pi) {
  for (unsigned p : detail::prime_divisors(n))
    if (!pi.contains(p))
      return false;
  return true;
}

inline unsigned long long p_part(unsigned long long n, unsigned p) {
  unsigned long long q = 1;
  while (n % p == 0) {
    n /= p;
    q *= p;
  }
  return q;
}

// ---------------------------------------------------------------------------
// Closures, cores, normalizers

// Smallest normal subgroup of g containing h.
inline Group normal_closure(const Group& g, const Group& h) {
  if (!g.contains_group(h))
    throw ContainmentError("normal_closure: H is not a subgroup of G");
  Group cur = h;
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Perm> ext = cur.generators();
    for (const Perm& w : cur.generators())
      for (const Perm& x : g.generators()) {
        Perm c = conjugated(w, x);
        if (!cur.contains(c)) {
          ext.push_back(c);
          grew = true;
        }
      }
    if (grew)
      cur = Group::from_generators(g.degree(), ext);
  }
  return cur;
}

// Subgroup generated by all [h, k], h in H, k in K: the normal closure in
// <H, K> of the generator commutators. For K = G the result is checked to
// be normal in G and to satisfy H^G = H [H, G].
inline Group commutator_subgroup(const Group& g, const Group& h, const Group& k) {
  if (!g.contains_group(h) || !g.contains_group(k))
    throw ContainmentError("commutator_subgroup: arguments must be subgroups of G");
  Group ambient = join_groups(h, k);
  std::vector<Perm> seed;
  for (const Perm& a : h.generators())
    for (const Perm& b : k.generators())
      seed.push_back(commutator_elem(a, b));
  Group comm = normal_closure(ambient, group_generated_by(g.degree(), seed));
  bool k_is_g = k.order() == g.order() && k.fingerprint() == g.fingerprint();
  if (k_is_g) {
    if (!comm.is_normal_in(g))
      throw InternalError("commutator_subgroup: [H,G] is not normal in G");
    Group ncl = normal_closure(g, h);
    if (!ncl.same_group(join_groups(h, comm)))
      throw InternalError("commutator_subgroup: H^G != H [H,G]");
  }
  return comm;
}

// [H, G], cached in g by the fingerprint of h.
inline Group commutator_with_group(const Group& g, const Group& h) {
  auto ptr = g.cached<Group>(
      "commutator:" + std::to_string(h.fingerprint()), [&]() {
        return std::make_shared<const Group>(commutator_subgroup(g, h, g));
      });
  return *ptr;
}

inline Group derived_subgroup(const Group& g) {
  auto ptr = g.cached<Group>("derived", [&]() {
    return std::make_shared<const Group>(commutator_subgroup(g, g, g));
  });
  return *ptr;
}

// Largest normal subgroup of g inside h, the kernel of the action on the
// cosets of h.
inline Group core(const Group& g, const Group& h) {
  if (!g.contains_group(h))
    throw ContainmentError("core: H is not a subgroup of G");
  unsigned long long index = g.order() / h.order();
  if (index > limits().enumeration_bound)
    throw CapacityError("core: index " + std::to_string(index) +
                        " exceeds the enumeration bound " +
                        std::to_string(limits().enumeration_bound));
  // kernel of the coset action = intersection of the conjugates over a
  // right transversal
  std::vector<Perm> reps{Perm(g.degree())};
  std::unordered_set<Perm> seen_canon;
  const auto& h_elems = h.elements();
  seen_canon.insert(detail::coset_canon(h_elems, reps[0]));
  for (std::size_t head = 0; head < reps.size(); ++head) {
    for (const Perm& x : g.generators()) {
      Perm s = reps[head].then(x);
      if (seen_canon.insert(detail::coset_canon(h_elems, s)).second)
        reps.push_back(s);
    }
  }
  std::vector<Perm> cur = h_elems;
  for (const Perm& r : reps) {
    std::vector<Perm> conj;
    conj.reserve(cur.size());
    for (const Perm& e : cur)
      conj.push_back(conjugated(e, r));
    std::sort(conj.begin(), conj.end());
    cur = intersect_elements(cur, conj);
    if (cur.size() == 1)
      break;
  }
  return Group::from_element_set(g.degree(), cur);
}

inline Group normalizer(const Group& g, const Group& h) {
  if (!g.contains_group(h))
    throw ContainmentError("normalizer: H is not a subgroup of G");
  detail::require_enumeration_bound(g, "normalizer");
  std::vector<Perm> out;
  for (const Perm& x : g.elements()) {
    bool ok = true;
    for (const Perm& hh : h.generators())
      if (!h.contains(conjugated(hh, x))) {
        ok = false;
        break;
      }
    if (ok)
      out.push_back(x);
  }
  return Group::from_element_set(g.degree(), out);
}

inline unsigned long long normalizer_order(const Group& g, const Group& h) {
  detail::require_enumeration_bound(g, "normalizer");
  unsigned long long count = 0;
  for (const Perm& x : g.elements()) {
    bool ok = true;
    for (const Perm& hh : h.generators())
      if (!h.contains(conjugated(hh, x))) {
        ok = false;
        break;
      }
    if (ok)
      ++count;
  }
  return count;
}

inline Group centralizer(const Group& g, const Group& h) {
  detail::require_enumeration_bound(g, "centralizer");
  std::vector<Perm> out;
  for (const Perm& x : g.elements()) {
    bool ok = true;
    for (const Perm& hh : h.generators())
      if (x.then(hh) != hh.then(x)) {
        ok = false;
        break;
      }
    if (ok)
      out.push_back(x);
  }
  return Group::from_element_set(g.degree(), out);
}

inline Group center(const Group& g) {
  auto ptr = g.cached<Group>("center", [&]() {
    return std::make_shared<const Group>(centralizer(g, g));
  });
  return *ptr;
}

// ---------------------------------------------------------------------------
// Sylow subgroups

// A Sylow p-subgroup, grown deterministically: start from a maximal-order
// p-element and repeatedly extend inside the normalizer until the full
// p-part of |G| is reached.
inline Group sylow(const Group& g, unsigned p) {
  if (!is_prime(p))
    throw InvalidArgument("sylow: " + std::to_string(p) + " is not prime");
  auto ptr = g.cached<Group>("sylow:" + std::to_string(p), [&]() {
    unsigned long long target = p_part(g.order(), p);
    if (target == 1)
      return std::make_shared<const Group>(trivial_group(g.degree()));
    detail::require_enumeration_bound(g, "sylow");
    Perm best;
    unsigned long long best_ord = 1;
    for (const Perm& e : g.elements()) {
      unsigned long long o = e.element_order();
      if (o > best_ord && p_part(o, p) == o) {
        best = e;
        best_ord = o;
      }
    }
    Group cur = Group::from_generators(g.degree(), {best});
    while (cur.order() < target) {
      Group n = normalizer(g, cur);
      bool extended = false;
      for (const Perm& x : n.elements()) {
        if (cur.contains(x))
          continue;
        Group bigger = join_groups(cur, Group::from_generators(g.degree(), {x}));
        if (bigger.order() == p_part(bigger.order(), p) &&
            bigger.order() > cur.order()) {
          cur = bigger;
          extended = true;
          break;
        }
      }
      if (!extended)
        throw InternalError("sylow: climb stalled below the full p-part");
    }
    return std::make_shared<const Group>(cur);
  });
  return *ptr;
}

// All conjugates of the computed Sylow p-subgroup.
inline std::shared_ptr<const std::vector<Group>> sylow_conjugates(const Group& g,
                                                                  unsigned p) {
  using Groups = std::vector<Group>;
  return g.cached<Groups>("sylow_conjugates:" + std::to_string(p), [&]() {
    Group s = sylow(g, p);
    auto out = std::make_shared<Groups>();
    std::unordered_set<std::uint64_t> seen;
    for (const Perm& x : g.elements()) {
      Group c = conjugate_group(s, x);
      if (seen.insert(c.fingerprint()).second)
        out->push_back(c);
    }
    detail::sort_members(*out);
    return std::shared_ptr<const Groups>(out);
  });
}

// ---------------------------------------------------------------------------
// O_pi and friends

// Largest normal pi-subgroup: the join of all normal subgroups whose order
// is a pi-number.
inline Group o_pi(const Group& g, const PrimeSet& pi) {
  auto lattice = normal_subgroups(g);
  Group acc = trivial_group(g.degree());
  for (const Group& n : lattice->members)
    if (is_pi_number(n.order(), pi))
      acc = join_groups(acc, n);
  if (!is_pi_number(acc.order(), pi))
    throw InternalError("o_pi: join of normal pi-subgroups is not a pi-group");
  return acc;
}

inline Group o_p(const Group& g, unsigned p) {
  auto ptr = g.cached<Group>("o_p:" + std::to_string(p), [&]() {
    PrimeSet s;
    s.primes = {p};
    return std::make_shared<const Group>(o_pi(g, s));
  });
  return *ptr;
}

inline Group o_p_prime(const Group& g, unsigned p) {
  auto ptr = g.cached<Group>("o_p_prime:" + std::to_string(p), [&]() {
    PrimeSet s = pi_of_group(g);
    s.primes.erase(std::remove(s.primes.begin(), s.primes.end(), p),
                   s.primes.end());
    return std::make_shared<const Group>(o_pi(g, s));
  });
  return *ptr;
}

// F_p(G): the preimage of O_p(G / O_{p'}(G)).
inline Group f_p(const Group& g, unsigned p) {
  Group opp = o_p_prime(g, p);
  auto [q, epi] = quotient_group_cached(g, opp);
  return epi.preimage(o_p(q, p));
}

// ---------------------------------------------------------------------------
// Frattini and omega

// Intersection of all maximal subgroups. p-groups take the fast path via
// commutators and p-th powers; when full subgroup enumeration is feasible
// the two computations are cross-checked.
inline Group frattini(const Group& g) {
  auto ptr = g.cached<Group>("frattini", [&]() {
    if (g.order() == 1)
      return std::make_shared<const Group>(g);
    unsigned p = 0;
    bool p_grp = g.is_prime_power_order(&p);
    if (p_grp) {
      Group fast = detail::p_group_frattini(g, p);
      if (g.order() <= limits().subgroup_bound) {
        auto all = all_subgroups(g);
        std::vector<Perm> cur = g.elements();
        for (const Group& m : all.members) {
          if (m.order() == g.order())
            continue;
          bool maximal = true;
          for (const Group& mid : all.members)
            if (mid.order() > m.order() && mid.order() < g.order() &&
                mid.contains_group(m)) {
              maximal = false;
              break;
            }
          if (maximal)
            cur = intersect_elements(cur, m.elements());
        }
        Group general = Group::from_element_set(g.degree(), cur);
        if (!general.same_group(fast))
          throw InternalError("frattini: p-group fast path disagrees with "
                              "maximal-subgroup intersection");
      }
      return std::make_shared<const Group>(fast);
    }
    if (g.order() > limits().subgroup_bound)
      throw CapacityError("frattini: order " + std::to_string(g.order()) +
                          " exceeds the subgroup bound " +
                          std::to_string(limits().subgroup_bound));
    auto all = all_subgroups(g);
    std::vector<Perm> cur = g.elements();
    for (const Group& m : all.members) {
      if (m.order() == g.order())
        continue;
      bool maximal = true;
      for (const Group& mid : all.members)
        if (mid.order() > m.order() && mid.order() < g.order() &&
            mid.contains_group(m)) {
          maximal = false;
          break;
        }
      if (maximal)
        cur = intersect_elements(cur, m.elements());
    }
    return std::make_shared<const Group>(Group::from_element_set(g.degree(), cur));
  });
  return *ptr;
}

// For a non-abelian 2-group: generated by the elements with x^4 = 1;
// otherwise generated by the elements with x^p = 1.
inline Group omega(const Group& p_grp) {
  unsigned p = 0;
  if (p_grp.order() == 1)
    return p_grp;
  if (!p_grp.is_prime_power_order(&p))
    throw InvalidArgument("omega: order " + std::to_string(p_grp.order()) +
                          " is not a prime power");
  unsigned long long bound =
      (p == 2 && !p_grp.is_abelian()) ? 4ull : static_cast<unsigned long long>(p);
  std::vector<Perm> gens;
  for (const Perm& e : p_grp.elements())
    if (bound % e.element_order() == 0)
      gens.push_back(e);
  return group_generated_by(p_grp.degree(), gens);
}

// ---------------------------------------------------------------------------
// Fitting, layer, generalized Fitting

inline bool is_nilpotent(const Group& g) {
  for (unsigned p : pi_of_group(g).primes)
    if (!sylow(g, p).is_normal_in(g))
      return false;
  return true;
}

inline bool is_soluble(const Group& g) {
  Group cur = g;
  while (cur.order() > 1) {
    Group next = derived_subgroup(cur);
    if (next.order() == cur.order())
      return false;
    cur = next;
  }
  return true;
}

inline bool is_perfect(const Group& g) {
  return derived_subgroup(g).order() == g.order();
}

inline bool is_simple(const Group& g) {
  return g.order() > 1 && normal_subgroups(g)->members.size() == 2;
}

inline bool is_quasisimple(const Group& g) {
  if (g.order() == 1 || !is_perfect(g))
    return false;
  Group z = center(g);
  auto [q, epi] = quotient_group_cached(g, z);
  return is_simple(q);
}

// F(G): product of the O_p(G); checked to be nilpotent.
inline Group fitting(const Group& g) {
  auto ptr = g.cached<Group>("fitting", [&]() {
    Group acc = trivial_group(g.degree());
    for (unsigned p : pi_of_group(g).primes)
      acc = join_groups(acc, o_p(g, p));
    if (!is_nilpotent(acc))
      throw InternalError("fitting: join of the O_p is not nilpotent");
    return std::make_shared<const Group>(acc);
  });
  return *ptr;
}

namespace detail {

// Subnormal quasisimple subgroups, by recursive descent through normal
// lattices. Soluble branches cannot contain any and are pruned.
inline void collect_components(const Group& g,
                               std::map<std::uint64_t, Group>& out) {
  if (is_soluble(g))
    return;
  if (is_quasisimple(g))
    out.emplace(g.fingerprint(), g);
  for (const Group& n : normal_subgroups(g)->members) {
    if (n.order() == g.order() || n.order() == 1)
      continue;
    collect_components(n, out);
  }
}

} // namespace detail

// (E(G), F*(G)): the layer and the generalized Fitting subgroup
// F*(G) = F(G) E(G). The centralizer property C_G(F*(G)) <= F*(G) is
// checked on every call.
inline std::pair<Group, Group> layer_and_f_star(const Group& g) {
  using Pair = std::pair<Group, Group>;
  auto ptr = g.cached<Pair>("layer_f_star", [&]() {
    std::map<std::uint64_t, Group> comps;
    detail::collect_components(g, comps);
    Group layer = trivial_group(g.degree());
    for (const auto& [fp, c] : comps)
      layer = join_groups(layer, c);
    if (layer.order() > 1 && !is_perfect(layer))
      throw InternalError("layer_and_f_star: E(G) is neither perfect nor trivial");
    Group f_star = join_groups(fitting(g), layer);
    if (!centralizer(g, f_star).elements().empty() &&
        !f_star.contains_group(centralizer(g, f_star)))
      throw InternalError("layer_and_f_star: C_G(F*(G)) is not inside F*(G)");
    return std::make_shared<const Pair>(layer, f_star);
  });
  return *ptr;
}

inline Group layer(const Group& g) { return layer_and_f_star(g).first; }
inline Group f_star(const Group& g) { return layer_and_f_star(g).second; }

inline bool is_p_soluble(const Group& g, unsigned p) {
  for (const ChiefFactorPair& pr : *chief_factor_pairs(g)) {
    unsigned long long n = pr.factor_order;
    bool p_number = p_part(n, p) == n;
    bool p_prime_number = n % p != 0;
    if (!p_number && !p_prime_number)
      return false;
  }
  return true;
}

// F*_p(G), read as the preimage of F*(G / O_{p'}(G)). When G is p-soluble
// with O_{p'}(G) = 1 the result is checked against O_p(G).
inline Group f_p_star(const Group& g, unsigned p) {
  auto ptr = g.cached<Group>("f_p_star:" + std::to_string(p), [&]() {
    Group opp = o_p_prime(g, p);
    auto [q, epi] = quotient_group_cached(g, opp);
    Group result = epi.preimage(f_star(q));
    if (opp.order() == 1 && is_p_soluble(g, p) &&
        !result.same_group(o_p(g, p)))
      throw InternalError("f_p_star: p-soluble case disagrees with O_p");
    return std::make_shared<const Group>(result);
  });
  return *ptr;
}

// ---------------------------------------------------------------------------
// Hypercenters

namespace detail {

// Ascending construction over the normal lattice. step_admits decides
// whether a covering factor of the current term may be absorbed;
// below_admits re-verifies every covering pair below the result.
template <typename Admit>
inline Group hypercenter_ascending(const Group& g, Admit admit) {
  Group z = trivial_group(g.degree());
  bool grew = true;
  while (grew) {
    grew = false;
    Group next = z;
    for (const Group& m : normal_covers_of(g, z)) {
      unsigned long long factor = m.order() / z.order();
      if (admit(factor))
        next = join_groups(next, m);
    }
    if (next.order() > z.order()) {
      z = next;
      grew = true;
    }
  }
  // post-verification over all covering pairs below the result
  for (const ChiefFactorPair& pr : *chief_factor_pairs(g)) {
    if (!z.contains_group(pr.upper))
      continue;
    if (!admit(pr.factor_order))
      throw InternalError("hypercenter: covering pair below the result has an "
                          "inadmissible factor");
  }
  return z;
}

} // namespace detail

// Largest normal subgroup all of whose chief factors below it are cyclic
// (equivalently, of prime order).
inline Group hypercenter_u(const Group& g) {
  auto ptr = g.cached<Group>("z_u", [&]() {
    return std::make_shared<const Group>(detail::hypercenter_ascending(
        g, [](unsigned long long n) { return is_prime(n); }));
  });
  return *ptr;
}

// Largest normal subgroup whose p-chief factors below it have order p.
inline Group hypercenter_pu(const Group& g, unsigned p) {
  auto ptr = g.cached<Group>("z_pu:" + std::to_string(p), [&]() {
    return std::make_shared<const Group>(detail::hypercenter_ascending(
        g, [p](unsigned long long n) { return n % p != 0 || n == p; }));
  });
  return *ptr;
}

// ---------------------------------------------------------------------------
// Classifiers

struct Classification {
  bool supersoluble = false;
  bool p_supersoluble = false;
  bool p_nilpotent = false;
  bool p_soluble = false;
  bool nilpotent = false;
};

inline Classification classify(const Group& g, unsigned p) {
  Classification c;
  c.supersoluble = true;
  c.p_supersoluble = true;
  for (const ChiefFactorPair& pr : *chief_factor_pairs(g)) {
    if (!is_prime(pr.factor_order))
      c.supersoluble = false;
    if (pr.factor_order % p == 0 && pr.factor_order != p)
      c.p_supersoluble = false;
  }
  c.p_soluble = is_p_soluble(g, p);
  unsigned long long pp = p_part(g.order(), p);
  c.p_nilpotent = o_p_prime(g, p).order() == g.order() / pp;
  c.nilpotent = fitting(g).order() == g.order();
  return c;
}

// Largest soluble normal subgroup.
inline Group soluble_radical(const Group& g) {
  auto ptr = g.cached<Group>("soluble_radical", [&]() {
    Group acc = trivial_group(g.degree());
    for (const Group& n : normal_subgroups(g)->members)
      if (is_soluble(n))
        acc = join_groups(acc, n);
    if (!is_soluble(acc))
      throw InternalError("soluble_radical: join of soluble normals is not soluble");
    return std::make_shared<const Group>(acc);
  });
  return *ptr;
}

// ---------------------------------------------------------------------------
// Tower entries (CLI / report surface)

struct TowerEntry {
  enum class Label {
    center,
    derived,
    frattini,
    omega,
    o_pi,
    fitting,
    layer,
    f_star,
    f_p_star,
    z_u,
    z_pu,
    sylow,
    normal_closure,
    core,
  };
  Label label;
  Group subgroup;
  std::vector<unsigned> parameters; // prime or prime set, when applicable
};

inline const char* tower_label_name(TowerEntry::Label l) {
  switch (l) {
  case TowerEntry::Label::center: return "Z";
  case TowerEntry::Label::derived: return "derived";
  case TowerEntry::Label::frattini: return "Phi";
  case TowerEntry::Label::omega: return "Omega";
  case TowerEntry::Label::o_pi: return "O_pi";
  case TowerEntry::Label::fitting: return "F";
  case TowerEntry::Label::layer: return "E";
  case TowerEntry::Label::f_star: return "F*";
  case TowerEntry::Label::f_p_star: return "F_p*";
  case TowerEntry::Label::z_u: return "Z_U";
  case TowerEntry::Label::z_pu: return "Z_pU";
  case TowerEntry::Label::sylow: return "Syl";
  case TowerEntry::Label::normal_closure: return "ncl";
  case TowerEntry::Label::core: return "core";
  }
  return "?";
}

inline TowerEntry make_tower_entry(TowerEntry::Label label, const Group& ambient,
                                   Group subgroup, std::vector<unsigned> params = {}) {
  bool needs_normal = label != TowerEntry::Label::sylow &&
                      label != TowerEntry::Label::normal_closure &&
                      label != TowerEntry::Label::core;
  if (needs_normal && !subgroup.is_normal_in(ambient))
    throw InternalError(std::string("tower entry ") + tower_label_name(label) +
                        " is not normal in the ambient group");
  return TowerEntry{label, std::move(subgroup), std::move(params)};
}

// The standard tower printed by the CLI info command.
inline std::vector<TowerEntry> characteristic_tower(const Group& g) {
  std::vector<TowerEntry> out;
  using L = TowerEntry::Label;
  out.push_back(make_tower_entry(L::center, g, center(g)));
  out.push_back(make_tower_entry(L::derived, g, derived_subgroup(g)));
  if (g.order() <= limits().subgroup_bound || g.is_prime_power_order())
    out.push_back(make_tower_entry(L::frattini, g, frattini(g)));
  out.push_back(make_tower_entry(L::fitting, g, fitting(g)));
  auto [e, fs] = layer_and_f_star(g);
  out.push_back(make_tower_entry(L::layer, g, e));
  out.push_back(make_tower_entry(L::f_star, g, fs));
  out.push_back(make_tower_entry(L::z_u, g, hypercenter_u(g)));
  for (unsigned p : pi_of_group(g).primes) {
    out.push_back(make_tower_entry(L::sylow, g, sylow(g, p), {p}));
    out.push_back(make_tower_entry(L::f_p_star, g, f_p_star(g, p), {p}));
    out.push_back(make_tower_entry(L::z_pu, g, hypercenter_pu(g, p), {p}));
  }
  return out;
}

} // namespace fgt
