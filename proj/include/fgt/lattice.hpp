#pragma once

// Normal subgroup lattices, chief factor pairs, and bounded exhaustive
// subgroup enumeration.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fgt/constructions.hpp"
#include "fgt/group.hpp"

namespace fgt {

// Greedily reduces an arbitrary element list to a generating sequence.
// Unlike from_element_set the input need not be closed.
inline Group group_generated_by(unsigned degree, const std::vector<Perm>& elems) {
  std::vector<Perm> sorted(elems);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<Perm> gens;
  Group g = Group::from_generators(degree, {});
  for (const Perm& e : sorted) {
    if (e.is_identity() || g.contains(e))
      continue;
    gens.push_back(e);
    g = Group::from_generators(degree, gens);
  }
  return g;
}

struct SubgroupSet {
  Group ambient;
  std::vector<Group> members; // sorted by (order, fingerprint), deduplicated
  enum class Completeness { exhaustive, bounded_incomplete };
  Completeness certificate = Completeness::exhaustive;
};

struct ChiefFactorPair {
  Group lower; // K
  Group upper; // L, with L/K minimal normal in G/K
  unsigned long long factor_order = 0;
  std::vector<unsigned> factor_primes;
};

namespace detail {

inline std::vector<unsigned> prime_divisors(unsigned long long n) {
  std::vector<unsigned> out;
  for (unsigned long long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(static_cast<unsigned>(d));
      while (n % d == 0)
        n /= d;
    }
  }
  if (n > 1)
    out.push_back(static_cast<unsigned>(n));
  return out;
}

inline void sort_members(std::vector<Group>& v) {
  std::sort(v.begin(), v.end(),
            [](const Group& a, const Group& b) { return a.key() < b.key(); });
  v.erase(std::unique(v.begin(), v.end(),
                      [](const Group& a, const Group& b) {
                        return a.key() == b.key();
                      }),
          v.end());
}

inline void require_enumeration_bound(const Group& g, const char* what) {
  if (g.order() > limits().enumeration_bound)
    throw CapacityError(std::string(what) + ": group of order " +
                        std::to_string(g.order()) +
                        " exceeds the enumeration bound " +
                        std::to_string(limits().enumeration_bound));
}

} // namespace detail

// Conjugacy classes, each sorted, classes ordered by smallest member.
inline std::shared_ptr<const std::vector<std::vector<Perm>>>
conjugacy_classes(const Group& g) {
  using Classes = std::vector<std::vector<Perm>>;
  return g.cached<Classes>("conjugacy_classes", [&]() {
    detail::require_enumeration_bound(g, "conjugacy_classes");
    const auto& elems = g.elements();
    std::unordered_set<Perm> done;
    auto classes = std::make_shared<Classes>();
    for (const Perm& e : elems) {
      if (done.count(e))
        continue;
      std::vector<Perm> orbit{e};
      done.insert(e);
      for (std::size_t head = 0; head < orbit.size(); ++head) {
        for (const Perm& x : g.generators()) {
          Perm c = conjugated(orbit[head], x);
          if (done.insert(c).second)
            orbit.push_back(c);
        }
      }
      std::sort(orbit.begin(), orbit.end());
      classes->push_back(std::move(orbit));
    }
    return std::shared_ptr<const Classes>(classes);
  });
}

// Exhaustive normal subgroup lattice: all joins of normal closures of
// conjugacy classes, closed under join to a fixpoint.
inline std::shared_ptr<const SubgroupSet> normal_subgroups(const Group& g) {
  return g.cached<SubgroupSet>("normal_lattice", [&]() {
    detail::require_enumeration_bound(g, "normal_subgroups");
    auto classes = conjugacy_classes(g);
    std::vector<Group> atoms;
    for (const auto& cls : *classes) {
      if (cls.size() == 1 && cls.front().is_identity())
        continue;
      atoms.push_back(group_generated_by(g.degree(), cls));
    }
    std::map<std::pair<unsigned long long, std::uint64_t>, Group> found;
    Group triv = trivial_group(g.degree());
    found.emplace(triv.key(), triv);
    for (const Group& a : atoms)
      found.emplace(a.key(), a);
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<Group> snapshot;
      snapshot.reserve(found.size());
      for (const auto& [k, v] : found)
        snapshot.push_back(v);
      for (std::size_t i = 0; i < snapshot.size(); ++i)
        for (std::size_t j = i + 1; j < snapshot.size(); ++j) {
          Group jn = join_groups(snapshot[i], snapshot[j]);
          if (found.emplace(jn.key(), jn).second)
            grew = true;
        }
    }
    auto out = std::make_shared<SubgroupSet>();
    out->ambient = g;
    for (const auto& [k, v] : found)
      out->members.push_back(v);
    detail::sort_members(out->members);
    return std::shared_ptr<const SubgroupSet>(out);
  });
}

// The atoms of the normal lattice.
inline SubgroupSet minimal_normal_subgroups(const Group& g) {
  auto lattice = normal_subgroups(g);
  SubgroupSet out;
  out.ambient = g;
  for (const Group& n : lattice->members) {
    if (n.is_trivial())
      continue;
    bool minimal = true;
    for (const Group& m : lattice->members) {
      if (m.is_trivial() || m.key() == n.key())
        continue;
      if (m.order() < n.order() && n.contains_group(m)) {
        minimal = false;
        break;
      }
    }
    if (minimal)
      out.members.push_back(n);
  }
  detail::sort_members(out.members);
  return out;
}

// Normal subgroups covering z in the normal lattice of g; z must be normal.
inline std::vector<Group> normal_covers_of(const Group& g, const Group& z) {
  auto lattice = normal_subgroups(g);
  std::vector<Group> covers;
  for (const Group& m : lattice->members) {
    if (m.order() <= z.order() || !m.contains_group(z))
      continue;
    bool covering = true;
    for (const Group& mid : lattice->members) {
      if (mid.order() <= z.order() || mid.order() >= m.order())
        continue;
      if (mid.contains_group(z) && m.contains_group(mid)) {
        covering = false;
        break;
      }
    }
    if (covering)
      covers.push_back(m);
  }
  detail::sort_members(covers);
  return covers;
}

// ALL covering pairs (K, L) of the normal lattice, in deterministic order.
inline std::shared_ptr<const std::vector<ChiefFactorPair>>
chief_factor_pairs(const Group& g) {
  using Pairs = std::vector<ChiefFactorPair>;
  return g.cached<Pairs>("chief_pairs", [&]() {
    auto lattice = normal_subgroups(g);
    auto pairs = std::make_shared<Pairs>();
    const auto& ns = lattice->members;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      for (std::size_t j = 0; j < ns.size(); ++j) {
        const Group& k = ns[i];
        const Group& l = ns[j];
        if (l.order() <= k.order() || l.order() % k.order() != 0 ||
            !l.contains_group(k))
          continue;
        bool covering = true;
        for (const Group& mid : ns) {
          if (mid.order() <= k.order() || mid.order() >= l.order())
            continue;
          if (mid.contains_group(k) && l.contains_group(mid)) {
            covering = false;
            break;
          }
        }
        if (!covering)
          continue;
        ChiefFactorPair p;
        p.lower = k;
        p.upper = l;
        p.factor_order = l.order() / k.order();
        p.factor_primes = detail::prime_divisors(p.factor_order);
        pairs->push_back(std::move(p));
      }
    }
    std::sort(pairs->begin(), pairs->end(),
              [](const ChiefFactorPair& a, const ChiefFactorPair& b) {
                return std::make_pair(a.lower.key(), a.upper.key()) <
                       std::make_pair(b.lower.key(), b.upper.key());
              });
    return std::shared_ptr<const Pairs>(pairs);
  });
}

namespace detail {

struct SubgroupNode {
  std::vector<Perm> elements; // sorted
  std::vector<Perm> gens;
};

// Breadth-first closure growth over generating sets with fingerprint
// pruning. Enumerates every subgroup whose order divides n.
inline std::shared_ptr<const std::vector<SubgroupNode>>
subgroups_dividing(const Group& g, unsigned long long n) {
  using Nodes = std::vector<SubgroupNode>;
  return g.cached<Nodes>("subgroups_dividing:" + std::to_string(n), [&]() {
    if (g.order() > limits().subgroup_bound)
      throw CapacityError("subgroup enumeration: ambient order " +
                          std::to_string(g.order()) +
                          " exceeds the subgroup bound " +
                          std::to_string(limits().subgroup_bound));
    const auto& elems = g.elements();
    auto nodes = std::make_shared<Nodes>();
    std::unordered_set<std::uint64_t> seen;
    SubgroupNode triv;
    triv.elements = {Perm(g.degree())};
    nodes->push_back(triv);
    seen.insert(Group::from_element_set(g.degree(), triv.elements).fingerprint());
    for (std::size_t head = 0; head < nodes->size(); ++head) {
      // copy: nodes may reallocate while we append
      SubgroupNode node = (*nodes)[head];
      for (const Perm& e : elems) {
        if (sorted_contains(node.elements, e))
          continue;
        // closure of <node.gens, e>
        std::vector<Perm> gens = node.gens;
        gens.push_back(e);
        std::unordered_set<Perm> closure(node.elements.begin(),
                                         node.elements.end());
        std::vector<Perm> work(node.elements);
        closure.insert(e);
        work.push_back(e);
        bool pruned = false;
        for (std::size_t h = 0; h < work.size(); ++h) {
          for (const Perm& s : gens) {
            Perm next = work[h].then(s);
            if (closure.insert(next).second) {
              work.push_back(next);
              if (closure.size() > n) {
                pruned = true;
                break;
              }
            }
          }
          if (pruned)
            break;
        }
        if (pruned || n % closure.size() != 0)
          continue;
        std::vector<Perm> sorted(work);
        std::sort(sorted.begin(), sorted.end());
        std::uint64_t fp = Group::from_element_set(g.degree(), sorted).fingerprint();
        if (seen.insert(fp).second) {
          SubgroupNode nn;
          nn.elements = std::move(sorted);
          nn.gens = std::move(gens);
          nodes->push_back(std::move(nn));
        }
      }
    }
    return std::shared_ptr<const Nodes>(nodes);
  });
}

} // namespace detail

// Exhaustive set of subgroups of order n.
inline SubgroupSet subgroups_of_order(const Group& g, unsigned long long n) {
  if (n == 0 || g.order() % n != 0)
    throw InvalidArgument("subgroups_of_order: " + std::to_string(n) +
                          " does not divide the group order " +
                          std::to_string(g.order()));
  auto nodes = detail::subgroups_dividing(g, n);
  SubgroupSet out;
  out.ambient = g;
  for (const auto& node : *nodes)
    if (node.elements.size() == n)
      out.members.push_back(Group::from_element_set(g.degree(), node.elements));
  detail::sort_members(out.members);
  return out;
}

// Every subgroup of g.
inline SubgroupSet all_subgroups(const Group& g) {
  auto nodes = detail::subgroups_dividing(g, g.order());
  SubgroupSet out;
  out.ambient = g;
  for (const auto& node : *nodes)
    out.members.push_back(Group::from_element_set(g.degree(), node.elements));
  detail::sort_members(out.members);
  return out;
}

namespace detail {

// Frattini subgroup of a p-group: the normal closure of the subgroup
// generated by generator commutators and p-th powers.
inline Group p_group_frattini(const Group& p_grp, unsigned p) {
  std::vector<Perm> seed;
  const auto& gs = p_grp.generators();
  for (std::size_t i = 0; i < gs.size(); ++i) {
    for (std::size_t j = 0; j < gs.size(); ++j)
      if (i != j)
        seed.push_back(commutator_elem(gs[i], gs[j]));
    Perm pw = gs[i];
    for (unsigned k = 1; k < p; ++k)
      pw = pw.then(gs[i]);
    seed.push_back(pw);
  }
  Group cur = group_generated_by(p_grp.degree(), seed);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Perm> ext = cur.generators();
    for (const Perm& h : cur.generators())
      for (const Perm& x : gs) {
        Perm c = conjugated(h, x);
        if (!cur.contains(c)) {
          ext.push_back(c);
          grew = true;
        }
      }
    if (grew)
      cur = Group::from_generators(p_grp.degree(), ext);
  }
  return cur;
}

} // namespace detail

// All index-p subgroups of a p-group, as preimages of the hyperplanes of
// the elementary abelian quotient P/Phi(P).
inline SubgroupSet maximal_subgroups_p_group(const Group& p_grp) {
  unsigned p = 0;
  if (p_grp.order() == 1) {
    SubgroupSet out;
    out.ambient = p_grp;
    return out;
  }
  if (!p_grp.is_prime_power_order(&p))
    throw InvalidArgument("maximal_subgroups_p_group: order " +
                          std::to_string(p_grp.order()) +
                          " is not a prime power");
  Group phi = detail::p_group_frattini(p_grp, p);
  auto [q, epi] = quotient_group_cached(p_grp, phi);

  // coordinatize the elementary abelian quotient
  unsigned long long qorder = q.order();
  std::vector<Perm> basis;
  std::unordered_map<Perm, std::vector<unsigned>> coord;
  coord.emplace(Perm(q.degree()), std::vector<unsigned>{});
  for (const Perm& e : q.elements()) {
    if (coord.count(e))
      continue;
    // extend every known coordinate vector by powers of the new basis element
    std::size_t idx = basis.size();
    basis.push_back(e);
    std::vector<std::pair<Perm, std::vector<unsigned>>> snapshot(coord.begin(),
                                                                 coord.end());
    for (auto& [elem, vec] : snapshot) {
      Perm cur = elem;
      for (unsigned j = 1; j < p; ++j) {
        cur = cur.then(e);
        std::vector<unsigned> v = vec;
        v.resize(idx + 1, 0);
        v[idx] = j;
        coord.emplace(cur, std::move(v));
      }
    }
  }
  unsigned k = static_cast<unsigned>(basis.size());
  if (coord.size() != qorder)
    throw InternalError("maximal_subgroups_p_group: quotient is not elementary abelian");
  for (auto& [elem, vec] : coord)
    vec.resize(k, 0);

  SubgroupSet out;
  out.ambient = p_grp;
  if (k == 0)
    return out; // P = Phi(P) cannot happen for nontrivial p-groups
  // hyperplane functionals, first nonzero coefficient normalized to 1
  std::vector<std::vector<unsigned>> functionals;
  std::vector<unsigned> f(k, 0);
  std::function<void(unsigned)> gen = [&](unsigned pos) {
    if (pos == k) {
      for (unsigned c : f)
        if (c != 0) {
          functionals.push_back(f);
          return;
        }
      return;
    }
    bool leading_zero = true;
    for (unsigned i = 0; i < pos; ++i)
      if (f[i] != 0)
        leading_zero = false;
    for (unsigned c = 0; c < p; ++c) {
      if (leading_zero && c > 1)
        break; // normalize first nonzero coefficient to 1
      f[pos] = c;
      gen(pos + 1);
    }
    f[pos] = 0;
  };
  gen(0);

  for (const auto& phi_f : functionals) {
    std::vector<Perm> pre;
    for (const Perm& x : p_grp.elements()) {
      const auto& v = coord.at(epi.map(x));
      unsigned long long s = 0;
      for (unsigned i = 0; i < k; ++i)
        s += static_cast<unsigned long long>(phi_f[i]) * v[i];
      if (s % p == 0)
        pre.push_back(x);
    }
    out.members.push_back(Group::from_element_set(p_grp.degree(), pre));
  }
  detail::sort_members(out.members);
  for (const Group& m : out.members)
    if (m.order() * p != p_grp.order())
      throw InternalError("maximal_subgroups_p_group: member has wrong index");
  return out;
}

// Cyclic subgroups, deduplicated, sorted.
inline std::shared_ptr<const std::vector<Group>> cyclic_subgroups(const Group& g) {
  using Groups = std::vector<Group>;
  return g.cached<Groups>("cyclic_subgroups", [&]() {
    detail::require_enumeration_bound(g, "cyclic_subgroups");
    auto out = std::make_shared<Groups>();
    std::unordered_set<std::uint64_t> seen;
    for (const Perm& e : g.elements()) {
      Group c = Group::from_generators(g.degree(), {e});
      if (seen.insert(c.fingerprint()).second)
        out->push_back(c);
    }
    detail::sort_members(*out);
    return std::shared_ptr<const Groups>(out);
  });
}

} // namespace fgt
