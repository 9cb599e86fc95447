#pragma once

// Permutation groups backed by a base and strong generating set. The
// stabilizer chain is built with a deterministic Schreier-Sims: base points
// are the smallest moved points, orbits are explored breadth-first, and no
// randomization is used, so a given generator ordering always yields the
// same chain, order, and element stream.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "fgt/config.hpp"
#include "fgt/error.hpp"
#include "fgt/perm.hpp"

namespace fgt {

namespace detail {

struct ChainLevel {
  unsigned base = 0;
  std::vector<int> orbit_pos;       // point -> discovery index, -1 if outside
  std::vector<unsigned> orbit;      // points in discovery order
  std::vector<Perm> transversal;    // u with base^u = orbit[k]
};

class StabilizerChain {
public:
  static StabilizerChain build(unsigned degree, const std::vector<Perm>& gens) {
    StabilizerChain c;
    c.degree_ = degree;
    for (const Perm& g : gens) {
      if (g.degree() != degree)
        throw DegreeMismatch("generator degree " + std::to_string(g.degree()) +
                             " does not match group degree " +
                             std::to_string(degree));
      if (!g.is_identity())
        c.add_strong_generator(g);
    }
    if (c.levels_.empty())
      return c;

    // Verify levels bottom-up; a failed sift adds the residue as a strong
    // generator and drops back to the deepest level it dirties.
    int i = static_cast<int>(c.levels_.size()) - 1;
    while (i >= 0) {
      c.recompute_orbit(static_cast<std::size_t>(i));
      bool clean = true;
      auto& lv = c.levels_[static_cast<std::size_t>(i)];
      for (std::size_t k = 0; clean && k < lv.orbit.size(); ++k) {
        unsigned p = lv.orbit[k];
        const Perm u_p = lv.transversal[k];
        for (const auto& [s, f] : c.sgens_) {
          if (f < static_cast<std::size_t>(i))
            continue;
          unsigned q = s[p];
          const Perm& u_q = lv.transversal[static_cast<std::size_t>(lv.orbit_pos[q])];
          Perm h = u_p.then(s).then(u_q.inverse());
          if (h.is_identity())
            continue;
          auto [res, stop] = c.sift(h, static_cast<std::size_t>(i) + 1);
          if (!res.is_identity()) {
            std::size_t f_res = c.add_strong_generator(res);
            for (std::size_t l = static_cast<std::size_t>(i) + 1; l <= f_res && l < c.levels_.size(); ++l)
              c.recompute_orbit(l);
            i = static_cast<int>(f_res);
            clean = false;
            break;
          }
          (void)stop;
        }
      }
      if (clean)
        --i;
    }
    return c;
  }

  unsigned degree() const { return degree_; }

  unsigned long long order() const {
    unsigned long long o = 1;
    for (const auto& lv : levels_) {
      if (__builtin_mul_overflow(o, static_cast<unsigned long long>(lv.orbit.size()), &o))
        throw CapacityError("group order exceeds 2^64; beyond supported scale");
    }
    return o;
  }

  bool contains(const Perm& g) const {
    if (g.degree() != degree_)
      throw DegreeMismatch("membership test with degree " +
                           std::to_string(g.degree()) + " in group of degree " +
                           std::to_string(degree_));
    auto [res, stop] = sift(g, 0);
    return stop == levels_.size() && res.is_identity();
  }

  // Sift g through levels [from, end); returns the residue and the level at
  // which sifting stopped (levels_.size() if it ran through).
  std::pair<Perm, std::size_t> sift(Perm g, std::size_t from) const {
    for (std::size_t l = from; l < levels_.size(); ++l) {
      const auto& lv = levels_[l];
      unsigned p = g[lv.base];
      if (p == lv.base)
        continue;
      int k = lv.orbit_pos[p];
      if (k < 0)
        return {std::move(g), l};
      g = g.then(lv.transversal[static_cast<std::size_t>(k)].inverse());
    }
    return {std::move(g), levels_.size()};
  }

  const std::vector<std::pair<Perm, std::size_t>>& strong_generators() const {
    return sgens_;
  }
  std::size_t depth() const { return levels_.size(); }
  const ChainLevel& level(std::size_t i) const { return levels_[i]; }

private:
  // Returns the first base index the generator moves, extending the base
  // with its smallest moved point when it fixes all current base points.
  std::size_t add_strong_generator(const Perm& g) {
    std::size_t k = 0;
    while (k < levels_.size() && g[levels_[k].base] == levels_[k].base)
      ++k;
    if (k == levels_.size()) {
      ChainLevel lv;
      lv.base = g.min_moved();
      levels_.push_back(std::move(lv));
    }
    sgens_.emplace_back(g, k);
    return k;
  }

  void recompute_orbit(std::size_t i) {
    auto& lv = levels_[i];
    lv.orbit_pos.assign(degree_, -1);
    lv.orbit.clear();
    lv.transversal.clear();
    lv.orbit.push_back(lv.base);
    lv.orbit_pos[lv.base] = 0;
    lv.transversal.emplace_back(degree_);
    for (std::size_t head = 0; head < lv.orbit.size(); ++head) {
      unsigned p = lv.orbit[head];
      for (const auto& [s, f] : sgens_) {
        if (f < i)
          continue;
        unsigned q = s[p];
        if (lv.orbit_pos[q] < 0) {
          lv.orbit_pos[q] = static_cast<int>(lv.orbit.size());
          lv.orbit.push_back(q);
          lv.transversal.push_back(lv.transversal[head].then(s));
        }
      }
    }
  }

  unsigned degree_ = 0;
  std::vector<std::pair<Perm, std::size_t>> sgens_; // generator, first base moved
  std::vector<ChainLevel> levels_;
};

struct GroupImpl;

} // namespace detail

// Immutable after construction; cheap to copy (shared internals). Lazily
// computed caches are synchronized, so read-only sharing across threads is
// safe.
class Group {
public:
  Group() : Group(from_generators(0, {})) {}

  static Group from_generators(unsigned degree, std::vector<Perm> gens);

  // Builds a group from a closed element set, greedily reducing it to a
  // small generating sequence. Throws InternalError if the set was not
  // actually closed.
  static Group from_element_set(unsigned degree, const std::vector<Perm>& elems);

  unsigned degree() const;
  unsigned long long order() const;
  const std::vector<Perm>& generators() const;
  bool contains(const Perm& g) const;

  // All elements, sorted lexicographically by image array. Throws
  // CapacityError when order() exceeds the enumeration bound.
  const std::vector<Perm>& elements() const;

  // Canonical hash of the element set; requires enumeration.
  std::uint64_t fingerprint() const;
  std::pair<unsigned long long, std::uint64_t> key() const {
    return {order(), fingerprint()};
  }

  bool is_trivial() const { return order() == 1; }
  bool same_group(const Group& other) const {
    return order() == other.order() && degree() == other.degree() &&
           fingerprint() == other.fingerprint();
  }
  // every generator of sub lies in this group
  bool contains_group(const Group& sub) const {
    if (sub.degree() != degree())
      return false;
    for (const Perm& g : sub.generators())
      if (!contains(g))
        return false;
    return true;
  }
  // this (assumed a subgroup of ambient) is closed under conjugation by
  // ambient's generators
  bool is_normal_in(const Group& ambient) const {
    for (const Perm& g : ambient.generators())
      for (const Perm& h : generators())
        if (!contains(conjugated(h, g)))
          return false;
    return true;
  }

  bool is_abelian() const;
  bool is_p_group(unsigned p) const;
  bool is_prime_power_order(unsigned* p_out = nullptr) const;
  bool is_cyclic() const;

  // Typed lazy cache shared by the higher-level modules. compute runs
  // outside the lock; the first inserted value wins (idempotent).
  template <typename T>
  std::shared_ptr<const T> cached(const std::string& key,
                                  const std::function<std::shared_ptr<const T>()>& compute) const;

  const detail::StabilizerChain& chain() const;

private:
  explicit Group(std::shared_ptr<detail::GroupImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<detail::GroupImpl> impl_;
};

namespace detail {

struct GroupImpl {
  unsigned degree = 0;
  std::vector<Perm> gens;
  StabilizerChain chain;
  unsigned long long order = 1;

  mutable std::mutex mu;
  mutable std::optional<std::vector<Perm>> elements;
  mutable std::optional<std::uint64_t> fingerprint;
  mutable std::map<std::string, std::shared_ptr<const void>> cache;
};

} // namespace detail

inline Group Group::from_generators(unsigned degree, std::vector<Perm> gens) {
  auto impl = std::make_shared<detail::GroupImpl>();
  impl->degree = degree;
  impl->gens = std::move(gens);
  impl->chain = detail::StabilizerChain::build(degree, impl->gens);
  impl->order = impl->chain.order();
  return Group(std::move(impl));
}

inline Group Group::from_element_set(unsigned degree,
                                     const std::vector<Perm>& elems) {
  std::vector<Perm> sorted(elems);
  std::sort(sorted.begin(), sorted.end());
  std::vector<Perm> gens;
  Group g = from_generators(degree, {});
  for (const Perm& e : sorted) {
    if (e.is_identity() || g.contains(e))
      continue;
    gens.push_back(e);
    g = from_generators(degree, gens);
  }
  if (g.order() != sorted.size())
    throw InternalError("from_element_set: input of size " +
                        std::to_string(sorted.size()) +
                        " is not a closed subgroup (closure has order " +
                        std::to_string(g.order()) + ")");
  return g;
}

inline unsigned Group::degree() const { return impl_->degree; }
inline unsigned long long Group::order() const { return impl_->order; }
inline const std::vector<Perm>& Group::generators() const { return impl_->gens; }
inline const detail::StabilizerChain& Group::chain() const { return impl_->chain; }

inline bool Group::contains(const Perm& g) const {
  if (g.degree() != impl_->degree)
    throw DegreeMismatch("membership test with degree " +
                         std::to_string(g.degree()) + " in group of degree " +
                         std::to_string(impl_->degree));
  if (g.is_identity())
    return true;
  return impl_->chain.contains(g);
}

inline const std::vector<Perm>& Group::elements() const {
  {
    std::lock_guard<std::mutex> lk(impl_->mu);
    if (impl_->elements)
      return *impl_->elements;
  }
  if (order() > limits().enumeration_bound)
    throw CapacityError("group of order " + std::to_string(order()) +
                        " exceeds the enumeration bound " +
                        std::to_string(limits().enumeration_bound));
  // plain worklist closure, then sort for the canonical stream
  std::unordered_set<Perm> seen;
  std::vector<Perm> work;
  Perm id(impl_->degree);
  seen.insert(id);
  work.push_back(id);
  for (std::size_t head = 0; head < work.size(); ++head) {
    for (const Perm& g : impl_->gens) {
      Perm next = work[head].then(g);
      if (seen.insert(next).second)
        work.push_back(next);
    }
  }
  std::sort(work.begin(), work.end());
  if (work.size() != order())
    throw InternalError("element closure size " + std::to_string(work.size()) +
                        " disagrees with chain order " + std::to_string(order()));
  std::lock_guard<std::mutex> lk(impl_->mu);
  if (!impl_->elements)
    impl_->elements = std::move(work);
  return *impl_->elements;
}

inline std::uint64_t Group::fingerprint() const {
  {
    std::lock_guard<std::mutex> lk(impl_->mu);
    if (impl_->fingerprint)
      return *impl_->fingerprint;
  }
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ order();
  for (const Perm& e : elements()) {
    h ^= e.hash();
    h *= 0x100000001b3ull;
    h ^= h >> 29;
  }
  h *= 0xc4ceb9fe1a85ec53ull;
  h ^= h >> 32;
  std::lock_guard<std::mutex> lk(impl_->mu);
  impl_->fingerprint = h;
  return h;
}

inline bool Group::is_abelian() const {
  const auto& gs = impl_->gens;
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = i + 1; j < gs.size(); ++j)
      if (gs[i].then(gs[j]) != gs[j].then(gs[i]))
        return false;
  return true;
}

inline bool Group::is_p_group(unsigned p) const {
  unsigned long long n = order();
  while (n % p == 0)
    n /= p;
  return n == 1;
}

inline bool Group::is_prime_power_order(unsigned* p_out) const {
  unsigned long long n = order();
  if (n == 1)
    return false;
  for (unsigned long long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      while (n % d == 0)
        n /= d;
      if (n != 1)
        return false;
      if (p_out)
        *p_out = static_cast<unsigned>(d);
      return true;
    }
  }
  if (p_out)
    *p_out = static_cast<unsigned>(n);
  return true;
}

inline bool Group::is_cyclic() const {
  if (order() == 1)
    return true;
  for (const Perm& e : elements())
    if (e.element_order() == order())
      return true;
  return false;
}

template <typename T>
inline std::shared_ptr<const T>
Group::cached(const std::string& key,
              const std::function<std::shared_ptr<const T>()>& compute) const {
  {
    std::lock_guard<std::mutex> lk(impl_->mu);
    auto it = impl_->cache.find(key);
    if (it != impl_->cache.end())
      return std::static_pointer_cast<const T>(it->second);
  }
  std::shared_ptr<const T> value = compute();
  std::lock_guard<std::mutex> lk(impl_->mu);
  auto [it, inserted] = impl_->cache.emplace(key, value);
  return inserted ? value : std::static_pointer_cast<const T>(it->second);
}

// --- element-set helpers used across modules ---

inline bool sorted_contains(const std::vector<Perm>& sorted, const Perm& x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

inline std::vector<Perm> intersect_elements(const std::vector<Perm>& a,
                                            const std::vector<Perm>& b) {
  std::vector<Perm> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

// Set product {a*b : a in A, b in B}, sorted and deduplicated.
inline std::vector<Perm> product_set(const std::vector<Perm>& a,
                                     const std::vector<Perm>& b) {
  if (static_cast<unsigned long long>(a.size()) * b.size() >
      4 * limits().enumeration_bound)
    throw CapacityError("set product of sizes " + std::to_string(a.size()) +
                        "*" + std::to_string(b.size()) +
                        " exceeds the enumeration bound");
  std::vector<Perm> out;
  out.reserve(a.size() * b.size());
  for (const Perm& x : a)
    for (const Perm& y : b)
      out.push_back(x.then(y));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Subgroup of the common ambient generated by the two groups.
inline Group join_groups(const Group& a, const Group& b) {
  std::vector<Perm> gens = a.generators();
  for (const Perm& g : b.generators())
    gens.push_back(g);
  return Group::from_generators(a.degree(), std::move(gens));
}

inline Group intersect_groups(const Group& a, const Group& b) {
  return Group::from_element_set(a.degree(),
                                 intersect_elements(a.elements(), b.elements()));
}

inline Group conjugate_group(const Group& h, const Perm& g) {
  std::vector<Perm> gens;
  gens.reserve(h.generators().size());
  for (const Perm& x : h.generators())
    gens.push_back(conjugated(x, g));
  return Group::from_generators(h.degree(), std::move(gens));
}

inline Group trivial_group(unsigned degree) {
  return Group::from_generators(degree, {});
}

} // namespace fgt
