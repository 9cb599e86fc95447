#pragma once

// Named group constructors, direct products, quotients, group-file
// ingestion, and the built-in verification corpus.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fgt/group.hpp"

namespace fgt {

// ---------------------------------------------------------------------------
// Epimorphism

// A surjective homomorphism, evaluable on every element of the domain.
class Epimorphism {
public:
  Epimorphism() = default;
  Epimorphism(Group domain, Group codomain, std::function<Perm(const Perm&)> map)
      : domain_(std::move(domain)), codomain_(std::move(codomain)),
        map_(std::move(map)) {
    for (const Perm& g : domain_.generators())
      gen_images_.emplace_back(g, map_(g));
  }

  static Epimorphism identity(const Group& g) {
    return Epimorphism(g, g, [](const Perm& x) { return x; });
  }

  const Group& domain() const { return domain_; }
  const Group& codomain() const { return codomain_; }
  const std::vector<std::pair<Perm, Perm>>& generator_images() const {
    return gen_images_;
  }

  Perm map(const Perm& x) const { return map_(x); }

  // image of a subgroup of the domain
  Group push(const Group& h) const {
    std::vector<Perm> imgs;
    imgs.reserve(h.generators().size());
    for (const Perm& g : h.generators())
      imgs.push_back(map_(g));
    return Group::from_generators(codomain_.degree(), std::move(imgs));
  }

  // full preimage of a subgroup of the codomain
  Group preimage(const Group& sub) const {
    std::vector<Perm> elems;
    for (const Perm& g : domain_.elements())
      if (sub.contains(map_(g)))
        elems.push_back(g);
    return Group::from_element_set(domain_.degree(), elems);
  }

private:
  Group domain_, codomain_;
  std::vector<std::pair<Perm, Perm>> gen_images_;
  std::function<Perm(const Perm&)> map_;
};

// ---------------------------------------------------------------------------
// Named families

enum class Family {
  cyclic,
  dihedral,
  symmetric,
  alternating,
  quaternion,
  elementary_abelian,
  klein_four,
  special_linear_2_3,
};

inline const char* family_tag(Family f) {
  switch (f) {
  case Family::cyclic: return "cyclic";
  case Family::dihedral: return "dihedral";
  case Family::symmetric: return "symmetric";
  case Family::alternating: return "alternating";
  case Family::quaternion: return "quaternion";
  case Family::elementary_abelian: return "elementary-abelian";
  case Family::klein_four: return "klein-four";
  case Family::special_linear_2_3: return "special-linear-2-3";
  }
  return "?";
}

inline bool is_prime(unsigned long long n) {
  if (n < 2)
    return false;
  for (unsigned long long d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

namespace detail {

inline Perm cycle_on(unsigned degree, unsigned first, unsigned len) {
  std::vector<unsigned> img(degree);
  for (unsigned i = 0; i < degree; ++i)
    img[i] = i;
  for (unsigned i = 0; i + 1 < len; ++i)
    img[first + i] = first + i + 1;
  img[first + len - 1] = first;
  return Perm(std::move(img));
}

// permutation of the 8 nonzero vectors of F_3^2 induced by an invertible
// 2x2 matrix over F_3
inline Perm gl23_perm(int a, int b, int c, int d) {
  auto idx = [](int x, int y) {
    // nonzero vectors (x,y), x,y in {0,1,2}, enumerated row-major minus (0,0)
    return static_cast<unsigned>(x * 3 + y - 1);
  };
  std::vector<unsigned> img(8);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y) {
      if (x == 0 && y == 0)
        continue;
      int nx = ((a * x + c * y) % 3 + 3) % 3;
      int ny = ((b * x + d * y) % 3 + 3) % 3;
      img[idx(x, y)] = idx(nx, ny);
    }
  return Perm(std::move(img));
}

} // namespace detail

// Standard permutation representations with documented generators:
//   cyclic n        an n-cycle on n points (n >= 1)
//   dihedral m      the symmetries of an (m/2)-gon, m even >= 2
//   symmetric n     <(1 2), (1 2 ... n)> on n points
//   alternating n   <(1 2 i) : 3 <= i <= n>
//   quaternion 8    the regular representation on 8 points
//   elementary-abelian p, k   k disjoint p-cycles
//   klein-four      <(1 2)(3 4), (1 3)(2 4)>
//   special-linear-2-3        SL(2,3) on the 8 nonzero vectors of F_3^2
inline Group named_group(Family family, const std::vector<unsigned>& params) {
  auto need = [&](std::size_t n) {
    if (params.size() != n)
      throw InvalidArgument(std::string("family ") + family_tag(family) +
                            " expects " + std::to_string(n) + " parameter(s)");
  };
  switch (family) {
  case Family::cyclic: {
    need(1);
    unsigned n = params[0];
    if (n == 0)
      throw InvalidArgument("cyclic order must be positive");
    if (n == 1)
      return Group::from_generators(1, {});
    return Group::from_generators(n, {detail::cycle_on(n, 0, n)});
  }
  case Family::dihedral: {
    need(1);
    unsigned m = params[0]; // group order
    if (m < 2 || m % 2 != 0)
      throw InvalidArgument("dihedral order must be even and >= 2");
    unsigned n = m / 2; // polygon size
    if (n == 1)
      return Group::from_generators(2, {parse_cycles("(1,2)", 2)});
    if (n == 2)
      return Group::from_generators(4, {parse_cycles("(1,2)", 4),
                                        parse_cycles("(3,4)", 4)});
    Perm rot = detail::cycle_on(n, 0, n);
    std::vector<unsigned> refl(n);
    for (unsigned i = 0; i < n; ++i)
      refl[i] = (n - i) % n;
    return Group::from_generators(n, {rot, Perm(std::move(refl))});
  }
  case Family::symmetric: {
    need(1);
    unsigned n = params[0];
    if (n == 0)
      throw InvalidArgument("symmetric degree must be positive");
    if (n == 1)
      return Group::from_generators(1, {});
    return Group::from_generators(n, {parse_cycles("(1,2)", n),
                                      detail::cycle_on(n, 0, n)});
  }
  case Family::alternating: {
    need(1);
    unsigned n = params[0];
    if (n == 0)
      throw InvalidArgument("alternating degree must be positive");
    if (n <= 2)
      return Group::from_generators(n, {});
    std::vector<Perm> gens;
    for (unsigned i = 3; i <= n; ++i)
      gens.push_back(parse_cycles("(1,2," + std::to_string(i) + ")", n));
    return Group::from_generators(n, std::move(gens));
  }
  case Family::quaternion: {
    need(1);
    if (params[0] != 8)
      throw InvalidArgument("quaternion is only built at order 8");
    return Group::from_generators(
        8, {parse_cycles("(1,2,3,4)(5,6,7,8)", 8),
            parse_cycles("(1,5,3,7)(2,8,4,6)", 8)});
  }
  case Family::elementary_abelian: {
    need(2);
    unsigned p = params[0], k = params[1];
    if (!is_prime(p))
      throw InvalidArgument("elementary-abelian parameter p = " +
                            std::to_string(p) + " is not prime");
    if (k == 0)
      throw InvalidArgument("elementary-abelian rank must be positive");
    unsigned degree = p * k;
    std::vector<Perm> gens;
    for (unsigned i = 0; i < k; ++i)
      gens.push_back(detail::cycle_on(degree, i * p, p));
    return Group::from_generators(degree, std::move(gens));
  }
  case Family::klein_four:
    need(0);
    return Group::from_generators(4, {parse_cycles("(1,2)(3,4)", 4),
                                      parse_cycles("(1,3)(2,4)", 4)});
  case Family::special_linear_2_3:
    need(0);
    return Group::from_generators(8, {detail::gl23_perm(1, 1, 0, 1),
                                      detail::gl23_perm(0, -1, 1, 0)});
  }
  throw InvalidArgument("unknown group family");
}

// ---------------------------------------------------------------------------
// Direct products

namespace detail {

inline Perm extend_perm(const Perm& p, unsigned new_degree) {
  std::vector<unsigned> img(new_degree);
  for (unsigned i = 0; i < new_degree; ++i)
    img[i] = i < p.degree() ? p[i] : i;
  return Perm(std::move(img));
}

inline Perm shift_perm(const Perm& p, unsigned offset, unsigned new_degree) {
  std::vector<unsigned> img(new_degree);
  for (unsigned i = 0; i < new_degree; ++i)
    img[i] = i;
  for (unsigned i = 0; i < p.degree(); ++i)
    img[offset + i] = offset + p[i];
  return Perm(std::move(img));
}

} // namespace detail

struct DirectProduct {
  Group product;
  Epimorphism onto_left, onto_right;
  std::function<Perm(const Perm&)> embed_left, embed_right;
};

inline DirectProduct direct_product_full(const Group& a, const Group& b) {
  unsigned n = a.degree() + b.degree();
  if (n > limits().degree_cap)
    throw CapacityError("combined degree " + std::to_string(n) +
                        " exceeds the degree cap " +
                        std::to_string(limits().degree_cap));
  std::vector<Perm> gens;
  for (const Perm& g : a.generators())
    gens.push_back(detail::extend_perm(g, n));
  for (const Perm& g : b.generators())
    gens.push_back(detail::shift_perm(g, a.degree(), n));
  Group prod = Group::from_generators(n, std::move(gens));
  if (prod.order() != a.order() * b.order())
    throw InternalError("direct product order mismatch");

  unsigned da = a.degree(), db = b.degree();
  auto left = [da](const Perm& x) {
    std::vector<unsigned> img(da);
    for (unsigned i = 0; i < da; ++i)
      img[i] = x[i];
    return Perm(std::move(img));
  };
  auto right = [da, db](const Perm& x) {
    std::vector<unsigned> img(db);
    for (unsigned i = 0; i < db; ++i)
      img[i] = x[da + i] - da;
    return Perm(std::move(img));
  };
  DirectProduct dp{prod, Epimorphism(prod, a, left), Epimorphism(prod, b, right),
                   [n](const Perm& x) { return detail::extend_perm(x, n); },
                   [n, da](const Perm& x) { return detail::shift_perm(x, da, n); }};
  return dp;
}

inline Group direct_product(const Group& a, const Group& b) {
  return direct_product_full(a, b).product;
}

// ---------------------------------------------------------------------------
// Quotients

namespace detail {

struct CosetTable {
  std::vector<Perm> reps;                  // canonical representative per coset
  std::unordered_map<Perm, unsigned> index; // canonical rep -> coset id
};

inline Perm coset_canon(const std::vector<Perm>& n_elems, const Perm& s) {
  Perm best = n_elems.front().then(s);
  for (std::size_t i = 1; i < n_elems.size(); ++i) {
    Perm cand = n_elems[i].then(s);
    if (cand < best)
      best = cand;
  }
  return best;
}

} // namespace detail

// Regular permutation representation of G/N on the right cosets of N,
// together with the natural epimorphism. N must be a normal subgroup of G
// and the index must stay within the enumeration bound. Quotient by the
// trivial subgroup returns G itself with the identity map.
inline std::pair<Group, Epimorphism> quotient_group(const Group& g, const Group& n) {
  if (!g.contains_group(n))
    throw ContainmentError("quotient: N is not a subgroup of G");
  for (const Perm& x : g.generators())
    for (const Perm& h : n.generators())
      if (!n.contains(conjugated(h, x)))
        throw ContainmentError("quotient: N is not normal in G");
  if (g.order() % n.order() != 0)
    throw InternalError("quotient: order of N does not divide order of G");
  unsigned long long index = g.order() / n.order();
  if (index > limits().enumeration_bound)
    throw CapacityError("quotient index " + std::to_string(index) +
                        " exceeds the enumeration bound " +
                        std::to_string(limits().enumeration_bound));
  if (n.order() == 1)
    return {g, Epimorphism::identity(g)};

  auto table = std::make_shared<detail::CosetTable>();
  const std::vector<Perm> n_elems = n.elements();
  Perm id(g.degree());
  Perm first = detail::coset_canon(n_elems, id);
  table->reps.push_back(first);
  table->index.emplace(first, 0);
  for (std::size_t head = 0; head < table->reps.size(); ++head) {
    for (const Perm& x : g.generators()) {
      Perm c = detail::coset_canon(n_elems, table->reps[head].then(x));
      if (table->index.emplace(c, static_cast<unsigned>(table->reps.size())).second)
        table->reps.push_back(c);
    }
  }
  if (table->reps.size() != index)
    throw InternalError("quotient: coset enumeration found " +
                        std::to_string(table->reps.size()) + " cosets, expected " +
                        std::to_string(index));

  unsigned deg = static_cast<unsigned>(index);
  auto act = [table, n_elems, deg](const Perm& x) {
    std::vector<unsigned> img(deg);
    for (unsigned i = 0; i < deg; ++i) {
      Perm c = detail::coset_canon(n_elems, table->reps[i].then(x));
      img[i] = table->index.at(c);
    }
    return Perm(std::move(img));
  };
  std::vector<Perm> qgens;
  for (const Perm& x : g.generators())
    qgens.push_back(act(x));
  Group q = Group::from_generators(deg, std::move(qgens));
  if (q.order() != index)
    throw InternalError("quotient: coset action has wrong order");
  return {q, Epimorphism(g, q, act)};
}

// Cached variant keyed by the fingerprint of N inside g's cache.
inline std::pair<Group, Epimorphism> quotient_group_cached(const Group& g,
                                                           const Group& n) {
  using Pair = std::pair<Group, Epimorphism>;
  auto ptr = g.cached<Pair>(
      "quotient:" + std::to_string(n.fingerprint()),
      [&]() { return std::make_shared<const Pair>(quotient_group(g, n)); });
  return *ptr;
}

// ---------------------------------------------------------------------------
// Group specs, group files, corpus

struct GroupSpec {
  std::string name;
  unsigned degree = 0;
  std::vector<std::string> generator_texts;
  enum class Source { builtin, file } source = Source::builtin;
};

inline Group build_group(const GroupSpec& spec) {
  std::vector<Perm> gens;
  for (const std::string& t : spec.generator_texts)
    gens.push_back(parse_cycles(t, spec.degree));
  return Group::from_generators(spec.degree, std::move(gens));
}

// Strict schema: a JSON array of objects with exactly the fields
// name (string), degree (positive integer), generators (array of strings).
inline std::vector<GroupSpec> parse_group_file(const std::string& content,
                                               const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(origin + ": not valid JSON: " + e.what());
  }
  if (!doc.is_array())
    throw ParseError(origin + ": top-level value must be an array of group objects");
  std::vector<GroupSpec> specs;
  std::unordered_map<std::string, std::size_t> names;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& obj = doc[i];
    std::string where = origin + ": entry " + std::to_string(i);
    if (!obj.is_object())
      throw ParseError(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (it.key() != "name" && it.key() != "degree" && it.key() != "generators")
        throw ParseError(where + ": unknown field '" + it.key() + "'");
    if (!obj.contains("name") || !obj["name"].is_string())
      throw ParseError(where + ": missing string field 'name'");
    if (!obj.contains("degree") || !obj["degree"].is_number_unsigned() ||
        obj["degree"].get<unsigned long long>() == 0)
      throw ParseError(where + ": missing positive integer field 'degree'");
    if (!obj.contains("generators") || !obj["generators"].is_array())
      throw ParseError(where + ": missing array field 'generators'");
    GroupSpec s;
    s.name = obj["name"].get<std::string>();
    s.degree = obj["degree"].get<unsigned>();
    s.source = GroupSpec::Source::file;
    for (const auto& gen : obj["generators"]) {
      if (!gen.is_string())
        throw ParseError(where + ": generators must be strings");
      s.generator_texts.push_back(gen.get<std::string>());
    }
    if (!names.emplace(s.name, i).second)
      throw ParseError(origin + ": duplicate group name '" + s.name + "'");
    // validate generator syntax eagerly; groups themselves are built lazily
    for (const std::string& t : s.generator_texts) {
      try {
        parse_cycles(t, s.degree);
      } catch (const ParseError& e) {
        throw ParseError(where + ": generator '" + t + "': " + e.what());
      }
    }
    specs.push_back(std::move(s));
  }
  return specs;
}

inline std::vector<GroupSpec> load_group_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InvalidArgument("group file not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_group_file(ss.str(), path);
}

// ---------------------------------------------------------------------------
// Built-in corpus

struct CorpusEntry {
  GroupSpec spec;
  std::string family; // family tag, "product" for curated products
  Group group;
};

namespace detail {

inline CorpusEntry make_entry(const std::string& name, const std::string& family,
                              const Group& g) {
  GroupSpec spec;
  spec.name = name;
  spec.degree = g.degree();
  for (const Perm& gen : g.generators())
    spec.generator_texts.push_back(cycle_string(gen));
  spec.source = GroupSpec::Source::builtin;
  return CorpusEntry{std::move(spec), family, g};
}

inline const std::vector<CorpusEntry>& builtin_corpus() {
  static const std::vector<CorpusEntry> corpus = [] {
    std::vector<CorpusEntry> out;
    auto add = [&](const std::string& name, const std::string& family, Group g) {
      out.push_back(make_entry(name, family, std::move(g)));
    };
    for (unsigned n = 1; n <= 12; ++n)
      add("Cyc(" + std::to_string(n) + ")", "cyclic",
          named_group(Family::cyclic, {n}));
    for (unsigned m = 6; m <= 16; m += 2)
      add("Dih(" + std::to_string(m) + ")", "dihedral",
          named_group(Family::dihedral, {m}));
    for (unsigned n = 1; n <= 5; ++n)
      add("Sym(" + std::to_string(n) + ")", "symmetric",
          named_group(Family::symmetric, {n}));
    for (unsigned n = 3; n <= 5; ++n)
      add("Alt(" + std::to_string(n) + ")", "alternating",
          named_group(Family::alternating, {n}));
    add("Q8", "quaternion", named_group(Family::quaternion, {8}));
    add("Klein4", "klein-four", named_group(Family::klein_four, {}));
    for (auto [p, k] : std::vector<std::pair<unsigned, unsigned>>{
             {2, 3}, {2, 4}, {3, 2}, {3, 3}, {5, 2}, {7, 2}})
      add("ElemAb(" + std::to_string(p) + "," + std::to_string(k) + ")",
          "elementary-abelian", named_group(Family::elementary_abelian, {p, k}));
    add("SL(2,3)", "special-linear-2-3",
        named_group(Family::special_linear_2_3, {}));
    // curated products
    add("Sym(3)xCyc(2)", "product",
        direct_product(named_group(Family::symmetric, {3}),
                       named_group(Family::cyclic, {2})));
    add("Dih(8)xCyc(3)", "product",
        direct_product(named_group(Family::dihedral, {8}),
                       named_group(Family::cyclic, {3})));
    add("Cyc(4)xCyc(2)", "product",
        direct_product(named_group(Family::cyclic, {4}),
                       named_group(Family::cyclic, {2})));
    add("Alt(5)xCyc(5)", "product",
        direct_product(named_group(Family::alternating, {5}),
                       named_group(Family::cyclic, {5})));
    std::sort(out.begin(), out.end(), [](const CorpusEntry& a, const CorpusEntry& b) {
      return std::make_pair(a.group.order(), a.spec.name) <
             std::make_pair(b.group.order(), b.spec.name);
    });
    return out;
  }();
  return corpus;
}

} // namespace detail

struct CorpusFilter {
  unsigned long long max_order = ~0ull;
  std::vector<std::string> families; // empty = all
  std::vector<std::string> pinned;   // always included, regardless of filters
};

inline std::vector<CorpusEntry> corpus(const CorpusFilter& filter = {}) {
  std::vector<CorpusEntry> out;
  for (const CorpusEntry& e : detail::builtin_corpus()) {
    bool pinned = std::find(filter.pinned.begin(), filter.pinned.end(),
                            e.spec.name) != filter.pinned.end();
    bool pass = e.group.order() <= filter.max_order;
    if (pass && !filter.families.empty())
      pass = std::find(filter.families.begin(), filter.families.end(),
                       e.family) != filter.families.end();
    if (pass || pinned)
      out.push_back(e);
  }
  return out;
}

inline const CorpusEntry* find_builtin(const std::string& name) {
  for (const CorpusEntry& e : detail::builtin_corpus())
    if (e.spec.name == name)
      return &e;
  return nullptr;
}

// Default verification corpus: everything of order <= 100 plus the large
// fixtures Sym(5) and Alt(5)xCyc(5).
inline CorpusFilter default_campaign_filter() {
  CorpusFilter f;
  f.max_order = 100;
  f.pinned = {"Sym(5)", "Alt(5)xCyc(5)"};
  return f;
}

} // namespace fgt
