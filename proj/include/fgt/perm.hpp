#pragma once

// Permutations of {1..n}. Points are 1-based in all I/O and 0-based in
// storage. Products read left to right: (a * b) applies a first, then b,
// so points are acted on from the right.

#include <cctype>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "fgt/error.hpp"

namespace fgt {

class Perm {
public:
  Perm() = default;
  explicit Perm(unsigned degree) : img_(degree) {
    for (unsigned i = 0; i < degree; ++i)
      img_[i] = i;
  }
  explicit Perm(std::vector<unsigned> images) : img_(std::move(images)) {
    std::vector<bool> seen(img_.size(), false);
    for (unsigned v : img_) {
      if (v >= img_.size() || seen[v])
        throw InvalidArgument("image array is not a bijection on {1.." +
                              std::to_string(img_.size()) + "}");
      seen[v] = true;
    }
  }

  unsigned degree() const { return static_cast<unsigned>(img_.size()); }
  unsigned operator[](unsigned i) const { return img_[i]; }
  const std::vector<unsigned>& images() const { return img_; }

  bool is_identity() const {
    for (unsigned i = 0; i < img_.size(); ++i)
      if (img_[i] != i)
        return false;
    return true;
  }

  // this followed by b
  Perm then(const Perm& b) const {
    if (degree() != b.degree())
      throw DegreeMismatch("composing permutations of degrees " +
                           std::to_string(degree()) + " and " +
                           std::to_string(b.degree()));
    Perm r;
    r.img_.resize(img_.size());
    for (unsigned i = 0; i < img_.size(); ++i)
      r.img_[i] = b.img_[img_[i]];
    return r;
  }

  Perm inverse() const {
    Perm r;
    r.img_.resize(img_.size());
    for (unsigned i = 0; i < img_.size(); ++i)
      r.img_[img_[i]] = i;
    return r;
  }

  // lcm of cycle lengths
  unsigned long long element_order() const {
    unsigned long long ord = 1;
    std::vector<bool> seen(img_.size(), false);
    for (unsigned i = 0; i < img_.size(); ++i) {
      if (seen[i])
        continue;
      unsigned long long len = 0;
      for (unsigned j = i; !seen[j]; j = img_[j]) {
        seen[j] = true;
        ++len;
      }
      ord = std::lcm(ord, len);
    }
    return ord;
  }

  // smallest moved point, or degree() for the identity
  unsigned min_moved() const {
    for (unsigned i = 0; i < img_.size(); ++i)
      if (img_[i] != i)
        return i;
    return degree();
  }

  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ull ^ (img_.size() * 0x9e3779b97f4a7c15ull);
    for (unsigned v : img_) {
      h ^= v;
      h *= 1099511628211ull;
    }
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    return h;
  }

  friend bool operator==(const Perm&, const Perm&) = default;
  friend std::strong_ordering operator<=>(const Perm& a, const Perm& b) {
    return a.img_ <=> b.img_;
  }

private:
  std::vector<unsigned> img_;
};

inline Perm operator*(const Perm& a, const Perm& b) { return a.then(b); }

// g^-1 h g
inline Perm conjugated(const Perm& h, const Perm& g) {
  return g.inverse().then(h).then(g);
}

// a^-1 b^-1 a b
inline Perm commutator_elem(const Perm& a, const Perm& b) {
  return a.inverse().then(b.inverse()).then(a).then(b);
}

// Cycle notation: cycles in parentheses, points separated by commas or
// spaces, whitespace insignificant. "" and "()" denote the identity.
// Points not mentioned are fixed.
inline Perm parse_cycles(const std::string& text, unsigned degree) {
  std::vector<unsigned> img(degree);
  for (unsigned i = 0; i < degree; ++i)
    img[i] = i;
  std::vector<bool> used(degree, false);

  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' ||
                                 text[pos] == '\n' || text[pos] == '\r'))
      ++pos;
  };

  skip_ws();
  while (pos < text.size()) {
    if (text[pos] != '(')
      throw ParseError("expected '(' at position " + std::to_string(pos + 1) +
                       " near '" + text.substr(pos, 8) + "'");
    ++pos;
    std::vector<unsigned> cycle;
    skip_ws();
    while (pos < text.size() && text[pos] != ')') {
      if (!std::isdigit(static_cast<unsigned char>(text[pos])))
        throw ParseError("expected point number at position " +
                         std::to_string(pos + 1) + " near '" +
                         text.substr(pos, 8) + "'");
      unsigned long v = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        v = v * 10 + static_cast<unsigned long>(text[pos] - '0');
        if (v > 1000000)
          throw ParseError("point value too large");
        ++pos;
      }
      if (v == 0 || v > degree)
        throw ParseError("point " + std::to_string(v) +
                         " out of range 1.." + std::to_string(degree));
      unsigned p = static_cast<unsigned>(v - 1);
      if (used[p])
        throw ParseError("point " + std::to_string(v) +
                         " repeated across cycles");
      used[p] = true;
      cycle.push_back(p);
      skip_ws();
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        skip_ws();
        if (pos >= text.size() || text[pos] == ')')
          throw ParseError("dangling ',' in cycle");
      }
    }
    if (pos >= text.size())
      throw ParseError("unterminated cycle: missing ')'");
    ++pos; // ')'
    for (std::size_t i = 0; i + 1 < cycle.size(); ++i)
      img[cycle[i]] = cycle[i + 1];
    if (cycle.size() > 1)
      img[cycle.back()] = cycle.front();
    skip_ws();
  }
  return Perm(std::move(img));
}

inline std::string cycle_string(const Perm& p) {
  std::string out;
  std::vector<bool> seen(p.degree(), false);
  for (unsigned i = 0; i < p.degree(); ++i) {
    if (seen[i] || p[i] == i) {
      seen[i] = true;
      continue;
    }
    out += '(';
    unsigned j = i;
    bool first = true;
    do {
      if (!first)
        out += ',';
      out += std::to_string(j + 1);
      seen[j] = true;
      first = false;
      j = p[j];
    } while (j != i);
    out += ')';
  }
  return out.empty() ? "()" : out;
}

} // namespace fgt

template <>
struct std::hash<fgt::Perm> {
  std::size_t operator()(const fgt::Perm& p) const noexcept {
    return static_cast<std::size_t>(p.hash());
  }
};
