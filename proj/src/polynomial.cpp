#include "lbk/polynomial.hpp"

namespace lbk {

Poly::Poly(Rat constant) {
  if (constant != 0) terms_.emplace(Monomial{}, std::move(constant));
}

Poly Poly::variable(std::uint32_t var) {
  Poly p;
  p.terms_.emplace(Monomial{{var, 1}}, Rat(1));
  return p;
}

void Poly::add_term(Monomial m, const Rat& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(std::move(m), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& rhs) {
  for (const auto& [m, c] : rhs.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& rhs) {
  for (const auto& [m, c] : rhs.terms_) add_term(m, -c);
  return *this;
}

Poly& Poly::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Poly Poly::operator*(const Poly& rhs) const {
  Poly out;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : rhs.terms_) {
      // merge exponent vectors
      Monomial m;
      m.reserve(ma.size() + mb.size());
      std::size_t i = 0, j = 0;
      while (i < ma.size() || j < mb.size()) {
        if (j == mb.size() || (i < ma.size() && ma[i].first < mb[j].first))
          m.push_back(ma[i++]);
        else if (i == ma.size() || mb[j].first < ma[i].first)
          m.push_back(mb[j++]);
        else {
          m.emplace_back(ma[i].first, ma[i].second + mb[j].second);
          ++i;
          ++j;
        }
      }
      out.add_term(std::move(m), ca * cb);
    }
  return out;
}

Rat Poly::eval(const std::function<Rat(std::uint32_t)>& assign) const {
  Rat acc = 0;
  for (const auto& [m, c] : terms_) {
    Rat term = c;
    for (const auto& [var, exp] : m) {
      Rat v = assign(var);
      for (std::uint32_t e = 0; e < exp; ++e) term *= v;
    }
    acc += term;
  }
  return acc;
}

std::string Poly::str(
    const std::function<std::string(std::uint32_t)>& name) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rat v = c;
    if (first) {
      if (v < 0) {
        out += '-';
        v = -v;
      }
    } else {
      out += v < 0 ? " - " : " + ";
      if (v < 0) v = -v;
    }
    first = false;
    bool printed = false;
    if (v != 1 || m.empty()) {
      out += rat_str(v);
      printed = true;
    }
    for (const auto& [var, exp] : m) {
      if (printed) out += '*';
      out += name(var);
      if (exp > 1) {
        out += '^';
        out += std::to_string(exp);
      }
      printed = true;
    }
  }
  return out;
}

}  // namespace lbk
