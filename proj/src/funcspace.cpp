#include "nullfield/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nullfield {

namespace {

Complex ipow(Complex z, int n) {
  Complex r{1.0, 0.0};
  for (int k = 0; k < n; ++k) {
    r *= z;
  }
  return r;
}

bool exps_less(const Monomial& a, const Monomial& b) { return a.exps < b.exps; }

} // namespace

RealGradients real_gradients(const WirtingerJet& j) {
  // d/dx = d/dz + d/dzb,  d/dy = i (d/dz - d/dzb)
  const Complex dx1 = j.d_z1 + j.d_zb1;
  const Complex dy1 = Complex(0, 1) * (j.d_z1 - j.d_zb1);
  const Complex dx2 = j.d_z2 + j.d_zb2;
  const Complex dy2 = Complex(0, 1) * (j.d_z2 - j.d_zb2);
  return {Vec4(dx1.real(), dy1.real(), dx2.real(), dy2.real()),
          Vec4(dx1.imag(), dy1.imag(), dx2.imag(), dy2.imag())};
}

// ---------------------------------------------------------------- MixedPoly

MixedPoly::MixedPoly(std::vector<Monomial> terms) {
  for (const auto& t : terms) {
    for (int e : t.exps) {
      if (e < 0) {
        throw std::invalid_argument("MixedPoly: negative exponent");
      }
    }
  }
  std::stable_sort(terms.begin(), terms.end(), exps_less);
  for (const auto& t : terms) {
    if (!terms_.empty() && terms_.back().exps == t.exps) {
      terms_.back().coef += t.coef;
    } else {
      terms_.push_back(t);
    }
  }
  std::erase_if(terms_, [](const Monomial& m) { return m.coef == Complex(0.0, 0.0); });
}

MixedPoly MixedPoly::constant(Complex c) { return MixedPoly({{c, {0, 0, 0, 0}}}); }

MixedPoly MixedPoly::monomial(Complex c, int a, int b, int c_exp, int d) {
  return MixedPoly({{c, {a, b, c_exp, d}}});
}

MixedPoly MixedPoly::variable(WirtingerVar v) {
  std::array<int, 4> e{0, 0, 0, 0};
  e[static_cast<int>(v)] = 1;
  return MixedPoly({{Complex(1.0, 0.0), e}});
}

bool MixedPoly::is_constant() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Monomial& m) {
    return m.exps == std::array<int, 4>{0, 0, 0, 0};
  });
}

bool MixedPoly::is_holomorphic() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Monomial& m) { return m.exps[2] == 0 && m.exps[3] == 0; });
}

bool MixedPoly::is_antiholomorphic() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Monomial& m) { return m.exps[0] == 0 && m.exps[1] == 0; });
}

MixedPoly MixedPoly::conj() const {
  std::vector<Monomial> out;
  out.reserve(terms_.size());
  for (const auto& m : terms_) {
    out.push_back({std::conj(m.coef), {m.exps[2], m.exps[3], m.exps[0], m.exps[1]}});
  }
  return MixedPoly(std::move(out));
}

MixedPoly MixedPoly::derivative(WirtingerVar v) const {
  const int k = static_cast<int>(v);
  std::vector<Monomial> out;
  for (const auto& m : terms_) {
    if (m.exps[k] == 0) {
      continue;
    }
    Monomial d = m;
    d.coef *= static_cast<double>(m.exps[k]);
    d.exps[k] -= 1;
    out.push_back(d);
  }
  return MixedPoly(std::move(out));
}

Complex MixedPoly::operator()(Complex z1, Complex z2) const { return jet(z1, z2).value; }

WirtingerJet MixedPoly::jet(Complex z1, Complex z2) const {
  const std::array<Complex, 4> vars{z1, z2, std::conj(z1), std::conj(z2)};
  WirtingerJet j;
  std::array<Complex*, 4> slots{&j.d_z1, &j.d_z2, &j.d_zb1, &j.d_zb2};
  for (const auto& m : terms_) {
    std::array<Complex, 4> pw;
    for (int k = 0; k < 4; ++k) {
      pw[k] = ipow(vars[k], m.exps[k]);
    }
    j.value += m.coef * pw[0] * pw[1] * pw[2] * pw[3];
    for (int k = 0; k < 4; ++k) {
      if (m.exps[k] == 0) {
        continue;
      }
      Complex d = m.coef * static_cast<double>(m.exps[k]) * ipow(vars[k], m.exps[k] - 1);
      for (int l = 0; l < 4; ++l) {
        if (l != k) {
          d *= pw[l];
        }
      }
      *slots[k] += d;
    }
  }
  return j;
}

MixedPoly MixedPoly::operator+(const MixedPoly& o) const {
  std::vector<Monomial> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  return MixedPoly(std::move(all));
}

MixedPoly MixedPoly::operator-() const { return *this * Complex(-1.0, 0.0); }

MixedPoly MixedPoly::operator-(const MixedPoly& o) const { return *this + (-o); }

MixedPoly MixedPoly::operator*(const MixedPoly& o) const {
  std::vector<Monomial> out;
  out.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      Monomial m{a.coef * b.coef, a.exps};
      for (int k = 0; k < 4; ++k) {
        m.exps[k] += b.exps[k];
      }
      out.push_back(m);
    }
  }
  return MixedPoly(std::move(out));
}

MixedPoly MixedPoly::operator*(Complex s) const {
  std::vector<Monomial> out = terms_;
  for (auto& m : out) {
    m.coef *= s;
  }
  return MixedPoly(std::move(out));
}

bool MixedPoly::operator==(const MixedPoly& o) const {
  if (terms_.size() != o.terms_.size()) {
    return false;
  }
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    if (terms_[k].exps != o.terms_[k].exps || terms_[k].coef != o.terms_[k].coef) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- Generator

Generator::Generator(const MixedPoly& p) {
  terms_.push_back({p, MixedPoly()});
  normalize();
}

Generator::Generator(const ExpWrapped& e) {
  terms_.push_back({MixedPoly::constant(1.0), e.base});
  normalize();
}

void Generator::normalize() {
  std::vector<Term> merged;
  for (auto t : terms_) {
    // A constant exponent folds into the prefactor.
    if (t.exponent.is_constant()) {
      const Complex k = t.exponent.is_zero() ? Complex(0.0) : t.exponent.terms().front().coef;
      if (k != Complex(0.0)) {
        t.prefactor = t.prefactor * std::exp(k);
      }
      t.exponent = MixedPoly();
    }
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const Term& m) { return m.exponent == t.exponent; });
    if (it != merged.end()) {
      it->prefactor = it->prefactor + t.prefactor;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.prefactor.is_zero(); });
  terms_ = std::move(merged);
}

bool Generator::is_holomorphic() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) {
    return t.prefactor.is_holomorphic() && t.exponent.is_holomorphic();
  });
}

bool Generator::is_antiholomorphic() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) {
    return t.prefactor.is_antiholomorphic() && t.exponent.is_antiholomorphic();
  });
}

bool Generator::is_polynomial() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.exponent.is_zero(); });
}

MixedPoly Generator::as_polynomial() const {
  if (!is_polynomial()) {
    throw std::logic_error("Generator: not a polynomial");
  }
  return terms_.empty() ? MixedPoly() : terms_.front().prefactor;
}

Generator Generator::conj() const {
  Generator g;
  for (const auto& t : terms_) {
    g.terms_.push_back({t.prefactor.conj(), t.exponent.conj()});
  }
  g.normalize();
  return g;
}

Complex Generator::operator()(Complex z1, Complex z2) const { return jet(z1, z2).value; }

WirtingerJet Generator::jet(Complex z1, Complex z2) const {
  WirtingerJet j;
  for (const auto& t : terms_) {
    const WirtingerJet p = t.prefactor.jet(z1, z2);
    if (t.exponent.is_zero()) {
      j.value += p.value;
      j.d_z1 += p.d_z1;
      j.d_z2 += p.d_z2;
      j.d_zb1 += p.d_zb1;
      j.d_zb2 += p.d_zb2;
      continue;
    }
    const WirtingerJet q = t.exponent.jet(z1, z2);
    const Complex e = std::exp(q.value);
    j.value += p.value * e;
    j.d_z1 += (p.d_z1 + p.value * q.d_z1) * e;
    j.d_z2 += (p.d_z2 + p.value * q.d_z2) * e;
    j.d_zb1 += (p.d_zb1 + p.value * q.d_zb1) * e;
    j.d_zb2 += (p.d_zb2 + p.value * q.d_zb2) * e;
  }
  return j;
}

Generator Generator::operator+(const Generator& o) const {
  Generator g = *this;
  g.terms_.insert(g.terms_.end(), o.terms_.begin(), o.terms_.end());
  g.normalize();
  return g;
}

Generator Generator::operator*(const Generator& o) const {
  Generator g;
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      g.terms_.push_back({a.prefactor * b.prefactor, a.exponent + b.exponent});
    }
  }
  g.normalize();
  return g;
}

Generator Generator::operator*(Complex s) const {
  Generator g = *this;
  for (auto& t : g.terms_) {
    t.prefactor = t.prefactor * s;
  }
  g.normalize();
  return g;
}

// ---------------------------------------------------------------- operators

WirtingerJet eval_jet(const MixedPoly& f, Complex z1, Complex z2) { return f.jet(z1, z2); }

WirtingerJet eval_jet(const ExpWrapped& f, Complex z1, Complex z2) {
  return Generator(f).jet(z1, z2);
}

WirtingerJet eval_jet(const Generator& f, Complex z1, Complex z2) { return f.jet(z1, z2); }

Complex cr_defect(const Generator& f, const S3Point& p) {
  const WirtingerJet j = f.jet(p.z1(), p.z2());
  return -p.z2() * j.d_zb1 + p.z1() * j.d_zb2;
}

Complex l_operator(const Generator& f, const S3Point& p) {
  const WirtingerJet j = f.jet(p.z1(), p.z2());
  return -std::conj(p.z2()) * j.d_z1 + std::conj(p.z1()) * j.d_z2;
}

// ---------------------------------------------------------------- printing

namespace {

std::string format_complex(Complex c) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", c.real(), c.imag());
  return buf;
}

} // namespace

std::string to_string(const MixedPoly& p) {
  if (p.is_zero()) {
    return "0";
  }
  static const char* names[4] = {"z1", "z2", "zb1", "zb2"};
  std::string out;
  for (std::size_t k = 0; k < p.terms().size(); ++k) {
    const Monomial& m = p.terms()[k];
    if (k > 0) {
      out += " + ";
    }
    out += format_complex(m.coef);
    for (int v = 0; v < 4; ++v) {
      if (m.exps[v] == 0) {
        continue;
      }
      out += "*";
      out += names[v];
      if (m.exps[v] > 1) {
        out += "^" + std::to_string(m.exps[v]);
      }
    }
  }
  return out;
}

std::string to_string(const Generator& g) {
  if (g.is_zero()) {
    return "0";
  }
  std::string out;
  for (std::size_t k = 0; k < g.terms().size(); ++k) {
    const auto& t = g.terms()[k];
    if (k > 0) {
      out += " + ";
    }
    if (t.exponent.is_zero()) {
      out += to_string(t.prefactor);
    } else {
      out += "(" + to_string(t.prefactor) + ")*exp(" + to_string(t.exponent) + ")";
    }
  }
  return out;
}

} // namespace nullfield
