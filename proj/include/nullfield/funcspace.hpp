#pragma once

// Functions on a neighbourhood of S^3 represented exactly as finite sums of
// monomials c * z1^a z2^b zb1^c zb2^d (zb = complex conjugate), optionally
// multiplied by the exponential of such a sum.  All first Wirtinger
// derivatives are computed term by term, with no truncation error.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "nullfield/geom.hpp"

namespace nullfield {

/// Value and first Wirtinger derivatives of a function at a point.
struct WirtingerJet {
  Complex value{};
  Complex d_z1{};
  Complex d_z2{};
  Complex d_zb1{};
  Complex d_zb2{};
};

/// Euclidean gradients of Re f and Im f in the coordinates (x1, y1, x2, y2).
struct RealGradients {
  Vec4 re;
  Vec4 im;
};

RealGradients real_gradients(const WirtingerJet& jet);

enum class WirtingerVar { z1, z2, zb1, zb2 };

struct Monomial {
  Complex coef;
  std::array<int, 4> exps; // powers of z1, z2, zb1, zb2
};

class MixedPoly {
public:
  MixedPoly() = default;
  /// Merges duplicate exponent tuples and drops zero coefficients.
  /// Negative exponents are rejected with std::invalid_argument.
  explicit MixedPoly(std::vector<Monomial> terms);

  static MixedPoly constant(Complex c);
  static MixedPoly monomial(Complex c, int a, int b, int c_exp, int d);
  static MixedPoly variable(WirtingerVar v);

  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_holomorphic() const;
  bool is_antiholomorphic() const;

  /// Pointwise complex conjugate: conjugated coefficients, z and zb swapped.
  MixedPoly conj() const;
  MixedPoly derivative(WirtingerVar v) const;

  Complex operator()(Complex z1, Complex z2) const;
  WirtingerJet jet(Complex z1, Complex z2) const;

  MixedPoly operator+(const MixedPoly& o) const;
  MixedPoly operator-(const MixedPoly& o) const;
  MixedPoly operator-() const;
  MixedPoly operator*(const MixedPoly& o) const;
  MixedPoly operator*(Complex s) const;
  bool operator==(const MixedPoly& o) const;

private:
  std::vector<Monomial> terms_; // sorted by exponent tuple
};

inline MixedPoly operator*(Complex s, const MixedPoly& p) { return p * s; }

/// e^{base}.  Never vanishes.
struct ExpWrapped {
  MixedPoly base;
};

/// A finite sum  sum_k P_k e^{Q_k}  of polynomial prefactors times
/// exponentials of polynomials.  Plain polynomials have a single term with
/// Q = 0; ExpWrapped has P = 1.  This is the generator type accepted by the
/// field constructions.
class Generator {
public:
  struct Term {
    MixedPoly prefactor;
    MixedPoly exponent;
  };

  Generator() = default;
  Generator(const MixedPoly& p);
  Generator(const ExpWrapped& e);
  static Generator constant(Complex c) { return Generator(MixedPoly::constant(c)); }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_holomorphic() const;
  bool is_antiholomorphic() const;
  /// True when there are no exponential factors.
  bool is_polynomial() const;
  /// The polynomial itself; throws std::logic_error unless is_polynomial().
  MixedPoly as_polynomial() const;

  Generator conj() const;
  Complex operator()(Complex z1, Complex z2) const;
  WirtingerJet jet(Complex z1, Complex z2) const;

  Generator operator+(const Generator& o) const;
  Generator operator*(const Generator& o) const;
  Generator operator*(Complex s) const;

private:
  void normalize();
  std::vector<Term> terms_;
};

inline Generator operator*(Complex s, const Generator& g) { return g * s; }

WirtingerJet eval_jet(const MixedPoly& f, Complex z1, Complex z2);
WirtingerJet eval_jet(const ExpWrapped& f, Complex z1, Complex z2);
WirtingerJet eval_jet(const Generator& f, Complex z1, Complex z2);

/// Tangential Cauchy-Riemann operator
///   Lbar f = (-x2 - i y2) df/dzb1 + (x1 + i y1) df/dzb2
/// at p.  Exactly zero for holomorphic f.
Complex cr_defect(const Generator& f, const S3Point& p);

/// L f = (-x2 + i y2) df/dz1 + (x1 - i y1) df/dz2 at p.
/// As a complex vector field L = (v1 - i v2) / 2.
Complex l_operator(const Generator& f, const S3Point& p);

/// Parses generator expressions such as "6*z1*z2^2", "zb1*zb2",
/// "exp(z1*z2)", "(1+2i)*z1 - 0.5*exp(zb1)".  Variables are z1, z2, zb1, zb2;
/// "i" is the imaginary unit and may follow a number ("2i").  Throws
/// std::invalid_argument with a position on malformed input.
Generator parse_generator(std::string_view text);

/// Deterministic text form accepted by parse_generator.
std::string to_string(const MixedPoly& p);
std::string to_string(const Generator& g);

} // namespace nullfield
