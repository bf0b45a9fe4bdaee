#pragma once

// Exact arithmetic in Q(alpha) and Z[alpha, 1/alpha] for a root alpha of a
// primitive expanding integer polynomial A, plus the archimedean embeddings.

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "ratile/error.hpp"

namespace ratile {

using Integer = mpz_class;
using Rational = mpq_class;

enum class IrreducibilityStatus { verified, asserted };

/// The polynomial A(X) = a_n X^n + ... + a_0 with its derived constants.
struct PolynomialSpec {
  std::vector<long long> coeffs;  // a_0, ..., a_n (ascending)
  int degree = 0;
  long abs_a0 = 0;
  long abs_an = 0;
  IrreducibilityStatus irreducibility = IrreducibilityStatus::verified;

  // long (not long long) so the values mix directly with gmpxx types
  long a(int i) const { return static_cast<long>(coeffs.at(static_cast<std::size_t>(i))); }
  long a0() const { return static_cast<long>(coeffs.front()); }
  long an() const { return static_cast<long>(coeffs.back()); }
  bool monic() const { return abs_an == 1; }
};

/// Finite sum of c_e * alpha^e with integer c_e. Zero coefficients are never
/// stored. Equality is structural; use FieldVector for field equality.
class LaurentElem {
 public:
  using Terms = std::map<int, Integer>;

  LaurentElem() = default;
  explicit LaurentElem(Terms terms);

  static LaurentElem constant(const Integer& c) { return monomial(c, 0); }
  static LaurentElem monomial(const Integer& c, int exponent);

  /// Parses `a - 1`, `2*a^-1`, `3`, `-a^2 + 4*a`; whitespace-insensitive.
  static LaurentElem parse(std::string_view text);
  std::string to_string() const;

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int min_exponent() const;
  int max_exponent() const;
  Integer coeff(int exponent) const;

  void add_term(int exponent, const Integer& c);
  /// Multiplication by alpha^k.
  LaurentElem shifted(int k) const;

  LaurentElem operator-() const;
  LaurentElem& operator+=(const LaurentElem& o);
  LaurentElem& operator-=(const LaurentElem& o);
  friend LaurentElem operator+(LaurentElem a, const LaurentElem& b) { return a += b; }
  friend LaurentElem operator-(LaurentElem a, const LaurentElem& b) { return a -= b; }
  friend LaurentElem operator*(const LaurentElem& a, const LaurentElem& b);
  friend LaurentElem operator*(const Integer& c, const LaurentElem& a);
  bool operator==(const LaurentElem& o) const { return terms_ == o.terms_; }

 private:
  Terms terms_;
};

/// Canonical coordinates of an element of Q(alpha) in the basis
/// 1, alpha, ..., alpha^(n-1).
struct FieldVector {
  std::vector<Rational> coords;

  bool is_zero() const;
  bool operator==(const FieldVector& o) const { return coords == o.coords; }
  friend FieldVector operator+(const FieldVector& a, const FieldVector& b);
  friend FieldVector operator-(const FieldVector& a, const FieldVector& b);
  FieldVector operator-() const;
  friend FieldVector operator*(const Rational& c, const FieldVector& v);
};

/// Field arithmetic modulo A over Q.
class NumberField {
 public:
  explicit NumberField(PolynomialSpec spec);

  const PolynomialSpec& spec() const { return spec_; }
  int degree() const { return spec_.degree; }

  FieldVector zero() const;
  FieldVector from_rational(const Rational& q) const;
  FieldVector from_laurent(const LaurentElem& x) const;

  FieldVector mul(const FieldVector& a, const FieldVector& b) const;
  FieldVector mul_alpha(const FieldVector& a) const;
  FieldVector mul_alpha_inv(const FieldVector& a) const;
  /// a * alpha^k for any integer k.
  FieldVector mul_alpha_pow(FieldVector a, int k) const;
  FieldVector alpha_pow(int k) const { return mul_alpha_pow(from_rational(1), k); }

 private:
  PolynomialSpec spec_;
};

FieldVector to_field_vector(const LaurentElem& x, const PolynomialSpec& spec);

/// Verdict of a ring-membership reduction. On success `rep` is an equal
/// element using only nonnegative (reduce_bottom) or nonpositive
/// (reduce_top) exponents, in canonical form.
struct Membership {
  bool member = false;
  LaurentElem rep;
  int failing_exponent = 0;  // exponent whose coefficient failed divisibility
  Integer failing_coeff;
};

/// Decides x in Z[alpha] by eliminating the lowest negative-exponent term
/// with a_0 alpha^-1 = -(a_1 + ... + a_n alpha^(n-1)).
Membership reduce_bottom(const LaurentElem& x, const PolynomialSpec& spec);
/// Decides x in Z[1/alpha] by the mirrored elimination of the top term.
Membership reduce_top(const LaurentElem& x, const PolynomialSpec& spec);
/// x in alpha^k Z[1/alpha], tested as alpha^-k x in Z[1/alpha].
bool in_shifted_top_ring(const LaurentElem& x, int k, const PolynomialSpec& spec);

struct SchurCohnStep {
  int degree = 0;
  Integer leading;
  Integer constant;
};

struct ExpandingReport {
  bool expanding = false;
  std::vector<SchurCohnStep> table;  // reduction chain of X^n A(1/X)
  bool sufficient_condition = false; // |a_0| > |a_1| + ... + |a_n|
};

/// Schur-Cohn test on the reversed polynomial, exact integer arithmetic.
ExpandingReport expanding_report(const std::vector<long long>& coeffs);
bool is_expanding(const std::vector<long long>& coeffs);

/// Validates primitivity, expansion and irreducibility; throws Error.
PolynomialSpec validate_spec(const std::vector<long long>& coeffs);

/// Rational-root test plus quadratic-factor search (degree <= 4 only).
bool has_small_factor(const std::vector<long long>& coeffs);

struct EmbeddingData {
  std::vector<double> real_roots;                  // sorted ascending
  std::vector<std::complex<double>> complex_roots; // Im > 0 representatives, sorted by (Re, Im)
  double precision = 1e-12;
  double contraction = 0.0;                        // min |root|

  int r_count() const { return static_cast<int>(real_roots.size()); }
  int s_count() const { return static_cast<int>(complex_roots.size()); }
  int dim() const { return r_count() + 2 * s_count(); }
  /// One complex value per archimedean place (reals first).
  std::vector<std::complex<double>> places() const;
};

EmbeddingData compute_embeddings(const PolynomialSpec& spec, double tolerance = 1e-12);

/// Phi_infinity(x) flattened to R^n: real places, then (Re, Im) per pair.
std::vector<double> embed_arch(const FieldVector& x, const EmbeddingData& emb);
/// Per-place complex values of x.
std::vector<std::complex<double>> embed_places(const FieldVector& x, const EmbeddingData& emb);

}  // namespace ratile
