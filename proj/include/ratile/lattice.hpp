#pragma once

// Rank-n lattices in Q(alpha): Hermite normal form, the modules
// Lambda_m = Z[alpha] cap alpha^(m-1) Z[1/alpha], and the translation module
// generated by the digit differences.

#include <optional>
#include <string>
#include <vector>

#include "ratile/exactnum.hpp"

namespace ratile {

using IntMatrix = std::vector<std::vector<Integer>>;

/// Row Hermite normal form: `rows` holds the nonzero rows (upper triangular
/// on the pivot columns, positive pivots, entries above a pivot reduced into
/// [0, pivot)), `transform` is unimodular with transform * input = [rows; 0].
struct HermiteForm {
  IntMatrix rows;
  IntMatrix transform;
  std::vector<int> pivots;
};

HermiteForm hermite_normal_form(const IntMatrix& input);

enum class LatticeLabel { Lambda, ZcapLambda, Custom };

std::string to_string(LatticeLabel label);

struct LatticeHNF {
  LatticeLabel label = LatticeLabel::Custom;
  int m = 0;
  bool heuristic = false;
  std::vector<FieldVector> basis;
  std::vector<LaurentElem> laurent;   // same elements as Laurent sums, when known
  Integer denominator = 1;            // basis * denominator is integral
  IntMatrix hnf;                      // HNF of denominator * basis (rows)
  IntMatrix to_basis;                 // unimodular U with hnf = U * (denominator * basis)

  int rank() const { return static_cast<int>(basis.size()); }
  /// Covolume in power-basis coordinates.
  Rational determinant() const;
};

/// Lattice spanned by `gens`; if they are independent they are kept as the
/// basis, otherwise the HNF rows become the basis. `laurent` may be empty.
LatticeHNF make_lattice(const std::vector<FieldVector>& gens, const std::vector<LaurentElem>& laurent,
                        LatticeLabel label = LatticeLabel::Custom, int m = 0);

/// Integer coordinates of x with respect to L.basis, if x lies in L.
std::optional<std::vector<Integer>> lattice_membership(const FieldVector& x, const LatticeHNF& L);
bool lattice_contains(const LatticeHNF& L, const FieldVector& x);
/// A subset of B as lattices (every basis vector of A lies in B).
bool lattice_subset(const LatticeHNF& A, const LatticeHNF& B);
LatticeHNF lattice_intersection(const LatticeHNF& A, const LatticeHNF& B);

/// The defining test of Lambda_m: x in Z[alpha] and alpha^(1-m) x in Z[1/alpha].
bool in_lambda(const LaurentElem& x, int m, const PolynomialSpec& spec);

/// Lambda_m. m = 0 uses the closed form w_0 = a_n, w_i = alpha w_(i-1) + a_(n-i);
/// other m are reached by certified steps (index |a_n| per step).
LatticeHNF lambda_basis(const PolynomialSpec& spec, int m, int bound = 8);

struct PrimitivityTerm {
  int power = 0;       // j in alpha^j (d_hi - d_lo)
  int hi = 0, lo = 0;  // digit indices
  Integer coeff;
};

struct SpanClosure {
  std::vector<FieldVector> digit_diffs;
  bool primitive = false;
  std::vector<PrimitivityTerm> certificate;  // sums to exactly 1 when primitive
  int cap = 0;
  int rounds_used = 0;
};

SpanClosure check_primitivity(const PolynomialSpec& spec, const std::vector<LaurentElem>& digits, int cap = -1);
/// Recomputes the certificate sum; true iff it equals 1.
bool verify_primitivity_certificate(const PolynomialSpec& spec, const std::vector<LaurentElem>& digits,
                                    const std::vector<PrimitivityTerm>& certificate);

/// The translation module intersected with Lambda_m. Exact when the digit set
/// is primitive, otherwise the stabilized chain (flagged heuristic).
LatticeHNF z_cap_lambda(const PolynomialSpec& spec, const std::vector<LaurentElem>& digits, int m,
                        const SpanClosure& closure, int max_rounds = 64);

}  // namespace ratile
