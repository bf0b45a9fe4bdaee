#pragma once

// Digit sets, the backward digit map T_alpha and its preimages, address
// enumeration, the base-1/alpha surrogate expansion and the shift radix
// system side (tau_r, M_r, iota).

#include <cstdint>
#include <optional>
#include <vector>

#include "ratile/exactnum.hpp"
#include "ratile/lattice.hpp"

namespace ratile {

struct DigitSet {
  std::vector<LaurentElem> raw;      // as given
  std::vector<LaurentElem> digits;   // canonical Z[alpha] forms after translation; one of them is 0
  std::vector<FieldVector> values;
  std::vector<Integer> residues;     // constant term mod |a_0|, in [0, |a_0|)
  std::optional<LaurentElem> shift;  // raw digit subtracted from all digits when 0 was missing
  int m = 0;
  int minimal_m = 0;
  bool m_overridden = false;
  bool is_standard = false;
  bool has_residue_system = false;

  std::size_t size() const { return digits.size(); }
};

DigitSet validate_digits(const PolynomialSpec& spec, const std::vector<LaurentElem>& raw,
                         std::optional<int> m_override = std::nullopt);

/// Smallest m with alpha^(-m) d in Z[1/alpha] for every digit.
int minimal_shift(const PolynomialSpec& spec, const std::vector<LaurentElem>& digits);

/// Residue of x in Z[alpha]/alpha Z[alpha] = Z/a_0, in [0, |a_0|). Throws
/// DigitNotInZAlpha when x is not in Z[alpha].
Integer residue_mod_alpha(const LaurentElem& x, const PolynomialSpec& spec);

struct TStep {
  LaurentElem image;  // canonical Z[alpha] form
  int digit = -1;
};

TStep T_alpha(const LaurentElem& x, const PolynomialSpec& spec, const DigitSet& D);

/// {alpha x + d : d in D, alpha x + d in L} in digit order, canonical forms.
std::vector<LaurentElem> preimages_in_lambda(const LaurentElem& x, const PolynomialSpec& spec, const DigitSet& D,
                                             const LatticeHNF& L);
std::vector<int> preimage_digits_in_lambda(const LaurentElem& x, const PolynomialSpec& spec, const DigitSet& D,
                                           const LatticeHNF& L);

struct Address {
  std::vector<int> word;  // d_0, ..., d_(k-1) as digit indices
  FieldVector value;      // sum alpha^j d_j
};

/// All |D|^k addresses in lexicographic order of the word.
std::vector<Address> addresses(const PolynomialSpec& spec, const DigitSet& D, int k, std::size_t limit = 2000000);

struct SurrogateExpansion {
  int start_exponent = 0;    // x = sum_(j >= start) b_j alpha^(-j)
  std::vector<int> digits;   // b_start, b_(start+1), ...
  double value = 0.0;        // sum b_j |a_n|^(-j)
};

/// Greedy expansion in base beta = 1/alpha with digits in [0, |a_n|).
/// Without an explicit start the exponent min(0, smallest admissible) is used.
SurrogateExpansion surrogate(const LaurentElem& x, const PolynomialSpec& spec, int J,
                             std::optional<int> start = std::nullopt);

using IntVec = std::vector<Integer>;
using RatVec = std::vector<Rational>;

struct SRSParam {
  RatVec r;                              // (a_n/a_0, ..., a_1/a_0)
  std::vector<RatVec> companion;         // M_r
  int n = 0;
};

SRSParam srs_param(const PolynomialSpec& spec);
SRSParam srs_param(const RatVec& r);
IntVec srs_tau(const SRSParam& p, const IntVec& z);
std::vector<IntVec> srs_preimages(const SRSParam& p, const IntVec& z);
RatVec apply_companion(const SRSParam& p, const RatVec& v);

/// sgn(a_0) sum z_i w_i with the closed-form Lambda_0 basis.
LaurentElem iota_laurent(const PolynomialSpec& spec, const IntVec& z);
FieldVector iota(const PolynomialSpec& spec, const IntVec& z);
/// The linear extension of iota to Q^n (used on SRS cloud points).
FieldVector iota_linear(const PolynomialSpec& spec, const RatVec& v);

}  // namespace ratile
