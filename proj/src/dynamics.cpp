#include "ratile/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ratile {

namespace {

constexpr int kShiftSearch = 64;

Integer mod_positive(const Integer& v, long modulus) {
  Integer r;
  const Integer m = std::abs(modulus);
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  return r;
}

LaurentElem canonical_bottom(const LaurentElem& x, const PolynomialSpec& spec) {
  auto r = reduce_bottom(x, spec);
  if (!r.member) throw Error(ErrorKind::DigitNotInZAlpha, x.to_string() + " is not in Z[alpha]");
  return r.rep;
}

LaurentElem relation(const PolynomialSpec& spec) {
  LaurentElem a;
  for (int i = 0; i <= spec.degree; ++i) a.add_term(i, spec.a(i));
  return a;
}

int shift_of(const LaurentElem& d, const PolynomialSpec& spec) {
  if (d.is_zero()) return std::numeric_limits<int>::min();
  int m = std::max(0, d.max_exponent());
  if (!in_shifted_top_ring(d, m, spec)) throw Error(ErrorKind::Internal, "polynomial not in its top ring");
  for (int step = 0; step < kShiftSearch; ++step) {
    if (!in_shifted_top_ring(d, m - 1, spec)) return m;
    --m;
  }
  throw Error(ErrorKind::BoundExceeded, "no minimal shift found for digit " + d.to_string());
}

}  // namespace

Integer residue_mod_alpha(const LaurentElem& x, const PolynomialSpec& spec) {
  return mod_positive(canonical_bottom(x, spec).coeff(0), spec.a0());
}

int minimal_shift(const PolynomialSpec& spec, const std::vector<LaurentElem>& digits) {
  if (spec.monic()) return 0;
  int m = std::numeric_limits<int>::min();
  for (const auto& d : digits) m = std::max(m, shift_of(d, spec));
  return m == std::numeric_limits<int>::min() ? 0 : m;
}

DigitSet validate_digits(const PolynomialSpec& spec, const std::vector<LaurentElem>& raw,
                         std::optional<int> m_override) {
  if (raw.empty()) throw Error(ErrorKind::InvalidInput, "empty digit set");
  NumberField K(spec);
  DigitSet D;
  D.raw = raw;
  std::vector<FieldVector> raw_values;
  for (const auto& d : raw) {
    if (!reduce_bottom(d, spec).member) throw Error(ErrorKind::DigitNotInZAlpha, d.to_string() + " is not in Z[alpha]");
    FieldVector v = K.from_laurent(d);
    if (std::find(raw_values.begin(), raw_values.end(), v) != raw_values.end())
      throw Error(ErrorKind::DuplicateDigit, "digit " + d.to_string() + " repeats an earlier digit");
    raw_values.push_back(std::move(v));
  }
  const bool has_zero = std::find(raw_values.begin(), raw_values.end(), K.zero()) != raw_values.end();
  if (!has_zero) D.shift = raw.front();
  for (const auto& d : raw) {
    LaurentElem t = D.shift ? d - *D.shift : d;
    D.digits.push_back(canonical_bottom(t, spec));
    D.values.push_back(K.from_laurent(t));
    D.residues.push_back(residue_mod_alpha(t, spec));
  }

  std::set<Integer> distinct(D.residues.begin(), D.residues.end());
  D.is_standard = static_cast<long>(D.digits.size()) == spec.abs_a0 && static_cast<long>(distinct.size()) == spec.abs_a0;

  D.minimal_m = minimal_shift(spec, D.digits);
  D.m = m_override.value_or(D.minimal_m);
  D.m_overridden = m_override.has_value();
  if (D.m < D.minimal_m)
    throw Error(ErrorKind::InvalidInput, "m override " + std::to_string(D.m) + " is below the minimal m " +
                                             std::to_string(D.minimal_m));

  std::set<Integer> top;
  for (const auto& d : D.digits) {
    auto r = reduce_top(d.shifted(-D.m), spec);
    if (!r.member) throw Error(ErrorKind::Internal, "digit outside alpha^m Z[1/alpha]");
    top.insert(mod_positive(r.rep.coeff(0), spec.an()));
  }
  D.has_residue_system = static_cast<long>(top.size()) == spec.abs_an;
  return D;
}

TStep T_alpha(const LaurentElem& x, const PolynomialSpec& spec, const DigitSet& D) {
  const Integer r = residue_mod_alpha(x, spec);
  int found = -1;
  for (std::size_t i = 0; i < D.size(); ++i) {
    if (D.residues[i] != r) continue;
    if (found >= 0) throw Error(ErrorKind::MultipleDigitsMatch, "several digits match " + x.to_string());
    found = static_cast<int>(i);
  }
  if (found < 0) throw Error(ErrorKind::NoDigitMatches, "no digit matches " + x.to_string());
  LaurentElem s = canonical_bottom(x - D.digits[found], spec);
  Integer c = s.coeff(0);
  mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), Integer(spec.a0()).get_mpz_t());
  s -= c * relation(spec);
  if (s.coeff(0) != 0) throw Error(ErrorKind::Internal, "T_alpha division left a constant term");
  return {canonical_bottom(s.shifted(-1), spec), found};
}

std::vector<int> preimage_digits_in_lambda(const LaurentElem& x, const PolynomialSpec& spec, const DigitSet& D,
                                           const LatticeHNF& L) {
  NumberField K(spec);
  const FieldVector ax = K.mul_alpha(K.from_laurent(x));
  std::vector<int> out;
  for (std::size_t i = 0; i < D.size(); ++i)
    if (lattice_contains(L, ax + D.values[i])) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<LaurentElem> preimages_in_lambda(const LaurentElem& x, const PolynomialSpec& spec, const DigitSet& D,
                                             const LatticeHNF& L) {
  std::vector<LaurentElem> out;
  for (int i : preimage_digits_in_lambda(x, spec, D, L))
    out.push_back(canonical_bottom(x.shifted(1) + D.digits[i], spec));
  return out;
}

std::vector<Address> addresses(const PolynomialSpec& spec, const DigitSet& D, int k, std::size_t limit) {
  if (k < 0) throw Error(ErrorKind::InvalidInput, "negative depth");
  double count = std::pow(static_cast<double>(D.size()), k);
  if (count > static_cast<double>(limit))
    throw Error(ErrorKind::DepthTooLarge, std::to_string(D.size()) + "^" + std::to_string(k) + " addresses");
  NumberField K(spec);
  std::vector<FieldVector> scaled;  // alpha^j d for all j < k, digit-major per j
  for (int j = 0; j < k; ++j)
    for (const auto& v : D.values) scaled.push_back(K.mul_alpha_pow(v, j));
  std::vector<Address> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<int> word(static_cast<std::size_t>(k), 0);
  const int base = static_cast<int>(D.size());
  for (;;) {
    Address a{word, K.zero()};
    for (int j = 0; j < k; ++j) a.value = a.value + scaled[static_cast<std::size_t>(j * base + word[j])];
    out.push_back(std::move(a));
    int j = k - 1;
    while (j >= 0 && ++word[j] == base) word[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

SurrogateExpansion surrogate(const LaurentElem& x, const PolynomialSpec& spec, int J, std::optional<int> start) {
  SurrogateExpansion out;
  if (start) {
    if (!in_shifted_top_ring(x, -*start, spec))
      throw Error(ErrorKind::NotInShiftedRing, x.to_string() + " is not in beta^" + std::to_string(*start) + " Z[beta]");
    out.start_exponent = *start;
  } else {
    int k0 = 0;
    while (!in_shifted_top_ring(x, -k0, spec)) {
      if (--k0 < -kShiftSearch) throw Error(ErrorKind::NotInShiftedRing, x.to_string() + " has no beta-adic expansion");
    }
    out.start_exponent = k0;
  }
  // u = alpha^(k0) x as a polynomial in beta, ascending.
  const LaurentElem u0 = reduce_top(x.shifted(out.start_exponent), spec).rep;
  const int n = spec.degree;
  std::vector<Integer> p(static_cast<std::size_t>(std::max(n, -u0.min_exponent()) + 1));
  for (const auto& [e, c] : u0.terms()) p[static_cast<std::size_t>(-e)] = c;
  std::vector<Integer> rel(static_cast<std::size_t>(n + 1));  // R(beta) = sum a_(n-j) beta^j
  for (int j = 0; j <= n; ++j) rel[j] = spec.a(n - j);

  const double base = static_cast<double>(spec.abs_an);
  double weight = std::pow(base, -out.start_exponent);
  for (int j = 0; j < J; ++j) {
    const Integer b = mod_positive(p[0], spec.an());
    const int bd = static_cast<int>(b.get_si());
    out.digits.push_back(bd);
    out.value += bd * weight;
    weight /= base;
    p[0] -= b;
    Integer c = p[0];
    mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), rel[0].get_mpz_t());
    for (int i = 0; i <= n; ++i) p[i] -= c * rel[i];
    p.erase(p.begin());
    if (static_cast<int>(p.size()) < n + 1) p.resize(static_cast<std::size_t>(n + 1));
  }
  return out;
}

SRSParam srs_param(const RatVec& r) {
  SRSParam p;
  p.n = static_cast<int>(r.size());
  p.r = r;
  p.companion.assign(static_cast<std::size_t>(p.n), RatVec(static_cast<std::size_t>(p.n)));
  for (int i = 0; i + 1 < p.n; ++i) p.companion[i][i + 1] = 1;
  for (int j = 0; j < p.n; ++j) p.companion[p.n - 1][j] = -r[j];
  return p;
}

SRSParam srs_param(const PolynomialSpec& spec) {
  RatVec r;
  for (int i = spec.degree; i >= 1; --i) {
    Rational q(spec.a(i), spec.a0());
    q.canonicalize();
    r.push_back(q);
  }
  return srs_param(r);
}

IntVec srs_tau(const SRSParam& p, const IntVec& z) {
  Rational dot = 0;
  for (int i = 0; i < p.n; ++i) dot += p.r[i] * z[i];
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), dot.get_num_mpz_t(), dot.get_den_mpz_t());
  IntVec out(z.begin() + 1, z.end());
  out.push_back(-fl);
  return out;
}

std::vector<IntVec> srs_preimages(const SRSParam& p, const IntVec& z) {
  // z' = (t, z_1, ..., z_(n-1)) with -z_n <= r_1 t + s < -z_n + 1
  Rational s = 0;
  for (int i = 1; i < p.n; ++i) s += p.r[i] * z[i - 1];
  const Rational lo = Rational(-z[p.n - 1]) - s;
  const Rational hi = lo + 1;
  Rational a = lo / p.r[0], b = hi / p.r[0];
  Integer first, last;
  if (p.r[0] > 0) {  // t in [a, b)
    mpz_cdiv_q(first.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
    mpz_cdiv_q(last.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
    last -= 1;
  } else {  // t in (b, a]
    mpz_fdiv_q(first.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
    first += 1;
    mpz_fdiv_q(last.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
  }
  std::vector<IntVec> out;
  for (Integer t = first; t <= last; ++t) {
    IntVec zp{t};
    zp.insert(zp.end(), z.begin(), z.end() - 1);
    out.push_back(std::move(zp));
  }
  return out;
}

RatVec apply_companion(const SRSParam& p, const RatVec& v) {
  RatVec out(static_cast<std::size_t>(p.n));
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j)
      if (p.companion[i][j] != 0) out[i] += p.companion[i][j] * v[j];
  return out;
}

LaurentElem iota_laurent(const PolynomialSpec& spec, const IntVec& z) {
  const LatticeHNF lam = lambda_basis(spec, 0);
  LaurentElem out;
  for (int i = 0; i < spec.degree; ++i)
    if (z[i] != 0) out += z[i] * lam.laurent[i];
  return spec.a0() < 0 ? -out : out;
}

FieldVector iota(const PolynomialSpec& spec, const IntVec& z) {
  return NumberField(spec).from_laurent(iota_laurent(spec, z));
}

FieldVector iota_linear(const PolynomialSpec& spec, const RatVec& v) {
  const LatticeHNF lam = lambda_basis(spec, 0);
  NumberField K(spec);
  FieldVector out = K.zero();
  for (int i = 0; i < spec.degree; ++i)
    if (v[i] != 0) out = out + v[i] * lam.basis[i];
  return spec.a0() < 0 ? -out : out;
}

}  // namespace ratile
