#include "ratile/exactnum.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace ratile {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DegreeZero: return "DegreeZero";
    case ErrorKind::NotPrimitive: return "NotPrimitive";
    case ErrorKind::NotExpanding: return "NotExpanding";
    case ErrorKind::TriviallyReducible: return "TriviallyReducible";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DuplicateDigit: return "DuplicateDigit";
    case ErrorKind::DigitNotInZAlpha: return "DigitNotInZAlpha";
    case ErrorKind::NotInShiftedRing: return "NotInShiftedRing";
    case ErrorKind::NoDigitMatches: return "NoDigitMatches";
    case ErrorKind::MultipleDigitsMatch: return "MultipleDigitsMatch";
    case ErrorKind::IndexLawViolation: return "IndexLawViolation";
    case ErrorKind::BoundExceeded: return "BoundExceeded";
    case ErrorKind::DepthTooLarge: return "DepthTooLarge";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

bool Error::is_input_error() const noexcept {
  switch (kind_) {
    case ErrorKind::InvalidInput:
    case ErrorKind::DegreeZero:
    case ErrorKind::NotPrimitive:
    case ErrorKind::NotExpanding:
    case ErrorKind::TriviallyReducible:
    case ErrorKind::DegenerateInput:
    case ErrorKind::DuplicateDigit:
    case ErrorKind::DigitNotInZAlpha:
    case ErrorKind::NotInShiftedRing:
    case ErrorKind::NoDigitMatches:
    case ErrorKind::MultipleDigitsMatch:
    case ErrorKind::DepthTooLarge:
      return true;
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// LaurentElem

namespace {

void add_to(LaurentElem::Terms& terms, int e, const Integer& c) {
  if (c == 0) return;
  auto [it, inserted] = terms.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

}  // namespace

LaurentElem::LaurentElem(Terms terms) {
  for (auto& [e, c] : terms)
    if (c != 0) terms_.emplace(e, std::move(c));
}

LaurentElem LaurentElem::monomial(const Integer& c, int exponent) {
  LaurentElem x;
  add_to(x.terms_, exponent, c);
  return x;
}

int LaurentElem::min_exponent() const { return terms_.empty() ? 0 : terms_.begin()->first; }
int LaurentElem::max_exponent() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

Integer LaurentElem::coeff(int exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Integer(0) : it->second;
}

void LaurentElem::add_term(int exponent, const Integer& c) { add_to(terms_, exponent, c); }

LaurentElem LaurentElem::shifted(int k) const {
  LaurentElem out;
  for (const auto& [e, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), e + k, c);
  return out;
}

LaurentElem LaurentElem::operator-() const {
  LaurentElem out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

LaurentElem& LaurentElem::operator+=(const LaurentElem& o) {
  for (const auto& [e, c] : o.terms_) add_to(terms_, e, c);
  return *this;
}

LaurentElem& LaurentElem::operator-=(const LaurentElem& o) {
  for (const auto& [e, c] : o.terms_) add_to(terms_, e, -c);
  return *this;
}

LaurentElem operator*(const LaurentElem& a, const LaurentElem& b) {
  LaurentElem out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) add_to(out.terms_, ea + eb, ca * cb);
  return out;
}

LaurentElem operator*(const Integer& c, const LaurentElem& a) {
  if (c == 0) return {};
  LaurentElem out = a;
  for (auto& [e, v] : out.terms_) v *= c;
  return out;
}

namespace {

class LaurentParser {
 public:
  explicit LaurentParser(std::string_view text) {
    for (char ch : text)
      if (!std::isspace(static_cast<unsigned char>(ch))) s_.push_back(ch);
  }

  LaurentElem parse() {
    if (s_.empty()) fail("empty expression");
    LaurentElem out;
    bool first = true;
    while (pos_ < s_.size()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      auto [c, e] = term();
      out.add_term(e, sign * c);
    }
    return out;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorKind::InvalidInput,
                "cannot parse Laurent element '" + s_ + "' at " + std::to_string(pos_) + ": " + why);
  }

  Integer integer() {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected digits");
    return Integer(s_.substr(start, pos_ - start));
  }

  int exponent() {
    int sign = 1;
    if (peek() == '-' || peek() == '+') {
      sign = peek() == '-' ? -1 : 1;
      ++pos_;
    }
    Integer e = integer();
    if (!e.fits_sint_p()) fail("exponent out of range");
    return sign * static_cast<int>(e.get_si());
  }

  std::pair<Integer, int> term() {
    Integer c = 1;
    bool have_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      c = integer();
      have_coeff = true;
      if (peek() == '*') {
        ++pos_;
        if (peek() != 'a') fail("expected 'a' after '*'");
      }
    }
    if (peek() != 'a') {
      if (!have_coeff) fail("expected a term");
      return {c, 0};
    }
    ++pos_;
    int e = 1;
    if (peek() == '^') {
      ++pos_;
      e = exponent();
    }
    return {c, e};
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

LaurentElem LaurentElem::parse(std::string_view text) { return LaurentParser(text).parse(); }

std::string LaurentElem::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Integer mag = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (e == 0) {
      os << mag.get_str();
      continue;
    }
    if (mag != 1) os << mag.get_str() << '*';
    os << 'a';
    if (e != 1) os << '^' << e;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// FieldVector / NumberField

bool FieldVector::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](const Rational& q) { return q == 0; });
}

FieldVector operator+(const FieldVector& a, const FieldVector& b) {
  FieldVector out = a;
  for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] += b.coords[i];
  return out;
}

FieldVector operator-(const FieldVector& a, const FieldVector& b) {
  FieldVector out = a;
  for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] -= b.coords[i];
  return out;
}

FieldVector FieldVector::operator-() const {
  FieldVector out = *this;
  for (auto& q : out.coords) q = -q;
  return out;
}

FieldVector operator*(const Rational& c, const FieldVector& v) {
  FieldVector out = v;
  for (auto& q : out.coords) q *= c;
  return out;
}

NumberField::NumberField(PolynomialSpec spec) : spec_(std::move(spec)) {
  if (spec_.degree < 1) throw Error(ErrorKind::DegreeZero, "number field needs degree >= 1");
}

FieldVector NumberField::zero() const {
  return FieldVector{std::vector<Rational>(static_cast<std::size_t>(spec_.degree))};
}

FieldVector NumberField::from_rational(const Rational& q) const {
  FieldVector v = zero();
  v.coords[0] = q;
  return v;
}

FieldVector NumberField::mul_alpha(const FieldVector& a) const {
  const int n = spec_.degree;
  FieldVector r = zero();
  for (int i = 1; i < n; ++i) r.coords[i] = a.coords[i - 1];
  const Rational& top = a.coords[n - 1];
  if (top != 0) {
    Rational scale = top / Rational(spec_.an());
    for (int i = 0; i < n; ++i)
      if (spec_.a(i) != 0) r.coords[i] -= scale * spec_.a(i);
  }
  return r;
}

FieldVector NumberField::mul_alpha_inv(const FieldVector& a) const {
  const int n = spec_.degree;
  FieldVector r = zero();
  for (int i = 1; i < n; ++i) r.coords[i - 1] = a.coords[i];
  const Rational& low = a.coords[0];
  if (low != 0) {
    Rational scale = low / Rational(spec_.a0());
    for (int j = 0; j < n; ++j)
      if (spec_.a(j + 1) != 0) r.coords[j] -= scale * spec_.a(j + 1);
  }
  return r;
}

FieldVector NumberField::mul_alpha_pow(FieldVector a, int k) const {
  for (; k > 0; --k) a = mul_alpha(a);
  for (; k < 0; ++k) a = mul_alpha_inv(a);
  return a;
}

FieldVector NumberField::mul(const FieldVector& a, const FieldVector& b) const {
  const int n = spec_.degree;
  std::vector<Rational> prod(static_cast<std::size_t>(2 * n - 1));
  for (int i = 0; i < n; ++i) {
    if (a.coords[i] == 0) continue;
    for (int j = 0; j < n; ++j) prod[i + j] += a.coords[i] * b.coords[j];
  }
  for (int e = 2 * n - 2; e >= n; --e) {
    if (prod[e] == 0) continue;
    Rational t = prod[e] / Rational(spec_.an());
    prod[e] = 0;
    for (int i = 0; i < n; ++i) prod[e - n + i] -= t * spec_.a(i);
  }
  prod.resize(static_cast<std::size_t>(n));
  return FieldVector{std::move(prod)};
}

FieldVector NumberField::from_laurent(const LaurentElem& x) const {
  if (x.is_zero()) return zero();
  const int lo = x.min_exponent();
  const int hi = x.max_exponent();
  FieldVector v = zero();
  for (int e = hi; e >= lo; --e) {
    if (e != hi) v = mul_alpha(v);
    Integer c = x.coeff(e);
    if (c != 0) v.coords[0] += c;
  }
  return mul_alpha_pow(std::move(v), lo);
}

FieldVector to_field_vector(const LaurentElem& x, const PolynomialSpec& spec) {
  return NumberField(spec).from_laurent(x);
}

// ---------------------------------------------------------------------------
// Membership reductions

namespace {

// Clears every negative exponent using C(gamma) = 0 (C ascending), then puts
// the coefficients of degree >= deg C into [0, |lead C|).
Membership reduce_low(LaurentElem::Terms terms, const std::vector<Integer>& rel) {
  const int deg = static_cast<int>(rel.size()) - 1;
  const Integer c0 = rel.front();
  Membership out;
  while (!terms.empty() && terms.begin()->first < 0) {
    auto first = terms.begin();
    const int e = first->first;
    const Integer c = first->second;
    if (!mpz_divisible_p(c.get_mpz_t(), c0.get_mpz_t())) {
      out.failing_exponent = e;
      out.failing_coeff = c;
      return out;
    }
    Integer q;
    mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), c0.get_mpz_t());
    terms.erase(first);
    for (int i = 1; i <= deg; ++i)
      if (rel[i] != 0) add_to(terms, e + i, -q * rel[i]);
  }
  const Integer lead = rel.back();
  const Integer abs_lead = abs(lead);
  if (!terms.empty()) {
    for (int e = terms.rbegin()->first; e >= deg; --e) {
      auto it = terms.find(e);
      if (it == terms.end()) continue;
      Integer r;
      mpz_fdiv_r(r.get_mpz_t(), it->second.get_mpz_t(), abs_lead.get_mpz_t());
      Integer q;
      mpz_divexact(q.get_mpz_t(), Integer(it->second - r).get_mpz_t(), lead.get_mpz_t());
      if (q == 0) continue;
      for (int i = 0; i <= deg; ++i)
        if (rel[i] != 0) add_to(terms, e - deg + i, -q * rel[i]);
    }
  }
  out.member = true;
  out.rep = LaurentElem(std::move(terms));
  return out;
}

LaurentElem::Terms negate_exponents(const LaurentElem::Terms& terms) {
  LaurentElem::Terms out;
  for (const auto& [e, c] : terms) out.emplace(-e, c);
  return out;
}

}  // namespace

Membership reduce_bottom(const LaurentElem& x, const PolynomialSpec& spec) {
  std::vector<Integer> rel;
  for (long long c : spec.coeffs) rel.emplace_back(static_cast<long>(c));
  return reduce_low(x.terms(), rel);
}

Membership reduce_top(const LaurentElem& x, const PolynomialSpec& spec) {
  std::vector<Integer> reversed;
  for (auto it = spec.coeffs.rbegin(); it != spec.coeffs.rend(); ++it) reversed.emplace_back(static_cast<long>(*it));
  Membership m = reduce_low(negate_exponents(x.terms()), reversed);
  m.failing_exponent = -m.failing_exponent;
  if (m.member) m.rep = LaurentElem(negate_exponents(m.rep.terms()));
  return m;
}

bool in_shifted_top_ring(const LaurentElem& x, int k, const PolynomialSpec& spec) {
  return reduce_top(x.shifted(-k), spec).member;
}

// ---------------------------------------------------------------------------
// Schur-Cohn and validation

ExpandingReport expanding_report(const std::vector<long long>& coeffs) {
  if (std::all_of(coeffs.begin(), coeffs.end(), [](long long c) { return c == 0; }))
    throw Error(ErrorKind::DegenerateInput, "zero polynomial");
  std::vector<long long> trimmed = coeffs;
  while (trimmed.back() == 0) trimmed.pop_back();

  ExpandingReport rep;
  long long rest = 0;
  for (std::size_t i = 1; i < trimmed.size(); ++i) rest += std::llabs(trimmed[i]);
  rep.sufficient_condition = std::llabs(trimmed.front()) > rest;

  // Roots of A outside the unit circle <=> roots of X^n A(1/X) inside it.
  std::vector<Integer> p;
  for (auto it = trimmed.rbegin(); it != trimmed.rend(); ++it) p.emplace_back(static_cast<long>(*it));
  // A root at 0 of A would make the reversal drop degree; such A is not expanding.
  if (trimmed.front() == 0) return rep;

  while (p.size() > 1) {
    const int d = static_cast<int>(p.size()) - 1;
    rep.table.push_back({d, p[d], p[0]});
    if (abs(p[0]) >= abs(p[d])) return rep;
    std::vector<Integer> q(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) q[i] = p[d] * p[i + 1] - p[0] * p[d - 1 - i];
    p = std::move(q);
  }
  rep.table.push_back({0, p[0], p[0]});
  rep.expanding = true;
  return rep;
}

bool is_expanding(const std::vector<long long>& coeffs) { return expanding_report(coeffs).expanding; }

namespace {

std::vector<long long> positive_divisors(long long v) {
  v = std::llabs(v);
  std::vector<long long> out;
  for (long long d = 1; d * d <= v; ++d) {
    if (v % d) continue;
    out.push_back(d);
    if (d != v / d) out.push_back(v / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool has_rational_root(const std::vector<long long>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  if (a.front() == 0) return true;
  for (long long p : positive_divisors(a.front())) {
    for (long long q : positive_divisors(a.back())) {
      if (std::gcd(p, q) != 1) continue;
      for (int sign : {1, -1}) {
        Integer sum = 0, pp = 1, qq = 1;
        std::vector<Integer> qpow(static_cast<std::size_t>(n + 1));
        for (int i = 0; i <= n; ++i, qq *= static_cast<long>(q)) qpow[i] = qq;
        for (int i = 0; i <= n; ++i, pp *= static_cast<long>(sign * p))
          sum += Integer(static_cast<long>(a[i])) * pp * qpow[n - i];
        if (sum == 0) return true;
      }
    }
  }
  return false;
}

// Exact division test of a by g over Q.
bool divides(const std::vector<long long>& a, const std::vector<long long>& g) {
  std::vector<Rational> r;
  for (long long c : a) r.emplace_back(static_cast<long>(c));
  const int dg = static_cast<int>(g.size()) - 1;
  for (int e = static_cast<int>(r.size()) - 1; e >= dg; --e) {
    if (r[e] == 0) continue;
    Rational t = r[e] / Rational(static_cast<long>(g[dg]));
    for (int i = 0; i <= dg; ++i) r[e - dg + i] -= t * static_cast<long>(g[i]);
  }
  return std::all_of(r.begin(), r.end(), [](const Rational& q) { return q == 0; });
}

bool has_quadratic_factor(const std::vector<long long>& a) {
  double norm2 = 0;
  for (long long c : a) norm2 += static_cast<double>(c) * static_cast<double>(c);
  // Mignotte: a factor of degree 2 has |middle coefficient| <= 2 ||A||_2.
  const long long bound = static_cast<long long>(std::ceil(2.0 * std::sqrt(norm2)));
  for (long long lead : positive_divisors(a.back())) {
    for (long long c0 : positive_divisors(a.front())) {
      for (long long s : {1LL, -1LL}) {
        for (long long mid = -bound; mid <= bound; ++mid) {
          if (divides(a, {s * c0, mid, lead})) return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

bool has_small_factor(const std::vector<long long>& coeffs) {
  const int n = static_cast<int>(coeffs.size()) - 1;
  if (n <= 1) return false;
  if (has_rational_root(coeffs)) return true;
  if (n == 4 && has_quadratic_factor(coeffs)) return true;
  return false;
}

PolynomialSpec validate_spec(const std::vector<long long>& coeffs) {
  if (coeffs.empty()) throw Error(ErrorKind::InvalidInput, "empty coefficient list");
  if (coeffs.back() == 0) throw Error(ErrorKind::InvalidInput, "leading coefficient a_n must be nonzero");
  if (coeffs.size() == 1) throw Error(ErrorKind::DegreeZero, "constant polynomial");

  long long g = 0;
  for (long long c : coeffs) g = std::gcd(g, std::llabs(c));
  if (g != 1) throw Error(ErrorKind::NotPrimitive, "gcd of coefficients is " + std::to_string(g));

  PolynomialSpec spec;
  spec.coeffs = coeffs;
  spec.degree = static_cast<int>(coeffs.size()) - 1;
  spec.abs_a0 = std::llabs(coeffs.front());
  spec.abs_an = std::llabs(coeffs.back());

  if (spec.abs_a0 < 2 || !is_expanding(coeffs))
    throw Error(ErrorKind::NotExpanding, "some root lies on or inside the unit circle");

  if (spec.degree <= 4) {
    if (has_small_factor(coeffs)) throw Error(ErrorKind::TriviallyReducible, "polynomial has a factor");
    spec.irreducibility = IrreducibilityStatus::verified;
  } else {
    if (has_rational_root(coeffs)) throw Error(ErrorKind::TriviallyReducible, "polynomial has a rational root");
    spec.irreducibility = IrreducibilityStatus::asserted;
  }

  const EmbeddingData emb = compute_embeddings(spec);
  if (!(emb.contraction > 1.0))
    throw Error(ErrorKind::Internal, "Schur-Cohn verdict disagrees with computed roots");
  return spec;
}

// ---------------------------------------------------------------------------
// Embeddings

namespace {

using cld = std::complex<long double>;

std::pair<cld, cld> eval_with_derivative(const std::vector<long long>& a, cld z) {
  cld p = 0, dp = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + static_cast<long double>(*it);
  }
  return {p, dp};
}

}  // namespace

std::vector<std::complex<double>> EmbeddingData::places() const {
  std::vector<std::complex<double>> out;
  for (double r : real_roots) out.emplace_back(r, 0.0);
  out.insert(out.end(), complex_roots.begin(), complex_roots.end());
  return out;
}

EmbeddingData compute_embeddings(const PolynomialSpec& spec, double tolerance) {
  const auto& a = spec.coeffs;
  const int n = spec.degree;
  if (n < 1) throw Error(ErrorKind::DegreeZero, "no roots");

  // Aberth-Ehrlich from points on a circle of radius |a0/an|^(1/n).
  const long double radius = std::pow(std::fabs(static_cast<long double>(a.front()) / a.back()), 1.0L / n);
  std::vector<cld> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const long double ang = 2.0L * std::numbers::pi_v<long double> * k / n + 0.4L;
    z[k] = std::polar(radius, ang);
  }
  bool converged = false;
  for (int iter = 0; iter < 1000 && !converged; ++iter) {
    long double worst = 0;
    for (int k = 0; k < n; ++k) {
      auto [p, dp] = eval_with_derivative(a, z[k]);
      if (p == cld(0)) continue;
      cld ratio = p / dp;
      cld repulse = 0;
      for (int j = 0; j < n; ++j)
        if (j != k) repulse += cld(1) / (z[k] - z[j]);
      cld step = ratio / (cld(1) - ratio * repulse);
      z[k] -= step;
      worst = std::max(worst, std::abs(step) / std::max(1.0L, std::abs(z[k])));
    }
    converged = worst < 1e-17L;
  }
  for (auto& root : z) {
    for (int it = 0; it < 8; ++it) {
      auto [p, dp] = eval_with_derivative(a, root);
      if (dp == cld(0)) break;
      root -= p / dp;
    }
    if (std::abs(eval_with_derivative(a, root).first) > tolerance)
      throw Error(ErrorKind::NoConvergence, "root refinement did not reach the tolerance");
  }

  EmbeddingData emb;
  emb.precision = tolerance;
  std::vector<std::complex<double>> upper, lower;
  for (const auto& root : z) {
    std::complex<double> c(static_cast<double>(root.real()), static_cast<double>(root.imag()));
    if (std::fabs(c.imag()) <= tolerance)
      emb.real_roots.push_back(c.real());
    else if (c.imag() > 0)
      upper.push_back(c);
    else
      lower.push_back(c);
  }
  if (upper.size() != lower.size())
    throw Error(ErrorKind::NoConvergence, "complex roots do not pair into conjugates");
  for (const auto& u : upper) {
    const bool paired = std::any_of(lower.begin(), lower.end(), [&](const auto& l) {
      return std::abs(std::conj(l) - u) <= 1e3 * tolerance * std::max(1.0, std::abs(u));
    });
    if (!paired) throw Error(ErrorKind::NoConvergence, "unpaired complex root");
  }
  std::sort(emb.real_roots.begin(), emb.real_roots.end());
  std::sort(upper.begin(), upper.end(), [](const auto& x, const auto& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  emb.complex_roots = std::move(upper);
  emb.contraction = std::numeric_limits<double>::infinity();
  for (const auto& root : z) emb.contraction = std::min(emb.contraction, static_cast<double>(std::abs(root)));
  return emb;
}

std::vector<std::complex<double>> embed_places(const FieldVector& x, const EmbeddingData& emb) {
  std::vector<std::complex<double>> out;
  for (const auto& place : emb.places()) {
    std::complex<double> acc = 0;
    for (auto it = x.coords.rbegin(); it != x.coords.rend(); ++it) acc = acc * place + it->get_d();
    out.push_back(acc);
  }
  return out;
}

std::vector<double> embed_arch(const FieldVector& x, const EmbeddingData& emb) {
  const auto values = embed_places(x, emb);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(emb.dim()));
  for (int i = 0; i < emb.r_count(); ++i) out.push_back(values[i].real());
  for (int i = 0; i < emb.s_count(); ++i) {
    out.push_back(values[emb.r_count() + i].real());
    out.push_back(values[emb.r_count() + i].imag());
  }
  return out;
}

}  // namespace ratile
