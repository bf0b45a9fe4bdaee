#include "ratile/lattice.hpp"

#include <algorithm>

namespace ratile {

namespace {

IntMatrix identity(std::size_t n) {
  IntMatrix id(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  return id;
}

void combine_rows(IntMatrix& M, std::size_t r, std::size_t i, const Integer& s, const Integer& t, const Integer& u,
                  const Integer& v) {
  // (row_r, row_i) <- (s row_r + t row_i, u row_r + v row_i)
  for (std::size_t j = 0; j < M[r].size(); ++j) {
    Integer a = M[r][j], b = M[i][j];
    M[r][j] = s * a + t * b;
    M[i][j] = u * a + v * b;
  }
}

void axpy_row(IntMatrix& M, std::size_t dst, std::size_t src, const Integer& q) {
  if (q == 0) return;
  for (std::size_t j = 0; j < M[dst].size(); ++j) M[dst][j] -= q * M[src][j];
}

int first_nonzero(const std::vector<Integer>& row) {
  for (std::size_t j = 0; j < row.size(); ++j)
    if (row[j] != 0) return static_cast<int>(j);
  return -1;
}

// Coefficients c with c * rows = x, rows in Hermite form.
std::optional<std::vector<Integer>> solve_hermite(const IntMatrix& rows, std::vector<Integer> x) {
  std::vector<Integer> c(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const int p = first_nonzero(rows[k]);
    for (int j = 0; j < p; ++j)
      if (x[j] != 0) return std::nullopt;
    if (!mpz_divisible_p(x[p].get_mpz_t(), rows[k][p].get_mpz_t())) return std::nullopt;
    mpz_divexact(c[k].get_mpz_t(), x[p].get_mpz_t(), rows[k][p].get_mpz_t());
    for (std::size_t j = p; j < x.size(); ++j) x[j] -= c[k] * rows[k][j];
  }
  for (const auto& v : x)
    if (v != 0) return std::nullopt;
  return c;
}

Integer common_denominator(const std::vector<FieldVector>& vs) {
  Integer d = 1;
  for (const auto& v : vs)
    for (const auto& q : v.coords) d = lcm(d, Integer(q.get_den()));
  return d;
}

std::vector<Integer> scale_row(const FieldVector& v, const Integer& d) {
  std::vector<Integer> out;
  out.reserve(v.coords.size());
  for (const auto& q : v.coords) {
    Integer num = q.get_num() * d;
    mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), q.get_den_mpz_t());
    out.push_back(num);
  }
  return out;
}

using RatMatrix = std::vector<std::vector<Rational>>;

RatMatrix inverse(RatMatrix a) {
  const std::size_t n = a.size();
  RatMatrix inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw Error(ErrorKind::Internal, "singular lattice basis");
    std::swap(a[col], a[piv]);
    std::swap(inv[col], inv[piv]);
    Rational s = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= s;
      inv[col][j] /= s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      Rational f = a[i][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[col][j];
        inv[i][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

// Rows of the dual basis: columns of the inverse of the row basis.
std::vector<FieldVector> dual_rows(const std::vector<FieldVector>& basis) {
  RatMatrix a;
  for (const auto& v : basis) a.push_back(v.coords);
  RatMatrix inv = inverse(std::move(a));
  const std::size_t n = basis.size();
  std::vector<FieldVector> out(n, FieldVector{std::vector<Rational>(n)});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i].coords[j] = inv[j][i];
  return out;
}

LaurentElem combine(const std::vector<Integer>& coeffs, const std::vector<LaurentElem>& elems) {
  LaurentElem out;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0) out += coeffs[i] * elems[i];
  return out;
}

void check_membership(const LatticeHNF& L, const PolynomialSpec& spec) {
  for (const auto& v : L.laurent)
    if (!in_lambda(v, L.m, spec))
      throw Error(ErrorKind::IndexLawViolation,
                  "basis vector " + v.to_string() + " fails the Lambda_" + std::to_string(L.m) + " test");
}

LatticeHNF step_up(const LatticeHNF& L, const PolynomialSpec& spec) {
  NumberField K(spec);
  std::vector<LaurentElem> gens = L.laurent;
  for (const auto& v : L.laurent) gens.push_back(v.shifted(1));
  std::vector<FieldVector> values;
  for (const auto& g : gens) values.push_back(K.from_laurent(g));
  LatticeHNF next = make_lattice(values, gens, LatticeLabel::Lambda, L.m + 1);
  if (next.determinant() * Rational(spec.abs_an) != L.determinant())
    throw Error(ErrorKind::IndexLawViolation, "index of Lambda_" + std::to_string(L.m) + " in Lambda_" +
                                                  std::to_string(L.m + 1) + " is not |a_n|");
  check_membership(next, spec);
  return next;
}

LatticeHNF step_down(const LatticeHNF& L, const PolynomialSpec& spec) {
  NumberField K(spec);
  const long M = static_cast<long>(spec.abs_an);
  const int n = spec.degree;
  double cosets = 1;
  for (int i = 0; i < n; ++i) cosets *= static_cast<double>(M);
  if (cosets > 1e6) throw Error(ErrorKind::BoundExceeded, "too many cosets for the downward step");

  std::vector<LaurentElem> gens;
  for (const auto& v : L.laurent) gens.push_back(Integer(M) * v);
  std::vector<long> digit(static_cast<std::size_t>(n), 0);
  for (;;) {
    int i = 0;
    while (i < n && ++digit[i] == M) digit[i++] = 0;
    if (i == n) break;
    LaurentElem v;
    for (int j = 0; j < n; ++j)
      if (digit[j] != 0) v += Integer(digit[j]) * L.laurent[j];
    if (in_shifted_top_ring(v, L.m - 2, spec)) gens.push_back(v);
  }
  std::vector<FieldVector> values;
  for (const auto& g : gens) values.push_back(K.from_laurent(g));
  LatticeHNF next = make_lattice(values, gens, LatticeLabel::Lambda, L.m - 1);
  if (next.determinant() != L.determinant() * Rational(spec.abs_an))
    throw Error(ErrorKind::IndexLawViolation, "index of Lambda_" + std::to_string(L.m - 1) + " in Lambda_" +
                                                  std::to_string(L.m) + " is not |a_n|");
  check_membership(next, spec);
  return next;
}

std::vector<FieldVector> to_values(const NumberField& K, const std::vector<LaurentElem>& xs) {
  std::vector<FieldVector> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(K.from_laurent(x));
  return out;
}

struct Generators {
  std::vector<LaurentElem> laurent;
  std::vector<PrimitivityTerm> origin;
};

// alpha^j (d_i - d_0) for j <= round, i >= 1.
Generators digit_generators(const std::vector<LaurentElem>& digits, int round) {
  Generators g;
  for (int j = 0; j <= round; ++j)
    for (std::size_t i = 1; i < digits.size(); ++i) {
      g.laurent.push_back((digits[i] - digits[0]).shifted(j));
      g.origin.push_back({j, static_cast<int>(i), 0, Integer(0)});
    }
  return g;
}

}  // namespace

HermiteForm hermite_normal_form(const IntMatrix& input) {
  HermiteForm out;
  IntMatrix H = input;
  const std::size_t m = H.size();
  const std::size_t n = m ? H.front().size() : 0;
  IntMatrix U = identity(m);
  std::size_t r = 0;
  for (std::size_t col = 0; col < n && r < m; ++col) {
    for (std::size_t i = r + 1; i < m; ++i) {
      if (H[i][col] == 0) continue;
      if (H[r][col] == 0) {
        std::swap(H[r], H[i]);
        std::swap(U[r], U[i]);
        continue;
      }
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), H[r][col].get_mpz_t(), H[i][col].get_mpz_t());
      Integer u = -H[i][col] / g, v = H[r][col] / g;
      combine_rows(H, r, i, s, t, u, v);
      combine_rows(U, r, i, s, t, u, v);
    }
    if (H[r][col] == 0) continue;
    if (H[r][col] < 0) {
      for (auto& x : H[r]) x = -x;
      for (auto& x : U[r]) x = -x;
    }
    for (std::size_t i = 0; i < r; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), H[i][col].get_mpz_t(), H[r][col].get_mpz_t());
      axpy_row(H, i, r, q);
      axpy_row(U, i, r, q);
    }
    out.pivots.push_back(static_cast<int>(col));
    ++r;
  }
  H.resize(r);
  out.rows = std::move(H);
  out.transform = std::move(U);
  return out;
}

std::string to_string(LatticeLabel label) {
  switch (label) {
    case LatticeLabel::Lambda: return "Lambda";
    case LatticeLabel::ZcapLambda: return "ZcapLambda";
    case LatticeLabel::Custom: return "custom";
  }
  return "custom";
}

Rational LatticeHNF::determinant() const {
  Integer det = 1;
  for (std::size_t k = 0; k < hnf.size(); ++k) det *= hnf[k][first_nonzero(hnf[k])];
  Integer scale = 1;
  for (std::size_t i = 0; i < hnf.size(); ++i) scale *= denominator;
  Rational out(det, scale);
  out.canonicalize();
  return out;
}

LatticeHNF make_lattice(const std::vector<FieldVector>& gens, const std::vector<LaurentElem>& laurent,
                        LatticeLabel label, int m) {
  if (gens.empty()) throw Error(ErrorKind::Internal, "lattice without generators");
  LatticeHNF L;
  L.label = label;
  L.m = m;
  L.denominator = common_denominator(gens);
  IntMatrix rows;
  for (const auto& g : gens) rows.push_back(scale_row(g, L.denominator));
  HermiteForm hf = hermite_normal_form(rows);
  const std::size_t r = hf.rows.size();
  if (r == gens.size()) {
    L.basis = gens;
    L.laurent = laurent;
    L.to_basis.assign(hf.transform.begin(), hf.transform.begin() + static_cast<long>(r));
  } else {
    for (const auto& row : hf.rows) {
      FieldVector v;
      for (const auto& x : row) v.coords.emplace_back(x, L.denominator);
      for (auto& q : v.coords) q.canonicalize();
      L.basis.push_back(std::move(v));
    }
    if (!laurent.empty())
      for (std::size_t k = 0; k < r; ++k) L.laurent.push_back(combine(hf.transform[k], laurent));
    L.to_basis = identity(r);
  }
  L.hnf = std::move(hf.rows);
  return L;
}

std::optional<std::vector<Integer>> lattice_membership(const FieldVector& x, const LatticeHNF& L) {
  std::vector<Integer> scaled;
  for (const auto& q : x.coords) {
    Rational s = q * Rational(L.denominator);
    if (s.get_den() != 1) return std::nullopt;
    scaled.push_back(s.get_num());
  }
  auto c = solve_hermite(L.hnf, std::move(scaled));
  if (!c) return std::nullopt;
  std::vector<Integer> out(L.basis.size());
  for (std::size_t k = 0; k < c->size(); ++k)
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += (*c)[k] * L.to_basis[k][j];
  return out;
}

bool lattice_contains(const LatticeHNF& L, const FieldVector& x) { return lattice_membership(x, L).has_value(); }

bool lattice_subset(const LatticeHNF& A, const LatticeHNF& B) {
  return std::all_of(A.basis.begin(), A.basis.end(), [&](const FieldVector& v) { return lattice_contains(B, v); });
}

LatticeHNF lattice_intersection(const LatticeHNF& A, const LatticeHNF& B) {
  std::vector<FieldVector> duals = dual_rows(A.basis);
  for (auto& v : dual_rows(B.basis)) duals.push_back(std::move(v));
  LatticeHNF sum = make_lattice(duals, {});
  return make_lattice(dual_rows(sum.basis), {});
}

bool in_lambda(const LaurentElem& x, int m, const PolynomialSpec& spec) {
  return reduce_bottom(x, spec).member && in_shifted_top_ring(x, m - 1, spec);
}

LatticeHNF lambda_basis(const PolynomialSpec& spec, int m, int bound) {
  if (m > bound || m < -bound)
    throw Error(ErrorKind::BoundExceeded, "|m| = " + std::to_string(m) + " exceeds " + std::to_string(bound));
  NumberField K(spec);
  std::vector<LaurentElem> w;
  w.push_back(LaurentElem::constant(spec.an()));
  for (int i = 1; i < spec.degree; ++i) w.push_back(w.back().shifted(1) + LaurentElem::constant(spec.a(spec.degree - i)));
  LatticeHNF L = make_lattice(to_values(K, w), w, LatticeLabel::Lambda, 0);
  if (L.rank() != spec.degree) throw Error(ErrorKind::Internal, "closed-form Lambda_0 basis is degenerate");
  check_membership(L, spec);
  while (L.m < m) L = step_up(L, spec);
  while (L.m > m) L = step_down(L, spec);
  return L;
}

SpanClosure check_primitivity(const PolynomialSpec& spec, const std::vector<LaurentElem>& digits, int cap) {
  NumberField K(spec);
  SpanClosure out;
  out.cap = cap < 0 ? 4 * spec.degree : cap;
  std::vector<FieldVector> values = to_values(K, digits);
  for (std::size_t i = 0; i < digits.size(); ++i)
    for (std::size_t j = 0; j < digits.size(); ++j)
      if (i != j) out.digit_diffs.push_back(values[i] - values[j]);
  if (digits.size() < 2) return out;

  const FieldVector one = K.from_rational(1);
  const auto zero_it = std::find(values.begin(), values.end(), K.zero());
  const auto one_it = std::find(values.begin(), values.end(), one);
  if (zero_it != values.end() && one_it != values.end()) {
    out.primitive = true;
    out.certificate.push_back({0, static_cast<int>(one_it - values.begin()),
                               static_cast<int>(zero_it - values.begin()), Integer(1)});
    return out;
  }

  for (int round = 0; round <= out.cap; ++round) {
    Generators g = digit_generators(digits, round);
    std::vector<FieldVector> gv = to_values(K, g.laurent);
    std::vector<FieldVector> with_one = gv;
    with_one.push_back(one);
    const Integer d = common_denominator(with_one);
    IntMatrix rows;
    for (const auto& v : gv) rows.push_back(scale_row(v, d));
    HermiteForm hf = hermite_normal_form(rows);
    auto c = solve_hermite(hf.rows, scale_row(one, d));
    out.rounds_used = round;
    if (!c) continue;
    std::vector<Integer> coeff(gv.size());
    for (std::size_t k = 0; k < c->size(); ++k)
      for (std::size_t j = 0; j < coeff.size(); ++j) coeff[j] += (*c)[k] * hf.transform[k][j];
    for (std::size_t j = 0; j < coeff.size(); ++j) {
      if (coeff[j] == 0) continue;
      PrimitivityTerm t = g.origin[j];
      t.coeff = coeff[j];
      out.certificate.push_back(t);
    }
    out.primitive = true;
    return out;
  }
  return out;
}

bool verify_primitivity_certificate(const PolynomialSpec& spec, const std::vector<LaurentElem>& digits,
                                    const std::vector<PrimitivityTerm>& certificate) {
  LaurentElem sum;
  for (const auto& t : certificate) {
    if (t.hi < 0 || t.lo < 0 || t.hi >= static_cast<int>(digits.size()) || t.lo >= static_cast<int>(digits.size()))
      return false;
    sum += t.coeff * (digits[t.hi] - digits[t.lo]).shifted(t.power);
  }
  NumberField K(spec);
  return K.from_laurent(sum) == K.from_rational(1);
}

LatticeHNF z_cap_lambda(const PolynomialSpec& spec, const std::vector<LaurentElem>& digits, int m,
                        const SpanClosure& closure, int max_rounds) {
  LatticeHNF lambda = lambda_basis(spec, m);
  if (closure.primitive) {
    lambda.label = LatticeLabel::ZcapLambda;
    return lambda;
  }
  NumberField K(spec);
  std::optional<LatticeHNF> prev;
  int stable = 0;
  for (int round = 0; round <= max_rounds; ++round) {
    Generators g = digit_generators(digits, round);
    LatticeHNF span = make_lattice(to_values(K, g.laurent), g.laurent);
    if (span.rank() < spec.degree) continue;
    LatticeHNF cap = lattice_intersection(span, lambda);
    if (prev && cap.determinant() == prev->determinant())
      ++stable;
    else
      stable = 0;
    prev = cap;
    if (stable >= spec.degree) {
      cap.label = LatticeLabel::ZcapLambda;
      cap.m = m;
      cap.heuristic = true;
      return cap;
    }
  }
  throw Error(ErrorKind::BoundExceeded, "translation module chain did not stabilize");
}

}  // namespace ratile
