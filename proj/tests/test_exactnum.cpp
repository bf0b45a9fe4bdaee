#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "ratile/exactnum.hpp"

using namespace ratile;

namespace {

const std::vector<long long> kEx1 = {-3, 2};
const std::vector<long long> kEx2 = {3, 2, 2};
const std::vector<long long> kFourThirds = {-4, 3};

ErrorKind kind_of(const std::vector<long long>& coeffs) {
  try {
    validate_spec(coeffs);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Internal;
}

LaurentElem L(const char* s) { return LaurentElem::parse(s); }

}  // namespace

TEST_CASE("validate_spec accepts the worked examples") {
  auto s1 = validate_spec(kEx1);
  CHECK(s1.degree == 1);
  CHECK(s1.abs_a0 == 3);
  auto s2 = validate_spec(kEx2);
  CHECK(s2.degree == 2);
  CHECK(s2.irreducibility == IrreducibilityStatus::verified);
  CHECK(validate_spec(kFourThirds).abs_an == 3);
}

TEST_CASE("validate_spec rejects bad polynomials") {
  CHECK(kind_of({2, 4}) == ErrorKind::NotPrimitive);
  CHECK(kind_of({1, 1}) == ErrorKind::NotExpanding);
  CHECK(kind_of({5}) == ErrorKind::DegreeZero);
  CHECK(kind_of({}) == ErrorKind::InvalidInput);
  CHECK(kind_of({3, 0}) == ErrorKind::InvalidInput);
  // (X+2)(X-3) = X^2 - X - 6
  CHECK(kind_of({-6, -1, 1}) == ErrorKind::TriviallyReducible);
  // (2X^2+2X+3)(X^2+5) has no rational root
  CHECK(kind_of({15, 10, 13, 2, 2}) == ErrorKind::TriviallyReducible);
  CHECK(kind_of({-1, -1, 1}) == ErrorKind::NotExpanding);
}

TEST_CASE("Schur-Cohn verdicts") {
  CHECK(is_expanding({-3, 2}));
  CHECK_FALSE(is_expanding({-1, -1, 1}));
  CHECK(is_expanding({-4, 3}));
  CHECK(is_expanding({3, 2, 2}));
  auto rep = expanding_report({5, 1, 1});
  CHECK(rep.expanding);
  CHECK(rep.sufficient_condition);
  CHECK_FALSE(expanding_report({3, 2, 2}).sufficient_condition);
  CHECK_THROWS_AS(expanding_report({0, 0}), Error);
}

TEST_CASE("Laurent syntax round trip") {
  CHECK(L("a - 1").to_string() == "a - 1");
  CHECK(L("2*a^-1").coeff(-1) == 2);
  CHECK(L(" - a^2 + 4 * a ").to_string() == "-a^2 + 4*a");
  CHECK(L("3").to_string() == "3");
  CHECK(L("a - a").is_zero());
  CHECK(LaurentElem().to_string() == "0");
  CHECK_THROWS_AS(L("2**a"), Error);
  CHECK_THROWS_AS(L(""), Error);
  CHECK_THROWS_AS(L("a^"), Error);
}

TEST_CASE("reduce_bottom examples") {
  auto spec = validate_spec(kEx1);
  auto r1 = reduce_bottom(L("a^-1"), spec);
  CHECK_FALSE(r1.member);
  CHECK(r1.failing_exponent == -1);
  auto r2 = reduce_bottom(L("a - 1"), spec);
  CHECK(r2.member);
  auto r3 = reduce_bottom(L("3*a^-1"), spec);
  REQUIRE(r3.member);
  CHECK(r3.rep.to_string() == "2");
}

TEST_CASE("reduce_top examples") {
  auto four = validate_spec(kFourThirds);
  CHECK(in_shifted_top_ring(L("a - 1"), 1, four));
  CHECK_FALSE(in_shifted_top_ring(L("a - 1"), 0, four));
  auto ex1 = validate_spec(kEx1);
  CHECK(reduce_top(L("1"), ex1).member);
  CHECK_FALSE(reduce_top(L("a"), ex1).member);
}

TEST_CASE("to_field_vector examples") {
  auto ex1 = validate_spec(kEx1);
  CHECK(to_field_vector(L("a^2"), ex1).coords[0] == Rational(9, 4));
  CHECK(to_field_vector(LaurentElem(), ex1).is_zero());
  auto ex2 = validate_spec(kEx2);
  auto v = to_field_vector(L("a^2"), ex2);
  CHECK(v.coords[0] == Rational(-3, 2));
  CHECK(v.coords[1] == Rational(-1));
}

TEST_CASE("embeddings of the examples") {
  auto e1 = compute_embeddings(validate_spec(kEx1));
  REQUIRE(e1.r_count() == 1);
  CHECK(e1.real_roots[0] == doctest::Approx(1.5).epsilon(1e-12));
  auto ex2 = validate_spec(kEx2);
  auto e2 = compute_embeddings(ex2);
  REQUIRE(e2.s_count() == 1);
  CHECK(std::norm(e2.complex_roots[0]) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(e2.complex_roots[0].imag() > 0);
  auto arch = embed_arch(to_field_vector(L("2*a + 2"), ex2), e2);
  CHECK(arch[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(arch[1] == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
  auto two = compute_embeddings(validate_spec({-2, 1}));
  CHECK(two.real_roots[0] == doctest::Approx(2.0));
  auto one = embed_arch(to_field_vector(L("1"), ex2), e2);
  CHECK(one[0] == doctest::Approx(1.0));
  CHECK(one[1] == doctest::Approx(0.0));
}

TEST_CASE("property: reductions agree with lattice-span oracle") {
  std::mt19937_64 rng(20240601);
  const std::vector<std::vector<long long>> polys = {kEx1, kEx2, kFourThirds, {3, 0, 2}, {5, 1, 3}};
  int checked = 0;
  for (const auto& coeffs : polys) {
    auto spec = validate_spec(coeffs);
    NumberField K(spec);
    std::vector<FieldVector> pos, neg;
    for (int i = 0; i <= 12; ++i) {
      pos.push_back(K.alpha_pow(i));
      neg.push_back(K.alpha_pow(-i));
    }
    for (int t = 0; t < 200; ++t) {
      auto x = oracle::random_laurent(rng, 6, 9, 1 + t % 4);
      auto fx = K.from_laurent(x);
      auto b = reduce_bottom(x, spec);
      auto top = reduce_top(x, spec);
      CHECK(b.member == oracle::in_span(fx, pos));
      CHECK(top.member == oracle::in_span(fx, neg));
      if (b.member) {
        CHECK(K.from_laurent(b.rep) == fx);
        CHECK(b.rep.min_exponent() >= 0);
      }
      if (top.member) {
        CHECK(K.from_laurent(top.rep) == fx);
        CHECK(top.rep.max_exponent() <= 0);
      }
      ++checked;
    }
  }
  CHECK(checked == 1000);
}

TEST_CASE("property: field arithmetic is a ring homomorphism") {
  std::mt19937_64 rng(7);
  auto spec = validate_spec(kEx2);
  NumberField K(spec);
  auto emb = compute_embeddings(spec);
  for (int t = 0; t < 100; ++t) {
    auto x = oracle::random_laurent(rng, 4, 9, 3);
    auto y = oracle::random_laurent(rng, 4, 9, 3);
    CHECK(K.from_laurent(x + y) == K.from_laurent(x) + K.from_laurent(y));
    CHECK(K.from_laurent(x * y) == K.mul(K.from_laurent(x), K.from_laurent(y)));
    auto px = embed_places(K.from_laurent(x), emb);
    auto py = embed_places(K.from_laurent(y), emb);
    auto pxy = embed_places(K.from_laurent(x * y), emb);
    auto psum = embed_places(K.from_laurent(x + y), emb);
    const double scale = 1.0 + std::abs(px[0]) * std::abs(py[0]);
    CHECK(std::abs(pxy[0] - px[0] * py[0]) <= 1e-9 * scale);
    CHECK(std::abs(psum[0] - px[0] - py[0]) <= 1e-9 * scale);
  }
}

TEST_CASE("property: Schur-Cohn agrees with computed roots") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> deg(1, 4), cd(-9, 9);
  int agreed = 0, trials = 0;
  while (trials < 100) {
    std::vector<long long> c(static_cast<std::size_t>(deg(rng) + 1));
    for (auto& v : c) v = cd(rng);
    if (c.back() == 0 || c.front() == 0) continue;
    PolynomialSpec raw;
    raw.coeffs = c;
    raw.degree = static_cast<int>(c.size()) - 1;
    EmbeddingData emb;
    try {
      emb = compute_embeddings(raw);
    } catch (const Error&) {
      continue;  // repeated roots are not of interest here
    }
    if (std::abs(emb.contraction - 1.0) <= 100 * emb.precision) continue;
    ++trials;
    if (is_expanding(c) == (emb.contraction > 1.0)) ++agreed;
    // Vieta on every accepted root set
    std::complex<double> prod = 1, sum = 0;
    for (double r : emb.real_roots) prod *= r, sum += r;
    for (auto z : emb.complex_roots) prod *= std::norm(z), sum += 2.0 * z.real();
    const double sign = raw.degree % 2 ? -1.0 : 1.0;
    CHECK(std::abs(prod - sign * double(c.front()) / double(c.back())) <= 1e-8 * (1 + std::abs(prod)));
    CHECK(std::abs(sum + double(c[c.size() - 2]) / double(c.back())) <= 1e-8 * (1 + std::abs(sum)));
  }
  CHECK(agreed == 100);
}
