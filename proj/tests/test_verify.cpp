#include <algorithm>
#include <random>

#include "doctest.h"
#include "ratile/verify.hpp"

using namespace ratile;

namespace {

LaurentElem L(const char* s) { return LaurentElem::parse(s); }

std::vector<LaurentElem> digits(std::initializer_list<const char*> xs) {
  std::vector<LaurentElem> out;
  for (auto* x : xs) out.push_back(L(x));
  return out;
}

TileContext context(std::vector<long long> a, std::initializer_list<const char*> ds) {
  auto spec = validate_spec(a);
  return TileContext(spec, validate_digits(spec, digits(ds)));
}

std::vector<Rational> rats(std::initializer_list<long> xs) {
  std::vector<Rational> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

}  // namespace

TEST_CASE("check_standard") {
  auto ex1 = validate_spec({-3, 2});
  CHECK(check_standard(ex1, validate_digits(ex1, digits({"0", "1", "2"}))));
  CHECK(check_standard(ex1, validate_digits(ex1, digits({"0", "2", "4"}))));
  CHECK_FALSE(check_standard(ex1, validate_digits(ex1, digits({"0", "1", "3"}))));
}

TEST_CASE("image characterization for alpha = 4/3") {
  auto ctx = context({-4, 3}, {"0", "1", "2", "a - 1"});
  auto k1 = image_characterization(ctx, 1);
  REQUIRE(k1.periodic);
  CHECK(k1.modulus == 3);
  CHECK(k1.residues == rats({0, 2}));
  auto listed = rats({0, 2, 3, 6, 8, 9, 11, 12, 15, 18, 20, 21, 24, 26});
  auto k3 = image_characterization(ctx, 3);
  CHECK(k3.modulus == 27);
  CHECK(k3.residues == listed);
  auto k4 = image_characterization(ctx, 4);
  CHECK(k4.modulus == 81);
  CHECK(project_residues(k4, 27) == listed);
  // closed form: x != 2*3^j - 1 mod 3^(j+1) for j < k
  for (int k = 1; k <= 6; ++k) {
    auto img = image_characterization(ctx, k);
    std::vector<Rational> expected;
    long period = 1;
    for (int j = 0; j < k; ++j) period *= 3;
    for (long x = 0; x < period; ++x) {
      bool ok = true;
      long p = 1;
      for (int j = 0; j < k; ++j, p *= 3) ok = ok && (x % (3 * p)) != 2 * p - 1;
      if (ok) expected.emplace_back(x);
    }
    CHECK(img.residues == expected);
  }
}

TEST_CASE("image characterization nests") {
  auto ctx = context({-4, 3}, {"0", "1", "2", "a - 1"});
  for (int k = 1; k < 6; ++k) {
    auto a = image_characterization(ctx, k);
    auto b = image_characterization(ctx, k + 1);
    auto proj = project_residues(b, a.modulus);
    CHECK(std::includes(a.residues.begin(), a.residues.end(), proj.begin(), proj.end()));
  }
  auto ex1 = context({-3, 2}, {"0", "1", "2"});
  auto img = image_characterization(ex1, 1);
  CHECK(img.modulus == 4);
  CHECK(img.residues == rats({0, 2}));
  auto ex2 = context({3, 2, 2}, {"0", "1", "2"});
  auto w1 = image_characterization(ex2, 1, 2);
  auto w3 = image_characterization(ex2, 3, 2);
  CHECK(w1.points.size() == 25);  // residue system: every lattice point survives
  CHECK(w3.points.size() == 25);
}

TEST_CASE("exclusive point certificates") {
  auto ex1 = context({-3, 2}, {"0", "1", "2"});
  auto cert = find_exclusive_point(ex1, 30);
  REQUIRE(cert.found);
  CHECK(cert.k == 2);
  CHECK(ex1.K.from_laurent(cert.z) == ex1.K.from_rational(4));
  std::vector<FieldVector> Y;
  for (const auto& y : cert.Y) Y.push_back(ex1.K.from_laurent(y));
  CHECK(Y == std::vector<FieldVector>{ex1.K.from_rational(0), ex1.K.from_rational(2), ex1.K.from_rational(4)});
  CHECK(check_certificate(ex1.spec, ex1.D, cert));

  auto bin = context({-2, 1}, {"0", "1"});
  auto c2 = find_exclusive_point(bin, 30);
  CHECK(c2.k <= 2);
  CHECK(check_certificate(bin.spec, bin.D, c2));

  auto ex2 = context({3, 2, 2}, {"0", "1", "2"});
  auto c3 = find_exclusive_point(ex2, 60);
  CHECK(c3.found);
  CHECK(check_certificate(ex2.spec, ex2.D, c3));
}

TEST_CASE("certificate checker rejects tampering and accepts refinements") {
  auto ex1 = context({-3, 2}, {"0", "1", "2"});
  auto cert = find_exclusive_point(ex1, 30);
  auto deeper = cert;
  deeper.k += 1;
  for (auto& o : deeper.orbits) o.push_back(LaurentElem());
  CHECK(check_certificate(ex1.spec, ex1.D, deeper));

  auto bad = cert;
  bad.z = L("2");
  CHECK_FALSE(check_certificate(ex1.spec, ex1.D, bad));
  auto short_k = cert;
  short_k.k = 1;
  for (auto& o : short_k.orbits) o.pop_back();
  CHECK_FALSE(check_certificate(ex1.spec, ex1.D, short_k));
  auto forged = cert;
  forged.orbits[1][1] = L("6");
  CHECK_FALSE(check_certificate(ex1.spec, ex1.D, forged));
}

TEST_CASE("multiplicity histograms") {
  auto ex1 = context({-3, 2}, {"0", "1", "2"});
  auto rep = estimate_multiplicity(ex1, 10000, 12, 1234);
  std::size_t total = 0;
  for (const auto& [m, f] : rep.histogram) total += f;
  CHECK(total == rep.samples);
  CHECK(rep.histogram.count(0) == 0);
  CHECK(rep.mode == 1);
  CHECK(rep.mode_fraction >= 0.95);

  auto again = estimate_multiplicity(ex1, 10000, 12, 1234);
  CHECK(again.histogram == rep.histogram);
  auto serial = estimate_multiplicity(ex1, 10000, 12, 1234, -1, false);
  CHECK(serial.histogram == rep.histogram);
  auto other = estimate_multiplicity(ex1, 10000, 12, 99);
  CHECK(other.seed == 99);
}

TEST_CASE("coverings for other digit sets") {
  for (auto ctx : {context({3, 2, 2}, {"0", "1", "2"}), context({-3, 2}, {"0", "2", "4"})}) {
    auto rep = estimate_multiplicity(ctx, 4000, 10, 5);
    CHECK(rep.histogram.count(0) == 0);
  }
}

TEST_CASE("Hausdorff reports") {
  auto ex1 = context({-3, 2}, {"0", "1", "2"});
  auto same = hausdorff_report(ex1, L("2"), L("2"), 10);
  CHECK(same.distance == 0.0);
  CHECK(same.identical);
  auto a = hausdorff_report(ex1, L("0"), L("8"), 12);
  auto b = hausdorff_report(ex1, L("8"), L("0"), 12);
  CHECK(a.distance == b.distance);
  CHECK(a.lattice_level == 2);  // 8 in Lambda_(-2) = 8Z but not 16Z
  auto c = hausdorff_report(ex1, L("0"), L("256"), 12);
  CHECK(c.lattice_level == 7);
  CHECK(c.distance < a.distance);

  auto ex2 = context({3, 2, 2}, {"0", "1", "2"});
  auto r = hausdorff_report(ex2, L("0"), L("4"), 8);
  CHECK(r.lattice_level >= 1);
  CHECK(r.distance > 0);
}

TEST_CASE("greedy points") {
  auto ex1 = context({-3, 2}, {"0", "1", "2"});
  CHECK_FALSE(greedy_point(ex1, L("1")).has_value());
  auto w = greedy_point(ex1, L("-2"));
  REQUIRE(w.has_value());
  CHECK(*w == std::vector<int>(16, 1));
  auto w2 = greedy_point(ex1, L("2"));
  REQUIRE(w2.has_value());
  CHECK(w2->size() == 16);
  // Every greedy prefix stays in the preimage tree.
  std::mt19937 rng(3);
  auto ex2 = context({3, 2, 2}, {"0", "1", "2"});
  for (int t = 0; t < 30; ++t) {
    std::vector<long> c{static_cast<long>(rng() % 21) - 10, static_cast<long>(rng() % 21) - 10};
    auto x = lattice_point(ex2.lambda, c, ex2.spec);
    auto g = greedy_point(ex2, x, 20);
    REQUIRE(g.has_value());
    LaurentElem y = x;
    for (int d : *g) {
      y = y.shifted(1) + ex2.D.digits[static_cast<std::size_t>(d)];
      CHECK(in_lambda(y, ex2.D.m, ex2.spec));
    }
  }
}

TEST_CASE("refined outer approximations shrink monotonically") {
  auto ex2 = context({3, 2, 2}, {"0", "1", "2"});
  double prev = 1e9;
  for (int k : {8, 12, 16, 24, 32}) {
    auto rep = estimate_multiplicity(ex2, 4000, k, 17);
    CHECK(rep.mean <= prev + 1e-12);
    CHECK(rep.histogram.count(0) == 0);
    prev = rep.mean;
  }
  auto a = estimate_multiplicity(ex2, 4000, 20, 17, -1, true);
  auto b = estimate_multiplicity(ex2, 4000, 20, 17, -1, false);
  CHECK(a.histogram == b.histogram);
}

TEST_CASE("refinement with no extra levels is the plain histogram") {
  auto ex1 = context({-3, 2}, {"0", "1", "2"});
  std::vector<TileCloud> clouds;
  for (const char* x : {"-4", "-2", "0", "2", "4"}) clouds.push_back(approximate_G(ex1, L(x), 6));
  auto cells = cell_family(clouds);
  auto plain = covering_histogram(cells, {-2.0}, {6.0}, 5000, 3);
  auto refined = refined_covering_histogram(cells, refine_cells(ex1, clouds, 6), {-2.0}, {6.0}, 5000, 3);
  CHECK(plain == refined);
  auto deeper = refined_covering_histogram(cells, refine_cells(ex1, clouds, 14), {-2.0}, {6.0}, 5000, 3);
  std::size_t plain_multi = 0, deep_multi = 0;
  for (auto [m, f] : plain) plain_multi += m > 1 ? f : 0;
  for (auto [m, f] : deeper) deep_multi += m > 1 ? f : 0;
  CHECK(deep_multi <= plain_multi);
}
