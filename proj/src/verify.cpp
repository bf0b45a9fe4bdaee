#include "ratile/verify.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <set>

namespace ratile {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kCoarseDepth = 12;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Rational mod_rational(const Rational& x, const Rational& m) {
  Rational q = x / m;
  Integer f = q.get_num() / q.get_den();
  if (f * q.get_den() > q.get_num()) f -= 1;  // floor for negatives
  Rational r = x - Rational(f) * m;
  r.canonicalize();
  return r;
}

// One step x -> (x - d)/alpha, choosing d by testing membership of the
// quotient in Z[alpha] (no residue tables).
bool divide_step(LaurentElem& x, const PolynomialSpec& spec, const DigitSet& D) {
  for (const auto& d : D.digits) {
    auto r = reduce_bottom((x - d).shifted(-1), spec);
    if (r.member) {
      x = r.rep;
      return true;
    }
  }
  return false;
}

// T^j(x) for j = 0..k, or empty when a step fails.
std::vector<LaurentElem> search_orbit(LaurentElem x, int k, const PolynomialSpec& spec, const DigitSet& D) {
  std::vector<LaurentElem> orbit{x};
  for (int j = 0; j < k; ++j) {
    if (!divide_step(x, spec, D)) return {};
    orbit.push_back(x);
  }
  return orbit;
}

std::vector<double> translate_window(const TileContext& ctx, const std::vector<double>& lo,
                                     const std::vector<double>& hi, std::vector<double>& tlo) {
  std::vector<double> thi(lo.size());
  tlo.resize(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) {
    tlo[i] = lo[i] - ctx.bounds.hi[i];
    thi[i] = hi[i] - ctx.bounds.lo[i];
  }
  return thi;
}

}  // namespace

bool check_standard(const PolynomialSpec& spec, const DigitSet& D) {
  std::set<Integer> residues;
  for (const auto& d : D.digits) residues.insert(residue_mod_alpha(d, spec));
  return static_cast<long>(D.size()) == spec.abs_a0 && static_cast<long>(residues.size()) == spec.abs_a0;
}

ImageCharacterization image_characterization(const TileContext& ctx, int k, int window) {
  ImageCharacterization out;
  out.k = k;
  GOptions opts;
  opts.lookahead = 0;
  if (ctx.lambda.rank() == 1) {
    out.periodic = true;
    const Rational g = ctx.lambda.basis[0].coords[0];
    const Rational ag = abs(g);
    long period = 1;
    for (int j = 0; j < k; ++j) period *= ctx.spec.abs_an;
    out.modulus = Rational(period) * ag;
    std::set<Rational> found;
    for (long c = 0; c < period; ++c) {
      std::vector<std::int64_t> root{c};
      auto tree = expand_tree(ctx.frame, root, k, 1u << 24, false);
      if (tree.levels.back().size() == 0) continue;
      found.insert(mod_rational(Rational(c) * g, out.modulus));
    }
    out.residues.assign(found.begin(), found.end());
    return out;
  }
  const int n = ctx.spec.degree;
  std::vector<long> c(static_cast<std::size_t>(n), -window);
  for (;;) {
    std::vector<std::int64_t> root(c.begin(), c.end());
    auto tree = expand_tree(ctx.frame, root, k, 1u << 24, false);
    if (tree.levels.back().size() != 0) out.points.push_back(lattice_point(ctx.lambda, c, ctx.spec));
    int i = n - 1;
    while (i >= 0 && ++c[i] > window) c[i--] = -window;
    if (i < 0) break;
  }
  return out;
}

std::vector<Rational> project_residues(const ImageCharacterization& img, const Rational& modulus) {
  std::set<Rational> s;
  for (const auto& r : img.residues) s.insert(mod_rational(r, modulus));
  return {s.begin(), s.end()};
}

std::vector<LaurentElem> neighbor_set(const TileContext& ctx) {
  const auto& b = ctx.bounds;
  std::vector<LaurentElem> out;
  for (const auto& y : lattice_points_in_box(ctx, ctx.translates, b.lo, b.hi)) {
    auto e = embed_arch(ctx.K.from_laurent(y), ctx.emb);
    bool inside = true;
    int at = 0;
    for (std::size_t p = 0; p < b.place_dims.size() && inside; ++p) {
      double s = 0;
      for (int t = 0; t < b.place_dims[p]; ++t) s += std::pow(e[at + t] - b.center[at + t], 2);
      inside = std::sqrt(s) <= b.radius[p] * (1 + 1e-9) + 1e-12;
      at += b.place_dims[p];
    }
    if (inside) out.push_back(y);
  }
  if (std::none_of(out.begin(), out.end(), [](const LaurentElem& y) { return y.is_zero(); }))
    out.insert(out.begin(), LaurentElem());
  return out;
}

TilingCertificate find_exclusive_point(const TileContext& ctx, double budget_seconds, int max_k) {
  const auto t0 = Clock::now();
  TilingCertificate cert;
  cert.Y = neighbor_set(ctx);
  const std::size_t base = ctx.D.size();
  const auto& spec = ctx.spec;
  const auto& D = ctx.D;
  for (int k = 1; k <= max_k; ++k) {
    const double count = std::pow(static_cast<double>(base), k);
    if (count > 1e9) break;
    const long total = static_cast<long>(count);
    std::vector<std::vector<LaurentElem>> shifted(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j)
      for (const auto& d : D.digits) shifted[j].push_back(d.shifted(j));
    const long block = 4096;
    for (long start = 0; start < total; start += block) {
      if (seconds_since(t0) > budget_seconds)
        throw Error(ErrorKind::BudgetExceeded, "no exclusive point within " + std::to_string(budget_seconds) + " s");
      const long stop = std::min(total, start + block);
      long best = std::numeric_limits<long>::max();
#pragma omp parallel for schedule(dynamic, 16) reduction(min : best)
      for (long idx = start; idx < stop; ++idx) {
        LaurentElem z;
        long rest = idx;
        for (int j = k - 1; j >= 0; --j) {
          z += shifted[j][static_cast<std::size_t>(rest % static_cast<long>(base))];
          rest /= static_cast<long>(base);
        }
        z = reduce_bottom(z, spec).rep;
        bool ok = true;
        for (const auto& y : cert.Y) {
          auto orbit = search_orbit(z - y, k, spec, D);
          if (orbit.empty() || !orbit.back().is_zero()) {
            ok = false;
            break;
          }
        }
        if (ok) best = std::min(best, idx);
      }
      cert.candidates += static_cast<std::size_t>(stop - start);
      if (best == std::numeric_limits<long>::max()) continue;
      LaurentElem z;
      long rest = best;
      for (int j = k - 1; j >= 0; --j) {
        z += shifted[j][static_cast<std::size_t>(rest % static_cast<long>(base))];
        rest /= static_cast<long>(base);
      }
      cert.z = reduce_bottom(z, spec).rep;
      cert.k = k;
      cert.found = true;
      for (const auto& y : cert.Y) cert.orbits.push_back(search_orbit(cert.z - y, k, spec, D));
      cert.seconds = seconds_since(t0);
      return cert;
    }
  }
  throw Error(ErrorKind::BudgetExceeded, "no exclusive point up to the depth cap");
}

bool check_certificate(const PolynomialSpec& spec, const DigitSet& D, const TilingCertificate& cert) {
  if (!cert.found || cert.k < 0) return false;
  NumberField K(spec);
  auto orbit_ends_at_zero = [&](LaurentElem x, const std::vector<LaurentElem>* expected) {
    for (int j = 0; j <= cert.k; ++j) {
      if (expected) {
        if (expected->size() != static_cast<std::size_t>(cert.k + 1)) return false;
        if (!(K.from_laurent(x) == K.from_laurent((*expected)[j]))) return false;
      }
      if (j < cert.k) x = T_alpha(x, spec, D).image;
    }
    return K.from_laurent(x).is_zero();
  };
  try {
    if (!orbit_ends_at_zero(cert.z, nullptr)) return false;
    if (cert.orbits.size() != cert.Y.size()) return false;
    for (std::size_t i = 0; i < cert.Y.size(); ++i)
      if (!orbit_ends_at_zero(cert.z - cert.Y[i], &cert.orbits[i])) return false;
  } catch (const Error&) {
    return false;
  }
  return true;
}

MultiplicityReport estimate_multiplicity(const TileContext& ctx, std::size_t samples, int k, std::uint64_t seed,
                                         double half, bool parallel) {
  MultiplicityReport rep;
  rep.samples = samples;
  rep.depth = k;
  rep.seed = seed;
  const int dim = ctx.emb.dim();
  if (half <= 0) half = 2 * ctx.bounds.reach;
  rep.lo.assign(static_cast<std::size_t>(dim), -half);
  rep.hi.assign(static_cast<std::size_t>(dim), half);
  std::vector<double> tlo;
  auto thi = translate_window(ctx, rep.lo, rep.hi, tlo);
  GOptions opts;
  opts.parallel = parallel;
  const int coarse = std::min(k, kCoarseDepth);
  std::vector<TileCloud> clouds;
  for (const auto& x : lattice_points_in_box(ctx, ctx.translates, tlo, thi)) {
    auto c = approximate_G(ctx, x, coarse, opts);
    if (!c.empty()) clouds.push_back(std::move(c));
  }
  rep.translates = clouds.size();
  if (clouds.empty()) {
    rep.histogram[0] = samples;
  } else {
    rep.histogram = refined_covering_histogram(cell_family(clouds), refine_cells(ctx, clouds, k), rep.lo, rep.hi,
                                               samples, seed, parallel);
  }
  std::size_t best = 0;
  double sum = 0;
  for (const auto& [mult, freq] : rep.histogram) {
    if (freq > best) {
      best = freq;
      rep.mode = mult;
    }
    sum += static_cast<double>(mult) * static_cast<double>(freq);
  }
  rep.mode_fraction = samples ? static_cast<double>(best) / static_cast<double>(samples) : 0.0;
  rep.mean = samples ? sum / static_cast<double>(samples) : 0.0;
  return rep;
}

double volume_balance(const TileContext& ctx, std::size_t samples, int k, std::uint64_t seed, double half) {
  return estimate_multiplicity(ctx, samples, k, seed, half).mean;
}

HausdorffReport hausdorff_report(const TileContext& ctx, const LaurentElem& x, const LaurentElem& y, int k,
                                 int level_cap) {
  HausdorffReport rep;
  rep.reference_constant = 2 * ctx.bounds.reach;
  const FieldVector xv = ctx.K.from_laurent(x), yv = ctx.K.from_laurent(y);
  auto a = approximate_G(ctx, x, k);
  auto b = approximate_G(ctx, y, k);
  rep.cell_radius = a.cell_radius;
  const auto sx = embed_arch(xv, ctx.emb), sy = embed_arch(yv, ctx.emb);
  for (std::size_t i = 0; i < a.arch.size(); ++i) a.arch[i] -= sx[i % sx.size()];
  for (std::size_t i = 0; i < b.arch.size(); ++i) b.arch[i] -= sy[i % sy.size()];
  if (xv == yv) {
    rep.identical = true;
    rep.lattice_level = level_cap;
  } else {
    const LaurentElem diff = x - y;
    int level = -1;
    while (level < level_cap && in_lambda(diff, ctx.D.m - (level + 1), ctx.spec)) ++level;
    rep.lattice_level = level;
  }
  rep.distance = rep.identical ? 0.0 : hausdorff(a.arch, b.arch, a.dim);
  rep.empirical_constant = rep.distance / std::pow(ctx.contraction, rep.lattice_level);
  return rep;
}

std::optional<std::vector<int>> greedy_point(const TileContext& ctx, const LaurentElem& x, int length) {
  auto coords = lattice_membership(ctx.K.from_laurent(x), ctx.lambda);
  if (!coords) return std::nullopt;
  std::vector<std::int64_t> cur, next(static_cast<std::size_t>(ctx.frame.n));
  for (const auto& c : *coords) {
    if (!c.fits_slong_p()) throw Error(ErrorKind::BoundExceeded, "coordinates exceed 64 bits");
    cur.push_back(c.get_si());
  }
  std::vector<int> word;
  for (int j = 0; j < length; ++j) {
    int chosen = -1;
    for (int d = 0; d < ctx.frame.digit_count && chosen < 0; ++d) {
      auto st = ctx.frame.child(cur.data(), d, next.data());
      if (st == LatticeFrame::kOverflow) throw Error(ErrorKind::BoundExceeded, "coordinates exceed 64 bits");
      if (st == LatticeFrame::kInside) chosen = d;
    }
    if (chosen < 0) return std::nullopt;
    word.push_back(chosen);
    cur = next;
  }
  return word;
}

}  // namespace ratile
