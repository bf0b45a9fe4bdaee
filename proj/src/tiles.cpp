#include "ratile/tiles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace ratile {

namespace {

using cplx = std::complex<double>;

std::vector<int> place_dims_of(const EmbeddingData& emb) {
  std::vector<int> dims(static_cast<std::size_t>(emb.r_count()), 1);
  dims.insert(dims.end(), static_cast<std::size_t>(emb.s_count()), 2);
  return dims;
}

// Arch coordinates of per-place complex values.
std::vector<double> flatten(const std::vector<cplx>& v, const std::vector<int>& dims) {
  std::vector<double> out;
  for (std::size_t p = 0; p < dims.size(); ++p) {
    out.push_back(v[p].real());
    if (dims[p] == 2) out.push_back(v[p].imag());
  }
  return out;
}

void fill_cell(TileCloud& cloud, const TileContext& ctx, int k) {
  const auto places = ctx.emb.places();
  cloud.place_dims = ctx.bounds.place_dims;
  cloud.dim = ctx.emb.dim();
  std::vector<cplx> offset;
  double reach2 = 0;
  cloud.place_radius.clear();
  int at = 0;
  for (std::size_t p = 0; p < places.size(); ++p) {
    const cplx scale = std::pow(places[p], -k);
    cplx c(ctx.bounds.center[at], cloud.place_dims[p] == 2 ? ctx.bounds.center[at + 1] : 0.0);
    offset.push_back(scale * c);
    const double s = std::abs(scale);
    cloud.place_radius.push_back(s * ctx.bounds.radius[p]);
    const double r = s * (std::abs(c) + ctx.bounds.radius[p]);
    reach2 += r * r;
    at += cloud.place_dims[p];
  }
  cloud.cell_offset = flatten(offset, cloud.place_dims);
  cloud.cell_radius = std::sqrt(reach2);
  cloud.surrogate_radius = std::pow(static_cast<double>(ctx.spec.abs_an), -(k + 1 - ctx.D.m));
}

// steps[j-1] = Phi_inf(alpha^-j d) for every digit, flattened.
std::vector<std::vector<double>> step_tables(const TileContext& ctx, int k) {
  std::vector<std::vector<double>> steps;
  for (int j = 1; j <= k; ++j) {
    std::vector<double> s;
    for (const auto& d : ctx.D.values) {
      auto e = embed_arch(ctx.K.mul_alpha_pow(d, -j), ctx.emb);
      s.insert(s.end(), e.begin(), e.end());
    }
    steps.push_back(std::move(s));
  }
  return steps;
}

LaurentElem canonical(const LaurentElem& x, const PolynomialSpec& spec) {
  auto r = reduce_bottom(x, spec);
  return r.member ? r.rep : x;
}

}  // namespace

std::string_view to_string(TileKind kind) {
  switch (kind) {
    case TileKind::F: return "F";
    case TileKind::G: return "G";
    case TileKind::SRS: return "SRS";
  }
  return "?";
}

FBounds f_bounds(const PolynomialSpec& spec, const DigitSet& D, const EmbeddingData& emb, int refine_depth) {
  NumberField K(spec);
  FBounds b;
  b.place_dims = place_dims_of(emb);
  const auto places = emb.places();
  if (refine_depth < 0) {
    refine_depth = 0;
    double count = 1;
    while (refine_depth < 12 && count * static_cast<double>(D.size()) <= 20000) {
      count *= static_cast<double>(D.size());
      ++refine_depth;
    }
  }
  b.refine_depth = refine_depth;
  std::vector<std::vector<cplx>> dv;
  for (const auto& d : D.values) dv.push_back(embed_places(d, emb));

  std::vector<cplx> centers;
  for (std::size_t p = 0; p < places.size(); ++p) {
    const cplx a = places[p];
    double rlo = std::numeric_limits<double>::infinity(), rhi = -rlo, ilo = rlo, ihi = -rlo;
    for (const auto& v : dv) {
      rlo = std::min(rlo, v[p].real());
      rhi = std::max(rhi, v[p].real());
      ilo = std::min(ilo, v[p].imag());
      ihi = std::max(ihi, v[p].imag());
    }
    const cplx mid(0.5 * (rlo + rhi), 0.5 * (ilo + ihi));
    cplx c = mid / (a - 1.0);
    double rho = 0;
    for (const auto& v : dv) rho = std::max(rho, std::abs(v[p] - mid));
    rho /= std::abs(a) - 1.0;

    // F is the union of the depth-j partial sums plus alpha^-j F.
    std::vector<cplx> partial{0.0};
    for (int j = 1; j <= refine_depth; ++j) {
      const cplx w = std::pow(a, -j);
      std::vector<cplx> next;
      next.reserve(partial.size() * dv.size());
      for (const auto& q : partial)
        for (const auto& v : dv) next.push_back(q + w * v[p]);
      partial = std::move(next);
    }
    const cplx wj = std::pow(a, -refine_depth);
    for (int round = 0; round < 3 && refine_depth > 0; ++round) {
      double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
      for (const auto& q : partial) {
        const cplx s = q + wj * c;
        xlo = std::min(xlo, s.real());
        xhi = std::max(xhi, s.real());
        ylo = std::min(ylo, s.imag());
        yhi = std::max(yhi, s.imag());
      }
      const cplx c2(0.5 * (xlo + xhi), 0.5 * (ylo + yhi));
      double r2 = 0;
      for (const auto& q : partial) r2 = std::max(r2, std::abs(q + wj * c - c2));
      r2 += std::abs(wj) * rho;
      if (r2 >= rho) break;
      c = c2;
      rho = r2;
    }
    // Real places keep real centers.
    if (b.place_dims[p] == 1) c = cplx(c.real(), 0.0);
    centers.push_back(c);
    b.radius.push_back(rho * (1 + 1e-12) + 1e-15);
  }
  b.center = flatten(centers, b.place_dims);
  double reach2 = 0;
  int at = 0;
  for (std::size_t p = 0; p < places.size(); ++p) {
    for (int t = 0; t < b.place_dims[p]; ++t) {
      b.lo.push_back(b.center[at + t] - b.radius[p]);
      b.hi.push_back(b.center[at + t] + b.radius[p]);
    }
    const double r = std::abs(centers[p]) + b.radius[p];
    reach2 += r * r;
    at += b.place_dims[p];
  }
  b.reach = std::sqrt(reach2);
  return b;
}

TileContext::TileContext(PolynomialSpec s, DigitSet d)
    : spec(std::move(s)),
      D(std::move(d)),
      K(spec),
      emb(compute_embeddings(spec)),
      closure(check_primitivity(spec, D.digits)),
      lambda(lambda_basis(spec, D.m)),
      translates(closure.primitive ? lambda : z_cap_lambda(spec, D.digits, D.m, closure)),
      frame(make_frame(spec, D, lambda)),
      bounds(f_bounds(spec, D, emb)) {
  for (const auto& a : emb.places()) {
    place_contraction.push_back(1.0 / std::abs(a));
    contraction = std::max(contraction, 1.0 / std::abs(a));
  }
}

TileCloud approximate_F(const TileContext& ctx, int k, const LaurentElem& translate, bool exact, bool parallel,
                        std::size_t limit) {
  if (k < 0) throw Error(ErrorKind::InvalidInput, "negative depth");
  const std::size_t base = ctx.D.size();
  const double count = std::pow(static_cast<double>(base), k);
  if (count > static_cast<double>(limit))
    throw Error(ErrorKind::DepthTooLarge, std::to_string(base) + "^" + std::to_string(k) + " addresses");
  const std::size_t N = static_cast<std::size_t>(count);

  TileCloud cloud;
  cloud.kind = TileKind::F;
  cloud.translate = translate;
  cloud.depth = k;
  fill_cell(cloud, ctx, k);
  const int dim = cloud.dim;
  const auto steps = step_tables(ctx, k);
  const auto origin = embed_arch(ctx.K.from_laurent(translate), ctx.emb);
  std::vector<std::vector<LaurentElem>> terms(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j)
    for (const auto& d : ctx.D.digits) terms[j - 1].push_back(d.shifted(-j));

  cloud.arch.resize(N * dim);
  cloud.surrogate.resize(N);
  cloud.words.resize(N * k);
  if (exact) cloud.exact.resize(N);
  const int J = k + 16;
  const long total = static_cast<long>(N);
#pragma omp parallel for schedule(dynamic, 64) if (parallel)
  for (long i = 0; i < total; ++i) {
    std::size_t rest = static_cast<std::size_t>(i);
    for (int j = k - 1; j >= 0; --j) {
      cloud.words[i * k + j] = static_cast<std::uint8_t>(rest % base);
      rest /= base;
    }
    LaurentElem sum = translate;
    for (int i2 = 0; i2 < dim; ++i2) cloud.arch[i * dim + i2] = origin[i2];
    for (int j = 0; j < k; ++j) {
      const std::size_t d = cloud.words[i * k + j];
      sum += terms[j][d];
      for (int t = 0; t < dim; ++t) cloud.arch[i * dim + t] += steps[j][d * dim + t];
    }
    cloud.surrogate[i] = surrogate(sum, ctx.spec, J).value;
    if (exact) cloud.exact[i] = ctx.K.from_laurent(sum);
  }
  return cloud;
}

TileCloud approximate_G(const TileContext& ctx, const LaurentElem& x, int k, const GOptions& opts) {
  if (k < 0) throw Error(ErrorKind::InvalidInput, "negative depth");
  TileCloud cloud;
  cloud.kind = TileKind::G;
  cloud.translate = x;
  cloud.depth = k;
  fill_cell(cloud, ctx, k);
  cloud.level_sizes.assign(static_cast<std::size_t>(k + 1), 0);
  const int n = ctx.spec.degree;
  const int dim = cloud.dim;

  const FieldVector xv = ctx.K.from_laurent(x);
  auto coords = lattice_membership(xv, ctx.lambda);
  if (!coords) return cloud;
  std::vector<std::int64_t> root;
  for (const auto& c : *coords) {
    if (!c.fits_slong_p()) throw Error(ErrorKind::BoundExceeded, "translate coordinates exceed 64 bits");
    root.push_back(c.get_si());
  }

  const int lookahead = opts.lookahead >= 0 ? opts.lookahead : (ctx.D.has_residue_system ? 0 : 8);
  PreimageTree tree = prune_dead(expand_tree(ctx.frame, root, k + lookahead, opts.node_cap, opts.parallel));
  tree.levels.resize(static_cast<std::size_t>(k + 1));
  for (int j = 0; j <= k; ++j) cloud.level_sizes[j] = tree.levels[j].size();
  const TreeLevel& last = tree.levels.back();
  if (last.size() == 0) return cloud;

  cloud.arch = tree_points(tree, embed_arch(xv, ctx.emb), step_tables(ctx, k), dim, opts.parallel);
  cloud.surrogate.assign(last.size(), 0.0);
  cloud.lattice_coords = last.coords;
  cloud.words.resize(last.size() * k);
  for (std::size_t i = 0; i < last.size(); ++i) {
    auto path = tree_path(tree, i);
    for (int j = 0; j < k; ++j) cloud.words[i * k + j] = static_cast<std::uint8_t>(path[j]);
  }
  if (opts.exact) {
    cloud.exact.resize(last.size());
    const long total = static_cast<long>(last.size());
#pragma omp parallel for schedule(dynamic, 64) if (opts.parallel)
    for (long i = 0; i < total; ++i) {
      FieldVector y = ctx.K.zero();
      for (int t = 0; t < n; ++t)
        y = y + Rational(static_cast<long>(last.coords[i * n + t])) * ctx.lambda.basis[t];
      cloud.exact[i] = ctx.K.mul_alpha_pow(y, -k);
    }
  }
  bool single = k >= 1;
  for (int j = 0; j <= k && single; ++j) single = tree.levels[j].size() == 1;
  if (single) {
    for (int j = 0; j < k; ++j)
      if (tree.levels[j].coords == last.coords) cloud.limit = ctx.K.zero();  // bounded orbit: alpha^-k y -> 0
  }
  return cloud;
}

std::vector<IntVec> srs_preimage_set(const SRSParam& p, const IntVec& z, int k, std::size_t node_cap) {
  std::vector<IntVec> level{z};
  std::size_t total = 1;
  for (int j = 0; j < k; ++j) {
    std::vector<IntVec> next;
    for (const auto& v : level) {
      auto pre = srs_preimages(p, v);
      next.insert(next.end(), pre.begin(), pre.end());
    }
    total += next.size();
    if (total > node_cap) throw Error(ErrorKind::BudgetExceeded, "SRS preimage tree exceeds the node cap");
    level = std::move(next);
  }
  return level;
}

TileCloud approximate_srs_tile(const SRSParam& p, const IntVec& z, int k, std::size_t node_cap) {
  TileCloud cloud;
  cloud.kind = TileKind::SRS;
  cloud.srs_translate = z;
  cloud.depth = k;
  cloud.dim = p.n;
  const int n = p.n;
  for (const auto& zp : srs_preimage_set(p, z, k, node_cap)) {
    for (const auto& c : zp) {
      if (!c.fits_slong_p()) throw Error(ErrorKind::BoundExceeded, "SRS preimage exceeds 64 bits");
      cloud.lattice_coords.push_back(c.get_si());
    }
    RatVec v(zp.begin(), zp.end());
    for (int j = 0; j < k; ++j) v = apply_companion(p, v);
    for (const auto& c : v) cloud.arch.push_back(c.get_d());
    cloud.exact_srs.push_back(std::move(v));
    cloud.surrogate.push_back(0.0);
  }
  // Tail -sum_(j >= k) eps_j M^j e_n with eps_j in [0, 1).
  std::vector<std::vector<double>> M(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M[i][j] = p.companion[i][j].get_d();
  std::vector<double> v(static_cast<std::size_t>(n), 0.0), sum(static_cast<std::size_t>(n), 0.0);
  v[n - 1] = 1.0;
  auto step = [&](const std::vector<double>& u) {
    std::vector<double> w(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w[i] += M[i][j] * u[j];
    return w;
  };
  for (int j = 0; j < k; ++j) v = step(v);
  double norms = 0;
  for (int j = 0; j < 100000; ++j) {
    double nv = 0;
    for (int i = 0; i < n; ++i) {
      sum[i] += v[i];
      nv += v[i] * v[i];
    }
    nv = std::sqrt(nv);
    norms += nv;
    if (nv < 1e-17 * std::max(norms, 1e-300) || nv == 0) break;
    v = step(v);
  }
  cloud.place_dims = {n};
  cloud.cell_offset.resize(static_cast<std::size_t>(n));
  double off2 = 0;
  for (int i = 0; i < n; ++i) {
    cloud.cell_offset[i] = -0.5 * sum[i];
    off2 += cloud.cell_offset[i] * cloud.cell_offset[i];
  }
  cloud.place_radius = {0.5 * norms * (1 + 1e-12)};
  cloud.cell_radius = std::sqrt(off2) + cloud.place_radius[0];
  return cloud;
}

LaurentElem lattice_point(const LatticeHNF& L, const std::vector<long>& coords, const PolynomialSpec& spec) {
  if (L.laurent.size() != L.basis.size()) throw Error(ErrorKind::Internal, "lattice without Laurent forms");
  LaurentElem x;
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i] != 0) x += Integer(coords[i]) * L.laurent[i];
  return canonical(x, spec);
}

std::vector<LaurentElem> lattice_points_in_box(const TileContext& ctx, const LatticeHNF& L,
                                               const std::vector<double>& lo, const std::vector<double>& hi) {
  const int n = L.rank();
  const int dim = ctx.emb.dim();
  // E: columns are the arch images of the basis.
  std::vector<std::vector<double>> E(static_cast<std::size_t>(dim), std::vector<double>(static_cast<std::size_t>(n)));
  for (int j = 0; j < n; ++j) {
    auto e = embed_arch(L.basis[j], ctx.emb);
    for (int i = 0; i < dim; ++i) E[i][j] = e[i];
  }
  // Inverse by Gauss-Jordan.
  std::vector<std::vector<double>> A = E, inv(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int i = col + 1; i < n; ++i)
      if (std::abs(A[i][col]) > std::abs(A[piv][col])) piv = i;
    std::swap(A[piv], A[col]);
    std::swap(inv[piv], inv[col]);
    const double d = A[col][col];
    for (int j = 0; j < n; ++j) {
      A[col][j] /= d;
      inv[col][j] /= d;
    }
    for (int i = 0; i < n; ++i) {
      if (i == col) continue;
      const double f = A[i][col];
      for (int j = 0; j < n; ++j) {
        A[i][j] -= f * A[col][j];
        inv[i][j] -= f * inv[col][j];
      }
    }
  }
  std::vector<long> cmin(static_cast<std::size_t>(n)), cmax(static_cast<std::size_t>(n));
  double volume = 1;
  for (int i = 0; i < n; ++i) {
    double mid = 0, spread = 0;
    for (int j = 0; j < dim; ++j) {
      mid += inv[i][j] * 0.5 * (lo[j] + hi[j]);
      spread += std::abs(inv[i][j]) * 0.5 * (hi[j] - lo[j]);
    }
    cmin[i] = static_cast<long>(std::floor(mid - spread)) - 1;
    cmax[i] = static_cast<long>(std::ceil(mid + spread)) + 1;
    volume *= static_cast<double>(cmax[i] - cmin[i] + 1);
  }
  if (volume > 5e6) throw Error(ErrorKind::BudgetExceeded, "translate window too large");
  std::vector<LaurentElem> out;
  std::vector<long> c = cmin;
  for (;;) {
    bool inside = true;
    for (int i = 0; i < dim && inside; ++i) {
      double v = 0;
      for (int j = 0; j < n; ++j) v += E[i][j] * static_cast<double>(c[j]);
      inside = v >= lo[i] && v <= hi[i];
    }
    if (inside) out.push_back(lattice_point(L, c, ctx.spec));
    int i = n - 1;
    while (i >= 0 && ++c[i] > cmax[i]) {
      c[i] = cmin[i];
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

std::vector<Slice> slice_decomposition(const TileContext& ctx, int k, double lo, double hi, int box,
                                       const GOptions& opts) {
  std::vector<Slice> out;
  if (!(lo <= hi)) return out;
  const int n = ctx.spec.degree;
  std::vector<long> c(static_cast<std::size_t>(n), -box);
  for (;;) {
    LaurentElem x = lattice_point(ctx.translates, c, ctx.spec);
    const double h = surrogate(-x, ctx.spec, 48).value;
    if (h >= lo && h <= hi) {
      TileCloud cloud = approximate_G(ctx, x, k, opts);
      if (!cloud.empty()) {
        const auto shift = embed_arch(ctx.K.from_laurent(x), ctx.emb);
        for (std::size_t i = 0; i < cloud.arch.size(); ++i) cloud.arch[i] -= shift[i % shift.size()];
        const FieldVector xv = ctx.K.from_laurent(x);
        for (auto& e : cloud.exact) e = e - xv;
        std::fill(cloud.surrogate.begin(), cloud.surrogate.end(), h);
        out.push_back({x, h, std::move(cloud)});
      }
    }
    int i = n - 1;
    while (i >= 0 && ++c[i] > box) {
      c[i] = -box;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

CellFamily cell_family(const std::vector<TileCloud>& clouds) {
  CellFamily cells;
  for (std::size_t t = 0; t < clouds.size(); ++t) {
    const auto& c = clouds[t];
    if (cells.place_dims.empty()) {
      cells.dim = c.dim;
      cells.place_dims = c.place_dims;
      cells.place_radius = c.place_radius;
    } else if (c.place_radius != cells.place_radius) {
      throw Error(ErrorKind::InvalidInput, "clouds of different depth in one cell family");
    }
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (int j = 0; j < c.dim; ++j) cells.centers.push_back(c.arch[i * c.dim + j] + c.cell_offset[j]);
      cells.tile.push_back(static_cast<int>(t));
    }
  }
  return cells;
}

Refinement refine_cells(const TileContext& ctx, const std::vector<TileCloud>& clouds, int fine) {
  Refinement ref;
  ref.frame = &ctx.frame;
  if (clouds.empty()) return ref;
  const int k = clouds.front().depth;
  for (const auto& c : clouds) {
    if (c.kind != TileKind::G || c.depth != k) throw Error(ErrorKind::InvalidInput, "refinement needs G clouds of one depth");
    ref.coords.insert(ref.coords.end(), c.lattice_coords.begin(), c.lattice_coords.end());
    ref.corners.insert(ref.corners.end(), c.arch.begin(), c.arch.end());
  }
  const auto steps = step_tables(ctx, fine);
  for (int j = k + 1; j <= fine; ++j) {
    TileCloud shape;
    fill_cell(shape, ctx, j);
    ref.steps.push_back(steps[j - 1]);
    ref.offsets.push_back(shape.cell_offset);
    ref.radii.push_back(shape.place_radius);
  }
  return ref;
}

}  // namespace ratile
