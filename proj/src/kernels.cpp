#include "ratile/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <memory>
#include <numeric>
#include <unordered_map>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

namespace ratile {

namespace {

std::int64_t to_int64(const Integer& v, const char* what) {
  if (!v.fits_slong_p()) throw Error(ErrorKind::BoundExceeded, std::string(what) + " does not fit in 64 bits");
  return v.get_si();
}

bool fits(__int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

struct ScaledRows {
  std::int64_t den = 1;
  std::vector<std::int64_t> values;
};

ScaledRows scale_rationals(const std::vector<Rational>& qs, const char* what) {
  Integer den = 1;
  for (const auto& q : qs) den = lcm(den, Integer(q.get_den()));
  ScaledRows out;
  out.den = to_int64(den, what);
  for (const auto& q : qs) {
    Rational s = q * Rational(den);
    out.values.push_back(to_int64(s.get_num(), what));
  }
  return out;
}

}  // namespace

std::vector<Rational> rational_coords(const FieldVector& x, const LatticeHNF& L) {
  // Solve sum_i c_i b_i = x, i.e. B^T c = x.
  const std::size_t n = L.basis.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = L.basis[j].coords[i];
    a[i][n] = x.coords[i];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw Error(ErrorKind::Internal, "lattice basis is singular");
    std::swap(a[piv], a[col]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      Rational f = a[i][col] / a[col][col];
      for (std::size_t j = col; j <= n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  std::vector<Rational> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = a[i][n] / a[i][i];
  return c;
}

LatticeFrame make_frame(const PolynomialSpec& spec, const DigitSet& D, const LatticeHNF& L) {
  NumberField K(spec);
  LatticeFrame f;
  f.n = spec.degree;
  f.digit_count = static_cast<int>(D.size());
  const std::size_t n = static_cast<std::size_t>(f.n);

  std::vector<Rational> child(n * n), parent(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    auto up = rational_coords(K.mul_alpha(L.basis[j]), L);
    auto down = rational_coords(K.mul_alpha_inv(L.basis[j]), L);
    for (std::size_t i = 0; i < n; ++i) {
      child[i * n + j] = up[i];
      parent[i * n + j] = down[i];
    }
  }
  std::vector<Rational> child_all = child, parent_all = parent;
  for (const auto& v : D.values) {
    auto c = rational_coords(v, L);
    child_all.insert(child_all.end(), c.begin(), c.end());
    auto p = rational_coords(K.mul_alpha_inv(v), L);
    parent_all.insert(parent_all.end(), p.begin(), p.end());
  }
  auto cs = scale_rationals(child_all, "child transition");
  auto ps = scale_rationals(parent_all, "parent transition");
  f.child_den = cs.den;
  f.child_mat.assign(cs.values.begin(), cs.values.begin() + static_cast<long>(n * n));
  f.child_off.assign(cs.values.begin() + static_cast<long>(n * n), cs.values.end());
  f.parent_den = ps.den;
  f.parent_mat.assign(ps.values.begin(), ps.values.begin() + static_cast<long>(n * n));
  f.parent_off.assign(ps.values.begin() + static_cast<long>(n * n), ps.values.end());
  return f;
}

LatticeFrame::Status LatticeFrame::child(const std::int64_t* c, int d, std::int64_t* out) const {
  for (int i = 0; i < n; ++i) {
    __int128 acc = child_off[static_cast<std::size_t>(d * n + i)];
    for (int j = 0; j < n; ++j) acc += static_cast<__int128>(child_mat[static_cast<std::size_t>(i * n + j)]) * c[j];
    if (acc % child_den != 0) return kOutside;
    acc /= child_den;
    if (!fits(acc)) return kOverflow;
    out[i] = static_cast<std::int64_t>(acc);
  }
  return kInside;
}

int LatticeFrame::parent(const std::int64_t* c, std::int64_t* out) const {
  std::vector<__int128> base(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    __int128 acc = 0;
    for (int j = 0; j < n; ++j) acc += static_cast<__int128>(parent_mat[static_cast<std::size_t>(i * n + j)]) * c[j];
    base[i] = acc;
  }
  for (int d = 0; d < digit_count; ++d) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      __int128 acc = base[i] - parent_off[static_cast<std::size_t>(d * n + i)];
      if (acc % parent_den != 0) ok = false;
    }
    if (!ok) continue;
    for (int i = 0; i < n; ++i) {
      __int128 acc = (base[i] - parent_off[static_cast<std::size_t>(d * n + i)]) / parent_den;
      if (!fits(acc)) return -1;
      out[i] = static_cast<std::int64_t>(acc);
    }
    return d;
  }
  throw Error(ErrorKind::NoDigitMatches, "no digit maps the lattice point back into the lattice");
}

PreimageTree expand_tree(const LatticeFrame& frame, const std::vector<std::int64_t>& root, int depth,
                         std::size_t node_cap, bool parallel) {
  const int n = frame.n;
  const int nd = frame.digit_count;
  if (nd > 64) throw Error(ErrorKind::BoundExceeded, "more than 64 digits");
  PreimageTree tree;
  tree.n = n;
  TreeLevel first;
  first.coords = root;
  first.parent.push_back(-1);
  first.digit.push_back(0);
  tree.levels.push_back(std::move(first));
  std::size_t total = 1;

  for (int level = 1; level <= depth; ++level) {
    const TreeLevel& prev = tree.levels.back();
    const std::size_t N = prev.size();
    TreeLevel next;
    std::atomic<bool> overflow{false};
    std::vector<std::int64_t> buf(static_cast<std::size_t>(n));
    if (!parallel) {
      for (std::size_t p = 0; p < N; ++p) {
        for (int d = 0; d < nd; ++d) {
          auto st = frame.child(&prev.coords[p * n], d, buf.data());
          if (st == LatticeFrame::kOverflow) overflow = true;
          if (st != LatticeFrame::kInside) continue;
          next.coords.insert(next.coords.end(), buf.begin(), buf.end());
          next.parent.push_back(static_cast<std::int32_t>(p));
          next.digit.push_back(static_cast<std::uint8_t>(d));
        }
      }
    } else {
      std::vector<std::uint64_t> mask(N);
      std::vector<std::size_t> offset(N + 1, 0);
#pragma omp parallel
      {
        std::vector<std::int64_t> local(static_cast<std::size_t>(n));
#pragma omp for schedule(static)
        for (std::size_t p = 0; p < N; ++p) {
          std::uint64_t bits = 0;
          for (int d = 0; d < nd; ++d) {
            auto st = frame.child(&prev.coords[p * n], d, local.data());
            if (st == LatticeFrame::kOverflow) overflow = true;
            if (st == LatticeFrame::kInside) bits |= std::uint64_t{1} << d;
          }
          mask[p] = bits;
        }
      }
      for (std::size_t p = 0; p < N; ++p) offset[p + 1] = offset[p] + static_cast<std::size_t>(__builtin_popcountll(mask[p]));
      const std::size_t M = offset[N];
      if (total + M <= node_cap && !overflow) {
        next.coords.resize(M * n);
        next.parent.resize(M);
        next.digit.resize(M);
#pragma omp parallel for schedule(static)
        for (std::size_t p = 0; p < N; ++p) {
          std::size_t at = offset[p];
          for (int d = 0; d < nd; ++d) {
            if (!(mask[p] >> d & 1)) continue;
            frame.child(&prev.coords[p * n], d, &next.coords[at * n]);
            next.parent[at] = static_cast<std::int32_t>(p);
            next.digit[at] = static_cast<std::uint8_t>(d);
            ++at;
          }
        }
      } else {
        next.parent.resize(M);
      }
    }
    if (overflow) throw Error(ErrorKind::BoundExceeded, "lattice coordinates overflow 64 bits");
    total += next.size();
    if (total > node_cap)
      throw Error(ErrorKind::BudgetExceeded, "preimage tree exceeds " + std::to_string(node_cap) + " nodes");
    if (next.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
      throw Error(ErrorKind::BudgetExceeded, "tree level too large");
    tree.levels.push_back(std::move(next));
  }
  return tree;
}

PreimageTree prune_dead(const PreimageTree& tree) {
  const std::size_t L = tree.levels.size();
  std::vector<std::vector<char>> alive(L);
  alive[L - 1].assign(tree.levels[L - 1].size(), 1);
  for (std::size_t k = L - 1; k > 0; --k) {
    alive[k - 1].assign(tree.levels[k - 1].size(), 0);
    for (std::size_t j = 0; j < tree.levels[k].size(); ++j)
      if (alive[k][j]) alive[k - 1][static_cast<std::size_t>(tree.levels[k].parent[j])] = 1;
  }
  PreimageTree out;
  out.n = tree.n;
  std::vector<std::int32_t> remap_prev;
  for (std::size_t k = 0; k < L; ++k) {
    const TreeLevel& src = tree.levels[k];
    TreeLevel dst;
    std::vector<std::int32_t> remap(src.size(), -1);
    for (std::size_t j = 0; j < src.size(); ++j) {
      if (!alive[k][j]) continue;
      remap[j] = static_cast<std::int32_t>(dst.size());
      dst.coords.insert(dst.coords.end(), src.coords.begin() + static_cast<long>(j * tree.n),
                        src.coords.begin() + static_cast<long>((j + 1) * tree.n));
      dst.parent.push_back(k == 0 ? -1 : remap_prev[static_cast<std::size_t>(src.parent[j])]);
      dst.digit.push_back(src.digit[j]);
    }
    remap_prev = std::move(remap);
    out.levels.push_back(std::move(dst));
  }
  return out;
}

std::vector<double> tree_points(const PreimageTree& tree, const std::vector<double>& root_point,
                                const std::vector<std::vector<double>>& steps, int dim, bool parallel) {
  std::vector<double> prev = root_point;
  if (tree.levels.front().size() == 0) return {};
  for (std::size_t k = 1; k < tree.levels.size(); ++k) {
    const TreeLevel& lvl = tree.levels[k];
    const std::vector<double>& step = steps.at(k - 1);
    std::vector<double> cur(lvl.size() * static_cast<std::size_t>(dim));
    const long count = static_cast<long>(lvl.size());
#pragma omp parallel for schedule(static) if (parallel)
    for (long j = 0; j < count; ++j) {
      const std::size_t p = static_cast<std::size_t>(lvl.parent[j]);
      const std::size_t d = lvl.digit[j];
      for (int i = 0; i < dim; ++i) cur[j * dim + i] = prev[p * dim + i] + step[d * dim + i];
    }
    prev = std::move(cur);
  }
  return prev;
}

std::vector<int> tree_path(const PreimageTree& tree, std::size_t index) {
  std::vector<int> path;
  for (std::size_t k = tree.levels.size() - 1; k > 0; --k) {
    path.push_back(tree.levels[k].digit[index]);
    index = static_cast<std::size_t>(tree.levels[k].parent[index]);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// ---------------------------------------------------------------------------
// Hausdorff distance

namespace {

struct CellKeyHash {
  std::size_t operator()(const std::vector<std::int64_t>& k) const noexcept {
    std::uint64_t h = 0x9E3779B97F4A7C15ull;
    for (auto v : k) h = (h ^ static_cast<std::uint64_t>(v)) * 0x100000001B3ull + (h >> 29);
    return static_cast<std::size_t>(h);
  }
};

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

// Exact nearest-neighbour distance through an R-tree; used for queries the
// grid rings cannot settle cheaply.
class NearestIndex {
 public:
  virtual ~NearestIndex() = default;
  virtual double nearest(const double* q) const = 0;
};

template <int D>
class RTreeIndex : public NearestIndex {
  using Point = bg::model::point<double, D, bg::cs::cartesian>;

 public:
  RTreeIndex(const std::vector<double>& pts) {
    std::vector<Point> v(pts.size() / D);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = make(&pts[i * D]);
    tree_ = bgi::rtree<Point, bgi::rstar<16>>(v.begin(), v.end());
  }
  double nearest(const double* q) const override {
    const Point p = make(q);
    for (auto it = tree_.qbegin(bgi::nearest(p, 1)); it != tree_.qend(); ++it) return bg::distance(p, *it);
    return std::numeric_limits<double>::infinity();
  }

 private:
  static Point make(const double* x) {
    Point p;
    assign<0>(p, x);
    return p;
  }
  template <int I>
  static void assign(Point& p, const double* x) {
    if constexpr (I < D) {
      bg::set<I>(p, x[I]);
      assign<I + 1>(p, x);
    }
  }
  bgi::rtree<Point, bgi::rstar<16>> tree_;
};

std::unique_ptr<NearestIndex> make_index(const std::vector<double>& pts, int dim) {
  switch (dim) {
    case 1: return std::make_unique<RTreeIndex<1>>(pts);
    case 2: return std::make_unique<RTreeIndex<2>>(pts);
    case 3: return std::make_unique<RTreeIndex<3>>(pts);
    case 4: return std::make_unique<RTreeIndex<4>>(pts);
    case 5: return std::make_unique<RTreeIndex<5>>(pts);
    case 6: return std::make_unique<RTreeIndex<6>>(pts);
    default: return nullptr;
  }
}

class PointGrid {
 public:
  PointGrid(const std::vector<double>& pts, int dim, double cell)
      : pts_(pts), dim_(dim), cell_(cell), index_(make_index(pts, dim)) {
    const std::size_t count = pts.size() / static_cast<std::size_t>(dim);
    for (std::size_t i = 0; i < count; ++i) buckets_[key(&pts[i * dim])].push_back(i);
    while (max_ring_ < 64 && std::pow(2.0 * (max_ring_ + 1) + 1.0, dim_) <= 81.0) ++max_ring_;
  }

  std::vector<std::int64_t> key(const double* p) const {
    std::vector<std::int64_t> k(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i) k[i] = static_cast<std::int64_t>(std::floor(p[i] / cell_));
    return k;
  }

  double nearest(const double* q) const {
    const auto center = key(q);
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r <= max_ring_; ++r) {
      visit_ring(center, r, [&](const std::vector<std::int64_t>& k) {
        auto it = buckets_.find(k);
        if (it == buckets_.end()) return;
        for (std::size_t idx : it->second) best = std::min(best, dist(q, &pts_[idx * dim_]));
      });
      if (best <= r * cell_) return best;
    }
    return index_ ? index_->nearest(q) : brute(q);
  }

 private:
  template <class F>
  void visit_ring(const std::vector<std::int64_t>& center, int r, F&& f) const {
    std::vector<int> off(static_cast<std::size_t>(dim_), -r);
    std::vector<std::int64_t> k(center);
    for (;;) {
      int cheb = 0;
      for (int v : off) cheb = std::max(cheb, std::abs(v));
      if (cheb == r) {
        for (int i = 0; i < dim_; ++i) k[i] = center[i] + off[i];
        f(k);
      }
      int i = 0;
      while (i < dim_ && ++off[i] > r) off[i++] = -r;
      if (i == dim_) break;
    }
  }

  double dist(const double* a, const double* b) const {
    double s = 0;
    for (int i = 0; i < dim_; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
  }

  double brute(const double* q) const {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t count = pts_.size() / static_cast<std::size_t>(dim_);
    for (std::size_t i = 0; i < count; ++i) best = std::min(best, dist(q, &pts_[i * dim_]));
    return best;
  }

  const std::vector<double>& pts_;
  int dim_;
  double cell_;
  int max_ring_ = 0;
  std::unique_ptr<NearestIndex> index_;
  std::unordered_map<std::vector<std::int64_t>, std::vector<std::size_t>, CellKeyHash> buckets_;
};

double grid_cell(const std::vector<double>& pts, int dim) {
  const std::size_t count = pts.size() / static_cast<std::size_t>(dim);
  double extent = 0;
  for (int i = 0; i < dim; ++i) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t j = 0; j < count; ++j) {
      lo = std::min(lo, pts[j * dim + i]);
      hi = std::max(hi, pts[j * dim + i]);
    }
    extent = std::max(extent, hi - lo);
  }
  if (extent <= 0) return 1.0;
  return std::max(extent / std::pow(static_cast<double>(count), 1.0 / dim), extent * 1e-6);
}

}  // namespace

double directed_hausdorff(const std::vector<double>& a, const std::vector<double>& b, int dim, bool parallel) {
  if (a.empty()) return 0.0;
  if (b.empty()) return std::numeric_limits<double>::infinity();
  PointGrid grid(b, dim, grid_cell(b, dim));
  const long count = static_cast<long>(a.size() / static_cast<std::size_t>(dim));
  double worst = 0;
#pragma omp parallel for schedule(dynamic, 256) reduction(max : worst) if (parallel)
  for (long i = 0; i < count; ++i) worst = std::max(worst, grid.nearest(&a[i * dim]));
  return worst;
}

double hausdorff(const std::vector<double>& a, const std::vector<double>& b, int dim, bool parallel) {
  return std::max(directed_hausdorff(a, b, dim, parallel), directed_hausdorff(b, a, dim, parallel));
}

double hausdorff_bruteforce(const std::vector<double>& a, const std::vector<double>& b, int dim) {
  auto directed = [dim](const std::vector<double>& x, const std::vector<double>& y) {
    double worst = 0;
    for (std::size_t i = 0; i < x.size(); i += dim) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < y.size(); j += dim) {
        double s = 0;
        for (int t = 0; t < dim; ++t) s += (x[i + t] - y[j + t]) * (x[i + t] - y[j + t]);
        best = std::min(best, s);
      }
      worst = std::max(worst, std::sqrt(best));
    }
    return worst;
  };
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return std::max(directed(a, b), directed(b, a));
}

// ---------------------------------------------------------------------------
// Sampling

std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double unit_uniform(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(splitmix64(seed, counter) >> 11) * 0x1.0p-53;
}

namespace {

bool in_balls(const double* w, const double* center, const std::vector<int>& place_dims,
              const std::vector<double>& radius) {
  int at = 0;
  for (std::size_t p = 0; p < place_dims.size(); ++p) {
    double s2 = 0;
    for (int t = 0; t < place_dims[p]; ++t) {
      const double diff = w[at + t] - center[at + t];
      s2 += diff * diff;
    }
    if (s2 > radius[p] * radius[p]) return false;
    at += place_dims[p];
  }
  return true;
}

// accept(cell, w) decides a cell whose ball contains w.
template <class Accept>
std::map<int, std::size_t> histogram_impl(const CellFamily& cells, const std::vector<double>& lo,
                                          const std::vector<double>& hi, std::size_t samples, std::uint64_t seed,
                                          bool parallel, Accept&& accept) {
  const int dim = cells.dim;
  double reach = 0;
  for (std::size_t p = 0; p < cells.place_radius.size(); ++p) reach += cells.place_radius[p] * cells.place_radius[p];
  reach = std::sqrt(reach);
  const double cell = std::max(2.0 * reach, 1e-12);
  std::unordered_map<std::vector<std::int64_t>, std::vector<std::size_t>, CellKeyHash> grid;
  const std::size_t count = cells.tile.size();
  std::vector<std::int64_t> key(static_cast<std::size_t>(dim));
  for (std::size_t c = 0; c < count; ++c) {
    for (int i = 0; i < dim; ++i) key[i] = static_cast<std::int64_t>(std::floor(cells.centers[c * dim + i] / cell));
    grid[key].push_back(c);
  }

  const int workers = parallel ? omp_get_max_threads() : 1;
  std::vector<std::map<int, std::size_t>> partial(static_cast<std::size_t>(workers));
  const long total = static_cast<long>(samples);
#pragma omp parallel num_threads(workers) if (parallel)
  {
    auto& hist = partial[static_cast<std::size_t>(omp_get_thread_num())];
    std::vector<double> w(static_cast<std::size_t>(dim));
    std::vector<std::int64_t> k(static_cast<std::size_t>(dim)), probe(static_cast<std::size_t>(dim));
    std::vector<std::pair<int, std::size_t>> hits;  // (tile, cell)
#pragma omp for schedule(dynamic, 64)
    for (long s = 0; s < total; ++s) {
      for (int i = 0; i < dim; ++i)
        w[i] = lo[i] + (hi[i] - lo[i]) * unit_uniform(seed, static_cast<std::uint64_t>(s) * dim + i);
      for (int i = 0; i < dim; ++i) k[i] = static_cast<std::int64_t>(std::floor(w[i] / cell));
      hits.clear();
      std::vector<int> off(static_cast<std::size_t>(dim), -1);
      for (;;) {
        for (int i = 0; i < dim; ++i) probe[i] = k[i] + off[i];
        auto it = grid.find(probe);
        if (it != grid.end())
          for (std::size_t c : it->second)
            if (in_balls(w.data(), &cells.centers[c * dim], cells.place_dims, cells.place_radius))
              hits.emplace_back(cells.tile[c], c);
        int i = 0;
        while (i < dim && ++off[i] > 1) off[i++] = -1;
        if (i == dim) break;
      }
      std::sort(hits.begin(), hits.end());
      int distinct = 0;
      for (std::size_t h = 0; h < hits.size();) {
        const int tile = hits[h].first;
        bool covered = false;
        for (; h < hits.size() && hits[h].first == tile; ++h)
          if (!covered && accept(hits[h].second, w.data())) covered = true;
        distinct += covered;
      }
      ++hist[distinct];
    }
  }
  std::map<int, std::size_t> merged;
  for (const auto& h : partial)
    for (const auto& [mult, freq] : h) merged[mult] += freq;
  return merged;
}

bool descend(const Refinement& ref, const std::vector<int>& place_dims, int level, const std::int64_t* coords,
             const double* corner, const double* w, int dim) {
  if (level == ref.levels()) return true;
  const int n = ref.frame->n;
  std::vector<std::int64_t> child(static_cast<std::size_t>(n));
  std::vector<double> next(static_cast<std::size_t>(dim)), center(static_cast<std::size_t>(dim));
  const auto& step = ref.steps[level];
  for (int d = 0; d < ref.frame->digit_count; ++d) {
    auto st = ref.frame->child(coords, d, child.data());
    if (st == LatticeFrame::kOverflow) throw Error(ErrorKind::BoundExceeded, "lattice coordinates overflow 64 bits");
    if (st != LatticeFrame::kInside) continue;
    for (int i = 0; i < dim; ++i) {
      next[i] = corner[i] + step[d * dim + i];
      center[i] = next[i] + ref.offsets[level][i];
    }
    if (!in_balls(w, center.data(), place_dims, ref.radii[level])) continue;
    if (descend(ref, place_dims, level + 1, child.data(), next.data(), w, dim)) return true;
  }
  return false;
}

}  // namespace

std::map<int, std::size_t> covering_histogram(const CellFamily& cells, const std::vector<double>& lo,
                                              const std::vector<double>& hi, std::size_t samples,
                                              std::uint64_t seed, bool parallel) {
  return histogram_impl(cells, lo, hi, samples, seed, parallel, [](std::size_t, const double*) { return true; });
}

std::map<int, std::size_t> refined_covering_histogram(const CellFamily& cells, const Refinement& ref,
                                                      const std::vector<double>& lo, const std::vector<double>& hi,
                                                      std::size_t samples, std::uint64_t seed, bool parallel) {
  if (ref.levels() == 0) return covering_histogram(cells, lo, hi, samples, seed, parallel);
  const int dim = cells.dim;
  const int n = ref.frame->n;
  std::atomic<bool> overflow{false};
  auto result = histogram_impl(cells, lo, hi, samples, seed, parallel, [&](std::size_t c, const double* w) {
    try {
      return descend(ref, cells.place_dims, 0, &ref.coords[c * n], &ref.corners[c * dim], w, dim);
    } catch (const Error&) {
      overflow = true;
      return false;
    }
  });
  if (overflow) throw Error(ErrorKind::BoundExceeded, "lattice coordinates overflow 64 bits");
  return result;
}

int worker_count() { return omp_get_max_threads(); }

void apply_thread_limit() {
  if (const char* env = std::getenv("RATILE_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) omp_set_num_threads(static_cast<int>(v));
  }
}

}  // namespace ratile
