#pragma once

// Point clouds with cell radii for F, G(x) and SRS tiles.

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "ratile/dynamics.hpp"
#include "ratile/kernels.hpp"

namespace ratile {

/// Per-place balls containing the archimedean projection of F.
struct FBounds {
  std::vector<int> place_dims;
  std::vector<double> center;  // arch coordinates
  std::vector<double> radius;  // per place
  std::vector<double> lo, hi;  // bounding box
  double reach = 0;            // sup of |f| over the projection, an upper bound
  int refine_depth = 0;
};

FBounds f_bounds(const PolynomialSpec& spec, const DigitSet& D, const EmbeddingData& emb, int refine_depth = -1);

struct TileContext {
  PolynomialSpec spec;
  DigitSet D;
  NumberField K;
  EmbeddingData emb;
  SpanClosure closure;
  LatticeHNF lambda;      // Lambda_m, carries the preimage trees
  LatticeHNF translates;  // Z<alpha, D> cap Lambda_m
  LatticeFrame frame;
  FBounds bounds;
  std::vector<double> place_contraction;  // |sigma(alpha)|^-1 per place
  double contraction = 0;                 // max of the above

  TileContext(PolynomialSpec s, DigitSet d);
};

enum class TileKind { F, G, SRS };
std::string_view to_string(TileKind kind);

struct TileCloud {
  TileKind kind = TileKind::F;
  LaurentElem translate;  // F and G
  IntVec srs_translate;   // SRS
  int depth = 0;
  int dim = 0;

  std::vector<double> arch;       // dim per point
  std::vector<double> surrogate;  // one per point
  std::vector<std::uint8_t> words;  // depth per point: address (F) or digit path (G)
  std::vector<FieldVector> exact;   // F and G, when requested
  std::vector<RatVec> exact_srs;    // SRS
  std::vector<std::int64_t> lattice_coords;  // G: Lambda_m coordinates of the last level; SRS: the preimages

  std::vector<int> place_dims;
  std::vector<double> cell_offset;   // cell center minus point
  std::vector<double> place_radius;  // cell radius per place
  double cell_radius = 0;            // sup distance from a point to its cell
  double surrogate_radius = 0;

  std::vector<std::size_t> level_sizes;  // G: surviving nodes per level
  std::optional<FieldVector> limit;      // G: exact limit of a single-path tree

  std::size_t size() const { return surrogate.size(); }
  bool empty() const { return surrogate.empty(); }
};

/// Points sum_(j=1..k) alpha^-j d_j + x, one per address in lexicographic order.
TileCloud approximate_F(const TileContext& ctx, int k, const LaurentElem& translate = {}, bool exact = false,
                        bool parallel = true, std::size_t limit = 2000000);

struct GOptions {
  int lookahead = -1;  // -1: 0 under the residue-system condition, 8 otherwise
  bool exact = false;
  bool parallel = true;
  std::size_t node_cap = 1000000;
};

/// Points alpha^-k y for y in T^-k(x) cap Lambda_m. Empty when x is outside
/// Lambda_m or the tree dies.
TileCloud approximate_G(const TileContext& ctx, const LaurentElem& x, int k, const GOptions& opts = {});

/// Points M_r^k z' for z' in tau_r^-k(z).
TileCloud approximate_srs_tile(const SRSParam& p, const IntVec& z, int k, std::size_t node_cap = 1000000);

/// Exact preimage sets of tau_r level by level, in the order used by
/// approximate_srs_tile.
std::vector<IntVec> srs_preimage_set(const SRSParam& p, const IntVec& z, int k, std::size_t node_cap = 1000000);

struct Slice {
  LaurentElem x;
  double height = 0;  // surrogate of -x
  TileCloud cloud;    // G(x) - x
};

/// Slices G(x) - x of F for translates x with lattice coordinates in
/// [-box, box]^n and surrogate(-x) in [lo, hi].
std::vector<Slice> slice_decomposition(const TileContext& ctx, int k, double lo, double hi, int box,
                                       const GOptions& opts = {});

/// Lattice point with the given coordinates as a canonical Z[alpha] element.
LaurentElem lattice_point(const LatticeHNF& L, const std::vector<long>& coords, const PolynomialSpec& spec);

/// Translates of `translates` whose archimedean image lies in [lo, hi]
/// (per arch coordinate), in lexicographic coordinate order.
std::vector<LaurentElem> lattice_points_in_box(const TileContext& ctx, const LatticeHNF& L,
                                               const std::vector<double>& lo, const std::vector<double>& hi);

/// Cells of several clouds for covering_histogram.
CellFamily cell_family(const std::vector<TileCloud>& clouds);

/// Refinement of the cells of G clouds (all of the same depth) down to
/// depth `fine`.
Refinement refine_cells(const TileContext& ctx, const std::vector<TileCloud>& clouds, int fine);

}  // namespace ratile
