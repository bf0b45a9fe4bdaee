#pragma once

// Hot loops on machine integers and doubles. Each parallel kernel has a
// serial twin with identical output, used by the tests and benchmarks.

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "ratile/dynamics.hpp"
#include "ratile/lattice.hpp"

namespace ratile {

/// Multiplication by alpha and the digit translations written in integer
/// coordinates of a lattice L (with T(L) contained in L).
struct LatticeFrame {
  int n = 0;
  int digit_count = 0;
  std::int64_t child_den = 1;
  std::vector<std::int64_t> child_mat;  // child_den * M_alpha, row-major
  std::vector<std::int64_t> child_off;  // child_den * coords(d), digit-major
  std::int64_t parent_den = 1;
  std::vector<std::int64_t> parent_mat;  // parent_den * M_alpha^-1
  std::vector<std::int64_t> parent_off;  // parent_den * M_alpha^-1 coords(d)

  enum Status { kOutside = 0, kInside = 1, kOverflow = -1 };

  /// Coordinates of alpha v + d when that lies in L.
  Status child(const std::int64_t* c, int d, std::int64_t* out) const;
  /// T_alpha in coordinates; returns the digit index, -1 on overflow.
  int parent(const std::int64_t* c, std::int64_t* out) const;
};

LatticeFrame make_frame(const PolynomialSpec& spec, const DigitSet& D, const LatticeHNF& L);

/// Exact rational coordinates of x with respect to the basis of L.
std::vector<Rational> rational_coords(const FieldVector& x, const LatticeHNF& L);

struct TreeLevel {
  std::vector<std::int64_t> coords;  // n per node
  std::vector<std::int32_t> parent;
  std::vector<std::uint8_t> digit;
  std::size_t size() const { return parent.size(); }
};

struct PreimageTree {
  int n = 0;
  std::vector<TreeLevel> levels;  // levels[0] holds the root
};

/// Breadth-first preimage tree restricted to L. Children are ordered by
/// (parent index, digit index) in both variants.
PreimageTree expand_tree(const LatticeFrame& frame, const std::vector<std::int64_t>& root, int depth,
                         std::size_t node_cap, bool parallel = true);

/// Drops nodes without descendants at the last level.
PreimageTree prune_dead(const PreimageTree& tree);

/// Corner points x + sum alpha^-j d_j of the last level. `steps[j-1]` holds
/// the flattened embedding of alpha^-j d for every digit (dim per digit).
std::vector<double> tree_points(const PreimageTree& tree, const std::vector<double>& root_point,
                                const std::vector<std::vector<double>>& steps, int dim, bool parallel = true);

/// Digit path of a node of the last level, root first.
std::vector<int> tree_path(const PreimageTree& tree, std::size_t index);

/// Directed Hausdorff distance sup_a inf_b |a - b| with grid bucketing.
double directed_hausdorff(const std::vector<double>& a, const std::vector<double>& b, int dim, bool parallel = true);
double hausdorff(const std::vector<double>& a, const std::vector<double>& b, int dim, bool parallel = true);
double hausdorff_bruteforce(const std::vector<double>& a, const std::vector<double>& b, int dim);

/// A family of cells: boxes of archimedean places (each a ball of radius
/// place_radius around its center), grouped by tile.
struct CellFamily {
  int dim = 0;
  std::vector<int> place_dims;       // 1 for a real place, 2 for a complex one
  std::vector<double> place_radius;  // per place
  std::vector<double> centers;       // dim per cell
  std::vector<int> tile;             // tile index per cell
};

/// SplitMix64 keyed by (seed, counter); independent of thread scheduling.
std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t counter);
double unit_uniform(std::uint64_t seed, std::uint64_t counter);

/// Histogram of how many distinct tiles cover each sample point of the box
/// [lo, hi]. Samples are generated from (seed, sample index, coordinate).
std::map<int, std::size_t> covering_histogram(const CellFamily& cells, const std::vector<double>& lo,
                                              const std::vector<double>& hi, std::size_t samples,
                                              std::uint64_t seed, bool parallel = true);

/// Deeper outer approximations below the cells of a CellFamily: a sample
/// counts for a cell only if some chain of descendant cells down to the last
/// refined level contains it.
struct Refinement {
  const LatticeFrame* frame = nullptr;
  std::vector<std::int64_t> coords;          // frame coordinates per cell
  std::vector<double> corners;               // dim per cell
  std::vector<std::vector<double>> steps;    // per refined level, dim per digit
  std::vector<std::vector<double>> offsets;  // per refined level, cell offset
  std::vector<std::vector<double>> radii;    // per refined level, per place
  int levels() const { return static_cast<int>(steps.size()); }
};

std::map<int, std::size_t> refined_covering_histogram(const CellFamily& cells, const Refinement& ref,
                                                      const std::vector<double>& lo, const std::vector<double>& hi,
                                                      std::size_t samples, std::uint64_t seed, bool parallel = true);

/// Number of OpenMP workers, honouring RATILE_THREADS.
int worker_count();
void apply_thread_limit();

}  // namespace ratile
