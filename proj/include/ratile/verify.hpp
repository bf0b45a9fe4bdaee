#pragma once

// Tiling certificates, covering multiplicity, Hausdorff almost-periodicity
// and volume balance.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ratile/tiles.hpp"

namespace ratile {

bool check_standard(const PolynomialSpec& spec, const DigitSet& D);

/// For rank-1 lattices: the residues of T^k(Lambda_m) modulo `modulus`.
/// Otherwise: the lattice points with coordinates in [-window, window]^n
/// that have a depth-k preimage tree.
struct ImageCharacterization {
  int k = 0;
  bool periodic = false;
  Rational modulus;               // periodic case
  std::vector<Rational> residues; // periodic case, ascending in [0, modulus)
  std::vector<LaurentElem> points;  // window case
};

ImageCharacterization image_characterization(const TileContext& ctx, int k, int window = 4);

/// Residues of a periodic characterization reduced to a smaller modulus
/// that divides the original one.
std::vector<Rational> project_residues(const ImageCharacterization& img, const Rational& modulus);

struct TilingCertificate {
  bool found = false;
  LaurentElem z;
  int k = 0;
  std::vector<LaurentElem> Y;
  std::vector<std::vector<LaurentElem>> orbits;  // per y in Y: T^j(z - y), j = 0..k
  std::size_t candidates = 0;
  double seconds = 0;
};

/// The translates whose archimedean image lies in the bounding ball of F.
std::vector<LaurentElem> neighbor_set(const TileContext& ctx);

/// Searches z = sum_(j<k) alpha^j d_j with T^k(z - y) = 0 for all y in Y,
/// k = 1, 2, ... Throws BudgetExceeded when the time budget runs out.
TilingCertificate find_exclusive_point(const TileContext& ctx, double budget_seconds, int max_k = 40);

/// Independent re-check of a certificate by iterating T_alpha.
bool check_certificate(const PolynomialSpec& spec, const DigitSet& D, const TilingCertificate& cert);

struct MultiplicityReport {
  std::size_t samples = 0;
  int depth = 0;
  std::uint64_t seed = 0;
  std::map<int, std::size_t> histogram;
  std::vector<double> lo, hi;
  std::size_t translates = 0;
  bool outer = true;
  int mode = 0;
  double mode_fraction = 0;
  double mean = 0;
};

/// Window of the sampling box: [-half, half] per arch coordinate; the
/// default half width is twice the reach of F.
MultiplicityReport estimate_multiplicity(const TileContext& ctx, std::size_t samples, int k, std::uint64_t seed,
                                         double half = -1, bool parallel = true);

/// Mean number of covering outer approximations over the window.
double volume_balance(const TileContext& ctx, std::size_t samples, int k, std::uint64_t seed, double half = -1);

struct HausdorffReport {
  double distance = 0;
  int lattice_level = 0;  // largest k' with x - y in Lambda_(m-k'), capped
  bool identical = false;
  double empirical_constant = 0;  // distance / contraction^k'
  double reference_constant = 0;  // diameter bound of F
  double cell_radius = 0;
};

HausdorffReport hausdorff_report(const TileContext& ctx, const LaurentElem& x, const LaurentElem& y, int k,
                                 int level_cap = 64);

/// Forward greedy digits with alpha x_j + d in Lambda_m; nullopt when x is
/// outside Lambda_m or the construction gets stuck.
std::optional<std::vector<int>> greedy_point(const TileContext& ctx, const LaurentElem& x, int length = 16);

}  // namespace ratile
