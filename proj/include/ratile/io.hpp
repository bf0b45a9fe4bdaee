#pragma once

// Problem files, JSON reports, CSV point data and SVG figures.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ratile/verify.hpp"

namespace ratile {

using Json = nlohmann::ordered_json;

struct Limits {
  std::size_t max_addresses = 2000000;
  std::size_t node_cap = 1000000;
};

struct Problem {
  PolynomialSpec spec;
  DigitSet D;
  Limits limits;
};

/// Throws Error(InvalidInput) naming the offending field.
Problem parse_problem(const Json& j);
Problem load_problem(const std::string& path);
/// "ex1", "ex2", "four_thirds", "ex1_024".
Json builtin_problem(std::string_view name);

/// Exit status for an error: 2 bad input, 3 inconclusive, 4 internal.
int exit_code(const Error& e);

Json integer_json(const Integer& x);
Json lattice_json(const LatticeHNF& L);
Json analyze_report(const Problem& p);

Json certificate_json(const TilingCertificate& cert);
Json multiplicity_json(const MultiplicityReport& rep);

struct VerifyOptions {
  double budget = 60;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  int depth = 12;
  int balance_depth = 40;
};

struct VerifyResult {
  Json report;
  bool certified = false;
};

VerifyResult run_verify(const TileContext& ctx, const VerifyOptions& opts);

/// kind,translate,address,arch_1..arch_n,surrogate,radius. F and G
/// addresses are digit indices joined by '.', SRS addresses are `k:z_1 ... z_n`.
void write_csv(std::ostream& out, const std::vector<TileCloud>& clouds);

struct CsvRow {
  std::string kind, translate, address;
  std::vector<double> arch;
  double surrogate = 0;
  double radius = 0;
};

std::vector<CsvRow> read_csv(std::istream& in);

/// Recomputes the archimedean coordinates of a row from its translate and
/// address alone.
std::vector<double> evaluate_row(const TileContext& ctx, const CsvRow& row);

struct SvgLayer {
  std::string cls;              // tile, slice, ...
  std::string label;
  std::size_t color = 0;        // palette index
  std::vector<double> xy;       // plane coordinates, two per point
  std::vector<double> bbox;     // data bounding box: x0 y0 x1 y1
  double dx = 0, dy = 0;        // panel offset
};

/// Plane coordinates of a cloud: (arch, surrogate) for degree 1, (arch_1,
/// arch_2) otherwise.
SvgLayer cloud_layer(const TileCloud& cloud, std::string cls, std::string label, std::size_t color);

std::string render_svg(const std::vector<SvgLayer>& layers, const std::string& title);

struct Figure {
  std::string name;  // file stem
  std::string svg;
  std::vector<SvgLayer> layers;
};

/// ex1: translates of F for alpha = 3/2. ex2: slice tower and intersective
/// tiles, plus G(0) against G(2^k). ex3: alpha = 4/3 with G(x) strip.
std::vector<Figure> make_figures(std::string_view which, int depth = -1);

}  // namespace ratile
