#include "ratile/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace ratile {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string join_ints(const std::int64_t* v, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::InvalidInput, "field '" + field + "': " + why);
}

std::string rational_string(const Rational& q) { return q.get_str(); }

Json strings(const std::vector<LaurentElem>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(x.to_string());
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string color_hex(std::size_t index) {
  // golden-angle hues, fixed saturation and lightness
  const double h = std::fmod(static_cast<double>(index) * 137.50776405, 360.0) / 60.0;
  const double s = 0.65, l = 0.5;
  const double c = (1 - std::abs(2 * l - 1)) * s;
  const double x = c * (1 - std::abs(std::fmod(h, 2.0) - 1));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(h)) {
    case 0: r = c, g = x; break;
    case 1: r = x, g = c; break;
    case 2: g = c, b = x; break;
    case 3: g = x, b = c; break;
    case 4: r = x, b = c; break;
    default: r = c, b = x;
  }
  const double m = l - c / 2;
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround((r + m) * 255)),
                static_cast<int>(std::lround((g + m) * 255)), static_cast<int>(std::lround((b + m) * 255)));
  return buf;
}

std::vector<double> bbox_of(const std::vector<double>& xy) {
  if (xy.empty()) return {};
  double x0 = xy[0], y0 = xy[1], x1 = xy[0], y1 = xy[1];
  for (std::size_t i = 0; i < xy.size(); i += 2) {
    x0 = std::min(x0, xy[i]);
    x1 = std::max(x1, xy[i]);
    y0 = std::min(y0, xy[i + 1]);
    y1 = std::max(y1, xy[i + 1]);
  }
  return {x0, y0, x1, y1};
}

TileContext context_of(std::string_view name) {
  auto p = parse_problem(builtin_problem(name));
  return TileContext(p.spec, p.D);
}

}  // namespace

Problem parse_problem(const Json& j) {
  if (!j.is_object()) bad_field("(root)", "expected an object");
  if (!j.contains("coefficients") || !j["coefficients"].is_array()) bad_field("coefficients", "expected an integer list");
  std::vector<long long> coeffs;
  for (const auto& c : j["coefficients"]) {
    if (!c.is_number_integer()) bad_field("coefficients", "expected integers");
    coeffs.push_back(c.get<long long>());
  }
  if (!j.contains("digits") || !j["digits"].is_array()) bad_field("digits", "expected a list of strings");
  std::vector<LaurentElem> raw;
  for (const auto& d : j["digits"]) {
    if (d.is_string()) {
      try {
        raw.push_back(LaurentElem::parse(d.get<std::string>()));
      } catch (const Error& e) {
        bad_field("digits", e.what());
      }
    } else if (d.is_number_integer()) {
      raw.push_back(LaurentElem::constant(Integer(static_cast<long>(d.get<long long>()))));
    } else {
      bad_field("digits", "expected strings");
    }
  }
  std::optional<int> m_override;
  if (j.contains("m_override") && !j["m_override"].is_null()) {
    if (!j["m_override"].is_number_integer()) bad_field("m_override", "expected an integer");
    m_override = j["m_override"].get<int>();
  }
  Limits limits;
  if (j.contains("limits")) {
    const auto& l = j["limits"];
    if (!l.is_object()) bad_field("limits", "expected an object");
    for (auto [key, target] : {std::pair{"max_addresses", &limits.max_addresses}, std::pair{"node_cap", &limits.node_cap}}) {
      if (!l.contains(key)) continue;
      if (!l[key].is_number_integer() || l[key].get<long long>() <= 0)
        bad_field(std::string("limits.") + key, "expected a positive integer");
      *target = static_cast<std::size_t>(l[key].get<long long>());
    }
  }

  Problem p;
  try {
    p.spec = validate_spec(coeffs);
  } catch (const Error& e) {
    if (e.is_input_error()) throw Error(e.kind(), std::string("field 'coefficients': ") + e.what());
    throw;
  }
  try {
    p.D = validate_digits(p.spec, raw, m_override);
  } catch (const Error& e) {
    if (e.is_input_error()) throw Error(e.kind(), std::string("field 'digits': ") + e.what());
    throw;
  }
  if (!p.D.is_standard) bad_field("digits", "not a standard digit set");
  p.limits = limits;
  return p;
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
  }
  return parse_problem(j);
}

Json builtin_problem(std::string_view name) {
  if (name == "ex1") return {{"coefficients", {-3, 2}}, {"digits", {"0", "1", "2"}}};
  if (name == "ex2") return {{"coefficients", {3, 2, 2}}, {"digits", {"0", "1", "2"}}};
  if (name == "four_thirds") return {{"coefficients", {-4, 3}}, {"digits", {"0", "1", "2", "a - 1"}}};
  if (name == "ex1_024") return {{"coefficients", {-3, 2}}, {"digits", {"0", "2", "4"}}};
  throw Error(ErrorKind::InvalidInput, "unknown problem " + std::string(name));
}

int exit_code(const Error& e) {
  if (e.is_input_error()) return 2;
  switch (e.kind()) {
    case ErrorKind::BudgetExceeded:
    case ErrorKind::DepthTooLarge:
    case ErrorKind::BoundExceeded:
    case ErrorKind::NoConvergence:
      return 3;
    default:
      return 4;
  }
}

Json integer_json(const Integer& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

Json lattice_json(const LatticeHNF& L) {
  Json matrix = Json::array();
  for (const auto& row : L.hnf) {
    Json r = Json::array();
    for (const auto& c : row) r.push_back(integer_json(c));
    matrix.push_back(r);
  }
  return {{"label", to_string(L.label)},
          {"m", L.m},
          {"heuristic", L.heuristic},
          {"denominator", integer_json(L.denominator)},
          {"matrix", matrix},
          {"basis", strings(L.laurent)},
          {"determinant", rational_string(L.determinant())}};
}

Json analyze_report(const Problem& p) {
  Json out;
  out["polynomial"] = {{"coefficients", p.spec.coeffs},
                       {"degree", p.spec.degree},
                       {"irreducibility", p.spec.irreducibility == IrreducibilityStatus::verified ? "verified" : "asserted"}};
  const auto ex = expanding_report(p.spec.coeffs);
  Json table = Json::array();
  for (const auto& s : ex.table)
    table.push_back({{"degree", s.degree}, {"leading", integer_json(s.leading)}, {"constant", integer_json(s.constant)}});
  out["expanding"] = {{"verdict", ex.expanding}, {"sufficient_condition", ex.sufficient_condition}, {"schur_cohn", table}};

  const auto emb = compute_embeddings(p.spec);
  Json complex = Json::array();
  for (const auto& z : emb.complex_roots) complex.push_back({z.real(), z.imag()});
  out["embeddings"] = {{"real", emb.real_roots}, {"complex", complex}, {"min_modulus", emb.contraction}};

  Json residues = Json::array();
  for (const auto& r : p.D.residues) residues.push_back(integer_json(r));
  out["digits"] = {{"raw", strings(p.D.raw)},
                   {"normalized", strings(p.D.digits)},
                   {"shift", p.D.shift ? Json(p.D.shift->to_string()) : Json(nullptr)},
                   {"residues", residues},
                   {"standard", p.D.is_standard},
                   {"has_residue_system", p.D.has_residue_system},
                   {"m", p.D.m},
                   {"minimal_m", p.D.minimal_m},
                   {"m_overridden", p.D.m_overridden}};

  Json lambdas = Json::array();
  for (int m = p.D.m - 2; m <= p.D.m; ++m) lambdas.push_back(lattice_json(lambda_basis(p.spec, m)));
  out["lambda"] = lambdas;

  const auto closure = check_primitivity(p.spec, p.D.digits);
  Json cert = Json::array();
  for (const auto& t : closure.certificate)
    cert.push_back({{"power", t.power}, {"hi", t.hi}, {"lo", t.lo}, {"coeff", integer_json(t.coeff)}});
  out["primitivity"] = {{"status", closure.primitive ? "primitive" : "unknown"},
                        {"rounds", closure.rounds_used},
                        {"cap", closure.cap},
                        {"certificate", cert}};

  const auto lambda = lambda_basis(p.spec, p.D.m);
  const auto translates = closure.primitive ? lambda : z_cap_lambda(p.spec, p.D.digits, p.D.m, closure);
  out["translates"] = lattice_json(translates);
  out["multiplicity_hint"] = {{"translate_index", rational_string(translates.determinant() / lambda.determinant())},
                              {"simple_tiling_expected", closure.primitive}};
  return out;
}

Json certificate_json(const TilingCertificate& cert) {
  Json orbits = Json::array();
  for (const auto& o : cert.orbits) orbits.push_back(strings(o));
  return {{"found", cert.found},
          {"z", cert.z.to_string()},
          {"k", cert.k},
          {"Y", strings(cert.Y)},
          {"orbits", orbits},
          {"candidates", cert.candidates}};
}

Json multiplicity_json(const MultiplicityReport& rep) {
  Json hist = Json::object();
  for (const auto& [m, f] : rep.histogram) hist[std::to_string(m)] = f;
  return {{"samples", rep.samples},
          {"depth", rep.depth},
          {"seed", rep.seed},
          {"window", {{"lo", rep.lo}, {"hi", rep.hi}}},
          {"translates", rep.translates},
          {"outer", rep.outer},
          {"histogram", hist},
          {"mode", rep.mode},
          {"mode_fraction", rep.mode_fraction},
          {"mean", rep.mean}};
}

VerifyResult run_verify(const TileContext& ctx, const VerifyOptions& opts) {
  VerifyResult res;
  Json cert;
  try {
    const auto c = find_exclusive_point(ctx, opts.budget);
    cert = certificate_json(c);
    res.certified = c.found && check_certificate(ctx.spec, ctx.D, c);
    cert["checked"] = res.certified;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExceeded) throw;
    cert = {{"found", false}, {"reason", e.what()}};
  }
  const auto mult = estimate_multiplicity(ctx, opts.samples, opts.depth, opts.seed);
  const double balance = volume_balance(ctx, opts.samples, opts.balance_depth, opts.seed);
  res.report["certificate"] = cert;
  res.report["multiplicity"] = multiplicity_json(mult);
  res.report["volume_balance"] = {{"depth", opts.balance_depth}, {"samples", opts.samples}, {"ratio", balance}};
  res.report["seed"] = opts.seed;
  res.report["verdict"] = res.certified ? "tiling" : "inconclusive";
  return res;
}

void write_csv(std::ostream& out, const std::vector<TileCloud>& clouds) {
  int dim = 0;
  for (const auto& c : clouds) dim = std::max(dim, c.dim);
  out << "kind,translate,address";
  for (int i = 1; i <= dim; ++i) out << ",arch_" << i;
  out << ",surrogate,radius\n";
  for (const auto& c : clouds) {
    if (c.dim != dim) throw Error(ErrorKind::InvalidInput, "clouds of different dimension");
    std::string translate;
    if (c.kind == TileKind::SRS) {
      for (std::size_t i = 0; i < c.srs_translate.size(); ++i) translate += (i ? " " : "") + c.srs_translate[i].get_str();
    } else {
      translate = c.translate.to_string();
    }
    const std::string radius = num(c.cell_radius);
    for (std::size_t i = 0; i < c.size(); ++i) {
      out << to_string(c.kind) << ',' << translate << ',';
      if (c.kind == TileKind::SRS) {
        out << c.depth << ':' << join_ints(&c.lattice_coords[i * dim], dim);
      } else {
        for (int j = 0; j < c.depth; ++j) out << (j ? "." : "") << static_cast<int>(c.words[i * c.depth + j]);
      }
      for (int t = 0; t < dim; ++t) out << ',' << num(c.arch[i * dim + t]);
      out << ',' << num(c.surrogate[i]) << ',' << radius << '\n';
    }
  }
}

std::vector<CsvRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::InvalidInput, "empty CSV");
  const auto header = split(line, ',');
  if (header.size() < 5 || header[0] != "kind" || header[1] != "translate" || header[2] != "address")
    throw Error(ErrorKind::InvalidInput, "unexpected CSV header");
  const std::size_t dim = header.size() - 5;
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) throw Error(ErrorKind::InvalidInput, "CSV row with wrong field count");
    CsvRow r{f[0], f[1], f[2], {}, 0, 0};
    for (std::size_t t = 0; t < dim; ++t) r.arch.push_back(std::stod(f[3 + t]));
    r.surrogate = std::stod(f[3 + dim]);
    r.radius = std::stod(f[4 + dim]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<double> evaluate_row(const TileContext& ctx, const CsvRow& row) {
  if (row.kind == "SRS") {
    const auto colon = row.address.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::InvalidInput, "SRS address without depth");
    const int k = std::stoi(row.address.substr(0, colon));
    RatVec v;
    for (const auto& s : split(row.address.substr(colon + 1), ' ')) v.emplace_back(Integer(s));
    const auto p = srs_param(ctx.spec);
    for (int j = 0; j < k; ++j) v = apply_companion(p, v);
    std::vector<double> out;
    for (const auto& c : v) out.push_back(c.get_d());
    return out;
  }
  LaurentElem sum = LaurentElem::parse(row.translate);
  if (!row.address.empty()) {
    int j = 1;
    for (const auto& s : split(row.address, '.')) {
      const std::size_t d = std::stoul(s);
      if (d >= ctx.D.size()) throw Error(ErrorKind::InvalidInput, "digit index out of range");
      sum += ctx.D.digits[d].shifted(-j++);
    }
  }
  return embed_arch(ctx.K.from_laurent(sum), ctx.emb);
}

SvgLayer cloud_layer(const TileCloud& cloud, std::string cls, std::string label, std::size_t color) {
  SvgLayer layer;
  layer.cls = std::move(cls);
  layer.label = std::move(label);
  layer.color = color;
  layer.xy.reserve(cloud.size() * 2);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    layer.xy.push_back(cloud.arch[i * cloud.dim]);
    layer.xy.push_back(cloud.dim == 1 ? cloud.surrogate[i] : cloud.arch[i * cloud.dim + 1]);
  }
  layer.bbox = bbox_of(layer.xy);
  return layer;
}

std::string render_svg(const std::vector<SvgLayer>& layers, const std::string& title) {
  double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
  for (const auto& l : layers)
    for (std::size_t i = 0; i < l.xy.size(); i += 2) {
      x0 = std::min(x0, l.xy[i] + l.dx);
      x1 = std::max(x1, l.xy[i] + l.dx);
      y0 = std::min(y0, l.xy[i + 1] + l.dy);
      y1 = std::max(y1, l.xy[i + 1] + l.dy);
    }
  if (!(x0 <= x1)) x0 = y0 = 0, x1 = y1 = 1;
  const double width = 900, margin = 10;
  const double scale = width / std::max(x1 - x0, 1e-9);
  const double height = std::max((y1 - y0) * scale, 1.0);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << short_num(width + 2 * margin) << "\" height=\""
      << short_num(height + 2 * margin) << "\" viewBox=\"0 0 " << short_num(width + 2 * margin) << ' '
      << short_num(height + 2 * margin) << "\">\n";
  out << "<title>" << xml_escape(title) << "</title>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& l : layers) {
    out << "<g class=\"" << l.cls << "\" data-label=\"" << xml_escape(l.label) << "\" data-points=\"" << l.xy.size() / 2
        << "\" data-bbox=\"";
    for (std::size_t i = 0; i < l.bbox.size(); ++i) out << (i ? " " : "") << short_num(l.bbox[i]);
    out << "\" fill=\"" << color_hex(l.color) << "\">";
    // one square per occupied pixel
    std::set<std::pair<long, long>> pixels;
    for (std::size_t i = 0; i < l.xy.size(); i += 2) {
      const double X = margin + (l.xy[i] + l.dx - x0) * scale;
      const double Y = margin + (y1 - l.xy[i + 1] - l.dy) * scale;
      pixels.emplace(std::lround(X * 2), std::lround(Y * 2));
    }
    if (!pixels.empty()) {
      out << "<path d=\"";
      for (const auto& [X, Y] : pixels) out << 'M' << short_num(X / 2.0) << ' ' << short_num(Y / 2.0) << "h1.5v1.5h-1.5z";
      out << "\"/>";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::vector<Figure> make_figures(std::string_view which, int depth) {
  std::vector<Figure> figs;
  if (which == "ex1") {
    auto ctx = context_of("ex1");
    const int k = depth >= 0 ? depth : 8;
    const auto half = LaurentElem::parse("a - 1");
    Figure f{"fig1", "", {}};
    for (long x = -5; x <= 10; ++x) {
      const auto t = Integer(x) * half;
      f.layers.push_back(cloud_layer(approximate_F(ctx, k, t), "tile", t.to_string(), f.layers.size()));
    }
    f.svg = render_svg(f.layers, "F + x, alpha = 3/2, D = {0,1,2}");
    figs.push_back(std::move(f));
  } else if (which == "ex2") {
    auto ctx = context_of("ex2");
    const int k = depth >= 0 ? depth : 18;
    const double inf = std::numeric_limits<double>::infinity();
    const auto slices = slice_decomposition(ctx, k, -inf, inf, 3);
    Figure f{"fig2", "", {}};
    double tower_right = -inf;
    for (std::size_t i = 0; i < slices.size(); ++i) {
      const auto& s = slices[i];
      SvgLayer l = cloud_layer(s.cloud, "slice", s.x.to_string(), i);
      for (std::size_t p = 0; p < l.xy.size(); p += 2) {
        const double a1 = l.xy[p], a2 = l.xy[p + 1];
        l.xy[p] = a1 + 0.5 * a2;
        l.xy[p + 1] = 0.3 * a2 + 12.0 * s.height;
        tower_right = std::max(tower_right, l.xy[p]);
      }
      f.layers.push_back(std::move(l));
    }
    std::vector<SvgLayer> tiles;
    double tiles_left = inf;
    for (std::size_t i = 0; i < slices.size(); ++i) {
      const auto& s = slices[i];
      const auto shift = embed_arch(ctx.K.from_laurent(s.x), ctx.emb);
      TileCloud c = s.cloud;
      for (std::size_t p = 0; p < c.arch.size(); ++p) c.arch[p] += shift[p % shift.size()];
      tiles.push_back(cloud_layer(c, "tile", s.x.to_string(), i));
      if (!tiles.back().bbox.empty()) tiles_left = std::min(tiles_left, tiles.back().bbox[0]);
    }
    for (auto& l : tiles) {
      l.dx = tower_right - tiles_left + 2.0;
      f.layers.push_back(std::move(l));
    }
    f.svg = render_svg(f.layers, "slice tower of F and G(x), alpha^2 + alpha + 3/2 = 0, D = {0,1,2}");
    figs.push_back(std::move(f));

    const int k3 = depth >= 0 ? depth : 20;
    Figure g{"fig3", "", {}};
    const double step = 1.3 * std::max(ctx.bounds.hi[0] - ctx.bounds.lo[0], ctx.bounds.hi[1] - ctx.bounds.lo[1]);
    for (int j = 0; j <= 9; ++j) {
      const auto x = j == 0 ? LaurentElem() : LaurentElem::constant(Integer(1) << j);
      TileCloud c = approximate_G(ctx, x, k3);
      const auto shift = embed_arch(ctx.K.from_laurent(x), ctx.emb);
      for (std::size_t p = 0; p < c.arch.size(); ++p) c.arch[p] -= shift[p % shift.size()];
      SvgLayer l = cloud_layer(c, "shape", x.to_string(), static_cast<std::size_t>(j));
      l.dx = step * (j % 5);
      l.dy = -step * (j / 5);
      g.layers.push_back(std::move(l));
    }
    g.svg = render_svg(g.layers, "G(x) - x for x = 0 and x = 2^k");
    figs.push_back(std::move(g));
  } else if (which == "ex3") {
    auto ctx = context_of("four_thirds");
    const int k = depth >= 0 ? depth : 6;
    Figure f{"fig4", "", {}};
    std::vector<SvgLayer> strip;
    for (long x = -6; x <= 3; ++x) {
      const auto t = LaurentElem::constant(Integer(x));
      const std::size_t color = f.layers.size();
      f.layers.push_back(cloud_layer(approximate_F(ctx, k, t), "tile", t.to_string(), color));
      TileCloud g = approximate_G(ctx, t, 2 * k + 4);
      SvgLayer l = cloud_layer(g, "gtile", t.to_string(), color);
      l.dy = -0.4;
      strip.push_back(std::move(l));
    }
    for (auto& l : strip) f.layers.push_back(std::move(l));
    f.svg = render_svg(f.layers, "F + x and G(x), alpha = 4/3, D = {0,1,2,1/3}");
    figs.push_back(std::move(f));
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown figure " + std::string(which));
  }
  return figs;
}

}  // namespace ratile
