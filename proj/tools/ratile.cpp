#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ratile/io.hpp"

using namespace ratile;

namespace {

IntVec parse_vector(const std::string& s) {
  IntVec v;
  std::string t = s;
  for (char& c : t)
    if (c == ',') c = ' ';
  std::istringstream in(t);
  std::string tok;
  while (in >> tok) {
    Integer x;
    if (x.set_str(tok, 10) != 0) throw Error(ErrorKind::InvalidInput, "bad integer '" + tok + "' in translate");
    v.push_back(x);
  }
  return v;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational self-affine tiles, intersective tiles and SRS tiles"};
  app.require_subcommand(1);

  std::string problem_path, out_path;

  auto* analyze = app.add_subcommand("analyze", "Report on a problem file");
  analyze->add_option("problem", problem_path, "Problem JSON")->required();
  analyze->add_option("--out", out_path, "Output file");

  std::string kind = "F", format = "csv";
  std::vector<std::string> translates;
  int depth = 8;
  auto* tile = app.add_subcommand("tile", "Point cloud of F, G(x) or an SRS tile");
  tile->add_option("problem", problem_path, "Problem JSON")->required();
  tile->add_option("--kind", kind, "F, G or srs")->check(CLI::IsMember({"F", "G", "srs"}));
  tile->add_option("--translate", translates, "Laurent element (F, G) or integer vector (srs); repeatable");
  tile->add_option("--depth", depth, "Depth")->check(CLI::NonNegativeNumber);
  tile->add_option("--format", format, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));
  tile->add_option("--out", out_path, "Output file");

  VerifyOptions vopts;
  auto* verify = app.add_subcommand("verify", "Tiling certificate, multiplicity and volume balance");
  verify->add_option("problem", problem_path, "Problem JSON")->required();
  verify->add_option("--budget", vopts.budget, "Certificate search budget in seconds");
  verify->add_option("--samples", vopts.samples, "Monte Carlo samples");
  verify->add_option("--seed", vopts.seed, "Seed");
  verify->add_option("--depth", vopts.depth, "Depth of the multiplicity approximations");
  verify->add_option("--balance-depth", vopts.balance_depth, "Depth of the volume balance approximations");
  verify->add_option("--out", out_path, "Output file");

  std::string which, out_dir = ".";
  int fig_depth = -1;
  auto* figure = app.add_subcommand("figure", "Write the reference figures as SVG");
  figure->add_option("which", which, "ex1, ex2 or ex3")->required()->check(CLI::IsMember({"ex1", "ex2", "ex3"}));
  figure->add_option("--out", out_dir, "Output directory");
  figure->add_option("--depth", fig_depth, "Depth override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    apply_thread_limit();
    if (*analyze) {
      emit(out_path, analyze_report(load_problem(problem_path)).dump(2) + "\n");
    } else if (*tile) {
      const Problem p = load_problem(problem_path);
      const TileContext ctx(p.spec, p.D);
      if (translates.empty()) translates.push_back(kind == "srs" ? std::string(p.spec.degree, '0') : "0");
      std::vector<TileCloud> clouds;
      for (const auto& t : translates) {
        if (kind == "F") {
          clouds.push_back(approximate_F(ctx, depth, LaurentElem::parse(t), false, true, p.limits.max_addresses));
        } else if (kind == "G") {
          GOptions o;
          o.node_cap = p.limits.node_cap;
          clouds.push_back(approximate_G(ctx, LaurentElem::parse(t), depth, o));
        } else {
          auto z = parse_vector(t);
          if (static_cast<int>(z.size()) != p.spec.degree)
            throw Error(ErrorKind::InvalidInput, "SRS translate needs " + std::to_string(p.spec.degree) + " entries");
          clouds.push_back(approximate_srs_tile(srs_param(p.spec), z, depth, p.limits.node_cap));
        }
      }
      if (format == "csv") {
        std::ostringstream out;
        write_csv(out, clouds);
        emit(out_path, out.str());
      } else {
        std::vector<SvgLayer> layers;
        for (std::size_t i = 0; i < clouds.size(); ++i) layers.push_back(cloud_layer(clouds[i], "tile", translates[i], i));
        emit(out_path, render_svg(layers, kind + " tiles"));
      }
    } else if (*verify) {
      const Problem p = load_problem(problem_path);
      const TileContext ctx(p.spec, p.D);
      const auto res = run_verify(ctx, vopts);
      emit(out_path, res.report.dump(2) + "\n");
      return res.certified ? 0 : 3;
    } else if (*figure) {
      std::filesystem::create_directories(out_dir);
      for (const auto& f : make_figures(which, fig_depth)) {
        const auto path = (std::filesystem::path(out_dir) / (f.name + ".svg")).string();
        emit(path, f.svg);
        std::cerr << path << ": " << f.layers.size() << " layers\n";
      }
    }
  } catch (const Error& e) {
    std::cerr << "ratile: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "ratile: internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
