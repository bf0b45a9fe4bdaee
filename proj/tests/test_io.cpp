#include <omp.h>

#include <cmath>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "ratile/io.hpp"

using namespace ratile;

namespace {

TileContext context(std::string_view name) {
  auto p = parse_problem(builtin_problem(name));
  return TileContext(p.spec, p.D);
}

void check_round_trip(const TileContext& ctx, const std::vector<TileCloud>& clouds) {
  std::ostringstream out;
  write_csv(out, clouds);
  std::istringstream in(out.str());
  const auto rows = read_csv(in);
  std::size_t total = 0;
  for (const auto& c : clouds) total += c.size();
  REQUIRE(rows.size() == total);
  double worst = 0;
  for (const auto& r : rows) {
    const auto a = evaluate_row(ctx, r);
    REQUIRE(a.size() == r.arch.size());
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - r.arch[i]));
  }
  CHECK(worst <= 1e-9);
}

}  // namespace

TEST_CASE("problem files") {
  auto p = parse_problem(builtin_problem("four_thirds"));
  CHECK(p.D.m == 1);
  CHECK(p.D.is_standard);
  auto q = parse_problem(Json{{"coefficients", {-3, 2}}, {"digits", {"0", "2", "4"}}, {"m_override", 0},
                              {"limits", {{"node_cap", 5000}}}});
  CHECK(q.D.m == 0);
  CHECK(q.D.m_overridden);
  CHECK(q.limits.node_cap == 5000);

  auto field_of = [](const Json& j) {
    try {
      parse_problem(j);
    } catch (const Error& e) {
      CHECK(exit_code(e) == 2);
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(field_of(Json{{"digits", {"0"}}}).find("'coefficients'") != std::string::npos);
  CHECK(field_of(Json{{"coefficients", {-3, 2}}, {"digits", {"0", "1", "3"}}}).find("'digits'") != std::string::npos);
  CHECK(field_of(Json{{"coefficients", {-3, 2}}, {"digits", {"0", "1", "1"}}}).find("'digits'") != std::string::npos);
  CHECK(field_of(Json{{"coefficients", {1, 2}}, {"digits", {"0"}}}).find("'coefficients'") != std::string::npos);
  CHECK(field_of(Json{{"coefficients", {-3, 2}}, {"digits", {"0", "1", "2"}}, {"m_override", "x"}})
            .find("'m_override'") != std::string::npos);
  CHECK(field_of(Json{{"coefficients", {-3, 2}}, {"digits", {"0", "1", "2"}}, {"limits", {{"node_cap", -1}}}})
            .find("limits.node_cap") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(exit_code(Error(ErrorKind::NotExpanding, "")) == 2);
  CHECK(exit_code(Error(ErrorKind::BudgetExceeded, "")) == 3);
  CHECK(exit_code(Error(ErrorKind::IndexLawViolation, "")) == 4);
  CHECK(exit_code(Error(ErrorKind::Internal, "")) == 4);
}

TEST_CASE("analyze reports") {
  auto r = analyze_report(parse_problem(builtin_problem("ex1")));
  CHECK(r["expanding"]["verdict"] == true);
  CHECK(r["digits"]["standard"] == true);
  CHECK(r["primitivity"]["status"] == "primitive");
  CHECK(r["lambda"].size() == 3);
  CHECK(r["lambda"][2]["basis"] == Json::array({"2"}));
  CHECK(r["lambda"][2]["matrix"] == Json::array({Json::array({2})}));

  auto r2 = analyze_report(parse_problem(builtin_problem("ex2")));
  CHECK(r2["lambda"][2]["denominator"] == 1);
  CHECK(r2["lambda"][2]["determinant"] == "4");

  auto r3 = analyze_report(parse_problem(builtin_problem("four_thirds")));
  CHECK(r3["digits"]["m"] == 1);
  CHECK(r3["lambda"][2]["determinant"] == "1");
  CHECK(r3["digits"]["has_residue_system"] == false);
}

TEST_CASE("CSV round trip") {
  auto ex1 = context("ex1");
  check_round_trip(ex1, {approximate_F(ex1, 6, LaurentElem::parse("3*a - 3")), approximate_G(ex1, LaurentElem::parse("4"), 14),
                         approximate_G(ex1, LaurentElem::parse("-2"), 5)});
  auto ex2 = context("ex2");
  check_round_trip(ex2, {approximate_F(ex2, 7), approximate_G(ex2, LaurentElem::parse("2*a + 2"), 12)});
  check_round_trip(ex2, {approximate_srs_tile(srs_param(ex2.spec), {1, -1}, 8)});
  auto ft = context("four_thirds");
  check_round_trip(ft, {approximate_F(ft, 5, LaurentElem::parse("-6")), approximate_G(ft, LaurentElem::parse("0"), 12)});
}

TEST_CASE("CSV rows are canonical and thread independent") {
  auto ex2 = context("ex2");
  auto csv = [&](int threads) {
    omp_set_num_threads(threads);
    std::ostringstream out;
    write_csv(out, {approximate_F(ex2, 6), approximate_G(ex2, LaurentElem::parse("4"), 14)});
    return out.str();
  };
  const auto a = csv(1), b = csv(4);
  omp_set_num_threads(omp_get_num_procs());
  CHECK(a == b);
}

TEST_CASE("verify reports are thread independent") {
  auto ex1 = context("ex1");
  VerifyOptions o;
  o.samples = 3000;
  o.balance_depth = 20;
  omp_set_num_threads(1);
  auto a = run_verify(ex1, o);
  omp_set_num_threads(4);
  auto b = run_verify(ex1, o);
  omp_set_num_threads(omp_get_num_procs());
  CHECK(a.certified);
  CHECK(a.report.dump() == b.report.dump());
  CHECK(a.report["certificate"]["z"] == "4");
  CHECK(a.report["multiplicity"]["mode"] == 1);
  CHECK(a.report["seed"] == 1);
}

TEST_CASE("SVG layers") {
  auto ex1 = context("ex1");
  auto cloud = approximate_F(ex1, 5, LaurentElem::parse("2"));
  auto layer = cloud_layer(cloud, "tile", "2", 0);
  CHECK(layer.xy.size() == 2 * cloud.size());
  REQUIRE(layer.bbox.size() == 4);
  CHECK(layer.bbox[0] >= 2.0 - 1e-12);
  CHECK(layer.bbox[2] <= 2.0 + 4.0);
  auto svg = render_svg({layer, cloud_layer(approximate_G(ex1, LaurentElem::parse("1"), 5), "tile", "1", 1)}, "t");
  std::regex group("<g class=\"tile\" data-label=\"([^\"]*)\" data-points=\"(\\d+)\"");
  std::vector<std::string> labels, points;
  for (std::sregex_iterator it(svg.begin(), svg.end(), group), end; it != end; ++it) {
    labels.push_back((*it)[1]);
    points.push_back((*it)[2]);
  }
  CHECK(labels == std::vector<std::string>{"2", "1"});
  CHECK(points == std::vector<std::string>{std::to_string(cloud.size()), "0"});
  CHECK(svg == render_svg({layer, cloud_layer(approximate_G(ex1, LaurentElem::parse("1"), 5), "tile", "1", 1)}, "t"));
}
