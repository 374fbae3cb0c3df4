#include <doctest.h>

#include <regex>
#include <stdexcept>

#include "gasket/error.hpp"
#include "gasket/exact.hpp"
#include "gasket/harness.hpp"
#include "gasket/io.hpp"

using namespace gasket;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

errc code_of(const RunConfig& c) {
  try {
    validate(c);
  } catch (const error& e) {
    return e.code();
  }
  return errc::invalid_argument;
}

}  // namespace

TEST_CASE("command and format names round-trip") {
  for (const Command c : {Command::exact, Command::mc_shapes, Command::mc_length, Command::limit_path,
                          Command::dimension, Command::moments}) {
    CHECK(parse_command(to_string(c)) == c);
  }
  for (const OutputFormat f : {OutputFormat::json, OutputFormat::csv, OutputFormat::svg}) {
    CHECK(parse_format(to_string(f)) == f);
  }
  CHECK_THROWS_AS(parse_command("mc_shapes"), error);
  CHECK_THROWS_AS(parse_format("png"), error);
}

TEST_CASE("invalid configurations are rejected") {
  RunConfig c;
  c.samples = 0;
  CHECK(code_of(c) == errc::config_invalid);
  c = RunConfig{};
  c.threads = 0;
  CHECK(code_of(c) == errc::config_invalid);
  c = RunConfig{};
  c.format = OutputFormat::svg;
  CHECK(code_of(c) == errc::config_invalid);
  c = RunConfig{};
  c.command = Command::mc_shapes;
  c.level = 0;
  CHECK(code_of(c) == errc::config_invalid);
  c = RunConfig{};
  c.command = Command::dimension;
  c.depth = 5;
  CHECK(code_of(c) == errc::config_invalid);
  c.depth = 6;
  CHECK_NOTHROW(validate(c));
  CHECK_THROWS_AS(run(RunConfig{.command = Command::moments, .level = 1}), error);
}

TEST_CASE("replicate is independent of the thread count") {
  const std::function<std::uint64_t(Rng&, int)> draw = [](Rng& rng, int) { return rng(); };
  const auto one = replicate(37, 5, 1, draw);
  CHECK(replicate(37, 5, 4, draw) == one);
  CHECK(replicate(37, 5, 64, draw) == one);
  CHECK(replicate(37, 6, 1, draw) != one);

  const std::function<int(Rng&, int)> boom = [](Rng&, int k) {
    if (k == 11) throw std::runtime_error("replica failed");
    return k;
  };
  CHECK_THROWS_AS(replicate(20, 1, 3, boom), std::runtime_error);
}

TEST_CASE("reports embed build and config and are reproducible") {
  RunConfig c;
  c.command = Command::mc_shapes;
  c.level = 2;
  c.samples = 300;
  c.seed = 77;
  c.threads = 1;
  const RunResult a = run(c);
  c.threads = 3;
  const RunResult b = run(c);
  CHECK(a.document == b.document);
  CHECK(a.report["build"] == build_id());
  CHECK(a.report["config"]["command"] == "mc-shapes");
  CHECK(a.report["config"]["seed"] == 77);
  std::uint64_t total = 0;
  for (const auto& cell : a.report["cells"]) total += cell["count"].get<std::uint64_t>();
  CHECK(total == 300);
  const double p = a.report["chi_square"]["p_value"];
  CHECK(p >= 0.0);
  CHECK(p <= 1.0);

  c.seed = 78;
  CHECK(run(c).document != a.document);
}

TEST_CASE("exact report") {
  const RunResult r = run(RunConfig{});
  const auto& j = r.report;
  CHECK(j["shapes"].size() == 10);
  CHECK(j["kernels"]["type1"].size() == 7);
  CHECK(j["kernels"]["type2"].size() == 10);
  CHECK(j["lambda"].get<std::string>().rfind("2.28785473755", 0) == 0);
  CHECK(j["dim"].get<std::string>().rfind("1.1939954541", 0) == 0);
  CHECK(j["phi"]["2,0"] == "1/2");
  CHECK(j["mean_matrix"][1][0] == "26/15");
  CHECK(nlohmann::json::parse(r.document) == j);

  RunConfig csv;
  csv.format = OutputFormat::csv;
  const std::string doc = run(csv).document;
  CHECK(doc.rfind("id,s1,s2,p_direct,p_via,path\n", 0) == 0);
  CHECK(count_of(doc, "\n") == 11);
}

TEST_CASE("level-1 shape frequencies pass against the exact table") {
  RunConfig c;
  c.command = Command::mc_shapes;
  c.level = 1;
  c.samples = 20000;
  c.seed = 3;
  c.threads = 2;
  const RunResult r = run(c);
  INFO(r.report.dump());
  CHECK(r.passed);
  CHECK(r.report["acceptance"]["expected"] == 0.25);
}

TEST_CASE("length runs report the predicted mean") {
  RunConfig c;
  c.command = Command::mc_length;
  c.level = 2;
  c.samples = 2000;
  c.format = OutputFormat::csv;
  const RunResult r = run(c);
  CHECK(r.passed);
  const Matrix2 m2 = mean_matrix(reference_offspring_laws()).pow(2);
  const double predicted = (m2.a[0][0] + 2 * m2.a[0][1]).convert_to<double>();
  CHECK(r.report["erased_length_predicted_mean"].get<double>() == doctest::Approx(predicted));
  CHECK(r.document.rfind("sample,walk_length,erased_length,scaled_length\n", 0) == 0);
  CHECK(count_of(r.document, "\n") == 2001);
}

TEST_CASE("svg output") {
  SUBCASE("depth-0 limit path is one segment from O to the apex") {
    RunConfig c;
    c.command = Command::limit_path;
    c.format = OutputFormat::svg;
    const std::string doc = run(c).document;
    CHECK(count_of(doc, "<polyline") == 1);
    std::smatch m;
    REQUIRE(std::regex_search(doc, m, std::regex("points=\"([^\"]*)\"")));
    CHECK(count_of(m[1].str(), " ") == 1);
    CHECK(run(c).document == doc);
  }
  SUBCASE("backdrop at N = 3 has 2*3^3 triangles") {
    const Path w{origin, Coord{1, 0}, Coord{0, 1}};
    const std::string doc = io::lattice_path_svg(w, io::SvgStyle{3});
    CHECK(count_of(doc, "<polygon") == 54);
    CHECK(count_of(io::lattice_path_svg(w), "<polygon") == 0);
    CHECK(io::lattice_path_svg(w, io::SvgStyle{3}) == doc);
  }
  CHECK_THROWS_AS(io::lattice_path_svg(Path{}), error);
}

TEST_CASE("csv writers") {
  CHECK(io::path_csv({origin, Coord{1, 0}}) == "step,i,j\n0,0,0\n1,1,0\n");
  RunConfig c;
  c.command = Command::limit_path;
  c.depth = 4;
  c.format = OutputFormat::csv;
  const std::string doc = run(c).document;
  CHECK(doc.rfind("t,x,y\n0,0,0\n", 0) == 0);
  CHECK(doc.find("0.5,0.866025403784439\n") != std::string::npos);
}

TEST_CASE("output file names") {
  RunConfig c;
  c.output = "runs/a";
  c.format = OutputFormat::csv;
  CHECK(output_filename(c) == "runs/a.csv");
  CHECK_THROWS_AS(io::write_file("/nonexistent-dir/x.json", "{}"), error);
}

TEST_CASE("level-2 coarse shapes follow the level-1 table") {
  RunConfig c;
  c.command = Command::mc_shapes;
  c.level = 2;
  c.samples = 4000;
  c.seed = 12;
  const RunResult r = run(c);
  INFO(r.report.dump());
  CHECK(r.passed);
}
