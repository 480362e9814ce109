#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "jsrec/combinatorics.hpp"
#include "jsrec/errors.hpp"
#include "jsrec/experiment.hpp"
#include "jsrec/plot.hpp"

using namespace jsrec;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "jsrec_test" / name;
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing round-trips and rejects junk") {
  const std::string text = R"({
    "schema_version": 1,
    "kind": "cnd_table",
    "n_max": 6,
    "d_max": 6,
    "output_dir": "unused"
  })";
  const ExperimentConfig cfg = ExperimentConfig::from_json_text(text);
  CHECK(cfg.kind == ExperimentKind::CndTable);
  CHECK(cfg.n_max == 6);

  // The echo parses back to the same canonical echo.
  const ExperimentConfig back = ExperimentConfig::from_json_text(cfg.to_json_text());
  CHECK(back.to_json_text() == cfg.to_json_text());

  CHECK_THROWS_AS(ExperimentConfig::from_json_text("{\"kind\": \"cnd_table\"}"), Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(
                      R"({"schema_version": 1, "kind": "cnd_table", "bogus": 3})"),
                  Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(
                      R"({"schema_version": 1, "kind": "no_such_kind"})"),
                  Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(
                      R"({"schema_version": 1, "kind": "boosted", "trials": 0})"),
                  Error);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(
                      R"({"schema_version": 1, "kind": "boosted", "s_values": [99], "n": 10})"),
                  Error);
  CHECK_THROWS_AS(
      ExperimentConfig::from_json_text(
          R"({"schema_version": 1, "kind": "boosted", "tolerances": {"nope": 1}})"),
      Error);
}

TEST_CASE("cnd_table experiment emits the exact table") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::CndTable;
  cfg.n_max = 5;
  cfg.d_max = 5;
  cfg.output_dir = temp_dir("cnd").string();
  const ExperimentOutcome out = run_experiment(cfg);
  CHECK(out.rows.size() == 25);
  // spot checks against the closed form
  for (const auto& row : out.rows) {
    const int n = std::stoi(row.cells[0].second);
    const int d = std::stoi(row.cells[1].second);
    CHECK(row.cells[2].second == cnd(n, d).to_string());
  }
  CHECK(std::filesystem::exists(cfg.output_dir + "/results.csv"));
  CHECK(std::filesystem::exists(cfg.output_dir + "/config.echo.json"));
  CHECK(std::filesystem::exists(cfg.output_dir + "/plot.svg"));
}

TEST_CASE("experiments are byte-identical across reruns") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::SmvSweep;
  cfg.m = 6;
  cfg.n = 16;
  cfg.s_values = {1, 2, 3};
  cfg.trials = 40;
  cfg.seed = 404;

  cfg.output_dir = temp_dir("smv_a").string();
  run_experiment(cfg);
  const std::string csv_a = slurp(cfg.output_dir + "/results.csv");
  const std::string svg_a = slurp(cfg.output_dir + "/plot.svg");

  cfg.output_dir = temp_dir("smv_b").string();
  run_experiment(cfg);
  CHECK(slurp(cfg.output_dir + "/results.csv") == csv_a);
  CHECK(slurp(cfg.output_dir + "/plot.svg") == svg_a);

  // header plus one row per sparsity level; every rate carries a ci column
  std::istringstream is(csv_a);
  std::string header;
  std::getline(is, header);
  CHECK(header == "method,s,r,empirical_rate,trials,ci_halfwidth");
}

TEST_CASE("boosted experiment matches its own model with the cache") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Boosted;
  cfg.m = 8;
  cfg.n = 20;
  cfg.s_values = {3};
  cfg.r_values = {1, 2, 4};
  cfg.trials = 150;
  cfg.seed = 11;
  cfg.output_dir = temp_dir("boosted").string();
  const ExperimentOutcome out = run_experiment(cfg);
  REQUIRE(out.rows.size() == 6);  // boosted + l11 per r
  for (const auto& row : out.rows) {
    const double emp = std::stod(row.cells[3].second);
    const double model = std::stod(row.cells[4].second);
    const double sigma = std::stod(row.cells[6].second) / 1.96;
    CHECK(std::abs(emp - model) <= std::max(3.0 * sigma, 0.12));
  }
}

TEST_CASE("l11 rows decay with r while boosted rows climb") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Boosted;
  cfg.m = 8;
  cfg.n = 20;
  cfg.s_values = {3};
  cfg.r_values = {1, 2, 4, 8};
  cfg.trials = 200;
  cfg.seed = 19;
  cfg.output_dir = temp_dir("boosted_decay").string();
  const ExperimentOutcome out = run_experiment(cfg);
  double prev_boost = -1.0, prev_l11 = 2.0;
  for (const auto& row : out.rows) {
    const double model = std::stod(row.cells[4].second);
    if (row.cells[0].second == "boosted") {
      CHECK(model >= prev_boost - 1e-12);
      prev_boost = model;
    } else {
      CHECK(model <= prev_l11 + 1e-12);
      prev_l11 = model;
    }
  }
}

TEST_CASE("rembo experiment stays within the elimination-model band") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Rembo;
  cfg.m = 8;
  cfg.n = 20;
  cfg.s_values = {3};
  cfg.r_values = {1, 3};
  cfg.trials = 120;
  cfg.max_iterations = 60;
  cfg.seed = 23;
  cfg.output_dir = temp_dir("rembo").string();
  const ExperimentOutcome out = run_experiment(cfg);
  REQUIRE(out.rows.size() == 2);
  for (const auto& row : out.rows) {
    const double emp = std::stod(row.cells[3].second);
    const double model = std::stod(row.cells[4].second);
    CHECK(emp >= 0.0);
    CHECK(emp <= 1.0);
    CHECK(std::abs(emp - model) <= 0.2);  // coarse band; the model is a model
  }
  // more weight draws cannot hurt: r=3 row dominates r=1 row in the model
  CHECK(std::stod(out.rows[1].cells[4].second) >=
        std::stod(out.rows[0].cells[4].second) - 1e-12);
}

TEST_CASE("triangles experiment produces the simplex scan") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Triangles;
  cfg.m = 10;
  cfg.n = 30;
  cfg.s_values = {4};
  cfg.grid_density = 5;
  cfg.trials = 1;
  cfg.seed = 31;
  cfg.output_dir = temp_dir("triangles").string();
  const ExperimentOutcome out = run_experiment(cfg);
  // 4 triples x C(5+2,2)=21 grid points
  REQUIRE(out.rows.size() == 4 * 21);
  int recovered_in_all_s = 0, unrecovered_in_all_f = 0;
  for (const auto& row : out.rows) {
    if (row.cells[0].second == "s1+s2+s3" && row.cells[4].second == "1")
      ++recovered_in_all_s;
    if (row.cells[0].second == "f1+f2+f3" && row.cells[4].second == "0")
      ++unrecovered_in_all_f;
    // Corner weights reduce to single-vector recovery: an s corner recovers,
    // an f corner cannot.
    if (row.cells[0].second == "s1+f1+f2") {
      if (row.cells[1].second == "1" || std::stod(row.cells[1].second) == 1.0)
        CHECK(row.cells[4].second == "1");
      if (std::stod(row.cells[2].second) == 1.0 ||
          std::stod(row.cells[3].second) == 1.0)
        CHECK(row.cells[4].second == "0");
    }
  }
  // the all-recoverable triangle is mostly dark, the all-lost one mostly not
  CHECK(recovered_in_all_s >= 15);
  CHECK(unrecovered_in_all_f >= 10);
  const std::string svg = slurp(cfg.output_dir + "/plot.svg");
  CHECK(svg.find("<circle") != std::string::npos);
}

TEST_CASE("face cache and full pipeline decide trials identically") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Boosted;
  cfg.m = 8;
  cfg.n = 20;
  cfg.s_values = {3};
  cfg.r_values = {2};
  cfg.trials = 60;
  cfg.seed = 77;

  cfg.use_face_cache = true;
  cfg.output_dir = temp_dir("cache_on").string();
  const ExperimentOutcome cached = run_experiment(cfg);

  cfg.use_face_cache = false;
  cfg.output_dir = temp_dir("cache_off").string();
  const ExperimentOutcome full = run_experiment(cfg);

  REQUIRE(cached.rows.size() == full.rows.size());
  for (std::size_t i = 0; i < cached.rows.size(); ++i)
    CHECK(cached.rows[i].cells[3].second == full.rows[i].cells[3].second);
}

TEST_CASE("results do not depend on the thread budget") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::SmvSweep;
  cfg.m = 6;
  cfg.n = 16;
  cfg.s_values = {2, 3};
  cfg.trials = 30;
  cfg.seed = 313;

  setenv("JSREC_THREADS", "1", 1);
  cfg.output_dir = temp_dir("threads1").string();
  run_experiment(cfg);
  const std::string csv1 = slurp(cfg.output_dir + "/results.csv");

  setenv("JSREC_THREADS", "3", 1);
  cfg.output_dir = temp_dir("threads3").string();
  run_experiment(cfg);
  const std::string csv3 = slurp(cfg.output_dir + "/results.csv");
  unsetenv("JSREC_THREADS");
  CHECK(csv1 == csv3);
}

TEST_CASE("pattern sampling experiment serializes stats") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::PatternSampling;
  cfg.s_values = {4};
  cfg.r_values = {2};
  cfg.trials = 5000;
  cfg.seed = 5;
  cfg.output_dir = temp_dir("patterns").string();
  const ExperimentOutcome out = run_experiment(cfg);
  CHECK(out.rows.size() <= cnd(4, 2).to_u64() / 2);
  const std::string csv = slurp(cfg.output_dir + "/results.csv");
  CHECK(csv.rfind("pattern,count,first_seen\n", 0) == 0);
}

TEST_CASE("plots are deterministic and structured") {
  const std::vector<PlotSeries> series{{"a", {{0, 0}, {1, 1}}},
                                       {"b", {{0, 1}, {1, 0}}}};
  const AxesSpec axes{"t", "x", "y"};
  const std::string svg1 = render_plot_svg(series, axes);
  const std::string svg2 = render_plot_svg(series, axes);
  CHECK(svg1 == svg2);
  std::size_t polylines = 0, pos = 0;
  while ((pos = svg1.find("<polyline", pos)) != std::string::npos) {
    ++polylines;
    pos += 9;
  }
  CHECK(polylines == 2);
  // legend keeps input order
  CHECK(svg1.find(">a</text>") < svg1.find(">b</text>"));
  CHECK_THROWS_AS(render_plot_svg({}, axes), Error);
  CHECK_THROWS_AS(render_plot_svg({{"empty", {}}}, axes), Error);

  const std::string single = render_plot_svg({{"only", {{0, 0}, {1, 1}}}}, axes);
  std::size_t count = 0;
  pos = 0;
  while ((pos = single.find("<polyline", pos)) != std::string::npos) {
    ++count;
    pos += 9;
  }
  CHECK(count == 1);
}

TEST_CASE("triangles grid covers corners and reduces there") {
  // Identity-based toy instance: every vector recovers, so the all-s triangle
  // must be recovered everywhere, corners included.
  const DenseMatrix A = DenseMatrix::identity(4);
  const SupportSet I = SupportSet::make({0, 2}, 4);
  std::vector<double> s1(4, 0.0), s2(4, 0.0), s3(4, 0.0);
  s1[0] = 1.0; s1[2] = -2.0;
  s2[0] = -0.5; s2[2] = 1.0;
  s3[0] = 2.0; s3[2] = 0.7;
  const auto rows = run_triangles(A, I, {s1, s2, s3}, {}, 4);
  REQUIRE_FALSE(rows.empty());
  int corners_seen = 0;
  for (const auto& row : rows) {
    CHECK(row.cells[4].second == "1");
    const double w1 = std::stod(row.cells[1].second);
    const double w2 = std::stod(row.cells[2].second);
    const double w3 = std::stod(row.cells[3].second);
    CHECK(w1 + w2 + w3 == doctest::Approx(1.0));
    if (w1 == 1.0 || w2 == 1.0 || w3 == 1.0) ++corners_seen;
  }
  CHECK(corners_seen == 3);
  CHECK_THROWS_AS(run_triangles(A, I, {s1, s2, s3}, {}, 1), Error);
}

TEST_CASE("find_recovery_split raises when the budget is too small") {
  Rng arng(3, 0);
  const DenseMatrix A = gaussian_matrix(4, 10, arng);
  const SupportSet I = SupportSet::make({0, 1}, 10);
  Rng rng(3, 1);
  CHECK_THROWS_AS(find_recovery_split(A, I, rng, 500, 500, 3), Error);
}
