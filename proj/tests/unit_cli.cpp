#include <cstdio>
#include <filesystem>
#include <fstream>
#include <variant>

#include "cli/csv_io.hpp"
#include "cli/engine.hpp"
#include "doctest.h"
#include "json.hpp"
#include "torograph/angle.hpp"
#include "torograph/graph_io.hpp"
#include "torograph/rng.hpp"
#include "torograph/wrapped_normal.hpp"

using namespace torograph;
using namespace torograph::cli;

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("torograph_test_" + std::to_string(Rng(std::random_device{}())
                                                   .integer(1u << 30)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("ingest_csv") {
  TempDir dir;
  SUBCASE("degrees are converted and wrapped") {
    write_file(dir.file("d.csv"), "a,b\n0,90\n180,-90\n");
    const AngleMatrix m = ingest_csv(dir.file("d.csv"), AngleUnit::degrees);
    CHECK(m(0, 0) == 0.0);
    CHECK(m(0, 1) == doctest::Approx(kPi / 2));
    CHECK(m(1, 0) == doctest::Approx(kPi));
    CHECK(m(1, 1) == doctest::Approx(-kPi / 2));
  }
  SUBCASE("radians beyond the interval are wrapped") {
    write_file(dir.file("r.csv"), "x\n7.0\n");
    const AngleMatrix m = ingest_csv(dir.file("r.csv"), AngleUnit::radians);
    CHECK(m(0, 0) == doctest::Approx(7.0 - kTwoPi).epsilon(1e-12));
  }
  SUBCASE("missing cell names row and column") {
    write_file(dir.file("m.csv"), "a,b\n0,1\n2\n");
    try {
      ingest_csv(dir.file("m.csv"), AngleUnit::radians);
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      const std::string what = e.what();
      CHECK(what.find("row 3") != std::string::npos);
      CHECK(what.find("column b") != std::string::npos);
    }
  }
  SUBCASE("non-numeric cell is located") {
    write_file(dir.file("n.csv"), "a,b\n0,1\nx,2\n");
    try {
      ingest_csv(dir.file("n.csv"), AngleUnit::radians);
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      const std::string what = e.what();
      CHECK(what.find("row 3") != std::string::npos);
      CHECK(what.find("column a") != std::string::npos);
    }
  }
  SUBCASE("empty file rejected") {
    write_file(dir.file("e.csv"), "");
    CHECK_THROWS_AS(ingest_csv(dir.file("e.csv"), AngleUnit::radians), parse_error);
  }
  SUBCASE("degree round trip within 1e-12") {
    Eigen::MatrixXd values(3, 2);
    values << 0.3, -2.9, kPi, 1e-7, -1.13, 2.0;
    const AngleMatrix original(values, {"u", "v"});
    write_angles_csv(dir.file("rt.csv"), original, AngleUnit::degrees);
    const AngleMatrix back = ingest_csv(dir.file("rt.csv"), AngleUnit::degrees);
    CHECK((back.values() - original.values()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("ramachandran export") {
  TempDir dir;
  Eigen::MatrixXd values(3, 4);
  values << 0.1, 0.2, 0.3, 0.4, -0.1, -0.2, -0.3, -0.4, kPi, 1.0, -1.0, 2.0;
  const AngleMatrix data(values, {"phi1", "psi1", "phi2", "psi2"});

  SUBCASE("explicit pair") {
    const auto pairs = resolve_pairs("phi1:psi1", data.column_names());
    REQUIRE(pairs.size() == 1);
    CHECK(export_ramachandran(data, pairs, dir.file("rama.csv")));
    const std::string text = read_file(dir.file("rama.csv"));
    CHECK(text.find("phi1,psi1") == 0);
    CHECK(text.find("180") != std::string::npos);  // pi -> 180 degrees
    // three data rows + header
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  }
  SUBCASE("auto-detected convention pairs") {
    const auto pairs = resolve_pairs("", data.column_names());
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0] == std::pair<std::string, std::string>("phi1", "psi1"));
    CHECK(pairs[1] == std::pair<std::string, std::string>("phi2", "psi2"));
  }
  SUBCASE("empty pair list writes nothing") {
    CHECK_FALSE(export_ramachandran(data, {}, dir.file("none.csv")));
    CHECK_FALSE(fs::exists(dir.file("none.csv")));
  }
  SUBCASE("unknown column") {
    CHECK_THROWS_AS(export_ramachandran(data, {{"phi1", "nope"}}, dir.file("x.csv")),
                    std::invalid_argument);
  }
}

TEST_CASE("engine pipelines and exit codes") {
  TempDir dir;
  // A deterministic small dataset.
  Eigen::VectorXd mu(3);
  mu << 0.2, -0.4, 1.0;
  Eigen::MatrixXd sigma(3, 3);
  sigma << 0.3, 0.1, 0.0, 0.1, 0.25, 0.08, 0.0, 0.08, 0.4;
  const auto sample = wn_sample(WnParams(mu, sigma), 120, 2024,
                                {"phi1", "psi1", "phi2"});
  write_angles_csv(dir.file("data.csv"), sample.angles, AngleUnit::radians);

  RunConfig base;
  base.input = dir.file("data.csv");

  SUBCASE("fit-wn writes report and graphs, byte reproducible") {
    RunConfig cfg = base;
    cfg.command = Command::fit_wn;
    cfg.output = dir.file("out1");
    REQUIRE(run(cfg) == kExitOk);
    cfg.output = dir.file("out2");
    REQUIRE(run(cfg) == kExitOk);
    CHECK(read_file(dir.file("out1/report.json")) ==
          read_file(dir.file("out2/report.json")));
    CHECK(read_file(dir.file("out1/graph.json")) ==
          read_file(dir.file("out2/graph.json")));

    // Graph JSON parses back to the in-memory result shape.
    const auto parsed = parse_graph_json(read_file(dir.file("out1/graph.json")));
    REQUIRE(std::holds_alternative<UndirectedGraph>(parsed));
    CHECK(std::get<UndirectedGraph>(parsed).labels() ==
          std::vector<std::string>{"phi1", "psi1", "phi2"});
  }
  SUBCASE("fit-cvm-dag requires an ordering") {
    RunConfig cfg = base;
    cfg.command = Command::fit_cvm_dag;
    cfg.output = dir.file("cvm");
    CHECK(run(cfg) == kExitConfig);
    cfg.ordering = {1, 2, 3};
    CHECK(run(cfg) == kExitOk);
    const auto parsed = parse_graph_json(read_file(dir.file("cvm/graph.json")));
    CHECK(std::holds_alternative<Dag>(parsed));
  }
  SUBCASE("fit-isn requires a seed") {
    RunConfig cfg = base;
    cfg.command = Command::fit_isn;
    cfg.output = dir.file("isn");
    cfg.repeats = 5;
    CHECK(run(cfg) == kExitConfig);
    cfg.seed = 11;
    CHECK(run(cfg) == kExitOk);
    const auto doc = nlohmann::json::parse(read_file(dir.file("isn/report.json")));
    CHECK(doc.at("stability_report").at("repeats") == 5);
  }
  SUBCASE("simulate determinism end to end") {
    RunConfig cfg;
    cfg.command = Command::simulate;
    cfg.model = "wn";
    cfg.sim_p = 3;
    cfg.sim_n = 50;
    cfg.seed = 7;
    cfg.output = dir.file("s1");
    REQUIRE(run(cfg) == kExitOk);
    cfg.output = dir.file("s2");
    REQUIRE(run(cfg) == kExitOk);
    CHECK(read_file(dir.file("s1/samples.csv")) ==
          read_file(dir.file("s2/samples.csv")));
    CHECK(read_file(dir.file("s1/windings.csv")) ==
          read_file(dir.file("s2/windings.csv")));
  }
  SUBCASE("parse failures exit 3") {
    write_file(dir.file("bad.csv"), "a,b\n1,x\n");
    RunConfig cfg = base;
    cfg.command = Command::summary;
    cfg.input = dir.file("bad.csv");
    cfg.output = dir.file("sum");
    CHECK(run(cfg) == kExitParse);
  }
  SUBCASE("summary emits ramachandran with convention names") {
    RunConfig cfg = base;
    cfg.command = Command::summary;
    cfg.output = dir.file("sum2");
    REQUIRE(run(cfg) == kExitOk);
    CHECK(fs::exists(dir.file("sum2/summary.json")));
    CHECK(fs::exists(dir.file("sum2/ramachandran.csv")));
    const std::string text = read_file(dir.file("sum2/ramachandran.csv"));
    CHECK(text.rfind("phi1,psi1", 0) == 0);
  }
  SUBCASE("ci-query on a graph file") {
    UndirectedGraph g(3, {"a", "b", "c"});
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    write_file(dir.file("g.json"), emit_graph(g, GraphFormat::json));
    RunConfig cfg;
    cfg.command = Command::ci_query;
    cfg.graph_path = dir.file("g.json");
    cfg.set_a = {1};
    cfg.set_c = {3};
    cfg.set_s = {2};
    CHECK(run(cfg) == kExitOk);
  }
}
