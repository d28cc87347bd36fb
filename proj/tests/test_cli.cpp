#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "framekit/cli.hpp"
#include "framekit/error.hpp"
#include "framekit/io.hpp"
#include "support.hpp"

using namespace fk_test;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& file, const std::string& text) const {
    const fs::path p = path / file;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

io::Json report(const Run& r) { return io::Json::parse(r.out); }

}  // namespace

TEST_CASE("matrix JSON round trip") {
  Rng rng(1, 0);
  const DenseOperator m = rng.complex_gaussian_matrix(3, 2);
  const std::string text = io::dump(io::to_json(m));
  CHECK(io::parse_matrix_json(text, "mem") == m);
  CHECK_THROWS_AS(io::parse_matrix_json(R"({"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0]]})", "mem"), Error);
  CHECK_THROWS_AS(io::parse_matrix_json(R"({"rows":1,"cols":1,"data":[[1]]})", "mem"), Error);
  CHECK_THROWS_AS(io::parse_matrix_json(R"({"cols":1,"data":[]})", "mem"), Error);
  CHECK_THROWS_AS(io::parse_matrix_json("{not json", "mem"), Error);
}

TEST_CASE("CSV matrices promote to complex and report the bad line") {
  const DenseOperator m = io::parse_matrix_csv("1, 2\n3,4.5\n", "mem.csv");
  CHECK(m == real_matrix({{1, 2}, {3, 4.5}}));
  try {
    io::parse_matrix_csv("1,2\n3,4\n5\n", "bad.csv");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("bad.csv:3") != std::string::npos);
  }
  CHECK_THROWS_AS(io::parse_matrix_csv("1,x\n", "mem.csv"), Error);
}

TEST_CASE("frame JSON round trip") {
  const FrameFamily f = random_frame({3, 4, 2, 1.0});
  CHECK(io::parse_frame_json(io::dump(io::to_json(f)), "mem") == f);
  CHECK_THROWS_AS(io::parse_frame_json(R"({"dim":2,"vectors":[[[1,0]]]})", "mem"), Error);
}

TEST_CASE("number formatting is shortest round-trip") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1.0) == "1.0");
  CHECK(io::format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(io::format_double(1e-300) == "1e-300");
  const double x = 0.1 + 0.2;
  CHECK(std::stod(io::format_double(x)) == x);
  CHECK(io::number(INFINITY) == "inf");
}

TEST_CASE("certify-k on the standard basis") {
  TempDir dir("framekit_cli_certify");
  const std::string f = dir.write("f.json", io::dump(io::to_json(FrameFamily::standard_basis(2))));
  const std::string k = dir.write("k.json", io::dump(io::to_json(DenseOperator::identity(2))));
  const Run r = run({"certify-k", "--input", f, "--k", k, "--lower", "1", "--upper", "1"});
  CHECK(r.code == 0);
  const io::Json j = report(r);
  CHECK(j["verdict"] == "Certified");
  CHECK(j["anchor"] == "kframe-certificate");
  CHECK(j["tolerance"]["rel_eps"] == 1e-10);

  const Run bad = run({"certify-k", "--input", f, "--k", k, "--lower", "1.5", "--upper", "1"});
  CHECK(bad.code == 1);
  CHECK(report(bad)["verdict"] == "Refuted");
}

TEST_CASE("transfer c2k") {
  TempDir dir("framekit_cli_transfer");
  const std::string c = dir.write("c.json", io::dump(io::to_json(diag({2, 3}))));
  const std::string out = dir.file("report.json");
  const Run r = run({"transfer", "--direction", "c2k", "--c", c, "--lower", "1", "--upper", "1", "--out", out});
  CHECK(r.code == 0);
  std::ifstream in(out);
  const io::Json j = io::Json::parse(in);
  CHECK(j["bounds"]["lower"].get<double>() == doctest::Approx(1.0 / 3.0));
  CHECK(j["bounds"]["upper"].get<double>() == doctest::Approx(0.5));
  CHECK(run({"transfer", "--direction", "sideways", "--c", c, "--lower", "1", "--upper", "1"}).code == 2);
}

TEST_CASE("input errors exit 2 with a diagnostic") {
  TempDir dir("framekit_cli_errors");
  const std::string bad = dir.write("bad.csv", "1,0\n0\n");
  const Run r = run({"bounds", "--input", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("bad.csv:2") != std::string::npos);
  CHECK(run({"bounds"}).code == 2);
  CHECK(run({"bounds", "--input", dir.file("missing.json")}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  const std::string f = dir.write("f.json", io::dump(io::to_json(FrameFamily::standard_basis(2))));
  CHECK(run({"bounds", "--input", f, "--tol", "0.5"}).code == 2);
  CHECK(run({"bounds", "--input", f, "--format", "xml"}).code == 2);
}

TEST_CASE("bounds, controlled certification and csv output") {
  TempDir dir("framekit_cli_bounds");
  const std::string f = dir.write("f.csv", "1,1,0\n0,0,1\n");
  const Run b = run({"bounds", "--input", f});
  CHECK(b.code == 0);
  CHECK(report(b)["optimal"]["upper"].get<double>() == doctest::Approx(2.0));

  const std::string c = dir.write("c.csv", "2,0\n0,3\n");
  const Run cc = run({"certify-controlled", "--input", f, "--c", c, "--format", "csv"});
  CHECK(cc.code == 0);
  CHECK(cc.out.rfind("key,value\n", 0) == 0);
  CHECK(cc.out.find("verdict,Certified") != std::string::npos);

  const std::string k = dir.write("k.csv", "1,0\n0,0\n");
  const Run ck = run({"certify-controlled", "--input", f, "--c", c, "--k", k});
  CHECK(ck.code == 0);
  CHECK(report(ck)["anchor"] == "controlled-kframe-certificate");
}

TEST_CASE("perturbation commands") {
  TempDir dir("framekit_cli_perturb");
  const std::string k = dir.write("k.csv", "1,0\n0,1\n");
  const Run p = run({"perturb-predict", "--k", k, "--lower", "1", "--upper", "4", "--gamma", "0.5"});
  CHECK(p.code == 0);
  CHECK(report(p)["predicted"]["lower"].get<double>() == doctest::Approx(0.25));
  CHECK(run({"perturb-predict", "--k", k, "--lower", "1", "--upper", "4", "--gamma", "1.5"}).code == 1);

  const std::string f = dir.write("f.csv", "1,0\n0,1\n");
  const std::string g = dir.write("g.csv", "1,0\n0,0.9\n");
  const Run v = run({"perturb-verify", "--input", f, "--perturbed", g, "--k", k, "--gamma", "0.1"});
  CHECK(v.code == 0);
  CHECK(report(v)["result"]["empirical"]["lower"].get<double>() == doctest::Approx(0.81));
  const Run fail = run({"perturb-verify", "--input", f, "--perturbed", g, "--k", k, "--gamma", "0.01"});
  CHECK(fail.code == 1);
  CHECK(report(fail)["verdict"] == "Refuted");

  const std::string c = dir.write("c.csv", "1,0\n0,2\n");
  const Run compact = run({"perturb-verify", "--input", f, "--perturbed", g, "--k", k, "--c", c});
  CHECK(compact.code == 0);
  CHECK(report(compact)["anchor"] == "compact-perturbation");
}

TEST_CASE("solve and gen") {
  TempDir dir("framekit_cli_solve");
  const std::string f = dir.write("f.csv", "1,1,0\n0,0,1\n");
  const std::string g = dir.write("g.csv", "2\n1\n");
  const Run s = run({"solve", "--input", f, "--rhs", g, "--tol-res", "1e-12"});
  CHECK(s.code == 0);
  const io::Json j = report(s);
  CHECK(j["solution"][0][0].get<double>() == doctest::Approx(1.0));
  CHECK(j["solution"][1][0].get<double>() == doctest::Approx(1.0));
  CHECK(run({"solve", "--input", f, "--rhs", g, "--max-iter", "0"}).code == 1);

  const Run gen = run({"gen", "--dim", "3", "--count", "5", "--seed", "4"});
  CHECK(gen.code == 0);
  CHECK(io::parse_frame_json(gen.out, "gen") == random_frame({3, 5, 4, 1.0}));
  CHECK(run({"gen", "--dim", "0"}).code == 2);
}

TEST_CASE("sweep") {
  const Run a = run({"sweep", "--seeds", "0:50", "--gamma-frac", "0", "--format", "csv"});
  CHECK(a.code == 0);
  std::istringstream lines(a.out);
  std::string line;
  int rows = 0;
  std::string last;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    if (line.rfind("summary", 0) == 0) {
      last = line;
      continue;
    }
    ++rows;
    CHECK(line.substr(line.size() - 2) == ",0");
  }
  CHECK(rows == 50);
  CHECK(last == "summary,50,violations,0,errors,0");

  const Run b = run({"sweep", "--seeds", "0:50", "--gamma-frac", "0"});
  const io::Json j = report(b);
  for (const auto& row : j["rows"]) {
    CHECK(row["empirical_lower"].get<double>() ==
          doctest::Approx(row["predicted_lower"].get<double>()).epsilon(1e-10));
    CHECK(row["empirical_upper"].get<double>() ==
          doctest::Approx(row["predicted_upper"].get<double>()).epsilon(1e-10));
  }

  CHECK(run({"sweep", "--seeds", "3:3"}).code == 2);
  CHECK(run({"sweep", "--seeds", "0:5", "--dims", "4:2"}).code == 2);
  CHECK(run({"sweep"}).code == 2);
}

TEST_CASE("reports are byte-identical across runs") {
  const std::vector<std::string> args{"sweep", "--seeds", "0:20", "--k-rank", "2", "--gamma-frac", "0.7"};
  CHECK(run(args).out == run(args).out);
  const std::vector<std::string> compact{"sweep", "--seeds", "0:20", "--mode", "compact"};
  CHECK(run(compact).out == run(compact).out);
}
