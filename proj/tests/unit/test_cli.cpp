#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "klsum/cli.hpp"
#include "klsum/serialize.hpp"
#include "klsum/strata.hpp"

using namespace klsum;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "klsum");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Json run_json(std::vector<std::string> args) { return Json::parse(run(std::move(args)).out); }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) v.push_back(line);
  return v;
}

// CSV body: lines that are not "# ..." comments.
std::vector<std::string> body(const std::string& s) {
  std::vector<std::string> v;
  for (auto& l : lines(s))
    if (l.rfind("# ", 0) != 0) v.push_back(l);
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string f; std::getline(in, f, ',');) v.push_back(f);
  return v;
}

bool has_comment(const std::string& out, const std::string& kv) {
  for (auto& l : lines(out))
    if (l == "# " + kv) return true;
  return false;
}

}  // namespace

TEST_CASE("csv quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(csv_field("") == "");
  std::ostringstream s;
  CsvWriter w(s);
  w.comment("q=5");
  w.row({"x", "y,z"});
  CHECK(s.str() == "# q=5\nx,\"y,z\"\n");
}

TEST_CASE("double formatting round-trips") {
  for (double x : {0.0, 1.0, -0.1, 1.0 / 3.0, 6.713997766802522e-16, 1e300, -2.5e-310}) {
    CAPTURE(x);
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
  const Complex z(0.1, -1.0 / 7.0);
  CHECK(complex_from_json(Json::parse(to_json(z).dump())) == z);
}

TEST_CASE("char-classify: Salie tuple") {
  const Run r = run({"char-classify", "--q", "5", "--k", "2", "--chars", "0,2"});
  CHECK(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["status"] == "ok");
  CHECK(j["schema_version"] == cli::kSchemaVersion);
  const Json& c = j["payload"]["classification"];
  CHECK(c["kummer_induced"] == true);
  CHECK(c["nio"] == false);
  CHECK(c["lambda_index"] == 2);
  for (const char* key : {"lambda_index", "kummer_induced", "dualizing", "nio", "cgm", "witness"})
    CHECK(c.contains(key));
  CHECK(j["config"]["q"] == 5);
  CHECK(j["config"]["chars"] == Json::array({0, 2}));
}

TEST_CASE("kl-verify") {
  const Json j = run_json({"kl-verify", "--q", "101", "--k", "2", "--chars", "0,0"});
  CHECK(j["status"] == "ok");
  CHECK(j["payload"]["max_rel_diff"].get<double>() <= 1e-9);
  CHECK(j["payload"]["deligne_ok"] == true);
  CHECK(j["payload"]["fourier_lambdas"].size() == 20);
  const Json all = run_json({"kl-verify", "--q", "13", "--k", "3", "--chars", "1,5,6", "--lambdas", "100"});
  CHECK(all["status"] == "ok");
  CHECK(all["payload"]["fourier_lambdas"].size() == 12);
}

TEST_CASE("kl-table CSV") {
  const Run r = run({"kl-table", "--q", "31", "--k", "3", "--chars", "1,2,3", "--scale", "7"});
  REQUIRE(r.code == 0);
  for (const char* kv : {"q=31", "k=3", "chars=[1,2,3]", "scale=7", "status=ok"}) CHECK(has_comment(r.out, kv));
  const auto rows = body(r.out);
  REQUIRE(rows.size() == 31);
  CHECK(rows[0] == "x,re,im");
  auto F = build_field(31);
  const KlTable K = kl_table_fast(CharTuple(F, {1, 2, 3}), 7);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = split(rows[i]);
    REQUIRE(f.size() == 3);
    const Elem x = static_cast<Elem>(std::stoul(f[0]));
    CHECK(x == i);
    CHECK(std::stod(f[1]) == K(x).real());
    CHECK(std::stod(f[2]) == K(x).imag());
  }
  // JSON form of the same table.
  const Json j = run_json({"kl-table", "--q", "31", "--k", "3", "--chars", "1,2,3", "--scale", "7", "--format", "json"});
  CHECK(j["payload"]["values"].size() == 30);
  CHECK(complex_from_json(j["payload"]["values"][4]["value"]) == K(5));
}

TEST_CASE("JSON round trip") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"complete-sum", "--q", "29", "--b", "1,2,5,9", "--direct"},
           {"field-info", "--q", "97", "--k", "4"},
           {"moment-check", "--q", "13"},
           {"avg-compare", "--q", "13", "--family", "power", "--n", "3", "--m", "1"},
           {"bilinear-bench", "--q", "101", "--M", "5", "--N", "8", "--shift", "--A", "1", "--B", "2"},
           {"strata-scan", "--q", "17", "--samples", "20", "--format", "json"},
       }) {
    const Run r = run(args);
    CAPTURE(args[0]);
    CHECK(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(Json::parse(j.dump()) == j);
    CHECK(j["status"] == "ok");
    CHECK(j["subcommand"] == args[0]);
    CHECK(j.contains("payload"));
    CHECK_FALSE(j.contains("wall_clock_seconds"));
  }
}

TEST_CASE("complete-sum agrees with the library") {
  const Json j = run_json({"complete-sum", "--q", "37", "--k", "2", "--b", "3,4,10,20", "--direct"});
  auto F = build_field(37);
  const KlTable K = kl_table_fast(CharTuple::trivial(F, 2));
  const SumReport r = sigma_II(K, ParamTuple(*F, {3, 4, 10, 20}));
  CHECK(j["payload"]["report"]["sigma_II"].get<double>() == r.sigma_II);
  CHECK(complex_from_json(j["payload"]["report"]["sigma_I"]) == r.sigma_I);
  CHECK(j["config"]["l"] == 2);
  CHECK(j["payload"]["stratum"]["z_count"].is_number());
  // l and b disagree.
  CHECK(run({"complete-sum", "--q", "37", "--l", "1", "--b", "3,4,10,20"}).code == 2);
}

TEST_CASE("strata-scan determinism and content") {
  const std::vector<std::string> args = {"strata-scan", "--q", "97", "--k", "2", "--l", "2", "--samples", "200",
                                         "--seed", "42"};
  const Run a = run(args), b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(run({"strata-scan", "--q", "97", "--samples", "200", "--seed", "43"}).out != a.out);

  const auto rows = body(a.out);
  REQUIRE(rows.size() == 201);
  CHECK(rows[0] == "b1,b2,b3,b4,on_diagonal,deg_P,z_count,generic");
  auto F = build_field(97);
  const StratumScan s = stratum_scan(*F, 2, 2, {false, 200, 42});
  for (std::size_t i = 0; i < 200; ++i) {
    const auto f = split(rows[i + 1]);
    REQUIRE(f.size() == 8);
    for (std::size_t c = 0; c < 4; ++c) CHECK(std::stoul(f[c]) == s.tuples[i][c]);
    CHECK(std::stoi(f[6]) == s.reports[i].z_count);
    CHECK((f[7] == "1") == s.reports[i].generic);
  }
}

TEST_CASE("exit codes and statuses") {
  const Run np = run({"field-info", "--q", "91"});
  CHECK(np.code != 0);
  CHECK(Json::parse(np.out)["status"] == "precondition-failed");

  const Run unknown = run({"no-such-command"});
  CHECK(unknown.code != 0);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(run({}).code != 0);
  CHECK(run({"field-info"}).code != 0);  // --q is required

  const Run big = run({"strata-scan", "--q", "101", "--exhaustive", "--format", "json"});
  CHECK(big.code == cli::exit_code(cli::Status::kResourceLimit));
  CHECK(Json::parse(big.out)["status"] == "resource-limit");

  const Run csv_err = run({"kl-table", "--q", "15"});
  CHECK(csv_err.code == 2);
  CHECK(has_comment(csv_err.out, "status=precondition-failed"));
  CHECK(body(csv_err.out).empty());

  CHECK(run({"field-info", "--q", "13", "--format", "csv"}).code == 2);
  CHECK(run({"moment-check", "--q", "13", "--xi", "1"}).code == 2);
  CHECK(run({"avg-compare", "--q", "37", "--family", "power"}).code == 3);
  CHECK(run({"char-classify", "--q", "13", "--k", "3", "--chars", "1,2"}).code == 2);

  for (auto s : {cli::Status::kOk, cli::Status::kPreconditionFailed, cli::Status::kResourceLimit,
                 cli::Status::kCheckFailed, cli::Status::kInternalError})
    CHECK((cli::exit_code(s) == 0) == (s == cli::Status::kOk));
}

TEST_CASE("box-count and moment-check") {
  const Json j = run_json({"box-count", "--q", "997", "--l", "2", "--B", "10"});
  CHECK(j["payload"]["count"] == 341);
  CHECK(run_json({"box-count", "--q", "997", "--l", "2", "--B", "10", "--half-open"})["payload"]["count"] == 280);

  const Run m = run({"moment-check", "--q", "17", "--xi", "0,2,4", "--format", "csv"});
  CHECK(m.code == 0);
  const auto rows = body(m.out);
  CHECK(rows.size() == 1 + 9);
  CHECK(rows[0] == "xi,n,lhs_re,lhs_im,rhs_re,rhs_im,diff");
}

TEST_CASE("output file and KLSUM_OUTPUT_DIR") {
  const auto dir = std::filesystem::temp_directory_path() / "klsum_cli_test";
  std::filesystem::create_directories(dir);
  ::setenv("KLSUM_OUTPUT_DIR", dir.c_str(), 1);
  const Run r = run({"strata-scan", "--q", "29", "--samples", "10", "--out", "scan.csv"});
  ::unsetenv("KLSUM_OUTPUT_DIR");
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(dir / "scan.csv");
  std::stringstream s;
  s << f.rdbuf();
  CHECK(s.str() == run({"strata-scan", "--q", "29", "--samples", "10"}).out);
  std::filesystem::remove_all(dir);
}

TEST_CASE("timing is opt-in") {
  const Json j = run_json({"field-info", "--q", "13", "--timing"});
  CHECK(j["wall_clock_seconds"].is_number());
}
