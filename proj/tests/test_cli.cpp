#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wittlab/cli.hpp"

using namespace wittlab;
using namespace wittlab::cli;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

json call_json(std::vector<std::string> args) {
  const auto r = call(std::move(args));
  REQUIRE_MESSAGE(r.code == kOk, r.err);
  return json::parse(r.out);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("wittlab_test_cli_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

}  // namespace

TEST_CASE("curve spec parsing") {
  SUBCASE("families") {
    const auto s = parse_curve_spec(json::parse(R"({"field_degree":2,"family":"s","params":{"b2":3,"b3":2}})"));
    REQUIRE(s.s);
    CHECK(s.s->b2.bits() == 3);
    CHECK(s.s->b8.is_zero());
    REQUIRE(s.as_r());
    CHECK(s.as_r()->b6 == s.s->b3 * s.s->b3);

    const auto r = parse_curve_spec(json::parse(R"({"family":"r","params":{"b6":1}})"), 3);
    CHECK(r.field_degree == 3);
    REQUIRE(r.r);

    const auto e = parse_curve_spec(
        json::parse(R"({"field_degree":2,"family":"explicit","quadrics":["X^2+Y*Z","X*Y+Z*T+T^2","U^2+Z*U+3*X*Z"]})"));
    REQUIRE(e.explicit_curve);
    CHECK(e.curve().q3().coeff(Var::X, Var::Z).bits() == 3);
  }
  SUBCASE("rejections") {
    auto bad = [](const char* text) { CHECK_THROWS_AS(parse_curve_spec(json::parse(text)), ValidationError); };
    bad(R"({"family":"s","params":{"b3":1}})");
    bad(R"({"field_degree":0,"family":"s"})");
    bad(R"({"field_degree":1,"family":"k3"})");
    bad(R"({"field_degree":1,"family":"s","params":{"b3":2}})");
    bad(R"({"field_degree":1,"family":"s","params":{"b4":1}})");
    bad(R"({"field_degree":1,"family":"s","params":{"b3":-1}})");
    bad(R"({"field_degree":1,"family":"s","params":{"b3":1},"extra":0})");
    bad(R"({"field_degree":1,"family":"explicit","quadrics":["X^2+Y*Z","X^3","T^2"]})");
    bad(R"([1,2])");
    // b3 = 0 is not an S member
    bad(R"({"field_degree":1,"family":"s","params":{}})");
    CHECK_THROWS_AS(parse_curve_spec(json::parse(R"({"field_degree":21,"family":"s"})")), FieldCapError);
  }
}

TEST_CASE("reports") {
  const std::string s010 = R"({"field_degree":1,"family":"s","params":{"b3":1}})";
  const std::string r0010 = R"({"field_degree":1,"family":"r","params":{"b6":1}})";

  const json inv = call_json({"invariants", "--spec-json", s010});
  CHECK(inv["p_rank"] == 0);
  CHECK(inv["a_number"] == 2);

  const json z = call_json({"zeta", "--spec-json", r0010});
  CHECK(z["counts"] == json({5, 9, 11, 17, 25}));
  CHECK(z["l_poly"] == json({1, 2, 4, 6, 8, 8, 16, 24, 32, 32, 32}));
  CHECK(z["newton_slopes"] == json::parse(R"([["1/3",3],["1/2",4],["2/3",3]])"));
  CHECK(z["supersingular"] == false);

  const json a = call_json({"aut", "--spec-json", s010});
  CHECK(a["order"] == 16);
  CHECK(call_json({"aut", "--spec-json", r0010})["order"] == 2);

  const json q = call_json({"quotients", "--spec-json", s010});
  CHECK(q["elliptic"] == "y^2+y=x^3");
  CHECK(q["genus2_eta"]["F"] == json({1, 1, 0, 0, 1, 1}));
  CHECK(q["decomposition_ok"] == true);

  const json red = call_json({"reduce", "--spec-json",
                              R"({"field_degree":2,"family":"nf","params":{"b2":1,"b6":3,"b9":2,"b12":1}})"});
  json identity = json::array();
  for (int i = 0; i < 5; ++i) {
    json row = json::array();
    for (int j = 0; j < 5; ++j) row.push_back(i == j ? 1 : 0);
    identity.push_back(row);
  }
  CHECK(red["transform"] == identity);
  CHECK(red["nf"]["b6"] == 3);
  CHECK(red["nf"]["b9"] == 2);
  CHECK(red["result_field_degree"] == 2);

  // same input twice, same bytes
  CHECK(call({"zeta", "--spec-json", r0010}).out == call({"zeta", "--spec-json", r0010}).out);

  const auto spec_file = temp_file("spec.json");
  dump(spec_file, s010);
  CHECK(call({"invariants", spec_file.string()}).out == call({"invariants", "--spec-json", s010}).out);
}

TEST_CASE("exit codes") {
  CHECK(call({}).code == kInvalid);
  CHECK(call({"frobnicate"}).code == kInvalid);
  CHECK(call({"invariants", "--spec-json", "{"}).code == kInvalid);
  CHECK(call({"invariants", "--spec-json", R"({"field_degree":1,"family":"s","params":{"b3":7}})"}).code == kInvalid);
  CHECK(call({"invariants", "/nonexistent/spec.json"}).code == kInvalid);
  CHECK(call({"quotients", "--spec-json", R"({"field_degree":1,"family":"r","params":{"b6":1}})"}).code == kInvalid);
  CHECK(call({"invariants", "--csv", "--spec-json", R"({"field_degree":1,"family":"s","params":{"b3":1}})"}).code ==
        kInvalid);
  CHECK(call({"verify", "no-such-suite"}).code == kInvalid);
  // counting to m = 5 over GF(2^5) leaves the field cap
  CHECK(call({"zeta", "--spec-json", R"({"field_degree":5,"family":"r","params":{"b6":1}})"}).code == kResourceCap);
  CHECK(call({"zeta", "--budget", "10", "--spec-json", R"({"field_degree":1,"family":"r","params":{"b6":1}})"}).code ==
        kResourceCap);
  const auto refused = call({"scan", "s", "--field-degree", "2", "--budget", "1000"});
  CHECK(refused.code == kResourceCap);
  CHECK(refused.err.find("estimated cost") != std::string::npos);
  CHECK(call({"scan", "general"}).code == kInvalid);
  CHECK(call({"scan", "s", "--where", "b5=1"}).code == kInvalid);
  CHECK(call({"scan", "s", "--where", "b2=x"}).code == kInvalid);
  CHECK(call({"scan", "s", "--where", "b2=4"}).code == kInvalid);
}

TEST_CASE("verify runs a suite") {
  const auto r = call({"verify", "cor43"});
  CHECK(r.code == kOk);
  CHECK(r.out.rfind("PASS criterion 1", 0) == 0);
}

TEST_CASE("scan grid and filters") {
  ScanOptions o;
  o.family = "s";
  o.field_degree = 2;
  const auto grid = scan_grid(o);
  CHECK(grid.size() == 48);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  for (const auto& t : grid) CHECK(t[1] != 0);

  o.where = {"b2=1", "b8!=0"};
  CHECK(scan_grid(o).size() == 9);

  ScanOptions r;
  r.family = "r";
  r.field_degree = 1;
  CHECK(scan_grid(r).size() == 8);
  r.where = {"b6!=b3^2"};
  CHECK(scan_grid(r).size() == 4);
  r.where = {"b6=b3^2"};
  CHECK(scan_grid(r).size() == 4);

  o.where = {"b3=0"};
  CHECK(scan_grid(o).empty());
  const auto empty = call({"scan", "s", "--where", "b3=0"});
  CHECK(empty.code == kOk);
  CHECK(empty.out == scan_header(o) + "\n");
}

TEST_CASE("scan R over GF(2) off the S locus") {
  const auto r = call({"scan", "r", "--field-degree", "1", "--where", "b6!=b3^2"});
  REQUIRE(r.code == kOk);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "family,b2,b3,b6,b8,smooth,p_rank,a_number,slopes,aut_order,decomposition_ok");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].find(",1,0,2,") == std::string::npos) continue;  // singular rows skip the rest
    CHECK(lines[i].find("1/3x3;1/2x4;2/3x3") != std::string::npos);
    CHECK(lines[i].substr(lines[i].size() - 3) == ",2,");
  }
}

TEST_CASE("scan S over GF(4)") {
  const auto r = call({"scan", "s", "--field-degree", "2"});
  REQUIRE(r.code == kOk);
  const auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 49);
  int smooth = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> cells;
    std::istringstream in(lines[i]);
    std::string cell;
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 10);
    if (cells[4] != "1") continue;
    ++smooth;
    CHECK(cells[5] == "0");
    CHECK(cells[6] == "2");
    CHECK(cells[7] == "1/2x10");
    CHECK(std::stoi(cells[8]) % 4 == 0);
    CHECK(cells[9] == "true");
  }
  CHECK(smooth > 0);
}

TEST_CASE("scan determinism and resume") {
  const std::vector<std::string> base = {"scan", "s", "--field-degree", "2", "--where", "b2=1", "--n-max", "2"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  const auto one = call(with({"--workers", "1"}));
  const auto three = call(with({"--workers", "3"}));
  REQUIRE(one.code == kOk);
  CHECK(lines_of(one.out).size() == 13);
  CHECK(three.out == one.out);

  // interrupted after four rows and part of a fifth
  const auto partial_path = temp_file("partial.csv");
  const auto out_path = temp_file("resumed.csv");
  std::size_t cut = 0;
  for (int n = 0; n < 5; ++n) cut = one.out.find('\n', cut) + 1;
  dump(partial_path, one.out.substr(0, cut + 7));
  REQUIRE(call(with({"--resume", partial_path.string(), "--out", out_path.string(), "--workers", "2"})).code == kOk);
  CHECK(slurp(out_path) == one.out);

  // reused rows are copied, not recomputed
  std::string marked = one.out.substr(0, cut);
  const auto second = marked.find('\n') + 1;
  marked.insert(marked.find(",true", second), "9");
  dump(partial_path, marked);
  REQUIRE(call(with({"--resume", partial_path.string(), "--out", out_path.string()})).code == kOk);
  CHECK(lines_of(slurp(out_path))[1] == lines_of(marked)[1]);

  dump(partial_path, one.out);
  REQUIRE(call(with({"--resume", partial_path.string(), "--out", out_path.string()})).code == kOk);
  CHECK(slurp(out_path) == one.out);

  dump(partial_path, one.out.substr(0, cut) + "s,1,garbage\n");
  CHECK(call(with({"--resume", partial_path.string()})).code == kInvalid);
  dump(partial_path, "family,b2\n");
  CHECK(call(with({"--resume", partial_path.string()})).code == kInvalid);
  CHECK(call(with({"--resume", temp_file("missing.csv").string()})).code == kInvalid);

  const auto timed = call(with({"--timing"}));
  CHECK(lines_of(timed.out)[0].substr(lines_of(timed.out)[0].size() - 8) == ",wall_ms");
  const json rows = json::parse(call(with({"--json"})).out);
  CHECK(rows.size() == 12);
  CHECK(rows[0]["b2"] == "1");
}
