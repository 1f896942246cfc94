#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "fucik/cli/cli.hpp"
#include "fucik/fucik.hpp"

using namespace fucik;

namespace {

const char* kM = "1+1/(x+1)";
const char* kN = "1+cos(2*x)^2";

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

using Table = std::vector<std::vector<std::string>>;

Table parse_csv(const std::string& text) {
  Table rows;
  for (const std::string& line : split(text, '\n')) rows.push_back(split(line, ','));
  return rows;
}

double num(const std::string& s) { return std::stod(s); }

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// Row whose first column parses to the given value.
std::vector<std::string> row_with(const Table& t, double key) {
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!t[i].empty() && num(t[i][0]) == key) return t[i];
  }
  FAIL("no row for " << key);
  return {};
}

void check_error_line(const Outcome& o) {
  CHECK(o.err.find('\n') == o.err.size() - 1);
  const auto j = nlohmann::json::parse(o.err);
  CHECK(j.at("exit_code").get<int>() == o.code);
  CHECK_FALSE(j.at("message").get<std::string>().empty());
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("eigen prints one record") {
  const Outcome o = run({"eigen", "--k", "4", "--t", "1", "--sign", "+", "--m", kM, "--n", kN});
  REQUIRE(o.code == cli::kSuccess);
  const Table t = parse_csv(o.out);
  REQUIRE(t.size() == 2);
  CHECK(t[0] == std::vector<std::string>{"k", "t", "sign", "alpha", "beta", "achieved_eps"});
  CHECK(rel(num(t[1][3]), 106.483) < 5e-3);
  CHECK(num(t[1][3]) == doctest::Approx(106.42903).epsilon(1e-6));
  CHECK(num(t[1][5]) <= 1e-4);
}

TEST_CASE("eigen with constant weights") {
  const Outcome o = run({"eigen", "--k", "2", "--t", "1", "--sign", "+", "--m", "1", "--n", "1"});
  REQUIRE(o.code == 0);
  CHECK(num(parse_csv(o.out)[1][3]) == doctest::Approx(39.4784).epsilon(1e-5));
}

TEST_CASE("eigen json keys") {
  const Outcome o =
      run({"eigen", "--k", "1", "--t", "2", "--sign", "minus", "--m", "1", "--n", "1", "--format", "json"});
  REQUIRE(o.code == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j.at("k") == 1);
  CHECK(j.at("sign") == "-");
  CHECK(j.at("beta").get<double>() == doctest::Approx(2 * j.at("alpha").get<double>()));
  CHECK(j.size() == 6);
}

TEST_CASE("eigen path dump") {
  const auto path = std::filesystem::temp_directory_path() / "fucik_cli_path.csv";
  const Outcome o = run({"eigen", "--k", "3", "--t", "1", "--sign", "+", "--m", "1", "--n", "1", "--dump-path",
                         path.string()});
  REQUIRE(o.code == 0);
  const Table t = parse_csv(slurp(path));
  std::filesystem::remove(path);
  REQUIRE(t.size() > 3);
  CHECK(t[0] == std::vector<std::string>{"x", "phi", "rho"});
  CHECK(num(t.back()[0]) == doctest::Approx(1.0));
  CHECK(num(t.back()[1]) == doctest::Approx(3 * std::numbers::pi).epsilon(1e-6));
}

TEST_CASE("usage errors exit 2 with one json line") {
  const std::vector<std::vector<std::string>> cases = {
      {"eigen", "--k", "0", "--t", "1", "--sign", "+", "--m", "1", "--n", "1"},
      {"eigen", "--k", "1", "--t", "1", "--sign", "x", "--m", "1", "--n", "1"},
      {"eigen", "--k", "1", "--t", "-1", "--sign", "+", "--m", "1", "--n", "1"},
      {"eigen", "--k", "1", "--t", "1", "--sign", "+", "--m", "1"},
      {"eigen", "--k", "1", "--t", "1", "--sign", "+", "--m", "1+", "--n", "1"},
      {"eigen", "--k", "1", "--t", "1", "--sign", "+", "--m", "x-1", "--n", "1"},
      {"eigen", "--k", "1", "--t", "1", "--sign", "+", "--m", "1", "--n", "1", "--L", "0"},
      {"eigen", "--k", "1", "--t", "1", "--sign", "+", "--m", "1", "--n", "1", "--eps", "0"},
      {"eigen", "--t", "1", "--sign", "+", "--m", "1", "--n", "1"},
      {"eigen", "--k", "one", "--t", "1", "--sign", "+", "--m", "1", "--n", "1"},
      {"bracket", "--c", "0", "--t", "1", "--lambda-max", "100", "--m", "1", "--n", "1"},
      {"bracket", "--c", "1", "--t", "1", "--lambda-max", "100", "--m", "1", "--n", "1"},
      {"plot", "--points", "0", "--m", "1", "--n", "1"},
      {"curve", "--k", "1", "--sign", "+", "--t-min", "1", "--t-max", "2", "--points", "0", "--m", "1", "--n", "1"},
      {"table", "--which", "4"},
      {"count", "--lambda", "10", "--t", "1", "--m", "1", "--n", "1", "--format", "xml"},
      {"frobnicate"},
      {},
  };
  for (const auto& args : cases) {
    CAPTURE(args.size());
    CAPTURE(args.empty() ? std::string() : args[0]);
    const Outcome o = run(args);
    CHECK(o.code == cli::kUsage);
    CHECK(o.out.empty());
    check_error_line(o);
  }
}

TEST_CASE("k must be >= 1 message") {
  const Outcome o = run({"eigen", "--k", "0", "--t", "1", "--sign", "+", "--m", "1", "--n", "1"});
  CHECK(nlohmann::json::parse(o.err).at("message") == "k must be >= 1");
}

TEST_CASE("numerical failure exits 3") {
  const Outcome o = run({"eigen", "--k", "1", "--t", "1", "--sign", "+", "--m", "1+x", "--n", "1", "--ode-rtol", "1e-300",
                         "--ode-atol", "1e-300"});
  CHECK(o.code == cli::kNumerical);
  check_error_line(o);
}

TEST_CASE("help exits 0") {
  const Outcome o = run({"--help"});
  CHECK(o.code == 0);
  CHECK(o.out.find("eigen") != std::string::npos);
}

TEST_CASE("slopes outside the supported range are capped with a warning") {
  const Outcome o = run({"eigen", "--k", "1", "--t", "1e9", "--sign", "+", "--m", "1", "--n", "1"});
  REQUIRE(o.code == 0);
  CHECK(num(parse_csv(o.out)[1][1]) == 1e6);
  CHECK(nlohmann::json::parse(o.err).contains("warning"));
}

TEST_CASE("curve rows") {
  SUBCASE("reference weights reproduce the reference slopes") {
    const Outcome o = run({"curve", "--k", "4", "--sign", "+", "--t-min", "1e-5", "--t-max", "1e5", "--points", "11",
                           "--log", "--m", kM, "--n", kN});
    REQUIRE(o.code == 0);
    const Table t = parse_csv(o.out);
    REQUIRE(t.size() == 12);
    CHECK(t[0] == std::vector<std::string>{"t", "alpha", "beta", "k", "sign"});
    CHECK(rel(num(row_with(t, 1)[1]), 106.483) < 5e-3);
    CHECK(rel(num(row_with(t, 10)[1]), 43.172) < 5e-3);
    CHECK(rel(num(row_with(t, 10)[2]), 431.716) < 5e-3);
    CHECK(rel(num(row_with(t, 1e-3)[1]), 30800.052) < 5e-3);
  }
  SUBCASE("constant weights follow the closed form") {
    const Outcome o = run({"curve", "--k", "3", "--sign", "-", "--t-min", "0.5", "--t-max", "4", "--points", "5",
                           "--linear", "--m", "2", "--n", "0.5"});
    REQUIRE(o.code == 0);
    const Table t = parse_csv(o.out);
    REQUIRE(t.size() == 6);
    CHECK(num(t[2][0]) == doctest::Approx(1.375));
    const Problem p(1.0, WeightExpr::constant(2), WeightExpr::constant(0.5));
    for (std::size_t i = 1; i < t.size(); ++i) {
      const double tt = num(t[i][0]);
      CHECK(num(t[i][1]) == doctest::Approx(const_eigenvalue(2, 0.5, 1.0, 3, tt, Sign::Minus)).epsilon(1e-6));
      CHECK(t[i][4] == "-");
    }
  }
  SUBCASE("one point gives a single row at t-min") {
    const Outcome o = run({"curve", "--k", "1", "--sign", "+", "--t-min", "3", "--t-max", "7", "--points", "1",
                           "--m", "1", "--n", "1"});
    REQUIRE(o.code == 0);
    const Table t = parse_csv(o.out);
    REQUIRE(t.size() == 2);
    CHECK(num(t[1][0]) == 3);
  }
}

TEST_CASE("count examples") {
  const double pi = std::numbers::pi;
  const Outcome o = run({"count", "--lambda", format_number(4 * pi * pi + 0.1), "--t", "1", "--m", "1", "--n", "1"});
  REQUIRE(o.code == 0);
  Table t = parse_csv(o.out);
  CHECK(t[0] == std::vector<std::string>{"lambda", "t", "n_plus", "n_minus", "total", "asymptotic_count"});
  CHECK(t[1][4] == "4");
  CHECK(num(t[1][5]) == doctest::Approx(4 * std::sqrt(4 * pi * pi + 0.1) / pi / 2));

  t = parse_csv(run({"count", "--lambda", "1e4", "--t", "30", "--m", kM, "--n", kN}).out);
  CHECK(std::fabs(num(t[1][4]) - num(t[1][5])) <= 2);

  t = parse_csv(run({"count", "--lambda", "0.1", "--t", "1", "--m", kM, "--n", kN}).out);
  CHECK(t[1][4] == "0");
}

TEST_CASE("table 1 row t=100") {
  const Outcome o = run({"table", "--which", "1"});
  REQUIRE(o.code == 0);
  const Table t = parse_csv(o.out);
  REQUIRE(t.size() == 12);
  CHECK(t[0] == std::vector<std::string>{"t", "alpha", "beta"});
  const auto r = row_with(t, 100);
  CHECK(rel(num(r[1]), 28.994) < 5e-3);
  CHECK(rel(num(r[2]), 2899.356) < 5e-3);
}

TEST_CASE("table 2 row k=100") {
  const Outcome o = run({"table", "--which", "2"});
  REQUIRE(o.code == 0);
  const Table t = parse_csv(o.out);
  REQUIRE(t.size() == 5);
  CHECK(t[0] == std::vector<std::string>{"k", "t", "numeric", "asymptotic", "rel_err"});
  const auto r = row_with(t, 100);
  CHECK(rel(num(r[2]), 21132.488) < 5e-3);
  CHECK(rel(num(r[3]), 21145.257) < 1e-3);
  CHECK(num(r[4]) == doctest::Approx(std::fabs(num(r[2]) - num(r[3])) / num(r[2])));
  CHECK(num(r[4]) > 0.0003);
  CHECK(num(r[4]) < 0.0012);
}

TEST_CASE("table 3 printed row t=10" * doctest::should_fail()) {
  const Outcome o = run({"table", "--which", "3"});
  REQUIRE(o.code == 0);
  const Table t = parse_csv(o.out);
  REQUIRE(t.size() == 8);
  const auto r = row_with(t, 10);
  CHECK(rel(num(r[2]), 2090.991) < 5e-3);
  CHECK(rel(num(r[3]), 2099.903) < 1e-3);
  CHECK(num(r[4]) == doctest::Approx(0.0042).epsilon(0.25));
}

TEST_CASE("table 3 row t=10 against our own solver") {
  const Outcome o = run({"table", "--which", "3", "--format", "json"});
  REQUIRE(o.code == 0);
  const auto lines = split(o.out, '\n');
  REQUIRE(lines.size() == 7);
  const auto j = nlohmann::json::parse(lines[4]);
  CHECK(j.at("t") == 10.0);
  CHECK(j.at("k") == 28);
  CHECK(j.at("numeric").get<double>() == doctest::Approx(2094.42).epsilon(1e-5));
  CHECK(j.at("asymptotic").get<double>() == doctest::Approx(2090.991).epsilon(1e-6));
}

TEST_CASE("bracket examples") {
  SUBCASE("reference weights stay within the bracketing bounds") {
    const Outcome o =
        run({"bracket", "--c", "0.5", "--t", "1", "--lambda-max", "1e4", "--steps", "40", "--m", kM, "--n", kN});
    REQUIRE(o.code == 0);
    const Table t = parse_csv(o.out);
    REQUIRE(t.size() == 41);
    CHECK(t[0] == std::vector<std::string>{"lambda", "whole", "left", "right", "defect"});
    CHECK(num(t.back()[0]) == 1e4);
    for (std::size_t i = 1; i < t.size(); ++i) {
      const int d = std::stoi(t[i][4]);
      CHECK(std::abs(d) <= 11);
      CHECK(d == std::stoi(t[i][1]) - std::stoi(t[i][2]) - std::stoi(t[i][3]));
    }
  }
  SUBCASE("grid below the first eigenvalue") {
    const Outcome o = run({"bracket", "--c", "0.3", "--t", "1", "--lambda-min", "0.1", "--lambda-max", "2", "--steps",
                           "5", "--m", kM, "--n", kN});
    REQUIRE(o.code == 0);
    const Table t = parse_csv(o.out);
    REQUIRE(t.size() == 6);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i][4] == "0");
  }
}

TEST_CASE("csv round trip") {
  const Outcome o = run({"curve", "--k", "2", "--sign", "+", "--t-min", "0.01", "--t-max", "100", "--points", "9",
                         "--m", kM, "--n", kN});
  REQUIRE(o.code == 0);
  const Table t = parse_csv(o.out);
  for (std::size_t i = 1; i < t.size(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      const double v = num(t[i][c]);
      CHECK(format_number(v) == t[i][c]);
      CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
    }
    CHECK(t[i][0].find_first_of("0123456789") != std::string::npos);
  }
  // at least six significant digits for values that are not short exact numbers
  CHECK(t[5][1].size() >= 7);
}

TEST_CASE("identical invocations give byte-identical files") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "fucik_cli_det_a.csv";
  const auto b = dir / "fucik_cli_det_b.svg";
  const auto c = dir / "fucik_cli_det_c.svg";
  const std::vector<std::string> table = {"table", "--which", "3", "--output", a.string()};
  REQUIRE(run(table).code == 0);
  const std::string first = slurp(a);
  REQUIRE(run(table).code == 0);
  CHECK(slurp(a) == first);
  CHECK(run({"plot", "--k-max", "3", "--points", "9", "--m", kM, "--n", kN, "-o", b.string()}).code == 0);
  CHECK(run({"plot", "--k-max", "3", "--points", "9", "--m", kM, "--n", kN, "-o", c.string()}).code == 0);
  CHECK(slurp(b) == slurp(c));
  CHECK_FALSE(slurp(b).empty());
  for (const auto& p : {a, b, c}) std::filesystem::remove(p);
}

TEST_CASE("plot with constant weights is symmetric about the diagonal") {
  const Outcome o = run({"plot", "--k-max", "4", "--signs", "+-", "--t-min", "0.01", "--t-max", "100", "--points",
                         "21", "--alpha-max", "400", "--beta-max", "400", "--m", "1", "--n", "1"});
  REQUIRE(o.code == 0);
  const std::string& svg = o.out;
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);

  std::smatch m;
  REQUIRE(std::regex_search(svg, m, std::regex(R"re(class="frame" x="([\d.]+)" y="([\d.]+)" width="([\d.]+)" height="([\d.]+)")re")));
  const double fx = num(m[1]), fy = num(m[2]), fw = num(m[3]), fh = num(m[4]);

  std::vector<std::pair<double, double>> pts;
  int polylines = 0;
  const std::regex poly(R"re(<polyline class="curve"[^>]*points="([^"]*)")re");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), poly); it != std::sregex_iterator(); ++it) {
    ++polylines;
    std::istringstream in((*it)[1].str());
    std::string xy;
    while (in >> xy) {
      const auto comma = xy.find(',');
      const double px = num(xy.substr(0, comma));
      const double py = num(xy.substr(comma + 1));
      pts.emplace_back((px - fx) / fw * 400, (fy + fh - py) / fh * 400);
    }
  }
  CHECK(polylines == 8);
  REQUIRE(pts.size() > 20);
  const double tol = 0.02 * 400 / std::min(fw, fh);
  for (const auto& [a, b] : pts) {
    double best = 1e300;
    for (const auto& [c, d] : pts) best = std::min(best, std::hypot(a - d, b - c));
    CHECK(best <= tol);
  }
  CHECK(std::count(svg.begin(), svg.end(), '\n') > 10);
  CHECK(svg.find("class=\"trivial\"") != std::string::npos);
}

TEST_CASE("curve marks failed rows and exits 3") {
  const Outcome o = run({"curve", "--k", "1", "--sign", "+", "--t-min", "1", "--t-max", "2", "--points", "2", "--m",
                         "1+x", "--n", "1", "--ode-rtol", "1e-300", "--ode-atol", "1e-300"});
  CHECK(o.code == cli::kNumerical);
  const Table t = parse_csv(o.out);
  REQUIRE(t.size() == 3);
  CHECK(t[1][1] == "nan");
  CHECK(t[2][2] == "nan");
  const auto lines = split(o.err, '\n');
  REQUIRE(lines.size() == 2);
  for (const auto& l : lines) CHECK(nlohmann::json::parse(l).at("error") == "numerical");
}
