#include "fucik/cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fucik/fucik.hpp"
#include "output.hpp"
#include "plot.hpp"

namespace fucik::cli {

namespace {

constexpr double kSlopeMin = 1e-6;
constexpr double kSlopeMax = 1e6;
constexpr const char* kReferenceM = "1+1/(x+1)";
constexpr const char* kReferenceN = "1+cos(2*x)^2";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Stage { Setup, Compute };

struct Settings {
  std::string m_text;
  std::string n_text;
  double length = 1.0;
  double eps = 1e-4;
  double ode_rtol = 1e-10;
  double ode_atol = 1e-10;
  std::string format = "csv";
  std::string output;
};

void report(std::ostream& err, const std::string& kind, const std::string& message, int code) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  j["exit_code"] = code;
  err << j.dump() << '\n';
}

class Context {
 public:
  Context(const Settings& s, std::ostream& out, std::ostream& err) : settings_(s), out_(&out), err_(err) {
    if (!s.output.empty()) {
      file_.open(s.output, std::ios::binary);
      if (!file_) throw UsageError("cannot open output file " + s.output);
      out_ = &file_;
    }
    tol.bisection_eps = s.eps;
    tol.ode_rel_tol = s.ode_rtol;
    tol.ode_abs_tol = s.ode_atol;
    try {
      tol.validate();
    } catch (const Error&) {
      throw UsageError("tolerances must be positive");
    }
  }

  std::ostream& out() { return *out_; }
  std::ostream& err() { return err_; }
  Format format() const { return settings_.format == "json" ? Format::Json : Format::Csv; }

  Problem problem(bool reference_defaults = false) const {
    std::string m = settings_.m_text;
    std::string n = settings_.n_text;
    if (reference_defaults) {
      if (m.empty()) m = kReferenceM;
      if (n.empty()) n = kReferenceN;
    }
    if (m.empty() || n.empty()) throw UsageError("--m and --n are required");
    return Problem(settings_.length, WeightExpr::parse(m), WeightExpr::parse(n));
  }

  double slope(double t, const std::string& name) {
    if (!(t > 0) || !std::isfinite(t)) throw UsageError(name + " must be positive");
    const double capped = std::clamp(t, kSlopeMin, kSlopeMax);
    if (capped != t) {
      nlohmann::ordered_json j;
      j["warning"] = name + " capped to " + format_number(capped);
      err_ << j.dump() << '\n';
    }
    return capped;
  }

  void row_failure(double t, const std::string& message) {
    nlohmann::ordered_json j;
    j["error"] = "numerical";
    j["t"] = t;
    j["message"] = message;
    err_ << j.dump() << '\n';
  }

  ToleranceConfig tol;

 private:
  const Settings& settings_;
  std::ostream* out_;
  std::ostream& err_;
  std::ofstream file_;
};

Sign parse_sign(const std::string& s) {
  if (s == "+" || s == "plus") return Sign::Plus;
  if (s == "-" || s == "minus") return Sign::Minus;
  throw UsageError("sign must be + or -");
}

std::string sign_text(Sign s) { return std::string(1, to_char(s)); }

void require_k(int k) {
  if (k < 1) throw UsageError("k must be >= 1");
}

// eigen ---------------------------------------------------------------------

struct EigenArgs {
  int k = 0;
  double t = 0.0;
  std::string sign;
  std::string dump_path;
};

int cmd_eigen(Context& ctx, const EigenArgs& a, Stage& stage) {
  require_k(a.k);
  const double t = ctx.slope(a.t, "t");
  const Sign sign = parse_sign(a.sign);
  const Problem problem = ctx.problem();
  stage = Stage::Compute;

  const HalfEigenvalue ev = eigenvalue(problem, a.k, t, sign, ctx.tol);
  RecordWriter w(ctx.out(), ctx.format(), {"k", "t", "sign", "alpha", "beta", "achieved_eps"});
  w.write({std::int64_t{ev.k}, ev.t, sign_text(sign), ev.alpha, ev.beta, ev.achieved_eps});

  if (!a.dump_path.empty()) {
    IntegrateOptions opt;
    opt.record_path = true;
    opt.track_amplitude = true;
    const PruferPath path = integrate_angle(problem, ev.lambda, t, start_angle(problem.left(), sign), problem.begin(),
                                            problem.end(), ctx.tol, opt);
    std::ofstream dump(a.dump_path, std::ios::binary);
    if (!dump) throw UsageError("cannot open path dump file " + a.dump_path);
    write_path_csv(dump, path);
  }
  return kSuccess;
}

// curve ---------------------------------------------------------------------

struct CurveArgs {
  int k = 0;
  std::string sign;
  double t_min = 0.0;
  double t_max = 0.0;
  int points = 0;
  bool linear = false;
};

int write_curve(Context& ctx, const std::vector<double>& grid, const TraceResult& r) {
  RecordWriter w(ctx.out(), ctx.format(), {"t", "alpha", "beta", "k", "sign"});
  const std::string s = sign_text(r.curve.sign);
  std::size_t p = 0;
  std::size_t f = 0;
  for (double t : grid) {
    if (p < r.curve.points.size() && r.curve.points[p].t == t) {
      const CurvePoint& pt = r.curve.points[p++];
      w.write({pt.t, pt.alpha, pt.beta, std::int64_t{r.curve.k}, s});
    } else {
      const double nan = std::nan("");
      w.write({t, nan, nan, std::int64_t{r.curve.k}, s});
      ctx.row_failure(t, f < r.failures.size() ? r.failures[f++].message : "no result");
    }
  }
  return r.failures.empty() ? kSuccess : kNumerical;
}

int cmd_curve(Context& ctx, const CurveArgs& a, Stage& stage) {
  require_k(a.k);
  const Sign sign = parse_sign(a.sign);
  const double lo = ctx.slope(a.t_min, "t-min");
  const double hi = ctx.slope(a.t_max, "t-max");
  if (a.points < 1) throw UsageError("points must be >= 1");
  const std::vector<double> grid = slope_grid(lo, hi, a.points, !a.linear);
  const Problem problem = ctx.problem();
  stage = Stage::Compute;
  return write_curve(ctx, grid, trace_curve(problem, a.k, sign, grid, ctx.tol));
}

// count ---------------------------------------------------------------------

struct CountArgs {
  double lambda = 0.0;
  double t = 0.0;
};

int cmd_count(Context& ctx, const CountArgs& a, Stage& stage) {
  if (!(a.lambda > 0) || !std::isfinite(a.lambda)) throw UsageError("lambda must be positive");
  const double t = ctx.slope(a.t, "t");
  const Problem problem = ctx.problem();
  stage = Stage::Compute;
  const CountResult c = count(problem, a.lambda, t, ctx.tol);
  RecordWriter w(ctx.out(), ctx.format(), {"lambda", "t", "n_plus", "n_minus", "total", "asymptotic_count"});
  w.write({c.lambda, c.t, std::int64_t{c.n_plus}, std::int64_t{c.n_minus}, std::int64_t{c.total},
           asymptotic_count(problem, a.lambda, t)});
  return kSuccess;
}

// table ---------------------------------------------------------------------

struct TableArgs {
  int which = 0;
  bool full = false;
};

struct Row {
  int k = 0;
  double t = 0.0;
  std::optional<double> numeric;
  double asymptotic = 0.0;
  std::string failure;
};

std::vector<Row> solve_rows(const Problem& problem, std::vector<Row> rows, const ToleranceConfig& tol) {
  parallel_for(rows.size(), [&](std::size_t i) {
    Row& r = rows[i];
    r.asymptotic = asymptotic_eigenvalue(problem, r.k, r.t);
    try {
      r.numeric = eigenvalue(problem, r.k, r.t, Sign::Plus, tol).lambda;
    } catch (const Error& e) {
      if (!e.numerical()) throw;
      r.failure = e.what();
    }
  });
  return rows;
}

int cmd_table(Context& ctx, const TableArgs& a, Stage& stage) {
  if (a.which < 1 || a.which > 3) throw UsageError("which must be 1, 2 or 3");
  const Problem problem = ctx.problem(true);
  stage = Stage::Compute;

  if (a.which == 1) {
    const std::vector<double> grid = slope_grid(1e-5, 1e5, 11);
    const TraceResult r = trace_curve(problem, 4, Sign::Plus, grid, ctx.tol);
    RecordWriter w(ctx.out(), ctx.format(), {"t", "alpha", "beta"});
    std::size_t p = 0;
    int code = kSuccess;
    for (double t : grid) {
      if (p < r.curve.points.size() && r.curve.points[p].t == t) {
        const CurvePoint& pt = r.curve.points[p++];
        w.write({pt.t, pt.alpha, pt.beta});
      } else {
        w.write({t, std::nan(""), std::nan("")});
        ctx.row_failure(t, "eigenvalue solve failed");
        code = kNumerical;
      }
    }
    return code;
  }

  std::vector<Row> rows;
  if (a.which == 2) {
    std::vector<int> ks = {10, 50, 100, 200};
    if (a.full) ks.insert(ks.end(), {500, 1000});
    for (int k : ks) rows.push_back({k, 30.0, std::nullopt, 0.0, {}});
  } else {
    for (double t : {0.1, 0.5, 1.0, 5.0, 10.0, 1000.0, 1e5}) rows.push_back({28, t, std::nullopt, 0.0, {}});
  }
  rows = solve_rows(problem, std::move(rows), ctx.tol);

  const std::vector<std::string> cols = a.which == 2
                                            ? std::vector<std::string>{"k", "t", "numeric", "asymptotic", "rel_err"}
                                            : std::vector<std::string>{"t", "k", "numeric", "asymptotic", "rel_err"};
  RecordWriter w(ctx.out(), ctx.format(), cols);
  int code = kSuccess;
  for (const Row& r : rows) {
    const double nan = std::nan("");
    const double numeric = r.numeric.value_or(nan);
    const double rel = std::fabs(numeric - r.asymptotic) / numeric;
    if (!r.numeric) {
      ctx.row_failure(r.t, r.failure);
      code = kNumerical;
    }
    if (a.which == 2) {
      w.write({std::int64_t{r.k}, r.t, numeric, r.asymptotic, rel});
    } else {
      w.write({r.t, std::int64_t{r.k}, numeric, r.asymptotic, rel});
    }
  }
  return code;
}

// bracket -------------------------------------------------------------------

struct BracketArgs {
  double c = 0.0;
  double t = 0.0;
  double lambda_min = 1.0;
  double lambda_max = 0.0;
  int steps = 40;
};

int cmd_bracket(Context& ctx, const BracketArgs& a, Stage& stage) {
  const Problem problem = ctx.problem();
  if (!(a.c > problem.begin() && a.c < problem.end())) throw UsageError("c must lie strictly inside (0, L)");
  const double t = ctx.slope(a.t, "t");
  if (!(a.lambda_min > 0) || !(a.lambda_max >= a.lambda_min) || !std::isfinite(a.lambda_max)) {
    throw UsageError("need 0 < lambda-min <= lambda-max");
  }
  if (a.steps < 1) throw UsageError("steps must be >= 1");
  stage = Stage::Compute;

  std::vector<double> grid(static_cast<std::size_t>(a.steps));
  for (int i = 0; i < a.steps; ++i) {
    grid[static_cast<std::size_t>(i)] =
        a.steps == 1 ? a.lambda_max : a.lambda_min * std::pow(a.lambda_max / a.lambda_min, i / double(a.steps - 1));
  }
  if (a.steps > 1) grid.back() = a.lambda_max;
  std::vector<BracketingCounts> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { out[i] = bracketing_counts(problem, grid[i], t, a.c, ctx.tol); });

  RecordWriter w(ctx.out(), ctx.format(), {"lambda", "whole", "left", "right", "defect"});
  for (const BracketingCounts& b : out) {
    w.write({b.lambda, std::int64_t{b.whole}, std::int64_t{b.left}, std::int64_t{b.right}, std::int64_t{b.defect}});
  }
  return kSuccess;
}

// plot ----------------------------------------------------------------------

struct PlotArgs {
  int k_max = 6;
  std::string signs = "+-";
  double t_min = 1e-3;
  double t_max = 1e3;
  int points = 61;
  double alpha_max = 0.0;
  double beta_max = 0.0;
  int width = 640;
  int height = 640;
};

int cmd_plot(Context& ctx, const PlotArgs& a, Stage& stage) {
  require_k(a.k_max);
  if (a.points < 1) throw UsageError("t grid is empty");
  if (a.width < 100 || a.height < 100) throw UsageError("image must be at least 100x100 pixels");
  if (a.alpha_max < 0 || a.beta_max < 0) throw UsageError("axis ranges must be positive");
  std::vector<Sign> signs;
  if (a.signs.find('+') != std::string::npos) signs.push_back(Sign::Plus);
  if (a.signs.find('-') != std::string::npos) signs.push_back(Sign::Minus);
  if (signs.empty()) throw UsageError("signs must contain + or -");
  const std::vector<double> grid = slope_grid(ctx.slope(a.t_min, "t-min"), ctx.slope(a.t_max, "t-max"), a.points);
  const Problem problem = ctx.problem();
  stage = Stage::Compute;

  std::vector<SpectrumCurve> curves;
  int code = kSuccess;
  double reach = 0.0;
  for (int k = 1; k <= a.k_max; ++k) {
    for (Sign s : signs) {
      TraceResult r = trace_curve(problem, k, s, grid, ctx.tol);
      for (const CurveFailure& f : r.failures) ctx.row_failure(f.t, f.message);
      if (!r.failures.empty()) code = kNumerical;
      curves.push_back(std::move(r.curve));
      if (k == a.k_max) reach = std::max(reach, eigenvalue(problem, k, 1.0, s, ctx.tol).lambda);
    }
  }
  PlotSpec spec;
  spec.alpha_max = a.alpha_max > 0 ? a.alpha_max : 1.25 * reach;
  spec.beta_max = a.beta_max > 0 ? a.beta_max : 1.25 * reach;
  spec.width = a.width;
  spec.height = a.height;
  write_svg(ctx.out(), spec, curves, linear_eigenvalue(problem.m(), problem.length(), 1, ctx.tol),
            linear_eigenvalue(problem.n(), problem.length(), 1, ctx.tol));
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fucik spectrum of -u'' = alpha m(x) u+ - beta n(x) u- with Dirichlet conditions", "fucik"};
  app.require_subcommand(1);

  Settings s;
  app.add_option("--m", s.m_text, "weight m(x), e.g. \"1+1/(x+1)\"");
  app.add_option("--n", s.n_text, "weight n(x), e.g. \"1+cos(2*x)^2\"");
  app.add_option("--L", s.length, "interval length")->capture_default_str();
  app.add_option("--eps", s.eps, "bisection accuracy")->capture_default_str();
  app.add_option("--ode-rtol", s.ode_rtol, "ODE relative tolerance")->capture_default_str();
  app.add_option("--ode-atol", s.ode_atol, "ODE absolute tolerance")->capture_default_str();
  app.add_option("--format", s.format, "csv or json (one object per line)")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--output,-o", s.output, "write records to a file instead of stdout");

  auto sub = [&](const char* name, const char* help) {
    CLI::App* c = app.add_subcommand(name, help);
    c->fallthrough();
    return c;
  };

  EigenArgs ea;
  CLI::App* eigen = sub("eigen", "one half-eigenvalue");
  eigen->add_option("--k", ea.k, "number of nodal domains")->required();
  eigen->add_option("--t", ea.t, "slope of the ray beta = t alpha")->required();
  eigen->add_option("--sign", ea.sign, "sign next to x = 0 (+ or -)")->required();
  eigen->add_option("--dump-path", ea.dump_path, "write the Prufer path (x,phi,rho) as CSV");

  CurveArgs ca;
  CLI::App* curve = sub("curve", "trace one curve over a range of slopes");
  curve->add_option("--k", ca.k)->required();
  curve->add_option("--sign", ca.sign)->required();
  curve->add_option("--t-min", ca.t_min)->required();
  curve->add_option("--t-max", ca.t_max)->required();
  curve->add_option("--points", ca.points)->required();
  curve->add_flag("--log", [&](std::int64_t) { ca.linear = false; }, "logarithmic spacing (default)");
  curve->add_flag("--linear", ca.linear, "linear spacing");

  CountArgs na;
  CLI::App* cnt = sub("count", "spectral counting function");
  cnt->add_option("--lambda", na.lambda)->required();
  cnt->add_option("--t", na.t)->required();

  TableArgs ta;
  CLI::App* table = sub("table", "reproduce a reference table (default weights 1+1/(x+1), 1+cos(2*x)^2)");
  table->add_option("--which", ta.which, "1, 2 or 3")->required();
  table->add_flag("--full", ta.full, "include the long-running rows");

  PlotArgs pa;
  CLI::App* plot = sub("plot", "SVG picture of the first curves");
  plot->add_option("--k-max", pa.k_max)->capture_default_str();
  plot->add_option("--signs", pa.signs, "+, - or +-")->capture_default_str();
  plot->add_option("--t-min", pa.t_min)->capture_default_str();
  plot->add_option("--t-max", pa.t_max)->capture_default_str();
  plot->add_option("--points", pa.points)->capture_default_str();
  plot->add_option("--alpha-max", pa.alpha_max, "0 picks a range from the data");
  plot->add_option("--beta-max", pa.beta_max, "0 picks a range from the data");
  plot->add_option("--width", pa.width)->capture_default_str();
  plot->add_option("--height", pa.height)->capture_default_str();

  BracketArgs ba;
  CLI::App* bracket = sub("bracket", "bracketing defect N(0,L) - N(0,c) - N(c,L) over a lambda grid");
  bracket->add_option("--c", ba.c)->required();
  bracket->add_option("--t", ba.t)->required();
  bracket->add_option("--lambda-max", ba.lambda_max)->required();
  bracket->add_option("--lambda-min", ba.lambda_min)->capture_default_str();
  bracket->add_option("--steps", ba.steps)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    report(err, "usage", e.what(), kUsage);
    return kUsage;
  }

  Stage stage = Stage::Setup;
  try {
    Context ctx(s, out, err);
    int code = kSuccess;
    if (eigen->parsed()) code = cmd_eigen(ctx, ea, stage);
    if (curve->parsed()) code = cmd_curve(ctx, ca, stage);
    if (cnt->parsed()) code = cmd_count(ctx, na, stage);
    if (table->parsed()) code = cmd_table(ctx, ta, stage);
    if (plot->parsed()) code = cmd_plot(ctx, pa, stage);
    if (bracket->parsed()) code = cmd_bracket(ctx, ba, stage);
    ctx.out().flush();
    return code;
  } catch (const UsageError& e) {
    report(err, "usage", e.what(), kUsage);
    return kUsage;
  } catch (const ParseError& e) {
    report(err, "usage", std::string("weight ") + e.what(), kUsage);
    return kUsage;
  } catch (const Error& e) {
    const bool numerical = stage == Stage::Compute && e.numerical();
    const int code = numerical ? kNumerical : kUsage;
    report(err, numerical ? to_string(e.kind()) : "usage", e.what(), code);
    return code;
  } catch (const std::exception& e) {
    report(err, "internal", e.what(), kNumerical);
    return kNumerical;
  }
}

}  // namespace fucik::cli
