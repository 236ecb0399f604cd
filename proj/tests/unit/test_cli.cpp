#include "magbm_cli/commands.hpp"
#include "magbm_cli/config.hpp"
#include "magbm_cli/output.hpp"
#include "magbm/errors.hpp"
#include "magbm/landau.hpp"
#include "magbm/parallel.hpp"

#include <gtest/gtest.h>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace magbm;
using namespace magbm::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::vector<double> column(const Table& t, const std::string& name) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), name);
  EXPECT_NE(it, t.columns.end()) << name;
  const std::size_t j = std::size_t(it - t.columns.begin()) + 1;
  std::vector<double> v;
  for (const auto& r : t.rows) v.push_back(r[j]);
  return v;
}

std::vector<double> sweep(const Table& t) {
  std::vector<double> v;
  for (const auto& r : t.rows) v.push_back(r[0]);
  return v;
}

std::vector<double> local_maxima(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) out.push_back(x[i]);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("magbm_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& body) const {
    std::ofstream(path / name) << body;
    return path / name;
  }
};

RunConfig cfg(const std::string& cmd, const char* doc) { return parse_config(cmd, json::parse(doc)); }

} // namespace

TEST(Config, DefaultsAndResolvedRoundTrip) {
  const RunConfig c = parse_config("sdh", json::object());
  EXPECT_EQ(c.model.kind, "chiral");
  EXPECT_EQ(c.model.alpha1, 1.0);
  EXPECT_EQ(c.field.B, 30.0);
  EXPECT_EQ(c.numeric.N, 24);
  EXPECT_EQ(c.output.format, "csv");
  const json r = c.resolved();
  EXPECT_FALSE(r["output"].contains("path"));
  EXPECT_EQ(parse_config("sdh", r).resolved(), r);
}

TEST(Config, ParsesEverySection) {
  const RunConfig c = cfg("magic", R"({
    "model": {"kind": "antichiral", "alpha0": 0.3, "theta": 0.1, "beta": {"1": 1, "-2": [0.2, -0.1]}, "antichiral_sign": -1},
    "field": {"B": 45, "k": [0.1, 0.2], "A": [{"m1": 1, "m2": 1, "re": 0.5}, {"m1": -1, "m2": 2, "im": -0.5}]},
    "numeric": {"N": 16, "grid_m": 32, "shoulder": 0.4},
    "task": {"sector": 0},
    "output": {"format": "json", "path": "x.json"}})");
  EXPECT_EQ(c.model.kind, "antichiral");
  EXPECT_EQ(c.model.beta.at(-2), cplx(0.2, -0.1));
  EXPECT_EQ(c.model.beta.size(), 2u);
  EXPECT_EQ(c.model.antichiral_sign, -1.0);
  EXPECT_TRUE(c.field.k_set);
  EXPECT_EQ(c.field.k, cplx(0.1, 0.2));
  EXPECT_EQ(c.field.A.coeff.at({-1, 2}), cplx(0, -0.5));
  EXPECT_EQ(c.numeric.N, 16);
  EXPECT_EQ(c.output.path, "x.json");
  EXPECT_EQ(c.dos_model().kind, ModelKind::antichiral);
  EXPECT_EQ(c.dos_model().antichiral_sign, -1.0);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  for (const char* doc : {R"({"extra": 1})", R"({"model": {"alpha": 1}})", R"({"field": {"b": 1}})",
                          R"({"numeric": {"n": 3}})", R"({"output": {"fmt": "csv"}})", R"({"output": {"format": "xml"}})",
                          R"({"model": {"kind": "other"}})", R"({"model": {"beta": [1, 2]}})", R"({"model": {"beta": {"2": 1}}})", R"({"model": {"gamma": {"x": 1}}})", R"({"field": {"B": -1}})",
                          R"({"numeric": {"N": 2.5}})", R"({"field": {"A": [{"m1": 1}]}})", R"({"model": "chiral"})"})
    EXPECT_THROW(parse_config("sdh", json::parse(doc)), ConfigError) << doc;
  RunConfig c = cfg("sdh", R"({"model": {"kind": "free"}, "task": {"betta": 2}})");
  EXPECT_THROW(run_command(c), ConfigError);
  c = cfg("sdh", R"({"model": {"kind": "free"}, "task": {"sweep": {"var": "T"}}})");
  EXPECT_THROW(run_command(c), ConfigError);
  c = cfg("sdh", R"({"model": {"kind": "free"}, "task": {"sweep": {"from": 3, "to": 1}}})");
  EXPECT_THROW(run_command(c), ConfigError);
}

TEST(Config, PotentialPeriodAndSymmetry) {
  const RunConfig c = cfg("bands", R"({"field": {"A": [{"m1": 3, "m2": 0, "re": 0.3}], "A_period": 0.6666666666666666,
                                                "A_rotation_symmetric": true}})");
  EXPECT_EQ(c.field.A.coeff.size(), 3u);
  EXPECT_TRUE(c.field.A.periodic_on(2.0 / 3.0));
  EXPECT_THROW(cfg("bands", R"({"field": {"A": [{"m1": 1, "m2": 0, "re": 0.3}], "A_period": 0.6666666666666666}})"), ConfigError);
  EXPECT_THROW(cfg("bands", R"({"field": {"A_period": 0}})"), ConfigError);
  EXPECT_THROW(cfg("bands", R"({"field": {"A_rotation_symmetric": 1}})"), ConfigError);
  // the resolved config carries the symmetrized field and reproduces it
  const RunConfig again = parse_config("bands", json{{"field", c.resolved()["field"]}});
  EXPECT_EQ(again.field.A.coeff, c.field.A.coeff);
}

TEST(Output, FullPrecisionFloats) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 5.0}) EXPECT_EQ(std::stod(format_double(x)), x);
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(0.0), "0");
}

TEST(Output, CsvAndJsonLayout) {
  Table t;
  t.command = "sdh";
  t.config = {{"a", 1}};
  t.extra = {{"slope", -1.5}};
  t.sweep_name = "mu";
  t.columns = {"x", "y"};
  t.rows = {{0.0, 1.0, 2.0}, {0.5, 3.0, 4.0}};
  const std::string csv = to_csv(t);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], std::string("# magbm ") + MAGBM_VERSION);
  EXPECT_EQ(lines[1], "# command: sdh");
  EXPECT_EQ(lines[2], R"(# config: {"a":1})");
  EXPECT_EQ(lines[3].rfind("# meta: ", 0), 0u);
  EXPECT_EQ(lines[4], "mu,x,y");
  EXPECT_EQ(lines[5], "0,1,2");
  EXPECT_EQ(lines[6], "0.5,3,4");
  const json j = json::parse(to_json(t));
  EXPECT_EQ(j["meta"]["command"], "sdh");
  EXPECT_EQ(j["sweep"].size(), 2u);
  EXPECT_EQ(j["values"].size(), 2u);
}

TEST(Output, AtomicWrite) {
  TempDir d;
  write_atomic((d.path / "a.csv").string(), "hello\n");
  EXPECT_EQ(slurp(d.path / "a.csv"), "hello\n");
  EXPECT_FALSE(fs::exists(d.path / "a.csv.tmp"));
  EXPECT_THROW(write_atomic((d.path / "missing" / "a.csv").string(), "x"), IoError);
}

TEST(Commands, MagicFindsFirstRealAlpha) {
  const Table t = run_command(cfg("magic", R"({"numeric": {"N": 12}, "task": {"sector": 0}})"));
  EXPECT_EQ(t.sweep_name, "re_eig");
  EXPECT_EQ(t.columns, (std::vector<std::string>{"im_eig", "alpha", "convergence_gap"}));
  bool real_row = false;
  for (const auto& r : t.rows) {
    const cplx l(r[0], r[1]);
    if (std::abs(std::imag(1.0 / l)) < 1e-8) real_row = true;
  }
  EXPECT_TRUE(real_row);
  EXPECT_NEAR(t.extra["first_real_alpha"].get<double>(), 0.5856635583896, 1e-6);
  // sorted by |alpha|
  for (std::size_t i = 1; i < t.rows.size(); ++i)
    EXPECT_LE(std::abs(1.0 / cplx(t.rows[i - 1][0], t.rows[i - 1][1])), std::abs(1.0 / cplx(t.rows[i][0], t.rows[i][1])) + 1e-15);
}

TEST(Commands, MagicIndependentOfPeriodicPotential) {
  const Table a = run_command(cfg("magic", R"({"numeric": {"N": 12}, "task": {"sector": 0}})"));
  const Table b = run_command(cfg("magic", R"({"numeric": {"N": 12}, "task": {"sector": 0},
      "field": {"A": [{"m1": 1, "m2": 1, "re": 0.5}, {"m1": -1, "m2": -1, "re": 0.5}]}})"));
  EXPECT_NEAR(a.extra["first_real_alpha"].get<double>(), b.extra["first_real_alpha"].get<double>(), 1e-6);
}

TEST(Commands, MagicRejectsDualLatticeK) {
  TempDir d;
  const fs::path conf = d.write("c.json", R"({"field": {"k": [0, 0]}, "numeric": {"N": 10}})");
  std::string msg;
  EXPECT_EQ(execute("magic", conf.string(), (d.path / "o.csv").string(), "", 1, msg), kNumeric);
  EXPECT_NE(msg.find("k in dual lattice"), std::string::npos) << msg;
  EXPECT_FALSE(fs::exists(d.path / "o.csv"));
}

TEST(Commands, ExitCodes) {
  TempDir d;
  std::string msg;
  const fs::path ok = d.write("ok.json", R"({"model": {"kind": "free"}, "task": {"sweep": {"points": 5}}})");
  EXPECT_EQ(execute("sdh", ok.string(), (d.path / "o.csv").string(), "", 2, msg), kOk) << msg;
  EXPECT_EQ(execute("sdh", ok.string(), (d.path / "o.json").string(), "json", 1, msg), kOk) << msg;
  EXPECT_NO_THROW(json::parse(slurp(d.path / "o.json")));
  EXPECT_EQ(execute("sdh", d.write("bad.json", "{nope").string(), (d.path / "p.csv").string(), "", 1, msg), kConfig);
  EXPECT_EQ(execute("sdh", ok.string(), (d.path / "no" / "p.csv").string(), "", 1, msg), kIo);
  EXPECT_EQ(execute("sdh", (d.path / "absent.json").string(), (d.path / "p.csv").string(), "", 1, msg), kIo);
  EXPECT_EQ(execute("sdh", ok.string(), "", "", 1, msg), kConfig);
  // gap closure is a numeric failure
  const fs::path strong = d.write("s.json", R"({"model": {"kind": "chiral", "alpha1": 1}, "task": {"sweep": {"points": 5}}})");
  EXPECT_EQ(execute("sdh", strong.string(), (d.path / "p.csv").string(), "", 1, msg), kNumeric);
  EXPECT_FALSE(fs::exists(d.path / "p.csv"));
}

TEST(Commands, OutputEmbedsResolvedDefaults) {
  const Table t = run_command(cfg("sdh", R"({"model": {"kind": "free"}, "task": {"sweep": {"points": 5}}})"));
  EXPECT_EQ(t.config["task"]["beta"], 1.5);
  EXPECT_EQ(t.config["task"]["sigma"], 1.0);
  EXPECT_EQ(t.config["numeric"]["cutoff_N"], 5);
  EXPECT_EQ(t.rows.size(), 5u);
}

TEST(Commands, DeterministicAcrossThreadCounts) {
  const char* doc = R"({"model": {"kind": "chiral", "alpha1": 0.2}, "task": {"sweep": {"points": 60}}})";
  set_thread_count(1);
  const std::string one = to_csv(run_command(cfg("qhe", doc)));
  set_thread_count(3);
  const std::string three = to_csv(run_command(cfg("qhe", doc)));
  set_thread_count(1);
  EXPECT_EQ(one, three);
}

TEST(Commands, SdhSmoothedDosPeaksNearLevels) {
  // narrow smoothing; at sigma = 1 neighbouring levels overlap and drag the maxima
  const Table t = run_command(cfg("sdh", R"({"model": {"kind": "free"}, "task": {"sigma": 0.2, "sweep": {"from": -1, "to": 16, "points": 1701}}})"));
  EXPECT_EQ(t.rows.size(), 1701u);
  const auto peaks = local_maxima(sweep(t), column(t, "smoothed_dos"));
  for (int n = 0; n <= 4; ++n) {
    double best = INFINITY;
    for (double p : peaks) best = std::min(best, std::abs(p - landau_level(n, 30.0)));
    EXPECT_LT(best, 0.1) << n;
  }
}

TEST(Commands, QheStaircase) {
  const Table t = run_command(cfg("qhe", R"({"model": {"kind": "free"}, "field": {"B": 50},
      "task": {"beta": 200, "sweep": {"from": 0, "to": 20, "points": 201}}})"));
  const auto mu = sweep(t);
  const auto raw = column(t, "staircase_raw_pi");
  for (int n = 1; n <= 3; ++n) {
    const double l = std::sqrt(100.0 * n);
    double before = 0, after = 0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (std::abs(mu[i] - (l - 0.7)) < 0.05) before = raw[i];
      if (std::abs(mu[i] - (l + 0.7)) < 0.05) after = raw[i];
    }
    EXPECT_NEAR(after - before, 1.0, 1e-2) << n;
  }
}

// M minus its running mean over one period 2/mu^2 in 1/B changes sign at each crossing 1/B = 2n/mu^2.
TEST(Commands, DhvaOscillationsLockToLevelCrossings) {
  const Table t = run_command(cfg("dhva", R"({"model": {"kind": "free"}, "numeric": {"cutoff_N": 12}})"));
  const auto x = sweep(t);
  const auto M = column(t, "magnetization");
  const double P = 2.0 / 25.0, dx = x[1] - x[0];
  const int h = int(std::lround(P / 2 / dx));
  std::vector<double> zeros;
  double prev = 0.0;
  for (int i = h; i + h < int(x.size()); ++i) {
    double s = 0.0;
    for (int j = i - h; j <= i + h; ++j) s += M[std::size_t(j)];
    const double o = M[std::size_t(i)] - s / (2 * h + 1);
    if (prev * o < 0) zeros.push_back(x[std::size_t(i)]);
    prev = o;
  }
  for (int n = 2; n <= 4; ++n) {
    double best = INFINITY;
    for (double z : zeros) best = std::min(best, std::abs(z - 2.0 * n / 25.0));
    EXPECT_LT(best, P / 8) << n;
  }
  const auto chi = column(t, "susceptibility");
  for (double c : chi) EXPECT_TRUE(std::isfinite(c));
}

TEST(Commands, ZeromodeResiduals) {
  const Table l = run_command(cfg("zeromode", R"({"task": {"kind": "landau", "level": 0}, "field": {"k": [0.3, -0.2]}})"));
  EXPECT_LT(l.extra["translation_residual"].get<double>(), 1e-8);
  EXPECT_LT(l.extra["annihilation_residual"].get<double>(), 1e-8);
  const Table p = run_command(cfg("zeromode", R"({"task": {"kind": "periodic"},
      "field": {"A": [{"m1": 1, "m2": 0, "re": 0.3}, {"m1": -1, "m2": 0, "re": 0.3}, {"m1": 0, "m2": 1, "im": 0.2}]}})"));
  EXPECT_LT(p.extra["fft_residual"].get<double>(), 1e-8);
}

TEST(Commands, BandsAndSqueeze) {
  const Table b = run_command(cfg("bands", R"({"model": {"alpha1": 0.5856635583896}, "numeric": {"N": 10},
      "task": {"k_grid": 2, "count": 2, "sector": 0}})"));
  ASSERT_EQ(b.rows.size(), 4u);
  for (const auto& r : b.rows) EXPECT_LT(std::abs(r[3]), 1e-6);
  const Table s = run_command(cfg("squeeze", R"({"task": {"thetas": [0.2, 0.18, 0.16, 0.14, 0.12]}})"));
  EXPECT_LT(s.extra["slope"].get<double>(), 0.0);
  EXPECT_EQ(s.rows.size(), 5u);
}

TEST(Commands, UnknownCommand) {
  RunConfig c = parse_config("plot", json::object());
  EXPECT_THROW(run_command(c), ConfigError);
  EXPECT_EQ(command_names().size(), 8u);
}
