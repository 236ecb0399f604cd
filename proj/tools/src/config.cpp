#include "magbm_cli/config.hpp"
#include "magbm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace magbm::cli {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(what + " must be finite");
  return x;
}

int integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ConfigError(what + " must be an integer");
  return v.get<int>();
}

cplx complex_value(const json& v, const std::string& what) {
  if (v.is_number()) return number(v, what);
  if (v.is_array() && v.size() == 2) return {number(v[0], what), number(v[1], what)};
  throw ConfigError(what + " must be a number or a [re, im] pair");
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

// {"1": c, "-2": c, ...}: keys are the indices n in 3Z+1
std::map<int, cplx> coefficients(const json& v, const std::string& what) {
  if (!v.is_object() || v.empty()) throw ConfigError(what + " must be a non-empty object keyed by n in 3Z+1");
  std::map<int, cplx> out;
  for (const auto& [key, c] : v.items()) {
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != key.size()) throw ConfigError(what + ": key '" + key + "' is not an integer");
    if (((n - 1) % 3 + 3) % 3 != 0) throw ConfigError(what + ": index " + key + " not in 3Z+1");
    out[n] = complex_value(c, what + "." + key);
  }
  return out;
}

json coefficients_json(const std::map<int, cplx>& c) {
  json o = json::object();
  for (const auto& [n, z] : c) o[std::to_string(n)] = complex_json(z);
  return o;
}

void parse_model(const json& j, ModelSection& m) {
  only_keys(j, "model", {"kind", "alpha0", "alpha1", "theta", "beta", "gamma", "antichiral_sign"});
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) throw ConfigError("model.kind must be a string");
    m.kind = j["kind"].get<std::string>();
    if (m.kind != "free" && m.kind != "chiral" && m.kind != "antichiral")
      throw ConfigError("model.kind must be free, chiral or antichiral");
  }
  if (j.contains("alpha0")) m.alpha0 = number(j["alpha0"], "model.alpha0");
  if (j.contains("alpha1")) m.alpha1 = number(j["alpha1"], "model.alpha1");
  if (j.contains("theta")) m.theta = number(j["theta"], "model.theta");
  if (j.contains("beta")) m.beta = coefficients(j["beta"], "model.beta");
  if (j.contains("gamma")) m.gamma = coefficients(j["gamma"], "model.gamma");
  if (j.contains("antichiral_sign")) {
    m.antichiral_sign = number(j["antichiral_sign"], "model.antichiral_sign");
    if (m.antichiral_sign != 1.0 && m.antichiral_sign != -1.0) throw ConfigError("model.antichiral_sign must be +1 or -1");
  }
}

void parse_field(const json& j, FieldSection& f) {
  only_keys(j, "field", {"B", "k", "A", "lambda_scale", "A_period", "A_rotation_symmetric"});
  if (j.contains("B")) f.B = number(j["B"], "field.B");
  if (j.contains("k")) {
    f.k = complex_value(j["k"], "field.k");
    f.k_set = true;
  }
  if (j.contains("lambda_scale")) f.lambda_scale = number(j["lambda_scale"], "field.lambda_scale");
  if (j.contains("A")) {
    if (!j["A"].is_array()) throw ConfigError("field.A must be an array of Fourier modes");
    for (const auto& e : j["A"]) {
      only_keys(e, "field.A entry", {"m1", "m2", "re", "im"});
      if (!e.contains("m1") || !e.contains("m2")) throw ConfigError("field.A entry needs m1 and m2");
      const Mode md{integer(e["m1"], "field.A.m1"), integer(e["m2"], "field.A.m2")};
      const cplx v{e.contains("re") ? number(e["re"], "field.A.re") : 0.0, e.contains("im") ? number(e["im"], "field.A.im") : 0.0};
      if (md.m1 == 0 && md.m2 == 0) throw ConfigError("field.A must not contain the (0, 0) mode");
      f.A.coeff[md] += v;
    }
  }
  if (j.contains("A_rotation_symmetric")) {
    if (!j["A_rotation_symmetric"].is_boolean()) throw ConfigError("field.A_rotation_symmetric must be a boolean");
    f.A_rotation_symmetric = j["A_rotation_symmetric"].get<bool>();
  }
  if (j.contains("A_period")) {
    f.A_period = number(j["A_period"], "field.A_period");
    if (!(f.A_period > 0.0)) throw ConfigError("field.A_period must be positive");
  }
  if (f.A_rotation_symmetric) f.A = f.A.rotation_symmetrized();
  if (!f.A.periodic_on(f.A_period)) throw ConfigError("field.A has modes that are not periodic under A_period * Gamma");
}

void parse_numeric(const json& j, NumericSection& n) {
  only_keys(j, "numeric", {"N", "grid_m", "delta", "cutoff_N", "shoulder", "R", "dense_limit",
                           "modes_per_inverse_theta", "condition_grid"});
  if (j.contains("N")) n.N = integer(j["N"], "numeric.N");
  if (j.contains("grid_m")) n.grid_m = integer(j["grid_m"], "numeric.grid_m");
  if (j.contains("delta")) n.delta = number(j["delta"], "numeric.delta");
  if (j.contains("cutoff_N")) n.cutoff_N = integer(j["cutoff_N"], "numeric.cutoff_N");
  if (j.contains("shoulder")) n.shoulder = number(j["shoulder"], "numeric.shoulder");
  if (j.contains("R")) n.R = number(j["R"], "numeric.R");
  if (j.contains("dense_limit")) n.dense_limit = integer(j["dense_limit"], "numeric.dense_limit");
  if (j.contains("modes_per_inverse_theta"))
    n.modes_per_inverse_theta = number(j["modes_per_inverse_theta"], "numeric.modes_per_inverse_theta");
  if (j.contains("condition_grid")) n.condition_grid = integer(j["condition_grid"], "numeric.condition_grid");
  if (n.grid_m < 4) throw ConfigError("numeric.grid_m must be at least 4");
  if (n.cutoff_N < 1) throw ConfigError("numeric.cutoff_N must be at least 1");
  if (!(n.delta > 0.0 && n.delta < 0.5)) throw ConfigError("numeric.delta must lie in (0, 1/2)");
  if (!(n.R > 0.0)) throw ConfigError("numeric.R must be positive");
}

void parse_output(const json& j, OutputSection& o) {
  only_keys(j, "output", {"format", "path"});
  if (j.contains("format")) {
    if (!j["format"].is_string()) throw ConfigError("output.format must be a string");
    o.format = j["format"].get<std::string>();
  }
  if (j.contains("path")) {
    if (!j["path"].is_string()) throw ConfigError("output.path must be a string");
    o.path = j["path"].get<std::string>();
  }
  if (o.format != "csv" && o.format != "json") throw ConfigError("output.format must be csv or json");
}

} // namespace

std::vector<double> Sweep::values() const {
  if (points < 2) throw ConfigError("sweep needs at least two points");
  if (!(to > from)) throw ConfigError("sweep range must be increasing");
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) v[std::size_t(i)] = i == points - 1 ? to : from + (to - from) * i / (points - 1);
  return v;
}

TunnelingModel RunConfig::tunneling() const {
  TunnelingModel t;
  t.beta = model.beta;
  t.gamma = model.gamma;
  t.alpha0 = model.alpha0;
  t.alpha1 = model.alpha1;
  return t;
}

DosModel RunConfig::dos_model() const {
  DosModel m;
  if (model.kind == "free") m = DosModel::free_model();
  else if (model.kind == "chiral") m = DosModel::chiral(tunneling(), numeric.grid_m);
  else m = DosModel::antichiral(tunneling(), model.theta, numeric.grid_m);
  m.delta = numeric.delta;
  m.antichiral_sign = model.antichiral_sign;
  return m;
}

json RunConfig::resolved() const {
  json A = json::array();
  for (const auto& [md, v] : field.A.coeff) A.push_back({{"m1", md.m1}, {"m2", md.m2}, {"re", v.real()}, {"im", v.imag()}});
  json j;
  j["model"] = {{"kind", model.kind},   {"alpha0", model.alpha0},
                {"alpha1", model.alpha1}, {"theta", model.theta},
                {"beta", coefficients_json(model.beta)}, {"gamma", coefficients_json(model.gamma)},
                {"antichiral_sign", model.antichiral_sign}};
  j["field"] = {{"B", field.B}, {"A", A}, {"lambda_scale", field.lambda_scale}, {"A_period", field.A_period}};
  if (field.k_set) j["field"]["k"] = complex_json(field.k);
  j["numeric"] = {{"N", numeric.N},
                  {"grid_m", numeric.grid_m},
                  {"delta", numeric.delta},
                  {"cutoff_N", numeric.cutoff_N},
                  {"shoulder", numeric.shoulder},
                  {"R", numeric.R},
                  {"dense_limit", numeric.dense_limit},
                  {"modes_per_inverse_theta", numeric.modes_per_inverse_theta},
                  {"condition_grid", numeric.condition_grid}};
  j["task"] = task;
  j["output"] = {{"format", output.format}};
  return j;
}

RunConfig parse_config(const std::string& command, const json& doc) {
  RunConfig c;
  c.command = command;
  only_keys(doc, "config", {"model", "field", "numeric", "task", "output"});
  if (doc.contains("model")) parse_model(doc["model"], c.model);
  if (doc.contains("field")) parse_field(doc["field"], c.field);
  if (doc.contains("numeric")) parse_numeric(doc["numeric"], c.numeric);
  if (doc.contains("output")) parse_output(doc["output"], c.output);
  if (doc.contains("task")) {
    if (!doc["task"].is_object()) throw ConfigError("task must be an object");
    c.task = doc["task"];
  }
  try {
    c.tunneling().validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (!(c.field.B > 0.0)) throw ConfigError("field.B must be positive");
  if (!(c.field.lambda_scale > 0.0)) throw ConfigError("field.lambda_scale must be positive");
  return c;
}

RunConfig load_config(const std::string& command, const std::string& path) {
  if (path.empty()) return parse_config(command, json::object());
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json doc;
  try {
    doc = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(command, doc);
}

void check_task_keys(const RunConfig& c, const std::vector<std::string>& allowed) {
  for (const auto& [k, v] : c.task.items())
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ConfigError("unknown key '" + k + "' in task for command " + c.command);
}

// Readers store the resolved default back so the output metadata is complete.
double task_number(RunConfig& c, const std::string& key, double dflt) {
  if (!c.task.contains(key)) c.task[key] = dflt;
  return number(c.task[key], "task." + key);
}

int task_int(RunConfig& c, const std::string& key, int dflt) {
  if (!c.task.contains(key)) c.task[key] = dflt;
  return integer(c.task[key], "task." + key);
}

std::string task_string(RunConfig& c, const std::string& key, const std::string& dflt) {
  if (!c.task.contains(key)) c.task[key] = dflt;
  if (!c.task[key].is_string()) throw ConfigError("task." + key + " must be a string");
  return c.task[key].get<std::string>();
}

Sweep task_sweep(RunConfig& c, const Sweep& dflt) {
  Sweep s = dflt;
  const json j = c.task.contains("sweep") ? c.task["sweep"] : json::object();
  only_keys(j, "task.sweep", {"var", "from", "to", "points"});
  if (j.contains("var")) {
    if (!j["var"].is_string()) throw ConfigError("task.sweep.var must be a string");
    s.var = j["var"].get<std::string>();
  }
  if (s.var != "mu" && s.var != "B" && s.var != "invB") throw ConfigError("task.sweep.var must be mu, B or invB");
  if (j.contains("from")) s.from = number(j["from"], "task.sweep.from");
  if (j.contains("to")) s.to = number(j["to"], "task.sweep.to");
  if (j.contains("points")) s.points = integer(j["points"], "task.sweep.points");
  s.values();
  if (s.var != "mu" && !(s.from > 0.0)) throw ConfigError("B and 1/B sweeps must stay positive");
  c.task["sweep"] = {{"var", s.var}, {"from", s.from}, {"to", s.to}, {"points", s.points}};
  return s;
}

std::vector<double> task_list(RunConfig& c, const std::string& key, std::vector<double> dflt) {
  if (!c.task.contains(key)) c.task[key] = dflt;
  const json& j = c.task[key];
  if (!j.is_array()) throw ConfigError("task." + key + " must be an array");
  std::vector<double> v;
  for (const auto& e : j) v.push_back(number(e, "task." + key));
  return v;
}

} // namespace magbm::cli
