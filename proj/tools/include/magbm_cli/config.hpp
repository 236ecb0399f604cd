#pragma once
#include "magbm/dos.hpp"
#include "magbm/spectra.hpp"

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace magbm::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelSection {
  std::string kind = "chiral";  // free | chiral | antichiral
  double alpha0 = 0.0, alpha1 = 1.0, theta = 0.0;
  std::map<int, cplx> beta{{1, 1.0}}, gamma{{1, 1.0}};
  double antichiral_sign = 1.0;
};

struct FieldSection {
  double B = 30.0;
  cplx k{0.0, 0.0};      // unset: interior default chosen per command
  bool k_set = false;
  FourierSeries A;       // A1 + i A2 on the moire dual lattice
  double lambda_scale = 1.0;
  double A_period = 1.0;           // A must be periodic under A_period * Gamma (2/3 + n protects the antichiral zero)
  bool A_rotation_symmetric = false;  // replace A by its rotation-symmetrized field
};

struct NumericSection {
  int N = 24;            // plane-wave truncation
  int grid_m = 64;
  double delta = 0.125;
  int cutoff_N = 5;
  double shoulder = 0.5;
  double R = 8.0;
  int dense_limit = 1200;
  double modes_per_inverse_theta = 6.0;
  int condition_grid = 32;
};

struct Sweep {
  std::string var = "mu";  // mu | B | invB
  double from = 0.0, to = 16.0;
  int points = 400;

  std::vector<double> values() const;
};

struct OutputSection {
  std::string format = "csv";
  std::string path;
};

struct RunConfig {
  std::string command;
  ModelSection model;
  FieldSection field;
  NumericSection numeric;
  nlohmann::json task = nlohmann::json::object();  // validated per command
  OutputSection output;

  TunnelingModel tunneling() const;
  DosModel dos_model() const;
  // Fully resolved document, every default filled in; output.path excluded.
  nlohmann::json resolved() const;
};

RunConfig parse_config(const std::string& command, const nlohmann::json& doc);
RunConfig load_config(const std::string& command, const std::string& path);

// Typed task accessors with defaults; unknown task keys are rejected by `check_task_keys`.
void check_task_keys(const RunConfig& c, const std::vector<std::string>& allowed);
double task_number(RunConfig& c, const std::string& key, double dflt);
int task_int(RunConfig& c, const std::string& key, int dflt);
std::string task_string(RunConfig& c, const std::string& key, const std::string& dflt);
Sweep task_sweep(RunConfig& c, const Sweep& dflt);
std::vector<double> task_list(RunConfig& c, const std::string& key, std::vector<double> dflt);

} // namespace magbm::cli
