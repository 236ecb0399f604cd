#include "magbm/thermo.hpp"
#include "magbm/errors.hpp"

#include <cmath>

namespace magbm {

double fermi(double beta, double x) {
  if (!(beta > 0.0)) throw DomainError("fermi: beta must be positive");
  const double t = beta * x;
  const double e = std::exp(-std::abs(t));
  return t > 0 ? e / (1.0 + e) : 1.0 / (1.0 + e);
}

double fbeta(double beta, double x) {
  if (!(beta > 0.0)) throw DomainError("fbeta: beta must be positive");
  const double t = beta * x;
  const double sp = t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
  return -sp / beta;
}

} // namespace magbm
