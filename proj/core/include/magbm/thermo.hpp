#pragma once

namespace magbm {

// n_beta(x) = 1 / (e^{beta x} + 1)
double fermi(double beta, double x);
// f_beta(x) = -log(e^{beta x} + 1) / beta
double fbeta(double beta, double x);

} // namespace magbm
