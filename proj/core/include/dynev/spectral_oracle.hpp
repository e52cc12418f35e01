#pragma once

#include <iosfwd>
#include <vector>

#include "dynev/sparse.hpp"

namespace dynev {

struct OracleOptions {
  Index max_dim = 512;
  bool vectors = true;
  int max_sweeps = 100;
};

struct ExactSpectrum {
  std::vector<double> eigenvalues;  // descending
  DenseMatrix eigenvectors;         // column i pairs with eigenvalues[i]; empty without vectors
};

/// Cyclic Jacobi. Stops when the off-diagonal Frobenius mass is at most
/// 1e-14 ||A||_F. Throws DimensionError on asymmetry (> 1e-12 relative) or
/// when n exceeds opts.max_dim.
ExactSpectrum exact_spectrum(const DenseMatrix& a, const OracleOptions& opts = {});

double exact_lambda_max(const DenseMatrix& a, Index max_dim = 512);
double exact_lambda_min(const DenseMatrix& a, Index max_dim = 512);
/// max |lambda_i|, the spectral norm of a symmetric matrix.
double exact_spectral_norm(const DenseMatrix& a, Index max_dim = 512);

struct SpectrumProfile {
  double lambda0 = 0.0;
  double eps = 0.0;
  Index n = 0;
  double level_width = 0.0;
  std::vector<std::size_t> levels;      // d_nu
  std::vector<std::size_t> important;   // ascending nu
  std::vector<std::size_t> potentials;  // Phi_j = sum_{nu <= j} d_nu
  std::size_t dim_T = 0;                // eigenvalues >= (1 - 3 eps) lambda0
  std::size_t below = 0;                // the rest
};

double level_width(double eps, Index n);
std::size_t level_count(double eps, Index n);
/// Level of an eigenvalue, or -1 if it lies below (1 - 3 eps) lambda0.
long level_of(double lambda, double lambda0, double eps, Index n);

SpectrumProfile spectrum_profile(const std::vector<double>& eigenvalues, double lambda0, double eps);
SpectrumProfile spectrum_profile(const DenseMatrix& a_t, double lambda0, double eps);

std::vector<SpectrumProfile> potential_trace(const std::vector<DenseMatrix>& snapshots,
                                             double lambda0, double eps);

struct PotentialCheck {
  std::size_t events = 0;
  std::size_t violations = 0;        // (event, j) pairs where Phi_j increased
  std::size_t decreasing_steps = 0;  // consecutive pairs where some Phi_j dropped
  // pairs whose earlier profile has dim_T > 0; once the top band is empty
  // every Phi_j is 0 and nothing can drop
  std::size_t active_pairs = 0;
  std::size_t active_decreasing = 0;
  long first_violation = -1;         // index of the later event
};
PotentialCheck check_potentials(const std::vector<SpectrumProfile>& trace);

/// CSV with header event,j,Phi_j.
void write_potential_csv(std::ostream& out, const std::vector<SpectrumProfile>& trace);

}  // namespace dynev
