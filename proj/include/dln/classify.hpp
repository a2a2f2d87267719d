#pragma once

// Landscape statistics over solved gradient systems: real filtering, Hessian
// index, loss labeling, and sign-flip symmetry orbits.

#include <map>
#include <optional>
#include <vector>

#include "dln/net.hpp"
#include "dln/tracker.hpp"

namespace dln {

struct StationaryPoint {
  std::vector<double> weights;
  double loss = 0.0;
  double grad_residual = 0.0;
  int index = 0;                    // eigenvalues < -eig_zero_tol
  double min_abs_eigenvalue = 0.0;
  bool degenerate = false;          // some |eigenvalue| <= eig_zero_tol
  int orbit_id = 0;
  std::vector<double> eigenvalues;  // ascending
};

struct ClassifiedSet {
  std::vector<StationaryPoint> points;  // the real points, input order
  int n_complex = 0;
  int n_real = 0;
  int n_degenerate = 0;
  std::map<int, int> index_histogram;  // non-degenerate points only
  int max_index = -1;                  // over non-degenerate, -1 if none
  std::optional<double> global_min_loss;  // min loss over index-0 points
  bool has_nonglobal_minima = false;
};

// Keeps points with max_i |Im x_i| <= real_tol * (1 + |Re x_i|) and returns
// their real parts.  Input order is preserved.
std::vector<std::vector<double>> filter_real(const SolutionSet& sols,
                                             double real_tol = 1e-6);

// Union-find over all single sign-flip generators; two points are matched
// when their infinity-distance is within tol.  Ids are dense from 0 in
// first-appearance order.
std::vector<int> orbit_partition(const NetworkSpec& spec,
                                 const std::vector<std::vector<double>>& points,
                                 double tol = 1e-6);

// Full per-point classification of the real solutions of the gradient
// system built from (spec, data, reg).  Throws NumericError naming the
// point when the eigensolver fails.
ClassifiedSet classify(const NetworkSpec& spec, const DataMatrices& data,
                       const RegMatrices& reg, const SolutionSet& sols);

// Mean of per-sample ratio vectors ratio_I = N_I / N_real (0 when a sample
// has no real points); indices 0..max_index.
std::vector<double> index_distribution(const std::vector<ClassifiedSet>& samples,
                                       int max_index);

}  // namespace dln
