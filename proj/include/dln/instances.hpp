#pragma once

// Canned problem instances used by the reproduction recipes and the
// integration suite.  All numbers are the printed inputs of the cases the
// registry names; layouts follow the frozen flat convention (row-major
// matrices, layers ascending).

#include "dln/net.hpp"
#include "dln/poly.hpp"

namespace dln {
namespace instances {

// 2-2 network, one hidden unit, five samples (example2 / example5 cases).
inline NetworkSpec example2_spec() {
  NetworkSpec s;
  s.H = 1;
  s.dx = 2;
  s.dy = 2;
  s.hidden = {1};
  s.m = 5;
  return s;
}

inline DataMatrices example2_data() {
  DataMatrices d;
  d.X = {7, -8, 3, -5, 10, -7, 10, 6, -2, 6};
  d.Y = {9, 9, -8, 1, 10, 10, 3, -8, 9, 10};
  return d;
}

// Printed representatives on the two flat curves of the unregularized
// example2 landscape, flat layout (W1 row-major, then W2).
inline std::vector<double> example2_flat_saddle() {
  return {1.0, 9.6330, 0.0206, -0.0180};
}
inline std::vector<double> example2_flat_minimum() {
  return {1.0, 0.0696, 0.2664, 0.3045};
}

// 3-2-3 network, five samples: the nonglobal-minima instance (table3 /
// table4 cases).  The source prints matrices column by column; these
// vectors are the row-major transcription.
inline NetworkSpec table3_spec() {
  NetworkSpec s;
  s.H = 1;
  s.dx = 3;
  s.dy = 3;
  s.hidden = {2};
  s.m = 5;
  return s;
}

inline DataMatrices table3_data() {
  DataMatrices d;
  d.X = {-0.1297, 0.5236, -2.1491, 0.3252, 0.7313,
         -1.0135, -1.4616, -1.6352, -0.4289, -0.8680,
         0.2523,  1.8664,  1.2240,  0.0116,  0.9282};
  d.Y = {0.6973, -0.6288, 1.0285, -0.9793, 1.0402,
         -0.0452, -0.8566, -0.2397, -1.1334, 1.2315,
         0.1912, -0.3887, -0.4516, 0.0221, 0.5602};
  return d;
}

inline RegMatrices table3_reg() {
  RegMatrices r;
  r.lambdas = {{0.383, 0.6917, 0.9245, 0.298, 0.8805, 0.0813},
               {0.4827, 0.884, 0.1283, 0.1963, 0.2529, 0.1214}};
  return r;
}

// The two printed index-0 loss levels of the table3 instance, in the
// source's loss normalization (twice the 1/2-convention value here).
inline constexpr double table3_loss_a = 7.13717;
inline constexpr double table3_loss_b = 7.16775;

// First printed index-0 solution (flat layout), for refinement seeds.
inline std::vector<double> table3_minimum_row1() {
  return {0.42959, 0.30899, -0.01419, 0.36758, -0.10019, -0.23650,
          -0.50336, -0.11969, 0.33655, -0.14925, -0.01843, 0.54928};
}

// Perturbed toy system: gradient of
//   f(x,y,z) = 2xy + 2xz - 2x - y - z + (2x^2 + y^2 + 3z^2)/1000
// (the example4 case).
PolySystem example4_system();

// Its scalar objective, for Hessian checks.
Polynomial example4_objective();

}  // namespace instances
}  // namespace dln
