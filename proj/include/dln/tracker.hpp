#pragma once

// Homotopy continuation for square polynomial systems.
//
//   h(x; t) = (1 - t) f(x) + gamma t g(x),   t: 1 -> 0
//
// with the gamma trick (random unit-modulus gamma) making the path set
// generically smooth.  Tracking runs in projective coordinates: both
// systems are homogenized and a random affine patch row c.X = 1 (derived
// from gamma) closes them to square.  Diverging paths then converge to
// finite at-infinity points instead of blowing up in norm, which keeps
// their conditioning and step sizes sane; they are recognized by the
// homogenizing coordinate heading to zero.  Paths follow the Davidenko ODE
// with an RK4 predictor and a Newton corrector; finite endpoints are
// dehomogenized and refined against f itself.

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "dln/poly.hpp"

namespace dln {

// Flattened evaluator for a system and its Jacobian: per-variable power
// tables, precomputed power-table indices per monomial factor.
class CompiledSystem {
 public:
  explicit CompiledSystem(const PolySystem& f);

  int nvars() const { return nvars_; }
  std::size_t scratch_size() const { return static_cast<std::size_t>(nvars_) * stride_; }

  // Evaluates the system into f_out[0..n) and, when J_out is non-null, the
  // Jacobian into J_out[0..n*n) (row-major).  scratch must hold
  // scratch_size() entries.
  void eval(const Complex* x, Complex* f_out, Complex* J_out, Complex* scratch) const;

  // Magnitude envelope max_i sum_t |c_t| prod |x_v|^e over the system rows:
  // the natural scale of an evaluation, so ||f(x)|| <= tol * envelope is a
  // relative backward-error criterion.  rscratch holds scratch_size() doubles.
  double envelope(const Complex* x, double* rscratch) const;

  double residual(std::span<const Complex> x) const;

 private:
  void compile(const Polynomial& p);

  int nvars_ = 0;
  int stride_ = 1;  // max exponent + 1
  struct Range {
    std::uint32_t begin = 0, end = 0;
  };
  std::vector<Range> poly_terms_;     // nvars entries for f, then nvars^2 for J
  std::vector<Complex> term_coeff_;
  std::vector<Range> term_factors_;
  std::vector<std::uint32_t> factor_pw_;  // index into the power table
};

struct TrackOptions {
  double step_init = 0.05;
  double step_min = 1e-10;
  double step_max = 0.1;
  // Corrector acceptance is backward error: ||h(x,t)|| <= newton_tol * the
  // magnitude envelope of the evaluation, so it is invariant under scaling
  // of the system or the point.
  double newton_tol = 1e-10;
  int newton_max_iters = 4;
  int corrector_failures_to_shrink = 1;
  double step_grow_factor = 2.0;
  double step_shrink_factor = 0.5;
  double diverge_norm = 1e6;
  double t_end = 1e-12;
  std::uint64_t path_budget = 1000000;
  int threads = 0;  // 0 = hardware concurrency
};

enum class PathStatus { Success, Diverged, Failed };

struct PathResult {
  PathStatus status = PathStatus::Failed;
  std::vector<Complex> point;
  double t_reached = 1.0;
  double residual = 0.0;
  double min_pivot = 0.0;  // endpoint Jacobian LU proxy (Success only)
  int steps = 0;
};

struct Homotopy {
  Homotopy(PolySystem f_in, PolySystem g_in, Complex gamma_in);

  PolySystem f, g;
  Complex gamma;
  // Affine compilations (start checks, endpoint refinement) and the patched
  // projective pair actually tracked: homogenize(f) and homogenize(g), each
  // closed with the shared patch row sum_j patch[j] x_j - 1 as the last
  // equation.  patch has nvars+1 unit-modulus entries derived from gamma.
  std::shared_ptr<const CompiledSystem> cf, cg;
  std::shared_ptr<const CompiledSystem> cfp, cgp;
  std::vector<Complex> patch;
};

// Total-degree start system x_i^{d_i} - 1 with its full root grid,
// enumerated lazily in mixed-radix order (last variable fastest; index 0 is
// the all-ones point).
struct StartSystem {
  int nvars = 0;
  std::vector<int> degrees;
  std::uint64_t count = 0;
  std::vector<std::vector<Complex>> unit_roots;  // per variable

  PolySystem system() const;
  std::vector<Complex> point(std::uint64_t index) const;
};

// Throws std::invalid_argument for non-square systems or zero/constant
// polynomials, BudgetExceededError when the root count exceeds the budget.
StartSystem total_degree_start(const PolySystem& f, std::uint64_t budget);

PathResult track_path(const Homotopy& h, std::span<const Complex> start,
                      const TrackOptions& opts);

struct SolutionPoint {
  std::vector<Complex> coords;
  double residual = 0.0;
  double min_pivot = 0.0;
  std::uint64_t start_index = 0;
};

struct SolutionSet {
  int nvars = 0;
  Complex gamma;
  std::uint64_t seed = 0;
  std::uint64_t n_success = 0, n_diverged = 0, n_failed = 0;
  std::vector<SolutionPoint> points;  // deduplicated, canonically sorted

  // Failed paths always flag a run.  So does duplicate coverage: for a
  // generic gamma each simple root is the limit of exactly one path, so
  // more successes than distinct points means a tracker jumped between
  // paths and some root may have lost its incoming path to the collision.
  bool clean() const { return n_failed == 0 && n_success == points.size(); }
  std::uint64_t n_paths() const { return n_success + n_diverged + n_failed; }
};

// Ab-initio solve: total-degree start, gamma from the seed (uniform on the
// unit circle, never 1).
SolutionSet solve_total_degree(const PolySystem& f, const TrackOptions& opts,
                               std::uint64_t seed);

// Coefficient-parameter continuation from the known roots of f_from to
// f_to, h = (1 - t) f_to + gamma t f_from.
SolutionSet parameter_track(const PolySystem& f_from, const PolySystem& f_to,
                            const SolutionSet& known, const TrackOptions& opts,
                            std::uint64_t seed);

struct RefineResult {
  std::vector<Complex> point;
  double residual = 0.0;
  double min_pivot = 0.0;
  int iters = 0;
};

// Newton refinement against f until the step infinity-norm drops below tol
// or 20 iterations; throws RefineFailedError when the step norm grows three
// times in a row.  A singular Jacobian stops iteration and reports the
// failing pivot magnitude as min_pivot.
RefineResult refine(const PolySystem& f, std::span<const Complex> point, double tol);

}  // namespace dln
