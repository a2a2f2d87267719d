#include "dln/tracker.hpp"
#include <cstdio>
#include <cstdlib>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "dln/errors.hpp"
#include "dln/linalg.hpp"
#include "dln/parallel.hpp"
#include "dln/rng.hpp"

namespace dln {

// ---------------------------------------------------------------------------
// parallel_for

int effective_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {
thread_local bool in_parallel_region = false;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const int T = effective_threads(threads);
  if (T <= 1 || n <= 1 || in_parallel_region) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    in_parallel_region = true;
    std::size_t i;
    while ((i = next.fetch_add(1)) < n) {
      if (failed.load(std::memory_order_relaxed)) break;
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        break;
      }
    }
    in_parallel_region = false;
  };
  std::vector<std::thread> pool;
  const int spawn = std::min<std::size_t>(T, n) - 1;
  pool.reserve(spawn);
  for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// CompiledSystem

CompiledSystem::CompiledSystem(const PolySystem& f) {
  nvars_ = f.nvars;
  int max_exp = 1;
  for (const auto& p : f.polys)
    for (const auto& t : p.terms())
      for (const auto& [v, e] : t.mono.exps) max_exp = std::max(max_exp, static_cast<int>(e));
  stride_ = max_exp + 1;

  for (const auto& p : f.polys) compile(p);
  const PolyMatrix J = jacobian(f);
  for (const auto& p : J.entries) compile(p);
}

void CompiledSystem::compile(const Polynomial& p) {
  Range pr;
  pr.begin = static_cast<std::uint32_t>(term_coeff_.size());
  for (const auto& t : p.terms()) {
    Range fr;
    fr.begin = static_cast<std::uint32_t>(factor_pw_.size());
    for (const auto& [v, e] : t.mono.exps)
      factor_pw_.push_back(static_cast<std::uint32_t>(v) * stride_ + e);
    fr.end = static_cast<std::uint32_t>(factor_pw_.size());
    term_factors_.push_back(fr);
    term_coeff_.push_back(t.coeff);
  }
  pr.end = static_cast<std::uint32_t>(term_coeff_.size());
  poly_terms_.push_back(pr);
}

void CompiledSystem::eval(const Complex* x, Complex* f_out, Complex* J_out,
                          Complex* scratch) const {
  const int n = nvars_;
  for (int v = 0; v < n; ++v) {
    Complex* pw = scratch + static_cast<std::size_t>(v) * stride_;
    pw[0] = Complex(1.0, 0.0);
    for (int e = 1; e < stride_; ++e) pw[e] = pw[e - 1] * x[v];
  }
  auto eval_poly = [&](const Range& pr) {
    Complex acc(0.0, 0.0);
    for (std::uint32_t t = pr.begin; t < pr.end; ++t) {
      Complex m = term_coeff_[t];
      const Range fr = term_factors_[t];
      for (std::uint32_t k = fr.begin; k < fr.end; ++k) m *= scratch[factor_pw_[k]];
      acc += m;
    }
    return acc;
  };
  const std::size_t np = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i < np; ++i) f_out[i] = eval_poly(poly_terms_[i]);
  if (J_out)
    for (std::size_t i = 0; i < np * np; ++i) J_out[i] = eval_poly(poly_terms_[np + i]);
}

double CompiledSystem::envelope(const Complex* x, double* rscratch) const {
  const int n = nvars_;
  for (int v = 0; v < n; ++v) {
    double* pw = rscratch + static_cast<std::size_t>(v) * stride_;
    pw[0] = 1.0;
    const double a = std::abs(x[v]);
    for (int e = 1; e < stride_; ++e) pw[e] = pw[e - 1] * a;
  }
  double env = 0.0;
  for (int i = 0; i < n; ++i) {
    const Range pr = poly_terms_[i];
    double acc = 0.0;
    for (std::uint32_t t = pr.begin; t < pr.end; ++t) {
      double m = std::abs(term_coeff_[t]);
      const Range fr = term_factors_[t];
      for (std::uint32_t k = fr.begin; k < fr.end; ++k) m *= rscratch[factor_pw_[k]];
      acc += m;
    }
    env = std::max(env, acc);
  }
  return env;
}

double CompiledSystem::residual(std::span<const Complex> x) const {
  std::vector<Complex> scratch(scratch_size());
  std::vector<Complex> f(nvars_);
  eval(x.data(), f.data(), nullptr, scratch.data());
  double r = 0.0;
  for (const auto& v : f) r = std::max(r, std::abs(v));
  return r;
}

// ---------------------------------------------------------------------------
// Homotopy and start systems

Homotopy::Homotopy(PolySystem f_in, PolySystem g_in, Complex gamma_in)
    : f(std::move(f_in)), g(std::move(g_in)), gamma(gamma_in) {
  if (f.nvars != g.nvars) throw std::invalid_argument("homotopy systems must share nvars");
  if (f.polys.size() != g.polys.size())
    throw std::invalid_argument("homotopy systems must have equal size");
  if (static_cast<int>(f.polys.size()) != f.nvars)
    throw std::invalid_argument("homotopy requires a square system");
  cf = std::make_shared<const CompiledSystem>(f);
  cg = std::make_shared<const CompiledSystem>(g);

  // Patched projective pair.  The shared patch row c.X - 1 closes both
  // homogenizations to square; under h = (1-t)F + gamma t G that row becomes
  // (1-t+gamma t)(c.X - 1), which keeps the patch's zero set (the prefactor
  // never vanishes for unit gamma != -1) and automatically gives the patch a
  // zero time derivative on it.  Deriving the patch from gamma keeps every
  // run reproducible from its seed and gives retries a fresh patch for free.
  const std::uint64_t hi = std::bit_cast<std::uint64_t>(gamma.real());
  const std::uint64_t lo = std::bit_cast<std::uint64_t>(gamma.imag());
  CounterRng prng(derive_seed(hi ^ (lo << 1) ^ (lo >> 63), 0x70617463));
  patch.resize(static_cast<std::size_t>(f.nvars) + 1);
  std::vector<Term> row;
  row.reserve(patch.size() + 1);
  for (int j = 0; j <= f.nvars; ++j) {
    patch[j] = prng.next_unit_circle();
    row.push_back({patch[j], Monomial{{{j, 1}}}});
  }
  row.push_back({Complex(-1.0, 0.0), Monomial{}});
  const Polynomial patch_row = Polynomial::from_terms(f.nvars + 1, std::move(row));
  PolySystem fh = homogenize(f);
  PolySystem gh = homogenize(g);
  fh.polys.push_back(patch_row);
  gh.polys.push_back(patch_row);
  cfp = std::make_shared<const CompiledSystem>(fh);
  cgp = std::make_shared<const CompiledSystem>(gh);
}

PolySystem StartSystem::system() const {
  PolySystem g;
  g.nvars = nvars;
  for (int i = 0; i < nvars; ++i) {
    std::vector<Term> terms;
    terms.push_back({Complex(1.0, 0.0), Monomial{{{i, degrees[i]}}}});
    terms.push_back({Complex(-1.0, 0.0), Monomial{}});
    g.polys.push_back(Polynomial::from_terms(nvars, std::move(terms)));
  }
  return g;
}

std::vector<Complex> StartSystem::point(std::uint64_t index) const {
  std::vector<Complex> x(nvars);
  std::uint64_t rem = index;
  for (int v = nvars - 1; v >= 0; --v) {
    const std::uint64_t d = degrees[v];
    x[v] = unit_roots[v][rem % d];
    rem /= d;
  }
  return x;
}

StartSystem total_degree_start(const PolySystem& f, std::uint64_t budget) {
  if (static_cast<int>(f.polys.size()) != f.nvars)
    throw std::invalid_argument("total-degree start requires a square system");
  if (f.nvars == 0) throw std::invalid_argument("empty system");
  StartSystem s;
  s.nvars = f.nvars;
  s.degrees = f.degrees();
  unsigned __int128 count = 1;
  for (const int d : s.degrees) {
    if (d < 1)
      throw std::invalid_argument("zero or constant polynomial has no total-degree start");
    count *= static_cast<unsigned>(d);
    if (count > budget) {
      const std::uint64_t req =
          count > static_cast<unsigned __int128>(UINT64_MAX)
              ? UINT64_MAX
              : static_cast<std::uint64_t>(count);
      throw BudgetExceededError(req, budget);
    }
  }
  s.count = static_cast<std::uint64_t>(count);
  s.unit_roots.resize(s.nvars);
  for (int v = 0; v < s.nvars; ++v) {
    const int d = s.degrees[v];
    s.unit_roots[v].resize(d);
    for (int k = 0; k < d; ++k) {
      const double a = 2.0 * std::numbers::pi * k / d;
      s.unit_roots[v][k] = {std::cos(a), std::sin(a)};
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Path tracking

namespace {

struct TrackWorkspace {
  explicit TrackWorkspace(const Homotopy& h)
      : TrackWorkspace(h.cfp->nvars(),
                       std::max({h.cf->scratch_size(), h.cg->scratch_size(),
                                 h.cfp->scratch_size(), h.cgp->scratch_size()})) {}

  // n is the tracked dimension: projective nvars+1 when built from a
  // Homotopy, plain nvars for standalone refinement.
  TrackWorkspace(int n, std::size_t sc) {
    scratch.resize(sc);
    renv.resize(sc);
    fv.resize(n);
    gv.resize(n);
    Jf.resize(static_cast<std::size_t>(n) * n);
    Jg.resize(static_cast<std::size_t>(n) * n);
    J.resize(static_cast<std::size_t>(n) * n);
    rhs.resize(n);
    x.resize(n);
    xs.resize(n);
    xa.resize(n);
    k.assign(4, std::vector<Complex>(n));
    piv.resize(n);
  }
  std::vector<Complex> scratch, fv, gv, Jf, Jg, J, rhs, x, xs, xa;
  std::vector<double> renv;
  std::vector<std::vector<Complex>> k;
  std::vector<int> piv;
};

double norm_inf(std::span<const Complex> v) {
  double r = 0.0;
  for (const auto& c : v) r = std::max(r, std::abs(c));
  return r;
}

// Davidenko velocity dX/dt = -J_h^{-1} dh/dt at (y, t) in the patched
// projective coordinates.  Returns false on a singular Jacobian.
bool velocity(const Homotopy& h, TrackWorkspace& w, const Complex* y, double t,
              Complex* out) {
  const int n = h.cfp->nvars();
  h.cfp->eval(y, w.fv.data(), w.Jf.data(), w.scratch.data());
  h.cgp->eval(y, w.gv.data(), w.Jg.data(), w.scratch.data());
  const Complex a(1.0 - t, 0.0);
  const Complex b = h.gamma * t;
  for (std::size_t i = 0; i < w.J.size(); ++i) w.J[i] = a * w.Jf[i] + b * w.Jg[i];
  // dh/dt = gamma g - f
  for (int i = 0; i < n; ++i) out[i] = h.gamma * w.gv[i] - w.fv[i];
  const LuInfo info = lu_factor_inplace(w.J.data(), n, w.piv.data(), 1e-14);
  if (!info.ok()) return false;
  lu_solve_inplace(w.J.data(), n, w.piv.data(), out);
  for (int i = 0; i < n; ++i) out[i] = -out[i];
  return true;
}

// Newton corrector for h(., t).  Accepts on backward error: the homotopy
// residual must drop below newton_tol times the magnitude envelope of the
// evaluation, a scale-invariant floor that stays reachable both for large
// coefficients and along escaping paths.  Returns the number of Newton
// steps spent (feeding the step-size controller), or -1 on failure.
int correct(const Homotopy& h, TrackWorkspace& w, Complex* y, double t,
            const TrackOptions& opts, double* first_move = nullptr) {
  const int n = h.cfp->nvars();
  const Complex a(1.0 - t, 0.0);
  const Complex b = h.gamma * t;
  const double scale = std::max(
      1.0, (1.0 - t) * h.cfp->envelope(y, w.renv.data()) +
               t * h.cgp->envelope(y, w.renv.data()));
  const double accept = opts.newton_tol * scale;
  for (int it = 0; it <= opts.newton_max_iters; ++it) {
    h.cfp->eval(y, w.fv.data(), nullptr, w.scratch.data());
    h.cgp->eval(y, w.gv.data(), nullptr, w.scratch.data());
    double hnorm = 0.0;
    for (int i = 0; i < n; ++i) {
      w.rhs[i] = a * w.fv[i] + b * w.gv[i];
      hnorm = std::max(hnorm, std::abs(w.rhs[i]));
    }
    if (std::getenv("DLN_NEWTON"))
      std::fprintf(stderr, "  NW it=%d t=%.3e hn/acc=%.3e\n", it, t, hnorm / accept);
    if (hnorm <= accept) return it;
    if (it == opts.newton_max_iters) return -1;
    h.cfp->eval(y, w.fv.data(), w.Jf.data(), w.scratch.data());
    h.cgp->eval(y, w.gv.data(), w.Jg.data(), w.scratch.data());
    for (std::size_t i = 0; i < w.J.size(); ++i) w.J[i] = a * w.Jf[i] + b * w.Jg[i];
    const LuInfo info = lu_factor_inplace(w.J.data(), n, w.piv.data(), 1e-14);
    if (!info.ok()) return -1;
    lu_solve_inplace(w.J.data(), n, w.piv.data(), w.rhs.data());
    double dn = 0.0;
    for (int i = 0; i < n; ++i) {
      dn = std::max(dn, std::abs(w.rhs[i]));
      y[i] -= w.rhs[i];
    }
    if (first_move && it == 0) *first_move = dn;
  }
  return -1;
}

// Newton against f = h(., 0); fills residual/min_pivot.  Returns false when
// refinement diverged (three consecutive growing steps).
bool refine_endpoint(const CompiledSystem& cs, TrackWorkspace& w, Complex* y,
                     double tol, double* residual, double* min_pivot, int* iters) {
  const int n = cs.nvars();
  double prev_step = std::numeric_limits<double>::infinity();
  int growing = 0, stalled = 0;
  double last_pivot = 0.0;
  for (int it = 0; it < 20; ++it) {
    if (iters) *iters = it + 1;
    cs.eval(y, w.fv.data(), w.Jf.data(), w.scratch.data());
    std::copy(w.Jf.begin(), w.Jf.end(), w.J.begin());
    const LuInfo info = lu_factor_inplace(w.J.data(), n, w.piv.data(), 1e-14);
    last_pivot = info.min_pivot;
    if (!info.ok()) break;  // singular endpoint: report as-is
    std::copy(w.fv.begin(), w.fv.end(), w.rhs.begin());
    lu_solve_inplace(w.J.data(), n, w.piv.data(), w.rhs.data());
    double step = 0.0;
    for (int i = 0; i < n; ++i) {
      y[i] -= w.rhs[i];
      step = std::max(step, std::abs(w.rhs[i]));
    }
    if (step > prev_step) {
      if (++growing >= 3) return false;
    } else {
      growing = 0;
    }
    // Quadratic phase halves the step at worst; anything slower twice in a
    // row means the rounding floor, where further sweeps cannot help.
    stalled = step >= 0.5 * prev_step ? stalled + 1 : 0;
    prev_step = step;
    if (step < tol || stalled >= 2) break;
  }
  cs.eval(y, w.fv.data(), w.Jf.data(), w.scratch.data());
  double r = 0.0;
  for (int i = 0; i < n; ++i) r = std::max(r, std::abs(w.fv[i]));
  *residual = r;
  // Pivot proxy at the final point.
  std::copy(w.Jf.begin(), w.Jf.end(), w.J.begin());
  const LuInfo info = lu_factor_inplace(w.J.data(), n, w.piv.data(), 0.0);
  *min_pivot = info.min_pivot > 0.0 && std::isfinite(info.min_pivot) ? info.min_pivot
                                                                     : last_pivot;
  return true;
}

PathResult track_path_ws(const Homotopy& h, TrackWorkspace& w,
                         std::span<const Complex> start, const TrackOptions& opts) {
  const int n = h.cf->nvars();
  PathResult res;
  res.t_reached = 1.0;

  std::copy(start.begin(), start.end(), w.xa.begin());
  h.cg->eval(w.xa.data(), w.gv.data(), nullptr, w.scratch.data());
  if (norm_inf(std::span<const Complex>(w.gv.data(), static_cast<std::size_t>(n))) > 1e-8) {
    res.status = PathStatus::Failed;  // start is not a root of g
    return res;
  }

  // Lift onto the patch: X = [x, 1] / (c . [x, 1]).
  std::copy(start.begin(), start.end(), w.x.begin());
  w.x[n] = Complex(1.0, 0.0);
  Complex cx(0.0, 0.0);
  for (int j = 0; j <= n; ++j) cx += h.patch[j] * w.x[j];
  if (std::abs(cx) < 1e-8 * (1.0 + norm_inf(w.x))) {
    res.status = PathStatus::Failed;  // patch hyperplane grazes the start
    return res;
  }
  for (int j = 0; j <= n; ++j) w.x[j] /= cx;

  // Affine infinity-norm of the tracked point, read off the projective
  // coordinates; infinite once the homogenizing coordinate underflows.
  const auto shadow_norm = [&] {
    const double hmag = std::abs(w.x[n]);
    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(w.x[i]));
    if (!(hmag > 0.0)) return std::numeric_limits<double>::infinity();
    return m / hmag;
  };

  // Mid-path exits report the affine shadow when it is representable, the
  // raw projective coordinates otherwise (diagnostics only).
  const auto diag_point = [&] {
    const double sh = shadow_norm();
    if (std::isfinite(sh)) {
      res.point.resize(n);
      for (int i = 0; i < n; ++i) res.point[i] = w.x[i] / w.x[n];
    } else {
      res.point.assign(w.x.begin(), w.x.end());
    }
  };

  // Shared exit for numerical breakdown mid-path.  A path already past the
  // divergence norm is a resolved escape.  Escapes routinely stall short of
  // that norm (their at-infinity limits have singular Jacobians, so the
  // corrector gives out while the shadow is still ~1e4..1e5); the f-residual
  // separates them from a genuine breakdown on a convergent path, which sits
  // within O(t) of a finite root and keeps f(x(t)) -> 0.  The norm gate keeps
  // the test away from root scale: stationary points live at O(1..1e2) while
  // stalled escapes sit orders above.
  const auto breakdown = [&](double at_t) {
    const double sh = shadow_norm();
    bool diverged = sh > opts.diverge_norm;
    if (!diverged && sh > 1e3 && std::isfinite(sh)) {
      for (int i = 0; i < n; ++i) w.xa[i] = w.x[i] / w.x[n];
      const double fres =
          h.cf->residual(std::span<const Complex>(w.xa.data(), static_cast<std::size_t>(n)));
      diverged = fres > 1e-4 * (1.0 + sh);
    }
    res.status = diverged ? PathStatus::Diverged : PathStatus::Failed;
    res.t_reached = at_t;
    diag_point();
    return res;
  };

  double t = 1.0;
  double step = opts.step_init;
  int failures = 0;
  int micro = 0;
  constexpr int kMaxSteps = 100000;

  while (t > opts.t_end) {
    // The affine path diverged once its norm passes diverge_norm.  In
    // projective coordinates the tracked numbers stay O(1) while the
    // shadow norm grows, so this is a classification, not a breakdown.
    if (shadow_norm() > opts.diverge_norm) {
      res.status = PathStatus::Diverged;
      res.t_reached = t;
      diag_point();
      return res;
    }
    const double xn = norm_inf(w.x);
    // The patch keeps c.X = 1, so coordinates blowing up means the true
    // path crossed the patch hyperplane; a fresh gamma re-patches.
    if (!(xn < 1e8)) return breakdown(t);
    if (res.steps >= kMaxSteps) return breakdown(t);

    // RK4 predictor on dX/dt.  The step is capped by the predicted move
    // relative to the point's scale and by 0.5 t, which bounds the relative
    // truncation error on the Puiseux tails (X(t) - X(0) ~ t^{1/k} near
    // t = 0) where any absolute step is hopeless.
    // Path capture happens in the transition zone (t ~ 0.1..0.6) where the
    // start system hands over to f and neighboring paths brush each other;
    // there the relative step and the predicted move both stay tight.  In
    // the geometric tail the paths have sorted themselves out and escapers
    // crawl t -> 0, so the caps relax to keep the tail affordable.
    const double cap = t > 0.02 ? 0.2 : 0.5;
    double dtr = std::min(step, cap * t);
    bool ok = velocity(h, w, w.x.data(), t, w.k[0].data());
    if (ok) {
      const double vmax = norm_inf(w.k[0]);
      if (vmax > 0.0) dtr = std::min(dtr, cap * (1.0 + xn) / vmax);
    }
    const double dt = std::min(dtr, t - opts.t_end);
    const double tn = t - dt;
    if (std::getenv("DLN_TRACE") &&
        (std::getenv("DLN_TRACE_ALL") || res.steps % 2000 == 0))
      std::fprintf(stderr, "TR step=%d t=%.3e dt=%.2e dt/t=%.2e xn=%.2e sh=%.2e v=%.2e cstep=%.2e\n",
                   res.steps, t, dt, dt / t, xn, shadow_norm(),
                   ok ? norm_inf(w.k[0]) : -1.0, step);
    if (ok) {
      for (int i = 0; i <= n; ++i) w.xs[i] = w.x[i] - 0.5 * dt * w.k[0][i];
      ok = velocity(h, w, w.xs.data(), t - 0.5 * dt, w.k[1].data());
    }
    if (ok) {
      for (int i = 0; i <= n; ++i) w.xs[i] = w.x[i] - 0.5 * dt * w.k[1][i];
      ok = velocity(h, w, w.xs.data(), t - 0.5 * dt, w.k[2].data());
    }
    if (ok) {
      for (int i = 0; i <= n; ++i) w.xs[i] = w.x[i] - dt * w.k[2][i];
      ok = velocity(h, w, w.xs.data(), tn, w.k[3].data());
    }
    if (ok && std::getenv("DLN_KSPREAD")) {
      double d03 = 0.0, n0 = 0.0;
      for (int i = 0; i <= n; ++i) {
        d03 = std::max(d03, std::abs(w.k[3][i] - w.k[0][i]));
        n0 = std::max(n0, std::abs(w.k[0][i]));
      }
      std::fprintf(stderr, "KS t=%.3e dt/t=%.2e spread=%.3e\n", t, dt / t,
                   d03 / (n0 + 1e-300));
    }
    int its = -1;
    if (ok) {
      for (int i = 0; i <= n; ++i)
        w.xs[i] = w.x[i] -
                  (dt / 6.0) * (w.k[0][i] + 2.0 * w.k[1][i] + 2.0 * w.k[2][i] + w.k[3][i]);
      double pmove = 0.0;
      for (int i = 0; i <= n; ++i)
        pmove = std::max(pmove, std::abs(w.x[i] - w.xs[i]));
      double fmove = 0.0;
      its = correct(h, w, w.xs.data(), tn, opts, &fmove);
      ok = its >= 0;
      if (std::getenv("DLN_JUMP") && ok)
        std::fprintf(stderr, "JP t=%.3e dt/t=%.2e pmove=%.3e fmove=%.3e ratio=%.3e\n",
                     t, dt / t, pmove, fmove, fmove / (pmove + 1e-300));
    }

    if (ok) {
      std::swap(w.x, w.xs);
      t = tn;
      ++res.steps;
      failures = 0;
      // The corrector's effort is the cheapest proximity sensor available:
      // near a close encounter with a neighboring path the Newton basin
      // narrows and iterations climb before anything else degrades.  Grow
      // on easy acceptances, back off whenever the full budget was needed,
      // even though the step was accepted.
      if (its + 1 < opts.newton_max_iters)
        step = std::min(step * opts.step_grow_factor, opts.step_max);
      else if (its >= opts.newton_max_iters)
        step = std::max(dt * opts.step_shrink_factor, opts.step_min * t);
      // Accepted steps pinned below the underflow line by the move cap make
      // no t-progress; the controller never rejects, so the plain underflow
      // test below cannot see the stall.  A long pinned run is the same
      // breakdown.
      micro = dtr < opts.step_min * t ? micro + 1 : 0;
      if (micro >= 2000) return breakdown(t);
    } else {
      micro = 0;
      if (++failures >= opts.corrector_failures_to_shrink) {
        // Shrink from the step actually attempted, which a move cap may
        // have taken well below the controller state.
        step = dt * opts.step_shrink_factor;
        failures = 0;
      }
      if (step < opts.step_min * t) return breakdown(t);
    }
  }

  // Endpoint.  A convergent path sits essentially on its root by t_end
  // (distance ~ t_end for a simple root), so refinement must barely move it.
  // Escapes that outran the clock sit at shadow norms 1e3..diverge_norm,
  // orders above any stationary point of these systems; handing them to
  // Newton against f would only pull them across the space onto whichever
  // root happens to attract from afar, miscounting an escape as a success.
  const double sh = shadow_norm();
  if (!(sh < 1e3)) {
    res.status = PathStatus::Diverged;
    res.t_reached = opts.t_end;
    diag_point();
    return res;
  }
  for (int i = 0; i < n; ++i) w.xa[i] = w.x[i] / w.x[n];
  std::copy(w.xa.begin(), w.xa.begin() + n, w.xs.begin());  // tracked affine point
  const double tol = 1e-12 * (1.0 + sh);
  double residual = 0.0, min_pivot = 0.0;
  int iters = 0;
  const bool refined =
      refine_endpoint(*h.cf, w, w.xa.data(), tol, &residual, &min_pivot, &iters);
  const double axn = norm_inf(std::span<const Complex>(w.xa.data(), static_cast<std::size_t>(n)));
  double moved = 0.0;
  for (int i = 0; i < n; ++i) moved = std::max(moved, std::abs(w.xa[i] - w.xs[i]));
  if (refined && residual < 1e-8 && std::isfinite(axn) && moved <= 1e-2 * (1.0 + sh)) {
    res.status = PathStatus::Success;
    res.t_reached = 0.0;
    res.residual = residual;
    res.min_pivot = min_pivot;
    res.point.assign(w.xa.begin(), w.xa.begin() + n);
    return res;
  }
  // Bounded endpoint that is not parked on a root: a slow escape whose
  // shadow stayed under the gate, or a genuine numerical failure.  The
  // f-residual at the tracked point separates them: a convergent path has
  // |f| ~ t_end * |g| there, an escape's residual carries its growing tail.
  const std::span<const Complex> tracked(w.xs.data(), static_cast<std::size_t>(n));
  const double tracked_res = h.cf->residual(tracked);
  res.status = tracked_res > 1e-4 * (1.0 + sh) ? PathStatus::Diverged : PathStatus::Failed;
  res.t_reached = opts.t_end;
  res.point.assign(w.xs.begin(), w.xs.begin() + n);
  return res;
}

// Canonical order: lexicographic over rounded (re, im) coordinate pairs.
std::vector<double> sort_key(const std::vector<Complex>& coords) {
  std::vector<double> key;
  key.reserve(coords.size() * 2);
  for (const auto& c : coords) {
    key.push_back(std::round(c.real() * 1e8) / 1e8);
    key.push_back(std::round(c.imag() * 1e8) / 1e8);
  }
  return key;
}

bool same_point(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double na = 0.0, nb = 0.0, d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na = std::max(na, std::abs(a[i]));
    nb = std::max(nb, std::abs(b[i]));
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d <= 1e-6 * (1.0 + std::max(na, nb));
}

SolutionSet aggregate_paths(const Homotopy& h, std::uint64_t n_starts,
                            const std::function<std::vector<Complex>(std::uint64_t)>& start_at,
                            const TrackOptions& opts, std::uint64_t seed) {
  SolutionSet set;
  set.nvars = h.cf->nvars();
  set.gamma = h.gamma;
  set.seed = seed;

  std::vector<PathResult> results(n_starts);
  const int T = effective_threads(opts.threads);
  if (T <= 1) {
    TrackWorkspace w(h);
    for (std::uint64_t i = 0; i < n_starts; ++i) {
      const auto s = start_at(i);
      results[i] = track_path_ws(h, w, s, opts);
    }
  } else {
    const std::size_t nv = static_cast<std::size_t>(h.cfp->nvars());
    const std::size_t sc = std::max({h.cf->scratch_size(), h.cg->scratch_size(),
                                     h.cfp->scratch_size(), h.cgp->scratch_size()});
    parallel_for(n_starts, T, [&](std::size_t i) {
      thread_local std::unique_ptr<TrackWorkspace> w;
      if (!w || w->x.size() != nv || w->scratch.size() < sc)
        w = std::make_unique<TrackWorkspace>(static_cast<int>(nv), sc);
      const auto s = start_at(i);
      results[i] = track_path_ws(h, *w, s, opts);
    });
  }

  struct Entry {
    std::vector<double> key;
    std::uint64_t index;
  };
  std::vector<Entry> order;
  for (std::uint64_t i = 0; i < n_starts; ++i) {
    switch (results[i].status) {
      case PathStatus::Success:
        ++set.n_success;
        order.push_back({sort_key(results[i].point), i});
        break;
      case PathStatus::Diverged:
        ++set.n_diverged;
        break;
      case PathStatus::Failed:
        ++set.n_failed;
        break;
    }
  }
  std::sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
    if (a.key != b.key) return a.key < b.key;
    return a.index < b.index;
  });
  for (const auto& e : order) {
    const auto& r = results[e.index];
    bool dup = false;
    for (const auto& kept : set.points) {
      if (same_point(kept.coords, r.point)) {
        dup = true;
        break;
      }
    }
    if (!dup) set.points.push_back({r.point, r.residual, r.min_pivot, e.index});
  }
  return set;
}

}  // namespace

PathResult track_path(const Homotopy& h, std::span<const Complex> start,
                      const TrackOptions& opts) {
  if (static_cast<int>(start.size()) != h.cf->nvars())
    throw std::invalid_argument("start point dimension mismatch");
  TrackWorkspace w(h);
  return track_path_ws(h, w, start, opts);
}

SolutionSet solve_total_degree(const PolySystem& f, const TrackOptions& opts,
                               std::uint64_t seed) {
  const StartSystem starts = total_degree_start(f, opts.path_budget);
  CounterRng rng(derive_seed(seed, 0));
  const Complex gamma = rng.next_unit_circle();
  const Homotopy h(f, starts.system(), gamma);
  return aggregate_paths(
      h, starts.count, [&](std::uint64_t i) { return starts.point(i); }, opts, seed);
}

SolutionSet parameter_track(const PolySystem& f_from, const PolySystem& f_to,
                            const SolutionSet& known, const TrackOptions& opts,
                            std::uint64_t seed) {
  if (f_from.nvars != f_to.nvars)
    throw std::invalid_argument("parameter track requires matching nvars");
  if (f_from.polys.size() != f_to.polys.size())
    throw std::invalid_argument("parameter track requires matching system size");
  if (known.nvars != f_from.nvars)
    throw std::invalid_argument("known solution set nvars mismatch");
  CounterRng rng(derive_seed(seed, 0));
  const Complex gamma = rng.next_unit_circle();
  const Homotopy h(f_to, f_from, gamma);
  return aggregate_paths(
      h, known.points.size(),
      [&](std::uint64_t i) { return known.points[i].coords; }, opts, seed);
}

RefineResult refine(const PolySystem& f, std::span<const Complex> point, double tol) {
  if (static_cast<int>(f.polys.size()) != f.nvars)
    throw std::invalid_argument("refine requires a square system");
  if (static_cast<int>(point.size()) != f.nvars)
    throw std::invalid_argument("point dimension mismatch");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const CompiledSystem cs(f);
  TrackWorkspace w(cs.nvars(), cs.scratch_size());
  RefineResult out;
  out.point.assign(point.begin(), point.end());
  const bool ok = refine_endpoint(cs, w, out.point.data(), tol, &out.residual,
                                  &out.min_pivot, &out.iters);
  if (!ok) throw RefineFailedError("refinement diverged: step norms grew three times in a row");
  return out;
}

}  // namespace dln
