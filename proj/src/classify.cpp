#include "dln/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dln/errors.hpp"

namespace dln {

std::vector<std::vector<double>> filter_real(const SolutionSet& sols, double real_tol) {
  std::vector<std::vector<double>> out;
  for (const auto& p : sols.points) {
    bool real = true;
    for (const auto& c : p.coords) {
      if (std::abs(c.imag()) > real_tol * (1.0 + std::abs(c.real()))) {
        real = false;
        break;
      }
    }
    if (!real) continue;
    std::vector<double> w(p.coords.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = p.coords[i].real();
    out.push_back(std::move(w));
  }
  return out;
}

namespace {

int uf_find(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

void uf_union(std::vector<int>& parent, int a, int b) {
  a = uf_find(parent, a);
  b = uf_find(parent, b);
  if (a != b) parent[std::max(a, b)] = std::min(a, b);
}

double inf_distance(const std::vector<double>& a, const WeightPoint& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a[i] - b[i].real()) + std::abs(b[i].imag()));
  return d;
}

}  // namespace

std::vector<int> orbit_partition(const NetworkSpec& spec,
                                 const std::vector<std::vector<double>>& points,
                                 double tol) {
  const int n = static_cast<int>(points.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);

  for (int k = 0; k < n; ++k) {
    WeightPoint base(points[k].size());
    for (std::size_t i = 0; i < base.size(); ++i) base[i] = Complex(points[k][i], 0.0);
    for (int j = 1; j <= spec.H; ++j) {
      for (int i = 1; i <= spec.hidden[j - 1]; ++i) {
        const WeightPoint flipped = sign_flip(spec, base, j, i);
        for (int other = 0; other < n; ++other) {
          if (inf_distance(points[other], flipped) <= tol) {
            uf_union(parent, k, other);
            break;
          }
        }
      }
    }
  }

  std::vector<int> ids(n, -1);
  int next = 0;
  for (int k = 0; k < n; ++k) {
    const int root = uf_find(parent, k);
    if (ids[root] < 0) ids[root] = next++;
    ids[k] = ids[root];
  }
  return ids;
}

ClassifiedSet classify(const NetworkSpec& spec, const DataMatrices& data,
                       const RegMatrices& reg, const SolutionSet& sols) {
  spec.validate();
  reg.validate(spec);
  ClassifiedSet set;
  set.n_complex = static_cast<int>(sols.points.size());

  const auto reals = filter_real(sols);
  set.n_real = static_cast<int>(reals.size());

  const Polynomial loss = build_loss(spec, data, reg);
  const PolySystem grad = build_gradient(spec, data, reg);

  for (std::size_t k = 0; k < reals.size(); ++k) {
    StationaryPoint pt;
    pt.weights = reals[k];
    pt.loss = loss.eval_real(pt.weights);

    std::vector<Complex> cw(pt.weights.size());
    for (std::size_t i = 0; i < cw.size(); ++i) cw[i] = Complex(pt.weights[i], 0.0);
    pt.grad_residual = grad.residual(cw);

    const SymmetricRealMatrix Hm = build_hessian_at(spec, data, reg, pt.weights);
    try {
      pt.eigenvalues = sym_eigenvalues(Hm);
    } catch (const NumericError& e) {
      throw NumericError("classify: eigensolver failed at real point " +
                         std::to_string(k) + ": " + e.what());
    }
    double radius = 0.0, min_abs = std::numeric_limits<double>::infinity();
    for (const double ev : pt.eigenvalues) {
      radius = std::max(radius, std::abs(ev));
      min_abs = std::min(min_abs, std::abs(ev));
    }
    const double zero_tol = 1e-8 * (1.0 + radius);
    pt.min_abs_eigenvalue = pt.eigenvalues.empty() ? 0.0 : min_abs;
    pt.index = static_cast<int>(
        std::count_if(pt.eigenvalues.begin(), pt.eigenvalues.end(),
                      [&](double ev) { return ev < -zero_tol; }));
    pt.degenerate = std::any_of(pt.eigenvalues.begin(), pt.eigenvalues.end(),
                                [&](double ev) { return std::abs(ev) <= zero_tol; });
    set.points.push_back(std::move(pt));
  }

  const auto ids = orbit_partition(spec, reals);
  for (std::size_t k = 0; k < set.points.size(); ++k) set.points[k].orbit_id = ids[k];

  for (const auto& pt : set.points) {
    if (pt.degenerate) {
      ++set.n_degenerate;
      continue;
    }
    ++set.index_histogram[pt.index];
    set.max_index = std::max(set.max_index, pt.index);
    if (pt.index == 0 &&
        (!set.global_min_loss || pt.loss < *set.global_min_loss))
      set.global_min_loss = pt.loss;
  }
  if (set.global_min_loss) {
    const double gmin = *set.global_min_loss;
    for (const auto& pt : set.points)
      if (!pt.degenerate && pt.index == 0 &&
          pt.loss - gmin > 1e-6 * (1.0 + std::abs(gmin)))
        set.has_nonglobal_minima = true;
  }
  return set;
}

std::vector<double> index_distribution(const std::vector<ClassifiedSet>& samples,
                                       int max_index) {
  std::vector<double> mean(static_cast<std::size_t>(max_index) + 1, 0.0);
  if (samples.empty()) return mean;
  for (const auto& s : samples) {
    if (s.n_real == 0) continue;
    for (const auto& [idx, count] : s.index_histogram)
      if (idx <= max_index)
        mean[idx] += static_cast<double>(count) / s.n_real;
  }
  for (auto& v : mean) v /= static_cast<double>(samples.size());
  return mean;
}

}  // namespace dln
