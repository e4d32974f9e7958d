#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "rmpbe/types.hpp"

namespace rmpbe::detail {

struct NmResult {
  RealVector x;
  double value = 0.0;
  int evals = 0;
};

/// Deterministic Nelder-Mead on R^dim. Ties are broken by insertion order
/// so the result does not depend on floating-point comparison quirks.
template <class F>
NmResult nelder_mead(F&& f, const RealVector& start, double step, int max_evals,
                     double ftol = 1e-12) {
  const int dim = static_cast<int>(start.size());
  NmResult out;
  if (dim == 0) {
    out.x = start;
    out.value = f(start);
    out.evals = 1;
    return out;
  }

  std::vector<RealVector> pts(static_cast<std::size_t>(dim) + 1, start);
  std::vector<double> vals(static_cast<std::size_t>(dim) + 1);
  int evals = 0;
  for (int i = 0; i < dim; ++i) pts[static_cast<std::size_t>(i) + 1](i) += step;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    vals[i] = f(pts[i]);
    ++evals;
  }

  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  auto sort_order = [&] {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  };

  while (evals < max_evals) {
    sort_order();
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];
    if (std::abs(vals[worst] - vals[best]) <= ftol * (1.0 + std::abs(vals[best]))) break;

    RealVector centroid = RealVector::Zero(dim);
    for (std::size_t i : order)
      if (i != worst) centroid += pts[i];
    centroid /= static_cast<double>(dim);

    const RealVector refl = centroid + (centroid - pts[worst]);
    const double frefl = f(refl);
    ++evals;

    if (frefl < vals[best]) {
      const RealVector expa = centroid + 2.0 * (centroid - pts[worst]);
      const double fexpa = f(expa);
      ++evals;
      if (fexpa < frefl) {
        pts[worst] = expa;
        vals[worst] = fexpa;
      } else {
        pts[worst] = refl;
        vals[worst] = frefl;
      }
    } else if (frefl < vals[second_worst]) {
      pts[worst] = refl;
      vals[worst] = frefl;
    } else {
      const bool outside = frefl < vals[worst];
      const RealVector contr =
          outside ? RealVector(centroid + 0.5 * (refl - centroid))
                  : RealVector(centroid + 0.5 * (pts[worst] - centroid));
      const double fcontr = f(contr);
      ++evals;
      if (fcontr < std::min(frefl, vals[worst])) {
        pts[worst] = contr;
        vals[worst] = fcontr;
      } else {
        // Shrink toward the best vertex.
        for (std::size_t i : order) {
          if (i == best) continue;
          pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
          vals[i] = f(pts[i]);
          ++evals;
        }
      }
    }
  }

  sort_order();
  out.x = pts[order.front()];
  out.value = vals[order.front()];
  out.evals = evals;
  return out;
}

}  // namespace rmpbe::detail
