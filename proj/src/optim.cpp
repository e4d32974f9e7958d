#include "rmpbe/optim.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "rmpbe/detail/nelder_mead.hpp"
#include "rmpbe/rng.hpp"

namespace rmpbe {

namespace {

Matrix assemble_pencil(const Matrix& J, const std::vector<Matrix>& H, const RealVector& t) {
  Matrix a = J;
  for (std::size_t j = 0; j < H.size(); ++j) a += t(static_cast<Eigen::Index>(j)) * H[j];
  return a;
}

struct SmoothedEval {
  double value = 0.0;      // mu * logsumexp(lambda_i / mu)
  double lambda_max = 0.0;
  RealVector grad;
};

SmoothedEval eval_smoothed(const Matrix& J, const std::vector<Matrix>& H, const RealVector& t,
                           double mu) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(assemble_pencil(J, H, t));
  const RealVector& lam = es.eigenvalues();
  const Matrix& vecs = es.eigenvectors();
  const Eigen::Index n = lam.size();
  const double top = lam(n - 1);

  RealVector weights(n);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    weights(i) = std::exp((lam(i) - top) / mu);
    total += weights(i);
  }
  weights /= total;

  SmoothedEval out;
  out.lambda_max = top;
  out.value = top + mu * std::log(total);
  out.grad = RealVector::Zero(static_cast<Eigen::Index>(H.size()));
  for (std::size_t j = 0; j < H.size(); ++j) {
    double g = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (weights(i) < 1e-16) continue;
      g += weights(i) * std::real(Complex(vecs.col(i).adjoint() * (H[j] * vecs.col(i))));
    }
    out.grad(static_cast<Eigen::Index>(j)) = g;
  }
  return out;
}

}  // namespace

double lambda_max_value(const Matrix& J, const std::vector<Matrix>& H, const RealVector& t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(assemble_pencil(J, H, t),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

OptResult minimize_lambda_max(const Matrix& J, const std::vector<Matrix>& H,
                              const OptOptions& opts) {
  if (H.empty()) throw Error("minimize_lambda_max needs at least one constraint matrix");
  const int r1 = static_cast<int>(H.size());

  Eigen::SelfAdjointEigenSolver<Matrix> ej(J, Eigen::EigenvaluesOnly);
  const double jmin = ej.eigenvalues()(0);
  const double jnorm =
      std::max(std::abs(ej.eigenvalues()(0)), std::abs(ej.eigenvalues()(J.rows() - 1)));
  const double floor_value = jmin - 1e12 * std::max(jnorm, 1e-300);

  RealVector t = RealVector::Zero(r1);
  int iterations = 0;

  // Smoothing continuation: the temperature is lowered geometrically and a
  // BFGS run is warm-started from the previous stage.
  for (double mu = 1e-1; mu >= 0.99e-8; mu *= 0.1) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Identity(r1, r1);
    SmoothedEval cur = eval_smoothed(J, H, t, mu);
    ++iterations;
    int stall = 0;
    for (int it = 0; it < 200 && iterations < opts.max_iterations; ++it) {
      if (cur.value < floor_value)
        throw Unbounded("lambda_max objective dropped below the indefiniteness floor");
      const double gnorm = cur.grad.norm();
      if (gnorm <= std::max(1e-10, 1e-2 * mu) * (1.0 + std::abs(cur.value))) break;

      RealVector dir = -(b * cur.grad);
      if (dir.dot(cur.grad) >= 0.0) {
        dir = -cur.grad;
        b.setIdentity();
      }

      double step = 1.0;
      SmoothedEval next;
      bool moved = false;
      for (int ls = 0; ls < 50; ++ls) {
        const RealVector cand = t + step * dir;
        next = eval_smoothed(J, H, cand, mu);
        ++iterations;
        if (next.value <= cur.value + 1e-4 * step * cur.grad.dot(dir)) {
          const RealVector s = step * dir;
          const RealVector y = next.grad - cur.grad;
          const double sy = s.dot(y);
          if (sy > 1e-12 * s.norm() * y.norm()) {
            const Eigen::MatrixXd bys = b * y * s.transpose();
            b += ((sy + y.dot(b * y)) / (sy * sy)) * (s * s.transpose()) -
                 (bys + bys.transpose()) / sy;
          } else {
            b.setIdentity();
          }
          t = cand;
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
      if (std::abs(cur.value - next.value) <= 1e-12 * (1.0 + std::abs(next.value))) {
        if (++stall >= 5) {
          cur = next;
          break;
        }
      } else {
        stall = 0;
      }
      cur = next;
    }
  }

  // The convex objective never beats its value at t = 0; keep the better
  // point so the result is always a valid bound.
  if (lambda_max_value(J, H, t) > lambda_max_value(J, H, RealVector::Zero(r1)))
    t = RealVector::Zero(r1);

  Eigen::SelfAdjointEigenSolver<Matrix> es(assemble_pencil(J, H, t));
  const RealVector& lam = es.eigenvalues();
  const Eigen::Index nn = lam.size();

  OptResult res;
  res.t_hat = t;
  res.value = lam(nn - 1);
  res.gap = nn >= 2 ? lam(nn - 1) - lam(nn - 2) : std::abs(lam(nn - 1));
  res.iterations = iterations;

  const Vector u = es.eigenvectors().col(nn - 1);
  res.constraint_residuals = RealVector(r1);
  double max_res = 0.0;
  for (int j = 0; j < r1; ++j) {
    const double rj = std::abs(Complex(u.adjoint() * (H[static_cast<std::size_t>(j)] * u)));
    res.constraint_residuals(j) = rj;
    max_res = std::max(max_res, rj);
  }
  res.certificate = u;

  const double simplicity_tol = opts.simplicity_base * (1.0 + std::abs(res.value));
  res.exact = res.gap > simplicity_tol && max_res <= opts.cert_tol;
  return res;
}

Matrix assemble_f(const std::vector<Matrix>& S, const RealVector& t) {
  const std::size_t r1 = S.size();
  Matrix f = Matrix::Zero(S.front().rows(), S.front().cols());
  for (std::size_t j = 0; j + 1 < r1; ++j)
    f += Complex(t(2 * static_cast<Eigen::Index>(j)), t(2 * static_cast<Eigen::Index>(j) + 1)) *
         S[j];
  f += Complex(t(t.size() - 1), 0.0) * S[r1 - 1];
  return f;
}

Matrix assemble_F(const Matrix& J, const Matrix& f) {
  const Eigen::Index n = J.rows();
  Matrix F(2 * n, 2 * n);
  F.topLeftCorner(n, n) = J;
  F.topRightCorner(n, n) = f.conjugate();
  F.bottomLeftCorner(n, n) = f;
  F.bottomRightCorner(n, n) = J.conjugate();
  return F;
}

double lambda2_value(const Matrix& J, const std::vector<Matrix>& S, const RealVector& t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(assemble_F(J, assemble_f(S, t)),
                                           Eigen::EigenvaluesOnly);
  const RealVector& lam = es.eigenvalues();
  return lam(lam.size() - 2);
}

Lambda2Ball estimate_lambda2_ball(const Matrix& J, const std::vector<Matrix>& S,
                                  std::uint64_t seed, ExecPolicy exec) {
  const int q = 2 * static_cast<int>(S.size()) - 1;
  auto sigma2_dir = [&](const RealVector& t) {
    const Matrix f = assemble_f(S, t / t.norm());
    Eigen::JacobiSVD<Matrix> svd(f);
    return svd.singularValues()(1);
  };
  auto sigma1_dir = [&](const RealVector& t) {
    const Matrix f = assemble_f(S, t / t.norm());
    return Eigen::JacobiSVD<Matrix>(f).singularValues()(0);
  };

  Rng rng(seed ^ 0xba11ba11ULL);
  const int samples = 512;
  std::vector<RealVector> dirs;
  dirs.reserve(samples);
  for (int i = 0; i < samples; ++i) dirs.push_back(rng.unit_sphere(q));

  std::vector<double> vals(samples);
  parallel_for(static_cast<std::size_t>(samples), exec,
               [&](std::size_t i) { vals[i] = sigma2_dir(dirs[i]); });

  std::vector<int> order(samples);
  for (int i = 0; i < samples; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return vals[static_cast<std::size_t>(a)] < vals[static_cast<std::size_t>(b)];
  });

  double c = vals[static_cast<std::size_t>(order.front())];
  double scale = 0.0;
  for (int i = 0; i < samples; ++i)
    scale = std::max(scale, sigma1_dir(dirs[static_cast<std::size_t>(i)]));

  // Sampled sigma_2 vanishing means rank(f) < 2 on a full-measure set.
  if (c <= 1e-12 * std::max(1.0, scale))
    throw RankDeficientConstraints("sigma_2(f(t)) vanishes on the unit sphere");

  // Polish the 8 best directions; the objective is scale-free.
  std::vector<double> polished(8);
  parallel_for(8, exec, [&](std::size_t b) {
    auto obj = [&](const RealVector& t) {
      const double nrm = t.norm();
      if (nrm < 1e-12) return 1e300;
      const Matrix f = assemble_f(S, t);
      return Eigen::JacobiSVD<Matrix>(f).singularValues()(1) / nrm;
    };
    const auto nm = detail::nelder_mead(obj, dirs[static_cast<std::size_t>(order[b])], 0.15,
                                        150 * q + 200);
    polished[b] = nm.value;
  });
  for (double v : polished) c = std::min(c, v);

  // Skew-symmetric systems have isolated directions where f vanishes
  // (Omega parallel to Lambda makes f = Lambda^T Lambda (x) (M + M^T) = 0
  // for skew M), so the refined minimum can collapse even though random
  // directions are fine. Floor the estimate by a sample quantile.
  if (c <= 1e-8 * std::max(1.0, scale))
    c = vals[static_cast<std::size_t>(order[samples / 10])];

  Eigen::SelfAdjointEigenSolver<Matrix> ej(J, Eigen::EigenvaluesOnly);
  const double spread = ej.eigenvalues()(J.rows() - 1) - ej.eigenvalues()(0);

  Lambda2Ball ball;
  ball.c = c;
  ball.beta = std::max(2.0 * spread / c, 1.0);
  return ball;
}

std::optional<Vector> extract_certificate_sym(const Matrix& J, const std::vector<Matrix>& S,
                                              const RealVector& t_hat, double cert_tol,
                                              double simplicity_base) {
  const Eigen::Index n = J.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> es(assemble_F(J, assemble_f(S, t_hat)));
  const RealVector& lam = es.eigenvalues();
  const Eigen::Index i2 = lam.size() - 2;
  const double value = lam(i2);
  const double simplicity_tol = simplicity_base * (1.0 + std::abs(value));
  const double gap = std::min(lam(i2 + 1) - lam(i2), lam(i2) - lam(i2 - 1));
  if (gap <= simplicity_tol) return std::nullopt;

  const Vector w = es.eigenvectors().col(i2);
  const Vector w1 = w.head(n);
  const Vector w2c = w.tail(n).conjugate();

  auto residual = [&](const Vector& u) {
    double worst = 0.0;
    for (const Matrix& s : S)
      worst = std::max(worst, std::abs(Complex(u.transpose() * (s * u))));
    return worst;
  };

  std::vector<Vector> candidates = {w1, w2c, w1 + w2c, w1 - w2c};
  for (int l = 0; l < 64; ++l) {
    const double theta = 2.0 * M_PI * static_cast<double>(l) / 64.0;
    candidates.push_back(std::polar(1.0, theta) * w1 + std::polar(1.0, -theta) * w2c);
  }

  for (const Vector& cand : candidates) {
    const double nrm = cand.norm();
    if (nrm < 1e-10) continue;
    const Vector u = cand / nrm;
    if (residual(u) <= cert_tol) return u;
  }
  return std::nullopt;
}

namespace {

struct GradEval {
  double value = 0.0;
  double gap = 0.0;
  RealVector grad;
  bool simple = false;
};

GradEval eval_lambda2_grad(const Matrix& J, const std::vector<Matrix>& S, const RealVector& t) {
  const Eigen::Index n = J.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> es(assemble_F(J, assemble_f(S, t)));
  const RealVector& lam = es.eigenvalues();
  const Eigen::Index i2 = lam.size() - 2;

  GradEval out;
  out.value = lam(i2);
  out.gap = std::min(lam(i2 + 1) - lam(i2), lam(i2) - lam(i2 - 1));
  out.simple = out.gap > 1e-11 * (1.0 + std::abs(out.value));
  if (!out.simple) return out;

  const Vector w = es.eigenvectors().col(i2);
  const Vector w1 = w.head(n);
  const Vector w2 = w.tail(n);
  const int q = 2 * static_cast<int>(S.size()) - 1;
  out.grad = RealVector::Zero(q);
  for (std::size_t j = 0; j < S.size(); ++j) {
    // d psi / d t: w^* dF w with S_j (resp. i S_j) in the off-diagonal blocks.
    const Complex a = (w1.adjoint() * (S[j].conjugate() * w2))(0);
    const Complex b = (w2.adjoint() * (S[j] * w1))(0);
    const double re = std::real(a + b);
    const double im = std::real(kImag * (b - a));
    if (j + 1 < S.size()) {
      out.grad(2 * static_cast<Eigen::Index>(j)) = re;
      out.grad(2 * static_cast<Eigen::Index>(j) + 1) = im;
    } else {
      out.grad(static_cast<Eigen::Index>(q) - 1) = re;
    }
  }
  return out;
}

RealVector polish_descent(const Matrix& J, const std::vector<Matrix>& S, RealVector t,
                          int max_iters, int& iterations) {
  GradEval cur = eval_lambda2_grad(J, S, t);
  ++iterations;
  if (!cur.simple) return t;
  for (int it = 0; it < max_iters; ++it) {
    const double gnorm = cur.grad.norm();
    if (gnorm <= 1e-10 * (1.0 + std::abs(cur.value))) break;
    double step = 0.25 * (1.0 + t.norm()) / (1.0 + gnorm);
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls) {
      const RealVector cand = t - step * cur.grad;
      GradEval next = eval_lambda2_grad(J, S, cand);
      ++iterations;
      if (next.value < cur.value - 1e-4 * step * gnorm * gnorm) {
        t = cand;
        cur = next;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved || !cur.simple) break;
  }
  return t;
}

}  // namespace

OptResult minimize_lambda2(const Matrix& J, const std::vector<Matrix>& S,
                           const OptOptions& opts) {
  OptResult res;

  if (S.empty()) {
    // No constraints: lambda_2(F(0)) is lambda_max(J) (the spectrum of J is
    // doubled) and the top eigenvector of J is a valid certificate.
    Eigen::SelfAdjointEigenSolver<Matrix> es(J);
    const RealVector& lam = es.eigenvalues();
    const Eigen::Index nn = lam.size();
    res.t_hat = RealVector::Zero(0);
    res.value = lam(nn - 1);
    res.gap = nn >= 2 ? lam(nn - 1) - lam(nn - 2) : std::abs(lam(nn - 1));
    res.certificate = es.eigenvectors().col(nn - 1);
    res.constraint_residuals = RealVector::Zero(0);
    res.exact = res.gap > opts.simplicity_base * (1.0 + std::abs(res.value));
    res.iterations = 1;
    return res;
  }

  const int q = 2 * static_cast<int>(S.size()) - 1;
  const Lambda2Ball ball = estimate_lambda2_ball(J, S, opts.seed, opts.exec);

  Rng rng(opts.seed);
  std::vector<RealVector> starts;
  starts.push_back(RealVector::Zero(q));
  for (int s = 0; s < opts.random_starts; ++s) starts.push_back(rng.ball(q, ball.beta));

  struct StartOutcome {
    RealVector t;
    double value = 0.0;
    int iterations = 0;
  };
  std::vector<StartOutcome> outcomes(starts.size());

  auto objective = [&](const RealVector& t) { return lambda2_value(J, S, t); };

  parallel_for(starts.size(), opts.exec, [&](std::size_t s) {
    StartOutcome& out = outcomes[s];
    const double step = std::max(0.05 * ball.beta, 1e-2);
    auto nm = detail::nelder_mead(objective, starts[s], step, 220 * q + 300);
    out.iterations = nm.evals;
    out.t = polish_descent(J, S, nm.x, 120, out.iterations);
    out.value = lambda2_value(J, S, out.t);
  });

  std::size_t best = 0;
  for (std::size_t s = 1; s < outcomes.size(); ++s)
    if (outcomes[s].value < outcomes[best].value) best = s;

  res.t_hat = outcomes[best].t;
  res.value = outcomes[best].value;
  for (const StartOutcome& o : outcomes) res.iterations += o.iterations;

  Eigen::SelfAdjointEigenSolver<Matrix> es(assemble_F(J, assemble_f(S, res.t_hat)),
                                           Eigen::EigenvaluesOnly);
  const RealVector& lam = es.eigenvalues();
  const Eigen::Index i2 = lam.size() - 2;
  res.gap = std::min(lam(i2 + 1) - lam(i2), lam(i2) - lam(i2 - 1));

  res.certificate =
      extract_certificate_sym(J, S, res.t_hat, opts.cert_tol, opts.simplicity_base);
  res.constraint_residuals = RealVector::Zero(static_cast<Eigen::Index>(S.size()));
  if (res.certificate) {
    for (std::size_t j = 0; j < S.size(); ++j)
      res.constraint_residuals(static_cast<Eigen::Index>(j)) =
          std::abs(Complex(res.certificate->transpose() * (S[j] * *res.certificate)));
  }

  const double simplicity_tol = opts.simplicity_base * (1.0 + std::abs(res.value));
  res.exact = res.gap > simplicity_tol && res.certificate.has_value();
  return res;
}

}  // namespace rmpbe
