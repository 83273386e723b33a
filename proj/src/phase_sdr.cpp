// SPDX-License-Identifier: Apache-2.0
//
// fris-sim: link-level simulation and optimization for fluid reconfigurable
// intelligent surfaces
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "fris/phase_sdr.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fris/numerics.hpp"

namespace fris {

namespace {

constexpr double kLn2 = 0.6931471805599453;

Eigen::MatrixXcd hermitize(const Eigen::MatrixXcd& x) {
  return 0.5 * (x + x.adjoint());
}

double real_inner(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a.array().conjugate() * b.array()).sum().real();
}

double trace_product(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& v) {
  // tr(AV) for Hermitian A, V; real up to rounding.
  return real_inner(a, v);
}

Eigen::MatrixXcd project_psd(const Eigen::MatrixXcd& x) {
  const EigenDecomposition d = hermitian_eig(hermitize(x));
  const Eigen::MatrixXcd half =
      d.eigenvectors * d.eigenvalues.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  return half * half.adjoint();
}

}  // namespace

QuadraticForms build_quadratics(const Eigen::VectorXcd& g_k,
                                const Eigen::MatrixXcd& h, const Precoder& w,
                                Eigen::Index k, double noise_power) {
  const Eigen::Index n = h.rows();
  if (g_k.size() != n || w.W.rows() != h.cols())
    throw std::invalid_argument("build_quadratics: dimension mismatch");
  if (k < 0 || k >= w.W.cols())
    throw std::out_of_range("build_quadratics: user index out of range");

  // With c = diag(g_k^H) H w, |g_k^H diag(v) H w|^2 = v^H (conj(c) conj(c)^H) v.
  const auto cascade = [&](Eigen::Index user) {
    const Eigen::VectorXcd c = g_k.conjugate().asDiagonal() * (h * w.W.col(user));
    const Eigen::VectorXcd q = c.conjugate();
    return Eigen::MatrixXcd(q * q.adjoint());
  };

  QuadraticForms forms;
  forms.noise_power = noise_power;
  forms.signal = cascade(k);
  forms.interference = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < w.W.cols(); ++j)
    if (j != k) forms.interference += cascade(j);
  return forms;
}

std::vector<QuadraticForms> build_all_quadratics(const ChannelRealization& channels,
                                                 const Precoder& w,
                                                 double noise_power) {
  std::vector<QuadraticForms> forms;
  forms.reserve(static_cast<std::size_t>(channels.G.cols()));
  for (Eigen::Index k = 0; k < channels.G.cols(); ++k)
    forms.push_back(build_quadratics(channels.G.col(k), channels.H, w, k, noise_power));
  return forms;
}

double relaxed_sum_rate(const std::vector<QuadraticForms>& forms,
                        const Eigen::MatrixXcd& v) {
  double value = 0.0;
  for (const QuadraticForms& f : forms) {
    const double interf = trace_product(f.interference, v) + f.noise_power;
    const double total = trace_product(f.signal, v) + interf;
    value += std::log2(total) - std::log2(interf);
  }
  return value;
}

double sum_rate_from_forms(const std::vector<QuadraticForms>& forms,
                           const Eigen::VectorXcd& phases) {
  double rate = 0.0;
  for (const QuadraticForms& f : forms) {
    const double signal = (phases.adjoint() * f.signal * phases)(0).real();
    const double interf = (phases.adjoint() * f.interference * phases)(0).real();
    rate += std::log2(1.0 + signal / (interf + f.noise_power));
  }
  return rate;
}

double ConcaveSurrogate::value(const Eigen::MatrixXcd& v) const {
  double out = constant - trace_product(linear_cost, v);
  for (const Eigen::MatrixXcd& f : log_terms) {
    const double arg = trace_product(f, v) + noise_power;
    if (arg <= 0.0) return -std::numeric_limits<double>::infinity();
    out += std::log2(arg);
  }
  return out;
}

Eigen::MatrixXcd ConcaveSurrogate::gradient(const Eigen::MatrixXcd& v) const {
  Eigen::MatrixXcd g = -linear_cost;
  for (const Eigen::MatrixXcd& f : log_terms)
    g += f / ((trace_product(f, v) + noise_power) * kLn2);
  return g;
}

ConcaveSurrogate sca_surrogate(const std::vector<QuadraticForms>& forms,
                               const Eigen::MatrixXcd& v_prev) {
  if (forms.empty()) throw std::invalid_argument("sca_surrogate: no users");
  const Eigen::Index n = v_prev.rows();
  ConcaveSurrogate s;
  s.noise_power = forms.front().noise_power;
  s.linear_cost = Eigen::MatrixXcd::Zero(n, n);
  s.constant = 0.0;
  for (const QuadraticForms& f : forms) {
    s.log_terms.push_back(f.signal + f.interference);
    const double denom = trace_product(f.interference, v_prev) + f.noise_power;
    s.linear_cost += f.interference / (denom * kLn2);
    s.constant += -std::log2(denom) + trace_product(f.interference, v_prev) / (denom * kLn2);
  }
  s.linear_cost = hermitize(s.linear_cost);
  return s;
}

Eigen::MatrixXcd project_elliptope(const Eigen::MatrixXcd& x, double tol,
                                   int max_rounds) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXcd z = hermitize(x);
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(n, n);
  for (int round = 0; round < max_rounds; ++round) {
    const Eigen::MatrixXcd y = project_psd(z + p);
    p = z + p - y;
    Eigen::MatrixXcd next = y + q;
    next.diagonal().setOnes();
    q = y + q - next;
    const double gap = (y - next).norm();
    z = next;
    if (gap < tol) break;
  }
  // Certify feasibility: one exact PSD projection, then a congruence scaling
  // that restores the unit diagonal without leaving the cone. Near
  // convergence the diagonal is already ~1 and this is a no-op.
  Eigen::MatrixXcd y = project_psd(z);
  Eigen::VectorXd scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = y(i, i).real();
    scale(i) = d > 1e-12 ? 1.0 / std::sqrt(d) : 0.0;
  }
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) y(i, j) *= scale(i) * scale(j);
  for (Eigen::Index i = 0; i < n; ++i)
    if (scale(i) == 0.0) {
      y.row(i).setZero();
      y.col(i).setZero();
    }
  y.diagonal().setOnes();
  return y;
}

namespace {

// Rows of the factor live on unit spheres, so diag(R R^H) = 1 always holds.
void normalize_rows(Eigen::MatrixXcd& r) {
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    const double norm = r.row(i).norm();
    if (norm > 1e-300)
      r.row(i) /= norm;
    else
      r(i, 0) = Complex(1.0, 0.0);
  }
}

// Tangent projection on the product of spheres.
Eigen::MatrixXcd tangent_project(const Eigen::MatrixXcd& r,
                                 const Eigen::MatrixXcd& g) {
  Eigen::MatrixXcd out = g;
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    const double radial = (g.row(i).conjugate().array() * r.row(i).array())
                              .sum()
                              .real();
    out.row(i) -= radial * r.row(i);
  }
  return out;
}

}  // namespace

LiftedSolution sdp_subproblem(const ConcaveSurrogate& objective, Eigen::Index n,
                              const Eigen::MatrixXcd& warm_start,
                              const SdpOptions& options) {
  if (n == 1) {
    LiftedSolution sol;
    sol.V = Eigen::MatrixXcd::Ones(1, 1);
    sol.objective = objective.value(sol.V);
    sol.iterations = 0;
    return sol;
  }

  // Full-rank factorization V = R R^H: both constraints hold by construction
  // and every feasible V is reachable, so ascent over the row-sphere manifold
  // covers the whole feasible set.
  const Eigen::MatrixXcd v0 = project_elliptope(warm_start);
  const EigenDecomposition dec = hermitian_eig(hermitize(v0));
  Eigen::MatrixXcd r =
      dec.eigenvectors * dec.eigenvalues.cwiseMax(0.0).cwiseSqrt().asDiagonal();
  normalize_rows(r);

  Eigen::MatrixXcd v = r * r.adjoint();
  double value = objective.value(v);
  double step = 1.0;
  std::vector<double> trail;       // accepted values (line-search reference)
  std::vector<double> best_trail;  // running best, for the stagnation stop
  Eigen::MatrixXcd prev_r, prev_grad;

  LiftedSolution sol;
  sol.V = v;
  sol.objective = value;
  bool converged = false;
  for (int it = 1; it <= options.max_iterations; ++it) {
    sol.iterations = it;
    const Eigen::MatrixXcd grad_v = objective.gradient(v);
    if (!grad_v.allFinite()) {
      converged = true;
      break;
    }
    const Eigen::MatrixXcd grad = tangent_project(r, 2.0 * (grad_v * r));
    const double gnorm = grad.norm();
    if (gnorm < 1e-10 * (1.0 + std::abs(value))) {
      converged = true;
      break;
    }

    // Barzilai-Borwein spectral step with a non-monotone (GLL) line search.
    if (prev_r.size() > 0) {
      const Eigen::MatrixXcd s = r - prev_r;
      const double curvature = real_inner(s, prev_grad - grad);
      const double ss = s.squaredNorm();
      if (curvature > 1e-16 * ss)
        step = std::min(std::max(ss / curvature, 1e-12), 1e8);
    }
    prev_r = r;
    prev_grad = grad;

    double reference = value;
    for (std::size_t j = trail.size() > 10 ? trail.size() - 10 : 0;
         j < trail.size(); ++j)
      reference = std::min(reference, trail[j]);

    Eigen::MatrixXcd cand_r;
    Eigen::MatrixXcd cand_v;
    double cand_value = 0.0;
    bool accepted = false;
    for (int back = 0; back < 60 && step > 1e-18; ++back) {
      cand_r = r + step * grad;
      normalize_rows(cand_r);
      cand_v = cand_r * cand_r.adjoint();
      cand_value = objective.value(cand_v);
      const double ascent = real_inner(grad, cand_r - r);
      if (std::isfinite(cand_value) && ascent > 0.0 &&
          cand_value >= reference + 1e-4 * ascent) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      converged = true;  // stationary on the manifold
      break;
    }
    const double move = (cand_v - v).norm();
    r = cand_r;
    v = cand_v;
    value = cand_value;
    trail.push_back(value);
    if (value > sol.objective) {
      sol.V = v;
      sol.objective = value;
    }
    best_trail.push_back(sol.objective);
    bool stalled = move < options.step_tolerance * n;
    if (best_trail.size() >= 30 &&
        best_trail.back() - best_trail[best_trail.size() - 30] <
            1e-9 * (1.0 + std::abs(best_trail.back())))
      stalled = true;
    step *= 1.3;
    if (stalled) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw SdpFailure("sdp_subproblem: iteration cap reached", sol);
  return sol;
}

PhaseConfig extract_rank_one(const LiftedSolution& lifted) {
  const EigenDecomposition d = hermitian_eig(hermitize(lifted.V));
  const double lead = std::max(d.eigenvalues(0), 0.0);
  const Eigen::VectorXcd v = std::sqrt(lead) * d.eigenvectors.col(0);
  PhaseConfig phases(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    phases(i) = std::abs(v(i)) < 1e-12 ? Complex(1.0, 0.0) : v(i) / std::abs(v(i));
  return phases;
}

PhaseOptResult optimize_phases(const ChannelRealization& channels,
                               const Precoder& w, double noise_power,
                               const PhaseConfig& init,
                               const PhaseOptions& options) {
  const Eigen::Index n = channels.H.rows();
  if (init.size() != n)
    throw std::invalid_argument("optimize_phases: init size mismatch");
  const std::vector<QuadraticForms> forms =
      build_all_quadratics(channels, w, noise_power);

  Eigen::MatrixXcd v = init * init.adjoint();
  PhaseOptResult result;
  result.history.push_back(relaxed_sum_rate(forms, v));

  LiftedSolution lifted;
  lifted.V = v;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const ConcaveSurrogate surrogate = sca_surrogate(forms, v);
    lifted = sdp_subproblem(surrogate, n, v, options.sdp);
    const double change = (lifted.V - v).norm();
    v = lifted.V;
    result.history.push_back(relaxed_sum_rate(forms, v));
    result.iterations = it;
    if (change < options.convergence) break;
  }

  lifted.V = v;
  const PhaseConfig candidate = extract_rank_one(lifted);
  // Rank-one extraction can lose objective; keep the incumbent in that case.
  result.phases = sum_rate_from_forms(forms, candidate) >=
                          sum_rate_from_forms(forms, init)
                      ? candidate
                      : init;
  // The extracted lift is itself feasible for the relaxation; keeping the
  // better point preserves the upper-bound property of the relaxed value.
  const double extracted_value =
      relaxed_sum_rate(forms, result.phases * result.phases.adjoint());
  if (extracted_value > result.history.back())
    result.history.push_back(extracted_value);
  return result;
}

}  // namespace fris
