// Copyright 2026 The aoed Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Linear-Gaussian Bayesian inverse problem with per-sensor observation
// blocks, and the A-optimality machinery built on it.
//
// The measurement model is g = F x + eps with x ~ N(prior_mean, C) and
// eps ~ N(0, sigma^2 I). The forward matrix F has m contiguous blocks of d
// rows; block k is what sensor k observes. A design w in [0,1]^m weights the
// information each sensor contributes: the posterior precision is
//
//   C_post(w)^-1 = C^-1 + (1/sigma^2) * sum_k w_k F_k^T F_k,
//
// linear in w, which makes the A-optimal objective J(w) = tr(C_post(w))
// convex on the relaxed design set and equal to the masked-data posterior at
// binary w. All objective and gradient evaluations run in data space: with
// K = F C F^T, L = F C^2 F^T and What = diag(sqrt(w) repeated per block),
// the Woodbury identity gives
//
//   J(w) = tr(C) - tr( (sigma^2 I + What K What)^-1 * What L What ),
//
// one Cholesky of an (m*d) x (m*d) matrix per evaluation and no solves in
// parameter space. The gradient and Hessian actions reduce to data space the
// same way (see objective_gradient and hessian_apply below). A direct
// n-dimensional factorization (objective_dense_oracle) provides the
// independent check of the data-space path.

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <string>

#include "aoed/errors.hpp"

namespace aoed {

/// The full Bayesian linear inverse problem. Immutable after build_model;
/// every operation on it is a pure function and thread-safe.
struct Model {
  Eigen::MatrixXd forward;     // (m*d) x n, sensor k owns rows [k*d, (k+1)*d)
  Eigen::Index num_sensors;    // m
  Eigen::Index block_size;     // d measurements per sensor
  Eigen::Index param_dim;      // n
  Eigen::MatrixXd prior_cov;   // n x n, SPD (jittered once if borderline)
  Eigen::VectorXd prior_mean;  // n
  double noise_var;            // sigma^2 > 0

  /// Lower Cholesky factor of prior_cov, cached at build time.
  Eigen::MatrixXd prior_chol;

  /// Rows of the forward matrix owned by sensor k.
  Eigen::Block<const Eigen::MatrixXd> sensor_block(Eigen::Index k) const {
    return forward.middleRows(k * block_size, block_size);
  }

  /// Expands a per-sensor vector to data space by repeating each entry d
  /// times, matching the row-block layout of the forward matrix.
  Eigen::VectorXd expand_to_data(const Eigen::VectorXd& per_sensor) const {
    Eigen::VectorXd out(num_sensors * block_size);
    for (Eigen::Index k = 0; k < num_sensors; ++k) {
      out.segment(k * block_size, block_size).setConstant(per_sensor[k]);
    }
    return out;
  }
};

/// Data-space kernels that make design evaluation independent of the
/// parameter dimension: K = F C F^T, L = F C^2 F^T, and tr(C).
struct PrecomputedKernels {
  Eigen::MatrixXd data_cov;     // K, prior-predictive data covariance
  Eigen::MatrixXd data_cov_sq;  // L
  double prior_trace;           // tr(C) = J(0)
};

/// A design: per-sensor weights in [0,1] plus the sensor budget. Binary
/// designs (every weight exactly 0 or 1) are the deployable ones.
struct Design {
  Eigen::VectorXd weights;
  int budget;

  bool is_binary() const {
    for (Eigen::Index k = 0; k < weights.size(); ++k) {
      if (weights[k] != 0.0 && weights[k] != 1.0) return false;
    }
    return true;
  }

  int active_count() const {
    int count = 0;
    for (Eigen::Index k = 0; k < weights.size(); ++k) {
      if (weights[k] != 0.0) ++count;
    }
    return count;
  }
};

namespace detail {

inline void check_weights(const Model& model, const Eigen::VectorXd& w) {
  if (w.size() != model.num_sensors) {
    throw DimensionMismatch("weight vector has " + std::to_string(w.size()) +
                            " entries, model has " +
                            std::to_string(model.num_sensors) + " sensors");
  }
}

/// sqrt of weights repeated per block; negative weights within roundoff of
/// zero are treated as zero.
inline Eigen::VectorXd sqrt_weights_data(const Model& model,
                                         const Eigen::VectorXd& w) {
  return model.expand_to_data(w.cwiseMax(0.0).cwiseSqrt());
}

/// sigma^2 I + What K What, the SPD data-space system matrix.
inline Eigen::MatrixXd whitened_system(const Model& model,
                                       const PrecomputedKernels& kernels,
                                       const Eigen::VectorXd& s) {
  Eigen::MatrixXd a =
      s.asDiagonal() * kernels.data_cov * s.asDiagonal();
  a.diagonal().array() += model.noise_var;
  return a;
}

}  // namespace detail

/// Validates and assembles the inverse problem. The prior covariance must be
/// symmetric to 1e-12 relative and admit a Cholesky factorization; if the
/// first factorization fails, one jitter of 1e-12 * tr(C)/n is added to the
/// diagonal and kept, and a second failure raises NotSPD.
inline Model build_model(const Eigen::MatrixXd& forward, Eigen::Index m,
                         Eigen::Index d, const Eigen::MatrixXd& prior_cov,
                         const Eigen::VectorXd& prior_mean, double noise_var) {
  if (m < 1 || d < 1) throw DimensionMismatch("m and d must be >= 1");
  const Eigen::Index n = prior_cov.rows();
  if (n < 1) throw DimensionMismatch("parameter dimension must be >= 1");
  if (forward.rows() != m * d) {
    throw DimensionMismatch("forward matrix has " +
                            std::to_string(forward.rows()) +
                            " rows, expected m*d = " + std::to_string(m * d));
  }
  if (forward.cols() != n || prior_cov.cols() != n) {
    throw DimensionMismatch("forward/prior column counts do not match n");
  }
  if (prior_mean.size() != n) {
    throw DimensionMismatch("prior mean has wrong length");
  }
  if (!(noise_var > 0.0)) {
    throw NonPositiveNoise("noise variance must be > 0");
  }

  const double scale = prior_cov.cwiseAbs().maxCoeff();
  const double asym = (prior_cov - prior_cov.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, 1e-300)) {
    throw NotSPD("prior covariance is not symmetric");
  }

  Model model;
  model.forward = forward;
  model.num_sensors = m;
  model.block_size = d;
  model.param_dim = n;
  model.prior_cov = 0.5 * (prior_cov + prior_cov.transpose());
  model.prior_mean = prior_mean;
  model.noise_var = noise_var;

  Eigen::LLT<Eigen::MatrixXd> llt(model.prior_cov);
  if (llt.info() != Eigen::Success) {
    const double jitter = 1e-12 * model.prior_cov.trace() / static_cast<double>(n);
    model.prior_cov.diagonal().array() += jitter;
    llt.compute(model.prior_cov);
    if (llt.info() != Eigen::Success) {
      throw NotSPD("prior covariance is not positive definite");
    }
  }
  model.prior_chol = llt.matrixL();
  return model;
}

/// K = F C F^T, L = F C^2 F^T = (F C)(F C)^T, tr(C). After this, objective
/// and gradient evaluation touch only (m*d)-dimensional objects.
inline PrecomputedKernels precompute(const Model& model) {
  PrecomputedKernels kernels;
  const Eigen::MatrixXd fc = model.forward * model.prior_cov;
  kernels.data_cov = fc * model.forward.transpose();
  kernels.data_cov = 0.5 * (kernels.data_cov + kernels.data_cov.transpose());
  kernels.data_cov_sq = fc * fc.transpose();
  kernels.data_cov_sq =
      0.5 * (kernels.data_cov_sq + kernels.data_cov_sq.transpose());
  kernels.prior_trace = model.prior_cov.trace();
  return kernels;
}

/// A-optimal objective J(w) = tr(C_post(w)), evaluated in data space.
inline double objective(const Model& model, const PrecomputedKernels& kernels,
                        const Eigen::VectorXd& w) {
  detail::check_weights(model, w);
  const Eigen::VectorXd s = detail::sqrt_weights_data(model, w);
  const Eigen::MatrixXd a = detail::whitened_system(model, kernels, s);
  const Eigen::MatrixXd weighted_l =
      s.asDiagonal() * kernels.data_cov_sq * s.asDiagonal();
  return kernels.prior_trace -
         Eigen::LLT<Eigen::MatrixXd>(a).solve(weighted_l).trace();
}

/// J(w) and its gradient from one shared data-space factorization.
///
/// With T = What A^-1 What (A the whitened system), the posterior-squared
/// kernel is Q = F C_post^2 F^T = L - KTL - (KTL)^T + (TK)^T L (TK), and
/// dJ/dw_k = -(1/sigma^2) * sum of diag(Q) over sensor k's block. Components
/// are clamped at zero from above: J is nonincreasing in every weight.
inline double objective_gradient(const Model& model,
                                 const PrecomputedKernels& kernels,
                                 const Eigen::VectorXd& w,
                                 Eigen::VectorXd& grad) {
  detail::check_weights(model, w);
  const Eigen::VectorXd s = detail::sqrt_weights_data(model, w);
  const Eigen::MatrixXd a = detail::whitened_system(model, kernels, s);
  const Eigen::Index md = a.rows();

  const Eigen::MatrixXd a_inv = Eigen::LLT<Eigen::MatrixXd>(a).solve(
      Eigen::MatrixXd::Identity(md, md));
  const Eigen::MatrixXd weighted_l =
      s.asDiagonal() * kernels.data_cov_sq * s.asDiagonal();
  const double objective_value =
      kernels.prior_trace - a_inv.cwiseProduct(weighted_l).sum();

  const Eigen::MatrixXd t = s.asDiagonal() * a_inv * s.asDiagonal();
  const Eigen::MatrixXd tl = t * kernels.data_cov_sq;
  const Eigen::MatrixXd tk = t * kernels.data_cov;
  // diag(K*TL) and diag((TK)^T * L * TK), entrywise.
  const Eigen::VectorXd diag_ktl =
      kernels.data_cov.cwiseProduct(tl.transpose()).rowwise().sum();
  const Eigen::VectorXd diag_ktltk =
      tk.cwiseProduct(kernels.data_cov_sq * tk).colwise().sum();
  const Eigen::VectorXd diag_q =
      kernels.data_cov_sq.diagonal() - 2.0 * diag_ktl + diag_ktltk;

  grad.resize(model.num_sensors);
  for (Eigen::Index k = 0; k < model.num_sensors; ++k) {
    grad[k] = -diag_q.segment(k * model.block_size, model.block_size).sum() /
              model.noise_var;
  }
  grad = grad.cwiseMin(0.0);
  return objective_value;
}

inline Eigen::VectorXd gradient(const Model& model,
                                const PrecomputedKernels& kernels,
                                const Eigen::VectorXd& w) {
  Eigen::VectorXd grad;
  objective_gradient(model, kernels, w, grad);
  return grad;
}

/// Hessian action H(w) v with H_kl = (2/sigma^4) tr(C_post B_k C_post B_l
/// C_post), B_k = F_k^T F_k. In data space, with P = F C_post F^T and Q as in
/// objective_gradient, (Hv)_k is the k-th block trace of P V Q where V is
/// diag(v) expanded per block. H is symmetric positive semidefinite.
inline Eigen::VectorXd hessian_apply(const Model& model,
                                     const PrecomputedKernels& kernels,
                                     const Eigen::VectorXd& w,
                                     const Eigen::VectorXd& v) {
  detail::check_weights(model, w);
  detail::check_weights(model, v);
  const Eigen::VectorXd s = detail::sqrt_weights_data(model, w);
  const Eigen::MatrixXd a = detail::whitened_system(model, kernels, s);
  const Eigen::Index md = a.rows();

  const Eigen::MatrixXd a_inv = Eigen::LLT<Eigen::MatrixXd>(a).solve(
      Eigen::MatrixXd::Identity(md, md));
  const Eigen::MatrixXd t = s.asDiagonal() * a_inv * s.asDiagonal();
  const Eigen::MatrixXd ktl = kernels.data_cov * (t * kernels.data_cov_sq);
  const Eigen::MatrixXd tk = t * kernels.data_cov;
  const Eigen::MatrixXd posterior_kernel =
      kernels.data_cov - kernels.data_cov * tk;  // P = K - K T K
  const Eigen::MatrixXd posterior_kernel_sq =
      kernels.data_cov_sq - ktl - ktl.transpose() +
      tk.transpose() * (kernels.data_cov_sq * tk);  // Q = F C_post^2 F^T

  const Eigen::VectorXd v_data = model.expand_to_data(v);
  const Eigen::VectorXd diag_pvq =
      posterior_kernel
          .cwiseProduct((v_data.asDiagonal() * posterior_kernel_sq).transpose())
          .rowwise()
          .sum();

  Eigen::VectorXd hv(model.num_sensors);
  const double sigma4 = model.noise_var * model.noise_var;
  for (Eigen::Index k = 0; k < model.num_sensors; ++k) {
    hv[k] = 2.0 *
            diag_pvq.segment(k * model.block_size, model.block_size).sum() /
            sigma4;
  }
  return hv;
}

/// Posterior mean m_post = m_prior + C_post F^T W (g - F m_prior) / sigma^2,
/// with W = diag(w) expanded per block (fractional weights scale the residual
/// linearly, consistent with the precision convention). Computed through the
/// prior Cholesky factor: C_post = R (I + R^T G R)^-1 R^T with C = R R^T, so
/// no inverse of the prior covariance is ever formed.
inline Eigen::VectorXd posterior_mean(const Model& model,
                                      const Eigen::VectorXd& w,
                                      const Eigen::VectorXd& data) {
  detail::check_weights(model, w);
  if (data.size() != model.num_sensors * model.block_size) {
    throw DimensionMismatch("data vector has wrong length");
  }
  const Eigen::VectorXd w_data = model.expand_to_data(w.cwiseMax(0.0));
  const Eigen::VectorXd residual = data - model.forward * model.prior_mean;
  const Eigen::VectorXd rhs =
      model.forward.transpose() * w_data.cwiseProduct(residual) /
      model.noise_var;

  const Eigen::MatrixXd& r = model.prior_chol;
  const Eigen::MatrixXd fr = model.forward * r;  // F R, (m*d) x n
  Eigen::MatrixXd inner = fr.transpose() *
                          (w_data / model.noise_var).asDiagonal() * fr;
  inner.diagonal().array() += 1.0;
  inner = 0.5 * (inner + inner.transpose());
  const Eigen::LLT<Eigen::MatrixXd> llt(inner);
  return model.prior_mean + r * llt.solve(r.transpose() * rhs);
}

/// Independent n-dimensional route to J(w): factor the posterior through the
/// prior Cholesky, C_post = R (I + R^T G R)^-1 R^T with
/// G = (1/sigma^2) sum_k w_k F_k^T F_k, and return its trace. Throws NotSPD
/// if the transformed precision fails to factor.
inline double objective_dense_oracle(const Model& model,
                                     const Eigen::VectorXd& w) {
  detail::check_weights(model, w);
  const Eigen::VectorXd w_data = model.expand_to_data(w.cwiseMax(0.0));
  const Eigen::MatrixXd& r = model.prior_chol;
  const Eigen::MatrixXd fr = model.forward * r;
  Eigen::MatrixXd inner = fr.transpose() *
                          (w_data / model.noise_var).asDiagonal() * fr;
  inner.diagonal().array() += 1.0;
  inner = 0.5 * (inner + inner.transpose());
  const Eigen::LLT<Eigen::MatrixXd> llt(inner);
  if (llt.info() != Eigen::Success) {
    throw NotSPD("posterior precision factorization failed");
  }
  return llt.solve(r.transpose() * r).trace();
}

}  // namespace aoed
