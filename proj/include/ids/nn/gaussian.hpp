// Copyright 2026 The IDS Authors. All Rights Reserved.
//
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

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "ids/nn/tape.hpp"
#include "ids/nn/tensor.hpp"

namespace ids::nn {

/// Diagonal Gaussian parameterized by mean and log-variance.
struct GaussianDiag {
  std::vector<double> mean;
  std::vector<double> log_var;

  GaussianDiag() = default;
  GaussianDiag(std::vector<double> m, std::vector<double> lv) : mean(std::move(m)), log_var(std::move(lv)) {
    IDS_REQUIRE(mean.size() == log_var.size(), "GaussianDiag: mean has ", mean.size(),
                " entries but log_var has ", log_var.size());
  }

  std::size_t dim() const { return mean.size(); }
  double sigma(std::size_t i) const { return std::exp(0.5 * log_var[i]); }

  double log_density(std::span<const double> z) const {
    IDS_REQUIRE(z.size() == dim(), "log_density: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) {
      const double d = z[i] - mean[i];
      acc += -0.5 * (std::log(2.0 * std::numbers::pi) + log_var[i] + d * d * std::exp(-log_var[i]));
    }
    return acc;
  }
};

/// KL(q || p) in nats:
///   sum_i log(sigma_p/sigma_q) + (sigma_q^2 + (mu_q - mu_p)^2) / (2 sigma_p^2) - 1/2
inline double gaussian_kl(const GaussianDiag& q, const GaussianDiag& p) {
  IDS_REQUIRE(q.dim() == p.dim(), "gaussian_kl: dimension mismatch ", q.dim(), " vs ", p.dim());
  double kl = 0.0;
  for (std::size_t i = 0; i < q.dim(); ++i) {
    const double d = q.mean[i] - p.mean[i];
    kl += 0.5 * (p.log_var[i] - q.log_var[i]) + (std::exp(q.log_var[i]) + d * d) / (2.0 * std::exp(p.log_var[i])) -
          0.5;
  }
  return kl;
}

/// z = mu + exp(log_var / 2) * eps
inline std::vector<double> reparameterize(const GaussianDiag& g, std::span<const double> noise) {
  IDS_REQUIRE(noise.size() == g.dim(), "reparameterize: noise has ", noise.size(), " entries, Gaussian has ",
              g.dim());
  std::vector<double> z(g.dim());
  for (std::size_t i = 0; i < g.dim(); ++i) z[i] = g.mean[i] + g.sigma(i) * noise[i];
  return z;
}

/// Differentiable diagonal Gaussian on a tape.
struct GaussianVars {
  Var mean;
  Var log_var;

  GaussianDiag value(const Tape& t) const { return {t.value(mean).to_vector(), t.value(log_var).to_vector()}; }
};

inline Var reparameterize(Tape& t, const GaussianVars& g, std::span<const double> noise) {
  IDS_REQUIRE(noise.size() == t.value(g.mean).size(), "reparameterize: noise has ", noise.size(),
              " entries, Gaussian has ", t.value(g.mean).size());
  Var sigma = t.exp(t.scale(g.log_var, 0.5));
  return t.add(g.mean, t.mul(sigma, t.constant(noise)));
}

inline Var gaussian_kl(Tape& t, const GaussianVars& q, const GaussianVars& p) {
  return t.gaussian_kl(q.mean, q.log_var, p.mean, p.log_var);
}

}  // namespace ids::nn
