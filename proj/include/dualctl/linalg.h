// Copyright 2026 The dualctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DUALCTL_LINALG_H_
#define DUALCTL_LINALG_H_

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace dualctl {

using Rng = std::mt19937_64;

// A square matrix with matrix * matrix^T = scale^2 * I.
struct ScaledOrthogonal {
  Eigen::MatrixXd matrix;
  double scale = 1.0;

  int dimension() const { return static_cast<int>(matrix.rows()); }

  // Both A A^T and A^T A are checked against scale^2 I, entrywise.
  bool IsValid(double tolerance = 1e-9) const;
};

// Sum of singular values. Throws NumericalError on non-finite input or when
// the SVD does not converge.
double NuclearNorm(const Eigen::MatrixXd& m);

struct ProcrustesResult {
  double value = 0.0;
  ScaledOrthogonal argmax;
};

// Maximizes <A, M> = trace(A^T M) over square A with A A^T = alpha^2 I.
// The value alpha * ||M||_* is unique; the argmax alpha * U V^T is one of the
// maximizers when M has repeated or zero singular values.
ProcrustesResult ProcrustesMax(const Eigen::MatrixXd& m, double alpha);

// Haar-distributed orthogonal matrix: QR of a standard normal matrix with the
// signs of diag(R) folded into the columns of Q.
Eigen::MatrixXd HaarOrthogonal(int n, Rng& rng);

// Uniform point on the unit sphere in R^n.
Eigen::VectorXd UnitSphereSample(int n, Rng& rng);

Eigen::VectorXd StandardNormalVector(int n, Rng& rng);

// trace(A^T B).
inline double FrobeniusInner(const Eigen::MatrixXd& a,
                             const Eigen::MatrixXd& b) {
  return (a.array() * b.array()).sum();
}

// Tolerance is relative to the largest entry magnitude.
bool IsSymmetricPsd(const Eigen::MatrixXd& m, double tolerance = 1e-9);

// SplitMix64 finalizer, used to derive independent per-run seeds.
std::uint64_t SplitMix64(std::uint64_t x);

}  // namespace dualctl

#endif  // DUALCTL_LINALG_H_
