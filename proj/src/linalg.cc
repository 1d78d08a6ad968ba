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

#include "dualctl/linalg.h"

#include <cmath>
#include <sstream>

#include "dualctl/errors.h"

namespace dualctl {
namespace {

void RequireFinite(const Eigen::MatrixXd& m, const char* where) {
  if (!m.allFinite()) {
    std::ostringstream msg;
    msg << where << ": matrix of size " << m.rows() << "x" << m.cols()
        << " has non-finite entries";
    throw NumericalError(msg.str());
  }
}

Eigen::BDCSVD<Eigen::MatrixXd> Decompose(const Eigen::MatrixXd& m,
                                         bool vectors, const char* where) {
  RequireFinite(m, where);
  const unsigned options =
      vectors ? (Eigen::ComputeFullU | Eigen::ComputeFullV) : 0u;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, options);
  if (svd.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << where << ": SVD did not converge (size " << m.rows() << "x"
        << m.cols() << ", Frobenius norm " << m.norm() << ")";
    throw NumericalError(msg.str());
  }
  return svd;
}

}  // namespace

bool ScaledOrthogonal::IsValid(double tolerance) const {
  if (matrix.rows() != matrix.cols() || scale <= 0.0) return false;
  const Eigen::MatrixXd target =
      scale * scale * Eigen::MatrixXd::Identity(matrix.rows(), matrix.cols());
  const double row_err =
      (matrix * matrix.transpose() - target).cwiseAbs().maxCoeff();
  const double col_err =
      (matrix.transpose() * matrix - target).cwiseAbs().maxCoeff();
  return row_err <= tolerance && col_err <= tolerance;
}

double NuclearNorm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  if (m.size() == 1) {
    RequireFinite(m, "NuclearNorm");
    return std::abs(m(0, 0));
  }
  return Decompose(m, false, "NuclearNorm").singularValues().sum();
}

ProcrustesResult ProcrustesMax(const Eigen::MatrixXd& m, double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("ProcrustesMax: alpha must be positive");
  }
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("ProcrustesMax: matrix must be square");
  }
  ProcrustesResult result;
  result.argmax.scale = alpha;
  if (m.size() == 1) {
    RequireFinite(m, "ProcrustesMax");
    const double sign = m(0, 0) < 0.0 ? -1.0 : 1.0;
    result.argmax.matrix = Eigen::MatrixXd::Constant(1, 1, alpha * sign);
    result.value = alpha * std::abs(m(0, 0));
    return result;
  }
  const auto svd = Decompose(m, true, "ProcrustesMax");
  result.argmax.matrix = alpha * svd.matrixU() * svd.matrixV().transpose();
  result.value = alpha * svd.singularValues().sum();
  return result;
}

Eigen::VectorXd StandardNormalVector(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

Eigen::MatrixXd HaarOrthogonal(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("HaarOrthogonal: n must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

Eigen::VectorXd UnitSphereSample(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("UnitSphereSample: n must be >= 1");
  for (;;) {
    Eigen::VectorXd v = StandardNormalVector(n, rng);
    const double norm = v.norm();
    if (norm > 1e-300) return v / norm;
  }
}

bool IsSymmetricPsd(const Eigen::MatrixXd& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  const double tol = tolerance * (1.0 + m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) return false;
  return eig.eigenvalues().minCoeff() >= -tol;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace dualctl
