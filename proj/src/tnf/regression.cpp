// Copyright 2026 The tnforecast Authors
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

#include "tnf/regression.hpp"

#include <cmath>

namespace tnf {

OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  OlsFit fit;
  const auto n = X.rows();
  const auto k = X.cols();
  if (k == 0) {
    fit.coef = Eigen::VectorXd();
    fit.residuals = y;
    fit.sse = y.squaredNorm();
    fit.full_rank = true;
    return fit;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  fit.full_rank = qr.rank() == k;
  fit.coef = qr.solve(y);
  fit.residuals = y - X * fit.coef;
  fit.sse = fit.residuals.squaredNorm();
  if (fit.full_rank && n > k) {
    const double s2 = fit.sse / static_cast<double>(n - k);
    Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();
    fit.std_err = (s2 * xtx_inv.diagonal()).cwiseSqrt();
  }
  return fit;
}

}  // namespace tnf
