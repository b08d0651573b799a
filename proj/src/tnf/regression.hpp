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

#pragma once

#include <Eigen/Dense>

namespace tnf {

struct OlsFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd residuals;
  Eigen::VectorXd std_err;
  double sse = 0.0;
  bool full_rank = false;
};

// Ordinary least squares via column-pivoted QR. std_err is only filled when
// the design has full column rank and more rows than columns.
OlsFit ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

}  // namespace tnf
