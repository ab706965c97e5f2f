// Copyright 2026 The dielnoise Authors
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

#include <cstddef>
#include <span>
#include <vector>

namespace dielnoise {

/// Symmetric 7-point operator on an nx × ny × nz cell grid (z fastest):
///   (A x)_n = diag_n x_n − Σ_neighbours T_nm x_m,
/// with the coupling to the +x/+y/+z neighbour stored at the lower cell.
struct Stencil7 {
  int nx = 0, ny = 0, nz = 0;
  std::vector<double> diag;
  std::vector<double> cx, cy, cz;

  Stencil7() = default;
  Stencil7(int nx_, int ny_, int nz_);
  std::size_t size() const { return diag.size(); }
  void apply(std::span<const double> x, std::span<double> y) const;
};

enum class Preconditioner { Jacobi, IncompleteCholesky };

struct PcgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Preconditioned conjugate gradient for A x = b with A from `op`. `x`
/// holds the initial guess on entry. Stops when ‖r‖ ≤ rel_tol ‖b‖.
PcgResult solve_pcg(const Stencil7& op, std::span<const double> b, std::span<double> x,
                    double rel_tol, int max_iterations,
                    Preconditioner kind = Preconditioner::IncompleteCholesky);

}  // namespace dielnoise
