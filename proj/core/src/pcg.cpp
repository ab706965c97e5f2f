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

#include "dielnoise/pcg.hpp"

#include <cmath>
#include <optional>

namespace dielnoise {

Stencil7::Stencil7(int nx_, int ny_, int nz_) : nx(nx_), ny(ny_), nz(nz_) {
  const std::size_t n = static_cast<std::size_t>(nx) * ny * nz;
  diag.assign(n, 0.0);
  cx.assign(n, 0.0);
  cy.assign(n, 0.0);
  cz.assign(n, 0.0);
}

void Stencil7::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t sx = static_cast<std::size_t>(ny) * nz;
  const std::size_t sy = nz;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const std::size_t row = (static_cast<std::size_t>(i) * ny + j) * nz;
      for (int k = 0; k < nz; ++k) {
        const std::size_t n = row + k;
        double v = diag[n] * x[n];
        if (k + 1 < nz) v -= cz[n] * x[n + 1];
        if (k > 0) v -= cz[n - 1] * x[n - 1];
        if (j + 1 < ny) v -= cy[n] * x[n + sy];
        if (j > 0) v -= cy[n - sy] * x[n - sy];
        if (i + 1 < nx) v -= cx[n] * x[n + sx];
        if (i > 0) v -= cx[n - sx] * x[n - sx];
        y[n] = v;
      }
    }
  }
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// IC(0) of the 7-point operator: A ≈ (D + L) D⁻¹ (D + Lᵀ). The pattern of
/// the lower factor equals that of A, so no fill is dropped along a line.
class IncompleteCholesky {
 public:
  explicit IncompleteCholesky(const Stencil7& a) : a_(a), d_(a.size()) {
    const std::size_t sx = static_cast<std::size_t>(a.ny) * a.nz;
    const std::size_t sy = a.nz;
    for (int i = 0; i < a.nx; ++i) {
      for (int j = 0; j < a.ny; ++j) {
        const std::size_t row = (static_cast<std::size_t>(i) * a.ny + j) * a.nz;
        for (int k = 0; k < a.nz; ++k) {
          const std::size_t n = row + k;
          double d = a.diag[n];
          if (k > 0) d -= a.cz[n - 1] * a.cz[n - 1] / d_[n - 1];
          if (j > 0) d -= a.cy[n - sy] * a.cy[n - sy] / d_[n - sy];
          if (i > 0) d -= a.cx[n - sx] * a.cx[n - sx] / d_[n - sx];
          // Guard against breakdown on badly scaled rows.
          d_[n] = d > 1e-3 * a.diag[n] ? d : a.diag[n];
        }
      }
    }
  }

  void apply(std::span<const double> r, std::span<double> z) const {
    const Stencil7& a = a_;
    const std::size_t sx = static_cast<std::size_t>(a.ny) * a.nz;
    const std::size_t sy = a.nz;
    for (int i = 0; i < a.nx; ++i) {
      for (int j = 0; j < a.ny; ++j) {
        const std::size_t row = (static_cast<std::size_t>(i) * a.ny + j) * a.nz;
        for (int k = 0; k < a.nz; ++k) {
          const std::size_t n = row + k;
          double v = r[n];
          if (k > 0) v += a.cz[n - 1] * z[n - 1];
          if (j > 0) v += a.cy[n - sy] * z[n - sy];
          if (i > 0) v += a.cx[n - sx] * z[n - sx];
          z[n] = v / d_[n];
        }
      }
    }
    for (int i = a.nx - 1; i >= 0; --i) {
      for (int j = a.ny - 1; j >= 0; --j) {
        const std::size_t row = (static_cast<std::size_t>(i) * a.ny + j) * a.nz;
        for (int k = a.nz - 1; k >= 0; --k) {
          const std::size_t m = row + k;
          double v = 0.0;
          if (k + 1 < a.nz) v += a.cz[m] * z[m + 1];
          if (j + 1 < a.ny) v += a.cy[m] * z[m + sy];
          if (i + 1 < a.nx) v += a.cx[m] * z[m + sx];
          z[m] += v / d_[m];
        }
      }
    }
  }

 private:
  const Stencil7& a_;
  std::vector<double> d_;
};

}  // namespace

PcgResult solve_pcg(const Stencil7& op, std::span<const double> b, std::span<double> x,
                    double rel_tol, int max_iterations, Preconditioner kind) {
  const std::size_t n = op.size();
  std::vector<double> r(n), z(n), p(n), q(n);
  PcgResult result;

  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    result.converged = true;
    return result;
  }

  op.apply(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];

  std::optional<IncompleteCholesky> ic;
  std::vector<double> inv_diag;
  if (kind == Preconditioner::IncompleteCholesky) {
    ic.emplace(op);
  } else {
    inv_diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) inv_diag[i] = 1.0 / op.diag[i];
  }
  auto precondition = [&](std::span<const double> in, std::span<double> out) {
    if (ic) {
      ic->apply(in, out);
    } else {
      for (std::size_t i = 0; i < n; ++i) out[i] = inv_diag[i] * in[i];
    }
  };

  double rnorm = std::sqrt(dot(r, r));
  result.relative_residual = rnorm / bnorm;
  if (result.relative_residual <= rel_tol) {
    result.converged = true;
    return result;
  }
  precondition(r, z);
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= max_iterations; ++it) {
    op.apply(p, q);
    const double alpha = rz / dot(p, q);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    rnorm = std::sqrt(dot(r, r));
    result.iterations = it;
    result.relative_residual = rnorm / bnorm;
    if (result.relative_residual <= rel_tol) {
      result.converged = true;
      break;
    }
    precondition(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return result;
}

}  // namespace dielnoise
