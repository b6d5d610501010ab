#pragma once

#include <span>

#include "tqr/tridiag.hpp"

namespace tqr {

/// Jacobi matrix (all subdiagonals positive) with eigenvalues `lambda` and
/// first eigenvector components `w`.
///
/// Runs Lanczos on diag(lambda) from start vector w with full
/// reorthogonalization. `lambda` must be strictly increasing and `w` strictly
/// positive with unit norm (checked to 1e-12). Throws Breakdown when some
/// beta drops to 64 * eps * max|lambda|.
SymTridiag lanczos_from_spectrum(std::span<const double> lambda, std::span<const double> w);

}  // namespace tqr
