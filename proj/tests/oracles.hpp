#pragma once

#include "tqr/dense.hpp"
#include "tqr/tridiag.hpp"

namespace oracle {

struct DenseQR {
  tqr::DenseMatrix q;
  tqr::DenseMatrix r;
};

/// Signed QR of T - sI by Gram-Schmidt on dense columns: positive
/// normalization of the first n-1 columns, last column completing Q to a
/// rotation, R = Q^T (T - sI). Needs the first n-1 columns independent.
DenseQR gram_schmidt_qr_star(const tqr::SymTridiag& t, double shift);

/// Q^T A Q computed densely.
tqr::DenseMatrix dense_congruence(const tqr::DenseMatrix& a, const tqr::DenseMatrix& q);

}  // namespace oracle
