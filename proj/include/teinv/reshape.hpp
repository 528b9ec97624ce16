#pragma once

#include <Eigen/Core>

#include "teinv/tensor.hpp"

namespace teinv {

using Matrix = Eigen::MatrixXcd;

// Flattens a tensor to its row_size x col_size matrix.  Because entries are
// stored first-index-fastest on each side of the split, this map turns the
// Einstein product into the matrix product; that property is verified by the
// test suite rather than assumed.
Matrix rsh(const Tensor& a);

// Inverse of rsh: rebuilds the tensor of the given shape from its flattened
// matrix.  Throws shape_error when the matrix dimensions do not match the
// shape's flattened sizes.
Tensor rsh_inv(const Matrix& m, const Shape& shape);

// Default relative rank tolerance for a rows x cols flattened matrix:
// max(rows, cols) * machine-epsilon.
double default_rank_tol(Index rows, Index cols);

// Numerical rank of a flattened matrix: the number of singular values above
// rel_tol * sigma_max.  A negative rel_tol selects the default.
Index matrix_rank(const Matrix& m, double rel_tol = -1.0);

// Numerical rank of rsh(a) (the tensor rank notion used throughout).
Index rshrank(const Tensor& a, double rel_tol = -1.0);

// Orthonormal basis of the null space of rsh(a), one column per null
// direction (zero columns when the flattened matrix has full column rank).
Matrix null_space_basis(const Tensor& a, double rel_tol = -1.0);

// Inverse of a square tensor (equal row and column blocks) via an LU solve of
// the flattened system.  Throws singular_error carrying the reciprocal
// condition estimate when the system is numerically singular, and shape_error
// when the tensor is not square.
Tensor square_inverse(const Tensor& f);

}  // namespace teinv
