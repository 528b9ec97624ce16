#include "teinv/reshape.hpp"

#include <limits>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace teinv {

namespace {

double rank_cutoff(const Matrix& m, double rel_tol, const Eigen::VectorXd& singular_values) {
    if (singular_values.size() == 0) return 0.0;
    if (rel_tol < 0.0) rel_tol = default_rank_tol(m.rows(), m.cols());
    return rel_tol * singular_values(0);
}

}  // namespace

double default_rank_tol(Index rows, Index cols) {
    return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
}

Matrix rsh(const Tensor& a) {
    return Eigen::Map<const Matrix>(a.entries().data(), a.shape().row_size(),
                                    a.shape().col_size());
}

Tensor rsh_inv(const Matrix& m, const Shape& shape) {
    if (m.rows() != shape.row_size() || m.cols() != shape.col_size()) {
        throw shape_error("matrix " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                          " does not flatten shape " + shape.to_string() + " (" +
                          std::to_string(shape.row_size()) + "x" +
                          std::to_string(shape.col_size()) + ")");
    }
    return Tensor(shape, Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size()));
}

Index matrix_rank(const Matrix& m, double rel_tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const Eigen::VectorXd sv = svd.singularValues();
    const double cutoff = rank_cutoff(m, rel_tol, sv);
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) ++rank;
    }
    return rank;
}

Index rshrank(const Tensor& a, double rel_tol) {
    return matrix_rank(rsh(a), rel_tol);
}

Matrix null_space_basis(const Tensor& a, double rel_tol) {
    const Matrix m = rsh(a);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double cutoff = rank_cutoff(m, rel_tol, sv);
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) ++rank;
    }
    // Right singular vectors past the numerical rank span the null space.
    return svd.matrixV().rightCols(m.cols() - rank);
}

Tensor square_inverse(const Tensor& f) {
    const Shape& shape = f.shape();
    if (shape.row_size() != shape.col_size()) {
        throw shape_error("square_inverse requires a square tensor, got " + shape.to_string());
    }
    const Matrix m = rsh(f);
    Eigen::PartialPivLU<Matrix> lu(m);
    const double rcond = lu.rcond();
    if (!std::isfinite(rcond) || rcond < 1e-13) {
        throw singular_error("flattened system is numerically singular (rcond estimate " +
                                 std::to_string(rcond) + ")",
                             rcond);
    }
    const Matrix inv = lu.solve(Matrix::Identity(m.rows(), m.cols()));
    // Keep the inverse on the same mode layout: rows take f's column block.
    return rsh_inv(inv, shape.transposed());
}

}  // namespace teinv
