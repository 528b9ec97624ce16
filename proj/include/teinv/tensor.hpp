#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

#include <Eigen/Core>

#include "teinv/shape.hpp"

namespace teinv {

using Complex = std::complex<double>;

// Immutable dense complex tensor.  Entries are stored flat in a fixed
// linearization order: multi-indices advance first-index-fastest within the
// row block and within the column block, rows before columns (the order under
// which flattening is a product homomorphism; see reshape.hpp).
class Tensor {
public:
    // Validates that the entry count matches the shape and that every entry is
    // finite; throws value_error otherwise.
    Tensor(Shape shape, Eigen::VectorXcd entries);

    static Tensor zero(const Shape& shape);

    const Shape& shape() const { return shape_; }
    const Eigen::VectorXcd& entries() const { return entries_; }

    // Entry at a full multi-index (0-based, one index per mode).
    Complex at(const std::vector<Index>& index) const;
    Complex at(std::initializer_list<Index> index) const;

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

private:
    Shape shape_;
    Eigen::VectorXcd entries_;
};

// Contraction of the trailing n modes of a against the leading n modes of b;
// generalizes the matrix product.  The result keeps a's leading modes as rows
// and b's trailing modes as columns.  Throws shape_error when the contracted
// extents disagree, naming the offending axis.
Tensor einstein_product(const Tensor& a, const Tensor& b, std::size_t n);

// Einstein product contracting all of a's column modes (the common case).
Tensor einstein_product(const Tensor& a, const Tensor& b);

// Swaps the row and column blocks and conjugates every entry.
Tensor conj_transpose(const Tensor& a);

// Entrywise alpha*a + beta*b; shapes must match.
Tensor linear_combine(Complex alpha, const Tensor& a, Complex beta, const Tensor& b);

// Identity tensor over the given mode extents: square tensor whose flattened
// matrix is the identity.
Tensor identity(const std::vector<Index>& extents);

// Square root of the sum of squared entry moduli.
double frobenius_norm(const Tensor& a);

// Largest singular value of the flattened matrix.
double spectral_norm(const Tensor& a);

// Hermitian inner product: sum of a * conj(b) over all entries.
Complex inner_product(const Tensor& a, const Tensor& b);

inline Tensor operator+(const Tensor& a, const Tensor& b) {
    return linear_combine(1.0, a, 1.0, b);
}
inline Tensor operator-(const Tensor& a, const Tensor& b) {
    return linear_combine(1.0, a, -1.0, b);
}
inline Tensor operator*(Complex scale, const Tensor& a) {
    return linear_combine(scale, a, 0.0, a);
}

}  // namespace teinv
