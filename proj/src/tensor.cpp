#include "teinv/tensor.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

namespace teinv {

Tensor::Tensor(Shape shape, Eigen::VectorXcd entries)
    : shape_(std::move(shape)), entries_(std::move(entries)) {
    if (entries_.size() != shape_.entry_count()) {
        throw value_error("entry count " + std::to_string(entries_.size()) +
                          " does not match shape " + shape_.to_string() + " (expected " +
                          std::to_string(shape_.entry_count()) + ")");
    }
    for (Index i = 0; i < entries_.size(); ++i) {
        const Complex& v = entries_[i];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw value_error("non-finite entry at flat position " + std::to_string(i));
        }
    }
}

Tensor Tensor::zero(const Shape& shape) {
    return Tensor(shape, Eigen::VectorXcd::Zero(shape.entry_count()));
}

Complex Tensor::at(const std::vector<Index>& index) const {
    const auto& extents = shape_.extents();
    if (index.size() != extents.size()) {
        throw shape_error("index has " + std::to_string(index.size()) + " modes, shape " +
                          shape_.to_string() + " has " + std::to_string(extents.size()));
    }
    // Flat offset advances first-index-fastest over all modes in order.
    Index offset = 0;
    Index stride = 1;
    for (std::size_t m = 0; m < extents.size(); ++m) {
        if (index[m] < 0 || index[m] >= extents[m]) {
            throw shape_error("index " + std::to_string(index[m]) + " out of range for mode " +
                              std::to_string(m) + " of " + shape_.to_string());
        }
        offset += index[m] * stride;
        stride *= extents[m];
    }
    return entries_[offset];
}

Complex Tensor::at(std::initializer_list<Index> index) const {
    return at(std::vector<Index>(index));
}

Tensor einstein_product(const Tensor& a, const Tensor& b, std::size_t n) {
    const auto& ae = a.shape().extents();
    const auto& be = b.shape().extents();
    if (n > ae.size() || n > be.size()) {
        throw shape_error("contraction order " + std::to_string(n) + " exceeds tensor order (" +
                          std::to_string(ae.size()) + " and " + std::to_string(be.size()) + ")");
    }
    const std::size_t lead = ae.size() - n;
    for (std::size_t k = 0; k < n; ++k) {
        if (ae[lead + k] != be[k]) {
            throw shape_error("contraction axis " + std::to_string(k) + " mismatch: extent " +
                              std::to_string(ae[lead + k]) + " of " + a.shape().to_string() +
                              " vs " + std::to_string(be[k]) + " of " + b.shape().to_string());
        }
    }

    std::vector<Index> out_extents(ae.begin(), ae.begin() + static_cast<std::ptrdiff_t>(lead));
    out_extents.insert(out_extents.end(), be.begin() + static_cast<std::ptrdiff_t>(n), be.end());
    Shape out_shape(std::move(out_extents), lead);

    // In the flat order the leading block of a, the shared block, and the
    // trailing block of b are each contiguous-fastest, so the contraction is
    // a plain sum over the shared flat index.  Written as explicit loops (not
    // delegated to a matrix product) so the flattening homomorphism stays an
    // independently testable fact.
    const Index size_lead = out_shape.row_size();
    const Index size_trail = out_shape.col_size();
    Index size_shared = 1;
    for (std::size_t k = 0; k < n; ++k) size_shared *= be[k];

    const Eigen::VectorXcd& av = a.entries();
    const Eigen::VectorXcd& bv = b.entries();
    Eigen::VectorXcd out(size_lead * size_trail);
    for (Index m = 0; m < size_trail; ++m) {
        for (Index l = 0; l < size_lead; ++l) {
            Complex sum = 0.0;
            for (Index k = 0; k < size_shared; ++k) {
                sum += av[l + size_lead * k] * bv[k + size_shared * m];
            }
            out[l + size_lead * m] = sum;
        }
    }
    return Tensor(std::move(out_shape), std::move(out));
}

Tensor einstein_product(const Tensor& a, const Tensor& b) {
    return einstein_product(a, b, a.shape().order() - a.shape().split());
}

Tensor conj_transpose(const Tensor& a) {
    const Index rows = a.shape().row_size();
    const Index cols = a.shape().col_size();
    const Eigen::VectorXcd& av = a.entries();
    Eigen::VectorXcd out(rows * cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            out[j + cols * i] = std::conj(av[i + rows * j]);
        }
    }
    return Tensor(a.shape().transposed(), std::move(out));
}

Tensor linear_combine(Complex alpha, const Tensor& a, Complex beta, const Tensor& b) {
    if (!a.same_shape(b)) {
        throw shape_error("cannot combine tensors of shapes " + a.shape().to_string() + " and " +
                          b.shape().to_string());
    }
    return Tensor(a.shape(), alpha * a.entries() + beta * b.entries());
}

Tensor identity(const std::vector<Index>& extents) {
    std::vector<Index> doubled = extents;
    doubled.insert(doubled.end(), extents.begin(), extents.end());
    Shape shape(std::move(doubled), extents.size());
    const Index n = shape.row_size();
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n * n);
    for (Index i = 0; i < n; ++i) out[i + n * i] = 1.0;
    return Tensor(std::move(shape), std::move(out));
}

double frobenius_norm(const Tensor& a) {
    return a.entries().norm();
}

double spectral_norm(const Tensor& a) {
    const Index rows = a.shape().row_size();
    const Index cols = a.shape().col_size();
    Eigen::Map<const Eigen::MatrixXcd> m(a.entries().data(), rows, cols);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

Complex inner_product(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) {
        throw shape_error("inner product requires identical shapes, got " +
                          a.shape().to_string() + " and " + b.shape().to_string());
    }
    // dot() conjugates its receiver, so put b there: sum of a * conj(b).
    return b.entries().dot(a.entries());
}

}  // namespace teinv
