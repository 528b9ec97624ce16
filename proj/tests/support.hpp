#pragma once

// Shared helpers for the test suite: deterministic generators, independent
// oracles (explicit-summation product, power-iteration spectral norm), and
// the perturbation recipes used to construct instances that satisfy theorem
// hypotheses by construction.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "teinv/ginv.hpp"
#include "teinv/io.hpp"
#include "teinv/perturb.hpp"
#include "teinv/reshape.hpp"
#include "teinv/tensor.hpp"

namespace testsup {

using teinv::Complex;
using teinv::Index;
using teinv::Matrix;
using teinv::Shape;
using teinv::Tensor;

using Rng = std::mt19937_64;

inline Complex gaussian(Rng& rng) {
    std::normal_distribution<double> normal;
    return Complex(normal(rng), normal(rng));
}

inline Tensor random_tensor(Rng& rng, const Shape& shape) {
    Eigen::VectorXcd entries(shape.entry_count());
    for (Eigen::Index i = 0; i < entries.size(); ++i) entries[i] = gaussian(rng);
    return Tensor(shape, std::move(entries));
}

inline Matrix random_matrix(Rng& rng, Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = gaussian(rng);
    return m;
}

// Well-conditioned tensor of prescribed reshape rank: unitary factors from QR
// of Gaussian matrices, singular values drawn from [1, 2].
inline Tensor random_conditioned(Rng& rng, const Shape& shape, Index rank) {
    const Index rows = shape.row_size();
    const Index cols = shape.col_size();
    const Matrix q1 = Eigen::HouseholderQR<Matrix>(random_matrix(rng, rows, rank))
                          .householderQ() *
                      Matrix::Identity(rows, rank);
    const Matrix q2 = Eigen::HouseholderQR<Matrix>(random_matrix(rng, cols, rank))
                          .householderQ() *
                      Matrix::Identity(cols, rank);
    std::uniform_real_distribution<double> sigma(1.0, 2.0);
    Eigen::VectorXd values(rank);
    for (Index i = 0; i < rank; ++i) values[i] = sigma(rng);
    return teinv::rsh_inv(q1 * values.asDiagonal() * q2.adjoint(), shape);
}

// Einstein product by explicit summation over every index tuple, walking
// multi-indices with at(); shares no stride arithmetic with the library's
// implementation.
inline Tensor einstein_oracle(const Tensor& a, const Tensor& b, std::size_t n) {
    const auto& ae = a.shape().extents();
    const auto& be = b.shape().extents();
    const std::vector<Index> lead(ae.begin(), ae.end() - static_cast<std::ptrdiff_t>(n));
    const std::vector<Index> shared(ae.end() - static_cast<std::ptrdiff_t>(n), ae.end());
    const std::vector<Index> trail(be.begin() + static_cast<std::ptrdiff_t>(n), be.end());

    std::vector<Index> out_extents = lead;
    out_extents.insert(out_extents.end(), trail.begin(), trail.end());
    const Shape out_shape(out_extents, lead.size());

    const auto advance = [](std::vector<Index>& idx, const std::vector<Index>& bounds) {
        for (std::size_t axis = 0; axis < bounds.size(); ++axis) {
            if (++idx[axis] < bounds[axis]) return true;
            idx[axis] = 0;
        }
        return false;
    };

    Eigen::VectorXcd entries(out_shape.entry_count());
    Eigen::Index flat = 0;
    std::vector<Index> out_idx(out_extents.size(), 0);
    do {
        const std::vector<Index> lead_idx(out_idx.begin(),
                                          out_idx.begin() + static_cast<std::ptrdiff_t>(lead.size()));
        const std::vector<Index> trail_idx(out_idx.begin() + static_cast<std::ptrdiff_t>(lead.size()),
                                           out_idx.end());
        Complex sum = 0.0;
        std::vector<Index> k(shared.size(), 0);
        do {
            std::vector<Index> a_idx = lead_idx;
            a_idx.insert(a_idx.end(), k.begin(), k.end());
            std::vector<Index> b_idx = k;
            b_idx.insert(b_idx.end(), trail_idx.begin(), trail_idx.end());
            sum += a.at(a_idx) * b.at(b_idx);
        } while (advance(k, shared));
        entries[flat++] = sum;
    } while (advance(out_idx, out_extents));
    return Tensor(out_shape, std::move(entries));
}

// Largest singular value via power iteration on rsh(a)* rsh(a).
inline double spectral_oracle(const Tensor& a, int iterations = 3000) {
    const Matrix m = teinv::rsh(a);
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(m.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] += Complex(0.0, 0.01 * double(i + 1));
    v.normalize();
    double lambda = 0.0;
    for (int it = 0; it < iterations; ++it) {
        v = m.adjoint() * (m * v);
        lambda = v.norm();
        if (lambda == 0.0) return 0.0;
        v /= lambda;
    }
    return std::sqrt(lambda);
}

inline double rel_err(const Tensor& got, const Tensor& want) {
    const double denom = teinv::frobenius_norm(want);
    const double num = teinv::frobenius_norm(got - want);
    return denom > 0.0 ? num / denom : num;
}

inline double max_abs_diff(const Tensor& got, const Tensor& want) {
    return (got.entries() - want.entries()).cwiseAbs().maxCoeff();
}

// ---- Perturbation recipes ------------------------------------------------
// Rescale e so that |e * x|_F equals `target` (no-op for a zero product).
inline Tensor rescale_contraction(const Tensor& e, const Tensor& x, double target) {
    const double t = teinv::frobenius_norm(teinv::einstein_product(e, x));
    if (t == 0.0) return e;
    return Complex(target / t) * e;
}

// E := E0 * X * A satisfies E = E*X*A exactly whenever X*A*X = X.
inline Tensor projected_right(Rng& rng, const Tensor& a, const Tensor& x, double target) {
    const Tensor e0 = random_tensor(rng, a.shape());
    const Tensor e = teinv::einstein_product(teinv::einstein_product(e0, x), a);
    return rescale_contraction(e, x, target);
}

// E := A * X * E0 satisfies E = A*X*E.
inline Tensor projected_left(Rng& rng, const Tensor& a, const Tensor& x, double target) {
    const Tensor e0 = random_tensor(rng, a.shape());
    const Tensor e = teinv::einstein_product(teinv::einstein_product(a, x), e0);
    return rescale_contraction(e, x, target);
}

// E := A * X * E0 * X * A satisfies both multiplicative conditions.
inline Tensor projected_two_sided(Rng& rng, const Tensor& a, const Tensor& x, double target) {
    const Tensor e0 = random_tensor(rng, a.shape());
    const Tensor ax = teinv::einstein_product(a, x);
    const Tensor xa = teinv::einstein_product(x, a);
    const Tensor e = teinv::einstein_product(teinv::einstein_product(ax, e0), xa);
    return rescale_contraction(e, x, target);
}

// Rank-preserving perturbation: E := A * (A1 * E0 * A1) * A keeps the range
// inside R(A) and the null space above N(A); with |A1||E| < 1 the rank of
// A + E equals the rank of A.
inline Tensor rank_preserving(Rng& rng, const Tensor& a, const Tensor& a1, double target) {
    const Tensor e0 = random_tensor(rng, a.shape());
    const Tensor w = teinv::einstein_product(teinv::einstein_product(a1, e0), a1);
    Tensor e = teinv::einstein_product(teinv::einstein_product(a, w), a);
    const double size = teinv::frobenius_norm(a1) * teinv::frobenius_norm(e);
    if (size == 0.0) return e;
    return Complex(target / size) * e;
}

// Rank-jumping perturbation: a rank-one component w v* with v in N(A) and w
// in N(A*), scaled to keep |A1||E| = target < 1.  Requires rshrank(a) below
// both flattened dimensions.
inline Tensor rank_jumping(const Tensor& a, const Tensor& a1, double target) {
    const Matrix null_right = teinv::null_space_basis(a);                        // v: A v = 0
    const Matrix null_left = teinv::null_space_basis(teinv::conj_transpose(a));  // w: A* w = 0
    const Eigen::VectorXcd v = null_right.col(0);
    const Eigen::VectorXcd w = null_left.col(0);
    const Matrix bump = w * v.adjoint();  // unit Frobenius norm
    const double scale = target / teinv::frobenius_norm(a1);
    return teinv::rsh_inv(scale * bump, a.shape());
}

// ---- Fixtures ------------------------------------------------------------
inline std::filesystem::path fixture_path(const std::string& name) {
    return std::filesystem::path(TEINV_FIXTURE_DIR) / (name + ".json");
}

inline Tensor fx(const std::string& name) { return teinv::load_tensor(fixture_path(name)); }

}  // namespace testsup
