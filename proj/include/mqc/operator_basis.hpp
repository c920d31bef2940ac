#pragma once

#include "mqc/types.hpp"

#include <array>
#include <utility>
#include <vector>

namespace mqc {

// |i><j| on the four levels, 1-based as in the level scheme (1 = ground)
Op4 sigma(int i, int j);

// Orthonormal single-atom basis:
// Id/2, mu1/2, mu2/2, mu3/2, s14, s41, s13, s31, s12, s21, s34, s43, s42, s24, s32, s23
class SingleAtomBasis {
public:
    SingleAtomBasis();

    const Op4& operator[](int n) const { return elements_.at(static_cast<std::size_t>(n)); }
    int size() const { return kSingleDim; }

    // index m with Q_m = Q_n^dagger (all elements are real, so Q_n^dagger = Q_n^T)
    int adjoint_index(int n) const { return adjoint_.at(static_cast<std::size_t>(n)); }

    CoefficientVector expand(const Eigen::MatrixXcd& op) const;
    Op4 reconstruct(const CoefficientVector& c) const;

    // M(l,k) = Tr(Q_l^dagger f(Q_k)), so that out = M * in
    template <class F>
    Superop16 superoperator(F&& f) const {
        Superop16 m;
        for (int k = 0; k < kSingleDim; ++k) {
            m.col(k) = expand(f(elements_[static_cast<std::size_t>(k)]));
        }
        return m;
    }

    // nonzero entries of each element: (row, col, value)
    struct Entry {
        int row;
        int col;
        double value;
    };
    const std::vector<Entry>& entries(int n) const { return entries_.at(static_cast<std::size_t>(n)); }

private:
    std::array<Op4, kSingleDim> elements_;
    std::array<int, kSingleDim> adjoint_{};
    std::array<std::vector<Entry>, kSingleDim> entries_;
};

SingleAtomBasis build_single_atom_basis();

// Q_n = Q_i (x) Q_j with n = 16 i + j; atom alpha is the left factor
class TwoAtomBasis {
public:
    TwoAtomBasis() = default;
    explicit TwoAtomBasis(SingleAtomBasis single) : single_(std::move(single)) {}

    static int index(int i, int j);
    static std::pair<int, int> split(int n);

    const SingleAtomBasis& single() const { return single_; }
    int size() const { return kPairDim; }

    Op16 element(int n) const;
    int adjoint_index(int n) const;

    CoefficientVector expand(const Eigen::MatrixXcd& op) const;
    Op16 reconstruct(const CoefficientVector& c) const;

    // row r with <O> = r * c for a state with coefficients c, i.e. r_n = Tr(O Q_n)
    CoefficientRow expectation_row(const Op16& op) const;

    template <class F>
    Superop superoperator(F&& f) const {
        Superop m(kPairDim, kPairDim);
        for (int k = 0; k < kPairDim; ++k) {
            m.col(k) = expand(f(element(k)));
        }
        return m;
    }

private:
    SingleAtomBasis single_;
};

// single-atom superoperators acting on atom alpha / beta / both
Superop kron(const Superop16& a, const Superop16& b);

}  // namespace mqc
