#include "mqc/operator_basis.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace mqc {

std::string to_string(Polarization p) {
    switch (p) {
    case Polarization::x: return "x";
    case Polarization::y: return "y";
    case Polarization::z: return "z";
    }
    return "?";
}

std::string to_string(PolarizationChannel c) {
    return c == PolarizationChannel::parallel ? "par" : "perp";
}

std::string to_string(Direction d) { return d == Direction::x ? "x" : "y"; }

Op4 sigma(int i, int j) {
    if (i < 1 || i > 4 || j < 1 || j > 4) {
        throw InputError("sigma: level index out of range");
    }
    Op4 m = Op4::Zero();
    m(i - 1, j - 1) = 1.0;
    return m;
}

SingleAtomBasis::SingleAtomBasis() {
    const Op4 id = Op4::Identity();
    const Op4 mu1 = sigma(2, 2) - sigma(3, 3) + sigma(4, 4) - sigma(1, 1);
    const Op4 mu2 = sigma(2, 2) - sigma(3, 3) - sigma(4, 4) + sigma(1, 1);
    const Op4 mu3 = sigma(2, 2) + sigma(3, 3) - sigma(4, 4) - sigma(1, 1);
    elements_ = {id / 2.0,     mu1 / 2.0,    mu2 / 2.0,    mu3 / 2.0,
                 sigma(1, 4), sigma(4, 1), sigma(1, 3), sigma(3, 1),
                 sigma(1, 2), sigma(2, 1), sigma(3, 4), sigma(4, 3),
                 sigma(4, 2), sigma(2, 4), sigma(3, 2), sigma(2, 3)};
    for (int n = 0; n < kSingleDim; ++n) {
        const Op4& q = elements_[static_cast<std::size_t>(n)];
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                if (q(r, c) != 0.0) {
                    entries_[static_cast<std::size_t>(n)].push_back({r, c, q(r, c).real()});
                }
            }
        }
        adjoint_[static_cast<std::size_t>(n)] = -1;
        for (int m = 0; m < kSingleDim; ++m) {
            if ((elements_[static_cast<std::size_t>(m)] - q.adjoint()).norm() == 0.0) {
                adjoint_[static_cast<std::size_t>(n)] = m;
            }
        }
        if (adjoint_[static_cast<std::size_t>(n)] < 0) {
            throw InvariantError("SingleAtomBasis: basis not closed under adjoint");
        }
    }
}

CoefficientVector SingleAtomBasis::expand(const Eigen::MatrixXcd& op) const {
    if (op.rows() != 4 || op.cols() != 4) {
        throw InputError("expand: single-atom operator must be 4x4");
    }
    CoefficientVector c(kSingleDim);
    for (int n = 0; n < kSingleDim; ++n) {
        cplx s = 0.0;
        for (const auto& e : entries_[static_cast<std::size_t>(n)]) {
            s += e.value * op(e.row, e.col);
        }
        c(n) = s;
    }
    return c;
}

Op4 SingleAtomBasis::reconstruct(const CoefficientVector& c) const {
    if (c.size() != kSingleDim) {
        throw InputError("reconstruct: expected 16 coefficients");
    }
    Op4 m = Op4::Zero();
    for (int n = 0; n < kSingleDim; ++n) {
        for (const auto& e : entries_[static_cast<std::size_t>(n)]) {
            m(e.row, e.col) += e.value * c(n);
        }
    }
    return m;
}

SingleAtomBasis build_single_atom_basis() { return SingleAtomBasis{}; }

int TwoAtomBasis::index(int i, int j) {
    if (i < 0 || i >= kSingleDim || j < 0 || j >= kSingleDim) {
        throw InputError("TwoAtomBasis::index out of range");
    }
    return kSingleDim * i + j;
}

std::pair<int, int> TwoAtomBasis::split(int n) {
    if (n < 0 || n >= kPairDim) {
        throw InputError("TwoAtomBasis::split out of range");
    }
    return {n / kSingleDim, n % kSingleDim};
}

Op16 TwoAtomBasis::element(int n) const {
    auto [i, j] = split(n);
    Op16 m = Eigen::kroneckerProduct(single_[i], single_[j]).eval();
    return m;
}

int TwoAtomBasis::adjoint_index(int n) const {
    auto [i, j] = split(n);
    return index(single_.adjoint_index(i), single_.adjoint_index(j));
}

CoefficientVector TwoAtomBasis::expand(const Eigen::MatrixXcd& op) const {
    if (op.rows() != 16 || op.cols() != 16) {
        throw InputError("expand: two-atom operator must be 16x16");
    }
    CoefficientVector c(kPairDim);
    for (int i = 0; i < kSingleDim; ++i) {
        const auto& ei = single_.entries(i);
        for (int j = 0; j < kSingleDim; ++j) {
            const auto& ej = single_.entries(j);
            cplx s = 0.0;
            for (const auto& a : ei) {
                for (const auto& b : ej) {
                    s += a.value * b.value * op(4 * a.row + b.row, 4 * a.col + b.col);
                }
            }
            c(kSingleDim * i + j) = s;
        }
    }
    return c;
}

Op16 TwoAtomBasis::reconstruct(const CoefficientVector& c) const {
    if (c.size() != kPairDim) {
        throw InputError("reconstruct: expected 256 coefficients");
    }
    Op16 m = Op16::Zero();
    for (int i = 0; i < kSingleDim; ++i) {
        for (int j = 0; j < kSingleDim; ++j) {
            const cplx cn = c(kSingleDim * i + j);
            if (cn == 0.0) continue;
            for (const auto& a : single_.entries(i)) {
                for (const auto& b : single_.entries(j)) {
                    m(4 * a.row + b.row, 4 * a.col + b.col) += a.value * b.value * cn;
                }
            }
        }
    }
    return m;
}

CoefficientRow TwoAtomBasis::expectation_row(const Op16& op) const {
    // Tr(O Q_n) = sum_{ab} O_ba (Q_n)_ab = conj of the expansion of O^dagger
    return expand(op.adjoint()).conjugate().transpose();
}

Superop kron(const Superop16& a, const Superop16& b) {
    Superop m(kPairDim, kPairDim);
    m = Eigen::kroneckerProduct(Eigen::MatrixXcd(a), Eigen::MatrixXcd(b));
    return m;
}

}  // namespace mqc
