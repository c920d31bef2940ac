#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace mqc {

using cplx = std::complex<double>;
using Op4 = Eigen::Matrix4cd;                      // single-atom operator
using Op16 = Eigen::Matrix<cplx, 16, 16>;          // two-atom operator
using Superop16 = Eigen::Matrix<cplx, 16, 16>;     // single-atom coefficient map
using Superop = Eigen::MatrixXcd;                  // 256x256 two-atom coefficient map
using CoefficientVector = Eigen::VectorXcd;
using CoefficientRow = Eigen::RowVectorXcd;

inline constexpr int kSingleDim = 16;
inline constexpr int kPairDim = 256;
inline constexpr cplx kI{0.0, 1.0};

// bad arguments or configuration
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// resolvent evaluated on a 1/z pole
struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

// integrator / quadrature failure
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// internal bookkeeping went wrong (should never fire)
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

// tensor-degree overflow and similar API misuse
struct MisuseError : std::logic_error {
    using std::logic_error::logic_error;
};

enum class Polarization { x, y, z };

// pump-probe polarization pair: x-x or x-y
enum class PolarizationChannel { parallel, perpendicular };

// detector direction, both orthogonal to the laser axis z
enum class Direction { x, y };

std::string to_string(Polarization p);
std::string to_string(PolarizationChannel c);
std::string to_string(Direction d);

}  // namespace mqc
