#pragma once

// Numerical tolerances shared by the library, the CLI and the test suites.
// All values assume binary64 scalars.

namespace kfuks::tol {

inline constexpr double ring_axioms = 1e-13;
inline constexpr double jet_identity = 1e-12;   // exp(log a) = a, a * inv(a) = 1
inline constexpr double hermitian_jet = 1e-12;  // coeff(b, a) = conj(coeff(a, b))
inline constexpr double kernel_symmetry = 1e-12;
inline constexpr double metric_hermitian = 1e-11;
inline constexpr double curvature_symmetry = 1e-9;
inline constexpr double kf_two_route = 1e-9;
inline constexpr double equivariance = 1e-9;
inline constexpr double map_inverse = 1e-10;
inline constexpr double jacobian_fd = 1e-8;
inline constexpr double moment_quadrature = 1e-8;
inline constexpr double tangent_residual = 1e-10;
inline constexpr double finite_difference = 1e-6;

// Default relative tail tolerance of truncated series kernels.
inline constexpr double series_tail = 1e-10;

}  // namespace kfuks::tol
