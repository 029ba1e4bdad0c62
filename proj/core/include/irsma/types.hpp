#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace irsma {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Nominal value; 6 GHz maps to a 5 cm wavelength.
inline constexpr double kSpeedOfLight = 3.0e8;

inline cplx unit_phasor(double phase) { return std::polar(1.0, phase); }

} // namespace irsma
