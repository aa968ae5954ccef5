#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace gwalk {

using cplx = std::complex<double>;
using Mat4 = Eigen::Matrix4d;
using Mat4c = Eigen::Matrix4cd;
using Vec4c = Eigen::Vector4cd;

inline constexpr double kPi = 3.14159265358979323846;

// Tolerances used when no explicit value is given.
inline constexpr double kUserTol = 1e-9;   // matrices supplied from outside
inline constexpr double kSelfTol = 1e-12;  // matrices this library generated

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotOrthogonal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPermutative : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotInL : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Worker count for the data-parallel loops. Initialised from GW_THREADS,
// overridable at runtime; values < 1 are clamped to 1.
int thread_count();
void set_thread_count(int n);

// Runs body(i) for i in [0, n). Each index is visited exactly once; callers
// write into per-index slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

}  // namespace gwalk
