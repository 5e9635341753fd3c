#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace marblekit {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

/// Error categories surfaced through the CLI exit-code contract.
enum class ErrorCode {
  Input,
  Embedding,
  Parameter,
  Configuration,
  Singularity,
  Numerical,
  Precondition,
  Projection,
  Classification,
  Rerouting,
  Io,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

struct Ball {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;

  bool contains(const Vec3& p, double slack = 0.0) const {
    return (p - center).norm() <= radius + slack;
  }
};

inline bool balls_disjoint(const Ball& a, const Ball& b) {
  return (a.center - b.center).norm() > a.radius + b.radius;
}

/// Deterministic RNG; every perturbation in the toolkit draws from one of
/// these, seeded from the run configuration.
using Rng = std::mt19937_64;

/// Number of worker threads, capped by the MARBLEKIT_THREADS env var.
int worker_count();

/// Chunked parallel loop over [0, n). Falls back to serial for small n.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// Parallel min-reduction of f(i) over [0, n); returns {min value, argmin}.
std::pair<double, std::size_t> parallel_min_index(
    std::size_t n, const std::function<double(std::size_t)>& f);

inline double sq(double x) { return x * x; }

/// Any unit vector orthogonal to t (|t| need not be 1).
Vec3 orthogonal_unit(const Vec3& t);

/// Quintic smoothstep on [0,1].
inline double smoothstep(double x) {
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

}  // namespace marblekit
