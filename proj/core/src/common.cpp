#include "marblekit/common.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace marblekit {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::Input: return "InputError";
    case ErrorCode::Embedding: return "EmbeddingError";
    case ErrorCode::Parameter: return "ParameterError";
    case ErrorCode::Configuration: return "ConfigurationError";
    case ErrorCode::Singularity: return "SingularityError";
    case ErrorCode::Numerical: return "NumericalError";
    case ErrorCode::Precondition: return "PreconditionError";
    case ErrorCode::Projection: return "ProjectionError";
    case ErrorCode::Classification: return "ClassificationError";
    case ErrorCode::Rerouting: return "ReroutingError";
    case ErrorCode::Io: return "IoError";
  }
  return "Error";
}

int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("MARBLEKIT_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) hw = std::min(hw, cap);
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const int workers = worker_count();
  if (workers <= 1 || n < 2048) {
    body(0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    if (lo >= n) break;
    std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

std::pair<double, std::size_t> parallel_min_index(
    std::size_t n, const std::function<double(std::size_t)>& f) {
  const int workers = worker_count();
  if (n == 0) return {0.0, 0};
  if (workers <= 1 || n < 2048) {
    double best = f(0);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i) {
      double v = f(i);
      if (v < best) { best = v; arg = i; }
    }
    return {best, arg};
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::pair<double, std::size_t>> part;
  part.resize((n + chunk - 1) / chunk, {0.0, 0});
  std::vector<std::thread> pool;
  for (std::size_t w = 0, lo = 0; lo < n; ++w, lo += chunk) {
    std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, w, lo, hi] {
      double best = f(lo);
      std::size_t arg = lo;
      for (std::size_t i = lo + 1; i < hi; ++i) {
        double v = f(i);
        if (v < best) { best = v; arg = i; }
      }
      part[w] = {best, arg};
    });
  }
  for (auto& th : pool) th.join();
  auto res = part[0];
  for (const auto& p : part)
    if (p.first < res.first) res = p;
  return res;
}

Vec3 orthogonal_unit(const Vec3& t) {
  Vec3 a = std::abs(t.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  Vec3 n = t.cross(a);
  double len = n.norm();
  if (len < 1e-14) {
    n = t.cross(Vec3::UnitZ());
    len = n.norm();
  }
  return n / len;
}

}  // namespace marblekit
