#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace skilldisc {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Vector2 = Eigen::Vector2d;

/// Pseudo random engine used across the project. Every stochastic routine
/// takes one by reference so that runs are reproducible from a single seed.
using Rng = std::mt19937_64;

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or size contract violated.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A loss, gradient or input contained NaN/Inf.
class NonFiniteError : public Error {
 public:
  NonFiniteError(const std::string& what, Index batch_index = -1)
      : Error(what + (batch_index >= 0 ? " (batch index " + std::to_string(batch_index) + ")" : "")),
        batch_index_(batch_index) {}
  Index batch_index() const { return batch_index_; }

 private:
  Index batch_index_;
};

/// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  return mix_seed(mix_seed(mix_seed(base) ^ a) ^ (b * 0x2545f4914f6cdd1dULL));
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline double standard_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& x) {
  return x.allFinite();
}

}  // namespace skilldisc
