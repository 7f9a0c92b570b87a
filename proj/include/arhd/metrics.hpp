#pragma once

// Pointwise forecast scores over the m grid points of a block.

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace arhd {

/// Points with |observed| below this are left out of the relative error.
inline constexpr double kRmaeFloor = 1e-8;

inline double mse(std::span<const double> observed, std::span<const double> predicted) {
  if (observed.size() != predicted.size())
    throw std::invalid_argument("mse: length mismatch (" + std::to_string(observed.size()) + " vs " +
                                std::to_string(predicted.size()) + ")");
  if (observed.empty()) throw std::invalid_argument("mse: empty input");
  double acc = 0.0;
  for (std::size_t j = 0; j < observed.size(); ++j) {
    const double d = observed[j] - predicted[j];
    acc += d * d;
  }
  return acc / static_cast<double>(observed.size());
}

struct RmaeResult {
  double value = 0.0;
  int excluded = 0;  // points skipped because |observed| < kRmaeFloor
};

inline RmaeResult rmae(std::span<const double> observed, std::span<const double> predicted) {
  if (observed.size() != predicted.size())
    throw std::invalid_argument("rmae: length mismatch (" + std::to_string(observed.size()) + " vs " +
                                std::to_string(predicted.size()) + ")");
  RmaeResult out;
  double acc = 0.0;
  std::size_t used = 0;
  for (std::size_t j = 0; j < observed.size(); ++j) {
    const double denom = std::abs(observed[j]);
    if (denom < kRmaeFloor) {
      ++out.excluded;
      continue;
    }
    acc += std::abs(observed[j] - predicted[j]) / denom;
    ++used;
  }
  if (used == 0) throw std::invalid_argument("rmae: every observed value is below the 1e-8 floor");
  out.value = acc / static_cast<double>(used);
  return out;
}

inline double mse(const Eigen::VectorXd& observed, const Eigen::VectorXd& predicted) {
  return mse(std::span<const double>(observed.data(), static_cast<std::size_t>(observed.size())),
             std::span<const double>(predicted.data(), static_cast<std::size_t>(predicted.size())));
}

inline RmaeResult rmae(const Eigen::VectorXd& observed, const Eigen::VectorXd& predicted) {
  return rmae(std::span<const double>(observed.data(), static_cast<std::size_t>(observed.size())),
              std::span<const double>(predicted.data(), static_cast<std::size_t>(predicted.size())));
}

}  // namespace arhd
