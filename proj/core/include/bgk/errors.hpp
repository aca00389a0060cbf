#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace bgk {

/// A density update produced rho_j <= 0; every later step divides by rho.
class PositivityError : public std::runtime_error {
 public:
  PositivityError(Eigen::Index index, double time, double value)
      : std::runtime_error("non-positive density rho[" + std::to_string(index) +
                           "] = " + std::to_string(value) + " at t = " + std::to_string(time)),
        index_(index),
        time_(time),
        value_(value) {}

  Eigen::Index index() const { return index_; }
  double time() const { return time_; }
  double value() const { return value_; }

 private:
  Eigen::Index index_;
  double time_;
  double value_;
};

}  // namespace bgk
