#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace exi {

inline constexpr const char* kVersion = "0.1.0";

using Scalar = double;
using Series = Eigen::ArrayXd;   // time-ordered observations
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Ingestion / file problems: malformed CSV, missing columns, bad cells.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Method preconditions violated at estimation time: too few valid scales,
// non-positive regression slope, no exceedances, and similar.
class EstimationError : public std::runtime_error {
 public:
  explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace exi
