// Numeric policy and error types shared by every module.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace hardy {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input outside the mathematical domain of an operation (zero on the
/// circle, evaluation outside the disk, function not in K_b, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A product or projection does not fit the configured grid.
class BandwidthError : public Error {
public:
  BandwidthError(const std::string& what, std::size_t required_grid = 0,
                 std::size_t feasible_terms = 0)
      : Error(what), required_grid_(required_grid), feasible_terms_(feasible_terms) {}

  /// Smallest grid size that would make the request legal (0 if unknown).
  std::size_t required_grid() const noexcept { return required_grid_; }
  /// For lacunary builds: number of leading terms that still fit.
  std::size_t feasible_terms() const noexcept { return feasible_terms_; }

private:
  std::size_t required_grid_;
  std::size_t feasible_terms_;
};

/// Two independent computations of the same quantity disagree.
class ConsistencyError : public Error {
public:
  using Error::Error;
};

/// Pointwise tolerances used by Blaschke evaluation.
struct Tolerances {
  double pole_guard = 1e-14;       // |1 - conj(lambda) w| below this is a pole hit
  double unimodularity = 1e-12;    // | |b(e^{it})| - 1 | on the circle
  double merge_radius = 1e-12;     // zeros closer than this are merged
  double boundary_margin = 1e-10;  // zeros need |lambda| < 1 - margin
  double disk_slack = 1e-12;       // evaluation allowed for |w| <= 1 + slack
};

/// Truncation and grid parameters for one computation session.
///
/// A HardyFunction carries `truncation_degree` Taylor coefficients; boundary
/// quadrature runs on `grid_size` equispaced points.
struct NumericPolicy {
  std::size_t truncation_degree = 256;
  std::size_t grid_size = 2048;
  double rank_tolerance = 1e-8;
  double residual_tolerance = 1e-10;
  /// Skips the grid_size >= 4 * truncation_degree check. Only used to inject
  /// aliasing on purpose.
  bool allow_undersampled_grid = false;
  Tolerances tol{};

  void validate() const {
    const auto m = grid_size;
    if (m < 8 || (m & (m - 1)) != 0) {
      throw DomainError("grid_size must be a power of two >= 8, got " + std::to_string(m));
    }
    if (truncation_degree < 1) {
      throw DomainError("truncation_degree must be positive");
    }
    if (!allow_undersampled_grid && m < 4 * truncation_degree) {
      throw DomainError("grid_size " + std::to_string(m) + " must be >= 4 * truncation_degree (" +
                        std::to_string(4 * truncation_degree) + ")");
    }
    if (m < truncation_degree) {
      throw DomainError("grid_size must be >= truncation_degree");
    }
    auto in_range = [](double t) { return t > 0.0 && t <= 1e-2; };
    if (!in_range(rank_tolerance)) throw DomainError("rank_tolerance must lie in (0, 1e-2]");
    if (!in_range(residual_tolerance)) {
      throw DomainError("residual_tolerance must lie in (0, 1e-2]");
    }
  }

  std::size_t N() const noexcept { return truncation_degree; }
  std::size_t M() const noexcept { return grid_size; }
};

inline std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace hardy
