#pragma once

#include <stdexcept>
#include <string>

namespace holouav {

// Effective channel Gram matrix is numerically singular; the caller sees a
// degenerate channel/weight configuration rather than a regularized solve.
class RankDeficientError : public std::runtime_error {
  public:
    explicit RankDeficientError(const std::string& what) : std::runtime_error(what) {}
};

// UAV placed on the vertical through a user (azimuth undefined) or coincident
// with a user (distance zero).
class SingularGeometryError : public std::runtime_error {
  public:
    explicit SingularGeometryError(const std::string& what) : std::runtime_error(what) {}
};

// Power normalization requested for an all-zero precoder.
class ZeroBeamformerError : public std::runtime_error {
  public:
    explicit ZeroBeamformerError(const std::string& what) : std::runtime_error(what) {}
};

// A probed function returned a non-finite value during numerical differentiation.
class NonFiniteValueError : public std::runtime_error {
  public:
    explicit NonFiniteValueError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace holouav
