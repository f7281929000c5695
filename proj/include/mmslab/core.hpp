#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mmslab {

using Index = Eigen::Index;

// Dense row-per-point coordinate storage.
using PointCloud = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// A real function on the points of a space, one entry per point id.
using Function = Eigen::VectorXd;

enum class BallKind { open, closed };

// Membership test for a ball of the given kind. Exact comparison, no slack.
inline bool in_ball(double dist, double radius, BallKind kind)
{
  return kind == BallKind::open ? dist < radius : dist <= radius;
}

const char* to_string(BallKind kind);
BallKind parse_ball_kind(const std::string& s);

// Base for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class NonMetric : public Error
{
public:
  NonMetric(const std::string& what, Index x, Index y, Index z)
    : Error(what), triple_{ x, y, z }
  {}
  // Offending points; unused slots are -1.
  const std::array<Index, 3>& triple() const { return triple_; }

private:
  std::array<Index, 3> triple_;
};

class PreconditionError : public Error { public: using Error::Error; };
class InvalidP : public Error { public: using Error::Error; };
class EmptySupport : public Error { public: using Error::Error; };
class AnchorOffSupport : public Error { public: using Error::Error; };
class EmptyRadii : public Error { public: using Error::Error; };
class TooLarge : public Error { public: using Error::Error; };
class NonDecreasingRadii : public Error { public: using Error::Error; };
class EmptySelection : public Error { public: using Error::Error; };
class FormatError : public Error { public: using Error::Error; };

// An invariant that the mathematics guarantees was observed to fail.
class InvariantViolation : public Error { public: using Error::Error; };

} // namespace mmslab
