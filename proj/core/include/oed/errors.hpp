#pragma once

#include <stdexcept>
#include <string>

namespace oed {

/// Base class for every failure the library raises on purpose.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : NumericalError {
  explicit DimensionMismatch(const std::string& what)
      : NumericalError("dimension mismatch: " + what) {}
};

struct NotSymmetric : NumericalError {
  explicit NotSymmetric(const std::string& what)
      : NumericalError("matrix not symmetric: " + what) {}
};

/// A pivot of the SPD factorization was <= 0; `pivot` is its 0-based index.
struct NotPositiveDefinite : NumericalError {
  int pivot;
  explicit NotPositiveDefinite(int pivot_index)
      : NumericalError("matrix not positive definite at pivot " +
                       std::to_string(pivot_index)),
        pivot(pivot_index) {}
};

/// The Gram matrix of a wide operator lost rank; `pivot` is the failing
/// pivot index of its factorization.
struct RankDeficient : NumericalError {
  int pivot;
  explicit RankDeficient(int pivot_index)
      : NumericalError("operator rank deficient at pivot " +
                       std::to_string(pivot_index)),
        pivot(pivot_index) {}
};

struct EmptyActiveSet : NumericalError {
  EmptyActiveSet() : NumericalError("active set is empty") {}
};

/// An evaluator produced NaN or Inf; `evaluator` names it.
struct NonFiniteEvaluation : NumericalError {
  std::string evaluator;
  explicit NonFiniteEvaluation(const std::string& which)
      : NumericalError("non-finite evaluation in " + which), evaluator(which) {}
};

struct SingularInputMatrix : NumericalError {
  SingularInputMatrix() : NumericalError("input matrix is singular") {}
};

struct ZeroReferenceCost : NumericalError {
  ZeroReferenceCost() : NumericalError("reference cost integral is not positive") {}
};

struct LengthMismatch : NumericalError {
  explicit LengthMismatch(const std::string& what)
      : NumericalError("length mismatch: " + what) {}
};

struct DegenerateFit : NumericalError {
  explicit DegenerateFit(const std::string& what)
      : NumericalError("degenerate fit: " + what) {}
};

struct EmptySeries : NumericalError {
  EmptySeries() : NumericalError("series is empty") {}
};

}  // namespace oed
