#ifndef ACED_TYPES_HPP_
#define ACED_TYPES_HPP_

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace aced {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Marks a parameter as a non-deduced context: the scalar comes from another
// argument and Eigen expressions convert implicitly at the call site.
template <typename T>
using NoDeduce = std::type_identity_t<T>;

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

// Violated precondition or invariant (caller bug or corrupt state).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed input file; carries the offending 1-based line when known.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, long line = -1)
      : std::runtime_error(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

}  // namespace aced

#endif  // ACED_TYPES_HPP_
