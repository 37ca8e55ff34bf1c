#ifndef YMDDR_ERRORS_HPP
#define YMDDR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ymddr
{

  /// Base class of every error raised by the library
  class Error : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  /// Malformed input stream (mesh file, CLI data)
  class ParseError : public Error
  {
  public:
    using Error::Error;
  };

  /// A mesh invariant does not hold; the message names the first violation
  class ValidationError : public Error
  {
  public:
    using Error::Error;
  };

  /// Zero-measure entity or singular local system
  class DegenerateEntity : public Error
  {
  public:
    using Error::Error;
  };

  /// Mismatched sizes, dimensions or arguments
  class InvalidArgument : public Error
  {
  public:
    using Error::Error;
  };

  /// Linear solver failure (factorisation, iteration budget)
  class SolverError : public Error
  {
  public:
    using Error::Error;
  };

  /// Newton iterations did not reach the tolerance
  class ConvergenceError : public Error
  {
  public:
    using Error::Error;
  };

} // namespace ymddr

#endif
