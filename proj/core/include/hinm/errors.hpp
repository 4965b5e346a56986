#pragma once

#include <stdexcept>
#include <string>

namespace hinm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Configuration errors.
class ValueError : public Error { using Error::Error; };
class DimensionError : public Error { using Error::Error; };
/// Vector keep budget is not a multiple of the N:M group size.
class BudgetError : public DimensionError { using DimensionError::DimensionError; };

// Shape / data errors.
class ShapeMismatch : public Error { using Error::Error; };
class NegativeScore : public Error { using Error::Error; };
class IndexError : public Error { using Error::Error; };
class FileError : public Error { using Error::Error; };
class FormatError : public Error { using Error::Error; };

// Algorithmic contract violations.
class GroupingError : public Error { using Error::Error; };
class CapacityError : public Error { using Error::Error; };
class CountError : public Error { using Error::Error; };
class InvariantViolation : public Error { using Error::Error; };

/// Exhaustive search would exceed its enumeration limit.
class SizeGuard : public Error { using Error::Error; };

}  // namespace hinm
