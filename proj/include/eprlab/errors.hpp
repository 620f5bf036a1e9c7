#pragma once

#include <stdexcept>
#include <string>

namespace eprlab {

/// Operand shapes do not agree (state length vs operator dimension, etc).
class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation that requires a Hermitian observable received something else.
class NotHermitian : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Grid extent or resolution cannot support the requested computation.
class GridTooSmall : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Generic precondition violation (bad quantum numbers, out-of-range index, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace eprlab
