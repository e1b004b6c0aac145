#pragma once

#include <stdexcept>
#include <string>

namespace oversmooth {

// Argument outside the mathematical domain of an operation (beta <= 0, p < 0, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Grid functions of different sizes were combined.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The Balakrishnan or Bochner quadrature produced a non-finite value.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A forward evaluation overflowed.
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

// Two algebraically identical routes disagreed beyond tolerance.
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Too many uncertified solves in a rate study.
class StudyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad configuration or command-line usage.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace oversmooth
