#pragma once

#include <stdexcept>
#include <string>

namespace lozi {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A check that the mathematics guarantees has failed. Either a software defect
// or a precision failure; callers map this to exit code 2.
class InconsistencyError : public Error {
public:
    using Error::Error;
};

// Vertex, bit-length or iteration budget ran out before an answer was reached.
class BudgetExhausted : public Error {
public:
    using Error::Error;
};

// Float-mode sign query where |value| does not exceed the error bound.
class UncertainSign : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class ArithmeticError : public Error {
public:
    using Error::Error;
};

}  // namespace lozi
