#pragma once

#include <stdexcept>
#include <string>

namespace delaystep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on user-supplied data failed.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Characteristic roots are complex or repeated; the solution form only covers simple real roots.
class RootsNotRealSimple : public Error {
public:
    using Error::Error;
};

/// The leading entry of the triangular coefficient system vanished (multiple root).
class DegenerateLeadingCoefficient : public Error {
public:
    using Error::Error;
};

class SingularSystem : public Error {
public:
    using Error::Error;
};

/// Polynomial degree or system order outside what double precision supports here.
class UnsupportedDegree : public Error {
public:
    using Error::Error;
};

}  // namespace delaystep
