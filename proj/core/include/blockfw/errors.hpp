#ifndef BLOCKFW_ERRORS_HPP
#define BLOCKFW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace blockfw {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidPartition : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class UnsupportedFeature : public Error {
public:
    using Error::Error;
};

class NotFactorizable : public Error {
public:
    using Error::Error;
};

class SolverFailure : public Error {
public:
    using Error::Error;
};

class FirstIterationInfeasible : public Error {
public:
    using Error::Error;
};

class NumericalTrouble : public Error {
public:
    using Error::Error;
};

class TooLarge : public Error {
public:
    using Error::Error;
};

} // namespace blockfw

#endif
