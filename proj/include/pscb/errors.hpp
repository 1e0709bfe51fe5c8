#pragma once

#include <stdexcept>
#include <string>

namespace pscb {

// A configuration that can never produce a valid object (bad K/m/N/T combination, bad policy
// parameters).
class InvalidConfiguration : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A call-site argument outside its documented domain.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

class InsufficientData : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Every super arm attains the optimum, so the set of bad super arms is empty.
class DegenerateGaps : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

class HypothesisNotMet : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace pscb
