#pragma once

#include <stdexcept>
#include <string>

namespace hm {

// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Enclosures overlap at the precision budget and canonical forms differ,
// or a series cancels beyond its known precision. Callers may retry with
// a larger budget; the library never guesses.
class precision_exhausted : public error {
public:
    explicit precision_exhausted(const std::string& what) : error(what) {}
};

// Argument outside the mathematical domain of an operation
// (division by zero, log of a non-positive element, even root of a
// negative element, non-monotone substitution, ...).
class domain_error : public error {
public:
    explicit domain_error(const std::string& what) : error(what) {}
};

// Integrand falls outside the closed-form fragment. Explicit by design:
// the engine refuses rather than approximates.
class unsupported_integrand : public error {
public:
    explicit unsupported_integrand(const std::string& what) : error(what) {}
};

// Improper integral without a finite value in the Lebesgue algebra.
class divergent_integral : public error {
public:
    explicit divergent_integral(const std::string& what) : error(what) {}
};

// Parse failure, annotated with a 1-based input position.
class syntax_error : public error {
public:
    syntax_error(const std::string& what, int line, int column)
        : error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
          line(line), column(column) {}
    int line;
    int column;
};

} // namespace hm
