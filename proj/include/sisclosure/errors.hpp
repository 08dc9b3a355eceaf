#pragma once

#include <stdexcept>
#include <string>

namespace sisclosure {

/// Invalid model or configuration parameters.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Vector length does not match the chain dimension.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Time stepping failed: step budget exhausted, step underflow, or a
/// non-finite derivative.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sisclosure
