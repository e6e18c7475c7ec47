#pragma once

#include <stdexcept>
#include <string>

namespace rrgz {

// Base for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (negative value, size mismatch...).
class ContractError : public Error {
public:
    using Error::Error;
};

// A v-byte stream or adjacency entry ended before its terminator octet.
class TruncatedStreamError : public Error {
public:
    using Error::Error;
};

// A switch id does not fit the one-octet switch slot.
class SwitchOverflowError : public Error {
public:
    using Error::Error;
};

// Mutually incompatible build options.
class OptionConflictError : public Error {
public:
    using Error::Error;
};

// Malformed, truncated or version-mismatched RRGZ container.
class FormatError : public Error {
public:
    using Error::Error;
};

// Invalid architecture, netlist or router parameters.
class ParameterError : public Error {
public:
    using Error::Error;
};

// A sink cannot be reached from its net's source.
class UnroutableError : public Error {
public:
    UnroutableError(std::string net, const std::string& what)
        : Error(what), net_(std::move(net)) {}

    const std::string& net() const noexcept { return net_; }

private:
    std::string net_;
};

} // namespace rrgz
