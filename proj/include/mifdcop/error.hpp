#pragma once

#include <stdexcept>
#include <string>

namespace mifdcop {

// Malformed problem data or an assignment outside its domains.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid algorithm or experiment parameters.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Agents violated the message-passing contract.
class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An exact solver declined to run (unsupported variables or search space too large).
class OracleRefusal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mifdcop
