#pragma once

#include <stdexcept>
#include <string>

namespace tomokit {

// Failure categories. The CLI maps them onto exit codes.
enum class ErrorKind {
    invalid_input,  // malformed or out-of-range arguments
    validation,     // a checked bound or consistency condition failed
    numerical,      // decay precondition, truncation or solver trouble
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_input(const std::string& what) { throw Error(ErrorKind::invalid_input, what); }
[[noreturn]] inline void fail_validation(const std::string& what) { throw Error(ErrorKind::validation, what); }
[[noreturn]] inline void fail_numerical(const std::string& what) { throw Error(ErrorKind::numerical, what); }

}  // namespace tomokit
