#pragma once

#include <stdexcept>
#include <string>

namespace amak {

enum class ErrorCode {
    invalid_argument = 1,
    io = 2,
    data = 3,
    insufficient_data = 4,
    internal = 5,
};

/// Exception type thrown by every amak component. The code maps one-to-one
/// onto the status values of the C API.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace amak
