#pragma once

#include <stdexcept>
#include <string>

namespace dlr {

// Domain error carrying a stable machine-readable code. The CLI prints the
// code on stderr so callers can dispatch on it without parsing prose.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const char* code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool cond, const char* code, const std::string& message) {
    if (!cond) fail(code, message);
}

} // namespace dlr
