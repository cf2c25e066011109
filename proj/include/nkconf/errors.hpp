#pragma once

#include <stdexcept>
#include <string>

namespace nk {

// Every failure carries a short kind tag ("CoincidentPoints", "BadT", ...)
// so callers can branch on it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& msg) {
    throw Error(kind, msg);
}

}  // namespace nk
