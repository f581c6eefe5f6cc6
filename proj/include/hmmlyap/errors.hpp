#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hmmlyap {

// Contract violations carry a stable kind tag so callers can branch on the
// failure class instead of matching message text. The CLI maps kinds to exit
// codes; tests assert on kind().
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& msg) {
    throw Error(kind, msg);
}

} // namespace hmmlyap
