#pragma once

#include <stdexcept>
#include <string>

namespace isotypy {

// Error carrying a short machine-readable code ("invalid-orbit",
// "model-violation", ...) next to the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail) : std::runtime_error(detail), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

}  // namespace isotypy
