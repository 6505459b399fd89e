#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace gkdcv {

/// Error with a stable machine-parseable category ("io", "format", "config",
/// "dimension", "kernel", "fit", "eval", "usage").
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

}  // namespace gkdcv
