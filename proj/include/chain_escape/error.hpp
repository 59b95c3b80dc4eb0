// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chain_escape {

enum class ErrorKind {
    configuration,
    invalid_window,
    index,
    aliasing,
    symmetry_violation,
    domain,
    io,
    usage,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::invalid_window: return "invalid-window";
    case ErrorKind::index: return "index";
    case ErrorKind::aliasing: return "aliasing";
    case ErrorKind::symmetry_violation: return "symmetry-violation";
    case ErrorKind::domain: return "domain";
    case ErrorKind::io: return "io";
    case ErrorKind::usage: return "usage";
    }
    return "unknown";
}

/// Every failure raised by the library carries a kind so the CLI can report
/// a single machine-parsable line.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind)
    {
    }

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace chain_escape
