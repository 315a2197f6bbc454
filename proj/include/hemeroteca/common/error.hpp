#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hemeroteca {

/// Stable error categories. The service layer maps them to wire codes and
/// HTTP statuses, so existing values must not be renamed.
enum class ErrorCode {
    NotFound,
    ValidationFailed,
    Conflict,
    VersionConflict,
    ParseError,
    BadRequest,
    Unauthorized,
    Internal,
};

std::string_view code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::vector<std::string> details = {})
        : std::runtime_error(message), code_(code), details_(std::move(details)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::vector<std::string>& details() const noexcept { return details_; }

private:
    ErrorCode code_;
    std::vector<std::string> details_;
};

/// Query/record parse failure carrying the byte offset where it was detected.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error(ErrorCode::ParseError, message + " at offset " + std::to_string(offset)),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

inline Error not_found(const std::string& what) {
    return Error(ErrorCode::NotFound, what + " not found");
}

}  // namespace hemeroteca
