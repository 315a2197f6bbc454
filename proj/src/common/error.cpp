#include "hemeroteca/common/error.hpp"

namespace hemeroteca {

std::string_view code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NotFound: return "not_found";
        case ErrorCode::ValidationFailed: return "validation_failed";
        case ErrorCode::Conflict: return "conflict";
        case ErrorCode::VersionConflict: return "version_conflict";
        case ErrorCode::ParseError: return "parse_error";
        case ErrorCode::BadRequest: return "bad_request";
        case ErrorCode::Unauthorized: return "unauthorized";
        case ErrorCode::Internal: return "internal";
    }
    return "internal";
}

}  // namespace hemeroteca
