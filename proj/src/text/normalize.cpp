#include "hemeroteca/text/normalize.hpp"

#include <algorithm>
#include <stdexcept>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "hemeroteca/text/tokenizer.hpp"

namespace hemeroteca::text {

namespace {

bool is_ascii(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

const icu::Normalizer2& nfc_instance() {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) throw std::runtime_error("ICU NFC normalizer unavailable");
    return *n;
}

const icu::Normalizer2& nfd_instance() {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFDInstance(status);
    if (U_FAILURE(status)) throw std::runtime_error("ICU NFD normalizer unavailable");
    return *n;
}

std::string to_utf8(const icu::UnicodeString& s) {
    std::string out;
    s.toUTF8String(out);
    return out;
}

icu::UnicodeString from_utf8(std::string_view s) {
    return icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
}

}  // namespace

std::string nfc(std::string_view utf8) {
    if (is_ascii(utf8)) return std::string(utf8);
    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString out = nfc_instance().normalize(from_utf8(utf8), status);
    if (U_FAILURE(status)) return std::string(utf8);
    return to_utf8(out);
}

std::string normalize(std::string_view surface) {
    if (is_ascii(surface)) {
        std::string out(surface);
        std::transform(out.begin(), out.end(), out.begin(),
                       [](unsigned char c) { return static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c); });
        return out;
    }
    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString s = nfc_instance().normalize(from_utf8(surface), status);
    if (U_FAILURE(status)) s = from_utf8(surface);
    s.toLower(icu::Locale("es"));
    // Lowercasing can produce decomposed sequences for a handful of letters.
    icu::UnicodeString composed = nfc_instance().normalize(s, status);
    return to_utf8(U_SUCCESS(status) ? composed : s);
}

std::string strip_accents(std::string_view utf8) {
    if (is_ascii(utf8)) return std::string(utf8);
    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString decomposed = nfd_instance().normalize(from_utf8(utf8), status);
    if (U_FAILURE(status)) return std::string(utf8);
    icu::UnicodeString kept;
    for (int32_t i = 0; i < decomposed.length();) {
        UChar32 c = decomposed.char32At(i);
        if (u_charType(c) != U_NON_SPACING_MARK) kept.append(c);
        i += U16_LENGTH(c);
    }
    icu::UnicodeString out = nfc_instance().normalize(kept, status);
    return to_utf8(U_SUCCESS(status) ? out : kept);
}

std::string shadow_key(std::string_view surface) {
    return strip_accents(normalize(surface));
}

std::vector<std::string> phrase_words(std::string_view phrase) {
    return normalized_words(phrase);
}

std::string normalize_phrase(std::string_view phrase) {
    return join(normalized_words(phrase), " ");
}

bool is_capitalized(std::string_view utf8) {
    if (utf8.empty()) return false;
    int32_t i = 0;
    UChar32 c = 0;
    U8_NEXT(reinterpret_cast<const uint8_t*>(utf8.data()), i, static_cast<int32_t>(utf8.size()), c);
    return c >= 0 && (u_isupper(c) || u_istitle(c));
}

bool is_numeral(std::string_view utf8) {
    if (utf8.empty()) return false;
    const auto* bytes = reinterpret_cast<const uint8_t*>(utf8.data());
    const auto len = static_cast<int32_t>(utf8.size());
    for (int32_t i = 0; i < len;) {
        UChar32 c = 0;
        U8_NEXT(bytes, i, len, c);
        if (c < 0 || !u_isdigit(c)) return false;
    }
    return true;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.append(sep);
        out.append(parts[i]);
    }
    return out;
}

std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace hemeroteca::text
