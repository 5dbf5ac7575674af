#include "bitext/textproc/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "bitext/error.hpp"

namespace bitext::text {

namespace {

const icu::Normalizer2& normalizer(bool decompose) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = decompose ? icu::Normalizer2::getNFDInstance(status)
                                        : icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) throw Error("ICU normalizer unavailable");
  return *n;
}

std::u32string from_icu(const icu::UnicodeString& s) {
  std::u32string out;
  out.reserve(static_cast<std::size_t>(s.length()));
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

icu::UnicodeString to_icu(std::u32string_view s) {
  icu::UnicodeString out;
  for (char32_t c : s) out.append(static_cast<UChar32>(c));
  return out;
}

std::u32string normalize(std::u32string_view s, bool decompose) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::UnicodeString out = normalizer(decompose).normalize(to_icu(s), status);
  if (U_FAILURE(status)) throw Error("ICU normalization failed");
  return from_icu(out);
}

}  // namespace

std::u32string to_u32(std::string_view utf8) {
  const icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  return from_icu(s);
}

std::string to_utf8(std::u32string_view text) {
  std::string out;
  to_icu(text).toUTF8String(out);
  return out;
}

std::size_t char_count(std::string_view utf8) {
  std::size_t n = 0;
  for (unsigned char c : utf8) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool is_punct(char32_t c) { return u_ispunct(static_cast<UChar32>(c)); }

bool is_alpha(char32_t c) { return u_isUAlphabetic(static_cast<UChar32>(c)); }

std::string normalize_for_surface(std::string_view text) {
  std::u32string decomposed = normalize(to_u32(text), true);
  for (auto& c : decomposed) c = static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
  decomposed = normalize(decomposed, true);

  std::u32string kept;
  kept.reserve(decomposed.size());
  bool pending_space = false;
  for (char32_t c : decomposed) {
    if (u_charType(static_cast<UChar32>(c)) == U_NON_SPACING_MARK || is_punct(c)) continue;
    if (is_space(c)) {
      pending_space = !kept.empty();
      continue;
    }
    if (pending_space) {
      kept.push_back(U' ');
      pending_space = false;
    }
    kept.push_back(c);
  }
  return to_utf8(normalize(kept, false));
}

}  // namespace bitext::text
