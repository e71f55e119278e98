#ifndef AZC_SPAN_HPP
#define AZC_SPAN_HPP

#include <cstdint>
#include <string>

namespace azc {

/// Half-open byte range into a source buffer, with the 1-based line/column
/// of its first byte.
struct SourceSpan {
    uint32_t start_offset = 0;
    uint32_t end_offset = 0;
    uint32_t line = 1;
    uint32_t column = 1;

    bool operator==(const SourceSpan&) const = default;

    std::string to_string() const {
        return std::to_string(line) + ":" + std::to_string(column);
    }
};

/// Smallest span covering both operands.
inline SourceSpan join(const SourceSpan& a, const SourceSpan& b) {
    SourceSpan s = a.start_offset <= b.start_offset ? a : b;
    s.end_offset = a.end_offset > b.end_offset ? a.end_offset : b.end_offset;
    return s;
}

} // namespace azc

#endif
