#pragma once

#include <authlabel/types.hpp>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace authlabel {

/// Parse failure with the byte/digit offset of the first offending position.
struct PayloadParseError : std::runtime_error {
    PayloadParseError(const std::string& what, std::size_t offset_)
        : std::runtime_error(what), offset(offset_) {}
    std::size_t offset = 0;
};

/// First QR blob: the point cloud in pure decimal digits so it stays
/// eligible for the numeric QR input mode.
///
/// Layout: 4-digit point count, 1-digit kind flag (0 beads, 1 rods), then per
/// point the zero-padded coordinates x (6), y (6), z (5) followed by the
/// three 2-digit error radii. Body length is exactly 23 digits per point.
struct PayloadA {
    std::string digits;

    int point_count() const;
    LabelKind kind() const;
};

/// Second QR blob: Latin-1 product info (2-byte big-endian length prefix)
/// followed by the structured signature bytes.
struct PayloadB {
    std::vector<std::uint8_t> bytes;
};

inline constexpr std::size_t kPayloadAHeaderDigits = 5;
inline constexpr std::size_t kPayloadADigitsPerPoint = 23;
inline constexpr std::size_t kProductInfoMaxChars = 900;
inline constexpr std::size_t kSignatureMinBytes = 70;
inline constexpr std::size_t kSignatureMaxBytes = 72;

/// Requires >= 3 points, box-bounded coordinates and radii in [1, 99];
/// violations raise std::out_of_range / std::invalid_argument.
PayloadA encode_payload_a(const PointCloud& cloud);

/// Exact inverse of encode_payload_a; decode(encode(c)) == c field for
/// field. Malformed input raises PayloadParseError with the offset.
PointCloud decode_payload_a(const PayloadA& payload);

/// product_info is UTF-8 text that must be Latin-1 encodable, 1..900
/// characters; the signature must be 70..72 bytes.
PayloadB encode_payload_b(const std::string& product_info,
                          const std::vector<std::uint8_t>& signature);

struct DecodedPayloadB {
    std::string product_info;  // UTF-8
    std::vector<std::uint8_t> signature;
};

DecodedPayloadB decode_payload_b(const PayloadB& payload);

/// Latin-1 encoding of UTF-8 text, as carried on the QR byte mode; throws
/// std::invalid_argument on codepoints above U+00FF.
std::vector<std::uint8_t> latin1_bytes(const std::string& utf8);

/// Recommended print side length in cm for a user-friendly scan, floored at
/// the 1 cm x 1 cm minimum: p/60 for the point payload, z/500 for the info
/// payload with z its character count.
double recommended_print_side_cm(const PayloadA& payload);
double recommended_print_side_cm(const PayloadB& payload);

}  // namespace authlabel
