#include <authlabel/payload.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>

namespace authlabel {

namespace {

void append_padded(std::string& out, std::int64_t value, int width) {
    char buf[8] = {};
    for (int i = width - 1; i >= 0; --i) {
        buf[i] = static_cast<char>('0' + value % 10);
        value /= 10;
    }
    out.append(buf, static_cast<std::size_t>(width));
}

std::int64_t parse_field(const std::string& digits, std::size_t offset, int width) {
    std::int64_t value = 0;
    for (int k = 0; k < width; ++k) value = value * 10 + (digits[offset + k] - '0');
    return value;
}

// UTF-8 -> Latin-1, rejecting codepoints above U+00FF.
std::vector<std::uint8_t> to_latin1(const std::string& utf8) {
    std::vector<std::uint8_t> out;
    out.reserve(utf8.size());
    std::size_t i = 0;
    while (i < utf8.size()) {
        const auto b0 = static_cast<unsigned char>(utf8[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
        } else if ((b0 & 0xE0) == 0xC0 && i + 1 < utf8.size() &&
                   (static_cast<unsigned char>(utf8[i + 1]) & 0xC0) == 0x80) {
            const unsigned cp = ((b0 & 0x1Fu) << 6) |
                                (static_cast<unsigned char>(utf8[i + 1]) & 0x3Fu);
            if (cp > 0xFF)
                throw std::invalid_argument(
                    "product info contains a character outside Latin-1");
            out.push_back(static_cast<std::uint8_t>(cp));
            i += 2;
        } else {
            throw std::invalid_argument(
                "product info contains a character outside Latin-1");
        }
    }
    return out;
}

std::string from_latin1(const std::uint8_t* data, std::size_t size) {
    std::string out;
    out.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        const std::uint8_t b = data[i];
        if (b < 0x80) {
            out.push_back(static_cast<char>(b));
        } else {
            out.push_back(static_cast<char>(0xC0 | (b >> 6)));
            out.push_back(static_cast<char>(0x80 | (b & 0x3F)));
        }
    }
    return out;
}

}  // namespace

std::vector<std::uint8_t> latin1_bytes(const std::string& utf8) { return to_latin1(utf8); }

int PayloadA::point_count() const {
    if (digits.size() < kPayloadAHeaderDigits)
        throw PayloadParseError("payload A shorter than its header", digits.size());
    return static_cast<int>(parse_field(digits, 0, 4));
}

LabelKind PayloadA::kind() const {
    if (digits.size() < kPayloadAHeaderDigits)
        throw PayloadParseError("payload A shorter than its header", digits.size());
    return digits[4] == '0' ? LabelKind::Beads : LabelKind::Rods;
}

PayloadA encode_payload_a(const PointCloud& cloud) {
    cloud.validate();
    if (cloud.size() > 9999)
        throw std::out_of_range("payload A holds at most 9999 points");
    if (cloud.kind == LabelKind::Rods && cloud.size() % 2 != 0)
        throw std::invalid_argument("rod cloud with odd point count");

    PayloadA payload;
    payload.digits.reserve(kPayloadAHeaderDigits + kPayloadADigitsPerPoint * cloud.size());
    append_padded(payload.digits, static_cast<std::int64_t>(cloud.size()), 4);
    payload.digits.push_back(cloud.kind == LabelKind::Beads ? '0' : '1');

    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Point3& p = cloud.points[i];
        const ErrorRadii& r = cloud.radii[i];
        if (!in_label_box(p))
            throw std::out_of_range("point " + std::to_string(i) +
                                    " lies outside the label box");
        if (!radii_in_range(r))
            throw std::out_of_range("radii of point " + std::to_string(i) +
                                    " outside [1, 99]");
        append_padded(payload.digits, p.x, 6);
        append_padded(payload.digits, p.y, 6);
        append_padded(payload.digits, p.z, 5);
        append_padded(payload.digits, r.sx, 2);
        append_padded(payload.digits, r.sy, 2);
        append_padded(payload.digits, r.sz, 2);
    }
    return payload;
}

PointCloud decode_payload_a(const PayloadA& payload) {
    const std::string& s = payload.digits;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9')
            throw PayloadParseError("non-digit character in payload A", i);
    if (s.size() < kPayloadAHeaderDigits)
        throw PayloadParseError("payload A shorter than its header", s.size());

    const auto count = static_cast<std::size_t>(parse_field(s, 0, 4));
    const std::size_t expected = kPayloadAHeaderDigits + kPayloadADigitsPerPoint * count;
    if (s.size() != expected)
        throw PayloadParseError("payload A length mismatch: expected " +
                                    std::to_string(expected) + " digits for " +
                                    std::to_string(count) + " points, got " +
                                    std::to_string(s.size()),
                                s.size());
    if (count < 3)
        throw PayloadParseError("payload A must carry at least 3 points", 0);
    if (s[4] != '0' && s[4] != '1')
        throw PayloadParseError("unknown label kind flag", 4);

    PointCloud cloud;
    cloud.kind = s[4] == '0' ? LabelKind::Beads : LabelKind::Rods;
    if (cloud.kind == LabelKind::Rods && count % 2 != 0)
        throw PayloadParseError("rod payload with odd point count", 0);
    cloud.points.reserve(count);
    cloud.radii.reserve(count);
    std::size_t off = kPayloadAHeaderDigits;
    for (std::size_t i = 0; i < count; ++i) {
        Point3 p;
        p.x = parse_field(s, off, 6);
        p.y = parse_field(s, off + 6, 6);
        p.z = parse_field(s, off + 12, 5);
        ErrorRadii r;
        r.sx = static_cast<int>(parse_field(s, off + 17, 2));
        r.sy = static_cast<int>(parse_field(s, off + 19, 2));
        r.sz = static_cast<int>(parse_field(s, off + 21, 2));
        if (r.sx < kRadiusMin) throw PayloadParseError("zero error radius", off + 17);
        if (r.sy < kRadiusMin) throw PayloadParseError("zero error radius", off + 19);
        if (r.sz < kRadiusMin) throw PayloadParseError("zero error radius", off + 21);
        cloud.points.push_back(p);
        cloud.radii.push_back(r);
        off += kPayloadADigitsPerPoint;
    }
    return cloud;
}

PayloadB encode_payload_b(const std::string& product_info,
                          const std::vector<std::uint8_t>& signature) {
    const std::vector<std::uint8_t> info = to_latin1(product_info);
    if (info.empty() || info.size() > kProductInfoMaxChars)
        throw std::invalid_argument("product info must be 1..900 Latin-1 characters");
    if (signature.size() < kSignatureMinBytes || signature.size() > kSignatureMaxBytes)
        throw std::invalid_argument("signature blob must be 70..72 bytes, got " +
                                    std::to_string(signature.size()));

    PayloadB payload;
    payload.bytes.reserve(2 + info.size() + signature.size());
    payload.bytes.push_back(static_cast<std::uint8_t>(info.size() >> 8));
    payload.bytes.push_back(static_cast<std::uint8_t>(info.size() & 0xFF));
    payload.bytes.insert(payload.bytes.end(), info.begin(), info.end());
    payload.bytes.insert(payload.bytes.end(), signature.begin(), signature.end());
    return payload;
}

DecodedPayloadB decode_payload_b(const PayloadB& payload) {
    const auto& b = payload.bytes;
    if (b.size() < 2) throw PayloadParseError("payload B shorter than its length prefix", b.size());
    const std::size_t info_len = (static_cast<std::size_t>(b[0]) << 8) | b[1];
    if (info_len == 0 || info_len > kProductInfoMaxChars)
        throw PayloadParseError("product info length out of range", 0);
    if (b.size() < 2 + info_len)
        throw PayloadParseError("payload B truncated inside product info", b.size());
    const std::size_t sig_len = b.size() - 2 - info_len;
    if (sig_len < kSignatureMinBytes || sig_len > kSignatureMaxBytes)
        throw PayloadParseError("signature blob must be 70..72 bytes, got " +
                                    std::to_string(sig_len),
                                2 + info_len);

    DecodedPayloadB out;
    out.product_info = from_latin1(b.data() + 2, info_len);
    out.signature.assign(b.begin() + 2 + static_cast<std::ptrdiff_t>(info_len), b.end());
    return out;
}

double recommended_print_side_cm(const PayloadA& payload) {
    return std::max(static_cast<double>(payload.point_count()) / 60.0, 1.0);
}

double recommended_print_side_cm(const PayloadB& payload) {
    const auto& b = payload.bytes;
    if (b.size() < 2) throw PayloadParseError("payload B shorter than its length prefix", b.size());
    const std::size_t info_len = (static_cast<std::size_t>(b[0]) << 8) | b[1];
    return std::max(static_cast<double>(info_len) / 500.0, 1.0);
}

}  // namespace authlabel
