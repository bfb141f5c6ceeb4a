#include <doctest.h>

#include <authlabel/label_model.hpp>
#include <authlabel/payload.hpp>

#include <algorithm>
#include <random>

using namespace authlabel;

TEST_CASE("payload A length follows the digit budget") {
    const PointCloud cloud = generate_reference(LabelKind::Beads, 50, 3);
    const PayloadA payload = encode_payload_a(cloud);
    CHECK(payload.digits.size() == 5 + 23 * 50);
    CHECK(payload.point_count() == 50);
    CHECK(payload.kind() == LabelKind::Beads);
    CHECK(std::all_of(payload.digits.begin(), payload.digits.end(),
                      [](char c) { return c >= '0' && c <= '9'; }));
}

TEST_CASE("per-point layout is the fixed-width digit string") {
    PointCloud cloud;
    cloud.kind = LabelKind::Beads;
    cloud.points = {{1, 20, 300}, {999999, 0, 99999}, {500, 600, 700}};
    cloud.radii = {{10, 8, 8}, {99, 1, 42}, {5, 5, 5}};
    const PayloadA payload = encode_payload_a(cloud);
    CHECK(payload.digits.substr(0, 5) == "00030");
    CHECK(payload.digits.substr(5, 23) == "00000100002000300" "100808");
    CHECK(payload.digits.substr(28, 23) == "99999900000099999" "990142");
    CHECK(decode_payload_a(payload) == cloud);
}

TEST_CASE("payload A rejects invalid clouds") {
    PointCloud empty;
    empty.kind = LabelKind::Beads;
    CHECK_THROWS_AS(encode_payload_a(empty), std::invalid_argument);

    PointCloud out_of_box;
    out_of_box.kind = LabelKind::Beads;
    out_of_box.points = {{-1, 0, 0}, {0, 0, 0}, {1, 1, 1}};
    out_of_box.radii = {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}};
    CHECK_THROWS_AS(encode_payload_a(out_of_box), std::out_of_range);

    PointCloud bad_radii;
    bad_radii.kind = LabelKind::Beads;
    bad_radii.points = {{0, 0, 0}, {5, 5, 5}, {9, 9, 9}};
    bad_radii.radii = {{0, 1, 1}, {1, 1, 1}, {1, 1, 1}};
    CHECK_THROWS_AS(encode_payload_a(bad_radii), std::out_of_range);
}

TEST_CASE("payload A decode reports malformed input precisely") {
    const PointCloud cloud = generate_reference(LabelKind::Rods, 24, 9);
    PayloadA payload = encode_payload_a(cloud);

    SUBCASE("roundtrip is the identity") {
        CHECK(decode_payload_a(payload) == cloud);
    }
    SUBCASE("truncation names expected and actual length") {
        PayloadA truncated{payload.digits.substr(0, payload.digits.size() - 7)};
        try {
            decode_payload_a(truncated);
            FAIL("expected a parse error");
        } catch (const PayloadParseError& e) {
            const std::string what = e.what();
            CHECK(what.find(std::to_string(5 + 23 * 24)) != std::string::npos);
            CHECK(what.find(std::to_string(truncated.digits.size())) != std::string::npos);
        }
    }
    SUBCASE("a letter is reported at its offset") {
        payload.digits[37] = 'x';
        try {
            decode_payload_a(payload);
            FAIL("expected a parse error");
        } catch (const PayloadParseError& e) {
            CHECK(e.offset == 37);
        }
    }
}

TEST_CASE("payload A roundtrip holds for generated clouds") {
    std::mt19937_64 rng(12345);
    for (int i = 0; i < 1000; ++i) {
        const LabelKind kind = i % 2 == 0 ? LabelKind::Beads : LabelKind::Rods;
        int n = 6 + static_cast<int>(rng() % 55);
        if (kind == LabelKind::Rods && n % 2 != 0) ++n;
        const PointCloud cloud = generate_reference(kind, n, rng());
        const PayloadA payload = encode_payload_a(cloud);
        CHECK(payload.digits.size() == 5 + 23 * cloud.size());
        CHECK(decode_payload_a(payload) == cloud);
    }
}

TEST_CASE("payload B frames info and signature with a length prefix") {
    const std::string info = "Acme Werk 7, Serie 0042";  // 23 characters
    const std::vector<std::uint8_t> sig(71, 0xAB);
    const PayloadB payload = encode_payload_b(info, sig);
    REQUIRE(payload.bytes.size() == 2 + 23 + 71);
    CHECK(payload.bytes[0] == 0);
    CHECK(payload.bytes[1] == 23);
    const DecodedPayloadB decoded = decode_payload_b(payload);
    CHECK(decoded.product_info == info);
    CHECK(decoded.signature == sig);
}

TEST_CASE("payload B roundtrip over random Latin-1 strings") {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> len(1, 900);
    std::uniform_int_distribution<int> byte(0x20, 0xFF);
    std::uniform_int_distribution<int> sig_len(70, 72);
    for (int i = 0; i < 1000; ++i) {
        std::string info;
        const int n = len(rng);
        for (int k = 0; k < n; ++k) {
            const int cp = byte(rng);
            if (cp < 0x80) {
                info.push_back(static_cast<char>(cp));
            } else {  // UTF-8 encode the Latin-1 codepoint
                info.push_back(static_cast<char>(0xC0 | (cp >> 6)));
                info.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
            }
        }
        std::vector<std::uint8_t> sig(sig_len(rng));
        for (auto& b : sig) b = static_cast<std::uint8_t>(rng());

        const DecodedPayloadB decoded = decode_payload_b(encode_payload_b(info, sig));
        CHECK(decoded.product_info == info);
        CHECK(decoded.signature == sig);
    }
}

TEST_CASE("payload B rejects out-of-contract input") {
    const std::vector<std::uint8_t> sig(70, 1);
    CHECK_THROWS_AS(encode_payload_b("", sig), std::invalid_argument);
    CHECK_THROWS_AS(encode_payload_b(std::string(901, 'a'), sig), std::invalid_argument);
    CHECK_THROWS_AS(encode_payload_b("euro sign: \xE2\x82\xAC", sig), std::invalid_argument);
    CHECK_THROWS_AS(encode_payload_b("ok", std::vector<std::uint8_t>(69, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(encode_payload_b("ok", std::vector<std::uint8_t>(73, 1)),
                    std::invalid_argument);

    PayloadB truncated;
    truncated.bytes = {0x00};
    CHECK_THROWS_AS(decode_payload_b(truncated), PayloadParseError);
}

TEST_CASE("recommended print sizes floor at one centimeter") {
    PointCloud cloud = generate_reference(LabelKind::Beads, 50, 3);
    CHECK(recommended_print_side_cm(encode_payload_a(cloud)) == 1.0);

    const PointCloud large = generate_reference(LabelKind::Beads, 120, 3);
    CHECK(recommended_print_side_cm(encode_payload_a(large)) == doctest::Approx(2.0));

    const std::vector<std::uint8_t> sig(70, 1);
    CHECK(recommended_print_side_cm(encode_payload_b(std::string(900, 'x'), sig)) ==
          doctest::Approx(1.8));
    CHECK(recommended_print_side_cm(encode_payload_b("short", sig)) == 1.0);
}
