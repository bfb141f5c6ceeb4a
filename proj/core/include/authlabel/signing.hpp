#pragma once

#include <authlabel/payload.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace authlabel {

/// secp256r1 keypair in standard PEM encodings (PKCS#8 private key, SPKI
/// public key). A local key file stands in for a full key-distribution
/// infrastructure.
struct KeyPair {
    std::string private_key_pem;
    std::string public_key_pem;
};

struct SigningError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Generates a secp256r1 keypair. Without a seed the system entropy source
/// is used; with a seed the private scalar is derived deterministically,
/// which keeps test fixtures reproducible.
KeyPair generate_keypair(std::optional<std::uint64_t> seed = std::nullopt);

/// SHA-256 digest of a byte string.
std::array<std::uint8_t, 32> sha256(const std::vector<std::uint8_t>& data);

/// Builds the byte string covered by the signature: the Payload A digits,
/// a 0x1F separator, then the Latin-1 encoded product info.
std::vector<std::uint8_t> signed_message(const PayloadA& payload_a,
                                         const std::string& product_info);

/// ECDSA signature over SHA-256(signed_message(...)), DER encoded. The blob
/// is always 70..72 bytes: 64 bytes of raw (r, s) content plus the 6..8 byte
/// structural wrapper.
std::vector<std::uint8_t> sign_payload(const PayloadA& payload_a,
                                       const std::string& product_info,
                                       const std::string& private_key_pem);

/// True iff the blob validates the exact reconstructed message under the
/// public key. Malformed blobs or keys yield false, never an exception, so
/// the verification workflow can abort uniformly.
bool verify_signature(const PayloadA& payload_a, const std::string& product_info,
                      const std::vector<std::uint8_t>& signature,
                      const std::string& public_key_pem);

}  // namespace authlabel
