#include <authlabel/signing.hpp>

#include <openssl/bn.h>
#include <openssl/core_names.h>
#include <openssl/ec.h>
#include <openssl/evp.h>
#include <openssl/obj_mac.h>
#include <openssl/param_build.h>
#include <openssl/pem.h>
#include <openssl/sha.h>

#include <cstring>
#include <memory>

namespace authlabel {

namespace {

struct BioFree {
    void operator()(BIO* b) const { BIO_free(b); }
};
struct PkeyFree {
    void operator()(EVP_PKEY* k) const { EVP_PKEY_free(k); }
};
struct MdCtxFree {
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};
using BioPtr = std::unique_ptr<BIO, BioFree>;
using PkeyPtr = std::unique_ptr<EVP_PKEY, PkeyFree>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, MdCtxFree>;

PkeyPtr read_private_pem(const std::string& pem) {
    BioPtr bio(BIO_new_mem_buf(pem.data(), static_cast<int>(pem.size())));
    if (!bio) throw SigningError("out of memory");
    PkeyPtr key(PEM_read_bio_PrivateKey(bio.get(), nullptr, nullptr, nullptr));
    if (!key) throw SigningError("cannot parse private key PEM");
    return key;
}

PkeyPtr read_public_pem(const std::string& pem) {
    BioPtr bio(BIO_new_mem_buf(pem.data(), static_cast<int>(pem.size())));
    if (!bio) return nullptr;
    return PkeyPtr(PEM_read_bio_PUBKEY(bio.get(), nullptr, nullptr, nullptr));
}

std::string pem_string(EVP_PKEY* key, bool is_private) {
    BioPtr bio(BIO_new(BIO_s_mem()));
    if (!bio) throw SigningError("out of memory");
    const int ok = is_private
                       ? PEM_write_bio_PKCS8PrivateKey(bio.get(), key, nullptr, nullptr, 0,
                                                       nullptr, nullptr)
                       : PEM_write_bio_PUBKEY(bio.get(), key);
    if (ok != 1) throw SigningError("cannot serialize key to PEM");
    char* data = nullptr;
    const long len = BIO_get_mem_data(bio.get(), &data);
    return std::string(data, static_cast<std::size_t>(len));
}

// Private scalar derived by hashing (seed, counter) until the value lands in
// [1, n-1]; the matching public point is d * G.
PkeyPtr keypair_from_seed(std::uint64_t seed) {
    std::unique_ptr<EC_GROUP, decltype(&EC_GROUP_free)> group(
        EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1), EC_GROUP_free);
    if (!group) throw SigningError("cannot load curve parameters");
    std::unique_ptr<BN_CTX, decltype(&BN_CTX_free)> bnctx(BN_CTX_new(), BN_CTX_free);
    std::unique_ptr<BIGNUM, decltype(&BN_free)> order(BN_new(), BN_free);
    if (!bnctx || !order || EC_GROUP_get_order(group.get(), order.get(), bnctx.get()) != 1)
        throw SigningError("cannot query curve order");

    std::unique_ptr<BIGNUM, decltype(&BN_free)> priv(nullptr, BN_free);
    for (std::uint32_t counter = 0; counter < 256; ++counter) {
        std::vector<std::uint8_t> material(12);
        for (int i = 0; i < 8; ++i) material[i] = static_cast<std::uint8_t>(seed >> (8 * i));
        for (int i = 0; i < 4; ++i)
            material[8 + i] = static_cast<std::uint8_t>(counter >> (8 * i));
        const auto digest = sha256(material);
        priv.reset(BN_bin2bn(digest.data(), static_cast<int>(digest.size()), nullptr));
        if (priv && !BN_is_zero(priv.get()) && BN_cmp(priv.get(), order.get()) < 0) break;
        priv.reset();
    }
    if (!priv) throw SigningError("could not derive a valid private scalar");

    std::unique_ptr<EC_POINT, decltype(&EC_POINT_free)> pub(EC_POINT_new(group.get()),
                                                            EC_POINT_free);
    if (!pub ||
        EC_POINT_mul(group.get(), pub.get(), priv.get(), nullptr, nullptr, bnctx.get()) != 1)
        throw SigningError("cannot compute public point");
    std::vector<std::uint8_t> pub_octets(
        EC_POINT_point2oct(group.get(), pub.get(), POINT_CONVERSION_UNCOMPRESSED, nullptr, 0,
                           bnctx.get()));
    if (pub_octets.empty() ||
        EC_POINT_point2oct(group.get(), pub.get(), POINT_CONVERSION_UNCOMPRESSED,
                           pub_octets.data(), pub_octets.size(), bnctx.get()) == 0)
        throw SigningError("cannot encode public point");

    std::unique_ptr<OSSL_PARAM_BLD, decltype(&OSSL_PARAM_BLD_free)> bld(OSSL_PARAM_BLD_new(),
                                                                        OSSL_PARAM_BLD_free);
    if (!bld ||
        OSSL_PARAM_BLD_push_utf8_string(bld.get(), OSSL_PKEY_PARAM_GROUP_NAME, "prime256v1",
                                        0) != 1 ||
        OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_PRIV_KEY, priv.get()) != 1 ||
        OSSL_PARAM_BLD_push_octet_string(bld.get(), OSSL_PKEY_PARAM_PUB_KEY,
                                         pub_octets.data(), pub_octets.size()) != 1)
        throw SigningError("cannot assemble key parameters");
    std::unique_ptr<OSSL_PARAM, decltype(&OSSL_PARAM_free)> params(
        OSSL_PARAM_BLD_to_param(bld.get()), OSSL_PARAM_free);

    std::unique_ptr<EVP_PKEY_CTX, decltype(&EVP_PKEY_CTX_free)> ctx(
        EVP_PKEY_CTX_new_from_name(nullptr, "EC", nullptr), EVP_PKEY_CTX_free);
    EVP_PKEY* raw = nullptr;
    if (!ctx || !params || EVP_PKEY_fromdata_init(ctx.get()) != 1 ||
        EVP_PKEY_fromdata(ctx.get(), &raw, EVP_PKEY_KEYPAIR, params.get()) != 1)
        throw SigningError("cannot build keypair from derived scalar");
    return PkeyPtr(raw);
}

}  // namespace

KeyPair generate_keypair(std::optional<std::uint64_t> seed) {
    PkeyPtr key;
    if (seed) {
        key = keypair_from_seed(*seed);
    } else {
        key.reset(EVP_PKEY_Q_keygen(nullptr, nullptr, "EC", "prime256v1"));
        if (!key) throw SigningError("key generation failed (entropy source unavailable?)");
    }
    return {pem_string(key.get(), true), pem_string(key.get(), false)};
}

std::array<std::uint8_t, 32> sha256(const std::vector<std::uint8_t>& data) {
    std::array<std::uint8_t, 32> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != digest.size())
        throw SigningError("SHA-256 computation failed");
    return digest;
}

std::vector<std::uint8_t> signed_message(const PayloadA& payload_a,
                                         const std::string& product_info) {
    // Product info enters as Latin-1, exactly as carried on the second QR
    // blob; 0x1F separates the two parts unambiguously.
    const std::vector<std::uint8_t> info = latin1_bytes(product_info);
    std::vector<std::uint8_t> message;
    message.reserve(payload_a.digits.size() + 1 + info.size());
    message.insert(message.end(), payload_a.digits.begin(), payload_a.digits.end());
    message.push_back(0x1F);
    message.insert(message.end(), info.begin(), info.end());
    return message;
}

std::vector<std::uint8_t> sign_payload(const PayloadA& payload_a,
                                       const std::string& product_info,
                                       const std::string& private_key_pem) {
    const PkeyPtr key = read_private_pem(private_key_pem);
    const std::vector<std::uint8_t> message = signed_message(payload_a, product_info);

    // DER encodes (r, s) minimally, so a leading zero byte in either integer
    // shortens the blob below the 70-byte envelope; re-draw the randomized
    // nonce until the length lands in range.
    for (int attempt = 0; attempt < 64; ++attempt) {
        MdCtxPtr ctx(EVP_MD_CTX_new());
        if (!ctx ||
            EVP_DigestSignInit(ctx.get(), nullptr, EVP_sha256(), nullptr, key.get()) != 1)
            throw SigningError("cannot initialize signing context");
        std::size_t sig_len = 0;
        if (EVP_DigestSign(ctx.get(), nullptr, &sig_len, message.data(), message.size()) != 1)
            throw SigningError("cannot size signature");
        std::vector<std::uint8_t> signature(sig_len);
        if (EVP_DigestSign(ctx.get(), signature.data(), &sig_len, message.data(),
                           message.size()) != 1)
            throw SigningError("signing failed");
        signature.resize(sig_len);
        if (signature.size() >= kSignatureMinBytes && signature.size() <= kSignatureMaxBytes)
            return signature;
    }
    throw SigningError("could not produce a signature inside the 70..72 byte envelope");
}

bool verify_signature(const PayloadA& payload_a, const std::string& product_info,
                      const std::vector<std::uint8_t>& signature,
                      const std::string& public_key_pem) {
    const PkeyPtr key = read_public_pem(public_key_pem);
    if (!key) return false;
    std::vector<std::uint8_t> message;
    try {
        message = signed_message(payload_a, product_info);
    } catch (const std::exception&) {
        return false;
    }
    MdCtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx ||
        EVP_DigestVerifyInit(ctx.get(), nullptr, EVP_sha256(), nullptr, key.get()) != 1)
        return false;
    return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(), message.data(),
                            message.size()) == 1;
}

}  // namespace authlabel
