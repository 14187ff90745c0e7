#include <catch2/catch_amalgamated.hpp>

#include <fstream>

#include "pdnsim/rng.hpp"
#include "pdnsim/token.hpp"

using namespace pdnsim;

namespace {

const char* kSecret = "tracker-token-secret";

AccessToken reference_claims() {
    AccessToken t;
    t.customer_id = "xx.yy";
    t.pdn_peer_id = "1";
    t.video_ids = {"https://xx.yy/zz.m3u8", "https://xx.yy/hh.m3u8"};
    t.timestamp = 1619814238;
    t.ttl = 60;
    t.usage_limit = 1;
    return t;
}

std::string read_fixture(const char* name) {
    std::ifstream in(std::string(PDNSIM_TEST_DATA_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::map<std::string, std::string> one_customer() { return {{"xx.yy", kSecret}}; }

}  // namespace

TEST_CASE("reference token encodes to the frozen golden bytes") {
    // The golden file was produced by an independent implementation
    // (python stdlib hmac/json/base64) from the same claims and secret.
    auto tok = issue_token(kSecret, reference_claims());
    std::string compact = encode_token(tok);
    CHECK(compact == read_fixture("reference_token.jwt"));
    CHECK(compact.size() == 283);
}

TEST_CASE("decode inverts encode and preserves claims") {
    auto tok = issue_token(kSecret, reference_claims());
    auto back = decode_token(encode_token(tok));
    REQUIRE(back.has_value());
    CHECK(back->claims == reference_claims());
    CHECK(back->header_raw == tok.header_raw);
    CHECK(back->payload_raw == tok.payload_raw);
    CHECK(back->signature == tok.signature);
    CHECK(encode_token(*back) == encode_token(tok));
}

TEST_CASE("decode round trips assorted claim shapes") {
    for (int i = 0; i < 20; ++i) {
        AccessToken t;
        t.customer_id = "customer-" + std::to_string(i);
        t.pdn_peer_id = std::to_string(i * 7);
        for (int v = 0; v < i % 5; ++v)
            t.video_ids.push_back("https://cdn.example/" + std::to_string(v) + ".m3u8");
        t.timestamp = 1700000000ull + i;
        t.ttl = 1 + i * 13;
        t.usage_limit = 1 + i % 4;
        auto tok = issue_token("s3cr3t", t);
        auto back = decode_token(encode_token(tok));
        REQUIRE(back.has_value());
        CHECK(back->claims == t);
        CHECK(encode_token(*back) == encode_token(tok));
    }
}

TEST_CASE("unknown payload fields survive a decode/encode round trip") {
    SignedToken t;
    t.header_raw = token_header_json();
    t.payload_raw =
        "{\"customer_id\":\"xx.yy\",\"pdn_peer_id\":\"1\",\"video_ids\":[],"
        "\"timestamp\":1619814238,\"ttl\":60,\"usage_limit\":1,"
        "\"session_hint\":\"opaque-extension\"}";
    t.signature = hmac_sha256(kSecret, t.signing_input());
    std::string compact = encode_token(t);

    auto back = decode_token(compact);
    REQUIRE(back.has_value());
    CHECK(encode_token(*back) == compact);
    CHECK(back->claims.customer_id == "xx.yy");
    // The extension field is carried, and the signature still verifies.
    CHECK(back->payload_raw.find("session_hint") != std::string::npos);
    UsageLedger ledger;
    auto verdict = verify_token(*back, 1619814238, "x", one_customer(), ledger);
    CHECK(verdict.reason == TokenReject::video_mismatch);  // past the signature check
}

TEST_CASE("decode rejects structural garbage") {
    CHECK_FALSE(decode_token("").has_value());
    CHECK_FALSE(decode_token("only-one-part").has_value());
    CHECK_FALSE(decode_token("a.b").has_value());
    CHECK_FALSE(decode_token("a.b.c.d").has_value());
    CHECK_FALSE(decode_token("!!!.###.$$$").has_value());

    auto tok = issue_token(kSecret, reference_claims());
    std::string compact = encode_token(tok);
    CHECK_FALSE(decode_token(compact + "=").has_value());   // padding
    CHECK_FALSE(decode_token(compact + "A").has_value());   // broken signature length

    auto forged = [&](std::string header, std::string payload) {
        SignedToken t;
        t.header_raw = std::move(header);
        t.payload_raw = std::move(payload);
        t.signature = hmac_sha256(kSecret, t.signing_input());
        return decode_token(encode_token(t));
    };
    std::string good_payload = token_payload_json(reference_claims());
    CHECK_FALSE(forged("{\"alg\":\"none\",\"typ\":\"JWT\"}", good_payload).has_value());
    CHECK_FALSE(forged("[]", good_payload).has_value());
    CHECK_FALSE(forged("not json", good_payload).has_value());
    CHECK_FALSE(forged(token_header_json(), "[]").has_value());
    CHECK_FALSE(forged(token_header_json(), "{\"customer_id\":\"x\"}").has_value());
    CHECK_FALSE(forged(token_header_json(),
                       "{\"customer_id\":\"x\",\"pdn_peer_id\":\"1\",\"video_ids\":[],"
                       "\"timestamp\":-5,\"ttl\":60,\"usage_limit\":1}")
                    .has_value());
    CHECK_FALSE(forged(token_header_json(),
                       "{\"customer_id\":\"x\",\"pdn_peer_id\":\"1\",\"video_ids\":[7],"
                       "\"timestamp\":5,\"ttl\":60,\"usage_limit\":1}")
                    .has_value());
    CHECK_FALSE(forged(token_header_json(),
                       "{\"customer_id\":\"x\",\"pdn_peer_id\":\"1\",\"video_ids\":[],"
                       "\"timestamp\":5,\"ttl\":\"60\",\"usage_limit\":1}")
                    .has_value());
}

TEST_CASE("verification walks the full rule chain") {
    auto claims = reference_claims();
    auto tok = issue_token(kSecret, claims);
    auto secrets = one_customer();
    std::uint64_t t0 = claims.timestamp;

    SECTION("accepts a fresh token for a bound video") {
        UsageLedger ledger;
        auto v = verify_token(tok, t0, "https://xx.yy/zz.m3u8", secrets, ledger);
        CHECK(v.accepted);
        CHECK(v.reason == TokenReject::none);
        CHECK(ledger.uses(token_fingerprint(tok)) == 1);
    }
    SECTION("unknown customer") {
        UsageLedger ledger;
        auto v = verify_token(tok, t0, "https://xx.yy/zz.m3u8", {{"other", "k"}}, ledger);
        CHECK(v.reason == TokenReject::unknown_customer);
    }
    SECTION("bad signature (wrong issuing key)") {
        UsageLedger ledger;
        auto forged = issue_token("guessed-wrong", claims);
        auto v = verify_token(forged, t0, "https://xx.yy/zz.m3u8", secrets, ledger);
        CHECK(v.reason == TokenReject::bad_signature);
    }
    SECTION("bad signature (tampered claims)") {
        UsageLedger ledger;
        SignedToken tampered = tok;
        tampered.payload_raw = token_payload_json([&] {
            auto c = claims;
            c.usage_limit = 1000000;
            return c;
        }());
        tampered.claims.usage_limit = 1000000;
        auto v = verify_token(tampered, t0, "https://xx.yy/zz.m3u8", secrets, ledger);
        CHECK(v.reason == TokenReject::bad_signature);
    }
    SECTION("expiry boundary is exact") {
        UsageLedger ledger;
        auto at = [&](std::uint64_t now) {
            UsageLedger fresh;
            return verify_token(tok, now, "https://xx.yy/zz.m3u8", secrets, fresh);
        };
        CHECK(at(t0 + claims.ttl - 1).accepted);
        CHECK(at(t0 + claims.ttl).reason == TokenReject::expired);
        CHECK(at(t0 + claims.ttl + 1000).reason == TokenReject::expired);
    }
    SECTION("video binding") {
        UsageLedger ledger;
        auto v = verify_token(tok, t0, "https://evil.example/other.m3u8", secrets, ledger);
        CHECK(v.reason == TokenReject::video_mismatch);
        CHECK(ledger.uses(token_fingerprint(tok)) == 0);  // rejection burns nothing
    }
    SECTION("usage limit counts accepted uses only") {
        UsageLedger ledger;
        CHECK(verify_token(tok, t0, "https://xx.yy/zz.m3u8", secrets, ledger).accepted);
        auto replay = verify_token(tok, t0, "https://xx.yy/zz.m3u8", secrets, ledger);
        CHECK(replay.reason == TokenReject::usage_exceeded);

        auto multi_claims = claims;
        multi_claims.usage_limit = 3;
        auto multi = issue_token(kSecret, multi_claims);
        for (int i = 0; i < 3; ++i)
            CHECK(verify_token(multi, t0, "https://xx.yy/zz.m3u8", secrets, ledger).accepted);
        CHECK(verify_token(multi, t0, "https://xx.yy/zz.m3u8", secrets, ledger).reason ==
              TokenReject::usage_exceeded);
    }
    SECTION("distinct token instances have distinct budgets") {
        UsageLedger ledger;
        auto claims2 = claims;
        claims2.pdn_peer_id = "2";
        auto tok2 = issue_token(kSecret, claims2);
        CHECK(token_fingerprint(tok) != token_fingerprint(tok2));
        CHECK(verify_token(tok, t0, "https://xx.yy/zz.m3u8", secrets, ledger).accepted);
        CHECK(verify_token(tok2, t0, "https://xx.yy/zz.m3u8", secrets, ledger).accepted);
    }
}

TEST_CASE("single-byte mutations never yield an accepted token") {
    auto tok = issue_token(kSecret, reference_claims());
    std::string compact = encode_token(tok);
    auto secrets = one_customer();
    Rng rng(20260816);
    int decoded_ok = 0;
    for (int i = 0; i < 500; ++i) {
        std::string mut = compact;
        std::size_t pos = rng.below(mut.size());
        char repl = static_cast<char>(rng.below(256));
        if (repl == mut[pos]) continue;
        mut[pos] = repl;
        auto dec = decode_token(mut);
        if (!dec) continue;
        ++decoded_ok;
        UsageLedger ledger;
        auto v = verify_token(*dec, reference_claims().timestamp, "https://xx.yy/zz.m3u8",
                              secrets, ledger);
        CHECK_FALSE(v.accepted);
    }
    INFO("mutations that still decoded: " << decoded_ok);
}
