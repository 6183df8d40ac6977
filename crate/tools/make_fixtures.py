#!/usr/bin/env python3
"""Regenerates the fixture corpus: vector sets plus expected response sets.

Every expected value is computed here, independently of the Rust code, from
hashlib, the `cryptography` package (AES-GCM), pure-python RFC 8017 padding,
and python integers (bn). Outputs are deterministic; the committed files are
frozen and this script only exists so they can be audited or regenerated.

Usage: python3 tools/make_fixtures.py   (from the repository root)
"""

import hashlib
import json
import os
import random
import sys

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
VECTORS = os.path.join(ROOT, "fixtures", "vectors")
EXPECTED = os.path.join(ROOT, "fixtures", "expected")
SCHEMA = os.path.join(ROOT, "fixtures", "schema")

RNG = random.Random(0xACE1)


def hexu(b: bytes) -> str:
    return b.hex().upper()


def write_json(path, doc):
    with open(path, "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")


def emit(name, vectors, expected):
    write_json(os.path.join(VECTORS, name + ".json"), vectors)
    write_json(os.path.join(EXPECTED, name + ".json"), expected)


# ---------------------------------------------------------------------------
# SHA

SHA_IMPLS = {
    "SHA2-256": hashlib.sha256,
    "SHA2-384": hashlib.sha384,
    "SHA2-512": hashlib.sha512,
}


def sha_kat(name, algorithm, vs_id, count):
    tests, results = [], []
    for tc in range(1, count + 1):
        msg = b"" if tc == 1 else RNG.randbytes(RNG.randrange(1, 200))
        tests.append({"tcId": tc, "msg": hexu(msg)})
        results.append({"tcId": tc, "md": hexu(SHA_IMPLS[algorithm](msg).digest())})
    vectors = {
        "vsId": vs_id,
        "algorithm": algorithm,
        "revision": "1.0",
        "testGroups": [{"tgId": 1, "testType": "AFT", "tests": tests}],
    }
    emit(name, vectors, {"vsId": vs_id, "testResults": results})


def sha_shared_demo():
    # group-level msg default, one case overrides it (nearest wins)
    base = bytes.fromhex("616263")
    override = b"overridden message"
    vectors = {
        "vsId": 104,
        "algorithm": "SHA2-256",
        "revision": "1.0",
        "testGroups": [
            {
                "tgId": 1,
                "testType": "AFT",
                "msg": hexu(base),
                "tests": [
                    {"tcId": 1},
                    {"tcId": 2, "msg": hexu(override)},
                    {"tcId": 3},
                ],
            }
        ],
    }
    results = [
        {"tcId": 1, "md": hexu(hashlib.sha256(base).digest())},
        {"tcId": 2, "md": hexu(hashlib.sha256(override).digest())},
        {"tcId": 3, "md": hexu(hashlib.sha256(base).digest())},
    ]
    emit("sha2_256_shared_demo", vectors, {"vsId": 104, "testResults": results})


# ---------------------------------------------------------------------------
# AES-GCM

def gcm_encrypt(key, iv, aad, pt, tag_bits):
    enc = Cipher(algorithms.AES(key), modes.GCM(iv)).encryptor()
    enc.authenticate_additional_data(aad)
    ct = enc.update(pt) + enc.finalize()
    return ct, enc.tag[: tag_bits // 8]


def gcm_kat():
    tag_lens = [96, 104, 112, 120, 128]
    enc_tests, dec_tests = [], []
    enc_results, dec_results = [], []
    tc = 0
    for i in range(30):
        tc += 1
        key = RNG.randbytes(16 if i % 2 == 0 else 32)
        iv = RNG.randbytes(12 if i % 3 else 16)
        aad = RNG.randbytes(RNG.randrange(0, 24))
        pt = RNG.randbytes(RNG.randrange(0, 64))
        bits = tag_lens[i % len(tag_lens)]
        ct, tag = gcm_encrypt(key, iv, aad, pt, bits)
        enc_tests.append({
            "tcId": tc, "key": hexu(key), "iv": hexu(iv), "aad": hexu(aad),
            "pt": hexu(pt), "tagLen": bits,
        })
        enc_results.append({"tcId": tc, "ct": hexu(ct), "tag": hexu(tag)})
    for i in range(30):
        tc += 1
        key = RNG.randbytes(32 if i % 2 == 0 else 16)
        iv = RNG.randbytes(12)
        aad = RNG.randbytes(RNG.randrange(0, 24))
        pt = RNG.randbytes(RNG.randrange(1, 64))
        bits = tag_lens[i % len(tag_lens)]
        ct, tag = gcm_encrypt(key, iv, aad, pt, bits)
        tampered = i % 5 == 4
        if tampered:
            tag = bytes([tag[0] ^ 0x01]) + tag[1:]
        dec_tests.append({
            "tcId": tc, "key": hexu(key), "iv": hexu(iv), "aad": hexu(aad),
            "ct": hexu(ct), "tag": hexu(tag), "tagLen": bits,
        })
        if tampered:
            dec_results.append({"tcId": tc, "testPassed": False})
        else:
            dec_results.append({"tcId": tc, "testPassed": True, "pt": hexu(pt)})
    vectors = {
        "vsId": 201,
        "algorithm": "ACVP-AES-GCM",
        "revision": "1.0",
        "testGroups": [
            {"tgId": 1, "testType": "AFT", "direction": "encrypt", "tests": enc_tests},
            {"tgId": 2, "testType": "AFT", "direction": "decrypt", "tests": dec_tests},
        ],
    }
    emit("aes_gcm_kat", vectors, {"vsId": 201, "testResults": enc_results + dec_results})


def gcm_nested_groups():
    # key and direction at the outer group, iv/tagLen on the inner subgroups
    key = RNG.randbytes(16)
    iv_a, iv_b = RNG.randbytes(12), RNG.randbytes(12)
    tests_a, tests_b, results = [], [], []
    for tc in (1, 2, 3):
        pt = RNG.randbytes(16 * tc)
        ct, tag = gcm_encrypt(key, iv_a, b"", pt, 128)
        tests_a.append({"tcId": tc, "pt": hexu(pt)})
        results.append({"tcId": tc, "ct": hexu(ct), "tag": hexu(tag)})
    for tc in (4, 5, 6):
        pt = RNG.randbytes(8 * tc)
        ct, tag = gcm_encrypt(key, iv_b, b"", pt, 96)
        tests_b.append({"tcId": tc, "pt": hexu(pt)})
        results.append({"tcId": tc, "ct": hexu(ct), "tag": hexu(tag)})
    vectors = {
        "vsId": 202,
        "algorithm": "ACVP-AES-GCM",
        "revision": "1.0",
        "testGroups": [
            {
                "tgId": 1,
                "testType": "AFT",
                "direction": "encrypt",
                "key": hexu(key),
                "aad": "",
                "subgroups": [
                    {"tgId": 2, "iv": hexu(iv_a), "tagLen": 128, "tests": tests_a},
                    {"tgId": 3, "iv": hexu(iv_b), "tagLen": 96, "tests": tests_b},
                ],
            }
        ],
    }
    emit("aes_gcm_nested_groups", vectors, {"vsId": 202, "testResults": results})


# ---------------------------------------------------------------------------
# RSA — pure-python RFC 8017 pieces

KEY_1024 = {
    "n": "E1AF5EE4BE515F663628A56C999336A8D37414735AB05EC74898A6FC8A1B835651A8BDD82D8088E220AC7591482CBBC3C65DBAEB34DDD46E311C2DAC0ECE04538B4196A01B5AC7A2C1700CC582284AD8E1A3D20B8C7392BABF8BF390D51A09E2F4370D34AAFE1D3FA2E97B6702BDB002B5C69D41CE2DB3767C6E2F0572B2AF11",
    "e": "010001",
    "d": "AA90198D92F078C30CC7674E4E3ADE2275BCD2FFE3584C291C8A9219665F28C181F19F98D3BAC2B8F3ACA325EB80335FE079521D14D55A08F580B05BCACC94A30BB5CE4592A13FF0AC09E84C96FF4601BBDFDBB9DC3A91E95801CBD5138D91C5FDC87285EC913ADF4E354684E533507A1FB5D50B0AEA39A31D357039360A9929",
    "p": "F6F273DEFD10DB2262BAC51D5FFAF5182412F526A9BEECA8D64761B42F4F482EB621ECD804AACB6B64149E860D08D3E239844AD8F30D5556CEC039988B4EBEBF",
    "q": "E9F560D26B0714AC0E109B67EC3274FF380D97DD29F7C70E6AEBCB84A3E055749BF3BC5BB411645F06D500F7055084C537B15EC756811C423B3148F790B6D62F",
}
KEY_2048 = {
    "n": "BF02E0D554762BBE604E7FB9878212B18B8F63FA967CB4E30942918F8C6B684226E9E8787F2979E1640CB9408FBDC31B98DC8D38E9B0A8C06E77BACF4815AA173D8B5FC26751B0A80E42C8CF6995599B781E068EFEB6D013A000A952BCB8454CCD8201997BA71C04F399B47878946797985940054B2835EA240CEDBCC2CDD797DDA09A3695E41933267DD8B66F6A2335206221B02CC14410CCFEA71329E0ED2EA15C6C3672253153A82B4417F7A38C4CBAD1A36C4469DD895794919D0E21A1226D2AD4EE3B7DFFF1A0CDB2C9C70CDFD1FE2F17018B5E8E2C5208F4E1066BDA28D0644097CC4034345C3009B99557E3AB149EF2A6A8EE262EC766295EC7559701",
    "e": "010001",
    "d": "0DDD529E897BEE5EEA34A876BA0C49F9132D3C4F931EC82E769C9B5E350E12CA4272D609F108FCACCC8B53E308CBF85E8770F2DB3FB32FFC8FC8270A26AC53E54DF550E51684CA72D85E269F4F85A4B4713A94B54A6DD09AAC118038DE33EDEBCE3AF28CC679F1C1B640E0E5A1B2FBF5F7FBFA76A7E6EA4AED84F6B8ADD72D1FDBB9B775ADC2DED8CF8A37393B616AB9B21B679FD436A0D2E91147FAE7D78CE9123CC15417CAB5B1DBE4E9FE3EE7F9624C3E28FA14ECD7BF222E69AFEAB2341F93A6E71C93C0C824E0840F03381DE7764962661604364B966406C2B4DEC207EAEFC4898E23079B2E897E12A50C6D21287BB6C944BBDA23C51844F052CB728F95",
    "p": "E57011C0F2DA93D7412BA1B0D87AC89972EE51384C4403E0883FC408F3CC6BFC98184F63D3559128254593499F8C0813E70D41EE9B5C10D985AC80D2460F006869B8AB77ED77EE8FB049FEB70BC487B45E59163F1709BA600E1C14C3CDE21059196EA26569A8E7ED41DA58ABFD921F9401B8B4FD130A48B440ABB060A37A0C87",
    "q": "D51FF2AB7E85514864CEF8C97FC269900FFBA8AFA3701E25F11B2D82A8E5CE631BA060276D4FBBE87ABAC082F4409DA97BA58862EB5BCBB82A4BBD252BBB82A7D5FFFA7497082C17E8644CF2A68E98938ACFA09F75564A881A1A419800AEE275E9E5ABD46453B1C4146F9F8E7A1C52D4597D9FE6C464B839C8C2152029EB6A37",
}

DIGEST_INFO = {
    "SHA2-256": bytes.fromhex("3031300d060960864801650304020105000420"),
    "SHA2-384": bytes.fromhex("3041300d060960864801650304020205000430"),
    "SHA2-512": bytes.fromhex("3051300d060960864801650304020305000440"),
}


def ints(key):
    return {k: int(v, 16) for k, v in key.items()}


def k_bytes(n):
    return (n.bit_length() + 7) // 8


def i2osp(x, k):
    return x.to_bytes(k, "big")


def mgf1(seed, out_len, hash_fn):
    out = b""
    counter = 0
    while len(out) < out_len:
        out += hash_fn(seed + counter.to_bytes(4, "big")).digest()
        counter += 1
    return out[:out_len]


def emsa_pkcs1_v15(msg, em_len, alg):
    t = DIGEST_INFO[alg] + SHA_IMPLS[alg](msg).digest()
    ps = b"\xff" * (em_len - len(t) - 3)
    return b"\x00\x01" + ps + b"\x00" + t


def pss_encode(msg, em_bits, salt, alg):
    hash_fn = SHA_IMPLS[alg]
    h_len = hash_fn().digest_size
    em_len = (em_bits + 7) // 8
    m_hash = hash_fn(msg).digest()
    h = hash_fn(b"\x00" * 8 + m_hash + salt).digest()
    db = b"\x00" * (em_len - len(salt) - h_len - 2) + b"\x01" + salt
    mask = mgf1(h, len(db), hash_fn)
    masked = bytes(a ^ b for a, b in zip(db, mask))
    masked = bytes([masked[0] & (0xFF >> (8 * em_len - em_bits))]) + masked[1:]
    return masked + h + b"\xbc"


def oaep_encode(msg, k, seed, alg):
    hash_fn = SHA_IMPLS[alg]
    h_len = hash_fn().digest_size
    l_hash = hash_fn(b"").digest()
    db = l_hash + b"\x00" * (k - len(msg) - 2 * h_len - 2) + b"\x01" + msg
    masked_db = bytes(a ^ b for a, b in zip(db, mgf1(seed, len(db), hash_fn)))
    masked_seed = bytes(a ^ b for a, b in zip(seed, mgf1(masked_db, h_len, hash_fn)))
    return b"\x00" + masked_seed + masked_db


def rsa_kat():
    k1, k2 = ints(KEY_1024), ints(KEY_2048)
    groups, results = [], []
    tc = 0

    # sigGen pkcs1v15, flattened 2048-bit key at group level
    tests = []
    for _ in range(10):
        tc += 1
        alg = ["SHA2-256", "SHA2-384", "SHA2-512"][tc % 3]
        msg = RNG.randbytes(RNG.randrange(1, 100))
        em = emsa_pkcs1_v15(msg, k_bytes(k2["n"]), alg)
        sig = i2osp(pow(int.from_bytes(em, "big"), k2["d"], k2["n"]), k_bytes(k2["n"]))
        tests.append({"tcId": tc, "message": hexu(msg), "hashAlg": alg})
        results.append({"tcId": tc, "signature": hexu(sig)})
    groups.append({
        "tgId": 1, "testType": "AFT", "operation": "sigGen", "padding": "pkcs1v15",
        **KEY_2048, "tests": tests,
    })

    # sigGen pss with saltLen 0 (empty salt makes the encoding deterministic)
    tests = []
    for _ in range(5):
        tc += 1
        msg = RNG.randbytes(RNG.randrange(1, 100))
        em_bits = k1["n"].bit_length() - 1
        em = pss_encode(msg, em_bits, b"", "SHA2-256")
        sig = i2osp(pow(int.from_bytes(em, "big"), k1["d"], k1["n"]), k_bytes(k1["n"]))
        tests.append({"tcId": tc, "message": hexu(msg)})
        results.append({"tcId": tc, "signature": hexu(sig)})
    groups.append({
        "tgId": 2, "testType": "AFT", "operation": "sigGen", "padding": "pss",
        "hashAlg": "SHA2-256", "saltLen": 0, **KEY_1024, "tests": tests,
    })

    # sigVer pkcs1v15: half valid, half corrupted
    tests = []
    for i in range(10):
        tc += 1
        alg = ["SHA2-256", "SHA2-384", "SHA2-512"][tc % 3]
        msg = RNG.randbytes(RNG.randrange(1, 100))
        em = emsa_pkcs1_v15(msg, k_bytes(k2["n"]), alg)
        sig = bytearray(i2osp(pow(int.from_bytes(em, "big"), k2["d"], k2["n"]), k_bytes(k2["n"])))
        good = i % 2 == 0
        if not good:
            sig[-1] ^= 0x01
        tests.append({
            "tcId": tc, "message": hexu(msg), "hashAlg": alg, "signature": hexu(bytes(sig)),
        })
        results.append({"tcId": tc, "testPassed": good})
    groups.append({
        "tgId": 3, "testType": "AFT", "operation": "sigVer", "padding": "pkcs1v15",
        "n": KEY_2048["n"], "e": KEY_2048["e"], "tests": tests,
    })

    # sigVer pss with hLen salts
    tests = []
    for i in range(6):
        tc += 1
        msg = RNG.randbytes(RNG.randrange(1, 100))
        salt = hashlib.sha256(b"pss fixture salt %d" % tc).digest()
        em_bits = k2["n"].bit_length() - 1
        em = pss_encode(msg, em_bits, salt, "SHA2-256")
        sig = bytearray(i2osp(pow(int.from_bytes(em, "big"), k2["d"], k2["n"]), k_bytes(k2["n"])))
        good = i % 3 != 2
        if not good:
            sig[0] ^= 0x40
        tests.append({"tcId": tc, "message": hexu(msg), "signature": hexu(bytes(sig))})
        results.append({"tcId": tc, "testPassed": good})
    groups.append({
        "tgId": 4, "testType": "AFT", "operation": "sigVer", "padding": "pss",
        "hashAlg": "SHA2-256", "saltLen": 32,
        "n": KEY_2048["n"], "e": KEY_2048["e"], "tests": tests,
    })

    # decrypt oaep: ciphertexts built here with fixed seeds, runner recovers pt
    tests = []
    for _ in range(10):
        tc += 1
        k = k_bytes(k2["n"])
        msg = RNG.randbytes(RNG.randrange(1, k - 2 * 32 - 2))
        seed = hashlib.sha256(b"oaep fixture seed %d" % tc).digest()
        em = oaep_encode(msg, k, seed, "SHA2-256")
        ct = i2osp(pow(int.from_bytes(em, "big"), k2["e"], k2["n"]), k)
        tests.append({"tcId": tc, "ct": hexu(ct)})
        results.append({"tcId": tc, "pt": hexu(msg)})
    groups.append({
        "tgId": 5, "testType": "AFT", "operation": "decrypt", "padding": "oaep",
        "hashAlg": "SHA2-256", **KEY_2048, "tests": tests,
    })

    # primitive encrypt / decrypt, fixed-width k-byte outputs
    enc_tests, dec_tests = [], []
    enc_start = tc
    for _ in range(5):
        tc += 1
        k = k_bytes(k1["n"])
        m = RNG.randrange(1, k1["n"])
        c = pow(m, k1["e"], k1["n"])
        enc_tests.append({"tcId": tc, "message": hexu(i2osp(m, k))})
        results.append({"tcId": tc, "ct": hexu(i2osp(c, k))})
    for _ in range(5):
        tc += 1
        k = k_bytes(k1["n"])
        m = RNG.randrange(1, k1["n"])
        c = pow(m, k1["e"], k1["n"])
        dec_tests.append({"tcId": tc, "ct": hexu(i2osp(c, k))})
        results.append({"tcId": tc, "pt": hexu(i2osp(m, k))})
    groups.append({
        "tgId": 6, "testType": "AFT", "operation": "encrypt", "padding": "primitive",
        "hashAlg": "SHA2-256", "n": KEY_1024["n"], "e": KEY_1024["e"], "tests": enc_tests,
    })
    groups.append({
        "tgId": 7, "testType": "AFT", "operation": "decrypt", "padding": "primitive",
        "hashAlg": "SHA2-256", **KEY_1024, "tests": dec_tests,
    })
    assert enc_start + 10 == tc

    # keyPopulate: derivations the reference must reproduce exactly
    def populate_expected(key):
        n, e, p, q = int(key["n"], 16), int(key["e"], 16), int(key["p"], 16), int(key["q"], 16)
        lam = (p - 1) * (q - 1) // gcd(p - 1, q - 1)
        d = int(key["d"], 16) if "d" in key else pow(e, -1, lam)
        comp = {
            "n": n, "e": e, "d": d, "p": p, "q": q,
            "dmp1": d % (p - 1), "dmq1": d % (q - 1), "iqmp": pow(q, -1, p),
        }
        return {k: hexu(i2osp(v, max(1, (v.bit_length() + 7) // 8))) for k, v in comp.items()}

    from math import gcd

    tests = []
    tc += 1
    tests.append({"tcId": tc, "p": KEY_1024["p"], "q": KEY_1024["q"], "e": KEY_1024["e"]})
    results.append({"tcId": tc, **populate_expected({k: KEY_1024[k] for k in ("n", "e", "p", "q")})})
    tc += 1
    tests.append({"tcId": tc, **KEY_1024})
    results.append({"tcId": tc, **populate_expected(KEY_1024)})
    tc += 1
    # nested private-key layout
    tests.append({
        "tcId": tc,
        "privateKey": {"p": KEY_2048["p"], "q": KEY_2048["q"], "e": KEY_2048["e"]},
    })
    results.append({"tcId": tc, **populate_expected({k: KEY_2048[k] for k in ("n", "e", "p", "q")})})
    tc += 1
    tests.append({"tcId": tc, **KEY_2048})
    results.append({"tcId": tc, **populate_expected(KEY_2048)})
    groups.append({"tgId": 8, "testType": "AFT", "operation": "keyPopulate", "tests": tests})

    vectors = {"vsId": 301, "algorithm": "RSA", "revision": "1.0", "testGroups": groups}
    emit("rsa_kat", vectors, {"vsId": 301, "testResults": results})


def rsa_nested_key():
    # same signatures as the flattened layout would produce
    k1 = ints(KEY_1024)
    tests, results = [], []
    for tc in range(1, 5):
        msg = RNG.randbytes(40)
        em = emsa_pkcs1_v15(msg, k_bytes(k1["n"]), "SHA2-256")
        sig = i2osp(pow(int.from_bytes(em, "big"), k1["d"], k1["n"]), k_bytes(k1["n"]))
        tests.append({"tcId": tc, "message": hexu(msg)})
        results.append({"tcId": tc, "signature": hexu(sig)})
    vectors = {
        "vsId": 302,
        "algorithm": "RSA",
        "revision": "1.0",
        "testGroups": [
            {
                "tgId": 1, "testType": "AFT", "operation": "sigGen",
                "padding": "pkcs1v15", "hashAlg": "SHA2-256",
                "privateKey": {k: KEY_1024[k] for k in ("n", "e", "d", "p", "q")},
                "tests": tests,
            }
        ],
    }
    emit("rsa_nested_key", vectors, {"vsId": 302, "testResults": results})


# ---------------------------------------------------------------------------
# bn

def bn_value(v):
    mag = abs(v)
    h = format(mag, "X")
    if mag == 0:
        h = ""
    elif len(h) % 2:
        h = "0" + h
    return h


def bn_operand(v):
    return {"value": bn_value(v), "negative": v < 0}


def bn_kat():
    tests, results = [], []
    tc = 0

    def case(op, operands, result):
        nonlocal tc
        tc += 1
        tests.append({
            "tcId": tc, "operation": op,
            "operands": [bn_operand(v) for v in operands],
        })
        results.append({"tcId": tc, "result": bn_operand(result)})

    big_a = int.from_bytes(RNG.randbytes(48), "big")
    big_b = int.from_bytes(RNG.randbytes(40), "big") | 1
    for a, b in [(big_a, big_b), (12345, -99999), (-big_b, -big_a), (0, big_a)]:
        case("add", [a, b], a + b)
        case("sub", [a, b], a - b)
        case("mul", [a, b], a * b)
    for a, m in [(big_a, big_b), (-big_a, big_b), (7, 65537)]:
        case("mod", [a, m], a % m)
    for b, e, m in [(2, 1000, big_b), (big_a, 65537, big_b), (big_a, 0, big_b)]:
        case("exptmod", [b, e, m], pow(b, e, m))
    for a, m in [(3, 65537), (big_a | 1, big_b)]:
        from math import gcd
        if gcd(a, m) == 1:
            case("modinv", [a, m], pow(a, -1, m))
    from math import gcd
    for a, b in [(big_a, big_b), (big_a * 6, big_a * 4), (0, big_b)]:
        case("gcd", [a, b], gcd(a, b))
    for v in [big_a, -big_b, 0, 255]:
        case("fromRaw", [v], v)
        case("toRaw", [v], v)

    vectors = {
        "vsId": 401,
        "algorithm": "bn",
        "revision": "1.0",
        "testGroups": [{"tgId": 1, "testType": "AFT", "tests": tests}],
    }
    emit("bn_kat", vectors, {"vsId": 401, "testResults": results})


# ---------------------------------------------------------------------------
# schema-only sets

def schema_sets():
    ecdsa = {
        "vsId": 501,
        "algorithm": "ECDSA",
        "revision": "1.0",
        "testGroups": [
            {
                "tgId": 1, "testType": "AFT", "curve": "P-256", "operation": "sigGen",
                "tests": [
                    {"tcId": 1, "message": "DEADBEEF", "d": "0BADC0DE"},
                    {"tcId": 2, "message": "CAFEF00D", "privateKey": {"d": "0BADC0DE"}},
                ],
            },
            {
                "tgId": 2, "testType": "AFT", "curve": "P-521", "operation": "sigVer",
                "tests": [{"tcId": 3, "message": ""}],
            },
        ],
    }
    write_json(os.path.join(SCHEMA, "ecdsa_schema.json"), ecdsa)

    bad_gcm = {
        "vsId": 502,
        "algorithm": "ACVP-AES-GCM",
        "revision": "1.0",
        "testGroups": [
            {
                "tgId": 1, "testType": "AFT", "direction": "encrypt",
                "tests": [
                    # 24-byte key and 13-bit tag: two schema violations
                    {"tcId": 1, "key": "00" * 24, "iv": "00" * 12, "aad": "",
                     "pt": "AB", "tagLen": 13},
                ],
            }
        ],
    }
    write_json(os.path.join(SCHEMA, "bad_gcm.json"), bad_gcm)


def main():
    for d in (VECTORS, EXPECTED, SCHEMA):
        os.makedirs(d, exist_ok=True)
    sha_kat("sha2_256_kat", "SHA2-256", 101, 30)
    sha_kat("sha2_384_kat", "SHA2-384", 102, 15)
    sha_kat("sha2_512_kat", "SHA2-512", 103, 15)
    sha_shared_demo()
    gcm_kat()
    gcm_nested_groups()
    rsa_kat()
    rsa_nested_key()
    bn_kat()
    schema_sets()
    print("fixtures written under", os.path.join(ROOT, "fixtures"))


if __name__ == "__main__":
    sys.exit(main())
