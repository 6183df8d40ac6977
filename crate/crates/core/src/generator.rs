//! Deterministic translation of arbitrary byte streams into well-formed
//! vector sets, the substrate the fuzz engine mutates.
//!
//! The first bits of every input are reserved: one bit per registered
//! restriction, in registry order, so a fuzzer flipping a prefix bit toggles
//! the same restriction no matter how the rest of the input mutates. A set
//! bit constrains the output to satisfy a known roadblock condition (valid
//! padding, consistent key, salt/modulus length interlink, salt equal to
//! digest length); a clear bit leaves the output unconstrained.

use thiserror::Error;

use crate::bignum::BigInt;
use crate::crypto::gcm::TAG_LENGTHS_BITS;
use crate::crypto::rsa::{populate_private_key, rsa_encrypt, RsaPaddingMode, RsaPrivateKey};
use crate::crypto::sha2::DigestVariant;
use crate::model::{FieldMap, FieldValue, TestCase, TestGroup, VectorSet};
use crate::subspec::{BnOperation, RsaOperation, RsaPadding};

/// Inputs beyond this size are truncated before translation.
pub const MAX_INPUT_BYTES: usize = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("take_int bounds inverted: lo {lo} > hi {hi}")]
    CursorContract { lo: u64, hi: u64 },
}

// ---------------------------------------------------------------------------
// ByteCursor

/// Bit-addressed reader over an input buffer. Reads past the end yield
/// zeros, so every byte sequence (including the empty one) translates.
pub struct ByteCursor<'a> {
    bytes: &'a [u8],
    bit_pos: usize,
}

impl<'a> ByteCursor<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        ByteCursor { bytes, bit_pos: 0 }
    }

    pub fn bit_position(&self) -> usize {
        self.bit_pos
    }

    /// Next bit, most-significant first within each byte; 0 past the end.
    pub fn take_bit(&mut self) -> u8 {
        let byte_idx = self.bit_pos / 8;
        let bit_idx = self.bit_pos % 8;
        self.bit_pos += 1;
        match self.bytes.get(byte_idx) {
            Some(b) => (b >> (7 - bit_idx)) & 1,
            None => 0,
        }
    }

    /// `n` bytes starting at the next byte boundary, zero-filled past the
    /// end of input.
    pub fn take_bytes(&mut self, n: usize) -> Vec<u8> {
        let start = (self.bit_pos + 7) / 8;
        self.bit_pos = (start + n) * 8;
        let mut out = vec![0u8; n];
        for (i, slot) in out.iter_mut().enumerate() {
            if let Some(b) = self.bytes.get(start + i) {
                *slot = *b;
            }
        }
        out
    }

    /// Integer in `[lo, hi]` inclusive, from eight consumed bytes.
    pub fn take_int(&mut self, lo: u64, hi: u64) -> Result<u64, GeneratorError> {
        if lo > hi {
            return Err(GeneratorError::CursorContract { lo, hi });
        }
        let raw = u64::from_be_bytes(self.take_bytes(8).try_into().unwrap());
        let span = hi - lo;
        if span == u64::MAX {
            return Ok(raw);
        }
        Ok(lo + raw % (span + 1))
    }
}

// ---------------------------------------------------------------------------
// Restrictions

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Restriction {
    pub id: &'static str,
    pub description: &'static str,
    /// Subspecification and operations the constraint speaks about.
    pub applies_to: &'static str,
}

pub fn builtin_restrictions() -> &'static [Restriction] {
    &[
        Restriction {
            id: "pad-present",
            description: "emitted OAEP ciphertext decrypts to a payload with well-formed padding",
            applies_to: "rsa decrypt",
        },
        Restriction {
            id: "key-valid",
            description: "emitted RSA key components pass the consistency checks",
            applies_to: "rsa sigGen/decrypt/keyPopulate",
        },
        Restriction {
            id: "salt-modulus-interlink",
            description: "salt, digest, and modulus lengths satisfy emLen >= hLen + sLen + 2",
            applies_to: "rsa sigGen (pss)",
        },
        Restriction {
            id: "salt-equals-digest",
            description: "PSS salt length equals the selected digest length",
            applies_to: "rsa sigGen/sigVer (pss)",
        },
    ]
}

// Fixed prime pools for restriction-constrained keys. Small primes keep
// unconstrained fuzzing fast; the large ones give OAEP and PSS enough
// modulus room (two 272-bit primes make a 68-byte modulus). All entries
// avoid p ≡ 1 (mod 65537) so e = 65537 is always invertible.
pub(crate) const SMALL_PRIMES: [&str; 64] = [
    "33239ACB", "11E7BF", "0143FFBF", "8B13",
    "6FE62EDC5B77", "0C6D07F9", "0A73F81EF5EB", "1256D5E3423729",
    "090EBD", "012779", "30BFF69A7D", "0D10671157",
    "0DC68257", "052359F971", "072E6EF80BA5", "0401721EF5",
    "0E0CFB", "0A283AE4DA4535", "11885D3A1072824F", "05FD3599",
    "016A14C7", "01FF5011", "3B99ECC070A7", "01CA05991DB3",
    "EC51", "03344E33", "06936C6545574A19", "6FC2CAF899",
    "2BC096E325", "111E74C859", "05984EFBCD51", "1A3BC9AB",
    "4794E89D", "01B15654014761", "01C447FF69B5", "33857B39",
    "2C50568B1B", "0EFCB4A1", "0DA0985B", "C5FD4F",
    "198C411D03", "01D9144B", "011617", "05D9E716B1",
    "3F9D1754131B", "0257B1", "1ECA8B", "02E2B0ED",
    "020189F91623", "1D84A071", "0249434D8B", "7E83974999",
    "02DD15", "124441", "01406058264E973D", "15BC5BB1F1",
    "03F79C2889A9", "293CE1960F", "1FA6E3", "0EF4C68F1F89",
    "011650AB", "01D572CD", "3070B43767BF", "04C7DE3C832FB3",
];
pub(crate) const LARGE_PRIMES: [&str; 8] = [
    "E1B09C091BC1D23DEC7964C56843382E077522F1702DCA74D5F3516178D2C9013603",
    "A07D2D09778BC611A3AF32B940DA5928A5A91124572D3BECA3935478C76809F019AD",
    "C0D4A6BBD185E406E3FC8F07AFE4D342A236A7D5ECAF56AB46D802852CC1840B932F",
    "9AC48F8E56F5F577491DD2D6D5C33BFFE35785EB64A453C4B55C53F9768ED68DF307",
    "8A769792870A860609C920E33479B7843ED746750AF91ACF5832B6D9C00783405FA1",
    "91D6A72CB3E6FE3A733E612D1FF9D6AFDA5D0AD1AE412AEA924AC99C552B7871B619",
    "D67B808D5CDCAC0BD7243D856A1148D9CA4E2688539F850890194670FE8B97D4FFC5",
    "E32617E03834F3DEF93FB57A9041FE97A5880C6F4C996E683F6572CCBD2A5FE9FD17",
];

fn pool_prime(pool: &[&str], index: u64) -> BigInt {
    BigInt::from_raw(&hex::decode(pool[index as usize % pool.len()]).unwrap(), false)
}

/// Two distinct primes from a pool, indexed by the cursor.
fn pool_pair(cursor: &mut ByteCursor, pool: &[&str]) -> (BigInt, BigInt) {
    let i = cursor.take_int(0, pool.len() as u64 - 1).unwrap();
    let mut j = cursor.take_int(0, pool.len() as u64 - 1).unwrap();
    if i == j {
        j = (j + 1) % pool.len() as u64;
    }
    (pool_prime(pool, i), pool_prime(pool, j))
}

// ---------------------------------------------------------------------------
// Target specs

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetSpec {
    Sha,
    Gcm,
    Rsa,
    Bn,
}

impl TargetSpec {
    pub fn name(self) -> &'static str {
        match self {
            TargetSpec::Sha => "sha",
            TargetSpec::Gcm => "gcm",
            TargetSpec::Rsa => "rsa",
            TargetSpec::Bn => "bn",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sha" => TargetSpec::Sha,
            "gcm" => TargetSpec::Gcm,
            "rsa" => TargetSpec::Rsa,
            "bn" => TargetSpec::Bn,
            _ => return None,
        })
    }

    pub const ALL: [TargetSpec; 4] = [
        TargetSpec::Sha,
        TargetSpec::Gcm,
        TargetSpec::Rsa,
        TargetSpec::Bn,
    ];
}

// ---------------------------------------------------------------------------
// Translation

struct Flags {
    pad_present: bool,
    key_valid: bool,
    interlink: bool,
    salt_eq_digest: bool,
}

pub fn translate(input: &[u8], spec: TargetSpec, restrictions_enabled: bool) -> VectorSet {
    let input = &input[..input.len().min(MAX_INPUT_BYTES)];
    let mut cursor = ByteCursor::new(input);

    // restriction prefix: always consumed so the bit positions are stable,
    // applied only when enabled and meaningful for the target spec
    let mut bits = [false; 4];
    for bit in &mut bits {
        *bit = cursor.take_bit() == 1;
    }
    debug_assert_eq!(builtin_restrictions().len(), bits.len());
    let active = restrictions_enabled && spec == TargetSpec::Rsa;
    let flags = Flags {
        pad_present: active && bits[0],
        key_valid: active && bits[1],
        interlink: active && bits[2],
        salt_eq_digest: active && bits[3],
    };

    let (algorithm, fields) = match spec {
        TargetSpec::Sha => translate_sha(&mut cursor),
        TargetSpec::Gcm => translate_gcm(&mut cursor),
        TargetSpec::Rsa => translate_rsa(&mut cursor, &flags),
        TargetSpec::Bn => translate_bn(&mut cursor),
    };

    VectorSet {
        vs_id: 1,
        algorithm,
        mode: None,
        revision: "1.0".to_string(),
        shared_fields: FieldMap::new(),
        groups: vec![TestGroup {
            tg_id: 1,
            test_type: Some("AFT".to_string()),
            shared_fields: FieldMap::new(),
            tests: vec![TestCase { tc_id: 1, fields }],
            subgroups: vec![],
        }],
    }
}

fn pick_digest(cursor: &mut ByteCursor) -> DigestVariant {
    match cursor.take_int(0, 2).unwrap() {
        0 => DigestVariant::Sha2_256,
        1 => DigestVariant::Sha2_384,
        _ => DigestVariant::Sha2_512,
    }
}

fn translate_sha(cursor: &mut ByteCursor) -> (String, FieldMap) {
    let variant = pick_digest(cursor);
    let len = cursor.take_int(0, 512).unwrap() as usize;
    let mut fields = FieldMap::new();
    fields.insert("msg".into(), FieldValue::HexBytes(cursor.take_bytes(len)));
    (variant.name().to_string(), fields)
}

fn translate_gcm(cursor: &mut ByteCursor) -> (String, FieldMap) {
    let mut fields = FieldMap::new();
    let decrypt = cursor.take_bit() == 1;
    let key_len = if cursor.take_bit() == 1 { 32 } else { 16 };
    let tag_len = TAG_LENGTHS_BITS[cursor.take_int(0, 4).unwrap() as usize];
    let iv_len = cursor.take_int(0, 16).unwrap() as usize;
    let aad_len = cursor.take_int(0, 32).unwrap() as usize;
    let payload_len = cursor.take_int(0, 128).unwrap() as usize;

    fields.insert(
        "direction".into(),
        FieldValue::Text(if decrypt { "decrypt" } else { "encrypt" }.into()),
    );
    fields.insert("key".into(), FieldValue::HexBytes(cursor.take_bytes(key_len)));
    fields.insert("iv".into(), FieldValue::HexBytes(cursor.take_bytes(iv_len)));
    fields.insert("aad".into(), FieldValue::HexBytes(cursor.take_bytes(aad_len)));
    fields.insert("tagLen".into(), FieldValue::Int(tag_len as u64));
    let payload = cursor.take_bytes(payload_len);
    if decrypt {
        fields.insert("ct".into(), FieldValue::HexBytes(payload));
        fields.insert(
            "tag".into(),
            FieldValue::HexBytes(cursor.take_bytes(tag_len / 8)),
        );
    } else {
        fields.insert("pt".into(), FieldValue::HexBytes(payload));
    }
    ("ACVP-AES-GCM".to_string(), fields)
}

fn translate_bn(cursor: &mut ByteCursor) -> (String, FieldMap) {
    let op = BnOperation::ALL[cursor.take_int(0, 8).unwrap() as usize];
    let mut operands = Vec::with_capacity(op.arity());
    for _ in 0..op.arity() {
        let negative = cursor.take_bit() == 1;
        let len = cursor.take_int(0, 32).unwrap() as usize;
        let mut map = std::collections::BTreeMap::new();
        map.insert("value".to_string(), FieldValue::HexBytes(cursor.take_bytes(len)));
        map.insert("negative".to_string(), FieldValue::Bool(negative));
        operands.push(FieldValue::Map(map));
    }
    let mut fields = FieldMap::new();
    fields.insert("operation".into(), FieldValue::Text(op.name().into()));
    fields.insert("operands".into(), FieldValue::List(operands));
    ("bn".to_string(), fields)
}

fn insert_key_components(
    fields: &mut FieldMap,
    cursor: &mut ByteCursor,
    components: &[(&str, &BigInt)],
) {
    // both layouts are in active use; a cursor bit keeps the choice under
    // fuzzer control
    if cursor.take_bit() == 1 {
        let mut nested = std::collections::BTreeMap::new();
        for (name, value) in components {
            nested.insert(name.to_string(), FieldValue::HexBytes(value.to_raw().0));
        }
        fields.insert("privateKey".into(), FieldValue::Map(nested));
    } else {
        for (name, value) in components {
            fields.insert(name.to_string(), FieldValue::HexBytes(value.to_raw().0));
        }
    }
}

fn translate_rsa(cursor: &mut ByteCursor, flags: &Flags) -> (String, FieldMap) {
    let mut fields = FieldMap::new();

    let operation = if flags.pad_present {
        RsaOperation::Decrypt
    } else if flags.interlink || flags.salt_eq_digest {
        RsaOperation::SigGen
    } else {
        match cursor.take_int(0, 4).unwrap() {
            0 => RsaOperation::SigGen,
            1 => RsaOperation::SigVer,
            2 => RsaOperation::Encrypt,
            3 => RsaOperation::Decrypt,
            _ => RsaOperation::KeyPopulate,
        }
    };
    // the interlink inequality is checked against the shortest digest so the
    // large prime pool always has room
    let hash = if flags.pad_present || flags.interlink {
        DigestVariant::Sha2_256
    } else {
        pick_digest(cursor)
    };
    let padding = if flags.pad_present {
        Some(RsaPadding::Oaep)
    } else if flags.interlink || flags.salt_eq_digest {
        Some(RsaPadding::Pss)
    } else {
        match operation {
            RsaOperation::KeyPopulate => None,
            RsaOperation::SigGen | RsaOperation::SigVer => Some(match cursor.take_int(0, 2).unwrap() {
                0 => RsaPadding::Pkcs1V15,
                1 => RsaPadding::Pss,
                _ => RsaPadding::Primitive,
            }),
            RsaOperation::Encrypt | RsaOperation::Decrypt => Some(if cursor.take_bit() == 1 {
                RsaPadding::Primitive
            } else {
                RsaPadding::Oaep
            }),
        }
    };

    fields.insert("operation".into(), FieldValue::Text(operation.name().into()));
    if let Some(padding) = padding {
        fields.insert("padding".into(), FieldValue::Text(padding.name().into()));
    }
    if operation != RsaOperation::KeyPopulate {
        fields.insert("hashAlg".into(), FieldValue::Text(hash.name().into()));
    }

    if padding == Some(RsaPadding::Pss) {
        let h_len = hash.output_len() as u64;
        let salt_len = if flags.salt_eq_digest {
            h_len
        } else if flags.interlink {
            // large-pool / forced moduli are 68 bytes, so any salt up to the
            // digest length keeps emLen >= hLen + sLen + 2
            cursor.take_int(0, h_len).unwrap()
        } else {
            // free 16-bit field: unconstrained fuzzing rarely lands a
            // consistent value here
            cursor.take_int(0, 0xFFFF).unwrap()
        };
        fields.insert("saltLen".into(), FieldValue::Int(salt_len));
    }

    // key material
    let needs_room = flags.pad_present || flags.interlink;
    if flags.pad_present || flags.key_valid {
        let pool: &[&str] = if needs_room { &LARGE_PRIMES } else { &SMALL_PRIMES };
        let (p, q) = pool_pair(cursor, pool);
        let e = BigInt::from_u64(65537);
        if flags.pad_present {
            let partial = RsaPrivateKey {
                p: Some(p.clone()),
                q: Some(q.clone()),
                e: Some(e.clone()),
                ..Default::default()
            };
            let (key, _) = populate_private_key(&partial).expect("pool key is consistent");
            let n = key.n.clone().unwrap();
            let k = n.byte_length_stripped();
            let max_msg = k - 2 * hash.output_len() - 2;
            let msg_len = cursor.take_int(0, max_msg as u64).unwrap() as usize;
            let msg = cursor.take_bytes(msg_len);
            let mode = RsaPaddingMode::Oaep { label: vec![], seed: None };
            let ct = rsa_encrypt(&mode, hash, &n, &e, &msg).expect("pool modulus has room");
            fields.insert("ct".into(), FieldValue::HexBytes(ct));
            insert_key_components(
                &mut fields,
                cursor,
                &[("n", &n), ("p", &p), ("q", &q), ("e", &e)],
            );
            return ("RSA".to_string(), fields);
        }
        // n is emitted alongside the factors so public-key operations have
        // what they need; it is consistent by construction
        let n = p.mul(&q);
        insert_key_components(&mut fields, cursor, &[("n", &n), ("p", &p), ("q", &q), ("e", &e)]);
    } else if flags.interlink {
        // no validity requirement, but the modulus must be long enough for
        // the length inequality; 68 bytes matches the large pool
        let mut n = cursor.take_bytes(68);
        n[0] |= 0x80;
        n[67] |= 1;
        let n = BigInt::from_raw(&n, false);
        let e = BigInt::from_raw(&cursor.take_bytes(3), false);
        let d = BigInt::from_raw(&cursor.take_bytes(68), false);
        insert_key_components(&mut fields, cursor, &[("n", &n), ("e", &e), ("d", &d)]);
    } else {
        let n_len = cursor.take_int(1, 64).unwrap() as usize;
        let n = BigInt::from_raw(&cursor.take_bytes(n_len), false);
        let e = BigInt::from_raw(&cursor.take_bytes(3), false);
        let d = BigInt::from_raw(&cursor.take_bytes(n_len), false);
        insert_key_components(&mut fields, cursor, &[("n", &n), ("e", &e), ("d", &d)]);
    }

    match operation {
        RsaOperation::SigGen | RsaOperation::SigVer | RsaOperation::Encrypt => {
            let len = cursor.take_int(0, 64).unwrap() as usize;
            fields.insert("message".into(), FieldValue::HexBytes(cursor.take_bytes(len)));
            if operation == RsaOperation::SigVer {
                let len = cursor.take_int(0, 64).unwrap() as usize;
                fields.insert("signature".into(), FieldValue::HexBytes(cursor.take_bytes(len)));
            }
        }
        RsaOperation::Decrypt => {
            let len = cursor.take_int(0, 64).unwrap() as usize;
            fields.insert("ct".into(), FieldValue::HexBytes(cursor.take_bytes(len)));
        }
        RsaOperation::KeyPopulate => {}
    }
    ("RSA".to_string(), fields)
}

/// `translate` over many inputs; parallel when the `parallel` feature is
/// enabled.
#[cfg(feature = "parallel")]
pub fn translate_batch(
    inputs: &[Vec<u8>],
    spec: TargetSpec,
    restrictions_enabled: bool,
) -> Vec<VectorSet> {
    use rayon::prelude::*;
    inputs
        .par_iter()
        .map(|input| translate(input, spec, restrictions_enabled))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn translate_batch(
    inputs: &[Vec<u8>],
    spec: TargetSpec,
    restrictions_enabled: bool,
) -> Vec<VectorSet> {
    translate_batch_seq(inputs, spec, restrictions_enabled)
}

/// Sequential fallback with identical output.
pub fn translate_batch_seq(
    inputs: &[Vec<u8>],
    spec: TargetSpec,
    restrictions_enabled: bool,
) -> Vec<VectorSet> {
    inputs
        .iter()
        .map(|input| translate(input, spec, restrictions_enabled))
        .collect()
}
