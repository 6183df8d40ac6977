//! Typed decoders and schema validation for the supported
//! subspecifications: sha, symmetric (AES-GCM), rsa with the private-key
//! extension, the custom bn arithmetic spec, and ECDSA (schema only).
//!
//! Decoders work on resolved field maps, so group-level fields have already
//! been merged into each case. `validate_schema` walks a whole vector set
//! and reports violations without aborting; unknown fields are ignored.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::bignum::BigInt;
use crate::crypto::gcm::TAG_LENGTHS_BITS;
use crate::crypto::rsa::RsaPrivateKey;
use crate::crypto::sha2::DigestVariant;
use crate::model::{resolved_cases, FieldMap, FieldValue, VectorSet};

#[derive(Debug, Error, PartialEq)]
pub enum SubspecError {
    #[error("missing required field `{0}`")]
    MissingField(String),
    #[error("field `{field}`: {message}")]
    BadField { field: String, message: String },
    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),
    #[error("field `{0}` defined both flattened and nested with different values")]
    ConflictingKeyField(String),
    #[error("operation `{operation}` takes {expected} operand(s), got {got}")]
    BadArity {
        operation: String,
        expected: usize,
        got: usize,
    },
}

fn missing(name: &str) -> SubspecError {
    SubspecError::MissingField(name.to_string())
}

fn bad(field: &str, message: impl Into<String>) -> SubspecError {
    SubspecError::BadField {
        field: field.to_string(),
        message: message.into(),
    }
}

fn bytes_field(fields: &FieldMap, name: &str) -> Result<Vec<u8>, SubspecError> {
    fields
        .get(name)
        .ok_or_else(|| missing(name))?
        .as_bytes()
        .ok_or_else(|| bad(name, "expected a hex byte string"))
}

fn opt_bytes_field(fields: &FieldMap, name: &str) -> Result<Option<Vec<u8>>, SubspecError> {
    match fields.get(name) {
        None => Ok(None),
        Some(v) => v
            .as_bytes()
            .map(Some)
            .ok_or_else(|| bad(name, "expected a hex byte string")),
    }
}

fn int_field(fields: &FieldMap, name: &str) -> Result<u64, SubspecError> {
    fields
        .get(name)
        .ok_or_else(|| missing(name))?
        .as_int()
        .ok_or_else(|| bad(name, "expected an integer"))
}

fn opt_int_field(fields: &FieldMap, name: &str) -> Result<Option<u64>, SubspecError> {
    match fields.get(name) {
        None => Ok(None),
        Some(v) => v
            .as_int()
            .map(Some)
            .ok_or_else(|| bad(name, "expected an integer")),
    }
}

fn text_field<'a>(fields: &'a FieldMap, name: &str) -> Result<&'a str, SubspecError> {
    fields
        .get(name)
        .ok_or_else(|| missing(name))?
        .as_text()
        .ok_or_else(|| bad(name, "expected a string"))
}

// ---------------------------------------------------------------------------
// SHA

#[derive(Debug, Clone, PartialEq)]
pub struct ShaCase {
    pub variant: DigestVariant,
    pub message: Vec<u8>,
    pub expected_digest: Option<Vec<u8>>,
}

pub fn decode_sha_case(algorithm: &str, fields: &FieldMap) -> Result<ShaCase, SubspecError> {
    let variant = DigestVariant::from_name(algorithm)
        .ok_or_else(|| SubspecError::UnknownAlgorithm(algorithm.to_string()))?;
    Ok(ShaCase {
        variant,
        message: bytes_field(fields, "msg")?,
        expected_digest: opt_bytes_field(fields, "md")?,
    })
}

pub fn encode_sha_case(case: &ShaCase) -> FieldMap {
    let mut fields = FieldMap::new();
    fields.insert("msg".into(), FieldValue::HexBytes(case.message.clone()));
    if let Some(md) = &case.expected_digest {
        fields.insert("md".into(), FieldValue::HexBytes(md.clone()));
    }
    fields
}

// ---------------------------------------------------------------------------
// AES-GCM

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcmDirection {
    Encrypt,
    Decrypt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GcmCase {
    pub direction: GcmDirection,
    pub key: Vec<u8>,
    pub iv: Vec<u8>,
    pub aad: Vec<u8>,
    /// Plaintext for encrypt cases, ciphertext for decrypt cases.
    pub payload: Vec<u8>,
    pub tag: Option<Vec<u8>>,
    pub tag_len_bits: u64,
}

pub fn decode_gcm_case(fields: &FieldMap) -> Result<GcmCase, SubspecError> {
    let direction = match text_field(fields, "direction")? {
        "encrypt" => GcmDirection::Encrypt,
        "decrypt" => GcmDirection::Decrypt,
        other => return Err(bad("direction", format!("unknown direction `{other}`"))),
    };
    let key = bytes_field(fields, "key")?;
    if key.len() != 16 && key.len() != 32 {
        return Err(bad("key", format!("length must be 16 or 32, got {}", key.len())));
    }
    let tag_len_bits = int_field(fields, "tagLen")?;
    if !TAG_LENGTHS_BITS.contains(&(tag_len_bits as usize)) {
        return Err(bad("tagLen", format!("unsupported tag length {tag_len_bits}")));
    }
    let payload = match direction {
        GcmDirection::Encrypt => bytes_field(fields, "pt")?,
        GcmDirection::Decrypt => bytes_field(fields, "ct")?,
    };
    let tag = opt_bytes_field(fields, "tag")?;
    if direction == GcmDirection::Decrypt && tag.is_none() {
        return Err(missing("tag"));
    }
    Ok(GcmCase {
        direction,
        key,
        iv: bytes_field(fields, "iv")?,
        aad: opt_bytes_field(fields, "aad")?.unwrap_or_default(),
        payload,
        tag,
        tag_len_bits,
    })
}

pub fn encode_gcm_case(case: &GcmCase) -> FieldMap {
    let mut fields = FieldMap::new();
    let (dir, payload_name) = match case.direction {
        GcmDirection::Encrypt => ("encrypt", "pt"),
        GcmDirection::Decrypt => ("decrypt", "ct"),
    };
    fields.insert("direction".into(), FieldValue::Text(dir.into()));
    fields.insert("key".into(), FieldValue::HexBytes(case.key.clone()));
    fields.insert("iv".into(), FieldValue::HexBytes(case.iv.clone()));
    fields.insert("aad".into(), FieldValue::HexBytes(case.aad.clone()));
    fields.insert(payload_name.into(), FieldValue::HexBytes(case.payload.clone()));
    if let Some(tag) = &case.tag {
        fields.insert("tag".into(), FieldValue::HexBytes(tag.clone()));
    }
    fields.insert("tagLen".into(), FieldValue::Int(case.tag_len_bits));
    fields
}

// ---------------------------------------------------------------------------
// RSA

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RsaOperation {
    SigGen,
    SigVer,
    Encrypt,
    Decrypt,
    KeyPopulate,
}

impl RsaOperation {
    pub fn name(self) -> &'static str {
        match self {
            RsaOperation::SigGen => "sigGen",
            RsaOperation::SigVer => "sigVer",
            RsaOperation::Encrypt => "encrypt",
            RsaOperation::Decrypt => "decrypt",
            RsaOperation::KeyPopulate => "keyPopulate",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sigGen" => RsaOperation::SigGen,
            "sigVer" => RsaOperation::SigVer,
            "encrypt" => RsaOperation::Encrypt,
            "decrypt" => RsaOperation::Decrypt,
            "keyPopulate" => RsaOperation::KeyPopulate,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RsaPadding {
    Pkcs1V15,
    Pss,
    Oaep,
    Primitive,
}

impl RsaPadding {
    pub fn name(self) -> &'static str {
        match self {
            RsaPadding::Pkcs1V15 => "pkcs1v15",
            RsaPadding::Pss => "pss",
            RsaPadding::Oaep => "oaep",
            RsaPadding::Primitive => "primitive",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "pkcs1v15" => RsaPadding::Pkcs1V15,
            "pss" => RsaPadding::Pss,
            "oaep" => RsaPadding::Oaep,
            "primitive" => RsaPadding::Primitive,
            _ => return None,
        })
    }

    pub fn valid_for(self, operation: RsaOperation) -> bool {
        match operation {
            RsaOperation::SigGen | RsaOperation::SigVer => matches!(
                self,
                RsaPadding::Pkcs1V15 | RsaPadding::Pss | RsaPadding::Primitive
            ),
            RsaOperation::Encrypt | RsaOperation::Decrypt => {
                matches!(self, RsaPadding::Oaep | RsaPadding::Primitive)
            }
            RsaOperation::KeyPopulate => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RsaCase {
    pub operation: RsaOperation,
    /// Absent is legal only for keyPopulate, which exercises no padding.
    pub padding: Option<RsaPadding>,
    pub hash_alg: Option<DigestVariant>,
    /// Salt length in bytes (PSS only).
    pub salt_len: Option<u64>,
    pub message: Option<Vec<u8>>,
    pub signature: Option<Vec<u8>>,
    pub ciphertext: Option<Vec<u8>>,
    pub private_key: RsaPrivateKey,
    pub public_n: Option<BigInt>,
    pub public_e: Option<BigInt>,
}

const KEY_COMPONENTS: [&str; 8] = ["n", "e", "d", "p", "q", "dmp1", "dmq1", "iqmp"];

fn key_component(
    flattened: Option<&FieldValue>,
    nested: Option<&FieldValue>,
    name: &str,
) -> Result<Option<BigInt>, SubspecError> {
    let decode = |v: &FieldValue| {
        v.as_bytes()
            .map(|b| BigInt::from_raw(&b, false))
            .ok_or_else(|| bad(name, "expected a hex byte string"))
    };
    match (flattened, nested) {
        (None, None) => Ok(None),
        (Some(v), None) | (None, Some(v)) => decode(v).map(Some),
        (Some(a), Some(b)) => {
            let (a, b) = (decode(a)?, decode(b)?);
            if a != b {
                return Err(SubspecError::ConflictingKeyField(name.to_string()));
            }
            Ok(Some(a))
        }
    }
}

pub fn decode_rsa_case(fields: &FieldMap) -> Result<RsaCase, SubspecError> {
    let operation = text_field(fields, "operation").and_then(|name| {
        RsaOperation::from_name(name).ok_or_else(|| bad("operation", format!("unknown operation `{name}`")))
    })?;
    let padding = match fields.get("padding") {
        None => None,
        Some(v) => {
            let name = v.as_text().ok_or_else(|| bad("padding", "expected a string"))?;
            Some(
                RsaPadding::from_name(name)
                    .ok_or_else(|| bad("padding", format!("unknown padding `{name}`")))?,
            )
        }
    };
    let hash_alg = match fields.get("hashAlg") {
        None => None,
        Some(v) => {
            let name = v.as_text().ok_or_else(|| bad("hashAlg", "expected a string"))?;
            Some(
                DigestVariant::from_name(name)
                    .ok_or_else(|| bad("hashAlg", format!("unknown hash `{name}`")))?,
            )
        }
    };

    let nested = match fields.get("privateKey") {
        None => None,
        Some(v) => Some(
            v.as_map()
                .ok_or_else(|| bad("privateKey", "expected an object"))?,
        ),
    };
    let empty = BTreeMap::new();
    let nested = nested.unwrap_or(&empty);
    let mut components: Vec<Option<BigInt>> = Vec::with_capacity(KEY_COMPONENTS.len());
    for name in KEY_COMPONENTS {
        components.push(key_component(fields.get(name), nested.get(name), name)?);
    }
    let [n, e, d, p, q, dmp1, dmq1, iqmp]: [Option<BigInt>; 8] =
        components.try_into().expect("eight components");
    let private_key = RsaPrivateKey {
        n: n.clone(),
        e: e.clone(),
        d,
        p,
        q,
        dmp1,
        dmq1,
        iqmp,
    };

    Ok(RsaCase {
        operation,
        padding,
        hash_alg,
        salt_len: opt_int_field(fields, "saltLen")?,
        message: opt_bytes_field(fields, "message")?,
        signature: opt_bytes_field(fields, "signature")?,
        ciphertext: opt_bytes_field(fields, "ct")?,
        private_key,
        public_n: n,
        public_e: e,
    })
}

pub fn encode_rsa_case(case: &RsaCase) -> FieldMap {
    let mut fields = FieldMap::new();
    fields.insert(
        "operation".into(),
        FieldValue::Text(case.operation.name().into()),
    );
    if let Some(padding) = case.padding {
        fields.insert("padding".into(), FieldValue::Text(padding.name().into()));
    }
    if let Some(hash) = case.hash_alg {
        fields.insert("hashAlg".into(), FieldValue::Text(hash.name().into()));
    }
    if let Some(salt_len) = case.salt_len {
        fields.insert("saltLen".into(), FieldValue::Int(salt_len));
    }
    if let Some(m) = &case.message {
        fields.insert("message".into(), FieldValue::HexBytes(m.clone()));
    }
    if let Some(s) = &case.signature {
        fields.insert("signature".into(), FieldValue::HexBytes(s.clone()));
    }
    if let Some(c) = &case.ciphertext {
        fields.insert("ct".into(), FieldValue::HexBytes(c.clone()));
    }
    let key = &case.private_key;
    let components = [
        ("n", &key.n),
        ("e", &key.e),
        ("d", &key.d),
        ("p", &key.p),
        ("q", &key.q),
        ("dmp1", &key.dmp1),
        ("dmq1", &key.dmq1),
        ("iqmp", &key.iqmp),
    ];
    for (name, value) in components {
        if let Some(v) = value {
            fields.insert(name.into(), FieldValue::HexBytes(v.to_raw().0));
        }
    }
    fields
}

// ---------------------------------------------------------------------------
// bn

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BnOperation {
    Add,
    Sub,
    Mul,
    Mod,
    ExptMod,
    ModInv,
    Gcd,
    FromRaw,
    ToRaw,
}

impl BnOperation {
    pub fn name(self) -> &'static str {
        match self {
            BnOperation::Add => "add",
            BnOperation::Sub => "sub",
            BnOperation::Mul => "mul",
            BnOperation::Mod => "mod",
            BnOperation::ExptMod => "exptmod",
            BnOperation::ModInv => "modinv",
            BnOperation::Gcd => "gcd",
            BnOperation::FromRaw => "fromRaw",
            BnOperation::ToRaw => "toRaw",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "add" => BnOperation::Add,
            "sub" => BnOperation::Sub,
            "mul" => BnOperation::Mul,
            "mod" => BnOperation::Mod,
            "exptmod" => BnOperation::ExptMod,
            "modinv" => BnOperation::ModInv,
            "gcd" => BnOperation::Gcd,
            "fromRaw" => BnOperation::FromRaw,
            "toRaw" => BnOperation::ToRaw,
            _ => return None,
        })
    }

    pub fn arity(self) -> usize {
        match self {
            BnOperation::ExptMod => 3,
            BnOperation::FromRaw | BnOperation::ToRaw => 1,
            _ => 2,
        }
    }

    pub const ALL: [BnOperation; 9] = [
        BnOperation::Add,
        BnOperation::Sub,
        BnOperation::Mul,
        BnOperation::Mod,
        BnOperation::ExptMod,
        BnOperation::ModInv,
        BnOperation::Gcd,
        BnOperation::FromRaw,
        BnOperation::ToRaw,
    ];
}

/// Raw-form operand: big-endian magnitude bytes plus a sign flag.
pub type BnOperand = (Vec<u8>, bool);

#[derive(Debug, Clone, PartialEq)]
pub struct BnCase {
    pub operation: BnOperation,
    pub operands: Vec<BnOperand>,
    pub expected: Option<BnOperand>,
}

fn decode_bn_operand(value: &FieldValue, field: &str) -> Result<BnOperand, SubspecError> {
    let map = value
        .as_map()
        .ok_or_else(|| bad(field, "expected an object with `value` and `negative`"))?;
    let bytes = map
        .get("value")
        .ok_or_else(|| missing(&format!("{field}.value")))?
        .as_bytes()
        .ok_or_else(|| bad(field, "`value` must be a hex byte string"))?;
    let negative = match map.get("negative") {
        None => false,
        Some(v) => v
            .as_bool()
            .ok_or_else(|| bad(field, "`negative` must be a boolean"))?,
    };
    Ok((bytes, negative))
}

fn encode_bn_operand(operand: &BnOperand) -> FieldValue {
    let mut map = BTreeMap::new();
    map.insert("value".to_string(), FieldValue::HexBytes(operand.0.clone()));
    map.insert("negative".to_string(), FieldValue::Bool(operand.1));
    FieldValue::Map(map)
}

pub fn decode_bn_case(fields: &FieldMap) -> Result<BnCase, SubspecError> {
    let operation = text_field(fields, "operation").and_then(|name| {
        BnOperation::from_name(name)
            .ok_or_else(|| bad("operation", format!("unknown operation `{name}`")))
    })?;
    let operands_value = fields.get("operands").ok_or_else(|| missing("operands"))?;
    let list = match operands_value {
        FieldValue::List(items) => items,
        _ => return Err(bad("operands", "expected an array")),
    };
    let mut operands = Vec::with_capacity(list.len());
    for (i, item) in list.iter().enumerate() {
        operands.push(decode_bn_operand(item, &format!("operands[{i}]"))?);
    }
    if operands.len() != operation.arity() {
        return Err(SubspecError::BadArity {
            operation: operation.name().to_string(),
            expected: operation.arity(),
            got: operands.len(),
        });
    }
    let expected = match fields.get("expected") {
        None => None,
        Some(v) => Some(decode_bn_operand(v, "expected")?),
    };
    Ok(BnCase {
        operation,
        operands,
        expected,
    })
}

pub fn encode_bn_case(case: &BnCase) -> FieldMap {
    let mut fields = FieldMap::new();
    fields.insert(
        "operation".into(),
        FieldValue::Text(case.operation.name().into()),
    );
    fields.insert(
        "operands".into(),
        FieldValue::List(case.operands.iter().map(encode_bn_operand).collect()),
    );
    if let Some(expected) = &case.expected {
        fields.insert("expected".into(), encode_bn_operand(expected));
    }
    fields
}

// ---------------------------------------------------------------------------
// ECDSA (schema only)

pub const ECDSA_CURVES: [&str; 3] = ["P-256", "P-384", "P-521"];

fn check_ecdsa_case(fields: &FieldMap) -> Result<(), SubspecError> {
    let curve = text_field(fields, "curve")?;
    if !ECDSA_CURVES.contains(&curve) {
        return Err(bad("curve", format!("unknown curve `{curve}`")));
    }
    let operation = text_field(fields, "operation")?;
    if operation != "sigGen" && operation != "sigVer" {
        return Err(bad("operation", format!("unknown operation `{operation}`")));
    }
    // the private-key extension carries the scalar either flattened or nested
    if let Some(v) = fields.get("privateKey") {
        let map = v
            .as_map()
            .ok_or_else(|| bad("privateKey", "expected an object"))?;
        if let Some(d) = map.get("d") {
            d.as_bytes()
                .ok_or_else(|| bad("privateKey.d", "expected a hex byte string"))?;
        }
    }
    if let Some(d) = fields.get("d") {
        d.as_bytes()
            .ok_or_else(|| bad("d", "expected a hex byte string"))?;
    }
    opt_bytes_field(fields, "message")?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Whole-set schema validation

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub tg_id: Option<u64>,
    pub tc_id: Option<u64>,
    pub message: String,
}

impl Violation {
    fn for_case(tc_id: u64, message: impl Into<String>) -> Self {
        Violation {
            tg_id: None,
            tc_id: Some(tc_id),
            message: message.into(),
        }
    }

    fn for_set(message: impl Into<String>) -> Self {
        Violation {
            tg_id: None,
            tc_id: None,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Sha(DigestVariant),
    Gcm,
    Rsa,
    Bn,
    Ecdsa,
}

impl Algorithm {
    pub fn from_name(name: &str) -> Option<Self> {
        if let Some(variant) = DigestVariant::from_name(name) {
            return Some(Algorithm::Sha(variant));
        }
        Some(match name {
            "ACVP-AES-GCM" => Algorithm::Gcm,
            "RSA" => Algorithm::Rsa,
            "bn" => Algorithm::Bn,
            "ECDSA" => Algorithm::Ecdsa,
            _ => return None,
        })
    }
}

/// Additional RSA rules beyond what decoding enforces: padding/operation
/// compatibility, the salt/padding interlink, and completeness of grouped
/// optional key fields for operations that need a usable private key.
fn check_rsa_semantics(case: &RsaCase) -> Result<(), String> {
    match (case.operation, case.padding) {
        (RsaOperation::KeyPopulate, _) => {}
        (op, None) => return Err(format!("operation `{}` requires a padding", op.name())),
        (op, Some(padding)) => {
            if !padding.valid_for(op) {
                return Err(format!(
                    "padding `{}` not valid for operation `{}`",
                    padding.name(),
                    op.name()
                ));
            }
            if case.salt_len.is_some() && padding != RsaPadding::Pss {
                return Err(format!(
                    "saltLen applies to pss only, not `{}`",
                    padding.name()
                ));
            }
        }
    }
    let key = &case.private_key;
    match case.operation {
        RsaOperation::SigGen | RsaOperation::Decrypt => {
            let direct = key.n.is_some() && key.d.is_some();
            let factored = key.p.is_some() && key.q.is_some() && (key.e.is_some() || key.d.is_some());
            if !direct && !factored {
                return Err(
                    "private key incomplete: need (n, d) or (p, q, e) for a private-key operation"
                        .to_string(),
                );
            }
        }
        RsaOperation::SigVer | RsaOperation::Encrypt => {
            if case.public_n.is_none() || case.public_e.is_none() {
                return Err("public key incomplete: need n and e".to_string());
            }
        }
        RsaOperation::KeyPopulate => {
            if key.is_empty() {
                return Err("keyPopulate requires at least one key component".to_string());
            }
        }
    }
    match case.operation {
        RsaOperation::SigGen | RsaOperation::SigVer => {
            if case.message.is_none() {
                return Err("signature operations require a message".to_string());
            }
        }
        RsaOperation::Encrypt => {
            if case.message.is_none() {
                return Err("encrypt requires a message".to_string());
            }
        }
        RsaOperation::Decrypt => {
            if case.ciphertext.is_none() {
                return Err("decrypt requires a ciphertext".to_string());
            }
        }
        RsaOperation::KeyPopulate => {}
    }
    Ok(())
}

pub fn validate_schema(vs: &VectorSet) -> Vec<Violation> {
    let algorithm = match Algorithm::from_name(&vs.algorithm) {
        Some(a) => a,
        None => {
            return vec![Violation::for_set(format!(
                "unknown algorithm `{}`",
                vs.algorithm
            ))]
        }
    };
    let cases = match resolved_cases(vs) {
        Ok(cases) => cases,
        Err(e) => return vec![Violation::for_set(format!("malformed vector set: {e}"))],
    };
    let mut violations = Vec::new();
    for case in &cases {
        let result: Result<(), String> = match algorithm {
            Algorithm::Sha(_) => decode_sha_case(&vs.algorithm, &case.fields)
                .map(|_| ())
                .map_err(|e| e.to_string()),
            Algorithm::Gcm => decode_gcm_case(&case.fields)
                .map(|_| ())
                .map_err(|e| e.to_string()),
            Algorithm::Rsa => decode_rsa_case(&case.fields)
                .map_err(|e| e.to_string())
                .and_then(|decoded| check_rsa_semantics(&decoded)),
            Algorithm::Bn => decode_bn_case(&case.fields)
                .map(|_| ())
                .map_err(|e| e.to_string()),
            Algorithm::Ecdsa => check_ecdsa_case(&case.fields).map_err(|e| e.to_string()),
        };
        if let Err(message) = result {
            violations.push(Violation::for_case(case.tc_id, message));
        }
    }
    violations
}

/// `validate_schema` over many sets at once; parallel when the `parallel`
/// feature is enabled.
#[cfg(feature = "parallel")]
pub fn validate_schema_batch(sets: &[VectorSet]) -> Vec<Vec<Violation>> {
    use rayon::prelude::*;
    sets.par_iter().map(validate_schema).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn validate_schema_batch(sets: &[VectorSet]) -> Vec<Vec<Violation>> {
    validate_schema_batch_seq(sets)
}

/// Sequential fallback with identical output, usable for comparison even
/// when the parallel path is compiled in.
pub fn validate_schema_batch_seq(sets: &[VectorSet]) -> Vec<Vec<Violation>> {
    sets.iter().map(validate_schema).collect()
}
