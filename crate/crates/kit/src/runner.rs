//! Reference-runner request handling: answers sha / symmetric / rsa / bn
//! vector sets with the reference crypto, one result per test case. A case
//! that cannot be executed gets an "error" field instead of aborting the
//! whole set; only set-level problems (unknown algorithm, ECDSA) become
//! error frames.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use serde_json::{Map, Value};

use acvp_core::bignum::BigInt;
use acvp_core::crypto::gcm::{aes_gcm_decrypt, aes_gcm_encrypt};
use acvp_core::crypto::rsa::{
    populate_private_key, rsa_decrypt, rsa_encrypt, rsa_sign, rsa_verify, RsaPaddingMode,
    RsaPrivateKey,
};
use acvp_core::crypto::sha2::sha2_digest;
use acvp_core::model::{
    parse_vector_set, resolved_cases, serialize_response_set, FieldMap, FieldValue, ResponseSet,
    VectorSet,
};
use acvp_core::probe;
use acvp_core::subspec::{
    decode_bn_case, decode_gcm_case, decode_rsa_case, decode_sha_case, Algorithm, BnOperation,
    GcmDirection, RsaCase, RsaOperation, RsaPadding,
};

use crate::protocol::{decode_frame, encode_frame, WireKind, WireMessage};

pub fn handle_request(vs: &VectorSet) -> Result<ResponseSet, String> {
    let algorithm = Algorithm::from_name(&vs.algorithm)
        .ok_or_else(|| format!("unsupported algorithm: {}", vs.algorithm))?;
    if algorithm == Algorithm::Ecdsa {
        return Err("unsupported algorithm: ECDSA (schema-only, no execution)".to_string());
    }
    let cases = resolved_cases(vs).map_err(|e| format!("malformed vector set: {e}"))?;

    let mut results = Vec::with_capacity(cases.len());
    for case in &cases {
        let outcome = match algorithm {
            Algorithm::Sha(_) => run_sha_case(&vs.algorithm, &case.fields),
            Algorithm::Gcm => run_gcm_case(&case.fields),
            Algorithm::Rsa => run_rsa_case(&case.fields),
            Algorithm::Bn => run_bn_case(&case.fields),
            Algorithm::Ecdsa => unreachable!("rejected above"),
        };
        let fields = outcome.unwrap_or_else(|message| {
            let mut fields = FieldMap::new();
            fields.insert("error".to_string(), FieldValue::Text(message));
            fields
        });
        results.push((case.tc_id, fields));
    }
    Ok(ResponseSet { vs_id: vs.vs_id, results })
}

fn run_sha_case(algorithm: &str, fields: &FieldMap) -> Result<FieldMap, String> {
    let case = decode_sha_case(algorithm, fields).map_err(|e| e.to_string())?;
    let digest = sha2_digest(case.variant, &case.message);
    let mut out = FieldMap::new();
    out.insert("md".to_string(), FieldValue::HexBytes(digest));
    Ok(out)
}

fn run_gcm_case(fields: &FieldMap) -> Result<FieldMap, String> {
    let case = decode_gcm_case(fields).map_err(|e| e.to_string())?;
    let mut out = FieldMap::new();
    match case.direction {
        GcmDirection::Encrypt => {
            let (ct, tag) = aes_gcm_encrypt(
                &case.key,
                &case.iv,
                &case.aad,
                &case.payload,
                case.tag_len_bits as usize,
            )
            .map_err(|e| e.to_string())?;
            out.insert("ct".to_string(), FieldValue::HexBytes(ct));
            out.insert("tag".to_string(), FieldValue::HexBytes(tag));
        }
        GcmDirection::Decrypt => {
            let tag = case.tag.as_deref().unwrap_or_default();
            match aes_gcm_decrypt(
                &case.key,
                &case.iv,
                &case.aad,
                &case.payload,
                tag,
                case.tag_len_bits as usize,
            ) {
                Ok(pt) => {
                    out.insert("testPassed".to_string(), FieldValue::Bool(true));
                    out.insert("pt".to_string(), FieldValue::HexBytes(pt));
                }
                Err(acvp_core::crypto::gcm::GcmError::AuthFailure) => {
                    out.insert("testPassed".to_string(), FieldValue::Bool(false));
                }
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    Ok(out)
}

fn padding_mode(case: &RsaCase) -> Result<RsaPaddingMode, String> {
    let padding = case.padding.ok_or("padding required for this operation")?;
    Ok(match padding {
        RsaPadding::Pkcs1V15 => RsaPaddingMode::Pkcs1V15,
        RsaPadding::Pss => RsaPaddingMode::Pss {
            salt_len: case
                .salt_len
                .map(|v| v as usize)
                .or_else(|| case.hash_alg.map(|h| h.output_len()))
                .ok_or("pss requires saltLen or hashAlg")?,
            salt: None,
        },
        RsaPadding::Oaep => RsaPaddingMode::Oaep { label: vec![], seed: None },
        RsaPadding::Primitive => RsaPaddingMode::Primitive,
    })
}

fn key_to_fields(key: &RsaPrivateKey, out: &mut FieldMap) {
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
            out.insert(name.to_string(), FieldValue::HexBytes(v.to_raw().0));
        }
    }
}

fn run_rsa_case(fields: &FieldMap) -> Result<FieldMap, String> {
    let case = decode_rsa_case(fields).map_err(|e| e.to_string())?;
    let hash = case.hash_alg;
    let mut out = FieldMap::new();
    match case.operation {
        RsaOperation::KeyPopulate => {
            probe::hit("rsa.op.keypopulate");
            let (key, stats) = populate_private_key(&case.private_key).map_err(|e| e.to_string())?;
            key_to_fields(&key, &mut out);
            out.insert("attempts".to_string(), FieldValue::Int(stats.attempts as u64));
        }
        RsaOperation::SigGen => {
            probe::hit("rsa.op.siggen");
            let mode = padding_mode(&case)?;
            let hash = hash.ok_or("sigGen requires hashAlg")?;
            let (key, _) = populate_private_key(&case.private_key).map_err(|e| e.to_string())?;
            let message = case.message.as_deref().ok_or("sigGen requires message")?;
            let sig = rsa_sign(&mode, hash, &key, message).map_err(|e| e.to_string())?;
            out.insert("signature".to_string(), FieldValue::HexBytes(sig));
        }
        RsaOperation::SigVer => {
            probe::hit("rsa.op.sigver");
            let mode = padding_mode(&case)?;
            let hash = hash.ok_or("sigVer requires hashAlg")?;
            let n = case.public_n.as_ref().ok_or("sigVer requires n")?;
            let e = case.public_e.as_ref().ok_or("sigVer requires e")?;
            let message = case.message.as_deref().ok_or("sigVer requires message")?;
            let signature = case.signature.as_deref().ok_or("sigVer requires signature")?;
            let ok = rsa_verify(&mode, hash, n, e, message, signature).map_err(|e| e.to_string())?;
            out.insert("testPassed".to_string(), FieldValue::Bool(ok));
        }
        RsaOperation::Encrypt => {
            probe::hit("rsa.op.encrypt");
            let mode = padding_mode(&case)?;
            let hash = hash.ok_or("encrypt requires hashAlg")?;
            let n = case.public_n.as_ref().ok_or("encrypt requires n")?;
            let e = case.public_e.as_ref().ok_or("encrypt requires e")?;
            let message = case.message.as_deref().ok_or("encrypt requires message")?;
            let ct = rsa_encrypt(&mode, hash, n, e, message).map_err(|e| e.to_string())?;
            out.insert("ct".to_string(), FieldValue::HexBytes(ct));
        }
        RsaOperation::Decrypt => {
            probe::hit("rsa.op.decrypt");
            let mode = padding_mode(&case)?;
            let hash = hash.ok_or("decrypt requires hashAlg")?;
            let (key, _) = populate_private_key(&case.private_key).map_err(|e| e.to_string())?;
            let ct = case.ciphertext.as_deref().ok_or("decrypt requires ct")?;
            let pt = rsa_decrypt(&mode, hash, &key, ct).map_err(|e| e.to_string())?;
            out.insert("pt".to_string(), FieldValue::HexBytes(pt));
        }
    }
    Ok(out)
}

fn bn_result(value: &BigInt) -> FieldValue {
    let (bytes, negative) = value.to_raw();
    let mut map = std::collections::BTreeMap::new();
    map.insert("value".to_string(), FieldValue::HexBytes(bytes));
    map.insert("negative".to_string(), FieldValue::Bool(negative));
    FieldValue::Map(map)
}

fn run_bn_case(fields: &FieldMap) -> Result<FieldMap, String> {
    let case = decode_bn_case(fields).map_err(|e| e.to_string())?;
    let operands: Vec<BigInt> = case
        .operands
        .iter()
        .map(|(bytes, negative)| BigInt::from_raw(bytes, *negative))
        .collect();
    let computed: Result<BigInt, String> = match case.operation {
        BnOperation::Add => Ok(operands[0].add(&operands[1])),
        BnOperation::Sub => Ok(operands[0].sub(&operands[1])),
        BnOperation::Mul => Ok(operands[0].mul(&operands[1])),
        BnOperation::Mod => operands[0].mod_reduce(&operands[1]).map_err(|e| e.to_string()),
        BnOperation::ExptMod => operands[0]
            .mod_exp(&operands[1], &operands[2])
            .map_err(|e| e.to_string()),
        BnOperation::ModInv => operands[0].mod_inv(&operands[1]).map_err(|e| e.to_string()),
        BnOperation::Gcd => Ok(operands[0].gcd(&operands[1])),
        // both codec operations round-trip through the raw form; they differ
        // only in which direction the fixture's expectation checks
        BnOperation::FromRaw | BnOperation::ToRaw => Ok(operands[0].clone()),
    };
    match computed {
        Ok(value) => {
            probe::hit(match case.operation {
                BnOperation::Add => "bn.op.add",
                BnOperation::Sub => "bn.op.sub",
                BnOperation::Mul => "bn.op.mul",
                BnOperation::Mod => "bn.op.mod",
                BnOperation::ExptMod => "bn.op.exptmod",
                BnOperation::ModInv => "bn.op.modinv",
                BnOperation::Gcd => "bn.op.gcd",
                BnOperation::FromRaw => "bn.op.fromraw",
                BnOperation::ToRaw => "bn.op.toraw",
            });
            let mut out = FieldMap::new();
            out.insert("result".to_string(), bn_result(&value));
            Ok(out)
        }
        Err(message) => {
            probe::hit("bn.op.error");
            Err(message)
        }
    }
}

// ---------------------------------------------------------------------------
// stdio loop

pub struct RunnerConfig {
    pub coverage: bool,
    /// Testing aid: hang forever on the first vector-set request.
    pub timeout_self_test: bool,
}

fn write_frame(out: &mut impl Write, message: &WireMessage) -> std::io::Result<()> {
    out.write_all(encode_frame(message).as_bytes())?;
    out.write_all(b"\n")?;
    out.flush()
}

fn object_payload(pairs: &[(&str, Value)]) -> Map<String, Value> {
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert(k.to_string(), v.clone());
    }
    map
}

/// Serve the wire protocol over the given streams until EOF.
pub fn serve(
    input: impl BufRead,
    mut output: impl Write,
    config: &RunnerConfig,
) -> std::io::Result<()> {
    if config.coverage {
        probe::enable();
    }
    let mut reported: BTreeSet<&'static str> = BTreeSet::new();

    for line in input.lines() {
        let line = line?;
        let frame = match decode_frame(&line) {
            Ok(frame) => frame,
            Err(e) => {
                let payload = object_payload(&[("message", Value::String(e.to_string()))]);
                write_frame(&mut output, &WireMessage { kind: WireKind::Error, id: 0, payload })?;
                continue;
            }
        };
        if frame.kind != WireKind::Request {
            let payload =
                object_payload(&[("message", Value::String("expected a request frame".into()))]);
            write_frame(
                &mut output,
                &WireMessage { kind: WireKind::Error, id: frame.id, payload },
            )?;
            continue;
        }

        // handshake
        if frame.id == 0 && frame.payload.get("hello").is_some() {
            let payload = object_payload(&[("hello", Value::Bool(true))]);
            write_frame(&mut output, &WireMessage { kind: WireKind::Response, id: 0, payload })?;
            continue;
        }

        if config.timeout_self_test {
            loop {
                std::thread::sleep(std::time::Duration::from_secs(3600));
            }
        }

        let doc = serde_json::to_string(&Value::Object(frame.payload.clone()))
            .expect("payload serializes");
        let reply = parse_vector_set(&doc)
            .map_err(|e| format!("unparseable vector set: {e}"))
            .and_then(|vs| handle_request(&vs));
        match reply {
            Ok(rs) => {
                let text = serialize_response_set(&rs);
                let value: Value = serde_json::from_str(&text).expect("own serialization parses");
                let payload = value.as_object().expect("response set is an object").clone();
                write_frame(
                    &mut output,
                    &WireMessage { kind: WireKind::Response, id: frame.id, payload },
                )?;
                if config.coverage {
                    let new: Vec<Value> = probe::take_hits()
                        .into_iter()
                        .filter(|id| reported.insert(id))
                        .map(|id| Value::String(id.to_string()))
                        .collect();
                    let payload = object_payload(&[("new", Value::Array(new))]);
                    write_frame(
                        &mut output,
                        &WireMessage { kind: WireKind::Coverage, id: frame.id, payload },
                    )?;
                }
            }
            Err(message) => {
                if config.coverage {
                    // drop hits from the failed attempt so they are not
                    // misattributed to a later response
                    let _ = probe::take_hits();
                }
                let payload = object_payload(&[("message", Value::String(message))]);
                write_frame(
                    &mut output,
                    &WireMessage { kind: WireKind::Error, id: frame.id, payload },
                )?;
            }
        }
    }
    Ok(())
}
