//! RSA reference operations: PKCS#1 v1.5, PSS, OAEP (RFC 8017
//! constructions with MGF1) and the raw primitive.
//!
//! No minimum modulus size is imposed; undersized moduli surface as clean
//! errors from the length checks rather than being rejected up front. All
//! length decisions come from the normalized big integer, so leading zero
//! bytes on an encoded modulus can never change behavior.

mod key;
mod oaep;
mod pkcs1v15;
mod pss;

pub use key::{populate_private_key, PopulateStats, RsaPrivateKey, POPULATE_ATTEMPT_BOUND};

use thiserror::Error;

use crate::bignum::{BigInt, BignumError};
use crate::probe;

use super::sha2::{sha2_digest, DigestVariant};

#[derive(Debug, Error, PartialEq)]
pub enum RsaError {
    #[error("modulus too small for the selected encoding")]
    ModulusTooSmall,
    #[error("message too long for the selected encoding")]
    MessageTooLong,
    #[error("message representative out of range")]
    MessageOutOfRange,
    #[error("missing key component: {0}")]
    MissingComponent(&'static str),
    #[error("padding check failed")]
    InvalidPadding,
    #[error("inconsistent key: {0}")]
    InconsistentKey(&'static str),
    #[error("insufficient key components")]
    InsufficientKey,
    #[error("factor recovery attempt bound exhausted")]
    AttemptBoundExhausted,
    #[error("arithmetic error: {0}")]
    Math(#[from] BignumError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum RsaPaddingMode {
    Pkcs1V15,
    Pss {
        salt_len: usize,
        /// Explicit salt for replayable vectors; when absent the salt is
        /// derived deterministically from the message digest.
        salt: Option<Vec<u8>>,
    },
    Oaep {
        label: Vec<u8>,
        /// Explicit seed for replayable vectors; derived deterministically
        /// from the label hash and message when absent.
        seed: Option<Vec<u8>>,
    },
    Primitive,
}

/// MGF1 mask generation over the selected digest.
pub(crate) fn mgf1(hash: DigestVariant, seed: &[u8], out_len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(out_len + hash.output_len());
    let mut counter = 0u32;
    while out.len() < out_len {
        let mut block = seed.to_vec();
        block.extend_from_slice(&counter.to_be_bytes());
        out.extend_from_slice(&sha2_digest(hash, &block));
        counter += 1;
    }
    out.truncate(out_len);
    out
}

fn os2ip(bytes: &[u8]) -> BigInt {
    BigInt::from_raw(bytes, false)
}

fn i2osp(x: &BigInt, len: usize) -> Result<Vec<u8>, RsaError> {
    let (bytes, _) = x.to_raw();
    if bytes.len() > len {
        return Err(RsaError::MessageOutOfRange);
    }
    let mut out = vec![0u8; len - bytes.len()];
    out.extend_from_slice(&bytes);
    Ok(out)
}

/// m^d mod n, via CRT when the components are available.
fn private_op(key: &RsaPrivateKey, m: &BigInt) -> Result<BigInt, RsaError> {
    let n = key.n.as_ref().ok_or(RsaError::MissingComponent("n"))?;
    if let (Some(p), Some(q), Some(dmp1), Some(dmq1), Some(iqmp)) =
        (&key.p, &key.q, &key.dmp1, &key.dmq1, &key.iqmp)
    {
        let m1 = m.mod_exp(dmp1, p)?;
        let m2 = m.mod_exp(dmq1, q)?;
        let h = iqmp.mul(&m1.sub(&m2)).mod_reduce(p)?;
        return Ok(m2.add(&h.mul(q)));
    }
    let d = key.d.as_ref().ok_or(RsaError::MissingComponent("d"))?;
    Ok(m.mod_exp(d, n)?)
}

fn modulus_sizes(n: &BigInt) -> Result<(usize, usize), RsaError> {
    let bits = n.bit_length_stripped();
    if bits < 2 {
        probe::hit("rsa.modulus.too_small");
        return Err(RsaError::ModulusTooSmall);
    }
    Ok((n.byte_length_stripped(), bits))
}

pub fn rsa_sign(
    mode: &RsaPaddingMode,
    hash: DigestVariant,
    key: &RsaPrivateKey,
    message: &[u8],
) -> Result<Vec<u8>, RsaError> {
    let n = key.n.as_ref().ok_or(RsaError::MissingComponent("n"))?;
    let (k, mod_bits) = modulus_sizes(n)?;
    let em = match mode {
        RsaPaddingMode::Pkcs1V15 => pkcs1v15::encode(hash, message, k)?,
        RsaPaddingMode::Pss { salt_len, salt } => {
            let m_hash = sha2_digest(hash, message);
            let salt_bytes = match salt {
                Some(s) => s.clone(),
                None => deterministic_salt(hash, &m_hash, *salt_len),
            };
            if salt_bytes.len() != *salt_len {
                return Err(RsaError::InvalidPadding);
            }
            pss::encode(hash, &m_hash, mod_bits - 1, &salt_bytes)?
        }
        RsaPaddingMode::Primitive => {
            let m = os2ip(message);
            if m.cmp_value(n) != std::cmp::Ordering::Less {
                probe::hit("rsa.primitive.range_err");
                return Err(RsaError::MessageOutOfRange);
            }
            probe::hit("rsa.primitive.range_ok");
            let s = private_op(key, &m)?;
            return i2osp(&s, k);
        }
        RsaPaddingMode::Oaep { .. } => return Err(RsaError::InvalidPadding),
    };
    probe::hit("rsa.modulus.ok");
    let m = os2ip(&em);
    if m.cmp_value(n) != std::cmp::Ordering::Less {
        return Err(RsaError::MessageOutOfRange);
    }
    let s = private_op(key, &m)?;
    i2osp(&s, k)
}

fn deterministic_salt(hash: DigestVariant, m_hash: &[u8], salt_len: usize) -> Vec<u8> {
    let mut seed = b"pss-salt".to_vec();
    seed.extend_from_slice(m_hash);
    mgf1(hash, &seed, salt_len)
}

/// Returns `Ok(true)` for accept, `Ok(false)` for reject. Errors are
/// reserved for unusable parameters; arbitrary signature bytes always
/// produce a verdict.
pub fn rsa_verify(
    mode: &RsaPaddingMode,
    hash: DigestVariant,
    n: &BigInt,
    e: &BigInt,
    message: &[u8],
    signature: &[u8],
) -> Result<bool, RsaError> {
    let (k, mod_bits) = modulus_sizes(n)?;
    if signature.len() != k {
        return Ok(false);
    }
    let s = os2ip(signature);
    if s.cmp_value(n) != std::cmp::Ordering::Less {
        return Ok(false);
    }
    let m = s.mod_exp(e, n)?;
    match mode {
        RsaPaddingMode::Pkcs1V15 => {
            let em = i2osp(&m, k)?;
            Ok(pkcs1v15::verify(hash, message, &em))
        }
        RsaPaddingMode::Pss { salt_len, .. } => {
            let em_bits = mod_bits - 1;
            let em_len = (em_bits + 7) / 8;
            let em = i2osp(&m, em_len).map_err(|_| RsaError::InvalidPadding)?;
            let m_hash = sha2_digest(hash, message);
            Ok(pss::verify(hash, &m_hash, &em, em_bits, *salt_len))
        }
        RsaPaddingMode::Primitive => Ok(m == os2ip(message)),
        RsaPaddingMode::Oaep { .. } => Err(RsaError::InvalidPadding),
    }
}

pub fn rsa_encrypt(
    mode: &RsaPaddingMode,
    hash: DigestVariant,
    n: &BigInt,
    e: &BigInt,
    plaintext: &[u8],
) -> Result<Vec<u8>, RsaError> {
    let (k, _) = modulus_sizes(n)?;
    match mode {
        RsaPaddingMode::Oaep { label, seed } => {
            let em = oaep::encode(hash, k, label, plaintext, seed.as_deref())?;
            probe::hit("rsa.modulus.ok");
            let m = os2ip(&em);
            if m.cmp_value(n) != std::cmp::Ordering::Less {
                return Err(RsaError::MessageOutOfRange);
            }
            let c = m.mod_exp(e, n)?;
            i2osp(&c, k)
        }
        RsaPaddingMode::Primitive => {
            let m = os2ip(plaintext);
            if m.cmp_value(n) != std::cmp::Ordering::Less {
                probe::hit("rsa.primitive.range_err");
                return Err(RsaError::MessageOutOfRange);
            }
            probe::hit("rsa.primitive.range_ok");
            let c = m.mod_exp(e, n)?;
            i2osp(&c, k)
        }
        _ => Err(RsaError::InvalidPadding),
    }
}

pub fn rsa_decrypt(
    mode: &RsaPaddingMode,
    hash: DigestVariant,
    key: &RsaPrivateKey,
    ciphertext: &[u8],
) -> Result<Vec<u8>, RsaError> {
    let n = key.n.as_ref().ok_or(RsaError::MissingComponent("n"))?;
    let (k, _) = modulus_sizes(n)?;
    let c = os2ip(ciphertext);
    if c.cmp_value(n) != std::cmp::Ordering::Less {
        return Err(RsaError::MessageOutOfRange);
    }
    let m = private_op(key, &c)?;
    match mode {
        RsaPaddingMode::Oaep { label, .. } => {
            let em = i2osp(&m, k).map_err(|_| RsaError::InvalidPadding)?;
            oaep::decode(hash, &em, label)
        }
        RsaPaddingMode::Primitive => i2osp(&m, k),
        _ => Err(RsaError::InvalidPadding),
    }
}

#[cfg(test)]
mod tests;
