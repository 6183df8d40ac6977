//! EMSA-PKCS1-v1_5 encoding (RFC 8017 §9.2).

use crate::probe;

use super::super::sha2::{sha2_digest, DigestVariant};
use super::RsaError;

/// DER DigestInfo prefixes for the supported hashes.
fn digest_info_prefix(hash: DigestVariant) -> &'static [u8] {
    match hash {
        DigestVariant::Sha2_256 => &[
            0x30, 0x31, 0x30, 0x0d, 0x06, 0x09, 0x60, 0x86, 0x48, 0x01, 0x65, 0x03, 0x04, 0x02,
            0x01, 0x05, 0x00, 0x04, 0x20,
        ],
        DigestVariant::Sha2_384 => &[
            0x30, 0x41, 0x30, 0x0d, 0x06, 0x09, 0x60, 0x86, 0x48, 0x01, 0x65, 0x03, 0x04, 0x02,
            0x02, 0x05, 0x00, 0x04, 0x30,
        ],
        DigestVariant::Sha2_512 => &[
            0x30, 0x51, 0x30, 0x0d, 0x06, 0x09, 0x60, 0x86, 0x48, 0x01, 0x65, 0x03, 0x04, 0x02,
            0x03, 0x05, 0x00, 0x04, 0x40,
        ],
    }
}

pub fn encode(hash: DigestVariant, message: &[u8], em_len: usize) -> Result<Vec<u8>, RsaError> {
    let prefix = digest_info_prefix(hash);
    let t_len = prefix.len() + hash.output_len();
    if em_len < t_len + 11 {
        probe::hit("rsa.v15.encode.too_long");
        probe::hit("rsa.modulus.too_small");
        return Err(RsaError::ModulusTooSmall);
    }
    probe::hit("rsa.v15.encode.ok");
    let mut em = Vec::with_capacity(em_len);
    em.push(0x00);
    em.push(0x01);
    em.resize(em_len - t_len - 1, 0xFF);
    em.push(0x00);
    em.extend_from_slice(prefix);
    em.extend_from_slice(&sha2_digest(hash, message));
    Ok(em)
}

pub fn verify(hash: DigestVariant, message: &[u8], em: &[u8]) -> bool {
    match encode(hash, message, em.len()) {
        Ok(expected) if expected == em => {
            probe::hit("rsa.v15.verify.ok");
            true
        }
        _ => {
            probe::hit("rsa.v15.verify.bad");
            false
        }
    }
}
