//! EME-OAEP encoding and decoding (RFC 8017 §7.1) with MGF1.

use crate::probe;

use super::super::sha2::{sha2_digest, DigestVariant};
use super::{mgf1, RsaError};

pub fn encode(
    hash: DigestVariant,
    k: usize,
    label: &[u8],
    message: &[u8],
    seed: Option<&[u8]>,
) -> Result<Vec<u8>, RsaError> {
    let h_len = hash.output_len();
    if (k as u128) < 2 * h_len as u128 + 2 {
        probe::hit("rsa.modulus.too_small");
        return Err(RsaError::ModulusTooSmall);
    }
    let max_msg = k - 2 * h_len - 2;
    if message.len() > max_msg {
        probe::hit("oaep.encode.too_long");
        return Err(RsaError::MessageTooLong);
    }
    probe::hit("oaep.encode.ok");

    let l_hash = sha2_digest(hash, label);
    let seed_bytes = match seed {
        Some(s) => {
            if s.len() != h_len {
                return Err(RsaError::InvalidPadding);
            }
            s.to_vec()
        }
        None => deterministic_seed(hash, &l_hash, message),
    };

    // DB = lHash || PS || 0x01 || M
    let mut db = l_hash.clone();
    db.resize(k - h_len - 1 - message.len() - 1, 0x00);
    db.push(0x01);
    db.extend_from_slice(message);

    let db_mask = mgf1(hash, &seed_bytes, k - h_len - 1);
    for (b, m) in db.iter_mut().zip(&db_mask) {
        *b ^= m;
    }
    let seed_mask = mgf1(hash, &db, h_len);
    let masked_seed: Vec<u8> = seed_bytes.iter().zip(&seed_mask).map(|(b, m)| b ^ m).collect();

    let mut em = vec![0x00];
    em.extend_from_slice(&masked_seed);
    em.extend_from_slice(&db);
    Ok(em)
}

fn deterministic_seed(hash: DigestVariant, l_hash: &[u8], message: &[u8]) -> Vec<u8> {
    let mut input = b"oaep-seed".to_vec();
    input.extend_from_slice(l_hash);
    input.extend_from_slice(&sha2_digest(hash, message));
    mgf1(hash, &input, hash.output_len())
}

pub fn decode(hash: DigestVariant, em: &[u8], label: &[u8]) -> Result<Vec<u8>, RsaError> {
    let h_len = hash.output_len();
    let k = em.len();
    if (k as u128) < 2 * h_len as u128 + 2 || em[0] != 0x00 {
        probe::hit("oaep.decode.pad_absent");
        return Err(RsaError::InvalidPadding);
    }
    let masked_seed = &em[1..1 + h_len];
    let masked_db = &em[1 + h_len..];

    let seed_mask = mgf1(hash, masked_db, h_len);
    let seed: Vec<u8> = masked_seed.iter().zip(&seed_mask).map(|(b, m)| b ^ m).collect();
    let db_mask = mgf1(hash, &seed, k - h_len - 1);
    let db: Vec<u8> = masked_db.iter().zip(&db_mask).map(|(b, m)| b ^ m).collect();

    let l_hash = sha2_digest(hash, label);
    if db[..h_len] != l_hash[..] {
        probe::hit("oaep.decode.pad_absent");
        return Err(RsaError::InvalidPadding);
    }
    let mut idx = h_len;
    while idx < db.len() && db[idx] == 0x00 {
        idx += 1;
    }
    if idx == db.len() || db[idx] != 0x01 {
        probe::hit("oaep.decode.pad_absent");
        return Err(RsaError::InvalidPadding);
    }
    probe::hit("oaep.decode.pad_present");
    Ok(db[idx + 1..].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_decode_round_trip() {
        let hash = DigestVariant::Sha2_256;
        let em = encode(hash, 128, b"", b"secret message", None).unwrap();
        assert_eq!(em.len(), 128);
        assert_eq!(decode(hash, &em, b"").unwrap(), b"secret message");
        // wrong label is a padding failure
        assert_eq!(decode(hash, &em, b"other"), Err(RsaError::InvalidPadding));
    }

    #[test]
    fn length_bounds() {
        let hash = DigestVariant::Sha2_256;
        // k = 128, max message = 128 - 64 - 2 = 62
        assert!(encode(hash, 128, b"", &[0u8; 62], None).is_ok());
        assert_eq!(
            encode(hash, 128, b"", &[0u8; 63], None),
            Err(RsaError::MessageTooLong)
        );
        assert_eq!(encode(hash, 10, b"", b"", None), Err(RsaError::ModulusTooSmall));
    }

    #[test]
    fn garbage_decodes_to_clean_error() {
        let hash = DigestVariant::Sha2_256;
        for len in [0usize, 1, 65, 66, 128] {
            let em = vec![0xDB; len];
            match decode(hash, &em, b"") {
                Err(RsaError::InvalidPadding) => {}
                Ok(_) => panic!("garbage accepted"),
                Err(e) => panic!("unexpected error {e:?}"),
            }
        }
    }
}
