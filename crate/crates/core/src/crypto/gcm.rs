//! AES-GCM authenticated encryption (SP 800-38D construction).

use thiserror::Error;

use super::aes::AesKey;
use crate::probe;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GcmError {
    #[error("key must be 16 or 32 bytes, got {0}")]
    BadKeyLength(usize),
    #[error("iv must be non-empty")]
    EmptyIv,
    #[error("tag length must be one of 96, 104, 112, 120, 128 bits, got {0}")]
    BadTagLength(usize),
    #[error("authentication failed")]
    AuthFailure,
}

pub const TAG_LENGTHS_BITS: [usize; 5] = [96, 104, 112, 120, 128];

pub fn aes_gcm_encrypt(
    key: &[u8],
    iv: &[u8],
    aad: &[u8],
    plaintext: &[u8],
    tag_len_bits: usize,
) -> Result<(Vec<u8>, Vec<u8>), GcmError> {
    let (cipher, h, j0) = setup(key, iv, tag_len_bits)?;
    let ciphertext = gctr(&cipher, &inc32(&j0), plaintext);
    let tag = compute_tag(&cipher, h, &j0, aad, &ciphertext, tag_len_bits);
    probe::hit("gcm.encrypt.ok");
    Ok((ciphertext, tag))
}

pub fn aes_gcm_decrypt(
    key: &[u8],
    iv: &[u8],
    aad: &[u8],
    ciphertext: &[u8],
    tag: &[u8],
    tag_len_bits: usize,
) -> Result<Vec<u8>, GcmError> {
    let (cipher, h, j0) = setup(key, iv, tag_len_bits)?;
    let expected = compute_tag(&cipher, h, &j0, aad, ciphertext, tag_len_bits);
    if tag.len() != expected.len() || !constant_time_eq(tag, &expected) {
        probe::hit("gcm.decrypt.auth_fail");
        return Err(GcmError::AuthFailure);
    }
    probe::hit("gcm.decrypt.auth_ok");
    Ok(gctr(&cipher, &inc32(&j0), ciphertext))
}

fn setup(key: &[u8], iv: &[u8], tag_len_bits: usize) -> Result<(AesKey, u128, [u8; 16]), GcmError> {
    if !TAG_LENGTHS_BITS.contains(&tag_len_bits) {
        probe::hit("gcm.param.bad_tag_len");
        return Err(GcmError::BadTagLength(tag_len_bits));
    }
    let cipher = AesKey::new(key).ok_or_else(|| {
        probe::hit("gcm.param.bad_key_len");
        GcmError::BadKeyLength(key.len())
    })?;
    if iv.is_empty() {
        probe::hit("gcm.param.empty_iv");
        return Err(GcmError::EmptyIv);
    }
    let h = u128::from_be_bytes(cipher.encrypt_block(&[0u8; 16]));
    let j0 = if iv.len() == 12 {
        let mut block = [0u8; 16];
        block[..12].copy_from_slice(iv);
        block[15] = 1;
        block
    } else {
        let mut acc = ghash_blocks(h, 0, iv);
        let mut len_block = [0u8; 16];
        len_block[8..].copy_from_slice(&((iv.len() as u64) * 8).to_be_bytes());
        acc = gmul(acc ^ u128::from_be_bytes(len_block), h);
        acc.to_be_bytes()
    };
    Ok((cipher, h, j0))
}

fn compute_tag(
    cipher: &AesKey,
    h: u128,
    j0: &[u8; 16],
    aad: &[u8],
    ciphertext: &[u8],
    tag_len_bits: usize,
) -> Vec<u8> {
    let mut acc = ghash_blocks(h, 0, aad);
    acc = ghash_blocks(h, acc, ciphertext);
    let mut len_block = [0u8; 16];
    len_block[..8].copy_from_slice(&((aad.len() as u64) * 8).to_be_bytes());
    len_block[8..].copy_from_slice(&((ciphertext.len() as u64) * 8).to_be_bytes());
    acc = gmul(acc ^ u128::from_be_bytes(len_block), h);
    let full = gctr(cipher, j0, &acc.to_be_bytes());
    full[..tag_len_bits / 8].to_vec()
}

fn ghash_blocks(h: u128, initial: u128, data: &[u8]) -> u128 {
    let mut acc = initial;
    for chunk in data.chunks(16) {
        let mut block = [0u8; 16];
        block[..chunk.len()].copy_from_slice(chunk);
        acc = gmul(acc ^ u128::from_be_bytes(block), h);
    }
    acc
}

/// GF(2^128) multiplication with the GCM reduction polynomial.
fn gmul(x: u128, y: u128) -> u128 {
    const R: u128 = 0xe1 << 120;
    let mut z = 0u128;
    let mut v = x;
    for i in 0..128 {
        if (y >> (127 - i)) & 1 == 1 {
            z ^= v;
        }
        let lsb = v & 1;
        v >>= 1;
        if lsb == 1 {
            v ^= R;
        }
    }
    z
}

fn inc32(block: &[u8; 16]) -> [u8; 16] {
    let mut out = *block;
    let ctr = u32::from_be_bytes(out[12..].try_into().unwrap()).wrapping_add(1);
    out[12..].copy_from_slice(&ctr.to_be_bytes());
    out
}

fn gctr(cipher: &AesKey, icb: &[u8; 16], data: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(data.len());
    let mut counter = *icb;
    for chunk in data.chunks(16) {
        let keystream = cipher.encrypt_block(&counter);
        for (i, &b) in chunk.iter().enumerate() {
            out.push(b ^ keystream[i]);
        }
        counter = inc32(&counter);
    }
    out
}

fn constant_time_eq(a: &[u8], b: &[u8]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0u8, |acc, (x, y)| acc | (x ^ y)) == 0
}
