//! Reference implementations of the supported algorithms: SHA-2 digests,
//! AES-GCM, and RSA with the PKCS#1 padding family.

pub mod aes;
pub mod gcm;
pub mod rsa;
pub mod sha2;
