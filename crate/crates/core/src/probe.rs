//! Hand-placed branch probes.
//!
//! Probe identifiers stand in for edge coverage: each one marks a decision
//! point in the reference crypto paths or an operation entry point. The
//! full registry is enumerable so coverage ratios can be computed. When
//! capture is disabled, `hit` is a cheap no-op.

use std::cell::RefCell;
use std::collections::BTreeSet;

/// Every probe identifier that can ever be emitted. Fixed at build time.
pub const REGISTRY: &[&str] = &[
    "sha.digest.sha2_256",
    "sha.digest.sha2_384",
    "sha.digest.sha2_512",
    "gcm.encrypt.ok",
    "gcm.decrypt.auth_ok",
    "gcm.decrypt.auth_fail",
    "gcm.param.bad_key_len",
    "gcm.param.bad_tag_len",
    "gcm.param.empty_iv",
    "rsa.op.siggen",
    "rsa.op.sigver",
    "rsa.op.encrypt",
    "rsa.op.decrypt",
    "rsa.op.keypopulate",
    "rsa.key.valid",
    "rsa.key.invalid",
    "rsa.key.insufficient",
    "rsa.modulus.ok",
    "rsa.modulus.too_small",
    "rsa.pss.encode.salt_ok",
    "rsa.pss.encode.interlink_ok",
    "rsa.pss.encode.too_long",
    "rsa.pss.verify.ok",
    "rsa.pss.verify.bad",
    "rsa.pss.verify.salt_range",
    "rsa.v15.encode.ok",
    "rsa.v15.encode.too_long",
    "rsa.v15.verify.ok",
    "rsa.v15.verify.bad",
    "oaep.encode.ok",
    "oaep.encode.too_long",
    "oaep.decode.pad_present",
    "oaep.decode.pad_absent",
    "rsa.primitive.range_ok",
    "rsa.primitive.range_err",
    "bn.op.add",
    "bn.op.sub",
    "bn.op.mul",
    "bn.op.mod",
    "bn.op.exptmod",
    "bn.op.modinv",
    "bn.op.gcd",
    "bn.op.fromraw",
    "bn.op.toraw",
    "bn.op.error",
];

thread_local! {
    static HITS: RefCell<Option<BTreeSet<&'static str>>> = const { RefCell::new(None) };
}

/// Start capturing probe hits on this thread.
pub fn enable() {
    HITS.with(|h| *h.borrow_mut() = Some(BTreeSet::new()));
}

pub fn disable() {
    HITS.with(|h| *h.borrow_mut() = None);
}

pub fn is_enabled() -> bool {
    HITS.with(|h| h.borrow().is_some())
}

/// Mark a probe as hit. The identifier must be a registry member.
pub fn hit(id: &'static str) {
    debug_assert!(REGISTRY.contains(&id), "unregistered probe id {id}");
    HITS.with(|h| {
        if let Some(set) = h.borrow_mut().as_mut() {
            set.insert(id);
        }
    });
}

/// Drain and return the ids hit since the last call (or since `enable`).
pub fn take_hits() -> Vec<&'static str> {
    HITS.with(|h| {
        match h.borrow_mut().as_mut() {
            Some(set) => std::mem::take(set).into_iter().collect(),
            None => Vec::new(),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_unique() {
        let set: BTreeSet<_> = REGISTRY.iter().collect();
        assert_eq!(set.len(), REGISTRY.len());
    }

    #[test]
    fn capture_and_drain() {
        enable();
        hit("sha.digest.sha2_256");
        hit("sha.digest.sha2_256");
        assert_eq!(take_hits(), vec!["sha.digest.sha2_256"]);
        assert!(take_hits().is_empty());
        disable();
        hit("sha.digest.sha2_512");
        assert!(take_hits().is_empty());
    }
}
