//! RSA private key structure and component population.
//!
//! Missing components are recovered from present ones: (p, q, e) derives
//! everything directly; (n, e, d) factors the modulus with the standard
//! probabilistic method, using a deterministic candidate sequence and a
//! hard attempt bound so the routine terminates on every input, consistent
//! or not.

use crate::bignum::BigInt;
use crate::probe;
use crate::rng::SplitMix64;

use super::RsaError;

/// Hard cap on factoring candidates tried when recovering p and q.
pub const POPULATE_ATTEMPT_BOUND: u32 = 100;

const CANDIDATE_SEED: u64 = 0x52534150_4F503031;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RsaPrivateKey {
    pub n: Option<BigInt>,
    pub e: Option<BigInt>,
    pub d: Option<BigInt>,
    pub p: Option<BigInt>,
    pub q: Option<BigInt>,
    pub dmp1: Option<BigInt>,
    pub dmq1: Option<BigInt>,
    pub iqmp: Option<BigInt>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PopulateStats {
    pub attempts: u32,
}

impl RsaPrivateKey {
    pub fn is_empty(&self) -> bool {
        self == &RsaPrivateKey::default()
    }

    pub fn is_complete(&self) -> bool {
        self.n.is_some()
            && self.e.is_some()
            && self.d.is_some()
            && self.p.is_some()
            && self.q.is_some()
            && self.dmp1.is_some()
            && self.dmq1.is_some()
            && self.iqmp.is_some()
    }

    /// Check the structural invariants over whatever components are present:
    /// n == p*q when all three are known, and e*d == 1 mod lcm(p-1, q-1)
    /// when those four are known.
    pub fn check_consistent(&self) -> Result<(), RsaError> {
        if let (Some(n), Some(p), Some(q)) = (&self.n, &self.p, &self.q) {
            if &p.mul(q) != n {
                return Err(RsaError::InconsistentKey("n != p*q"));
            }
        }
        if let (Some(e), Some(d), Some(p), Some(q)) = (&self.e, &self.d, &self.p, &self.q) {
            let one = BigInt::one();
            let lambda = p.sub(&one).lcm(&q.sub(&one));
            if lambda.is_zero() {
                return Err(RsaError::InconsistentKey("p or q is 1"));
            }
            let prod = e.mul(d).mod_reduce(&lambda).map_err(RsaError::Math)?;
            if !prod.is_one() {
                return Err(RsaError::InconsistentKey("e*d != 1 mod lcm(p-1, q-1)"));
            }
        }
        Ok(())
    }
}

/// Fill in every missing component of a partial key.
///
/// Accepted starting points: (p, q, e), (n, e, d), or an already complete
/// key (which is re-verified). Always terminates: factoring from (n, e, d)
/// tries at most [`POPULATE_ATTEMPT_BOUND`] candidates.
pub fn populate_private_key(
    partial: &RsaPrivateKey,
) -> Result<(RsaPrivateKey, PopulateStats), RsaError> {
    let result = populate_inner(partial);
    match &result {
        Ok(_) => probe::hit("rsa.key.valid"),
        Err(RsaError::InsufficientKey) => probe::hit("rsa.key.insufficient"),
        Err(_) => probe::hit("rsa.key.invalid"),
    }
    result
}

fn populate_inner(
    partial: &RsaPrivateKey,
) -> Result<(RsaPrivateKey, PopulateStats), RsaError> {
    for (name, value) in [
        ("n", &partial.n),
        ("e", &partial.e),
        ("d", &partial.d),
        ("p", &partial.p),
        ("q", &partial.q),
    ] {
        if let Some(v) = value {
            if v.is_negative() {
                return Err(RsaError::InconsistentKey(match name {
                    "n" => "negative n",
                    "e" => "negative e",
                    "d" => "negative d",
                    "p" => "negative p",
                    _ => "negative q",
                }));
            }
        }
    }

    if partial.is_complete() {
        partial.check_consistent()?;
        check_crt(partial)?;
        return Ok((partial.clone(), PopulateStats { attempts: 0 }));
    }

    if let (Some(p), Some(q), Some(e)) = (&partial.p, &partial.q, &partial.e) {
        let key = derive_from_factors(partial, p, q, e)?;
        return Ok((key, PopulateStats { attempts: 0 }));
    }

    if let (Some(n), Some(e), Some(d)) = (&partial.n, &partial.e, &partial.d) {
        return recover_from_ned(partial, n, e, d);
    }

    Err(RsaError::InsufficientKey)
}

fn derive_from_factors(
    partial: &RsaPrivateKey,
    p: &BigInt,
    q: &BigInt,
    e: &BigInt,
) -> Result<RsaPrivateKey, RsaError> {
    let one = BigInt::one();
    if p.cmp_value(&one) != std::cmp::Ordering::Greater
        || q.cmp_value(&one) != std::cmp::Ordering::Greater
    {
        return Err(RsaError::InconsistentKey("p and q must exceed 1"));
    }
    let n = p.mul(q);
    if let Some(given_n) = &partial.n {
        if given_n != &n {
            return Err(RsaError::InconsistentKey("n != p*q"));
        }
    }
    let p1 = p.sub(&one);
    let q1 = q.sub(&one);
    let lambda = p1.lcm(&q1);
    let d = e
        .mod_inv(&lambda)
        .map_err(|_| RsaError::InconsistentKey("e not invertible mod lcm(p-1, q-1)"))?;
    if let Some(given_d) = &partial.d {
        let prod = e.mul(given_d).mod_reduce(&lambda).map_err(RsaError::Math)?;
        if !prod.is_one() {
            return Err(RsaError::InconsistentKey("given d inconsistent with e, p, q"));
        }
    }
    // keep a provided d when consistent, it may use a different modulus form
    let d = partial.d.clone().unwrap_or(d);
    let dmp1 = d.mod_reduce(&p1).map_err(RsaError::Math)?;
    let dmq1 = d.mod_reduce(&q1).map_err(RsaError::Math)?;
    let iqmp = q
        .mod_inv(p)
        .map_err(|_| RsaError::InconsistentKey("q not invertible mod p"))?;
    Ok(RsaPrivateKey {
        n: Some(n),
        e: Some(e.clone()),
        d: Some(d),
        p: Some(p.clone()),
        q: Some(q.clone()),
        dmp1: Some(dmp1),
        dmq1: Some(dmq1),
        iqmp: Some(iqmp),
    })
}

fn recover_from_ned(
    partial: &RsaPrivateKey,
    n: &BigInt,
    e: &BigInt,
    d: &BigInt,
) -> Result<(RsaPrivateKey, PopulateStats), RsaError> {
    let one = BigInt::one();
    let two = BigInt::from_u64(2);
    if n.cmp_value(&BigInt::from_u64(6)) == std::cmp::Ordering::Less || n.is_even() {
        return Err(RsaError::InconsistentKey("modulus must be odd and > 5"));
    }
    // Cheap consistency gate before any factoring work: 2^(e*d) mod n == 2.
    let ed = e.mul(d);
    let check = two.mod_exp(&ed, n).map_err(RsaError::Math)?;
    if check != two {
        return Err(RsaError::InconsistentKey("e*d is not an exponentiation identity mod n"));
    }

    // k = e*d - 1 = 2^t * r with r odd
    let k = ed.sub(&one);
    let mut t = 0usize;
    let mut r = k;
    while r.is_even() && !r.is_zero() {
        r = r.div_rem(&two).map_err(RsaError::Math)?.0;
        t += 1;
    }
    if t == 0 {
        return Err(RsaError::InconsistentKey("e*d - 1 is odd"));
    }

    let mut rng = SplitMix64::new(CANDIDATE_SEED);
    let n_minus_one = n.sub(&one);
    let n_bytes = n.byte_length_stripped();
    for attempt in 1..=POPULATE_ATTEMPT_BOUND {
        let g = random_below(&mut rng, n_bytes, &n_minus_one);
        if g.cmp_value(&two) == std::cmp::Ordering::Less {
            continue;
        }
        let shared = g.gcd(n);
        if !shared.is_one() && &shared != n {
            return finish_with_factor(partial, n, e, d, &shared, attempt);
        }
        let mut x = g.mod_exp(&r, n).map_err(RsaError::Math)?;
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 0..t {
            let y = x.mul(&x).mod_reduce(n).map_err(RsaError::Math)?;
            if y.is_one() {
                let factor = x.sub(&one).gcd(n);
                if !factor.is_one() && &factor != n {
                    return finish_with_factor(partial, n, e, d, &factor, attempt);
                }
                break;
            }
            if y == n_minus_one {
                break;
            }
            x = y;
        }
    }
    Err(RsaError::AttemptBoundExhausted)
}

fn random_below(rng: &mut SplitMix64, n_bytes: usize, bound: &BigInt) -> BigInt {
    let mut buf = vec![0u8; n_bytes.max(1)];
    rng.fill_bytes(&mut buf);
    BigInt::from_raw(&buf, false)
        .mod_reduce(bound)
        .unwrap_or_else(|_| BigInt::zero())
}

fn finish_with_factor(
    partial: &RsaPrivateKey,
    n: &BigInt,
    e: &BigInt,
    d: &BigInt,
    factor: &BigInt,
    attempts: u32,
) -> Result<(RsaPrivateKey, PopulateStats), RsaError> {
    let (q, rem) = n.div_rem(factor).map_err(RsaError::Math)?;
    if !rem.is_zero() {
        return Err(RsaError::InconsistentKey("recovered factor does not divide n"));
    }
    let seed = RsaPrivateKey {
        n: Some(n.clone()),
        e: Some(e.clone()),
        d: Some(d.clone()),
        p: Some(factor.clone()),
        q: Some(q),
        ..partial.clone()
    };
    let key = derive_from_factors(&seed, &factor.clone(), seed.q.as_ref().unwrap(), e)?;
    Ok((key, PopulateStats { attempts }))
}

fn check_crt(key: &RsaPrivateKey) -> Result<(), RsaError> {
    let one = BigInt::one();
    let (d, p, q) = (
        key.d.as_ref().unwrap(),
        key.p.as_ref().unwrap(),
        key.q.as_ref().unwrap(),
    );
    let p1 = p.sub(&one);
    let q1 = q.sub(&one);
    if p1.is_zero() || q1.is_zero() {
        return Err(RsaError::InconsistentKey("p or q is 1"));
    }
    if key.dmp1.as_ref().unwrap() != &d.mod_reduce(&p1).map_err(RsaError::Math)? {
        return Err(RsaError::InconsistentKey("dmp1 != d mod p-1"));
    }
    if key.dmq1.as_ref().unwrap() != &d.mod_reduce(&q1).map_err(RsaError::Math)? {
        return Err(RsaError::InconsistentKey("dmq1 != d mod q-1"));
    }
    let iqmp = q
        .mod_inv(p)
        .map_err(|_| RsaError::InconsistentKey("q not invertible mod p"))?;
    if key.iqmp.as_ref().unwrap() != &iqmp {
        return Err(RsaError::InconsistentKey("iqmp != q^-1 mod p"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_u64(v: u64) -> Option<BigInt> {
        Some(BigInt::from_u64(v))
    }

    #[test]
    fn populate_from_small_factors() {
        let partial = RsaPrivateKey {
            p: from_u64(61),
            q: from_u64(53),
            e: from_u64(17),
            ..Default::default()
        };
        let (key, stats) = populate_private_key(&partial).unwrap();
        assert_eq!(stats.attempts, 0);
        assert_eq!(key.n, from_u64(3233));
        // d = 17^-1 mod lcm(60, 52) = 413
        assert_eq!(key.d, from_u64(413));
        assert_eq!(
            BigInt::from_u64(17)
                .mul(key.d.as_ref().unwrap())
                .mod_reduce(&BigInt::from_u64(780))
                .unwrap(),
            BigInt::one()
        );
        key.check_consistent().unwrap();
        assert!(key.is_complete());
    }

    #[test]
    fn recover_factors_from_ned() {
        // p=61, q=53, e=17, d=413
        let partial = RsaPrivateKey {
            n: from_u64(3233),
            e: from_u64(17),
            d: from_u64(413),
            ..Default::default()
        };
        let (key, stats) = populate_private_key(&partial).unwrap();
        assert!(stats.attempts >= 1 && stats.attempts <= POPULATE_ATTEMPT_BOUND);
        let p = key.p.clone().unwrap();
        let q = key.q.clone().unwrap();
        assert_eq!(p.mul(&q), BigInt::from_u64(3233));
        key.check_consistent().unwrap();
    }

    #[test]
    fn corrupted_d_is_detected_within_bound() {
        let partial = RsaPrivateKey {
            n: from_u64(3233),
            e: from_u64(17),
            d: from_u64(413 ^ 0x10), // one flipped bit
            ..Default::default()
        };
        match populate_private_key(&partial) {
            Err(RsaError::InconsistentKey(_)) | Err(RsaError::AttemptBoundExhausted) => {}
            other => panic!("expected clean error, got {other:?}"),
        }
    }

    #[test]
    fn insufficient_components() {
        let partial = RsaPrivateKey { d: from_u64(413), n: from_u64(3233), ..Default::default() };
        assert!(matches!(populate_private_key(&partial), Err(RsaError::InsufficientKey)));
        assert!(matches!(
            populate_private_key(&RsaPrivateKey::default()),
            Err(RsaError::InsufficientKey)
        ));
    }

    #[test]
    fn populate_is_deterministic() {
        let partial = RsaPrivateKey {
            n: from_u64(3233),
            e: from_u64(17),
            d: from_u64(413),
            ..Default::default()
        };
        let a = populate_private_key(&partial).unwrap();
        let b = populate_private_key(&partial).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }
}
