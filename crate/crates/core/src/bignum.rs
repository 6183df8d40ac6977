//! Arbitrary-precision signed integers with a raw-form codec.
//!
//! The raw form is big-endian magnitude bytes plus an explicit sign flag,
//! matching the encoding carried in `bn` subspecification cases. Length
//! queries never read past the supplied data and the sign always survives
//! a round trip through the codec.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum BignumError {
    #[error("modulus must be positive")]
    NonPositiveModulus,
    #[error("exponent must be non-negative")]
    NegativeExponent,
    #[error("value is not invertible modulo the given modulus")]
    NotInvertible,
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Signed arbitrary-precision integer. Magnitude is little-endian u64 limbs
/// with the highest limb nonzero for any nonzero value; zero has no limbs
/// and sign `Zero`, so a negative zero cannot be represented.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigInt {
    sign: Sign,
    limbs: Vec<u64>,
}

impl BigInt {
    pub fn zero() -> Self {
        BigInt { sign: Sign::Zero, limbs: Vec::new() }
    }

    pub fn one() -> Self {
        BigInt::from_u64(1)
    }

    pub fn from_u64(v: u64) -> Self {
        if v == 0 {
            BigInt::zero()
        } else {
            BigInt { sign: Sign::Positive, limbs: vec![v] }
        }
    }

    pub fn from_i64(v: i64) -> Self {
        if v < 0 {
            let mut x = BigInt::from_u64(v.unsigned_abs());
            x.sign = Sign::Negative;
            x
        } else {
            BigInt::from_u64(v as u64)
        }
    }

    /// Decode from big-endian magnitude bytes and a sign flag. Empty and
    /// all-zero inputs decode to zero regardless of the flag.
    pub fn from_raw(bytes: &[u8], negative: bool) -> Self {
        let limbs = limbs_from_be(bytes);
        if limbs.is_empty() {
            return BigInt::zero();
        }
        BigInt { sign: if negative { Sign::Negative } else { Sign::Positive }, limbs }
    }

    /// Encode to minimal big-endian magnitude bytes plus the sign flag.
    /// Zero encodes as the empty byte string with a clear flag.
    pub fn to_raw(&self) -> (Vec<u8>, bool) {
        (be_from_limbs(&self.limbs), self.sign == Sign::Negative)
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    pub fn is_negative(&self) -> bool {
        self.sign == Sign::Negative
    }

    pub fn is_one(&self) -> bool {
        self.sign == Sign::Positive && self.limbs == [1]
    }

    pub fn is_even(&self) -> bool {
        self.limbs.first().map_or(true, |l| l & 1 == 0)
    }

    /// Length in bytes of the minimal big-endian encoding. Computed from the
    /// normalized magnitude, so leading zero bytes in the original input can
    /// never influence the answer and no out-of-range read is possible.
    pub fn byte_length_stripped(&self) -> usize {
        (self.bit_length_stripped() + 7) / 8
    }

    /// Position of the highest set bit (1-based); 0 for zero.
    pub fn bit_length_stripped(&self) -> usize {
        match self.limbs.last() {
            None => 0,
            Some(&top) => (self.limbs.len() - 1) * 64 + (64 - top.leading_zeros() as usize),
        }
    }

    pub fn bit(&self, idx: usize) -> bool {
        let limb = idx / 64;
        if limb >= self.limbs.len() {
            return false;
        }
        (self.limbs[limb] >> (idx % 64)) & 1 == 1
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self.sign {
            Sign::Zero => Some(0),
            Sign::Positive if self.limbs.len() == 1 => Some(self.limbs[0]),
            _ => None,
        }
    }

    pub fn abs(&self) -> BigInt {
        match self.sign {
            Sign::Negative => BigInt { sign: Sign::Positive, limbs: self.limbs.clone() },
            _ => self.clone(),
        }
    }

    pub fn neg(&self) -> BigInt {
        match self.sign {
            Sign::Zero => BigInt::zero(),
            Sign::Positive => BigInt { sign: Sign::Negative, limbs: self.limbs.clone() },
            Sign::Negative => BigInt { sign: Sign::Positive, limbs: self.limbs.clone() },
        }
    }

    pub fn cmp_value(&self, other: &BigInt) -> Ordering {
        fn rank(s: Sign) -> i8 {
            match s {
                Sign::Negative => -1,
                Sign::Zero => 0,
                Sign::Positive => 1,
            }
        }
        match rank(self.sign).cmp(&rank(other.sign)) {
            Ordering::Equal => match self.sign {
                Sign::Positive => cmp_mag(&self.limbs, &other.limbs),
                Sign::Negative => cmp_mag(&other.limbs, &self.limbs),
                Sign::Zero => Ordering::Equal,
            },
            other_order => other_order,
        }
    }

    pub fn add(&self, other: &BigInt) -> BigInt {
        match (self.sign, other.sign) {
            (Sign::Zero, _) => other.clone(),
            (_, Sign::Zero) => self.clone(),
            (a, b) if a == b => BigInt::normalized(a, add_mag(&self.limbs, &other.limbs)),
            _ => {
                // opposite signs: subtract the smaller magnitude
                match cmp_mag(&self.limbs, &other.limbs) {
                    Ordering::Equal => BigInt::zero(),
                    Ordering::Greater => {
                        BigInt::normalized(self.sign, sub_mag(&self.limbs, &other.limbs))
                    }
                    Ordering::Less => {
                        BigInt::normalized(other.sign, sub_mag(&other.limbs, &self.limbs))
                    }
                }
            }
        }
    }

    pub fn sub(&self, other: &BigInt) -> BigInt {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &BigInt) -> BigInt {
        if self.is_zero() || other.is_zero() {
            return BigInt::zero();
        }
        let sign = if self.sign == other.sign { Sign::Positive } else { Sign::Negative };
        BigInt::normalized(sign, mul_mag(&self.limbs, &other.limbs))
    }

    /// Truncated division: quotient rounds toward zero, remainder carries the
    /// dividend's sign.
    pub fn div_rem(&self, divisor: &BigInt) -> Result<(BigInt, BigInt), BignumError> {
        if divisor.is_zero() {
            return Err(BignumError::DivisionByZero);
        }
        if cmp_mag(&self.limbs, &divisor.limbs) == Ordering::Less {
            return Ok((BigInt::zero(), self.clone()));
        }
        let (q_mag, r_mag) = divmod_mag(&self.limbs, &divisor.limbs);
        let q_sign = if self.sign == divisor.sign { Sign::Positive } else { Sign::Negative };
        Ok((BigInt::normalized(q_sign, q_mag), BigInt::normalized(self.sign, r_mag)))
    }

    /// Euclidean reduction into `[0, modulus)`. The modulus must be positive.
    pub fn mod_reduce(&self, modulus: &BigInt) -> Result<BigInt, BignumError> {
        if modulus.sign != Sign::Positive {
            return Err(BignumError::NonPositiveModulus);
        }
        let (_, r) = self.div_rem(modulus)?;
        if r.is_negative() {
            Ok(r.add(modulus))
        } else {
            Ok(r)
        }
    }

    pub fn gcd(&self, other: &BigInt) -> BigInt {
        let mut a = self.abs();
        let mut b = other.abs();
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r.abs();
        }
        a
    }

    pub fn lcm(&self, other: &BigInt) -> BigInt {
        if self.is_zero() || other.is_zero() {
            return BigInt::zero();
        }
        let g = self.gcd(other);
        self.abs().mul(&other.abs()).div_rem(&g).expect("gcd nonzero").0
    }

    /// Square-and-multiply modular exponentiation. Total for every input
    /// inside the preconditions: any exponent size, any base sign, modulus 1
    /// included. Violated preconditions come back as error values.
    pub fn mod_exp(&self, exponent: &BigInt, modulus: &BigInt) -> Result<BigInt, BignumError> {
        if modulus.sign != Sign::Positive {
            return Err(BignumError::NonPositiveModulus);
        }
        if exponent.is_negative() {
            return Err(BignumError::NegativeExponent);
        }
        if modulus.is_one() {
            return Ok(BigInt::zero());
        }
        let mut result = BigInt::one();
        let mut base = self.mod_reduce(modulus)?;
        let bits = exponent.bit_length_stripped();
        for i in 0..bits {
            if exponent.bit(i) {
                result = result.mul(&base).mod_reduce(modulus)?;
            }
            if i + 1 < bits {
                base = base.mul(&base).mod_reduce(modulus)?;
            }
        }
        Ok(result)
    }

    /// Modular inverse via the extended Euclidean algorithm.
    pub fn mod_inv(&self, modulus: &BigInt) -> Result<BigInt, BignumError> {
        if modulus.sign != Sign::Positive || modulus.is_one() {
            return Err(BignumError::NonPositiveModulus);
        }
        let a = self.mod_reduce(modulus)?;
        let mut old_r = a;
        let mut r = modulus.clone();
        let mut old_s = BigInt::one();
        let mut s = BigInt::zero();
        while !r.is_zero() {
            let (q, rem) = old_r.div_rem(&r).expect("nonzero divisor");
            let next_s = old_s.sub(&q.mul(&s));
            old_r = r;
            r = rem;
            old_s = s;
            s = next_s;
        }
        if !old_r.is_one() {
            return Err(BignumError::NotInvertible);
        }
        old_s.mod_reduce(modulus)
    }

    fn normalized(sign: Sign, mut limbs: Vec<u64>) -> BigInt {
        while limbs.last() == Some(&0) {
            limbs.pop();
        }
        if limbs.is_empty() {
            BigInt::zero()
        } else {
            BigInt { sign, limbs }
        }
    }
}

impl fmt::Display for BigInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (bytes, neg) = self.to_raw();
        if neg {
            write!(f, "-")?;
        }
        if bytes.is_empty() {
            write!(f, "0x00")
        } else {
            write!(f, "0x{}", hex::encode_upper(bytes))
        }
    }
}

fn limbs_from_be(bytes: &[u8]) -> Vec<u64> {
    let mut limbs = Vec::with_capacity(bytes.len() / 8 + 1);
    let mut acc: u64 = 0;
    let mut shift = 0u32;
    for &b in bytes.iter().rev() {
        acc |= (b as u64) << shift;
        shift += 8;
        if shift == 64 {
            limbs.push(acc);
            acc = 0;
            shift = 0;
        }
    }
    if acc != 0 {
        limbs.push(acc);
    }
    while limbs.last() == Some(&0) {
        limbs.pop();
    }
    limbs
}

fn be_from_limbs(limbs: &[u64]) -> Vec<u8> {
    let mut out = Vec::with_capacity(limbs.len() * 8);
    for limb in limbs.iter().rev() {
        out.extend_from_slice(&limb.to_be_bytes());
    }
    let first_nonzero = out.iter().position(|&b| b != 0).unwrap_or(out.len());
    out.drain(..first_nonzero);
    out
}

fn cmp_mag(a: &[u64], b: &[u64]) -> Ordering {
    if a.len() != b.len() {
        return a.len().cmp(&b.len());
    }
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

fn add_mag(a: &[u64], b: &[u64]) -> Vec<u64> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = Vec::with_capacity(long.len() + 1);
    let mut carry = 0u64;
    for i in 0..long.len() {
        let rhs = short.get(i).copied().unwrap_or(0);
        let (s1, c1) = long[i].overflowing_add(rhs);
        let (s2, c2) = s1.overflowing_add(carry);
        out.push(s2);
        carry = (c1 as u64) + (c2 as u64);
    }
    if carry != 0 {
        out.push(carry);
    }
    out
}

/// Requires `a >= b` by magnitude.
fn sub_mag(a: &[u64], b: &[u64]) -> Vec<u64> {
    debug_assert!(cmp_mag(a, b) != Ordering::Less);
    let mut out = Vec::with_capacity(a.len());
    let mut borrow = 0u64;
    for i in 0..a.len() {
        let rhs = b.get(i).copied().unwrap_or(0);
        let (d1, b1) = a[i].overflowing_sub(rhs);
        let (d2, b2) = d1.overflowing_sub(borrow);
        out.push(d2);
        borrow = (b1 as u64) + (b2 as u64);
    }
    debug_assert_eq!(borrow, 0);
    out
}

fn mul_mag(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let mut carry = 0u128;
        for (j, &y) in b.iter().enumerate() {
            let t = (x as u128) * (y as u128) + (out[i + j] as u128) + carry;
            out[i + j] = t as u64;
            carry = t >> 64;
        }
        let mut k = i + b.len();
        while carry != 0 {
            let t = (out[k] as u128) + carry;
            out[k] = t as u64;
            carry = t >> 64;
            k += 1;
        }
    }
    out
}

/// Knuth algorithm D over u64 digits. Requires `|a| >= |b|` and `b` nonzero.
fn divmod_mag(a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    debug_assert!(!b.is_empty());
    if b.len() == 1 {
        return divmod_by_limb(a, b[0]);
    }
    // Normalize so the top divisor limb has its high bit set.
    let shift = b.last().unwrap().leading_zeros();
    let v = shl_bits(b, shift);
    let mut u = shl_bits(a, shift);
    u.push(0); // extra high digit for the algorithm
    let n = v.len();
    let m = u.len() - n - 1;
    let mut q = vec![0u64; m + 1];
    let v_top = v[n - 1];
    let v_next = v[n - 2];

    for j in (0..=m).rev() {
        let numer = ((u[j + n] as u128) << 64) | (u[j + n - 1] as u128);
        let mut qhat = numer / (v_top as u128);
        let mut rhat = numer % (v_top as u128);
        while qhat >> 64 != 0
            || qhat * (v_next as u128) > ((rhat << 64) | (u[j + n - 2] as u128))
        {
            qhat -= 1;
            rhat += v_top as u128;
            if rhat >> 64 != 0 {
                break;
            }
        }
        // Multiply and subtract qhat * v from u[j..j+n+1].
        let mut borrow = 0i128;
        let mut carry = 0u128;
        for i in 0..n {
            let p = qhat * (v[i] as u128) + carry;
            carry = p >> 64;
            let t = (u[j + i] as i128) - ((p as u64) as i128) + borrow;
            u[j + i] = t as u64;
            borrow = t >> 64;
        }
        let t = (u[j + n] as i128) - (carry as i128) + borrow;
        u[j + n] = t as u64;
        let mut qj = qhat as u64;
        if t < 0 {
            // qhat was one too large: add v back.
            qj -= 1;
            let mut carry = 0u128;
            for i in 0..n {
                let s = (u[j + i] as u128) + (v[i] as u128) + carry;
                u[j + i] = s as u64;
                carry = s >> 64;
            }
            u[j + n] = u[j + n].wrapping_add(carry as u64);
        }
        q[j] = qj;
    }
    u.truncate(n);
    let r = shr_bits(&u, shift);
    (q, r)
}

fn divmod_by_limb(a: &[u64], d: u64) -> (Vec<u64>, Vec<u64>) {
    let mut q = vec![0u64; a.len()];
    let mut rem: u128 = 0;
    for i in (0..a.len()).rev() {
        let cur = (rem << 64) | (a[i] as u128);
        q[i] = (cur / d as u128) as u64;
        rem = cur % d as u128;
    }
    let r = if rem == 0 { Vec::new() } else { vec![rem as u64] };
    (q, r)
}

fn shl_bits(a: &[u64], shift: u32) -> Vec<u64> {
    if shift == 0 {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + 1);
    let mut carry = 0u64;
    for &limb in a {
        out.push((limb << shift) | carry);
        carry = limb >> (64 - shift);
    }
    if carry != 0 {
        out.push(carry);
    }
    out
}

fn shr_bits(a: &[u64], shift: u32) -> Vec<u64> {
    if shift == 0 {
        let mut out = a.to_vec();
        while out.last() == Some(&0) {
            out.pop();
        }
        return out;
    }
    let mut out = vec![0u64; a.len()];
    let mut carry = 0u64;
    for i in (0..a.len()).rev() {
        out[i] = (a[i] >> shift) | carry;
        carry = a[i] << (64 - shift);
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}
