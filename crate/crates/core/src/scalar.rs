//! exact rational scalars. everything in this crate computes over `Q`;
//! floating point never appears.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// The coefficient field. Always an exact rational.
pub type Q = BigRational;

/// Integer as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// n/d as a rational. Panics on d = 0.
pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Render `p/q`, omitting `/q` when the denominator is one.
pub fn format_q(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Render the absolute value the same way (callers place the sign themselves).
pub fn format_q_abs(q: &Q) -> String {
    format_q(&q.abs())
}

pub fn is_one(q: &Q) -> bool {
    q.is_one()
}

pub fn is_minus_one(q: &Q) -> bool {
    (-q).is_one()
}

/// Residue of an exact rational mod a prime, if the denominator is invertible.
pub fn residue_mod(q: &Q, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = ((q.numer() % &pb) + &pb) % &pb;
    let den = ((q.denom() % &pb) + &pb) % &pb;
    let num: u64 = num.try_into().ok()?;
    let den: u64 = den.try_into().ok()?;
    if den == 0 {
        return None;
    }
    Some(mul_mod(num, inv_mod(den, p)?, p))
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Inverse mod p by extended Euclid; None when gcd(a, p) > 1.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(((s0 % p as i128 + p as i128) % p as i128) as u64)
}

pub fn is_zero(q: &Q) -> bool {
    q.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_integers_without_denominator() {
        assert_eq!(format_q(&qi(-3)), "-3");
        assert_eq!(format_q(&qr(1, 2)), "1/2");
        assert_eq!(format_q(&qr(-2, 4)), "-1/2");
    }

    #[test]
    fn modular_residues_respect_inverses() {
        let p = 10007;
        let q = qr(3, 7);
        let r = residue_mod(&q, p).unwrap();
        assert_eq!(mul_mod(r, 7, p), 3);
        assert_eq!(residue_mod(&qr(1, 10007), p), None);
    }
}
