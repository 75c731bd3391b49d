//! Table-driven arithmetic for the small finite fields F_q, q = p^r <= 256.
//!
//! Elements are indices into per-field lookup tables. For r = 1 an index is
//! the residue itself; for r > 1 it encodes the coefficient vector of the
//! element in the basis 1, x, ..., x^(r-1), least significant digit first,
//! so index = sum(digit_i * p^i). Index 0 is zero and index 1 is one in
//! every field.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Element of F_q, valid only together with the `FieldDesc` that built it.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct FqElem(pub(crate) u16);

impl FqElem {
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1
    }

    /// Raw table index; stable for a fixed field description.
    pub fn index(self) -> u16 {
        self.0
    }
}

/// Description of F_q with dense add/mul/neg/inv tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDesc {
    p: u32,
    r: usize,
    q: usize,
    modulus: Vec<u32>,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Default irreducible modulus for the composite fields the crate ships with.
fn default_modulus(p: u32, r: usize) -> Option<Vec<u32>> {
    match (p, r) {
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (3, 2) => Some(vec![1, 0, 1]),
        _ => None,
    }
}

/// Arithmetic on F_p coefficient vectors (little endian, possibly untrimmed).
mod fppoly {
    use alloc::vec;
    use alloc::vec::Vec;

    pub fn trim(v: &mut Vec<u32>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + ai * bj) % p;
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of a modulo monic m.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        trim(&mut a);
        let dm = m.len() - 1;
        while a.len() > dm {
            let c = *a.last().unwrap();
            let shift = a.len() - 1 - dm;
            if c != 0 {
                for (i, &mi) in m.iter().enumerate() {
                    let idx = shift + i;
                    let sub = (c * mi) % p;
                    a[idx] = (a[idx] + p * p - sub) % p;
                }
            }
            a.pop();
            trim(&mut a);
            if a.len() <= dm {
                break;
            }
        }
        a
    }

    /// Checks irreducibility over F_p by trial division with all monic
    /// polynomials of degree 1..=deg/2. Field sizes are tiny, so brute
    /// force is fine.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let deg = m.len() - 1;
        if deg == 0 {
            return false;
        }
        for d in 1..=deg / 2 {
            // Enumerate monic divisor candidates of degree d.
            let count = p.pow(d as u32) as u64;
            for code in 0..count {
                let mut divisor = Vec::with_capacity(d + 1);
                let mut c = code;
                for _ in 0..d {
                    divisor.push((c % p as u64) as u32);
                    c /= p as u64;
                }
                divisor.push(1);
                if rem(m, &divisor, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl FieldDesc {
    /// Builds F_q from a prime p, extension degree r, and an optional monic
    /// irreducible modulus over F_p (little endian, length r + 1). When the
    /// modulus is omitted a shipped default is used for q in {4, 8, 9};
    /// other composite fields require an explicit modulus.
    pub fn new(p: u32, r: usize, modulus: Option<&[u32]>) -> Result<FieldDesc> {
        if !is_prime(p) {
            return Err(Error::FieldUnsupported("p must be prime".to_string()));
        }
        if r == 0 {
            return Err(Error::FieldUnsupported("r must be >= 1".to_string()));
        }
        let q = (p as u64).checked_pow(r as u32).ok_or_else(|| {
            Error::FieldUnsupported("q overflows".to_string())
        })?;
        if q > 256 {
            return Err(Error::FieldUnsupported("q must be <= 256".to_string()));
        }
        let q = q as usize;

        let modulus: Vec<u32> = if r == 1 {
            match modulus {
                None => vec![0, 1],
                Some(_) => {
                    return Err(Error::BadModulus(
                        "prime fields take no modulus".to_string(),
                    ))
                }
            }
        } else {
            let m = match modulus {
                Some(m) => m.to_vec(),
                None => default_modulus(p, r).ok_or_else(|| {
                    Error::BadModulus("no default modulus for this field; supply one".to_string())
                })?,
            };
            if m.len() != r + 1 {
                return Err(Error::BadModulus("modulus must have degree r".to_string()));
            }
            if m.iter().any(|&c| c >= p) {
                return Err(Error::BadModulus("modulus digits must be < p".to_string()));
            }
            if m[r] != 1 {
                return Err(Error::BadModulus("modulus must be monic".to_string()));
            }
            if !fppoly::is_irreducible(&m, p) {
                return Err(Error::BadModulus("modulus is reducible".to_string()));
            }
            m
        };

        let to_digits = |mut idx: usize| -> Vec<u32> {
            let mut d = Vec::with_capacity(r);
            for _ in 0..r {
                d.push((idx % p as usize) as u32);
                idx /= p as usize;
            }
            d
        };
        let from_digits = |d: &[u32]| -> usize {
            let mut idx = 0usize;
            for &c in d.iter().rev() {
                idx = idx * p as usize + c as usize;
            }
            idx
        };

        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        let mut neg = vec![0u16; q];
        for a in 0..q {
            let da = to_digits(a);
            let nd: Vec<u32> = da.iter().map(|&c| (p - c) % p).collect();
            neg[a] = from_digits(&nd) as u16;
            for b in 0..q {
                let db = to_digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[a * q + b] = from_digits(&sum) as u16;
                let prod = fppoly::mul(&da, &db, p);
                let red = if r == 1 { prod } else { fppoly::rem(&prod, &modulus, p) };
                let mut padded = red;
                padded.resize(r, 0);
                mul[a * q + b] = from_digits(&padded) as u16;
            }
        }

        let mut fd = FieldDesc {
            p,
            r,
            q,
            modulus,
            add,
            mul,
            neg,
            inv: vec![0u16; q],
        };
        // inv[a] = a^(q-2) via the finished mul table; inv[0] stays 0 and is
        // never handed out.
        for a in 1..q {
            let mut acc = FqElem(1);
            let mut base = FqElem(a as u16);
            let mut e = q - 2;
            while e > 0 {
                if e & 1 == 1 {
                    acc = fd.mul(acc, base);
                }
                base = fd.mul(base, base);
                e >>= 1;
            }
            fd.inv[a] = acc.0;
        }
        for a in 1..q {
            if fd.mul(FqElem(a as u16), FqElem(fd.inv[a])).0 != 1 {
                return Err(Error::InternalCheck("inverse table".to_string()));
            }
        }
        Ok(fd)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Modulus digits, little endian, length r + 1 (x for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FqElem {
        FqElem(0)
    }

    pub fn one(&self) -> FqElem {
        FqElem(1)
    }

    pub fn elem(&self, index: u16) -> Result<FqElem> {
        if (index as usize) < self.q {
            Ok(FqElem(index))
        } else {
            Err(Error::FieldUnsupported("element index out of range".to_string()))
        }
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, n: i64) -> FqElem {
        let p = self.p as i64;
        let m = ((n % p) + p) % p;
        FqElem(m as u16)
    }

    /// Builds an element from base-p digits (little endian, length <= r).
    pub fn from_digits(&self, digits: &[u32]) -> Result<FqElem> {
        if digits.len() > self.r {
            return Err(Error::FieldUnsupported("too many digits".to_string()));
        }
        if digits.iter().any(|&d| d >= self.p) {
            return Err(Error::FieldUnsupported("digit out of range".to_string()));
        }
        let mut idx = 0usize;
        for &d in digits.iter().rev() {
            idx = idx * self.p as usize + d as usize;
        }
        Ok(FqElem(idx as u16))
    }

    /// Base-p digits of an element, little endian, length r.
    pub fn digits(&self, a: FqElem) -> Vec<u32> {
        let mut idx = a.0 as usize;
        let mut d = Vec::with_capacity(self.r);
        for _ in 0..self.r {
            d.push((idx % self.p as usize) as u32);
            idx /= self.p as usize;
        }
        d
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.add[a.0 as usize * self.q + b.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        FqElem(self.mul[a.0 as usize * self.q + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        FqElem(self.neg[a.0 as usize])
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(FqElem(self.inv[a.0 as usize]))
        }
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FqElem, e: i64) -> Result<FqElem> {
        if e < 0 {
            let inv = self.inv(a)?;
            return self.pow(inv, -e);
        }
        let mut acc = self.one();
        let mut base = a;
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// All field elements, zero first.
    pub fn iter_elems(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q as u16).map(FqElem)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f3_matches_integer_arithmetic() {
        let fd = FieldDesc::new(3, 1, None).unwrap();
        for a in 0..3i64 {
            for b in 0..3i64 {
                assert_eq!(fd.add(fd.from_int(a), fd.from_int(b)), fd.from_int(a + b));
                assert_eq!(fd.mul(fd.from_int(a), fd.from_int(b)), fd.from_int(a * b));
            }
            assert_eq!(fd.neg(fd.from_int(a)), fd.from_int(-a));
        }
        assert_eq!(fd.inv(fd.from_int(2)).unwrap(), fd.from_int(2));
        assert!(fd.inv(fd.zero()).is_err());
    }

    #[test]
    fn f4_generator_relations() {
        // F_4 = F_2[x]/(x^2 + x + 1); the generator g satisfies g^2 = g + 1.
        let fd = FieldDesc::new(2, 2, None).unwrap();
        let g = fd.from_digits(&[0, 1]).unwrap();
        let g2 = fd.mul(g, g);
        assert_eq!(g2, fd.add(g, fd.one()));
        assert_eq!(fd.mul(g2, g), fd.one());
        assert_eq!(fd.inv(g).unwrap(), g2);
        // Frobenius x -> x^2 is the nontrivial automorphism.
        assert_eq!(fd.pow(g, 4).unwrap(), g);
    }

    #[test]
    fn f9_field_axioms() {
        let fd = FieldDesc::new(3, 2, None).unwrap();
        assert_eq!(fd.q(), 9);
        for a in fd.iter_elems() {
            for b in fd.iter_elems() {
                assert_eq!(fd.add(a, b), fd.add(b, a));
                assert_eq!(fd.mul(a, b), fd.mul(b, a));
                for c in fd.iter_elems() {
                    assert_eq!(fd.add(fd.add(a, b), c), fd.add(a, fd.add(b, c)));
                    assert_eq!(fd.mul(fd.mul(a, b), c), fd.mul(a, fd.mul(b, c)));
                    assert_eq!(
                        fd.mul(a, fd.add(b, c)),
                        fd.add(fd.mul(a, b), fd.mul(a, c))
                    );
                }
            }
            if !a.is_zero() {
                assert_eq!(fd.mul(a, fd.inv(a).unwrap()), fd.one());
                // Multiplicative order divides q - 1.
                assert_eq!(fd.pow(a, 8).unwrap(), fd.one());
            }
        }
    }

    #[test]
    fn f8_default_modulus() {
        let fd = FieldDesc::new(2, 3, None).unwrap();
        assert_eq!(fd.q(), 8);
        let g = fd.from_digits(&[0, 1, 0]).unwrap();
        // g^3 = g + 1 under x^3 + x + 1.
        assert_eq!(fd.pow(g, 3).unwrap(), fd.add(g, fd.one()));
        for a in fd.iter_elems() {
            assert_eq!(fd.pow(a, 8).unwrap(), a);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FieldDesc::new(4, 1, None).is_err());
        assert!(FieldDesc::new(2, 9, None).is_err());
        assert!(FieldDesc::new(3, 6, None).is_err());
        // x^2 + 1 is reducible over F_2.
        assert!(FieldDesc::new(2, 2, Some(&[1, 0, 1])).is_err());
        // Non-monic.
        assert!(FieldDesc::new(3, 2, Some(&[1, 0, 2])).is_err());
        // Prime field with explicit modulus.
        assert!(FieldDesc::new(3, 1, Some(&[0, 1])).is_err());
        // q = 16 needs an explicit modulus and x^4 + x + 1 works.
        assert!(FieldDesc::new(2, 4, None).is_err());
        let f16 = FieldDesc::new(2, 4, Some(&[1, 1, 0, 0, 1])).unwrap();
        assert_eq!(f16.q(), 16);
        for a in f16.iter_elems() {
            assert_eq!(f16.pow(a, 16).unwrap(), a);
        }
    }

    #[test]
    fn digits_round_trip() {
        let fd = FieldDesc::new(3, 2, None).unwrap();
        for a in fd.iter_elems() {
            let d = fd.digits(a);
            assert_eq!(fd.from_digits(&d).unwrap(), a);
        }
    }
}
