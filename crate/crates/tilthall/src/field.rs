//! Exact arithmetic in F_q with q = p^e.
//!
//! Elements are encoded as integers in 0..q. For e = 1 the encoding is the
//! residue itself; for e > 1 an element sum c_i x^i is encoded in base p as
//! sum c_i p^i, reduced modulo a deterministic irreducible polynomial (the
//! lexicographically smallest one of degree e).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Default cap on the number of field elements.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 20;

/// Size threshold below which full multiplication/inverse tables are built.
const TABLE_LIMIT: u64 = 256;

pub type Elt = u32;

#[derive(Clone, Serialize, Deserialize)]
pub struct Field {
    pub p: u64,
    pub e: u32,
    pub q: u64,
    /// Coefficients of the monic reduction polynomial, degree e, lowest first.
    /// Length e + 1 with leading coefficient 1; empty convention not used:
    /// for e = 1 this is [0, 1] (x), which is never consulted.
    pub reduction: Vec<u64>,
    #[serde(skip)]
    mul_table: Option<Vec<Elt>>,
    #[serde(skip)]
    inv_table: Option<Vec<Elt>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{} (red {:?})", self.p, self.e, self.reduction)
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.reduction == other.reduction
    }
}
impl Eq for Field {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomials over F_p, dense, lowest coefficient first, no trailing zeros.
fn poly_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn poly_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(out)
}

/// Remainder of a modulo the monic polynomial m.
fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r[r.len() - 1] % p;
        if lead != 0 {
            let shift = r.len() - 1 - dm;
            for i in 0..m.len() {
                let sub = (lead * m[i]) % p;
                let idx = shift + i;
                r[idx] = (r[idx] + p * p - sub) % p;
            }
        }
        r.pop();
        r = poly_trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Irreducibility by trial division against all monic polynomials of degree
/// 1..=deg/2. Fine at the supported field sizes.
fn poly_irreducible(p: u64, m: &[u64]) -> bool {
    let deg = m.len() - 1;
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for k in 0..count {
            // monic divisor candidate of degree d with low coefficients from k
            let mut cand = Vec::with_capacity(d + 1);
            let mut kk = k;
            for _ in 0..d {
                cand.push(kk % p);
                kk /= p;
            }
            cand.push(1);
            if poly_rem(p, m, &cand).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds F_{p^e}. For e > 1 the reduction polynomial is the monic
    /// irreducible of degree e whose low-coefficient vector is smallest in
    /// base-p integer order.
    pub fn make(p: u64, e: u32) -> Result<Arc<Field>> {
        Self::make_capped(p, e, DEFAULT_FIELD_CAP)
    }

    pub fn make_capped(p: u64, e: u32, cap: u64) -> Result<Arc<Field>> {
        if e < 1 {
            return Err(Error::Parse("field exponent must be >= 1".into()));
        }
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        let q128 = (p as u128).pow(e);
        if q128 > cap as u128 {
            return Err(Error::UnsupportedSize(q128, cap));
        }
        let q = q128 as u64;
        let reduction = if e == 1 {
            vec![0, 1]
        } else {
            let mut found = None;
            for k in 0..q {
                let mut cand = Vec::with_capacity(e as usize + 1);
                let mut kk = k;
                for _ in 0..e {
                    cand.push(kk % p);
                    kk /= p;
                }
                cand.push(1);
                if poly_irreducible(p, &cand) {
                    found = Some(cand);
                    break;
                }
            }
            found.ok_or_else(|| Error::Internal("no irreducible polynomial found".into()))?
        };
        let mut field = Field {
            p,
            e,
            q,
            reduction,
            mul_table: None,
            inv_table: None,
        };
        if q <= TABLE_LIMIT {
            field.build_tables();
        }
        Ok(Arc::new(field))
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let mut mul = vec![0 as Elt; q * q];
        for a in 0..q as u64 {
            for b in a..q as u64 {
                let v = self.mul_slow(a as Elt, b as Elt);
                mul[a as usize * q + b as usize] = v;
                mul[b as usize * q + a as usize] = v;
            }
        }
        let mut inv = vec![0 as Elt; q];
        for a in 1..q {
            for b in 1..q {
                if mul[a * q + b] == 1 {
                    inv[a] = b as Elt;
                    break;
                }
            }
        }
        self.mul_table = Some(mul);
        self.inv_table = Some(inv);
    }

    pub fn zero(&self) -> Elt {
        0
    }
    pub fn one(&self) -> Elt {
        1
    }

    fn decode(&self, a: Elt) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.e as usize);
        let mut a = a as u64;
        for _ in 0..self.e {
            v.push(a % self.p);
            a /= self.p;
        }
        v
    }

    fn encode(&self, coeffs: &[u64]) -> Elt {
        let mut acc = 0u64;
        for &c in coeffs.iter().rev() {
            acc = acc * self.p + (c % self.p);
        }
        acc as Elt
    }

    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        if self.e == 1 {
            (((a as u64) + (b as u64)) % self.p) as Elt
        } else {
            let (va, vb) = (self.decode(a), self.decode(b));
            let sum: Vec<u64> = va
                .iter()
                .zip(vb.iter())
                .map(|(x, y)| (x + y) % self.p)
                .collect();
            self.encode(&sum)
        }
    }

    pub fn neg(&self, a: Elt) -> Elt {
        if self.e == 1 {
            ((self.p - a as u64) % self.p) as Elt
        } else {
            let va = self.decode(a);
            let nv: Vec<u64> = va.iter().map(|x| (self.p - x) % self.p).collect();
            self.encode(&nv)
        }
    }

    pub fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg(b))
    }

    fn mul_slow(&self, a: Elt, b: Elt) -> Elt {
        if self.e == 1 {
            (((a as u64) * (b as u64)) % self.p) as Elt
        } else {
            let prod = poly_mul(self.p, &self.decode(a), &self.decode(b));
            let rem = poly_rem(self.p, &prod, &self.reduction);
            let mut padded = rem;
            padded.resize(self.e as usize, 0);
            self.encode(&padded)
        }
    }

    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        match &self.mul_table {
            Some(t) => t[a as usize * self.q as usize + b as usize],
            None => self.mul_slow(a, b),
        }
    }

    pub fn inv(&self, a: Elt) -> Elt {
        debug_assert!(a != 0, "inverse of zero");
        if let Some(t) = &self.inv_table {
            return t[a as usize];
        }
        // a^(q-2)
        self.pow(a, self.q - 2)
    }

    pub fn pow(&self, a: Elt, mut n: u64) -> Elt {
        let mut base = a;
        let mut acc = 1 as Elt;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn is_valid(&self, a: Elt) -> bool {
        (a as u64) < self.q
    }

    /// Serialized form per the file-format contract: an integer for e = 1,
    /// a length-e coefficient array otherwise.
    pub fn elt_to_json(&self, a: Elt) -> serde_json::Value {
        if self.e == 1 {
            serde_json::Value::from(a)
        } else {
            serde_json::Value::from(self.decode(a))
        }
    }

    pub fn elt_from_json(&self, v: &serde_json::Value) -> Result<Elt> {
        if self.e == 1 {
            let n = v
                .as_u64()
                .ok_or_else(|| Error::Parse(format!("expected integer field element, got {v}")))?;
            if n >= self.p {
                return Err(Error::Parse(format!("field element {n} out of range")));
            }
            Ok(n as Elt)
        } else {
            let arr = v
                .as_array()
                .ok_or_else(|| Error::Parse(format!("expected coefficient array, got {v}")))?;
            if arr.len() != self.e as usize {
                return Err(Error::Parse(format!(
                    "coefficient array length {} != {}",
                    arr.len(),
                    self.e
                )));
            }
            let mut coeffs = Vec::with_capacity(arr.len());
            for c in arr {
                let n = c
                    .as_u64()
                    .ok_or_else(|| Error::Parse(format!("bad coefficient {c}")))?;
                if n >= self.p {
                    return Err(Error::Parse(format!("coefficient {n} out of range")));
                }
                coeffs.push(n);
            }
            Ok(self.encode(&coeffs))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields() {
        let f2 = Field::make(2, 1).unwrap();
        assert_eq!(f2.q, 2);
        let f3 = Field::make(3, 1).unwrap();
        assert_eq!(f3.q, 3);
        assert_eq!(f3.add(2, 2), 1);
        assert_eq!(f3.mul(2, 2), 1);
        assert_eq!(f3.inv(2), 2);
    }

    #[test]
    fn f4_reduction_is_x2_x_1() {
        // the only irreducible degree-2 polynomial over F_2
        let f4 = Field::make(2, 2).unwrap();
        assert_eq!(f4.q, 4);
        assert_eq!(f4.reduction, vec![1, 1, 1]);
    }

    #[test]
    fn rejects_nonprime_and_oversize() {
        assert!(matches!(Field::make(4, 1), Err(Error::NonPrime(4))));
        assert!(matches!(
            Field::make(2, 21),
            Err(Error::UnsupportedSize(_, _))
        ));
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        // associativity, commutativity, distributivity, inverses for q <= 16
        for (p, e) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (13, 1), (2, 4)] {
            let f = Field::make(p, e).unwrap();
            let q = f.q as Elt;
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.add(a, b), f.add(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
            }
        }
    }

    #[test]
    fn element_serialization_roundtrip() {
        let f9 = Field::make(3, 2).unwrap();
        for a in 0..9 {
            let j = f9.elt_to_json(a);
            assert_eq!(f9.elt_from_json(&j).unwrap(), a);
        }
        let f5 = Field::make(5, 1).unwrap();
        assert_eq!(f5.elt_to_json(3), serde_json::json!(3));
    }
}
