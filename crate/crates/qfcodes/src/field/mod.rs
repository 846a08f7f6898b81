//! Exact arithmetic in `F_q` for `q = p^e` with `p` an odd prime.
//!
//! Elements are integer encodings `0..q`: the coefficient vector of an
//! element in the polynomial basis over `F_p`, read as base-`p` digits with
//! the constant term least significant. All orderings in the crate
//! ("smallest element", sorted defining sets, enumerator indices) refer to
//! this encoding. Multiplication runs on exp/log tables built once per
//! context; contexts are immutable afterwards and safe to share across
//! threads.

mod ext;
pub(crate) mod poly;

pub use ext::{ExtContext, ExtElement};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use poly::{CoeffField, ModP};

/// Default upper bound on `q` for [`FieldContext::new`].
pub const DEFAULT_FIELD_BOUND: u32 = 4096;
/// Default upper bound on `q^m` for [`ExtContext::new`].
pub const DEFAULT_EXT_BOUND: u64 = 1 << 24;

/// Addition tables are only materialized for fields up to this size;
/// larger fields fall back to digit-wise addition.
const ADD_TABLE_MAX_Q: u32 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("p = {0} must be an odd prime")]
    InvalidPrime(u64),
    #[error("extension degree must be >= 1, got {0}")]
    InvalidDegree(u64),
    #[error("field of size {requested} exceeds the configured bound {limit}")]
    SizeLimit { requested: u128, limit: u128 },
    #[error("the given elements do not form a basis")]
    SingularBasis,
    #[error("element {0} is not a nonzero square")]
    NotASquare(u64),
}

/// An element of `F_q`, stored as its integer encoding.
///
/// Encodings are only meaningful relative to the [`FieldContext`] that
/// produced them; `ZERO` and `ONE` are valid in every context.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn encoding(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arithmetic tables and canonical element order for `F_q`.
#[derive(Clone)]
pub struct FieldContext {
    p: u32,
    e: u32,
    q: u32,
    /// Monic irreducible modulus over `F_p`, length `e + 1`; `[0, 1]` when
    /// `e == 1`.
    modulus: Vec<u32>,
    generator: FieldElement,
    nonsquare: FieldElement,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u16>>,
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldContext {}

impl std::fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldContext")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl FieldContext {
    /// Build `F_{p^e}` with the default size bound.
    ///
    /// Deterministic for fixed `(p, e)`: the modulus is the monic
    /// irreducible of degree `e` with the smallest coefficient encoding and
    /// the generator is the smallest primitive element in encoding order.
    pub fn new(p: u32, e: u32) -> Result<FieldContext, FieldError> {
        Self::new_bounded(p, e, DEFAULT_FIELD_BOUND)
    }

    pub fn new_bounded(p: u32, e: u32, max_q: u32) -> Result<FieldContext, FieldError> {
        if p < 3 || p.is_multiple_of(2) || !poly::is_prime(p as u64) {
            return Err(FieldError::InvalidPrime(p as u64));
        }
        if e < 1 {
            return Err(FieldError::InvalidDegree(e as u64));
        }
        let q128 = (p as u128).checked_pow(e).ok_or(FieldError::SizeLimit {
            requested: u128::MAX,
            limit: max_q as u128,
        })?;
        if q128 > max_q as u128 {
            return Err(FieldError::SizeLimit {
                requested: q128,
                limit: max_q as u128,
            });
        }
        let q = q128 as u32;
        let arith = ModP { p };

        let modulus: Vec<u32> = if e == 1 {
            vec![0, 1]
        } else {
            poly::find_smallest_irreducible(&arith, e as usize)
        };

        let decode = |enc: u32| -> Vec<u32> {
            let mut digits = Vec::with_capacity(e as usize);
            let mut rem = enc;
            for _ in 0..e {
                digits.push(rem % p);
                rem /= p;
            }
            digits
        };
        let encode = |digits: &[u32]| -> u32 {
            let mut enc = 0u32;
            for &d in digits.iter().rev() {
                enc = enc * p + d;
            }
            enc
        };

        // Smallest primitive element: order exactly q - 1.
        let factors = poly::prime_factors(q as u64 - 1);
        let one = vec![1u32];
        let mut generator = None;
        for cand in 2..q {
            let coeffs = decode(cand);
            let primitive = factors.iter().all(|&l| {
                let mut pw = poly::poly_powmod(&arith, &coeffs, (q as u64 - 1) / l, &modulus);
                while pw.last() == Some(&0) {
                    pw.pop();
                }
                pw != one
            });
            if primitive {
                generator = Some(cand);
                break;
            }
        }
        let generator = generator.expect("F_q* is cyclic");

        let gen_coeffs = decode(generator);
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![1u32];
        #[allow(clippy::needless_range_loop)]
        for i in 0..(q - 1) as usize {
            let mut padded = cur.clone();
            padded.resize(e as usize, 0);
            let enc = encode(&padded);
            exp[i] = enc;
            log[enc as usize] = i as u32;
            cur = poly::poly_mulmod(&arith, &cur, &gen_coeffs, &modulus);
        }

        let mut neg = vec![0u32; q as usize];
        for enc in 0..q {
            let digits: Vec<u32> = decode(enc).iter().map(|&d| (p - d) % p).collect();
            neg[enc as usize] = encode(&digits);
        }

        let add = if q <= ADD_TABLE_MAX_Q {
            let mut table = vec![0u16; (q as usize) * (q as usize)];
            for a in 0..q {
                let da = decode(a);
                for b in 0..=a {
                    let digits: Vec<u32> = da
                        .iter()
                        .zip(decode(b).iter())
                        .map(|(&x, &y)| (x + y) % p)
                        .collect();
                    let s = encode(&digits) as u16;
                    table[(a * q + b) as usize] = s;
                    table[(b * q + a) as usize] = s;
                }
            }
            Some(table)
        } else {
            None
        };

        let mut ctx = FieldContext {
            p,
            e,
            q,
            modulus,
            generator: FieldElement(generator),
            nonsquare: FieldElement(0),
            exp,
            log,
            neg,
            add,
        };
        // Smallest element in encoding order with eta = -1.
        let ns = (1..q)
            .map(FieldElement)
            .find(|&x| ctx.eta(x) == -1)
            .expect("half of F_q* is nonsquare");
        ctx.nonsquare = ns;
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients over `F_p`, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    /// The fixed nonsquare: smallest element in encoding order with
    /// `eta = -1`.
    pub fn fixed_nonsquare(&self) -> FieldElement {
        self.nonsquare
    }

    pub fn element(&self, enc: u32) -> FieldElement {
        assert!(
            enc < self.q,
            "encoding {} out of range for q = {}",
            enc,
            self.q
        );
        FieldElement(enc)
    }

    /// The prime-subfield element congruent to `n`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let p = self.p as i64;
        FieldElement(n.rem_euclid(p) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if let Some(table) = &self.add {
            FieldElement(table[(a.0 * self.q + b.0) as usize] as u32)
        } else {
            let p = self.p;
            let mut enc = 0u32;
            let mut x = a.0;
            let mut y = b.0;
            let mut mult = 1u32;
            for _ in 0..self.e {
                enc += ((x % p) + (y % p)) % p * mult;
                x /= p;
                y /= p;
                mult *= p;
            }
            FieldElement(enc)
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let mut s = la + lb;
        if s >= self.q - 1 {
            s -= self.q - 1;
        }
        FieldElement(self.exp[s as usize])
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        assert!(a.0 != 0, "inverse of zero");
        let l = self.log[a.0 as usize];
        if l == 0 {
            return FieldElement::ONE;
        }
        FieldElement(self.exp[(self.q - 1 - l) as usize])
    }

    #[inline]
    pub fn div(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: FieldElement, n: u64) -> FieldElement {
        if a.0 == 0 {
            return if n == 0 {
                FieldElement::ONE
            } else {
                FieldElement::ZERO
            };
        }
        let ord = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        let k = (l * (n % ord)) % ord;
        FieldElement(self.exp[k as usize])
    }

    /// Quadratic character: `+1` on nonzero squares, `-1` on nonsquares,
    /// `0` at zero.
    #[inline]
    pub fn eta(&self, a: FieldElement) -> i32 {
        if a.0 == 0 {
            0
        } else if self.log[a.0 as usize].is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `q - 1` at zero and `-1` elsewhere.
    #[inline]
    pub fn i_func(&self, a: FieldElement) -> i64 {
        if a.0 == 0 {
            self.q as i64 - 1
        } else {
            -1
        }
    }

    /// Square root of a nonzero square; of the two roots, the one with the
    /// smaller encoding.
    pub fn sqrt(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if self.eta(a) != 1 {
            return Err(FieldError::NotASquare(a.0 as u64));
        }
        let k = self.log[a.0 as usize];
        let r1 = FieldElement(self.exp[(k / 2) as usize]);
        let r2 = self.neg(r1);
        Ok(if r1.0 <= r2.0 { r1 } else { r2 })
    }

    /// Coefficient vector of `a` over `F_p`, constant term first.
    pub fn digits(&self, a: FieldElement) -> Vec<u32> {
        let mut digits = Vec::with_capacity(self.e as usize);
        let mut rem = a.0;
        for _ in 0..self.e {
            digits.push(rem % self.p);
            rem /= self.p;
        }
        digits
    }

    /// Dot product of two coordinate vectors.
    pub fn dot(&self, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        debug_assert_eq!(x.len(), y.len());
        let mut acc = FieldElement::ZERO;
        for (&a, &b) in x.iter().zip(y.iter()) {
            acc = self.add(acc, self.mul(a, b));
        }
        acc
    }
}

impl CoeffField for FieldContext {
    type El = FieldElement;

    fn size(&self) -> u64 {
        self.q as u64
    }
    fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }
    fn one(&self) -> FieldElement {
        FieldElement::ONE
    }
    fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldContext::add(self, a, b)
    }
    fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldContext::sub(self, a, b)
    }
    fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldContext::mul(self, a, b)
    }
    fn inv(&self, a: FieldElement) -> FieldElement {
        FieldContext::inv(self, a)
    }
    fn decode(&self, v: u64) -> FieldElement {
        FieldElement(v as u32)
    }
}
