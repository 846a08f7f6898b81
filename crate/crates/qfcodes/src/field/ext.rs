//! The degree-`m` extension `F_{q^m}` as a tower over `F_q`.
//!
//! Elements are length-`m` coordinate vectors over `F_q` in the polynomial
//! basis `1, y, ..., y^(m-1)`, encoded base-`q`. The trace to `F_q` and the
//! Frobenius `x -> x^q` are `F_q`-linear, so both are stored as their action
//! on basis monomials rather than as full `q^m`-sized tables.

use super::poly;
use super::{FieldContext, FieldElement, FieldError, DEFAULT_EXT_BOUND};
use crate::matrix::Matrix;

/// An element of `F_{q^m}`, stored as its integer encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExtElement(pub(crate) u64);

impl ExtElement {
    pub const ZERO: ExtElement = ExtElement(0);
    pub const ONE: ExtElement = ExtElement(1);

    pub fn encoding(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Arithmetic context for `F_{q^m}` over a base [`FieldContext`].
#[derive(Clone, Debug)]
pub struct ExtContext {
    base: FieldContext,
    m: usize,
    size: u64,
    /// Monic irreducible modulus over `F_q`, length `m + 1`.
    modulus: Vec<FieldElement>,
    /// Coordinates of `(y^i)^q` for `i = 0..m`.
    frob: Vec<Vec<FieldElement>>,
    /// Trace of `y^i` for `i = 0..m`.
    trace_mon: Vec<FieldElement>,
}

impl ExtContext {
    pub fn new(base: &FieldContext, m: usize) -> Result<ExtContext, FieldError> {
        Self::new_bounded(base, m, DEFAULT_EXT_BOUND)
    }

    pub fn new_bounded(
        base: &FieldContext,
        m: usize,
        max_size: u64,
    ) -> Result<ExtContext, FieldError> {
        if m < 1 {
            return Err(FieldError::InvalidDegree(m as u64));
        }
        let size128 = (base.q() as u128).pow(m as u32);
        if size128 > max_size as u128 {
            return Err(FieldError::SizeLimit {
                requested: size128,
                limit: max_size as u128,
            });
        }
        let size = size128 as u64;
        let modulus = poly::find_smallest_irreducible(base, m);

        let q = base.q() as u64;
        let y = vec![FieldElement::ZERO, FieldElement::ONE];
        let pad = |mut v: Vec<FieldElement>| -> Vec<FieldElement> {
            v.resize(m, FieldElement::ZERO);
            v
        };
        // (y^i)^q = y^(i*q) mod modulus; Frobenius is F_q-linear, so these
        // rows determine it everywhere.
        let frob: Vec<Vec<FieldElement>> = (0..m)
            .map(|i| pad(poly::poly_powmod(base, &y, i as u64 * q, &modulus)))
            .collect();

        let mut ctx = ExtContext {
            base: base.clone(),
            m,
            size,
            modulus,
            frob,
            trace_mon: Vec::new(),
        };
        let mut trace_mon = Vec::with_capacity(m);
        for i in 0..m {
            let mut mon = vec![FieldElement::ZERO; m];
            mon[i] = FieldElement::ONE;
            let mut acc = mon.clone();
            let mut cur = mon;
            for _ in 1..m {
                cur = ctx.frobenius_coords(&cur);
                for (a, &c) in acc.iter_mut().zip(cur.iter()) {
                    *a = base.add(*a, c);
                }
            }
            debug_assert!(
                acc[1..].iter().all(|v| v.is_zero()),
                "trace of a basis monomial must land in F_q"
            );
            trace_mon.push(acc[0]);
        }
        ctx.trace_mon = trace_mon;
        Ok(ctx)
    }

    pub fn base(&self) -> &FieldContext {
        &self.base
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `q^m`.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &[FieldElement] {
        &self.modulus
    }

    pub fn element(&self, enc: u64) -> ExtElement {
        assert!(enc < self.size, "encoding {} out of range", enc);
        ExtElement(enc)
    }

    pub fn elements(&self) -> impl Iterator<Item = ExtElement> {
        (0..self.size).map(ExtElement)
    }

    /// Coordinates in the polynomial basis, constant term first.
    pub fn coords(&self, x: ExtElement) -> Vec<FieldElement> {
        let q = self.base.q() as u64;
        let mut out = Vec::with_capacity(self.m);
        let mut rem = x.0;
        for _ in 0..self.m {
            out.push(FieldElement((rem % q) as u32));
            rem /= q;
        }
        out
    }

    pub fn from_coords(&self, coords: &[FieldElement]) -> ExtElement {
        assert_eq!(coords.len(), self.m);
        let q = self.base.q() as u64;
        let mut enc = 0u64;
        for &c in coords.iter().rev() {
            enc = enc * q + c.0 as u64;
        }
        ExtElement(enc)
    }

    /// Embed a base-field element as a constant.
    pub fn from_base(&self, c: FieldElement) -> ExtElement {
        ExtElement(c.0 as u64)
    }

    pub fn add(&self, x: ExtElement, y: ExtElement) -> ExtElement {
        let a = self.coords(x);
        let b = self.coords(y);
        let sum: Vec<FieldElement> = a
            .iter()
            .zip(b.iter())
            .map(|(&u, &v)| self.base.add(u, v))
            .collect();
        self.from_coords(&sum)
    }

    pub fn neg(&self, x: ExtElement) -> ExtElement {
        let coords: Vec<FieldElement> = self.coords(x).iter().map(|&c| self.base.neg(c)).collect();
        self.from_coords(&coords)
    }

    pub fn sub(&self, x: ExtElement, y: ExtElement) -> ExtElement {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: ExtElement, y: ExtElement) -> ExtElement {
        let prod = poly::poly_mulmod(&self.base, &self.coords(x), &self.coords(y), &self.modulus);
        let mut padded = prod;
        padded.resize(self.m, FieldElement::ZERO);
        self.from_coords(&padded)
    }

    pub fn pow(&self, x: ExtElement, mut n: u64) -> ExtElement {
        let mut acc = ExtElement::ONE;
        let mut cur = x;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, cur);
            }
            cur = self.mul(cur, cur);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: ExtElement) -> ExtElement {
        assert!(!x.is_zero(), "inverse of zero");
        self.pow(x, self.size - 2)
    }

    fn frobenius_coords(&self, coords: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::ZERO; self.m];
        for (i, &c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &f) in out.iter_mut().zip(self.frob[i].iter()) {
                *o = self.base.add(*o, self.base.mul(c, f));
            }
        }
        out
    }

    /// `x -> x^q`.
    pub fn frobenius(&self, x: ExtElement) -> ExtElement {
        let out = self.frobenius_coords(&self.coords(x));
        self.from_coords(&out)
    }

    /// Trace to the base field: the sum of `x^(q^i)` for `i = 0..m`.
    pub fn trace(&self, x: ExtElement) -> FieldElement {
        let coords = self.coords(x);
        let mut acc = FieldElement::ZERO;
        for (c, &t) in coords.iter().zip(self.trace_mon.iter()) {
            acc = self.base.add(acc, self.base.mul(*c, t));
        }
        acc
    }

    /// The dual basis `{alpha_i}` of `basis`, satisfying
    /// `trace(alpha_i * basis_j) = delta_ij`.
    pub fn dual_basis(&self, basis: &[ExtElement]) -> Result<Vec<ExtElement>, FieldError> {
        if basis.len() != self.m {
            return Err(FieldError::SingularBasis);
        }
        // T[j][k] = trace(y^k * basis_j); alpha_i = sum_k A[i][k] y^k with
        // A = (T^t)^{-1} gives trace(alpha_i basis_j) = (A T^t)[i][j].
        let mut t = Matrix::zero(self.m, self.m);
        for (j, &b) in basis.iter().enumerate() {
            for k in 0..self.m {
                let mut mon = vec![FieldElement::ZERO; self.m];
                mon[k] = FieldElement::ONE;
                let prod = self.mul(self.from_coords(&mon), b);
                t.set(j, k, self.trace(prod));
            }
        }
        let a = t
            .transpose()
            .inverse(&self.base)
            .ok_or(FieldError::SingularBasis)?;
        Ok((0..self.m).map(|i| self.from_coords(a.row(i))).collect())
    }

    /// The polynomial basis `1, y, ..., y^(m-1)`.
    pub fn polynomial_basis(&self) -> Vec<ExtElement> {
        (0..self.m)
            .map(|i| {
                let mut mon = vec![FieldElement::ZERO; self.m];
                mon[i] = FieldElement::ONE;
                self.from_coords(&mon)
            })
            .collect()
    }
}
