//! Polynomial arithmetic over an abstract coefficient field.
//!
//! The same routines build `F_{p^e}` from `F_p` (coefficients are integers
//! mod `p`) and `F_{q^m}` from `F_q` (coefficients are table-backed field
//! elements), so they are written against the small [`CoeffField`] trait.
//! Polynomials are little-endian coefficient vectors; moduli are monic.

/// The coefficient operations the polynomial layer needs.
pub(crate) trait CoeffField {
    type El: Copy + PartialEq + std::fmt::Debug;

    fn size(&self) -> u64;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn add(&self, a: Self::El, b: Self::El) -> Self::El;
    fn sub(&self, a: Self::El, b: Self::El) -> Self::El;
    fn mul(&self, a: Self::El, b: Self::El) -> Self::El;
    fn inv(&self, a: Self::El) -> Self::El;
    fn decode(&self, v: u64) -> Self::El;

    fn is_zero(&self, a: Self::El) -> bool {
        a == self.zero()
    }
}

/// Integers mod an odd prime, used while bootstrapping the base field.
pub(crate) struct ModP {
    pub p: u32,
}

impl CoeffField for ModP {
    type El = u32;

    fn size(&self) -> u64 {
        self.p as u64
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }
    fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        // p is tiny; Fermat via modpow is plenty.
        modpow(a as u64, self.p as u64 - 2, self.p as u64) as u32
    }
    fn decode(&self, v: u64) -> u32 {
        v as u32
    }
}

pub(crate) fn modpow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn trim<F: CoeffField>(f: &F, poly: &mut Vec<F::El>) {
    while let Some(&last) = poly.last() {
        if f.is_zero(last) {
            poly.pop();
        } else {
            break;
        }
    }
}

fn degree<F: CoeffField>(_f: &F, poly: &[F::El]) -> Option<usize> {
    if poly.is_empty() {
        None
    } else {
        Some(poly.len() - 1)
    }
}

pub(crate) fn poly_mul<F: CoeffField>(f: &F, a: &[F::El], b: &[F::El]) -> Vec<F::El> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if f.is_zero(ai) {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(ai, bj));
        }
    }
    trim(f, &mut out);
    out
}

/// Remainder of `a` modulo a monic `modulus`.
pub(crate) fn poly_rem<F: CoeffField>(f: &F, a: &[F::El], modulus: &[F::El]) -> Vec<F::El> {
    let d = modulus.len() - 1;
    debug_assert!(modulus[d] == f.one(), "modulus must be monic");
    if d == 0 {
        return Vec::new();
    }
    let mut r: Vec<F::El> = a.to_vec();
    trim(f, &mut r);
    while r.len() > d {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - d;
        if !f.is_zero(lead) {
            for k in 0..=d {
                let t = f.mul(lead, modulus[k]);
                r[shift + k] = f.sub(r[shift + k], t);
            }
        }
        r.pop();
        trim(f, &mut r);
    }
    r
}

pub(crate) fn poly_mulmod<F: CoeffField>(
    f: &F,
    a: &[F::El],
    b: &[F::El],
    modulus: &[F::El],
) -> Vec<F::El> {
    poly_rem(f, &poly_mul(f, a, b), modulus)
}

pub(crate) fn poly_powmod<F: CoeffField>(
    f: &F,
    base: &[F::El],
    mut exp: u64,
    modulus: &[F::El],
) -> Vec<F::El> {
    let mut acc = vec![f.one()];
    let mut cur = poly_rem(f, base, modulus);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = poly_mulmod(f, &acc, &cur, modulus);
        }
        cur = poly_mulmod(f, &cur, &cur, modulus);
        exp >>= 1;
    }
    acc
}

fn make_monic<F: CoeffField>(f: &F, poly: &mut [F::El]) {
    if let Some(&lead) = poly.last() {
        if lead != f.one() {
            let s = f.inv(lead);
            for c in poly.iter_mut() {
                *c = f.mul(*c, s);
            }
        }
    }
}

pub(crate) fn poly_gcd<F: CoeffField>(f: &F, a: &[F::El], b: &[F::El]) -> Vec<F::El> {
    let mut x: Vec<F::El> = a.to_vec();
    let mut y: Vec<F::El> = b.to_vec();
    trim(f, &mut x);
    trim(f, &mut y);
    while !y.is_empty() {
        let mut m = y.clone();
        make_monic(f, &mut m);
        let r = poly_rem(f, &x, &m);
        x = y;
        y = r;
    }
    make_monic(f, &mut x);
    x
}

/// Irreducibility of a monic polynomial of degree `d >= 1` over a field of
/// size `s`: `x^(s^d) = x (mod f)` and `gcd(x^(s^(d/l)) - x, f) = 1` for
/// every prime `l | d`.
pub(crate) fn is_irreducible<F: CoeffField>(f: &F, poly: &[F::El]) -> bool {
    let d = poly.len() - 1;
    if d == 1 {
        return true;
    }
    let s = f.size();
    let x = vec![f.zero(), f.one()];
    // x^(s^k) mod poly, by iterating t -> t^s.
    let frob_iter = |k: usize| -> Vec<F::El> {
        let mut t = x.clone();
        for _ in 0..k {
            t = poly_powmod(f, &t, s, poly);
        }
        t
    };
    let xqd = frob_iter(d);
    let mut diff = xqd;
    // diff -= x
    while diff.len() < 2 {
        diff.push(f.zero());
    }
    diff[1] = f.sub(diff[1], f.one());
    trim(f, &mut diff);
    if !diff.is_empty() {
        return false;
    }
    for l in prime_factors(d as u64) {
        let k = d / l as usize;
        let mut t = frob_iter(k);
        while t.len() < 2 {
            t.push(f.zero());
        }
        t[1] = f.sub(t[1], f.one());
        trim(f, &mut t);
        let g = poly_gcd(f, &t, poly);
        if degree(f, &g) != Some(0) {
            return false;
        }
    }
    true
}

/// The monic irreducible of degree `d` whose coefficient vector has the
/// smallest positional encoding (base = field size, constant term least
/// significant).
pub(crate) fn find_smallest_irreducible<F: CoeffField>(f: &F, d: usize) -> Vec<F::El> {
    assert!(d >= 1);
    let s = f.size();
    let total = s.checked_pow(d as u32).expect("field size overflow");
    for idx in 0..total {
        let mut coeffs = Vec::with_capacity(d + 1);
        let mut rem = idx;
        for _ in 0..d {
            coeffs.push(f.decode(rem % s));
            rem /= s;
        }
        coeffs.push(f.one());
        if is_irreducible(f, &coeffs) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over a finite field");
}
