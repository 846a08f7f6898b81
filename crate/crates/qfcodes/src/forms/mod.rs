//! Quadratic forms in `m` variables over `F_q`: evaluation, the radical and
//! rank, classification into the three standard types, constructive
//! standardization, and solution counting (closed forms plus brute-force
//! oracles).

mod counts;
mod standardize;

pub use counts::{
    brute_na, brute_na_all, brute_na_all_seq, brute_nav, brute_nav_all, count_na, count_nav,
};
pub use standardize::Standardization;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{ExtContext, ExtElement, FieldContext, FieldElement, FieldError};
use crate::matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("expected a vector of length {expected}, got {got}")]
    DimError { expected: usize, got: usize },
    #[error("the linear functional index b must be nonzero")]
    ZeroVector,
    #[error("enumeration of size {requested} exceeds the budget {limit}")]
    SizeLimit { requested: u128, limit: u128 },
    #[error("not a quadratic form: {0}")]
    NotAQuadraticForm(String),
    #[error("rank {rank} exceeds the number of variables {m}")]
    RankTooLarge { rank: usize, m: usize },
    #[error("count formula left its domain: {0}")]
    FormulaDomain(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Which way the quadratic-character argument `4a*Qhat(b) - v^2` is read in
/// the even-type solution-count formula. [`Convention::Reflected`] negates
/// it (equivalently multiplies the character value by `eta(-1)`), so the two
/// conventions coincide exactly when `q = 1 (mod 4)`. Odd-type formulas and
/// all `I(..)` arguments only test for zero and are convention-independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Paper,
    Reflected,
}

impl Convention {
    pub const BOTH: [Convention; 2] = [Convention::Paper, Convention::Reflected];

    pub fn label(self) -> &'static str {
        match self {
            Convention::Paper => "paper",
            Convention::Reflected => "reflected",
        }
    }
}

/// The classification invariant of a quadratic form.
///
/// Even rank splits into the hyperbolic type I (`epsilon = +1`) and the
/// elliptic type III (`epsilon = -1`); odd rank is type II, parameterized by
/// the square class `eta_mu` of the leftover diagonal coefficient.
/// Rank 0 is the degenerate type I.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormClass {
    Even { rank: usize, epsilon: i32 },
    Odd { rank: usize, eta_mu: i32 },
}

impl FormClass {
    pub fn even(rank: usize, epsilon: i32) -> FormClass {
        assert!(rank.is_multiple_of(2) && (epsilon == 1 || epsilon == -1));
        assert!(rank > 0 || epsilon == 1, "rank 0 is degenerate type I");
        FormClass::Even { rank, epsilon }
    }

    pub fn odd(rank: usize, eta_mu: i32) -> FormClass {
        assert!(rank % 2 == 1 && (eta_mu == 1 || eta_mu == -1));
        FormClass::Odd { rank, eta_mu }
    }

    pub fn rank(&self) -> usize {
        match *self {
            FormClass::Even { rank, .. } | FormClass::Odd { rank, .. } => rank,
        }
    }

    /// "I", "II" or "III".
    pub fn type_label(&self) -> &'static str {
        match *self {
            FormClass::Even { epsilon: 1, .. } => "I",
            FormClass::Even { .. } => "III",
            FormClass::Odd { .. } => "II",
        }
    }

    pub fn epsilon(&self) -> Option<i32> {
        match *self {
            FormClass::Even { epsilon, .. } => Some(epsilon),
            FormClass::Odd { .. } => None,
        }
    }

    pub fn eta_mu(&self) -> Option<i32> {
        match *self {
            FormClass::Odd { eta_mu, .. } => Some(eta_mu),
            FormClass::Even { .. } => None,
        }
    }

    /// The `mu` parameter for type II: `1` when `eta_mu = +1`, else the
    /// fixed nonsquare.
    pub fn mu(&self, ctx: &FieldContext) -> Option<FieldElement> {
        match *self {
            FormClass::Odd { eta_mu, .. } => Some(if eta_mu == 1 {
                FieldElement::ONE
            } else {
                ctx.fixed_nonsquare()
            }),
            FormClass::Even { .. } => None,
        }
    }

    /// The standard form of this class in `m >= rank` variables:
    /// type I is the sum of hyperbolic planes `x1 x2 + x3 x4 + ...`;
    /// type II appends `mu x_r^2`; type III ends with `x_{r-1}^2 - g x_r^2`
    /// for the fixed nonsquare `g`. Variables past the rank are inert.
    pub fn standard_form(&self, ctx: &FieldContext, m: usize) -> Result<QuadForm, FormError> {
        let r = self.rank();
        if r > m {
            return Err(FormError::RankTooLarge { rank: r, m });
        }
        let mut entries: Vec<(usize, usize, FieldElement)> = Vec::new();
        let pairs = match *self {
            FormClass::Even { epsilon: 1, .. } => r / 2,
            FormClass::Even { .. } => r / 2 - 1,
            FormClass::Odd { .. } => (r - 1) / 2,
        };
        for k in 0..pairs {
            entries.push((2 * k, 2 * k + 1, FieldElement::ONE));
        }
        match *self {
            FormClass::Even { epsilon: 1, .. } => {}
            FormClass::Even { .. } => {
                let gamma = ctx.fixed_nonsquare();
                entries.push((r - 2, r - 2, FieldElement::ONE));
                entries.push((r - 1, r - 1, ctx.neg(gamma)));
            }
            FormClass::Odd { .. } => {
                entries.push((r - 1, r - 1, self.mu(ctx).unwrap()));
            }
        }
        QuadForm::new(ctx.clone(), m, &entries)
    }

    /// The companion form whose polarized matrix is the inverse of this
    /// class's standard one, restricted to the first `rank` variables:
    /// type I is unchanged, type II ends with `x_r^2 / (4 mu)`, type III
    /// with `x_{r-1}^2 / 4 - x_r^2 / (4 g)`.
    pub fn hat_form(&self, ctx: &FieldContext) -> Result<QuadForm, FormError> {
        let r = self.rank();
        if r == 0 {
            return QuadForm::new(ctx.clone(), 0, &[]);
        }
        let four = ctx.from_int(4);
        let mut entries: Vec<(usize, usize, FieldElement)> = Vec::new();
        let pairs = match *self {
            FormClass::Even { epsilon: 1, .. } => r / 2,
            FormClass::Even { .. } => r / 2 - 1,
            FormClass::Odd { .. } => (r - 1) / 2,
        };
        for k in 0..pairs {
            entries.push((2 * k, 2 * k + 1, FieldElement::ONE));
        }
        match *self {
            FormClass::Even { epsilon: 1, .. } => {}
            FormClass::Even { .. } => {
                let gamma = ctx.fixed_nonsquare();
                entries.push((r - 2, r - 2, ctx.inv(four)));
                entries.push((r - 1, r - 1, ctx.neg(ctx.inv(ctx.mul(four, gamma)))));
            }
            FormClass::Odd { .. } => {
                let mu = self.mu(ctx).unwrap();
                entries.push((r - 1, r - 1, ctx.inv(ctx.mul(four, mu))));
            }
        }
        QuadForm::new(ctx.clone(), r, &entries)
    }

    /// All classes of rank `1..=m` (the ones the closed-form enumerators
    /// cover), in a fixed deterministic order.
    pub fn all_nondegenerate(m: usize) -> Vec<FormClass> {
        let mut out = Vec::new();
        for r in 1..=m {
            if r % 2 == 0 {
                out.push(FormClass::even(r, 1));
                out.push(FormClass::even(r, -1));
            } else {
                out.push(FormClass::odd(r, 1));
                out.push(FormClass::odd(r, -1));
            }
        }
        out
    }
}

impl Serialize for FormClass {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("FormClass", 3)?;
        s.serialize_field("rank", &self.rank())?;
        s.serialize_field("type", self.type_label())?;
        match self {
            FormClass::Even { epsilon, .. } => s.serialize_field("epsilon", epsilon)?,
            FormClass::Odd { eta_mu, .. } => s.serialize_field("eta_mu", eta_mu)?,
        }
        s.end()
    }
}

/// A quadratic form `sum a_ij x_i x_j` (`i <= j`) in `m` variables,
/// stored as the packed upper triangle of coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadForm {
    ctx: FieldContext,
    m: usize,
    coeffs: Vec<FieldElement>,
}

impl std::fmt::Debug for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut terms = Vec::new();
        for i in 0..self.m {
            for j in i..self.m {
                let c = self.coeff(i, j);
                if !c.is_zero() {
                    terms.push(format!("{}*x{}x{}", c, i + 1, j + 1));
                }
            }
        }
        if terms.is_empty() {
            terms.push("0".to_string());
        }
        write!(
            f,
            "QuadForm[q={}, m={}]({})",
            self.ctx.q(),
            self.m,
            terms.join(" + ")
        )
    }
}

impl QuadForm {
    /// Build from `(i, j, a_ij)` entries with 0-based `i <= j < m`.
    /// Repeated positions accumulate.
    pub fn new(
        ctx: FieldContext,
        m: usize,
        entries: &[(usize, usize, FieldElement)],
    ) -> Result<QuadForm, FormError> {
        let mut coeffs = vec![FieldElement::ZERO; m * (m + 1) / 2];
        for &(i, j, a) in entries {
            if i > j || j >= m {
                return Err(FormError::DimError {
                    expected: m,
                    got: j + 1,
                });
            }
            let idx = pack_index(m, i, j);
            coeffs[idx] = ctx.add(coeffs[idx], a);
        }
        Ok(QuadForm { ctx, m, coeffs })
    }

    pub fn zero(ctx: FieldContext, m: usize) -> QuadForm {
        QuadForm {
            ctx,
            m,
            coeffs: vec![FieldElement::ZERO; m * (m + 1) / 2],
        }
    }

    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coeff(&self, i: usize, j: usize) -> FieldElement {
        assert!(i <= j && j < self.m);
        self.coeffs[pack_index(self.m, i, j)]
    }

    /// Nonzero `(i, j, a_ij)` entries in row-major order.
    pub fn entries(&self) -> Vec<(usize, usize, FieldElement)> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in i..self.m {
                let c = self.coeff(i, j);
                if !c.is_zero() {
                    out.push((i, j, c));
                }
            }
        }
        out
    }

    pub fn eval(&self, x: &[FieldElement]) -> Result<FieldElement, FormError> {
        if x.len() != self.m {
            return Err(FormError::DimError {
                expected: self.m,
                got: x.len(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[FieldElement]) -> FieldElement {
        let ctx = &self.ctx;
        let mut acc = FieldElement::ZERO;
        let mut idx = 0;
        for i in 0..self.m {
            let xi = x[i];
            if xi.is_zero() {
                idx += self.m - i;
                continue;
            }
            #[allow(clippy::needless_range_loop)]
            for j in i..self.m {
                let a = self.coeffs[idx];
                idx += 1;
                if a.is_zero() {
                    continue;
                }
                acc = ctx.add(acc, ctx.mul(a, ctx.mul(xi, x[j])));
            }
        }
        acc
    }

    /// The polarized Gram matrix `B(e_i, e_j)` with
    /// `B(x, y) = Q(x+y) - Q(x) - Q(y)`: off-diagonal entries `a_ij`,
    /// diagonal `2 a_ii`.
    pub fn gram(&self) -> Matrix {
        let ctx = &self.ctx;
        let two = ctx.from_int(2);
        let mut g = Matrix::zero(self.m, self.m);
        for i in 0..self.m {
            g.set(i, i, ctx.mul(two, self.coeff(i, i)));
            for j in (i + 1)..self.m {
                let a = self.coeff(i, j);
                g.set(i, j, a);
                g.set(j, i, a);
            }
        }
        g
    }

    /// The symmetric coefficient matrix `S` with `Q(x) = x^t S x`
    /// (half the polarized matrix).
    pub fn sym_matrix(&self) -> Matrix {
        let ctx = &self.ctx;
        let half = ctx.inv(ctx.from_int(2));
        let mut s = self.gram();
        for i in 0..self.m {
            for j in 0..self.m {
                s.set(i, j, ctx.mul(half, s.get(i, j)));
            }
        }
        s
    }

    /// A basis of the radical `V = {y : B(x, y) = 0 for all x}`, the
    /// nullspace of the polarized matrix. `|V| = q^(m - rank)`.
    pub fn radical(&self) -> Vec<Vec<FieldElement>> {
        self.gram().nullspace(&self.ctx)
    }

    pub fn rank(&self) -> usize {
        self.m - self.radical().len()
    }

    /// Classify by congruence-diagonalizing the symmetric matrix: with
    /// nonzero diagonal values `d_1..d_r`, even rank gets
    /// `epsilon = eta((-1)^(r/2) d_1...d_r)` and odd rank gets
    /// `eta_mu = eta((-1)^((r-1)/2) d_1...d_r)`. The rule is validated
    /// wholesale against the brute-force level-set counts in the tests.
    pub fn classify(&self) -> FormClass {
        let ctx = &self.ctx;
        let diag = standardize::diagonal_values(self);
        let nonzero: Vec<FieldElement> = diag.into_iter().filter(|d| !d.is_zero()).collect();
        let r = nonzero.len();
        let mut disc = FieldElement::ONE;
        for &d in &nonzero {
            disc = ctx.mul(disc, d);
        }
        let minus_one = ctx.neg(FieldElement::ONE);
        if r.is_multiple_of(2) {
            let sign = ctx.pow(minus_one, (r / 2) as u64);
            FormClass::even(r, ctx.eta(ctx.mul(sign, disc)))
        } else {
            let sign = ctx.pow(minus_one, ((r - 1) / 2) as u64);
            FormClass::odd(r, ctx.eta(ctx.mul(sign, disc)))
        }
    }

    pub fn standardize(&self) -> Result<Standardization, FormError> {
        standardize::standardize(self)
    }

    /// The form `y -> Q(T y)` for an invertible transform `T`.
    pub fn compose(&self, t: &Matrix) -> QuadForm {
        let ctx = &self.ctx;
        assert_eq!(t.rows(), self.m);
        assert_eq!(t.cols(), self.m);
        let s = self.sym_matrix();
        let s2 = t.transpose().mul(ctx, &s).mul(ctx, t);
        let two = ctx.from_int(2);
        let mut entries = Vec::new();
        for i in 0..self.m {
            entries.push((i, i, s2.get(i, i)));
            for j in (i + 1)..self.m {
                entries.push((i, j, ctx.mul(two, s2.get(i, j))));
            }
        }
        QuadForm::new(ctx.clone(), self.m, &entries).expect("valid entries")
    }

    /// Recover a quadratic form from a black-box function on `F_{q^m}` by
    /// polarization over the given basis, then verify agreement on every
    /// point, rejecting non-quadratic inputs.
    pub fn from_function<F>(
        ext: &ExtContext,
        basis: &[ExtElement],
        f: F,
    ) -> Result<QuadForm, FormError>
    where
        F: Fn(ExtElement) -> FieldElement,
    {
        let ctx = ext.base();
        let m = ext.m();
        if basis.len() != m {
            return Err(FormError::DimError {
                expected: m,
                got: basis.len(),
            });
        }
        let mut entries = Vec::new();
        for i in 0..m {
            entries.push((i, i, f(basis[i])));
            for j in (i + 1)..m {
                let fij = f(ext.add(basis[i], basis[j]));
                let a = ctx.sub(ctx.sub(fij, f(basis[i])), f(basis[j]));
                entries.push((i, j, a));
            }
        }
        let form = QuadForm::new(ctx.clone(), m, &entries)?;
        // Exhaustive agreement check; anything that polarization cannot
        // reproduce (linear terms, non-homogeneous parts) shows up here.
        let q = ctx.q();
        let total = ext.size();
        let mut coords = crate::vecspace::decode(q, m, 0);
        for _ in 0..total {
            let mut x = ExtElement::ZERO;
            for (c, &b) in coords.iter().zip(basis.iter()) {
                x = ext.add(x, ext.mul(ext.from_base(*c), b));
            }
            if form.eval_unchecked(&coords) != f(x) {
                return Err(FormError::NotAQuadraticForm(format!(
                    "disagrees with the polarized form at coordinates {:?}",
                    coords.iter().map(|c| c.encoding()).collect::<Vec<_>>()
                )));
            }
            crate::vecspace::increment(q, &mut coords);
        }
        Ok(form)
    }

    /// The built-in family `x -> trace(sum_i c_i x^(q^i + 1))`, which is a
    /// quadratic form on `F_{q^m}` for any coefficients.
    pub fn from_trace_family(
        ext: &ExtContext,
        coeffs: &[ExtElement],
    ) -> Result<QuadForm, FormError> {
        let basis = ext.polynomial_basis();
        Self::from_function(ext, &basis, |x| trace_family_value(ext, coeffs, x))
    }
}

/// Evaluate `trace(sum_i c_i x^(q^i + 1))`.
pub fn trace_family_value(ext: &ExtContext, coeffs: &[ExtElement], x: ExtElement) -> FieldElement {
    let mut frob_power = x;
    let mut acc = ExtElement::ZERO;
    for (i, &c) in coeffs.iter().enumerate() {
        if i > 0 {
            frob_power = ext.frobenius(frob_power);
        }
        acc = ext.add(acc, ext.mul(c, ext.mul(frob_power, x)));
    }
    ext.trace(acc)
}

fn pack_index(m: usize, i: usize, j: usize) -> usize {
    // row-major upper triangle
    i * m - i * (i + 1) / 2 + j
}
