//! Constructive reduction of a quadratic form to its standard type.
//!
//! The pipeline: symmetric congruence elimination to diagonal form (with the
//! `x_j <- x_j + x_i` trick when every candidate pivot vanishes), square-class
//! normalization of the diagonal, pairwise extraction of hyperbolic planes
//! (re-representing a same-class pair through the norm form when `q = 3 (mod
//! 4)` blocks a direct extraction), normalization of the at-most-two leftover
//! entries to the standard tail, and a final coordinate permutation.
//!
//! Every step is an exact change of variables; the result carries the
//! transform `T` with `Gram(Q) = T^t Gram(Q_std) T`, which is re-checked
//! before returning.

use crate::field::{FieldContext, FieldElement};
use crate::matrix::Matrix;

use super::{FormClass, FormError, QuadForm};

/// A standardization certificate: the class, the standard form of that
/// class in the same number of variables, and an invertible `T` with
/// `Q(x) = Q_std(T x)` exactly.
#[derive(Debug, Clone)]
pub struct Standardization {
    pub class: FormClass,
    pub standard_form: QuadForm,
    /// Maps original coordinates to standard ones: `Q(x) = Q_std(T x)`.
    pub transform: Matrix,
}

impl Standardization {
    /// Exact check of `Gram(Q) = T^t Gram(Q_std) T`.
    pub fn gram_identity_holds(&self, original: &QuadForm) -> bool {
        let ctx = original.ctx();
        let lhs = original.gram();
        let rhs = self
            .transform
            .transpose()
            .mul(ctx, &self.standard_form.gram())
            .mul(ctx, &self.transform);
        lhs == rhs
    }
}

/// Working state: the current symmetric matrix `M` and the accumulated
/// substitution `C` with `x = C y`, maintaining `Q(x) = y^t M y`.
struct Reduction<'a> {
    ctx: &'a FieldContext,
    m: usize,
    mat: Matrix,
    c: Matrix,
}

impl<'a> Reduction<'a> {
    fn new(form: &'a QuadForm) -> Self {
        Reduction {
            ctx: form.ctx(),
            m: form.m(),
            mat: form.sym_matrix(),
            c: Matrix::identity(form.m()),
        }
    }

    /// Apply the substitution `x_cur = P x_new`.
    fn apply(&mut self, p: &Matrix) {
        self.c = self.c.mul(self.ctx, p);
        self.mat = p.transpose().mul(self.ctx, &self.mat).mul(self.ctx, p);
    }

    fn swap_coords(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let mut p = Matrix::identity(self.m);
        p.set(i, i, FieldElement::ZERO);
        p.set(j, j, FieldElement::ZERO);
        p.set(i, j, FieldElement::ONE);
        p.set(j, i, FieldElement::ONE);
        self.apply(&p);
    }

    /// `x_i <- x_i + lambda x_j` (adds lambda times column j into column i
    /// of the quadratic side).
    fn shear(&mut self, i: usize, j: usize, lambda: FieldElement) {
        let mut p = Matrix::identity(self.m);
        p.set(i, j, lambda);
        self.apply(&p);
    }

    fn scale_coord(&mut self, i: usize, s: FieldElement) {
        let mut p = Matrix::identity(self.m);
        p.set(i, i, s);
        self.apply(&p);
    }

    /// Replace coordinates `(i, j)` via the 2x2 block `x-block = P z-block`.
    fn block2(
        &mut self,
        i: usize,
        j: usize,
        p11: FieldElement,
        p12: FieldElement,
        p21: FieldElement,
        p22: FieldElement,
    ) {
        let mut p = Matrix::identity(self.m);
        p.set(i, i, p11);
        p.set(i, j, p12);
        p.set(j, i, p21);
        p.set(j, j, p22);
        self.apply(&p);
    }

    /// Congruence-diagonalize `M`; returns the diagonal values.
    fn diagonalize(&mut self) -> Vec<FieldElement> {
        for k in 0..self.m {
            if self.mat.get(k, k).is_zero() {
                // prefer an existing nonzero diagonal entry
                if let Some(j) = (k + 1..self.m).find(|&j| !self.mat.get(j, j).is_zero()) {
                    self.swap_coords(k, j);
                } else {
                    // all remaining diagonal entries vanish; look for an
                    // off-diagonal survivor and shear it onto the diagonal
                    let mut found = None;
                    'scan: for i in k..self.m {
                        for j in (i + 1)..self.m {
                            if !self.mat.get(i, j).is_zero() {
                                found = Some((i, j));
                                break 'scan;
                            }
                        }
                    }
                    match found {
                        Some((i, j)) => {
                            // x_j <- x_j + x_i gives M[i][i] = 2 M[i][j] != 0
                            self.shear(j, i, FieldElement::ONE);
                            debug_assert!(!self.mat.get(i, i).is_zero());
                            self.swap_coords(k, i);
                        }
                        None => break, // the rest is the radical
                    }
                }
            }
            let pivot = self.mat.get(k, k);
            debug_assert!(!pivot.is_zero());
            for j in (k + 1)..self.m {
                let off = self.mat.get(k, j);
                if !off.is_zero() {
                    let lambda = self.ctx.neg(self.ctx.div(off, pivot));
                    self.shear(k, j, lambda);
                    debug_assert!(self.mat.get(k, j).is_zero());
                }
            }
        }
        (0..self.m).map(|i| self.mat.get(i, i)).collect()
    }
}

/// Diagonal values of a congruence diagonalization (order not meaningful).
pub(super) fn diagonal_values(form: &QuadForm) -> Vec<FieldElement> {
    Reduction::new(form).diagonalize()
}

pub(super) fn standardize(form: &QuadForm) -> Result<Standardization, FormError> {
    let ctx = form.ctx().clone();
    let m = form.m();
    let gamma = ctx.fixed_nonsquare();
    let mut red = Reduction::new(form);
    let diag = red.diagonalize();

    // Square-class normalization: every nonzero entry becomes 1 or gamma.
    let mut entries: Vec<usize> = Vec::new(); // coordinates with nonzero diagonal
    let mut radical: Vec<usize> = Vec::new();
    for (i, &d) in diag.iter().enumerate() {
        if d.is_zero() {
            radical.push(i);
        } else {
            scale_to_class_rep(&mut red, i, gamma)?;
            entries.push(i);
        }
    }
    let r = entries.len();

    // The class, from the discriminant of the normalized diagonal.
    let mut disc = FieldElement::ONE;
    for &i in &entries {
        disc = ctx.mul(disc, red.mat.get(i, i));
    }
    let minus_one = ctx.neg(FieldElement::ONE);
    let class = if r.is_multiple_of(2) {
        let sign = ctx.pow(minus_one, (r / 2) as u64);
        FormClass::even(r, ctx.eta(ctx.mul(sign, disc)))
    } else {
        let sign = ctx.pow(minus_one, ((r - 1) / 2) as u64);
        FormClass::odd(r, ctx.eta(ctx.mul(sign, disc)))
    };

    // Tail targets (values the last entries must take, in order).
    let tail_len = match class {
        FormClass::Even { epsilon: 1, .. } => 0,
        FormClass::Even { .. } => 2,
        FormClass::Odd { .. } => 1,
    };
    let planes_needed = (r - tail_len) / 2;

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let eta_minus_one = ctx.eta(minus_one);
    let mut guard = 0;
    while pairs.len() < planes_needed {
        guard += 1;
        if guard > 4 * m + 8 {
            return Err(FormError::InternalInconsistency(
                "hyperbolic extraction did not terminate".into(),
            ));
        }
        // A pair (d, d') with eta(-d d') = 1 factors into a hyperbolic plane.
        let extractable = find_pair(&red, &entries, |d, dp| {
            eta_minus_one * red.ctx.eta(red.ctx.mul(d, dp)) == 1
        });
        match extractable {
            Some((a, b)) => {
                let (i, j) = (entries[a], entries[b]);
                extract_hyperbolic(&mut red, i, j)?;
                entries.remove(b);
                entries.remove(a);
                pairs.push((i, j));
            }
            None => {
                // Only possible when q = 3 (mod 4) and all remaining entries
                // share a square class: route a pair through the norm form
                // to flip its class, which creates an extractable pair.
                if eta_minus_one == 1 || entries.len() < 2 {
                    return Err(FormError::InternalInconsistency(
                        "no extractable pair where one must exist".into(),
                    ));
                }
                let (i, j) = (entries[0], entries[1]);
                rerepresent_pair(&mut red, i, j, gamma)?;
            }
        }
    }

    // Tail normalization.
    match class {
        FormClass::Even { epsilon: 1, .. } => {
            debug_assert!(entries.is_empty());
        }
        FormClass::Even { .. } => {
            // target (1, -gamma)
            let minus_gamma = ctx.neg(gamma);
            let (d0, d1) = (
                red.mat.get(entries[0], entries[0]),
                red.mat.get(entries[1], entries[1]),
            );
            if eta_minus_one == 1 {
                // classes are forced to be {1, gamma}; order them
                if d0 == gamma && d1 == FieldElement::ONE {
                    entries.swap(0, 1);
                } else if !(d0 == FieldElement::ONE && d1 == gamma) {
                    return Err(FormError::InternalInconsistency(
                        "unexpected elliptic tail classes".into(),
                    ));
                }
                scale_to_value(&mut red, entries[1], minus_gamma)?;
            } else {
                // classes are forced equal; (gamma, gamma) flips to (1, 1)
                if d0 == gamma {
                    if d1 != gamma {
                        return Err(FormError::InternalInconsistency(
                            "unexpected elliptic tail classes".into(),
                        ));
                    }
                    rerepresent_pair(&mut red, entries[0], entries[1], gamma)?;
                }
                scale_to_value(&mut red, entries[1], minus_gamma)?;
            }
        }
        FormClass::Odd { .. } => {
            let mu = class.mu(&ctx).unwrap();
            if red.mat.get(entries[0], entries[0]) != mu {
                return Err(FormError::InternalInconsistency(
                    "leftover entry disagrees with the class parameter".into(),
                ));
            }
        }
    }

    // Final permutation: plane pairs first, then the tail, then the radical.
    let mut order: Vec<usize> = Vec::with_capacity(m);
    for &(i, j) in &pairs {
        order.push(i);
        order.push(j);
    }
    order.extend(entries.iter().copied());
    order.extend(radical.iter().copied());
    let mut perm = Matrix::zero(m, m);
    for (new_pos, &old) in order.iter().enumerate() {
        perm.set(old, new_pos, FieldElement::ONE);
    }
    red.apply(&perm);

    let standard_form = class.standard_form(&ctx, m)?;
    if red.mat != standard_form.sym_matrix() {
        return Err(FormError::InternalInconsistency(
            "reduced matrix is not the standard one".into(),
        ));
    }
    let transform = red.c.inverse(&ctx).ok_or_else(|| {
        FormError::InternalInconsistency("accumulated transform is singular".into())
    })?;

    let standardization = Standardization {
        class,
        standard_form,
        transform,
    };
    if !standardization.gram_identity_holds(form) {
        return Err(FormError::InternalInconsistency(
            "Gram identity failed after reduction".into(),
        ));
    }
    Ok(standardization)
}

/// Scale coordinate `i` so its diagonal entry becomes 1 or gamma.
fn scale_to_class_rep(red: &mut Reduction, i: usize, gamma: FieldElement) -> Result<(), FormError> {
    let ctx = red.ctx;
    let d = red.mat.get(i, i);
    let target = if ctx.eta(d) == 1 {
        FieldElement::ONE
    } else {
        gamma
    };
    scale_to_value(red, i, target)
}

/// Scale coordinate `i` so its diagonal entry becomes `target`
/// (same square class required).
fn scale_to_value(red: &mut Reduction, i: usize, target: FieldElement) -> Result<(), FormError> {
    let ctx = red.ctx;
    let d = red.mat.get(i, i);
    if d == target {
        return Ok(());
    }
    let ratio = ctx.div(target, d);
    let s = ctx.sqrt(ratio).map_err(|_| {
        FormError::InternalInconsistency("square-class mismatch while scaling".into())
    })?;
    red.scale_coord(i, s);
    debug_assert_eq!(red.mat.get(i, i), target);
    Ok(())
}

/// Turn `d x_i^2 + d' x_j^2` with `eta(-d d') = 1` into the plane `x_i x_j`:
/// with `c = sqrt(-d'/d)`, `d x^2 + d' y^2 = [d(x - c y)] [x + c y]`.
fn extract_hyperbolic(red: &mut Reduction, i: usize, j: usize) -> Result<(), FormError> {
    let ctx = red.ctx;
    let d = red.mat.get(i, i);
    let dp = red.mat.get(j, j);
    let c = ctx
        .sqrt(ctx.neg(ctx.div(dp, d)))
        .map_err(|_| FormError::InternalInconsistency("pair is not hyperbolic".into()))?;
    // z_i = d (y_i - c y_j), z_j = y_i + c y_j; substitute y = A^{-1} z.
    let det = ctx.mul(ctx.from_int(2), ctx.mul(d, c));
    let det_inv = ctx.inv(det);
    // A = [[d, -dc], [1, c]]; A^{-1} = (1/det) [[c, dc], [-1, d]]
    let p11 = ctx.mul(det_inv, c);
    let p12 = ctx.mul(det_inv, ctx.mul(d, c));
    let p21 = ctx.neg(det_inv);
    let p22 = ctx.mul(det_inv, d);
    red.block2(i, j, p11, p12, p21, p22);
    debug_assert!(red.mat.get(i, i).is_zero() && red.mat.get(j, j).is_zero());
    debug_assert_eq!(red.mat.get(i, j), ctx.inv(ctx.from_int(2)));
    Ok(())
}

/// Replace `c (x_i^2 + x_j^2)` by `gamma c (z_i^2 + z_j^2)` using a
/// representation `u1^2 + u2^2 = gamma` (which exists since the sum of two
/// squares is a universal binary form), then renormalize both entries to
/// their class representative.
fn rerepresent_pair(
    red: &mut Reduction,
    i: usize,
    j: usize,
    gamma: FieldElement,
) -> Result<(), FormError> {
    let ctx = red.ctx;
    let d = red.mat.get(i, i);
    if red.mat.get(j, j) != d {
        return Err(FormError::InternalInconsistency(
            "re-representation expects equal entries".into(),
        ));
    }
    let (u1, u2) = represent_as_sum_of_squares(ctx, gamma).ok_or_else(|| {
        FormError::InternalInconsistency("norm form failed to represent gamma".into())
    })?;
    // (x_i, x_j) = (u1 z_i - u2 z_j, u2 z_i + u1 z_j)
    red.block2(i, j, u1, ctx.neg(u2), u2, u1);
    debug_assert_eq!(red.mat.get(i, i), ctx.mul(gamma, d));
    debug_assert_eq!(red.mat.get(j, j), ctx.mul(gamma, d));
    debug_assert!(red.mat.get(i, j).is_zero());
    scale_to_class_rep(red, i, gamma)?;
    scale_to_class_rep(red, j, gamma)?;
    Ok(())
}

/// Some `(u1, u2)` with `u1^2 + u2^2 = target`.
fn represent_as_sum_of_squares(
    ctx: &FieldContext,
    target: FieldElement,
) -> Option<(FieldElement, FieldElement)> {
    for u1 in ctx.elements() {
        let rest = ctx.sub(target, ctx.mul(u1, u1));
        if rest.is_zero() {
            return Some((u1, FieldElement::ZERO));
        }
        if ctx.eta(rest) == 1 {
            return Some((u1, ctx.sqrt(rest).ok()?));
        }
    }
    None
}

/// First index pair in the entry list whose diagonal values satisfy `pred`.
fn find_pair<F>(red: &Reduction, entries: &[usize], pred: F) -> Option<(usize, usize)>
where
    F: Fn(FieldElement, FieldElement) -> bool,
{
    for a in 0..entries.len() {
        for b in (a + 1)..entries.len() {
            let d = red.mat.get(entries[a], entries[a]);
            let dp = red.mat.get(entries[b], entries[b]);
            if pred(d, dp) {
                return Some((a, b));
            }
        }
    }
    None
}
