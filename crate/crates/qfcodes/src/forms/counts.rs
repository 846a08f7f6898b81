//! Solution counts for quadratic forms: the closed-form level-set counts
//! `N_a = #{x : Q(x) = a}`, the joint counts `N(a, v)` for the system
//! `Q(x) = a, b.x = v`, and exhaustive counting oracles for both.
//!
//! The closed forms are evaluated in exact rational arithmetic (exponents of
//! `q` can be negative for small `m`) and asserted integral. The joint-count
//! formula for even types carries the [`Convention`] parameter; the case
//! split keys on the companion-form value `Qhat(b')`, which the oracle sweep
//! pins down as the reading consistent with enumeration.

use crate::budget::EnumBudget;
use crate::exact::{self, Rat};
use crate::field::{FieldContext, FieldElement};
use crate::parallel;
use crate::vecspace;

use super::{Convention, FormClass, FormError, QuadForm};

/// Closed-form `#{x in F_q^m : Q(x) = a}` for a form of the given class.
pub fn count_na(
    ctx: &FieldContext,
    class: &FormClass,
    m: usize,
    a: FieldElement,
) -> Result<u128, FormError> {
    let r = class.rank();
    if r > m {
        return Err(FormError::RankTooLarge { rank: r, m });
    }
    let q = ctx.q();
    let val = match *class {
        FormClass::Even { rank, epsilon } => {
            exact::qpow(q, m as i64 - 1)
                + exact::int(epsilon as i64)
                    * exact::int(ctx.i_func(a))
                    * exact::qpow(q, m as i64 - rank as i64 / 2 - 1)
        }
        FormClass::Odd { rank, eta_mu } => {
            exact::qpow(q, m as i64 - 1)
                + exact::int((eta_mu * ctx.eta(a)) as i64)
                    * exact::qpow(q, m as i64 - (rank as i64 + 1) / 2)
        }
    };
    exact::to_count(&val).map_err(|e| FormError::FormulaDomain(e.to_string()))
}

/// Closed-form count of solutions to `Q(x) = a, b.x = v` for a form in
/// standard coordinates, with `b = (b', b'')` split at the rank.
///
/// With `b'' != 0` the count depends only on `a`. With `b'' = 0` the split
/// is on `w = Qhat(b')`: zero gives the two degenerate lines, and nonzero
/// brings in the character of `4 a w - v^2` (negated under
/// [`Convention::Reflected`]) for even types, or `I(4 a w - v^2) eta(mu w)`
/// for type II, which is convention-free.
pub fn count_nav(
    ctx: &FieldContext,
    class: &FormClass,
    m: usize,
    a: FieldElement,
    v: FieldElement,
    b: &[FieldElement],
    conv: Convention,
) -> Result<u128, FormError> {
    let r = class.rank();
    if r > m {
        return Err(FormError::RankTooLarge { rank: r, m });
    }
    if b.len() != m {
        return Err(FormError::DimError {
            expected: m,
            got: b.len(),
        });
    }
    if b.iter().all(|c| c.is_zero()) {
        return Err(FormError::ZeroVector);
    }
    let q = ctx.q();
    let mi = m as i64;
    let ri = r as i64;
    let qm2 = exact::qpow(q, mi - 2);

    let tail_nonzero = b[r..].iter().any(|c| !c.is_zero());
    let val: Rat = if tail_nonzero {
        match *class {
            FormClass::Even { epsilon, .. } => {
                qm2 + exact::int(epsilon as i64)
                    * exact::int(ctx.i_func(a))
                    * exact::qpow(q, mi - 2 - ri / 2)
            }
            FormClass::Odd { eta_mu, .. } => {
                qm2 + exact::int((eta_mu * ctx.eta(a)) as i64) * exact::qpow(q, mi - (ri + 3) / 2)
            }
        }
    } else {
        let hat = class.hat_form(ctx)?;
        let w = hat.eval(&b[..r])?;
        if w.is_zero() {
            if v.is_zero() {
                match *class {
                    FormClass::Even { epsilon, .. } => {
                        qm2 + exact::int(epsilon as i64)
                            * exact::int(ctx.i_func(a))
                            * exact::qpow(q, mi - 1 - ri / 2)
                    }
                    FormClass::Odd { eta_mu, .. } => {
                        qm2 + exact::int((eta_mu * ctx.eta(a)) as i64)
                            * exact::qpow(q, mi - (ri + 1) / 2)
                    }
                }
            } else {
                qm2
            }
        } else {
            // 4 a w - v^2, reflected to v^2 - 4 a w on request
            let four = ctx.from_int(4);
            let mut arg = ctx.sub(ctx.mul(four, ctx.mul(a, w)), ctx.mul(v, v));
            match *class {
                FormClass::Even { epsilon, .. } => {
                    if conv == Convention::Reflected {
                        arg = ctx.neg(arg);
                    }
                    qm2 + exact::int((epsilon * ctx.eta(arg)) as i64)
                        * exact::qpow(q, mi - 1 - ri / 2)
                }
                FormClass::Odd { .. } => {
                    let mu = class.mu(ctx).unwrap();
                    qm2 + exact::int(ctx.i_func(arg))
                        * exact::int(ctx.eta(ctx.mul(mu, w)) as i64)
                        * exact::qpow(q, mi - (ri + 3) / 2)
                }
            }
        }
    };
    exact::to_count(&val).map_err(|e| FormError::FormulaDomain(e.to_string()))
}

fn check_enum_size(q: u32, m: usize, budget: &EnumBudget) -> Result<u64, FormError> {
    let total = vecspace::size(q, m).ok_or(FormError::SizeLimit {
        requested: u128::MAX,
        limit: budget.max_vectors as u128,
    })?;
    if total > budget.max_vectors {
        return Err(FormError::SizeLimit {
            requested: total as u128,
            limit: budget.max_vectors as u128,
        });
    }
    Ok(total)
}

fn histogram_chunk(form: &QuadForm, start: u64, end: u64) -> Vec<u64> {
    let ctx = form.ctx();
    let q = ctx.q();
    let mut hist = vec![0u64; q as usize];
    let mut x = vecspace::decode(q, form.m(), start);
    for _ in start..end {
        hist[form.eval_unchecked(&x).encoding() as usize] += 1;
        vecspace::increment(q, &mut x);
    }
    hist
}

fn merge_hist(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Exhaustive level-set counts for all `a` at once: entry `a` is
/// `#{x : Q(x) = a}`.
pub fn brute_na_all(form: &QuadForm, budget: &EnumBudget) -> Result<Vec<u64>, FormError> {
    let q = form.ctx().q();
    let total = check_enum_size(q, form.m(), budget)?;
    Ok(
        parallel::chunk_reduce(total, |s, e| histogram_chunk(form, s, e), merge_hist)
            .unwrap_or_else(|| vec![0; q as usize]),
    )
}

/// Sequential twin of [`brute_na_all`] (used by the benchmarks).
pub fn brute_na_all_seq(form: &QuadForm, budget: &EnumBudget) -> Result<Vec<u64>, FormError> {
    let q = form.ctx().q();
    let total = check_enum_size(q, form.m(), budget)?;
    Ok(
        parallel::chunk_reduce_seq(total, |s, e| histogram_chunk(form, s, e))
            .unwrap_or_else(|| vec![0; q as usize]),
    )
}

pub fn brute_na(form: &QuadForm, a: FieldElement, budget: &EnumBudget) -> Result<u64, FormError> {
    Ok(brute_na_all(form, budget)?[a.encoding() as usize])
}

/// Exhaustive joint counts for all `(a, v)` at once: entry `a*q + v` is the
/// number of solutions of `Q(x) = a, b.x = v`.
pub fn brute_nav_all(
    form: &QuadForm,
    b: &[FieldElement],
    budget: &EnumBudget,
) -> Result<Vec<u64>, FormError> {
    let ctx = form.ctx();
    let q = ctx.q();
    if b.len() != form.m() {
        return Err(FormError::DimError {
            expected: form.m(),
            got: b.len(),
        });
    }
    let total = check_enum_size(q, form.m(), budget)?;
    let work = |start: u64, end: u64| -> Vec<u64> {
        let mut hist = vec![0u64; (q * q) as usize];
        let mut x = vecspace::decode(q, form.m(), start);
        for _ in start..end {
            let a = form.eval_unchecked(&x);
            let v = ctx.dot(b, &x);
            hist[(a.encoding() * q + v.encoding()) as usize] += 1;
            vecspace::increment(q, &mut x);
        }
        hist
    };
    Ok(
        parallel::chunk_reduce(total, work, merge_hist)
            .unwrap_or_else(|| vec![0; (q * q) as usize]),
    )
}

pub fn brute_nav(
    form: &QuadForm,
    a: FieldElement,
    v: FieldElement,
    b: &[FieldElement],
    budget: &EnumBudget,
) -> Result<u64, FormError> {
    let q = form.ctx().q();
    Ok(brute_nav_all(form, b, budget)?[(a.encoding() * q + v.encoding()) as usize])
}
