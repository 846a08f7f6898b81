//! Closed-form weight distributions and complete weight enumerators for the
//! codes `C_{D}` with `D = {x : Q(x) = a}`, `a != 0`, parameterized by the
//! class of `Q`. Everything is evaluated in exact rational arithmetic; a
//! multiplicity of zero removes its row before the row's other entries are
//! even evaluated (at `r = m` some of them leave the integers).
//!
//! The composition families for even rank carry the quadratic-character
//! argument `4t - rho^2` whose sign is governed by [`Convention`]; under the
//! printed orientation the families fail their own composition-sum check
//! whenever `eta(-1) = -1`, which [`predicted_cwe`] reports as an
//! internal-inconsistency error rather than silently repairing.

use crate::exact::{self, Rat};
use crate::field::{FieldContext, FieldElement};
use crate::forms::{Convention, FormClass};

use super::{
    CodeError, CodeError::InternalInconsistency, CompleteWeightEnumerator, WeightDistribution,
};

fn guard(class: &FormClass, m: usize, a: FieldElement) -> Result<(), CodeError> {
    if a.is_zero() {
        return Err(CodeError::Unsupported(
            "closed forms cover a != 0 only; use brute enumeration for a = 0".into(),
        ));
    }
    if class.rank() == 0 {
        return Err(CodeError::Unsupported(
            "closed forms require rank >= 1".into(),
        ));
    }
    if class.rank() > m {
        return Err(CodeError::Form(crate::forms::FormError::RankTooLarge {
            rank: class.rank(),
            m,
        }));
    }
    Ok(())
}

fn to_count(v: &Rat, what: &str) -> Result<u128, CodeError> {
    exact::to_count(v).map_err(|e| InternalInconsistency(format!("{}: {}", what, e)))
}

/// Code length `n = |D|` from the level-set count.
pub fn code_length(
    ctx: &FieldContext,
    class: &FormClass,
    m: usize,
    a: FieldElement,
) -> Result<u128, CodeError> {
    Ok(crate::forms::count_na(ctx, class, m, a)?)
}

/// For type II rows the sign that enters is `eta(mu a)`.
fn odd_sign(ctx: &FieldContext, eta_mu: i32, a: FieldElement) -> i64 {
    (eta_mu * ctx.eta(a)) as i64
}

/// The weight-table rows (weight, multiplicity) before any merging, with
/// zero-multiplicity rows dropped.
pub fn predicted_wd_rows(
    ctx: &FieldContext,
    class: &FormClass,
    m: usize,
    a: FieldElement,
) -> Result<Vec<(u128, u128)>, CodeError> {
    guard(class, m, a)?;
    let q = ctx.q();
    let mi = m as i64;
    let r = class.rank() as i64;
    let mut rows: Vec<(Rat, Rat)> = vec![(exact::int(0), exact::int(1))];
    match *class {
        FormClass::Even { epsilon, .. } => {
            let eps = exact::int(epsilon as i64);
            rows.push((
                (exact::qpow(q, 1) - exact::int(1))
                    * (exact::qpow(q, mi - 2) - eps.clone() * exact::qpow(q, mi - r / 2 - 2)),
                exact::qpow(q, mi) - exact::qpow(q, r),
            ));
            rows.push((
                exact::qpow(q, mi - 1) - exact::qpow(q, mi - 2),
                (exact::qpow(q, 1) + exact::int(1)) / exact::int(2) * exact::qpow(q, r - 1)
                    + eps.clone() * (exact::qpow(q, 1) - exact::int(1)) / exact::int(2)
                        * exact::qpow(q, (r - 2) / 2)
                    - exact::int(1),
            ));
            rows.push((
                exact::qpow(q, mi - 1)
                    - exact::qpow(q, mi - 2)
                    - exact::int(2) * eps.clone() * exact::qpow(q, mi - r / 2 - 1),
                (exact::qpow(q, 1) - exact::int(1)) / exact::int(2)
                    * (exact::qpow(q, r - 1) - eps * exact::qpow(q, (r - 2) / 2)),
            ));
        }
        FormClass::Odd { eta_mu, .. } => {
            let h = exact::int(odd_sign(ctx, eta_mu, a));
            let half_qm1 = (exact::qpow(q, 1) - exact::int(1)) / exact::int(2);
            rows.push((
                (exact::qpow(q, 1) - exact::int(1))
                    * (exact::qpow(q, mi - 2) + h.clone() * exact::qpow(q, mi - (r + 3) / 2)),
                exact::qpow(q, mi) - exact::qpow(q, r)
                    + half_qm1.clone()
                        * (exact::qpow(q, r - 1) - h.clone() * exact::qpow(q, (r - 1) / 2)),
            ));
            rows.push((
                exact::qpow(q, mi - 1) - exact::qpow(q, mi - 2),
                exact::qpow(q, r - 1) - exact::int(1),
            ));
            rows.push((
                exact::qpow(q, mi - 2) * (exact::qpow(q, 1) - exact::int(1))
                    + h.clone()
                        * (exact::qpow(q, 1) + exact::int(1))
                        * exact::qpow(q, mi - (r + 3) / 2),
                half_qm1 * (exact::qpow(q, r - 1) + h * exact::qpow(q, (r - 1) / 2)),
            ));
        }
    }
    let mut out = Vec::new();
    for (w, mult) in rows {
        let mult = to_count(&mult, "weight-row multiplicity")?;
        if mult == 0 {
            continue;
        }
        out.push((to_count(&w, "weight value")?, mult));
    }
    Ok(out)
}

/// Closed-form weight distribution (rows merged by weight). The table rows
/// are convention-independent.
pub fn predicted_wd(
    ctx: &FieldContext,
    class: &FormClass,
    m: usize,
    a: FieldElement,
) -> Result<WeightDistribution, CodeError> {
    let n = code_length(ctx, class, m, a)?;
    let rows = predicted_wd_rows(ctx, class, m, a)?;
    let wd = WeightDistribution::from_rows(n, rows);
    let qm = exact::qpow(ctx.q(), m as i64);
    if exact::int(0) + Rat::from_integer(wd.total().into()) != qm {
        return Err(InternalInconsistency(format!(
            "weight multiplicities sum to {}, expected q^m",
            wd.total()
        )));
    }
    Ok(wd)
}

/// The full-rank (`r = m`) specialization rows: a two-weight table for even
/// `m` and a three-weight table for odd `m`. Used as an independent
/// cross-check of [`predicted_wd_rows`].
pub fn full_rank_wd_rows(
    ctx: &FieldContext,
    class: &FormClass,
    m: usize,
    a: FieldElement,
) -> Result<Vec<(u128, u128)>, CodeError> {
    guard(class, m, a)?;
    if class.rank() != m {
        return Err(CodeError::Unsupported(
            "the full-rank tables require r = m".into(),
        ));
    }
    let q = ctx.q();
    let mi = m as i64;
    let mut rows: Vec<(Rat, Rat)> = vec![(exact::int(0), exact::int(1))];
    match *class {
        FormClass::Even { epsilon, .. } => {
            let eps = exact::int(epsilon as i64);
            rows.push((
                exact::qpow(q, mi - 1) - exact::qpow(q, mi - 2),
                (exact::qpow(q, 1) + exact::int(1)) / exact::int(2) * exact::qpow(q, mi - 1)
                    + eps.clone() * (exact::qpow(q, 1) - exact::int(1)) / exact::int(2)
                        * exact::qpow(q, (mi - 2) / 2)
                    - exact::int(1),
            ));
            rows.push((
                exact::qpow(q, mi - 1)
                    - exact::qpow(q, mi - 2)
                    - exact::int(2) * eps.clone() * exact::qpow(q, mi / 2 - 1),
                (exact::qpow(q, 1) - exact::int(1)) / exact::int(2)
                    * (exact::qpow(q, mi - 1) - eps * exact::qpow(q, (mi - 2) / 2)),
            ));
        }
        FormClass::Odd { eta_mu, .. } => {
            let h = exact::int(odd_sign(ctx, eta_mu, a));
            let half_qm1 = (exact::qpow(q, 1) - exact::int(1)) / exact::int(2);
            rows.push((
                exact::qpow(q, mi - 1) - exact::qpow(q, mi - 2),
                exact::qpow(q, mi - 1) - exact::int(1),
            ));
            rows.push((
                exact::qpow(q, mi - 2) * (exact::qpow(q, 1) - exact::int(1))
                    + h.clone()
                        * (exact::qpow(q, 1) + exact::int(1))
                        * exact::qpow(q, (mi - 3) / 2),
                half_qm1.clone()
                    * (exact::qpow(q, mi - 1) + h.clone() * exact::qpow(q, (mi - 1) / 2)),
            ));
            rows.push((
                (exact::qpow(q, 1) - exact::int(1))
                    * (exact::qpow(q, mi - 2) + h.clone() * exact::qpow(q, (mi - 3) / 2)),
                half_qm1 * (exact::qpow(q, mi - 1) - h * exact::qpow(q, (mi - 1) / 2)),
            ));
        }
    }
    let mut out = Vec::new();
    for (w, mult) in rows {
        let mult = to_count(&mult, "full-rank row multiplicity")?;
        if mult == 0 {
            continue;
        }
        out.push((to_count(&w, "full-rank row weight")?, mult));
    }
    Ok(out)
}

/// Closed-form complete weight enumerator.
///
/// Five term families: the zero codeword; indices with a nonzero tail
/// component past the rank; indices with companion-form value 0; and two
/// families indexed over the square and nonsquare values `t` that `a *
/// Qhat(b')` takes, whose compositions involve `eta(4t - rho^2)` (negated
/// under [`Convention::Reflected`]) for even rank, and `I(4t - rho^2)` for
/// odd rank (convention-free).
pub fn predicted_cwe(
    ctx: &FieldContext,
    class: &FormClass,
    m: usize,
    a: FieldElement,
    conv: Convention,
) -> Result<CompleteWeightEnumerator, CodeError> {
    guard(class, m, a)?;
    let q = ctx.q();
    let mi = m as i64;
    let r = class.rank() as i64;
    let n = code_length(ctx, class, m, a)?;
    let mut cwe = CompleteWeightEnumerator::new(q, n);

    let add_term = |cwe: &mut CompleteWeightEnumerator,
                    name: &str,
                    comp: &[Rat],
                    mult: u128|
     -> Result<(), CodeError> {
        let mut key = Vec::with_capacity(comp.len());
        let mut sum = 0u128;
        for entry in comp {
            let c = to_count(entry, &format!("{} composition entry", name))?;
            sum += c;
            key.push(c);
        }
        if sum != n {
            return Err(InternalInconsistency(format!(
                "{} composition sums to {}, expected n = {}",
                name, sum, n
            )));
        }
        cwe.add(key, mult);
        Ok(())
    };

    // zero codeword
    {
        let mut comp = vec![exact::int(0); q as usize];
        comp[0] = Rat::from_integer(n.into());
        add_term(&mut cwe, "zero-codeword term", &comp, 1)?;
    }

    // indices with a nonzero component past the rank
    let tail_mult = to_count(
        &(exact::qpow(q, mi) - exact::qpow(q, r)),
        "tail-family multiplicity",
    )?;
    if tail_mult > 0 {
        let entry = match *class {
            FormClass::Even { epsilon, .. } => {
                exact::qpow(q, mi - 2) - exact::int(epsilon as i64) * exact::qpow(q, mi - r / 2 - 2)
            }
            FormClass::Odd { eta_mu, .. } => {
                exact::qpow(q, mi - 2)
                    + exact::int(odd_sign(ctx, eta_mu, a)) * exact::qpow(q, mi - (r + 3) / 2)
            }
        };
        let comp = vec![entry; q as usize];
        add_term(&mut cwe, "tail family", &comp, tail_mult)?;
    }

    // companion-form value zero (and b' != 0)
    let zero_mult = match *class {
        FormClass::Even { epsilon, .. } => {
            exact::qpow(q, r - 1)
                + exact::int(epsilon as i64)
                    * (exact::qpow(q, 1) - exact::int(1))
                    * exact::qpow(q, r / 2 - 1)
                - exact::int(1)
        }
        FormClass::Odd { .. } => exact::qpow(q, r - 1) - exact::int(1),
    };
    let zero_mult = to_count(&zero_mult, "isotropic-family multiplicity")?;
    if zero_mult > 0 {
        let k0 = match *class {
            FormClass::Even { epsilon, .. } => {
                exact::qpow(q, mi - 2) - exact::int(epsilon as i64) * exact::qpow(q, mi - 1 - r / 2)
            }
            FormClass::Odd { eta_mu, .. } => {
                exact::qpow(q, mi - 2)
                    + exact::int(odd_sign(ctx, eta_mu, a)) * exact::qpow(q, mi - (r + 1) / 2)
            }
        };
        let mut comp = vec![exact::qpow(q, mi - 2); q as usize];
        comp[0] = k0;
        add_term(&mut cwe, "isotropic family", &comp, zero_mult)?;
    }

    // families over the nonzero values t of a * Qhat(b'), split by square
    // class via powers of the canonical generator
    let g = ctx.generator();
    let four = ctx.from_int(4);
    match *class {
        FormClass::Even { epsilon, .. } => {
            let mult = to_count(
                &(exact::qpow(q, r - 1) - exact::int(epsilon as i64) * exact::qpow(q, (r - 2) / 2)),
                "even value-family multiplicity",
            )?;
            if mult > 0 {
                for beta in 1..=(q as u64 - 1) / 2 {
                    for (name, t) in [
                        ("square-value family", ctx.pow(g, 2 * beta)),
                        ("nonsquare-value family", ctx.pow(g, 2 * beta + 1)),
                    ] {
                        let four_t = ctx.mul(four, t);
                        let comp: Vec<Rat> = ctx
                            .elements()
                            .map(|rho| {
                                let mut arg = ctx.sub(four_t, ctx.mul(rho, rho));
                                if conv == Convention::Reflected {
                                    arg = ctx.neg(arg);
                                }
                                exact::qpow(q, mi - 2)
                                    + exact::int((epsilon * ctx.eta(arg)) as i64)
                                        * exact::qpow(q, mi - r / 2 - 1)
                            })
                            .collect();
                        add_term(&mut cwe, name, &comp, mult)?;
                    }
                }
            }
        }
        FormClass::Odd { eta_mu, .. } => {
            let h = odd_sign(ctx, eta_mu, a);
            let mult_sq = to_count(
                &(exact::qpow(q, r - 1) + exact::int(h) * exact::qpow(q, (r - 1) / 2)),
                "odd square-value multiplicity",
            )?;
            let mult_ns = to_count(
                &(exact::qpow(q, r - 1) - exact::int(h) * exact::qpow(q, (r - 1) / 2)),
                "odd nonsquare-value multiplicity",
            )?;
            for beta in 1..=(q as u64 - 1) / 2 {
                // t = a * Qhat(b') a nonzero square: eta(mu Qhat) = eta(mu a)
                if mult_sq > 0 {
                    let t = ctx.pow(g, 2 * beta);
                    let four_t = ctx.mul(four, t);
                    let comp: Vec<Rat> = ctx
                        .elements()
                        .map(|rho| {
                            let arg = ctx.sub(four_t, ctx.mul(rho, rho));
                            exact::qpow(q, mi - 2)
                                + exact::int(ctx.i_func(arg) * h) * exact::qpow(q, mi - (r + 3) / 2)
                        })
                        .collect();
                    add_term(&mut cwe, "square-value family", &comp, mult_sq)?;
                }
                // t a nonsquare: eta(mu Qhat) = -eta(mu a), and 4t is never
                // a square so the I argument never vanishes
                if mult_ns > 0 {
                    let t = ctx.pow(g, 2 * beta + 1);
                    let four_t = ctx.mul(four, t);
                    let comp: Vec<Rat> = ctx
                        .elements()
                        .map(|rho| {
                            let arg = ctx.sub(four_t, ctx.mul(rho, rho));
                            exact::qpow(q, mi - 2)
                                - exact::int(ctx.i_func(arg) * h) * exact::qpow(q, mi - (r + 3) / 2)
                        })
                        .collect();
                    add_term(&mut cwe, "nonsquare-value family", &comp, mult_ns)?;
                }
            }
        }
    }

    let total = cwe.total();
    let qm = to_count(&exact::qpow(q, mi), "q^m")?;
    if total != qm {
        return Err(InternalInconsistency(format!(
            "CWE multiplicities sum to {}, expected q^m = {}",
            total, qm
        )));
    }
    Ok(cwe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldContext;

    fn el(v: u32) -> FieldElement {
        FieldElement(v)
    }

    #[test]
    fn odd_rank_table_spot_value() {
        // q=3, m=3, r=3, type II with eta(mu a) = +1, a = 1:
        // n = 12 and weights {0:1, 6:8, 8:6, 10:12}
        let ctx = FieldContext::new(3, 1).unwrap();
        let class = FormClass::odd(3, 1);
        assert_eq!(code_length(&ctx, &class, 3, el(1)).unwrap(), 12);
        let wd = predicted_wd(&ctx, &class, 3, el(1)).unwrap();
        assert_eq!(wd.rows(), vec![(0, 1), (6, 8), (8, 6), (10, 12)]);
    }

    #[test]
    fn even_rank_table_with_zero_weight_row() {
        // q=3, m=3, r=2, type I, a=1: n=6 and a weight-0 row of
        // multiplicity 2 on top of the zero codeword
        let ctx = FieldContext::new(3, 1).unwrap();
        let class = FormClass::even(2, 1);
        assert_eq!(code_length(&ctx, &class, 3, el(1)).unwrap(), 6);
        let wd = predicted_wd(&ctx, &class, 3, el(1)).unwrap();
        assert_eq!(wd.rows(), vec![(0, 3), (4, 18), (6, 6)]);
    }

    #[test]
    fn large_even_case_weights() {
        // q=5, m=r=4, type I, a=1: n=120, w_min=90, w_max=100
        let ctx = FieldContext::new(5, 1).unwrap();
        let class = FormClass::even(4, 1);
        assert_eq!(code_length(&ctx, &class, 4, el(1)).unwrap(), 120);
        let wd = predicted_wd(&ctx, &class, 4, el(1)).unwrap();
        assert_eq!(wd.min_nonzero_weight(), Some(90));
        assert_eq!(wd.max_weight(), Some(100));
        assert_eq!(wd.total(), 625);
    }

    #[test]
    fn rejects_out_of_scope_parameters() {
        let ctx = FieldContext::new(3, 1).unwrap();
        let class = FormClass::even(2, 1);
        assert!(matches!(
            predicted_wd(&ctx, &class, 2, el(0)),
            Err(CodeError::Unsupported(_))
        ));
        assert!(matches!(
            predicted_wd(&ctx, &FormClass::even(0, 1), 2, el(1)),
            Err(CodeError::Unsupported(_))
        ));
    }

    #[test]
    fn cwe_reflected_matches_enumeration_shape() {
        // q=3, m=2, r=2, type I, a=1 under the reflected convention:
        // {(2,0,0): 3, (0,1,1): 6}
        let ctx = FieldContext::new(3, 1).unwrap();
        let class = FormClass::even(2, 1);
        let cwe = predicted_cwe(&ctx, &class, 2, el(1), Convention::Reflected).unwrap();
        assert_eq!(cwe.rows(), vec![(vec![0, 1, 1], 6), (vec![2, 0, 0], 3)]);
    }

    #[test]
    fn cwe_paper_convention_breaks_composition_sum_mod3() {
        let ctx = FieldContext::new(3, 1).unwrap();
        let class = FormClass::even(2, 1);
        let err = predicted_cwe(&ctx, &class, 2, el(1), Convention::Paper).unwrap_err();
        match err {
            CodeError::InternalInconsistency(detail) => {
                assert!(detail.contains("sums to 4, expected n = 2"), "{}", detail);
            }
            other => panic!("expected an internal inconsistency, got {:?}", other),
        }
    }

    #[test]
    fn conventions_agree_when_q_is_1_mod_4() {
        let ctx = FieldContext::new(5, 1).unwrap();
        for class in [FormClass::even(2, 1), FormClass::even(2, -1)] {
            let a = el(1);
            let paper = predicted_cwe(&ctx, &class, 3, a, Convention::Paper).unwrap();
            let reflected = predicted_cwe(&ctx, &class, 3, a, Convention::Reflected).unwrap();
            assert_eq!(paper, reflected);
        }
    }

    #[test]
    fn odd_rank_cwe_is_convention_free() {
        let ctx = FieldContext::new(3, 1).unwrap();
        let class = FormClass::odd(3, -1);
        let paper = predicted_cwe(&ctx, &class, 3, el(1), Convention::Paper).unwrap();
        let reflected = predicted_cwe(&ctx, &class, 3, el(1), Convention::Reflected).unwrap();
        assert_eq!(paper, reflected);
    }

    #[test]
    fn marginal_of_cwe_matches_wd() {
        for (p, e) in [(3u32, 1u32), (5, 1)] {
            let ctx = FieldContext::new(p, e).unwrap();
            for m in 1..=3usize {
                for class in FormClass::all_nondegenerate(m) {
                    for a in ctx.elements().skip(1) {
                        let cwe = predicted_cwe(&ctx, &class, m, a, Convention::Reflected).unwrap();
                        let wd = predicted_wd(&ctx, &class, m, a).unwrap();
                        assert_eq!(
                            cwe.weight_marginal(),
                            wd,
                            "q={} m={} {:?} a={}",
                            ctx.q(),
                            m,
                            class,
                            a
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn full_rank_rows_match_general_table() {
        for (p, e) in [(3u32, 1u32), (5, 1), (7, 1), (3, 2)] {
            let ctx = FieldContext::new(p, e).unwrap();
            for m in 1..=4usize {
                for class in FormClass::all_nondegenerate(m) {
                    if class.rank() != m {
                        continue;
                    }
                    for a in ctx.elements().skip(1) {
                        let mut general = predicted_wd_rows(&ctx, &class, m, a).unwrap();
                        let mut specialized = full_rank_wd_rows(&ctx, &class, m, a).unwrap();
                        general.sort_unstable();
                        specialized.sort_unstable();
                        assert_eq!(general, specialized, "q={} m={} {:?}", ctx.q(), m, class);
                    }
                }
            }
        }
    }
}
