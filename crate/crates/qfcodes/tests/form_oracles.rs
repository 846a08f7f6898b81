//! Brute-force validation of the closed-form solution counts and of the
//! classification/standardization machinery.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qfcodes::field::{FieldContext, FieldElement};
use qfcodes::forms::{
    brute_na_all, brute_nav_all, count_na, count_nav, Convention, FormClass, QuadForm,
};
use qfcodes::matrix::Matrix;
use qfcodes::vecspace;
use qfcodes::EnumBudget;

fn all_classes(m: usize) -> Vec<FormClass> {
    let mut classes = vec![FormClass::even(0, 1)];
    classes.extend(FormClass::all_nondegenerate(m));
    classes
}

#[test]
fn level_set_counts_match_brute_force() {
    let budget = EnumBudget::default();
    for (p, e) in [(3u32, 1u32), (5, 1)] {
        let ctx = FieldContext::new(p, e).unwrap();
        for m in 1..=3usize {
            for class in all_classes(m) {
                let form = class.standard_form(&ctx, m).unwrap();
                let hist = brute_na_all(&form, &budget).unwrap();
                for a in ctx.elements() {
                    assert_eq!(
                        count_na(&ctx, &class, m, a).unwrap(),
                        hist[a.encoding() as usize] as u128
                    );
                }
            }
        }
    }
}

/// The full adjudication sweep at small scale: every class, every nonzero
/// index vector, every (a, v). The reflected convention must match
/// enumeration everywhere; the printed one exactly when q = 1 (mod 4).
#[test]
fn joint_counts_full_grid_adjudication() {
    let budget = EnumBudget::default();
    for (p, e) in [(3u32, 1u32), (5, 1)] {
        let ctx = FieldContext::new(p, e).unwrap();
        let q = ctx.q();
        for m in 1..=3usize {
            for class in all_classes(m) {
                let form = class.standard_form(&ctx, m).unwrap();
                let mut paper_all_match = true;
                for b_enc in 1..vecspace::size(q, m).unwrap() {
                    let b = vecspace::decode(q, m, b_enc);
                    let joint = brute_nav_all(&form, &b, &budget).unwrap();
                    for a in ctx.elements() {
                        for v in ctx.elements() {
                            let observed =
                                joint[(a.encoding() * q + v.encoding()) as usize] as u128;
                            let reflected =
                                count_nav(&ctx, &class, m, a, v, &b, Convention::Reflected)
                                    .unwrap();
                            assert_eq!(
                                reflected, observed,
                                "reflected q={} m={} {:?} a={} v={} b={:?}",
                                q, m, class, a, v, b
                            );
                            let paper =
                                count_nav(&ctx, &class, m, a, v, &b, Convention::Paper).unwrap();
                            if paper != observed {
                                paper_all_match = false;
                            }
                        }
                    }
                }
                if q % 4 == 1 {
                    assert!(
                        paper_all_match,
                        "conventions coincide when q = 1 (mod 4): q={} {:?}",
                        q, class
                    );
                }
            }
        }
    }
}

#[test]
fn paper_convention_fails_somewhere_mod3() {
    // one concrete counterexample pinned down by hand: q=3, plane x1x2,
    // b=(1,1), a=2, v=0 enumerates to 2, printed form gives 0
    let ctx = FieldContext::new(3, 1).unwrap();
    let class = FormClass::even(2, 1);
    let b = [FieldElement::ONE, FieldElement::ONE];
    let a = ctx.element(2);
    let v = FieldElement::ZERO;
    let form = class.standard_form(&ctx, 2).unwrap();
    let observed =
        qfcodes::forms::brute_nav(&form, a, v, &b, &EnumBudget::default()).unwrap() as u128;
    assert_eq!(observed, 2);
    assert_eq!(
        count_nav(&ctx, &class, 2, a, v, &b, Convention::Reflected).unwrap(),
        2
    );
    assert_eq!(
        count_nav(&ctx, &class, 2, a, v, &b, Convention::Paper).unwrap(),
        0
    );
}

#[test]
fn fiber_sums_reproduce_level_counts() {
    let ctx = FieldContext::new(5, 1).unwrap();
    for m in 1..=3usize {
        for class in all_classes(m) {
            for b_enc in 1..vecspace::size(5, m).unwrap() {
                let b = vecspace::decode(5, m, b_enc);
                for a in ctx.elements() {
                    let total: u128 = ctx
                        .elements()
                        .map(|v| {
                            count_nav(&ctx, &class, m, a, v, &b, Convention::Reflected).unwrap()
                        })
                        .sum();
                    assert_eq!(total, count_na(&ctx, &class, m, a).unwrap());
                }
            }
        }
    }
}

fn random_invertible(ctx: &FieldContext, m: usize, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let rows: Vec<Vec<FieldElement>> = (0..m)
            .map(|_| {
                (0..m)
                    .map(|_| ctx.element(rng.gen_range(0..ctx.q())))
                    .collect()
            })
            .collect();
        let t = Matrix::from_rows(rows);
        if t.inverse(ctx).is_some() {
            return t;
        }
    }
}

#[test]
fn classification_invariant_under_congruence() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for (p, e) in [(3u32, 1u32), (5, 1), (3, 2)] {
        let ctx = FieldContext::new(p, e).unwrap();
        let m = 3;
        for class in all_classes(m) {
            let form = class.standard_form(&ctx, m).unwrap();
            for _ in 0..25 {
                let t = random_invertible(&ctx, m, &mut rng);
                let moved = form.compose(&t);
                assert_eq!(moved.classify(), class, "q={} {:?}", ctx.q(), class);
                let st = moved.standardize().unwrap();
                assert_eq!(st.class, class);
                assert!(st.gram_identity_holds(&moved));
            }
        }
    }
}

#[test]
fn transformed_index_vectors_keep_joint_counts() {
    // for a scrambled form, counting through the standardization transform:
    // Q(x) = Qstd(Tx) and b.x = (T^-t b).(Tx)
    let ctx = FieldContext::new(3, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let budget = EnumBudget::default();
    let m = 3;
    for class in FormClass::all_nondegenerate(m) {
        let base = class.standard_form(&ctx, m).unwrap();
        let t = random_invertible(&ctx, m, &mut rng);
        let moved = base.compose(&t);
        let st = moved.standardize().unwrap();
        assert_eq!(st.class, class);
        for b_enc in 1..27u64 {
            let b = vecspace::decode(3, m, b_enc);
            let joint = brute_nav_all(&moved, &b, &budget).unwrap();
            // transform b into standard coordinates: with y = T x the
            // functional b.x becomes (T^-t b).y
            let tinv = st.transform.inverse(&ctx).unwrap();
            let b_std = tinv.transpose().mul_vec(&ctx, &b);
            for a in ctx.elements() {
                for v in ctx.elements() {
                    let predicted =
                        count_nav(&ctx, &st.class, m, a, v, &b_std, Convention::Reflected).unwrap();
                    assert_eq!(
                        predicted,
                        joint[(a.encoding() * 3 + v.encoding()) as usize] as u128
                    );
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_forms_standardize_exactly(seed in 0u64..1_000_000) {
        let ctx = FieldContext::new(5, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = 3;
        let mut entries = Vec::new();
        for i in 0..m {
            for j in i..m {
                entries.push((i, j, ctx.element(rng.gen_range(0..5))));
            }
        }
        let form = QuadForm::new(ctx.clone(), m, &entries).unwrap();
        let st = form.standardize().unwrap();
        prop_assert_eq!(st.class, form.classify());
        prop_assert!(st.gram_identity_holds(&form));
        // rank from the radical agrees with the class rank
        prop_assert_eq!(form.rank(), st.class.rank());
    }
}
