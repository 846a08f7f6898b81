//! Acceptance suite: every release gate in one place, each printing a
//! single PASS/FAIL line (run with `--nocapture` to see them).

use std::panic::{catch_unwind, resume_unwind, UnwindSafe};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qfcodes::code::{
    brute_cwe, full_rank_wd_rows, exhaustive_minimality, minimality_report, predicted_cwe,
    predicted_wd, predicted_wd_rows, DefiningSet,
};
use qfcodes::field::{ExtContext, FieldContext, FieldElement};
use qfcodes::forms::{
    brute_na_all, brute_nav_all, count_na, count_nav, Convention, FormClass, QuadForm,
};
use qfcodes::matrix::Matrix;
use qfcodes::vecspace;
use qfcodes::EnumBudget;

fn criterion<F: FnOnce() + UnwindSafe>(number: usize, label: &str, body: F) {
    match catch_unwind(body) {
        Ok(()) => println!("[acceptance] criterion {number} ({label}): PASS"),
        Err(e) => {
            println!("[acceptance] criterion {number} ({label}): FAIL");
            resume_unwind(e);
        }
    }
}

/// The verification grid: (q, p, e, max m) cells.
const GRID: &[(u32, u32, u32, usize)] = &[
    (3, 3, 1, 4),
    (5, 5, 1, 4),
    (7, 7, 1, 4),
    (9, 3, 2, 4),
    // deeper sweep over the smallest field
    (3, 3, 1, 6),
];

fn classes_up_to(m: usize) -> Vec<FormClass> {
    let mut out = vec![FormClass::even(0, 1)];
    out.extend(FormClass::all_nondegenerate(m));
    out
}

#[test]
fn criterion_1_level_set_counts() {
    criterion(1, "closed-form level-set counts vs enumeration", || {
        let budget = EnumBudget::default();
        for &(q, p, e, mmax) in GRID {
            let ctx = FieldContext::new(p, e).unwrap();
            assert_eq!(ctx.q(), q);
            for m in 1..=mmax {
                for class in classes_up_to(m) {
                    let form = class.standard_form(&ctx, m).unwrap();
                    let hist = brute_na_all(&form, &budget).unwrap();
                    for a in ctx.elements() {
                        assert_eq!(
                            count_na(&ctx, &class, m, a).unwrap(),
                            hist[a.encoding() as usize] as u128,
                            "q={q} m={m} {class:?} a={a}"
                        );
                    }
                }
            }
        }
    });
}

/// Representative index vectors covering every case split of the joint
/// count: nonzero tail; zero tail with companion value zero, a nonzero
/// square, and a nonsquare.
fn representative_bs(ctx: &FieldContext, class: &FormClass, m: usize) -> Vec<Vec<FieldElement>> {
    let q = ctx.q();
    let r = class.rank();
    let mut reps = Vec::new();
    if r < m {
        let mut tail = vec![FieldElement::ZERO; m];
        tail[r] = FieldElement::ONE;
        reps.push(tail.clone());
        if r >= 1 {
            let mut mixed = tail;
            mixed[0] = FieldElement::ONE;
            reps.push(mixed);
        }
    }
    if r >= 1 {
        let hat = class.hat_form(ctx).unwrap();
        let mut want_zero = true;
        let mut want_square = true;
        let mut want_nonsquare = true;
        for enc in 1..vecspace::size(q, r).unwrap() {
            if !(want_zero || want_square || want_nonsquare) {
                break;
            }
            let head = vecspace::decode(q, r, enc);
            let w = hat.eval(&head).unwrap();
            let slot = match ctx.eta(w) {
                0 => &mut want_zero,
                1 => &mut want_square,
                _ => &mut want_nonsquare,
            };
            if *slot {
                *slot = false;
                let mut b = head;
                b.resize(m, FieldElement::ZERO);
                reps.push(b);
            }
        }
    }
    reps
}

#[test]
fn criterion_2_joint_counts_and_adjudication() {
    criterion(
        2,
        "joint solution counts and convention adjudication",
        || {
            let budget = EnumBudget::default();
            for &(q, p, e, mmax) in GRID {
                let ctx = FieldContext::new(p, e).unwrap();
                for m in 1..=mmax {
                    for class in classes_up_to(m) {
                        let form = class.standard_form(&ctx, m).unwrap();
                        let mut paper_mismatch = false;
                        let mut eta_arm_exercised = false;
                        for b in representative_bs(&ctx, &class, m) {
                            let joint = brute_nav_all(&form, &b, &budget).unwrap();
                            if class.epsilon().is_some()
                                && class.rank() >= 1
                                && b[class.rank()..].iter().all(|c| c.is_zero())
                            {
                                let hat = class.hat_form(&ctx).unwrap();
                                if !hat.eval(&b[..class.rank()]).unwrap().is_zero() {
                                    eta_arm_exercised = true;
                                }
                            }
                            for a in ctx.elements() {
                                for v in ctx.elements() {
                                    let observed =
                                        joint[(a.encoding() * q + v.encoding()) as usize] as u128;
                                    let reflected =
                                        count_nav(&ctx, &class, m, a, v, &b, Convention::Reflected)
                                            .unwrap();
                                    assert_eq!(
                                        reflected, observed,
                                        "reflected q={q} m={m} {class:?} a={a} v={v} b={b:?}"
                                    );
                                    let paper =
                                        count_nav(&ctx, &class, m, a, v, &b, Convention::Paper)
                                            .unwrap();
                                    if paper != observed {
                                        paper_mismatch = true;
                                    }
                                }
                            }
                        }
                        if q % 4 == 1 {
                            assert!(
                                !paper_mismatch,
                                "printed convention must match when q = 1 (mod 4): q={q} {class:?}"
                            );
                        } else if eta_arm_exercised {
                            assert!(
                                paper_mismatch,
                                "printed convention must fail on an exercised character arm \
                             when q = 3 (mod 4): q={q} m={m} {class:?}"
                            );
                        }
                    }
                }
            }
        },
    );
}

#[test]
fn criterion_3_odd_rank_spot_value() {
    criterion(3, "odd-rank table spot value", || {
        let ctx = FieldContext::new(3, 1).unwrap();
        let class = FormClass::odd(3, 1);
        let a = ctx.element(1);
        let budget = EnumBudget::default();
        let form = class.standard_form(&ctx, 3).unwrap();
        let ds = DefiningSet::new(&form, a, &budget).unwrap();
        assert_eq!(ds.n(), 12);
        let wd = predicted_wd(&ctx, &class, 3, a).unwrap();
        assert_eq!(wd.rows(), vec![(0, 1), (6, 8), (8, 6), (10, 12)]);
        let brute = brute_cwe(&ctx, &ds, &budget).unwrap();
        assert_eq!(brute.weight_marginal(), wd);
    });
}

#[test]
fn criterion_4_even_rank_spot_value_and_inconsistency() {
    criterion(
        4,
        "even-rank CWE spot value and printed-sign inconsistency",
        || {
            let ctx = FieldContext::new(3, 1).unwrap();
            let class = FormClass::even(2, 1);
            let a = ctx.element(1);
            let budget = EnumBudget::default();
            let form = class.standard_form(&ctx, 2).unwrap();
            let ds = DefiningSet::new(&form, a, &budget).unwrap();
            let brute = brute_cwe(&ctx, &ds, &budget).unwrap();
            assert_eq!(brute.rows(), vec![(vec![0, 1, 1], 6), (vec![2, 0, 0], 3)]);
            let reflected = predicted_cwe(&ctx, &class, 2, a, Convention::Reflected).unwrap();
            assert_eq!(reflected, brute);
            match predicted_cwe(&ctx, &class, 2, a, Convention::Paper) {
                Err(qfcodes::code::CodeError::InternalInconsistency(detail)) => {
                    assert!(detail.contains("expected n"), "{detail}");
                }
                other => {
                    panic!("printed convention must violate the composition sum, got {other:?}")
                }
            }
        },
    );
}

#[test]
fn criterion_5_full_cwe_sweep() {
    criterion(
        5,
        "closed-form CWE equals enumeration across the grid",
        || {
            let budget = EnumBudget::default();
            for &(q, p, e, mmax) in GRID {
                let ctx = FieldContext::new(p, e).unwrap();
                for m in 1..=mmax {
                    for class in FormClass::all_nondegenerate(m) {
                        let form = class.standard_form(&ctx, m).unwrap();
                        for a in ctx.elements().skip(1) {
                            let ds = DefiningSet::new(&form, a, &budget).unwrap();
                            let brute = brute_cwe(&ctx, &ds, &budget).unwrap();
                            let predicted =
                                predicted_cwe(&ctx, &class, m, a, Convention::Reflected).unwrap();
                            assert_eq!(predicted, brute, "q={q} m={m} {class:?} a={a}");
                            let wd = predicted_wd(&ctx, &class, m, a).unwrap();
                            assert_eq!(predicted.weight_marginal(), wd);
                            let qm = (q as u128).pow(m as u32);
                            assert_eq!(predicted.total(), qm);
                            assert_eq!(brute.total(), qm);
                        }
                    }
                }
            }
        },
    );
}

#[test]
fn criterion_6_full_rank_tables() {
    criterion(6, "full-rank two-weight/three-weight tables", || {
        for &(q, p, e, mmax) in GRID {
            let ctx = FieldContext::new(p, e).unwrap();
            for m in 1..=mmax {
                for class in FormClass::all_nondegenerate(m) {
                    if class.rank() != m {
                        continue;
                    }
                    for a in ctx.elements().skip(1) {
                        let mut general = predicted_wd_rows(&ctx, &class, m, a).unwrap();
                        let mut specialized = full_rank_wd_rows(&ctx, &class, m, a).unwrap();
                        general.sort_unstable();
                        specialized.sort_unstable();
                        assert_eq!(
                            general, specialized,
                            "row-for-row q={q} m={m} {class:?} a={a}"
                        );

                        // the generic weight counts, away from the known
                        // degenerations (m = 1, and the q=3 hyperbolic
                        // plane where one table weight collapses to 0)
                        let degenerate = m == 1 || (q == 3 && m == 2 && class.epsilon() == Some(1));
                        if degenerate {
                            continue;
                        }
                        let wd = predicted_wd(&ctx, &class, m, a).unwrap();
                        let expected = if m % 2 == 0 { 2 } else { 3 };
                        assert_eq!(
                            wd.nonzero_weight_count(),
                            expected,
                            "q={q} m={m} {class:?} a={a}"
                        );
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_7_minimality() {
    criterion(
        7,
        "minimal-codeword ratio criterion with covering scan",
        || {
            let budget = EnumBudget::default();
            // positive case: q=5, m=r=4, type I, a=1
            let ctx = FieldContext::new(5, 1).unwrap();
            let class = FormClass::even(4, 1);
            let a = ctx.element(1);
            let rep = minimality_report(&ctx, &class, 4, a).unwrap();
            assert_eq!((rep.w_min, rep.w_max), (90, 100));
            assert!(rep.ratio_exceeds);
            assert!(rep.parameter_condition && rep.condition_agrees_with_ratio);
            let form = class.standard_form(&ctx, 4).unwrap();
            let ds = DefiningSet::new(&form, a, &budget).unwrap();
            let scan = exhaustive_minimality(&ctx, &ds, &budget, 0).unwrap();
            assert_eq!(scan.mode, qfcodes::code::ScanMode::Exhaustive);
            assert_eq!(scan.violations, 0);
            assert!(scan.all_minimal_confirmed);

            // negative control: q=3, m=r=4, type I: the ratio is exactly
            // (q-1)/q, so the strict criterion fails
            let ctx3 = FieldContext::new(3, 1).unwrap();
            let rep3 = minimality_report(&ctx3, &class, 4, ctx3.element(1)).unwrap();
            assert_eq!((rep3.w_min, rep3.w_max), (12, 18));
            assert!(!rep3.ratio_exceeds);
            assert!(!rep3.parameter_condition);
            assert!(rep3.condition_agrees_with_ratio);
        },
    );
}

#[test]
fn criterion_8_congruence_invariance() {
    criterion(8, "invariance under random congruence transforms", || {
        let ctx = FieldContext::new(3, 1).unwrap();
        let m = 4;
        let a = ctx.element(1);
        let budget = EnumBudget::default();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for class in classes_up_to(m) {
            let base_form = class.standard_form(&ctx, m).unwrap();
            let base_prediction = if class.rank() >= 1 {
                Some(predicted_cwe(&ctx, &class, m, a, Convention::Reflected).unwrap())
            } else {
                None
            };
            for _ in 0..100 {
                let t = loop {
                    let rows: Vec<Vec<FieldElement>> = (0..m)
                        .map(|_| (0..m).map(|_| ctx.element(rng.gen_range(0..3))).collect())
                        .collect();
                    let t = Matrix::from_rows(rows);
                    if t.inverse(&ctx).is_some() {
                        break t;
                    }
                };
                let moved = base_form.compose(&t);
                assert_eq!(moved.classify(), class);
                let st = moved.standardize().unwrap();
                assert_eq!(st.class, class);
                assert!(st.gram_identity_holds(&moved), "{class:?}");
                if let Some(expected) = &base_prediction {
                    // the class is the whole input to the closed forms, so
                    // the prediction is transform-invariant; spot-check one
                    // enumeration per class against it
                    let predicted =
                        predicted_cwe(&ctx, &st.class, m, a, Convention::Reflected).unwrap();
                    assert_eq!(&predicted, expected);
                }
            }
            // one enumerated cross-check per class on a transformed form
            if class.rank() >= 1 {
                let t = loop {
                    let rows: Vec<Vec<FieldElement>> = (0..m)
                        .map(|_| (0..m).map(|_| ctx.element(rng.gen_range(0..3))).collect())
                        .collect();
                    let t = Matrix::from_rows(rows);
                    if t.inverse(&ctx).is_some() {
                        break t;
                    }
                };
                let moved = base_form.compose(&t);
                let ds = DefiningSet::new(&moved, a, &budget).unwrap();
                let brute = brute_cwe(&ctx, &ds, &budget).unwrap();
                assert_eq!(brute, base_prediction.unwrap(), "{class:?}");
            }
        }
    });
}

#[test]
fn criterion_9_field_layer() {
    criterion(9, "field-layer character and trace identities", || {
        // eta multiplicativity and zero sum, exhaustive for q <= 81
        for (p, e) in [
            (3u32, 1u32),
            (5, 1),
            (7, 1),
            (3, 2),
            (11, 1),
            (13, 1),
            (5, 2),
            (3, 3),
            (7, 2),
            (3, 4),
        ] {
            let f = FieldContext::new(p, e).unwrap();
            for x in f.elements() {
                for y in f.elements() {
                    assert_eq!(f.eta(f.mul(x, y)), f.eta(x) * f.eta(y));
                }
                if !x.is_zero() {
                    assert_eq!(f.pow(x, f.q() as u64 - 1), FieldElement::ONE);
                }
            }
            assert_eq!(f.elements().map(|x| f.eta(x) as i64).sum::<i64>(), 0);
        }
        // trace fiber uniformity and dual-basis orthogonality, q^m <= 3^8
        for (p, e, m) in [
            (3, 1, 8),
            (3, 2, 4),
            (5, 1, 4),
            (7, 1, 3),
            (3, 3, 2),
            (3, 4, 2),
            (5, 2, 2),
            (7, 2, 2),
        ] {
            let base = FieldContext::new(p, e).unwrap();
            let ext = ExtContext::new(&base, m).unwrap();
            let mut counts = vec![0u64; base.q() as usize];
            for x in ext.elements() {
                counts[ext.trace(x).encoding() as usize] += 1;
            }
            let expected = ext.size() / base.q() as u64;
            assert!(counts.iter().all(|&c| c == expected));

            let basis = ext.polynomial_basis();
            let dual = ext.dual_basis(&basis).unwrap();
            for (i, &alpha) in dual.iter().enumerate() {
                for (j, &beta) in basis.iter().enumerate() {
                    let t = ext.trace(ext.mul(alpha, beta));
                    assert_eq!(t.encoding(), u32::from(i == j));
                }
            }
        }
    });
}

/// The spec for the grid itself: every closed form ties back to an oracle.
#[test]
fn grid_is_what_it_claims() {
    // q values factor as stated and the deep-sweep entry reuses q = 3
    for &(q, p, e, _) in GRID {
        assert_eq!((p as u64).pow(e), q as u64);
    }
    // quadratic-form sanity: the built-in family produces forms the
    // pipeline can classify end to end (tower field included)
    let base = FieldContext::new(3, 2).unwrap();
    let ext = ExtContext::new(&base, 2).unwrap();
    let form = QuadForm::from_trace_family(&ext, &[ext.element(1)]).unwrap();
    let st = form.standardize().unwrap();
    assert!(st.gram_identity_holds(&form));
}
