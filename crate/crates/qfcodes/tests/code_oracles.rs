//! Code-level oracles: the field and vector formulations agree under dual
//! bases, the closed-form enumerators match exhaustive enumeration, and the
//! minimality machinery is sound on concrete codes.

use qfcodes::code::{
    brute_cwe, brute_wd, exhaustive_minimality, minimality_report, predicted_cwe, predicted_wd,
    verify, DefiningSet,
};
use qfcodes::field::{ExtContext, FieldContext, FieldElement};
use qfcodes::forms::{Convention, FormClass, QuadForm};
use qfcodes::vecspace;
use qfcodes::EnumBudget;

/// The field formulation `(trace(x d))_{d in D}` equals the vector
/// formulation `(b . d)_{d in D}` when `b` holds the dual-basis coordinates
/// of `x`; exhaustive over towers with `q^m <= 3^6`.
#[test]
fn field_and_vector_formulations_agree() {
    for (p, e, m) in [
        (3u32, 1u32, 3usize),
        (3, 1, 6),
        (3, 2, 3),
        (5, 1, 3),
        (7, 1, 2),
    ] {
        let base = FieldContext::new(p, e).unwrap();
        let ext = ExtContext::new(&base, m).unwrap();
        let basis = ext.polynomial_basis();
        let budget = EnumBudget::default();

        // a quadratic function on the field side and its vector-side form
        let coeffs = vec![ext.element(1), ext.element(ext.size() - 1)];
        let form = QuadForm::from_trace_family(&ext, &coeffs).unwrap();
        let a = base.element(1);
        let ds = DefiningSet::new(&form, a, &budget).unwrap();

        // the field-side defining set must be the same point set: the
        // vector encoding under the polynomial basis is the field encoding
        let mut field_side: Vec<u64> = ext
            .elements()
            .filter(|&x| qfcodes::forms::trace_family_value(&ext, &coeffs, x) == a)
            .map(|x| x.encoding())
            .collect();
        field_side.sort_unstable();
        assert_eq!(field_side, ds.encodings());

        for x in ext.elements().take(200) {
            // dual coordinates of x: b_i = trace(x * basis_i)
            let b: Vec<FieldElement> = basis.iter().map(|&bi| ext.trace(ext.mul(x, bi))).collect();
            let vector_side = ds.codeword(&base, &b);
            let field_word: Vec<FieldElement> = ds
                .encodings()
                .iter()
                .map(|&d| ext.trace(ext.mul(x, ext.element(d))))
                .collect();
            assert_eq!(vector_side, field_word, "tower q={} m={}", base.q(), m);
        }
    }
}

#[test]
fn plane_code_spot_values() {
    let ctx = FieldContext::new(3, 1).unwrap();
    let form = FormClass::even(2, 1).standard_form(&ctx, 2).unwrap();
    let budget = EnumBudget::default();
    let ds = DefiningSet::new(&form, ctx.element(1), &budget).unwrap();
    let cwe = brute_cwe(&ctx, &ds, &budget).unwrap();
    assert_eq!(cwe.rows(), vec![(vec![0, 1, 1], 6), (vec![2, 0, 0], 3)]);
    let predicted = predicted_cwe(
        &ctx,
        &FormClass::even(2, 1),
        2,
        ctx.element(1),
        Convention::Reflected,
    )
    .unwrap();
    assert_eq!(predicted, cwe);
}

#[test]
fn predicted_matches_brute_small_grid() {
    let budget = EnumBudget::default();
    for (p, e) in [(3u32, 1u32), (5, 1)] {
        let ctx = FieldContext::new(p, e).unwrap();
        for m in 1..=3usize {
            for class in FormClass::all_nondegenerate(m) {
                let form = class.standard_form(&ctx, m).unwrap();
                for a in ctx.elements().skip(1) {
                    let ds = DefiningSet::new(&form, a, &budget).unwrap();
                    let brute = brute_cwe(&ctx, &ds, &budget).unwrap();
                    let predicted = predicted_cwe(&ctx, &class, m, a, Convention::Reflected)
                        .unwrap_or_else(|e| {
                            panic!("q={} m={} {:?} a={}: {}", ctx.q(), m, class, a, e)
                        });
                    assert_eq!(
                        predicted,
                        brute,
                        "q={} m={} {:?} a={}",
                        ctx.q(),
                        m,
                        class,
                        a
                    );
                    let wd = predicted_wd(&ctx, &class, m, a).unwrap();
                    assert_eq!(wd, brute.weight_marginal());
                    assert_eq!(wd.n, ds.n() as u128);
                }
            }
        }
    }
}

#[test]
fn wd_is_convention_free_even_when_cwe_is_not() {
    // q = 3 (mod 4): the printed CWE fails, but the weight table still
    // matches enumeration
    let ctx = FieldContext::new(7, 1).unwrap();
    let budget = EnumBudget::default();
    let class = FormClass::even(2, -1);
    let form = class.standard_form(&ctx, 2).unwrap();
    for a in ctx.elements().skip(1) {
        let ds = DefiningSet::new(&form, a, &budget).unwrap();
        let wd = brute_wd(&ctx, &ds, &budget).unwrap();
        assert_eq!(predicted_wd(&ctx, &class, 2, a).unwrap(), wd);
    }
}

#[test]
fn verify_reports_roundtrip() {
    let ctx = FieldContext::new(5, 1).unwrap();
    let form = FormClass::even(2, 1).standard_form(&ctx, 3).unwrap();
    let report = verify(&form, ctx.element(2), &EnumBudget::default()).unwrap();
    assert!(report.verified());
    // serialization is stable and machine-readable
    let json = serde_json::to_string(&report).unwrap();
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["class"]["type"], "I");
    assert_eq!(value["convention"]["reflected"], "match");
}

#[test]
fn minimality_examples_end_to_end() {
    // positive case: q=5, m=r=4, type I, all nonzero codewords minimal
    let ctx = FieldContext::new(5, 1).unwrap();
    let class = FormClass::even(4, 1);
    let rep = minimality_report(&ctx, &class, 4, ctx.element(1)).unwrap();
    assert!(rep.ratio_exceeds && rep.condition_agrees_with_ratio);
    let form = class.standard_form(&ctx, 4).unwrap();
    let budget = EnumBudget::default();
    let ds = DefiningSet::new(&form, ctx.element(1), &budget).unwrap();
    let scan = exhaustive_minimality(&ctx, &ds, &budget, 0).unwrap();
    assert_eq!(scan.violations, 0);
    assert!(scan.all_minimal_confirmed);

    // negative control: q=3, m=r=4, type I: ratio exactly (q-1)/q
    let ctx3 = FieldContext::new(3, 1).unwrap();
    let rep3 = minimality_report(&ctx3, &class, 4, ctx3.element(1)).unwrap();
    assert!(!rep3.ratio_exceeds);
    assert_eq!((rep3.w_min, rep3.w_max), (12, 18));
}

#[test]
fn ratio_soundness_where_feasible() {
    // whenever the ratio criterion certifies minimality, the exhaustive
    // scan must find zero violations
    let budget = EnumBudget::default();
    for (p, e) in [(3u32, 1u32), (5, 1)] {
        let ctx = FieldContext::new(p, e).unwrap();
        for m in 1..=4usize {
            for class in FormClass::all_nondegenerate(m) {
                let form = class.standard_form(&ctx, m).unwrap();
                for a in ctx.elements().skip(1) {
                    let Ok(rep) = minimality_report(&ctx, &class, m, a) else {
                        continue;
                    };
                    if !rep.ratio_exceeds {
                        continue;
                    }
                    let ds = DefiningSet::new(&form, a, &budget).unwrap();
                    let scan = exhaustive_minimality(&ctx, &ds, &budget, 0).unwrap();
                    assert_eq!(
                        scan.violations,
                        0,
                        "ratio-certified code has a covering pair: q={} m={} {:?} a={}",
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
fn a_zero_enumeration_supported() {
    // no closed forms for a = 0, but enumeration works and includes 0 in D
    let ctx = FieldContext::new(3, 1).unwrap();
    let form = FormClass::even(2, 1).standard_form(&ctx, 2).unwrap();
    let budget = EnumBudget::default();
    let ds = DefiningSet::new(&form, FieldElement::ZERO, &budget).unwrap();
    assert!(ds.encodings().contains(&0));
    assert_eq!(ds.n(), 5);
    let cwe = brute_cwe(&ctx, &ds, &budget).unwrap();
    assert_eq!(cwe.total(), 9);
    assert!(cwe.compositions_sum_to_n());
}

#[test]
fn degenerate_code_multiset_semantics() {
    // rank 2 in m = 3: 3 index vectors per distinct codeword, and the
    // weight-0 row has multiplicity q^(m - dim)
    let ctx = FieldContext::new(3, 1).unwrap();
    let form = FormClass::even(2, 1).standard_form(&ctx, 3).unwrap();
    let budget = EnumBudget::default();
    let ds = DefiningSet::new(&form, ctx.element(1), &budget).unwrap();
    let wd = brute_wd(&ctx, &ds, &budget).unwrap();
    assert_eq!(wd.rows(), vec![(0, 3), (4, 18), (6, 6)]);
    assert_eq!(ds.dimension_actual(&ctx), 2);
    let report = verify(&form, ctx.element(1), &budget).unwrap();
    assert_eq!(report.dimension_actual, 2);
    assert!(report
        .warnings
        .iter()
        .any(|w| w.contains("distinct codewords")));
}

#[test]
fn codebook_is_linear_in_the_index() {
    let ctx = FieldContext::new(3, 2).unwrap();
    let form = FormClass::odd(1, -1).standard_form(&ctx, 2).unwrap();
    let budget = EnumBudget::default();
    let ds = DefiningSet::new(&form, ctx.fixed_nonsquare(), &budget).unwrap();
    for be1 in 0..81u64 {
        let b1 = vecspace::decode(9, 2, be1);
        let b2 = vecspace::decode(9, 2, (be1 * 37 + 5) % 81);
        let c1 = ds.codeword(&ctx, &b1);
        let c2 = ds.codeword(&ctx, &b2);
        let sum: Vec<FieldElement> = b1
            .iter()
            .zip(b2.iter())
            .map(|(&x, &y)| ctx.add(x, y))
            .collect();
        let cs = ds.codeword(&ctx, &sum);
        for i in 0..ds.n() {
            assert_eq!(cs[i], ctx.add(c1[i], c2[i]));
        }
    }
}
