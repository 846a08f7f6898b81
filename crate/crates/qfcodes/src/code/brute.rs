//! Exhaustive enumeration of the full codebook: the complete weight
//! enumerator over all `q^m` index vectors `b`, computed with multiset
//! semantics. This is the independent oracle the closed forms are checked
//! against.

use std::collections::BTreeMap;

use crate::budget::EnumBudget;
use crate::field::FieldContext;
use crate::parallel;
use crate::vecspace;

use super::{CodeError, CompleteWeightEnumerator, DefiningSet, WeightDistribution};

type CweMap = BTreeMap<Vec<u128>, u128>;

fn check_budget(ds: &DefiningSet, budget: &EnumBudget) -> Result<u64, CodeError> {
    let total = vecspace::size(ds.q(), ds.m()).ok_or(CodeError::SizeLimit {
        requested: u128::MAX,
        limit: budget.max_vectors as u128,
    })?;
    if total > budget.max_vectors {
        return Err(CodeError::SizeLimit {
            requested: total as u128,
            limit: budget.max_vectors as u128,
        });
    }
    let work = total.saturating_mul(ds.n().max(1) as u64);
    if work > budget.max_work {
        return Err(CodeError::SizeLimit {
            requested: work as u128,
            limit: budget.max_work as u128,
        });
    }
    Ok(total)
}

fn cwe_chunk(ctx: &FieldContext, ds: &DefiningSet, start: u64, end: u64) -> CweMap {
    let q = ds.q();
    let m = ds.m();
    let mut map = CweMap::new();
    let mut b = vecspace::decode(q, m, start);
    let mut comp = vec![0u32; q as usize];
    for _ in start..end {
        comp.fill(0);
        for d in ds.elements() {
            comp[ctx.dot(&b, d).encoding() as usize] += 1;
        }
        let key: Vec<u128> = comp.iter().map(|&c| c as u128).collect();
        *map.entry(key).or_insert(0) += 1;
        vecspace::increment(q, &mut b);
    }
    map
}

fn merge_maps(mut a: CweMap, b: CweMap) -> CweMap {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Complete weight enumerator of `C_D` by exhaustive enumeration over `b`.
pub fn brute_cwe(
    ctx: &FieldContext,
    ds: &DefiningSet,
    budget: &EnumBudget,
) -> Result<CompleteWeightEnumerator, CodeError> {
    let total = check_budget(ds, budget)?;
    let counts = parallel::chunk_reduce(total, |s, e| cwe_chunk(ctx, ds, s, e), merge_maps)
        .unwrap_or_default();
    Ok(CompleteWeightEnumerator {
        q: ds.q(),
        n: ds.n() as u128,
        counts,
    })
}

/// Sequential twin of [`brute_cwe`] (used by the benchmarks).
pub fn brute_cwe_seq(
    ctx: &FieldContext,
    ds: &DefiningSet,
    budget: &EnumBudget,
) -> Result<CompleteWeightEnumerator, CodeError> {
    let total = check_budget(ds, budget)?;
    let counts =
        parallel::chunk_reduce_seq(total, |s, e| cwe_chunk(ctx, ds, s, e)).unwrap_or_default();
    Ok(CompleteWeightEnumerator {
        q: ds.q(),
        n: ds.n() as u128,
        counts,
    })
}

/// Weight distribution as the marginal of the enumerated CWE.
pub fn brute_wd(
    ctx: &FieldContext,
    ds: &DefiningSet,
    budget: &EnumBudget,
) -> Result<WeightDistribution, CodeError> {
    Ok(brute_cwe(ctx, ds, budget)?.weight_marginal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldContext, FieldElement};
    use crate::forms::{FormClass, QuadForm};

    #[test]
    fn plane_cwe_f3() {
        let ctx = FieldContext::new(3, 1).unwrap();
        let form = QuadForm::new(ctx.clone(), 2, &[(0, 1, FieldElement::ONE)]).unwrap();
        let ds = DefiningSet::new(&form, ctx.element(1), &EnumBudget::default()).unwrap();
        let cwe = brute_cwe(&ctx, &ds, &EnumBudget::default()).unwrap();
        let rows = cwe.rows();
        assert_eq!(
            rows,
            vec![(vec![0, 1, 1], 6), (vec![2, 0, 0], 3)],
            "multiset CWE over 9 index vectors"
        );
        assert_eq!(cwe.total(), 9);
        assert!(cwe.compositions_sum_to_n());
    }

    #[test]
    fn odd_rank_weight_marginal() {
        // x1 x2 + x3^2 over F_3, a = 1: weights {0:1, 6:8, 8:6, 10:12}
        let ctx = FieldContext::new(3, 1).unwrap();
        let form = FormClass::odd(3, 1).standard_form(&ctx, 3).unwrap();
        let ds = DefiningSet::new(&form, ctx.element(1), &EnumBudget::default()).unwrap();
        let wd = brute_wd(&ctx, &ds, &EnumBudget::default()).unwrap();
        assert_eq!(wd.rows(), vec![(0, 1), (6, 8), (8, 6), (10, 12)]);
        assert_eq!(wd.total(), 27);
    }

    #[test]
    fn degenerate_zero_rank() {
        let ctx = FieldContext::new(3, 1).unwrap();
        let form = QuadForm::zero(ctx.clone(), 2);
        let ds = DefiningSet::new(&form, ctx.element(1), &EnumBudget::default()).unwrap();
        let cwe = brute_cwe(&ctx, &ds, &EnumBudget::default()).unwrap();
        // length-0 code: every b contributes the empty composition
        assert_eq!(cwe.rows(), vec![(vec![0, 0, 0], 9)]);
    }

    #[test]
    fn seq_matches_parallel() {
        let ctx = FieldContext::new(5, 1).unwrap();
        let form = FormClass::even(2, -1).standard_form(&ctx, 3).unwrap();
        let ds = DefiningSet::new(&form, ctx.element(3), &EnumBudget::default()).unwrap();
        let a = brute_cwe(&ctx, &ds, &EnumBudget::default()).unwrap();
        let b = brute_cwe_seq(&ctx, &ds, &EnumBudget::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn work_budget_enforced() {
        let ctx = FieldContext::new(5, 1).unwrap();
        let form = FormClass::even(4, 1).standard_form(&ctx, 4).unwrap();
        let ds = DefiningSet::new(&form, ctx.element(1), &EnumBudget::default()).unwrap();
        let tiny = EnumBudget {
            max_work: 100,
            ..EnumBudget::default()
        };
        assert!(matches!(
            brute_cwe(&ctx, &ds, &tiny),
            Err(CodeError::SizeLimit { .. })
        ));
    }
}
