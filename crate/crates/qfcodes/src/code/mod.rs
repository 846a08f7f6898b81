//! Codes from level sets of quadratic forms.
//!
//! The defining set `D = {x : Q(x) = a}` indexes coordinates; the codeword
//! for `b in F_q^m` is `(b.d_1, ..., b.d_n)` (equivalently `trace(b d_i)`
//! in the field formulation, which the tests check agrees under dual-basis
//! coordinates). Codewords are counted as a multiset over all `q^m` values
//! of `b`: when the rank is below `m` the map `b -> c_b` is not injective
//! and the enumerators carry repeated rows, which the verification report
//! surfaces as an actual dimension below `m`.

mod brute;
mod minimal;
mod predicted;
mod verify;

pub use brute::{brute_cwe, brute_cwe_seq, brute_wd};
pub use minimal::{
    covers, exhaustive_minimality, minimality_report, CoverScan, MinimalityReport, ScanMode,
};
pub use predicted::{
    code_length, full_rank_wd_rows, predicted_cwe, predicted_wd, predicted_wd_rows,
};
pub use verify::{verify, ConventionOutcome, ConventionVerdict, MassChecks, VerificationReport};

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::budget::EnumBudget;
use crate::field::{FieldContext, FieldElement};
use crate::forms::{FormError, QuadForm};
use crate::matrix::Matrix;
use crate::parallel;
use crate::vecspace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("enumeration of size {requested} exceeds the budget {limit}")]
    SizeLimit { requested: u128, limit: u128 },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("value out of range: {0}")]
    Overflow(String),
    #[error(transparent)]
    Form(#[from] FormError),
}

/// The ordered level set `{x in F_q^m : Q(x) = a}`, ascending by vector
/// encoding.
#[derive(Debug, Clone)]
pub struct DefiningSet {
    q: u32,
    m: usize,
    a: FieldElement,
    encodings: Vec<u64>,
    /// Row-major coordinate vectors, `n * m` entries.
    flat: Vec<FieldElement>,
}

impl DefiningSet {
    pub fn new(form: &QuadForm, a: FieldElement, budget: &EnumBudget) -> Result<Self, CodeError> {
        let ctx = form.ctx();
        let q = ctx.q();
        let m = form.m();
        let total = vecspace::size(q, m)
            .filter(|&t| t <= budget.max_vectors)
            .ok_or(CodeError::SizeLimit {
                requested: vecspace::size(q, m).map_or(u128::MAX, |t| t as u128),
                limit: budget.max_vectors as u128,
            })?;
        let work = |start: u64, end: u64| -> Vec<u64> {
            let mut hits = Vec::new();
            let mut x = vecspace::decode(q, m, start);
            for idx in start..end {
                if form.eval_unchecked(&x) == a {
                    hits.push(idx);
                }
                vecspace::increment(q, &mut x);
            }
            hits
        };
        let mut encodings = parallel::chunk_reduce(total, work, |mut u, v| {
            u.extend(v);
            u
        })
        .unwrap_or_default();
        encodings.sort_unstable();
        let mut flat = Vec::with_capacity(encodings.len() * m);
        for &enc in &encodings {
            flat.extend(vecspace::decode(q, m, enc));
        }
        debug_assert!(a.is_zero() || !encodings.contains(&0));
        // Self-check against the closed-form count; a disagreement here
        // means the classifier and the enumeration cannot both be right.
        if !a.is_zero() {
            let class = form.classify();
            if class.rank() >= 1 {
                let expected = crate::forms::count_na(ctx, &class, m, a)?;
                if expected != encodings.len() as u128 {
                    return Err(CodeError::InternalInconsistency(format!(
                        "level set has {} points but the closed form gives {} for {:?}",
                        encodings.len(),
                        expected,
                        class
                    )));
                }
            }
        }
        Ok(DefiningSet {
            q,
            m,
            a,
            encodings,
            flat,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> FieldElement {
        self.a
    }

    /// Code length `n = |D|`.
    pub fn n(&self) -> usize {
        self.encodings.len()
    }

    /// An empty set arises for the zero form with `a != 0`; the code then
    /// has length 0.
    pub fn is_empty(&self) -> bool {
        self.encodings.is_empty()
    }

    pub fn encodings(&self) -> &[u64] {
        &self.encodings
    }

    pub fn element(&self, i: usize) -> &[FieldElement] {
        &self.flat[i * self.m..(i + 1) * self.m]
    }

    pub fn elements(&self) -> impl Iterator<Item = &[FieldElement]> {
        self.flat.chunks_exact(self.m.max(1))
    }

    /// The codeword `c_b = (b.d_1, ..., b.d_n)`.
    pub fn codeword(&self, ctx: &FieldContext, b: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(b.len(), self.m);
        self.elements().map(|d| ctx.dot(b, d)).collect()
    }

    /// Rank over `F_q` of the matrix whose rows are the elements of `D`;
    /// the number of distinct codewords is `q^rank`.
    pub fn dimension_actual(&self, ctx: &FieldContext) -> usize {
        if self.is_empty() {
            return 0;
        }
        let rows: Vec<Vec<FieldElement>> = self.elements().map(|d| d.to_vec()).collect();
        Matrix::from_rows(rows).rank(ctx)
    }
}

/// Map weight -> multiplicity over all `q^m` codewords (multiset).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightDistribution {
    pub n: u128,
    pub counts: BTreeMap<u128, u128>,
}

impl WeightDistribution {
    pub fn from_rows(n: u128, rows: impl IntoIterator<Item = (u128, u128)>) -> Self {
        let mut counts = BTreeMap::new();
        for (w, mult) in rows {
            if mult > 0 {
                *counts.entry(w).or_insert(0) += mult;
            }
        }
        WeightDistribution { n, counts }
    }

    pub fn total(&self) -> u128 {
        self.counts.values().sum()
    }

    /// Sorted `(weight, multiplicity)` rows.
    pub fn rows(&self) -> Vec<(u128, u128)> {
        self.counts.iter().map(|(&w, &c)| (w, c)).collect()
    }

    pub fn min_nonzero_weight(&self) -> Option<u128> {
        self.counts.keys().find(|&&w| w > 0).copied()
    }

    pub fn max_weight(&self) -> Option<u128> {
        self.counts.keys().next_back().copied().filter(|&w| w > 0)
    }

    pub fn nonzero_weight_count(&self) -> usize {
        self.counts.keys().filter(|&&w| w > 0).count()
    }
}

/// Map composition vector `(k_0, ..., k_{q-1})` -> multiplicity, indexed by
/// the canonical element order of `F_q`. Every composition sums to `n`;
/// multiplicities sum to `q^m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompleteWeightEnumerator {
    pub q: u32,
    pub n: u128,
    pub counts: BTreeMap<Vec<u128>, u128>,
}

impl CompleteWeightEnumerator {
    pub fn new(q: u32, n: u128) -> Self {
        CompleteWeightEnumerator {
            q,
            n,
            counts: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, composition: Vec<u128>, mult: u128) {
        debug_assert_eq!(composition.len(), self.q as usize);
        if mult > 0 {
            *self.counts.entry(composition).or_insert(0) += mult;
        }
    }

    pub fn total(&self) -> u128 {
        self.counts.values().sum()
    }

    /// Lexicographically sorted `(composition, multiplicity)` rows.
    pub fn rows(&self) -> Vec<(Vec<u128>, u128)> {
        self.counts.iter().map(|(k, &v)| (k.clone(), v)).collect()
    }

    /// The weight marginal: `weight = n - k_0`.
    pub fn weight_marginal(&self) -> WeightDistribution {
        WeightDistribution::from_rows(
            self.n,
            self.counts
                .iter()
                .map(|(comp, &mult)| (self.n - comp[0], mult)),
        )
    }

    /// Every composition sums to `n`.
    pub fn compositions_sum_to_n(&self) -> bool {
        self.counts
            .keys()
            .all(|comp| comp.iter().sum::<u128>() == self.n)
    }
}
