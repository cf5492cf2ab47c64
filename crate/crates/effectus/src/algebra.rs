//! Finite partial commutative monoids and effect algebras.
//!
//! A carrier is the index set `0..size`. The partial sum is a total
//! `size * size` table of `Option<usize>`, with `None` meaning the sum is
//! undefined. Equations between partial expressions are read in the Kleene
//! sense: if either side is defined then so is the other, and they agree.
//!
//! Constructors validate shape only (index ranges, table dimensions); a
//! malformed table is a [`StructuralError`], which is a different thing from
//! an axiom violation. The `check_*` functions scan validated structures and
//! return every axiom violation found.

use serde::Serialize;
use thiserror::Error;

use crate::report::Violation;

/// Shape errors raised by constructors, distinct from axiom violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructuralError {
    #[error("carrier must have at least one element")]
    EmptyCarrier,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("index {index} out of range for carrier of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("table has {got} entries, expected {want}")]
    TableSize { got: usize, want: usize },
    #[error("family multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("{0}")]
    Other(String),
}

/// Index set `0..size` with optional distinct display labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteCarrier {
    size: usize,
    labels: Option<Vec<String>>,
}

impl FiniteCarrier {
    pub fn new(size: usize) -> Result<Self, StructuralError> {
        if size == 0 {
            return Err(StructuralError::EmptyCarrier);
        }
        Ok(FiniteCarrier { size, labels: None })
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self, StructuralError> {
        if labels.is_empty() {
            return Err(StructuralError::EmptyCarrier);
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(StructuralError::DuplicateLabel(l.clone()));
            }
        }
        Ok(FiniteCarrier {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Display label of element `i` (its index when unlabeled).
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(ls) if i < ls.len() => ls[i].clone(),
            _ => format!("#{i}"),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Index of the element carrying `label`, if any.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }
}

/// Partial commutative monoid on a finite carrier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinitePcm {
    carrier: FiniteCarrier,
    zero: usize,
    /// Row-major `size * size` table; entry `a*size + b` holds `a + b`.
    sum: Vec<Option<usize>>,
}

impl FinitePcm {
    pub fn new(
        carrier: FiniteCarrier,
        zero: usize,
        sum: Vec<Option<usize>>,
    ) -> Result<Self, StructuralError> {
        let n = carrier.size();
        if zero >= n {
            return Err(StructuralError::IndexOutOfRange { index: zero, size: n });
        }
        if sum.len() != n * n {
            return Err(StructuralError::TableSize {
                got: sum.len(),
                want: n * n,
            });
        }
        for entry in sum.iter().flatten() {
            if *entry >= n {
                return Err(StructuralError::IndexOutOfRange {
                    index: *entry,
                    size: n,
                });
            }
        }
        Ok(FinitePcm { carrier, zero, sum })
    }

    pub fn carrier(&self) -> &FiniteCarrier {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        self.sum[a * self.size() + b]
    }

    pub fn sum_table(&self) -> &[Option<usize>] {
        &self.sum
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    pub fn label(&self, i: usize) -> String {
        self.carrier.label(i)
    }
}

/// Effect algebra: a PCM with a top element and orthosupplements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteEffectAlgebra {
    pcm: FinitePcm,
    top: usize,
}

impl FiniteEffectAlgebra {
    pub fn new(pcm: FinitePcm, top: usize) -> Result<Self, StructuralError> {
        if top >= pcm.size() {
            return Err(StructuralError::IndexOutOfRange {
                index: top,
                size: pcm.size(),
            });
        }
        Ok(FiniteEffectAlgebra { pcm, top })
    }

    /// Builds the algebra directly from a symmetric sum table.
    pub fn from_table(
        size: usize,
        zero: usize,
        top: usize,
        sum: Vec<Option<usize>>,
    ) -> Result<Self, StructuralError> {
        let pcm = FinitePcm::new(FiniteCarrier::new(size)?, zero, sum)?;
        FiniteEffectAlgebra::new(pcm, top)
    }

    pub fn pcm(&self) -> &FinitePcm {
        &self.pcm
    }

    pub fn size(&self) -> usize {
        self.pcm.size()
    }

    pub fn zero(&self) -> usize {
        self.pcm.zero()
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        self.pcm.sum(a, b)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        self.pcm.elements()
    }

    pub fn label(&self, i: usize) -> String {
        self.pcm.label(i)
    }

    pub fn relabel(mut self, labels: Vec<String>) -> Result<Self, StructuralError> {
        if labels.len() != self.size() {
            return Err(StructuralError::TableSize {
                got: labels.len(),
                want: self.size(),
            });
        }
        self.pcm.carrier = FiniteCarrier::with_labels(labels)?;
        Ok(self)
    }

    /// The two-element algebra {0, 1}.
    pub fn two() -> Self {
        let sum = vec![Some(0), Some(1), Some(1), None];
        FiniteEffectAlgebra::from_table(2, 0, 1, sum)
            .expect("two-element table is well formed")
            .relabel(vec!["0".into(), "1".into()])
            .expect("two distinct labels")
    }

    /// The one-element algebra, in which 0 = 1.
    pub fn trivial() -> Self {
        FiniteEffectAlgebra::from_table(1, 0, 0, vec![Some(0)])
            .expect("one-element table is well formed")
    }

    /// The three-element chain {0, a, 1} with a + a = 1.
    pub fn three_chain() -> Self {
        let n = 3;
        let mut sum = vec![None; n * n];
        let set = |a: usize, b: usize, c: usize, t: &mut Vec<Option<usize>>| {
            t[a * n + b] = Some(c);
            t[b * n + a] = Some(c);
        };
        for x in 0..n {
            set(0, x, x, &mut sum);
        }
        set(1, 1, 2, &mut sum);
        FiniteEffectAlgebra::from_table(n, 0, 2, sum)
            .expect("three-chain table is well formed")
            .relabel(vec!["0".into(), "a".into(), "1".into()])
            .expect("three distinct labels")
    }

    /// The four-element chain {0, a, b, 1} with a + a = b and a + b = 1.
    pub fn four_chain() -> Self {
        let n = 4;
        let mut sum = vec![None; n * n];
        let set = |a: usize, b: usize, c: usize, t: &mut Vec<Option<usize>>| {
            t[a * n + b] = Some(c);
            t[b * n + a] = Some(c);
        };
        for x in 0..n {
            set(0, x, x, &mut sum);
        }
        set(1, 1, 2, &mut sum);
        set(1, 2, 3, &mut sum);
        FiniteEffectAlgebra::from_table(n, 0, 3, sum)
            .expect("four-chain table is well formed")
            .relabel(vec!["0".into(), "a".into(), "b".into(), "1".into()])
            .expect("four distinct labels")
    }

    /// Powerset of `k` atoms: elements are bitmasks, sum is disjoint union.
    pub fn powerset(k: u32) -> Self {
        let n = 1usize << k;
        let mut sum = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                if a & b == 0 {
                    sum[a * n + b] = Some(a | b);
                }
            }
        }
        let labels = (0..n)
            .map(|mask| {
                if mask == 0 {
                    "0".to_string()
                } else {
                    let atoms: Vec<String> = (0..k)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| (i + 1).to_string())
                        .collect();
                    format!("{{{}}}", atoms.join(""))
                }
            })
            .collect();
        FiniteEffectAlgebra::from_table(n, 0, n - 1, sum)
            .expect("powerset table is well formed")
            .relabel(labels)
            .expect("bitmask labels are distinct")
    }
}

fn violation(law: &str, witnesses: Vec<String>, detail: String) -> Violation {
    Violation::new(law, witnesses, detail)
}

/// Checks commutativity, unit, and Kleene associativity of the sum table.
pub fn check_pcm_axioms(p: &FinitePcm) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = p.size();
    for a in 0..n {
        for b in a..n {
            if p.sum(a, b) != p.sum(b, a) {
                out.push(violation(
                    "pcm/commutativity",
                    vec![p.label(a), p.label(b)],
                    format!(
                        "{} + {} = {:?} but {} + {} = {:?}",
                        p.label(a),
                        p.label(b),
                        p.sum(a, b).map(|c| p.label(c)),
                        p.label(b),
                        p.label(a),
                        p.sum(b, a).map(|c| p.label(c)),
                    ),
                ));
            }
        }
    }
    let z = p.zero();
    for x in 0..n {
        if p.sum(z, x) != Some(x) {
            out.push(violation(
                "pcm/unit",
                vec![p.label(x)],
                format!(
                    "0 + {} should be {}, got {:?}",
                    p.label(x),
                    p.label(x),
                    p.sum(z, x).map(|c| p.label(c)),
                ),
            ));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = p.sum(a, b).and_then(|ab| p.sum(ab, c));
                let rhs = p.sum(b, c).and_then(|bc| p.sum(a, bc));
                if lhs != rhs {
                    out.push(violation(
                        "pcm/associativity",
                        vec![p.label(a), p.label(b), p.label(c)],
                        format!(
                            "({} + {}) + {} = {:?} but {} + ({} + {}) = {:?}",
                            p.label(a),
                            p.label(b),
                            p.label(c),
                            lhs.map(|x| p.label(x)),
                            p.label(a),
                            p.label(b),
                            p.label(c),
                            rhs.map(|x| p.label(x)),
                        ),
                    ));
                }
            }
        }
    }
    out
}

/// All `y` with `x + y = 1`.
fn complements(e: &FiniteEffectAlgebra, x: usize) -> Vec<usize> {
    e.elements()
        .filter(|&y| e.sum(x, y) == Some(e.top()))
        .collect()
}

/// Checks the PCM axioms plus unique orthosupplements and positivity.
pub fn check_effect_algebra_axioms(e: &FiniteEffectAlgebra) -> Vec<Violation> {
    let mut out = check_pcm_axioms(e.pcm());
    for x in e.elements() {
        let cs = complements(e, x);
        if cs.len() != 1 {
            out.push(violation(
                "ea/orthosupplement",
                std::iter::once(e.label(x))
                    .chain(cs.iter().map(|&c| e.label(c)))
                    .collect(),
                format!(
                    "{} has {} orthosupplements, expected exactly one",
                    e.label(x),
                    cs.len(),
                ),
            ));
        }
    }
    // Positivity: x + 1 defined forces x = 0. Vacuous in the one-element
    // algebra, where 0 = 1.
    for x in e.elements() {
        if e.sum(x, e.top()).is_some() && x != e.zero() {
            out.push(violation(
                "ea/positivity",
                vec![e.label(x)],
                format!("{} + 1 is defined but {} is not 0", e.label(x), e.label(x)),
            ));
        }
    }
    out
}

/// The unique `y` with `x + y = 1`. Requires a valid effect algebra.
pub fn orthosupplement(e: &FiniteEffectAlgebra, x: usize) -> usize {
    let cs = complements(e, x);
    match cs.as_slice() {
        [y] => *y,
        _ => panic!(
            "orthosupplement of {} is not unique; run check_effect_algebra_axioms first",
            e.label(x)
        ),
    }
}

/// Derived order: `a <= b` iff `a + c = b` for some `c`.
pub fn leq(e: &FiniteEffectAlgebra, a: usize, b: usize) -> bool {
    e.elements().any(|c| e.sum(a, c) == Some(b))
}

/// The first `c` with `a + c = b`, unique on valid algebras by cancellation.
pub fn partial_diff(e: &FiniteEffectAlgebra, a: usize, b: usize) -> Option<usize> {
    e.elements().find(|&c| e.sum(a, c) == Some(b))
}

/// Least upper bound of `xs` in the derived order, when it exists.
pub fn sup(e: &FiniteEffectAlgebra, xs: &[usize]) -> Option<usize> {
    let uppers: Vec<usize> = e
        .elements()
        .filter(|&u| xs.iter().all(|&x| leq(e, x, u)))
        .collect();
    uppers
        .iter()
        .copied()
        .find(|&u| uppers.iter().all(|&v| leq(e, u, v)))
}

/// Finitely supported countable family: `(element, multiplicity)` entries.
///
/// In a finite effect algebra a summable family can only have finitely many
/// nonzero entries (each nonzero summand strictly increases the partial sum,
/// and chains are bounded), so this representation is lossless.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountableFamily {
    entries: Vec<(usize, usize)>,
}

impl CountableFamily {
    pub fn new(entries: Vec<(usize, usize)>) -> Result<Self, StructuralError> {
        if entries.iter().any(|&(_, m)| m == 0) {
            return Err(StructuralError::ZeroMultiplicity);
        }
        Ok(CountableFamily { entries })
    }

    pub fn singleton(x: usize) -> Self {
        CountableFamily {
            entries: vec![(x, 1)],
        }
    }

    pub fn of_elements(xs: &[usize]) -> Self {
        CountableFamily {
            entries: xs.iter().map(|&x| (x, 1)).collect(),
        }
    }

    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    /// Total multiplicity of `x` across all entries.
    pub fn multiplicity(&self, x: usize) -> usize {
        self.entries
            .iter()
            .filter(|&&(e, _)| e == x)
            .map(|&(_, m)| m)
            .sum()
    }

    /// Multiset equality of two families over a carrier of size `n`.
    pub fn same_multiset(&self, other: &CountableFamily, n: usize) -> bool {
        (0..n).all(|x| self.multiplicity(x) == other.multiplicity(x))
    }

    pub fn push(&mut self, x: usize, m: usize) {
        if m > 0 {
            self.entries.push((x, m));
        }
    }
}

/// Adds `x` to `acc` exactly `m` times, detecting cycles so that huge
/// multiplicities terminate even on invalid tables.
fn add_times(e: &FiniteEffectAlgebra, acc: usize, x: usize, m: usize) -> Option<usize> {
    let mut seen: Vec<usize> = vec![acc];
    let mut cur = acc;
    for step in 1..=m {
        cur = e.sum(cur, x)?;
        if let Some(i) = seen.iter().position(|&v| v == cur) {
            let period = step - i;
            let idx = i + (m - i) % period;
            return Some(seen.get(idx).copied().unwrap_or(cur));
        }
        seen.push(cur);
    }
    Some(cur)
}

/// Canonical sum of a finitely supported family, `None` when not summable.
///
/// Entries are folded in listed order; on a valid algebra the result is
/// order independent, and for finite support the family is summable exactly
/// when this full fold is defined.
pub fn sigma_sum(
    e: &FiniteEffectAlgebra,
    fam: &CountableFamily,
) -> Result<Option<usize>, StructuralError> {
    let n = e.size();
    for &(x, _) in fam.entries() {
        if x >= n {
            return Err(StructuralError::IndexOutOfRange { index: x, size: n });
        }
    }
    let mut acc = e.zero();
    for &(x, m) in fam.entries() {
        match add_times(e, acc, x, m) {
            Some(next) => acc = next,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}

fn show_family(e: &FiniteEffectAlgebra, fam: &CountableFamily) -> String {
    let parts: Vec<String> = fam
        .entries()
        .iter()
        .map(|&(x, m)| {
            if m == 1 {
                e.label(x)
            } else {
                format!("{}x{}", e.label(x), m)
            }
        })
        .collect();
    format!("({})", parts.join(", "))
}

/// Checks the summation axioms on sampled families and partitions.
///
/// `partitions` pairs a family with blocks that must jointly repartition it;
/// an infinite tail of zeros is represented by a zero entry of any finite
/// multiplicity, which never changes a sum.
pub fn check_sigma_pam_axioms(
    e: &FiniteEffectAlgebra,
    families: &[CountableFamily],
    partitions: &[(CountableFamily, Vec<CountableFamily>)],
) -> Vec<Violation> {
    let mut out = Vec::new();
    for x in e.elements() {
        let got = sigma_sum(e, &CountableFamily::singleton(x));
        if got != Ok(Some(x)) {
            out.push(violation(
                "spam/unary",
                vec![e.label(x)],
                format!("sum of the singleton family ({}) is not {}", e.label(x), e.label(x)),
            ));
        }
    }
    for fam in families {
        let total = match sigma_sum(e, fam) {
            Ok(t) => t,
            Err(err) => {
                out.push(violation(
                    "spam/structural",
                    vec![show_family(e, fam)],
                    err.to_string(),
                ));
                continue;
            }
        };
        // Limit axiom surrogate: a defined full sum forces every prefix and
        // every singleton subfamily to be summable.
        if total.is_some() {
            for cut in 0..fam.entries().len() {
                let prefix = CountableFamily {
                    entries: fam.entries()[..cut].to_vec(),
                };
                if sigma_sum(e, &prefix) == Ok(None) {
                    out.push(violation(
                        "spam/limit",
                        vec![show_family(e, fam), show_family(e, &prefix)],
                        "summable family has a non-summable finite subfamily".to_string(),
                    ));
                }
            }
        }
        // Padding with zeros never changes summability or the value.
        let mut padded = fam.clone();
        padded.push(e.zero(), 7);
        if sigma_sum(e, &padded) != Ok(total) {
            out.push(violation(
                "spam/zero-tail",
                vec![show_family(e, fam)],
                "appending zero entries changed the sum".to_string(),
            ));
        }
    }
    for (fam, blocks) in partitions {
        let union = CountableFamily {
            entries: blocks.iter().flat_map(|b| b.entries().to_vec()).collect(),
        };
        if !union.same_multiset(fam, e.size()) {
            out.push(violation(
                "spam/partition",
                vec![show_family(e, fam)],
                "blocks do not repartition the family".to_string(),
            ));
            continue;
        }
        let whole = sigma_sum(e, fam).unwrap_or(None);
        let block_sums: Vec<Option<usize>> = blocks
            .iter()
            .map(|b| sigma_sum(e, b).unwrap_or(None))
            .collect();
        let grouped = if block_sums.iter().all(|s| s.is_some()) {
            let coll = CountableFamily::of_elements(
                &block_sums.iter().map(|s| s.unwrap()).collect::<Vec<_>>(),
            );
            sigma_sum(e, &coll).unwrap_or(None)
        } else {
            None
        };
        if whole != grouped {
            out.push(violation(
                "spam/partition-associativity",
                vec![show_family(e, fam)],
                format!(
                    "family sums to {:?} but its blocks sum to {:?}",
                    whole.map(|x| e.label(x)),
                    grouped.map(|x| e.label(x)),
                ),
            ));
        }
    }
    out
}

/// Map between effect algebras given by a total table on indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdditiveMap {
    pub source: FiniteEffectAlgebra,
    pub target: FiniteEffectAlgebra,
    pub table: Vec<usize>,
}

impl AdditiveMap {
    pub fn new(
        source: FiniteEffectAlgebra,
        target: FiniteEffectAlgebra,
        table: Vec<usize>,
    ) -> Result<Self, StructuralError> {
        if table.len() != source.size() {
            return Err(StructuralError::TableSize {
                got: table.len(),
                want: source.size(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&t| t >= target.size()) {
            return Err(StructuralError::IndexOutOfRange {
                index: bad,
                size: target.size(),
            });
        }
        Ok(AdditiveMap {
            source,
            target,
            table,
        })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }
}

/// Checks that `f` preserves 0 and all defined sums.
pub fn check_additive(f: &AdditiveMap) -> Vec<Violation> {
    let mut out = Vec::new();
    let (s, t) = (&f.source, &f.target);
    if f.apply(s.zero()) != t.zero() {
        out.push(violation(
            "additive/zero",
            vec![s.label(s.zero())],
            format!("f(0) = {}, expected 0", t.label(f.apply(s.zero()))),
        ));
    }
    for a in s.elements() {
        for b in s.elements() {
            if let Some(ab) = s.sum(a, b) {
                let got = t.sum(f.apply(a), f.apply(b));
                if got != Some(f.apply(ab)) {
                    out.push(violation(
                        "additive/sum",
                        vec![s.label(a), s.label(b)],
                        format!(
                            "f({}) + f({}) = {:?}, expected f({} + {}) = {}",
                            s.label(a),
                            s.label(b),
                            got.map(|x| t.label(x)),
                            s.label(a),
                            s.label(b),
                            t.label(f.apply(ab)),
                        ),
                    ));
                }
            }
        }
    }
    out
}

/// All strictly increasing chains of length >= 1, by DFS over the order.
fn strict_chains(e: &FiniteEffectAlgebra) -> Vec<Vec<usize>> {
    let n = e.size();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().expect("chains are nonempty");
        out.push(chain.clone());
        for next in e.elements() {
            if next != last && leq(e, last, next) {
                let mut ext = chain.clone();
                ext.push(next);
                stack.push(ext);
            }
        }
    }
    out
}

/// Checks that `f` sends suprema of increasing chains to suprema.
///
/// On a finite carrier every increasing sequence stabilizes, so chains are
/// enumerated as strictly increasing runs and the supremum is the last
/// element. For additive maps this holds automatically; the point of the
/// checker is to verify that fact mechanically and to flag non-monotone
/// tables.
pub fn check_omega_continuous(f: &AdditiveMap) -> Vec<Violation> {
    let mut out = Vec::new();
    let (s, t) = (&f.source, &f.target);
    for chain in strict_chains(s) {
        let image: Vec<usize> = chain.iter().map(|&x| f.apply(x)).collect();
        for w in image.windows(2) {
            if !leq(t, w[0], w[1]) {
                out.push(violation(
                    "omega/monotone",
                    chain.iter().map(|&x| s.label(x)).collect(),
                    format!(
                        "image of an increasing chain is not increasing at {} !<= {}",
                        t.label(w[0]),
                        t.label(w[1]),
                    ),
                ));
            }
        }
        let sup_src = *chain.last().expect("chains are nonempty");
        match sup(t, &image) {
            Some(sup_img) if sup_img == f.apply(sup_src) => {}
            got => out.push(violation(
                "omega/continuity",
                chain.iter().map(|&x| s.label(x)).collect(),
                format!(
                    "f(sup) = {} but sup of the image is {:?}",
                    t.label(f.apply(sup_src)),
                    got.map(|x| t.label(x)),
                ),
            )),
        }
    }
    out
}

/// Relabeled sum table in canonical position: zero at 0, top at `size - 1`,
/// table lexicographically minimal over the remaining bijections.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CanonicalAlgebra {
    pub size: usize,
    pub sum: Vec<Option<usize>>,
}

fn permute_table(e: &FiniteEffectAlgebra, perm: &[usize]) -> Vec<Option<usize>> {
    let n = e.size();
    let mut out = vec![None; n * n];
    for a in 0..n {
        for b in 0..n {
            out[perm[a] * n + perm[b]] = e.sum(a, b).map(|c| perm[c]);
        }
    }
    out
}

/// All bijections sending zero to 0 and top to `size - 1`.
fn normalizing_perms(e: &FiniteEffectAlgebra) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    let n = e.size();
    if n == 1 {
        return vec![vec![0]];
    }
    let interior: Vec<usize> = e
        .elements()
        .filter(|&x| x != e.zero() && x != e.top())
        .collect();
    let slots: Vec<usize> = (1..n - 1).collect();
    let mut out = Vec::new();
    if e.zero() == e.top() {
        // Degenerate multi-element input; permute everything except zero.
        let rest: Vec<usize> = e.elements().filter(|&x| x != e.zero()).collect();
        for assign in rest.iter().copied().permutations(rest.len()) {
            let mut perm = vec![0; n];
            perm[e.zero()] = 0;
            for (slot, x) in (1..n).zip(assign) {
                perm[x] = slot;
            }
            out.push(perm);
        }
        return out;
    }
    for assign in interior.iter().copied().permutations(interior.len()) {
        let mut perm = vec![0; n];
        perm[e.zero()] = 0;
        perm[e.top()] = n - 1;
        for (&slot, x) in slots.iter().zip(assign) {
            perm[x] = slot;
        }
        out.push(perm);
    }
    out
}

/// Lexicographically minimal relabeling; equal canonical forms mean
/// isomorphic algebras.
pub fn canonical_form(e: &FiniteEffectAlgebra) -> CanonicalAlgebra {
    let best = normalizing_perms(e)
        .iter()
        .map(|perm| permute_table(e, perm))
        .min()
        .expect("at least one normalizing permutation exists");
    CanonicalAlgebra {
        size: e.size(),
        sum: best,
    }
}

pub fn are_isomorphic(a: &FiniteEffectAlgebra, b: &FiniteEffectAlgebra) -> bool {
    a.size() == b.size() && canonical_form(a) == canonical_form(b)
}

/// All bijections of the carrier preserving zero, top, and the sum table.
pub fn automorphisms(e: &FiniteEffectAlgebra) -> Vec<Vec<usize>> {
    let reference = e.sum_table_owned();
    normalizing_perms(e)
        .into_iter()
        .filter(|perm| {
            // An automorphism must also fix the positions of zero and top.
            perm[e.zero()] == e.zero()
                && perm[e.top()] == e.top()
                && permute_table(e, perm) == reference
        })
        .collect()
}

impl FiniteEffectAlgebra {
    fn sum_table_owned(&self) -> Vec<Option<usize>> {
        self.pcm.sum.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct re-evaluation of the axioms, kept deliberately separate from
    /// the production checkers.
    fn naive_is_effect_algebra(e: &FiniteEffectAlgebra) -> bool {
        let n = e.size();
        for a in 0..n {
            if e.sum(e.zero(), a) != Some(a) {
                return false;
            }
            for b in 0..n {
                if e.sum(a, b) != e.sum(b, a) {
                    return false;
                }
                for c in 0..n {
                    let l = e.sum(a, b).and_then(|ab| e.sum(ab, c));
                    let r = e.sum(b, c).and_then(|bc| e.sum(a, bc));
                    if l != r {
                        return false;
                    }
                }
            }
        }
        for a in 0..n {
            if (0..n).filter(|&b| e.sum(a, b) == Some(e.top())).count() != 1 {
                return false;
            }
            if a != e.zero() && e.sum(a, e.top()).is_some() {
                return false;
            }
        }
        true
    }

    #[test]
    fn fixtures_are_valid() {
        for e in [
            FiniteEffectAlgebra::trivial(),
            FiniteEffectAlgebra::two(),
            FiniteEffectAlgebra::three_chain(),
            FiniteEffectAlgebra::four_chain(),
            FiniteEffectAlgebra::powerset(2),
            FiniteEffectAlgebra::powerset(3),
        ] {
            assert!(check_effect_algebra_axioms(&e).is_empty(), "{e:?}");
            assert!(naive_is_effect_algebra(&e));
        }
    }

    #[test]
    fn checker_agrees_with_naive_oracle_on_all_size_3_tables() {
        // Every symmetric table on three elements with the unit row forced.
        let n = 3;
        let mut valid = 0;
        let cells = [(1, 1), (1, 2), (2, 2)];
        let choices: usize = n + 1;
        for code in 0..choices.pow(cells.len() as u32) {
            let mut c = code;
            let mut sum = vec![None; n * n];
            for x in 0..n {
                sum[x] = Some(x);
                sum[x * n] = Some(x);
            }
            for &(a, b) in &cells {
                let v = c % choices;
                c /= choices;
                let entry = if v == n { None } else { Some(v) };
                sum[a * n + b] = entry;
                sum[b * n + a] = entry;
            }
            let e = FiniteEffectAlgebra::from_table(n, 0, 2, sum).unwrap();
            let checker_ok = check_effect_algebra_axioms(&e).is_empty();
            assert_eq!(checker_ok, naive_is_effect_algebra(&e));
            if checker_ok {
                valid += 1;
                assert!(are_isomorphic(&e, &FiniteEffectAlgebra::three_chain()));
            }
        }
        // The chain with a + a = 1 is the only three-element effect algebra.
        assert_eq!(valid, 1);
    }

    #[test]
    fn structural_errors_are_not_axiom_violations() {
        assert!(matches!(
            FiniteEffectAlgebra::from_table(2, 0, 1, vec![Some(0); 3]),
            Err(StructuralError::TableSize { got: 3, want: 4 })
        ));
        assert!(matches!(
            FiniteEffectAlgebra::from_table(2, 0, 1, vec![Some(5); 4]),
            Err(StructuralError::IndexOutOfRange { index: 5, size: 2 })
        ));
        assert!(FiniteCarrier::new(0).is_err());
    }

    #[test]
    fn broken_unit_row_is_flagged() {
        let mut e = FiniteEffectAlgebra::two();
        let mut sum = e.pcm.sum.clone();
        sum[1] = None; // 0 + 1 undefined
        e = FiniteEffectAlgebra::from_table(2, 0, 1, sum).unwrap();
        let vs = check_effect_algebra_axioms(&e);
        assert!(vs.iter().any(|v| v.law == "pcm/unit"));
    }

    #[test]
    fn orthosupplement_and_order() {
        let e = FiniteEffectAlgebra::powerset(2);
        for x in e.elements() {
            assert_eq!(orthosupplement(&e, x), e.top() ^ x);
            assert!(leq(&e, x, e.top()));
            assert!(leq(&e, e.zero(), x));
        }
        let chain = FiniteEffectAlgebra::three_chain();
        assert!(leq(&chain, 1, 2));
        assert_eq!(partial_diff(&chain, 1, 2), Some(1));
        assert_eq!(partial_diff(&chain, 2, 1), None);
    }

    #[test]
    fn leq_agrees_with_reachability_closure() {
        // Oracle: transitive closure of single-step edges x -> x + c.
        for e in [
            FiniteEffectAlgebra::two(),
            FiniteEffectAlgebra::three_chain(),
            FiniteEffectAlgebra::four_chain(),
            FiniteEffectAlgebra::powerset(2),
            FiniteEffectAlgebra::powerset(3),
        ] {
            let n = e.size();
            let mut reach = vec![false; n * n];
            for a in 0..n {
                for c in 0..n {
                    if let Some(b) = e.sum(a, c) {
                        reach[a * n + b] = true;
                    }
                }
            }
            for k in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        if reach[a * n + k] && reach[k * n + b] {
                            reach[a * n + b] = true;
                        }
                    }
                }
            }
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(leq(&e, a, b), reach[a * n + b], "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn cancellation_holds_on_valid_algebras() {
        for e in [
            FiniteEffectAlgebra::three_chain(),
            FiniteEffectAlgebra::four_chain(),
            FiniteEffectAlgebra::powerset(3),
        ] {
            for a in e.elements() {
                for b in e.elements() {
                    for c in e.elements() {
                        if e.sum(a, b).is_some() && e.sum(a, b) == e.sum(a, c) {
                            assert_eq!(b, c);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_sum_folds_families() {
        let e = FiniteEffectAlgebra::powerset(2);
        let fam = CountableFamily::new(vec![(1, 1), (2, 1)]).unwrap();
        assert_eq!(sigma_sum(&e, &fam), Ok(Some(3)));
        let too_much = CountableFamily::new(vec![(1, 2)]).unwrap();
        assert_eq!(sigma_sum(&e, &too_much), Ok(None));
        let chain = FiniteEffectAlgebra::three_chain();
        let twice = CountableFamily::new(vec![(1, 2)]).unwrap();
        assert_eq!(sigma_sum(&chain, &twice), Ok(Some(2)));
        let padded = CountableFamily::new(vec![(1, 2), (0, 1000)]).unwrap();
        assert_eq!(sigma_sum(&chain, &padded), Ok(Some(2)));
        assert!(sigma_sum(&chain, &CountableFamily::singleton(9)).is_err());
    }

    #[test]
    fn huge_multiplicities_terminate_even_on_cyclic_tables() {
        // Invalid table with 1 + 1 = 1 induces a cycle; the fold must
        // still terminate and stay at the fixed point.
        let sum = vec![Some(0), Some(1), Some(1), Some(1)];
        let e = FiniteEffectAlgebra::from_table(2, 0, 1, sum).unwrap();
        let fam = CountableFamily::new(vec![(1, 1_000_000_007)]).unwrap();
        assert_eq!(sigma_sum(&e, &fam), Ok(Some(1)));
    }

    #[test]
    fn sigma_pam_axioms_hold_on_fixtures() {
        let e = FiniteEffectAlgebra::powerset(2);
        let fam = CountableFamily::new(vec![(1, 1), (2, 1), (0, 3)]).unwrap();
        let blocks = vec![
            CountableFamily::new(vec![(1, 1)]).unwrap(),
            CountableFamily::new(vec![(2, 1), (0, 3)]).unwrap(),
        ];
        let vs = check_sigma_pam_axioms(&e, std::slice::from_ref(&fam), &[(fam.clone(), blocks)]);
        assert!(vs.is_empty(), "{vs:?}");
    }

    #[test]
    fn sigma_pam_catches_broken_associativity() {
        // 1 + 1 = 1 violates partition associativity against blocks {1},{1}:
        // the whole folds to 1 while singleton blocks sum to 1 + 1 = 1, so
        // instead break the unit row to produce a mismatch.
        let sum = vec![Some(0), None, None, None];
        let e = FiniteEffectAlgebra::from_table(2, 0, 1, sum).unwrap();
        let vs = check_sigma_pam_axioms(&e, &[], &[]);
        assert!(vs.iter().any(|v| v.law == "spam/unary"), "{vs:?}");
    }

    #[test]
    fn additive_maps_from_three_chain_to_powerset_are_exactly_one() {
        // Oracle: filter all 4^3 tables by a direct additivity scan.
        let src = FiniteEffectAlgebra::three_chain();
        let tgt = FiniteEffectAlgebra::powerset(2);
        let mut found = Vec::new();
        for code in 0..tgt.size().pow(src.size() as u32) {
            let mut c = code;
            let table: Vec<usize> = (0..src.size())
                .map(|_| {
                    let v = c % tgt.size();
                    c /= tgt.size();
                    v
                })
                .collect();
            let f = AdditiveMap::new(src.clone(), tgt.clone(), table.clone()).unwrap();
            let direct_ok = (0..src.size()).all(|a| {
                (0..src.size()).all(|b| match src.sum(a, b) {
                    Some(ab) => tgt.sum(table[a], table[b]) == Some(table[ab]),
                    None => true,
                })
            }) && table[src.zero()] == tgt.zero();
            assert_eq!(check_additive(&f).is_empty(), direct_ok);
            if direct_ok {
                found.push(table);
            }
        }
        // a + a = 1 forces f(a) disjoint from itself, hence f(a) = 0 and
        // then f(1) = 0: only the constant-zero map is additive.
        assert_eq!(found, vec![vec![0, 0, 0]]);
    }

    #[test]
    fn additive_maps_are_omega_continuous_on_finite_algebras() {
        let src = FiniteEffectAlgebra::powerset(2);
        let tgt = FiniteEffectAlgebra::powerset(2);
        for code in 0..tgt.size().pow(src.size() as u32) {
            let mut c = code;
            let table: Vec<usize> = (0..src.size())
                .map(|_| {
                    let v = c % tgt.size();
                    c /= tgt.size();
                    v
                })
                .collect();
            let f = AdditiveMap::new(src.clone(), tgt.clone(), table).unwrap();
            if check_additive(&f).is_empty() {
                assert!(check_omega_continuous(&f).is_empty());
            }
        }
    }

    #[test]
    fn non_monotone_map_fails_continuity() {
        let src = FiniteEffectAlgebra::three_chain();
        let tgt = FiniteEffectAlgebra::three_chain();
        // Swap a and 1: not monotone on the chain 0 < a < 1.
        let f = AdditiveMap::new(src, tgt, vec![0, 2, 1]).unwrap();
        let vs = check_omega_continuous(&f);
        assert!(vs.iter().any(|v| v.law == "omega/monotone"));
    }

    #[test]
    fn canonical_form_identifies_relabelings() {
        let e = FiniteEffectAlgebra::powerset(2);
        // Swap the two atoms: indices 1 and 2.
        let perm = [0usize, 2, 1, 3];
        let n = e.size();
        let mut sum = vec![None; n * n];
        for a in 0..n {
            for b in 0..n {
                sum[perm[a] * n + perm[b]] = e.sum(a, b).map(|c| perm[c]);
            }
        }
        let swapped = FiniteEffectAlgebra::from_table(n, 0, 3, sum).unwrap();
        assert!(are_isomorphic(&e, &swapped));
        assert!(!are_isomorphic(&e, &FiniteEffectAlgebra::four_chain()));
        // The atom swap is a nontrivial automorphism of the powerset.
        assert_eq!(automorphisms(&e).len(), 2);
        assert_eq!(automorphisms(&FiniteEffectAlgebra::four_chain()).len(), 1);
    }
}
