//! Effect modules and weight modules over a scalar system.
//!
//! Both structures come with two carrier backends: finite tables (exhaustive
//! checking) and rational coordinates (a polytope or cone slice in `ℚⁿ`,
//! checked on a deterministic sample grid). Predicates of an object live in
//! an effect module; substates live in a weight module.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{
    check_effect_algebra_axioms, check_pcm_axioms, leq, FiniteCarrier, FiniteEffectAlgebra,
    FinitePcm, StructuralError,
};
use crate::monoid::{Division, FiniteEffectMonoid, RationalUnitInterval, ScalarSystem};
use crate::ovs::lp::{
    qvec_add, qvec_dot, qvec_is_zero, qvec_scale, qvec_sub, qvec_zero, rat, show_qvec, show_rat,
    Cone, LpOutcome, QVec, RationalLP,
};
use crate::report::{CheckReport, Violation};

/// Seed for every sampled grid in this module; fixed so reports are
/// reproducible byte-for-byte.
const GRID_SEED: u64 = 0x0eff_ec75;

/// Number of pseudo-random sample points added to each rational grid.
const GRID_RANDOM_POINTS: usize = 64;

/// Candidate tables above this bound are refused rather than subsampled.
pub const HOMSET_CAP: u128 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("homset too large: {candidates} candidate tables exceed the cap {cap}")]
pub struct HomsetTooLarge {
    pub candidates: u128,
    pub cap: u128,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModuleError {
    #[error(transparent)]
    Structural(#[from] StructuralError),
    #[error("scalar systems do not match: {left} vs {right}")]
    MismatchedScalars { left: String, right: String },
    #[error("vector length {got} does not match dimension {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("unit vector lies outside the positive cone")]
    UnitOutsideCone,
    #[error("trace is not strictly positive on cone generator {generator}")]
    TraceNotStrictlyPositive { generator: String },
}

/// The scalar effect monoid a module lives over.
#[derive(Debug, Clone)]
pub enum Scalars {
    Finite(Arc<FiniteEffectMonoid>),
    Rational,
}

impl PartialEq for Scalars {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalars::Finite(a), Scalars::Finite(b)) => Arc::ptr_eq(a, b) || a == b,
            (Scalars::Rational, Scalars::Rational) => true,
            _ => false,
        }
    }
}

impl Scalars {
    pub fn boolean() -> Self {
        Scalars::Finite(Arc::new(FiniteEffectMonoid::two()))
    }

    pub fn describe(&self) -> String {
        match self {
            Scalars::Finite(m) => format!("finite effect monoid of size {}", m.size()),
            Scalars::Rational => "rational unit interval".into(),
        }
    }

    pub fn show(&self, v: &ScalarValue) -> String {
        match (self, v) {
            (Scalars::Finite(m), ScalarValue::Finite(i)) => m.label(*i),
            (Scalars::Rational, ScalarValue::Rational(q)) => show_rat(q),
            _ => panic!("scalar value from a different system"),
        }
    }
}

/// A scalar from either backend.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarValue {
    Finite(usize),
    Rational(BigRational),
}

impl ScalarValue {
    fn finite(&self) -> usize {
        match self {
            ScalarValue::Finite(i) => *i,
            ScalarValue::Rational(_) => panic!("expected a finite scalar"),
        }
    }

    fn rational(&self) -> &BigRational {
        match self {
            ScalarValue::Rational(q) => q,
            ScalarValue::Finite(_) => panic!("expected a rational scalar"),
        }
    }
}

impl ScalarSystem for Scalars {
    type Scalar = ScalarValue;

    fn zero(&self) -> ScalarValue {
        match self {
            Scalars::Finite(m) => ScalarValue::Finite(m.zero()),
            Scalars::Rational => ScalarValue::Rational(BigRational::zero()),
        }
    }

    fn one(&self) -> ScalarValue {
        match self {
            Scalars::Finite(m) => ScalarValue::Finite(m.one()),
            Scalars::Rational => ScalarValue::Rational(BigRational::one()),
        }
    }

    fn add(&self, a: &ScalarValue, b: &ScalarValue) -> Option<ScalarValue> {
        match self {
            Scalars::Finite(m) => m.sum(a.finite(), b.finite()).map(ScalarValue::Finite),
            Scalars::Rational => RationalUnitInterval
                .add(a.rational(), b.rational())
                .map(ScalarValue::Rational),
        }
    }

    fn mul(&self, a: &ScalarValue, b: &ScalarValue) -> ScalarValue {
        match self {
            Scalars::Finite(m) => ScalarValue::Finite(m.product(a.finite(), b.finite())),
            Scalars::Rational => {
                ScalarValue::Rational(RationalUnitInterval.mul(a.rational(), b.rational()))
            }
        }
    }

    fn divide(&self, s: &ScalarValue, t: &ScalarValue) -> Division<ScalarValue> {
        match self {
            Scalars::Finite(m) => match crate::monoid::divide(m, s.finite(), t.finite()) {
                Division::NotApplicable => Division::NotApplicable,
                Division::NoWitness => Division::NoWitness,
                Division::Quotient(u) => Division::Quotient(ScalarValue::Finite(u)),
                Division::Ambiguous(u, v) => {
                    Division::Ambiguous(ScalarValue::Finite(u), ScalarValue::Finite(v))
                }
            },
            Scalars::Rational => match RationalUnitInterval.divide(s.rational(), t.rational()) {
                Division::NotApplicable => Division::NotApplicable,
                Division::NoWitness => Division::NoWitness,
                Division::Quotient(u) => Division::Quotient(ScalarValue::Rational(u)),
                Division::Ambiguous(u, v) => {
                    Division::Ambiguous(ScalarValue::Rational(u), ScalarValue::Rational(v))
                }
            },
        }
    }

    fn enumerate(&self) -> Option<Vec<ScalarValue>> {
        match self {
            Scalars::Finite(m) => Some(m.elements().map(ScalarValue::Finite).collect()),
            Scalars::Rational => None,
        }
    }

    fn partial_complement(&self, r: &ScalarValue, t: &ScalarValue) -> Option<ScalarValue> {
        match self {
            Scalars::Finite(m) => m
                .partial_complement(&r.finite(), &t.finite())
                .map(ScalarValue::Finite),
            Scalars::Rational => RationalUnitInterval
                .partial_complement(r.rational(), t.rational())
                .map(ScalarValue::Rational),
        }
    }
}

/// An element of either module backend.
#[derive(Debug, Clone, PartialEq)]
pub enum ModElem {
    Index(usize),
    Coords(QVec),
}

impl ModElem {
    pub fn index(&self) -> usize {
        match self {
            ModElem::Index(i) => *i,
            ModElem::Coords(_) => panic!("expected a finite-table element"),
        }
    }

    pub fn coords(&self) -> &QVec {
        match self {
            ModElem::Coords(v) => v,
            ModElem::Index(_) => panic!("expected a coordinate element"),
        }
    }
}

/// Deterministic rationals in [0,1] with denominator at most 16.
fn grid_fraction(rng: &mut ChaCha8Rng) -> BigRational {
    let d = rng.gen_range(1..=16i64);
    let n = rng.gen_range(0..=d);
    rat(n, d)
}

// ---------------------------------------------------------------------------
// Effect modules
// ---------------------------------------------------------------------------

/// Finite effect algebra with a scalar action given by a table.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteEffectModule {
    scalars: Arc<FiniteEffectMonoid>,
    algebra: FiniteEffectAlgebra,
    /// Row-major |M| x |E|: action[r * |E| + a].
    action: Vec<usize>,
}

impl FiniteEffectModule {
    pub fn new(
        scalars: Arc<FiniteEffectMonoid>,
        algebra: FiniteEffectAlgebra,
        action: Vec<usize>,
    ) -> Result<Self, StructuralError> {
        let want = scalars.size() * algebra.size();
        if action.len() != want {
            return Err(StructuralError::TableSize {
                got: action.len(),
                want,
            });
        }
        if let Some(&bad) = action.iter().find(|&&v| v >= algebra.size()) {
            return Err(StructuralError::IndexOutOfRange {
                index: bad,
                size: algebra.size(),
            });
        }
        Ok(FiniteEffectModule {
            scalars,
            algebra,
            action,
        })
    }

    /// `M` acting on its own algebra by multiplication; the unit object of
    /// the module category.
    pub fn regular(scalars: Arc<FiniteEffectMonoid>) -> Self {
        let algebra = scalars.algebra().clone();
        let n = algebra.size();
        let mut action = vec![0; n * n];
        for r in 0..n {
            for a in 0..n {
                action[r * n + a] = scalars.product(r, a);
            }
        }
        FiniteEffectModule {
            scalars,
            algebra,
            action,
        }
    }

    /// The forced action of the two-element scalars: 0·a = 0 and 1·a = a.
    pub fn trivial_action(
        scalars: Arc<FiniteEffectMonoid>,
        algebra: FiniteEffectAlgebra,
    ) -> Result<Self, StructuralError> {
        if scalars.size() != 2 {
            return Err(StructuralError::Other(
                "trivial action needs the two-element scalars".into(),
            ));
        }
        let n = algebra.size();
        let mut action = vec![0; 2 * n];
        for a in 0..n {
            action[scalars.zero() * n + a] = algebra.zero();
            action[scalars.one() * n + a] = a;
        }
        FiniteEffectModule::new(scalars, algebra, action)
    }

    pub fn scalars(&self) -> &Arc<FiniteEffectMonoid> {
        &self.scalars
    }

    pub fn algebra(&self) -> &FiniteEffectAlgebra {
        &self.algebra
    }

    pub fn size(&self) -> usize {
        self.algebra.size()
    }

    pub fn act(&self, r: usize, a: usize) -> usize {
        self.action[r * self.algebra.size() + a]
    }
}

/// The interval `[0, u]` of `ℚⁿ` ordered by a polyhedral cone, with scalar
/// multiplication as the rational action.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalModule {
    dim: usize,
    cone: Cone,
    unit: QVec,
}

impl IntervalModule {
    pub fn new(dim: usize, cone: Cone, unit: QVec) -> Result<Self, ModuleError> {
        if unit.len() != dim {
            return Err(ModuleError::DimensionMismatch {
                got: unit.len(),
                want: dim,
            });
        }
        if !cone.contains(&unit, dim) {
            return Err(ModuleError::UnitOutsideCone);
        }
        Ok(IntervalModule { dim, cone, unit })
    }

    /// Coordinatewise interval with the all-ones unit.
    pub fn product_interval(dim: usize) -> Self {
        IntervalModule {
            dim,
            cone: Cone::Coordinatewise,
            unit: vec![BigRational::one(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn unit(&self) -> &QVec {
        &self.unit
    }

    pub fn contains(&self, x: &QVec) -> bool {
        x.len() == self.dim
            && self.cone.contains(x, self.dim)
            && self.cone.contains(&qvec_sub(&self.unit, x), self.dim)
    }

    pub fn sum(&self, x: &QVec, y: &QVec) -> Option<QVec> {
        let s = qvec_add(x, y);
        if self.contains(&s) {
            Some(s)
        } else {
            None
        }
    }

    /// Largest t >= 0 with t·g still inside [0, u]; the scaled generators
    /// stand in for polytope vertices on the sample grid.
    fn max_scale(&self, g: &QVec) -> BigRational {
        match &self.cone {
            Cone::Coordinatewise => {
                let mut best: Option<BigRational> = None;
                for i in 0..self.dim {
                    if g[i] > BigRational::zero() {
                        let t = &self.unit[i] / &g[i];
                        if best.as_ref().map(|b| t < *b).unwrap_or(true) {
                            best = Some(t);
                        }
                    } else if g[i] < BigRational::zero() {
                        return BigRational::zero();
                    }
                }
                best.unwrap_or_else(BigRational::zero)
            }
            Cone::Generators(gs) => {
                // maximize t subject to t·g + sum_j mu_j h_j = u.
                let k = gs.len();
                let mut lp = RationalLP::new(k + 1);
                let mut objective = qvec_zero(k + 1);
                objective[0] = -BigRational::one();
                lp.minimize(objective);
                for coord in 0..self.dim {
                    let mut row = qvec_zero(k + 1);
                    row[0] = g[coord].clone();
                    for (j, h) in gs.iter().enumerate() {
                        row[j + 1] = h[coord].clone();
                    }
                    lp.add_eq(row, self.unit[coord].clone());
                }
                match lp.solve() {
                    Ok(LpOutcome::Optimal { value, .. }) => -value,
                    // An unbounded direction or an unscalable generator both
                    // degrade to the safe choice of staying at zero.
                    _ => BigRational::zero(),
                }
            }
        }
    }

    /// Deterministic sample: scaled generators, pairwise midpoints, the
    /// half-unit barycenter, zero, the unit, and pseudo-random points.
    pub fn sample(&self) -> Vec<QVec> {
        let mut points = vec![qvec_zero(self.dim), self.unit.clone()];
        let gens = self.cone.generators(self.dim);
        let mut scaled = Vec::new();
        for g in &gens {
            let t = self.max_scale(g);
            if t > BigRational::zero() {
                scaled.push(qvec_scale(&t, g));
            }
        }
        points.extend(scaled.iter().cloned());
        for i in 0..scaled.len() {
            for j in i + 1..scaled.len() {
                let mid = qvec_scale(&rat(1, 2), &qvec_add(&scaled[i], &scaled[j]));
                if self.contains(&mid) {
                    points.push(mid);
                }
            }
        }
        points.push(qvec_scale(&rat(1, 2), &self.unit));

        let mut rng = ChaCha8Rng::seed_from_u64(GRID_SEED);
        for _ in 0..GRID_RANDOM_POINTS {
            let p = match &self.cone {
                Cone::Coordinatewise => (0..self.dim)
                    .map(|i| grid_fraction(&mut rng) * &self.unit[i])
                    .collect::<QVec>(),
                Cone::Generators(_) => {
                    // Subconvex combination of the scaled generators stays in
                    // the interval because the interval is convex and holds 0.
                    let mut lambdas: Vec<BigRational> =
                        scaled.iter().map(|_| grid_fraction(&mut rng)).collect();
                    let total: BigRational =
                        lambdas.iter().fold(BigRational::zero(), |s, l| s + l);
                    if total > BigRational::one() {
                        for l in lambdas.iter_mut() {
                            *l = &*l / &total;
                        }
                    }
                    let mut p = qvec_zero(self.dim);
                    for (l, s) in lambdas.iter().zip(&scaled) {
                        p = qvec_add(&p, &qvec_scale(l, s));
                    }
                    p
                }
            };
            if self.contains(&p) {
                points.push(p);
            }
        }
        points.dedup();
        points
    }
}

/// An effect module over either scalar backend.
#[derive(Debug, Clone, PartialEq)]
pub enum EffectModule {
    Finite(FiniteEffectModule),
    Interval(IntervalModule),
}

impl EffectModule {
    pub fn scalars(&self) -> Scalars {
        match self {
            EffectModule::Finite(m) => Scalars::Finite(m.scalars.clone()),
            EffectModule::Interval(_) => Scalars::Rational,
        }
    }

    pub fn zero_elem(&self) -> ModElem {
        match self {
            EffectModule::Finite(m) => ModElem::Index(m.algebra.zero()),
            EffectModule::Interval(m) => ModElem::Coords(qvec_zero(m.dim)),
        }
    }

    pub fn top_elem(&self) -> ModElem {
        match self {
            EffectModule::Finite(m) => ModElem::Index(m.algebra.top()),
            EffectModule::Interval(m) => ModElem::Coords(m.unit.clone()),
        }
    }

    pub fn contains(&self, x: &ModElem) -> bool {
        match (self, x) {
            (EffectModule::Finite(m), ModElem::Index(i)) => *i < m.size(),
            (EffectModule::Interval(m), ModElem::Coords(v)) => m.contains(v),
            _ => false,
        }
    }

    pub fn sum(&self, x: &ModElem, y: &ModElem) -> Option<ModElem> {
        match self {
            EffectModule::Finite(m) => {
                m.algebra.sum(x.index(), y.index()).map(ModElem::Index)
            }
            EffectModule::Interval(m) => m.sum(x.coords(), y.coords()).map(ModElem::Coords),
        }
    }

    pub fn act(&self, r: &ScalarValue, x: &ModElem) -> ModElem {
        match self {
            EffectModule::Finite(m) => ModElem::Index(m.act(r.finite(), x.index())),
            EffectModule::Interval(_) => ModElem::Coords(qvec_scale(r.rational(), x.coords())),
        }
    }

    pub fn element_sample(&self) -> Vec<ModElem> {
        match self {
            EffectModule::Finite(m) => m.algebra.elements().map(ModElem::Index).collect(),
            EffectModule::Interval(m) => m.sample().into_iter().map(ModElem::Coords).collect(),
        }
    }

    /// Scalars quantified over by the sampled axiom checks.
    pub fn scalar_sample(&self) -> Vec<ScalarValue> {
        match self {
            EffectModule::Finite(m) => m.scalars.elements().map(ScalarValue::Finite).collect(),
            EffectModule::Interval(_) => rational_scalar_sample(),
        }
    }

    pub fn show_elem(&self, x: &ModElem) -> String {
        match (self, x) {
            (EffectModule::Finite(m), ModElem::Index(i)) => m.algebra.label(*i),
            (EffectModule::Interval(_), ModElem::Coords(v)) => show_qvec(v),
            _ => format!("{x:?}"),
        }
    }
}

fn rational_scalar_sample() -> Vec<ScalarValue> {
    let mut out: Vec<BigRational> = vec![
        BigRational::zero(),
        BigRational::one(),
        rat(1, 2),
        rat(1, 3),
        rat(2, 3),
        rat(1, 4),
        rat(3, 4),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(GRID_SEED ^ 1);
    for _ in 0..9 {
        out.push(grid_fraction(&mut rng));
    }
    out.dedup();
    out.into_iter().map(ScalarValue::Rational).collect()
}

/// Verifies biadditivity, unit action, and multiplicativity of the action;
/// exhaustive on finite carriers, on the sample grid otherwise.
pub fn check_effect_module_axioms(e: &EffectModule) -> CheckReport {
    let mut violations = Vec::new();
    if let EffectModule::Finite(m) = e {
        violations.extend(check_effect_algebra_axioms(&m.algebra));
    }

    let scalars = e.scalars();
    let rs = e.scalar_sample();
    let xs = e.element_sample();
    let zero = e.zero_elem();
    let one = scalars.one();

    for x in &xs {
        let ox = e.show_elem(x);
        if e.act(&one, x) != *x {
            violations.push(Violation::new(
                "module/unit-action",
                vec![ox.clone()],
                "1·a differs from a",
            ));
        }
        if e.act(&scalars.zero(), x) != zero {
            violations.push(Violation::new(
                "module/zero-scalar",
                vec![ox.clone()],
                "0·a is not the zero element",
            ));
        }
    }
    for r in &rs {
        if e.act(r, &zero) != zero {
            violations.push(Violation::new(
                "module/zero-element",
                vec![scalars.show(r)],
                "r·0 is not the zero element",
            ));
        }
    }

    for r in &rs {
        for x in &xs {
            if !e.contains(&e.act(r, x)) {
                violations.push(Violation::new(
                    "module/closure",
                    vec![scalars.show(r), e.show_elem(x)],
                    "action result leaves the carrier",
                ));
            }
        }
    }

    for r in &rs {
        for s in &rs {
            for x in &xs {
                let left = e.act(&scalars.mul(r, s), x);
                let right = e.act(r, &e.act(s, x));
                if left != right {
                    violations.push(Violation::new(
                        "module/scalar-associativity",
                        vec![scalars.show(r), scalars.show(s), e.show_elem(x)],
                        "(r·s)·a differs from r·(s·a)",
                    ));
                }
            }
        }
    }

    for r in &rs {
        for s in &rs {
            let Some(rs_sum) = scalars.add(r, s) else {
                continue;
            };
            for x in &xs {
                let left = e.act(&rs_sum, x);
                match e.sum(&e.act(r, x), &e.act(s, x)) {
                    Some(right) if right == left => {}
                    Some(_) | None => {
                        violations.push(Violation::new(
                            "module/scalar-biadditivity",
                            vec![scalars.show(r), scalars.show(s), e.show_elem(x)],
                            "(r⊕s)·a differs from r·a ⊕ s·a",
                        ));
                    }
                }
            }
        }
    }

    for x in &xs {
        for y in &xs {
            let Some(xy) = e.sum(x, y) else { continue };
            for r in &rs {
                let left = e.act(r, &xy);
                match e.sum(&e.act(r, x), &e.act(r, y)) {
                    Some(right) if right == left => {}
                    Some(_) | None => {
                        violations.push(Violation::new(
                            "module/element-biadditivity",
                            vec![scalars.show(r), e.show_elem(x), e.show_elem(y)],
                            "r·(a⊕b) differs from r·a ⊕ r·b",
                        ));
                    }
                }
            }
        }
    }

    CheckReport {
        subject: "effect module".into(),
        violations,
        skipped: Vec::new(),
    }
}

// ---------------------------------------------------------------------------
// Weight modules
// ---------------------------------------------------------------------------

/// Finite PCM with a scalar action and a weight table.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteWeightModule {
    scalars: Arc<FiniteEffectMonoid>,
    pcm: FinitePcm,
    /// Row-major |M| x |X|.
    action: Vec<usize>,
    /// weight[x] is an index into the scalar monoid.
    weight: Vec<usize>,
}

impl FiniteWeightModule {
    pub fn new(
        scalars: Arc<FiniteEffectMonoid>,
        pcm: FinitePcm,
        action: Vec<usize>,
        weight: Vec<usize>,
    ) -> Result<Self, StructuralError> {
        let n = pcm.size();
        if action.len() != scalars.size() * n {
            return Err(StructuralError::TableSize {
                got: action.len(),
                want: scalars.size() * n,
            });
        }
        if weight.len() != n {
            return Err(StructuralError::TableSize {
                got: weight.len(),
                want: n,
            });
        }
        if let Some(&bad) = action.iter().find(|&&v| v >= n) {
            return Err(StructuralError::IndexOutOfRange { index: bad, size: n });
        }
        if let Some(&bad) = weight.iter().find(|&&v| v >= scalars.size()) {
            return Err(StructuralError::IndexOutOfRange {
                index: bad,
                size: scalars.size(),
            });
        }
        Ok(FiniteWeightModule {
            scalars,
            pcm,
            action,
            weight,
        })
    }

    /// A pointed set over the two-element scalars: the first label is the
    /// basepoint (the zero), nothing else is summable, and every nonzero
    /// element has weight 1.
    pub fn pointed_set(labels: &[&str]) -> Self {
        let n = labels.len();
        assert!(n >= 1, "a pointed set needs at least its basepoint");
        let carrier =
            FiniteCarrier::with_labels(labels.iter().map(|s| s.to_string()).collect())
                .expect("distinct labels");
        let mut sum = vec![None; n * n];
        for a in 0..n {
            sum[a] = Some(a);
            sum[a * n] = Some(a);
        }
        let pcm = FinitePcm::new(carrier, 0, sum).expect("pointed-set table is well formed");
        let scalars = Arc::new(FiniteEffectMonoid::two());
        let mut action = vec![0; 2 * n];
        for a in 0..n {
            action[scalars.one() * n + a] = a;
        }
        let weight = (0..n).map(|a| if a == 0 { 0 } else { 1 }).collect();
        FiniteWeightModule {
            scalars,
            pcm,
            action,
            weight,
        }
    }

    /// `M` as a weight module over itself: weight is the identity; the unit
    /// object of the weight-module category.
    pub fn regular(scalars: Arc<FiniteEffectMonoid>) -> Self {
        let n = scalars.size();
        let pcm = scalars.algebra().pcm().clone();
        let mut action = vec![0; n * n];
        for r in 0..n {
            for x in 0..n {
                action[r * n + x] = scalars.product(r, x);
            }
        }
        FiniteWeightModule {
            scalars,
            pcm,
            action,
            weight: (0..n).collect(),
        }
    }

    pub fn scalars(&self) -> &Arc<FiniteEffectMonoid> {
        &self.scalars
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

    pub fn sum(&self, x: usize, y: usize) -> Option<usize> {
        self.pcm.sum(x, y)
    }

    pub fn act(&self, r: usize, x: usize) -> usize {
        self.action[r * self.pcm.size() + x]
    }

    pub fn weight_of(&self, x: usize) -> usize {
        self.weight[x]
    }

    pub fn label(&self, x: usize) -> String {
        self.pcm.label(x)
    }
}

/// The slice `{x ∈ C : τ(x) ≤ 1}` of a polyhedral cone with a rational
/// trace functional as the weight.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSliceModule {
    dim: usize,
    cone: Cone,
    trace: QVec,
}

impl ConeSliceModule {
    pub fn new(dim: usize, cone: Cone, trace: QVec) -> Result<Self, ModuleError> {
        if trace.len() != dim {
            return Err(ModuleError::DimensionMismatch {
                got: trace.len(),
                want: dim,
            });
        }
        for g in cone.generators(dim) {
            if !qvec_is_zero(&g) && qvec_dot(&trace, &g) <= BigRational::zero() {
                return Err(ModuleError::TraceNotStrictlyPositive {
                    generator: show_qvec(&g),
                });
            }
        }
        Ok(ConeSliceModule { dim, cone, trace })
    }

    /// The standard simplex slice: coordinatewise cone, trace = sum.
    pub fn simplex(dim: usize) -> Self {
        ConeSliceModule {
            dim,
            cone: Cone::Coordinatewise,
            trace: vec![BigRational::one(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn trace(&self) -> &QVec {
        &self.trace
    }

    pub fn contains(&self, x: &QVec) -> bool {
        x.len() == self.dim
            && self.cone.contains(x, self.dim)
            && qvec_dot(&self.trace, x) <= BigRational::one()
    }

    pub fn weight(&self, x: &QVec) -> BigRational {
        qvec_dot(&self.trace, x)
    }

    pub fn sum(&self, x: &QVec, y: &QVec) -> Option<QVec> {
        let s = qvec_add(x, y);
        if self.contains(&s) {
            Some(s)
        } else {
            None
        }
    }

    /// Deterministic sample: zero, trace-normalized generators, their
    /// halves, pairwise midpoints, and pseudo-random subconvex combinations.
    pub fn sample(&self) -> Vec<QVec> {
        let mut points = vec![qvec_zero(self.dim)];
        let gens = self.cone.generators(self.dim);
        let mut verts = Vec::new();
        for g in &gens {
            let t = self.weight(g);
            if t > BigRational::zero() {
                verts.push(qvec_scale(&(BigRational::one() / t), g));
            }
        }
        points.extend(verts.iter().cloned());
        for v in &verts {
            points.push(qvec_scale(&rat(1, 2), v));
        }
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                points.push(qvec_scale(&rat(1, 2), &qvec_add(&verts[i], &verts[j])));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(GRID_SEED ^ 2);
        for _ in 0..GRID_RANDOM_POINTS {
            let mut lambdas: Vec<BigRational> =
                verts.iter().map(|_| grid_fraction(&mut rng)).collect();
            let total: BigRational = lambdas.iter().fold(BigRational::zero(), |s, l| s + l);
            if total > BigRational::one() {
                for l in lambdas.iter_mut() {
                    *l = &*l / &total;
                }
            }
            let mut p = qvec_zero(self.dim);
            for (l, v) in lambdas.iter().zip(&verts) {
                p = qvec_add(&p, &qvec_scale(l, v));
            }
            if self.contains(&p) {
                points.push(p);
            }
        }
        points.dedup();
        points
    }
}

/// A weight module over either scalar backend.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightModule {
    Finite(FiniteWeightModule),
    ConeSlice(ConeSliceModule),
}

impl WeightModule {
    pub fn scalars(&self) -> Scalars {
        match self {
            WeightModule::Finite(m) => Scalars::Finite(m.scalars.clone()),
            WeightModule::ConeSlice(_) => Scalars::Rational,
        }
    }

    pub fn zero_elem(&self) -> ModElem {
        match self {
            WeightModule::Finite(m) => ModElem::Index(m.zero()),
            WeightModule::ConeSlice(m) => ModElem::Coords(qvec_zero(m.dim)),
        }
    }

    pub fn contains(&self, x: &ModElem) -> bool {
        match (self, x) {
            (WeightModule::Finite(m), ModElem::Index(i)) => *i < m.size(),
            (WeightModule::ConeSlice(m), ModElem::Coords(v)) => m.contains(v),
            _ => false,
        }
    }

    pub fn sum(&self, x: &ModElem, y: &ModElem) -> Option<ModElem> {
        match self {
            WeightModule::Finite(m) => m.sum(x.index(), y.index()).map(ModElem::Index),
            WeightModule::ConeSlice(m) => m.sum(x.coords(), y.coords()).map(ModElem::Coords),
        }
    }

    pub fn act(&self, r: &ScalarValue, x: &ModElem) -> ModElem {
        match self {
            WeightModule::Finite(m) => ModElem::Index(m.act(r.finite(), x.index())),
            WeightModule::ConeSlice(_) => {
                ModElem::Coords(qvec_scale(r.rational(), x.coords()))
            }
        }
    }

    pub fn weight(&self, x: &ModElem) -> ScalarValue {
        match self {
            WeightModule::Finite(m) => ScalarValue::Finite(m.weight_of(x.index())),
            WeightModule::ConeSlice(m) => ScalarValue::Rational(m.weight(x.coords())),
        }
    }

    pub fn element_sample(&self) -> Vec<ModElem> {
        match self {
            WeightModule::Finite(m) => (0..m.size()).map(ModElem::Index).collect(),
            WeightModule::ConeSlice(m) => {
                m.sample().into_iter().map(ModElem::Coords).collect()
            }
        }
    }

    pub fn scalar_sample(&self) -> Vec<ScalarValue> {
        match self {
            WeightModule::Finite(m) => m.scalars.elements().map(ScalarValue::Finite).collect(),
            WeightModule::ConeSlice(_) => rational_scalar_sample(),
        }
    }

    pub fn show_elem(&self, x: &ModElem) -> String {
        match (self, x) {
            (WeightModule::Finite(m), ModElem::Index(i)) => m.label(*i),
            (WeightModule::ConeSlice(_), ModElem::Coords(v)) => show_qvec(v),
            _ => format!("{x:?}"),
        }
    }
}

/// Verifies the carrier PCM, the action laws, and the three weight laws;
/// exhaustive on finite carriers, sampled on cone slices.
pub fn check_weight_module_axioms(w: &WeightModule) -> CheckReport {
    let mut violations = Vec::new();
    if let WeightModule::Finite(m) = w {
        violations.extend(check_pcm_axioms(&m.pcm));
    }

    let scalars = w.scalars();
    let rs = w.scalar_sample();
    let xs = w.element_sample();
    let zero = w.zero_elem();
    let one = scalars.one();

    for x in &xs {
        if w.act(&one, x) != *x {
            violations.push(Violation::new(
                "wmod/unit-action",
                vec![w.show_elem(x)],
                "1·x differs from x",
            ));
        }
        if w.act(&scalars.zero(), x) != zero {
            violations.push(Violation::new(
                "wmod/zero-scalar",
                vec![w.show_elem(x)],
                "0·x is not the zero element",
            ));
        }
    }
    for r in &rs {
        if w.act(r, &zero) != zero {
            violations.push(Violation::new(
                "wmod/zero-element",
                vec![scalars.show(r)],
                "r·0 is not the zero element",
            ));
        }
    }

    for r in &rs {
        for s in &rs {
            for x in &xs {
                if w.act(&scalars.mul(r, s), x) != w.act(r, &w.act(s, x)) {
                    violations.push(Violation::new(
                        "wmod/scalar-associativity",
                        vec![scalars.show(r), scalars.show(s), w.show_elem(x)],
                        "(r·s)·x differs from r·(s·x)",
                    ));
                }
            }
        }
    }

    for r in &rs {
        for s in &rs {
            let Some(rs_sum) = scalars.add(r, s) else {
                continue;
            };
            for x in &xs {
                let left = w.act(&rs_sum, x);
                match w.sum(&w.act(r, x), &w.act(s, x)) {
                    Some(right) if right == left => {}
                    Some(_) | None => {
                        violations.push(Violation::new(
                            "wmod/scalar-biadditivity",
                            vec![scalars.show(r), scalars.show(s), w.show_elem(x)],
                            "(r⊕s)·x differs from r·x ⊕ s·x",
                        ));
                    }
                }
            }
        }
    }

    for x in &xs {
        for y in &xs {
            let Some(xy) = w.sum(x, y) else { continue };
            for r in &rs {
                let left = w.act(r, &xy);
                match w.sum(&w.act(r, x), &w.act(r, y)) {
                    Some(right) if right == left => {}
                    Some(_) | None => {
                        violations.push(Violation::new(
                            "wmod/element-biadditivity",
                            vec![scalars.show(r), w.show_elem(x), w.show_elem(y)],
                            "r·(x⊕y) differs from r·x ⊕ r·y",
                        ));
                    }
                }
            }
        }
    }

    // Weight laws: additivity, action compatibility, zero reflection, and
    // summability reflection.
    for x in &xs {
        for y in &xs {
            match w.sum(x, y) {
                Some(xy) => match scalars.add(&w.weight(x), &w.weight(y)) {
                    Some(ws) if ws == w.weight(&xy) => {}
                    Some(_) | None => {
                        violations.push(Violation::new(
                            "wmod/weight-additive",
                            vec![w.show_elem(x), w.show_elem(y)],
                            "weight(x⊕y) differs from weight(x) ⊕ weight(y)",
                        ));
                    }
                },
                None => {
                    if scalars.add(&w.weight(x), &w.weight(y)).is_some() {
                        violations.push(Violation::new(
                            "wmod/weight-summability",
                            vec![w.show_elem(x), w.show_elem(y)],
                            "weights are summable but the elements are not",
                        ));
                    }
                }
            }
        }
    }
    for r in &rs {
        for x in &xs {
            if w.weight(&w.act(r, x)) != scalars.mul(r, &w.weight(x)) {
                violations.push(Violation::new(
                    "wmod/weight-action",
                    vec![scalars.show(r), w.show_elem(x)],
                    "weight(r·x) differs from r·weight(x)",
                ));
            }
        }
    }
    for x in &xs {
        if w.weight(x) == scalars.zero() && *x != zero {
            violations.push(Violation::new(
                "wmod/weight-reflects-zero",
                vec![w.show_elem(x)],
                "nonzero element of weight zero",
            ));
        }
    }

    CheckReport {
        subject: "weight module".into(),
        violations,
        skipped: Vec::new(),
    }
}

/// Outcome of the cancellativity probe.
#[derive(Debug, Clone, PartialEq)]
pub struct Cancellativity {
    pub cancellative: bool,
    /// (x, y, z) with x⊕y = x⊕z and y ≠ z.
    pub witness: Option<(String, String, String)>,
    pub justification: String,
}

/// Probes x⊕y = x⊕z ⇒ y = z. Reads only the sum structure: exhaustive scan
/// of the table for finite carriers, true by vector addition on cone slices.
pub fn is_cancellative(w: &WeightModule) -> Cancellativity {
    match w {
        WeightModule::Finite(m) => {
            for x in 0..m.size() {
                for y in 0..m.size() {
                    let Some(xy) = m.sum(x, y) else { continue };
                    for z in y + 1..m.size() {
                        if m.sum(x, z) == Some(xy) {
                            return Cancellativity {
                                cancellative: false,
                                witness: Some((m.label(x), m.label(y), m.label(z))),
                                justification: "exhaustive table scan".into(),
                            };
                        }
                    }
                }
            }
            Cancellativity {
                cancellative: true,
                witness: None,
                justification: "exhaustive table scan".into(),
            }
        }
        WeightModule::ConeSlice(_) => Cancellativity {
            cancellative: true,
            witness: None,
            justification: "vector addition cancels".into(),
        },
    }
}

/// Membership in B(X), the weight-1 elements.
pub fn base_contains(w: &WeightModule, x: &ModElem) -> bool {
    w.contains(x) && w.weight(x) == w.scalars().one()
}

/// All weight-1 elements of a finite carrier.
pub fn base_elements(w: &FiniteWeightModule) -> Vec<usize> {
    (0..w.size())
        .filter(|&x| w.weight_of(x) == w.scalars.one())
        .collect()
}

/// Samples convex combinations r·x ⊕ s·y with r⊕s = 1 over base points and
/// confirms they stay in the base.
pub fn check_base_convex_closure(w: &WeightModule) -> Vec<Violation> {
    let mut violations = Vec::new();
    let scalars = w.scalars();
    let base: Vec<ModElem> = w
        .element_sample()
        .into_iter()
        .filter(|x| base_contains(w, x))
        .collect();
    let pairs: Vec<(ScalarValue, ScalarValue)> = w
        .scalar_sample()
        .into_iter()
        .filter_map(|r| {
            let one = scalars.one();
            scalars.partial_complement(&r, &one).map(|s| (r, s))
        })
        .collect();
    for x in &base {
        for y in &base {
            for (r, s) in &pairs {
                let combo = w.sum(&w.act(r, x), &w.act(s, y));
                match combo {
                    Some(c) if base_contains(w, &c) => {}
                    Some(c) => violations.push(Violation::new(
                        "base/convex-closure",
                        vec![w.show_elem(x), w.show_elem(y), scalars.show(r)],
                        format!("combination {} left the base", w.show_elem(&c)),
                    )),
                    None => violations.push(Violation::new(
                        "base/convex-sum-defined",
                        vec![w.show_elem(x), w.show_elem(y), scalars.show(r)],
                        "convex combination of base points is undefined",
                    )),
                }
            }
        }
    }
    violations
}

// ---------------------------------------------------------------------------
// Coproducts
// ---------------------------------------------------------------------------

/// Finite weight-module coproduct: tuples whose weights are summable, with
/// pointwise operations; a sum is defined exactly when the two total
/// weights are summable.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightCoproduct {
    pub module: FiniteWeightModule,
    pub tuples: Vec<Vec<usize>>,
    /// Zero element of each part; not necessarily carrier index 0.
    part_zeros: Vec<usize>,
}

impl WeightCoproduct {
    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        self.tuples.iter().position(|t| t == tuple)
    }

    /// κᵢ: the tuple with x at slot `which` and zeros elsewhere.
    pub fn coprojection(&self, which: usize, x: usize) -> usize {
        let mut tuple = self.part_zeros.clone();
        tuple[which] = x;
        self.index_of(&tuple)
            .expect("single-slot tuples always have summable weights")
    }

    /// ▷ᵢ: the component at slot `which`.
    pub fn projection(&self, which: usize, t: usize) -> usize {
        self.tuples[t][which]
    }
}

fn tuple_weight(
    parts: &[&FiniteWeightModule],
    scalars: &FiniteEffectMonoid,
    tuple: &[usize],
) -> Option<usize> {
    let mut acc = scalars.zero();
    for (part, &x) in parts.iter().zip(tuple) {
        acc = scalars.sum(acc, part.weight_of(x))?;
    }
    Some(acc)
}

pub fn weight_module_coproduct(
    parts: &[&FiniteWeightModule],
) -> Result<WeightCoproduct, ModuleError> {
    assert!(!parts.is_empty(), "coproduct of zero summands is the zero module; unsupported");
    let scalars = parts[0].scalars.clone();
    for p in parts.iter().skip(1) {
        if p.scalars.as_ref() != scalars.as_ref() {
            return Err(ModuleError::MismatchedScalars {
                left: format!("finite effect monoid of size {}", scalars.size()),
                right: format!("finite effect monoid of size {}", p.scalars.size()),
            });
        }
    }

    // Enumerate carrier tuples with summable weights, zero tuple first.
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for part in parts {
        let mut next = Vec::new();
        for t in &tuples {
            for x in 0..part.size() {
                let mut grown = t.clone();
                grown.push(x);
                next.push(grown);
            }
        }
        tuples = next;
    }
    let mut kept = Vec::new();
    let mut weights = Vec::new();
    for t in tuples {
        if let Some(wt) = tuple_weight(parts, &scalars, &t) {
            kept.push(t);
            weights.push(wt);
        }
    }
    let mut tuples = kept;
    let zero_tuple: Vec<usize> = parts.iter().map(|p| p.zero()).collect();
    let zero_at = tuples
        .iter()
        .position(|t| *t == zero_tuple)
        .expect("zero weights are always summable");
    tuples.swap(0, zero_at);
    weights.swap(0, zero_at);

    let n = tuples.len();
    let labels: Vec<String> = tuples
        .iter()
        .map(|t| {
            let parts_lbl: Vec<String> = parts
                .iter()
                .zip(t)
                .map(|(p, &x)| p.label(x))
                .collect();
            format!("({})", parts_lbl.join(","))
        })
        .collect();
    let carrier = FiniteCarrier::with_labels(labels)?;

    let mut sum = vec![None; n * n];
    for i in 0..n {
        for j in 0..n {
            if scalars.sum(weights[i], weights[j]).is_none() {
                continue;
            }
            let pointwise: Option<Vec<usize>> = parts
                .iter()
                .enumerate()
                .map(|(k, p)| p.sum(tuples[i][k], tuples[j][k]))
                .collect();
            // Summable weights force pointwise-defined sums in each part.
            let t = pointwise.expect("weights summable but a component sum is undefined");
            sum[i * n + j] = Some(
                tuples
                    .iter()
                    .position(|u| *u == t)
                    .expect("pointwise sum has summable weight"),
            );
        }
    }
    let pcm = FinitePcm::new(carrier, 0, sum)?;

    let mut action = vec![0; scalars.size() * n];
    for r in 0..scalars.size() {
        for (i, t) in tuples.iter().enumerate() {
            let image: Vec<usize> = parts
                .iter()
                .zip(t)
                .map(|(p, &x)| p.act(r, x))
                .collect();
            action[r * n + i] = tuples
                .iter()
                .position(|u| *u == image)
                .expect("acting by a scalar only shrinks weights");
        }
    }

    let module = FiniteWeightModule::new(scalars, pcm, action, weights.clone())?;
    let part_zeros = parts.iter().map(|p| p.zero()).collect();
    Ok(WeightCoproduct {
        module,
        tuples,
        part_zeros,
    })
}

/// Coproduct of cone slices: block-diagonal cone, concatenated traces.
pub fn cone_slice_coproduct(parts: &[&ConeSliceModule]) -> ConeSliceModule {
    assert!(!parts.is_empty());
    let dim: usize = parts.iter().map(|p| p.dim).sum();
    let coordinatewise = parts
        .iter()
        .all(|p| matches!(p.cone, Cone::Coordinatewise));
    let cone = if coordinatewise {
        Cone::Coordinatewise
    } else {
        let mut gens = Vec::new();
        let mut offset = 0;
        for p in parts {
            for g in p.cone.generators(p.dim) {
                let mut padded = qvec_zero(dim);
                padded[offset..offset + p.dim].clone_from_slice(&g);
                gens.push(padded);
            }
            offset += p.dim;
        }
        Cone::Generators(gens)
    };
    let trace: QVec = parts.iter().flat_map(|p| p.trace.iter().cloned()).collect();
    ConeSliceModule { dim, cone, trace }
}

// ---------------------------------------------------------------------------
// Morphism enumeration (finite backends)
// ---------------------------------------------------------------------------

pub(crate) fn candidate_bound(target: usize, source: usize) -> Result<(), HomsetTooLarge> {
    let mut bound: u128 = 1;
    for _ in 0..source {
        bound = bound.saturating_mul(target as u128);
        if bound > HOMSET_CAP {
            return Err(HomsetTooLarge {
                candidates: bound,
                cap: HOMSET_CAP,
            });
        }
    }
    Ok(())
}

pub(crate) fn all_tables(target: usize, source: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current = vec![0usize; source];
    let mut done = target == 0 && source > 0;
    let mut first = true;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        if first {
            first = false;
            return Some(current.clone());
        }
        for slot in (0..source).rev() {
            if current[slot] + 1 < target {
                current[slot] += 1;
                for later in current.iter_mut().skip(slot + 1) {
                    *later = 0;
                }
                return Some(current.clone());
            }
        }
        done = true;
        None
    })
}

/// Module laws as a bare predicate, for enumeration filters. Mirrors
/// `check_effect_module_axioms` on the finite backend without building a
/// report.
fn is_valid_module_action(
    scalars: &FiniteEffectMonoid,
    algebra: &FiniteEffectAlgebra,
    action: &[usize],
) -> bool {
    let n = algebra.size();
    let act = |r: usize, a: usize| action[r * n + a];
    for a in 0..n {
        if act(scalars.one(), a) != a || act(scalars.zero(), a) != algebra.zero() {
            return false;
        }
    }
    for r in 0..scalars.size() {
        if act(r, algebra.zero()) != algebra.zero() {
            return false;
        }
        for s in 0..scalars.size() {
            for a in 0..n {
                if act(scalars.product(r, s), a) != act(r, act(s, a)) {
                    return false;
                }
            }
            if let Some(rs) = scalars.sum(r, s) {
                for a in 0..n {
                    match algebra.sum(act(r, a), act(s, a)) {
                        Some(t) if t == act(rs, a) => {}
                        _ => return false,
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                if let Some(xy) = algebra.sum(x, y) {
                    match algebra.sum(act(r, x), act(r, y)) {
                        Some(t) if t == act(r, xy) => {}
                        _ => return false,
                    }
                }
            }
        }
    }
    true
}

/// Every lawful action of `scalars` on `algebra`. The rows for 0 and 1 are
/// forced by the laws, so only the remaining rows are enumerated.
pub fn enumerate_effect_modules(
    scalars: &Arc<FiniteEffectMonoid>,
    algebra: &FiniteEffectAlgebra,
) -> Result<Vec<FiniteEffectModule>, HomsetTooLarge> {
    let n = algebra.size();
    let m = scalars.size();
    if m == 1 {
        // 0 = 1 forces a = 1·a = 0·a = 0, so only the one-point algebra
        // carries an action.
        return Ok(if n == 1 {
            vec![FiniteEffectModule::new(scalars.clone(), algebra.clone(), vec![0]).unwrap()]
        } else {
            Vec::new()
        });
    }
    let free_rows: Vec<usize> = (0..m)
        .filter(|&r| r != scalars.zero() && r != scalars.one())
        .collect();
    candidate_bound(n, free_rows.len() * n)?;
    let mut out = Vec::new();
    for choice in all_tables(n, free_rows.len() * n) {
        let mut action = vec![algebra.zero(); m * n];
        for a in 0..n {
            action[scalars.one() * n + a] = a;
        }
        for (k, &r) in free_rows.iter().enumerate() {
            action[r * n..(r + 1) * n].copy_from_slice(&choice[k * n..(k + 1) * n]);
        }
        if is_valid_module_action(scalars, algebra, &action) {
            out.push(FiniteEffectModule::new(scalars.clone(), algebra.clone(), action).unwrap());
        }
    }
    Ok(out)
}

/// All additive action-preserving maps between finite effect modules over
/// the same scalars, as tables indexed by source elements.
pub fn effect_module_maps(
    source: &FiniteEffectModule,
    target: &FiniteEffectModule,
) -> Result<Vec<Vec<usize>>, HomsetTooLarge> {
    assert!(
        source.scalars.as_ref() == target.scalars.as_ref(),
        "modules over different scalars have no maps"
    );
    candidate_bound(target.size(), source.size())?;
    let out = all_tables(target.size(), source.size())
        .filter(|table| is_effect_module_map(source, target, table))
        .collect();
    Ok(out)
}

pub fn is_effect_module_map(
    source: &FiniteEffectModule,
    target: &FiniteEffectModule,
    table: &[usize],
) -> bool {
    if table[source.algebra.zero()] != target.algebra.zero() {
        return false;
    }
    for x in 0..source.size() {
        for y in 0..source.size() {
            if let Some(xy) = source.algebra.sum(x, y) {
                match target.algebra.sum(table[x], table[y]) {
                    Some(s) if s == table[xy] => {}
                    _ => return false,
                }
            }
        }
    }
    for r in 0..source.scalars.size() {
        for x in 0..source.size() {
            if table[source.act(r, x)] != target.act(r, table[x]) {
                return false;
            }
        }
    }
    true
}

/// All weight-decreasing additive action-preserving maps between finite
/// weight modules over the same scalars.
pub fn weight_module_maps(
    source: &FiniteWeightModule,
    target: &FiniteWeightModule,
) -> Result<Vec<Vec<usize>>, HomsetTooLarge> {
    assert!(
        source.scalars.as_ref() == target.scalars.as_ref(),
        "modules over different scalars have no maps"
    );
    candidate_bound(target.size(), source.size())?;
    let out = all_tables(target.size(), source.size())
        .filter(|table| is_weight_module_map(source, target, table))
        .collect();
    Ok(out)
}

pub fn is_weight_module_map(
    source: &FiniteWeightModule,
    target: &FiniteWeightModule,
    table: &[usize],
) -> bool {
    if table[source.zero()] != target.zero() {
        return false;
    }
    let m = source.scalars.algebra();
    for x in 0..source.size() {
        if !leq(m, target.weight_of(table[x]), source.weight_of(x)) {
            return false;
        }
    }
    for x in 0..source.size() {
        for y in 0..source.size() {
            if let Some(xy) = source.sum(x, y) {
                match target.sum(table[x], table[y]) {
                    Some(s) if s == table[xy] => {}
                    _ => return false,
                }
            }
        }
    }
    for r in 0..source.scalars.size() {
        for x in 0..source.size() {
            if table[source.act(r, x)] != target.act(r, table[x]) {
                return false;
            }
        }
    }
    true
}

/// Positivity and trace decrease for a matrix between cone slices, checked
/// exactly on the cone generators (sufficient by linearity).
pub fn is_cone_slice_map(
    source: &ConeSliceModule,
    target: &ConeSliceModule,
    matrix: &[QVec],
) -> bool {
    if matrix.len() != target.dim || matrix.iter().any(|row| row.len() != source.dim) {
        return false;
    }
    for g in source.cone.generators(source.dim) {
        let image: QVec = matrix.iter().map(|row| qvec_dot(row, &g)).collect();
        if !target.cone.contains(&image, target.dim) {
            return false;
        }
        if qvec_dot(&target.trace, &image) > qvec_dot(&source.trace, &g) {
            return false;
        }
    }
    true
}

/// Matrices with entries drawn from a fixed grid that are valid
/// cone-slice morphisms; the sampled stand-in for an infinite homset.
pub fn cone_slice_maps_grid(
    source: &ConeSliceModule,
    target: &ConeSliceModule,
    entries: &[BigRational],
) -> Vec<Vec<QVec>> {
    let cells = target.dim * source.dim;
    all_tables(entries.len(), cells)
        .map(|choice| -> Vec<QVec> {
            (0..target.dim)
                .map(|r| {
                    (0..source.dim)
                        .map(|c| entries[choice[r * source.dim + c]].clone())
                        .collect()
                })
                .collect()
        })
        .filter(|matrix| is_cone_slice_map(source, target, matrix))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        rat(n, d)
    }

    fn b4() -> Arc<FiniteEffectMonoid> {
        Arc::new(FiniteEffectMonoid::boolean_meet(2))
    }

    #[test]
    fn trivial_action_modules_are_valid() {
        let two = Arc::new(FiniteEffectMonoid::two());
        for algebra in [
            FiniteEffectAlgebra::three_chain(),
            FiniteEffectAlgebra::powerset(2),
        ] {
            let module =
                FiniteEffectModule::trivial_action(two.clone(), algebra).unwrap();
            let report = check_effect_module_axioms(&EffectModule::Finite(module));
            assert!(report.passed(), "{:?}", report.violations);
        }
    }

    #[test]
    fn product_interval_is_valid() {
        let module = EffectModule::Interval(IntervalModule::product_interval(2));
        let report = check_effect_module_axioms(&module);
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn corrupted_unit_action_is_flagged() {
        let two = Arc::new(FiniteEffectMonoid::two());
        let algebra = FiniteEffectAlgebra::powerset(2);
        let n = algebra.size();
        let mut module =
            FiniteEffectModule::trivial_action(two.clone(), algebra).unwrap();
        // Swap two images in the 1-row so 1·a = a fails somewhere.
        module.action[two.one() * n + 1] = 2;
        module.action[two.one() * n + 2] = 1;
        let report = check_effect_module_axioms(&EffectModule::Finite(module));
        assert!(report
            .violations
            .iter()
            .any(|v| v.law == "module/unit-action"));
    }

    #[test]
    fn unique_action_over_booleans() {
        // Over {0,1} the module axioms force the trivial action: filter all
        // 2x|E| tables down to the valid ones.
        let two = Arc::new(FiniteEffectMonoid::two());
        let algebra = FiniteEffectAlgebra::three_chain();
        let n = algebra.size();
        let mut valid = Vec::new();
        for table in all_tables(n, 2 * n) {
            if let Ok(module) =
                FiniteEffectModule::new(two.clone(), algebra.clone(), table.clone())
            {
                if check_effect_module_axioms(&EffectModule::Finite(module)).passed() {
                    valid.push(table);
                }
            }
        }
        let expected = FiniteEffectModule::trivial_action(two, algebra).unwrap();
        assert_eq!(valid, vec![expected.action]);
    }

    #[test]
    fn interval_membership_over_skew_cone() {
        let cone = Cone::Generators(vec![
            vec![q(1, 1), q(0, 1)],
            vec![q(1, 1), q(1, 1)],
        ]);
        let module = IntervalModule::new(2, cone, vec![q(2, 1), q(1, 1)]).unwrap();
        assert!(module.contains(&vec![q(1, 1), q(1, 2)]));
        assert!(!module.contains(&vec![q(0, 1), q(1, 1)]));
        let report = check_effect_module_axioms(&EffectModule::Interval(module));
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn pointed_set_and_simplex_are_valid_weight_modules() {
        let pointed = WeightModule::Finite(FiniteWeightModule::pointed_set(&["*", "x"]));
        let report = check_weight_module_axioms(&pointed);
        assert!(report.passed(), "{:?}", report.violations);

        let simplex = WeightModule::ConeSlice(ConeSliceModule::simplex(2));
        let report = check_weight_module_axioms(&simplex);
        assert!(report.passed(), "{:?}", report.violations);

        let regular = WeightModule::Finite(FiniteWeightModule::regular(b4()));
        let report = check_weight_module_axioms(&regular);
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn zero_weight_is_flagged() {
        let mut m = FiniteWeightModule::pointed_set(&["*", "x"]);
        m.weight[1] = 0;
        let report = check_weight_module_axioms(&WeightModule::Finite(m));
        assert!(report
            .violations
            .iter()
            .any(|v| v.law == "wmod/weight-reflects-zero"));
    }

    #[test]
    fn cancellativity_probe() {
        let simplex = WeightModule::ConeSlice(ConeSliceModule::simplex(2));
        let probe = is_cancellative(&simplex);
        assert!(probe.cancellative);
        assert_eq!(probe.justification, "vector addition cancels");

        let pointed = WeightModule::Finite(FiniteWeightModule::pointed_set(&["*", "a", "b"]));
        assert!(is_cancellative(&pointed).cancellative);

        // Sum collision x⊕y = x⊕z with y ≠ z. No law-complete module over
        // the shipped finite scalars has one (their atom actions force
        // cancellation), so this probe fixture is well formed structurally
        // but deliberately not law-complete.
        let carrier = FiniteCarrier::with_labels(
            ["0", "x", "y", "z", "w"].iter().map(|s| s.to_string()).collect(),
        )
        .unwrap();
        let n = 5;
        let mut sum = vec![None; n * n];
        for a in 0..n {
            sum[a] = Some(a);
            sum[a * n] = Some(a);
        }
        sum[n + 2] = Some(4); // x⊕y = w
        sum[2 * n + 1] = Some(4);
        sum[n + 3] = Some(4); // x⊕z = w
        sum[3 * n + 1] = Some(4);
        let pcm = FinitePcm::new(carrier, 0, sum).unwrap();
        let scalars = b4();
        let mut action = vec![0; scalars.size() * n];
        for x in 0..n {
            action[scalars.one() * n + x] = x;
        }
        let weight = vec![0, 1, 2, 2, 3];
        let module = FiniteWeightModule::new(scalars, pcm, action, weight).unwrap();
        let probe = is_cancellative(&WeightModule::Finite(module));
        assert!(!probe.cancellative);
        assert_eq!(
            probe.witness,
            Some(("x".into(), "y".into(), "z".into()))
        );
    }

    #[test]
    fn base_of_fixtures() {
        let pointed = FiniteWeightModule::pointed_set(&["*", "x"]);
        assert_eq!(base_elements(&pointed), vec![1]);

        let simplex = WeightModule::ConeSlice(ConeSliceModule::simplex(2));
        assert!(base_contains(&simplex, &ModElem::Coords(vec![q(1, 2), q(1, 2)])));
        assert!(!base_contains(&simplex, &ModElem::Coords(vec![q(1, 4), q(1, 2)])));

        // (1/2)·(1,0) ⊕ (1/2)·(0,1) lands on the diagonal base point.
        let half = ScalarValue::Rational(q(1, 2));
        let combo = simplex
            .sum(
                &simplex.act(&half, &ModElem::Coords(vec![q(1, 1), q(0, 1)])),
                &simplex.act(&half, &ModElem::Coords(vec![q(0, 1), q(1, 1)])),
            )
            .unwrap();
        assert_eq!(combo, ModElem::Coords(vec![q(1, 2), q(1, 2)]));
        assert!(base_contains(&simplex, &combo));

        assert!(check_base_convex_closure(&simplex).is_empty());
        let pointed = WeightModule::Finite(FiniteWeightModule::pointed_set(&["*", "a", "b"]));
        assert!(check_base_convex_closure(&pointed).is_empty());
    }

    #[test]
    fn coproduct_of_pointed_sets_is_wedge() {
        let x = FiniteWeightModule::pointed_set(&["*", "a"]);
        let y = FiniteWeightModule::pointed_set(&["*", "b", "c"]);
        let cop = weight_module_coproduct(&[&x, &y]).unwrap();
        // Tuples with at most one nonzero slot: 1 + 1 + 2.
        assert_eq!(cop.module.size(), 4);
        let report = check_weight_module_axioms(&WeightModule::Finite(cop.module.clone()));
        assert!(report.passed(), "{:?}", report.violations);

        // κ then ▷ is the identity; crossed is zero.
        for e in 0..x.size() {
            let t = cop.coprojection(0, e);
            assert_eq!(cop.projection(0, t), e);
            assert_eq!(cop.projection(1, t), y.zero());
        }
        for e in 0..y.size() {
            let t = cop.coprojection(1, e);
            assert_eq!(cop.projection(1, t), e);
            assert_eq!(cop.projection(0, t), x.zero());
        }
    }

    #[test]
    fn coproduct_over_b4_restricts_tuples() {
        // Over the powerset scalars the carrier keeps exactly the pairs
        // with disjoint weights.
        let m = FiniteWeightModule::regular(b4());
        let cop = weight_module_coproduct(&[&m, &m]).unwrap();
        assert_eq!(cop.module.size(), 9);
        let report = check_weight_module_axioms(&WeightModule::Finite(cop.module.clone()));
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn coproduct_of_unit_intervals_is_simplex() {
        let one = ConeSliceModule::simplex(1);
        let cop = cone_slice_coproduct(&[&one, &one]);
        assert_eq!(cop, ConeSliceModule::simplex(2));
    }

    #[test]
    fn coproduct_universal_property_over_booleans() {
        // For every cocone (f1, f2) there is exactly one mediating map.
        let x1 = FiniteWeightModule::pointed_set(&["*", "a", "b"]);
        let x2 = FiniteWeightModule::pointed_set(&["*", "c"]);
        let target = FiniteWeightModule::pointed_set(&["*", "p", "q"]);
        let cop = weight_module_coproduct(&[&x1, &x2]).unwrap();
        let f1s = weight_module_maps(&x1, &target).unwrap();
        let f2s = weight_module_maps(&x2, &target).unwrap();
        let hs = weight_module_maps(&cop.module, &target).unwrap();
        for f1 in &f1s {
            for f2 in &f2s {
                let matches: Vec<&Vec<usize>> = hs
                    .iter()
                    .filter(|h| {
                        (0..x1.size()).all(|e| h[cop.coprojection(0, e)] == f1[e])
                            && (0..x2.size()).all(|e| h[cop.coprojection(1, e)] == f2[e])
                    })
                    .collect();
                assert_eq!(matches.len(), 1, "cocone ({f1:?}, {f2:?})");
            }
        }
    }

    #[test]
    fn mismatched_scalars_are_rejected() {
        let x = FiniteWeightModule::pointed_set(&["*", "a"]);
        let y = FiniteWeightModule::regular(b4());
        let err = weight_module_coproduct(&[&x, &y]).unwrap_err();
        assert!(matches!(err, ModuleError::MismatchedScalars { .. }));
    }

    #[test]
    fn summability_matches_weight_on_cone_slices() {
        let simplex = ConeSliceModule::simplex(2);
        let sample = simplex.sample();
        for x in &sample {
            for y in &sample {
                let weights_fit =
                    simplex.weight(x) + simplex.weight(y) <= BigRational::one();
                assert_eq!(simplex.sum(x, y).is_some(), weights_fit);
            }
        }
    }

    #[test]
    fn scalar_value_system_round_trip() {
        let scalars = Scalars::boolean();
        let one = scalars.one();
        assert_eq!(scalars.add(&scalars.zero(), &one), Some(one.clone()));
        assert_eq!(scalars.add(&one, &one), None);
        assert_eq!(scalars.mul(&one, &scalars.zero()), scalars.zero());
        assert_eq!(
            scalars.partial_complement(&scalars.zero(), &one),
            Some(one.clone())
        );

        let rational = Scalars::Rational;
        assert_eq!(
            rational.add(
                &ScalarValue::Rational(q(1, 3)),
                &ScalarValue::Rational(q(1, 2))
            ),
            Some(ScalarValue::Rational(q(5, 6)))
        );
        match rational.divide(
            &ScalarValue::Rational(q(1, 3)),
            &ScalarValue::Rational(q(1, 2)),
        ) {
            Division::Quotient(ScalarValue::Rational(v)) => assert_eq!(v, q(2, 3)),
            other => panic!("expected a quotient, got {other:?}"),
        }
    }

    #[test]
    fn homset_cap_is_enforced() {
        let big = FiniteWeightModule::pointed_set(&[
            "*", "a", "b", "c", "d", "e", "f", "g", "h", "i",
        ]);
        let err = weight_module_maps(&big, &big).unwrap_err();
        assert!(err.candidates > HOMSET_CAP);
    }

    #[test]
    fn cone_slice_grid_maps_are_valid() {
        let simplex = ConeSliceModule::simplex(2);
        let grid = [q(0, 1), q(1, 2), q(1, 1)];
        let maps = cone_slice_maps_grid(&simplex, &simplex, &grid);
        // Columns must each have column sum <= 1 (trace decrease on e_i) and
        // nonnegative entries; 6 choices per column over the grid.
        assert_eq!(maps.len(), 36);
        let identity = vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]];
        assert!(maps.contains(&identity));
        for m in &maps {
            assert!(is_cone_slice_map(&simplex, &simplex, m));
        }
    }
}
