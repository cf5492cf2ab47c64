//! Ordered vector spaces over the rationals.
//!
//! A [`RationalOVS`] is `ℚⁿ` ordered by a polyhedral cone, optionally
//! carrying an order unit or a trace functional. The unit interval `[0, u]`
//! of a unital space is an effect module; the subbase `{x ∈ V₊ : τ(x) ≤ 1}`
//! of a traced space is a weight module; and [`totalize`] inverts the
//! subbase construction for concretely presented cone slices. Both
//! intrinsic norms run on the exact-rational simplex solver in [`lp`], so
//! every value and every optimal solution is exact.

pub mod lp;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::modules::{
    all_tables, is_cancellative, ConeSliceModule, EffectModule, IntervalModule,
    ModuleError, WeightModule,
};
use crate::report::{CheckReport, Violation};
use lp::{
    qvec_dot, qvec_is_zero, qvec_scale, qvec_sub, qvec_zero, rat, row_reduce, show_qvec,
    Cone, LpError, LpOutcome, QVec, RationalLP,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OvsError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("the space carries no order unit")]
    MissingUnit,
    #[error("the space carries no trace")]
    MissingTrace,
    #[error("no r with r·u ± {vector} in the cone; u is not an order unit there")]
    NotOrderUnit { vector: String },
    #[error("{vector} is not a difference of cone elements; the cone does not generate")]
    NotPositivelyGenerated { vector: String },
    #[error("not cancellative: {x} ⊕ {y} = {x} ⊕ {z} with {y} ≠ {z}")]
    NonCancellative { x: String, y: String, z: String },
    #[error("totalization needs rational scalars; finite-backed modules stay finite")]
    FiniteScalars,
}

/// `ℚⁿ` ordered by a polyhedral cone, with an optional order unit and an
/// optional trace covector. Constructors validate the side structure: the
/// unit must bound every basis vector, the trace must be strictly positive
/// on nonzero cone generators.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalOVS {
    dim: usize,
    cone: Cone,
    unit: Option<QVec>,
    trace: Option<QVec>,
}

impl RationalOVS {
    pub fn with_unit(dim: usize, cone: Cone, unit: QVec) -> Result<Self, OvsError> {
        if unit.len() != dim {
            return Err(ModuleError::DimensionMismatch {
                got: unit.len(),
                want: dim,
            }
            .into());
        }
        if !cone.contains(&unit, dim) {
            return Err(ModuleError::UnitOutsideCone.into());
        }
        let space = RationalOVS {
            dim,
            cone,
            unit: Some(unit),
            trace: None,
        };
        // An order unit bounds everything; by linearity it is enough that
        // each basis vector fits under some multiple.
        for i in 0..dim {
            let mut e = qvec_zero(dim);
            e[i] = BigRational::one();
            space.order_unit_norm(&e)?;
        }
        Ok(space)
    }

    pub fn with_trace(dim: usize, cone: Cone, trace: QVec) -> Result<Self, OvsError> {
        // The slice constructor owns the strict-positivity validation.
        ConeSliceModule::new(dim, cone.clone(), trace.clone())?;
        Ok(RationalOVS {
            dim,
            cone,
            unit: None,
            trace: Some(trace),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn unit(&self) -> Option<&QVec> {
        self.unit.as_ref()
    }

    pub fn trace(&self) -> Option<&QVec> {
        self.trace.as_ref()
    }

    /// Whether the cone spans the whole space as differences, i.e. the
    /// generators have full rank.
    pub fn positively_generated(&self) -> bool {
        let mut rows = self.cone.generators(self.dim);
        row_reduce(&mut rows, self.dim) == self.dim
    }

    /// The effect module `[0, u]` under the cone order.
    pub fn unit_interval(&self) -> Result<EffectModule, OvsError> {
        let u = self.unit.as_ref().ok_or(OvsError::MissingUnit)?;
        let interval = IntervalModule::new(self.dim, self.cone.clone(), u.clone())?;
        Ok(EffectModule::Interval(interval))
    }

    /// The weight module `{x ∈ V₊ : τ(x) ≤ 1}` with the trace as weight.
    pub fn subbase(&self) -> Result<WeightModule, OvsError> {
        let t = self.trace.as_ref().ok_or(OvsError::MissingTrace)?;
        let slice = ConeSliceModule::new(self.dim, self.cone.clone(), t.clone())?;
        Ok(WeightModule::ConeSlice(slice))
    }

    /// min r ≥ 0 with r·u − a and r·u + a both in the cone.
    fn order_unit_lp(&self, u: &QVec, a: &QVec) -> RationalLP {
        match &self.cone {
            Cone::Coordinatewise => {
                // r·uᵢ ≥ aᵢ and r·uᵢ ≥ −aᵢ, one variable.
                let mut prog = RationalLP::new(1);
                prog.minimize(vec![BigRational::one()]);
                for i in 0..self.dim {
                    prog.add_ge(vec![u[i].clone()], a[i].clone());
                    prog.add_ge(vec![u[i].clone()], -a[i].clone());
                }
                prog
            }
            Cone::Generators(gs) => {
                // Variables r, λ, μ with r·u − Σλⱼgⱼ = a and r·u − Σμⱼgⱼ = −a.
                let k = gs.len();
                let mut prog = RationalLP::new(1 + 2 * k);
                let mut objective = qvec_zero(1 + 2 * k);
                objective[0] = BigRational::one();
                prog.minimize(objective);
                for c in 0..self.dim {
                    let mut row = qvec_zero(1 + 2 * k);
                    row[0] = u[c].clone();
                    for (j, g) in gs.iter().enumerate() {
                        row[1 + j] = -g[c].clone();
                    }
                    prog.add_eq(row, a[c].clone());
                    let mut row = qvec_zero(1 + 2 * k);
                    row[0] = u[c].clone();
                    for (j, g) in gs.iter().enumerate() {
                        row[1 + k + j] = -g[c].clone();
                    }
                    prog.add_eq(row, -a[c].clone());
                }
                prog
            }
        }
    }

    /// `inf { r > 0 : −r·u ≤ a ≤ r·u }`, exactly. On the coordinatewise
    /// cone with the all-ones unit this is max |aᵢ|.
    pub fn order_unit_norm(&self, a: &QVec) -> Result<BigRational, OvsError> {
        let u = self.unit.as_ref().ok_or(OvsError::MissingUnit)?;
        if a.len() != self.dim {
            return Err(ModuleError::DimensionMismatch {
                got: a.len(),
                want: self.dim,
            }
            .into());
        }
        match self.order_unit_lp(u, a).solve()? {
            LpOutcome::Optimal { value, .. } => Ok(value),
            LpOutcome::Infeasible | LpOutcome::Unbounded => Err(OvsError::NotOrderUnit {
                vector: show_qvec(a),
            }),
        }
    }

    /// `inf { τ(x₁) + τ(x₂) : x = x₁ − x₂, x₁, x₂ ∈ V₊ }`, exactly. On the
    /// coordinatewise cone with the summing trace this is the ℓ¹ norm.
    pub fn base_seminorm(&self, x: &QVec) -> Result<BigRational, OvsError> {
        let t = self.trace.as_ref().ok_or(OvsError::MissingTrace)?;
        if x.len() != self.dim {
            return Err(ModuleError::DimensionMismatch {
                got: x.len(),
                want: self.dim,
            }
            .into());
        }
        match decomposition_lp(self.dim, &self.cone, t, x).solve()? {
            LpOutcome::Optimal { value, .. } => Ok(value),
            LpOutcome::Infeasible => Err(OvsError::NotPositivelyGenerated {
                vector: show_qvec(x),
            }),
            LpOutcome::Unbounded => {
                unreachable!("a strictly positive trace is nonnegative on the cone")
            }
        }
    }
}

/// min τ(x₁) + τ(x₂) over decompositions x = x₁ − x₂ in the cone. The
/// covector is taken as given, so degenerate traces can be probed too.
fn decomposition_lp(dim: usize, cone: &Cone, trace: &QVec, x: &QVec) -> RationalLP {
    match cone {
        Cone::Coordinatewise => {
            let mut prog = RationalLP::new(2 * dim);
            let mut objective = trace.clone();
            objective.extend(trace.iter().cloned());
            prog.minimize(objective);
            for c in 0..dim {
                let mut row = qvec_zero(2 * dim);
                row[c] = BigRational::one();
                row[dim + c] = -BigRational::one();
                prog.add_eq(row, x[c].clone());
            }
            prog
        }
        Cone::Generators(gs) => {
            let k = gs.len();
            let costs: QVec = gs.iter().map(|g| qvec_dot(trace, g)).collect();
            let mut prog = RationalLP::new(2 * k);
            let mut objective = costs.clone();
            objective.extend(costs);
            prog.minimize(objective);
            for c in 0..dim {
                let mut row = qvec_zero(2 * k);
                for (j, g) in gs.iter().enumerate() {
                    row[j] = g[c].clone();
                    row[k + j] = -g[c].clone();
                }
                prog.add_eq(row, x[c].clone());
            }
            prog
        }
    }
}

/// Verdict of [`check_norm_is_norm`].
#[derive(Debug, Clone, PartialEq)]
pub struct NormVerdict {
    pub is_norm: bool,
    /// A nonzero vector whose decomposition value is zero or unbounded.
    pub witness: Option<QVec>,
}

/// Whether the decomposition seminorm for `trace` vanishes only at zero,
/// probed on basis vectors, cone generators, and pairwise generator sums
/// and differences. The covector bypasses the constructor invariant so
/// that traces violating strict positivity can be exhibited; vectors
/// outside the positively generated part are skipped, since the seminorm
/// does not reach them.
pub fn check_norm_is_norm(
    dim: usize,
    cone: &Cone,
    trace: &QVec,
) -> Result<NormVerdict, LpError> {
    let gens = cone.generators(dim);
    let mut probes: Vec<QVec> = Vec::new();
    for i in 0..dim {
        let mut e = qvec_zero(dim);
        e[i] = BigRational::one();
        probes.push(e);
    }
    probes.extend(gens.iter().cloned());
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            probes.push(qvec_sub(&gens[i], &gens[j]));
            probes.push(lp::qvec_add(&gens[i], &gens[j]));
        }
    }
    probes.retain(|v| !qvec_is_zero(v));
    probes.dedup();

    for v in probes {
        match decomposition_lp(dim, cone, trace, &v).solve()? {
            LpOutcome::Optimal { value, .. } if value.is_zero() => {
                return Ok(NormVerdict {
                    is_norm: false,
                    witness: Some(v),
                });
            }
            LpOutcome::Unbounded => {
                return Ok(NormVerdict {
                    is_norm: false,
                    witness: Some(v),
                });
            }
            _ => {}
        }
    }
    Ok(NormVerdict {
        is_norm: true,
        witness: None,
    })
}

/// Coordinates on the linear span of a cone slice: `basis` rows are a
/// reduced basis of the span in ambient coordinates, and `pivots[j]` is the
/// ambient coordinate that reads off the j-th coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct SpanIso {
    basis: Vec<QVec>,
    pivots: Vec<usize>,
}

impl SpanIso {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `x` in the basis; `None` when `x` is off the span.
    pub fn to_coords(&self, x: &QVec) -> Option<QVec> {
        let coords: QVec = self.pivots.iter().map(|&p| x[p].clone()).collect();
        if self.to_ambient(&coords) == *x {
            Some(coords)
        } else {
            None
        }
    }

    pub fn to_ambient(&self, coords: &QVec) -> QVec {
        let dim = self.basis.first().map(|b| b.len()).unwrap_or(0);
        let mut x = qvec_zero(dim);
        for (c, b) in coords.iter().zip(&self.basis) {
            x = lp::qvec_add(&x, &qvec_scale(c, b));
        }
        x
    }
}

/// Rebuilds the traced vector space a cone slice is the subbase of: the
/// linear span of the slice with the generated cone, the weight extended
/// linearly as the trace, and the coordinate change as the isomorphism
/// witness. The witness is verified on both sample grids before returning.
/// Cancellativity is the construction's hypothesis, and the finite scalar
/// backend has no rational span to build in.
pub fn totalize(x: &WeightModule) -> Result<(RationalOVS, SpanIso), OvsError> {
    let slice = match x {
        WeightModule::Finite(_) => {
            let probe = is_cancellative(x);
            if let Some((a, b, c)) = probe.witness {
                return Err(OvsError::NonCancellative { x: a, y: b, z: c });
            }
            return Err(OvsError::FiniteScalars);
        }
        WeightModule::ConeSlice(s) => s,
    };
    let dim = slice.dim();
    let gens = slice.cone().generators(dim);

    let mut rows = gens.clone();
    let rank = row_reduce(&mut rows, dim);
    rows.truncate(rank);

    let (space, iso) = if rank == dim {
        // Full-dimensional slice: the span is the ambient space and the
        // original presentation survives unchanged.
        let basis = (0..dim)
            .map(|i| {
                let mut e = qvec_zero(dim);
                e[i] = BigRational::one();
                e
            })
            .collect();
        let space =
            RationalOVS::with_trace(dim, slice.cone().clone(), slice.trace().clone())?;
        (space, SpanIso { basis, pivots: (0..dim).collect() })
    } else {
        let pivots: Vec<usize> = rows
            .iter()
            .map(|row| {
                row.iter()
                    .position(|e| !e.is_zero())
                    .expect("reduced rows below the rank were truncated")
            })
            .collect();
        let iso = SpanIso { basis: rows, pivots };
        let coord_gens: Vec<QVec> = gens
            .iter()
            .map(|g| {
                iso.to_coords(g)
                    .expect("generators lie in their own span")
            })
            .collect();
        // τ'(coords) = τ(x) for x in the span, so strict positivity carries
        // over and the trace of a rebuilt point is the original weight.
        let coord_trace: QVec =
            iso.basis.iter().map(|b| qvec_dot(slice.trace(), b)).collect();
        let space =
            RationalOVS::with_trace(rank, Cone::Generators(coord_gens), coord_trace)?;
        (space, iso)
    };

    let rebuilt = match space.subbase()? {
        WeightModule::ConeSlice(s) => s,
        WeightModule::Finite(_) => unreachable!("traced rational spaces slice rationally"),
    };
    for p in slice.sample() {
        let c = iso
            .to_coords(&p)
            .expect("slice sample points lie in the span of the generators");
        assert!(
            rebuilt.contains(&c),
            "sample point leaves the rebuilt subbase: {}",
            show_qvec(&p)
        );
        assert_eq!(
            rebuilt.weight(&c),
            slice.weight(&p),
            "trace and weight disagree at {}",
            show_qvec(&p)
        );
    }
    for q in rebuilt.sample() {
        let back = iso.to_ambient(&q);
        assert!(
            slice.contains(&back),
            "rebuilt subbase escapes the slice at {}",
            show_qvec(&q)
        );
        assert_eq!(
            slice.weight(&back),
            rebuilt.weight(&q),
            "weight and trace disagree at {}",
            show_qvec(&q)
        );
    }
    Ok((space, iso))
}

/// Halving commutes with joins of ascending chains:
/// `⋁ₙ 2⁻ᴺ·aₙ = 2⁻ᴺ·⋁ₙ aₙ`, both sides computed exactly. Finite ascending
/// chains stand in for eventually constant sequences, whose join is the
/// final value; halving needs the rational action, so only the interval
/// backend is eligible. Panics when the chain is empty, escapes the
/// interval, or fails to ascend.
pub fn check_scaling_lemma(
    m: &IntervalModule,
    chain: &[QVec],
    halvings: u32,
) -> bool {
    assert!(!chain.is_empty(), "a chain needs at least one element");
    assert!(halvings < 63, "halving factor must fit an i64");
    for a in chain {
        assert!(m.contains(a), "chain escapes the interval at {}", show_qvec(a));
    }
    for w in chain.windows(2) {
        assert!(
            m.cone().contains(&qvec_sub(&w[1], &w[0]), m.dim()),
            "chain fails to ascend between {} and {}",
            show_qvec(&w[0]),
            show_qvec(&w[1])
        );
    }
    let factor = rat(1, 1i64 << halvings);
    // Left side: scale each element, then join the scaled chain.
    let scaled: Vec<QVec> = chain.iter().map(|a| qvec_scale(&factor, a)).collect();
    for s in &scaled {
        assert!(m.contains(s), "scaling leaves the interval at {}", show_qvec(s));
    }
    let lhs = scaled.last().expect("chain is nonempty");
    // Right side: join first, then scale.
    let rhs = qvec_scale(&factor, chain.last().expect("chain is nonempty"));
    *lhs == rhs
}

/// A matrix is a lawful map of cone slices exactly when it is positive and
/// trace-decreasing as a linear map, and its restriction to the sample grid
/// pins it down uniquely. Both directions are checked for every matrix over
/// the entry grid: the generator conditions against pointwise behavior on
/// the source sample, and pairwise distinctness of restrictions.
pub fn check_morphism_correspondence(
    source: &ConeSliceModule,
    target: &ConeSliceModule,
    entries: &[BigRational],
) -> CheckReport {
    let mut report = CheckReport::new(
        format!(
            "linear maps against module maps, {}x{} matrices over {} entries",
            target.dim(),
            source.dim(),
            entries.len()
        ),
        vec![],
    );
    let sample = source.sample();
    {
        let mut rows = sample.clone();
        if row_reduce(&mut rows, source.dim()) < source.dim() {
            report.skip("source sample does not span; restriction cannot pin maps down");
            return report;
        }
    }

    let apply = |m: &[QVec], p: &QVec| -> QVec {
        m.iter().map(|row| qvec_dot(row, p)).collect()
    };
    let cells = target.dim() * source.dim();
    let matrices: Vec<Vec<QVec>> = all_tables(entries.len(), cells)
        .map(|choice| {
            (0..target.dim())
                .map(|r| {
                    (0..source.dim())
                        .map(|c| entries[choice[r * source.dim() + c]].clone())
                        .collect()
                })
                .collect()
        })
        .collect();

    for m in &matrices {
        let linear = crate::modules::is_cone_slice_map(source, target, m);
        let pointwise = sample.iter().all(|p| {
            let image = apply(m, p);
            target.contains(&image) && target.weight(&image) <= source.weight(p)
        });
        if linear != pointwise {
            report.violations.push(Violation::new(
                "correspondence/restriction",
                m.iter().map(|row| show_qvec(row)).collect(),
                format!(
                    "generator conditions say {linear} but sample behavior says {pointwise}"
                ),
            ));
        }
    }
    for i in 0..matrices.len() {
        for j in i + 1..matrices.len() {
            if sample
                .iter()
                .all(|p| apply(&matrices[i], p) == apply(&matrices[j], p))
            {
                report.violations.push(Violation::new(
                    "correspondence/unique-extension",
                    vec![
                        matrices[i].iter().map(|r| show_qvec(r)).collect::<Vec<_>>().join(" "),
                        matrices[j].iter().map(|r| show_qvec(r)).collect::<Vec<_>>().join(" "),
                    ],
                    "distinct matrices restrict to the same map of slices",
                ));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modules::{
        check_effect_module_axioms, check_weight_module_axioms, FiniteWeightModule,
    };
    use lp::qvec_from_i64;

    fn q(n: i64, d: i64) -> BigRational {
        rat(n, d)
    }

    #[test]
    fn unit_intervals_are_lawful_effect_modules() {
        let plane = RationalOVS::with_unit(
            2,
            Cone::Coordinatewise,
            qvec_from_i64(&[1, 1]),
        )
        .unwrap();
        let interval = plane.unit_interval().unwrap();
        assert_eq!(
            interval,
            EffectModule::Interval(IntervalModule::product_interval(2))
        );
        assert!(check_effect_module_axioms(&interval).passed());

        let line = RationalOVS::with_unit(1, Cone::Coordinatewise, qvec_from_i64(&[1]))
            .unwrap();
        let segment = line.unit_interval().unwrap();
        assert!(check_effect_module_axioms(&segment).passed());

        let skew = RationalOVS::with_unit(
            2,
            Cone::Generators(vec![qvec_from_i64(&[1, 0]), qvec_from_i64(&[1, 1])]),
            qvec_from_i64(&[2, 1]),
        )
        .unwrap();
        let EffectModule::Interval(m) = skew.unit_interval().unwrap() else {
            unreachable!()
        };
        assert!(m.contains(&vec![q(1, 1), q(1, 2)]));
        assert!(check_effect_module_axioms(&EffectModule::Interval(m)).passed());

        // A boundary vector bounds nothing across it.
        let err = RationalOVS::with_unit(2, Cone::Coordinatewise, qvec_from_i64(&[1, 0]));
        assert!(matches!(err, Err(OvsError::NotOrderUnit { .. })));
    }

    #[test]
    fn subbases_are_lawful_weight_modules() {
        let plane =
            RationalOVS::with_trace(2, Cone::Coordinatewise, qvec_from_i64(&[1, 1]))
                .unwrap();
        let sub = plane.subbase().unwrap();
        assert_eq!(
            sub,
            WeightModule::ConeSlice(ConeSliceModule::simplex(2))
        );
        assert!(check_weight_module_axioms(&sub).passed());

        // Zero trace coefficient on a generator direction is rejected.
        let err = RationalOVS::with_trace(2, Cone::Coordinatewise, qvec_from_i64(&[1, 0]));
        assert!(matches!(
            err,
            Err(OvsError::Module(ModuleError::TraceNotStrictlyPositive { .. }))
        ));

        // The base is the weight-one face.
        let WeightModule::ConeSlice(s) = sub else { unreachable!() };
        assert_eq!(s.weight(&qvec_from_i64(&[1, 0])), q(1, 1));
        assert_eq!(s.weight(&vec![q(1, 2), q(1, 2)]), q(1, 1));
    }

    #[test]
    fn order_unit_norm_examples() {
        let plane = RationalOVS::with_unit(
            2,
            Cone::Coordinatewise,
            qvec_from_i64(&[1, 1]),
        )
        .unwrap();
        assert_eq!(plane.order_unit_norm(&qvec_zero(2)).unwrap(), q(0, 1));
        assert_eq!(
            plane.order_unit_norm(&vec![q(1, 2), q(-1, 3)]).unwrap(),
            q(1, 2)
        );
        assert_eq!(plane.order_unit_norm(&qvec_from_i64(&[1, 1])).unwrap(), q(1, 1));

        let skew = RationalOVS::with_unit(
            2,
            Cone::Generators(vec![qvec_from_i64(&[2, 1]), qvec_from_i64(&[-1, 1])]),
            qvec_from_i64(&[1, 2]),
        )
        .unwrap();
        let a = qvec_from_i64(&[1, 0]);
        assert_eq!(skew.order_unit_norm(&a).unwrap(), q(1, 3));
        // The simplex value agrees with the exhaustive basic-solution oracle.
        let lp = skew.order_unit_lp(skew.unit().unwrap(), &a);
        let (LpOutcome::Optimal { value: fast, .. }, LpOutcome::Optimal { value: slow, .. }) =
            (lp.solve().unwrap(), lp.solve_by_basis_enumeration().unwrap())
        else {
            panic!("both solvers must report optimal")
        };
        assert_eq!(fast, slow);
        assert_eq!(skew.order_unit_norm(skew.unit().unwrap()).unwrap(), q(1, 1));
    }

    #[test]
    fn order_unit_norm_is_a_norm_on_samples() {
        let plane = RationalOVS::with_unit(
            2,
            Cone::Coordinatewise,
            qvec_from_i64(&[1, 1]),
        )
        .unwrap();
        let xs = [
            vec![q(1, 2), q(-1, 3)],
            vec![q(-2, 1), q(1, 5)],
            vec![q(3, 4), q(3, 4)],
            vec![q(0, 1), q(-7, 2)],
        ];
        for x in &xs {
            for y in &xs {
                let lhs = plane.order_unit_norm(&lp::qvec_add(x, y)).unwrap();
                let rhs = plane.order_unit_norm(x).unwrap() + plane.order_unit_norm(y).unwrap();
                assert!(lhs <= rhs, "triangle inequality at {x:?} {y:?}");
            }
            let scaled = plane.order_unit_norm(&qvec_scale(&q(-3, 2), x)).unwrap();
            assert_eq!(scaled, q(3, 2) * plane.order_unit_norm(x).unwrap());
        }
    }

    #[test]
    fn base_seminorm_examples() {
        let plane =
            RationalOVS::with_trace(2, Cone::Coordinatewise, qvec_from_i64(&[1, 1]))
                .unwrap();
        // ℓ¹ on the orthant with the summing trace.
        assert_eq!(
            plane.base_seminorm(&vec![q(1, 2), q(-1, 4)]).unwrap(),
            q(3, 4)
        );
        // Symmetric, and equal to the trace on positive vectors.
        assert_eq!(
            plane.base_seminorm(&vec![q(-1, 2), q(1, 4)]).unwrap(),
            q(3, 4)
        );
        assert_eq!(plane.base_seminorm(&vec![q(1, 4), q(1, 4)]).unwrap(), q(1, 2));

        let skew = RationalOVS::with_trace(
            2,
            Cone::Generators(vec![qvec_from_i64(&[2, 1]), qvec_from_i64(&[-1, 1])]),
            vec![q(0, 1), q(1, 1)],
        )
        .unwrap();
        let x = qvec_from_i64(&[1, 0]);
        let lp = decomposition_lp(2, skew.cone(), skew.trace().unwrap(), &x);
        let (LpOutcome::Optimal { value: fast, .. }, LpOutcome::Optimal { value: slow, .. }) =
            (lp.solve().unwrap(), lp.solve_by_basis_enumeration().unwrap())
        else {
            panic!("both solvers must report optimal")
        };
        assert_eq!(skew.base_seminorm(&x).unwrap(), fast);
        assert_eq!(fast, slow);

        // A ray cone generates only its own line.
        let ray = RationalOVS::with_trace(
            2,
            Cone::Generators(vec![qvec_from_i64(&[1, 1])]),
            vec![q(1, 2), q(1, 2)],
        )
        .unwrap();
        assert!(!ray.positively_generated());
        assert!(matches!(
            ray.base_seminorm(&qvec_from_i64(&[1, 0])),
            Err(OvsError::NotPositivelyGenerated { .. })
        ));
        assert!(plane.positively_generated());
    }

    #[test]
    fn totalize_round_trips_full_rank_slices() {
        let simplex = WeightModule::ConeSlice(ConeSliceModule::simplex(2));
        let (space, iso) = totalize(&simplex).unwrap();
        assert_eq!(space.dim(), 2);
        assert_eq!(space.trace(), Some(&qvec_from_i64(&[1, 1])));
        assert_eq!(space.subbase().unwrap(), simplex);
        assert_eq!(iso.to_coords(&vec![q(1, 3), q(1, 2)]), Some(vec![q(1, 3), q(1, 2)]));

        // Linearly dependent generators still span the plane.
        let dependent = WeightModule::ConeSlice(
            ConeSliceModule::new(
                2,
                Cone::Generators(vec![
                    qvec_from_i64(&[1, 0]),
                    qvec_from_i64(&[0, 1]),
                    qvec_from_i64(&[1, 1]),
                ]),
                qvec_from_i64(&[1, 1]),
            )
            .unwrap(),
        );
        let (space, _) = totalize(&dependent).unwrap();
        assert_eq!(space.dim(), 2);
        assert_eq!(space.subbase().unwrap(), dependent);
    }

    #[test]
    fn totalize_reduces_lower_dimensional_slices() {
        let diagonal = WeightModule::ConeSlice(
            ConeSliceModule::new(
                2,
                Cone::Generators(vec![qvec_from_i64(&[1, 1])]),
                vec![q(1, 2), q(1, 2)],
            )
            .unwrap(),
        );
        let (space, iso) = totalize(&diagonal).unwrap();
        assert_eq!(space.dim(), 1);
        assert_eq!(space.trace(), Some(&vec![q(1, 1)]));
        assert_eq!(iso.to_coords(&vec![q(1, 2), q(1, 2)]), Some(vec![q(1, 2)]));
        assert_eq!(iso.to_ambient(&vec![q(1, 2)]), vec![q(1, 2), q(1, 2)]);
        assert_eq!(iso.to_coords(&qvec_from_i64(&[1, 0])), None);

        let WeightModule::ConeSlice(line) = space.subbase().unwrap() else {
            unreachable!()
        };
        assert!(line.contains(&vec![q(1, 1)]));
        assert_eq!(line.weight(&vec![q(1, 2)]), q(1, 2));
    }

    #[test]
    fn totalize_rejects_unsuitable_modules() {
        let pointed =
            WeightModule::Finite(FiniteWeightModule::pointed_set(&["*", "a"]));
        assert_eq!(totalize(&pointed), Err(OvsError::FiniteScalars));

        // Sum collision x⊕y = x⊕z with y ≠ z; structurally well formed but
        // deliberately not law-complete, which is all the probe reads.
        use crate::algebra::{FiniteCarrier, FinitePcm};
        use crate::monoid::FiniteEffectMonoid;
        use std::sync::Arc;
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
        sum[n + 2] = Some(4);
        sum[2 * n + 1] = Some(4);
        sum[n + 3] = Some(4);
        sum[3 * n + 1] = Some(4);
        let pcm = FinitePcm::new(carrier, 0, sum).unwrap();
        let scalars = Arc::new(FiniteEffectMonoid::boolean_meet(2));
        let mut action = vec![0; scalars.size() * n];
        for x in 0..n {
            action[scalars.one() * n + x] = x;
        }
        let weight = vec![0, 1, 2, 2, 3];
        let module = FiniteWeightModule::new(scalars, pcm, action, weight).unwrap();
        assert_eq!(
            totalize(&WeightModule::Finite(module)),
            Err(OvsError::NonCancellative {
                x: "x".into(),
                y: "y".into(),
                z: "z".into(),
            })
        );
    }

    #[test]
    fn scaling_commutes_with_chain_joins() {
        let interval = IntervalModule::product_interval(2);
        let constant = vec![vec![q(1, 2), q(1, 2)]; 2];
        assert!(check_scaling_lemma(&interval, &constant, 1));

        let two_step = vec![
            vec![q(1, 4), q(0, 1)],
            vec![q(1, 2), q(3, 4)],
            vec![q(1, 2), q(3, 4)],
        ];
        assert!(check_scaling_lemma(&interval, &two_step, 1));
        assert!(check_scaling_lemma(&interval, &two_step, 0));
    }

    #[test]
    fn norm_verdicts_on_traces() {
        let verdict =
            check_norm_is_norm(2, &Cone::Coordinatewise, &qvec_from_i64(&[1, 1])).unwrap();
        assert!(verdict.is_norm);

        // A trace vanishing on the generator (0,1) = (1,1) − (1,0) leaves a
        // whole ray at seminorm zero.
        let degenerate = check_norm_is_norm(
            2,
            &Cone::Generators(vec![
                qvec_from_i64(&[1, 0]),
                qvec_from_i64(&[1, 1]),
                qvec_from_i64(&[0, 1]),
            ]),
            &qvec_from_i64(&[1, 0]),
        )
        .unwrap();
        assert!(!degenerate.is_norm);
        let witness = degenerate.witness.unwrap();
        assert!(!qvec_is_zero(&witness));

        // One-dimensional: norm exactly when the trace is nonzero.
        assert!(check_norm_is_norm(1, &Cone::Coordinatewise, &vec![q(1, 1)])
            .unwrap()
            .is_norm);
        assert!(!check_norm_is_norm(1, &Cone::Coordinatewise, &vec![q(0, 1)])
            .unwrap()
            .is_norm);
    }

    #[test]
    fn linear_and_module_maps_correspond() {
        let simplex2 = ConeSliceModule::simplex(2);
        let report = check_morphism_correspondence(
            &simplex2,
            &simplex2,
            &[q(0, 1), q(1, 2), q(1, 1)],
        );
        assert!(report.complete(), "{:?}", report.violations);

        let skew = ConeSliceModule::new(
            2,
            Cone::Generators(vec![qvec_from_i64(&[2, 1]), qvec_from_i64(&[-1, 1])]),
            vec![q(0, 1), q(1, 1)],
        )
        .unwrap();
        let report =
            check_morphism_correspondence(&simplex2, &skew, &[q(0, 1), q(1, 2), q(1, 1)]);
        assert!(report.complete(), "{:?}", report.violations);

        let simplex3 = ConeSliceModule::simplex(3);
        let report =
            check_morphism_correspondence(&simplex3, &simplex3, &[q(0, 1), q(1, 1)]);
        assert!(report.complete(), "{:?}", report.violations);
    }
}
