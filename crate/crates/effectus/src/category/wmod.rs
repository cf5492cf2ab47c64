//! Weight modules over a fixed scalar system.
//!
//! Objects are weight modules, morphisms are weight-decreasing additive
//! action-preserving maps. Over a finite scalar monoid the homsets are
//! enumerated exhaustively; over the rational unit interval they are
//! sampled on a fixed entry grid, so every check downstream is relative to
//! that sample.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::leq;
use crate::modules::{
    cone_slice_coproduct, cone_slice_maps_grid, is_cone_slice_map, is_weight_module_map,
    weight_module_coproduct, weight_module_maps, ConeSliceModule, FiniteWeightModule,
    HomsetTooLarge, ModElem, Scalars, WeightModule,
};
use crate::monoid::FiniteEffectMonoid;
use crate::ovs::lp::{qvec_dot, qvec_zero, row_reduce, QVec};

use super::{Coproduct, Effectus};

pub struct WMod {
    scalars: Scalars,
    grid: Vec<BigRational>,
}

impl WMod {
    pub fn finite(scalars: Arc<FiniteEffectMonoid>) -> Self {
        WMod {
            scalars: Scalars::Finite(scalars),
            grid: Vec::new(),
        }
    }

    /// The rational backend; morphisms are sampled as matrices with
    /// entries 0, 1/2, 1.
    pub fn rational() -> Self {
        WMod {
            scalars: Scalars::Rational,
            grid: vec![
                BigRational::zero(),
                BigRational::new(1.into(), 2.into()),
                BigRational::one(),
            ],
        }
    }

    /// The image of an element under a morphism.
    pub fn apply(&self, f: &WModMor, x: &ModElem) -> ModElem {
        match (&f.map, x) {
            (WModMap::Table(t), ModElem::Index(i)) => ModElem::Index(t[*i]),
            (WModMap::Matrix(m), ModElem::Coords(v)) => {
                ModElem::Coords(m.iter().map(|row| qvec_dot(row, v)).collect())
            }
            _ => panic!("element backend does not match the morphism"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WModMap {
    Table(Vec<usize>),
    Matrix(Vec<QVec>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct WModMor {
    pub source: WeightModule,
    pub target: WeightModule,
    pub map: WModMap,
}

fn finite(w: &WeightModule) -> &FiniteWeightModule {
    match w {
        WeightModule::Finite(f) => f,
        WeightModule::ConeSlice(_) => panic!("expected a finite weight module"),
    }
}

fn slice(w: &WeightModule) -> &ConeSliceModule {
    match w {
        WeightModule::ConeSlice(s) => s,
        WeightModule::Finite(_) => panic!("expected a cone-slice module"),
    }
}

impl Effectus for WMod {
    type Obj = WeightModule;
    type Mor = WModMor;

    fn name(&self) -> String {
        format!("WMod over {}", self.scalars.describe())
    }

    fn unit(&self) -> WeightModule {
        match &self.scalars {
            Scalars::Finite(m) => {
                WeightModule::Finite(FiniteWeightModule::regular(m.clone()))
            }
            Scalars::Rational => WeightModule::ConeSlice(ConeSliceModule::simplex(1)),
        }
    }

    fn source(&self, f: &WModMor) -> WeightModule {
        f.source.clone()
    }

    fn target(&self, f: &WModMor) -> WeightModule {
        f.target.clone()
    }

    fn identity(&self, a: &WeightModule) -> WModMor {
        let map = match a {
            WeightModule::Finite(w) => WModMap::Table((0..w.size()).collect()),
            WeightModule::ConeSlice(s) => WModMap::Matrix(
                (0..s.dim())
                    .map(|i| {
                        let mut row = qvec_zero(s.dim());
                        row[i] = BigRational::one();
                        row
                    })
                    .collect(),
            ),
        };
        WModMor {
            source: a.clone(),
            target: a.clone(),
            map,
        }
    }

    fn zero_mor(&self, a: &WeightModule, b: &WeightModule) -> WModMor {
        let map = match (a, b) {
            (WeightModule::Finite(wa), WeightModule::Finite(wb)) => {
                WModMap::Table(vec![wb.zero(); wa.size()])
            }
            (WeightModule::ConeSlice(sa), WeightModule::ConeSlice(sb)) => {
                WModMap::Matrix(vec![qvec_zero(sa.dim()); sb.dim()])
            }
            _ => panic!("zero morphism between mixed backends"),
        };
        WModMor {
            source: a.clone(),
            target: b.clone(),
            map,
        }
    }

    fn compose(&self, g: &WModMor, f: &WModMor) -> WModMor {
        assert!(f.target == g.source, "composition of mismatched morphisms");
        let map = match (&g.map, &f.map) {
            (WModMap::Table(gt), WModMap::Table(ft)) => {
                WModMap::Table(ft.iter().map(|&y| gt[y]).collect())
            }
            (WModMap::Matrix(gm), WModMap::Matrix(fm)) => {
                let cols = fm.first().map_or(0, |r| r.len());
                WModMap::Matrix(
                    gm.iter()
                        .map(|grow| {
                            (0..cols)
                                .map(|j| {
                                    grow.iter()
                                        .zip(fm)
                                        .map(|(ge, frow)| ge * &frow[j])
                                        .sum()
                                })
                                .collect()
                        })
                        .collect(),
                )
            }
            _ => panic!("composition across mixed backends"),
        };
        WModMor {
            source: f.source.clone(),
            target: g.target.clone(),
            map,
        }
    }

    fn mor_sum(&self, f: &WModMor, g: &WModMor) -> Option<WModMor> {
        assert!(f.source == g.source && f.target == g.target);
        match (&f.map, &g.map) {
            (WModMap::Table(ft), WModMap::Table(gt)) => {
                let src = finite(&f.source);
                let tgt = finite(&f.target);
                let m = src.scalars();
                // Summable when at every point the image weights add up
                // within the weight available there.
                for x in 0..src.size() {
                    let w = m.sum(tgt.weight_of(ft[x]), tgt.weight_of(gt[x]))?;
                    if !leq(m.algebra(), w, src.weight_of(x)) {
                        return None;
                    }
                }
                let table = (0..src.size())
                    .map(|x| {
                        tgt.sum(ft[x], gt[x])
                            .expect("summable weights force summable elements")
                    })
                    .collect();
                Some(WModMor {
                    source: f.source.clone(),
                    target: f.target.clone(),
                    map: WModMap::Table(table),
                })
            }
            (WModMap::Matrix(fm), WModMap::Matrix(gm)) => {
                let src = slice(&f.source);
                let tgt = slice(&f.target);
                // Linearity reduces the pointwise condition to the
                // generators of the source cone.
                for gen in src.cone().generators(src.dim()) {
                    let fw: BigRational = fm
                        .iter()
                        .zip(tgt.trace())
                        .map(|(row, t)| qvec_dot(row, &gen) * t)
                        .sum();
                    let gw: BigRational = gm
                        .iter()
                        .zip(tgt.trace())
                        .map(|(row, t)| qvec_dot(row, &gen) * t)
                        .sum();
                    if fw + gw > qvec_dot(src.trace(), &gen) {
                        return None;
                    }
                }
                let sum = fm
                    .iter()
                    .zip(gm)
                    .map(|(fr, gr)| fr.iter().zip(gr).map(|(a, b)| a + b).collect())
                    .collect();
                Some(WModMor {
                    source: f.source.clone(),
                    target: f.target.clone(),
                    map: WModMap::Matrix(sum),
                })
            }
            _ => panic!("sum across mixed backends"),
        }
    }

    fn truth(&self, a: &WeightModule) -> WModMor {
        let map = match a {
            WeightModule::Finite(w) => {
                WModMap::Table((0..w.size()).map(|x| w.weight_of(x)).collect())
            }
            WeightModule::ConeSlice(s) => WModMap::Matrix(vec![s.trace().clone()]),
        };
        WModMor {
            source: a.clone(),
            target: self.unit(),
            map,
        }
    }

    fn coproduct(&self, parts: &[WeightModule]) -> Coproduct<WeightModule, WModMor> {
        assert!(!parts.is_empty());
        if parts.iter().all(|p| matches!(p, WeightModule::Finite(_))) {
            let refs: Vec<&FiniteWeightModule> = parts.iter().map(finite).collect();
            let cop = weight_module_coproduct(&refs)
                .expect("coproduct parts share this instance's scalars");
            let object = WeightModule::Finite(cop.module.clone());
            let mut coprojections = Vec::new();
            let mut projections = Vec::new();
            for (i, part) in parts.iter().enumerate() {
                let part_size = finite(part).size();
                coprojections.push(WModMor {
                    source: part.clone(),
                    target: object.clone(),
                    map: WModMap::Table(
                        (0..part_size).map(|x| cop.coprojection(i, x)).collect(),
                    ),
                });
                projections.push(WModMor {
                    source: object.clone(),
                    target: part.clone(),
                    map: WModMap::Table(
                        (0..cop.module.size()).map(|t| cop.projection(i, t)).collect(),
                    ),
                });
            }
            return Coproduct {
                object,
                coprojections,
                projections,
            };
        }

        let slices: Vec<&ConeSliceModule> = parts.iter().map(slice).collect();
        let joined = cone_slice_coproduct(&slices);
        let total = joined.dim();
        let object = WeightModule::ConeSlice(joined);
        let mut coprojections = Vec::new();
        let mut projections = Vec::new();
        let mut offset = 0;
        for part in parts {
            let d = slice(part).dim();
            coprojections.push(WModMor {
                source: part.clone(),
                target: object.clone(),
                map: WModMap::Matrix(
                    (0..total)
                        .map(|i| {
                            let mut row = qvec_zero(d);
                            if i >= offset && i < offset + d {
                                row[i - offset] = BigRational::one();
                            }
                            row
                        })
                        .collect(),
                ),
            });
            projections.push(WModMor {
                source: object.clone(),
                target: part.clone(),
                map: WModMap::Matrix(
                    (0..d)
                        .map(|i| {
                            let mut row = qvec_zero(total);
                            row[offset + i] = BigRational::one();
                            row
                        })
                        .collect(),
                ),
            });
            offset += d;
        }
        Coproduct {
            object,
            coprojections,
            projections,
        }
    }

    fn morphisms(
        &self,
        a: &WeightModule,
        b: &WeightModule,
    ) -> Result<Vec<WModMor>, HomsetTooLarge> {
        match (a, b) {
            (WeightModule::Finite(wa), WeightModule::Finite(wb)) => {
                Ok(weight_module_maps(wa, wb)?
                    .into_iter()
                    .map(|table| WModMor {
                        source: a.clone(),
                        target: b.clone(),
                        map: WModMap::Table(table),
                    })
                    .collect())
            }
            (WeightModule::ConeSlice(sa), WeightModule::ConeSlice(sb)) => {
                Ok(cone_slice_maps_grid(sa, sb, &self.grid)
                    .into_iter()
                    .map(|matrix| WModMor {
                        source: a.clone(),
                        target: b.clone(),
                        map: WModMap::Matrix(matrix),
                    })
                    .collect())
            }
            _ => panic!("homset across mixed backends"),
        }
    }

    fn homsets_complete(&self) -> bool {
        matches!(self.scalars, Scalars::Finite(_))
    }

    fn scalar_system(&self) -> Scalars {
        self.scalars.clone()
    }

    fn sample_objects(&self) -> Vec<WeightModule> {
        match &self.scalars {
            // Pointed sets are built over the canonical two-element monoid,
            // so only that exact monoid may receive them; a relabeled copy
            // would mix scalars across the sample.
            Scalars::Finite(m) if m.as_ref() == &FiniteEffectMonoid::two() => vec![
                self.unit(),
                WeightModule::Finite(FiniteWeightModule::pointed_set(&["*", "a"])),
                WeightModule::Finite(FiniteWeightModule::pointed_set(&["*", "a", "b"])),
            ],
            Scalars::Finite(_) => vec![self.unit()],
            Scalars::Rational => vec![
                WeightModule::ConeSlice(ConeSliceModule::simplex(1)),
                WeightModule::ConeSlice(ConeSliceModule::simplex(2)),
            ],
        }
    }

    fn show_obj(&self, a: &WeightModule) -> String {
        match a {
            WeightModule::Finite(w) => format!("weight module of size {}", w.size()),
            WeightModule::ConeSlice(s) => format!("cone slice of dimension {}", s.dim()),
        }
    }

    fn show_mor(&self, f: &WModMor) -> String {
        match &f.map {
            WModMap::Table(t) => {
                let src = finite(&f.source);
                let tgt = finite(&f.target);
                let entries: Vec<String> = t
                    .iter()
                    .enumerate()
                    .map(|(x, &y)| format!("{}->{}", src.label(x), tgt.label(y)))
                    .collect();
                format!("({})", entries.join(", "))
            }
            WModMap::Matrix(m) => {
                let rows: Vec<String> = m
                    .iter()
                    .map(|row| {
                        let cells: Vec<String> =
                            row.iter().map(crate::ovs::lp::show_rat).collect();
                        format!("[{}]", cells.join(" "))
                    })
                    .collect();
                format!("[{}]", rows.join("; "))
            }
        }
    }

    // Exact division on the rational backend: scaling by a nonzero rational
    // is injective, so the quotient is unique when it is lawful at all. The
    // finite backend stays on the default; its homsets are complete.
    fn divide_by_scalar(&self, f: &WModMor, s: &WModMor) -> Option<WModMor> {
        let (WModMap::Matrix(m), WModMap::Matrix(sm)) = (&f.map, &s.map) else {
            return None;
        };
        let r = sm.first()?.first()?;
        if r.is_zero() {
            return None;
        }
        let divided: Vec<QVec> = m
            .iter()
            .map(|row| row.iter().map(|e| e / r).collect())
            .collect();
        if !is_cone_slice_map(slice(&f.source), slice(&f.target), &divided) {
            return None;
        }
        Some(WModMor {
            source: f.source.clone(),
            target: f.target.clone(),
            map: WModMap::Matrix(divided),
        })
    }

    fn inverse(&self, f: &WModMor) -> Option<WModMor> {
        // Built directly rather than searched: the reverse homset may be
        // sampled (matrix case) or large.
        match &f.map {
            WModMap::Table(t) => {
                let src = finite(&f.source);
                let tgt = finite(&f.target);
                if src.size() != tgt.size() {
                    return None;
                }
                let mut inv = vec![usize::MAX; src.size()];
                for (x, &y) in t.iter().enumerate() {
                    if inv[y] != usize::MAX {
                        return None;
                    }
                    inv[y] = x;
                }
                if !is_weight_module_map(tgt, src, &inv) {
                    return None;
                }
                Some(WModMor {
                    source: f.target.clone(),
                    target: f.source.clone(),
                    map: WModMap::Table(inv),
                })
            }
            WModMap::Matrix(m) => {
                let src = slice(&f.source);
                let tgt = slice(&f.target);
                let d = tgt.dim();
                if src.dim() != d || m.len() != d {
                    return None;
                }
                let mut aug: Vec<QVec> = (0..d)
                    .map(|r| {
                        let mut row = m[r].clone();
                        for c in 0..d {
                            row.push(if r == c {
                                BigRational::one()
                            } else {
                                BigRational::zero()
                            });
                        }
                        row
                    })
                    .collect();
                if row_reduce(&mut aug, d) < d {
                    return None;
                }
                let inv: Vec<QVec> = aug.iter().map(|row| row[d..].to_vec()).collect();
                if !is_cone_slice_map(tgt, src, &inv) {
                    return None;
                }
                Some(WModMor {
                    source: f.target.clone(),
                    target: f.source.clone(),
                    map: WModMap::Matrix(inv),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{is_total, predicates, states, substates};
    use super::*;

    fn two() -> Arc<FiniteEffectMonoid> {
        Arc::new(FiniteEffectMonoid::two())
    }

    fn b4() -> Arc<FiniteEffectMonoid> {
        Arc::new(FiniteEffectMonoid::boolean_meet(2))
    }

    #[test]
    fn truth_measures_weight() {
        let c = WMod::finite(two());
        let x = WeightModule::Finite(FiniteWeightModule::pointed_set(&["*", "a", "b"]));
        let t = c.truth(&x);
        // Identity preserves all weight; the zero map loses it all.
        assert!(is_total(&c, &c.identity(&x)));
        assert!(!is_total(&c, &c.zero_mor(&x, &x)));
        assert_eq!(c.compose(&t, &c.identity(&x)), t);
    }

    #[test]
    fn rational_states_of_the_triangle() {
        let c = WMod::rational();
        let triangle = WeightModule::ConeSlice(ConeSliceModule::simplex(2));
        let st = states(&c, &triangle).unwrap();
        // Grid columns with full weight: the two vertices and the midpoint.
        assert_eq!(st.len(), 3);
        let sub = substates(&c, &triangle).unwrap();
        assert_eq!(sub.len(), 6);
    }

    #[test]
    fn rational_predicates_close_under_complement() {
        let c = WMod::rational();
        let triangle = WeightModule::ConeSlice(ConeSliceModule::simplex(2));
        let preds = predicates(&c, &triangle).unwrap();
        assert_eq!(preds.len(), 9);
        let truth = c.truth(&triangle);
        for p in &preds {
            let complements: Vec<&WModMor> = preds
                .iter()
                .filter(|q| c.mor_sum(p, q).as_ref() == Some(&truth))
                .collect();
            assert_eq!(complements.len(), 1, "{}", c.show_mor(p));
        }
    }

    #[test]
    fn finite_coproduct_matches_wedge() {
        let c = WMod::finite(two());
        let a = WeightModule::Finite(FiniteWeightModule::pointed_set(&["*", "a"]));
        let b = WeightModule::Finite(FiniteWeightModule::pointed_set(&["*", "b", "c"]));
        let cop = c.coproduct(&[a.clone(), b.clone()]);
        match &cop.object {
            WeightModule::Finite(w) => assert_eq!(w.size(), 4),
            WeightModule::ConeSlice(_) => unreachable!(),
        }
        for (i, part) in [&a, &b].into_iter().enumerate() {
            let roundtrip =
                c.compose(&cop.projections[i], &cop.coprojections[i]);
            assert_eq!(roundtrip, c.identity(part));
        }
    }

    #[test]
    fn b4_unit_homset_is_the_monoid() {
        let c = WMod::finite(b4());
        let unit = c.unit();
        let maps = c.morphisms(&unit, &unit).unwrap();
        assert_eq!(maps.len(), 4);
    }

    #[test]
    fn rational_coproduct_blocks() {
        let c = WMod::rational();
        let line = WeightModule::ConeSlice(ConeSliceModule::simplex(1));
        let cop = c.coproduct(&[line.clone(), line.clone()]);
        match &cop.object {
            WeightModule::ConeSlice(s) => assert_eq!(s.dim(), 2),
            WeightModule::Finite(_) => unreachable!(),
        }
        for i in 0..2 {
            let roundtrip =
                c.compose(&cop.projections[i], &cop.coprojections[i]);
            assert_eq!(roundtrip, c.identity(&line));
        }
        let crossed = c.compose(&cop.projections[1], &cop.coprojections[0]);
        assert_eq!(crossed, c.zero_mor(&line, &line));
    }
}
