//! Finite sets and partial functions.
//!
//! Objects are set sizes, morphisms are tables of optional images. Two
//! morphisms are summable exactly when their domains of definition are
//! disjoint; the unit object is a singleton, so predicates pick out subsets.

use std::sync::Arc;

use crate::modules::{all_tables, candidate_bound, HomsetTooLarge, Scalars};
use crate::monoid::FiniteEffectMonoid;

use super::{Coproduct, Effectus};

pub struct Pfn {
    scalars: Arc<FiniteEffectMonoid>,
}

impl Pfn {
    pub fn new() -> Self {
        Pfn {
            scalars: Arc::new(FiniteEffectMonoid::two()),
        }
    }
}

impl Default for Pfn {
    fn default() -> Self {
        Pfn::new()
    }
}

/// A partial function, one optional image per source element.
#[derive(Debug, Clone, PartialEq)]
pub struct PfnMor {
    pub source: usize,
    pub target: usize,
    pub map: Vec<Option<usize>>,
}

impl Effectus for Pfn {
    type Obj = usize;
    type Mor = PfnMor;

    fn name(&self) -> String {
        "Pfn".into()
    }

    fn unit(&self) -> usize {
        1
    }

    fn source(&self, f: &PfnMor) -> usize {
        f.source
    }

    fn target(&self, f: &PfnMor) -> usize {
        f.target
    }

    fn identity(&self, a: &usize) -> PfnMor {
        PfnMor {
            source: *a,
            target: *a,
            map: (0..*a).map(Some).collect(),
        }
    }

    fn zero_mor(&self, a: &usize, b: &usize) -> PfnMor {
        PfnMor {
            source: *a,
            target: *b,
            map: vec![None; *a],
        }
    }

    fn compose(&self, g: &PfnMor, f: &PfnMor) -> PfnMor {
        assert_eq!(f.target, g.source, "composition of mismatched morphisms");
        PfnMor {
            source: f.source,
            target: g.target,
            map: f.map.iter().map(|y| y.and_then(|y| g.map[y])).collect(),
        }
    }

    fn mor_sum(&self, f: &PfnMor, g: &PfnMor) -> Option<PfnMor> {
        assert_eq!((f.source, f.target), (g.source, g.target));
        let mut map = Vec::with_capacity(f.source);
        for (x, y) in f.map.iter().zip(&g.map) {
            match (x, y) {
                (Some(_), Some(_)) => return None,
                (Some(v), None) | (None, Some(v)) => map.push(Some(*v)),
                (None, None) => map.push(None),
            }
        }
        Some(PfnMor {
            source: f.source,
            target: f.target,
            map,
        })
    }

    fn truth(&self, a: &usize) -> PfnMor {
        PfnMor {
            source: *a,
            target: 1,
            map: vec![Some(0); *a],
        }
    }

    fn coproduct(&self, parts: &[usize]) -> Coproduct<usize, PfnMor> {
        assert!(!parts.is_empty());
        let total: usize = parts.iter().sum();
        let mut coprojections = Vec::new();
        let mut projections = Vec::new();
        let mut offset = 0;
        for &size in parts {
            coprojections.push(PfnMor {
                source: size,
                target: total,
                map: (0..size).map(|x| Some(offset + x)).collect(),
            });
            projections.push(PfnMor {
                source: total,
                target: size,
                map: (0..total)
                    .map(|t| {
                        if t >= offset && t < offset + size {
                            Some(t - offset)
                        } else {
                            None
                        }
                    })
                    .collect(),
            });
            offset += size;
        }
        Coproduct {
            object: total,
            coprojections,
            projections,
        }
    }

    fn morphisms(&self, a: &usize, b: &usize) -> Result<Vec<PfnMor>, HomsetTooLarge> {
        candidate_bound(b + 1, *a)?;
        Ok(all_tables(b + 1, *a)
            .map(|t| PfnMor {
                source: *a,
                target: *b,
                map: t.iter().map(|&v| v.checked_sub(1)).collect(),
            })
            .collect())
    }

    // Isomorphisms are exactly the total bijections, so the inverse is the
    // inverted table; no homset search.
    fn inverse(&self, f: &PfnMor) -> Option<PfnMor> {
        if f.source != f.target {
            return None;
        }
        let mut inv = vec![None; f.target];
        for (x, y) in f.map.iter().enumerate() {
            let y = (*y)?;
            if inv[y].is_some() {
                return None;
            }
            inv[y] = Some(x);
        }
        if inv.iter().any(|v| v.is_none()) {
            return None;
        }
        Some(PfnMor {
            source: f.target,
            target: f.source,
            map: inv,
        })
    }

    fn scalar_system(&self) -> Scalars {
        Scalars::Finite(self.scalars.clone())
    }

    fn sample_objects(&self) -> Vec<usize> {
        vec![0, 1, 2, 3]
    }

    fn show_obj(&self, a: &usize) -> String {
        format!("set({a})")
    }

    fn show_mor(&self, f: &PfnMor) -> String {
        let defined: Vec<String> = f
            .map
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| format!("{x}->{y}")))
            .collect();
        format!("({})", defined.join(", "))
    }
}

/// Negative control: a copy of `Pfn` whose composition invents the image 0
/// wherever the first leg is undefined. Zero absorption, identity laws, and
/// biadditivity all break, and the checkers must say so.
pub struct CorruptedPfn(pub Pfn);

impl Effectus for CorruptedPfn {
    type Obj = usize;
    type Mor = PfnMor;

    fn name(&self) -> String {
        "Pfn with partiality-blind composition".into()
    }

    fn unit(&self) -> usize {
        self.0.unit()
    }

    fn source(&self, f: &PfnMor) -> usize {
        f.source
    }

    fn target(&self, f: &PfnMor) -> usize {
        f.target
    }

    fn identity(&self, a: &usize) -> PfnMor {
        self.0.identity(a)
    }

    fn zero_mor(&self, a: &usize, b: &usize) -> PfnMor {
        self.0.zero_mor(a, b)
    }

    fn compose(&self, g: &PfnMor, f: &PfnMor) -> PfnMor {
        assert_eq!(f.target, g.source);
        let fallback = if g.target > 0 { Some(0) } else { None };
        PfnMor {
            source: f.source,
            target: g.target,
            map: f
                .map
                .iter()
                .map(|y| match y {
                    Some(y) => g.map[*y],
                    None => fallback,
                })
                .collect(),
        }
    }

    fn mor_sum(&self, f: &PfnMor, g: &PfnMor) -> Option<PfnMor> {
        self.0.mor_sum(f, g)
    }

    fn truth(&self, a: &usize) -> PfnMor {
        self.0.truth(a)
    }

    fn coproduct(&self, parts: &[usize]) -> Coproduct<usize, PfnMor> {
        self.0.coproduct(parts)
    }

    fn morphisms(&self, a: &usize, b: &usize) -> Result<Vec<PfnMor>, HomsetTooLarge> {
        self.0.morphisms(a, b)
    }

    fn scalar_system(&self) -> Scalars {
        self.0.scalar_system()
    }

    fn sample_objects(&self) -> Vec<usize> {
        vec![1, 2]
    }

    fn show_obj(&self, a: &usize) -> String {
        self.0.show_obj(a)
    }

    fn show_mor(&self, f: &PfnMor) -> String {
        self.0.show_mor(f)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{is_total, predicates, recompose, states, total_morphisms};
    use super::*;

    #[test]
    fn homset_sizes_and_composition() {
        let c = Pfn::new();
        assert_eq!(c.morphisms(&2, &2).unwrap().len(), 9);
        assert_eq!(c.morphisms(&0, &3).unwrap().len(), 1);
        assert_eq!(c.morphisms(&3, &0).unwrap().len(), 1);
        let f = PfnMor {
            source: 2,
            target: 2,
            map: vec![Some(1), None],
        };
        let g = PfnMor {
            source: 2,
            target: 2,
            map: vec![None, Some(0)],
        };
        let gf = c.compose(&g, &f);
        assert_eq!(gf.map, vec![Some(0), None]);
        assert_eq!(c.compose(&f, &c.identity(&2)), f);
    }

    #[test]
    fn sums_need_disjoint_domains() {
        let c = Pfn::new();
        let f = PfnMor {
            source: 2,
            target: 1,
            map: vec![Some(0), None],
        };
        let g = PfnMor {
            source: 2,
            target: 1,
            map: vec![None, Some(0)],
        };
        assert_eq!(c.mor_sum(&f, &g).unwrap(), c.truth(&2));
        assert!(c.mor_sum(&f, &f).is_none());
    }

    #[test]
    fn states_biject_with_the_carrier() {
        let c = Pfn::new();
        for size in 0..=3 {
            assert_eq!(states(&c, &size).unwrap().len(), size);
        }
        // Substates add the zero map.
        assert_eq!(c.morphisms(&1, &3).unwrap().len(), 4);
    }

    #[test]
    fn totals_are_the_everywhere_defined_maps() {
        let c = Pfn::new();
        let totals = total_morphisms(&c, &2, &3).unwrap();
        assert_eq!(totals.len(), 9);
        assert!(totals.iter().all(|f| f.map.iter().all(|y| y.is_some())));
        assert!(!is_total(&c, &c.zero_mor(&2, &3)));
    }

    #[test]
    fn predicates_pick_out_subsets() {
        let c = Pfn::new();
        let preds = predicates(&c, &2).unwrap();
        assert_eq!(preds.len(), 4);
        // The hom-PCM order is domain inclusion: p below q exactly when
        // some r has p + r = q.
        for p in &preds {
            for q in &preds {
                let below = preds.iter().any(|r| c.mor_sum(p, r).as_ref() == Some(q));
                let included = p
                    .map
                    .iter()
                    .zip(&q.map)
                    .all(|(x, y)| x.is_none() || y.is_some());
                assert_eq!(below, included, "{} vs {}", c.show_mor(p), c.show_mor(q));
            }
        }
    }

    #[test]
    fn recompose_rejects_clashing_components() {
        let c = Pfn::new();
        let cop = c.coproduct(&[1, 1]);
        let point = c.truth(&1);
        // Two total maps out of the same point into distinct summands have
        // non-summable truths.
        assert!(recompose(&c, &cop, &[point.clone(), point]).is_none());
        let zero = c.zero_mor(&1, &1);
        let half = recompose(&c, &cop, &[c.identity(&1), zero]).unwrap();
        assert_eq!(half.map, vec![Some(0)]);
    }

    #[test]
    fn corrupted_composition_forgets_zero() {
        let c = CorruptedPfn(Pfn::new());
        let z = c.zero_mor(&2, &2);
        let id = c.identity(&2);
        assert_ne!(c.compose(&id, &z), z);
    }
}
