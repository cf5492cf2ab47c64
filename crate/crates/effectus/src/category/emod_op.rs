//! Effect modules over a fixed finite scalar monoid, with arrows reversed.
//!
//! An arrow A → B here is an additive action-preserving map B → A between
//! the modules; composition therefore reverses. Coproducts are cartesian
//! products of modules, and the unit object is the scalar monoid acting on
//! itself.

use std::sync::Arc;

use crate::algebra::{FiniteCarrier, FiniteEffectAlgebra, FinitePcm};
use crate::modules::{
    effect_module_maps, enumerate_effect_modules, is_effect_module_map, FiniteEffectModule,
    HomsetTooLarge, Scalars,
};
use crate::monoid::FiniteEffectMonoid;

use super::{Coproduct, Effectus};

pub struct EModOp {
    scalars: Arc<FiniteEffectMonoid>,
}

impl EModOp {
    pub fn new(scalars: Arc<FiniteEffectMonoid>) -> Self {
        EModOp { scalars }
    }

    pub fn scalars(&self) -> &Arc<FiniteEffectMonoid> {
        &self.scalars
    }
}

/// An arrow of the reversed category, held in the module direction: the
/// table is indexed by elements of `target` and valued in `source`.
#[derive(Debug, Clone, PartialEq)]
pub struct EModOpMor {
    pub source: FiniteEffectModule,
    pub target: FiniteEffectModule,
    pub table: Vec<usize>,
}

/// Cartesian product of effect modules: pointwise sums (defined when every
/// coordinate is), pointwise action, top at the tuple of tops.
pub struct EffectProduct {
    pub module: FiniteEffectModule,
    pub tuples: Vec<Vec<usize>>,
}

impl EffectProduct {
    pub fn index_of(&self, tuple: &[usize]) -> usize {
        self.tuples
            .iter()
            .position(|t| t == tuple)
            .expect("every component tuple appears in the product carrier")
    }
}

pub fn effect_module_product(parts: &[&FiniteEffectModule]) -> EffectProduct {
    assert!(!parts.is_empty());
    let scalars = parts[0].scalars().clone();
    for p in parts.iter().skip(1) {
        assert!(
            p.scalars().as_ref() == scalars.as_ref(),
            "product of modules over different scalars"
        );
    }

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
    let n = tuples.len();
    let position = |t: &[usize]| tuples.iter().position(|u| u == t).unwrap();

    let labels: Vec<String> = tuples
        .iter()
        .map(|t| {
            let inner: Vec<String> = parts
                .iter()
                .zip(t)
                .map(|(p, &x)| p.algebra().label(x))
                .collect();
            format!("({})", inner.join(","))
        })
        .collect();
    let carrier = FiniteCarrier::with_labels(labels)
        .expect("tuple labels over distinct coordinates are distinct");

    let zero_tuple: Vec<usize> = parts.iter().map(|p| p.algebra().zero()).collect();
    let top_tuple: Vec<usize> = parts.iter().map(|p| p.algebra().top()).collect();

    let mut sum = vec![None; n * n];
    for i in 0..n {
        for j in 0..n {
            let pointwise: Option<Vec<usize>> = parts
                .iter()
                .enumerate()
                .map(|(k, p)| p.algebra().sum(tuples[i][k], tuples[j][k]))
                .collect();
            sum[i * n + j] = pointwise.map(|t| position(&t));
        }
    }
    let pcm = FinitePcm::new(carrier, position(&zero_tuple), sum)
        .expect("pointwise tables are structurally well-formed");
    let algebra = FiniteEffectAlgebra::new(pcm, position(&top_tuple))
        .expect("the tuple of tops is in range");

    let mut action = vec![0; scalars.size() * n];
    for r in 0..scalars.size() {
        for (i, t) in tuples.iter().enumerate() {
            let image: Vec<usize> = parts.iter().zip(t).map(|(p, &x)| p.act(r, x)).collect();
            action[r * n + i] = position(&image);
        }
    }
    let module = FiniteEffectModule::new(scalars, algebra, action)
        .expect("pointwise action tables are structurally well-formed");
    EffectProduct { module, tuples }
}

impl Effectus for EModOp {
    type Obj = FiniteEffectModule;
    type Mor = EModOpMor;

    fn name(&self) -> String {
        format!(
            "EMod^op over a scalar monoid of size {}",
            self.scalars.size()
        )
    }

    fn unit(&self) -> FiniteEffectModule {
        FiniteEffectModule::regular(self.scalars.clone())
    }

    fn source(&self, f: &EModOpMor) -> FiniteEffectModule {
        f.source.clone()
    }

    fn target(&self, f: &EModOpMor) -> FiniteEffectModule {
        f.target.clone()
    }

    fn identity(&self, a: &FiniteEffectModule) -> EModOpMor {
        EModOpMor {
            source: a.clone(),
            target: a.clone(),
            table: (0..a.size()).collect(),
        }
    }

    fn zero_mor(&self, a: &FiniteEffectModule, b: &FiniteEffectModule) -> EModOpMor {
        EModOpMor {
            source: a.clone(),
            target: b.clone(),
            table: vec![a.algebra().zero(); b.size()],
        }
    }

    fn compose(&self, g: &EModOpMor, f: &EModOpMor) -> EModOpMor {
        assert!(f.target == g.source, "composition of mismatched morphisms");
        EModOpMor {
            source: f.source.clone(),
            target: g.target.clone(),
            table: g.table.iter().map(|&y| f.table[y]).collect(),
        }
    }

    fn mor_sum(&self, f: &EModOpMor, g: &EModOpMor) -> Option<EModOpMor> {
        assert!(f.source == g.source && f.target == g.target);
        let top = f.target.algebra().top();
        // Summable exactly when the images of the target's top are; the
        // maps are monotone, so the top dominates every other point.
        f.source.algebra().sum(f.table[top], g.table[top])?;
        let table = f
            .table
            .iter()
            .zip(&g.table)
            .map(|(&x, &y)| {
                f.source
                    .algebra()
                    .sum(x, y)
                    .expect("summable at the top forces summable below")
            })
            .collect();
        Some(EModOpMor {
            source: f.source.clone(),
            target: f.target.clone(),
            table,
        })
    }

    fn truth(&self, a: &FiniteEffectModule) -> EModOpMor {
        let unit = self.unit();
        let top = a.algebra().top();
        EModOpMor {
            source: a.clone(),
            target: unit,
            table: (0..self.scalars.size()).map(|s| a.act(s, top)).collect(),
        }
    }

    fn coproduct(
        &self,
        parts: &[FiniteEffectModule],
    ) -> Coproduct<FiniteEffectModule, EModOpMor> {
        assert!(!parts.is_empty());
        let refs: Vec<&FiniteEffectModule> = parts.iter().collect();
        let product = effect_module_product(&refs);
        let object = product.module.clone();
        let mut coprojections = Vec::new();
        let mut projections = Vec::new();
        for (i, part) in parts.iter().enumerate() {
            // κᵢ: the product projection, read in the module direction.
            coprojections.push(EModOpMor {
                source: part.clone(),
                target: object.clone(),
                table: product.tuples.iter().map(|t| t[i]).collect(),
            });
            // ▷ᵢ: insertion at slot i with zeros elsewhere.
            let zero_tuple: Vec<usize> =
                parts.iter().map(|p| p.algebra().zero()).collect();
            projections.push(EModOpMor {
                source: object.clone(),
                target: part.clone(),
                table: (0..part.size())
                    .map(|x| {
                        let mut t = zero_tuple.clone();
                        t[i] = x;
                        product.index_of(&t)
                    })
                    .collect(),
            });
        }
        Coproduct {
            object,
            coprojections,
            projections,
        }
    }

    fn morphisms(
        &self,
        a: &FiniteEffectModule,
        b: &FiniteEffectModule,
    ) -> Result<Vec<EModOpMor>, HomsetTooLarge> {
        Ok(effect_module_maps(b, a)?
            .into_iter()
            .map(|table| EModOpMor {
                source: a.clone(),
                target: b.clone(),
                table,
            })
            .collect())
    }

    fn scalar_system(&self) -> Scalars {
        Scalars::Finite(self.scalars.clone())
    }

    fn sample_objects(&self) -> Vec<FiniteEffectModule> {
        let mut out = vec![self.unit()];
        if self.scalars.size() == 2 {
            for algebra in [
                FiniteEffectAlgebra::three_chain(),
                FiniteEffectAlgebra::powerset(2),
                FiniteEffectAlgebra::four_chain(),
            ] {
                out.push(
                    FiniteEffectModule::trivial_action(self.scalars.clone(), algebra)
                        .expect("the two-element scalars admit the trivial action"),
                );
            }
        } else if let Ok(small) =
            enumerate_effect_modules(&self.scalars, &FiniteEffectAlgebra::two())
        {
            out.extend(small);
        }
        out
    }

    fn show_obj(&self, a: &FiniteEffectModule) -> String {
        format!("module of size {}", a.size())
    }

    fn show_mor(&self, f: &EModOpMor) -> String {
        let entries: Vec<String> = f
            .table
            .iter()
            .enumerate()
            .map(|(b, &a)| {
                format!(
                    "{}->{}",
                    f.target.algebra().label(b),
                    f.source.algebra().label(a)
                )
            })
            .collect();
        format!("op({})", entries.join(", "))
    }

    fn inverse(&self, f: &EModOpMor) -> Option<EModOpMor> {
        // Invert the underlying table directly instead of searching the
        // reverse homset, which is often over the enumeration cap.
        if f.source.size() != f.target.size() {
            return None;
        }
        let n = f.source.size();
        let mut inv = vec![usize::MAX; n];
        for (y, &x) in f.table.iter().enumerate() {
            if inv[x] != usize::MAX {
                return None;
            }
            inv[x] = y;
        }
        if !is_effect_module_map(&f.source, &f.target, &inv) {
            return None;
        }
        Some(EModOpMor {
            source: f.target.clone(),
            target: f.source.clone(),
            table: inv,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::{predicates, states};
    use super::*;
    use crate::algebra::are_isomorphic;
    use crate::modules::{check_effect_module_axioms, EffectModule};

    fn two() -> Arc<FiniteEffectMonoid> {
        Arc::new(FiniteEffectMonoid::two())
    }

    fn b4() -> Arc<FiniteEffectMonoid> {
        Arc::new(FiniteEffectMonoid::boolean_meet(2))
    }

    #[test]
    fn product_module_is_lawful() {
        let c = EModOp::new(two());
        let three = FiniteEffectModule::trivial_action(
            two(),
            FiniteEffectAlgebra::three_chain(),
        )
        .unwrap();
        let product = effect_module_product(&[&c.unit(), &three]);
        assert_eq!(product.module.size(), 6);
        let report =
            check_effect_module_axioms(&EffectModule::Finite(product.module.clone()));
        assert!(report.passed(), "{:?}", report.violations);
    }

    #[test]
    fn predicates_recover_the_module() {
        let c = EModOp::new(b4());
        for a in c.sample_objects() {
            let preds = predicates(&c, &a).unwrap();
            assert_eq!(preds.len(), a.size());
            // f is determined by f(1), and the assignment is additive, so
            // Pred(A) is the module's own algebra.
            let pred_alg = predicate_algebra_of(&c, &a);
            assert!(are_isomorphic(&pred_alg, a.algebra()));
        }
    }

    fn predicate_algebra_of(c: &EModOp, a: &FiniteEffectModule) -> FiniteEffectAlgebra {
        let preds = predicates(c, a).unwrap();
        let n = preds.len();
        let mut sum = vec![None; n * n];
        for (i, p) in preds.iter().enumerate() {
            for (j, q) in preds.iter().enumerate() {
                if let Some(s) = c.mor_sum(p, q) {
                    sum[i * n + j] = Some(preds.iter().position(|r| *r == s).unwrap());
                }
            }
        }
        let zero = preds
            .iter()
            .position(|p| *p == c.zero_mor(a, &c.unit()))
            .unwrap();
        let top = preds.iter().position(|p| *p == c.truth(a)).unwrap();
        let pcm = FinitePcm::new(FiniteCarrier::new(n).unwrap(), zero, sum).unwrap();
        FiniteEffectAlgebra::new(pcm, top).unwrap()
    }

    #[test]
    fn composition_reverses_module_maps() {
        let c = EModOp::new(two());
        let unit = c.unit();
        let four = FiniteEffectModule::trivial_action(
            two(),
            FiniteEffectAlgebra::powerset(2),
        )
        .unwrap();
        let truth = c.truth(&four);
        // 1∘f for a substate f: I → A is the weight of the substate; with
        // f = κ of an element, the truth composes to 1 exactly for total f.
        for f in c.morphisms(&unit, &four).unwrap() {
            let w = c.compose(&truth, &f);
            assert_eq!(w.source, unit);
            assert_eq!(w.target, unit);
        }
    }

    #[test]
    fn four_chain_has_no_states_but_powerset_does() {
        let c = EModOp::new(two());
        let chain = FiniteEffectModule::trivial_action(
            two(),
            FiniteEffectAlgebra::four_chain(),
        )
        .unwrap();
        assert_eq!(states(&c, &chain).unwrap().len(), 0);
        let square = FiniteEffectModule::trivial_action(
            two(),
            FiniteEffectAlgebra::powerset(2),
        )
        .unwrap();
        assert_eq!(states(&c, &square).unwrap().len(), 2);
    }

    #[test]
    fn small_modules_over_b4_are_the_atom_slices() {
        let small =
            enumerate_effect_modules(&b4(), &FiniteEffectAlgebra::two()).unwrap();
        assert_eq!(small.len(), 2);
        for module in &small {
            let report = check_effect_module_axioms(&EffectModule::Finite(module.clone()));
            assert!(report.passed(), "{:?}", report.violations);
        }
    }
}
