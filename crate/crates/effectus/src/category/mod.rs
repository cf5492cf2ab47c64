//! A common interface for categories with partial addition of morphisms and
//! a unit object, together with three executable instances: partial
//! functions, effect modules in the opposite direction, and weight modules.
//!
//! Everything here is finite or finitely sampled. `morphisms` returns the
//! complete homset on finite instances; instances with infinite homsets
//! return a fixed deterministic sample and say so via `homsets_complete`.

pub mod checks;
pub mod emod_op;
pub mod pfn;
pub mod wmod;

use crate::modules::{HomsetTooLarge, Scalars};

/// A finite-coproduct category enriched in partial commutative monoids,
/// with zero morphisms and a unit object whose incoming morphisms act as
/// predicates.
pub trait Effectus {
    type Obj: Clone + PartialEq + std::fmt::Debug;
    type Mor: Clone + PartialEq + std::fmt::Debug;

    fn name(&self) -> String;
    fn unit(&self) -> Self::Obj;
    fn source(&self, f: &Self::Mor) -> Self::Obj;
    fn target(&self, f: &Self::Mor) -> Self::Obj;
    fn identity(&self, a: &Self::Obj) -> Self::Mor;
    fn zero_mor(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Mor;
    /// `g` after `f`. Panics when the middle objects disagree.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor;
    /// Partial sum in the hom-PCM; `None` means the pair is not summable.
    fn mor_sum(&self, f: &Self::Mor, g: &Self::Mor) -> Option<Self::Mor>;
    /// The top predicate `A -> I`.
    fn truth(&self, a: &Self::Obj) -> Self::Mor;
    /// Coproduct of one or more objects with coprojections and partial
    /// projections.
    fn coproduct(&self, parts: &[Self::Obj]) -> Coproduct<Self::Obj, Self::Mor>;
    fn morphisms(&self, a: &Self::Obj, b: &Self::Obj)
        -> Result<Vec<Self::Mor>, HomsetTooLarge>;
    /// Whether `morphisms` is exhaustive rather than a sample.
    fn homsets_complete(&self) -> bool {
        true
    }
    fn scalar_system(&self) -> Scalars;
    /// Objects small enough for every checker to quantify over.
    fn sample_objects(&self) -> Vec<Self::Obj>;
    fn show_obj(&self, a: &Self::Obj) -> String;
    fn show_mor(&self, f: &Self::Mor) -> String;

    /// Some `g` with `f = g ∘ s`, for `s: I → I` a nonzero scalar, when the
    /// instance can divide exactly. `None` means unsupported or no such
    /// lawful morphism; instances with complete homsets can leave the
    /// default, since exhaustive search covers them.
    fn divide_by_scalar(&self, f: &Self::Mor, s: &Self::Mor) -> Option<Self::Mor> {
        let _ = (f, s);
        None
    }

    /// The two-sided inverse of `f` when `f` is an isomorphism. The default
    /// searches the reverse homset; instances override it where the homset
    /// is sampled or too large but the inverse can be built directly.
    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        let source = self.source(f);
        let target = self.target(f);
        let id_source = self.identity(&source);
        let id_target = self.identity(&target);
        self.morphisms(&target, &source).ok()?.into_iter().find(|g| {
            self.compose(g, f) == id_source && self.compose(f, g) == id_target
        })
    }
}

/// A finite coproduct: the object together with κᵢ and ▷ᵢ.
#[derive(Debug, Clone)]
pub struct Coproduct<O, M> {
    pub object: O,
    /// κᵢ: Aᵢ → ∐A.
    pub coprojections: Vec<M>,
    /// ▷ᵢ: ∐A → Aᵢ, the partial projections.
    pub projections: Vec<M>,
}

impl<O, M> Coproduct<O, M> {
    pub fn arity(&self) -> usize {
        self.coprojections.len()
    }
}

/// The mediating morphism out of a coproduct, `[f₁,…,fₙ] = ⊕ᵢ fᵢ∘▷ᵢ`.
/// `None` when the partial sum is undefined, which cannot happen for the
/// cotuple of an actual cocone in a lawful instance.
pub fn cotuple<C: Effectus>(
    c: &C,
    cop: &Coproduct<C::Obj, C::Mor>,
    fs: &[C::Mor],
) -> Option<C::Mor> {
    assert_eq!(fs.len(), cop.arity(), "one component per summand");
    let mut acc: Option<C::Mor> = None;
    for (f, proj) in fs.iter().zip(&cop.projections) {
        let term = c.compose(f, proj);
        acc = Some(match acc {
            None => term,
            Some(a) => c.mor_sum(&a, &term)?,
        });
    }
    acc
}

/// The codiagonal `∇: A+…+A → A`, the cotuple of identities.
pub fn codiagonal<C: Effectus>(
    c: &C,
    cop: &Coproduct<C::Obj, C::Mor>,
    a: &C::Obj,
) -> C::Mor {
    let ids: Vec<C::Mor> = cop.projections.iter().map(|_| c.identity(a)).collect();
    cotuple(c, cop, &ids).expect("identity components always cotuple")
}

/// Components of `f: A → B₁+…+Bₙ`, one per summand: `fⱼ = ▷ⱼ∘f`.
pub fn decompose_morphism<C: Effectus>(
    c: &C,
    cop: &Coproduct<C::Obj, C::Mor>,
    f: &C::Mor,
) -> Vec<C::Mor> {
    cop.projections.iter().map(|p| c.compose(p, f)).collect()
}

/// `⊕ⱼ κⱼ∘gⱼ`, the inverse of decomposition. `None` when the components
/// are not jointly summable into the coproduct.
pub fn recompose<C: Effectus>(
    c: &C,
    cop: &Coproduct<C::Obj, C::Mor>,
    gs: &[C::Mor],
) -> Option<C::Mor> {
    assert_eq!(gs.len(), cop.arity(), "one component per summand");
    let mut acc: Option<C::Mor> = None;
    for (g, kappa) in gs.iter().zip(&cop.coprojections) {
        let term = c.compose(kappa, g);
        acc = Some(match acc {
            None => term,
            Some(a) => c.mor_sum(&a, &term)?,
        });
    }
    acc
}

/// Whether a parallel family `(fⱼ: A → B)ⱼ` is compatible: some
/// `h: A → J·B` restricts to each `fⱼ` under the partial projections.
/// In a lawful instance that is equivalent to `⊕ⱼ κⱼ∘fⱼ` being defined,
/// and the sum itself is the witness.
pub fn compatible<C: Effectus>(c: &C, fs: &[C::Mor]) -> bool {
    assert!(!fs.is_empty());
    let b = c.target(&fs[0]);
    let parts: Vec<C::Obj> = fs.iter().map(|_| b.clone()).collect();
    let cop = c.coproduct(&parts);
    recompose(c, &cop, fs).is_some()
}

/// `1∘f = 1`, i.e. `f` loses no weight.
pub fn is_total<C: Effectus>(c: &C, f: &C::Mor) -> bool {
    let t = c.truth(&c.target(f));
    c.compose(&t, f) == c.truth(&c.source(f))
}

pub fn total_morphisms<C: Effectus>(
    c: &C,
    a: &C::Obj,
    b: &C::Obj,
) -> Result<Vec<C::Mor>, HomsetTooLarge> {
    Ok(c.morphisms(a, b)?
        .into_iter()
        .filter(|f| is_total(c, f))
        .collect())
}

/// Total morphisms out of the unit.
pub fn states<C: Effectus>(c: &C, a: &C::Obj) -> Result<Vec<C::Mor>, HomsetTooLarge> {
    total_morphisms(c, &c.unit(), a)
}

/// All morphisms out of the unit; their weights are `1∘ω`.
pub fn substates<C: Effectus>(c: &C, a: &C::Obj) -> Result<Vec<C::Mor>, HomsetTooLarge> {
    c.morphisms(&c.unit(), a)
}

/// All morphisms into the unit.
pub fn predicates<C: Effectus>(c: &C, a: &C::Obj) -> Result<Vec<C::Mor>, HomsetTooLarge> {
    c.morphisms(a, &c.unit())
}
