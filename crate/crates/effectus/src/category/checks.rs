//! Law checkers that run against any instance of the `Effectus` trait.
//!
//! Every checker quantifies exhaustively over the homsets between its
//! sample objects. Homsets that exceed the enumeration cap are skipped and
//! recorded on the report; a skip is never a pass.

use itertools::Itertools;

use crate::algebra::{
    check_effect_algebra_axioms, FiniteCarrier, FiniteEffectAlgebra, FinitePcm,
};
use crate::modules::Scalars;
use crate::monoid::{check_effect_monoid_axioms, FiniteEffectMonoid};
use crate::report::{CheckReport, Violation};

use super::{
    codiagonal, cotuple, decompose_morphism, is_total, predicates, recompose, Effectus,
};

/// Families larger than this per sub-check are skipped rather than
/// enumerated; keeps the cubic loops bounded.
const FAMILY_BUDGET: u128 = 400_000;

/// Homsets between sample objects, each either enumerated or skipped.
struct Homsets<C: Effectus> {
    sets: Vec<Vec<Option<Vec<C::Mor>>>>,
}

impl<C: Effectus> Homsets<C> {
    fn new(c: &C, objects: &[C::Obj], report: &mut CheckReport) -> Self {
        let n = objects.len();
        let mut sets = Vec::with_capacity(n);
        for a in objects {
            let mut row = Vec::with_capacity(n);
            for b in objects {
                match c.morphisms(a, b) {
                    Ok(h) => row.push(Some(h)),
                    Err(e) => {
                        report.skip(format!(
                            "hom({}, {}): {}",
                            c.show_obj(a),
                            c.show_obj(b),
                            e
                        ));
                        row.push(None);
                    }
                }
            }
            sets.push(row);
        }
        Homsets { sets }
    }

    fn get(&self, i: usize, j: usize) -> Option<&[C::Mor]> {
        self.sets[i][j].as_deref()
    }
}

fn violation<C: Effectus>(c: &C, law: &str, mors: &[&C::Mor], detail: String) -> Violation {
    Violation::new(law, mors.iter().map(|m| c.show_mor(m)).collect(), detail)
}

/// Category laws, the PCM structure of each homset, biadditivity of
/// composition, and the two axioms tying sums to coproducts.
pub fn check_category_and_pac_axioms<C: Effectus>(c: &C, sample: &[C::Obj]) -> CheckReport {
    let mut report = CheckReport::new(format!("{}: category and sum axioms", c.name()), vec![]);
    let homs = Homsets::new(c, sample, &mut report);
    let n = sample.len();
    let mut vs = Vec::new();

    for i in 0..n {
        for j in 0..n {
            let Some(hom) = homs.get(i, j) else { continue };
            let id_i = c.identity(&sample[i]);
            let id_j = c.identity(&sample[j]);
            let zero = c.zero_mor(&sample[i], &sample[j]);

            for f in hom {
                if c.compose(f, &id_i) != *f || c.compose(&id_j, f) != *f {
                    vs.push(violation(c, "category/identity", &[f], format!(
                        "composing {} with an identity changes it",
                        c.show_mor(f)
                    )));
                }
                for (k, obj) in sample.iter().enumerate() {
                    let post = c.compose(&c.zero_mor(&sample[j], obj), f);
                    if post != c.zero_mor(&sample[i], obj) {
                        vs.push(violation(c, "category/zero-composition", &[f], format!(
                            "0∘f is not the zero morphism into {}",
                            c.show_obj(obj)
                        )));
                    }
                    let pre = c.compose(f, &c.zero_mor(obj, &sample[i]));
                    if pre != c.zero_mor(obj, &sample[j]) {
                        vs.push(violation(c, "category/zero-composition", &[f], format!(
                            "f∘0 is not the zero morphism from {}",
                            c.show_obj(obj)
                        )));
                    }
                    let _ = k;
                }
                match c.mor_sum(f, &zero) {
                    Some(s) if s == *f => {}
                    _ => vs.push(violation(c, "pcm/zero-unit", &[f],
                        "adding the zero morphism must be defined and neutral".into())),
                }
            }

            for f in hom {
                for g in hom {
                    let fg = c.mor_sum(f, g);
                    let gf = c.mor_sum(g, f);
                    if fg != gf {
                        vs.push(violation(c, "pcm/commutativity", &[f, g],
                            "f+g and g+f disagree".into()));
                    }
                }
            }

            if (hom.len() as u128).pow(3) <= FAMILY_BUDGET {
                for f in hom {
                    for g in hom {
                        let Some(fg) = c.mor_sum(f, g) else {
                            // (f+g)+h is undefined for every h when f+g is;
                            // associativity then constrains nothing here.
                            continue;
                        };
                        for h in hom {
                            let left = c.mor_sum(&fg, h);
                            let right = c.mor_sum(g, h).and_then(|gh| c.mor_sum(f, &gh));
                            if left != right {
                                vs.push(violation(c, "pcm/associativity", &[f, g, h],
                                    "(f+g)+h and f+(g+h) disagree".into()));
                            }
                        }
                    }
                }
            } else {
                report.skip(format!(
                    "pcm/associativity on hom({}, {}): {}^3 triples",
                    c.show_obj(&sample[i]),
                    c.show_obj(&sample[j]),
                    hom.len()
                ));
            }
        }
    }

    // Biadditivity of composition on both sides.
    for i in 0..n {
        for j in 0..n {
            let Some(hom) = homs.get(i, j) else { continue };
            for f in hom {
                for g in hom {
                    let Some(s) = c.mor_sum(f, g) else { continue };
                    for k in 0..n {
                        if let Some(post) = homs.get(j, k) {
                            for h in post {
                                let direct = c.compose(h, &s);
                                let split = c
                                    .mor_sum(&c.compose(h, f), &c.compose(h, g));
                                if split.as_ref() != Some(&direct) {
                                    vs.push(violation(c, "pac/composition-additive-left",
                                        &[h, f, g],
                                        "h∘(f+g) differs from h∘f + h∘g".into()));
                                }
                            }
                        }
                        if let Some(pre) = homs.get(k, i) {
                            for e in pre {
                                let direct = c.compose(&s, e);
                                let split = c
                                    .mor_sum(&c.compose(f, e), &c.compose(g, e));
                                if split.as_ref() != Some(&direct) {
                                    vs.push(violation(c, "pac/composition-additive-right",
                                        &[f, g, e],
                                        "(f+g)∘e differs from f∘e + g∘e".into()));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // Coproduct structure: projection identities, the decomposition of the
    // identity, cotuples, and the two sum axioms.
    for i in 0..n {
        for j in 0..n {
            let cop = c.coproduct(&[sample[i].clone(), sample[j].clone()]);
            for (u, part) in [i, j].into_iter().enumerate() {
                for (v, _) in [i, j].into_iter().enumerate() {
                    let comp = c.compose(&cop.projections[v], &cop.coprojections[u]);
                    let expect = if u == v {
                        c.identity(&sample[part])
                    } else {
                        c.zero_mor(
                            &sample[[i, j][u]],
                            &sample[[i, j][v]],
                        )
                    };
                    if comp != expect {
                        vs.push(violation(c, "pac/projection-coprojection",
                            &[&cop.coprojections[u], &cop.projections[v]],
                            format!("▷_{v}∘κ_{u} is not {}", if u == v { "the identity" } else { "zero" })));
                    }
                }
            }
            let kappa_sum = c
                .mor_sum(
                    &c.compose(&cop.coprojections[0], &cop.projections[0]),
                    &c.compose(&cop.coprojections[1], &cop.projections[1]),
                )
                .filter(|s| *s == c.identity(&cop.object));
            if kappa_sum.is_none() {
                vs.push(Violation::new(
                    "pac/coprojection-sum",
                    vec![c.show_obj(&cop.object)],
                    "κ₁∘▷₁ + κ₂∘▷₂ is not the identity on the coproduct",
                ));
            }

            for (b_idx, b) in sample.iter().enumerate() {
                let (Some(h1), Some(h2)) = (homs.get(i, b_idx), homs.get(j, b_idx))
                else {
                    continue;
                };
                for f1 in h1 {
                    for f2 in h2 {
                        match cotuple(c, &cop, &[f1.clone(), f2.clone()]) {
                            None => vs.push(violation(c, "pac/cotuple-exists", &[f1, f2],
                                "the mediating morphism out of the coproduct is undefined".into())),
                            Some(t) => {
                                if c.compose(&t, &cop.coprojections[0]) != *f1
                                    || c.compose(&t, &cop.coprojections[1]) != *f2
                                {
                                    vs.push(violation(c, "pac/cotuple", &[f1, f2],
                                        "[f₁,f₂]∘κ does not restore the components".into()));
                                }
                                let _ = b;
                            }
                        }
                    }
                }
            }

            // Compatible sum axiom: every morphism into B+B shows its two
            // component legs are summable.
            match c.morphisms(&sample[i], &cop.object) {
                Err(e) => report.skip(format!(
                    "pac/compatible-sum from {} into {}: {}",
                    c.show_obj(&sample[i]),
                    c.show_obj(&cop.object),
                    e
                )),
                Ok(into_cop) if i == j => {
                    for h in &into_cop {
                        let f = c.compose(&cop.projections[0], h);
                        let g = c.compose(&cop.projections[1], h);
                        if c.mor_sum(&f, &g).is_none() {
                            vs.push(violation(c, "pac/compatible-sum", &[h],
                                "a compatible pair of component legs is not summable".into()));
                        }
                    }
                }
                Ok(_) => {}
            }

            // Untying: summable pairs stay summable after separating the
            // summands into distinct coproduct slots.
            if i == j {
                if let Some(hom) = homs.get(i, j) {
                    for f in hom {
                        for g in hom {
                            if c.mor_sum(f, g).is_some() {
                                let kf = c.compose(&cop.coprojections[0], f);
                                let kg = c.compose(&cop.coprojections[1], g);
                                if c.mor_sum(&kf, &kg).is_none() {
                                    vs.push(violation(c, "pac/untying", &[f, g],
                                        "κ₁∘f and κ₂∘g are not summable".into()));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    report.violations = vs;
    report
}

/// A predicate algebra extracted from a homset. `predicates[i]` is the
/// morphism backing carrier element `i` of `algebra`.
pub struct PredicateAlgebra<M> {
    pub algebra: FiniteEffectAlgebra,
    pub predicates: Vec<M>,
}

/// The predicates of `a` assembled into a finite effect algebra, together
/// with the morphisms backing each element. `Ok(None)` means the sampled
/// homset was not closed under the needed sums, which only happens on
/// instances with sampled homsets.
pub fn predicate_algebra<C: Effectus>(
    c: &C,
    a: &C::Obj,
) -> Result<Option<PredicateAlgebra<C::Mor>>, crate::modules::HomsetTooLarge> {
    let preds = predicates(c, a)?;
    let n = preds.len();
    let unit = c.unit();
    let position = |m: &C::Mor| preds.iter().position(|p| p == m);

    let Some(zero) = position(&c.zero_mor(a, &unit)) else {
        return Ok(None);
    };
    let Some(top) = position(&c.truth(a)) else {
        return Ok(None);
    };
    let mut sum = vec![None; n * n];
    for (i, p) in preds.iter().enumerate() {
        for (j, q) in preds.iter().enumerate() {
            if let Some(s) = c.mor_sum(p, q) {
                match position(&s) {
                    Some(k) => sum[i * n + j] = Some(k),
                    None => {
                        assert!(
                            !c.homsets_complete(),
                            "a sum of predicates escaped a complete homset"
                        );
                        return Ok(None);
                    }
                }
            }
        }
    }
    let labels: Vec<String> = preds.iter().map(|p| c.show_mor(p)).collect();
    let carrier = FiniteCarrier::with_labels(labels)
        .unwrap_or_else(|_| FiniteCarrier::new(n).expect("predicate set is nonempty"));
    let pcm = FinitePcm::new(carrier, zero, sum).expect("positions are in range");
    let algebra = FiniteEffectAlgebra::new(pcm, top).expect("top position is in range");
    Ok(Some(PredicateAlgebra { algebra, predicates: preds }))
}

/// The three defining conditions: predicates form effect algebras, truth
/// reflects zero, and truth reflects orthogonality. Also checks that total
/// morphisms are closed under composition.
pub fn check_effectus_axioms<C: Effectus>(c: &C, sample: &[C::Obj]) -> CheckReport {
    let mut report = CheckReport::new(format!("{}: unit object axioms", c.name()), vec![]);
    let mut vs = Vec::new();
    let unit = c.unit();

    for a in sample {
        match predicate_algebra(c, a) {
            Err(e) => report.skip(format!("Pred({}): {}", c.show_obj(a), e)),
            Ok(None) => report.skip(format!(
                "Pred({}): sampled predicates are not sum-closed",
                c.show_obj(a)
            )),
            Ok(Some(pa)) => {
                for v in check_effect_algebra_axioms(&pa.algebra) {
                    vs.push(Violation::new(
                        "effectus/predicate-algebra",
                        v.witnesses,
                        format!("in Pred({}): {} ({})", c.show_obj(a), v.detail, v.law),
                    ));
                }
            }
        }
    }

    let homs = Homsets::new(c, sample, &mut report);
    for (i, a) in sample.iter().enumerate() {
        for (j, b) in sample.iter().enumerate() {
            let Some(hom) = homs.get(i, j) else { continue };
            let truth_b = c.truth(b);
            let zero_pred = c.zero_mor(a, &unit);
            let zero_mor = c.zero_mor(a, b);
            for f in hom {
                if c.compose(&truth_b, f) == zero_pred && *f != zero_mor {
                    vs.push(violation(c, "effectus/zero-reflection", &[f],
                        "1∘f vanishes but f is not the zero morphism".into()));
                }
            }
            for f in hom {
                for g in hom {
                    let tf = c.compose(&truth_b, f);
                    let tg = c.compose(&truth_b, g);
                    if c.mor_sum(&tf, &tg).is_some() && c.mor_sum(f, g).is_none() {
                        vs.push(violation(c, "effectus/orthogonality-reflection", &[f, g],
                            "1∘f and 1∘g are summable but f and g are not".into()));
                    }
                }
            }

            for k in 0..sample.len() {
                let Some(post) = homs.get(j, k) else { continue };
                for f in hom.iter().filter(|f| is_total(c, f)) {
                    for g in post.iter().filter(|g| is_total(c, g)) {
                        if !is_total(c, &c.compose(g, f)) {
                            vs.push(violation(c, "effectus/total-composition", &[g, f],
                                "a composite of total morphisms lost weight".into()));
                        }
                    }
                }
            }
        }
    }

    report.violations = vs;
    report
}

/// The copower conditions: joint monicity of the partial projections,
/// truth as the cotuple of truths, downward closure of compatibility, and
/// uniqueness of the orthosupplement via the codiagonal.
pub fn check_sigma_characterization<C: Effectus>(
    c: &C,
    sample: &[C::Obj],
    j_max: usize,
) -> CheckReport {
    let mut report = CheckReport::new(
        format!("{}: copower characterization at families of size <= {j_max}", c.name()),
        vec![],
    );
    let mut vs = Vec::new();

    for a in sample {
        for j in 2..=j_max {
            let parts = vec![a.clone(); j];
            let cop = c.coproduct(&parts);

            let truths: Vec<C::Mor> = parts.iter().map(|p| c.truth(p)).collect();
            match cotuple(c, &cop, &truths) {
                Some(t) if t == c.truth(&cop.object) => {}
                _ => vs.push(Violation::new(
                    "sigma/truth-cotuple",
                    vec![c.show_obj(&cop.object)],
                    format!("1 on the {j}-fold copower of {} is not [1,…,1]", c.show_obj(a)),
                )),
            }

            for probe in sample {
                match c.morphisms(probe, &cop.object) {
                    Err(e) => report.skip(format!(
                        "sigma/joint-monicity from {} into the {j}-fold copower of {}: {}",
                        c.show_obj(probe),
                        c.show_obj(a),
                        e
                    )),
                    Ok(into_cop) => {
                        let decomposed: Vec<Vec<C::Mor>> = into_cop
                            .iter()
                            .map(|f| decompose_morphism(c, &cop, f))
                            .collect();
                        for x in 0..into_cop.len() {
                            for y in x + 1..into_cop.len() {
                                if decomposed[x] == decomposed[y] {
                                    vs.push(violation(c, "sigma/joint-monicity",
                                        &[&into_cop[x], &into_cop[y]],
                                        "distinct morphisms agree under every partial projection".into()));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // Compatibility restricts to subfamilies: dropping a member of a
    // summable family keeps it summable.
    for a in sample {
        for b in sample {
            let hom = match c.morphisms(a, b) {
                Ok(h) => h,
                Err(e) => {
                    report.skip(format!(
                        "sigma/compatible-restriction on hom({}, {}): {}",
                        c.show_obj(a),
                        c.show_obj(b),
                        e
                    ));
                    continue;
                }
            };
            for j in 2..=j_max {
                if (hom.len() as u128).pow(j as u32) > FAMILY_BUDGET {
                    report.skip(format!(
                        "sigma/compatible-restriction: {}^{} families from {} to {}",
                        hom.len(),
                        j,
                        c.show_obj(a),
                        c.show_obj(b)
                    ));
                    continue;
                }
                let cop = c.coproduct(&vec![b.clone(); j]);
                let sub_cop = if j > 2 {
                    Some(c.coproduct(&vec![b.clone(); j - 1]))
                } else {
                    None
                };
                for family in (0..j).map(|_| hom.iter()).multi_cartesian_product() {
                    let owned: Vec<C::Mor> = family.into_iter().cloned().collect();
                    if recompose(c, &cop, &owned).is_none() {
                        continue;
                    }
                    for drop in 0..j {
                        let rest: Vec<C::Mor> = owned
                            .iter()
                            .enumerate()
                            .filter(|(k, _)| *k != drop)
                            .map(|(_, m)| m.clone())
                            .collect();
                        let still = match (&sub_cop, rest.len()) {
                            (_, 1) => true,
                            (Some(sc), _) => recompose(c, sc, &rest).is_some(),
                            (None, _) => unreachable!("j = 2 leaves singletons"),
                        };
                        if !still {
                            let refs: Vec<&C::Mor> = owned.iter().collect();
                            vs.push(violation(c, "sigma/compatible-restriction", &refs,
                                format!("dropping member {drop} breaks compatibility")));
                        }
                    }
                }
            }
        }
    }

    // Unique orthosupplement through the codiagonal.
    let unit = c.unit();
    let two_units = c.coproduct(&[unit.clone(), unit.clone()]);
    let nabla = codiagonal(c, &two_units, &unit);
    for a in sample {
        let preds = match predicates(c, a) {
            Ok(p) => p,
            Err(e) => {
                report.skip(format!("sigma/unique-orthosupplement on {}: {}", c.show_obj(a), e));
                continue;
            }
        };
        for p in &preds {
            let complements: Vec<&C::Mor> = preds
                .iter()
                .filter(|q| {
                    let pairing = c.mor_sum(
                        &c.compose(&two_units.coprojections[0], p),
                        &c.compose(&two_units.coprojections[1], q),
                    );
                    match pairing {
                        None => false,
                        Some(h) => c.compose(&nabla, &h) == c.truth(a),
                    }
                })
                .collect();
            if complements.len() != 1 {
                vs.push(violation(c, "sigma/unique-orthosupplement", &[p], format!(
                    "{} complements found instead of exactly one",
                    complements.len()
                )));
            }
        }
    }

    report.violations = vs;
    report
}

/// Morphisms into a coproduct correspond exactly to families of components
/// whose truths are summable; both round trips and the count are checked.
pub fn check_decomposition_bijection<C: Effectus>(
    c: &C,
    a: &C::Obj,
    parts: &[C::Obj],
) -> CheckReport {
    let mut report = CheckReport::new(
        format!(
            "{}: decomposition of morphisms {} -> coproduct of {} parts",
            c.name(),
            c.show_obj(a),
            parts.len()
        ),
        vec![],
    );
    let mut vs = Vec::new();
    let cop = c.coproduct(parts);

    let into_cop = match c.morphisms(a, &cop.object) {
        Ok(h) => h,
        Err(e) => {
            report.skip(format!("hom into the coproduct: {e}"));
            return report;
        }
    };
    for f in &into_cop {
        let components = decompose_morphism(c, &cop, f);
        match recompose(c, &cop, &components) {
            Some(g) if g == *f => {}
            _ => vs.push(violation(c, "decomposition/retract", &[f],
                "recomposing the partial projections does not restore the morphism".into())),
        }
    }

    let mut component_sets = Vec::new();
    let mut too_large = false;
    for p in parts {
        match c.morphisms(a, p) {
            Ok(h) => component_sets.push(h),
            Err(e) => {
                report.skip(format!("hom({}, {}): {}", c.show_obj(a), c.show_obj(p), e));
                too_large = true;
            }
        }
    }
    if too_large {
        report.violations = vs;
        return report;
    }
    let family_count: u128 = component_sets
        .iter()
        .map(|h| h.len() as u128)
        .product();
    if family_count > FAMILY_BUDGET {
        report.skip(format!("{family_count} candidate families"));
        report.violations = vs;
        return report;
    }

    let unit_truth = parts.iter().map(|p| c.truth(p)).collect::<Vec<_>>();
    let mut defined = 0usize;
    for family in component_sets
        .iter()
        .map(|h| h.iter())
        .multi_cartesian_product()
    {
        let owned: Vec<C::Mor> = family.into_iter().cloned().collect();
        let glued = recompose(c, &cop, &owned);

        // The summable families are exactly those with summable truths.
        let mut truth_sum: Option<C::Mor> = Some(c.zero_mor(a, &c.unit()));
        for (g, t) in owned.iter().zip(&unit_truth) {
            truth_sum = truth_sum.and_then(|acc| c.mor_sum(&acc, &c.compose(t, g)));
        }
        if glued.is_some() != truth_sum.is_some() {
            let refs: Vec<&C::Mor> = owned.iter().collect();
            vs.push(violation(c, "decomposition/truth-summable", &refs,
                "family summability disagrees with truth summability".into()));
        }

        if let Some(g) = glued {
            defined += 1;
            if decompose_morphism(c, &cop, &g) != owned {
                let refs: Vec<&C::Mor> = owned.iter().collect();
                vs.push(violation(c, "decomposition/section", &refs,
                    "decomposing the glued morphism does not restore the family".into()));
            }
        }
    }
    if c.homsets_complete() && defined != into_cop.len() {
        vs.push(Violation::new(
            "decomposition/count",
            vec![c.show_obj(a)],
            format!(
                "{} summable families but {} morphisms into the coproduct",
                defined,
                into_cop.len()
            ),
        ));
    }

    report.violations = vs;
    report
}

/// The scalars of the instance: the homset of the unit object under
/// morphism sum and composition. `Ok(None)` on instances with sampled
/// homsets, where the derivation would not be faithful.
pub fn derived_scalar_monoid<C: Effectus>(
    c: &C,
) -> Result<Option<FiniteEffectMonoid>, crate::modules::HomsetTooLarge> {
    if !c.homsets_complete() {
        return Ok(None);
    }
    let unit = c.unit();
    let scalars = c.morphisms(&unit, &unit)?;
    let n = scalars.len();
    let position = |m: &C::Mor| {
        scalars
            .iter()
            .position(|s| s == m)
            .expect("complete homsets are closed under sum and composition")
    };

    let zero = position(&c.zero_mor(&unit, &unit));
    let top = position(&c.truth(&unit));
    let mut sum = vec![None; n * n];
    let mut product = vec![0; n * n];
    for (i, s) in scalars.iter().enumerate() {
        for (j, t) in scalars.iter().enumerate() {
            sum[i * n + j] = c.mor_sum(s, t).map(|u| position(&u));
            product[i * n + j] = position(&c.compose(s, t));
        }
    }
    let labels: Vec<String> = scalars.iter().map(|s| c.show_mor(s)).collect();
    let carrier = FiniteCarrier::with_labels(labels)
        .unwrap_or_else(|_| FiniteCarrier::new(n).expect("scalars are nonempty"));
    let pcm = FinitePcm::new(carrier, zero, sum).expect("positions are in range");
    let algebra = FiniteEffectAlgebra::new(pcm, top).expect("top position is in range");
    let monoid = FiniteEffectMonoid::new(algebra, product).expect("tables are square");
    Ok(Some(monoid))
}

/// Effect monoid isomorphism by exhaustive permutation search; only
/// sensible for the small scalar monoids that appear here.
pub fn effect_monoids_isomorphic(a: &FiniteEffectMonoid, b: &FiniteEffectMonoid) -> bool {
    if a.size() != b.size() {
        return false;
    }
    let n = a.size();
    'perm: for perm in (0..n).permutations(n) {
        if perm[a.zero()] != b.zero() || perm[a.one()] != b.one() {
            continue;
        }
        for x in 0..n {
            for y in 0..n {
                let lhs = a.sum(x, y).map(|s| perm[s]);
                let rhs = b.sum(perm[x], perm[y]);
                if lhs != rhs {
                    continue 'perm;
                }
                if perm[a.product(x, y)] != b.product(perm[x], perm[y]) {
                    continue 'perm;
                }
            }
        }
        return true;
    }
    false
}

/// Derives the scalar monoid from the unit homset, validates it, and
/// compares it with the instance's declared scalar system.
pub fn check_scalar_monoid<C: Effectus>(c: &C) -> CheckReport {
    let mut report = CheckReport::new(format!("{}: scalars", c.name()), vec![]);
    let derived = match derived_scalar_monoid(c) {
        Err(e) => {
            report.skip(format!("hom(I, I): {e}"));
            return report;
        }
        Ok(None) => {
            report.skip("homsets are sampled; the unit homset does not determine the scalars");
            return report;
        }
        Ok(Some(m)) => m,
    };
    let mut vs = check_effect_monoid_axioms(&derived);
    match c.scalar_system() {
        Scalars::Finite(declared) => {
            if !effect_monoids_isomorphic(&derived, &declared) {
                vs.push(Violation::new(
                    "scalars/matches-declared",
                    vec![],
                    format!(
                        "derived scalar monoid of size {} is not isomorphic to the declared one of size {}",
                        derived.size(),
                        declared.size()
                    ),
                ));
            }
        }
        Scalars::Rational => {
            vs.push(Violation::new(
                "scalars/matches-declared",
                vec![],
                "instance declares rational scalars but its homsets are complete",
            ));
        }
    }
    report.violations = vs;
    report
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::super::emod_op::EModOp;
    use super::super::pfn::{CorruptedPfn, Pfn};
    use super::super::wmod::WMod;
    use super::*;
    use crate::monoid::FiniteEffectMonoid;

    fn two() -> Arc<FiniteEffectMonoid> {
        Arc::new(FiniteEffectMonoid::two())
    }

    fn b4() -> Arc<FiniteEffectMonoid> {
        Arc::new(FiniteEffectMonoid::boolean_meet(2))
    }

    #[test]
    fn pfn_satisfies_the_axioms_on_small_sets() {
        let c = Pfn::new();
        let sample = vec![0, 1, 2];
        let pac = check_category_and_pac_axioms(&c, &sample);
        assert!(pac.complete(), "{:?} {:?}", pac.violations, pac.skipped);
        let eff = check_effectus_axioms(&c, &sample);
        assert!(eff.complete(), "{:?} {:?}", eff.violations, eff.skipped);
    }

    #[test]
    fn corrupted_composition_is_flagged() {
        let c = CorruptedPfn(Pfn::new());
        let report = check_category_and_pac_axioms(&c, &[1, 2]);
        assert!(!report.passed());
        assert!(report
            .violations
            .iter()
            .any(|v| v.law == "category/zero-composition" || v.law == "category/identity"));
    }

    #[test]
    fn pfn_sigma_conditions_hold() {
        let c = Pfn::new();
        let report = check_sigma_characterization(&c, &[1, 2], 3);
        assert!(report.complete(), "{:?} {:?}", report.violations, report.skipped);
    }

    #[test]
    fn pfn_decomposition_bijection() {
        let c = Pfn::new();
        let report = check_decomposition_bijection(&c, &2, &[1, 1]);
        assert!(report.complete(), "{:?} {:?}", report.violations, report.skipped);
        let wider = check_decomposition_bijection(&c, &2, &[1, 2, 1]);
        assert!(wider.complete(), "{:?} {:?}", wider.violations, wider.skipped);
    }

    #[test]
    fn scalar_monoids_match_the_declared_systems() {
        let pfn = check_scalar_monoid(&Pfn::new());
        assert!(pfn.complete(), "{:?}", pfn.violations);
        let emod = check_scalar_monoid(&EModOp::new(b4()));
        assert!(emod.complete(), "{:?}", emod.violations);
        let wmod = check_scalar_monoid(&WMod::finite(two()));
        assert!(wmod.complete(), "{:?}", wmod.violations);
        let sampled = check_scalar_monoid(&WMod::rational());
        assert!(sampled.passed() && !sampled.skipped.is_empty());
    }

    #[test]
    fn emod_op_axioms_hold_over_the_booleans() {
        let c = EModOp::new(two());
        let sample = c.sample_objects();
        let pac = check_category_and_pac_axioms(&c, &sample);
        assert!(pac.passed(), "{:?}", pac.violations);
        let eff = check_effectus_axioms(&c, &sample);
        assert!(eff.passed(), "{:?}", eff.violations);
    }

    #[test]
    fn wmod_axioms_hold_over_both_backends() {
        let fin = WMod::finite(two());
        let sample = fin.sample_objects();
        let pac = check_category_and_pac_axioms(&fin, &sample);
        assert!(pac.complete(), "{:?} {:?}", pac.violations, pac.skipped);
        assert!(check_effectus_axioms(&fin, &sample).passed());

        let rat = WMod::rational();
        let sample = rat.sample_objects();
        let pac = check_category_and_pac_axioms(&rat, &sample);
        assert!(pac.passed(), "{:?}", pac.violations);
        let eff = check_effectus_axioms(&rat, &sample);
        assert!(eff.passed(), "{:?}", eff.violations);
    }

    #[test]
    fn monoid_isomorphism_distinguishes_structures() {
        let b4 = FiniteEffectMonoid::boolean_meet(2);
        assert!(effect_monoids_isomorphic(&b4, &b4));
        assert!(!effect_monoids_isomorphic(&b4, &FiniteEffectMonoid::two()));
    }
}
