//! Effect monoids and the scalar systems built from them.
//!
//! An effect monoid is an effect algebra with a total, associative, unital
//! product that is additive in each argument. The [`ScalarSystem`] trait
//! captures the slice of that structure the module and category layers
//! consume: zero, one, partial sum, total product, equality, and division
//! when available.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::{
    check_effect_algebra_axioms, leq, orthosupplement, FiniteEffectAlgebra, StructuralError,
};
use crate::report::Violation;

/// Effect algebra plus a total product table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteEffectMonoid {
    algebra: FiniteEffectAlgebra,
    /// Row-major `size * size` table; entry `a*size + b` holds `a * b`.
    product: Vec<usize>,
}

impl FiniteEffectMonoid {
    pub fn new(
        algebra: FiniteEffectAlgebra,
        product: Vec<usize>,
    ) -> Result<Self, StructuralError> {
        let n = algebra.size();
        if product.len() != n * n {
            return Err(StructuralError::TableSize {
                got: product.len(),
                want: n * n,
            });
        }
        if let Some(&bad) = product.iter().find(|&&x| x >= n) {
            return Err(StructuralError::IndexOutOfRange { index: bad, size: n });
        }
        Ok(FiniteEffectMonoid { algebra, product })
    }

    pub fn algebra(&self) -> &FiniteEffectAlgebra {
        &self.algebra
    }

    pub fn size(&self) -> usize {
        self.algebra.size()
    }

    pub fn zero(&self) -> usize {
        self.algebra.zero()
    }

    pub fn one(&self) -> usize {
        self.algebra.top()
    }

    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        self.algebra.sum(a, b)
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        self.product[a * self.size() + b]
    }

    pub fn product_table(&self) -> &[usize] {
        &self.product
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        self.algebra.elements()
    }

    pub fn label(&self, i: usize) -> String {
        self.algebra.label(i)
    }

    /// The one-element monoid {0} with 0 = 1.
    pub fn trivial() -> Self {
        FiniteEffectMonoid::new(FiniteEffectAlgebra::trivial(), vec![0])
            .expect("trivial product table is well formed")
    }

    /// The two-element monoid {0, 1} under multiplication.
    pub fn two() -> Self {
        let product = vec![0, 0, 0, 1];
        FiniteEffectMonoid::new(FiniteEffectAlgebra::two(), product)
            .expect("two-element product table is well formed")
    }

    /// Powerset of `k` atoms with intersection as the product.
    pub fn boolean_meet(k: u32) -> Self {
        let algebra = FiniteEffectAlgebra::powerset(k);
        let n = algebra.size();
        let mut product = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                product[a * n + b] = a & b;
            }
        }
        FiniteEffectMonoid::new(algebra, product).expect("meet table is well formed")
    }

    /// Same carrier with the product arguments swapped.
    pub fn opposite(&self) -> Self {
        let n = self.size();
        let mut product = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                product[a * n + b] = self.product(b, a);
            }
        }
        FiniteEffectMonoid {
            algebra: self.algebra.clone(),
            product,
        }
    }
}

fn violation(law: &str, witnesses: Vec<String>, detail: String) -> Violation {
    Violation::new(law, witnesses, detail)
}

/// Checks the algebra axioms plus unit, associativity, and biadditivity of
/// the product.
pub fn check_effect_monoid_axioms(m: &FiniteEffectMonoid) -> Vec<Violation> {
    let mut out = check_effect_algebra_axioms(m.algebra());
    let n = m.size();
    let one = m.one();
    for a in 0..n {
        if m.product(one, a) != a || m.product(a, one) != a {
            out.push(violation(
                "monoid/unit",
                vec![m.label(a)],
                format!(
                    "1 * {} = {} and {} * 1 = {}, both should be {}",
                    m.label(a),
                    m.label(m.product(one, a)),
                    m.label(a),
                    m.label(m.product(a, one)),
                    m.label(a),
                ),
            ));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let l = m.product(m.product(a, b), c);
                let r = m.product(a, m.product(b, c));
                if l != r {
                    out.push(violation(
                        "monoid/associativity",
                        vec![m.label(a), m.label(b), m.label(c)],
                        format!(
                            "({} * {}) * {} = {} but {} * ({} * {}) = {}",
                            m.label(a),
                            m.label(b),
                            m.label(c),
                            m.label(l),
                            m.label(a),
                            m.label(b),
                            m.label(c),
                            m.label(r),
                        ),
                    ));
                }
            }
        }
    }
    // Additivity in each argument: products distribute over every defined
    // sum, and the distributed sums must themselves be defined. Zero
    // preservation is additivity applied to the empty sum.
    let z = m.zero();
    for a in 0..n {
        if m.product(a, z) != z || m.product(z, a) != z {
            out.push(violation(
                "monoid/zero",
                vec![m.label(a)],
                format!("products with 0 must be 0, got {} * 0 = {}", m.label(a), m.label(m.product(a, z))),
            ));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if let Some(ab) = m.sum(a, b) {
                for c in 0..n {
                    let left = m.sum(m.product(c, a), m.product(c, b));
                    if left != Some(m.product(c, ab)) {
                        out.push(violation(
                            "monoid/left-distributivity",
                            vec![m.label(c), m.label(a), m.label(b)],
                            format!(
                                "{} * ({} + {}) = {} but {} * {} + {} * {} = {:?}",
                                m.label(c),
                                m.label(a),
                                m.label(b),
                                m.label(m.product(c, ab)),
                                m.label(c),
                                m.label(a),
                                m.label(c),
                                m.label(b),
                                left.map(|x| m.label(x)),
                            ),
                        ));
                    }
                    let right = m.sum(m.product(a, c), m.product(b, c));
                    if right != Some(m.product(ab, c)) {
                        out.push(violation(
                            "monoid/right-distributivity",
                            vec![m.label(a), m.label(b), m.label(c)],
                            format!(
                                "({} + {}) * {} = {} but {} * {} + {} * {} = {:?}",
                                m.label(a),
                                m.label(b),
                                m.label(c),
                                m.label(m.product(ab, c)),
                                m.label(a),
                                m.label(c),
                                m.label(b),
                                m.label(c),
                                right.map(|x| m.label(x)),
                            ),
                        ));
                    }
                }
            }
        }
    }
    out
}

pub fn is_commutative(m: &FiniteEffectMonoid) -> bool {
    let n = m.size();
    (0..n).all(|a| (0..n).all(|b| m.product(a, b) == m.product(b, a)))
}

/// A pair of nonzero elements multiplying to zero, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZeroDivisorReport {
    pub witnesses: Vec<(String, String)>,
}

impl ZeroDivisorReport {
    pub fn is_free(&self) -> bool {
        self.witnesses.is_empty()
    }
}

pub fn zero_divisors(m: &FiniteEffectMonoid) -> ZeroDivisorReport {
    let z = m.zero();
    let mut witnesses = Vec::new();
    for a in m.elements() {
        for b in m.elements() {
            if a != z && b != z && m.product(a, b) == z {
                witnesses.push((m.label(a), m.label(b)));
            }
        }
    }
    ZeroDivisorReport { witnesses }
}

/// Outcome of looking for `u` with `u * t = s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Division<S> {
    /// Precondition failed: `s <= t` and `t != 0` is required.
    NotApplicable,
    Quotient(S),
    NoWitness,
    /// Two distinct witnesses, reported separately from absence.
    Ambiguous(S, S),
}

/// Searches for the unique `u` with `u * t = s`, given `s <= t` and `t != 0`.
pub fn divide(m: &FiniteEffectMonoid, s: usize, t: usize) -> Division<usize> {
    if t == m.zero() || !leq(m.algebra(), s, t) {
        return Division::NotApplicable;
    }
    let mut found: Vec<usize> = Vec::new();
    for u in m.elements() {
        if m.product(u, t) == s {
            found.push(u);
        }
    }
    match found.as_slice() {
        [] => Division::NoWitness,
        [u] => Division::Quotient(*u),
        [u, v, ..] => Division::Ambiguous(*u, *v),
    }
}

/// True when every admissible pair has a unique quotient.
pub fn has_division(m: &FiniteEffectMonoid) -> bool {
    m.elements().all(|s| {
        m.elements().all(|t| {
            if t == m.zero() || !leq(m.algebra(), s, t) {
                true
            } else {
                matches!(divide(m, s, t), Division::Quotient(_))
            }
        })
    })
}

/// Stabilized value of `t = sum over n of s' * s^n`, where `s'` is the
/// orthosupplement of `s`.
///
/// The partial sums telescope: the sum of the first `n + 1` terms is the
/// orthosupplement of `s^(n+1)`, so every partial sum is defined and the
/// iteration stabilizes within `|m|` steps, when the powers of `s` do. A
/// partial sum failing to be defined is an internal inconsistency on a
/// valid monoid, and panics.
pub fn geometric_normalizer(m: &FiniteEffectMonoid, s: usize) -> usize {
    let s_ortho = orthosupplement(m.algebra(), s);
    let mut power = m.one(); // s^0
    let mut total = m.zero();
    // Once a term vanishes, all later terms vanish too, since
    // s' * s^(n+1) = (s' * s^n) * s. The powers of s form a decreasing
    // chain, so this happens within |m| steps.
    for _ in 0..=m.size() {
        let term = m.product(s_ortho, power);
        if term == m.zero() {
            break;
        }
        total = m
            .sum(total, term)
            .expect("geometric partial sums are always defined on a valid effect monoid");
        power = m.product(power, s);
    }
    total
}

/// Abstract scalar interface consumed by modules and categorical checkers.
pub trait ScalarSystem {
    type Scalar: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Scalar;
    fn one(&self) -> Self::Scalar;
    /// Partial sum; `None` means undefined.
    fn add(&self, a: &Self::Scalar, b: &Self::Scalar) -> Option<Self::Scalar>;
    /// Total product.
    fn mul(&self, a: &Self::Scalar, b: &Self::Scalar) -> Self::Scalar;
    /// Division outcome for `u * t = s`.
    fn divide(&self, s: &Self::Scalar, t: &Self::Scalar) -> Division<Self::Scalar>;
    /// All scalars, when the carrier is finite.
    fn enumerate(&self) -> Option<Vec<Self::Scalar>>;

    /// A family is summable when its left-to-right fold is defined.
    fn sum_family(&self, fam: &[Self::Scalar]) -> Option<Self::Scalar> {
        let mut acc = self.zero();
        for s in fam {
            acc = self.add(&acc, s)?;
        }
        Some(acc)
    }

    fn is_summable(&self, fam: &[Self::Scalar]) -> bool {
        self.sum_family(fam).is_some()
    }

    /// The unique `u` with `r + u = t`, when one exists. The default scans
    /// the enumeration, so infinite carriers must override.
    fn partial_complement(&self, r: &Self::Scalar, t: &Self::Scalar) -> Option<Self::Scalar> {
        let all = self.enumerate()?;
        all.into_iter()
            .find(|u| self.add(r, u).as_ref() == Some(t))
    }
}

impl ScalarSystem for FiniteEffectMonoid {
    type Scalar = usize;

    fn zero(&self) -> usize {
        FiniteEffectMonoid::zero(self)
    }

    fn one(&self) -> usize {
        self.one()
    }

    fn add(&self, a: &usize, b: &usize) -> Option<usize> {
        self.sum(*a, *b)
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.product(*a, *b)
    }

    fn divide(&self, s: &usize, t: &usize) -> Division<usize> {
        divide(self, *s, *t)
    }

    fn enumerate(&self) -> Option<Vec<usize>> {
        Some(self.elements().collect())
    }
}

/// The rational unit interval: sums defined when they stay at most 1,
/// ordinary multiplication, exact division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RationalUnitInterval;

impl RationalUnitInterval {
    pub fn contains(&self, x: &BigRational) -> bool {
        !x.is_negative() && *x <= BigRational::one()
    }
}

impl ScalarSystem for RationalUnitInterval {
    type Scalar = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        let s = a + b;
        if s <= BigRational::one() {
            Some(s)
        } else {
            None
        }
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn divide(&self, s: &BigRational, t: &BigRational) -> Division<BigRational> {
        if t.is_zero() || s > t {
            return Division::NotApplicable;
        }
        Division::Quotient(s / t)
    }

    fn enumerate(&self) -> Option<Vec<BigRational>> {
        None
    }

    fn partial_complement(&self, r: &BigRational, t: &BigRational) -> Option<BigRational> {
        let u = t - r;
        if u.is_negative() {
            None
        } else {
            Some(u)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(
            num_bigint::BigInt::from_i64(n).unwrap(),
            num_bigint::BigInt::from_i64(d).unwrap(),
        )
    }

    #[test]
    fn fixtures_are_valid_monoids() {
        for m in [
            FiniteEffectMonoid::trivial(),
            FiniteEffectMonoid::two(),
            FiniteEffectMonoid::boolean_meet(2),
            FiniteEffectMonoid::boolean_meet(3),
        ] {
            let vs = check_effect_monoid_axioms(&m);
            assert!(vs.is_empty(), "{vs:?}");
            assert!(is_commutative(&m));
        }
    }

    #[test]
    fn three_chain_admits_no_monoid_structure() {
        // The only free product entry is a * a; all three candidate values
        // fail the axioms.
        let algebra = FiniteEffectAlgebra::three_chain();
        let mut survivors = 0;
        for aa in 0..3usize {
            // Unit row and column plus zero row and column are forced.
            let product = vec![0, 0, 0, 0, aa, 1, 0, 1, 2];
            let m = FiniteEffectMonoid::new(algebra.clone(), product).unwrap();
            if check_effect_monoid_axioms(&m).is_empty() {
                survivors += 1;
            }
        }
        assert_eq!(survivors, 0);
    }

    #[test]
    fn opposite_of_commutative_monoid_is_itself() {
        let m = FiniteEffectMonoid::boolean_meet(2);
        assert_eq!(m.opposite(), m);
    }

    #[test]
    fn zero_divisors_in_boolean_meet() {
        let m = FiniteEffectMonoid::boolean_meet(2);
        let report = zero_divisors(&m);
        assert!(!report.is_free());
        // The two atoms annihilate each other, in both orders.
        assert!(report
            .witnesses
            .contains(&("{1}".to_string(), "{2}".to_string())));
        assert!(zero_divisors(&FiniteEffectMonoid::two()).is_free());
        assert!(zero_divisors(&FiniteEffectMonoid::trivial()).is_free());
    }

    #[test]
    fn division_in_boolean_meet_returns_s_when_it_exists() {
        let m = FiniteEffectMonoid::boolean_meet(2);
        // s <= t in the powerset order means s is a subset of t, and then
        // s * t = s, so s itself is a witness.
        for s in m.elements() {
            for t in m.elements() {
                match divide(&m, s, t) {
                    Division::Quotient(u) => assert_eq!(m.product(u, t), s),
                    Division::Ambiguous(u, v) => {
                        assert_ne!(u, v);
                        assert_eq!(m.product(u, t), s);
                        assert_eq!(m.product(v, t), s);
                    }
                    Division::NoWitness => panic!("meet monoid always has a witness"),
                    Division::NotApplicable => {
                        assert!(t == m.zero() || !leq(m.algebra(), s, t));
                    }
                }
            }
        }
        // Ambiguity occurs at s = 0, t = {1}: both 0 and {2} multiply
        // with {1} to 0.
        assert!(matches!(divide(&m, 0, 1), Division::Ambiguous(_, _)));
        assert!(!has_division(&m));
        assert!(has_division(&FiniteEffectMonoid::two()));
        assert!(has_division(&FiniteEffectMonoid::trivial()));
    }

    #[test]
    fn geometric_normalizer_on_fixtures() {
        let two = FiniteEffectMonoid::two();
        assert_eq!(geometric_normalizer(&two, 0), 1);
        // s = 1 has orthosupplement 0, every term vanishes.
        assert_eq!(geometric_normalizer(&two, 1), 0);
        let b4 = FiniteEffectMonoid::boolean_meet(2);
        // s = {1}: terms are {2} * {1}^n, so {2} then zeros.
        assert_eq!(geometric_normalizer(&b4, 1), 2);
        assert_eq!(geometric_normalizer(&b4, 0), b4.one());
        assert_eq!(geometric_normalizer(&b4, b4.one()), 0);
    }

    #[test]
    fn geometric_normalizer_fixed_point() {
        // t = s' + t * s for every s, on every valid fixture monoid.
        for m in [
            FiniteEffectMonoid::two(),
            FiniteEffectMonoid::boolean_meet(2),
            FiniteEffectMonoid::boolean_meet(3),
        ] {
            for s in m.elements() {
                let t = geometric_normalizer(&m, s);
                let s_ortho = orthosupplement(m.algebra(), s);
                let rhs = m.sum(s_ortho, m.product(t, s));
                assert_eq!(rhs, Some(t), "s = {}", m.label(s));
            }
        }
    }

    #[test]
    fn rational_unit_interval_laws() {
        let q = RationalUnitInterval;
        assert_eq!(q.add(&rat(1, 2), &rat(1, 3)), Some(rat(5, 6)));
        assert_eq!(q.add(&rat(2, 3), &rat(1, 2)), None);
        assert_eq!(q.mul(&rat(1, 2), &rat(2, 3)), rat(1, 3));
        assert_eq!(
            q.divide(&rat(1, 3), &rat(1, 2)),
            Division::Quotient(rat(2, 3))
        );
        assert_eq!(q.divide(&rat(1, 2), &rat(1, 3)), Division::NotApplicable);
        assert_eq!(q.divide(&rat(1, 2), &rat(0, 1)), Division::NotApplicable);
        assert!(q.is_summable(&[rat(1, 4), rat(1, 4), rat(1, 2)]));
        assert!(!q.is_summable(&[rat(3, 4), rat(1, 2)]));
        assert_eq!(q.sum_family(&[]), Some(rat(0, 1)));
    }
}
