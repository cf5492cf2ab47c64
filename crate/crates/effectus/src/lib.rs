//! Finite and exact-rational models of effect algebras, effect monoids,
//! weight modules, and the partial categorical structure built on them,
//! together with checkers that verify the defining laws on concrete
//! instances and report every violation found.
//!
//! Layers, from the bottom up:
//!
//! * [`algebra`]: partial commutative monoids and effect algebras on finite
//!   index carriers, with summation of countable families.
//! * [`monoid`]: effect monoids and the [`monoid::ScalarSystem`] interface,
//!   including the rational unit interval.
//! * [`modules`]: effect modules and weight modules over a scalar system,
//!   with finite-table and rational-coordinate backends.
//! * [`category`]: three concrete instances (partial functions, effect
//!   modules in the opposite direction, weight modules) behind one trait,
//!   plus the axiom checkers that run on any instance.
//! * [`functors`]: predicate and substate functors, the pointed-set
//!   equivalence, the powerset functor, faithfulness and separation.
//! * [`normalize`]: normalization of substates and the scalar-level
//!   equivalences that govern it.
//! * [`ovs`]: ordered rational vector spaces, exact linear programming,
//!   norms, and the passage between weight modules and vector spaces.
//! * [`enumerate`]: exhaustive enumeration of small effect algebras and
//!   effect monoids up to isomorphism, with a census of their properties.
//! * [`dsl`]: a text format for all of the above, with a total parser and a
//!   printing round trip.

pub mod algebra;
pub mod category;
pub mod enumerate;
pub mod functors;
pub mod monoid;
pub mod normalize;
pub mod modules;
pub mod ovs;
pub mod report;
