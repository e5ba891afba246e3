//! Exact computer algebra for a family of product-quotient surfaces.
//!
//! Two curves, one of genus 10 cut out in P^3 by
//! `x2^3 = x0^3 - x1^3`, `x3^3 = x0^3 + x1^3`, and one of genus 19 cut out in
//! P(1,1,1,2) by `y2^3 = y0^3 + y1^3`, `y3^3 = y0^6 + y1^6 - 2λ y0^3 y1^3`,
//! both carry an action of the order-54 group G = S3 × (Z/3)². Twisting the
//! diagonal action on the product by a group automorphism Ψ and passing to the
//! quotient produces surfaces of general type with K² = 24, p_g = 3, q = 0 and
//! eight nodes; their canonical maps have degree 12, 13, 15, 16 or 18
//! depending on the twist and on the parameter λ.
//!
//! Every computation in this crate is exact: rationals are arbitrary
//! precision, roots of unity live in cyclotomic fields in canonical form, and
//! all advertised equalities are checked with zero tolerance.
//!
//! Module map:
//! - [`exactnum`]: rationals and cyclotomic arithmetic (ζ3 fast path).
//! - [`group`]: the order-54 group, its 27 conjugacy classes and 288
//!   automorphisms.
//! - [`chars`]: the 27 irreducible characters, inner products, twists,
//!   eigenvalue profiles, decomposition.
//! - [`covers`]: the two branched covers of the line, Riemann-Hurwitz genus,
//!   fixed-point counts, the multiplicities of each irreducible inside the
//!   space of holomorphic 1-forms.
//! - [`forms`]: explicit monomial bases for those 1-form spaces, the matrix
//!   action, isotypic projectors, invariant 2-form tensors.
//! - [`prodquot`]: singularity profile, node count, surface invariants, and
//!   the full automorphism scan.
//! - [`intersect`]: numerical divisor classes, base-locus certificates, the
//!   local correction calculator, canonical-map degrees.
//! - [`cli`]: scenario loading, pipeline orchestration, report emission.

pub mod chars;
pub mod cli;
pub mod covers;
pub mod exactnum;
pub mod forms;
pub mod group;
pub mod intersect;
pub mod prodquot;
