//! The diagonal twisted action on the product of the two curves: singularity
//! profile, node count, surface invariants, and the scan over all 288
//! automorphism twists.
//!
//! The group acts on C1×C2 by g·(x, y) = (g·x, Ψ(g)·y). A point is fixed by
//! g ≠ 1 only if both factors are, so fixed-point counts multiply. When every
//! element of order > 2 acts freely, the quotient has only nodes (an
//! involution acts by −1 on each tangent line at a fixed point, forcing the
//! ½(1,1) type), and the standard basket-corrected formulas give χ(O), K²,
//! p_g and q.

use std::sync::OnceLock;

use num_traits::{One, Signed};

use crate::chars::{inner_product, irreducible_table, Character, S3Kind};
use crate::covers::{
    canonical_character, fixed_point_count, CoverDescriptor, CoverError, curve1, curve2,
};
use crate::exactnum::{rat, ratq, Rat, Zeta3};
use crate::group::{
    enumerate_automorphisms, g_order, FiniteGroup, GElem, GroupAutomorphism, GROUP_ORDER,
};

/// Errors from the product-quotient layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProdError {
    #[error("the identity fixes the whole product")]
    IdentityFixedPoints,
    #[error("surface has fixed points of elements of order > 2 ({offending} offenders); only the nodal case is supported")]
    NonNodal { offending: usize },
    #[error("holomorphic Euler characteristic {value} is not an integer")]
    NonIntegralChi { value: String },
    #[error("invariant 2-form count disagrees between routes: sum over irreducibles {by_sum}, direct average {direct}")]
    PgRouteMismatch { by_sum: String, direct: String },
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// Which regime the deformation parameter of the second curve sits in. The
/// branch data are the same either way; only base-locus certificates in the
/// intersection layer differ.
#[derive(Copy, Clone, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub enum LambdaRegime {
    Generic,
    Zero,
}

/// A quotient surface (C1×C2)/G with the action twisted by Ψ.
#[derive(Clone, Debug)]
pub struct SurfaceSpec {
    pub name: String,
    pub c1: CoverDescriptor,
    pub c2: CoverDescriptor,
    pub psi: GroupAutomorphism,
    pub lambda_regime: LambdaRegime,
}

impl SurfaceSpec {
    pub fn new(
        name: impl Into<String>,
        psi: GroupAutomorphism,
        lambda_regime: LambdaRegime,
    ) -> Self {
        SurfaceSpec {
            name: name.into(),
            c1: curve1().clone(),
            c2: curve2().clone(),
            psi,
            lambda_regime,
        }
    }

    /// The builtin family member twisted by the n-th named automorphism.
    pub fn builtin(n: usize, lambda_regime: LambdaRegime) -> Self {
        Self::new(
            format!("surface{n}"),
            crate::group::named_automorphism(n),
            lambda_regime,
        )
    }
}

/// Fixed points of the twisted diagonal action per factor, cached per curve.
fn fixed_count_tables() -> &'static ([u64; GROUP_ORDER], [u64; GROUP_ORDER]) {
    static T: OnceLock<([u64; GROUP_ORDER], [u64; GROUP_ORDER])> = OnceLock::new();
    T.get_or_init(|| {
        let mut f1 = [0u64; GROUP_ORDER];
        let mut f2 = [0u64; GROUP_ORDER];
        for h in GElem::all().skip(1) {
            f1[h.idx()] = fixed_point_count(curve1(), h).expect("nontrivial element");
            f2[h.idx()] = fixed_point_count(curve2(), h).expect("nontrivial element");
        }
        (f1, f2)
    })
}

/// Both canonical characters, built once.
pub fn canonical_pair() -> &'static (Character, Character) {
    static P: OnceLock<(Character, Character)> = OnceLock::new();
    P.get_or_init(|| {
        (
            canonical_character(curve1()).expect("builtin cover"),
            canonical_character(curve2()).expect("builtin cover"),
        )
    })
}

/// Number of points of C1×C2 fixed by h under the twisted action:
/// fix(C1, h) · fix(C2, Ψ(h)).
pub fn product_fixed_points(spec: &SurfaceSpec, h: GElem) -> Result<u64, ProdError> {
    if h.is_identity() {
        return Err(ProdError::IdentityFixedPoints);
    }
    let (f1, f2) = fixed_count_tables();
    Ok(f1[h.idx()] * f2[spec.psi.apply(h).idx()])
}

/// The singularity bookkeeping of the quotient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SingularityProfile {
    pub node_count: u64,
    pub only_nodes: bool,
    /// Elements of order > 2 with fixed points on the product; empty exactly
    /// when the quotient has only nodes.
    pub offending_elements: Vec<GElem>,
}

/// Classifies the quotient singularities of the surface.
pub fn singularity_profile(spec: &SurfaceSpec) -> SingularityProfile {
    let mut offending = Vec::new();
    let mut involution_total = 0;
    for h in GElem::all().skip(1) {
        let fixed = product_fixed_points(spec, h).expect("nontrivial element");
        if fixed == 0 {
            continue;
        }
        if g_order(h) == 2 {
            involution_total += fixed;
        } else {
            offending.push(h);
        }
    }
    let orbit = GROUP_ORDER as u64 / 2;
    assert_eq!(involution_total % orbit, 0, "orbit arithmetic of the fixed locus");
    SingularityProfile {
        node_count: involution_total / orbit,
        only_nodes: offending.is_empty(),
        offending_elements: offending,
    }
}

/// The numerical invariants of a nodal quotient surface.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SurfaceInvariants {
    pub k_squared: i64,
    pub chi: Rat,
    pub p_g: i64,
    pub q: i64,
}

/// K², χ(O), p_g, q via the product-quotient formulas with the A1 basket
/// correction (3/2 per node, divided by 12).
pub fn surface_invariants(spec: &SurfaceSpec) -> Result<SurfaceInvariants, ProdError> {
    let profile = singularity_profile(spec);
    if !profile.only_nodes {
        return Err(ProdError::NonNodal { offending: profile.offending_elements.len() });
    }
    let g1 = crate::covers::genus_rh(&spec.c1)? as i64;
    let g2 = crate::covers::genus_rh(&spec.c2)? as i64;
    let order = GROUP_ORDER as i64;
    let k_squared_num = 8 * (g1 - 1) * (g2 - 1);
    assert_eq!(k_squared_num % order, 0);
    let k_squared = k_squared_num / order;
    let chi = ratq((g1 - 1) * (g2 - 1), order)
        + rat(profile.node_count as i64) * ratq(3, 2) * ratq(1, 12);
    if !chi.denom().is_one() {
        return Err(ProdError::NonIntegralChi { value: chi.to_string() });
    }
    let p_g = i64::try_from(chi.numer()).unwrap() - 1;
    Ok(SurfaceInvariants { k_squared, chi, p_g, q: 0 })
}

/// Counts the invariant 2-forms two independent ways: as the sum over
/// nontrivial irreducibles η of ⟨χ_can¹, η⟩·⟨χ_can², conj(twist(η, Ψ))⟩, and
/// directly as the average (1/|G|) Σ_g χ_can¹(g)·χ_can²(Ψ(g)).
pub fn pg_by_characters(spec: &SurfaceSpec) -> Result<u64, ProdError> {
    let (chi1, chi2) = canonical_pair();
    let table = irreducible_table(FiniteGroup::builtin());
    let mut by_sum = rat(0);
    for (irrep, eta) in table {
        if irrep.kind == S3Kind::Triv && irrep.p == 0 && irrep.q == 0 {
            continue;
        }
        let twisted = crate::chars::twist(eta, &spec.psi);
        let conj_twisted = Character::from_fn(|g| twisted.value(g).conj(), "conj");
        by_sum += inner_product(chi1, eta) * inner_product(chi2, &conj_twisted);
    }
    let mut direct = Zeta3::zero();
    for g in GElem::all() {
        direct = &direct + &(chi1.value(g) * chi2.value(spec.psi.apply(g)));
    }
    let direct = direct.scale(&ratq(1, GROUP_ORDER as i64));
    let direct_rat = direct.as_rat();
    let agreed = direct_rat.as_ref() == Some(&by_sum);
    let integral = by_sum.denom().is_one() && !by_sum.is_negative();
    if !agreed || !integral {
        return Err(ProdError::PgRouteMismatch {
            by_sum: by_sum.to_string(),
            direct: direct.to_string(),
        });
    }
    Ok(u64::try_from(by_sum.numer()).unwrap())
}

/// One scan row: an automorphism with its quotient profile.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScanRow {
    pub index: usize,
    pub images: [GElem; 4],
    pub only_nodes: bool,
    pub node_count: u64,
    pub p_g: u64,
}

/// Output of the full automorphism scan.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    /// Indices (into `rows`) of the automorphisms with only-nodes quotients.
    pub only_nodes_rows: Vec<usize>,
}

/// Profiles the quotient for every automorphism of G. Rows are emitted in
/// the deterministic enumeration order.
pub fn scan_automorphisms(c1: &CoverDescriptor, c2: &CoverDescriptor) -> ScanReport {
    assert_eq!((c1.name.as_str(), c2.name.as_str()), ("C1", "C2"), "scan uses the builtin covers");
    let (chi1, chi2) = canonical_pair();
    let mut rows = Vec::with_capacity(288);
    let mut only_nodes_rows = Vec::new();
    for (index, psi) in enumerate_automorphisms(FiniteGroup::builtin()).into_iter().enumerate() {
        let spec = SurfaceSpec::new(format!("scan{index}"), psi, LambdaRegime::Generic);
        let profile = singularity_profile(&spec);
        let mut direct = Zeta3::zero();
        for g in GElem::all() {
            direct = &direct + &(chi1.value(g) * chi2.value(spec.psi.apply(g)));
        }
        let pg = direct.scale(&ratq(1, GROUP_ORDER as i64));
        let pg = pg.as_rat().expect("invariant count is rational");
        assert!(pg.denom().is_one() && !pg.is_negative());
        let row = ScanRow {
            index,
            images: spec.psi.generator_images(),
            only_nodes: profile.only_nodes,
            node_count: profile.node_count,
            p_g: u64::try_from(pg.numer()).unwrap(),
        };
        if row.only_nodes {
            only_nodes_rows.push(index);
        }
        rows.push(row);
    }
    ScanReport { rows, only_nodes_rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{inner_automorphism, named_automorphism, SIG};

    fn builtin_specs() -> Vec<SurfaceSpec> {
        (1..=4).map(|n| SurfaceSpec::builtin(n, LambdaRegime::Generic)).collect()
    }

    #[test]
    fn involutions_fix_72_product_points() {
        let spec = SurfaceSpec::builtin(1, LambdaRegime::Generic);
        for h in GElem::all().filter(|&h| g_order(h) == 2) {
            assert_eq!(product_fixed_points(&spec, h).unwrap(), 72);
        }
        assert!(matches!(
            product_fixed_points(&spec, crate::group::ID),
            Err(ProdError::IdentityFixedPoints)
        ));
    }

    #[test]
    fn higher_order_elements_act_freely_on_builtin_specs() {
        for spec in builtin_specs() {
            for h in GElem::all().skip(1).filter(|&h| g_order(h) > 2) {
                assert_eq!(product_fixed_points(&spec, h).unwrap(), 0, "{h} on {}", spec.name);
            }
        }
    }

    #[test]
    fn builtin_profiles_are_eight_nodes() {
        for spec in builtin_specs() {
            let profile = singularity_profile(&spec);
            assert!(profile.only_nodes, "{}", spec.name);
            assert_eq!(profile.node_count, 8, "{}", spec.name);
            assert!(profile.offending_elements.is_empty());
        }
    }

    #[test]
    fn builtin_invariants() {
        for spec in builtin_specs() {
            let inv = surface_invariants(&spec).unwrap();
            assert_eq!(inv.k_squared, 24);
            assert_eq!(inv.chi, rat(4));
            assert_eq!(inv.p_g, 3);
            assert_eq!(inv.q, 0);
            // Per-node correction is 1/8: the basket contributes exactly 1.
            assert_eq!(inv.chi - ratq(9 * 18, 54), rat(1));
        }
    }

    #[test]
    fn pg_routes_agree_on_builtins() {
        for spec in builtin_specs() {
            let pg = pg_by_characters(&spec).unwrap();
            assert_eq!(pg, 3, "{}", spec.name);
            assert_eq!(pg as i64, surface_invariants(&spec).unwrap().p_g);
        }
    }

    #[test]
    fn conjugate_automorphisms_share_profiles() {
        let base = named_automorphism(2);
        let conj = inner_automorphism(SIG).compose(&base);
        let a = SurfaceSpec::new("a", base, LambdaRegime::Generic);
        let b = SurfaceSpec::new("b", conj, LambdaRegime::Generic);
        assert_eq!(singularity_profile(&a).node_count, singularity_profile(&b).node_count);
        assert_eq!(singularity_profile(&a).only_nodes, singularity_profile(&b).only_nodes);
        assert_eq!(pg_by_characters(&a).unwrap(), pg_by_characters(&b).unwrap());
    }

    #[test]
    fn scan_shape_and_survivors() {
        let report = scan_automorphisms(curve1(), curve2());
        assert_eq!(report.rows.len(), 288);
        assert_eq!(report.only_nodes_rows.len(), 48);
        // Node orbit arithmetic never varies: involutions go to involutions.
        assert!(report.rows.iter().all(|r| r.node_count == 8));
        // Every only-nodes row computes p_g = 3.
        for &idx in &report.only_nodes_rows {
            assert_eq!(report.rows[idx].p_g, 3);
        }
        // The four named automorphisms are among the survivors.
        let all = enumerate_automorphisms(FiniteGroup::builtin());
        for n in 1..=4 {
            let psi = named_automorphism(n);
            let pos = all.iter().position(|p| *p == psi).unwrap();
            assert!(report.rows[pos].only_nodes, "named automorphism #{n}");
        }
        // And some row is genuinely rejected.
        let bad = report.rows.iter().find(|r| !r.only_nodes).unwrap();
        let spec = SurfaceSpec::new("bad", all[bad.index].clone(), LambdaRegime::Generic);
        assert!(!singularity_profile(&spec).offending_elements.is_empty());
        assert!(matches!(surface_invariants(&spec), Err(ProdError::NonNodal { .. })));
    }

    #[test]
    fn pg_histogram_over_the_scan() {
        let report = scan_automorphisms(curve1(), curve2());
        let mut histogram = std::collections::BTreeMap::new();
        for row in &report.rows {
            *histogram.entry(row.p_g).or_insert(0u32) += 1;
        }
        let expected: std::collections::BTreeMap<u64, u32> =
            [(3, 84), (4, 48), (5, 96), (6, 24), (7, 24), (8, 12)].into_iter().collect();
        assert_eq!(histogram, expected);
    }
}
