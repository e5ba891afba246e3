//! End-to-end acceptance checks. One test per headline result, each a
//! single pass or fail line, with exact arithmetic throughout; there are no
//! tolerances anywhere.

use pqsurf::chars::{decompose, inner_product, irreducible_table, Irrep, S3Kind};
use pqsurf::covers::{
    builtin_canonical_decomposition, canonical_character, curve1, curve2, fixed_point_count,
    genus_rh,
};
use pqsurf::exactnum::{rat, Zeta3};
use pqsurf::forms::{
    action_matrix, check_table_basis, invariant_tensors, isotypic_projector, isotypic_span_table,
    mat_apply, projector_rank, table_basis, verify_homomorphism, MonomialSpace, Which,
};
use pqsurf::group::{
    enumerate_automorphisms, g_inv, g_mul, g_order, named_automorphism, FiniteGroup, GElem,
};
use pqsurf::intersect::{beauville_bound, canonical_degree, local_correction, IntersectError};
use pqsurf::prodquot::{
    pg_by_characters, product_fixed_points, scan_automorphisms, singularity_profile,
    surface_invariants, LambdaRegime, SurfaceSpec,
};

#[test]
fn criterion_01_genera() {
    assert_eq!(genus_rh(curve1()).unwrap(), 10);
    assert_eq!(genus_rh(curve2()).unwrap(), 19);
}

#[test]
fn criterion_02_canonical_characters() {
    for c in [curve1(), curve2()] {
        let chi = canonical_character(c).unwrap();
        let computed = decompose(&chi, FiniteGroup::builtin()).unwrap();
        let reference = builtin_canonical_decomposition(&c.name).unwrap();
        assert_eq!(computed, reference, "decomposition of χ_can({})", c.name);
    }
    let c2 = builtin_canonical_decomposition("C2").unwrap();
    let mu_e2sq = Irrep::new(S3Kind::Std, 0, 2);
    assert!(c2.contains(&(mu_e2sq, 2)), "C2 carries μ·ε2² with multiplicity 2");
}

#[test]
fn criterion_03_trace_oracle() {
    for (c, which) in [(curve1(), Which::C1), (curve2(), Which::C2)] {
        let chi = canonical_character(c).unwrap();
        for g in GElem::all() {
            assert_eq!(
                action_matrix(g, which).trace(),
                *chi.value(g),
                "trace at {g} on {which}"
            );
        }
    }
}

#[test]
fn criterion_04_isotypic_spans() {
    for which in [Which::C1, Which::C2] {
        let dim = MonomialSpace::get(which).dim();
        let projectors: Vec<(Irrep, Vec<Vec<Zeta3>>)> = irreducible_table(FiniteGroup::builtin())
            .iter()
            .map(|(irrep, chi)| (*irrep, isotypic_projector(chi, which)))
            .collect();
        let zero = vec![Zeta3::zero(); dim];
        for (owner, vectors) in isotypic_span_table(which) {
            for v in &vectors {
                for (irrep, p) in &projectors {
                    let image = mat_apply(p, &v.coeffs);
                    if *irrep == owner {
                        assert_eq!(image, v.coeffs, "{} span not fixed on {which}", owner.label());
                    } else {
                        assert_eq!(
                            image,
                            zero,
                            "{} span survives the {} projector on {which}",
                            owner.label(),
                            irrep.label()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn criterion_05_singularities() {
    for n in 1..=4 {
        let spec = SurfaceSpec::builtin(n, LambdaRegime::Generic);
        let profile = singularity_profile(&spec);
        assert!(profile.only_nodes, "surface {n} has a non-nodal singularity");
        assert_eq!(profile.node_count, 8, "surface {n} node count");
        for h in GElem::all().filter(|&h| g_order(h) == 2) {
            assert_eq!(
                product_fixed_points(&spec, h).unwrap(),
                72,
                "fixed points of {h} on surface {n}"
            );
        }
    }
}

#[test]
fn criterion_06_invariants() {
    for n in 1..=4 {
        let spec = SurfaceSpec::builtin(n, LambdaRegime::Generic);
        let inv = surface_invariants(&spec).unwrap();
        assert_eq!(inv.k_squared, 24, "K² of surface {n}");
        assert_eq!(inv.chi, rat(4), "χ(O) of surface {n}");
        assert_eq!(inv.p_g, 3, "p_g of surface {n}");
        assert_eq!(inv.q, 0, "q of surface {n}");
        assert_eq!(pg_by_characters(&spec).unwrap(), inv.p_g as u64, "dual p_g route, surface {n}");
    }
}

#[test]
fn criterion_07_invariant_two_forms() {
    for n in 1..=4 {
        let psi = named_automorphism(n);
        assert_eq!(invariant_tensors(&psi).unwrap().len(), 3, "invariant forms for twist {n}");
        check_table_basis(&psi, &table_basis(n)).unwrap();
    }
}

#[test]
fn criterion_08_canonical_degrees() {
    let table = [
        (1, LambdaRegime::Generic, 18, 324),
        (2, LambdaRegime::Generic, 15, 486),
        (2, LambdaRegime::Zero, 13, 594),
        (3, LambdaRegime::Generic, 18, 324),
        (3, LambdaRegime::Zero, 16, 432),
        (4, LambdaRegime::Generic, 12, 648),
    ];
    for (n, regime, degree, correction) in table {
        let spec = SurfaceSpec::builtin(n, regime);
        let report = canonical_degree(&spec).unwrap();
        assert_eq!(report.t_squared, 1296, "T² of surface {n}");
        assert_eq!(report.degree, degree, "degree of surface {n} ({regime:?})");
        assert_eq!(
            report.total_correction, correction,
            "correction of surface {n} ({regime:?})"
        );
    }
}

#[test]
fn criterion_09_local_corrections() {
    assert_eq!(local_correction(2, 2, 4, 0).unwrap(), 4);
    assert_eq!(local_correction(2, 1, 1, 2).unwrap(), 2);
    assert_eq!(local_correction(1, 1, 0, 2).unwrap(), 1);
    assert_eq!(local_correction(2, 1, 0, 1).unwrap(), 2);
    assert!(matches!(
        local_correction(2, 0, 1, 0),
        Err(IntersectError::Inapplicable { a: 2, b: 0, c: 1, d: 0 })
    ));
}

#[test]
fn criterion_10_scan() {
    assert_eq!(enumerate_automorphisms(FiniteGroup::builtin()).len(), 288);
    let (c1, c2) = (curve1(), curve2());
    let scan = scan_automorphisms(c1, c2);
    assert_eq!(scan.rows.len(), 288);
    for n in 1..=4 {
        let images = named_automorphism(n).generator_images();
        let row = scan.rows.iter().find(|r| r.images == images).unwrap();
        assert!(row.only_nodes, "twist {n} not flagged only-nodes");
        assert_eq!(row.p_g, 3, "twist {n} scan p_g");
    }
    for &idx in &scan.only_nodes_rows {
        let row = &scan.rows[idx];
        assert_eq!(row.node_count, 8, "survivor #{idx} node count");
        let [sig, tau, e1, e2] = row.images;
        let psi = pqsurf::group::automorphism_from_images(
            FiniteGroup::builtin(),
            sig,
            tau,
            e1,
            e2,
        )
        .unwrap();
        let spec = SurfaceSpec {
            name: format!("scan-{idx}"),
            c1: c1.clone(),
            c2: c2.clone(),
            psi,
            lambda_regime: LambdaRegime::Generic,
        };
        let inv = surface_invariants(&spec).unwrap();
        assert_eq!(
            (inv.k_squared, inv.p_g, inv.q),
            (24, 3, 0),
            "survivor #{idx} invariants"
        );
    }
}

#[test]
fn criterion_11_property_suite_heads() {
    let table = irreducible_table(FiniteGroup::builtin());
    for (i, (_, chi)) in table.iter().enumerate() {
        for (j, (_, eta)) in table.iter().enumerate() {
            assert_eq!(inner_product(chi, eta), rat((i == j) as i64), "orthogonality {i},{j}");
        }
    }

    for which in [Which::C1, Which::C2] {
        let dim = MonomialSpace::get(which).dim();
        let mut sum = vec![vec![Zeta3::zero(); dim]; dim];
        let mut ranks = 0usize;
        for (_, chi) in table {
            let p = isotypic_projector(chi, which);
            ranks += projector_rank(&p);
            for (r, row) in p.iter().enumerate() {
                for (c, x) in row.iter().enumerate() {
                    sum[r][c] = sum[r][c].clone() + x.clone();
                }
            }
        }
        assert_eq!(ranks, dim, "projector ranks on {which}");
        for (r, row) in sum.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                let expect = if r == c { Zeta3::one() } else { Zeta3::zero() };
                assert_eq!(*x, expect, "projector sum entry ({r},{c}) on {which}");
            }
        }
        verify_homomorphism(which).unwrap();
    }

    for c in [curve1(), curve2()] {
        for h in GElem::all().filter(|h| !h.is_identity()) {
            let base = fixed_point_count(c, h).unwrap();
            for t in GElem::all() {
                let conj = g_mul(g_mul(t, h), g_inv(t));
                assert_eq!(
                    fixed_point_count(c, conj).unwrap(),
                    base,
                    "conjugation invariance at {h} via {t} on {}",
                    c.name
                );
            }
        }
    }

    assert_eq!(beauville_bound(3, 0), 36);
    for (n, regime) in [
        (1, LambdaRegime::Generic),
        (2, LambdaRegime::Generic),
        (2, LambdaRegime::Zero),
        (3, LambdaRegime::Generic),
        (3, LambdaRegime::Zero),
        (4, LambdaRegime::Generic),
    ] {
        let spec = SurfaceSpec::builtin(n, regime);
        let degree = canonical_degree(&spec).unwrap().degree;
        assert!(degree <= 36, "surface {n} degree {degree} exceeds the bound");
    }
}
