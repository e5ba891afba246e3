//! Numerical divisor classes on the product, base-locus certificates, the
//! local correction term for resolving a base point, and the degree of the
//! canonical map.
//!
//! A base locus is not computed from equations here. It arrives as a
//! certificate: three divisor expressions spanning the system, plus counted
//! families of base points, each with the local model (aH, bK, cH + dK) of
//! its resolution. Validation checks the model's applicability, the
//! numerical self-pairings, and that the local contributions never exceed
//! what the numerical classes allow. The degree then falls out of the
//! corrected self-intersection.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::prodquot::{surface_invariants, LambdaRegime, ProdError, SurfaceSpec};

/// Errors from certificate validation and degree computation.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntersectError {
    #[error("unknown component '{0}'")]
    UnknownComponent(String),
    #[error("local model requires b ≤ a, got a={a}, b={b}")]
    UnorderedModel { a: u64, b: u64 },
    #[error("local model ({a},{b},{c},{d}) is inapplicable: the blow-up sequence does not separate it")]
    Inapplicable { a: u64, b: u64, c: u64, d: u64 },
    #[error("family '{label}' is invalid: {reason}")]
    BadFamily { label: String, reason: String },
    #[error("family '{label}' roles {roles:?} are not a permutation of 1..3")]
    BadRoles { label: String, roles: [usize; 3] },
    #[error("expected 3 divisor expressions, found {0}")]
    WrongDivisorCount(usize),
    #[error("divisor '{label}' has self-pairing {found}, expected {expected}")]
    WrongSelfPairing { label: String, found: i64, expected: i64 },
    #[error("divisor pair ({first}, {second}): local contributions total {contribution}, exceeding the numerical pairing {pairing}")]
    Overcharged { first: String, second: String, contribution: i64, pairing: i64 },
    #[error("correction {correction} leaves mobile self-intersection {m_hat_squared} ≤ 0: the map would be composed with a pencil")]
    ComposedWithPencil { correction: i64, m_hat_squared: i64 },
    #[error("mobile self-intersection {m_hat_squared} is not divisible by the group order 54")]
    NonDivisible { m_hat_squared: i64 },
    #[error("degree {degree} exceeds the bound {bound}")]
    BoundExceeded { degree: i64, bound: i64 },
    #[error("no builtin certificate for scenario '{0}'")]
    UnknownCertificate(String),
    #[error("certificate parse failure: {0}")]
    Parse(String),
    #[error(transparent)]
    Prod(#[from] ProdError),
}

/// A numerical divisor class h·(C1 × pt) + v·(pt × C2).
#[derive(Copy, Clone, PartialEq, Eq, Debug, Default)]
pub struct NumClass {
    pub h: i64,
    pub v: i64,
}

impl std::ops::Add for NumClass {
    type Output = NumClass;

    fn add(self, rhs: NumClass) -> NumClass {
        NumClass { h: self.h + rhs.h, v: self.v + rhs.v }
    }
}

impl NumClass {
    pub fn new(h: i64, v: i64) -> Self {
        NumClass { h, v }
    }

    pub fn scale(self, k: i64) -> Self {
        NumClass { h: self.h * k, v: self.v * k }
    }
}

impl std::fmt::Display for NumClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.h, self.v)
    }
}

/// Intersection pairing of fiber classes: H² = V² = 0 and H·V = 1.
pub fn pair(a: NumClass, b: NumClass) -> i64 {
    a.h * b.v + b.h * a.v
}

/// A named curve on the product with its numerical class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NamedComponent {
    pub name: &'static str,
    pub cls: NumClass,
}

/// The builtin component table: the four horizontal fiber unions F_j, the
/// four vertical ones G_k (G_3 is a double fiber class), and the special
/// bisection-type curves of surfaces 2, 3 and 4.
pub fn component_table() -> &'static Vec<NamedComponent> {
    static TABLE: OnceLock<Vec<NamedComponent>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::new();
        for j in 0..4 {
            t.push(NamedComponent {
                name: ["F0", "F1", "F2", "F3"][j],
                cls: NumClass::new(0, 9),
            });
        }
        for k in 0..3 {
            t.push(NamedComponent {
                name: ["G0", "G1", "G2"][k],
                cls: NumClass::new(9, 0),
            });
        }
        t.push(NamedComponent { name: "G3", cls: NumClass::new(18, 0) });
        t.push(NamedComponent { name: "Delta", cls: NumClass::new(18, 9) });
        t.push(NamedComponent { name: "E3", cls: NumClass::new(18, 9) });
        t.push(NamedComponent { name: "E4", cls: NumClass::new(18, 18) });
        t
    })
}

pub fn component_class(name: &str) -> Result<NumClass, IntersectError> {
    component_table()
        .iter()
        .find(|c| c.name == name)
        .map(|c| c.cls)
        .ok_or_else(|| IntersectError::UnknownComponent(name.into()))
}

/// Checks the hardcoded pairing facts against the classes: fibers of the
/// same ruling never meet, F·G = 81 except F·G3 = 162, and the surface-2
/// bisection curve meets each single vertical fiber union in 81 points.
pub fn verify_component_table() -> Result<(), IntersectError> {
    let expect = |x: &str, y: &str, want: i64| -> Result<(), IntersectError> {
        let got = pair(component_class(x)?, component_class(y)?);
        if got == want {
            Ok(())
        } else {
            Err(IntersectError::Overcharged {
                first: x.into(),
                second: y.into(),
                contribution: got,
                pairing: want,
            })
        }
    };
    for x in ["F0", "F1", "F2", "F3"] {
        for y in ["F0", "F1", "F2", "F3"] {
            expect(x, y, 0)?;
        }
        for y in ["G0", "G1", "G2"] {
            expect(x, y, 81)?;
        }
        expect(x, "G3", 162)?;
    }
    for x in ["G0", "G1", "G2", "G3"] {
        for y in ["G0", "G1", "G2", "G3"] {
            expect(x, y, 0)?;
        }
    }
    for y in ["G0", "G1", "G2"] {
        expect("Delta", y, 81)?;
    }
    Ok(())
}

/// The correction a·b to the mobile self-intersection from resolving one
/// base point with local model (aH, bK, cH + dK), after at most a·b
/// blow-ups. Errors when the model falls outside the regime where that
/// resolution is known to terminate.
pub fn local_correction(a: u64, b: u64, c: u64, d: u64) -> Result<u64, IntersectError> {
    if b > a {
        return Err(IntersectError::UnorderedModel { a, b });
    }
    if b == 0 {
        return Err(IntersectError::Inapplicable { a, b, c, d });
    }
    let applicable = d >= b || {
        let m = a / b;
        c + m * d >= a
    };
    if !applicable {
        return Err(IntersectError::Inapplicable { a, b, c, d });
    }
    Ok(a * b)
}

/// One counted family of base points sharing a local model. `roles` says
/// which of the three divisor expressions plays aH, bK and cH + dK, as
/// 1-based indices.
#[derive(Clone, PartialEq, Eq, Debug, Deserialize)]
pub struct BaseLocusFamily {
    pub label: String,
    pub count: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub roles: [usize; 3],
}

impl BaseLocusFamily {
    /// Total correction contributed by the family.
    pub fn correction(&self) -> Result<u64, IntersectError> {
        Ok(self.count * local_correction(self.a, self.b, self.c, self.d)?)
    }

    /// Local pairwise intersection multiplicities implied by the model, as
    /// (divisor, divisor, multiplicity) with 1-based divisor indices.
    pub fn pairwise_contributions(&self) -> [(usize, usize, u64); 3] {
        let [r1, r2, r3] = self.roles;
        [
            (r1, r2, self.a * self.b),
            (r1, r3, self.a * self.d),
            (r2, r3, self.b * self.c),
        ]
    }
}

/// A divisor expression: a multiset of named components.
#[derive(Clone, PartialEq, Eq, Debug, Deserialize)]
pub struct DivisorExpr {
    pub label: String,
    pub parts: Vec<DivisorPart>,
}

#[derive(Clone, PartialEq, Eq, Debug, Deserialize)]
pub struct DivisorPart {
    pub name: String,
    pub mult: u32,
}

impl DivisorExpr {
    pub fn num_class(&self) -> Result<NumClass, IntersectError> {
        let mut total = NumClass::default();
        for part in &self.parts {
            total = total + component_class(&part.name)?.scale(part.mult as i64);
        }
        Ok(total)
    }
}

impl std::fmt::Display for DivisorExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for part in &self.parts {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if part.mult == 1 {
                write!(f, "{}", part.name)?;
            } else {
                write!(f, "{}{}", part.mult, part.name)?;
            }
        }
        Ok(())
    }
}

/// A base-locus certificate: the three divisors spanning the system and the
/// counted point families.
#[derive(Clone, PartialEq, Eq, Debug, Deserialize)]
pub struct Certificate {
    pub name: String,
    #[serde(rename = "divisor")]
    pub divisors: Vec<DivisorExpr>,
    #[serde(rename = "family", default)]
    pub families: Vec<BaseLocusFamily>,
}

pub fn parse_certificate(text: &str) -> Result<Certificate, IntersectError> {
    toml::from_str(text).map_err(|e| IntersectError::Parse(e.to_string()))
}

/// The builtin certificate for a scenario name and λ regime.
pub fn builtin_certificate(
    scenario: &str,
    regime: LambdaRegime,
) -> Result<Certificate, IntersectError> {
    let text = match (scenario, regime) {
        ("surface1", _) => include_str!("../data/certificates/surface1.toml"),
        ("surface2", LambdaRegime::Generic) => {
            include_str!("../data/certificates/surface2_generic.toml")
        }
        ("surface2", LambdaRegime::Zero) => {
            include_str!("../data/certificates/surface2_lambda0.toml")
        }
        ("surface3", LambdaRegime::Generic) => {
            include_str!("../data/certificates/surface3_generic.toml")
        }
        ("surface3", LambdaRegime::Zero) => {
            include_str!("../data/certificates/surface3_lambda0.toml")
        }
        ("surface4", _) => include_str!("../data/certificates/surface4.toml"),
        _ => return Err(IntersectError::UnknownCertificate(scenario.into())),
    };
    parse_certificate(text)
}

/// An alternative certificate for the same scenario, where one exists. The
/// surface-3, λ = 0 scenario ships with a second reading of its extra 54
/// base points whose local model (2H, 2K, 3H + 3K) corrects by 4 per point
/// instead of 2, giving degree 14 instead of 16.
pub fn alternate_certificate(
    scenario: &str,
    regime: LambdaRegime,
) -> Option<Certificate> {
    match (scenario, regime) {
        ("surface3", LambdaRegime::Zero) => Some(
            parse_certificate(include_str!("../data/certificates/surface3_lambda0_alt.toml"))
                .expect("builtin alternate certificate parses"),
        ),
        _ => None,
    }
}

/// Self-intersection of the pulled-back canonical class: |G| · K².
pub fn t_squared(spec: &SurfaceSpec) -> Result<i64, IntersectError> {
    let inv = surface_invariants(spec)?;
    Ok(54 * inv.k_squared)
}

/// Everything validate_certificate establishes, kept for reporting.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValidationReport {
    pub certificate: String,
    pub t_squared: i64,
    pub divisor_classes: Vec<(String, NumClass)>,
    pub family_corrections: Vec<(String, i64)>,
    pub pairwise: Vec<(String, String, i64, i64)>,
    pub total_correction: i64,
    pub m_hat_squared: i64,
}

/// Validates a certificate against a surface: local models applicable,
/// divisors numerically canonical, pairwise local contributions within the
/// numerical pairings, and a positive mobile self-intersection divisible by
/// the group order.
pub fn validate_certificate(
    spec: &SurfaceSpec,
    cert: &Certificate,
) -> Result<ValidationReport, IntersectError> {
    if cert.divisors.len() != 3 {
        return Err(IntersectError::WrongDivisorCount(cert.divisors.len()));
    }
    let t2 = t_squared(spec)?;
    let mut divisor_classes = Vec::new();
    for div in &cert.divisors {
        let cls = div.num_class()?;
        let self_pairing = pair(cls, cls);
        if self_pairing != t2 {
            return Err(IntersectError::WrongSelfPairing {
                label: div.label.clone(),
                found: self_pairing,
                expected: t2,
            });
        }
        divisor_classes.push((div.label.clone(), cls));
    }
    let mut family_corrections = Vec::new();
    let mut total_correction: i64 = 0;
    let mut charges: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for fam in &cert.families {
        let mut sorted = fam.roles;
        sorted.sort_unstable();
        if sorted != [1, 2, 3] {
            return Err(IntersectError::BadRoles { label: fam.label.clone(), roles: fam.roles });
        }
        if fam.count == 0 {
            return Err(IntersectError::BadFamily {
                label: fam.label.clone(),
                reason: "count must be positive".into(),
            });
        }
        let correction = fam.correction().map_err(|e| IntersectError::BadFamily {
            label: fam.label.clone(),
            reason: e.to_string(),
        })? as i64;
        family_corrections.push((fam.label.clone(), correction));
        total_correction += correction;
        for (x, y, m) in fam.pairwise_contributions() {
            let key = (x.min(y), x.max(y));
            *charges.entry(key).or_insert(0) += fam.count as i64 * m as i64;
        }
    }
    let mut pairwise = Vec::new();
    for x in 0..3 {
        for y in (x + 1)..3 {
            let pairing = pair(divisor_classes[x].1, divisor_classes[y].1);
            let contribution = charges.get(&(x + 1, y + 1)).copied().unwrap_or(0);
            if contribution > pairing {
                return Err(IntersectError::Overcharged {
                    first: divisor_classes[x].0.clone(),
                    second: divisor_classes[y].0.clone(),
                    contribution,
                    pairing,
                });
            }
            pairwise.push((
                divisor_classes[x].0.clone(),
                divisor_classes[y].0.clone(),
                contribution,
                pairing,
            ));
        }
    }
    let m_hat_squared = t2 - total_correction;
    if m_hat_squared <= 0 {
        return Err(IntersectError::ComposedWithPencil {
            correction: total_correction,
            m_hat_squared,
        });
    }
    if m_hat_squared % 54 != 0 {
        return Err(IntersectError::NonDivisible { m_hat_squared });
    }
    Ok(ValidationReport {
        certificate: cert.name.clone(),
        t_squared: t2,
        divisor_classes,
        family_corrections,
        pairwise,
        total_correction,
        m_hat_squared,
    })
}

/// Degree data for the canonical map after resolving the base locus.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DegreeReport {
    pub certificate: String,
    pub t_squared: i64,
    pub total_correction: i64,
    pub m_hat_squared: i64,
    pub degree: i64,
}

/// The upper bound 9 + (27 − 9q)/(p_g − 2) on the degree of a canonical map
/// with 2-dimensional image, as a floor when it is not integral.
pub fn beauville_bound(p_g: i64, q: i64) -> i64 {
    assert!(p_g > 2);
    9 + (27 - 9 * q).div_euclid(p_g - 2)
}

/// Canonical-map degree from an explicit certificate.
pub fn degree_from_certificate(
    spec: &SurfaceSpec,
    cert: &Certificate,
) -> Result<DegreeReport, IntersectError> {
    let report = validate_certificate(spec, cert)?;
    let degree = report.m_hat_squared / 54;
    let inv = surface_invariants(spec)?;
    let bound = beauville_bound(inv.p_g, inv.q);
    if degree > bound {
        return Err(IntersectError::BoundExceeded { degree, bound });
    }
    Ok(DegreeReport {
        certificate: report.certificate,
        t_squared: report.t_squared,
        total_correction: report.total_correction,
        m_hat_squared: report.m_hat_squared,
        degree,
    })
}

/// Canonical-map degree of a builtin surface, using its builtin certificate
/// for its λ regime.
pub fn canonical_degree(spec: &SurfaceSpec) -> Result<DegreeReport, IntersectError> {
    let cert = builtin_certificate(&spec.name, spec.lambda_regime)?;
    degree_from_certificate(spec, &cert)
}
