//! Monomial models of the 1-forms of both curves, the matrix action of G on
//! them, isotypic projection, and invariant 2-forms of the twisted diagonal
//! action on the 190-dimensional tensor space.
//!
//! The genus-10 curve carries the 10 quadric monomials in x0..x3; the
//! genus-19 curve carries 19 of the 22 weighted quartic monomials in y0..y3
//! (weights 1,1,1,2), after removing y0·y2³, y1·y2³ and y2⁴ via the curve
//! equation y2³ = y0³ + y1³. A monomial with y2-exponent ≥ 3 is therefore
//! not illegal, it just expands into two basis monomials.
//!
//! Every action matrix is built twice: from the closed exponent formulas and
//! by pulling monomial differentials back through the coordinate
//! substitution. Equality of the two constructions, and the pointwise match
//! of traces against the canonical character, are standing tests.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::chars::{Character, Irrep, S3Kind};
use crate::exactnum::{ratq, Zeta3};
use crate::group::{
    g_inv, FiniteGroup, GElem, GroupAutomorphism, E1, E2, GROUP_ORDER, SIG, TAU,
};
use crate::prodquot::{pg_by_characters, LambdaRegime, SurfaceSpec};

/// Errors from the forms layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormsError {
    #[error("({0},{1},{2}) is not a basis monomial index")]
    InvalidIndex(u8, u8, u8),
    #[error("action matrices break the homomorphism at the pair ({g}, {h})")]
    NotHomomorphic { g: GElem, h: GElem },
    #[error("closed-form action and pullback substitution disagree at {g}")]
    PullbackMismatch { g: GElem },
    #[error("invariant space has dimension {found} but characters predict {expected}")]
    DimensionMismatch { found: usize, expected: usize },
    #[error("claimed form #{index} is not invariant: moved by {witness}")]
    NonInvariant { index: usize, witness: GElem },
    #[error("claimed forms span rank {rank} < invariant dimension {dim}")]
    NotSpanning { rank: usize, dim: usize },
    #[error("claimed form #{index} is zero")]
    ZeroForm { index: usize },
    #[error("invariant count unavailable: {0}")]
    Prod(String),
}

/// Which curve's monomial space.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Which {
    C1,
    C2,
}

impl std::fmt::Display for Which {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Which::C1 => write!(f, "C1"),
            Which::C2 => write!(f, "C2"),
        }
    }
}

/// An ordered monomial basis of a space of 1-forms, indexed by (α, β, γ).
pub struct MonomialSpace {
    pub which: Which,
    pub variables: [(&'static str, u32); 4],
    pub degree: u32,
    pub basis: Vec<(u8, u8, u8)>,
    pub excluded: Vec<(u8, u8, u8)>,
    index: HashMap<(u8, u8, u8), usize>,
}

impl MonomialSpace {
    pub fn get(which: Which) -> &'static MonomialSpace {
        static C1: OnceLock<MonomialSpace> = OnceLock::new();
        static C2: OnceLock<MonomialSpace> = OnceLock::new();
        match which {
            Which::C1 => C1.get_or_init(|| MonomialSpace::build(Which::C1)),
            Which::C2 => C2.get_or_init(|| MonomialSpace::build(Which::C2)),
        }
    }

    #[allow(clippy::type_complexity)]
    fn build(which: Which) -> MonomialSpace {
        let (variables, degree, w3, excluded): ([(&str, u32); 4], u32, i64, Vec<(u8, u8, u8)>) =
            match which {
                Which::C1 => (
                    [("x0", 1), ("x1", 1), ("x2", 1), ("x3", 1)],
                    2,
                    1,
                    vec![],
                ),
                Which::C2 => (
                    [("y0", 1), ("y1", 1), ("y2", 1), ("y3", 2)],
                    4,
                    2,
                    vec![(0, 3, 0), (1, 3, 0), (0, 4, 0)],
                ),
            };
        let mut basis = Vec::new();
        for alpha in 0..=degree as u8 {
            for beta in 0..=degree as u8 {
                for gamma in 0..=degree as u8 {
                    let lead = degree as i64 - alpha as i64 - beta as i64 - w3 * gamma as i64;
                    if lead < 0 || excluded.contains(&(alpha, beta, gamma)) {
                        continue;
                    }
                    basis.push((alpha, beta, gamma));
                }
            }
        }
        let index = basis.iter().copied().enumerate().map(|(k, t)| (t, k)).collect();
        MonomialSpace { which, variables, degree, basis, excluded, index }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, idx: (u8, u8, u8)) -> Option<usize> {
        self.index.get(&idx).copied()
    }

    fn exponents(&self, idx: (u8, u8, u8)) -> [i64; 4] {
        let w3 = self.variables[3].1 as i64;
        let lead = self.degree as i64 - idx.0 as i64 - idx.1 as i64 - w3 * idx.2 as i64;
        [lead, idx.0 as i64, idx.1 as i64, idx.2 as i64]
    }

    /// Product rendering of the monomial behind basis element k, like `x0*x1`.
    pub fn monomial_string(&self, k: usize) -> String {
        let e = self.exponents(self.basis[k]);
        let mut parts = Vec::new();
        for (slot, &(name, _)) in self.variables.iter().enumerate() {
            match e[slot] {
                0 => {}
                1 => parts.push(name.to_string()),
                n => parts.push(format!("{name}^{n}")),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// A monomial matrix: basis vector `src` maps to `coeff[src]`·(basis vector
/// `target[src]`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RepMatrix {
    pub target: Vec<usize>,
    pub coeff: Vec<Zeta3>,
}

impl RepMatrix {
    pub fn dim(&self) -> usize {
        self.target.len()
    }

    pub fn identity(dim: usize) -> Self {
        RepMatrix { target: (0..dim).collect(), coeff: vec![Zeta3::one(); dim] }
    }

    /// Matrix product self·rhs.
    pub fn compose(&self, rhs: &RepMatrix) -> RepMatrix {
        let target = rhs.target.iter().map(|&mid| self.target[mid]).collect();
        let coeff = rhs
            .target
            .iter()
            .zip(&rhs.coeff)
            .map(|(&mid, c)| &self.coeff[mid] * c)
            .collect();
        RepMatrix { target, coeff }
    }

    pub fn apply(&self, v: &[Zeta3]) -> Vec<Zeta3> {
        let mut out = vec![Zeta3::zero(); v.len()];
        for (src, c) in self.coeff.iter().enumerate() {
            if !v[src].is_zero() {
                let t = self.target[src];
                out[t] = &out[t] + &(c * &v[src]);
            }
        }
        out
    }

    pub fn trace(&self) -> Zeta3 {
        let mut acc = Zeta3::zero();
        for (src, c) in self.coeff.iter().enumerate() {
            if self.target[src] == src {
                acc = &acc + c;
            }
        }
        acc
    }

    pub fn dense(&self) -> Vec<Vec<Zeta3>> {
        let n = self.dim();
        let mut rows = vec![vec![Zeta3::zero(); n]; n];
        for (src, c) in self.coeff.iter().enumerate() {
            rows[self.target[src]][src] = c.clone();
        }
        rows
    }
}

fn zpow(z: &Zeta3, e: i64) -> Zeta3 {
    if e >= 0 {
        z.pow(e as u64)
    } else {
        z.inv().expect("unit coefficient").pow((-e) as u64)
    }
}

/// The closed-form action of g on one basis monomial: target index and
/// coefficient.
fn closed_entry(which: Which, g: GElem, src: (u8, u8, u8)) -> ((u8, u8, u8), Zeta3) {
    let (alpha, beta, gamma) = (src.0 as i64, src.1 as i64, src.2 as i64);
    let (i, j, a, b) = (g.i as i64, g.j as i64, g.a as i64, g.b as i64);
    match which {
        Which::C1 => {
            let alpha_t = alpha - (2 * alpha + beta + gamma - 2) * j;
            let negate = (j * (beta - 1)).rem_euclid(2) == 1;
            let zexp = a * (beta - 2) + b * (gamma - 2) + (alpha_t + 2 * beta + 2 * gamma - 7) * i;
            let mut c = Zeta3::zeta3_pow(zexp);
            if negate {
                c = -c;
            }
            ((alpha_t as u8, beta as u8, gamma as u8), c)
        }
        Which::C2 => {
            let alpha_t = alpha - (2 * alpha + beta + 2 * gamma - 4) * j;
            let zexp =
                a * (2 * beta + gamma) + b * (beta + gamma - 4) + (alpha_t + 2 * beta + gamma + 1) * i;
            let mut c = Zeta3::zeta3_pow(zexp);
            if j == 1 {
                c = -c;
            }
            ((alpha_t as u8, beta as u8, gamma as u8), c)
        }
    }
}

/// All 54 action matrices on the chosen space, indexed by element index.
pub fn action_matrices(which: Which) -> &'static Vec<RepMatrix> {
    static C1M: OnceLock<Vec<RepMatrix>> = OnceLock::new();
    static C2M: OnceLock<Vec<RepMatrix>> = OnceLock::new();
    let cell = match which {
        Which::C1 => &C1M,
        Which::C2 => &C2M,
    };
    cell.get_or_init(|| {
        let space = MonomialSpace::get(which);
        GElem::all()
            .map(|g| {
                let mut target = Vec::with_capacity(space.dim());
                let mut coeff = Vec::with_capacity(space.dim());
                for &src in &space.basis {
                    let (tgt, c) = closed_entry(which, g, src);
                    let t = space
                        .index_of(tgt)
                        .expect("the excluded set is swap-stable, images stay in the basis");
                    target.push(t);
                    coeff.push(c);
                }
                RepMatrix { target, coeff }
            })
            .collect()
    })
}

/// The matrix of g acting on the chosen space of 1-forms.
pub fn action_matrix(g: GElem, which: Which) -> &'static RepMatrix {
    &action_matrices(which)[g.idx()]
}

/// The matrix of the pullback φ(h)^* on the monomial 1-form basis, computed
/// by coordinate substitution. The action of g is the pullback by φ(g⁻¹), so
/// `action_matrix(g) == pullback_matrix(g⁻¹)` is the cross-check identity.
pub fn pullback_matrix(h: GElem, which: Which) -> RepMatrix {
    let space = MonomialSpace::get(which);
    let (i, j, a, b) = (h.i as i64, h.j as i64, h.a as i64, h.b as i64);
    // Substitution scalars for the affine coordinates (first chart variable
    // U, then the two curve variables V, T) and the U-exponents they carry
    // in the j = 1 (swap) case.
    let (c_u, c_v, c_t, e_v, e_t) = match which {
        Which::C1 => {
            let mut c_v = Zeta3::zeta3_pow(2 * a + i);
            if j == 1 {
                c_v = -c_v;
            }
            (Zeta3::zeta3_pow(-i), c_v, Zeta3::zeta3_pow(2 * b + i), 1i64, 1i64)
        }
        Which::C2 => (
            Zeta3::zeta3_pow(-i),
            Zeta3::zeta3_pow(a + 2 * b + i),
            Zeta3::zeta3_pow(2 * a + 2 * b - i),
            1,
            2,
        ),
    };
    let mut target = Vec::with_capacity(space.dim());
    let mut coeff = Vec::with_capacity(space.dim());
    for &src in &space.basis {
        let (alpha, beta, gamma) = (src.0 as i64, src.1 as i64, src.2 as i64);
        // ω = U^α V^{β−2} T^{γ−2} dU pulls back monomially.
        let mut c = &zpow(&c_u, alpha + 1) * &zpow(&c_v, beta - 2);
        c = &c * &zpow(&c_t, gamma - 2);
        let tgt = if j == 0 {
            src
        } else {
            c = -c;
            let alpha_new = space.degree as i64 - alpha - e_v * beta - e_t * gamma;
            (alpha_new as u8, src.1, src.2)
        };
        let t = space.index_of(tgt).expect("swap keeps the basis");
        target.push(t);
        coeff.push(c);
    }
    RepMatrix { target, coeff }
}

/// Validates a full family of 54 matrices: multiplicativity on all 54×54
/// pairs, then agreement with the independent pullback construction.
pub fn verify_matrix_family(which: Which, mats: &[RepMatrix]) -> Result<(), FormsError> {
    let grp = FiniteGroup::builtin();
    for x in 0..GROUP_ORDER {
        for y in 0..GROUP_ORDER {
            let composed = mats[x].compose(&mats[y]);
            if composed != mats[grp.mul_idx(x, y)] {
                return Err(FormsError::NotHomomorphic {
                    g: GElem::from_idx(x),
                    h: GElem::from_idx(y),
                });
            }
        }
    }
    for g in GElem::all() {
        if *action_matrix(g, which) != pullback_matrix(g_inv(g), which) {
            return Err(FormsError::PullbackMismatch { g });
        }
    }
    Ok(())
}

/// Checks that the builtin action matrices define an action, both
/// multiplicatively and against the pullback route. The verdict for each
/// space is computed once and cached.
pub fn verify_homomorphism(which: Which) -> Result<(), FormsError> {
    static C1V: OnceLock<Result<(), FormsError>> = OnceLock::new();
    static C2V: OnceLock<Result<(), FormsError>> = OnceLock::new();
    let cell = match which {
        Which::C1 => &C1V,
        Which::C2 => &C2V,
    };
    cell.get_or_init(|| verify_matrix_family(which, action_matrices(which)))
        .clone()
}

// ---------------------------------------------------------------------------
// Vectors and exact linear algebra
// ---------------------------------------------------------------------------

/// A vector of coefficients over a monomial basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormVector {
    pub which: Which,
    pub coeffs: Vec<Zeta3>,
}

impl FormVector {
    pub fn zero(which: Which) -> Self {
        FormVector { which, coeffs: vec![Zeta3::zero(); MonomialSpace::get(which).dim()] }
    }

    /// The (possibly expanded) monomial ω_{αβγ} as a vector. Out-of-basis
    /// indices with β ≥ 3 on the second curve reduce via y2³ = y0³ + y1³.
    pub fn monomial(which: Which, idx: (u8, u8, u8)) -> Result<Self, FormsError> {
        let mut v = Self::zero(which);
        for k in expand_index(which, idx)? {
            v.coeffs[k] = &v.coeffs[k] + &Zeta3::one();
        }
        Ok(v)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.which, rhs.which);
        FormVector {
            which: self.which,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.which, rhs.which);
        FormVector {
            which: self.which,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn scale(&self, c: &Zeta3) -> Self {
        FormVector { which: self.which, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

fn expand_index(which: Which, idx: (u8, u8, u8)) -> Result<Vec<usize>, FormsError> {
    let space = MonomialSpace::get(which);
    if let Some(k) = space.index_of(idx) {
        return Ok(vec![k]);
    }
    let (alpha, beta, gamma) = idx;
    let w3 = space.variables[3].1 as i64;
    let lead = space.degree as i64 - alpha as i64 - beta as i64 - w3 * gamma as i64;
    if which == Which::C2 && beta >= 3 && lead >= 0 {
        let mut out = expand_index(which, (alpha, beta - 3, gamma))?;
        out.extend(expand_index(which, (alpha + 3, beta - 3, gamma))?);
        return Ok(out);
    }
    Err(FormsError::InvalidIndex(alpha, beta, gamma))
}

/// Incremental row reduction over Q(ζ3): rows kept normalized with unit
/// pivots, pivots strictly increasing per insertion history.
struct Echelon {
    rows: Vec<Vec<Zeta3>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new(), pivots: Vec::new() }
    }

    fn residual(&self, v: &[Zeta3]) -> Vec<Zeta3> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for (slot, r) in v.iter_mut().zip(row) {
                *slot = &*slot - &(&factor * r);
            }
        }
        v
    }

    fn contains(&self, v: &[Zeta3]) -> bool {
        self.residual(v).iter().all(|c| c.is_zero())
    }

    /// Inserts the vector; returns false if it was already in the span.
    fn insert(&mut self, v: &[Zeta3]) -> bool {
        let r = self.residual(v);
        match r.iter().position(|c| !c.is_zero()) {
            None => false,
            Some(p) => {
                let inv = r[p].inv().expect("pivot is nonzero");
                self.rows.push(r.iter().map(|c| c * &inv).collect());
                self.pivots.push(p);
                true
            }
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

fn matrix_rank(rows: &[Vec<Zeta3>]) -> usize {
    let mut ech = Echelon::new();
    for row in rows {
        ech.insert(row);
    }
    ech.rank()
}

// ---------------------------------------------------------------------------
// Isotypic projectors
// ---------------------------------------------------------------------------

/// The projector P_χ = (dim χ/|G|)·Σ_g conj(χ(g))·M(g) onto the χ-isotypic
/// part, as a dense matrix (rows indexed by target).
pub fn isotypic_projector(chi: &Character, which: Which) -> Vec<Vec<Zeta3>> {
    let space = MonomialSpace::get(which);
    let n = space.dim();
    let mut rows = vec![vec![Zeta3::zero(); n]; n];
    for g in GElem::all() {
        let m = action_matrix(g, which);
        let weight = chi.value(g).conj();
        for (src, c) in m.coeff.iter().enumerate() {
            let t = m.target[src];
            rows[t][src] = &rows[t][src] + &(&weight * c);
        }
    }
    let scale = Zeta3::from_rat(ratq(chi.dim() as i64, GROUP_ORDER as i64));
    for row in &mut rows {
        for entry in row.iter_mut() {
            *entry = &*entry * &scale;
        }
    }
    rows
}

pub fn mat_apply(m: &[Vec<Zeta3>], v: &[Zeta3]) -> Vec<Zeta3> {
    m.iter()
        .map(|row| {
            let mut acc = Zeta3::zero();
            for (r, x) in row.iter().zip(v) {
                if !r.is_zero() && !x.is_zero() {
                    acc = &acc + &(r * x);
                }
            }
            acc
        })
        .collect()
}

pub fn projector_rank(p: &[Vec<Zeta3>]) -> usize {
    matrix_rank(p)
}

// ---------------------------------------------------------------------------
// Tensor space
// ---------------------------------------------------------------------------

/// Dimension of the tensor space (10 × 19).
pub const TENSOR_DIM: usize = 190;

fn tensor_split(t: usize) -> (usize, usize) {
    (t / 19, t % 19)
}

fn tensor_join(s1: usize, s2: usize) -> usize {
    s1 * 19 + s2
}

/// A 2-form on the product, over the basis ω_{jkl} ⊗ ω′_{mrs}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorForm {
    pub coeffs: Vec<Zeta3>,
}

impl TensorForm {
    pub fn zero() -> Self {
        TensorForm { coeffs: vec![Zeta3::zero(); TENSOR_DIM] }
    }

    /// The basis tensor ω_{jkl} ⊗ ω′_{mrs}, with the second factor expanded
    /// through the curve relation when its index is out of basis.
    pub fn basis(c1_idx: (u8, u8, u8), c2_idx: (u8, u8, u8)) -> Result<Self, FormsError> {
        let s1 = MonomialSpace::get(Which::C1)
            .index_of(c1_idx)
            .ok_or(FormsError::InvalidIndex(c1_idx.0, c1_idx.1, c1_idx.2))?;
        let mut v = Self::zero();
        for s2 in expand_index(Which::C2, c2_idx)? {
            let t = tensor_join(s1, s2);
            v.coeffs[t] = &v.coeffs[t] + &Zeta3::one();
        }
        Ok(v)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        TensorForm {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        TensorForm {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn scale(&self, c: &Zeta3) -> Self {
        TensorForm { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn term_strings(&self, render: impl Fn(usize, usize) -> String) -> String {
        let mut out = String::new();
        for (t, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (s1, s2) = tensor_split(t);
            let sym = render(s1, s2);
            let one = Zeta3::one();
            let minus_one = Zeta3::from_int(-1);
            if out.is_empty() {
                if *c == one {
                    out.push_str(&sym);
                } else if *c == minus_one {
                    out.push_str(&format!("-{sym}"));
                } else {
                    out.push_str(&format!("({c})*{sym}"));
                }
            } else if *c == one {
                out.push_str(&format!(" + {sym}"));
            } else if *c == minus_one {
                out.push_str(&format!(" - {sym}"));
            } else {
                out.push_str(&format!(" + ({c})*{sym}"));
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }

    /// Six-index rendering like `ω_{100021}`.
    pub fn six_index_string(&self) -> String {
        let b1 = &MonomialSpace::get(Which::C1).basis;
        let b2 = &MonomialSpace::get(Which::C2).basis;
        self.term_strings(|s1, s2| {
            let (j, k, l) = b1[s1];
            let (m, r, s) = b2[s2];
            format!("ω_{{{j}{k}{l}{m}{r}{s}}}")
        })
    }

    /// Product-of-monomials rendering like `x0*x1*y2^2*y3`.
    pub fn monomial_string(&self) -> String {
        let sp1 = MonomialSpace::get(Which::C1);
        let sp2 = MonomialSpace::get(Which::C2);
        self.term_strings(|s1, s2| {
            let a = sp1.monomial_string(s1);
            let b = sp2.monomial_string(s2);
            match (a.as_str(), b.as_str()) {
                ("1", "1") => "1".into(),
                ("1", _) => b,
                (_, "1") => a,
                _ => format!("{a}*{b}"),
            }
        })
    }
}

/// Applies the twisted action of g (M₁(g) ⊗ M₂(Ψ(g))) to a tensor.
pub fn twisted_apply(psi: &GroupAutomorphism, g: GElem, v: &TensorForm) -> TensorForm {
    let m1 = action_matrix(g, Which::C1);
    let m2 = action_matrix(psi.apply(g), Which::C2);
    let mut out = TensorForm::zero();
    for (t, c) in v.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (s1, s2) = tensor_split(t);
        let tt = tensor_join(m1.target[s1], m2.target[s2]);
        let factor = &m1.coeff[s1] * &m2.coeff[s2];
        out.coeffs[tt] = &out.coeffs[tt] + &(c * &factor);
    }
    out
}

/// Basis of the invariant 2-forms under the twisted action, by transporting
/// phases along the orbits of the monomial basis under the four generators.
/// An orbit whose transported phases close up consistently contributes one
/// invariant vector; an inconsistent orbit contributes nothing. The count is
/// checked against the character-theoretic prediction.
pub fn invariant_tensors(psi: &GroupAutomorphism) -> Result<Vec<TensorForm>, FormsError> {
    let m1 = action_matrices(Which::C1);
    let m2 = action_matrices(Which::C2);
    let gens = [SIG, TAU, E1, E2];
    let edges: Vec<Vec<(usize, Zeta3)>> = gens
        .iter()
        .map(|&gen| {
            let a1 = &m1[gen.idx()];
            let a2 = &m2[psi.apply(gen).idx()];
            (0..TENSOR_DIM)
                .map(|t| {
                    let (s1, s2) = tensor_split(t);
                    (
                        tensor_join(a1.target[s1], a2.target[s2]),
                        &a1.coeff[s1] * &a2.coeff[s2],
                    )
                })
                .collect()
        })
        .collect();
    let mut phase: Vec<Option<Zeta3>> = vec![None; TENSOR_DIM];
    let mut out = Vec::new();
    for root in 0..TENSOR_DIM {
        if phase[root].is_some() {
            continue;
        }
        phase[root] = Some(Zeta3::one());
        let mut orbit = vec![root];
        let mut queue = vec![root];
        let mut consistent = true;
        while let Some(t) = queue.pop() {
            let here = phase[t].clone().unwrap();
            for edge in &edges {
                let (next, c) = &edge[t];
                let transported = &here * c;
                match &phase[*next] {
                    None => {
                        phase[*next] = Some(transported);
                        orbit.push(*next);
                        queue.push(*next);
                    }
                    Some(existing) => {
                        if *existing != transported {
                            consistent = false;
                        }
                    }
                }
            }
        }
        if consistent {
            let mut v = TensorForm::zero();
            for &t in &orbit {
                v.coeffs[t] = phase[t].clone().unwrap();
            }
            out.push(v);
        }
    }
    let spec = SurfaceSpec::new("probe", psi.clone(), LambdaRegime::Generic);
    let expected =
        pg_by_characters(&spec).map_err(|e| FormsError::Prod(e.to_string()))? as usize;
    if out.len() != expected {
        return Err(FormsError::DimensionMismatch { found: out.len(), expected });
    }
    Ok(out)
}

/// The same space computed the slow way: the image of the averaging
/// projector (1/|G|)·Σ_g M₁(g) ⊗ M₂(Ψ(g)), extracted column by column.
pub fn invariant_tensors_by_averaging(psi: &GroupAutomorphism) -> Vec<TensorForm> {
    let m1 = action_matrices(Which::C1);
    let m2 = action_matrices(Which::C2);
    let scale = Zeta3::from_rat(ratq(1, GROUP_ORDER as i64));
    let mut ech = Echelon::new();
    let mut out = Vec::new();
    for k in 0..TENSOR_DIM {
        let (s1, s2) = tensor_split(k);
        let mut col = vec![Zeta3::zero(); TENSOR_DIM];
        for g in GElem::all() {
            let a1 = &m1[g.idx()];
            let a2 = &m2[psi.apply(g).idx()];
            let t = tensor_join(a1.target[s1], a2.target[s2]);
            let c = &a1.coeff[s1] * &a2.coeff[s2];
            col[t] = &col[t] + &c;
        }
        for c in &mut col {
            *c = &*c * &scale;
        }
        if ech.insert(&col) {
            out.push(TensorForm { coeffs: col });
        }
    }
    out
}

/// True when the two lists of tensors span the same subspace.
pub fn same_span(a: &[TensorForm], b: &[TensorForm]) -> bool {
    let mut ea = Echelon::new();
    for v in a {
        ea.insert(&v.coeffs);
    }
    let mut eb = Echelon::new();
    for v in b {
        eb.insert(&v.coeffs);
    }
    ea.rank() == eb.rank()
        && a.iter().all(|v| eb.contains(&v.coeffs))
        && b.iter().all(|v| ea.contains(&v.coeffs))
}

/// Verifies a claimed basis of the invariant 2-forms: every form must be
/// nonzero and fixed by all 54 twisted actions, and together they must span
/// the full invariant space.
pub fn check_table_basis(
    psi: &GroupAutomorphism,
    claimed: &[TensorForm],
) -> Result<(), FormsError> {
    for (index, v) in claimed.iter().enumerate() {
        if v.is_zero() {
            return Err(FormsError::ZeroForm { index });
        }
        for g in GElem::all() {
            if twisted_apply(psi, g, v) != *v {
                return Err(FormsError::NonInvariant { index, witness: g });
            }
        }
    }
    let invariants = invariant_tensors(psi)?;
    let mut ech = Echelon::new();
    for v in claimed {
        ech.insert(&v.coeffs);
    }
    if ech.rank() < invariants.len() {
        return Err(FormsError::NotSpanning { rank: ech.rank(), dim: invariants.len() });
    }
    Ok(())
}

/// The published basis of invariant 2-forms for the n-th builtin surface.
pub fn table_basis(n: usize) -> Vec<TensorForm> {
    let t = |c1, c2| TensorForm::basis(c1, c2).expect("table index");
    match n {
        1 => vec![
            t((1, 0, 0), (0, 2, 1)),
            t((0, 2, 0), (2, 0, 0)),
            t((0, 0, 2), (0, 4, 0)),
        ],
        2 => vec![
            t((0, 2, 0), (1, 0, 1)),
            t((0, 0, 2), (2, 0, 0)),
            t((0, 1, 0), (0, 2, 0))
                .scale(&Zeta3::zeta3_pow(1))
                .sub(&t((1, 1, 0), (2, 2, 0))),
        ],
        3 => vec![
            t((1, 0, 0), (0, 0, 2)),
            t((0, 2, 0), (0, 4, 0)),
            t((0, 0, 1), (2, 2, 0)).add(&t((1, 0, 1), (0, 2, 0))),
        ],
        4 => vec![
            t((1, 0, 0), (1, 2, 0)),
            t((0, 2, 0), (1, 0, 1)),
            t((0, 0, 0), (0, 2, 0)).add(&t((2, 0, 0), (2, 2, 0))),
        ],
        _ => panic!("no builtin surface #{n}"),
    }
}

/// The published isotypic span decompositions of the two curve spaces, as
/// (irreducible, spanning vectors) pairs.
pub fn isotypic_span_table(which: Which) -> Vec<(Irrep, Vec<FormVector>)> {
    let m = |idx| FormVector::monomial(which, idx).expect("span index");
    match which {
        Which::C1 => vec![
            (Irrep::new(S3Kind::Triv, 2, 2), vec![m((0, 1, 1))]),
            (Irrep::new(S3Kind::Sgn, 1, 1), vec![m((1, 0, 0))]),
            (Irrep::new(S3Kind::Sgn, 0, 1), vec![m((0, 2, 0))]),
            (Irrep::new(S3Kind::Sgn, 1, 0), vec![m((0, 0, 2))]),
            (Irrep::new(S3Kind::Std, 1, 1), vec![m((0, 0, 0)), m((2, 0, 0))]),
            (Irrep::new(S3Kind::Std, 2, 1), vec![m((0, 1, 0)), m((1, 1, 0))]),
            (Irrep::new(S3Kind::Std, 1, 2), vec![m((0, 0, 1)), m((1, 0, 1))]),
        ],
        Which::C2 => vec![
            (Irrep::new(S3Kind::Sgn, 2, 1), vec![m((0, 0, 2))]),
            (Irrep::new(S3Kind::Sgn, 2, 2), vec![m((0, 2, 1))]),
            (Irrep::new(S3Kind::Sgn, 1, 1), vec![m((1, 2, 0))]),
            (Irrep::new(S3Kind::Sgn, 1, 0), vec![m((1, 0, 1))]),
            (Irrep::new(S3Kind::Sgn, 0, 2), vec![m((2, 0, 0))]),
            (Irrep::new(S3Kind::Std, 1, 0), vec![m((0, 0, 1)), m((2, 0, 1))]),
            (Irrep::new(S3Kind::Std, 0, 1), vec![m((0, 1, 1)), m((1, 1, 1))]),
            (Irrep::new(S3Kind::Std, 0, 2), vec![m((0, 0, 0)), m((4, 0, 0))]),
            (Irrep::new(S3Kind::Std, 0, 2), vec![m((1, 0, 0)), m((3, 0, 0))]),
            (Irrep::new(S3Kind::Sgn, 2, 0), vec![m((0, 1, 0)).add(&m((3, 1, 0)))]),
            (Irrep::new(S3Kind::Triv, 2, 0), vec![m((0, 1, 0)).sub(&m((3, 1, 0)))]),
            (Irrep::new(S3Kind::Std, 2, 0), vec![m((1, 1, 0)), m((2, 1, 0))]),
            (Irrep::new(S3Kind::Std, 1, 1), vec![m((2, 2, 0)), m((0, 2, 0))]),
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::irreducible_table;
    use crate::covers::{canonical_character, curve1, curve2};
    use crate::group::named_automorphism;

    #[test]
    fn space_shapes() {
        let sp1 = MonomialSpace::get(Which::C1);
        assert_eq!(sp1.dim(), 10);
        assert!(sp1.excluded.is_empty());
        let sp2 = MonomialSpace::get(Which::C2);
        assert_eq!(sp2.dim(), 19);
        assert_eq!(sp2.excluded.len(), 3);
        // Exclusions are swap-stable: 4−α−β−2γ stays an excluded α.
        for &(a, b, g) in &sp2.excluded {
            let swapped = ((4 - a as i64 - b as i64 - 2 * g as i64) as u8, b, g);
            assert!(sp2.excluded.contains(&swapped));
        }
    }

    #[test]
    fn monomial_strings() {
        let sp1 = MonomialSpace::get(Which::C1);
        let k = sp1.index_of((1, 0, 0)).unwrap();
        assert_eq!(sp1.monomial_string(k), "x0*x1");
        let sp2 = MonomialSpace::get(Which::C2);
        let k = sp2.index_of((0, 2, 1)).unwrap();
        assert_eq!(sp2.monomial_string(k), "y2^2*y3");
    }

    #[test]
    fn sigma_multiplies_omega000_by_zeta3_squared() {
        let sp = MonomialSpace::get(Which::C1);
        let src = sp.index_of((0, 0, 0)).unwrap();
        let m = action_matrix(SIG, Which::C1);
        assert_eq!(m.target[src], src);
        assert_eq!(m.coeff[src], Zeta3::zeta3_pow(2));
    }

    #[test]
    fn identity_matrices() {
        for which in [Which::C1, Which::C2] {
            let dim = MonomialSpace::get(which).dim();
            assert_eq!(*action_matrix(crate::group::ID, which), RepMatrix::identity(dim));
        }
    }

    #[test]
    fn actions_are_homomorphic_and_match_pullbacks() {
        verify_homomorphism(Which::C1).unwrap();
        verify_homomorphism(Which::C2).unwrap();
    }

    #[test]
    fn corrupted_sign_is_caught_with_witness() {
        let mut mats: Vec<RepMatrix> = action_matrices(Which::C1).clone();
        let tau = TAU.idx();
        mats[tau].coeff[0] = -mats[tau].coeff[0].clone();
        let err = verify_matrix_family(Which::C1, &mats).unwrap_err();
        assert!(matches!(err, FormsError::NotHomomorphic { .. }));
    }

    #[test]
    fn traces_reproduce_canonical_characters() {
        let chi1 = canonical_character(curve1()).unwrap();
        let chi2 = canonical_character(curve2()).unwrap();
        for g in GElem::all() {
            assert_eq!(action_matrix(g, Which::C1).trace(), *chi1.value(g), "C1 at {g}");
            assert_eq!(action_matrix(g, Which::C2).trace(), *chi2.value(g), "C2 at {g}");
        }
    }

    fn find_chi(label: &str) -> &'static Character {
        &irreducible_table(FiniteGroup::builtin())
            .iter()
            .find(|(r, _)| r.label() == label)
            .unwrap()
            .1
    }

    #[test]
    fn projector_examples() {
        let p = isotypic_projector(find_chi("ε1²·ε2²"), Which::C1);
        assert_eq!(projector_rank(&p), 1);
        let sp = MonomialSpace::get(Which::C1);
        let e = FormVector::monomial(Which::C1, (0, 1, 1)).unwrap();
        assert_eq!(mat_apply(&p, &e.coeffs), e.coeffs);
        let _ = sp;
        let p2 = isotypic_projector(find_chi("μ·ε2²"), Which::C2);
        assert_eq!(projector_rank(&p2), 4);
    }

    #[test]
    fn projectors_are_complete_idempotent_and_orthogonal() {
        for which in [Which::C1, Which::C2] {
            let n = MonomialSpace::get(which).dim();
            let table = irreducible_table(FiniteGroup::builtin());
            let projectors: Vec<Vec<Vec<Zeta3>>> =
                table.iter().map(|(_, chi)| isotypic_projector(chi, which)).collect();
            // Sum to identity.
            let mut total = vec![vec![Zeta3::zero(); n]; n];
            for p in &projectors {
                for (r, row) in p.iter().enumerate() {
                    for (c, v) in row.iter().enumerate() {
                        total[r][c] = &total[r][c] + v;
                    }
                }
            }
            for (r, row) in total.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    let expected =
                        if r == c { Zeta3::one() } else { Zeta3::zero() };
                    assert_eq!(*v, expected, "sum at ({r},{c}) on {which}");
                }
            }
            // Idempotence, and ranks adding to the dimension.
            let mut rank_total = 0;
            for p in &projectors {
                rank_total += projector_rank(p);
                for k in 0..n {
                    let col: Vec<Zeta3> = p.iter().map(|row| row[k].clone()).collect();
                    assert_eq!(mat_apply(p, &col), col);
                }
            }
            assert_eq!(rank_total, n);
            // Mutual annihilation on column spaces.
            for (x, px) in projectors.iter().enumerate() {
                for (y, py) in projectors.iter().enumerate() {
                    if x == y {
                        continue;
                    }
                    for k in 0..n {
                        let col: Vec<Zeta3> = py.iter().map(|row| row[k].clone()).collect();
                        if col.iter().all(|c| c.is_zero()) {
                            continue;
                        }
                        assert!(
                            mat_apply(px, &col).iter().all(|c| c.is_zero()),
                            "projector pair ({x},{y}) on {which}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn published_spans_sit_in_their_isotypic_components() {
        for which in [Which::C1, Which::C2] {
            let spans = isotypic_span_table(which);
            let total: usize = spans.iter().map(|(_, vs)| vs.len()).sum();
            assert_eq!(total, MonomialSpace::get(which).dim());
            for (irrep, vectors) in &spans {
                let p = isotypic_projector(&irrep.character(), which);
                for v in vectors {
                    assert_eq!(mat_apply(&p, &v.coeffs), v.coeffs, "{irrep} span on {which}");
                }
                // Any other projector annihilates the span.
                for (other, chi) in irreducible_table(FiniteGroup::builtin()) {
                    if other == irrep {
                        continue;
                    }
                    let q = isotypic_projector(chi, which);
                    for v in vectors {
                        assert!(
                            mat_apply(&q, &v.coeffs).iter().all(|c| c.is_zero()),
                            "{other} should kill the {irrep} span on {which}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn invariant_bases_match_the_published_table() {
        for n in 1..=4 {
            let psi = named_automorphism(n);
            let inv = invariant_tensors(&psi).unwrap();
            assert_eq!(inv.len(), 3, "surface {n}");
            check_table_basis(&psi, &table_basis(n)).unwrap();
            assert!(same_span(&inv, &table_basis(n)), "surface {n}");
            let averaged = invariant_tensors_by_averaging(&psi);
            assert!(same_span(&inv, &averaged), "averaging route, surface {n}");
        }
    }

    #[test]
    fn table_checks_reject_bad_claims() {
        let psi = named_automorphism(1);
        let short = vec![table_basis(1).remove(0)];
        assert!(matches!(
            check_table_basis(&psi, &short),
            Err(FormsError::NotSpanning { rank: 1, dim: 3 })
        ));
        let non_invariant = vec![TensorForm::basis((0, 0, 0), (0, 0, 0)).unwrap()];
        assert!(matches!(
            check_table_basis(&psi, &non_invariant),
            Err(FormsError::NonInvariant { index: 0, .. })
        ));
        let zero = vec![TensorForm::zero()];
        assert!(matches!(
            check_table_basis(&psi, &zero),
            Err(FormsError::ZeroForm { index: 0 })
        ));
    }

    #[test]
    fn renderings_of_table_forms() {
        let row1 = table_basis(1);
        assert_eq!(row1[0].six_index_string(), "ω_{100021}");
        assert_eq!(row1[0].monomial_string(), "x0*x1*y2^2*y3");
        // The expanded form of ω_{002040} = ω_{002} ⊗ (ω′_{010} + ω′_{310}).
        assert_eq!(row1[2].six_index_string(), "ω_{002010} + ω_{002310}");
        let row2 = table_basis(2);
        assert_eq!(row2[2].six_index_string(), "(z3)*ω_{010020} - ω_{110220}");
    }

    #[test]
    fn alias_expansion_uses_the_curve_relation() {
        let v = FormVector::monomial(Which::C2, (0, 4, 0)).unwrap();
        let expected = FormVector::monomial(Which::C2, (0, 1, 0))
            .unwrap()
            .add(&FormVector::monomial(Which::C2, (3, 1, 0)).unwrap());
        assert_eq!(v, expected);
        assert!(FormVector::monomial(Which::C2, (5, 0, 0)).is_err());
        assert!(FormVector::monomial(Which::C1, (3, 0, 0)).is_err());
    }
}
