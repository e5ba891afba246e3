//! The group G = S3 × Z3², its Cayley structure, conjugacy classes, and the
//! full automorphism group.
//!
//! Elements are quadruples (i, j, a, b) meaning σ^i τ^j on the S3 factor and
//! a·e1 + b·e2 on the Z3² factor. The S3 law is forced by τστ = σ²:
//!
//! ```text
//! (σ^i τ^j, (a,b)) · (σ^{i'} τ^{j'}, (a',b')) = (σ^{i+(−1)^j i'} τ^{j+j'}, (a+a', b+b'))
//! ```
//!
//! Automorphisms are found by brute force over generator images: the search
//! space is small once candidates are filtered by element order, and each
//! survivor is extended to all 54 elements and re-verified multiplicatively.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

/// Order of the builtin group.
pub const GROUP_ORDER: usize = 54;

/// Errors from group-level constructions.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("generator images do not extend to an automorphism: {0}")]
    NotAutomorphism(String),
}

/// An element σ^i τ^j · (a·e1 + b·e2) of S3 × Z3².
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct GElem {
    pub i: u8,
    pub j: u8,
    pub a: u8,
    pub b: u8,
}

pub const ID: GElem = GElem { i: 0, j: 0, a: 0, b: 0 };
pub const SIG: GElem = GElem { i: 1, j: 0, a: 0, b: 0 };
pub const TAU: GElem = GElem { i: 0, j: 1, a: 0, b: 0 };
pub const E1: GElem = GElem { i: 0, j: 0, a: 1, b: 0 };
pub const E2: GElem = GElem { i: 0, j: 0, a: 0, b: 1 };

impl GElem {
    /// Builds an element, reducing each component into its cyclic range.
    pub fn new(i: i64, j: i64, a: i64, b: i64) -> Self {
        GElem {
            i: i.rem_euclid(3) as u8,
            j: j.rem_euclid(2) as u8,
            a: a.rem_euclid(3) as u8,
            b: b.rem_euclid(3) as u8,
        }
    }

    pub fn is_identity(self) -> bool {
        self == ID
    }

    /// Dense index in 0..54, compatible with [`GElem::from_idx`].
    pub fn idx(self) -> usize {
        (((self.i as usize) * 2 + self.j as usize) * 3 + self.a as usize) * 3 + self.b as usize
    }

    pub fn from_idx(n: usize) -> Self {
        assert!(n < GROUP_ORDER);
        GElem {
            i: (n / 18) as u8,
            j: ((n / 9) % 2) as u8,
            a: ((n / 3) % 3) as u8,
            b: (n % 3) as u8,
        }
    }

    /// All 54 elements in index order.
    pub fn all() -> impl Iterator<Item = GElem> {
        (0..GROUP_ORDER).map(GElem::from_idx)
    }
}

/// Group multiplication.
pub fn g_mul(x: GElem, y: GElem) -> GElem {
    let sign = if x.j == 1 { -1i64 } else { 1 };
    GElem::new(
        x.i as i64 + sign * y.i as i64,
        x.j as i64 + y.j as i64,
        x.a as i64 + y.a as i64,
        x.b as i64 + y.b as i64,
    )
}

/// Group inverse.
pub fn g_inv(x: GElem) -> GElem {
    let i = if x.j == 0 { (3 - x.i) % 3 } else { x.i };
    GElem { i, j: x.j, a: (3 - x.a) % 3, b: (3 - x.b) % 3 }
}

/// x^k for any integer exponent.
pub fn g_pow(x: GElem, k: i64) -> GElem {
    let mut acc = ID;
    let (base, reps) = if k >= 0 { (x, k as u64) } else { (g_inv(x), (-k) as u64) };
    for _ in 0..reps % 6 {
        // every element order divides 6
        acc = g_mul(acc, base);
    }
    acc
}

/// Multiplicative order of an element.
pub fn g_order(x: GElem) -> u32 {
    let mut acc = x;
    let mut n = 1;
    while !acc.is_identity() {
        acc = g_mul(acc, x);
        n += 1;
    }
    n
}

impl fmt::Display for GElem {
    /// Compact form like `(s2t, (2,2))`, with `1` for the trivial S3 part.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s3 = match (self.i, self.j) {
            (0, 0) => "1",
            (1, 0) => "s",
            (2, 0) => "s2",
            (0, 1) => "t",
            (1, 1) => "st",
            _ => "s2t",
        };
        write!(f, "({s3}, ({},{}))", self.a, self.b)
    }
}

/// The group as explicit tables: elements in index order, Cayley table,
/// inverses, orders, and the partition into conjugacy classes.
pub struct FiniteGroup {
    elements: Vec<GElem>,
    cayley: Vec<[u8; GROUP_ORDER]>,
    inv: [u8; GROUP_ORDER],
    order_of: [u32; GROUP_ORDER],
    classes: Vec<Vec<u8>>,
    class_of: [u8; GROUP_ORDER],
}

impl FiniteGroup {
    /// The unique builtin group, built once and shared.
    pub fn builtin() -> &'static FiniteGroup {
        static G: OnceLock<FiniteGroup> = OnceLock::new();
        G.get_or_init(FiniteGroup::build)
    }

    fn build() -> FiniteGroup {
        let elements: Vec<GElem> = GElem::all().collect();
        let mut cayley = vec![[0u8; GROUP_ORDER]; GROUP_ORDER];
        for (xi, &x) in elements.iter().enumerate() {
            for (yi, &y) in elements.iter().enumerate() {
                cayley[xi][yi] = g_mul(x, y).idx() as u8;
            }
        }
        let mut inv = [0u8; GROUP_ORDER];
        let mut order_of = [0u32; GROUP_ORDER];
        for (xi, &x) in elements.iter().enumerate() {
            inv[xi] = g_inv(x).idx() as u8;
            order_of[xi] = g_order(x);
        }
        // Conjugacy classes by orbit sweep in index order.
        let mut class_of = [u8::MAX; GROUP_ORDER];
        let mut classes: Vec<Vec<u8>> = Vec::new();
        for xi in 0..GROUP_ORDER {
            if class_of[xi] != u8::MAX {
                continue;
            }
            let cid = classes.len() as u8;
            let mut members: Vec<u8> = Vec::new();
            for gi in 0..GROUP_ORDER {
                let conj = cayley[cayley[gi][xi] as usize][inv[gi] as usize];
                if class_of[conj as usize] == u8::MAX {
                    class_of[conj as usize] = cid;
                    members.push(conj);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        FiniteGroup { elements, cayley, inv, order_of, classes, class_of }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> &[GElem] {
        &self.elements
    }

    pub fn mul_idx(&self, x: usize, y: usize) -> usize {
        self.cayley[x][y] as usize
    }

    pub fn inv_idx(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    pub fn order_idx(&self, x: usize) -> u32 {
        self.order_of[x]
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x] as usize
    }

    pub fn classes(&self) -> &[Vec<u8>] {
        &self.classes
    }
}

/// The partition of G into conjugacy classes, each class sorted by index.
pub fn conjugacy_classes(g: &FiniteGroup) -> &[Vec<u8>] {
    g.classes()
}

/// A group automorphism stored as a permutation of element indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct GroupAutomorphism {
    image: [u8; GROUP_ORDER],
}

impl GroupAutomorphism {
    pub fn identity() -> Self {
        let mut image = [0u8; GROUP_ORDER];
        for (k, slot) in image.iter_mut().enumerate() {
            *slot = k as u8;
        }
        GroupAutomorphism { image }
    }

    pub fn apply(&self, g: GElem) -> GElem {
        GElem::from_idx(self.image[g.idx()] as usize)
    }

    pub fn apply_idx(&self, g: usize) -> usize {
        self.image[g] as usize
    }

    /// self ∘ other: first `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut image = [0u8; GROUP_ORDER];
        for (k, slot) in image.iter_mut().enumerate() {
            *slot = self.image[other.image[k] as usize];
        }
        GroupAutomorphism { image }
    }

    pub fn inverse(&self) -> Self {
        let mut image = [0u8; GROUP_ORDER];
        for k in 0..GROUP_ORDER {
            image[self.image[k] as usize] = k as u8;
        }
        GroupAutomorphism { image }
    }

    /// Images of the generators (σ, τ, e1, e2), the serialized form.
    pub fn generator_images(&self) -> [GElem; 4] {
        [self.apply(SIG), self.apply(TAU), self.apply(E1), self.apply(E2)]
    }

    /// Full multiplicativity plus bijectivity check against the group tables.
    pub fn is_valid(&self, g: &FiniteGroup) -> bool {
        let mut seen = [false; GROUP_ORDER];
        for &im in &self.image {
            if seen[im as usize] {
                return false;
            }
            seen[im as usize] = true;
        }
        for x in 0..GROUP_ORDER {
            for y in 0..GROUP_ORDER {
                let lhs = self.image[g.mul_idx(x, y)] as usize;
                let rhs = g.mul_idx(self.image[x] as usize, self.image[y] as usize);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// Applies an automorphism to a single element.
pub fn apply_automorphism(psi: &GroupAutomorphism, g: GElem) -> GElem {
    psi.apply(g)
}

/// Extends generator images to the whole group via the normal form
/// g = σ^i τ^j e1^a e2^b, then verifies the result is an automorphism.
pub fn automorphism_from_images(
    g: &FiniteGroup,
    sig_img: GElem,
    tau_img: GElem,
    e1_img: GElem,
    e2_img: GElem,
) -> Result<GroupAutomorphism, GroupError> {
    let mut image = [0u8; GROUP_ORDER];
    for x in GElem::all() {
        let mut im = ID;
        for _ in 0..x.i {
            im = g_mul(im, sig_img);
        }
        for _ in 0..x.j {
            im = g_mul(im, tau_img);
        }
        for _ in 0..x.a {
            im = g_mul(im, e1_img);
        }
        for _ in 0..x.b {
            im = g_mul(im, e2_img);
        }
        image[x.idx()] = im.idx() as u8;
    }
    let psi = GroupAutomorphism { image };
    if psi.is_valid(g) {
        Ok(psi)
    } else {
        Err(GroupError::NotAutomorphism(format!(
            "images ({sig_img}, {tau_img}, {e1_img}, {e2_img}) break multiplicativity or bijectivity"
        )))
    }
}

/// Every automorphism of the builtin group, exactly once, in a deterministic
/// order (sorted by generator images).
///
/// Candidates for the images of (σ, τ, e1, e2) are filtered by element order
/// (3, 2, 3, 3), then by the defining relations: the τ-image must invert the
/// σ-image under conjugation, and the e-images must commute with everything.
/// Each surviving tuple is extended to all 54 elements and fully re-verified.
pub fn enumerate_automorphisms(g: &FiniteGroup) -> Vec<GroupAutomorphism> {
    let order3: Vec<GElem> = GElem::all().filter(|&x| g_order(x) == 3).collect();
    let order2: Vec<GElem> = GElem::all().filter(|&x| g_order(x) == 2).collect();
    let commute = |x: GElem, y: GElem| g_mul(x, y) == g_mul(y, x);
    let mut out: Vec<GroupAutomorphism> = Vec::new();
    for &a in &order3 {
        for &b in &order2 {
            if g_mul(g_mul(b, a), b) != g_inv(a) {
                continue;
            }
            for &e in &order3 {
                if !commute(a, e) || !commute(b, e) {
                    continue;
                }
                for &f in &order3 {
                    if !commute(a, f) || !commute(b, f) || !commute(e, f) {
                        continue;
                    }
                    if f == e || f == g_inv(e) {
                        continue;
                    }
                    if let Ok(psi) = automorphism_from_images(g, a, b, e, f) {
                        out.push(psi);
                    }
                }
            }
        }
    }
    out.sort_by_key(|psi| psi.generator_images());
    out.dedup();
    out
}

/// Conjugation x ↦ g·x·g⁻¹ as an automorphism.
pub fn inner_automorphism(g: GElem) -> GroupAutomorphism {
    let mut image = [0u8; GROUP_ORDER];
    for x in GElem::all() {
        image[x.idx()] = g_mul(g_mul(g, x), g_inv(g)).idx() as u8;
    }
    GroupAutomorphism { image }
}

fn named(images: [GElem; 4]) -> GroupAutomorphism {
    automorphism_from_images(FiniteGroup::builtin(), images[0], images[1], images[2], images[3])
        .expect("builtin automorphism data must extend")
}

/// The four distinguished automorphisms used by the surface constructions,
/// indexed 1 to 4. Ψ1 is the identity; the Z3² parts act by 2×2 matrices
/// over Z3 on row vectors (a, b).
pub fn named_automorphism(n: usize) -> GroupAutomorphism {
    static CACHE: OnceLock<HashMap<usize, GroupAutomorphism>> = OnceLock::new();
    let table = CACHE.get_or_init(|| {
        let mut m = HashMap::new();
        m.insert(1, GroupAutomorphism::identity());
        m.insert(2, named([SIG, g_mul(TAU, SIG), E2, GElem::new(0, 0, 2, 0)]));
        m.insert(3, named([g_inv(SIG), TAU, GElem::new(0, 0, 0, 2), E1]));
        m.insert(4, named([g_inv(SIG), TAU, GElem::new(0, 0, 0, 2), GElem::new(0, 0, 2, 0)]));
        m
    });
    table.get(&n).cloned().unwrap_or_else(|| panic!("no named automorphism #{n}"))
}
