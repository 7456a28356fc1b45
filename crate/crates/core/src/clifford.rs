//! Real Clifford algebras, the module structures carried by horizontal
//! spaces, and the dimension-count obstructions built on them.
//!
//! Signature `(p, q)`: `p` generators square to `+1`, `q` to `-1`.

use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::null_space;
use crate::sampling::SeedStream;
use crate::submersion::SubmersionModel;

/// Largest `p + q` handled.
pub const MAX_GENERATORS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CliffordSignature {
    pub p: usize,
    pub q: usize,
}

impl CliffordSignature {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p + q > MAX_GENERATORS {
            return Err(Error::Config(format!("signature ({p},{q}) exceeds p + q <= {MAX_GENERATORS}")));
        }
        Ok(CliffordSignature { p, q })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    R,
    C,
    H,
}

impl Field {
    pub fn real_dim(self) -> usize {
        match self {
            Field::R => 1,
            Field::C => 2,
            Field::H => 4,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::R => "R",
            Field::C => "C",
            Field::H => "H",
        })
    }
}

/// `summands` copies of `M(size, field)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraClass {
    pub field: Field,
    pub size: usize,
    pub summands: usize,
}

impl AlgebraClass {
    pub fn real_dim(&self) -> usize {
        self.summands * self.simple_real_dim()
    }

    /// Real dimension of one simple summand.
    pub fn simple_real_dim(&self) -> usize {
        self.size * self.size * self.field.real_dim()
    }
}

impl fmt::Display for AlgebraClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = if self.size == 1 { self.field.to_string() } else { format!("M({},{})", self.size, self.field) };
        if self.summands == 2 {
            write!(f, "{one} ⊕ {one}")
        } else {
            f.write_str(&one)
        }
    }
}

/// Bott periodicity table indexed by `(p - q) mod 8`.
pub fn classify(sig: CliffordSignature) -> Result<AlgebraClass> {
    let sig = CliffordSignature::new(sig.p, sig.q)?;
    let r = (sig.p as i64 - sig.q as i64).rem_euclid(8);
    let (field, summands) = match r {
        0 | 2 => (Field::R, 1),
        1 => (Field::R, 2),
        3 | 7 => (Field::C, 1),
        4 | 6 => (Field::H, 1),
        5 => (Field::H, 2),
        _ => unreachable!(),
    };
    let total = 1usize << (sig.p + sig.q);
    let per = total / (summands * field.real_dim());
    let size = (per as f64).sqrt().round() as usize;
    debug_assert_eq!(size * size * summands * field.real_dim(), total);
    Ok(AlgebraClass { field, size, summands })
}

/// Real dimension of an irreducible `Cl_{0,q}` module.
pub fn irreducible_dimension(q: usize) -> Result<usize> {
    let c = classify(CliffordSignature::new(0, q)?)?;
    Ok(c.size * c.field.real_dim())
}

/// Skew generators `A_1..A_s` on `R^n` with `A_a A_b + A_b A_a = -2 δ_ab`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordAction {
    generators: Vec<DMatrix<f64>>,
    dim: usize,
}

/// Tolerance for the defining relations of a [`CliffordAction`].
pub const RELATION_TOL: f64 = 1e-8;

impl CliffordAction {
    pub fn new(generators: Vec<DMatrix<f64>>, dim: usize) -> Result<Self> {
        let id = DMatrix::<f64>::identity(dim, dim);
        let mut worst: f64 = 0.0;
        for (a, ga) in generators.iter().enumerate() {
            if ga.nrows() != dim || ga.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: ga.nrows() });
            }
            worst = worst.max((ga + ga.transpose()).amax());
            for (b, gb) in generators.iter().enumerate().take(a + 1) {
                let target = if a == b { -2.0 * &id } else { DMatrix::zeros(dim, dim) };
                worst = worst.max((ga * gb + gb * ga - target).amax());
            }
        }
        if worst > RELATION_TOL {
            return Err(Error::CliffordRelation { residual: worst, tol: RELATION_TOL });
        }
        Ok(CliffordAction { generators, dim })
    }

    pub fn generators(&self) -> &[DMatrix<f64>] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn signature(&self) -> CliffordSignature {
        CliffordSignature { p: 0, q: self.generators.len() }
    }

    /// `L A_a L^T` for every generator.
    pub fn conjugated(&self, l: &DMatrix<f64>) -> Result<Self> {
        let gens = self.generators.iter().map(|g| l * g * l.transpose()).collect();
        CliffordAction::new(gens, self.dim)
    }

    /// Generators restricted to the span of the orthonormal columns of `basis`.
    pub fn restrict(&self, basis: &DMatrix<f64>) -> Result<Self> {
        let gens = self.generators.iter().map(|g| basis.transpose() * g * basis).collect();
        CliffordAction::new(gens, basis.ncols())
    }

    /// `A_{i_1} ... A_{i_k}` for the generators whose bits are set in `blade`.
    pub fn monomial(&self, blade: u32) -> DMatrix<f64> {
        let mut m = DMatrix::identity(self.dim, self.dim);
        for (a, g) in self.generators.iter().enumerate() {
            if blade & (1 << a) != 0 {
                m *= g;
            }
        }
        m
    }

    /// `A_1 A_2 ... A_s`.
    pub fn volume(&self) -> DMatrix<f64> {
        self.monomial((1u32 << self.generators.len()) - 1)
    }
}

/// `e_I e_J = sign e_{I xor J}` in `Cl_{0,q}`, blades as bit sets.
pub fn blade_product(i: u32, j: u32) -> (f64, u32) {
    let mut swaps = 0;
    let mut rest = i >> 1;
    while rest != 0 {
        swaps += (rest & j).count_ones();
        rest >>= 1;
    }
    let squares = (i & j).count_ones();
    let sign = if (swaps + squares) % 2 == 0 { 1.0 } else { -1.0 };
    (sign, i ^ j)
}

/// The Clifford action `X -> A_X v_a` on the horizontal space at `p`.
pub fn action_from_submersion(model: &SubmersionModel, p: &crate::linalg::AmbientVector) -> Result<CliffordAction> {
    if !model.has_riemannian_base() {
        return Err(Error::Unsupported(format!("{}: indefinite base", model.kind())));
    }
    let frame = model.split_frame(p)?;
    let gens = model.structures_in(&frame)?;
    CliffordAction::new(gens, frame.horizontal.len())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum VolumeSign {
    Plus,
    Minus,
    Other { summary: String },
}

/// Residual allowed when matching the volume element against `±Id`.
pub const VOLUME_TOL: f64 = 1e-8;

pub fn volume_action(action: &CliffordAction) -> Result<VolumeSign> {
    let s = action.generators.len();
    if s % 2 == 0 {
        return Err(Error::Unsupported(format!("volume element for even s = {s} is not central")));
    }
    let vol = action.volume();
    let id = DMatrix::<f64>::identity(action.dim, action.dim);
    if (&vol - &id).amax() < VOLUME_TOL {
        return Ok(VolumeSign::Plus);
    }
    if (&vol + &id).amax() < VOLUME_TOL {
        return Ok(VolumeSign::Minus);
    }
    let sym = (&vol + vol.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym).eigenvalues;
    let plus = eig.iter().filter(|x| (*x - 1.0).abs() < 1e-6).count();
    let minus = eig.iter().filter(|x| (*x + 1.0).abs() < 1e-6).count();
    Ok(VolumeSign::Other {
        summary: format!(
            "symmetric part has eigenvalues in [{:.6}, {:.6}]; {plus} near +1, {minus} near -1",
            eig.min(),
            eig.max()
        ),
    })
}

/// Basis of the solutions `F` (`rows x cols`) of `F A_a = B_a F` for all `a`.
fn intertwiner_space(a: &[DMatrix<f64>], b: &[DMatrix<f64>], tol: f64) -> Vec<DMatrix<f64>> {
    let (rows, cols) = (b[0].nrows(), a[0].nrows());
    let ia = DMatrix::<f64>::identity(cols, cols);
    let ib = DMatrix::<f64>::identity(rows, rows);
    let blocks: Vec<DMatrix<f64>> = a
        .iter()
        .zip(b)
        .map(|(ga, gb)| ia.kronecker(gb) - ga.transpose().kronecker(&ib))
        .collect();
    let mut m = DMatrix::zeros(blocks.len() * rows * cols, rows * cols);
    for (k, bl) in blocks.iter().enumerate() {
        m.view_mut((k * rows * cols, 0), (rows * cols, rows * cols)).copy_from(bl);
    }
    null_space(&m, tol)
        .into_iter()
        .map(|v| DMatrix::from_column_slice(rows, cols, v.as_slice()))
        .collect()
}

const DECOMPOSE_SEED: u64 = 0x5eed_c11f;

/// Splits the module into pairwise orthogonal irreducible invariant
/// subspaces, each returned as an `n x d` matrix of orthonormal columns.
///
/// A generic symmetric element of the commutant has one eigenspace per
/// irreducible summand; draws that happen to merge summands are retried.
pub fn decompose(action: &CliffordAction) -> Result<Vec<DMatrix<f64>>> {
    let n = action.dim;
    let d = irreducible_dimension(action.generators.len())?;
    if n % d != 0 {
        return Err(Error::Structural(format!("dimension {n} is not a multiple of the irreducible dimension {d}")));
    }
    if n == d {
        return Ok(vec![DMatrix::identity(n, n)]);
    }
    let gens = &action.generators;
    let commutant = if gens.is_empty() {
        (0..n * n)
            .map(|k| DMatrix::from_fn(n, n, |i, j| if i + n * j == k { 1.0 } else { 0.0 }))
            .collect()
    } else {
        intertwiner_space(gens, gens, 1e-7)
    };
    let mut rng = SeedStream::new(DECOMPOSE_SEED);
    for _ in 0..16 {
        let mut y = DMatrix::zeros(n, n);
        for c in &commutant {
            y += c * rng.gaussian();
        }
        let y = (&y + y.transpose()) * 0.5;
        let eig = SymmetricEigen::new(y);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|a, b| eig.eigenvalues[*a].total_cmp(&eig.eigenvalues[*b]));
        let spread = eig.eigenvalues.amax().max(1.0);
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for &i in &order {
            match groups.last_mut() {
                Some(g) if (eig.eigenvalues[i] - eig.eigenvalues[*g.last().unwrap()]).abs() < 1e-6 * spread => {
                    g.push(i)
                }
                _ => groups.push(vec![i]),
            }
        }
        if groups.iter().any(|g| g.len() != d) {
            continue;
        }
        let subspaces: Vec<DMatrix<f64>> = groups
            .iter()
            .map(|g| {
                let cols: Vec<DVector<f64>> = g.iter().map(|i| eig.eigenvectors.column(*i).into_owned()).collect();
                DMatrix::from_columns(&cols)
            })
            .collect();
        let worst = subspaces
            .iter()
            .flat_map(|b| {
                let proj = DMatrix::<f64>::identity(n, n) - b * b.transpose();
                gens.iter().map(move |g| (&proj * g * b).amax())
            })
            .fold(0.0_f64, f64::max);
        if worst < 1e-8 {
            return Ok(subspaces);
        }
    }
    Err(Error::Numerical("no generic commutant element separated the summands".into()))
}

/// Whether a Clifford algebra of signature `(0, s)` has two inequivalent
/// irreducible modules told apart by the volume element.
fn two_types(s: usize) -> Result<bool> {
    Ok(classify(CliffordSignature::new(0, s)?)?.summands == 2)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Intertwining {
    /// Orthogonal `L` with `L A1_a = A2_a L`.
    Equivalent(DMatrix<f64>),
    Inequivalent { reason: String },
}

/// Residual allowed for an intertwiner.
pub const INTERTWINER_TOL: f64 = 1e-8;

fn summand_signs(action: &CliffordAction, parts: &[DMatrix<f64>]) -> Result<Vec<i8>> {
    parts
        .iter()
        .map(|b| match volume_action(&action.restrict(b)?)? {
            VolumeSign::Plus => Ok(1),
            VolumeSign::Minus => Ok(-1),
            VolumeSign::Other { summary } => Err(Error::Numerical(format!("irreducible summand with {summary}"))),
        })
        .collect()
}

pub fn find_intertwiner(a1: &CliffordAction, a2: &CliffordAction) -> Result<Intertwining> {
    if a1.generators.len() != a2.generators.len() || a1.dim != a2.dim {
        return Err(Error::Config(format!(
            "actions differ in shape: s = {} vs {}, n = {} vs {}",
            a1.generators.len(),
            a2.generators.len(),
            a1.dim,
            a2.dim
        )));
    }
    let n = a1.dim;
    let same = a1.generators.iter().zip(&a2.generators).all(|(x, y)| (x - y).amax() < INTERTWINER_TOL);
    if same {
        return Ok(Intertwining::Equivalent(DMatrix::identity(n, n)));
    }
    let p1 = decompose(a1)?;
    let p2 = decompose(a2)?;
    let (s1, s2) = if two_types(a1.generators.len())? {
        (summand_signs(a1, &p1)?, summand_signs(a2, &p2)?)
    } else {
        (vec![1; p1.len()], vec![1; p2.len()])
    };
    let count = |s: &[i8], v: i8| s.iter().filter(|x| **x == v).count();
    if count(&s1, 1) != count(&s2, 1) || count(&s1, -1) != count(&s2, -1) {
        return Ok(Intertwining::Inequivalent {
            reason: format!(
                "volume element multiplicities differ: (+{}, -{}) vs (+{}, -{})",
                count(&s1, 1),
                count(&s1, -1),
                count(&s2, 1),
                count(&s2, -1)
            ),
        });
    }
    let mut used = vec![false; p2.len()];
    let mut l = DMatrix::zeros(n, n);
    for (b1, sg1) in p1.iter().zip(&s1) {
        let j = (0..p2.len())
            .find(|j| !used[*j] && s2[*j] == *sg1)
            .ok_or_else(|| Error::Numerical("summand matching failed".into()))?;
        used[j] = true;
        let b2 = &p2[j];
        let g1: Vec<_> = a1.generators.iter().map(|g| b1.transpose() * g * b1).collect();
        let g2: Vec<_> = a2.generators.iter().map(|g| b2.transpose() * g * b2).collect();
        let space = intertwiner_space(&g1, &g2, 1e-7);
        let f = space
            .first()
            .ok_or_else(|| Error::Numerical("no intertwiner between matched summands".into()))?;
        let ftf = f.transpose() * f;
        let c = ftf.trace() / ftf.nrows() as f64;
        if c <= 0.0 {
            return Err(Error::Numerical("degenerate intertwiner".into()));
        }
        let f = f / c.sqrt();
        l += b2 * f * b1.transpose();
    }
    let orth = (l.transpose() * &l - DMatrix::identity(n, n)).amax();
    let comm = a1
        .generators
        .iter()
        .zip(&a2.generators)
        .map(|(x, y)| (&l * x - y * &l).amax())
        .fold(0.0_f64, f64::max);
    if orth.max(comm) > INTERTWINER_TOL {
        return Err(Error::Numerical(format!("intertwiner residual {:e} exceeds {INTERTWINER_TOL:e}", orth.max(comm))));
    }
    Ok(Intertwining::Equivalent(l))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseQuery {
    Complex,
    Quaternionic,
    RealHyperbolic,
    Cayley,
    Any,
}

/// Whether the total space is a real or a complex pseudo-hyperbolic space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum TotalKind {
    #[default]
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ObstructionQuery {
    pub total: TotalKind,
    /// Fibre dimension.
    pub s: usize,
    /// Base (horizontal) dimension.
    pub n: usize,
    pub base: BaseQuery,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Admissible,
    Obstructed(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Admissible => f.write_str("Admissible"),
            Verdict::Obstructed(r) => write!(f, "Obstructed: {r}"),
        }
    }
}

pub const ADAMS_REASON: &str = "Adams: s ∈ {1,3,7}";
pub const SIMPLE_MODULE_REASON: &str =
    "Cl(V) simple submodules are 8-dim so H is simple, but dim V ≥ 4 forces a second summand; we get a contradiction";
pub const ALGEBRA_DIMENSION_REASON: &str = "Cl(R^9_1) ≅ M(16,R) ⊕ M(16,R) must map unitally into M(8,C), \
     but each simple factor has real dimension 256 > 128; homomorphism is impossible to exist";

/// Dimension count for a unital algebra map from `source` to `target`: the
/// map is injective on some simple summand, which must then fit.
pub fn unital_homomorphism_possible(source: AlgebraClass, target: AlgebraClass) -> bool {
    source.simple_real_dim() <= target.real_dim()
}

fn base_accepts(base: BaseQuery, wanted: BaseQuery) -> bool {
    base == wanted || base == BaseQuery::Any
}

fn real_total_verdict(s: usize, n: usize, base: BaseQuery) -> Result<Verdict> {
    if ![1, 3, 7].contains(&s) {
        return Ok(Verdict::Obstructed(ADAMS_REASON.into()));
    }
    let d = irreducible_dimension(s)?;
    if n == 0 || n % d != 0 {
        return Ok(Verdict::Obstructed(format!(
            "Clifford module: irreducible Cl(0,{s}) modules have dimension {d}, which does not divide n = {n}"
        )));
    }
    let mismatch = |want: &str| Ok(Verdict::Obstructed(format!("base must be {want} for s = {s}, n = {n}")));
    match s {
        1 if base_accepts(base, BaseQuery::Complex) => Ok(Verdict::Admissible),
        1 => mismatch("complex hyperbolic"),
        3 if base_accepts(base, BaseQuery::Quaternionic) => Ok(Verdict::Admissible),
        3 => mismatch("quaternionic hyperbolic"),
        _ if n == 8 && base_accepts(base, BaseQuery::RealHyperbolic) => Ok(Verdict::Admissible),
        _ if n == 8 => mismatch("real hyperbolic H^8(-4)"),
        _ if n == 16 && base_accepts(base, BaseQuery::Cayley) => Ok(Verdict::Obstructed(SIMPLE_MODULE_REASON.into())),
        _ => Ok(Verdict::Obstructed(format!(
            "s = 7 needs a simple 8-dimensional horizontal module, got n = {n}"
        ))),
    }
}

/// Decides whether a submersion with totally geodesic fibres of dimension `s`
/// over an `n`-dimensional base of the given type can exist.
///
/// Complex total spaces are lifted through the circle fibration, which adds
/// one to the fibre dimension.
pub fn existence_obstruction(query: ObstructionQuery) -> Result<Verdict> {
    let ObstructionQuery { total, s, n, base } = query;
    match total {
        TotalKind::Real => real_total_verdict(s, n, base),
        TotalKind::Complex => {
            if s == 0 {
                return Ok(Verdict::Obstructed("fibre dimension must be positive".into()));
            }
            let lifted = s + 1;
            if lifted == 7 && n == 8 && base_accepts(base, BaseQuery::RealHyperbolic) {
                let source = classify(CliffordSignature::new(1, 8)?)?;
                let target = AlgebraClass { field: Field::C, size: 8, summands: 1 };
                if !unital_homomorphism_possible(source, target) {
                    return Ok(Verdict::Obstructed(ALGEBRA_DIMENSION_REASON.into()));
                }
            }
            real_total_verdict(lifted, n, base)
        }
    }
}
