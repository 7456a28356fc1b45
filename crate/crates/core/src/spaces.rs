//! Quadric models of `H^m_s` and `CH^m_s`, and closed-form curvature of the
//! rank-one base geometries.
//!
//! Curvature is normalized so that `R(X,Y,X,Y) = c (g(X,X)g(Y,Y) - g(X,Y)^2)`
//! with `c = 1/radius_sq`; on `H^m_s` this is `-g(X,X)g(Y,Y) + g(X,Y)^2`.
//! Base models only provide a quartic `Q(X,Y) = R(X,Y,X,Y)`; the full tensor
//! is recovered by exact polarization.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::division::{left_mult_operator, Algebra, HyperNumber};
use crate::error::{Error, Result};
use crate::linalg::{
    form_kernel_dimension, span_frame, AmbientVector, FormKernel, PseudoFrame, ScalarProduct,
    SymmetricForm, DEFAULT_TOL,
};
use crate::sampling::SeedStream;

/// The quadric `<x,x> = radius_sq` in `R^{m+1}` with a form of index `s+1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudoHyperbolicSpace {
    m: usize,
    s: usize,
    radius_sq: f64,
}

impl PseudoHyperbolicSpace {
    pub fn new(m: usize, s: usize, radius_sq: f64) -> Result<Self> {
        if m == 0 || s > m {
            return Err(Error::Config(format!("H^{m}_{s} needs 0 <= s <= m and m >= 1")));
        }
        if !(radius_sq < 0.0) || !radius_sq.is_finite() {
            return Err(Error::Config(format!("radius_sq must be negative, got {radius_sq}")));
        }
        Ok(PseudoHyperbolicSpace { m, s, radius_sq })
    }

    /// `H^m_s` with curvature `-1`.
    pub fn unit(m: usize, s: usize) -> Result<Self> {
        Self::new(m, s, -1.0)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn radius_sq(&self) -> f64 {
        self.radius_sq
    }

    pub fn context(&self) -> ScalarProduct {
        ScalarProduct::new(self.m + 1, self.s + 1).expect("validated at construction")
    }

    pub fn contains(&self, p: &AmbientVector, tol: f64) -> bool {
        p.context() == self.context() && (p.square() - self.radius_sq).abs() < tol
    }

    fn require(&self, p: &AmbientVector) -> Result<()> {
        if p.context() != self.context() {
            return Err(Error::ContextMismatch { left: self.context().to_string(), right: p.context().to_string() });
        }
        let tol = 1e-8 * (1.0 + p.coord_norm().powi(2));
        if (p.square() - self.radius_sq).abs() > tol {
            return Err(Error::Domain(format!("point off the quadric: <p,p> = {}", p.square())));
        }
        Ok(())
    }

    /// Checks that `x` is tangent at `p`.
    pub fn require_tangent(&self, p: &AmbientVector, x: &AmbientVector, tol: f64) -> Result<()> {
        let d = p.dot(x);
        if d.abs() > tol * (1.0 + p.coord_norm() * x.coord_norm()) {
            return Err(Error::Domain(format!("vector not tangent: <p,x> = {d:e}")));
        }
        Ok(())
    }

    /// Gaussian space block, time block rescaled onto the quadric.
    pub fn sample_point(&self, rng: &mut SeedStream) -> AmbientVector {
        let ctx = self.context();
        let t = self.s + 1;
        let mut c = rng.gaussians(ctx.dim());
        let y2: f64 = c[t..].iter().map(|x| x * x).sum();
        let mut u2: f64 = c[..t].iter().map(|x| x * x).sum();
        while u2 < 1e-12 {
            for x in c[..t].iter_mut() {
                *x = rng.gaussian();
            }
            u2 = c[..t].iter().map(|x| x * x).sum();
        }
        let r = (y2 + self.radius_sq.abs()).sqrt() / u2.sqrt();
        for x in c[..t].iter_mut() {
            *x *= r;
        }
        AmbientVector::new(c, ctx).expect("length matches context")
    }

    /// Projection of an ambient vector onto `T_p = p^perp`.
    pub fn tangent_part(&self, p: &AmbientVector, x: &AmbientVector) -> AmbientVector {
        let c = x.dot(p) / self.radius_sq;
        x - &p.scaled(c)
    }

    /// Pseudo-orthonormal basis of `p^perp`, timelike vectors first.
    pub fn tangent_basis(&self, p: &AmbientVector) -> Result<PseudoFrame> {
        self.require(p)?;
        let ctx = self.context();
        let cands: Vec<_> = (0..ctx.dim())
            .map(|i| self.tangent_part(p, &AmbientVector::basis(ctx, i)))
            .collect();
        let f = span_frame(&cands, ctx, DEFAULT_TOL)?;
        if f.len() != self.m || f.index() != self.s {
            return Err(Error::Numerical(format!(
                "tangent frame has {} vectors of index {}, expected {} of index {}",
                f.len(),
                f.index(),
                self.m,
                self.s
            )));
        }
        Ok(f)
    }

    /// The geodesic with `gamma(0) = p` and `gamma'(0) = v`.
    pub fn geodesic(&self, p: &AmbientVector, v: &AmbientVector, t: f64) -> Result<AmbientVector> {
        let vv = v.square();
        if vv.abs() < DEFAULT_TOL {
            return Err(Error::UnsupportedDirection(format!("null tangent vector, <v,v> = {vv:e}")));
        }
        let r = self.radius_sq.abs().sqrt();
        let a = vv.abs().sqrt();
        let th = a * t / r;
        let (c, s) = if vv > 0.0 { (th.cosh(), th.sinh()) } else { (th.cos(), th.sin()) };
        Ok(&p.scaled(c) + &v.scaled(r * s / a))
    }

    /// `c (<X,Z><Y,W> - <X,W><Y,Z>)` with `c = 1/radius_sq`.
    pub fn curvature_total(
        &self,
        p: &AmbientVector,
        x: &AmbientVector,
        y: &AmbientVector,
        z: &AmbientVector,
        w: &AmbientVector,
    ) -> Result<f64> {
        for v in [x, y, z, w] {
            if v.context() != self.context() {
                return Err(Error::ContextMismatch { left: self.context().to_string(), right: v.context().to_string() });
            }
            self.require_tangent(p, v, 1e-8)?;
        }
        Ok((x.dot(z) * y.dot(w) - x.dot(w) * y.dot(z)) / self.radius_sq)
    }
}

/// The `st` coefficient of `f(s,t)` when `f` has degree at most two in each
/// variable.
fn st_coefficient(f: impl Fn(f64, f64) -> f64) -> f64 {
    (f(1.0, 1.0) - f(1.0, -1.0) - f(-1.0, 1.0) + f(-1.0, -1.0)) / 4.0
}

/// Recovers `R(X,Y,Z,W)` from a quartic `Q(X,Y) = R(X,Y,X,Y)` of an algebraic
/// curvature tensor.
pub fn polarize<V>(q: impl Fn(&V, &V) -> f64, x: &V, y: &V, z: &V, w: &V) -> f64
where
    for<'a> &'a V: std::ops::Add<&'a V, Output = V>,
    for<'a> &'a V: std::ops::Mul<f64, Output = V>,
{
    let a = st_coefficient(|s, t| q(&(x + &(z * s)), &(y + &(w * t))));
    let b = st_coefficient(|s, t| q(&(x + &(w * s)), &(y + &(z * t))));
    (a - b) / 6.0
}

/// `CH^m_s`, handled through representatives on `H^{2m+1}_{2s+1} ⊂ C^{m+1}`.
///
/// Complex coordinate `j` occupies real slots `(2j, 2j+1)`; the complex
/// structure multiplies each pair by `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPseudoHyperbolicSpace {
    m: usize,
    s: usize,
}

impl ComplexPseudoHyperbolicSpace {
    pub fn new(m: usize, s: usize) -> Result<Self> {
        if m == 0 || s > m {
            return Err(Error::Config(format!("CH^{m}_{s} needs 0 <= s <= m and m >= 1")));
        }
        Ok(ComplexPseudoHyperbolicSpace { m, s })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// The quadric `(z,z) = -1` as a real pseudo-hyperbolic space.
    pub fn total(&self) -> PseudoHyperbolicSpace {
        PseudoHyperbolicSpace::unit(2 * self.m + 1, 2 * self.s + 1).expect("valid by construction")
    }

    pub fn complex_structure(&self) -> DMatrix<f64> {
        pairwise_complex_structure(2 * self.m + 2)
    }

    pub fn contains(&self, z: &AmbientVector, tol: f64) -> bool {
        self.total().contains(z, tol)
    }

    /// Checks that `x` is orthogonal to `z` and `I z`.
    pub fn require_horizontal(&self, z: &AmbientVector, x: &AmbientVector, tol: f64) -> Result<()> {
        let iz = z.with_coords(self.complex_structure() * z.coords());
        for (name, n) in [("z", z), ("iz", &iz)] {
            let d = x.dot(n);
            if d.abs() > tol * (1.0 + x.coord_norm() * n.coord_norm()) {
                return Err(Error::Domain(format!("vector not orthogonal to {name}: {d:e}")));
            }
        }
        Ok(())
    }

    /// `-g(X,X)g(Y,Y) + g(X,Y)^2 - 3 g(IX,Y)^2` on horizontal lifts at `z`.
    pub fn curvature_quartic(&self, z: &AmbientVector, x: &AmbientVector, y: &AmbientVector) -> Result<f64> {
        self.require_horizontal(z, x, 1e-8)?;
        self.require_horizontal(z, y, 1e-8)?;
        let i = self.complex_structure();
        Ok(holomorphic_quartic(&i, x.context(), x.coords(), y.coords()))
    }

    pub fn curvature(
        &self,
        z: &AmbientVector,
        x: &AmbientVector,
        y: &AmbientVector,
        zz: &AmbientVector,
        w: &AmbientVector,
    ) -> Result<f64> {
        for v in [x, y, zz, w] {
            self.require_horizontal(z, v, 1e-8)?;
        }
        let i = self.complex_structure();
        let ctx = x.context();
        Ok(polarize(
            |a: &DVector<f64>, b: &DVector<f64>| holomorphic_quartic(&i, ctx, a, b),
            x.coords(),
            y.coords(),
            zz.coords(),
            w.coords(),
        ))
    }
}

fn holomorphic_quartic(i: &DMatrix<f64>, ctx: ScalarProduct, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let gxy = ctx.eval(x, y);
    let gixy = ctx.eval(&(i * x), y);
    -(ctx.eval(x, x) * ctx.eval(y, y) - gxy * gxy + 3.0 * gixy * gixy)
}

/// Multiplication by `i` on consecutive coordinate pairs of `R^dim`.
pub fn pairwise_complex_structure(dim: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(dim, dim);
    for j in 0..dim / 2 {
        m[(2 * j + 1, 2 * j)] = 1.0;
        m[(2 * j, 2 * j + 1)] = -1.0;
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseKind {
    /// `H^n(-4)`.
    RealHyperbolic4,
    ComplexHyperbolic,
    QuaternionicHyperbolic,
    CayleyPlane,
}

impl BaseKind {
    pub fn structure_count(self) -> usize {
        match self {
            BaseKind::RealHyperbolic4 => 0,
            BaseKind::ComplexHyperbolic => 1,
            BaseKind::QuaternionicHyperbolic => 3,
            BaseKind::CayleyPlane => 7,
        }
    }
}

/// Curvature model of a rank-one base in frame coordinates.
///
/// The metric is `diag(-1,..,-1,+1,..)` with `index` leading minus signs.
/// Structures are `dim x dim` matrices acting on coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseCurvatureModel {
    kind: BaseKind,
    dim: usize,
    index: usize,
    structures: Vec<DMatrix<f64>>,
}

impl BaseCurvatureModel {
    /// Validates `S^2 = -Id`, skewness and pairwise anticommutation to `tol`.
    pub fn new(kind: BaseKind, dim: usize, index: usize, structures: Vec<DMatrix<f64>>, tol: f64) -> Result<Self> {
        if structures.len() != kind.structure_count() {
            return Err(Error::Config(format!(
                "{kind:?} needs {} structures, got {}",
                kind.structure_count(),
                structures.len()
            )));
        }
        let ctx = ScalarProduct::new(dim, index)?;
        let eta = ctx.gram();
        let id = DMatrix::<f64>::identity(dim, dim);
        for (a, s) in structures.iter().enumerate() {
            if s.nrows() != dim || s.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: s.nrows() });
            }
            let sq = (s * s + &id).amax();
            let skew = (&eta * s + s.transpose() * &eta).amax();
            if sq > tol || skew > tol {
                return Err(Error::Structural(format!(
                    "structure {a}: |S^2+I| = {sq:e}, skew residual {skew:e}"
                )));
            }
            for (b, t) in structures.iter().enumerate().take(a) {
                let ac = (s * t + t * s).amax();
                if ac > tol {
                    return Err(Error::Structural(format!("structures {b},{a} anticommutator {ac:e}")));
                }
            }
        }
        Ok(BaseCurvatureModel { kind, dim, index, structures })
    }

    pub fn real_hyperbolic4(dim: usize) -> Result<Self> {
        Self::new(BaseKind::RealHyperbolic4, dim, 0, Vec::new(), 1e-12)
    }

    /// `CH^k` on `R^{2k}` with the pairwise complex structure.
    pub fn complex(k: usize) -> Result<Self> {
        Self::new(BaseKind::ComplexHyperbolic, 2 * k, 0, vec![pairwise_complex_structure(2 * k)], 1e-12)
    }

    /// `HH^k` on `H^k = R^{4k}` with left multiplication by `i, j, k`.
    pub fn quaternionic(k: usize) -> Result<Self> {
        let st = (1..4)
            .map(|a| block_diagonal(&left_mult_operator(&HyperNumber::unit(Algebra::Quaternion, a)), k))
            .collect();
        Self::new(BaseKind::QuaternionicHyperbolic, 4 * k, 0, st, 1e-12)
    }

    pub fn cayley() -> Result<Self> {
        Self::new(BaseKind::CayleyPlane, 16, 0, cayley_structures(), 1e-12)
    }

    pub fn kind(&self) -> BaseKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn structures(&self) -> &[DMatrix<f64>] {
        &self.structures
    }

    pub fn metric(&self) -> ScalarProduct {
        ScalarProduct::new(self.dim, self.index).expect("validated")
    }

    fn check(&self, x: &DVector<f64>) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        Ok(())
    }

    fn quartic_raw(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        let g = self.metric();
        let gxy = g.eval(x, y);
        let plane = g.eval(x, x) * g.eval(y, y) - gxy * gxy;
        match self.kind {
            BaseKind::RealHyperbolic4 => -4.0 * plane,
            _ => {
                let extra: f64 = self.structures.iter().map(|s| g.eval(&(s * x), y).powi(2)).sum();
                -(plane + 3.0 * extra)
            }
        }
    }

    /// `R'(X,Y,X,Y)`.
    pub fn quartic(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.quartic_raw(x, y))
    }

    pub fn curvature(&self, x: &DVector<f64>, y: &DVector<f64>, z: &DVector<f64>, w: &DVector<f64>) -> Result<f64> {
        for v in [x, y, z, w] {
            self.check(v)?;
        }
        Ok(polarize(|a: &DVector<f64>, b: &DVector<f64>| self.quartic_raw(a, b), x, y, z, w))
    }

    /// Sectional curvature of the plane spanned by `x, y`.
    pub fn sectional(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64> {
        let g = self.metric();
        let gxy = g.eval(x, y);
        let plane = g.eval(x, x) * g.eval(y, y) - gxy * gxy;
        if plane.abs() < DEFAULT_TOL {
            return Err(Error::Domain("degenerate plane".into()));
        }
        Ok(self.quartic(x, y)? / plane)
    }

    /// The form `Y -> R'(X,Y,X,Y) + g(X,X)g(Y,Y) - g(X,Y)^2`, whose kernel
    /// for unit `X` is the space `L_X` orthogonal to every `S_a X`.
    pub fn l_form(&self, x: &DVector<f64>) -> Result<SymmetricForm> {
        self.check(x)?;
        let g = self.metric();
        Ok(SymmetricForm::from_quadratic(self.dim, |y| {
            let gxy = g.eval(x, y);
            self.quartic_raw(x, y) + g.eval(x, x) * g.eval(y, y) - gxy * gxy
        }))
    }

    pub fn l_kernel(&self, x: &DVector<f64>, tol: f64) -> Result<FormKernel> {
        form_kernel_dimension(&self.l_form(x)?, tol)
    }
}

fn block_diagonal(m: &DMatrix<f64>, copies: usize) -> DMatrix<f64> {
    let d = m.nrows();
    let mut out = DMatrix::zeros(d * copies, d * copies);
    for c in 0..copies {
        out.view_mut((c * d, c * d), (d, d)).copy_from(m);
    }
    out
}

/// Seven anticommuting complex structures on `R^16 = O ⊕ O`, acting by left
/// multiplication by `e_a` on both octonion slots.
pub fn cayley_structures() -> Vec<DMatrix<f64>> {
    (1..8)
        .map(|a| block_diagonal(&left_mult_operator(&HyperNumber::unit(Algebra::Octonion, a)), 2))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gaussian_tangent(sp: &PseudoHyperbolicSpace, p: &AmbientVector, rng: &mut SeedStream) -> AmbientVector {
        let x = AmbientVector::new(rng.gaussians(sp.m() + 1), sp.context()).unwrap();
        sp.tangent_part(p, &x)
    }

    #[test]
    fn contains_basics() {
        let h = PseudoHyperbolicSpace::unit(5, 2).unwrap();
        let e0 = AmbientVector::basis(h.context(), 0);
        assert!(h.contains(&e0, 1e-12));
        assert!(!h.contains(&e0.scaled(2.0), 1e-12));
    }

    #[test]
    fn samples_lie_on_quadric() {
        for (m, s, r) in [(5, 2, -1.0), (15, 7, -1.0), (8, 0, -0.25), (3, 3, -1.0)] {
            let h = PseudoHyperbolicSpace::new(m, s, r).unwrap();
            let mut rng = SeedStream::new(11);
            for _ in 0..10_000 {
                let p = h.sample_point(&mut rng);
                assert!((p.square() - r).abs() < 1e-12 * (1.0 + p.coord_norm().powi(2)));
            }
        }
    }

    #[test]
    fn sample_point_is_pinned_for_seed_42() {
        let h = PseudoHyperbolicSpace::unit(3, 1).unwrap();
        let p = h.sample_point(&mut SeedStream::new(42));
        let q = h.sample_point(&mut SeedStream::new(42));
        assert_eq!(p, q);
        let pinned = [PINNED_42[0], PINNED_42[1], PINNED_42[2], PINNED_42[3]];
        for (a, b) in p.coords().iter().zip(pinned) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    // Regression values recorded from the first run of the sampler.
    const PINNED_42: [f64; 4] = [0.3803140886440694, 1.0614764923985285, -0.21086668327103028, 0.4763469238088213];

    #[test]
    fn tangent_basis_at_base_point() {
        let h = PseudoHyperbolicSpace::unit(4, 1).unwrap();
        let e0 = AmbientVector::basis(h.context(), 0);
        let f = h.tangent_basis(&e0).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.index(), 1);
        for u in f.vectors() {
            assert_eq!(u.coords()[0], 0.0);
        }
    }

    #[test]
    fn tangent_index_on_h15_7() {
        let h = PseudoHyperbolicSpace::unit(15, 7).unwrap();
        let mut rng = SeedStream::new(3);
        for _ in 0..100 {
            let p = h.sample_point(&mut rng);
            let f = h.tangent_basis(&p).unwrap();
            assert_eq!(f.index(), 7);
            for u in f.vectors() {
                assert!(u.dot(&p).abs() < 1e-10 * (1.0 + p.coord_norm()));
            }
        }
    }

    #[test]
    fn geodesics_stay_on_quadric() {
        let h = PseudoHyperbolicSpace::unit(4, 1).unwrap();
        let mut rng = SeedStream::new(5);
        let p = h.sample_point(&mut rng);
        let f = h.tangent_basis(&p).unwrap();
        let timelike = &f.vectors()[0];
        let spacelike = &f.vectors()[2];
        assert_eq!(h.geodesic(&p, spacelike, 0.0).unwrap(), p);
        let loop_back = h.geodesic(&p, timelike, 2.0 * std::f64::consts::PI).unwrap();
        assert!((&loop_back - &p).coord_norm() < 1e-12 * p.coord_norm().max(1.0) * 10.0);
        let q = h.geodesic(&p, spacelike, 1.0).unwrap();
        assert!((q.square() + 1.0).abs() < 1e-12 * q.coord_norm().powi(2).max(1.0));
        let null = &(timelike + spacelike);
        assert!(matches!(h.geodesic(&p, null, 1.0), Err(Error::UnsupportedDirection(_))));
    }

    #[test]
    fn curvature_of_orthonormal_spacelike_pair() {
        let h = PseudoHyperbolicSpace::unit(4, 1).unwrap();
        let ctx = h.context();
        let p = AmbientVector::basis(ctx, 0);
        let x = AmbientVector::basis(ctx, 2);
        let y = AmbientVector::basis(ctx, 3);
        assert_eq!(h.curvature_total(&p, &x, &y, &x, &y).unwrap(), -1.0);
        assert_eq!(h.curvature_total(&p, &x, &x, &x, &x).unwrap(), 0.0);
        assert!(matches!(h.curvature_total(&p, &p, &y, &x, &y), Err(Error::Domain(_))));
    }

    #[test]
    fn holomorphic_curvature_is_minus_four() {
        let c = ComplexPseudoHyperbolicSpace::new(3, 1).unwrap();
        let h = c.total();
        let mut rng = SeedStream::new(9);
        let i = c.complex_structure();
        for _ in 0..20 {
            let z = h.sample_point(&mut rng);
            let iz = z.with_coords(&i * z.coords());
            let f = span_frame(&[z.clone(), iz], h.context(), DEFAULT_TOL).unwrap();
            let x = AmbientVector::new(rng.gaussians(8), h.context()).unwrap();
            let u = &x - &crate::linalg::project_onto(&x, &f).unwrap();
            let u = u.scaled(1.0 / u.square().abs().sqrt());
            let v = u.with_coords(&i * u.coords());
            let q = c.curvature_quartic(&z, &u, &v).unwrap();
            let plane = u.square() * v.square() - u.dot(&v).powi(2);
            assert!((q - (-4.0 * plane)).abs() < 1e-9);
            let full = c.curvature(&z, &u, &v, &u, &v).unwrap();
            assert!((full - q).abs() < 1e-9);
        }
    }

    #[test]
    fn base_quartic_examples() {
        let cm = BaseCurvatureModel::complex(3).unwrap();
        let x = DVector::from_fn(6, |i, _| if i == 0 { 1.0 } else { 0.0 });
        let ix = &cm.structures()[0] * &x;
        assert!((cm.quartic(&x, &ix).unwrap() + 4.0).abs() < 1e-14);
        let y = DVector::from_fn(6, |i, _| if i == 2 { 1.0 } else { 0.0 });
        assert!((cm.quartic(&x, &y).unwrap() + 1.0).abs() < 1e-14);
        assert_eq!(cm.quartic(&x, &x).unwrap(), 0.0);
        assert!(matches!(
            BaseCurvatureModel::new(BaseKind::QuaternionicHyperbolic, 4, 0, vec![], 1e-9),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn cayley_structures_form_clifford_system() {
        let s = cayley_structures();
        let id = DMatrix::<f64>::identity(16, 16);
        assert!((&s[0] * &s[0] + &id).amax() < 1e-14);
        assert!((&s[0] * &s[1] + &s[1] * &s[0]).amax() < 1e-12);
        let mut rng = SeedStream::new(1);
        let x = DVector::from_vec(rng.gaussians(16)).normalize();
        let mut cols = vec![x.clone()];
        cols.extend(s.iter().map(|m| m * &x));
        let g = DMatrix::from_fn(8, 8, |i, j| cols[i].dot(&cols[j]));
        assert!(g.determinant() > 0.9);
    }

    #[test]
    fn l_kernel_dimensions() {
        let mut rng = SeedStream::new(2);
        let cases: Vec<(BaseCurvatureModel, usize)> = vec![
            (BaseCurvatureModel::real_hyperbolic4(8).unwrap(), 1),
            (BaseCurvatureModel::complex(3).unwrap(), 5),
            (BaseCurvatureModel::quaternionic(2).unwrap(), 5),
            (BaseCurvatureModel::cayley().unwrap(), 9),
        ];
        for (m, want) in cases {
            for _ in 0..10 {
                let x = DVector::from_vec(rng.gaussians(m.dim())).normalize();
                assert_eq!(m.l_kernel(&x, 1e-9).unwrap().dimension, want, "{:?}", m.kind());
            }
        }
    }

    proptest! {
        #[test]
        fn total_curvature_symmetries(seed in any::<u64>()) {
            let h = PseudoHyperbolicSpace::unit(6, 2).unwrap();
            let mut rng = SeedStream::new(seed);
            let p = h.sample_point(&mut rng);
            let v: Vec<_> = (0..4).map(|_| gaussian_tangent(&h, &p, &mut rng)).collect();
            let r = |a: usize, b: usize, c: usize, d: usize| h.curvature_total(&p, &v[a], &v[b], &v[c], &v[d]).unwrap();
            let scale = v.iter().map(|x| x.coord_norm()).product::<f64>().max(1.0);
            let tol = 1e-10 * scale;
            prop_assert!((r(0,1,2,3) + r(1,0,2,3)).abs() < tol);
            prop_assert!((r(0,1,2,3) + r(0,1,3,2)).abs() < tol);
            prop_assert!((r(0,1,2,3) - r(2,3,0,1)).abs() < tol);
            prop_assert!((r(0,1,2,3) + r(1,2,0,3) + r(2,0,1,3)).abs() < tol);
        }

        #[test]
        fn base_models_are_pinched(seed in any::<u64>()) {
            let mut rng = SeedStream::new(seed);
            for m in [
                BaseCurvatureModel::real_hyperbolic4(8).unwrap(),
                BaseCurvatureModel::complex(2).unwrap(),
                BaseCurvatureModel::quaternionic(2).unwrap(),
                BaseCurvatureModel::cayley().unwrap(),
            ] {
                let x = DVector::from_vec(rng.gaussians(m.dim()));
                let y = DVector::from_vec(rng.gaussians(m.dim()));
                let k = m.sectional(&x, &y).unwrap();
                prop_assert!((-4.0 - 1e-10..=-1.0 + 1e-10).contains(&k), "{:?}: {}", m.kind(), k);
            }
        }

        #[test]
        fn polarized_base_curvature_has_symmetries(seed in any::<u64>()) {
            let mut rng = SeedStream::new(seed);
            let m = BaseCurvatureModel::quaternionic(2).unwrap();
            let v: Vec<_> = (0..4).map(|_| DVector::from_vec(rng.gaussians(8))).collect();
            let r = |a: usize, b: usize, c: usize, d: usize| m.curvature(&v[a], &v[b], &v[c], &v[d]).unwrap();
            let tol = 1e-9 * v.iter().map(|x| x.norm()).product::<f64>().max(1.0);
            prop_assert!((r(0,1,0,1) - m.quartic(&v[0], &v[1]).unwrap()).abs() < tol);
            prop_assert!((r(0,1,2,3) + r(1,0,2,3)).abs() < tol);
            prop_assert!((r(0,1,2,3) - r(2,3,0,1)).abs() < tol);
            prop_assert!((r(0,1,2,3) + r(1,2,0,3) + r(2,0,1,3)).abs() < tol);
        }
    }
}
