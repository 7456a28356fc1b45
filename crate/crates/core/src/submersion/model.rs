use nalgebra::{DMatrix, DVector};

use super::{SplitFrame, SubmersionKind, SubmersionModel};
use crate::division::{mul_slices, right_mult_operator, Algebra, HyperNumber};
use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt, span_frame, AmbientVector, ScalarProduct, DEFAULT_TOL};
use crate::sampling::SeedStream;
use crate::spaces::{pairwise_complex_structure, PseudoHyperbolicSpace};

/// How a quotient model picks class representatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Gauge {
    /// Unit complex numbers acting on coordinate pairs.
    Pairwise,
    /// Unit quaternions acting on the right of each 4-block.
    Quaternionic,
}

/// A point of the base.
#[derive(Debug, Clone, PartialEq)]
pub enum BasePoint {
    /// Gauge-fixed representative of a fibre, with the generators of the
    /// structure group's Lie algebra used to compare classes.
    Quotient { kind: SubmersionKind, rep: AmbientVector, gauge_generators: Vec<DMatrix<f64>> },
    /// A point of the quadric `<u,u> = -1/4` in `R^9_1`.
    Quadric { kind: SubmersionKind, point: AmbientVector },
}

impl BasePoint {
    pub fn kind(&self) -> SubmersionKind {
        match self {
            BasePoint::Quotient { kind, .. } | BasePoint::Quadric { kind, .. } => *kind,
        }
    }

    pub fn representative(&self) -> &AmbientVector {
        match self {
            BasePoint::Quotient { rep, .. } => rep,
            BasePoint::Quadric { point, .. } => point,
        }
    }

    /// Residual of the comparison of two base points: coordinate distance of
    /// the representatives, or for quotients the defect
    /// `|(q,q')|^2 - (q,q)(q',q')` of the hermitian product if smaller.
    pub fn distance(&self, other: &BasePoint) -> f64 {
        let a = self.representative();
        let b = other.representative();
        if a.context() != b.context() || self.kind() != other.kind() {
            return f64::INFINITY;
        }
        let direct = (a - b).coord_norm();
        match self {
            BasePoint::Quotient { gauge_generators, .. } => {
                let mut h2 = a.dot(b).powi(2);
                for m in gauge_generators {
                    h2 += a.with_coords(m * a.coords()).dot(b).powi(2);
                }
                let defect = (h2 - a.square() * b.square()).abs();
                direct.min(defect)
            }
            BasePoint::Quadric { .. } => direct,
        }
    }

    pub fn approx_eq(&self, other: &BasePoint, tol: f64) -> bool {
        self.distance(other) < tol
    }
}

/// A tangent vector of the base at a [`BasePoint`]. For quotient bases the
/// vector is the horizontal lift at the representative.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseTangent {
    pub base: BasePoint,
    pub vector: AmbientVector,
}

impl BaseTangent {
    pub fn dot(&self, other: &BaseTangent) -> f64 {
        self.vector.dot(&other.vector)
    }
}

/// The horizontal transport along a fibre: `target = matrix * p`, and
/// `matrix` maps `H_p` onto `H_target`.
#[derive(Debug, Clone)]
pub struct Holonomy {
    pub target: AmbientVector,
    pub matrix: DMatrix<f64>,
}

impl Holonomy {
    pub fn apply(&self, x: &AmbientVector) -> AmbientVector {
        x.with_coords(&self.matrix * x.coords())
    }
}

fn block_diag(m: &DMatrix<f64>, copies: usize) -> DMatrix<f64> {
    let d = m.nrows();
    let mut out = DMatrix::zeros(d * copies, d * copies);
    for c in 0..copies {
        out.view_mut((c * d, c * d), (d, d)).copy_from(m);
    }
    out
}

/// Right multiplication by `u` on every 4-block of `R^{4(k+1)}`.
fn quaternion_right(u: &HyperNumber, blocks: usize) -> DMatrix<f64> {
    block_diag(&right_mult_operator(u), blocks)
}

fn quat_unit(i: usize) -> HyperNumber {
    HyperNumber::unit(Algebra::Quaternion, i)
}

/// `B(q,w) = (<x,u> + <y,v>, conj(v) x + conj(y) u)` for `q = (x,y)`,
/// `w = (u,v)` in `O^2`, Euclidean products. `pi(q) = B(q,q)/2`.
pub(crate) fn octonion_pairing(q: &DVector<f64>, w: &DVector<f64>) -> DVector<f64> {
    let (x, y) = (&q.as_slice()[..8], &q.as_slice()[8..]);
    let (u, v) = (&w.as_slice()[..8], &w.as_slice()[8..]);
    let conj = |a: &[f64]| {
        let mut c = [0.0; 8];
        c[0] = a[0];
        for i in 1..8 {
            c[i] = -a[i];
        }
        c
    };
    let mut t1 = [0.0; 8];
    let mut t2 = [0.0; 8];
    mul_slices(8, &conj(v), x, &mut t1);
    mul_slices(8, &conj(y), u, &mut t2);
    let mut out = DVector::zeros(9);
    out[0] = x.iter().zip(u).map(|(a, b)| a * b).sum::<f64>() + y.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    for i in 0..8 {
        out[i + 1] = t1[i] + t2[i];
    }
    out
}

/// Context of the octonionic base `R^9_1`.
pub(crate) fn octonion_base_context() -> ScalarProduct {
    ScalarProduct::new(9, 1).expect("static")
}

/// Vertical distribution data: either spanned by generators, or the
/// orthogonal complement of a span.
#[derive(Debug, Clone)]
pub(crate) enum Vertical {
    Span(Vec<DMatrix<f64>>),
    Complement(Vec<DMatrix<f64>>),
}

#[derive(Debug, Clone)]
pub(crate) struct Geometry {
    pub space: PseudoHyperbolicSpace,
    pub ctx: ScalarProduct,
    /// Generators of the normal span; the identity is always first.
    pub normal: Vec<DMatrix<f64>>,
    pub vertical: Vertical,
    pub gauge: Option<Gauge>,
    /// Lie algebra generators of the fibre group (quotient bases).
    pub gauge_generators: Vec<DMatrix<f64>>,
}

/// `G M^{-1} G^T eta` with `M = G^T eta G`.
fn span_projector(ctx: ScalarProduct, g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eta = ctx.gram();
    let m = g.transpose() * &eta * g;
    let minv = m
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("degenerate span in projector".into()))?;
    Ok(g * minv * g.transpose() * eta)
}

/// Flat derivative of `span_projector` when `G` moves with velocity `gd`.
fn span_projector_derivative(ctx: ScalarProduct, g: &DMatrix<f64>, gd: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eta = ctx.gram();
    let m = g.transpose() * &eta * g;
    let minv = m.try_inverse().ok_or_else(|| Error::Numerical("degenerate span in projector".into()))?;
    let gt_eta = g.transpose() * &eta;
    let mdot = gd.transpose() * &eta * g + &gt_eta * gd;
    Ok(gd * &minv * &gt_eta + g * &minv * gd.transpose() * &eta - g * &minv * mdot * &minv * gt_eta)
}

fn stack(mats: &[DMatrix<f64>], q: &DVector<f64>) -> DMatrix<f64> {
    let cols: Vec<DVector<f64>> = mats.iter().map(|m| m * q).collect();
    DMatrix::from_columns(&cols)
}

impl Geometry {
    pub fn new(kind: SubmersionKind) -> Self {
        match kind {
            SubmersionKind::ThetaCircle { m, s } => Self::circle(m, s),
            SubmersionKind::ComplexHopf { k } => Self::circle(k, 0),
            SubmersionKind::QuaternionicHopf { k } => {
                let space = PseudoHyperbolicSpace::unit(4 * k + 3, 3).expect("valid");
                let ctx = space.context();
                let gens: Vec<_> = (1..4).map(|a| quaternion_right(&quat_unit(a), k + 1)).collect();
                Geometry {
                    space,
                    ctx,
                    normal: vec![DMatrix::identity(ctx.dim(), ctx.dim())],
                    vertical: Vertical::Span(gens.clone()),
                    gauge: Some(Gauge::Quaternionic),
                    gauge_generators: gens,
                }
            }
            SubmersionKind::ComplexToQuaternionic { k } => {
                let space = PseudoHyperbolicSpace::unit(4 * k + 3, 3).expect("valid");
                let ctx = space.context();
                let ri = quaternion_right(&quat_unit(1), k + 1);
                let gens: Vec<_> = (2..4).map(|a| quaternion_right(&quat_unit(a), k + 1)).collect();
                let all: Vec<_> = (1..4).map(|a| quaternion_right(&quat_unit(a), k + 1)).collect();
                Geometry {
                    space,
                    ctx,
                    normal: vec![DMatrix::identity(ctx.dim(), ctx.dim()), ri],
                    vertical: Vertical::Span(gens),
                    gauge: Some(Gauge::Quaternionic),
                    gauge_generators: all,
                }
            }
            SubmersionKind::OctonionicHopf => {
                let space = PseudoHyperbolicSpace::unit(15, 7).expect("valid");
                let ctx = space.context();
                let eta = ctx.gram();
                let e = |i: usize| DVector::from_fn(16, |r, _| if r == i { 1.0 } else { 0.0 });
                // (T_b)_{j,i} = B(e_i, e_j)_b, so that B(q,w)_b = (T_b q) . w.
                let mut t = vec![DMatrix::zeros(16, 16); 9];
                for i in 0..16 {
                    for j in 0..16 {
                        let b = octonion_pairing(&e(i), &e(j));
                        for (bi, tb) in t.iter_mut().enumerate() {
                            tb[(j, i)] = b[bi];
                        }
                    }
                }
                let comp = t.into_iter().map(|tb| &eta * tb).collect();
                Geometry {
                    space,
                    ctx,
                    normal: vec![DMatrix::identity(16, 16)],
                    vertical: Vertical::Complement(comp),
                    gauge: None,
                    gauge_generators: Vec::new(),
                }
            }
        }
    }

    fn circle(m: usize, s: usize) -> Self {
        let space = PseudoHyperbolicSpace::unit(2 * m + 1, 2 * s + 1).expect("valid");
        let ctx = space.context();
        let i = pairwise_complex_structure(ctx.dim());
        Geometry {
            space,
            ctx,
            normal: vec![DMatrix::identity(ctx.dim(), ctx.dim())],
            vertical: Vertical::Span(vec![i.clone()]),
            gauge: Some(Gauge::Pairwise),
            gauge_generators: vec![i],
        }
    }

    pub fn identity(&self) -> DMatrix<f64> {
        DMatrix::identity(self.ctx.dim(), self.ctx.dim())
    }

    pub fn normal_proj(&self, q: &DVector<f64>) -> Result<DMatrix<f64>> {
        span_projector(self.ctx, &stack(&self.normal, q))
    }

    pub fn d_normal_proj(&self, q: &DVector<f64>, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        span_projector_derivative(self.ctx, &stack(&self.normal, q), &stack(&self.normal, x))
    }

    pub fn vertical_proj(&self, q: &DVector<f64>) -> Result<DMatrix<f64>> {
        match &self.vertical {
            Vertical::Span(g) => span_projector(self.ctx, &stack(g, q)),
            Vertical::Complement(c) => Ok(self.identity() - span_projector(self.ctx, &stack(c, q))?),
        }
    }

    pub fn d_vertical_proj(&self, q: &DVector<f64>, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        match &self.vertical {
            Vertical::Span(g) => span_projector_derivative(self.ctx, &stack(g, q), &stack(g, x)),
            Vertical::Complement(c) => Ok(-span_projector_derivative(self.ctx, &stack(c, q), &stack(c, x))?),
        }
    }

    pub fn horizontal_proj(&self, q: &DVector<f64>) -> Result<DMatrix<f64>> {
        Ok(self.identity() - self.vertical_proj(q)? - self.normal_proj(q)?)
    }

    /// Operator `L` with `L q` the gauge-fixed representative of `q`.
    fn gauge_operator(&self, q: &DVector<f64>) -> DMatrix<f64> {
        match self.gauge {
            Some(Gauge::Pairwise) => {
                let pairs = q.len() / 2;
                let j = (0..pairs)
                    .max_by(|a, b| {
                        let na = q[2 * a].hypot(q[2 * a + 1]);
                        let nb = q[2 * b].hypot(q[2 * b + 1]);
                        na.total_cmp(&nb)
                    })
                    .expect("non-empty");
                let r = q[2 * j].hypot(q[2 * j + 1]);
                let (a, b) = (q[2 * j] / r, -q[2 * j + 1] / r);
                let rot = DMatrix::from_row_slice(2, 2, &[a, -b, b, a]);
                block_diag(&rot, pairs)
            }
            Some(Gauge::Quaternionic) => {
                let blocks = q.len() / 4;
                let norm = |j: usize| q.rows(4 * j, 4).norm();
                let j = (0..blocks).max_by(|a, b| norm(*a).total_cmp(&norm(*b))).expect("non-empty");
                let r = norm(j);
                let lam = HyperNumber::new(
                    Algebra::Quaternion,
                    &[q[4 * j] / r, -q[4 * j + 1] / r, -q[4 * j + 2] / r, -q[4 * j + 3] / r],
                )
                .expect("length 4");
                quaternion_right(&lam, blocks)
            }
            None => self.identity(),
        }
    }
}

impl SubmersionModel {
    pub(crate) fn geometry(&self) -> Geometry {
        Geometry::new(self.kind)
    }

    /// The real quadric carrying the representatives.
    pub fn total_space(&self) -> PseudoHyperbolicSpace {
        self.geometry().space
    }

    pub fn sample_point(&self, rng: &mut SeedStream) -> AmbientVector {
        self.total_space().sample_point(rng)
    }

    pub(crate) fn require_point(&self, geo: &Geometry, p: &AmbientVector) -> Result<()> {
        if p.context() != geo.ctx {
            return Err(Error::ContextMismatch { left: geo.ctx.to_string(), right: p.context().to_string() });
        }
        let tol = 1e-9 * (1.0 + p.coord_norm().powi(2));
        if (p.square() - geo.space.radius_sq()).abs() > tol {
            return Err(Error::Domain(format!("point off the total space: <p,p> = {}", p.square())));
        }
        Ok(())
    }

    /// Checks that `x` lies in the tangent space of the total space at `p`.
    pub(crate) fn require_tangent(&self, geo: &Geometry, p: &AmbientVector, x: &AmbientVector) -> Result<()> {
        if x.context() != geo.ctx {
            return Err(Error::ContextMismatch { left: geo.ctx.to_string(), right: x.context().to_string() });
        }
        let nx = geo.normal_proj(p.coords())? * x.coords();
        if nx.norm() > 1e-8 * (1.0 + x.coord_norm()) * (1.0 + p.coord_norm()) {
            return Err(Error::Domain(format!("vector not tangent: normal part {:e}", nx.norm())));
        }
        Ok(())
    }

    /// Tangent part of an ambient vector.
    pub fn tangent_part(&self, p: &AmbientVector, x: &AmbientVector) -> Result<AmbientVector> {
        let geo = self.geometry();
        let n = geo.normal_proj(p.coords())?;
        Ok(x.with_coords(x.coords() - n * x.coords()))
    }

    pub fn project(&self, p: &AmbientVector) -> Result<BasePoint> {
        let geo = self.geometry();
        self.require_point(&geo, p)?;
        match geo.gauge {
            Some(_) => {
                let l = geo.gauge_operator(p.coords());
                Ok(BasePoint::Quotient {
                    kind: self.kind,
                    rep: p.with_coords(l * p.coords()),
                    gauge_generators: geo.gauge_generators.clone(),
                })
            }
            None => {
                let u = octonion_pairing(p.coords(), p.coords()) * 0.5;
                Ok(BasePoint::Quadric {
                    kind: self.kind,
                    point: AmbientVector::from_dvector(u, octonion_base_context())?,
                })
            }
        }
    }

    pub fn differential(&self, p: &AmbientVector, w: &AmbientVector) -> Result<BaseTangent> {
        let geo = self.geometry();
        self.require_point(&geo, p)?;
        self.require_tangent(&geo, p, w)?;
        let base = self.project(p)?;
        let vector = match geo.gauge {
            Some(_) => {
                let l = geo.gauge_operator(p.coords());
                let h = geo.horizontal_proj(p.coords())?;
                w.with_coords(l * h * w.coords())
            }
            None => AmbientVector::from_dvector(octonion_pairing(p.coords(), w.coords()), octonion_base_context())?,
        };
        Ok(BaseTangent { base, vector })
    }

    /// Horizontal/vertical frames at `p`. Vertical vectors come in generator
    /// order where generators exist; for odd fibre dimension `r >= 3` the last
    /// vertical vector is negated if needed so that the product of the
    /// induced structures is `+Id`.
    pub fn split_frame(&self, p: &AmbientVector) -> Result<SplitFrame> {
        let mut frame = self.raw_split_frame(p)?;
        let r = self.dims().r;
        if r >= 3 && r % 2 == 1 {
            self.orient(&mut frame)?;
        }
        Ok(frame)
    }

    /// Frames in generator order, before orientation.
    pub(crate) fn raw_split_frame(&self, p: &AmbientVector) -> Result<SplitFrame> {
        let geo = self.geometry();
        self.require_point(&geo, p)?;
        let dims = self.dims();
        let q = p.coords();
        let vertical = match &geo.vertical {
            Vertical::Span(g) => {
                let vs: Vec<_> = g.iter().map(|m| p.with_coords(m * q)).collect();
                gram_schmidt(&vs, DEFAULT_TOL)?
            }
            Vertical::Complement(_) => {
                let v = geo.vertical_proj(q)?;
                let cands: Vec<_> = (0..geo.ctx.dim()).map(|i| p.with_coords(v.column(i).into_owned())).collect();
                span_frame(&cands, geo.ctx, DEFAULT_TOL)?
            }
        };
        let h = geo.horizontal_proj(q)?;
        let cands: Vec<_> = (0..geo.ctx.dim()).map(|i| p.with_coords(h.column(i).into_owned())).collect();
        let horizontal = span_frame(&cands, geo.ctx, DEFAULT_TOL)?;
        if vertical.len() != dims.r || horizontal.len() != dims.n {
            return Err(Error::Numerical(format!(
                "split frame has {} vertical and {} horizontal vectors, expected {} and {}",
                vertical.len(),
                horizontal.len(),
                dims.r,
                dims.n
            )));
        }
        if horizontal.index() != dims.base_index {
            return Err(Error::Numerical(format!(
                "horizontal index {} differs from base index {}",
                horizontal.index(),
                dims.base_index
            )));
        }
        Ok(SplitFrame { point: p.clone(), vertical, horizontal })
    }

    /// Holonomy along the circle `p e^{it}` (circle models) or `p (cos t + i sin t)`
    /// (quaternionic model).
    pub fn holonomy_transport(&self, p: &AmbientVector, t: f64) -> Result<Holonomy> {
        let geo = self.geometry();
        self.require_point(&geo, p)?;
        let matrix = match self.kind {
            SubmersionKind::ThetaCircle { .. } | SubmersionKind::ComplexHopf { .. } => {
                let rot = DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
                block_diag(&rot, geo.ctx.dim() / 2)
            }
            SubmersionKind::QuaternionicHopf { .. } => {
                let lam = HyperNumber::new(Algebra::Quaternion, &[t.cos(), t.sin(), 0.0, 0.0]).expect("len 4");
                quaternion_right(&lam, geo.ctx.dim() / 4)
            }
            _ => {
                return Err(Error::Unsupported(format!(
                    "holonomy transport for {}: supported models are theta, complex-hopf, quaternionic-hopf",
                    self.kind
                )))
            }
        };
        let target = p.with_coords(&matrix * p.coords());
        if (target.square() - p.square()).abs() > 1e-9 * (1.0 + p.coord_norm().powi(2)) {
            return Err(Error::Domain("fibre path left the total space".into()));
        }
        Ok(Holonomy { target, matrix })
    }

    /// Geodesic of the upstairs quadric.
    pub fn geodesic(&self, p: &AmbientVector, v: &AmbientVector, t: f64) -> Result<AmbientVector> {
        self.total_space().geodesic(p, v, t)
    }

    /// Right multiplication by `i` on quaternion blocks, the complex structure
    /// of the total space of `ComplexToQuaternionic`.
    pub(crate) fn total_complex_structure(&self) -> Option<DMatrix<f64>> {
        match self.kind {
            SubmersionKind::ComplexToQuaternionic { k } => Some(quaternion_right(&quat_unit(1), k + 1)),
            _ => None,
        }
    }

    /// `R(X,Y,Z,W)` of the total space.
    pub fn total_curvature(
        &self,
        p: &AmbientVector,
        x: &AmbientVector,
        y: &AmbientVector,
        z: &AmbientVector,
        w: &AmbientVector,
    ) -> Result<f64> {
        let geo = self.geometry();
        for v in [x, y, z, w] {
            self.require_tangent(&geo, p, v)?;
        }
        match self.total_complex_structure() {
            None => geo.space.curvature_total(p, x, y, z, w),
            Some(i) => {
                let ctx = geo.ctx;
                let q = |a: &DVector<f64>, b: &DVector<f64>| {
                    let gab = ctx.eval(a, b);
                    let giab = ctx.eval(&(&i * a), b);
                    -(ctx.eval(a, a) * ctx.eval(b, b) - gab * gab + 3.0 * giab * giab)
                };
                Ok(crate::spaces::polarize(q, x.coords(), y.coords(), z.coords(), w.coords()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submersion::SubmersionKind as K;

    fn models() -> Vec<SubmersionModel> {
        [
            K::ThetaCircle { m: 2, s: 1 },
            K::ComplexHopf { k: 2 },
            K::QuaternionicHopf { k: 2 },
            K::OctonionicHopf,
            K::ComplexToQuaternionic { k: 1 },
        ]
        .into_iter()
        .map(|k| SubmersionModel::new(k).unwrap())
        .collect()
    }

    #[test]
    fn octonionic_projection_at_base_point() {
        let m = SubmersionModel::new(K::OctonionicHopf).unwrap();
        let ctx = m.total_space().context();
        let p = AmbientVector::basis(ctx, 0);
        let BasePoint::Quadric { point, .. } = m.project(&p).unwrap() else { panic!() };
        assert_eq!(point.coords()[0], 0.5);
        assert!(point.coords().rows(1, 8).iter().all(|x| *x == 0.0));
        assert_eq!(point.square(), -0.25);
    }

    #[test]
    fn octonionic_differential_at_base_point() {
        let m = SubmersionModel::new(K::OctonionicHopf).unwrap();
        let ctx = m.total_space().context();
        let p = AmbientVector::basis(ctx, 0);
        let v = [0.3, -0.2, 0.5, 0.1, 0.0, 0.7, -0.4, 0.2];
        let mut c = vec![0.0; 8];
        c.extend_from_slice(&v);
        let w = AmbientVector::new(c, ctx).unwrap();
        let d = m.differential(&p, &w).unwrap();
        // dπ(0,v) = (0, conj(v))
        assert!(d.vector.coords()[0].abs() < 1e-15);
        assert!((d.vector.coords()[1] - v[0]).abs() < 1e-15);
        for i in 1..8 {
            assert!((d.vector.coords()[i + 1] + v[i]).abs() < 1e-15);
        }
        assert!((d.vector.square() - w.square()).abs() < 1e-14);
    }

    #[test]
    fn octonionic_vertical_at_base_point_is_imaginary_first_slot() {
        let m = SubmersionModel::new(K::OctonionicHopf).unwrap();
        let p = AmbientVector::basis(m.total_space().context(), 0);
        let f = m.split_frame(&p).unwrap();
        assert_eq!(f.vertical.len(), 7);
        for v in f.vertical.vectors() {
            assert!(v.coords()[0].abs() < 1e-12);
            assert!(v.coords().rows(8, 8).norm() < 1e-12);
        }
    }

    #[test]
    fn circle_fibre_projects_to_one_point() {
        let m = SubmersionModel::new(K::ComplexHopf { k: 3 }).unwrap();
        let mut rng = SeedStream::new(1);
        for _ in 0..100 {
            let p = m.sample_point(&mut rng);
            let theta = rng.gaussian() * 3.0;
            let h = m.holonomy_transport(&p, theta).unwrap();
            let a = m.project(&p).unwrap();
            let b = m.project(&h.target).unwrap();
            assert!((a.representative() - b.representative()).coord_norm() < 1e-10);
        }
    }

    #[test]
    fn quaternionic_fibre_projects_to_one_point() {
        let m = SubmersionModel::new(K::QuaternionicHopf { k: 2 }).unwrap();
        let mut rng = SeedStream::new(2);
        for _ in 0..50 {
            let p = m.sample_point(&mut rng);
            let lam = DVector::from_vec(rng.gaussians(4)).normalize();
            let lam = HyperNumber::new(Algebra::Quaternion, lam.as_slice()).unwrap();
            let r = quaternion_right(&lam, 3);
            let q = p.with_coords(r * p.coords());
            let a = m.project(&p).unwrap();
            let b = m.project(&q).unwrap();
            assert!(a.approx_eq(&b, 1e-9));
            assert!((a.representative() - b.representative()).coord_norm() < 1e-9);
        }
    }

    #[test]
    fn vertical_vectors_have_zero_differential() {
        let mut rng = SeedStream::new(3);
        for m in models() {
            let p = m.sample_point(&mut rng);
            let f = m.split_frame(&p).unwrap();
            for v in f.vertical.vectors() {
                let d = m.differential(&p, v).unwrap();
                assert!(d.vector.coord_norm() < 1e-10 * (1.0 + p.coord_norm().powi(2)), "{}", m.kind());
                assert!(v.square() < 0.0);
            }
        }
    }

    #[test]
    fn horizontal_frames_map_to_orthonormal_frames() {
        let mut rng = SeedStream::new(4);
        for m in models() {
            let p = m.sample_point(&mut rng);
            let f = m.split_frame(&p).unwrap();
            let imgs: Vec<_> = f.horizontal.vectors().iter().map(|h| m.differential(&p, h).unwrap()).collect();
            for i in 0..imgs.len() {
                for j in 0..imgs.len() {
                    let want = if i == j { f.horizontal.signs()[i] } else { 0.0 };
                    assert!((imgs[i].dot(&imgs[j]) - want).abs() < 1e-10, "{}", m.kind());
                }
            }
        }
    }

    #[test]
    fn complex_hopf_vertical_is_ip() {
        let m = SubmersionModel::new(K::ComplexHopf { k: 2 }).unwrap();
        let p = m.sample_point(&mut SeedStream::new(5));
        let f = m.split_frame(&p).unwrap();
        let ip = p.with_coords(pairwise_complex_structure(6) * p.coords());
        assert!((&f.vertical.vectors()[0] - &ip).coord_norm() < 1e-12);
        assert_eq!(f.vertical.signs(), &[-1.0]);
    }

    #[test]
    fn off_quadric_point_is_rejected() {
        let m = SubmersionModel::new(K::ComplexHopf { k: 1 }).unwrap();
        let p = AmbientVector::basis(m.total_space().context(), 0).scaled(2.0);
        assert!(matches!(m.project(&p), Err(Error::Domain(_))));
    }

    #[test]
    fn holonomy_is_identity_at_zero_and_isometric() {
        let m = SubmersionModel::new(K::QuaternionicHopf { k: 1 }).unwrap();
        let mut rng = SeedStream::new(6);
        let p = m.sample_point(&mut rng);
        let h0 = m.holonomy_transport(&p, 0.0).unwrap();
        assert!((h0.matrix.clone() - DMatrix::identity(8, 8)).amax() < 1e-15);
        let f = m.split_frame(&p).unwrap();
        let x = f.random_horizontal(&mut rng, false).unwrap();
        let y = f.random_horizontal(&mut rng, false).unwrap();
        let h = m.holonomy_transport(&p, 2.0).unwrap();
        assert!((h.apply(&x).dot(&h.apply(&y)) - x.dot(&y)).abs() < 1e-10);
        let a = m.differential(&p, &x).unwrap();
        let b = m.differential(&h.target, &h.apply(&x)).unwrap();
        assert!((&a.vector - &b.vector).coord_norm() < 1e-10);
    }
}
