//! Pointwise O'Neill tensors.
//!
//! With `v`, `h`, `n` the vertical, horizontal and normal projector fields
//! and `D` the flat derivative of the ambient space,
//!
//! * `A_X Y = v(D_X (hY)) = -v (D_X v) Y`
//! * `A_X V = h(D_X (vV)) = h (D_X v) V`
//! * `T_U V = h(D_U (vV)) = h (D_U v) V`
//!
//! The Levi-Civita correction of the quadric points along the normal span
//! and is removed by both projections, so these are exact.

use nalgebra::{DMatrix, DVector};

use super::model::Geometry;
use super::{SplitFrame, SubmersionKind, SubmersionModel};
use crate::error::{Error, Result};
use crate::linalg::AmbientVector;
use crate::spaces::{BaseCurvatureModel, BaseKind};

/// Projector fields evaluated once at a point.
pub(crate) struct Local {
    pub geo: Geometry,
    pub point: AmbientVector,
    pub v: DMatrix<f64>,
    pub h: DMatrix<f64>,
    pub n: DMatrix<f64>,
}

impl Local {
    /// `D_X v` at the point.
    pub fn dv(&self, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.geo.d_vertical_proj(self.point.coords(), x)
    }

    /// `D_X h = -D_X v - D_X n`.
    pub fn dh(&self, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        Ok(-self.dv(x)? - self.geo.d_normal_proj(self.point.coords(), x)?)
    }

    fn scale(&self, x: &AmbientVector) -> f64 {
        1e-8 * (1.0 + x.coord_norm()) * (1.0 + self.point.coord_norm()).powi(2)
    }

    fn require_tangent(&self, x: &AmbientVector) -> Result<()> {
        if x.context() != self.geo.ctx {
            return Err(Error::ContextMismatch { left: self.geo.ctx.to_string(), right: x.context().to_string() });
        }
        let nx = (&self.n * x.coords()).norm();
        if nx > self.scale(x) {
            return Err(Error::Domain(format!("vector not tangent: normal part {nx:e}")));
        }
        Ok(())
    }

    pub fn require_horizontal(&self, x: &AmbientVector) -> Result<()> {
        self.require_tangent(x)?;
        let vx = (&self.v * x.coords()).norm();
        if vx > self.scale(x) {
            return Err(Error::Domain(format!("vector not horizontal: vertical part {vx:e}")));
        }
        Ok(())
    }

    pub fn require_vertical(&self, x: &AmbientVector) -> Result<()> {
        self.require_tangent(x)?;
        let hx = (&self.h * x.coords()).norm();
        if hx > self.scale(x) {
            return Err(Error::Domain(format!("vector not vertical: horizontal part {hx:e}")));
        }
        Ok(())
    }

    /// `-v (D_X v) Y`.
    pub fn a(&self, x: &AmbientVector, y: &AmbientVector) -> Result<AmbientVector> {
        let dv = self.dv(x.coords())?;
        Ok(self.point.with_coords(-(&self.v * (dv * y.coords()))))
    }

    /// `h (D_X v) V`.
    pub fn a_adjoint(&self, x: &AmbientVector, v: &AmbientVector) -> Result<AmbientVector> {
        let dv = self.dv(x.coords())?;
        Ok(self.point.with_coords(&self.h * (dv * v.coords())))
    }

    /// The corrupted tensor: the coefficient of `A_X Y` along the first
    /// vertical vector is evaluated at `(RX, RY)`, where `R` reverses the
    /// first horizontal frame vector.
    pub fn a_faulty(&self, frame: &SplitFrame, x: &AmbientVector, y: &AmbientVector) -> Result<AmbientVector> {
        let h1 = &frame.horizontal.vectors()[0];
        let e1 = frame.horizontal.signs()[0];
        let reflect = |z: &AmbientVector| z - &h1.scaled(2.0 * e1 * z.dot(h1));
        let v1 = &frame.vertical.vectors()[0];
        let s1 = frame.vertical.signs()[0];
        let good = self.a(x, y)?;
        let bent = self.a(&reflect(x), &reflect(y))?;
        let delta = s1 * (bent.dot(v1) - good.dot(v1));
        Ok(&good + &v1.scaled(delta))
    }

    /// Adjoint of the corrupted tensor, `g(A_X V, h_i) = -g(V, A_X h_i)`.
    pub fn a_adjoint_faulty(&self, frame: &SplitFrame, x: &AmbientVector, v: &AmbientVector) -> Result<AmbientVector> {
        let mut out = AmbientVector::zeros(self.geo.ctx);
        for (h, s) in frame.horizontal.vectors().iter().zip(frame.horizontal.signs()) {
            let a = self.a_faulty(frame, x, h)?;
            out.axpy(-s * v.dot(&a), h);
        }
        Ok(out)
    }
}

impl SubmersionModel {
    pub(crate) fn local(&self, p: &AmbientVector) -> Result<Local> {
        let geo = self.geometry();
        self.require_point(&geo, p)?;
        let q = p.coords();
        let v = geo.vertical_proj(q)?;
        let n = geo.normal_proj(q)?;
        let h = geo.identity() - &v - &n;
        Ok(Local { geo, point: p.clone(), v, h, n })
    }

    /// `A_X Y` for horizontal `X, Y`; a vertical vector.
    pub fn a_tensor(&self, p: &AmbientVector, x: &AmbientVector, y: &AmbientVector) -> Result<AmbientVector> {
        let local = self.local(p)?;
        local.require_horizontal(x)?;
        local.require_horizontal(y)?;
        if self.fault {
            local.a_faulty(&self.raw_split_frame(p)?, x, y)
        } else {
            local.a(x, y)
        }
    }

    /// `A_X V` for horizontal `X` and vertical `V`; a horizontal vector.
    pub fn a_tensor_adjoint(&self, p: &AmbientVector, x: &AmbientVector, v: &AmbientVector) -> Result<AmbientVector> {
        let local = self.local(p)?;
        local.require_horizontal(x)?;
        local.require_vertical(v)?;
        if self.fault {
            local.a_adjoint_faulty(&self.raw_split_frame(p)?, x, v)
        } else {
            local.a_adjoint(x, v)
        }
    }

    /// `T_U V` for vertical `U, V`; a horizontal vector.
    pub fn t_tensor(&self, p: &AmbientVector, u: &AmbientVector, v: &AmbientVector) -> Result<AmbientVector> {
        let local = self.local(p)?;
        local.require_vertical(u)?;
        local.require_vertical(v)?;
        let dv = local.dv(u.coords())?;
        Ok(p.with_coords(&local.h * (dv * v.coords())))
    }

    /// The maps `X -> A_X v_a` over the vertical frame, as matrices in
    /// horizontal frame coordinates.
    pub fn structures_in(&self, frame: &SplitFrame) -> Result<Vec<DMatrix<f64>>> {
        let local = self.local(&frame.point)?;
        let n = frame.horizontal.len();
        let mut out = vec![DMatrix::zeros(n, n); frame.vertical.len()];
        if self.fault {
            let raw = self.raw_split_frame(&frame.point)?;
            for (j, hj) in frame.horizontal.vectors().iter().enumerate() {
                for (a, va) in frame.vertical.vectors().iter().enumerate() {
                    let img = local.a_adjoint_faulty(&raw, hj, va)?;
                    out[a].set_column(j, &frame.horizontal_coords(&img));
                }
            }
            return Ok(out);
        }
        for (j, hj) in frame.horizontal.vectors().iter().enumerate() {
            let hdv = &local.h * local.dv(hj.coords())?;
            for (a, va) in frame.vertical.vectors().iter().enumerate() {
                let img = va.with_coords(&hdv * va.coords());
                out[a].set_column(j, &frame.horizontal_coords(&img));
            }
        }
        Ok(out)
    }

    pub(crate) fn orient(&self, frame: &mut SplitFrame) -> Result<()> {
        let exact = SubmersionModel { kind: self.kind, fault: false };
        let phis = exact.structures_in(frame)?;
        let n = frame.horizontal.len();
        let vol = phis.iter().fold(DMatrix::identity(n, n), |acc, m| acc * m);
        if (&vol + DMatrix::identity(n, n)).amax() < 1e-6 {
            let last = frame.vertical.len() - 1;
            frame.vertical.negate(last);
        }
        Ok(())
    }

    /// Skew complex structures on the horizontal space induced by `A`, plus
    /// the total complex structure for `ComplexToQuaternionic`. Returned with
    /// the frame they are expressed in.
    pub fn base_structures(&self, p: &AmbientVector) -> Result<(SplitFrame, Vec<DMatrix<f64>>)> {
        let frame = self.split_frame(p)?;
        let mut st = self.structures_in(&frame)?;
        if let Some(i0) = self.total_complex_structure() {
            let m = frame.horizontal_matrix(|x| x.with_coords(&i0 * x.coords()));
            st.insert(0, m);
        }
        Ok((frame, st))
    }

    pub fn base_kind(&self) -> BaseKind {
        match self.kind {
            SubmersionKind::ThetaCircle { .. } | SubmersionKind::ComplexHopf { .. } => BaseKind::ComplexHyperbolic,
            SubmersionKind::QuaternionicHopf { .. } | SubmersionKind::ComplexToQuaternionic { .. } => {
                BaseKind::QuaternionicHyperbolic
            }
            SubmersionKind::OctonionicHopf => BaseKind::RealHyperbolic4,
        }
    }

    /// Curvature model of the base in the horizontal frame at `p`.
    pub fn base_curvature_model(&self, p: &AmbientVector) -> Result<(SplitFrame, BaseCurvatureModel)> {
        let (frame, st) = self.base_structures(p)?;
        let dims = self.dims();
        let st = if self.base_kind() == BaseKind::RealHyperbolic4 { Vec::new() } else { st };
        let model = BaseCurvatureModel::new(self.base_kind(), dims.n, dims.base_index, st, 1e-8)?;
        Ok((frame, model))
    }
}

/// Tensors at one point with projectors cached; honours the fault flag.
/// Inputs are not re-validated.
pub(crate) struct At {
    pub local: Local,
    fault: Option<SplitFrame>,
}

impl SubmersionModel {
    pub(crate) fn at(&self, p: &AmbientVector) -> Result<At> {
        let local = self.local(p)?;
        let fault = if self.fault { Some(self.raw_split_frame(p)?) } else { None };
        Ok(At { local, fault })
    }
}

impl At {
    pub fn a(&self, x: &AmbientVector, y: &AmbientVector) -> Result<AmbientVector> {
        match &self.fault {
            Some(f) => self.local.a_faulty(f, x, y),
            None => self.local.a(x, y),
        }
    }

    pub fn a_adjoint(&self, x: &AmbientVector, v: &AmbientVector) -> Result<AmbientVector> {
        match &self.fault {
            Some(f) => self.local.a_adjoint_faulty(f, x, v),
            None => self.local.a_adjoint(x, v),
        }
    }

    pub fn t(&self, u: &AmbientVector, v: &AmbientVector) -> Result<AmbientVector> {
        let dv = self.local.dv(u.coords())?;
        Ok(u.with_coords(&self.local.h * (dv * v.coords())))
    }
}
