//! The five canonical submersions out of pseudo-hyperbolic quadrics.
//!
//! Every model is computed on a real quadric `H^N_S ⊂ R^{N+1}`:
//!
//! | kind | quadric | vertical at `q` | base |
//! |---|---|---|---|
//! | `ThetaCircle(m,s)` | `H^{2m+1}_{2s+1}` | `iq` (pairwise) | `CH^m_s` |
//! | `ComplexHopf(k)` | `H^{2k+1}_1` | `iq` | `CH^k` |
//! | `QuaternionicHopf(k)` | `H^{4k+3}_3` | `qi, qj, qk` | `HH^k` |
//! | `OctonionicHopf` | `H^15_7` | `ker dπ` | `H^8(-4) ⊂ R^9_1` |
//! | `ComplexToQuaternionic(k)` | `H^{4k+3}_3` | `qj, qk` | `HH^k` |
//!
//! The last one has total space `CH^{2k+1}_1`; it is handled through
//! representatives upstairs, with `q` and `qi` both treated as normal.
//!
//! All distributions are spanned by generators `M_a q` linear in the point,
//! so their projector fields and the flat derivatives of those fields have
//! closed forms. The O'Neill tensors are read off from the derivatives.

mod model;
mod tensors;

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{AmbientVector, PseudoFrame};
use crate::sampling::SeedStream;

pub use model::{BasePoint, BaseTangent, Holonomy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubmersionKind {
    ThetaCircle { m: usize, s: usize },
    ComplexHopf { k: usize },
    QuaternionicHopf { k: usize },
    OctonionicHopf,
    ComplexToQuaternionic { k: usize },
}

impl fmt::Display for SubmersionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubmersionKind::ThetaCircle { m, s } => write!(f, "theta(m={m},s={s})"),
            SubmersionKind::ComplexHopf { k } => write!(f, "complex-hopf(k={k})"),
            SubmersionKind::QuaternionicHopf { k } => write!(f, "quaternionic-hopf(k={k})"),
            SubmersionKind::OctonionicHopf => write!(f, "octonionic-hopf"),
            SubmersionKind::ComplexToQuaternionic { k } => write!(f, "complex-to-quaternionic(k={k})"),
        }
    }
}

/// Dimension bookkeeping of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    /// Dimension of the total space.
    pub m_tot: usize,
    /// Index of the total space.
    pub s_tot: usize,
    /// Fibre dimension.
    pub r: usize,
    /// Base dimension.
    pub n: usize,
    /// Index of the base metric.
    pub base_index: usize,
}

/// A submersion descriptor. `fault` corrupts the A-tensor for negative
/// controls and must stay off outside tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubmersionModel {
    kind: SubmersionKind,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    fault: bool,
}

impl SubmersionModel {
    pub fn new(kind: SubmersionKind) -> Result<Self> {
        let bad = |what: &str| Err(Error::Config(format!("{kind}: {what}")));
        match kind {
            SubmersionKind::ThetaCircle { m, s } if m == 0 || s > m => return bad("needs m >= 1 and s <= m"),
            SubmersionKind::ComplexHopf { k }
            | SubmersionKind::QuaternionicHopf { k }
            | SubmersionKind::ComplexToQuaternionic { k }
                if k == 0 =>
            {
                return bad("needs k >= 1")
            }
            _ => {}
        }
        Ok(SubmersionModel { kind, fault: false })
    }

    /// Same model with the A-tensor deliberately corrupted.
    pub fn with_fault(mut self) -> Self {
        self.fault = true;
        self
    }

    pub fn kind(&self) -> SubmersionKind {
        self.kind
    }

    pub fn is_faulty(&self) -> bool {
        self.fault
    }

    pub fn dims(&self) -> Dims {
        match self.kind {
            SubmersionKind::ThetaCircle { m, s } => {
                Dims { m_tot: 2 * m + 1, s_tot: 2 * s + 1, r: 1, n: 2 * m, base_index: 2 * s }
            }
            SubmersionKind::ComplexHopf { k } => Dims { m_tot: 2 * k + 1, s_tot: 1, r: 1, n: 2 * k, base_index: 0 },
            SubmersionKind::QuaternionicHopf { k } => {
                Dims { m_tot: 4 * k + 3, s_tot: 3, r: 3, n: 4 * k, base_index: 0 }
            }
            SubmersionKind::OctonionicHopf => Dims { m_tot: 15, s_tot: 7, r: 7, n: 8, base_index: 0 },
            SubmersionKind::ComplexToQuaternionic { k } => {
                Dims { m_tot: 4 * k + 2, s_tot: 2, r: 2, n: 4 * k, base_index: 0 }
            }
        }
    }

    /// True when the total space is a real quadric of constant curvature.
    pub fn has_real_total(&self) -> bool {
        !matches!(self.kind, SubmersionKind::ComplexToQuaternionic { .. })
    }

    /// True when the base metric is positive definite.
    pub fn has_riemannian_base(&self) -> bool {
        self.dims().base_index == 0
    }
}

/// Horizontal/vertical splitting of `T_pM`.
#[derive(Debug, Clone)]
pub struct SplitFrame {
    pub point: AmbientVector,
    pub vertical: PseudoFrame,
    pub horizontal: PseudoFrame,
}

impl SplitFrame {
    /// Frame coordinates `sign_i g(X, h_i)` of a horizontal vector.
    pub fn horizontal_coords(&self, x: &AmbientVector) -> DVector<f64> {
        self.horizontal.coordinates(x)
    }

    pub fn vertical_coords(&self, v: &AmbientVector) -> DVector<f64> {
        self.vertical.coordinates(v)
    }

    /// A Gaussian horizontal vector, rescaled to `|g(X,X)| = 1` when `unit`.
    pub fn random_horizontal(&self, rng: &mut SeedStream, unit: bool) -> Result<AmbientVector> {
        random_in(&self.horizontal, rng, unit)
    }

    pub fn random_vertical(&self, rng: &mut SeedStream, unit: bool) -> Result<AmbientVector> {
        random_in(&self.vertical, rng, unit)
    }

    /// Matrix of a horizontal endomorphism in frame coordinates.
    pub fn horizontal_matrix(&self, f: impl Fn(&AmbientVector) -> AmbientVector) -> DMatrix<f64> {
        let n = self.horizontal.len();
        let mut m = DMatrix::zeros(n, n);
        for (j, h) in self.horizontal.vectors().iter().enumerate() {
            m.set_column(j, &self.horizontal_coords(&f(h)));
        }
        m
    }
}

/// Maximum number of redraws for a degenerate random vector.
pub const MAX_REDRAWS: usize = 32;

fn random_in(frame: &PseudoFrame, rng: &mut SeedStream, unit: bool) -> Result<AmbientVector> {
    for _ in 0..=MAX_REDRAWS {
        let c = DVector::from_vec(rng.gaussians(frame.len()));
        let x = frame.combine(&c);
        let sq = x.square();
        if sq.abs() < 1e-6 {
            continue;
        }
        return Ok(if unit { x.scaled(1.0 / sq.abs().sqrt()) } else { x });
    }
    Err(Error::Numerical(format!("no non-degenerate draw after {MAX_REDRAWS} retries")))
}
