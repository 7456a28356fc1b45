//! Scalar products of arbitrary signature and the linear algebra built on them.
//!
//! Negative directions always come first: a [`ScalarProduct`] of index `s`
//! on `R^n` has Gram matrix `diag(-1, .., -1, +1, .., +1)` with `s` leading
//! minus signs. Every model in the crate inherits this ordering.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for degeneracy and kernel decisions on unit-scale data.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScalarProduct {
    dim: usize,
    index: usize,
}

impl ScalarProduct {
    pub fn new(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("scalar product needs a positive dimension".into()));
        }
        if index > dim {
            return Err(Error::Config(format!("index {index} exceeds dimension {dim}")));
        }
        Ok(ScalarProduct { dim, index })
    }

    pub fn euclidean(dim: usize) -> Result<Self> {
        Self::new(dim, 0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Diagonal entry of the Gram matrix at position `i`.
    #[inline]
    pub fn sign(&self, i: usize) -> f64 {
        if i < self.index {
            -1.0
        } else {
            1.0
        }
    }

    pub fn gram(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| if i == j { self.sign(i) } else { 0.0 })
    }

    /// Evaluates the form on raw coordinate vectors. Lengths must match `dim`.
    #[inline]
    pub fn eval(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        let mut neg = 0.0;
        for i in 0..self.index {
            neg += x[i] * y[i];
        }
        let mut pos = 0.0;
        for i in self.index..self.dim {
            pos += x[i] * y[i];
        }
        pos - neg
    }

    /// Applies the Gram matrix, i.e. flips the sign of the leading block.
    pub fn lower(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut out = x.clone();
        for i in 0..self.index {
            out[i] = -out[i];
        }
        out
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: len });
        }
        Ok(())
    }
}

impl fmt::Display for ScalarProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R^{}_{}", self.dim, self.index)
    }
}

/// Coordinates in `R^dim` tied to the scalar product that measures them.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientVector {
    coords: DVector<f64>,
    context: ScalarProduct,
}

impl AmbientVector {
    pub fn new(coords: Vec<f64>, context: ScalarProduct) -> Result<Self> {
        context.check_len(coords.len())?;
        Ok(AmbientVector { coords: DVector::from_vec(coords), context })
    }

    pub fn from_dvector(coords: DVector<f64>, context: ScalarProduct) -> Result<Self> {
        context.check_len(coords.len())?;
        Ok(AmbientVector { coords, context })
    }

    pub fn zeros(context: ScalarProduct) -> Self {
        AmbientVector { coords: DVector::zeros(context.dim), context }
    }

    /// The `i`-th standard basis vector.
    pub fn basis(context: ScalarProduct, i: usize) -> Self {
        let mut v = Self::zeros(context);
        v.coords[i] = 1.0;
        v
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn into_coords(self) -> DVector<f64> {
        self.coords
    }

    pub fn context(&self) -> ScalarProduct {
        self.context
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Squared length under the indefinite form.
    pub fn square(&self) -> f64 {
        self.context.eval(&self.coords, &self.coords)
    }

    /// Euclidean norm of the coordinate array.
    pub fn coord_norm(&self) -> f64 {
        self.coords.norm()
    }

    pub fn dot(&self, other: &AmbientVector) -> f64 {
        debug_assert_eq!(self.context, other.context);
        self.context.eval(&self.coords, &other.coords)
    }

    pub fn scaled(&self, s: f64) -> Self {
        AmbientVector { coords: &self.coords * s, context: self.context }
    }

    pub fn axpy(&mut self, a: f64, x: &AmbientVector) {
        self.coords.axpy(a, &x.coords, 1.0);
    }

    pub(crate) fn with_coords(&self, coords: DVector<f64>) -> Self {
        debug_assert_eq!(coords.len(), self.context.dim);
        AmbientVector { coords, context: self.context }
    }
}

impl Add for &AmbientVector {
    type Output = AmbientVector;
    fn add(self, rhs: &AmbientVector) -> AmbientVector {
        debug_assert_eq!(self.context, rhs.context);
        AmbientVector { coords: &self.coords + &rhs.coords, context: self.context }
    }
}

impl Sub for &AmbientVector {
    type Output = AmbientVector;
    fn sub(self, rhs: &AmbientVector) -> AmbientVector {
        debug_assert_eq!(self.context, rhs.context);
        AmbientVector { coords: &self.coords - &rhs.coords, context: self.context }
    }
}

impl Mul<f64> for &AmbientVector {
    type Output = AmbientVector;
    fn mul(self, rhs: f64) -> AmbientVector {
        self.scaled(rhs)
    }
}

impl Neg for &AmbientVector {
    type Output = AmbientVector;
    fn neg(self) -> AmbientVector {
        self.scaled(-1.0)
    }
}

fn same_context(x: &AmbientVector, y: &AmbientVector) -> Result<()> {
    if x.context != y.context {
        return Err(Error::ContextMismatch { left: x.context.to_string(), right: y.context.to_string() });
    }
    Ok(())
}

/// `-sum_{i<index} x_i y_i + sum_{i>=index} x_i y_i`.
pub fn scalar_product(x: &AmbientVector, y: &AmbientVector) -> Result<f64> {
    same_context(x, y)?;
    Ok(x.context.eval(&x.coords, &y.coords))
}

/// A list of mutually orthogonal vectors with squares `±1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoFrame {
    context: ScalarProduct,
    vectors: Vec<AmbientVector>,
    signs: Vec<f64>,
}

impl PseudoFrame {
    pub fn empty(context: ScalarProduct) -> Self {
        PseudoFrame { context, vectors: Vec::new(), signs: Vec::new() }
    }

    pub fn context(&self) -> ScalarProduct {
        self.context
    }

    pub fn vectors(&self) -> &[AmbientVector] {
        &self.vectors
    }

    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Number of timelike (square `-1`) members.
    pub fn index(&self) -> usize {
        self.signs.iter().filter(|s| **s < 0.0).count()
    }

    /// Coefficients `sign_i <x, u_i>`, so that `x = sum coeff_i u_i` on the span.
    pub fn coordinates(&self, x: &AmbientVector) -> DVector<f64> {
        DVector::from_iterator(
            self.len(),
            self.vectors.iter().zip(&self.signs).map(|(u, s)| s * x.dot(u)),
        )
    }

    /// Inverse of [`coordinates`](Self::coordinates).
    pub fn combine(&self, coeffs: &DVector<f64>) -> AmbientVector {
        let mut out = AmbientVector::zeros(self.context);
        for (c, u) in coeffs.iter().zip(&self.vectors) {
            out.axpy(*c, u);
        }
        out
    }

    /// Gram matrix of the frame in its own coordinates, `diag(signs)`.
    pub fn metric(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_column_slice(&self.signs))
    }

    /// Replaces member `i` by its negative.
    pub fn negate(&mut self, i: usize) {
        self.vectors[i] = self.vectors[i].scaled(-1.0);
    }

    fn push(&mut self, u: AmbientVector, sign: f64) {
        self.vectors.push(u);
        self.signs.push(sign);
    }

    /// Removes the components along the frame: `x - sum sign_i <x,u_i> u_i`.
    fn reject(&self, x: &AmbientVector) -> AmbientVector {
        let mut r = x.clone();
        for (u, s) in self.vectors.iter().zip(&self.signs) {
            let c = s * r.dot(u);
            r.axpy(-c, u);
        }
        r
    }
}

/// Order-preserving Gram-Schmidt under an indefinite form.
///
/// Each step is orthogonalized twice. A pivot whose squared norm falls below
/// `tol` in magnitude is reported as a degeneracy naming the step.
pub fn gram_schmidt(vectors: &[AmbientVector], tol: f64) -> Result<PseudoFrame> {
    let Some(first) = vectors.first() else {
        return Err(Error::Config("gram_schmidt needs at least one vector".into()));
    };
    let ctx = first.context;
    let mut frame = PseudoFrame::empty(ctx);
    for (step, v) in vectors.iter().enumerate() {
        same_context(first, v)?;
        let u = frame.reject(&frame.reject(v));
        let nrm = u.square();
        if nrm.abs() < tol {
            return Err(Error::Degenerate { step, norm: nrm.abs(), tol });
        }
        frame.push(u.scaled(1.0 / nrm.abs().sqrt()), nrm.signum());
    }
    Ok(frame)
}

/// Pseudo-orthonormal basis of the span of `candidates`, which may be
/// linearly dependent.
///
/// The candidate with the largest `|<u,u>|` is taken first at each round.
/// Candidates whose Euclidean residual drops below `tol` times their
/// original size are discarded as dependent. If only null residuals remain
/// a pair with non-zero mutual product is combined into a non-null vector.
/// The output lists timelike vectors before spacelike ones.
pub fn span_frame(candidates: &[AmbientVector], ctx: ScalarProduct, tol: f64) -> Result<PseudoFrame> {
    for c in candidates {
        if c.context != ctx {
            return Err(Error::ContextMismatch { left: ctx.to_string(), right: c.context.to_string() });
        }
    }
    let scale: Vec<f64> = candidates.iter().map(|c| c.coord_norm().max(1.0)).collect();
    let mut frame = PseudoFrame::empty(ctx);
    let mut pool: Vec<(AmbientVector, f64)> =
        candidates.iter().cloned().zip(scale).collect();
    loop {
        pool = pool
            .into_iter()
            .map(|(c, s)| (frame.reject(&frame.reject(&c)), s))
            .filter(|(c, s)| c.coord_norm() > tol * s)
            .collect();
        if pool.is_empty() {
            break;
        }
        let (best, best_sq) = pool
            .iter()
            .enumerate()
            .map(|(i, (c, _))| (i, c.square()))
            .fold((0, 0.0_f64), |acc, (i, q)| if q.abs() > acc.1.abs() { (i, q) } else { acc });
        if best_sq.abs() >= tol {
            let (u, _) = pool.swap_remove(best);
            frame.push(u.scaled(1.0 / best_sq.abs().sqrt()), best_sq.signum());
            continue;
        }
        // All residuals are null: combine the pair with the largest product.
        let mut pair = None;
        let mut best_prod = 0.0_f64;
        for i in 0..pool.len() {
            for j in (i + 1)..pool.len() {
                let p = pool[i].0.dot(&pool[j].0);
                if p.abs() > best_prod.abs() {
                    best_prod = p;
                    pair = Some((i, j));
                }
            }
        }
        let Some((i, j)) = pair.filter(|_| best_prod.abs() >= tol) else {
            return Err(Error::Degenerate { step: frame.len(), norm: best_prod.abs(), tol });
        };
        let u = &pool[i].0 + &pool[j].0;
        let sq = u.square();
        frame.push(u.scaled(1.0 / sq.abs().sqrt()), sq.signum());
    }
    let mut order: Vec<usize> = (0..frame.len()).collect();
    order.sort_by(|a, b| frame.signs[*a].total_cmp(&frame.signs[*b]));
    let mut sorted = PseudoFrame::empty(ctx);
    for i in order {
        sorted.push(frame.vectors[i].clone(), frame.signs[i]);
    }
    Ok(sorted)
}

/// `sum_i sign_i <x,u_i> u_i`.
pub fn project_onto(x: &AmbientVector, basis: &PseudoFrame) -> Result<AmbientVector> {
    if x.context != basis.context {
        return Err(Error::ContextMismatch { left: x.context.to_string(), right: basis.context.to_string() });
    }
    Ok(basis.combine(&basis.coordinates(x)))
}

/// A real symmetric matrix, symmetrized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricForm {
    matrix: DMatrix<f64>,
}

impl SymmetricForm {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let sym = (&matrix + matrix.transpose()) * 0.5;
        Ok(SymmetricForm { matrix: sym })
    }

    /// Builds the matrix of a quadratic form from its values by polarization.
    pub fn from_quadratic(dim: usize, q: impl Fn(&DVector<f64>) -> f64) -> Self {
        let e = |i: usize| DVector::from_fn(dim, |k, _| if k == i { 1.0 } else { 0.0 });
        let mut m = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = q(&e(i));
            for j in 0..i {
                let v = (q(&(e(i) + e(j))) - q(&(e(i) - e(j)))) / 4.0;
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        SymmetricForm { matrix: m }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

#[derive(Debug, Clone)]
pub struct FormKernel {
    pub dimension: usize,
    /// Orthonormal (Euclidean) eigenbasis of the kernel.
    pub basis: Vec<DVector<f64>>,
}

/// Counts eigenvalues with `|λ| < tol` and returns their eigenvectors.
///
/// Fails when some eigenvalue sits in `[tol/10, tol*10]`, where the split
/// between kernel and non-kernel cannot be trusted.
pub fn form_kernel_dimension(q: &SymmetricForm, tol: f64) -> Result<FormKernel> {
    let eig = SymmetricEigen::new(q.matrix.clone());
    let mut basis = Vec::new();
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|a, b| eig.eigenvalues[*a].abs().total_cmp(&eig.eigenvalues[*b].abs()));
    for i in idx {
        let lam = eig.eigenvalues[i].abs();
        if lam >= tol / 10.0 && lam <= tol * 10.0 {
            return Err(Error::AmbiguousKernel { value: eig.eigenvalues[i], tol });
        }
        if lam < tol {
            basis.push(eig.eigenvectors.column(i).into_owned());
        }
    }
    Ok(FormKernel { dimension: basis.len(), basis })
}

/// Euclidean null space of `a` (columns of the result): right singular
/// vectors with singular value below `tol`.
pub(crate) fn null_space(a: &DMatrix<f64>, tol: f64) -> Vec<DVector<f64>> {
    let cols = a.ncols();
    let padded;
    let a = if a.nrows() < cols {
        padded = a.clone().resize_vertically(cols, 0.0);
        &padded
    } else {
        a
    };
    let svd = a.clone().svd(false, true);
    let vt = svd.v_t.expect("requested");
    (0..cols)
        .filter(|i| svd.singular_values[*i] < tol)
        .map(|i| vt.row(i).transpose())
        .collect()
}
