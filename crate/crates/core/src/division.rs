//! Complex numbers, quaternions and octonions on real coordinate tuples.
//!
//! All three algebras share one multiplication table: the complex numbers are
//! the span of `e0, e1`, the quaternions of `e0..e3`. The table comes from
//! Cayley-Dickson doubling of the quaternions with
//! `(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))`, so `e1 e2 = e3`
//! (`i j = k`) and `e4 = (0, 1)`.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algebra {
    Complex,
    Quaternion,
    Octonion,
}

impl Algebra {
    pub fn dim(self) -> usize {
        match self {
            Algebra::Complex => 2,
            Algebra::Quaternion => 4,
            Algebra::Octonion => 8,
        }
    }
}

/// `OCTONION_TABLE[i][j] = (sign, k)` means `e_i e_j = sign * e_k`.
pub const OCTONION_TABLE: [[(i8, u8); 8]; 8] = [
    [(1, 0), (1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (1, 7)],
    [(1, 1), (-1, 0), (1, 3), (-1, 2), (1, 5), (-1, 4), (-1, 7), (1, 6)],
    [(1, 2), (-1, 3), (-1, 0), (1, 1), (1, 6), (1, 7), (-1, 4), (-1, 5)],
    [(1, 3), (1, 2), (-1, 1), (-1, 0), (1, 7), (-1, 6), (1, 5), (-1, 4)],
    [(1, 4), (-1, 5), (-1, 6), (-1, 7), (-1, 0), (1, 1), (1, 2), (1, 3)],
    [(1, 5), (1, 4), (-1, 7), (1, 6), (-1, 1), (-1, 0), (-1, 3), (1, 2)],
    [(1, 6), (1, 7), (1, 4), (-1, 5), (-1, 2), (1, 3), (-1, 0), (-1, 1)],
    [(1, 7), (-1, 6), (1, 5), (1, 4), (-1, 3), (-1, 2), (1, 1), (-1, 0)],
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperNumber {
    algebra: Algebra,
    coords: [f64; 8],
}

impl HyperNumber {
    pub fn new(algebra: Algebra, coords: &[f64]) -> Result<Self> {
        if coords.len() != algebra.dim() {
            return Err(Error::DimensionMismatch { expected: algebra.dim(), found: coords.len() });
        }
        let mut c = [0.0; 8];
        c[..coords.len()].copy_from_slice(coords);
        Ok(HyperNumber { algebra, coords: c })
    }

    pub fn zero(algebra: Algebra) -> Self {
        HyperNumber { algebra, coords: [0.0; 8] }
    }

    pub fn real(algebra: Algebra, x: f64) -> Self {
        Self::unit(algebra, 0).scale(x)
    }

    /// The basis element `e_i`. Panics if `i` is outside the algebra.
    pub fn unit(algebra: Algebra, i: usize) -> Self {
        assert!(i < algebra.dim(), "unit e_{i} outside {algebra:?}");
        let mut c = [0.0; 8];
        c[i] = 1.0;
        HyperNumber { algebra, coords: c }
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.algebra.dim()]
    }

    pub fn re(&self) -> f64 {
        self.coords[0]
    }

    pub fn norm_sq(&self) -> f64 {
        self.coords().iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut c = self.coords;
        c.iter_mut().for_each(|x| *x *= s);
        HyperNumber { algebra: self.algebra, coords: c }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same(self, other)?;
        let mut c = self.coords;
        for (x, y) in c.iter_mut().zip(other.coords.iter()) {
            *x += y;
        }
        Ok(HyperNumber { algebra: self.algebra, coords: c })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }
}

impl fmt::Display for HyperNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords())
    }
}

fn check_same(a: &HyperNumber, b: &HyperNumber) -> Result<()> {
    if a.algebra != b.algebra {
        return Err(Error::AlgebraMismatch { left: a.algebra, right: b.algebra });
    }
    Ok(())
}

pub(crate) fn mul_slices(n: usize, a: &[f64], b: &[f64], out: &mut [f64]) {
    out[..n].iter_mut().for_each(|x| *x = 0.0);
    for i in 0..n {
        if a[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            let (s, k) = OCTONION_TABLE[i][j];
            out[k as usize] += f64::from(s) * a[i] * b[j];
        }
    }
}

pub fn multiply(a: &HyperNumber, b: &HyperNumber) -> Result<HyperNumber> {
    check_same(a, b)?;
    let mut c = [0.0; 8];
    mul_slices(a.algebra.dim(), &a.coords, &b.coords, &mut c);
    Ok(HyperNumber { algebra: a.algebra, coords: c })
}

pub fn conjugate(a: &HyperNumber) -> HyperNumber {
    let mut c = a.coords;
    c[1..].iter_mut().for_each(|x| *x = -*x);
    HyperNumber { algebra: a.algebra, coords: c }
}

/// Matrix of `x -> u x` on `R^{dim}`.
pub fn left_mult_operator(u: &HyperNumber) -> DMatrix<f64> {
    let n = u.algebra.dim();
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let (s, k) = OCTONION_TABLE[i][j];
            m[(k as usize, j)] += f64::from(s) * u.coords[i];
        }
    }
    m
}

/// Matrix of `x -> x u` on `R^{dim}`.
pub fn right_mult_operator(u: &HyperNumber) -> DMatrix<f64> {
    let n = u.algebra.dim();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (s, k) = OCTONION_TABLE[i][j];
            m[(k as usize, i)] += f64::from(s) * u.coords[j];
        }
    }
    m
}

/// `-sum_{i<index} z_i conj(w_i) + sum_{i>=index} z_i conj(w_i)`.
pub fn hermitian_form(z: &[HyperNumber], w: &[HyperNumber], index: usize) -> Result<HyperNumber> {
    if z.len() != w.len() {
        return Err(Error::DimensionMismatch { expected: z.len(), found: w.len() });
    }
    if index > z.len() {
        return Err(Error::Config(format!("index {index} exceeds length {}", z.len())));
    }
    let Some(first) = z.first() else {
        return Err(Error::Config("hermitian form of empty arrays".into()));
    };
    let mut acc = HyperNumber::zero(first.algebra);
    for (i, (a, b)) in z.iter().zip(w).enumerate() {
        let t = multiply(a, &conjugate(b))?;
        acc = if i < index { acc.sub(&t)? } else { acc.add(&t)? };
    }
    Ok(acc)
}

/// Concatenated real coordinates of an array of hyper numbers.
pub fn realify(z: &[HyperNumber]) -> Vec<f64> {
    z.iter().flat_map(|x| x.coords().iter().copied()).collect()
}

/// Splits real coordinates into blocks of the algebra's dimension.
pub fn complexify(algebra: Algebra, coords: &[f64]) -> Result<Vec<HyperNumber>> {
    let d = algebra.dim();
    if coords.len() % d != 0 {
        return Err(Error::DimensionMismatch { expected: d * coords.len().div_ceil(d), found: coords.len() });
    }
    coords.chunks(d).map(|c| HyperNumber::new(algebra, c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{AmbientVector, ScalarProduct};
    use proptest::prelude::*;

    /// Cayley-Dickson product computed from scratch on quaternion pairs.
    fn cd_octonion(x: &[f64], y: &[f64]) -> Vec<f64> {
        fn q(a: &[f64], b: &[f64]) -> [f64; 4] {
            [
                a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
                a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
                a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
                a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
            ]
        }
        fn qc(a: &[f64]) -> [f64; 4] {
            [a[0], -a[1], -a[2], -a[3]]
        }
        let (a, b, c, d) = (&x[..4], &x[4..], &y[..4], &y[4..]);
        let ac = q(a, c);
        let db = q(&qc(d), b);
        let da = q(d, a);
        let bc = q(b, &qc(c));
        (0..4).map(|i| ac[i] - db[i]).chain((0..4).map(|i| da[i] + bc[i])).collect()
    }

    fn arb(alg: Algebra) -> impl Strategy<Value = HyperNumber> {
        prop::collection::vec(-2.0f64..2.0, alg.dim()).prop_map(move |c| HyperNumber::new(alg, &c).unwrap())
    }

    #[test]
    fn table_matches_cayley_dickson() {
        for i in 0..8 {
            for j in 0..8 {
                let mut e = [0.0; 8];
                e[i] = 1.0;
                let mut f = [0.0; 8];
                f[j] = 1.0;
                let want = cd_octonion(&e, &f);
                let got = multiply(
                    &HyperNumber::new(Algebra::Octonion, &e).unwrap(),
                    &HyperNumber::new(Algebra::Octonion, &f).unwrap(),
                )
                .unwrap();
                assert_eq!(got.coords(), &want[..], "e{i} e{j}");
            }
        }
    }

    #[test]
    fn defining_relations() {
        let q = Algebra::Quaternion;
        let ij = multiply(&HyperNumber::unit(q, 1), &HyperNumber::unit(q, 2)).unwrap();
        assert_eq!(ij, HyperNumber::unit(q, 3));
        let o = Algebra::Octonion;
        let e1 = HyperNumber::unit(o, 1);
        assert_eq!(multiply(&e1, &e1).unwrap(), HyperNumber::real(o, -1.0));
        let c = Algebra::Complex;
        let i = HyperNumber::unit(c, 1);
        assert_eq!(multiply(&i, &i).unwrap(), HyperNumber::real(c, -1.0));
    }

    #[test]
    fn mixed_algebras_rejected() {
        let a = HyperNumber::unit(Algebra::Complex, 0);
        let b = HyperNumber::unit(Algebra::Quaternion, 0);
        assert!(matches!(multiply(&a, &b), Err(Error::AlgebraMismatch { .. })));
    }

    #[test]
    fn conjugation_basics() {
        let q = Algebra::Quaternion;
        assert_eq!(conjugate(&HyperNumber::real(q, 1.0)), HyperNumber::real(q, 1.0));
        assert_eq!(conjugate(&HyperNumber::unit(q, 1)), HyperNumber::unit(q, 1).scale(-1.0));
    }

    #[test]
    fn left_mult_of_one_is_identity() {
        for alg in [Algebra::Complex, Algebra::Quaternion, Algebra::Octonion] {
            let m = left_mult_operator(&HyperNumber::real(alg, 1.0));
            assert_eq!(m, DMatrix::identity(alg.dim(), alg.dim()));
        }
    }

    #[test]
    fn left_mult_of_i_squares_to_minus_one() {
        let m = left_mult_operator(&HyperNumber::unit(Algebra::Quaternion, 1));
        let sq = &m * &m + DMatrix::identity(4, 4);
        assert!(sq.amax() < 1e-14);
    }

    #[test]
    fn octonion_units_anticommute() {
        for a in 1..8 {
            for b in 1..8 {
                if a == b {
                    continue;
                }
                let ma = left_mult_operator(&HyperNumber::unit(Algebra::Octonion, a));
                let mb = left_mult_operator(&HyperNumber::unit(Algebra::Octonion, b));
                assert!((&ma * &mb + &mb * &ma).amax() < 1e-12);
            }
        }
    }

    #[test]
    fn hermitian_form_examples() {
        let c = Algebra::Complex;
        let mut z = vec![HyperNumber::zero(c); 3];
        z[0] = HyperNumber::real(c, 1.0);
        assert_eq!(hermitian_form(&z, &z, 1).unwrap(), HyperNumber::real(c, -1.0));
        let mut w = vec![HyperNumber::zero(c); 3];
        w[2] = HyperNumber::unit(c, 1);
        assert_eq!(hermitian_form(&z, &w, 1).unwrap(), HyperNumber::zero(c));
        assert!(matches!(hermitian_form(&z, &w[..2], 1), Err(Error::DimensionMismatch { .. })));
    }

    proptest! {
        #[test]
        fn octonion_norm_composes(x in arb(Algebra::Octonion), y in arb(Algebra::Octonion)) {
            let p = multiply(&x, &y).unwrap();
            prop_assert!((p.norm() - x.norm() * y.norm()).abs() < 1e-12 * (1.0 + x.norm() * y.norm()));
            let cd = cd_octonion(x.coords(), y.coords());
            for (a, b) in p.coords().iter().zip(&cd) {
                prop_assert!((a - b).abs() < 1e-13);
            }
        }

        #[test]
        fn conjugation_reverses_products(x in arb(Algebra::Octonion), y in arb(Algebra::Octonion)) {
            let lhs = conjugate(&multiply(&x, &y).unwrap());
            let rhs = multiply(&conjugate(&y), &conjugate(&x)).unwrap();
            prop_assert!(lhs.sub(&rhs).unwrap().norm() < 1e-12);
        }

        #[test]
        fn octonions_are_alternative(x in arb(Algebra::Octonion), y in arb(Algebra::Octonion)) {
            let lhs = multiply(&x, &multiply(&x, &y).unwrap()).unwrap();
            let rhs = multiply(&multiply(&x, &x).unwrap(), &y).unwrap();
            prop_assert!(lhs.sub(&rhs).unwrap().norm() < 1e-12);
        }

        #[test]
        fn quaternions_associate(x in arb(Algebra::Quaternion), y in arb(Algebra::Quaternion), z in arb(Algebra::Quaternion)) {
            let lhs = multiply(&multiply(&x, &y).unwrap(), &z).unwrap();
            let rhs = multiply(&x, &multiply(&y, &z).unwrap()).unwrap();
            prop_assert!(lhs.sub(&rhs).unwrap().norm() < 1e-12);
        }

        #[test]
        fn complex_numbers_associate(x in arb(Algebra::Complex), y in arb(Algebra::Complex), z in arb(Algebra::Complex)) {
            let lhs = multiply(&multiply(&x, &y).unwrap(), &z).unwrap();
            let rhs = multiply(&x, &multiply(&y, &z).unwrap()).unwrap();
            prop_assert!(lhs.sub(&rhs).unwrap().norm() < 1e-12);
        }

        #[test]
        fn unit_left_mult_is_isometry(x in arb(Algebra::Octonion), y in arb(Algebra::Octonion)) {
            prop_assume!(x.norm() > 1e-3);
            let u = x.scale(1.0 / x.norm());
            let m = left_mult_operator(&u);
            let v = nalgebra::DVector::from_column_slice(y.coords());
            prop_assert!(((&m * &v).norm() - v.norm()).abs() < 1e-12);
            let w = nalgebra::DVector::from_column_slice(multiply(&u, &y).unwrap().coords());
            prop_assert!((&m * &v - w).amax() < 1e-13);
        }

        #[test]
        fn right_mult_matches_product(x in arb(Algebra::Octonion), y in arb(Algebra::Octonion)) {
            let m = right_mult_operator(&y);
            let v = nalgebra::DVector::from_column_slice(x.coords());
            let w = nalgebra::DVector::from_column_slice(multiply(&x, &y).unwrap().coords());
            prop_assert!((&m * &v - w).amax() < 1e-13);
        }

        #[test]
        fn hermitian_real_part_is_realified_product(
            z in prop::collection::vec(arb(Algebra::Quaternion), 4),
            w in prop::collection::vec(arb(Algebra::Quaternion), 4),
            idx in 0usize..=4,
        ) {
            let h = hermitian_form(&z, &w, idx).unwrap();
            let ctx = ScalarProduct::new(16, 4 * idx).unwrap();
            let zr = AmbientVector::new(realify(&z), ctx).unwrap();
            let wr = AmbientVector::new(realify(&w), ctx).unwrap();
            prop_assert!((h.re() - zr.dot(&wr)).abs() < 1e-12);
        }
    }
}
