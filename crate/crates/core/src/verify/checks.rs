//! Residual functions behind each registry entry. Each returns the maximum
//! residual over its samples, or a mismatch count for discrete checks.

use nalgebra::{DMatrix, DVector};

use super::CheckSpec;
use crate::clifford::{
    action_from_submersion, blade_product, classify, decompose, existence_obstruction, find_intertwiner,
    irreducible_dimension, volume_action, AlgebraClass, BaseQuery, CliffordAction, CliffordSignature, Field,
    Intertwining, ObstructionQuery, TotalKind, Verdict, ALGEBRA_DIMENSION_REASON, MAX_GENERATORS,
    SIMPLE_MODULE_REASON,
};
use crate::error::{Error, Result};
use crate::linalg::{form_kernel_dimension, AmbientVector, ScalarProduct, SymmetricForm};
use crate::sampling::SeedStream;
use crate::spaces::PseudoHyperbolicSpace;
use crate::submersion::{SplitFrame, SubmersionModel};

/// Base step of the central differences.
pub const FD_STEP: f64 = 1e-5;

/// Smallest tolerance applied to checks against finite differences.
pub const FD_TOL: f64 = 1e-4;

/// Base pairs drawn per sampled point by the pinching check.
pub const PINCHING_PAIRS: usize = 5;

/// Eigenvalue threshold separating kernel from image in `l_dim`.
const KERNEL_TOL: f64 = 1e-6;

fn worse(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::INFINITY
    } else {
        a.max(b)
    }
}

fn model_of(spec: &CheckSpec) -> Result<&SubmersionModel> {
    spec.model.as_ref().ok_or_else(|| Error::Config(format!("{} needs a model", spec.name)))
}

/// Runs `f` on `samples` seeded points with their oriented split frames.
fn over_points(
    spec: &CheckSpec,
    mut f: impl FnMut(&SubmersionModel, &AmbientVector, &SplitFrame, &mut SeedStream) -> Result<f64>,
) -> Result<f64> {
    let model = model_of(spec)?;
    let root = SeedStream::new(spec.seed);
    let mut worst = 0.0;
    for i in 0..spec.samples {
        let mut rng = root.split(i as u64);
        let p = model.sample_point(&mut rng);
        let frame = model.split_frame(&p)?;
        worst = worse(worst, f(model, &p, &frame, &mut rng)?);
    }
    Ok(worst)
}

/// Central difference with one Richardson step.
fn derivative(f: impl Fn(f64) -> Result<DVector<f64>>) -> Result<DVector<f64>> {
    let d = |h: f64| -> Result<DVector<f64>> { Ok((f(h)? - f(-h)?) / (2.0 * h)) };
    let coarse = d(FD_STEP)?;
    let fine = d(FD_STEP / 2.0)?;
    Ok((fine * 4.0 - coarse) / 3.0)
}

fn random_tangent(frame: &SplitFrame, rng: &mut SeedStream) -> Result<AmbientVector> {
    let x = frame.random_horizontal(rng, false)?;
    let v = frame.random_vertical(rng, false)?;
    let t = &x + &v;
    let sq = t.square().abs();
    if sq < 1e-6 {
        return Ok(x);
    }
    Ok(t.scaled(1.0 / sq.sqrt()))
}

fn random_orthogonal(n: usize, rng: &mut SeedStream) -> DMatrix<f64> {
    let g = DMatrix::from_vec(n, n, rng.gaussians(n * n));
    g.qr().q()
}

pub fn axioms(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, frame, rng| {
        let x = frame.random_horizontal(rng, true)?;
        let y = frame.random_horizontal(rng, true)?;
        let (dx, dy) = (model.differential(p, &x)?, model.differential(p, &y)?);
        let mut r = (dx.dot(&dy) - x.dot(&y)).abs();
        r = worse(r, (dx.dot(&dx) - x.square()).abs());
        let v = frame.random_vertical(rng, true)?;
        r = worse(r, model.differential(p, &v)?.vector.coord_norm());
        let q = model.geodesic(p, &v, 0.7)?;
        r = worse(r, model.project(p)?.distance(&model.project(&q)?));
        Ok(r)
    })
}

pub fn t_zero(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, frame, rng| {
        let at = model.at(p)?;
        let u = frame.random_vertical(rng, true)?;
        let v = frame.random_vertical(rng, true)?;
        Ok(at.t(&u, &v)?.coord_norm().max(at.t(&u, &u)?.coord_norm()))
    })
}

/// Fibre through `p` as the quadric in `span{p} + V_p`, compared with the
/// total curvature, plus containment of vertical geodesics.
pub fn lemma3a(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, frame, rng| {
        let r = frame.vertical.len();
        let fibre = PseudoHyperbolicSpace::new(r, r, -1.0)?;
        let ctx = ScalarProduct::new(r + 1, r + 1)?;
        let lift = |x: &AmbientVector, along_p: f64| -> Result<AmbientVector> {
            let mut c = vec![along_p];
            c.extend(frame.vertical_coords(x).iter());
            AmbientVector::new(c, ctx)
        };
        let u = frame.random_vertical(rng, true)?;
        let v = frame.random_vertical(rng, true)?;
        let p0 = lift(&AmbientVector::zeros(p.context()), 1.0)?;
        let intrinsic = fibre.curvature_total(&p0, &lift(&u, 0.0)?, &lift(&v, 0.0)?, &lift(&u, 0.0)?, &lift(&v, 0.0)?)?;
        let ambient = model.total_curvature(p, &u, &v, &u, &v)?;
        let mut res = (intrinsic - ambient).abs();
        let g = model.geodesic(p, &u, 0.9)?;
        let inside = &p.scaled(-g.dot(p)) + &frame.vertical.combine(&frame.vertical_coords(&g));
        res = worse(res, (&g - &inside).coord_norm());
        Ok(res)
    })
}

pub fn lemma3b(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, frame, rng| {
        let at = model.at(p)?;
        let x = frame.random_horizontal(rng, true)?;
        let u = frame.random_vertical(rng, true)?;
        let axu = at.a_adjoint(&x, &u)?;
        let gaa = axu.square();
        let curv = model.total_curvature(p, &x, &u, &x, &u)?;
        Ok((curv - gaa).abs().max((gaa + x.square() * u.square()).abs()))
    })
}

pub fn lemma3c(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, _, rng| {
        let at = model.at(p)?;
        let (frame, base) = model.base_curvature_model(p)?;
        let x = frame.random_horizontal(rng, false)?;
        let y = frame.random_horizontal(rng, false)?;
        let lhs = base.quartic(&frame.horizontal_coords(&x), &frame.horizontal_coords(&y))?;
        let rhs = model.total_curvature(p, &x, &y, &x, &y)? + 3.0 * at.a(&x, &y)?.square();
        Ok((lhs - rhs).abs())
    })
}

pub fn oneill_vi(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, _, rng| {
        let at = model.at(p)?;
        let (frame, base) = model.base_curvature_model(p)?;
        let v: Vec<AmbientVector> =
            (0..4).map(|_| frame.random_horizontal(rng, true)).collect::<Result<_>>()?;
        let (x, y, z, w) = (&v[0], &v[1], &v[2], &v[3]);
        let c = |a: &AmbientVector| frame.horizontal_coords(a);
        let base_val = base.curvature(&c(x), &c(y), &c(z), &c(w))?;
        let a = |s: &AmbientVector, t: &AmbientVector| at.a(s, t);
        let expected = base_val - 2.0 * a(x, y)?.dot(&a(z, w)?) + a(y, z)?.dot(&a(x, w)?) - a(x, z)?.dot(&a(y, w)?);
        Ok((model.total_curvature(p, x, y, z, w)? - expected).abs())
    })
}

pub fn pinching(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, _, rng| {
        let (_, base) = model.base_curvature_model(p)?;
        let n = base.dim();
        let mut worst: f64 = 0.0;
        for _ in 0..PINCHING_PAIRS {
            let x = DVector::from_vec(rng.gaussians(n)).normalize();
            let y = DVector::from_vec(rng.gaussians(n));
            let y = (&y - &x * x.dot(&y)).normalize();
            let k = base.sectional(&x, &y)?;
            worst = worse(worst, (k + 1.0).max(-4.0 - k).max(0.0));
        }
        Ok(worst)
    })
}

pub fn special_plane(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, _, rng| {
        let at = model.at(p)?;
        let (frame, base) = model.base_curvature_model(p)?;
        let z = frame.random_horizontal(rng, true)?;
        let v = frame.random_vertical(rng, true)?;
        let azv = at.a_adjoint(&z, &v)?;
        let k = base.sectional(&frame.horizontal_coords(&z), &frame.horizontal_coords(&azv))?;
        Ok((k + 4.0).abs())
    })
}

pub fn fibre_definite(spec: &CheckSpec) -> Result<f64> {
    let r = model_of(spec)?.dims().r;
    over_points(spec, |_, _, frame, rng| {
        let mut bad = usize::from(frame.vertical.index() != r);
        for _ in 0..3 {
            if frame.random_vertical(rng, false)?.square() >= 0.0 {
                bad += 1;
            }
        }
        Ok(bad as f64)
    })
}

pub fn clifford_vertical(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, frame, rng| {
        let at = model.at(p)?;
        let x = frame.random_horizontal(rng, true)?;
        let u = frame.random_vertical(rng, true)?;
        let w = frame.random_vertical(rng, true)?;
        // A^u x = A_x u
        let uw = at.a_adjoint(&at.a_adjoint(&x, &w)?, &u)?;
        let wu = at.a_adjoint(&at.a_adjoint(&x, &u)?, &w)?;
        let g_tilde = -u.dot(&w);
        Ok((&(&uw + &wu) + &x.scaled(2.0 * g_tilde)).coord_norm())
    })
}

pub fn clifford_horizontal(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, frame, rng| {
        let at = model.at(p)?;
        let x = frame.random_horizontal(rng, true)?;
        let y = frame.random_horizontal(rng, true)?;
        let v = frame.random_vertical(rng, true)?;
        let xy = at.a(&x, &at.a_adjoint(&y, &v)?)?;
        let yx = at.a(&y, &at.a_adjoint(&x, &v)?)?;
        Ok((&(&xy + &yx) - &v.scaled(2.0 * x.dot(&y))).coord_norm())
    })
}

pub fn volume_sign(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, _, _| {
        let action = action_from_submersion(model, p)?;
        let n = action.dim();
        Ok((action.volume() - DMatrix::identity(n, n)).amax())
    })
}

pub fn l_dim(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, frame, rng| {
        let at = model.at(p)?;
        let dims = model.dims();
        let x = frame.random_horizontal(rng, true)?;
        let images: Vec<AmbientVector> =
            frame.horizontal.vectors().iter().map(|h| at.a(&x, h)).collect::<Result<_>>()?;
        let n = images.len();
        let gram = DMatrix::from_fn(n, n, |i, j| images[i].dot(&images[j]));
        let ker = form_kernel_dimension(&SymmetricForm::new(gram)?, KERNEL_TOL)?;
        let mut bad = usize::from(ker.dimension != dims.n - dims.r);
        if model.has_real_total() {
            let (bframe, base) = model.base_curvature_model(p)?;
            let lk = base.l_kernel(&bframe.horizontal_coords(&x), KERNEL_TOL)?;
            bad += usize::from(lk.dimension != dims.n - dims.r);
        }
        Ok(bad as f64)
    })
}

pub fn fd_a_tensor(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, frame, rng| {
        let at = model.at(p)?;
        let geo = &at.local.geo;
        let x = frame.random_horizontal(rng, true)?;
        let y = frame.random_horizontal(rng, true)?;
        let v = frame.random_vertical(rng, true)?;
        let along = |t: f64| model.geodesic(p, &x, t);
        let dy = derivative(|t| Ok(geo.horizontal_proj(along(t)?.coords())? * y.coords()))?;
        let dv = derivative(|t| Ok(geo.vertical_proj(along(t)?.coords())? * v.coords()))?;
        let a_fd = &at.local.v * dy;
        let adj_fd = &at.local.h * dv;
        let r1 = (a_fd - at.a(&x, &y)?.coords()).norm();
        let r2 = (adj_fd - at.a_adjoint(&x, &v)?.coords()).norm();
        Ok(r1.max(r2))
    })
}

/// `v(nabla_Z A)_X Y` and `h(nabla_Z A)_X U` for horizontal `Z`, by
/// differentiating `A_{hX} hY` and `A_{hX} vU` along the geodesic in
/// direction `Z`.
pub fn nabla_a_zero(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, frame, rng| {
        let at = model.at(p)?;
        let geo = &at.local.geo;
        let x = frame.random_horizontal(rng, true)?;
        let y = frame.random_horizontal(rng, true)?;
        let u = frame.random_vertical(rng, true)?;
        let z = frame.random_horizontal(rng, true)?;
        let moved = |w: &AmbientVector, t: f64, vertical: bool| -> Result<(AmbientVector, AmbientVector)> {
            let q = model.geodesic(p, &z, t)?;
            let proj = if vertical { geo.vertical_proj(q.coords())? } else { geo.horizontal_proj(q.coords())? };
            let w = q.with_coords(proj * w.coords());
            Ok((q, w))
        };
        let d_axy = derivative(|t| {
            let (q, hx) = moved(&x, t, false)?;
            let (_, hy) = moved(&y, t, false)?;
            Ok(model.at(&q)?.a(&hx, &hy)?.into_coords())
        })?;
        let d_axu = derivative(|t| {
            let (q, hx) = moved(&x, t, false)?;
            let (_, vu) = moved(&u, t, true)?;
            Ok(model.at(&q)?.a_adjoint(&hx, &vu)?.into_coords())
        })?;
        let dx = derivative(|t| Ok(moved(&x, t, false)?.1.into_coords()))?;
        let dy = derivative(|t| Ok(moved(&y, t, false)?.1.into_coords()))?;
        let du = derivative(|t| Ok(moved(&u, t, true)?.1.into_coords()))?;
        let (h, v) = (&at.local.h, &at.local.v);
        let hdx = p.with_coords(h * dx);
        let vertical_part = v * d_axy - at.a(&hdx, &y)?.coords() - at.a(&x, &p.with_coords(h * dy))?.coords();
        let horizontal_part =
            h * d_axu - at.a_adjoint(&hdx, &u)?.coords() - at.a_adjoint(&x, &p.with_coords(v * du))?.coords();
        Ok(vertical_part.norm().max(horizontal_part.norm()))
    })
}

/// `A_X Y` depends only on the values of `X` and `Y` at the point.
pub fn tensoriality(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, frame, rng| {
        let at = model.at(p)?;
        let x1 = frame.random_horizontal(rng, true)?;
        let x2 = frame.random_horizontal(rng, true)?;
        let y = frame.random_horizontal(rng, true)?;
        let u = frame.random_vertical(rng, false)?;
        let c = rng.gaussian();
        let shifted = &(&y + &u) + &p.scaled(c);
        let alt = &at.local.v * (at.local.dh(x1.coords())? * shifted.coords());
        let mut r = (alt - at.a(&x1, &y)?.coords()).norm();
        let (a, b) = (rng.gaussian(), rng.gaussian());
        let combo = &x1.scaled(a) + &x2.scaled(b);
        let lin = &at.a(&x1, &y)?.scaled(a) + &at.a(&x2, &y)?.scaled(b);
        r = worse(r, (&at.a(&combo, &y)? - &lin).coord_norm());
        Ok(r)
    })
}

pub fn adjoint(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, frame, rng| {
        let at = model.at(p)?;
        let x = frame.random_horizontal(rng, true)?;
        let y = frame.random_horizontal(rng, false)?;
        let v = frame.random_vertical(rng, false)?;
        let w = frame.random_vertical(rng, false)?;
        let axv = at.a_adjoint(&x, &v)?;
        let r1 = (axv.dot(&y) + v.dot(&at.a(&x, &y)?)).abs();
        let r2 = (&at.a(&x, &axv)? - &v.scaled(x.square())).coord_norm();
        let r3 = (axv.dot(&at.a_adjoint(&x, &w)?) + x.square() * v.dot(&w)).abs();
        Ok(r1.max(r2).max(r3))
    })
}

pub fn holonomy(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, frame, rng| {
        let t = 2.0 * rng.gaussian();
        let hol = model.holonomy_transport(p, t)?;
        let x = frame.random_horizontal(rng, true)?;
        let y = frame.random_horizontal(rng, true)?;
        let (tx, ty) = (hol.apply(&x), hol.apply(&y));
        let mut r = (tx.dot(&ty) - x.dot(&y)).abs();
        let target = model.at(&hol.target)?;
        r = worse(r, (&target.local.v * tx.coords()).norm());
        r = worse(r, model.project(p)?.distance(&model.project(&hol.target)?));
        let before = model.differential(p, &x)?.vector;
        let after = model.differential(&hol.target, &tx)?.vector;
        r = worse(r, (&before - &after).coord_norm());
        let full = model.holonomy_transport(p, 2.0 * std::f64::consts::PI)?;
        let n = full.matrix.nrows();
        r = worse(r, (full.matrix - DMatrix::identity(n, n)).amax());
        Ok(r)
    })
}

fn symmetry_residual(
    r: impl Fn(&[&AmbientVector; 4]) -> Result<f64>,
    v: [&AmbientVector; 4],
) -> Result<f64> {
    let [x, y, z, w] = v;
    let base = r(&[x, y, z, w])?;
    let mut res = (base + r(&[y, x, z, w])?).abs();
    res = worse(res, (base + r(&[x, y, w, z])?).abs());
    res = worse(res, (base - r(&[z, w, x, y])?).abs());
    res = worse(res, (base + r(&[y, z, x, w])? + r(&[z, x, y, w])?).abs());
    Ok(res)
}

pub fn curvature_symmetries(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, frame, rng| {
        let v: Vec<AmbientVector> = (0..4).map(|_| random_tangent(frame, rng)).collect::<Result<_>>()?;
        let total = |a: &[&AmbientVector; 4]| model.total_curvature(p, a[0], a[1], a[2], a[3]);
        let mut res = symmetry_residual(total, [&v[0], &v[1], &v[2], &v[3]])?;
        let (bframe, base) = model.base_curvature_model(p)?;
        let h: Vec<AmbientVector> = (0..4).map(|_| bframe.random_horizontal(rng, true)).collect::<Result<_>>()?;
        let c = |a: &AmbientVector| bframe.horizontal_coords(a);
        let on_base = |a: &[&AmbientVector; 4]| base.curvature(&c(a[0]), &c(a[1]), &c(a[2]), &c(a[3]));
        res = worse(res, symmetry_residual(on_base, [&h[0], &h[1], &h[2], &h[3]])?);
        Ok(res)
    })
}

/// Sectional curvature `-1` of the real quadric, or holomorphic sectional
/// curvature `-4` of the complex one.
pub fn constant_curvature(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, frame, rng| match model.total_complex_structure() {
        None => {
            for _ in 0..=crate::submersion::MAX_REDRAWS {
                let x = random_tangent(frame, rng)?;
                let y = random_tangent(frame, rng)?;
                let plane = x.square() * y.square() - x.dot(&y).powi(2);
                if plane.abs() < 1e-3 {
                    continue;
                }
                let k = model.total_curvature(p, &x, &y, &x, &y)? / plane;
                return Ok((k + 1.0).abs());
            }
            Err(Error::Numerical("no non-degenerate tangent plane drawn".into()))
        }
        Some(i0) => {
            let x = frame.random_horizontal(rng, true)?;
            let ix = x.with_coords(&i0 * x.coords());
            let plane = x.square() * ix.square() - x.dot(&ix).powi(2);
            let k = model.total_curvature(p, &x, &ix, &x, &ix)? / plane;
            Ok((k + 4.0).abs())
        }
    })
}

pub fn clifford_products(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, _, rng| {
        let action = action_from_submersion(model, p)?;
        let s = action.generators().len() as u32;
        let n = action.dim();
        let mut worst: f64 = 0.0;
        for _ in 0..4 {
            let i = (rng.next_u64() % (1 << s)) as u32;
            let j = (rng.next_u64() % (1 << s)) as u32;
            let x = DVector::from_vec(rng.gaussians(n));
            let (sign, k) = blade_product(i, j);
            let lhs = action.monomial(i) * (action.monomial(j) * &x);
            let rhs = action.monomial(k) * &x * sign;
            worst = worse(worst, (lhs - rhs).amax());
        }
        Ok(worst)
    })
}

fn decomposition_residual(action: &CliffordAction, parts: &[DMatrix<f64>]) -> Result<f64> {
    let n = action.dim();
    let d = irreducible_dimension(action.generators().len())?;
    let mut r = if parts.len() * d == n { 0.0 } else { 1.0 };
    for (a, b) in parts.iter().enumerate() {
        if b.ncols() != d {
            r = worse(r, 1.0);
        }
        let proj = DMatrix::<f64>::identity(n, n) - b * b.transpose();
        for g in action.generators() {
            r = worse(r, (&proj * g * b).amax());
        }
        for (c, other) in parts.iter().enumerate() {
            let gram = b.transpose() * other;
            let target = if a == c { DMatrix::identity(b.ncols(), b.ncols()) } else { DMatrix::zeros(b.ncols(), other.ncols()) };
            r = worse(r, (gram - target).amax());
        }
    }
    Ok(r)
}

pub fn decompose_check(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, _, _| {
        let action = action_from_submersion(model, p)?;
        decomposition_residual(&action, &decompose(&action)?)
    })
}

fn intertwiner_residual(a1: &CliffordAction, a2: &CliffordAction) -> Result<f64> {
    match find_intertwiner(a1, a2)? {
        Intertwining::Equivalent(l) => {
            let n = a1.dim();
            let mut r = (l.transpose() * &l - DMatrix::identity(n, n)).amax();
            for (x, y) in a1.generators().iter().zip(a2.generators()) {
                r = worse(r, (&l * x - y * &l).amax());
            }
            Ok(r)
        }
        Intertwining::Inequivalent { .. } => Ok(1.0),
    }
}

fn has_two_module_types(s: usize) -> Result<bool> {
    Ok(classify(CliffordSignature::new(0, s)?)?.summands == 2)
}

/// Actions at two independent points are equivalent, as are random
/// orthogonal conjugates; flipping one generator of an odd action with two
/// module types must give an inequivalent one.
pub fn intertwiner(spec: &CheckSpec) -> Result<f64> {
    let root = SeedStream::new(spec.seed ^ 0x1a7e_9a1e);
    let mut index = 0u64;
    over_points(spec, |model, p, _, rng| {
        index += 1;
        let mut other_rng = root.split(index);
        let q = model.sample_point(&mut other_rng);
        let a1 = action_from_submersion(model, p)?;
        let a2 = action_from_submersion(model, &q)?;
        let mut r = intertwiner_residual(&a1, &a2)?;
        let l = random_orthogonal(a1.dim(), rng);
        r = worse(r, intertwiner_residual(&a1, &a1.conjugated(&l)?)?);
        let s = a1.generators().len();
        if has_two_module_types(s)? {
            let mut gens = a1.generators().to_vec();
            gens[s - 1] = -&gens[s - 1];
            let flipped = CliffordAction::new(gens, a1.dim())?;
            if !matches!(find_intertwiner(&a1, &flipped)?, Intertwining::Inequivalent { .. }) {
                r = worse(r, 1.0);
            }
        }
        Ok(r)
    })
}

pub fn volume_conjugation(spec: &CheckSpec) -> Result<f64> {
    over_points(spec, |model, p, _, rng| {
        let action = action_from_submersion(model, p)?;
        let l = random_orthogonal(action.dim(), rng);
        let same = volume_action(&action)? == volume_action(&action.conjugated(&l)?)?;
        Ok(if same { 0.0 } else { 1.0 })
    })
}

/// `Cl(p+1,q+1) = Cl(p,q) ⊗ M(2,R)`, `Cl(p+2,0) = Cl(0,p) ⊗ M(2,R)`,
/// `Cl(0,q+2) = Cl(q,0) ⊗ H`, with `H ⊗ H = M(4,R)` and `H ⊗ C = M(2,C)`.
fn recursive_class(p: usize, q: usize) -> AlgebraClass {
    let class = |field, size, summands| AlgebraClass { field, size, summands };
    match (p, q) {
        (0, 0) => class(Field::R, 1, 1),
        (1, 0) => class(Field::R, 1, 2),
        (0, 1) => class(Field::C, 1, 1),
        _ if p >= 1 && q >= 1 => {
            let c = recursive_class(p - 1, q - 1);
            class(c.field, 2 * c.size, c.summands)
        }
        (p, 0) => {
            let c = recursive_class(0, p - 2);
            class(c.field, 2 * c.size, c.summands)
        }
        (0, q) => {
            let c = recursive_class(q - 2, 0);
            match c.field {
                Field::R => class(Field::H, c.size, c.summands),
                Field::C => class(Field::C, 2 * c.size, c.summands),
                Field::H => class(Field::R, 4 * c.size, c.summands),
            }
        }
        _ => unreachable!(),
    }
}

pub fn classify_table(_: &CheckSpec) -> Result<f64> {
    let mut bad = 0usize;
    for p in 0..=MAX_GENERATORS {
        for q in 0..=MAX_GENERATORS - p {
            if classify(CliffordSignature::new(p, q)?)? != recursive_class(p, q) {
                bad += 1;
            }
        }
    }
    let cl91 = classify(CliffordSignature::new(1, 8)?)?;
    bad += usize::from(cl91 != AlgebraClass { field: Field::R, size: 16, summands: 2 });
    bad += usize::from(irreducible_dimension(7)? != 8);
    bad += usize::from(CliffordSignature::new(7, 6).is_ok());
    Ok(bad as f64)
}

fn expected_admissible(total: TotalKind, s: usize, n: usize, base: BaseQuery) -> bool {
    let fits = |want: BaseQuery| base == want || base == BaseQuery::Any;
    match total {
        TotalKind::Real => {
            (s == 1 && n % 2 == 0 && fits(BaseQuery::Complex))
                || (s == 3 && n % 4 == 0 && fits(BaseQuery::Quaternionic))
                || (s == 7 && n == 8 && fits(BaseQuery::RealHyperbolic))
        }
        TotalKind::Complex => s == 2 && n % 4 == 0 && fits(BaseQuery::Quaternionic),
    }
}

pub fn obstruction_table(_: &CheckSpec) -> Result<f64> {
    let bases = [BaseQuery::Complex, BaseQuery::Quaternionic, BaseQuery::RealHyperbolic, BaseQuery::Cayley, BaseQuery::Any];
    let mut bad = 0usize;
    for total in [TotalKind::Real, TotalKind::Complex] {
        for s in 0..=8 {
            for n in 1..=32 {
                for base in bases {
                    let v = existence_obstruction(ObstructionQuery { total, s, n, base })?;
                    if (v == Verdict::Admissible) != expected_admissible(total, s, n, base) {
                        bad += 1;
                    }
                }
            }
        }
    }
    let reason = |total, s, n, base| match existence_obstruction(ObstructionQuery { total, s, n, base }) {
        Ok(Verdict::Obstructed(r)) => r,
        _ => String::new(),
    };
    bad += usize::from(reason(TotalKind::Real, 7, 16, BaseQuery::Cayley) != SIMPLE_MODULE_REASON);
    bad += usize::from(reason(TotalKind::Complex, 6, 8, BaseQuery::RealHyperbolic) != ALGEBRA_DIMENSION_REASON);
    bad += usize::from(!reason(TotalKind::Real, 2, 4, BaseQuery::Any).starts_with("Adams"));
    Ok(bad as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn richardson_is_exact_on_cubics() {
        let d = derivative(|t| Ok(DVector::from_vec(vec![t * t * t + 2.0 * t, t.exp()]))).unwrap();
        assert!((d[0] - 2.0).abs() < 1e-9);
        assert!((d[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn recursion_gives_known_classes() {
        assert_eq!(recursive_class(0, 3), AlgebraClass { field: Field::H, size: 1, summands: 2 });
        assert_eq!(recursive_class(0, 7), AlgebraClass { field: Field::R, size: 8, summands: 2 });
        assert_eq!(recursive_class(1, 8), AlgebraClass { field: Field::R, size: 16, summands: 2 });
    }

    #[test]
    fn worse_propagates_nan() {
        assert!(worse(0.0, f64::NAN).is_infinite());
    }
}
