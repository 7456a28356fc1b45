//! Seeded verification of the identities satisfied by the models.
//!
//! Every identity has one registry entry. A [`CheckSpec`] names an entry and
//! a model; [`run_check`] samples points deterministically from the seed and
//! reports the maximum residual. Discrete checks report a mismatch count and
//! pass only at zero.

mod checks;
mod report;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::submersion::{SubmersionKind, SubmersionModel};

pub use checks::{FD_STEP, FD_TOL, PINCHING_PAIRS};
pub use report::render_text;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckSpec {
    pub name: String,
    /// `None` for checks that do not involve a model.
    pub model: Option<SubmersionModel>,
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
}

impl CheckSpec {
    pub fn new(name: &str, model: Option<SubmersionModel>, samples: usize, tol: f64, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::Config(format!("tolerance must be positive and finite, got {tol}")));
        }
        Ok(CheckSpec { name: name.to_string(), model, samples, tol, seed })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub model: String,
    pub params: serde_json::Value,
    pub samples: usize,
    /// `None` when the check errored or produced a non-finite residual.
    pub max_residual: Option<f64>,
    pub tol: f64,
    pub pass: bool,
    pub paper_anchor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub version: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Numerical(format!("serializing report: {e}")))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("parsing report: {e}")))
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Which models a check applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Requirement {
    /// Does not take a model.
    NoModel,
    AnyModel,
    RealTotal,
    RiemannianBase,
    /// Riemannian base and odd fibre dimension at least 3.
    CentralVolume,
    /// A closed-form fibre action is available.
    FibreAction,
}

impl Requirement {
    fn admits(self, model: &SubmersionModel) -> bool {
        let r = model.dims().r;
        match self {
            Requirement::NoModel | Requirement::AnyModel => true,
            Requirement::RealTotal => model.has_real_total(),
            Requirement::RiemannianBase => model.has_riemannian_base(),
            Requirement::CentralVolume => model.has_riemannian_base() && r >= 3 && r % 2 == 1,
            Requirement::FibreAction => matches!(
                model.kind(),
                SubmersionKind::ThetaCircle { .. }
                    | SubmersionKind::ComplexHopf { .. }
                    | SubmersionKind::QuaternionicHopf { .. }
            ),
        }
    }

    fn supported(self) -> &'static str {
        match self {
            Requirement::NoModel | Requirement::AnyModel => {
                "theta, complex-hopf, quaternionic-hopf, octonionic-hopf, complex-to-quaternionic"
            }
            Requirement::RealTotal => "theta, complex-hopf, quaternionic-hopf, octonionic-hopf",
            Requirement::RiemannianBase => {
                "theta with s = 0, complex-hopf, quaternionic-hopf, octonionic-hopf, complex-to-quaternionic"
            }
            Requirement::CentralVolume => "quaternionic-hopf, octonionic-hopf",
            Requirement::FibreAction => "theta, complex-hopf, quaternionic-hopf",
        }
    }
}

type CheckFn = fn(&CheckSpec) -> Result<f64>;

/// One registry entry.
#[derive(Clone, Copy)]
pub struct CheckInfo {
    pub name: &'static str,
    pub anchor: &'static str,
    pub requirement: Requirement,
    pub discrete: bool,
    /// Lower bound on the tolerance, for checks limited by finite differences.
    pub tol_floor: Option<f64>,
    run: CheckFn,
}

impl std::fmt::Debug for CheckInfo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CheckInfo")
            .field("name", &self.name)
            .field("requirement", &self.requirement)
            .field("discrete", &self.discrete)
            .finish()
    }
}

macro_rules! entry {
    ($name:literal, $run:path, $req:ident, $discrete:literal, $anchor:literal) => {
        CheckInfo {
            name: $name,
            anchor: $anchor,
            requirement: Requirement::$req,
            discrete: $discrete,
            tol_floor: None,
            run: $run,
        }
    };
    ($name:literal, $run:path, $req:ident, floor $floor:expr, $anchor:literal) => {
        CheckInfo {
            name: $name,
            anchor: $anchor,
            requirement: Requirement::$req,
            discrete: false,
            tol_floor: Some($floor),
            run: $run,
        }
    };
}

static REGISTRY: &[CheckInfo] = &[
    entry!("axioms", checks::axioms, AnyModel, false,
        "submersion axioms: horizontal isometry, vertical kernel, fibre invariance"),
    entry!("t_zero", checks::t_zero, AnyModel, false, "totally geodesic fibres: T = 0"),
    entry!("lemma3a", checks::lemma3a, RealTotal, false,
        "fibres are totally geodesic quadrics of curvature -1"),
    entry!("lemma3b", checks::lemma3b, AnyModel, false,
        "mixed curvature R(X,U,X,U) = g(A_X U, A_X U) = -g(X,X)g(U,U)"),
    entry!("lemma3c", checks::lemma3c, AnyModel, false,
        "horizontal curvature R'(X,Y,X,Y) = R(X,Y,X,Y) + 3g(A_X Y, A_X Y)"),
    entry!("oneill_vi", checks::oneill_vi, AnyModel, false,
        "polarized horizontal curvature equation for totally geodesic fibres"),
    entry!("pinching", checks::pinching, RiemannianBase, false,
        "base sectional curvature pinched in [-4, -1]"),
    entry!("special_plane", checks::special_plane, AnyModel, false,
        "planes spanned by Z and A_Z V have base curvature -4"),
    entry!("fibre_definite", checks::fibre_definite, RiemannianBase, true,
        "fibres are negative definite"),
    entry!("clifford_vertical", checks::clifford_vertical, AnyModel, false,
        "vertical Clifford relation A^v A^w + A^w A^v = -2 g~(v,w)"),
    entry!("clifford_horizontal", checks::clifford_horizontal, AnyModel, false,
        "horizontal Clifford relation A_x A_y + A_y A_x = 2 g(x,y)"),
    entry!("volume_sign", checks::volume_sign, CentralVolume, false,
        "volume element acts as +Id for every unit horizontal vector"),
    entry!("l_dim", checks::l_dim, AnyModel, true, "kernel of A*_X has dimension n - r"),
    entry!("fd_a_tensor", checks::fd_a_tensor, AnyModel, floor checks::FD_TOL,
        "A tensor against finite differences of the projector fields"),
    entry!("nabla_A_zero", checks::nabla_a_zero, RealTotal, floor checks::FD_TOL,
        "v(nabla_Z A)_X Y = 0 and h(nabla_Z A)_X U = 0 for horizontal Z"),
    entry!("tensoriality", checks::tensoriality, AnyModel, false,
        "A is tensorial: pointwise in both arguments"),
    entry!("adjoint", checks::adjoint, AnyModel, false,
        "A_X is skew between horizontal and vertical, A*_X A_X = g(X,X)"),
    entry!("holonomy", checks::holonomy, FibreAction, false,
        "fibre action is a horizontal isometry commuting with the projection"),
    entry!("curvature_symmetries", checks::curvature_symmetries, AnyModel, false,
        "curvature symmetries and first Bianchi identity, total and base"),
    entry!("constant_curvature", checks::constant_curvature, AnyModel, false,
        "total space has constant (holomorphic) sectional curvature"),
    entry!("clifford_products", checks::clifford_products, RiemannianBase, false,
        "monomials multiply as Clifford blades"),
    entry!("decompose", checks::decompose_check, RiemannianBase, false,
        "horizontal module splits into orthogonal irreducible summands"),
    entry!("intertwiner", checks::intertwiner, RiemannianBase, false,
        "modules at different points are equivalent; opposite volume is not"),
    entry!("volume_conjugation", checks::volume_conjugation, CentralVolume, true,
        "volume sign is invariant under orthogonal conjugation"),
    entry!("classify_table", checks::classify_table, NoModel, true,
        "real Clifford algebras follow the mod-8 table"),
    entry!("obstruction_table", checks::obstruction_table, NoModel, true,
        "admissible (fibre, base) pairs are exactly the canonical targets"),
];

pub fn registry() -> &'static [CheckInfo] {
    REGISTRY
}

pub fn lookup(name: &str) -> Result<&'static CheckInfo> {
    REGISTRY.iter().find(|c| c.name == name).ok_or_else(|| {
        let names: Vec<_> = REGISTRY.iter().map(|c| c.name).collect();
        Error::Config(format!("unknown check {name:?}; known checks: {}", names.join(", ")))
    })
}

/// Checks a model against the requirement of an entry.
pub fn supports(info: &CheckInfo, model: Option<&SubmersionModel>) -> Result<()> {
    match (info.requirement, model) {
        (Requirement::NoModel, _) => Ok(()),
        (_, None) => Err(Error::Config(format!("{} needs a model; supported: {}", info.name, info.requirement.supported()))),
        (req, Some(m)) if req.admits(m) => Ok(()),
        (req, Some(m)) => {
            let why = match req {
                Requirement::RiemannianBase | Requirement::CentralVolume if !m.has_riemannian_base() => {
                    "indefinite base".to_string()
                }
                _ => format!("{} does not apply to {}", info.name, m.kind()),
            };
            Err(Error::Unsupported(format!("{why}; {} supports: {}", info.name, req.supported())))
        }
    }
}

/// The requested tolerance, raised to the floor of the check if it has one.
pub fn effective_tol(info: &CheckInfo, tol: f64) -> f64 {
    info.tol_floor.map_or(tol, |f| tol.max(f))
}

fn finish(info: &CheckInfo, spec: &CheckSpec, outcome: Result<f64>) -> CheckRecord {
    let model = spec.model.filter(|_| info.requirement != Requirement::NoModel);
    let tol = effective_tol(info, spec.tol);
    let (max_residual, pass, error) = match outcome {
        Ok(r) if !r.is_finite() => (None, false, Some(format!("non-finite residual {r}"))),
        Ok(r) => (Some(r), if info.discrete { r == 0.0 } else { r < tol }, None),
        Err(e) => (None, false, Some(e.to_string())),
    };
    CheckRecord {
        name: info.name.to_string(),
        model: model.map_or_else(|| "-".to_string(), |m| m.kind().to_string()),
        params: model.map_or(serde_json::Value::Null, |m| serde_json::to_value(m.kind()).unwrap_or_default()),
        samples: spec.samples,
        max_residual,
        tol,
        pass,
        paper_anchor: info.anchor.to_string(),
        error,
    }
}

/// Runs one check. Unknown names and unsupported pairings are errors;
/// failures during sampling are recorded in the returned record.
pub fn run_check(spec: &CheckSpec) -> Result<CheckRecord> {
    let info = lookup(&spec.name)?;
    CheckSpec::new(&spec.name, spec.model, spec.samples, spec.tol, spec.seed)?;
    supports(info, spec.model.as_ref())?;
    Ok(finish(info, spec, (info.run)(spec)))
}

/// Runs the specs in parallel; records keep the input order.
pub fn run_suite(specs: &[CheckSpec]) -> VerificationReport {
    run_named_suite("custom", specs.first().map_or(0, |s| s.seed), specs)
}

pub fn run_named_suite(suite: &str, seed: u64, specs: &[CheckSpec]) -> VerificationReport {
    let checks: Vec<CheckRecord> = specs
        .par_iter()
        .map(|spec| {
            run_check(spec).unwrap_or_else(|e| CheckRecord {
                name: spec.name.clone(),
                model: spec.model.map_or_else(|| "-".to_string(), |m| m.kind().to_string()),
                params: spec.model.map_or(serde_json::Value::Null, |m| serde_json::to_value(m.kind()).unwrap_or_default()),
                samples: spec.samples,
                max_residual: None,
                tol: spec.tol,
                pass: false,
                paper_anchor: lookup(&spec.name).map(|i| i.anchor.to_string()).unwrap_or_default(),
                error: Some(e.to_string()),
            })
        })
        .collect();
    let pass = checks.iter().all(|c| c.pass);
    VerificationReport { suite: suite.to_string(), version: env!("CARGO_PKG_VERSION").to_string(), seed, checks, pass }
}

/// Models exercised by the default suite.
pub fn default_models() -> Vec<SubmersionModel> {
    [
        SubmersionKind::ThetaCircle { m: 2, s: 1 },
        SubmersionKind::ComplexHopf { k: 3 },
        SubmersionKind::QuaternionicHopf { k: 2 },
        SubmersionKind::OctonionicHopf,
        SubmersionKind::ComplexToQuaternionic { k: 2 },
    ]
    .into_iter()
    .map(|k| SubmersionModel::new(k).expect("default models are valid"))
    .collect()
}

/// Every supported (check, model) pair for the given models, model-free
/// checks once.
pub fn suite_for(models: &[SubmersionModel], samples: usize, tol: f64, seed: u64) -> Result<Vec<CheckSpec>> {
    let mut out = Vec::new();
    for info in REGISTRY {
        if info.requirement == Requirement::NoModel {
            out.push(CheckSpec::new(info.name, None, samples, tol, seed)?);
            continue;
        }
        for m in models {
            if info.requirement.admits(m) {
                out.push(CheckSpec::new(info.name, Some(*m), samples, tol, seed)?);
            }
        }
    }
    Ok(out)
}

/// All checks across all five default models.
pub fn default_suite(samples: usize, tol: f64, seed: u64) -> Result<Vec<CheckSpec>> {
    suite_for(&default_models(), samples, tol, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(kind: SubmersionKind) -> SubmersionModel {
        SubmersionModel::new(kind).unwrap()
    }

    #[test]
    fn registry_names_are_unique() {
        let mut names: Vec<_> = registry().iter().map(|c| c.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), registry().len());
    }

    #[test]
    fn empty_suite_passes() {
        let r = run_suite(&[]);
        assert!(r.pass);
        assert!(r.checks.is_empty());
    }

    #[test]
    fn indefinite_theta_rejects_pinching() {
        let spec = CheckSpec::new("pinching", Some(model(SubmersionKind::ThetaCircle { m: 3, s: 3 })), 5, 1e-8, 1)
            .unwrap();
        let err = run_check(&spec).unwrap_err();
        assert!(err.to_string().starts_with("unsupported: indefinite base"), "{err}");
    }

    #[test]
    fn unknown_check_lists_known_names() {
        let err = lookup("lemma9").unwrap_err().to_string();
        assert!(err.contains("lemma3b") && err.contains("nabla_A_zero"));
    }

    #[test]
    fn spec_invariants() {
        assert!(CheckSpec::new("axioms", None, 0, 1e-8, 1).is_err());
        assert!(CheckSpec::new("axioms", None, 1, 0.0, 1).is_err());
        assert!(CheckSpec::new("axioms", None, 1, f64::NAN, 1).is_err());
    }

    #[test]
    fn suite_errors_are_recorded_not_raised() {
        let specs = vec![
            CheckSpec::new("classify_table", None, 1, 1e-8, 0).unwrap(),
            CheckSpec::new("holonomy", Some(model(SubmersionKind::OctonionicHopf)), 1, 1e-8, 0).unwrap(),
        ];
        let r = run_suite(&specs);
        assert_eq!(r.checks[0].name, "classify_table");
        assert!(r.checks[0].pass);
        assert!(!r.checks[1].pass);
        assert!(r.checks[1].error.as_deref().unwrap().contains("holonomy supports"));
        assert!(!r.pass);
    }

    #[test]
    fn reruns_are_bit_identical() {
        let m = model(SubmersionKind::QuaternionicHopf { k: 1 });
        let specs: Vec<_> = ["lemma3b", "oneill_vi", "clifford_vertical"]
            .iter()
            .map(|n| CheckSpec::new(n, Some(m), 10, 1e-8, 9).unwrap())
            .collect();
        let a = run_suite(&specs);
        let b = run_suite(&specs);
        let bits = |r: &VerificationReport| r.checks.iter().map(|c| c.max_residual.unwrap().to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn fault_is_detected_by_lemma3b() {
        let m = model(SubmersionKind::QuaternionicHopf { k: 1 }).with_fault();
        let rec = run_check(&CheckSpec::new("lemma3b", Some(m), 10, 1e-8, 3).unwrap()).unwrap();
        assert!(!rec.pass);
    }

    #[test]
    fn fd_checks_use_their_floor() {
        let info = lookup("fd_a_tensor").unwrap();
        assert_eq!(effective_tol(info, 1e-8), FD_TOL);
        assert_eq!(effective_tol(lookup("lemma3b").unwrap(), 1e-8), 1e-8);
    }

    #[test]
    fn report_json_round_trips() {
        let specs = vec![CheckSpec::new("t_zero", Some(model(SubmersionKind::ComplexHopf { k: 1 })), 3, 1e-8, 5).unwrap()];
        let r = run_suite(&specs);
        let back = VerificationReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
