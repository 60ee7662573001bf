//! The metric-affine Hilbert–Einstein Lagrangian 𝓛 = σ^{μβ} ℛ_{λμ}{}^λ{}_β √σ,
//! its Euler–Lagrange residuals and the reduction of the connection
//! equations to "non-metricity and torsion vanish".
//!
//! The metric field holds the covariant components σ_{μν}; σ^{μν} and its
//! derivatives are obtained by inversion. √σ means √|det σ_{μν}|.

mod covariance;

use std::collections::BTreeMap;

use ndarray::{Array2, Array3, Array4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::{
    contorsion, jet_splitting, lower_middle, max_abs3, nonmetricity, torsion, ConnectionField,
    ConnectionJet, MetricField, MetricJet,
};
use crate::{Error, Result};

pub use covariance::{
    covariance_invariance_defect, covariant_lift, density_defect, first_order_covariance_defect,
    CovarianceReport, Lift, VectorField,
};

/// Metric σ together with a connection k.
#[derive(Clone, Debug)]
pub struct FieldConfiguration {
    pub metric: MetricField,
    pub connection: ConnectionField,
}

impl FieldConfiguration {
    pub fn new(metric: MetricField, connection: ConnectionField) -> Result<Self> {
        if metric.dim() != connection.dim() {
            return Err(Error::ShapeMismatch(format!(
                "metric dimension {} but connection dimension {}",
                metric.dim(),
                connection.dim()
            )));
        }
        Ok(Self { metric, connection })
    }

    /// σ with its own Levi-Civita connection.
    pub fn levi_civita(metric: MetricField) -> Self {
        Self {
            connection: ConnectionField::LeviCivita(metric.clone()),
            metric,
        }
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn point(&self, x: &[f64]) -> Result<FieldPoint> {
        Ok(FieldPoint::new(self.metric.jet_at(x)?, self.connection.jet_at(x)?))
    }
}

/// Everything the field equations need at one point.
#[derive(Clone, Debug)]
pub struct FieldPoint {
    pub g: MetricJet,
    pub k: ConnectionJet,
    /// ∂_λ σ^{μν}, indexed `[λ][μ][ν]`.
    pub dginv: Array3<f64>,
    pub sqrt_det: f64,
    pub d_sqrt_det: Vec<f64>,
}

impl FieldPoint {
    pub fn new(g: MetricJet, k: ConnectionJet) -> Self {
        let dginv = g.dginv();
        let (sqrt_det, d_sqrt_det) = g.sqrt_abs_det();
        Self {
            g,
            k,
            dginv,
            sqrt_det,
            d_sqrt_det,
        }
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }
}

/// ℛ_{αβ} = ℛ_{λα}{}^λ{}_β with ℛ the curvature part of the connection jets
/// `dk[[λ, μ, α, β]] = k_{λμ}{}^α{}_β`. Not symmetrised.
pub fn ricci_like(k: &Array3<f64>, dk: &Array4<f64>) -> Array2<f64> {
    let n = k.dim().0;
    let (r, _) = jet_splitting(k, dk);
    Array2::from_shape_fn((n, n), |(a, b)| (0..n).map(|l| r[[l, a, l, b]]).sum())
}

/// 𝓛 from its ingredients: σ^{μβ}, √σ and the connection jets.
pub fn lagrangian_from_parts(ginv: &Array2<f64>, sqrt_det: f64, k: &Array3<f64>, dk: &Array4<f64>) -> f64 {
    let ric = ricci_like(k, dk);
    (ginv * &ric).sum() * sqrt_det
}

pub fn lagrangian_at(p: &FieldPoint) -> f64 {
    lagrangian_from_parts(&p.g.ginv, p.sqrt_det, &p.k.k, &p.k.dk)
}

pub fn lagrangian_density(cfg: &FieldConfiguration, x: &[f64]) -> Result<f64> {
    Ok(lagrangian_at(&cfg.point(x)?))
}

/// 𝓔_{αβ} = ℛ_{αβ} - ½ σ_{αβ} ℛ.
pub fn el_metric_residual_at(p: &FieldPoint) -> Array2<f64> {
    let ric = ricci_like(&p.k.k, &p.k.dk);
    let scalar = (&p.g.ginv * &ric).sum();
    &ric - &(&p.g.g * (0.5 * scalar))
}

pub fn el_metric_residual(cfg: &FieldConfiguration, x: &[f64]) -> Result<Array2<f64>> {
    Ok(el_metric_residual_at(&cfg.point(x)?))
}

/// 𝓔^ν{}_α{}^β, indexed `[ν][α][β]`:
///
/// -d_α(σ^{νβ}√σ) + d_λ(σ^{λβ}√σ) δ^ν_α
///   + (σ^{νγ} k_α{}^β{}_γ - σ^{λγ} δ^ν_α k_λ{}^β{}_γ - σ^{νβ} k_γ{}^γ{}_α
///      + σ^{λβ} k_λ{}^ν{}_α) √σ
pub fn el_connection_residual_at(p: &FieldPoint) -> Array3<f64> {
    let n = p.dim();
    let (gi, k, s) = (&p.g.ginv, &p.k.k, p.sqrt_det);
    // d_λ(σ^{μν}√σ)
    let d = Array3::from_shape_fn((n, n, n), |(l, mu, nu)| {
        p.dginv[[l, mu, nu]] * s + gi[[mu, nu]] * p.d_sqrt_det[l]
    });
    let div: Vec<f64> = (0..n).map(|b| (0..n).map(|l| d[[l, l, b]]).sum()).collect();
    let trace_k: Vec<f64> = (0..n).map(|a| (0..n).map(|g| k[[g, g, a]]).sum()).collect();
    let contracted: Vec<f64> = (0..n)
        .map(|b| {
            let mut v = 0.0;
            for l in 0..n {
                for g in 0..n {
                    v += gi[[l, g]] * k[[l, b, g]];
                }
            }
            v
        })
        .collect();
    Array3::from_shape_fn((n, n, n), |(nu, a, b)| {
        let delta = if nu == a { 1.0 } else { 0.0 };
        let mut alg = -gi[[nu, b]] * trace_k[a] - delta * contracted[b];
        for g in 0..n {
            alg += gi[[nu, g]] * k[[a, b, g]] + gi[[g, b]] * k[[g, nu, a]];
        }
        -d[[a, nu, b]] + delta * div[b] + alg * s
    })
}

pub fn el_connection_residual(cfg: &FieldConfiguration, x: &[f64]) -> Result<Array3<f64>> {
    Ok(el_connection_residual_at(&cfg.point(x)?))
}

/// Torsion with the middle index lowered, t_{μνα} = σ_{νβ} t_μ{}^β{}_α.
pub fn lowered_torsion(p: &FieldPoint) -> Array3<f64> {
    lower_middle(&p.g, &torsion(&p.k))
}

/// Both sides of the rearranged connection equations,
/// `LHS = √σ⁻¹ σ_{νε} σ_{βμ} 𝓔^ν{}_α{}^β` and the c/t expression, indexed
/// `[α][ε][μ]`.
pub fn reduced_identity_sides(p: &FieldPoint) -> (Array3<f64>, Array3<f64>) {
    let n = p.dim();
    let (g, gi) = (&p.g.g, &p.g.ginv);
    let e = el_connection_residual_at(p);
    let lhs = Array3::from_shape_fn((n, n, n), |(a, eps, mu)| {
        let mut v = 0.0;
        for nu in 0..n {
            for b in 0..n {
                v += g[[nu, eps]] * g[[b, mu]] * e[[nu, a, b]];
            }
        }
        v / p.sqrt_det
    });
    let c = nonmetricity(&p.g, &p.k);
    let t_up = torsion(&p.k);
    let t = lower_middle(&p.g, &t_up);
    // σ^{λγ} c_{αλγ}, σ^{λβ} c_{λβμ}, t_α{}^γ{}_γ
    let c_trace: Vec<f64> = (0..n)
        .map(|a| (0..n).flat_map(|l| (0..n).map(move |q| (l, q))).map(|(l, q)| gi[[l, q]] * c[[a, l, q]]).sum())
        .collect();
    let c_div: Vec<f64> = (0..n)
        .map(|m| (0..n).flat_map(|l| (0..n).map(move |q| (l, q))).map(|(l, q)| gi[[l, q]] * c[[l, q, m]]).sum())
        .collect();
    let t_trace: Vec<f64> = (0..n).map(|a| (0..n).map(|q| t_up[[a, q, q]]).sum()).collect();
    let t_trace_first: Vec<f64> = (0..n).map(|m| (0..n).map(|q| t_up[[q, q, m]]).sum()).collect();
    let rhs = Array3::from_shape_fn((n, n, n), |(a, eps, mu)| {
        c[[a, eps, mu]] - 0.5 * g[[mu, eps]] * c_trace[a] - g[[a, eps]] * c_div[mu]
            + 0.5 * g[[a, eps]] * c_trace[mu]
            + t[[mu, eps, a]]
            + g[[mu, eps]] * t_trace[a]
            + g[[a, eps]] * t_trace_first[mu]
    });
    (lhs, rhs)
}

/// max |LHS - RHS| of [`reduced_identity_sides`].
pub fn reduced_identity_defect(cfg: &FieldConfiguration, x: &[f64]) -> Result<f64> {
    let (lhs, rhs) = reduced_identity_sides(&cfg.point(x)?);
    Ok(max_abs3(&(&lhs - &rhs)))
}

/// Tolerance propagation factor of the on-shell reduction chain.
pub const ONSHELL_FACTOR: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OnShellReport {
    pub connection_residual: f64,
    pub nonmetricity: f64,
    pub torsion: f64,
    pub contorsion: f64,
    /// max |k_{μνα} + ½(d_μσ_{να} + d_ασ_{νμ} - d_νσ_{μα})|.
    pub levi_civita_defect: f64,
    pub bound: f64,
    pub pass: bool,
}

pub fn onshell_reduction_at(p: &FieldPoint, tol: f64) -> Result<OnShellReport> {
    let residual = max_abs3(&el_connection_residual_at(p));
    if !(residual < tol) {
        return Err(Error::PreconditionViolated { residual, tol });
    }
    let n = p.dim();
    let kl = lower_middle(&p.g, &p.k.k);
    let dg = &p.g.dg;
    let lc = Array3::from_shape_fn((n, n, n), |(mu, nu, a)| {
        kl[[mu, nu, a]] + 0.5 * (dg[[mu, nu, a]] + dg[[a, nu, mu]] - dg[[nu, mu, a]])
    });
    let bound = ONSHELL_FACTOR * tol;
    let nonmetricity = max_abs3(&nonmetricity(&p.g, &p.k));
    let torsion = max_abs3(&lowered_torsion(p));
    let contorsion = max_abs3(&contorsion(&p.g, &p.k));
    let levi_civita_defect = max_abs3(&lc);
    let pass = [nonmetricity, torsion, contorsion, levi_civita_defect]
        .iter()
        .all(|&v| v < bound);
    Ok(OnShellReport {
        connection_residual: residual,
        nonmetricity,
        torsion,
        contorsion,
        levi_civita_defect,
        bound,
        pass,
    })
}

/// Checks the chain "connection equations hold ⇒ c = 0, t = s = 0, k is
/// Levi-Civita" at `x`. Refuses when the connection residual is not below
/// `tol`.
pub fn onshell_reduction_check(cfg: &FieldConfiguration, x: &[f64], tol: f64) -> Result<OnShellReport> {
    onshell_reduction_at(&cfg.point(x)?, tol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UtiyamaReport {
    /// |Δ𝓛| under a λ↔μ-symmetric jet perturbation (ℛ unchanged).
    pub symmetric_change: f64,
    /// |Δ𝓛| under an antisymmetric perturbation (ℛ changed).
    pub antisymmetric_change: f64,
}

/// Perturbs the jets k_{λμ}{}^α{}_β by seeded random directions of unit
/// size and reports the change in 𝓛.
pub fn utiyama_factorization_check(cfg: &FieldConfiguration, x: &[f64], seed: u64) -> Result<UtiyamaReport> {
    let p = cfg.point(x)?;
    let n = p.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = Array4::from_shape_fn((n, n, n, n), |_| rng.gen_range(-1.0..1.0));
    let sym = Array4::from_shape_fn((n, n, n, n), |(l, m, a, b)| raw[[l, m, a, b]] + raw[[m, l, a, b]]);
    let anti = Array4::from_shape_fn((n, n, n, n), |(l, m, a, b)| raw[[l, m, a, b]] - raw[[m, l, a, b]]);
    let base = lagrangian_at(&p);
    let change = |delta: &Array4<f64>| {
        (lagrangian_from_parts(&p.g.ginv, p.sqrt_det, &p.k.k, &(&p.k.dk + delta)) - base).abs()
    };
    Ok(UtiyamaReport {
        symmetric_change: change(&sym),
        antisymmetric_change: change(&anti),
    })
}

fn nested2(a: &Array2<f64>) -> Vec<Vec<f64>> {
    a.outer_iter().map(|r| r.to_vec()).collect()
}

fn nested3(a: &Array3<f64>) -> Vec<Vec<Vec<f64>>> {
    a.outer_iter().map(|m| nested2(&m.to_owned())).collect()
}

/// Residuals and identity defects at a point, in plain nested arrays.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub point: Vec<f64>,
    pub lagrangian: f64,
    pub e_metric: Vec<Vec<f64>>,
    pub e_conn: Vec<Vec<Vec<f64>>>,
    pub c: Vec<Vec<Vec<f64>>>,
    pub t: Vec<Vec<Vec<f64>>>,
    pub s: Vec<Vec<Vec<f64>>>,
    pub identity_defects: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
}

pub fn residual_report(cfg: &FieldConfiguration, x: &[f64], tolerances: BTreeMap<String, f64>) -> Result<ResidualReport> {
    let p = cfg.point(x)?;
    let e_metric = el_metric_residual_at(&p);
    let e_conn = el_connection_residual_at(&p);
    let (lhs, rhs) = reduced_identity_sides(&p);
    let mut identity_defects = BTreeMap::new();
    identity_defects.insert("reduced_identity".to_string(), max_abs3(&(&lhs - &rhs)));
    identity_defects.insert(
        "e_metric_max".to_string(),
        e_metric.iter().fold(0.0f64, |m, v| m.max(v.abs())),
    );
    identity_defects.insert("e_conn_max".to_string(), max_abs3(&e_conn));
    Ok(ResidualReport {
        point: x.to_vec(),
        lagrangian: lagrangian_at(&p),
        e_metric: nested2(&e_metric),
        e_conn: nested3(&e_conn),
        c: nested3(&nonmetricity(&p.g, &p.k)),
        t: nested3(&lowered_torsion(&p)),
        s: nested3(&contorsion(&p.g, &p.k)),
        identity_defects,
        tolerances,
    })
}
