//! Named metrics used by the command line and the test suites.

use std::f64::consts::PI;

use rand::Rng;

use super::{ConnectionField, MetricField, TetradField};
use crate::clifford::Signature;
use crate::expr::{parse_matrix, Expression};
use crate::{Error, Result};

/// Metric built from an n×n table of parsed expressions (row-major; only
/// the upper triangle is read).
pub fn metric_from_expressions(
    signature: Signature,
    entries: Vec<Expression>,
    params: Vec<f64>,
) -> Result<MetricField> {
    let n = signature.n();
    if entries.len() != n * n {
        return Err(Error::ShapeMismatch(format!(
            "{} metric entries for dimension {n}",
            entries.len()
        )));
    }
    Ok(MetricField::from_fn(signature, move |x| {
        entries.iter().map(|e| e.eval(x, &params)).collect()
    }))
}

/// Connection K_λ{}^μ{}_ν from n³ expressions, row-major in (λ, μ, ν).
pub fn connection_from_expressions(
    n: usize,
    entries: Vec<Expression>,
    params: Vec<f64>,
) -> Result<ConnectionField> {
    if entries.len() != n * n * n {
        return Err(Error::ShapeMismatch(format!(
            "{} connection entries for dimension {n}",
            entries.len()
        )));
    }
    Ok(ConnectionField::from_fn(n, move |x| {
        entries.iter().map(|e| e.eval(x, &params)).collect()
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Preset {
    pub name: String,
    pub signature: Signature,
    pub coords: Vec<String>,
    /// Parameter names with default values.
    pub params: Vec<(String, f64)>,
    /// Component table in the `diag(...)`/row syntax of [`parse_matrix`].
    pub metric: String,
    /// Sampling box, one interval per coordinate.
    pub domain: Vec<(f64, f64)>,
    /// Whether the Einstein-type tensor 𝓔_{αβ} of the Levi-Civita
    /// configuration vanishes (vacuum solutions, and every 2-metric).
    pub einstein_vanishes: bool,
}

pub const PRESET_NAMES: [&str; 4] = ["flat", "sphere", "schwarzschild", "de_sitter"];

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

const SPHERICAL: [&str; 4] = ["t", "r", "theta", "phi"];

impl Preset {
    pub fn flat(signature: Signature) -> Self {
        let n = signature.n();
        let diag: Vec<String> = (0..n).map(|a| format!("{}", signature.eta(a))).collect();
        Self {
            name: "flat".into(),
            signature,
            coords: (0..n).map(|i| format!("x{i}")).collect(),
            params: Vec::new(),
            metric: format!("diag({})", diag.join(", ")),
            domain: vec![(-1.0, 1.0); n],
            einstein_vanishes: true,
        }
    }

    /// Round 2-sphere of radius R.
    pub fn sphere() -> Self {
        Self {
            name: "sphere".into(),
            signature: Signature::new(2, 0).expect("valid"),
            coords: strings(&["theta", "phi"]),
            params: vec![("R".into(), 1.0)],
            metric: "diag(R^2, R^2*sin(theta)^2)".into(),
            domain: vec![(0.3, PI - 0.3), (0.0, 2.0 * PI)],
            einstein_vanishes: true,
        }
    }

    /// Exterior Schwarzschild metric, signature (+,-,-,-), mass M.
    pub fn schwarzschild() -> Self {
        Self {
            name: "schwarzschild".into(),
            signature: Signature::new(1, 3).expect("valid"),
            coords: strings(&SPHERICAL),
            params: vec![("M".into(), 1.0)],
            metric: "diag(1 - 2*M/r, -1/(1 - 2*M/r), -r^2, -r^2*sin(theta)^2)".into(),
            domain: vec![(-1.0, 1.0), (3.0, 10.0), (0.3, PI - 0.3), (0.0, 2.0 * PI)],
            einstein_vanishes: true,
        }
    }

    /// Static patch of de Sitter space with Hubble rate H (r < 1/H).
    pub fn de_sitter() -> Self {
        Self {
            name: "de_sitter".into(),
            signature: Signature::new(1, 3).expect("valid"),
            coords: strings(&SPHERICAL),
            params: vec![("H".into(), 0.5)],
            metric: "diag(1 - H^2*r^2, -1/(1 - H^2*r^2), -r^2, -r^2*sin(theta)^2)".into(),
            domain: vec![(-1.0, 1.0), (0.2, 1.5), (0.3, PI - 0.3), (0.0, 2.0 * PI)],
            einstein_vanishes: false,
        }
    }

    /// Looks a preset up by name; `flat` needs a signature.
    pub fn by_name(name: &str, signature: Option<Signature>) -> Option<Self> {
        match name {
            "flat" => Some(Self::flat(
                signature.unwrap_or_else(|| Signature::new(1, 3).expect("valid")),
            )),
            "sphere" => Some(Self::sphere()),
            "schwarzschild" => Some(Self::schwarzschild()),
            "de_sitter" => Some(Self::de_sitter()),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.signature.n()
    }

    /// Parameter values with `overrides` applied; unknown names are an
    /// error.
    pub fn param_values(&self, overrides: &[(String, f64)]) -> Result<Vec<f64>> {
        let mut values: Vec<f64> = self.params.iter().map(|(_, v)| *v).collect();
        for (name, v) in overrides {
            let i = self
                .params
                .iter()
                .position(|(p, _)| p == name)
                .ok_or_else(|| Error::ShapeMismatch(format!("{} has no parameter {name}", self.name)))?;
            values[i] = *v;
        }
        Ok(values)
    }

    pub fn metric_field(&self, overrides: &[(String, f64)]) -> Result<MetricField> {
        let coords: Vec<&str> = self.coords.iter().map(String::as_str).collect();
        let names: Vec<&str> = self.params.iter().map(|(p, _)| p.as_str()).collect();
        let entries = parse_matrix(&self.metric, &coords, &names)?;
        metric_from_expressions(self.signature, entries, self.param_values(overrides)?)
    }

    /// Diagonal orthonormal tetrad of the preset metric.
    pub fn tetrad_field(&self, overrides: &[(String, f64)]) -> Result<TetradField> {
        Ok(TetradField::diagonal(self.metric_field(overrides)?))
    }

    pub fn sample_point(&self, rng: &mut impl Rng) -> Vec<f64> {
        self.domain.iter().map(|&(lo, hi)| rng.gen_range(lo..hi)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{christoffel_lower, curvature, levi_civita};

    #[test]
    fn schwarzschild_components() {
        let g = Preset::schwarzschild()
            .metric_field(&[])
            .unwrap()
            .jet_at(&[0.0, 4.0, PI / 3.0, 0.0])
            .unwrap();
        assert_eq!(g.g[[0, 0]], 0.5);
        assert_eq!(g.g[[1, 1]], -2.0);
        assert!((g.g[[3, 3]] + 16.0 * 0.75).abs() < 1e-13);
        // ∂_r g_tt = 2M/r²
        assert!((g.dg[[1, 0, 0]] - 0.125).abs() < 1e-15);
    }

    #[test]
    fn parameter_override() {
        let p = Preset::schwarzschild();
        assert_eq!(p.param_values(&[("M".into(), 2.0)]).unwrap(), vec![2.0]);
        assert!(p.param_values(&[("Q".into(), 2.0)]).is_err());
    }

    #[test]
    fn flat_preset_is_flat() {
        let p = Preset::flat(Signature::new(2, 2).unwrap());
        let g = p.metric_field(&[]).unwrap().jet_at(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert!(christoffel_lower(&g).iter().all(|&v| v == 0.0));
        assert!(curvature(&levi_civita(&g)).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn every_preset_evaluates_on_its_domain() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for name in PRESET_NAMES {
            let p = Preset::by_name(name, None).unwrap();
            let m = p.metric_field(&[]).unwrap();
            let h = p.tetrad_field(&[]).unwrap();
            for _ in 0..10 {
                let x = p.sample_point(&mut rng);
                let g = m.jet_at(&x).unwrap();
                let t = h.jet_at(&x).unwrap();
                let sig = p.signature;
                let eta = sig.eta_matrix();
                let back = t.coframe.transpose() * eta * &t.coframe;
                assert!((back - g.as_matrix()).amax() < 1e-12, "{name}");
            }
        }
    }
}
