use ndarray::{Array2, Array3, Array4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use maggeo_core::clifford::{construct_algebra, multiplication_table, reachable_blades, relation_defect, Signature};
use maggeo_core::expr::parse_matrix;
use maggeo_core::field_eqs::{
    first_order_covariance_defect, onshell_reduction_at, residual_report, utiyama_factorization_check,
    FieldConfiguration, FieldPoint, VectorField,
};
use maggeo_core::geometry::{
    christoffel_lower, curvature, decompose_reconstruct, lowered_antisymmetry_defect, max_abs3,
    max_abs4, metric_connection, nonmetricity, tetrad_coefficients, torsion, torsion_antisymmetry_defect,
    ConnectionField, ConnectionJet, TetradField,
};
use maggeo_core::linalg::{anticommutator, max_abs, CMatrix};
use maggeo_core::spin::{
    commutant_dimension, coordinate_gammas, gamma_matrices, intertwiner_space, left_ideal_representation,
    spin_connection_matrix, spin_generators, vector_action_defect, vertical_covariant_differential, Tetrad,
};

use crate::config::{resolve_connection, resolve_metric, Command, ConfigError, ConfigResult, ConnectionSource, Points, ResolvedMetric, RunConfig};
use crate::report::{PointResult, Report};

fn nested2(a: &Array2<f64>) -> Vec<Vec<f64>> {
    a.outer_iter().map(|r| r.to_vec()).collect()
}

fn nested3(a: &Array3<f64>) -> Vec<Vec<Vec<f64>>> {
    a.outer_iter().map(|m| nested2(&m.to_owned())).collect()
}

fn nested4(a: &Array4<f64>) -> Vec<Vec<Vec<Vec<f64>>>> {
    a.outer_iter().map(|m| nested3(&m.to_owned())).collect()
}

/// Complex matrix as `[[re, im], ...]` rows.
fn complex_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

fn default_signature(cfg: &RunConfig) -> Signature {
    cfg.signature
        .unwrap_or_else(|| Signature::new(1, 3).expect("valid"))
}

/// Runs one command. Configuration and evaluation errors are returned as
/// `Err`; tolerance violations are recorded in the report summary.
pub fn run(cfg: &RunConfig) -> ConfigResult<Report> {
    let results = match cfg.command {
        Command::CliffordTable => clifford_table(cfg)?,
        Command::GammaCheck => gamma_check(cfg)?,
        Command::Curvature => curvature_cmd(cfg)?,
        Command::Decompose => decompose(cfg)?,
        Command::Residual => residual(cfg)?,
        Command::Covariance => covariance(cfg)?,
        Command::SpinConnection => spin_connection(cfg)?,
    };
    let config = serde_json::to_value(cfg).expect("config serialises");
    Ok(Report::new(cfg.command.name(), config, results, &cfg.tolerances))
}

fn sample_points(cfg: &RunConfig, metric: &ResolvedMetric) -> ConfigResult<Vec<Vec<f64>>> {
    let n = metric.field.dim();
    match &cfg.points {
        Points::At(x) => {
            if x.len() != n {
                return Err(ConfigError::Invalid(format!(
                    "--at has {} coordinates, dimension is {n}",
                    x.len()
                )));
            }
            Ok(vec![x.clone()])
        }
        Points::Random(count) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            Ok((0..*count)
                .map(|_| match &metric.preset {
                    Some(p) => p.sample_point(&mut rng),
                    None => (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                })
                .collect())
        }
    }
}

fn clifford_table(cfg: &RunConfig) -> ConfigResult<Vec<PointResult>> {
    let sig = default_signature(cfg);
    let n = sig.n();
    let gens = construct_algebra(sig);
    let table: Vec<Vec<(i8, u32)>> = multiplication_table(sig);
    let all = reachable_blades(sig, false).len();
    let even = reachable_blades(sig, true).len();
    let mut r = PointResult::new(None);
    r.value("signature", [sig.m(), sig.k()]);
    r.value("algebra_dim", all);
    r.value("even_dim", even);
    r.value("table", table);
    r.defect("relation", relation_defect(sig, &gens));
    r.defect(
        "dimension",
        (all as f64 - (1u64 << n) as f64).abs() + (even as f64 - (1u64 << (n - 1)) as f64).abs(),
    );
    Ok(vec![r])
}

fn gamma_check(cfg: &RunConfig) -> ConfigResult<Vec<PointResult>> {
    let sig = default_signature(cfg);
    let rep = gamma_matrices(sig)?;
    let gens = spin_generators(&rep);
    let ideal = left_ideal_representation(sig)?;
    let mut r = PointResult::new(None);
    let commutant = commutant_dimension(rep.gammas());
    let ideal_dim = intertwiner_space(&ideal, rep.gammas())?.dimension;
    let max_trace = rep
        .gammas()
        .iter()
        .map(|g| g.trace().norm())
        .fold(0.0, f64::max);
    r.value("signature", [sig.m(), sig.k()]);
    r.value("spinor_dim", rep.dim());
    r.value("commutant_dimension", commutant);
    r.value("left_ideal_intertwiner_dimension", ideal_dim);
    r.value("max_trace", max_trace);
    r.value(
        "gammas",
        rep.gammas().iter().map(complex_rows).collect::<Vec<_>>(),
    );
    r.defect("clifford", rep.clifford_defect());
    r.defect("commutant", (commutant as f64 - 1.0).abs());
    r.defect("intertwiner", (ideal_dim as f64 - 1.0).abs());
    r.defect("vector_action", vector_action_defect(&rep, &gens));
    r.defect("antisymmetry", gens.antisymmetry_defect());

    if let Some(text) = &cfg.compare_metric {
        let n = sig.n();
        let coords: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let names: Vec<&str> = coords.iter().map(String::as_str).collect();
        let pnames: Vec<&str> = cfg.params.iter().map(|(p, _)| p.as_str()).collect();
        let values: Vec<f64> = cfg.params.iter().map(|(_, v)| *v).collect();
        let entries = parse_matrix(text, &names, &pnames).map_err(|source| ConfigError::Parse {
            what: "--compare-metric".into(),
            source,
        })?;
        let x = match &cfg.points {
            Points::At(x) if x.len() == n => x.clone(),
            _ => vec![0.0; n],
        };
        let gp = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            entries[i.min(j) * n + i.max(j)].eval(&x, &values)
        });
        let eta = sig.eta_matrix();
        let h = Tetrad::from_metric(sig, &eta)?;
        let hp = Tetrad::from_metric(sig, &gp)?;
        let a = coordinate_gammas(&rep, &h)?;
        let b = coordinate_gammas(&rep, &hp)?;
        let dim = intertwiner_space(&a, &b)?.dimension;
        // {γ_g'(dx^μ), γ_g'(dx^ν)} = 2 g'^{μν}
        let ginv = gp.clone().try_inverse().ok_or(maggeo_core::Error::DegenerateMetric(0.0))?;
        let mut metric_defect: f64 = 0.0;
        for mu in 0..n {
            for nu in 0..n {
                let ac = anticommutator(&b[mu], &b[nu]);
                let target = CMatrix::identity(rep.dim(), rep.dim()) * Complex64::new(2.0 * ginv[(mu, nu)], 0.0);
                metric_defect = metric_defect.max(max_abs(&(ac - target)));
            }
        }
        let expected = if (&gp - &eta).amax() > 1e-12 { 0 } else { 1 };
        r.value("compare_metric", nested2(&Array2::from_shape_fn((n, n), |(i, j)| gp[(i, j)])));
        r.value("compare_intertwiner_dimension", dim);
        r.value("compare_expected_dimension", expected);
        r.defect("intertwiner.compare", (dim as f64 - expected as f64).abs());
        r.defect("gamma_metric", metric_defect);
    }
    Ok(vec![r])
}

/// max |∂_μ g_{να} + {_{μνα}} + {_{μαν}}|.
fn metricity_identity(g: &maggeo_core::geometry::MetricJet) -> f64 {
    let ch = christoffel_lower(g);
    let n = g.dim();
    let mut worst: f64 = 0.0;
    for mu in 0..n {
        for nu in 0..n {
            for a in 0..n {
                worst = worst.max((g.dg[[mu, nu, a]] + ch[[mu, nu, a]] + ch[[mu, a, nu]]).abs());
            }
        }
    }
    worst
}

fn curvature_cmd(cfg: &RunConfig) -> ConfigResult<Vec<PointResult>> {
    let metric = resolve_metric(cfg)?;
    let conn = resolve_connection(cfg, &metric)?;
    let mut out = Vec::new();
    for x in sample_points(cfg, &metric)? {
        let g = metric.field.jet_at(&x)?;
        let k = conn.jet_at(&x)?;
        let r = curvature(&k);
        let t = torsion(&k);
        let n = g.dim();
        let ric = Array2::from_shape_fn((n, n), |(a, b)| (0..n).map(|l| r[[l, a, l, b]]).sum::<f64>());
        let scalar = (&g.ginv * &ric).sum();
        let anti = Array4::from_shape_fn((n, n, n, n), |(l, m, a, b)| r[[l, m, a, b]] + r[[m, l, a, b]]);
        let mut p = PointResult::new(Some(x));
        p.value("christoffel", nested3(&christoffel_lower(&g)));
        p.value("torsion", nested3(&t));
        p.value("curvature", nested4(&r));
        p.value("ricci", nested2(&ric));
        p.value("scalar", scalar);
        p.defect("antisymmetry", max_abs4(&anti).max(torsion_antisymmetry_defect(&t)));
        p.defect("metricity_identity", metricity_identity(&g));
        out.push(p);
    }
    Ok(out)
}

fn decompose(cfg: &RunConfig) -> ConfigResult<Vec<PointResult>> {
    let metric = resolve_metric(cfg)?;
    let conn = resolve_connection(cfg, &metric)?;
    let mut out = Vec::new();
    for x in sample_points(cfg, &metric)? {
        let g = metric.field.jet_at(&x)?;
        let k = conn.jet_at(&x)?;
        let d = decompose_reconstruct(&g, &k);
        let t = torsion(&k);
        let kg = ConnectionJet::constant(metric_connection(&g, &t)?);
        let mut p = PointResult::new(Some(x));
        p.value("christoffel", nested3(&d.christoffel));
        p.value("contorsion", nested3(&d.contorsion));
        p.value("nonmetricity", nested3(&d.nonmetricity));
        p.defect("reconstruction", d.reconstruction_defect);
        p.defect("metricity", max_abs3(&nonmetricity(&g, &kg)));
        p.defect("torsion_roundtrip", max_abs3(&(&torsion(&kg) - &t)));
        out.push(p);
    }
    Ok(out)
}

fn residual(cfg: &RunConfig) -> ConfigResult<Vec<PointResult>> {
    let metric = resolve_metric(cfg)?;
    let conn = resolve_connection(cfg, &metric)?;
    let lc = cfg.connection == ConnectionSource::LeviCivita;
    let vacuum = lc && metric.preset.as_ref().is_some_and(|p| p.einstein_vanishes);
    let fc = FieldConfiguration::new(metric.field.clone(), conn)?;
    let mut out = Vec::new();
    for x in sample_points(cfg, &metric)? {
        let report = residual_report(&fc, &x, cfg.tolerances.clone())?;
        let defects = report.identity_defects.clone();
        let mut p = PointResult::new(Some(x.clone()));
        p.value("report", &report);
        p.defect("reduced_identity", defects["reduced_identity"]);
        if vacuum {
            p.defect("e_metric", defects["e_metric_max"]);
        }
        if lc {
            p.defect("e_conn", defects["e_conn_max"]);
            let point: FieldPoint = fc.point(&x)?;
            match onshell_reduction_at(&point, cfg.tol("e_conn")) {
                Ok(r) => {
                    p.defect(
                        "onshell",
                        [r.nonmetricity, r.torsion, r.contorsion, r.levi_civita_defect]
                            .into_iter()
                            .fold(0.0, f64::max),
                    );
                    p.value("onshell", r);
                }
                Err(e) => p.value("onshell", e.to_string()),
            }
        }
        out.push(p);
    }
    Ok(out)
}

fn covariance(cfg: &RunConfig) -> ConfigResult<Vec<PointResult>> {
    let metric = resolve_metric(cfg)?;
    let conn = resolve_connection(cfg, &metric)?;
    let fc = FieldConfiguration::new(metric.field.clone(), conn)?;
    let n = fc.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let mut out = Vec::new();
    for (i, x) in sample_points(cfg, &metric)?.into_iter().enumerate() {
        let tau = VectorField::random(n, 3, 4, 0.1, &mut rng);
        let cov = first_order_covariance_defect(&fc, &tau, &x)?;
        let uti = utiyama_factorization_check(&fc, &x, cfg.seed.wrapping_add(i as u64))?;
        let mut p = PointResult::new(Some(x));
        p.value("vector_field", tau.components().iter().map(|c| c.terms().to_vec()).collect::<Vec<_>>());
        p.value("richardson", &cov);
        p.value("utiyama", &uti);
        p.defect("covariance", cov.first_order);
        p.defect("utiyama", uti.symmetric_change);
        out.push(p);
    }
    Ok(out)
}

fn spin_connection(cfg: &RunConfig) -> ConfigResult<Vec<PointResult>> {
    let metric = resolve_metric(cfg)?;
    let sig = metric.signature();
    let rep = gamma_matrices(sig)?;
    let gens = spin_generators(&rep);
    let tetrad = TetradField::diagonal(metric.field.clone());
    let lc = ConnectionField::LeviCivita(metric.field.clone());
    let d = rep.dim();
    let n = sig.n();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(2));
    let random_spinor = |rng: &mut ChaCha8Rng| {
        nalgebra::DVector::from_fn(d, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    };
    let mut out = Vec::new();
    for x in sample_points(cfg, &metric)? {
        let h = tetrad.jet_at(&x)?;
        let kg = lc.jet_at(&x)?;
        let a = tetrad_coefficients(&kg, &h);
        let omega = spin_connection_matrix(&gens, &a)?;
        let y = random_spinor(&mut rng);
        let y_jets: Vec<_> = (0..n).map(|_| random_spinor(&mut rng)).collect();
        let dt = vertical_covariant_differential(&gens, &h.coframe, &h.d_coframe, &kg.k, &y, &y_jets)?;
        let restriction = (0..n)
            .map(|l| (&dt[l] - (&y_jets[l] + &omega[l] * &y)).camax())
            .fold(0.0f64, f64::max);
        let mut p = PointResult::new(Some(x));
        p.value("coefficients", nested3(&a));
        p.value("omega", omega.iter().map(complex_rows).collect::<Vec<_>>());
        p.defect("tetrad_antisymmetry", lowered_antisymmetry_defect(&sig, &a));
        p.defect("restriction", restriction);
        out.push(p);
    }
    Ok(out)
}
