use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "maggeo/1";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointResult {
    pub point: Option<Vec<f64>>,
    pub values: BTreeMap<String, Value>,
    pub defects: BTreeMap<String, f64>,
}

impl PointResult {
    pub fn new(point: Option<Vec<f64>>) -> Self {
        Self {
            point,
            values: BTreeMap::new(),
            defects: BTreeMap::new(),
        }
    }

    pub fn value(&mut self, name: &str, v: impl Serialize) {
        let v = serde_json::to_value(v).expect("plain data serialises");
        self.values.insert(name.to_string(), v);
    }

    pub fn defect(&mut self, name: &str, v: f64) {
        self.defects.insert(name.to_string(), v);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub max_defect: f64,
    pub pass: bool,
    /// Defects above their tolerance, as "point index: name".
    pub violations: Vec<String>,
}

/// Tolerance for `name`, falling back to the part before the first '.'.
/// Unknown names get zero.
pub fn tolerance(tolerances: &BTreeMap<String, f64>, name: &str) -> f64 {
    tolerances
        .get(name)
        .or_else(|| tolerances.get(name.split('.').next().unwrap_or(name)))
        .copied()
        .unwrap_or(0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub config: Value,
    pub results: Vec<PointResult>,
    pub summary: Summary,
}

impl Report {
    /// Assembles the report and checks every defect against its tolerance.
    /// Non-finite defects always fail.
    pub fn new(command: &'static str, config: Value, results: Vec<PointResult>, tolerances: &BTreeMap<String, f64>) -> Self {
        let mut max_defect: f64 = 0.0;
        let mut violations = Vec::new();
        for (i, r) in results.iter().enumerate() {
            for (name, &d) in &r.defects {
                let tol = tolerance(tolerances, name);
                if !(d <= tol) {
                    violations.push(format!("{i}: {name}"));
                }
                if d.is_finite() {
                    max_defect = max_defect.max(d);
                } else {
                    max_defect = f64::INFINITY;
                }
            }
        }
        Self {
            schema: SCHEMA,
            command,
            config,
            results,
            summary: Summary {
                max_defect,
                pass: violations.is_empty(),
                violations,
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }
}
