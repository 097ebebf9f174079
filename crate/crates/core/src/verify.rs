//! Property report for a claimed function given as hex.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::boolfn::{self, analyze, PropertyReport, TruthTable};
use crate::error::Result;
use crate::rsbf::is_rotation_symmetric;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundComparison {
    pub name: &'static str,
    pub value: u32,
    /// `nl` compared with the bound: "below", "equal" or "above".
    pub relation: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub n: u32,
    pub properties: PropertyReport,
    pub rotation_symmetric: bool,
    pub bounds: Vec<BoundComparison>,
}

fn compare(name: &'static str, nl: u32, value: u32) -> BoundComparison {
    let relation = match nl.cmp(&value) {
        Ordering::Less => "below",
        Ordering::Equal => "equal",
        Ordering::Greater => "above",
    };
    BoundComparison { name, value, relation }
}

pub fn verify_table(tt: &TruthTable) -> VerifyReport {
    let n = tt.n();
    let properties = analyze(tt);
    let nl = properties.nonlinearity;
    let mut bounds = Vec::new();
    if n % 2 == 1 {
        if let Ok(q) = boolfn::quadratic_bound(n) {
            bounds.push(compare("quadratic", nl, q));
        }
        if let Ok(b) = boolfn::best_known(n) {
            bounds.push(compare("best_known", nl, b));
        }
        if let Ok(u) = boolfn::upper_bound(n) {
            bounds.push(compare("upper", nl, u));
        }
    } else if let Ok(c) = boolfn::covering_radius_bound(n) {
        bounds.push(compare("covering_radius", nl, c));
    }
    VerifyReport {
        n,
        properties,
        rotation_symmetric: is_rotation_symmetric(tt),
        bounds,
    }
}

pub fn verify(tt_hex: &str, n: u32) -> Result<VerifyReport> {
    Ok(verify_table(&TruthTable::from_hex(n, tt_hex)?))
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.properties;
        writeln!(f, "n: {}", self.n)?;
        writeln!(f, "nonlinearity: {}", p.nonlinearity)?;
        writeln!(f, "balanced: {}", p.balanced)?;
        writeln!(f, "hamming_weight: {}", p.hamming_weight)?;
        writeln!(f, "max_abs_walsh: {}", p.max_abs_walsh)?;
        writeln!(f, "num_max_values: {}", p.num_max_values)?;
        writeln!(f, "fitness: {}", p.fitness)?;
        writeln!(f, "rotation_symmetric: {}", self.rotation_symmetric)?;
        for b in &self.bounds {
            writeln!(f, "{}: {} ({})", b.name, b.value, b.relation)?;
        }
        Ok(())
    }
}
