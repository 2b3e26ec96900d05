#![allow(dead_code)]

use serde::Deserialize;
use weakdeg::audit::{audit_structure, witness_valid, AuditReport, Theorem};
use weakdeg::{Graph, RotationSystem};

pub const PLANE_JSON: &str = include_str!("../fixtures/plane.json");

#[derive(Deserialize)]
pub struct PlaneFixture {
    pub name: String,
    pub theorem: String,
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub rotation: Vec<Vec<usize>>,
    /// Outer face, in walk order.
    pub outer: Vec<usize>,
    /// Clause the generator expects to be designated.
    pub clause: usize,
}

pub fn plane_fixtures() -> Vec<PlaneFixture> {
    serde_json::from_str(PLANE_JSON).expect("plane.json parses")
}

pub struct Audited {
    pub report: AuditReport,
    pub witness_ok: bool,
}

/// Builds the graph, picks the face whose vertex sequence is `outer` up to
/// rotation and runs the audit.
pub fn audit_fixture(fx: &PlaneFixture) -> weakdeg::Result<Audited> {
    let g = Graph::from_edges(fx.n, &fx.edges)?;
    let rot = RotationSystem::new(fx.rotation.clone());
    let theorem: Theorem = fx.theorem.parse()?;
    let faces = rot.faces(&g)?;
    let outer = faces
        .iter()
        .find(|f| same_cycle(&f.vertices(), &fx.outer))
        .cloned()
        .ok_or_else(|| weakdeg::Error::Format(format!("{}: no face {:?}", fx.name, fx.outer)))?;
    let report = audit_structure(&g, &rot, &outer, theorem)?;
    let witness_ok = witness_valid(&g, &outer, theorem, &report.designated)?;
    Ok(Audited { report, witness_ok })
}

fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let n = a.len();
    (0..n).any(|r| (0..n).all(|i| a[(i + r) % n] == b[i]) || (0..n).all(|i| a[(i + r) % n] == b[n - 1 - i]))
}

