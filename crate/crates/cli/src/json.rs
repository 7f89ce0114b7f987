//! JSON report schema.
//!
//! Every rational is rendered as a `"num/den"` string (plain `"num"` when
//! the denominator is 1) so values survive serialization exactly; floating
//! point never appears. Field order is fixed by the struct definitions,
//! which makes parse-then-reserialize byte-identical.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use ricci_core::idleness::{EdgeReport, GraphScan};
use ricci_core::scalar::Scalar;
use ricci_core::Graph;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PieceJson {
    pub from: String,
    pub to: String,
    pub slope: String,
    pub intercept: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeJson {
    pub u: usize,
    pub v: usize,
    pub dx: usize,
    pub dy: usize,
    pub c: [String; 3],
    pub pieces: Vec<PieceJson>,
    pub breakpoints: Vec<String>,
    pub kappa0: String,
    pub kappa: String,
    pub bone_idle: bool,
    pub three_piece: bool,
    pub checks: BTreeMap<String, bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SummaryJson {
    pub bone_idle: bool,
    pub girth: Option<usize>,
    pub regular: Option<usize>,
    pub open_question_hits: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportJson {
    pub graph: GraphJson,
    pub edges: Vec<EdgeJson>,
    pub summary: SummaryJson,
}

pub fn edge_to_json<T: Scalar>(report: &EdgeReport<T>) -> EdgeJson {
    let f = &report.idleness;
    EdgeJson {
        u: f.edge.u,
        v: f.edge.v,
        dx: f.dx,
        dy: f.dy,
        c: [f.c[0].to_string(), f.c[1].to_string(), f.c[2].to_string()],
        pieces: f
            .curve()
            .pieces()
            .iter()
            .map(|p| PieceJson {
                from: p.lo.to_string(),
                to: p.hi.to_string(),
                slope: p.line.slope.to_string(),
                intercept: p.line.intercept.to_string(),
            })
            .collect(),
        breakpoints: f.breakpoints().iter().map(ToString::to_string).collect(),
        kappa0: report.kappa0.to_string(),
        kappa: report.kappa_lly.to_string(),
        bone_idle: report.bone_idle,
        three_piece: report.three_piece,
        checks: report
            .checks
            .iter()
            .map(|c| (c.name.to_string(), c.pass))
            .collect(),
    }
}

pub fn scan_to_json<T: Scalar>(g: &Graph, scan: &GraphScan<T>) -> ReportJson {
    ReportJson {
        graph: GraphJson {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
        },
        edges: scan.reports.iter().map(edge_to_json).collect(),
        summary: SummaryJson {
            bone_idle: scan.bone_idle,
            girth: scan.girth,
            regular: scan.regular,
            open_question_hits: scan.open_question_hits.iter().map(|e| [e.u, e.v]).collect(),
        },
    }
}
