//! Implementation of the `ricci` command line tool: graph loading, the
//! generator-spec mini-grammar, and the subcommand bodies. The binary in
//! `main.rs` only parses arguments and maps errors to exit codes.

pub mod json;

use std::fmt::Write as _;
use std::path::Path;

use ricci_core::graph::{generate, Family, Graph};
use ricci_core::idleness::{idleness_function, product_idleness, scan};
use ricci_core::scalar::Scalar;
use ricci_core::verify::verify_graph;
use ricci_core::Rat;

/// Errors carry the process exit code: 2 for usage problems, 3 for I/O and
/// parse problems. Check failures are reported through [`CliError::Check`]
/// with exit code 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Check(m) => m,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses the generator mini-grammar: `cycle:5`, `path:4`, `complete:5`,
/// `star:3`, `hypercube:3`, `petersen`, `dodecahedral`, and
/// `product:<spec>,<spec>`. Returns `None` when the string does not name a
/// family (the caller then treats it as a file path).
pub fn parse_generator_spec(spec: &str) -> Option<Result<Graph, CliError>> {
    let (head, rest) = match spec.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (spec, None),
    };
    let need_param = |family: fn(usize) -> Family| -> Result<Graph, CliError> {
        let raw =
            rest.ok_or_else(|| usage(format!("'{head}' needs a parameter, e.g. {head}:5")))?;
        let n: usize = raw
            .parse()
            .map_err(|_| usage(format!("bad parameter '{raw}' for '{head}'")))?;
        generate(family(n)).map_err(|e| usage(e.to_string()))
    };
    match head {
        "path" => Some(need_param(Family::Path)),
        "cycle" => Some(need_param(Family::Cycle)),
        "complete" => Some(need_param(Family::Complete)),
        "star" => Some(need_param(Family::Star)),
        "hypercube" => Some(need_param(|n| Family::Hypercube(n as u32))),
        "petersen" => Some(rest.map_or_else(
            || generate(Family::Petersen).map_err(|e| usage(e.to_string())),
            |_| Err(usage("'petersen' takes no parameter")),
        )),
        "dodecahedral" => Some(rest.map_or_else(
            || generate(Family::Dodecahedral).map_err(|e| usage(e.to_string())),
            |_| Err(usage("'dodecahedral' takes no parameter")),
        )),
        "product" => {
            let raw = rest.unwrap_or("");
            let result = (|| {
                let (a, b) = split_product_args(raw)?;
                let g = resolve_spec_only(a)?;
                let h = resolve_spec_only(b)?;
                Ok(g.cartesian_product(&h))
            })();
            Some(result)
        }
        _ => None,
    }
}

fn split_product_args(raw: &str) -> Result<(&str, &str), CliError> {
    // The factor specs may themselves contain ':', so split on the comma.
    let (a, b) = raw
        .split_once(',')
        .ok_or_else(|| usage("product needs two factors, e.g. product:cycle:3,cycle:4"))?;
    if a.is_empty() || b.is_empty() || b.contains(',') {
        return Err(usage("product needs exactly two factors"));
    }
    Ok((a, b))
}

fn resolve_spec_only(spec: &str) -> Result<Graph, CliError> {
    parse_generator_spec(spec)
        .ok_or_else(|| usage(format!("unknown generator family in '{spec}'")))?
}

/// Loads a graph from a generator spec or, failing that, an edge-list file.
pub fn load_graph(source: &str) -> Result<Graph, CliError> {
    if let Some(result) = parse_generator_spec(source) {
        return result;
    }
    let text = std::fs::read_to_string(Path::new(source))
        .map_err(|e| CliError::Io(format!("cannot read '{source}': {e}")))?;
    Graph::parse_edge_list(&text).map_err(|e| CliError::Io(format!("'{source}': {e}")))
}

fn pretty(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("report serialization cannot fail")
}

fn check_edge_exists(g: &Graph, u: usize, v: usize) -> Result<(), CliError> {
    if u >= g.vertex_count() || v >= g.vertex_count() || !g.has_edge(u, v) {
        return Err(usage(format!("graph has no edge ({u},{v})")));
    }
    Ok(())
}

/// `edge`: one edge's full report as JSON.
pub fn run_edge(source: &str, u: usize, v: usize) -> Result<String, CliError> {
    let g = load_graph(source)?;
    check_edge_exists(&g, u, v)?;
    let f = idleness_function::<Rat>(&g, u, v).map_err(|e| usage(e.to_string()))?;
    let report = ricci_core::idleness::EdgeReport {
        kappa0: f.kappa_zero(),
        kappa_lly: f.kappa_lly(),
        bone_idle: f.is_bone_idle(),
        three_piece: f.is_three_piece(),
        checks: ricci_core::idleness::verify_structure(&f),
        idleness: f,
    };
    if !report.all_checks_pass() {
        return Err(CliError::Check(format!(
            "structure checks failed:\n{}",
            pretty(&json::edge_to_json(&report))
        )));
    }
    Ok(pretty(&json::edge_to_json(&report)))
}

/// `scan`: every edge plus the graph summary as JSON. Open-question hits
/// (kappa > 0 with kappa_0 < 0) are also reported on stderr by the caller.
pub fn run_scan(source: &str) -> Result<(String, Vec<String>), CliError> {
    let g = load_graph(source)?;
    let s = scan::<Rat>(&g).map_err(|e| usage(e.to_string()))?;
    let mut warnings = Vec::new();
    for e in &s.open_question_hits {
        warnings.push(format!(
            "edge ({},{}) has kappa > 0 and kappa_0 < 0 — no such example was previously known",
            e.u, e.v
        ));
    }
    let failed = s.reports.iter().any(|r| !r.all_checks_pass());
    let text = pretty(&json::scan_to_json(&g, &s));
    if failed {
        return Err(CliError::Check(format!("structure checks failed:\n{text}")));
    }
    Ok((text, warnings))
}

/// `product-check`: compares the product formula against direct
/// computation on the Cartesian product, per factor-edge class, in both
/// factor directions.
pub fn run_product_check(source_g: &str, source_h: &str) -> Result<String, CliError> {
    let g = load_graph(source_g)?;
    let h = load_graph(source_h)?;
    let dg = g
        .regular_degree()
        .ok_or_else(|| usage(format!("'{source_g}' is not regular")))?;
    let dh = h
        .regular_degree()
        .ok_or_else(|| usage(format!("'{source_h}' is not regular")))?;
    let product = g.cartesian_product(&h);

    let mut out = String::new();
    let mut failures = 0usize;
    let mut check_direction = |first: &Graph,
                               second: &Graph,
                               d1: usize,
                               d2: usize,
                               label: &str,
                               embed: &dyn Fn(usize, usize, usize) -> (usize, usize)|
     -> Result<(), CliError> {
        for e in first.edges() {
            let f1 = idleness_function::<Rat>(first, e.u, e.v).map_err(|e| usage(e.to_string()))?;
            let assembled = product_idleness(&f1, d1, d2);
            let mut ok = true;
            for w in 0..second.vertex_count() {
                let (pu, pv) = embed(e.u, e.v, w);
                let direct =
                    idleness_function::<Rat>(&product, pu, pv).map_err(|e| usage(e.to_string()))?;
                if &assembled != direct.curve() {
                    ok = false;
                }
            }
            if !ok {
                failures += 1;
            }
            writeln!(
                out,
                "{} {}-edge ({},{}) x {} copies: {}",
                if ok { "pass" } else { "FAIL" },
                label,
                e.u,
                e.v,
                second.vertex_count(),
                if ok {
                    "formula matches direct computation"
                } else {
                    "MISMATCH"
                },
            )
            .unwrap();
        }
        Ok(())
    };
    let nh = h.vertex_count();
    check_direction(&g, &h, dg, dh, "G", &|u, v, w| (u * nh + w, v * nh + w))?;
    check_direction(&h, &g, dh, dg, "H", &|u, v, w| (w * nh + u, w * nh + v))?;
    if failures > 0 {
        return Err(CliError::Check(format!(
            "{out}{failures} edge classes mismatched"
        )));
    }
    Ok(out)
}

/// `verify`: oracle equivalence plus the optimal-pair lemma suite on a
/// `k/grid` idleness grid enriched with breakpoint neighbourhoods.
pub fn run_verify(source: &str, grid: usize) -> Result<String, CliError> {
    if grid == 0 {
        return Err(usage("grid must be at least 1"));
    }
    let g = load_graph(source)?;
    let report = verify_graph::<Rat>(&g, grid).map_err(|e| usage(e.to_string()))?;
    if report.passed() {
        Ok(format!(
            "all checks passed: {} edges, {} (edge, idleness) pairs, exact agreement everywhere",
            report.edges_checked, report.points_checked
        ))
    } else {
        let mut out = String::new();
        for f in &report.failures {
            let at =
                f.p.as_ref()
                    .map(|p| format!(" at p = {p}"))
                    .unwrap_or_default();
            writeln!(out, "edge ({},{}){at}: {}", f.edge.u, f.edge.v, f.what).unwrap();
        }
        Err(CliError::Check(out))
    }
}

/// `sample`: CSV of (idleness, curvature) pairs on the `k/num` grid plus
/// all breakpoints, with exact and decimal columns side by side. The
/// decimal columns are rendering conveniences; the exact ones are
/// authoritative.
pub fn run_sample(source: &str, u: usize, v: usize, num: usize) -> Result<String, CliError> {
    if num == 0 {
        return Err(usage("sample density must be at least 1"));
    }
    let g = load_graph(source)?;
    check_edge_exists(&g, u, v)?;
    let f = idleness_function::<Rat>(&g, u, v).map_err(|e| usage(e.to_string()))?;

    let mut points: Vec<Rat> = (0..=num)
        .map(|k| Rat::from_ratio(k as i64, num as i64))
        .collect();
    points.extend(f.breakpoints());
    points.sort();
    points.dedup();

    let mut out = String::from("p_exact,p_decimal,kappa_exact,kappa_decimal,piece_index\n");
    for p in points {
        let kappa = f.eval(&p);
        writeln!(
            out,
            "{},{:.15},{},{:.15},{}",
            p,
            p.to_f64_lossy(),
            kappa,
            kappa.to_f64_lossy(),
            f.curve().piece_index_at(&p),
        )
        .unwrap();
    }
    Ok(out)
}

/// `generate`: renders a generator-family graph in edge-list form.
pub fn run_generate(spec: &str) -> Result<String, CliError> {
    let g = parse_generator_spec(spec)
        .ok_or_else(|| usage(format!("unknown generator family in '{spec}'")))??;
    Ok(g.to_edge_list_string())
}
