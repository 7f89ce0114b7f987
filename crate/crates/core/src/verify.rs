//! Cross-verification of the two computation routes and the optimal-pair
//! lemmas, at chosen idleness values.
//!
//! The envelope route (three constants, three lines) and the primal
//! transport route (one LP per idleness) must agree exactly everywhere.
//! On top of that, every optimal pair the solver produces has to satisfy
//! complementary slackness, survive integerization at unchanged dual
//! value, admit the diagonal plan normalization at unchanged cost, and —
//! past `1/(d_x+1)` — pin `phi(x) - phi(y) = 1`. Any failure here is an
//! implementation bug, reported as data so callers can fail loudly in
//! bulk.

use std::collections::BTreeSet;

use crate::graph::{Edge, Graph};
use crate::idleness::{idleness_function, IdlenessError, IdlenessFunction};
use crate::pwl::Line;
use crate::scalar::Scalar;
use crate::transport::{
    check_slackness, integerize_potential, normalize_plan, optimal_potential, vertex_measure,
    w1_primal, Potential, TransportError,
};

/// One exact mismatch, with the edge and idleness it occurred at.
#[derive(Clone, Debug)]
pub struct VerifyFailure<T> {
    pub edge: Edge,
    pub p: Option<T>,
    pub what: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport<T> {
    pub failures: Vec<VerifyFailure<T>>,
    pub edges_checked: usize,
    pub points_checked: usize,
}

impl<T> VerifyReport<T> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The idleness values a grid of density `n` induces for an edge: `k/n`
/// for `0 <= k <= n`, plus every breakpoint nudged by `1/1000` to both
/// sides (clamped into `[0,1]`), plus the breakpoints themselves.
pub fn sample_points<T: Scalar>(f: &IdlenessFunction<T>, n: usize) -> Vec<T> {
    assert!(n >= 1);
    let mut points: BTreeSet<T> = (0..=n).map(|k| T::from_ratio(k as i64, n as i64)).collect();
    let eps = T::from_ratio(1, 1000);
    for b in f.breakpoints() {
        points.insert(b.clone());
        let lo = b.clone() - eps.clone();
        points.insert(if lo.is_negative() { T::zero() } else { lo });
        let hi = b + eps.clone();
        points.insert(if hi > T::one() { T::one() } else { hi });
    }
    points.into_iter().collect()
}

/// Envelope route vs primal route at one idleness: `1 - max_j f_j(p)`
/// must equal `1 - W1` exactly. Returns a description of the mismatch,
/// if any.
pub fn oracle_mismatch<T: Scalar>(
    g: &Graph,
    f: &IdlenessFunction<T>,
    p: &T,
) -> Result<Option<String>, TransportError> {
    let mu_x = vertex_measure(g, f.edge.u, p)?;
    let mu_y = vertex_measure(g, f.edge.v, p)?;
    let (w1, _) = w1_primal(g, &mu_x, &mu_y)?;
    let via_primal = T::one() - w1;
    let via_envelope = f.eval(p);
    Ok((via_envelope != via_primal).then(|| {
        format!("envelope gives {via_envelope}, primal transport gives {via_primal} at p = {p}")
    }))
}

/// Runs the full optimal-pair lemma suite at one idleness value. Returned
/// strings describe exact failures; an empty list is a pass.
pub fn verify_edge_point<T: Scalar>(
    g: &Graph,
    f: &IdlenessFunction<T>,
    p: &T,
) -> Result<Vec<String>, TransportError> {
    let mut failures = Vec::new();
    let (x, y) = (f.edge.u, f.edge.v);
    let mu_x = vertex_measure(g, x, p)?;
    let mu_y = vertex_measure(g, y, p)?;

    let (w1, plan) = w1_primal(g, &mu_x, &mu_y)?;
    // optimal_potential asserts the exact primal/dual agreement internally.
    let phi = optimal_potential(g, &mu_x, &mu_y)?;
    let dual = phi.dual_objective(&mu_x, &mu_y)?;
    if dual != w1 {
        failures.push(format!("duality gap: primal {w1}, dual {dual}"));
    }

    if !check_slackness(g, &plan, &phi)? {
        failures.push("complementary slackness fails on an optimal pair".to_string());
    }

    // Integerize after pinning phi(y) = 0; optimality must survive.
    let pinned = phi.translate(&-phi.value(y).unwrap().clone());
    match integerize_potential(g, &pinned, &mu_x, &mu_y) {
        Ok(int_phi) => {
            if !int_phi.is_integer_valued() {
                failures.push("integerized potential has non-integer values".to_string());
            }
            if int_phi.dual_objective(&mu_x, &mu_y)? != w1 {
                failures.push("integerized potential lost the optimum".to_string());
            }
            // Past 1/(d_x+1) every optimal potential steps down by exactly
            // one across the edge.
            if *p > T::from_ratio(1, f.dx as i64 + 1) {
                let diff = int_phi.value(x).unwrap().clone() - int_phi.value(y).unwrap().clone();
                if !diff.is_one() {
                    failures.push(format!("phi(x) - phi(y) = {diff} instead of 1 at p = {p}"));
                }
            }
        }
        Err(e) => failures.push(format!("integerization failed: {e}")),
    }

    // normalize_plan asserts cost preservation and the diagonal property
    // internally; reaching the next line means both held.
    let normalized = normalize_plan(g, &plan);
    for (v, m) in mu_x.support() {
        if *m <= mu_y.mass_at(*v) && normalized.mass_at(*v, *v) != *m {
            failures.push(format!("diagonal property fails at vertex {v}"));
        }
    }

    let via_envelope = f.eval(p);
    let via_primal = T::one() - w1;
    if via_envelope != via_primal {
        failures.push(format!(
            "envelope gives {via_envelope}, primal transport gives {via_primal} at p = {p}"
        ));
    }
    Ok(failures)
}

/// Per-edge check that one shared optimal potential, extracted at the
/// midpoint of the tail interval, certifies the whole tail line by direct
/// evaluation: the dual objective of a fixed potential is linear in `p`,
/// and for this one it must coincide with `1 - kappa_p` on the tail.
pub fn tail_line_certificate<T: Scalar>(
    g: &Graph,
    f: &IdlenessFunction<T>,
) -> Result<Option<String>, TransportError> {
    let (x, y) = (f.edge.u, f.edge.v);
    let bp = T::from_ratio(1, f.dx as i64 + 1);
    let p0 = (bp + T::one()).half();
    let mu_x = vertex_measure(g, x, &p0)?;
    let mu_y = vertex_measure(g, y, &p0)?;
    let phi = optimal_potential(g, &mu_x, &mu_y)?;
    let pinned = phi.translate(&-phi.value(y).unwrap().clone());
    let int_phi = integerize_potential(g, &pinned, &mu_x, &mu_y)?;

    // sum phi (mu_x^p - mu_y^p) as a line in p: the p-coefficient is
    // phi(x) - phi(y) - sum_{w~x} phi(w)/dx + sum_{w~y} phi(w)/dy.
    let avg = |centre: usize| -> T {
        let total = g
            .neighbors(centre)
            .iter()
            .map(|&w| {
                int_phi
                    .value(w)
                    .expect("potential covers both balls")
                    .clone()
            })
            .fold(T::zero(), |acc, v| acc + v);
        total / T::from_int(g.degree(centre) as i64)
    };
    let (ax, ay) = (avg(x), avg(y));
    let phi_x = int_phi.value(x).unwrap().clone();
    let phi_y = int_phi.value(y).unwrap().clone();
    let w_line = Line::new(phi_x - phi_y - ax.clone() + ay.clone(), ax - ay);
    let tail = &f.curve().pieces().last().unwrap().line;
    let expected = Line::new(-tail.slope.clone(), T::one() - tail.intercept.clone());
    Ok((w_line != expected).then(|| {
        format!(
            "shared potential certifies W-line ({} p + {}), envelope tail expects ({} p + {})",
            w_line.slope, w_line.intercept, expected.slope, expected.intercept
        )
    }))
}

/// Full verification of a graph: every edge, a `k/grid` idleness grid
/// enriched with breakpoint neighbourhoods, the whole lemma suite, plus
/// the per-edge tail certificate.
pub fn verify_graph<T: Scalar>(g: &Graph, grid: usize) -> Result<VerifyReport<T>, IdlenessError> {
    let mut failures = Vec::new();
    let mut points_checked = 0;
    let mut edges_checked = 0;
    for e in g.edges() {
        edges_checked += 1;
        let f = idleness_function::<T>(g, e.u, e.v)?;
        for p in sample_points(&f, grid) {
            points_checked += 1;
            for what in verify_edge_point(g, &f, &p).map_err(IdlenessError::from)? {
                failures.push(VerifyFailure {
                    edge: f.edge,
                    p: Some(p.clone()),
                    what,
                });
            }
        }
        if let Some(what) = tail_line_certificate(g, &f).map_err(IdlenessError::from)? {
            failures.push(VerifyFailure {
                edge: f.edge,
                p: None,
                what,
            });
        }
    }
    Ok(VerifyReport {
        failures,
        edges_checked,
        points_checked,
    })
}

/// Convenience wrapper: pins `phi(y) = 0` by translation, the
/// normalization the structural lemmas are stated against.
pub fn pin_at<T: Scalar>(phi: &Potential<T>, y: usize) -> Potential<T> {
    phi.translate(&-phi.value(y).expect("y in the potential domain").clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family};
    use crate::Rat;

    #[test]
    fn small_graphs_verify_clean() {
        for family in [
            Family::Path(2),
            Family::Cycle(3),
            Family::Cycle(5),
            Family::Star(3),
        ] {
            let g = generate(family).unwrap();
            let report = verify_graph::<Rat>(&g, 6).unwrap();
            assert!(report.passed(), "{family:?}: {:?}", report.failures);
            assert_eq!(report.edges_checked, g.edge_count());
        }
    }

    #[test]
    fn sample_points_cover_grid_and_breakpoints() {
        let g = generate(Family::Path(2)).unwrap();
        let f = idleness_function::<Rat>(&g, 0, 1).unwrap();
        let pts = sample_points(&f, 4);
        let half = Rat::from_ratio(1, 2);
        assert!(pts.contains(&Rat::from_ratio(0, 1)));
        assert!(pts.contains(&Rat::from_ratio(1, 1)));
        assert!(pts.contains(&half));
        assert!(pts.contains(&Rat::from_ratio(499, 1000)));
        assert!(pts.contains(&Rat::from_ratio(501, 1000)));
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn tail_certificate_holds_on_three_piece_edge() {
        let g =
            Graph::from_edge_list([(0, 1), (0, 4), (2, 3), (0, 3), (1, 2), (4, 3)], None).unwrap();
        let f = idleness_function::<Rat>(&g, 0, 1).unwrap();
        assert_eq!(tail_line_certificate(&g, &f).unwrap(), None);
    }
}
