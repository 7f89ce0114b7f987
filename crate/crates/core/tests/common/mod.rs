//! Shared test fixtures and brute-force oracles.
//!
//! The oracles enumerate integer potentials directly and never touch the
//! library's LP or envelope code, so agreement between the two is a real
//! cross-check, not a tautology.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ricci_core::graph::{generate, Family, Graph};
use ricci_core::scalar::Scalar;
use ricci_core::transport::ProbMeasure;
use ricci_core::Rat;

pub fn rq(n: i64, d: i64) -> Rat {
    Rat::from_ratio(n, d)
}

/// Triangle and a square glued along one edge; the probed edge (0,1) has
/// degrees 3 and 2, lcm 6, and a three-piece idleness function.
pub fn glued_triangle_square() -> Graph {
    Graph::from_edge_list([(0, 1), (0, 4), (2, 3), (0, 3), (1, 2), (4, 3)], None).unwrap()
}

/// Triangle plus two squares glued around the probed edge (0,1): degrees 4
/// and 3, lcm 12, three pieces with the second slope change strictly
/// before 1/(max+1).
pub fn glued_triangle_two_squares() -> Graph {
    Graph::from_edge_list(
        [
            (0, 1),
            (0, 4),
            (2, 3),
            (0, 3),
            (1, 2),
            (4, 3),
            (5, 6),
            (0, 5),
            (1, 6),
        ],
        None,
    )
    .unwrap()
}

fn distance_rows(g: &Graph, verts: &[usize]) -> BTreeMap<usize, Vec<Option<usize>>> {
    verts
        .iter()
        .map(|&v| (v, g.distances_from(v).unwrap()))
        .collect()
}

/// Exhaustive-search W1: maximize `sum phi (mu1 - mu2)` over integer
/// potentials on the support union, pinned to 0 at the smallest support
/// vertex and boxed by the distance to that vertex. An optimal
/// integer-valued potential always exists inside that box, so the search
/// attains W1 exactly.
pub fn w1_bruteforce(g: &Graph, mu1: &ProbMeasure<Rat>, mu2: &ProbMeasure<Rat>) -> Rat {
    let mut verts: Vec<usize> = mu1.vertices().chain(mu2.vertices()).collect();
    verts.sort_unstable();
    verts.dedup();
    let dists = distance_rows(g, &verts);
    let anchor = verts[0];

    let weights: Vec<Rat> = verts
        .iter()
        .map(|&w| mu1.mass_at(w) - mu2.mass_at(w))
        .collect();
    let ranges: Vec<(i64, i64)> = verts
        .iter()
        .map(|&w| {
            let d = dists[&anchor][w].expect("supports connected") as i64;
            (-d, d)
        })
        .collect();

    let mut assigned: Vec<i64> = Vec::with_capacity(verts.len());
    let mut best: Option<Rat> = None;
    fn dfs(
        verts: &[usize],
        dists: &BTreeMap<usize, Vec<Option<usize>>>,
        weights: &[Rat],
        ranges: &[(i64, i64)],
        assigned: &mut Vec<i64>,
        best: &mut Option<Rat>,
    ) {
        let i = assigned.len();
        if i == verts.len() {
            let value: Rat = assigned
                .iter()
                .zip(weights)
                .map(|(&phi, w)| Rat::from_int(phi) * w.clone())
                .sum();
            if best.as_ref().is_none_or(|b| value > *b) {
                *best = Some(value);
            }
            return;
        }
        let (lo, hi) = ranges[i];
        'values: for value in lo..=hi {
            for (k, &prev) in assigned.iter().enumerate() {
                if let Some(d) = dists[&verts[k]][verts[i]] {
                    if (value - prev).abs() > d as i64 {
                        continue 'values;
                    }
                }
            }
            assigned.push(value);
            dfs(verts, dists, weights, ranges, assigned, best);
            assigned.pop();
        }
    }
    dfs(&verts, &dists, &weights, &ranges, &mut assigned, &mut best);
    best.expect("the zero potential is always feasible")
}

/// Exhaustive-search `c_j`: maximize `F` over integer potentials on
/// `S = {x,y} ∪ N(x) ∪ N(y)` with `phi(x) = j`, `phi(y) = 0`, boxed by the
/// distance bounds both pins imply. `half_steps` widens the search to
/// half-integer values; the optimum must not change (flooring an optimal
/// half-integer potential keeps it optimal).
pub fn c_bruteforce(g: &Graph, x: usize, y: usize, j: i64, half_steps: bool) -> Rat {
    let mut coeffs: BTreeMap<usize, i64> = BTreeMap::new();
    coeffs.insert(x, 0);
    coeffs.insert(y, 0);
    let (dx, dy) = (g.degree(x) as i64, g.degree(y) as i64);
    for &z in g.neighbors(x) {
        if z != y {
            *coeffs.entry(z).or_insert(0) += dy;
        }
    }
    for &z in g.neighbors(y) {
        if z != x {
            *coeffs.entry(z).or_insert(0) -= dx;
        }
    }
    let verts: Vec<usize> = coeffs.keys().copied().collect();
    let dists = distance_rows(g, &verts);

    // Work in doubled units so half-integers stay exact integers.
    let step = if half_steps { 1 } else { 2 };
    let ranges: Vec<Vec<i64>> = verts
        .iter()
        .map(|&w| {
            if w == x {
                vec![2 * j]
            } else if w == y {
                vec![0]
            } else {
                let dwy = dists[&y][w].unwrap() as i64;
                let dwx = dists[&x][w].unwrap() as i64;
                let lo = (-dwy).max(j - dwx) * 2;
                let hi = dwy.min(j + dwx) * 2;
                (lo..=hi).step_by(step).collect()
            }
        })
        .collect();

    let mut assigned: Vec<i64> = Vec::new();
    let mut best: Option<i64> = None;
    fn dfs(
        verts: &[usize],
        dists: &BTreeMap<usize, Vec<Option<usize>>>,
        coeffs: &BTreeMap<usize, i64>,
        ranges: &[Vec<i64>],
        assigned: &mut Vec<i64>,
        best: &mut Option<i64>,
    ) {
        let i = assigned.len();
        if i == verts.len() {
            // Values are doubled, so this is 2F.
            let doubled: i64 = assigned
                .iter()
                .zip(verts)
                .map(|(&phi2, v)| phi2 * coeffs[v])
                .sum();
            if best.is_none_or(|b| doubled > b) {
                *best = Some(doubled);
            }
            return;
        }
        'values: for &value in &ranges[i] {
            for (k, &prev) in assigned.iter().enumerate() {
                if let Some(d) = dists[&verts[k]][verts[i]] {
                    if (value - prev).abs() > 2 * d as i64 {
                        continue 'values;
                    }
                }
            }
            assigned.push(value);
            dfs(verts, dists, coeffs, ranges, assigned, best);
            assigned.pop();
        }
    }
    dfs(&verts, &dists, &coeffs, &ranges, &mut assigned, &mut best);
    Rat::from_ratio(best.expect("pinned box is nonempty"), 2)
}

/// Erdos-Renyi-style connected graph: `n` vertices, edge probability
/// `prob_percent/100`, resampled until connected. Deterministic per seed.
pub fn random_connected_graph(seed: u64, n: usize, prob_percent: u32) -> Graph {
    let mut rng = StdRng::seed_from_u64(seed);
    loop {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_range(0..100) < prob_percent {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edge_list(edges, Some(n)).unwrap();
        if g.is_connected() && g.vertex_count() >= 2 {
            return g;
        }
    }
}

/// The 200-graph random corpus: sizes cycle through 4..=12, edge
/// probability sweeps 30% to 60%.
pub fn random_corpus() -> Vec<Graph> {
    (0..200u64)
        .map(|i| {
            let n = 4 + (i % 9) as usize;
            let prob = 30 + (i * 30 / 199) as u32;
            random_connected_graph(0xACC0 + i, n, prob)
        })
        .collect()
}

/// Every named graph the acceptance criteria mention.
pub fn named_corpus() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = Vec::new();
    out.push(("K2".into(), generate(Family::Path(2)).unwrap()));
    for n in 3..=12 {
        out.push((format!("C{n}"), generate(Family::Cycle(n)).unwrap()));
    }
    out.push(("glued_triangle_square".into(), glued_triangle_square()));
    out.push((
        "glued_triangle_two_squares".into(),
        glued_triangle_two_squares(),
    ));
    out.push(("K5".into(), generate(Family::Complete(5)).unwrap()));
    out.push(("Q3".into(), generate(Family::Hypercube(3)).unwrap()));
    out.push(("petersen".into(), generate(Family::Petersen).unwrap()));
    out.push((
        "dodecahedral".into(),
        generate(Family::Dodecahedral).unwrap(),
    ));
    for n in 3..=5 {
        out.push((format!("star{n}"), generate(Family::Star(n)).unwrap()));
    }
    for n in 3..=6 {
        out.push((format!("P{n}"), generate(Family::Path(n)).unwrap()));
    }
    let c3 = generate(Family::Cycle(3)).unwrap();
    let c4 = generate(Family::Cycle(4)).unwrap();
    let c5 = generate(Family::Cycle(5)).unwrap();
    let k2 = generate(Family::Path(2)).unwrap();
    out.push(("C3xC4".into(), c3.cartesian_product(&c4)));
    out.push(("C4xC4".into(), c4.cartesian_product(&c4)));
    out.push(("K2xC5".into(), k2.cartesian_product(&c5)));
    out
}

/// `1 - W1` via the brute-force dual search; the fully independent route
/// used to confirm figure-derived values before freezing them.
pub fn kappa_bruteforce(g: &Graph, x: usize, y: usize, p: &Rat) -> Rat {
    let mu_x = ricci_core::transport::vertex_measure(g, x, p).unwrap();
    let mu_y = ricci_core::transport::vertex_measure(g, y, p).unwrap();
    Rat::one() - w1_bruteforce(g, &mu_x, &mu_y)
}
