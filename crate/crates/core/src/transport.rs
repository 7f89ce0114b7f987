//! Local measures, exact Wasserstein distance, optimal plans and
//! Kantorovich potentials.
//!
//! The measure of interest is the lazy random-walk step `mu_x^p`: mass `p`
//! stays at `x`, the rest spreads uniformly over the neighbours. `w1_primal`
//! solves the transport problem between two such measures as an exact LP
//! and returns an optimal vertex plan; `optimal_potential` solves the dual
//! over the support union with true graph distances and cross-checks the
//! two optima against each other (Kantorovich duality holds exactly or the
//! solver is broken).

use std::collections::BTreeMap;
use std::fmt;

use crate::graph::Graph;
use crate::lp::{solve_lp, Direction, LinearProgram, LpStatus};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransportError {
    /// The walk measure is undefined on a degree-zero vertex.
    IsolatedVertex(usize),
    /// Idleness outside `[0,1]`.
    IdlenessOutOfRange(String),
    /// Measure supports do not lie in one connected component.
    DisconnectedSupports,
    /// A potential lacks a value at a vertex the operation needs.
    UndefinedPotentialValue(usize),
    /// The input potential is not 1-Lipschitz.
    NotLipschitz,
    /// Integerization changed the dual value, so the input was not optimal.
    NotOptimal,
    /// Measure entries that are not positive, not distinct, or don't sum to 1.
    BadMeasure(String),
}

impl fmt::Display for TransportError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransportError::IsolatedVertex(v) => {
                write!(f, "vertex {v} has degree 0, its walk measure is undefined")
            }
            TransportError::IdlenessOutOfRange(p) => write!(f, "idleness {p} outside [0,1]"),
            TransportError::DisconnectedSupports => {
                write!(f, "measure supports lie in different components")
            }
            TransportError::UndefinedPotentialValue(v) => {
                write!(f, "potential undefined at vertex {v}")
            }
            TransportError::NotLipschitz => write!(f, "potential is not 1-Lipschitz"),
            TransportError::NotOptimal => write!(f, "potential is not an optimal potential"),
            TransportError::BadMeasure(msg) => write!(f, "bad measure: {msg}"),
        }
    }
}

impl std::error::Error for TransportError {}

/// Probability measure with finite support; entries are sorted by vertex,
/// strictly positive, and sum to exactly 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbMeasure<T> {
    support: Vec<(usize, T)>,
}

impl<T: Scalar> ProbMeasure<T> {
    pub fn from_entries(mut entries: Vec<(usize, T)>) -> Result<Self, TransportError> {
        entries.sort_by_key(|&(v, _)| v);
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(TransportError::BadMeasure(format!(
                    "duplicate support vertex {}",
                    pair[0].0
                )));
            }
        }
        if entries.iter().any(|(_, m)| !m.is_positive()) {
            return Err(TransportError::BadMeasure("non-positive mass".to_string()));
        }
        let total: T = entries
            .iter()
            .map(|(_, m)| m.clone())
            .fold(T::zero(), |acc, m| acc + m);
        if !total.is_one() {
            return Err(TransportError::BadMeasure(format!(
                "total mass {total} != 1"
            )));
        }
        Ok(ProbMeasure { support: entries })
    }

    pub fn support(&self) -> &[(usize, T)] {
        &self.support
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.support.iter().map(|&(v, _)| v)
    }

    pub fn mass_at(&self, v: usize) -> T {
        self.support
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.support[i].1.clone())
            .unwrap_or_else(|_| T::zero())
    }
}

/// Coupling with prescribed marginals; entries are positive and sorted by
/// `(source, target)`, and the row/column sums match the two measures
/// exactly (checked at construction).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportPlan<T> {
    entries: Vec<(usize, usize, T)>,
    source: ProbMeasure<T>,
    target: ProbMeasure<T>,
}

impl<T: Scalar> TransportPlan<T> {
    pub fn new(
        mut entries: Vec<(usize, usize, T)>,
        source: ProbMeasure<T>,
        target: ProbMeasure<T>,
    ) -> Result<Self, TransportError> {
        entries.retain(|(_, _, m)| !m.is_zero());
        entries.sort_by_key(|&(u, v, _)| (u, v));
        if entries.iter().any(|(_, _, m)| m.is_negative()) {
            return Err(TransportError::BadMeasure("negative plan mass".to_string()));
        }
        let mut row: BTreeMap<usize, T> = BTreeMap::new();
        let mut col: BTreeMap<usize, T> = BTreeMap::new();
        for (u, v, m) in &entries {
            let r = row.entry(*u).or_insert_with(T::zero);
            *r = r.clone() + m.clone();
            let c = col.entry(*v).or_insert_with(T::zero);
            *c = c.clone() + m.clone();
        }
        let marginals_match = source.support().iter().all(|(v, m)| row.get(v) == Some(m))
            && row.len() == source.support().len()
            && target.support().iter().all(|(v, m)| col.get(v) == Some(m))
            && col.len() == target.support().len();
        if !marginals_match {
            return Err(TransportError::BadMeasure(
                "plan marginals do not match the measures".to_string(),
            ));
        }
        Ok(TransportPlan {
            entries,
            source,
            target,
        })
    }

    pub fn entries(&self) -> &[(usize, usize, T)] {
        &self.entries
    }

    pub fn source_measure(&self) -> &ProbMeasure<T> {
        &self.source
    }

    pub fn target_measure(&self) -> &ProbMeasure<T> {
        &self.target
    }

    pub fn mass_at(&self, u: usize, v: usize) -> T {
        self.entries
            .binary_search_by_key(&(u, v), |&(a, b, _)| (a, b))
            .map(|i| self.entries[i].2.clone())
            .unwrap_or_else(|_| T::zero())
    }

    /// Total cost `sum d(u,v) * mass` against graph distances.
    pub fn cost(&self, g: &Graph) -> Result<T, TransportError> {
        let dists = distance_table(g, self.entries.iter().map(|&(u, _, _)| u));
        let mut total = T::zero();
        for (u, v, m) in &self.entries {
            let d = dists[u][*v].ok_or(TransportError::DisconnectedSupports)?;
            total = total + T::from_int(d as i64) * m.clone();
        }
        Ok(total)
    }
}

/// Rational-valued function on a finite vertex set, the dual variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential<T> {
    values: BTreeMap<usize, T>,
}

impl<T: Scalar> Potential<T> {
    pub fn new(values: BTreeMap<usize, T>) -> Self {
        Potential { values }
    }

    pub fn value(&self, v: usize) -> Option<&T> {
        self.values.get(&v)
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.values.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &T)> {
        self.values.iter().map(|(&v, t)| (v, t))
    }

    /// Adds a constant; the dual objective and Lipschitz constraints are
    /// invariant under this.
    pub fn translate(&self, delta: &T) -> Self {
        Potential {
            values: self
                .values
                .iter()
                .map(|(&v, t)| (v, t.clone() + delta.clone()))
                .collect(),
        }
    }

    pub fn is_integer_valued(&self) -> bool {
        self.values.values().all(Scalar::is_integer)
    }

    /// `sum phi(w) (mu1(w) - mu2(w))`; errors if some support vertex is
    /// outside the domain.
    pub fn dual_objective(
        &self,
        mu1: &ProbMeasure<T>,
        mu2: &ProbMeasure<T>,
    ) -> Result<T, TransportError> {
        let mut total = T::zero();
        for (measure, positive) in [(mu1, true), (mu2, false)] {
            for (v, m) in measure.support() {
                let phi = self
                    .value(*v)
                    .ok_or(TransportError::UndefinedPotentialValue(*v))?;
                let term = phi.clone() * m.clone();
                total = if positive { total + term } else { total - term };
            }
        }
        Ok(total)
    }
}

/// The lazy walk step measure: mass `p` at `x`, `(1-p)/deg(x)` at each
/// neighbour. Zero-mass entries are omitted, so `p = 0` drops the centre
/// and `p = 1` drops the neighbours.
pub fn vertex_measure<T: Scalar>(
    g: &Graph,
    x: usize,
    p: &T,
) -> Result<ProbMeasure<T>, TransportError> {
    if p.is_negative() || *p > T::one() {
        return Err(TransportError::IdlenessOutOfRange(p.to_string()));
    }
    let deg = g.degree(x);
    if deg == 0 {
        return Err(TransportError::IsolatedVertex(x));
    }
    let mut entries = Vec::with_capacity(deg + 1);
    if p.is_positive() {
        entries.push((x, p.clone()));
    }
    let neighbour_mass = (T::one() - p.clone()) / T::from_int(deg as i64);
    if !neighbour_mass.is_zero() {
        for &w in g.neighbors(x) {
            entries.push((w, neighbour_mass.clone()));
        }
    }
    ProbMeasure::from_entries(entries)
}

/// BFS distance rows for the given source vertices.
fn distance_table(
    g: &Graph,
    sources: impl IntoIterator<Item = usize>,
) -> BTreeMap<usize, Vec<Option<usize>>> {
    let mut table = BTreeMap::new();
    for s in sources {
        table
            .entry(s)
            .or_insert_with(|| g.distances_from(s).expect("source in range"));
    }
    table
}

/// Ordered vertex pairs whose Lipschitz constraints are not implied by
/// shorter ones: `(i, j, d)` is dropped when some `w` in the set splits the
/// distance exactly, since `phi_i - phi_j <= d` then follows from the two
/// sub-constraints (inductively on distance). Errors when some pair is in
/// different components.
pub(crate) fn essential_lipschitz_pairs(
    verts: &[usize],
    dists: &BTreeMap<usize, Vec<Option<usize>>>,
) -> Result<Vec<(usize, usize, usize)>, TransportError> {
    let n = verts.len();
    let mut d = vec![vec![0usize; n]; n];
    for (a, &u) in verts.iter().enumerate() {
        for (b, &v) in verts.iter().enumerate() {
            if a != b {
                d[a][b] = dists[&u][v].ok_or(TransportError::DisconnectedSupports)?;
            }
        }
    }
    let mut pairs = Vec::new();
    for a in 0..n {
        'next: for b in 0..n {
            if a == b {
                continue;
            }
            for w in 0..n {
                if w != a && w != b && d[a][w] + d[w][b] == d[a][b] {
                    continue 'next;
                }
            }
            pairs.push((a, b, d[a][b]));
        }
    }
    Ok(pairs)
}

/// Raw transportation LP between two nonnegative mass lists with equal
/// totals; returns the optimal cost and the positive plan entries.
fn transport_lp<T: Scalar>(
    g: &Graph,
    rows: &[(usize, T)],
    cols: &[(usize, T)],
) -> Result<(T, Vec<(usize, usize, T)>), TransportError> {
    if rows.is_empty() {
        return Ok((T::zero(), Vec::new()));
    }
    let dists = distance_table(g, rows.iter().map(|&(u, _)| u));
    let mut cost = Vec::with_capacity(rows.len() * cols.len());
    for (u, _) in rows {
        for (v, _) in cols {
            let d = dists[u][*v].ok_or(TransportError::DisconnectedSupports)?;
            cost.push(T::from_int(d as i64));
        }
    }

    let mut lp = LinearProgram::new(Direction::Minimize, cost).nonnegative();
    let nvars = rows.len() * cols.len();
    for i in 0..rows.len() {
        let mut coeffs = vec![T::zero(); nvars];
        for j in 0..cols.len() {
            coeffs[i * cols.len() + j] = T::one();
        }
        lp.eq(coeffs, rows[i].1.clone());
    }
    for j in 0..cols.len() {
        let mut coeffs = vec![T::zero(); nvars];
        for i in 0..rows.len() {
            coeffs[i * cols.len() + j] = T::one();
        }
        lp.eq(coeffs, cols[j].1.clone());
    }

    let sol = solve_lp(&lp);
    assert_eq!(
        sol.status,
        LpStatus::Optimal,
        "transport LP is always feasible and bounded"
    );
    let mut entries = Vec::new();
    for i in 0..rows.len() {
        for j in 0..cols.len() {
            let m = sol.primal[i * cols.len() + j].clone();
            if !m.is_zero() {
                entries.push((rows[i].0, cols[j].0, m));
            }
        }
    }
    Ok((sol.value, entries))
}

/// Exact Wasserstein distance between two measures, with an optimal vertex
/// plan.
///
/// The common mass `min(mu1, mu2)` never needs to move (mass-subtraction
/// invariance of the transport distance), so only the two leftovers — which
/// have disjoint supports — enter the LP. The diagonal common part plus the
/// leftover vertex plan is again a vertex plan of the full problem.
pub fn w1_primal<T: Scalar>(
    g: &Graph,
    mu1: &ProbMeasure<T>,
    mu2: &ProbMeasure<T>,
) -> Result<(T, TransportPlan<T>), TransportError> {
    let mut common: Vec<(usize, T)> = Vec::new();
    let mut left1: Vec<(usize, T)> = Vec::new();
    for (v, m1) in mu1.support() {
        let shared = m1.clone().min(mu2.mass_at(*v));
        if shared.is_positive() {
            common.push((*v, shared.clone()));
        }
        let rest = m1.clone() - shared;
        if rest.is_positive() {
            left1.push((*v, rest));
        }
    }
    let left2: Vec<(usize, T)> = mu2
        .support()
        .iter()
        .filter_map(|(v, m2)| {
            let rest = m2.clone() - mu1.mass_at(*v).min(m2.clone());
            rest.is_positive().then_some((*v, rest))
        })
        .collect();
    debug_assert!(left1
        .iter()
        .all(|(v, _)| !left2.iter().any(|(w, _)| v == w)));

    let (value, moved) = transport_lp(g, &left1, &left2)?;
    let mut entries: Vec<(usize, usize, T)> = common.into_iter().map(|(v, m)| (v, v, m)).collect();
    entries.extend(moved);
    // Vertex solutions of the transportation polytope have at most
    // |supp mu1| + |supp mu2| - 1 positive entries; the diagonal/leftover
    // composition preserves that bound.
    assert!(
        entries.len() < mu1.support().len() + mu2.support().len(),
        "plan is not a vertex solution"
    );
    let plan =
        TransportPlan::new(entries, mu1.clone(), mu2.clone()).expect("LP marginals hold exactly");
    Ok((value, plan))
}

/// Optimal Kantorovich potential on the support union, from the dual LP
/// with true graph distances: maximize `sum phi (mu1 - mu2)` subject to
/// `phi(u) - phi(v) <= d(u,v)`. The dual optimum is asserted to equal the
/// primal optimum exactly before returning.
pub fn optimal_potential<T: Scalar>(
    g: &Graph,
    mu1: &ProbMeasure<T>,
    mu2: &ProbMeasure<T>,
) -> Result<Potential<T>, TransportError> {
    let mut verts: Vec<usize> = mu1.vertices().chain(mu2.vertices()).collect();
    verts.sort_unstable();
    verts.dedup();
    let dists = distance_table(g, verts.iter().copied());

    let objective: Vec<T> = verts
        .iter()
        .map(|&w| mu1.mass_at(w) - mu2.mass_at(w))
        .collect();
    let mut lp = LinearProgram::new(Direction::Maximize, objective);
    for (i, j, d) in essential_lipschitz_pairs(&verts, &dists)? {
        let mut coeffs = vec![T::zero(); verts.len()];
        coeffs[i] = T::one();
        coeffs[j] = -T::one();
        lp.le(coeffs, T::from_int(d as i64));
    }
    // Pin the translation freedom: the objective coefficients sum to zero,
    // so fixing one value loses nothing.
    let mut pin = vec![T::zero(); verts.len()];
    pin[0] = T::one();
    lp.eq(pin, T::zero());

    let sol = solve_lp(&lp);
    assert_eq!(
        sol.status,
        LpStatus::Optimal,
        "dual LP is feasible (zero) and bounded (pinned differences)"
    );

    let (primal_value, _) = w1_primal(g, mu1, mu2)?;
    assert!(
        sol.value == primal_value,
        "Kantorovich duality gap: dual {} vs primal {}",
        sol.value,
        primal_value
    );

    Ok(Potential::new(verts.into_iter().zip(sol.primal).collect()))
}

/// Pointwise floor; stays 1-Lipschitz, which is asserted.
pub fn floor_potential<T: Scalar>(g: &Graph, phi: &Potential<T>) -> Potential<T> {
    let out = Potential::new(phi.iter().map(|(v, t)| (v, Scalar::floor(t))).collect());
    assert!(
        lipschitz_check(g, &out),
        "floor broke the Lipschitz property"
    );
    out
}

/// Pointwise ceiling; stays 1-Lipschitz, which is asserted.
pub fn ceil_potential<T: Scalar>(g: &Graph, phi: &Potential<T>) -> Potential<T> {
    let out = Potential::new(phi.iter().map(|(v, t)| (v, Scalar::ceil(t))).collect());
    assert!(
        lipschitz_check(g, &out),
        "ceiling broke the Lipschitz property"
    );
    out
}

/// Rounds an optimal potential down to an integer-valued optimal potential
/// of the same dual value. A changed value means the input was not optimal.
pub fn integerize_potential<T: Scalar>(
    g: &Graph,
    phi: &Potential<T>,
    mu1: &ProbMeasure<T>,
    mu2: &ProbMeasure<T>,
) -> Result<Potential<T>, TransportError> {
    if !lipschitz_check(g, phi) {
        return Err(TransportError::NotLipschitz);
    }
    let before = phi.dual_objective(mu1, mu2)?;
    let floored = floor_potential(g, phi);
    let after = floored.dual_objective(mu1, mu2)?;
    if before != after {
        return Err(TransportError::NotOptimal);
    }
    Ok(floored)
}

/// Complementary slackness: every positive plan entry `(u,v)` must have
/// `phi(u) - phi(v) = d(u,v)` exactly.
pub fn check_slackness<T: Scalar>(
    g: &Graph,
    plan: &TransportPlan<T>,
    phi: &Potential<T>,
) -> Result<bool, TransportError> {
    let dists = distance_table(g, plan.entries().iter().map(|&(u, _, _)| u));
    for (u, v, _) in plan.entries() {
        let pu = phi
            .value(*u)
            .ok_or(TransportError::UndefinedPotentialValue(*u))?;
        let pv = phi
            .value(*v)
            .ok_or(TransportError::UndefinedPotentialValue(*v))?;
        let d = dists[u][*v].ok_or(TransportError::DisconnectedSupports)?;
        if pu.clone() - pv.clone() != T::from_int(d as i64) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reroutes an optimal plan so that every vertex with `mu1(x) <= mu2(x)`
/// keeps its full source mass in place: `pi(x,x) = mu1(x)`. Mass that used
/// to leave `x` is re-sent directly from the donors of `x`'s incoming
/// mass; by the triangle inequality the cost cannot rise, and since the
/// input was optimal it cannot fall — exact cost equality is asserted.
pub fn normalize_plan<T: Scalar>(g: &Graph, plan: &TransportPlan<T>) -> TransportPlan<T> {
    let mu1 = plan.source_measure().clone();
    let mu2 = plan.target_measure().clone();
    let mut entries: BTreeMap<(usize, usize), T> = plan
        .entries()
        .iter()
        .map(|&(u, v, ref m)| ((u, v), m.clone()))
        .collect();

    let fixable: Vec<usize> = mu1
        .support()
        .iter()
        .filter(|(v, m)| *m <= mu2.mass_at(*v))
        .map(|&(v, _)| v)
        .collect();

    for w in fixable {
        let want = mu1.mass_at(w);
        let have = entries.get(&(w, w)).cloned().unwrap_or_else(T::zero);
        if have == want {
            continue;
        }
        let mut deficit = want.clone() - have.clone();

        // Remove everything flowing out of w to other vertices (total =
        // deficit) and peel the same amount off incoming flows.
        let outgoing: Vec<(usize, T)> = entries
            .iter()
            .filter(|((u, v), _)| *u == w && *v != w)
            .map(|((_, v), m)| (*v, m.clone()))
            .collect();
        let incoming: Vec<(usize, T)> = entries
            .iter()
            .filter(|((u, v), _)| *v == w && *u != w)
            .map(|((u, _), m)| (*u, m.clone()))
            .collect();
        let mut removed_in: Vec<(usize, T)> = Vec::new();
        for (z, m) in incoming {
            if deficit.is_zero() {
                break;
            }
            let take = if m <= deficit {
                m.clone()
            } else {
                deficit.clone()
            };
            deficit = deficit - take.clone();
            removed_in.push((z, take.clone()));
            let slot = entries.get_mut(&(z, w)).unwrap();
            if *slot == take {
                entries.remove(&(z, w));
            } else {
                *slot = slot.clone() - take;
            }
        }
        assert!(
            deficit.is_zero(),
            "incoming mass cannot cover the diagonal deficit"
        );
        for (v, _) in &outgoing {
            entries.remove(&(w, *v));
        }
        entries.insert((w, w), want);

        // Match the peeled incoming against the removed outgoing pairwise.
        let mut out_iter = outgoing.into_iter();
        let mut current_out: Option<(usize, T)> = out_iter.next();
        for (z, mut amount) in removed_in {
            while !amount.is_zero() {
                let (v, avail) = current_out.take().expect("in/out totals match");
                let step = if avail <= amount {
                    avail.clone()
                } else {
                    amount.clone()
                };
                let slot = entries.entry((z, v)).or_insert_with(T::zero);
                *slot = slot.clone() + step.clone();
                amount = amount - step.clone();
                let rest = avail - step;
                current_out = if rest.is_zero() {
                    out_iter.next()
                } else {
                    Some((v, rest))
                };
            }
        }
    }

    let result = TransportPlan::new(
        entries.into_iter().map(|((u, v), m)| (u, v, m)).collect(),
        mu1.clone(),
        mu2.clone(),
    )
    .expect("rerouting preserves marginals");

    let before = plan.cost(g).expect("input plan has finite cost");
    let after = result.cost(g).expect("rerouted plan has finite cost");
    assert!(
        before == after,
        "rerouting changed the cost ({before} -> {after}); input plan was not optimal"
    );
    for (v, m) in mu1.support() {
        if *m <= mu2.mass_at(*v) {
            assert!(
                result.mass_at(*v, *v) == *m,
                "diagonal property failed at vertex {v}"
            );
        }
    }
    result
}

/// Exhaustive pairwise Lipschitz check over the potential's domain, against
/// BFS distances; pairs in different components are unconstrained.
pub fn lipschitz_check<T: Scalar>(g: &Graph, phi: &Potential<T>) -> bool {
    let verts: Vec<usize> = phi.domain().collect();
    let dists = distance_table(g, verts.iter().copied());
    for (i, &u) in verts.iter().enumerate() {
        for &v in &verts[i + 1..] {
            if let Some(d) = dists[&u][v] {
                let diff = phi.value(u).unwrap().clone() - phi.value(v).unwrap().clone();
                if diff.abs() > T::from_int(d as i64) {
                    return false;
                }
            }
        }
    }
    true
}
