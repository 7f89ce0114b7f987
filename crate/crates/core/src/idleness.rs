//! The idleness function of an edge: `p -> kappa_p(x,y)`, exactly.
//!
//! For an edge `x ~ y` the curvature `kappa_p = 1 - W1(mu_x^p, mu_y^p)`
//! reduces to `1 - max{f_-1(p), f_0(p), f_1(p)}`, where each
//!
//! ```text
//! f_j(p) = (p - (1-p)/d_y) j + ((1-p)/(d_x d_y)) c_j
//! ```
//!
//! depends on one integer constant `c_j`: the maximum of
//! `F(phi) = d_y sum_{z~x, z!=y} phi(z) - d_x sum_{z~y, z!=x} phi(z)` over
//! integer 1-Lipschitz potentials with `phi(x) = j`, `phi(y) = 0`. Each
//! `c_j` comes out of an exact LP over the difference-constraint polytope,
//! whose vertices are integral (the constraint matrix is totally
//! unimodular); integrality of the returned vertex is asserted, never
//! assumed. The three lines then yield the full function via an exact
//! upper envelope: concave, piecewise linear, at most three maximal parts.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::graph::{Edge, Graph};
use crate::lp::{solve_lp, Direction, LinearProgram, LpStatus};
use crate::pwl::{upper_envelope, Line, Piece, PiecewiseLinear};
use crate::scalar::Scalar;
use crate::transport::{vertex_measure, w1_primal, TransportError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdlenessError {
    NotAdjacent(usize, usize),
    /// `closed_form_divisible` needs `d_y | d_x` after canonical orientation.
    DegreesNotDivisible {
        dx: usize,
        dy: usize,
    },
    Transport(TransportError),
}

impl fmt::Display for IdlenessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdlenessError::NotAdjacent(u, v) => write!(f, "vertices {u} and {v} are not adjacent"),
            IdlenessError::DegreesNotDivisible { dx, dy } => {
                write!(f, "degree {dy} does not divide degree {dx}")
            }
            IdlenessError::Transport(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for IdlenessError {}

impl From<TransportError> for IdlenessError {
    fn from(e: TransportError) -> Self {
        IdlenessError::Transport(e)
    }
}

/// Reorients an edge so the first endpoint has the larger degree, breaking
/// ties toward the smaller vertex index. The curvature is symmetric in the
/// endpoints, so this is a pure normalization.
pub fn canonical_edge(g: &Graph, u: usize, v: usize) -> Result<Edge, IdlenessError> {
    if !g.has_edge(u, v) {
        return Err(IdlenessError::NotAdjacent(u, v));
    }
    let (x, y) = match g.degree(u).cmp(&g.degree(v)) {
        std::cmp::Ordering::Greater => (u, v),
        std::cmp::Ordering::Less => (v, u),
        std::cmp::Ordering::Equal => (u.min(v), u.max(v)),
    };
    Ok(Edge { u: x, v: y })
}

/// Coefficients of `F` over `S = {x,y} ∪ N(x) ∪ N(y)`: `+d_y` for the other
/// neighbours of `x`, `-d_x` for the other neighbours of `y` (a common
/// neighbour collects both), and `0` at `x` and `y` themselves, whose
/// contributions live in the pinned terms.
pub fn f_objective(g: &Graph, x: usize, y: usize) -> Result<BTreeMap<usize, i64>, IdlenessError> {
    if !g.has_edge(x, y) {
        return Err(IdlenessError::NotAdjacent(x, y));
    }
    let (dx, dy) = (g.degree(x) as i64, g.degree(y) as i64);
    let mut coeffs: BTreeMap<usize, i64> = BTreeMap::new();
    coeffs.insert(x, 0);
    coeffs.insert(y, 0);
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
    Ok(coeffs)
}

/// `c_j`: the maximum of `F` over rational potentials on `S` that are
/// 1-Lipschitz for the true graph metric and pinned to `phi(x) = j`,
/// `phi(y) = 0`. The LP optimum sits at an integral vertex of the
/// difference-constraint polytope; both the vertex and the value are
/// asserted integral before the value is returned.
pub fn compute_c<T: Scalar>(g: &Graph, x: usize, y: usize, j: i64) -> Result<i64, IdlenessError> {
    assert!((-1..=1).contains(&j), "j must be -1, 0 or 1");
    let coeffs = f_objective(g, x, y)?;
    let verts: Vec<usize> = coeffs.keys().copied().collect();
    let dists: BTreeMap<usize, Vec<Option<usize>>> = verts
        .iter()
        .map(|&s| (s, g.distances_from(s).expect("vertex in range")))
        .collect();

    let objective: Vec<T> = verts.iter().map(|v| T::from_int(coeffs[v])).collect();
    let mut lp = LinearProgram::<T>::new(Direction::Maximize, objective);
    let pairs = crate::transport::essential_lipschitz_pairs(&verts, &dists)
        .expect("S lies in the component of the edge");
    for (a, b, d) in pairs {
        let mut row = vec![T::zero(); verts.len()];
        row[a] = T::one();
        row[b] = -T::one();
        lp.le(row, T::from_int(d as i64));
    }
    for (vertex, value) in [(x, j), (y, 0)] {
        let mut row = vec![T::zero(); verts.len()];
        row[verts.binary_search(&vertex).unwrap()] = T::one();
        lp.eq(row, T::from_int(value));
    }

    let sol = solve_lp(&lp);
    assert_eq!(
        sol.status,
        LpStatus::Optimal,
        "the pinned Lipschitz polytope is nonempty and bounded"
    );
    for phi in &sol.primal {
        assert!(
            phi.is_integer(),
            "non-integral vertex of a difference-constraint polytope: solver bug"
        );
    }
    Ok(sol
        .value
        .to_i64()
        .expect("objective with integer coefficients at an integral vertex"))
}

/// The line `f_j(p) = (p - (1-p)/d_y) j + ((1-p)/(d_x d_y)) c_j`, i.e.
/// slope `j (d_y+1)/d_y - c_j/(d_x d_y)` and intercept
/// `-j/d_y + c_j/(d_x d_y)`.
pub fn line_fj<T: Scalar>(j: i64, c_j: i64, dx: usize, dy: usize) -> Line<T> {
    let (dx, dy) = (dx as i64, dy as i64);
    let slope = T::from_ratio(j * (dy + 1), dy) - T::from_ratio(c_j, dx * dy);
    let intercept = T::from_ratio(-j, dy) + T::from_ratio(c_j, dx * dy);
    Line::new(slope, intercept)
}

/// The full idleness function of one edge, with the constants that define
/// it. `edge` is canonically oriented: `deg(edge.u) >= deg(edge.v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdlenessFunction<T> {
    pub edge: Edge,
    pub dx: usize,
    pub dy: usize,
    /// `[c_-1, c_0, c_1]`.
    pub c: [i64; 3],
    curve: PiecewiseLinear<T>,
}

impl<T: Scalar> IdlenessFunction<T> {
    pub fn curve(&self) -> &PiecewiseLinear<T> {
        &self.curve
    }

    pub fn eval(&self, p: &T) -> T {
        self.curve.eval(p)
    }

    /// Value at `p = 0` (Ollivier's original normalization).
    pub fn kappa_zero(&self) -> T {
        self.curve.pieces()[0].line.intercept.clone()
    }

    /// The curvature `lim_{p->1} kappa_p/(1-p)`: minus the slope of the
    /// last linear part.
    pub fn kappa_lly(&self) -> T {
        -self.curve.pieces().last().unwrap().line.slope.clone()
    }

    /// Identically zero on `[0,1]`; by concavity this is exactly
    /// `kappa_0 = kappa = 0`.
    pub fn is_bone_idle(&self) -> bool {
        self.kappa_zero().is_zero() && self.kappa_lly().is_zero()
    }

    pub fn is_three_piece(&self) -> bool {
        self.curve.pieces().len() == 3
    }

    pub fn breakpoints(&self) -> Vec<T> {
        self.curve.interior_breakpoints()
    }
}

/// Computes the idleness function of the edge `{u, v}` from the three
/// constants and the exact upper envelope of the three lines.
pub fn idleness_function<T: Scalar>(
    g: &Graph,
    u: usize,
    v: usize,
) -> Result<IdlenessFunction<T>, IdlenessError> {
    let edge = canonical_edge(g, u, v)?;
    let (x, y) = (edge.u, edge.v);
    let (dx, dy) = (g.degree(x), g.degree(y));
    let c = [
        compute_c::<T>(g, x, y, -1)?,
        compute_c::<T>(g, x, y, 0)?,
        compute_c::<T>(g, x, y, 1)?,
    ];

    assert!(c[2] >= c[1] && c[1] >= c[0], "c_1 >= c_0 >= c_-1 must hold");
    assert!(
        2 * c[1] >= c[0] + c[2],
        "c_0 must dominate the average of c_-1 and c_1"
    );
    let g_cd = (dx as i64).gcd(&(dy as i64));
    assert!(
        c.iter().all(|cj| cj.rem_euclid(g_cd) == 0),
        "gcd(dx,dy) must divide every c_j"
    );

    let lines = [
        line_fj::<T>(-1, c[0], dx, dy),
        line_fj::<T>(0, c[1], dx, dy),
        line_fj::<T>(1, c[2], dx, dy),
    ];
    let curve = upper_envelope(&lines).one_minus();

    assert!(curve.pieces().len() <= 3, "more than three maximal parts");
    assert!(curve.eval(&T::one()).is_zero(), "kappa_1 must be exactly 0");
    let slopes = curve.slopes();
    for w in slopes.windows(2) {
        assert!(w[0] > w[1], "idleness function must be concave");
    }

    Ok(IdlenessFunction {
        edge,
        dx,
        dy,
        c,
        curve,
    })
}

/// Two-piece closed form for edges whose smaller degree divides the larger:
/// the whole function is pinned down by `kappa_0` and `kappa` alone, with
/// the single possible breakpoint at `1/(d_x+1)`. Both inputs come from the
/// primal transport oracle, making this an independent route to compare
/// with [`idleness_function`].
pub fn closed_form_divisible<T: Scalar>(
    g: &Graph,
    u: usize,
    v: usize,
) -> Result<PiecewiseLinear<T>, IdlenessError> {
    let edge = canonical_edge(g, u, v)?;
    let (x, y) = (edge.u, edge.v);
    let (dx, dy) = (g.degree(x), g.degree(y));
    if dx % dy != 0 {
        return Err(IdlenessError::DegreesNotDivisible { dx, dy });
    }

    let kappa_at = |p: T| -> Result<T, IdlenessError> {
        let mu_x = vertex_measure(g, x, &p)?;
        let mu_y = vertex_measure(g, y, &p)?;
        let (w1, _) = w1_primal(g, &mu_x, &mu_y)?;
        Ok(T::one() - w1)
    };
    let kappa0 = kappa_at(T::zero())?;
    let bp = T::from_ratio(1, dx as i64 + 1);
    // On the tail kappa_p = (1-p) kappa, so kappa = kappa_bp / (1 - bp).
    let kappa = kappa_at(bp.clone())? / (T::one() - bp.clone());

    let dx_t = T::from_int(dx as i64);
    let first = Line::new(
        dx_t.clone() * kappa.clone() - (dx_t + T::one()) * kappa0.clone(),
        kappa0,
    );
    let tail = Line::new(-kappa.clone(), kappa);
    Ok(PiecewiseLinear::new(vec![
        Piece {
            lo: T::zero(),
            hi: bp.clone(),
            line: first,
        },
        Piece {
            lo: bp,
            hi: T::one(),
            line: tail,
        },
    ]))
}

/// Idleness function of a product edge `((x1,y),(x2,y))` of
/// `G x H` for regular factors, assembled purely from the factor's
/// function: scale by `d_G/(d_G+d_H)`, add the correction slope on the
/// head piece, and cut at `1/(d_G+d_H+1)`.
pub fn product_idleness<T: Scalar>(
    fn_g: &IdlenessFunction<T>,
    d_g: usize,
    d_h: usize,
) -> PiecewiseLinear<T> {
    assert!(d_h >= 1, "the second factor must have positive degree");
    let scale = T::from_ratio(d_g as i64, (d_g + d_h) as i64);
    let correction = T::from_ratio((d_g * d_h) as i64, (d_g + d_h) as i64)
        * (fn_g.kappa_lly() - fn_g.kappa_zero());
    let bp = T::from_ratio(1, (d_g + d_h + 1) as i64);

    let head_src = &fn_g.curve().pieces()[0];
    assert!(
        head_src.hi >= bp,
        "factor function breaks before 1/(d_G+d_H+1); is the factor regular?"
    );
    let head = Line::new(
        scale.clone() * head_src.line.slope.clone() + correction,
        scale.clone() * head_src.line.intercept.clone(),
    );
    let kappa_scaled = scale * fn_g.kappa_lly();
    let tail = Line::new(-kappa_scaled.clone(), kappa_scaled);
    PiecewiseLinear::new(vec![
        Piece {
            lo: T::zero(),
            hi: bp.clone(),
            line: head,
        },
        Piece {
            lo: bp,
            hi: T::one(),
            line: tail,
        },
    ])
}

/// One named structural check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
}

/// Verifies the structure theorems on a computed function, exactly. Every
/// failure is a theorem violation, i.e. an implementation bug; callers
/// report rather than panic so a broken build fails loudly in bulk.
pub fn verify_structure<T: Scalar>(f: &IdlenessFunction<T>) -> Vec<Check> {
    let (dx, dy) = (f.dx as i64, f.dy as i64);
    let lcm = dx.lcm(&dy);
    let lcm_bound = T::from_ratio(1, lcm + 1);
    let max_bound = T::from_ratio(1, dx.max(dy) + 1);
    let breaks = f.breakpoints();
    let kappa0 = f.kappa_zero();
    let kappa = f.kappa_lly();
    let pieces = f.curve().pieces();

    let mut checks = Vec::new();
    let mut push = |name: &'static str, pass: bool| checks.push(Check { name, pass });

    push(
        "linear_before_lcm_bound",
        breaks.iter().all(|b| *b >= lcm_bound),
    );
    push(
        "linear_after_max_bound",
        breaks.iter().all(|b| *b <= max_bound),
    );
    let last = pieces.last().unwrap();
    push(
        "tail_is_one_minus_p_times_kappa",
        last.lo <= max_bound && last.line == Line::new(-kappa.clone(), kappa.clone()),
    );
    let slopes = f.curve().slopes();
    push(
        "concave_with_at_most_three_parts",
        pieces.len() <= 3 && slopes.windows(2).all(|w| w[0] > w[1]),
    );
    push(
        "kappa_within_bounds_of_kappa0",
        kappa0 <= kappa && kappa <= kappa0.clone() + T::from_ratio(2, dx),
    );
    // Interior breakpoints have the form K/(lcm + K) for a positive
    // integer K, i.e. lcm * b / (1 - b) is a positive integer.
    push(
        "breakpoints_of_lcm_form",
        breaks.iter().all(|b| {
            let k = T::from_int(lcm) * b.clone() / (T::one() - b.clone());
            k.is_positive() && k.is_integer()
        }),
    );
    push(
        "equal_degrees_give_two_parts",
        dx != dy || pieces.len() <= 2,
    );
    // Scaling identities for edges with equal degrees, plus the integer
    // gap (kappa - kappa_0) * d in {0, 1, 2}.
    push(
        "equal_degree_scaling_identities",
        dx != dy || {
            let two = T::two();
            let half = T::one() / two.clone();
            let d1 = T::from_ratio(1, dx + 1);
            let gap = (kappa.clone() - kappa0.clone()) * T::from_int(dx);
            kappa == two * f.eval(&half)
                && kappa == T::from_ratio(dx + 1, dx) * f.eval(&d1)
                && (gap.is_zero() || gap.is_one() || gap == T::two())
        },
    );
    checks
}

/// Full per-edge result: the function, the two distinguished curvature
/// values, flags, and the structural check list.
#[derive(Clone, Debug)]
pub struct EdgeReport<T> {
    pub idleness: IdlenessFunction<T>,
    pub kappa0: T,
    pub kappa_lly: T,
    pub bone_idle: bool,
    pub three_piece: bool,
    pub checks: Vec<Check>,
}

impl<T: Scalar> EdgeReport<T> {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Whole-graph scan summary.
#[derive(Clone, Debug)]
pub struct GraphScan<T> {
    /// One report per edge, ordered by `(min endpoint, max endpoint)`.
    pub reports: Vec<EdgeReport<T>>,
    pub bone_idle: bool,
    /// Edges with `kappa > 0` yet `kappa_0 < 0` — no such example is known,
    /// so any hit deserves loud attention.
    pub open_question_hits: Vec<Edge>,
    pub girth: Option<usize>,
    pub regular: Option<usize>,
}

/// Computes an [`EdgeReport`] for every edge.
pub fn scan<T: Scalar>(g: &Graph) -> Result<GraphScan<T>, IdlenessError> {
    let mut reports = Vec::with_capacity(g.edge_count());
    let mut open_question_hits = Vec::new();
    for e in g.edges() {
        let f = idleness_function::<T>(g, e.u, e.v)?;
        let report = EdgeReport {
            kappa0: f.kappa_zero(),
            kappa_lly: f.kappa_lly(),
            bone_idle: f.is_bone_idle(),
            three_piece: f.is_three_piece(),
            checks: verify_structure(&f),
            idleness: f,
        };
        if report.kappa_lly.is_positive() && report.kappa0.is_negative() {
            open_question_hits.push(e);
        }
        reports.push(report);
    }
    Ok(GraphScan {
        bone_idle: reports.iter().all(|r| r.bone_idle),
        open_question_hits,
        girth: g.girth(),
        regular: g.regular_degree(),
        reports,
    })
}
