//! Exact piecewise-linear functions on the unit interval.
//!
//! A [`PiecewiseLinear`] is a list of closed pieces covering `[0,1]`,
//! contiguous and continuous, with collinear neighbours merged so the piece
//! count always means "maximal linear parts". The only nontrivial
//! constructor is [`upper_envelope`], which intersects a finite set of
//! lines exactly and keeps the pointwise maximum.

use crate::scalar::Scalar;

/// `p -> slope * p + intercept`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line<T> {
    pub slope: T,
    pub intercept: T,
}

impl<T: Scalar> Line<T> {
    pub fn new(slope: T, intercept: T) -> Self {
        Line { slope, intercept }
    }

    pub fn eval(&self, p: &T) -> T {
        self.slope.clone() * p.clone() + self.intercept.clone()
    }

    /// Intersection abscissa with another line; `None` for parallel lines.
    pub fn intersect(&self, other: &Line<T>) -> Option<T> {
        if self.slope == other.slope {
            return None;
        }
        Some(
            (other.intercept.clone() - self.intercept.clone())
                / (self.slope.clone() - other.slope.clone()),
        )
    }
}

/// One maximal linear part on the closed interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece<T> {
    pub lo: T,
    pub hi: T,
    pub line: Line<T>,
}

/// Continuous piecewise-linear function on `[0,1]` in canonical (maximal
/// pieces) form. Equality of values on all of `[0,1]` coincides with `==`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseLinear<T> {
    pieces: Vec<Piece<T>>,
}

impl<T: Scalar> PiecewiseLinear<T> {
    /// Validates cover of `[0,1]`, contiguity and continuity, then merges
    /// collinear neighbours. Panics on violations — pieces are produced by
    /// this crate's own constructions, so a bad list is a bug.
    pub fn new(pieces: Vec<Piece<T>>) -> Self {
        assert!(
            !pieces.is_empty(),
            "piecewise function needs at least one piece"
        );
        assert!(pieces[0].lo.is_zero(), "first piece must start at 0");
        assert!(
            *pieces.last().map(|p| &p.hi).unwrap() == T::one(),
            "last piece must end at 1"
        );
        let mut merged: Vec<Piece<T>> = Vec::with_capacity(pieces.len());
        for piece in pieces {
            assert!(piece.lo < piece.hi, "empty or reversed piece interval");
            match merged.last_mut() {
                Some(prev) => {
                    assert!(prev.hi == piece.lo, "pieces must be contiguous");
                    assert!(
                        prev.line.eval(&prev.hi) == piece.line.eval(&piece.lo),
                        "pieces must agree at the shared endpoint"
                    );
                    if prev.line == piece.line {
                        prev.hi = piece.hi;
                    } else {
                        merged.push(piece);
                    }
                }
                None => merged.push(piece),
            }
        }
        PiecewiseLinear { pieces: merged }
    }

    pub fn pieces(&self) -> &[Piece<T>] {
        &self.pieces
    }

    /// Breakpoints strictly inside `(0,1)`.
    pub fn interior_breakpoints(&self) -> Vec<T> {
        self.pieces[1..].iter().map(|p| p.lo.clone()).collect()
    }

    /// Index of the piece whose closed interval contains `p` (the left one
    /// at a breakpoint shared by two pieces).
    pub fn piece_index_at(&self, p: &T) -> usize {
        assert!(
            !p.is_negative() && *p <= T::one(),
            "evaluation point outside [0,1]"
        );
        self.pieces
            .iter()
            .position(|piece| *p <= piece.hi)
            .expect("pieces cover [0,1]")
    }

    pub fn eval(&self, p: &T) -> T {
        self.pieces[self.piece_index_at(p)].line.eval(p)
    }

    /// Pointwise `1 - f`.
    pub fn one_minus(&self) -> PiecewiseLinear<T> {
        PiecewiseLinear {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    lo: p.lo.clone(),
                    hi: p.hi.clone(),
                    line: Line::new(-p.line.slope.clone(), T::one() - p.line.intercept.clone()),
                })
                .collect(),
        }
    }

    /// Slopes in piece order.
    pub fn slopes(&self) -> Vec<T> {
        self.pieces.iter().map(|p| p.line.slope.clone()).collect()
    }
}

/// Pointwise maximum of finitely many lines over `[0,1]`, computed exactly
/// from pairwise intersection points. The result is convex, so its slopes
/// strictly increase across pieces; that is asserted before returning.
pub fn upper_envelope<T: Scalar>(lines: &[Line<T>]) -> PiecewiseLinear<T> {
    assert!(!lines.is_empty(), "envelope of no lines");
    let mut cuts: Vec<T> = vec![T::zero(), T::one()];
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            if let Some(t) = a.intersect(b) {
                if t.is_positive() && t < T::one() {
                    cuts.push(t);
                }
            }
        }
    }
    cuts.sort();
    cuts.dedup();

    let mut pieces = Vec::new();
    for window in cuts.windows(2) {
        let (lo, hi) = (window[0].clone(), window[1].clone());
        let mid = (lo.clone() + hi.clone()).half();
        // Two distinct lines cannot tie at `mid`: their crossing would be an
        // interior cut point. A tie therefore means identical lines.
        let best = lines
            .iter()
            .max_by(|a, b| a.eval(&mid).cmp(&b.eval(&mid)))
            .unwrap();
        pieces.push(Piece {
            lo,
            hi,
            line: best.clone(),
        });
    }
    let envelope = PiecewiseLinear::new(pieces);
    for w in envelope.pieces.windows(2) {
        assert!(
            w[0].line.slope < w[1].line.slope,
            "envelope slopes must strictly increase"
        );
    }
    envelope
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;
    use proptest::prelude::*;

    fn line(s: (i64, i64), c: (i64, i64)) -> Line<Rat> {
        Line::new(Rat::from_ratio(s.0, s.1), Rat::from_ratio(c.0, c.1))
    }

    fn rq(n: i64, d: i64) -> Rat {
        Rat::from_ratio(n, d)
    }

    #[test]
    fn single_line_envelope() {
        let f = upper_envelope(&[line((2, 1), (0, 1))]);
        assert_eq!(f.pieces().len(), 1);
        assert_eq!(f.eval(&rq(1, 3)), rq(2, 3));
        assert!(f.interior_breakpoints().is_empty());
    }

    #[test]
    fn vee_envelope_with_inactive_middle_line() {
        // max(2p-1, 0, 1-2p) = |2p-1|; the zero line touches only at 1/2.
        let f = upper_envelope(&[
            line((2, 1), (-1, 1)),
            line((0, 1), (0, 1)),
            line((-2, 1), (1, 1)),
        ]);
        assert_eq!(f.pieces().len(), 2);
        assert_eq!(f.interior_breakpoints(), vec![rq(1, 2)]);
        assert_eq!(f.eval(&rq(0, 1)), rq(1, 1));
        assert_eq!(f.eval(&rq(1, 2)), rq(0, 1));
        assert_eq!(f.eval(&rq(3, 4)), rq(1, 2));

        let k = f.one_minus();
        assert_eq!(k.eval(&rq(1, 4)), rq(1, 2)); // 2p on the left branch
        assert_eq!(k.eval(&rq(1, 2)), rq(1, 1));
    }

    #[test]
    fn identical_lines_collapse() {
        let f = upper_envelope(&[line((1, 2), (1, 3)), line((1, 2), (1, 3))]);
        assert_eq!(f.pieces().len(), 1);
    }

    #[test]
    fn collinear_neighbours_merge_in_new() {
        let l = line((1, 1), (0, 1));
        let f = PiecewiseLinear::new(vec![
            Piece {
                lo: rq(0, 1),
                hi: rq(1, 2),
                line: l.clone(),
            },
            Piece {
                lo: rq(1, 2),
                hi: rq(1, 1),
                line: l,
            },
        ]);
        assert_eq!(f.pieces().len(), 1);
    }

    #[test]
    #[should_panic(expected = "shared endpoint")]
    fn discontinuity_rejected() {
        PiecewiseLinear::new(vec![
            Piece {
                lo: rq(0, 1),
                hi: rq(1, 2),
                line: line((0, 1), (0, 1)),
            },
            Piece {
                lo: rq(1, 2),
                hi: rq(1, 1),
                line: line((0, 1), (1, 1)),
            },
        ]);
    }

    #[test]
    fn piece_index_uses_left_piece_at_breakpoints() {
        let f = upper_envelope(&[line((2, 1), (-1, 1)), line((-2, 1), (1, 1))]);
        assert_eq!(f.piece_index_at(&rq(0, 1)), 0);
        assert_eq!(f.piece_index_at(&rq(1, 2)), 0);
        assert_eq!(f.piece_index_at(&rq(3, 4)), 1);
        assert_eq!(f.piece_index_at(&rq(1, 1)), 1);
    }

    proptest! {
        // The envelope must agree with the pointwise max everywhere.
        #[test]
        fn envelope_matches_pointwise_max(
            raw in proptest::collection::vec((-6i64..=6, -4i64..=4, 1i64..=4), 1..5),
            num in 0i64..=24,
        ) {
            let lines: Vec<Line<Rat>> = raw
                .iter()
                .map(|&(s, d1, d2)| line((s, d2), (d1, d2)))
                .collect();
            let f = upper_envelope(&lines);
            let p = rq(num, 24);
            let direct = lines.iter().map(|l| l.eval(&p)).max().unwrap();
            prop_assert_eq!(f.eval(&p), direct);
        }
    }
}
