//! Combinatorial curve diagrams.
//!
//! A curve diagram is stored as the sequence of points where the curve meets
//! the horizontal axis, together with the half-disk (upper or lower) that
//! each arc between consecutive points runs through. Since the punctures lie
//! on the axis, each open half-disk is a disk, so an arc inside it is
//! determined up to isotopy by its two endpoints. The points are:
//!
//! * `Start`: the boundary point `-1`, where the curve begins;
//! * `Puncture(k)`: the curve passes through puncture `k` (1-based);
//! * `Crossing { gap, rank }`: a transverse crossing of the axis in gap `gap`
//!   (gap 0 is `(-1, p1)`, gap `g` is `(p_g, p_{g+1})`, gap `n` is `(p_n, 1)`),
//!   `rank` being its 1-based left-to-right position among that gap's crossings.
//!
//! Reduced diagrams have no arc that joins two axis-neighbouring points unless
//! neither is a crossing, and such arcs are always drawn in the upper half.

use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{BraidWord, Letter};

/// Whether `σ_i` (positive letter) turns the support disk clockwise. Fixed by
/// the label-calibration tests in `labels` and the acceptance suite.
pub const POSITIVE_TWIST_IS_CLOCKWISE: bool = true;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Point {
    Start,
    Puncture(usize),
    Crossing { gap: usize, rank: usize },
}

impl Point {
    pub fn is_crossing(self) -> bool {
        matches!(self, Point::Crossing { .. })
    }

    /// Total order along the axis.
    pub fn axis_key(self) -> (i64, i64) {
        match self {
            Point::Start => (-1, 0),
            Point::Puncture(k) => (2 * k as i64 - 1, 0),
            Point::Crossing { gap, rank } => (2 * gap as i64, rank as i64),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Upper => Side::Lower,
            Side::Lower => Side::Upper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
    Rightward,
    Leftward,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveDiagram {
    n: usize,
    points: Vec<Point>,
    sides: Vec<Side>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub invariant: String,
    pub indices: Vec<usize>,
}

impl Violation {
    fn new(invariant: &str, indices: Vec<usize>) -> Self {
        Violation { invariant: invariant.to_string(), indices }
    }
}

impl CurveDiagram {
    /// The segment from `-1` through all punctures, pushed into the upper half.
    pub fn trivial(n: usize) -> CurveDiagram {
        assert!(n >= 2, "curve diagrams need at least two punctures");
        let mut points = vec![Point::Start];
        points.extend((1..=n).map(Point::Puncture));
        CurveDiagram { n, points, sides: vec![Side::Upper; n] }
    }

    /// Builds a diagram from raw parts without checking invariants.
    pub fn from_parts_unchecked(n: usize, points: Vec<Point>, sides: Vec<Side>) -> CurveDiagram {
        CurveDiagram { n, points, sides }
    }

    /// Builds a diagram and checks every structural invariant (but not reducedness).
    pub fn from_parts(n: usize, points: Vec<Point>, sides: Vec<Side>) -> Result<CurveDiagram> {
        let d = CurveDiagram { n, points, sides };
        let v = d.structural_violations();
        if let Some(first) = v.first() {
            return Err(Error::InvalidDiagram(format!("{} at {:?}", first.invariant, first.indices)));
        }
        Ok(d)
    }

    pub fn from_word(w: &BraidWord) -> CurveDiagram {
        CurveDiagram::trivial(w.strands()).apply_word(w).expect("strand counts agree")
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn crossing_count(&self) -> usize {
        self.points.iter().filter(|p| p.is_crossing()).count()
    }

    pub fn is_trivial(&self) -> bool {
        *self == CurveDiagram::trivial(self.n)
    }

    /// Index of the first `Puncture` event.
    pub fn first_puncture(&self) -> usize {
        self.points.iter().position(|p| matches!(p, Point::Puncture(_))).expect("diagram has punctures")
    }

    /// Direction of travel at event `j`. Crossings take their direction from
    /// the surrounding arcs. A smooth curve passes a puncture horizontally, so
    /// when both arcs at a puncture lie in the same half-disk and leave towards
    /// the same side, the outer one has to wrap around: it leaves on the far
    /// side. In every other case the puncture is passed in the direction it was
    /// approached from (the alternative only moves a tangency across the
    /// puncture and leaves the labels unchanged, except at the first puncture
    /// where it decides whether the turn belongs to the restricted diagram).
    pub fn direction(&self, j: usize) -> Direction {
        match self.points[j] {
            Point::Start => Direction::Rightward,
            Point::Crossing { .. } => {
                if self.sides[j - 1] == Side::Lower {
                    Direction::Up
                } else {
                    Direction::Down
                }
            }
            Point::Puncture(_) => {
                let here = self.points[j].axis_key();
                let prev = self.points[j - 1].axis_key();
                let from_left = prev < here;
                if j + 1 == self.points.len() {
                    return if from_left { Direction::Rightward } else { Direction::Leftward };
                }
                let next = self.points[j + 1].axis_key();
                if self.sides[j - 1] != self.sides[j] {
                    // at the first puncture the free turn goes into the
                    // unrestricted prefix
                    let toward = if j == self.first_puncture() { next > here } else { from_left };
                    return if toward { Direction::Rightward } else { Direction::Leftward };
                }
                let rightward = match (from_left, next > here) {
                    (true, true) => true,
                    (false, false) => false,
                    // both ends to the left: rightward iff the outgoing arc is outer
                    (true, false) => next < prev,
                    // both to the right: rightward iff the incoming arc is outer
                    (false, true) => prev > next,
                };
                if rightward { Direction::Rightward } else { Direction::Leftward }
            }
        }
    }

    /// Number of crossings in each gap `0..=n`.
    pub fn gap_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.n + 1];
        for p in &self.points {
            if let Point::Crossing { gap, .. } = p {
                c[*gap] += 1;
            }
        }
        c
    }

    /// Event indices of each gap's crossings, left to right.
    pub fn gap_orders(&self) -> Vec<Vec<usize>> {
        let mut orders = vec![Vec::new(); self.n + 1];
        for (j, p) in self.points.iter().enumerate() {
            if let Point::Crossing { gap, .. } = p {
                orders[*gap].push(j);
            }
        }
        for o in orders.iter_mut() {
            o.sort_by_key(|&j| self.points[j].axis_key());
        }
        orders
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut v = self.structural_violations();
        if v.is_empty() {
            v.extend(self.reduction_violations());
        }
        v
    }

    pub fn is_reduced(&self) -> bool {
        self.validate().is_empty()
    }

    fn structural_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.n;
        if n < 2 {
            out.push(Violation::new("strand count", vec![n]));
            return out;
        }
        if self.sides.len() + 1 != self.points.len() {
            out.push(Violation::new("arc count", vec![self.sides.len(), self.points.len()]));
            return out;
        }
        if self.points.first() != Some(&Point::Start) {
            out.push(Violation::new("start", vec![0]));
        }
        if !matches!(self.points.last(), Some(Point::Puncture(_))) {
            out.push(Violation::new("end", vec![self.points.len().saturating_sub(1)]));
        }
        let mut seen = vec![0usize; n + 1];
        let mut ranks: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
        for (j, p) in self.points.iter().enumerate() {
            match *p {
                Point::Start if j != 0 => out.push(Violation::new("start", vec![j])),
                Point::Puncture(k) if k == 0 || k > n => out.push(Violation::new("puncture range", vec![j])),
                Point::Puncture(k) => seen[k] += 1,
                Point::Crossing { gap, rank } => {
                    if gap > n {
                        out.push(Violation::new("gap range", vec![j]));
                        continue;
                    }
                    ranks[gap].push(rank);
                    if j == 0 || j + 1 == self.points.len() {
                        out.push(Violation::new("crossing/arc compatibility", vec![j]));
                    } else if self.sides[j - 1] == self.sides[j] {
                        out.push(Violation::new("crossing/arc compatibility", vec![j - 1, j]));
                    }
                }
                Point::Start => {}
            }
        }
        for k in 1..=n {
            if seen[k] != 1 {
                out.push(Violation::new("puncture multiplicity", vec![k]));
            }
        }
        for (g, r) in ranks.iter_mut().enumerate() {
            r.sort_unstable();
            if r.iter().enumerate().any(|(idx, &x)| x != idx + 1) {
                out.push(Violation::new("gap order", vec![g]));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for side in [Side::Upper, Side::Lower] {
            if let Some((a, b)) = self.find_interleaved(side) {
                out.push(Violation::new("embeddedness", vec![a, b]));
            }
        }
        out
    }

    /// Two interleaved arcs on one side, if any.
    fn find_interleaved(&self, side: Side) -> Option<(usize, usize)> {
        let chords: Vec<(usize, (i64, i64), (i64, i64))> = (0..self.sides.len())
            .filter(|&j| self.sides[j] == side)
            .map(|j| {
                let (a, b) = (self.points[j].axis_key(), self.points[j + 1].axis_key());
                (j, a.min(b), a.max(b))
            })
            .collect();
        // sweep: closings before openings at a shared point, inner arcs first
        let mut events: Vec<((i64, i64), u8, (i64, i64), usize)> = Vec::new();
        for &(j, l, r) in &chords {
            events.push((l, 1, r, j));
            events.push((r, 0, l, j));
        }
        // descending far end: inner closes first, outer opens first
        events.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)).then(y.2.cmp(&x.2)));
        let mut stack: Vec<usize> = Vec::new();
        for (_, kind, _, j) in events {
            if kind == 1 {
                stack.push(j);
            } else {
                match stack.pop() {
                    Some(top) if top == j => {}
                    Some(top) => return Some((top, j)),
                    None => return Some((j, j)),
                }
            }
        }
        None
    }

    fn reduction_violations(&self) -> Vec<Violation> {
        let mut order: Vec<usize> = (0..self.points.len()).collect();
        order.sort_by_key(|&j| self.points[j].axis_key());
        let mut axis_rank = vec![0usize; self.points.len()];
        for (r, &j) in order.iter().enumerate() {
            axis_rank[j] = r;
        }
        let mut out = Vec::new();
        for j in 0..self.sides.len() {
            let (a, b) = (axis_rank[j], axis_rank[j + 1]);
            if a.abs_diff(b) != 1 {
                continue;
            }
            let (p, q) = (self.points[j], self.points[j + 1]);
            if p.is_crossing() || q.is_crossing() {
                out.push(Violation::new("reduced", vec![j, j + 1]));
            } else if self.sides[j] == Side::Lower {
                out.push(Violation::new("push-up", vec![j, j + 1]));
            }
        }
        out
    }

    /// The reduced diagram obtained by deleting empty bigons.
    pub fn reduce(&self) -> CurveDiagram {
        Raw::from_diagram(self).reduce(&mut FirstChoice)
    }

    /// Like [`reduce`](Self::reduce) but deletes bigons in a random order.
    pub fn reduce_random<R: Rng>(&self, rng: &mut R) -> CurveDiagram {
        Raw::from_diagram(self).reduce(&mut RandomChoice(rng))
    }

    /// Action of `σ_i^{±1}` (right action), by surgery on the round disk
    /// around punctures `i`, `i+1`.
    pub fn apply_letter(&self, letter: Letter) -> Result<CurveDiagram> {
        Ok(self.twist(letter)?.reduce(&mut FirstChoice))
    }

    /// The action of `w` without deleting any bigons: the curve keeps every
    /// axis crossing the surgery creates.
    pub fn apply_word_unreduced(&self, w: &BraidWord) -> Result<CurveDiagram> {
        if w.strands() != self.n {
            return Err(Error::StrandMismatch(self.n, w.strands()));
        }
        let mut d = self.clone();
        for &l in w.letters() {
            d = d.twist(l)?.settle(&mut FirstChoice, false);
        }
        Ok(d)
    }

    fn twist(&self, letter: Letter) -> Result<Raw> {
        let i = letter.index;
        if i == 0 || i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, strands: self.n });
        }
        let clockwise = letter.positive == POSITIVE_TWIST_IS_CLOCKWISE;
        let counts = self.gap_counts();
        let inside = |p: Point| match p {
            Point::Puncture(k) => k == i || k == i + 1,
            Point::Crossing { gap, .. } => gap == i,
            Point::Start => false,
        };
        let rotate = |p: Point| -> RawPoint {
            match p {
                Point::Puncture(k) if k == i => RawPoint::Puncture(i + 1),
                Point::Puncture(_) => RawPoint::Puncture(i),
                Point::Crossing { gap, rank } => {
                    RawPoint::Crossing { gap, key: (counts[gap] + 1 - rank) as i64 }
                }
                Point::Start => unreachable!("start is never inside a support disk"),
            }
        };
        // Connectors: arcs with exactly one endpoint inside. Each picks up one
        // new crossing just outside the support disk.
        struct Connector {
            arc: usize,
            inner: (i64, i64),
            outer: (i64, i64),
            gap: usize,
        }
        let mut connectors = Vec::new();
        for j in 0..self.sides.len() {
            let (a, b) = (self.points[j], self.points[j + 1]);
            let (ia, ib) = (inside(a), inside(b));
            if ia == ib {
                continue;
            }
            let (inner, outer) = if ia { (a, b) } else { (b, a) };
            let to_left = match self.sides[j] {
                Side::Upper => !clockwise,
                Side::Lower => clockwise,
            };
            connectors.push(Connector {
                arc: j,
                inner: inner.axis_key(),
                outer: outer.axis_key(),
                gap: if to_left { i - 1 } else { i + 1 },
            });
        }
        // Order along the support circle from its left to its right end.
        let boundary_order = |x: &Connector, y: &Connector| -> Ordering {
            let side = |c: &Connector| (c.outer > c.inner) as u8;
            x.inner.cmp(&y.inner).then(side(x).cmp(&side(y))).then(y.outer.cmp(&x.outer))
        };
        let mut new_key = vec![0i64; self.sides.len()];
        for (gap, left_side) in [(i - 1, true), (i + 1, false)] {
            let mut group: Vec<&Connector> = connectors.iter().filter(|c| c.gap == gap).collect();
            group.sort_by(|x, y| boundary_order(x, y));
            let m = group.len() as i64;
            for (idx, c) in group.iter().enumerate() {
                new_key[c.arc] = if left_side { counts[gap] as i64 + 1 + idx as i64 } else { idx as i64 - m };
            }
        }
        let conn_gap: std::collections::HashMap<usize, usize> =
            connectors.iter().map(|c| (c.arc, c.gap)).collect();

        let map = |p: Point| if inside(p) { rotate(p) } else { RawPoint::from(p) };
        let mut points = vec![map(self.points[0])];
        let mut sides = Vec::with_capacity(self.sides.len() + connectors.len());
        for j in 0..self.sides.len() {
            let (a, b, s) = (self.points[j], self.points[j + 1], self.sides[j]);
            match (inside(a), inside(b)) {
                (false, false) => sides.push(s),
                (true, true) => sides.push(s.flip()),
                (false, true) => {
                    sides.push(s);
                    points.push(RawPoint::Crossing { gap: conn_gap[&j], key: new_key[j] });
                    sides.push(s.flip());
                }
                (true, false) => {
                    sides.push(s.flip());
                    points.push(RawPoint::Crossing { gap: conn_gap[&j], key: new_key[j] });
                    sides.push(s);
                }
            }
            points.push(map(b));
        }
        Ok(Raw { n: self.n, points, sides })
    }

    /// Letterwise right action.
    pub fn apply_word(&self, w: &BraidWord) -> Result<CurveDiagram> {
        if w.strands() != self.n {
            return Err(Error::StrandMismatch(self.n, w.strands()));
        }
        let mut d = self.clone();
        for &l in w.letters() {
            d = d.apply_letter(l)?;
        }
        Ok(d)
    }

    /// Reflection in the horizontal axis.
    pub fn mirror(&self) -> CurveDiagram {
        let d = CurveDiagram {
            n: self.n,
            points: self.points.clone(),
            sides: self.sides.iter().map(|s| s.flip()).collect(),
        };
        d.reduce()
    }

    pub fn equals(&self, other: &CurveDiagram) -> Result<bool> {
        if !self.is_reduced() || !other.is_reduced() {
            return Err(Error::Unreduced);
        }
        Ok(self == other)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DiagramJson::from(self)).expect("diagram serializes")
    }

    pub fn from_json(text: &str) -> Result<CurveDiagram> {
        let j: DiagramJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidDiagram(e.to_string()))?;
        j.try_into()
    }
}

// ---------------------------------------------------------------------------
// Reduction on a linked representation.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RawPoint {
    Start,
    Puncture(usize),
    Crossing { gap: usize, key: i64 },
}

impl From<Point> for RawPoint {
    fn from(p: Point) -> Self {
        match p {
            Point::Start => RawPoint::Start,
            Point::Puncture(k) => RawPoint::Puncture(k),
            Point::Crossing { gap, rank } => RawPoint::Crossing { gap, key: rank as i64 },
        }
    }
}

impl RawPoint {
    fn axis_key(self) -> (i64, i64) {
        match self {
            RawPoint::Start => (-1, 0),
            RawPoint::Puncture(k) => (2 * k as i64 - 1, 0),
            RawPoint::Crossing { gap, key } => (2 * gap as i64, key),
        }
    }

    fn is_crossing(self) -> bool {
        matches!(self, RawPoint::Crossing { .. })
    }
}

struct Raw {
    n: usize,
    points: Vec<RawPoint>,
    sides: Vec<Side>,
}

trait Chooser {
    fn pick(&mut self, len: usize) -> usize;
}

struct FirstChoice;

impl Chooser for FirstChoice {
    fn pick(&mut self, len: usize) -> usize {
        len - 1
    }
}

struct RandomChoice<'a, R: Rng>(&'a mut R);

impl<R: Rng> Chooser for RandomChoice<'_, R> {
    fn pick(&mut self, len: usize) -> usize {
        self.0.gen_range(0..len)
    }
}

const NONE: usize = usize::MAX;

impl Raw {
    fn from_diagram(d: &CurveDiagram) -> Raw {
        Raw { n: d.n, points: d.points.iter().map(|&p| p.into()).collect(), sides: d.sides.clone() }
    }

    fn reduce(self, chooser: &mut dyn Chooser) -> CurveDiagram {
        self.settle(chooser, true)
    }

    /// Deletes bigons (when `reduce`) and renumbers crossing ranks.
    fn settle(self, chooser: &mut dyn Chooser, reduce: bool) -> CurveDiagram {
        let m = self.points.len();
        let mut next: Vec<usize> = (1..=m).map(|j| if j < m { j } else { NONE }).collect();
        let mut prev: Vec<usize> = (0..m).map(|j| if j == 0 { NONE } else { j - 1 }).collect();
        let mut side: Vec<Side> = self.sides.clone();
        side.push(Side::Upper);
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&j| self.points[j].axis_key());
        let mut ax_next = vec![NONE; m];
        let mut ax_prev = vec![NONE; m];
        for w in order.windows(2) {
            ax_next[w[0]] = w[1];
            ax_prev[w[1]] = w[0];
        }
        let mut alive = vec![true; m];
        let mut work: Vec<usize> = if reduce { (0..m).collect() } else { Vec::new() };
        let pts = &self.points;

        let unlink_axis = |e: usize, ax_next: &mut Vec<usize>, ax_prev: &mut Vec<usize>| {
            let (p, q) = (ax_prev[e], ax_next[e]);
            if p != NONE {
                ax_next[p] = q;
            }
            if q != NONE {
                ax_prev[q] = p;
            }
        };

        while !work.is_empty() {
            let idx = chooser.pick(work.len());
            let e = work.swap_remove(idx);
            if !alive[e] {
                continue;
            }
            // the arcs at e: (prev[e], e) and (e, next[e])
            for u in [prev[e], e] {
                if u == NONE || !alive[u] {
                    continue;
                }
                let v = next[u];
                if v == NONE {
                    continue;
                }
                if ax_next[u] != v && ax_prev[u] != v {
                    continue;
                }
                let (cu, cv) = (pts[u].is_crossing(), pts[v].is_crossing());
                let removed: Vec<usize> = match (cu, cv) {
                    (false, false) => {
                        side[u] = Side::Upper;
                        continue;
                    }
                    (true, true) => {
                        let (x, y) = (prev[u], next[v]);
                        next[x] = y;
                        prev[y] = x;
                        work.push(x);
                        work.push(y);
                        vec![u, v]
                    }
                    (false, true) => {
                        let y = next[v];
                        side[u] = side[v];
                        next[u] = y;
                        prev[y] = u;
                        work.push(u);
                        work.push(y);
                        vec![v]
                    }
                    (true, false) => {
                        let x = prev[u];
                        next[x] = v;
                        prev[v] = x;
                        work.push(x);
                        work.push(v);
                        vec![u]
                    }
                };
                for &r in &removed {
                    alive[r] = false;
                }
                for &r in &removed {
                    let (p, q) = (ax_prev[r], ax_next[r]);
                    unlink_axis(r, &mut ax_next, &mut ax_prev);
                    for t in [p, q] {
                        if t != NONE && alive[t] {
                            work.push(t);
                        }
                    }
                }
                break;
            }
        }

        // collect along the curve, renumbering ranks densely per gap
        let mut seq = Vec::new();
        let mut sides = Vec::new();
        let mut e = 0;
        while e != NONE {
            seq.push(e);
            if next[e] != NONE {
                sides.push(side[e]);
            }
            e = next[e];
        }
        let mut crossings: Vec<usize> = seq.iter().copied().filter(|&j| pts[j].is_crossing()).collect();
        crossings.sort_by_key(|&j| pts[j].axis_key());
        let mut rank_of = std::collections::HashMap::new();
        let mut last_gap = usize::MAX;
        let mut r = 0;
        for &j in &crossings {
            let RawPoint::Crossing { gap, .. } = pts[j] else { unreachable!() };
            if gap != last_gap {
                last_gap = gap;
                r = 0;
            }
            r += 1;
            rank_of.insert(j, r);
        }
        let points = seq
            .iter()
            .map(|&j| match pts[j] {
                RawPoint::Start => Point::Start,
                RawPoint::Puncture(k) => Point::Puncture(k),
                RawPoint::Crossing { gap, .. } => Point::Crossing { gap, rank: rank_of[&j] },
            })
            .collect();
        CurveDiagram { n: self.n, points, sides }
    }
}

// ---------------------------------------------------------------------------
// JSON form.

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub puncture: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rank: Option<usize>,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub n: usize,
    pub events: Vec<EventJson>,
    pub sides: Vec<Side>,
}

impl From<&CurveDiagram> for DiagramJson {
    fn from(d: &CurveDiagram) -> Self {
        let events = d
            .points
            .iter()
            .enumerate()
            .map(|(j, p)| {
                let direction = d.direction(j);
                match *p {
                    Point::Start => EventJson { kind: "start".into(), gap: None, puncture: None, rank: None, direction },
                    Point::Puncture(k) => {
                        EventJson { kind: "puncture".into(), gap: None, puncture: Some(k), rank: None, direction }
                    }
                    Point::Crossing { gap, rank } => EventJson {
                        kind: "crossing".into(),
                        gap: Some(gap),
                        puncture: None,
                        rank: Some(rank),
                        direction,
                    },
                }
            })
            .collect();
        DiagramJson { n: d.n, events, sides: d.sides.clone() }
    }
}

impl TryFrom<DiagramJson> for CurveDiagram {
    type Error = Error;

    fn try_from(j: DiagramJson) -> Result<CurveDiagram> {
        let bad = |m: &str| Error::InvalidDiagram(m.to_string());
        let points = j
            .events
            .iter()
            .map(|e| match e.kind.as_str() {
                "start" => Ok(Point::Start),
                "puncture" => e.puncture.map(Point::Puncture).ok_or_else(|| bad("puncture without index")),
                "crossing" => match (e.gap, e.rank) {
                    (Some(gap), Some(rank)) => Ok(Point::Crossing { gap, rank }),
                    _ => Err(bad("crossing without gap or rank")),
                },
                other => Err(bad(&format!("unknown event kind {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let d = CurveDiagram::from_parts(j.n, points, j.sides)?;
        for (k, e) in j.events.iter().enumerate() {
            if d.direction(k) != e.direction {
                return Err(bad(&format!("direction mismatch at event {k}")));
            }
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn word(s: &str, n: usize) -> BraidWord {
        BraidWord::parse(s, n).unwrap()
    }

    #[test]
    fn trivial_examples() {
        let d = CurveDiagram::trivial(3);
        assert_eq!(d.points().len(), 4);
        assert!(d.sides().iter().all(|&s| s == Side::Upper));
        assert_eq!(d.crossing_count(), 0);
        for n in 2..=8 {
            assert!(CurveDiagram::trivial(n).validate().is_empty());
        }
    }

    #[test]
    fn validate_negative_cases() {
        use Point::*;
        // the upper arcs Start-P2 and P1-P3 interleave
        let points = vec![Start, Puncture(2), Crossing { gap: 0, rank: 1 }, Puncture(1), Puncture(3)];
        let sides = vec![Side::Upper, Side::Lower, Side::Upper, Side::Upper];
        let d = CurveDiagram::from_parts_unchecked(3, points, sides);
        let v = d.validate();
        assert!(v.iter().any(|x| x.invariant == "embeddedness"), "{v:?}");

        // up crossing preceded by an upper arc
        let points = vec![Start, Crossing { gap: 1, rank: 1 }, Puncture(1), Puncture(2), Puncture(3)];
        let sides = vec![Side::Upper, Side::Upper, Side::Upper, Side::Upper];
        let d = CurveDiagram::from_parts_unchecked(3, points, sides);
        assert!(d.validate().iter().any(|x| x.invariant == "crossing/arc compatibility"));
    }

    #[test]
    fn reduce_removes_single_bigon() {
        use Point::*;
        // trivial diagram with an extra down/up pair in gap 1
        let points = vec![
            Start,
            Puncture(1),
            Crossing { gap: 1, rank: 1 },
            Crossing { gap: 1, rank: 2 },
            Puncture(2),
            Puncture(3),
        ];
        let sides = vec![Side::Upper, Side::Upper, Side::Lower, Side::Upper, Side::Upper];
        let d = CurveDiagram::from_parts(3, points, sides).unwrap();
        assert!(!d.is_reduced());
        assert!(d.reduce().is_trivial());
        let t = CurveDiagram::trivial(3);
        assert_eq!(t.reduce(), t);
    }

    #[test]
    fn letter_then_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.gen_range(2..6);
            let d = CurveDiagram::from_word(&BraidWord::random_with(n, 8, &mut rng));
            let i = rng.gen_range(1..n);
            for l in [Letter::pos(i), Letter::neg(i)] {
                let back = d.apply_letter(l).unwrap().apply_letter(l.inverse()).unwrap();
                assert_eq!(back, d);
            }
        }
    }

    #[test]
    fn word_times_inverse_is_trivial() {
        let w = word("s1 s2^-1 s3 s3 s1^-1 s2", 4);
        let d = CurveDiagram::trivial(4).apply_word(&w.concat(&w.inverse())).unwrap();
        assert!(d.is_trivial());
        assert_eq!(CurveDiagram::trivial(4).apply_word(&BraidWord::identity(4)).unwrap(), CurveDiagram::trivial(4));
        assert!(CurveDiagram::trivial(4).apply_word(&w).unwrap().is_reduced());
    }

    #[test]
    fn braid_relations_on_random_diagrams() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let d = CurveDiagram::from_word(&BraidWord::random_with(3, 10, &mut rng));
            let a = d.apply_word(&word("s1 s2 s1", 3)).unwrap();
            let b = d.apply_word(&word("s2 s1 s2", 3)).unwrap();
            assert!(a.equals(&b).unwrap());
        }
    }

    #[test]
    fn mirror_is_involution() {
        let d = CurveDiagram::from_word(&word("s1 s2^-1 s1 s2^-1", 3));
        assert_eq!(d.mirror().mirror(), d);
        assert!(d.equals(&d).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let d = CurveDiagram::from_word(&word("s1 s2^-1 s1 s2^-1", 3));
        let text = d.to_json();
        let back = CurveDiagram::from_json(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_json(), text);
    }
}
