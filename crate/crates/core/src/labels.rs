//! Winding-number labels.
//!
//! The tangent direction of the curve is measured as `angle / -π`, so that a
//! clockwise turn increases it, and lifted continuously from 0 at the start
//! point. Rounding the lift to the nearest integer labels the pieces of the
//! curve between vertical tangencies. All lifts are kept doubled so that they
//! are integers: even at punctures, odd at axis crossings.

use serde::{Deserialize, Serialize};

use crate::diagram::{CurveDiagram, Direction, Point, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Full,
    Restricted,
}

/// Where a vertical tangency sits: at an event, or strictly inside the arc
/// that starts at the given event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Place {
    Event(usize),
    Arc(usize),
}

impl Place {
    /// Event `j` is at `j`, the interior of arc `j` at `j + 0.5`.
    pub fn position(self) -> f64 {
        match self {
            Place::Event(j) => j as f64,
            Place::Arc(j) => j as f64 + 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tangency {
    pub place: Place,
    pub gap: usize,
    /// Event whose axis point the tangency hugs.
    pub near: usize,
    pub before: i64,
    pub after: i64,
}

impl Tangency {
    /// A rightmost turn: the curve was travelling rightwards before it.
    pub fn is_maximum(&self) -> bool {
        self.before.rem_euclid(2) == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub label: i64,
    pub from: f64,
    pub to: f64,
    /// Gap holding the left extremity; `None` when that end is an end of the curve.
    pub left_gap: Option<usize>,
    pub right_gap: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelTrace {
    /// Lifted direction at each event (half-integers).
    pub tilde: Vec<f64>,
    pub segments: Vec<Segment>,
    #[serde(skip)]
    doubled: Vec<i64>,
    #[serde(skip)]
    tangencies: Vec<Tangency>,
    /// Labels just after the start and just before the end of each arc.
    #[serde(skip)]
    arc_labels: Vec<(i64, i64)>,
    #[serde(skip)]
    first_puncture: usize,
}

/// Departure value for an arc in the upper half (doubled).
fn departure(d: Direction) -> i64 {
    match d {
        Direction::Rightward => 0,
        Direction::Up => -1,
        Direction::Leftward => -2,
        Direction::Down => unreachable!("upper arcs never leave downwards"),
    }
}

/// Doubled turning of an upper arc from axis position `a` to `b`, leaving in
/// direction `dep` and arriving in direction `arr`. Between the two ends the
/// tangent passes through horizontal-rightward (`a < b`) or leftward (`a > b`).
pub fn upper_turn(a_left_of_b: bool, dep: Direction, arr: Direction) -> i64 {
    let arrive = match (a_left_of_b, arr) {
        (true, Direction::Rightward) => 0,
        (true, Direction::Down) => 1,
        (true, Direction::Leftward) => 2,
        (false, Direction::Rightward) => -4,
        (false, Direction::Down) => -3,
        (false, Direction::Leftward) => -2,
        (_, Direction::Up) => unreachable!("upper arcs never arrive upwards"),
    };
    arrive - departure(dep)
}

fn flip_vertical(d: Direction) -> Direction {
    match d {
        Direction::Up => Direction::Down,
        Direction::Down => Direction::Up,
        other => other,
    }
}

/// Doubled turning of arc `j` of `d`.
pub fn arc_turn(d: &CurveDiagram, j: usize) -> i64 {
    let (p, q) = (d.points()[j], d.points()[j + 1]);
    let side = d.sides()[j];
    let dep = match p {
        Point::Crossing { .. } => if side == Side::Upper { Direction::Up } else { Direction::Down },
        _ => d.direction(j),
    };
    let arr = match q {
        Point::Crossing { .. } => if side == Side::Upper { Direction::Down } else { Direction::Up },
        _ => d.direction(j + 1),
    };
    let left = p.axis_key() < q.axis_key();
    match side {
        Side::Upper => upper_turn(left, dep, arr),
        Side::Lower => -upper_turn(left, flip_vertical(dep), flip_vertical(arr)),
    }
}

/// Label just after a point with doubled lift `t`, moving in direction `dir`.
fn label_after(t: i64, dir: i64) -> i64 {
    if t.rem_euclid(2) == 0 {
        t / 2
    } else if dir > 0 {
        (t + 1) / 2
    } else {
        (t - 1) / 2
    }
}

/// Gap just beyond point `p` on the given side.
fn gap_beyond(p: Point, rightwards: bool) -> usize {
    match p {
        Point::Start => 0,
        Point::Puncture(k) => if rightwards { k } else { k - 1 },
        Point::Crossing { gap, .. } => gap,
    }
}

pub fn label_trace(d: &CurveDiagram) -> LabelTrace {
    let pts = d.points();
    let m = pts.len();
    let mut doubled = vec![0i64; m];
    for j in 0..m - 1 {
        doubled[j + 1] = doubled[j] + arc_turn(d, j);
    }
    let mut tangencies = Vec::new();
    let mut arc_labels = Vec::with_capacity(m - 1);
    let mut cur = 0i64;
    for j in 0..m - 1 {
        let (t0, t1) = (doubled[j], doubled[j + 1]);
        let dir = (t1 - t0).signum();
        let start = label_after(t0, dir);
        if start != cur {
            let gap = gap_beyond(pts[j], true);
            tangencies.push(Tangency { place: Place::Event(j), gap, near: j, before: cur, after: start });
            cur = start;
        }
        let end = label_after(t1, -dir);
        while cur != end {
            let next = cur + (end - cur).signum();
            let max = cur.rem_euclid(2) == 0;
            let (l, r) = if pts[j].axis_key() < pts[j + 1].axis_key() { (j, j + 1) } else { (j + 1, j) };
            let near = if max { r } else { l };
            let gap = gap_beyond(pts[near], max);
            tangencies.push(Tangency { place: Place::Arc(j), gap, near, before: cur, after: next });
            cur = next;
        }
        arc_labels.push((start, end));
    }

    let mut segments = Vec::with_capacity(tangencies.len() + 1);
    let mut from: (f64, Option<usize>) = (0.0, None);
    let mut label = 0;
    for t in &tangencies {
        segments.push(make_segment(label, from, (t.place.position(), Some(t.gap))));
        from = (t.place.position(), Some(t.gap));
        label = t.after;
    }
    segments.push(make_segment(label, from, ((m - 1) as f64, None)));

    LabelTrace {
        tilde: doubled.iter().map(|&t| t as f64 / 2.0).collect(),
        segments,
        doubled,
        tangencies,
        arc_labels,
        first_puncture: d.first_puncture(),
    }
}

fn make_segment(label: i64, from: (f64, Option<usize>), to: (f64, Option<usize>)) -> Segment {
    let (left_gap, right_gap) = if label.rem_euclid(2) == 0 { (from.1, to.1) } else { (to.1, from.1) };
    Segment { label, from: from.0, to: to.0, left_gap, right_gap }
}

impl LabelTrace {
    pub fn doubled(&self) -> &[i64] {
        &self.doubled
    }

    pub fn tangencies(&self) -> &[Tangency] {
        &self.tangencies
    }

    pub fn arc_labels(&self) -> &[(i64, i64)] {
        &self.arc_labels
    }

    /// Segments meeting the image of the segment between the outermost punctures.
    pub fn restricted_segments(&self) -> impl Iterator<Item = &Segment> {
        let fp = self.first_puncture as f64;
        self.segments.iter().filter(move |s| s.to >= fp)
    }

    pub fn scoped_segments(&self, scope: Scope) -> Box<dyn Iterator<Item = &Segment> + '_> {
        match scope {
            Scope::Full => Box::new(self.segments.iter()),
            Scope::Restricted => Box::new(self.restricted_segments()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }
}

/// `(LL, SL)`: largest and smallest label in scope.
pub fn extreme_labels(d: &CurveDiagram, scope: Scope) -> (i64, i64) {
    let tr = label_trace(d);
    let mut it = tr.scoped_segments(scope).map(|s| s.label);
    let first = it.next().unwrap_or(0);
    it.fold((first, first), |(hi, lo), l| (hi.max(l), lo.min(l)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalArcStats {
    pub ll: i64,
    pub sl: i64,
    pub count_ll: usize,
    pub count_sl: usize,
    /// Counts leaving out the two end pieces of the restricted diagram, which
    /// do not run between two vertical tangencies.
    pub inner_count_ll: usize,
    pub inner_count_sl: usize,
    pub right_gaps_ll: Vec<Option<usize>>,
    pub left_gaps_ll: Vec<Option<usize>>,
    pub right_gaps_sl: Vec<Option<usize>>,
    pub left_gaps_sl: Vec<Option<usize>>,
}

impl ExtremalArcStats {
    /// Right extremity gaps of the `LL` segments are pairwise distinct.
    /// Segments running into an end of the curve have no tangency at one end
    /// and are left out.
    pub fn right_gaps_distinct(&self) -> bool {
        let mut g: Vec<usize> = self
            .right_gaps_ll
            .iter()
            .zip(&self.left_gaps_ll)
            .filter_map(|(r, l)| l.and(*r))
            .collect();
        let len = g.len();
        g.sort_unstable();
        g.dedup();
        g.len() == len
    }
}

pub fn extremal_arc_stats(d: &CurveDiagram) -> ExtremalArcStats {
    let tr = label_trace(d);
    let segs: Vec<&Segment> = tr.restricted_segments().collect();
    let ll = segs.iter().map(|s| s.label).max().unwrap_or(0);
    let sl = segs.iter().map(|s| s.label).min().unwrap_or(0);
    let pick = |l: i64| segs.iter().filter(move |s| s.label == l);
    let fp = tr.first_puncture as f64;
    let inner = |s: &Segment| s.from > fp && s.left_gap.is_some() && s.right_gap.is_some();
    ExtremalArcStats {
        ll,
        sl,
        count_ll: pick(ll).count(),
        count_sl: pick(sl).count(),
        inner_count_ll: pick(ll).filter(|s| inner(s)).count(),
        inner_count_sl: pick(sl).filter(|s| inner(s)).count(),
        right_gaps_ll: pick(ll).map(|s| s.right_gap).collect(),
        left_gaps_ll: pick(ll).map(|s| s.left_gap).collect(),
        right_gaps_sl: pick(sl).map(|s| s.right_gap).collect(),
        left_gaps_sl: pick(sl).map(|s| s.left_gap).collect(),
    }
}

// ---------------------------------------------------------------------------
// Round subdisks.

/// One component of the curve inside a round disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    /// First and last event inside the disk.
    pub first: usize,
    pub last: usize,
    /// Labels along the component, shifted so its ends carry 0 or 1.
    pub labels: Vec<i64>,
    /// Shifted labels at the entry and (if the curve leaves again) exit.
    pub entry: i64,
    pub exit: Option<i64>,
    /// For the component holding the end of the curve: the labels of its
    /// restricted part, read as a curve diagram of the disk.
    pub restricted: Option<Vec<i64>>,
    pub maxima: usize,
    pub minima: usize,
}

impl Component {
    pub fn extremes(&self) -> (i64, i64) {
        let ls = self.restricted.as_ref().unwrap_or(&self.labels);
        let hi = ls.iter().copied().max().unwrap_or(0);
        let lo = ls.iter().copied().min().unwrap_or(0);
        (hi, lo)
    }

    pub fn score(&self) -> i64 {
        let (hi, lo) = self.extremes();
        match self.exit {
            Some(b) => hi - lo - (b - self.entry).abs(),
            None => hi.max(0) - lo.min(0),
        }
    }

    pub fn is_untangled(&self) -> bool {
        self.maxima <= 1 && self.minima == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdiskLabels {
    pub components: Vec<Component>,
    pub ll: i64,
    pub sl: i64,
}

impl SubdiskLabels {
    /// `max(LL', 0) - min(SL', 0)`.
    pub fn span(&self) -> i64 {
        self.ll.max(0) - self.sl.min(0)
    }

    pub fn is_untangled(&self) -> bool {
        self.components.iter().all(Component::is_untangled)
    }
}

/// The round disk around punctures `i..=j`. A disk reaching the last puncture
/// is taken to touch the boundary point `+1`, so it also holds gap `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundDisk {
    pub i: usize,
    pub j: usize,
    pub n: usize,
    /// The last puncture is a stand-in for the boundary point `+1`: the
    /// curve's end there is an exit from the disk, not a puncture.
    pub open_end: bool,
    /// Where the boundary cuts the gaps just outside the punctures: crossings
    /// of gap `i - 1` with rank above `left_cut` are inside, and crossings of
    /// gap `j` with rank at most `right_cut`.
    pub left_cut: usize,
    pub right_cut: usize,
}

impl RoundDisk {
    pub fn new(i: usize, j: usize, n: usize) -> Self {
        assert!(1 <= i && i < j && j <= n, "bad round disk {i}..{j} in {n}");
        RoundDisk { i, j, n, open_end: false, left_cut: usize::MAX, right_cut: 0 }
    }

    /// The disk on punctures `i..=n` whose puncture `n` stands for `+1`.
    pub fn open(i: usize, n: usize) -> Self {
        RoundDisk { open_end: true, ..RoundDisk::new(i, n, n) }
    }

    pub fn contains(&self, p: Point) -> bool {
        match p {
            Point::Start => false,
            Point::Puncture(k) => self.i <= k && k <= self.j,
            Point::Crossing { gap, rank } => {
                (self.i <= gap && gap < self.j)
                    || (self.j == self.n && gap == self.n)
                    || (gap + 1 == self.i && rank > self.left_cut)
                    || (gap == self.j && rank <= self.right_cut)
            }
        }
    }
}

pub fn subdisk_labels(d: &CurveDiagram, i: usize, j: usize) -> SubdiskLabels {
    let tr = label_trace(d);
    subdisk_from_trace(d, &tr, RoundDisk::new(i, j, d.strands()))
}

/// Maximal runs of consecutive events inside the disk.
pub fn components(d: &CurveDiagram, disk: RoundDisk) -> Vec<(usize, usize)> {
    let pts = d.points();
    let mut out = Vec::new();
    let mut k = 0;
    while k < pts.len() {
        if !disk.contains(pts[k]) {
            k += 1;
            continue;
        }
        let s = k;
        while k + 1 < pts.len() && disk.contains(pts[k + 1]) {
            k += 1;
        }
        out.push((s, k));
        k += 1;
    }
    out
}

/// The component ending the curve, entered from the left, as a curve diagram
/// on the disk's punctures.
fn tail_diagram(d: &CurveDiagram, disk: RoundDisk, s: usize) -> Option<CurveDiagram> {
    let pts = d.points();
    if pts[s - 1].axis_key() > pts[s].axis_key() {
        return None;
    }
    let shift = disk.i - 1;
    let mut points = vec![Point::Start];
    for p in &pts[s..] {
        points.push(match *p {
            Point::Puncture(k) => Point::Puncture(k - shift),
            Point::Crossing { gap, rank } => Point::Crossing { gap: gap - shift, rank },
            Point::Start => unreachable!(),
        });
    }
    let sides = d.sides()[s - 1..].to_vec();
    let n = disk.j - disk.i + 1;
    // ranks are renumbered by the reduction pass
    let mut counts = vec![0usize; n + 1];
    let mut fixed = points.clone();
    let mut order: Vec<usize> = (1..fixed.len()).filter(|&k| fixed[k].is_crossing()).collect();
    order.sort_by_key(|&k| fixed[k].axis_key());
    for k in order {
        if let Point::Crossing { gap, .. } = fixed[k] {
            counts[gap] += 1;
            fixed[k] = Point::Crossing { gap, rank: counts[gap] };
        }
    }
    let sub = CurveDiagram::from_parts(n, fixed, sides).ok()?;
    Some(sub.reduce())
}

pub fn subdisk_from_trace(d: &CurveDiagram, tr: &LabelTrace, disk: RoundDisk) -> SubdiskLabels {
    let pts = d.points();
    let m = pts.len();
    let inside = |t: &Tangency| disk.contains(pts[t.near]);
    let mut by_arc: Vec<Vec<&Tangency>> = vec![Vec::new(); m];
    let mut at_event: Vec<Option<&Tangency>> = vec![None; m];
    for t in tr.tangencies() {
        match t.place {
            Place::Arc(a) => by_arc[a].push(t),
            Place::Event(e) => at_event[e] = Some(t),
        }
    }

    let mut out = Vec::new();
    for (s, e) in components(d, disk) {
        let mut labels = Vec::new();
        let (mut maxima, mut minima) = (0, 0);
        let mut take = |t: &Tangency, labels: &mut Vec<i64>| {
            if t.is_maximum() {
                maxima += 1
            } else {
                minima += 1
            }
            labels.push(t.after);
        };
        // entry arc: whatever follows its last tangency outside the disk
        let (ls, _) = tr.arc_labels()[s - 1];
        let tans = &by_arc[s - 1];
        let cut = tans.iter().rposition(|t| !inside(t)).map_or(0, |x| x + 1);
        let entry = if cut > 0 { tans[cut - 1].after } else { ls };
        labels.push(entry);
        for t in &tans[cut..] {
            take(t, &mut labels);
        }
        for a in s..=e {
            if let Some(t) = at_event[a] {
                take(t, &mut labels);
            }
            if a == e {
                break;
            }
            labels.push(tr.arc_labels()[a].0);
            for t in &by_arc[a] {
                take(t, &mut labels);
            }
        }
        let exit = if e + 1 < m {
            labels.push(tr.arc_labels()[e].0);
            for t in by_arc[e].iter().take_while(|t| inside(t)) {
                take(t, &mut labels);
            }
            Some(*labels.last().unwrap())
        } else if disk.open_end {
            Some(*labels.last().unwrap())
        } else {
            None
        };
        let shift = match exit {
            Some(b) => -entry.min(b),
            None => -entry,
        };
        let restricted = if exit.is_none() {
            Some(match tail_diagram(d, disk, s) {
                Some(sub) => label_trace(&sub).restricted_segments().map(|g| g.label).collect(),
                None => labels.iter().map(|l| l + shift).collect(),
            })
        } else {
            None
        };
        out.push(Component {
            first: s,
            last: e,
            labels: labels.iter().map(|l| l + shift).collect(),
            entry: entry + shift,
            exit: exit.map(|b| b + shift),
            restricted,
            maxima,
            minima,
        });
    }
    let ll = out.iter().map(|c| c.extremes().0).max().unwrap_or(0);
    let sl = out.iter().map(|c| c.extremes().1).min().unwrap_or(0);
    SubdiskLabels { components: out, ll, sl }
}

/// Labels of the disk on punctures `i..=n` of `d`, whose last puncture stands
/// for the boundary point `+1`.
pub fn open_disk_labels(d: &CurveDiagram, i: usize) -> SubdiskLabels {
    let tr = label_trace(d);
    subdisk_from_trace(d, &tr, RoundDisk::open(i, d.strands()))
}

/// Largest normalized spread over the arcs inside the round disk `i..=j`,
/// its boundary placed to meet the curve as few times as possible.
pub fn tangledness(d: &CurveDiagram, i: usize, j: usize) -> i64 {
    let tr = label_trace(d);
    let counts = d.gap_counts();
    let n = d.strands();
    let base = RoundDisk::new(i, j, n);
    let lefts = 0..=counts[i - 1];
    let rights = if j == n { 0..=0 } else { 0..=counts[j] };
    let mut best: Option<(usize, i64)> = None;
    for l in lefts {
        for r in rights.clone() {
            let disk = RoundDisk { left_cut: l, right_cut: r, ..base };
            let key = (components(d, disk).len(), score(&subdisk_from_trace(d, &tr, disk)));
            if best.map_or(true, |b| key < b) {
                best = Some(key);
            }
        }
    }
    best.map_or(0, |b| b.1)
}

fn score(l: &SubdiskLabels) -> i64 {
    l.components.iter().map(Component::score).max().unwrap_or(0).max(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::garside::inf_sup;
    use crate::word::BraidWord;

    fn diagram(s: &str, n: usize) -> CurveDiagram {
        CurveDiagram::from_word(&BraidWord::parse(s, n).unwrap())
    }

    #[test]
    fn trivial_has_one_segment() {
        let tr = label_trace(&CurveDiagram::trivial(3));
        assert_eq!(tr.segments.len(), 1);
        assert_eq!(tr.segments[0].label, 0);
        assert_eq!(extreme_labels(&CurveDiagram::trivial(4), Scope::Restricted), (0, 0));
    }

    #[test]
    fn figure_one_labels() {
        let d = diagram("s1 s2^-1 s1 s2^-1", 3);
        assert_eq!(extreme_labels(&d, Scope::Restricted), (2, -2));
        let st = extremal_arc_stats(&d);
        assert_eq!((st.count_ll, st.count_sl), (1, 1));
    }

    #[test]
    fn delta_is_labelled_one() {
        let d = diagram("D", 3);
        let tr = label_trace(&d);
        assert!(tr.restricted_segments().all(|s| s.label == 1));
    }

    #[test]
    fn labels_step_by_one_and_parity() {
        for s in ["s1 s2^-1 s1 s2^-1", "s1 s1 s2 s1^-1", "s2^-1 s1^-1 s2^-1 s2^-1"] {
            let d = diagram(s, 3);
            let tr = label_trace(&d);
            assert_eq!(tr.segments[0].label, 0);
            for w in tr.segments.windows(2) {
                assert_eq!((w[0].label - w[1].label).abs(), 1);
            }
            for (j, p) in d.points().iter().enumerate() {
                if matches!(p, Point::Puncture(_)) {
                    let even = tr.doubled()[j].rem_euclid(4) == 0;
                    assert_eq!(even, d.direction(j) == Direction::Rightward, "{s} at {j}");
                }
            }
        }
    }

    pub(crate) fn all_words(n: usize, max_len: usize) -> Vec<BraidWord> {
        let mut out = vec![BraidWord::identity(n)];
        let mut layer = out.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for i in 1..n {
                    for l in [crate::word::Letter::pos(i), crate::word::Letter::neg(i)] {
                        let mut v = w.clone();
                        v.push(l);
                        next.push(v);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn labels_equal_bounds_on_short_b3_words() {
        for w in all_words(3, 4) {
            let (inf, sup, _) = inf_sup(&w);
            let got = extreme_labels(&CurveDiagram::from_word(&w), Scope::Restricted);
            assert_eq!(got, (sup, inf), "{w}");
        }
    }

    #[test]
    fn subdisk_examples() {
        let t = CurveDiagram::trivial(4);
        let sd = subdisk_labels(&t, 2, 4);
        assert_eq!((sd.ll, sd.sl), (0, 0));
        assert_eq!(tangledness(&t, 1, 3), 0);
        let d = diagram("s2 s3 s2", 4);
        let sd = subdisk_labels(&d, 2, 4);
        assert_eq!((sd.ll, sd.sl), (1, 1));
        assert_eq!(tangledness(&diagram("s1", 3), 2, 3), 0);
        assert!(tangledness(&diagram("s2 s2", 3), 2, 3) > 0);
    }
}
