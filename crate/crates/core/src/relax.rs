//! Relaxation: the "below" order on punctures, the puncture dance that lowers
//! the largest label by one, geodesic factorizations and subdisk untangling.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::diagram::{CurveDiagram, Point, Side};
use crate::error::{Error, Result};
use crate::garside::{all_simples, inf_sup, Permutation};
use crate::labels::{extreme_labels, label_trace, open_disk_labels, subdisk_labels, Place, Scope, SubdiskLabels};
use crate::word::BraidWord;

/// Extra steps allowed beyond the label prediction before giving up.
pub const STEP_GUARD: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BelowOrder {
    pub n: usize,
    /// First and last puncture considered (1-based, inclusive).
    pub lo: usize,
    pub hi: usize,
    /// Pairs `(p, q)`: puncture `p` lies below puncture `q`. Not closed.
    pub relation: Vec<(usize, usize)>,
    /// Height rank of each considered puncture, 1 = lowest; indexed by `p - lo`.
    pub rank: Vec<usize>,
}

impl BelowOrder {
    /// Where the dance sends puncture `p`: the highest one ends up leftmost.
    pub fn target(&self, p: usize) -> usize {
        let m = self.hi - self.lo + 1;
        self.lo + m - self.rank[p - self.lo]
    }

    /// The dance as a simple element on the disk's strands: the strand that
    /// ends at position `k` started at the puncture sent to `k`.
    fn dance(&self) -> Permutation {
        let mut image = vec![0; self.hi - self.lo + 1];
        for p in self.lo..=self.hi {
            image[self.target(p) - self.lo] = p - self.lo;
        }
        Permutation::from_image(image).expect("ranks form a permutation")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Down,
    Up,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelaxationStep {
    pub kind: StepKind,
    /// The dance's permutation, as a simple element on the moved strands.
    pub permutation: Permutation,
    /// Artin expansion of the move: all negative for down, all positive for up.
    pub word: BraidWord,
}

/// Collects the raw relation: for every label segment, the punctures below,
/// above and on it.
fn raw_relation(d: &CurveDiagram, lo: usize, hi: usize) -> Vec<(usize, usize)> {
    let tr = label_trace(d);
    let pts = d.points();
    let sides = d.sides();
    let fp = d.first_puncture();
    let nseg = tr.segments.len();
    // (below, above, on) per segment
    let mut below = vec![Vec::new(); nseg];
    let mut above = vec![Vec::new(); nseg];
    let mut on = vec![Vec::new(); nseg];
    let in_range = |k: usize| (lo..=hi).contains(&k);
    let x = |p: Point| -> f64 {
        match p {
            Point::Start => -1.0,
            Point::Puncture(k) => 2.0 * k as f64 - 1.0,
            Point::Crossing { gap, .. } => 2.0 * gap as f64,
        }
    };

    let tans = tr.tangencies();
    let mut ti = 0;
    let mut seg = 0;
    for j in 0..pts.len() {
        while ti < tans.len() && tans[ti].place == Place::Event(j) {
            seg += 1;
            ti += 1;
        }
        if let Point::Puncture(k) = pts[j] {
            if j >= fp && in_range(k) {
                on[seg].push(k);
            }
        }
        if j + 1 == pts.len() {
            break;
        }
        // pieces of arc j, split by its interior tangencies
        let mut bound = x(pts[j]);
        loop {
            let (end, next_seg) = if ti < tans.len() && tans[ti].place == Place::Arc(j) {
                let t = &tans[ti];
                let beyond = if t.is_maximum() { 0.5 } else { -0.5 };
                ti += 1;
                (x(pts[t.near]) + beyond, true)
            } else {
                (x(pts[j + 1]), false)
            };
            if j >= fp {
                let (a, b) = if bound < end { (bound, end) } else { (end, bound) };
                for k in lo..=hi {
                    let xk = 2.0 * k as f64 - 1.0;
                    if a < xk && xk < b {
                        match sides[j] {
                            Side::Upper => below[seg].push(k),
                            Side::Lower => above[seg].push(k),
                        }
                    }
                }
            }
            bound = end;
            if next_seg {
                seg += 1;
            } else {
                break;
            }
        }
    }

    let mut rel = Vec::new();
    // Segments between a right turn and a left turn (a local maximum of the
    // label) must rise to the right once deformed; local minima must fall.
    // A missing turn at a curve end is taken as the opposite of the other.
    let rises = |s: usize| -> Option<bool> {
        let start = if s == 0 { None } else { Some(tans[s - 1].after > tans[s - 1].before) };
        let end = tans.get(s).map(|t| t.after > t.before);
        match (start, end) {
            (Some(a), Some(b)) if a != b => Some(a),
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(!b),
            _ => None,
        }
    };
    for s in 0..nseg {
        if let Some(up) = rises(s) {
            let mut ordered = on[s].clone();
            ordered.sort_unstable();
            for w in ordered.windows(2) {
                rel.push(if up { (w[0], w[1]) } else { (w[1], w[0]) });
            }
        }
        let lower = below[s].iter().map(|&p| (p, false)).chain(on[s].iter().map(|&p| (p, true)));
        for (p, p_on) in lower {
            let upper = above[s].iter().map(|&q| (q, false)).chain(on[s].iter().map(|&q| (q, true)));
            for (q, q_on) in upper {
                if p != q && !(p_on && q_on) {
                    rel.push((p, q));
                }
            }
        }
    }
    rel.sort_unstable();
    rel.dedup();
    rel
}

/// The "below" relation on punctures `lo..=hi`, with a deterministic linear
/// extension that prefers left-to-right order among incomparable punctures.
pub fn below_order(d: &CurveDiagram, lo: usize, hi: usize) -> Result<BelowOrder> {
    let n = d.strands();
    if lo == 0 || hi > n || lo > hi {
        return Err(Error::Precondition(format!("puncture range {lo}..={hi} outside 1..={n}")));
    }
    let relation = raw_relation(d, lo, hi);
    let m = hi - lo + 1;
    let mut closed = vec![vec![false; m]; m];
    for &(p, q) in &relation {
        closed[p - lo][q - lo] = true;
    }
    for k in 0..m {
        for a in 0..m {
            if closed[a][k] {
                for b in 0..m {
                    if closed[k][b] {
                        closed[a][b] = true;
                    }
                }
            }
        }
    }
    for a in 0..m {
        for b in a..m {
            if closed[a][b] && closed[b][a] {
                return Err(Error::CyclicOrder(a + lo, b + lo));
            }
        }
    }
    let mut rank = vec![0; m];
    let mut placed = 0;
    while placed < m {
        let next = (0..m)
            .find(|&a| rank[a] == 0 && (0..m).all(|b| !closed[b][a] || rank[b] != 0))
            .expect("acyclic relation has a minimal element");
        placed += 1;
        rank[next] = placed;
    }
    Ok(BelowOrder { n, lo, hi, relation, rank })
}

/// One down step on the whole diagram. Needs `LL > 0` and `SL ≥ 0`.
pub fn relax_step_down(d: &CurveDiagram) -> Result<(RelaxationStep, CurveDiagram)> {
    let (ll, sl) = extreme_labels(d, Scope::Restricted);
    if ll <= 0 || sl < 0 {
        return Err(Error::Precondition(format!("down step needs LL > 0 and SL >= 0, got ({ll}, {sl})")));
    }
    disk_step_down(d, 1, d.strands())
}

/// One up step on the whole diagram. Needs `SL < 0` and `LL ≤ 0`.
pub fn relax_step_up(d: &CurveDiagram) -> Result<(RelaxationStep, CurveDiagram)> {
    let (ll, sl) = extreme_labels(d, Scope::Restricted);
    if sl >= 0 || ll > 0 {
        return Err(Error::Precondition(format!("up step needs SL < 0 and LL <= 0, got ({ll}, {sl})")));
    }
    disk_step_up(d, 1, d.strands())
}

/// A down step driven by the punctures `lo..=hi` only, moving just their strands.
pub fn disk_step_down(d: &CurveDiagram, lo: usize, hi: usize) -> Result<(RelaxationStep, CurveDiagram)> {
    let order = below_order(d, lo, hi)?;
    let perm = order.dance();
    let word = perm.to_word().inverse().embed(d.strands(), lo - 1);
    let next = d.apply_word(&word)?;
    Ok((RelaxationStep { kind: StepKind::Down, permutation: perm, word }, next))
}

/// Mirror of [`disk_step_down`]: a positive simple on the strands `lo..=hi`.
pub fn disk_step_up(d: &CurveDiagram, lo: usize, hi: usize) -> Result<(RelaxationStep, CurveDiagram)> {
    let (down, _) = disk_step_down(&d.mirror(), lo, hi)?;
    let word = down.word.mirror();
    let next = d.apply_word(&word)?;
    // mirror(s^-1) is s read backwards
    let permutation = down.permutation.reversed();
    Ok((RelaxationStep { kind: StepKind::Up, permutation, word }, next))
}

/// A factor of a geodesic factorization: a simple element or its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub simple: Permutation,
    pub inverse: bool,
}

impl Factor {
    pub fn to_word(&self) -> BraidWord {
        let w = self.simple.to_word();
        if self.inverse {
            w.inverse()
        } else {
            w
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub strands: usize,
    pub factors: Vec<Factor>,
}

impl Factorization {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn to_word(&self) -> BraidWord {
        self.factors.iter().fold(BraidWord::identity(self.strands), |w, f| w.concat(&f.to_word()))
    }
}

/// Simple factors `s_1 … s_k` of a braid whose diagram has `SL ≥ 0`, read off
/// the down steps that relax it to the trivial diagram.
fn positive_factors(d: &CurveDiagram) -> Result<Vec<Permutation>> {
    let (ll, _) = extreme_labels(d, Scope::Restricted);
    let budget = ll.max(0) as usize + STEP_GUARD;
    let mut cur = d.clone();
    let mut steps = Vec::new();
    while !cur.is_trivial() {
        if steps.len() >= budget {
            return Err(Error::BudgetExceeded(budget));
        }
        let (step, next) = relax_step_down(&cur)?;
        steps.push(step.permutation);
        cur = next;
    }
    // d · s_1^-1 ⋯ s_k^-1 = 1, so the braid is s_k ⋯ s_1
    steps.reverse();
    Ok(steps)
}

/// A factorization into `max(sup,0) − min(inf,0)` simples and inverse simples.
pub fn geodesic_factorization(w: &BraidWord) -> Result<Factorization> {
    let n = w.strands();
    let (inf, sup, _) = inf_sup(w);
    let factors = if inf >= 0 {
        let d = CurveDiagram::from_word(w);
        positive_factors(&d)?.into_iter().map(|s| Factor { simple: s, inverse: false }).collect()
    } else if sup <= 0 {
        let mirrored = geodesic_factorization(&w.mirror())?;
        mirrored
            .factors
            .into_iter()
            // mirror(s) = reverse(s)^-1
            .map(|f| Factor { simple: f.simple.reversed(), inverse: !f.inverse })
            .collect()
    } else {
        let k = (-inf) as usize;
        let shifted = w.concat(&BraidWord::delta_power(n, -inf));
        let simples = positive_factors(&CurveDiagram::from_word(&shifted))?;
        let split = simples.len() - k;
        let mut out: Vec<Factor> =
            simples[..split].iter().map(|s| Factor { simple: s.clone(), inverse: false }).collect();
        // s_1 ⋯ s_k Δ^-k = ∏ τ^{j-1}(s_j) Δ^-1, and s Δ^-1 = τ(rc(s))^-1
        for (j, s) in simples[split..].iter().enumerate() {
            let mut t = s.clone();
            if j % 2 == 1 {
                t = t.tau();
            }
            out.push(Factor { simple: t.right_complement().tau(), inverse: true });
        }
        out
    };
    Ok(Factorization { strands: n, factors })
}

/// The braid whose action takes the trivial diagram to `d`.
pub fn braid_from_diagram(d: &CurveDiagram) -> Result<BraidWord> {
    let n = d.strands();
    let (ll, sl) = extreme_labels(d, Scope::Restricted);
    let budget = (ll.max(0) - sl.min(0)) as usize + STEP_GUARD;
    let mut motion = BraidWord::identity(n);
    let mut cur = d.clone();
    let mut steps = 0;
    while !cur.is_trivial() {
        if steps >= budget {
            return Err(Error::BudgetExceeded(budget));
        }
        let (ll, sl) = extreme_labels(&cur, Scope::Restricted);
        let word = if ll > 0 && sl >= 0 {
            steps += 1;
            relax_step_down(&cur)?.0.word
        } else if sl < 0 && ll <= 0 {
            steps += 1;
            relax_step_up(&cur)?.0.word
        } else if sl < 0 {
            BraidWord::delta_power(n, -sl)
        } else {
            return Err(Error::InvalidDiagram(format!("non-trivial diagram with labels ({ll}, {sl})")));
        };
        cur = cur.apply_word(&word)?;
        motion = motion.concat(&word);
    }
    Ok(motion.inverse())
}

/// Whether every component of the disk on punctures `i..=j` has at most one
/// rightmost turn and no leftmost turn.
pub fn is_completely_untangled(d: &CurveDiagram, i: usize, j: usize) -> bool {
    subdisk_labels(d, i, j).is_untangled()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Untangling {
    /// Applied word, on the disk's strands only.
    pub word: BraidWord,
    pub diagram: CurveDiagram,
    /// Number of dance steps (each a simple or inverse simple).
    pub steps: usize,
}

/// Relaxes the arc system inside the disk on punctures `i..=j` until it is
/// completely untangled.
pub fn untangle_subdisk(d: &CurveDiagram, i: usize, j: usize) -> Result<Untangling> {
    let n = d.strands();
    if i == 0 || j > n || i > j {
        return Err(Error::Precondition(format!("disk {i}..={j} outside 1..={n}")));
    }
    untangle_with(d, i, j, |c| subdisk_labels(c, i, j))
}

/// As [`untangle_subdisk`] for the disk on punctures `i..=n` whose last
/// puncture stands for the boundary point `+1`; that puncture never moves.
pub fn untangle_open_disk(d: &CurveDiagram, i: usize) -> Result<Untangling> {
    let n = d.strands();
    if i == 0 || i + 1 >= n {
        return Err(Error::Precondition(format!("open disk from {i} needs two punctures before {n}")));
    }
    untangle_with(d, i, n - 1, |c| open_disk_labels(c, i))
}

/// Surplus turns over all components: zero exactly when untangled.
fn surplus(l: &SubdiskLabels) -> usize {
    l.components.iter().map(|c| c.maxima.saturating_sub(1) + c.minima).sum()
}

/// The simple or inverse-simple move on strands `lo..=hi` that leads to an
/// unseen diagram with the least surplus, then the least span.
fn escape_move(
    d: &CurveDiagram,
    lo: usize,
    hi: usize,
    seen: &HashSet<CurveDiagram>,
    labels: &impl Fn(&CurveDiagram) -> SubdiskLabels,
) -> Result<(BraidWord, CurveDiagram)> {
    let mut best: Option<((usize, i64), BraidWord, CurveDiagram)> = None;
    for s in all_simples(hi - lo + 1).into_iter().filter(|s| !s.is_identity()) {
        let pos = s.to_word().embed(d.strands(), lo - 1);
        for word in [pos.inverse(), pos] {
            let next = d.apply_word(&word)?;
            if seen.contains(&next) {
                continue;
            }
            let l = labels(&next);
            let key = (surplus(&l), l.span());
            if best.as_ref().map_or(true, |(k, _, _)| key < *k) {
                best = Some((key, word, next));
            }
        }
    }
    best.map(|(_, w, n)| (w, n)).ok_or_else(|| Error::Precondition("no untangling move leads anywhere new".into()))
}

fn untangle_with(
    d: &CurveDiagram,
    lo: usize,
    hi: usize,
    labels: impl Fn(&CurveDiagram) -> SubdiskLabels,
) -> Result<Untangling> {
    // y + 1 steps usually suffice; a tightly wound component can need one
    // extra step per outer layer, hence the component allowance.
    let start = labels(d);
    let budget = start.span().max(0) as usize + 1 + start.components.len() + STEP_GUARD;
    let mut applied = BraidWord::identity(d.strands());
    let mut cur = d.clone();
    let mut current = start;
    let mut seen = HashSet::from([cur.clone()]);
    let mut steps = 0;
    while !current.is_untangled() {
        if steps >= budget {
            return Err(Error::BudgetExceeded(budget));
        }
        let preferred = if current.sl < 0 { disk_step_up(&cur, lo, hi)? } else { disk_step_down(&cur, lo, hi)? };
        let (word, next) = if seen.contains(&preferred.1) {
            // the dance went in a circle: take the best unseen simple move
            escape_move(&cur, lo, hi, &seen, &labels)?
        } else {
            (preferred.0.word, preferred.1)
        };
        applied = applied.concat(&word);
        cur = next;
        seen.insert(cur.clone());
        current = labels(&cur);
        steps += 1;
    }
    Ok(Untangling { word: applied, diagram: cur, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::garside::{equals, inf_sup};

    fn diagram(s: &str, n: usize) -> CurveDiagram {
        CurveDiagram::from_word(&BraidWord::parse(s, n).unwrap())
    }

    #[test]
    fn below_order_examples() {
        let t = below_order(&CurveDiagram::trivial(3), 1, 3).unwrap();
        assert!(t.relation.is_empty());
        assert_eq!(t.rank, vec![1, 2, 3]);

        let o = below_order(&diagram("s1", 3), 1, 3).unwrap();
        let related = |p, q| o.relation.contains(&(p, q)) || o.relation.contains(&(q, p));
        assert!(related(1, 2));
        // puncture 3 sits on the final segment with puncture 1, so only the
        // monotonic rule for on-segment punctures can relate it
        assert!(!o.relation.iter().any(|&(p, q)| (p, q) == (1, 3) || (p, q) == (2, 3)));
    }

    #[test]
    fn single_steps_reach_trivial() {
        for s in ["s1 s2 s1", "s1 s2"] {
            let (step, next) = relax_step_down(&diagram(s, 3)).unwrap();
            assert!(next.is_trivial(), "{s}");
            assert_eq!(step.kind, StepKind::Down);
            assert!(step.word.is_negative());
        }
        for s in ["s1^-1 s2^-1 s1^-1", "s1^-1 s2^-1"] {
            let (step, next) = relax_step_up(&diagram(s, 3)).unwrap();
            assert!(next.is_trivial(), "{s}");
            assert!(step.word.is_positive());
        }
        assert!(relax_step_down(&CurveDiagram::trivial(3)).is_err());
    }

    #[test]
    fn figure_braid_factorization() {
        let w = BraidWord::parse("s1 s2^-1 s1 s2^-1", 3).unwrap();
        let f = geodesic_factorization(&w).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.factors.iter().filter(|x| x.inverse).count(), 2);
        assert!(equals(&f.to_word(), &w).unwrap());
        assert!(geodesic_factorization(&BraidWord::identity(4)).unwrap().is_empty());
    }

    #[test]
    fn diagram_round_trips() {
        assert!(braid_from_diagram(&CurveDiagram::trivial(4)).unwrap().is_empty());
        let delta = BraidWord::delta(4);
        let back = braid_from_diagram(&CurveDiagram::from_word(&delta)).unwrap();
        assert!(equals(&back, &delta).unwrap());
    }

    #[test]
    fn untangling_examples() {
        let d = CurveDiagram::trivial(4);
        assert!(is_completely_untangled(&d, 2, 4));
        let u = untangle_subdisk(&d, 2, 4).unwrap();
        assert!(u.word.is_empty() && u.diagram == d);

        let d = diagram("s2 s2", 3);
        assert!(!is_completely_untangled(&d, 2, 3));
        let u = untangle_subdisk(&d, 2, 3).unwrap();
        assert!(!u.word.is_empty());
        assert!(u.word.letters().iter().all(|l| l.index == 2));
        assert!(is_completely_untangled(&u.diagram, 2, 3));
    }

    #[test]
    fn steps_follow_garside_length() {
        let w = BraidWord::parse("s1 s2 s2 s1 s2 s1 s1", 3).unwrap();
        let (_, sup, _) = inf_sup(&w);
        let mut d = CurveDiagram::from_word(&w);
        let mut steps = 0;
        while !d.is_trivial() {
            let before = extreme_labels(&d, Scope::Restricted).0;
            d = relax_step_down(&d).unwrap().1;
            let (ll, sl) = extreme_labels(&d, Scope::Restricted);
            assert_eq!(ll, before - 1);
            assert!(sl >= 0);
            steps += 1;
        }
        assert_eq!(steps, sup);
    }
}
