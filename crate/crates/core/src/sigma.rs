//! Dehornoy ordering and σ-definite representatives.
//!
//! The sign of a braid is read off its curve diagram (the first arc that is
//! not a horizontal bump) and cross-checked against classical handle
//! reduction. The σ-definite construction alternates untangling the disk on
//! punctures `2..n` with a single-crossing slide that lowers the largest label.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::diagram::{CurveDiagram, Point, Side};
use crate::error::{Error, Result};
use crate::garside::{all_simples, inf_sup, Permutation};
use crate::labels::{extreme_labels, label_trace, open_disk_labels, tangledness, Scope};
use crate::relax::{braid_from_diagram, untangle_open_disk};
use crate::word::{BraidWord, Letter};

pub const DEFAULT_HANDLE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
    Neutral,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
            Sign::Neutral => Sign::Neutral,
        }
    }
}

/// Index `k` of the lowest generator the braid involves, with its sign: the
/// first arc that is not a horizontal bump leaves `Start` (k = 1) or puncture
/// `k - 1`, into the upper half for σ_k-positive braids.
pub fn dehornoy_level(d: &CurveDiagram) -> Option<(usize, Sign)> {
    let pts = d.points();
    for j in 0..pts.len() - 1 {
        let here = if j == 0 { Point::Start } else { Point::Puncture(j) };
        let horizontal = pts[j] == here && pts[j + 1] == Point::Puncture(j + 1) && d.sides()[j] == Side::Upper;
        if !horizontal {
            let sign = if d.sides()[j] == Side::Upper { Sign::Positive } else { Sign::Negative };
            return Some((j + 1, sign));
        }
    }
    None
}

pub fn dehornoy_sign(d: &CurveDiagram) -> Sign {
    dehornoy_level(d).map_or(Sign::Neutral, |(_, s)| s)
}

/// Sign of `σ1` in the braid: neutral when it lies in `⟨σ2, …⟩`.
pub fn sigma1_sign(d: &CurveDiagram) -> Sign {
    match dehornoy_level(d) {
        Some((1, s)) => s,
        _ => Sign::Neutral,
    }
}

fn signed(l: Letter) -> i64 {
    if l.positive {
        l.index as i64
    } else {
        -(l.index as i64)
    }
}

/// Full handle reduction, always reducing the handle that closes first.
pub fn handle_reduce(w: &BraidWord, budget: usize) -> Result<BraidWord> {
    let mut word: Vec<i64> = w.letters().iter().map(|&l| signed(l)).collect();
    let mut rewrites = 0;
    'outer: loop {
        for q in 1..word.len() {
            let i = word[q].abs();
            // nearest earlier letter that blocks or opens a σ_i-handle
            let Some(p) = (0..q).rev().find(|&p| word[p].abs() == i || word[p].abs() == i - 1) else {
                continue;
            };
            if word[p] != -word[q] {
                continue;
            }
            rewrites += 1;
            if rewrites > budget {
                return Err(Error::BudgetExceeded(budget));
            }
            let e = word[p].signum();
            let mut middle = Vec::with_capacity(q - p);
            for &x in &word[p + 1..q] {
                if x.abs() == i + 1 {
                    middle.extend([-e * (i + 1), x.signum() * i, e * (i + 1)]);
                } else {
                    middle.push(x);
                }
            }
            word.splice(p..=q, middle);
            continue 'outer;
        }
        break;
    }
    let letters = word
        .into_iter()
        .map(|x| if x > 0 { Letter::pos(x as usize) } else { Letter::neg((-x) as usize) })
        .collect();
    BraidWord::new(w.strands(), letters)
}

/// Sign of the lowest generator left after full handle reduction.
pub fn handle_reduction_sign(w: &BraidWord, budget: usize) -> Result<Sign> {
    let reduced = handle_reduce(w, budget)?;
    Ok(match reduced.letters().iter().min_by_key(|l| l.index) {
        None => Sign::Neutral,
        Some(l) if l.positive => Sign::Positive,
        Some(_) => Sign::Negative,
    })
}

/// The diagram with the boundary point `+1` made visible: the braid acting on
/// one extra, never-moving puncture at the right, so that the curve runs on
/// from the last real puncture to it.
pub fn extended_diagram(w: &BraidWord) -> CurveDiagram {
    CurveDiagram::from_word(&w.embed(w.strands() + 1, 0))
}

/// `x` is the largest label; `y` is the tangledness of the disk on punctures
/// `2..n` (arcs crossing the disk count their excess turning only). Ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ComplexityPair {
    pub x: i64,
    pub y: i64,
}

pub fn complexity_pair(d: &CurveDiagram) -> Result<ComplexityPair> {
    let (x, _) = extreme_labels(d, Scope::Restricted);
    if x < 0 {
        return Err(Error::Precondition(format!("largest label {x} < 0: braid is σ-negative")));
    }
    let n = d.strands();
    let y = if n < 3 { 0 } else { tangledness(d, 2, n) };
    Ok(ComplexityPair { x, y })
}

/// Where the curve may start or end a slide loop: on the axis to the left of
/// every puncture, or at the leftmost puncture itself.
fn on_left_axis(p: Point) -> bool {
    matches!(p, Point::Start | Point::Crossing { gap: 0, .. } | Point::Puncture(1))
}

/// The punctures enclosed by or lying on the shortest curve piece around the
/// largest-label segment whose ends are on the axis left of all punctures
/// (puncture 1 counts as such an end and never slides). Listed in the order
/// the piece meets them, enclosed ones last.
pub fn slide_set(d: &CurveDiagram) -> Result<Vec<usize>> {
    let tr = label_trace(d);
    let (ll, _) = extreme_labels(d, Scope::Restricted);
    let seg = tr
        .restricted_segments()
        .find(|s| s.label == ll)
        .ok_or_else(|| Error::Precondition("no segment carries the largest label".into()))?;
    let pts = d.points();
    let a = (0..=seg.from.floor() as usize)
        .rev()
        .find(|&j| on_left_axis(pts[j]))
        .ok_or_else(|| Error::Precondition("segment does not start left of the punctures".into()))?;
    let b = (seg.to.ceil() as usize..pts.len())
        .find(|&j| on_left_axis(pts[j]))
        .ok_or_else(|| Error::Precondition("segment does not return left of the punctures".into()))?;
    let x = |p: Point| p.axis_key().0;
    let mut set = Vec::new();
    for p in &pts[a..=b] {
        if let Point::Puncture(k) = *p {
            if k != 1 && !set.contains(&k) {
                set.push(k);
            }
        }
    }
    for k in 2..=d.strands() {
        let xk = 2 * k as i64 - 1;
        let over = (a..b)
            .filter(|&j| d.sides()[j] == Side::Upper)
            .filter(|&j| x(pts[j]).min(x(pts[j + 1])) < xk && xk < x(pts[j]).max(x(pts[j + 1])))
            .count();
        if over % 2 == 1 && !set.contains(&k) {
            set.push(k);
        }
    }
    Ok(set)
}

/// The inverse simple braid on `n` strands that slides the punctures of `set`
/// (in the given order) to the far left, everything else keeping its order:
/// the set is first reordered away from puncture 1, then crosses it once.
pub fn slide_word(n: usize, set: &[usize]) -> BraidWord {
    let m = set.len();
    // reorder on strands 2..n: set first, in order, then the rest
    let mut image = vec![0; n - 1];
    for (pos, &k) in set.iter().enumerate() {
        image[k - 2] = pos;
    }
    let mut next = m;
    for k in 2..=n {
        if !set.contains(&k) {
            image[k - 2] = next;
            next += 1;
        }
    }
    let reorder = Permutation::from_image(image).expect("slide is a permutation").to_word().embed(n, 1);
    let mut positive = reorder;
    for i in 1..=m {
        positive.push(Letter::pos(i));
    }
    positive.inverse()
}

/// Candidate slides: every simple braid `t·σ1·u` on `n` strands with `t`, `u`
/// free of `σ1`, so a single `σ1` letter; shortest first, then by word.
fn one_sigma1_simples(n: usize) -> Vec<BraidWord> {
    let free: Vec<Permutation> = all_simples(n).into_iter().filter(|p| p.image()[0] == 0).collect();
    let s1 = Permutation::from_word(&BraidWord::from_signed(n, &[1]).expect("n ≥ 2")).expect("σ1 is simple");
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for t in &free {
        if !t.product_is_simple(&s1) {
            continue;
        }
        let ts = t.then(&s1);
        for u in &free {
            if ts.product_is_simple(u) && seen.insert(ts.then(u).image().to_vec()) {
                let mut word = t.to_word();
                word.push(Letter::pos(1));
                out.push(word.concat(&u.to_word()));
            }
        }
    }
    let key = |w: &BraidWord| w.letters().iter().map(|l| (l.index, !l.positive)).collect::<Vec<_>>();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| key(a).cmp(&key(b))));
    out
}

/// One slide on an extended diagram: a σ1-negative braid of Garside length one
/// with a single `σ1` letter that lowers the largest label and keeps the braid
/// σ1-positive or σ1-neutral. Needs the disk `2..n` untangled. The enclosed
/// set is tried first; other sets are tried in a fixed order.
pub fn slide_move(ext: &CurveDiagram) -> Result<(BraidWord, CurveDiagram)> {
    let n = ext.strands();
    if sigma1_sign(ext) != Sign::Positive {
        return Err(Error::Precondition("slide needs a σ1-positive diagram".into()));
    }
    if n > 3 && !open_disk_labels(ext, 2).is_untangled() {
        return Err(Error::Precondition("slide needs the disk 2..n untangled".into()));
    }
    let (ll, _) = extreme_labels(ext, Scope::Restricted);
    let first = slide_set(ext).ok().filter(|s| !s.is_empty() && !s.contains(&n));
    let candidates = first
        .map(|set| slide_word(n - 1, &set))
        .into_iter()
        .chain(one_sigma1_simples(n - 1).into_iter().map(|s| s.inverse()));
    for cand in candidates {
        let word = cand.embed(n, 0);
        let next = ext.apply_word(&word)?;
        if extreme_labels(&next, Scope::Restricted).0 < ll && sigma1_sign(&next) != Sign::Negative {
            return Ok((word, next));
        }
    }
    Err(Error::Precondition("no slide lowers the largest label".into()))
}

/// Diagram of a σ1-neutral braid seen on strands `2..n` alone.
fn drop_first_strand(d: &CurveDiagram) -> Result<CurveDiagram> {
    let pts = d.points();
    if pts.get(1) != Some(&Point::Puncture(1)) || d.sides()[0] != Side::Upper {
        return Err(Error::Precondition("braid is not σ1-neutral".into()));
    }
    let mut points = vec![Point::Start];
    for &p in &pts[2..] {
        points.push(match p {
            Point::Puncture(k) => Point::Puncture(k - 1),
            Point::Crossing { gap, rank } if gap > 0 => Point::Crossing { gap: gap - 1, rank },
            _ => return Err(Error::Precondition("braid is not σ1-neutral".into())),
        });
    }
    CurveDiagram::from_parts(d.strands() - 1, points, d.sides()[1..].to_vec())
}

/// A `σ1`-free word for the σ1-neutral braid `w`.
fn sigma1_free_word(w: &BraidWord) -> Result<BraidWord> {
    let n = w.strands();
    if n <= 2 {
        // the only σ1-neutral braid on two strands
        return Ok(BraidWord::identity(n));
    }
    let inner = braid_from_diagram(&drop_first_strand(&CurveDiagram::from_word(w))?)?;
    Ok(inner.embed(n, 1))
}

/// Accounting for one σ-definite construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaReport {
    pub input: BraidWord,
    pub output_word: BraidWord,
    pub sigma1_count: usize,
    pub sup: i64,
    pub garside_length: i64,
    pub length_in: usize,
    pub length_out: usize,
    /// `length_out / ℓ²`, zero for the trivial braid.
    pub c_effective: f64,
    pub slides: usize,
}

/// An equal word in which `σ1` occurs with one sign only, at most
/// `max(sup, 0)` times (or `max(-inf, 0)` times for σ1-negative braids).
pub fn sigma1_definite_word(w: &BraidWord) -> Result<BraidWord> {
    Ok(sigma1_definite_run(w)?.0)
}

fn sigma1_definite_run(w: &BraidWord) -> Result<(BraidWord, usize)> {
    match sigma1_sign(&CurveDiagram::from_word(w)) {
        Sign::Neutral => Ok((sigma1_free_word(w)?, 0)),
        Sign::Negative => {
            let (out, slides) = sigma1_positive_run(&w.mirror())?;
            Ok((out.mirror(), slides))
        }
        Sign::Positive => sigma1_positive_run(w),
    }
}

/// Alternately untangles the disk `2..n` (σ1-free) and slides (one `σ1^-1`)
/// until the braid is σ1-neutral; `w` is that neutral braid times the
/// inverse of everything applied.
fn sigma1_positive_run(w: &BraidWord) -> Result<(BraidWord, usize)> {
    let n = w.strands();
    let mut ext = extended_diagram(w);
    let (x0, _) = extreme_labels(&ext, Scope::Restricted);
    let guard = x0.max(0) as usize + 1;
    let mut motion = BraidWord::identity(n);
    let mut slides = 0;
    while sigma1_sign(&ext) == Sign::Positive {
        if slides >= guard {
            return Err(Error::BudgetExceeded(guard));
        }
        if n > 2 {
            let un = untangle_open_disk(&ext, 2)?;
            motion = motion.concat(&restrict(&un.word, n));
            ext = un.diagram;
        }
        let (word, next) = slide_move(&ext)?;
        motion = motion.concat(&restrict(&word, n));
        ext = next;
        slides += 1;
    }
    let tail = sigma1_free_word(&w.concat(&motion))?;
    Ok((tail.concat(&motion.inverse()), slides))
}

/// A word on `n + 1` strands that never uses the last one, seen on `n` strands.
fn restrict(w: &BraidWord, n: usize) -> BraidWord {
    BraidWord::new(n, w.letters().to_vec()).expect("moves never touch the extra puncture")
}

/// An equal word whose lowest generator occurs with one sign only.
pub fn sigma_definite_word(w: &BraidWord) -> Result<BraidWord> {
    Ok(sigma_definite_run(w)?.0)
}

fn sigma_definite_run(w: &BraidWord) -> Result<(BraidWord, usize)> {
    let n = w.strands();
    let (out, slides) = sigma1_definite_run(w)?;
    if out.count_index(1) > 0 || n <= 2 {
        return Ok((out, slides));
    }
    // σ1-free: recurse on strands 2..n
    let shifted = BraidWord::new(
        n - 1,
        out.letters().iter().map(|l| Letter { index: l.index - 1, positive: l.positive }).collect(),
    )?;
    Ok((sigma_definite_word(&shifted)?.embed(n, 1), slides))
}

/// Runs [`sigma_definite_word`] and records its accounting.
pub fn sigma_report(w: &BraidWord) -> Result<SigmaReport> {
    let (output_word, slides) = sigma_definite_run(w)?;
    let (_, sup, len) = inf_sup(w);
    let length_out = output_word.len();
    Ok(SigmaReport {
        input: w.clone(),
        sigma1_count: output_word.count_index(1),
        sup,
        garside_length: len,
        length_in: w.len(),
        length_out,
        c_effective: if len == 0 { 0.0 } else { length_out as f64 / (len * len) as f64 },
        output_word,
        slides,
    })
}

/// Whether the lowest generator of `w` occurs with one sign only.
pub fn is_sigma_definite(w: &BraidWord) -> bool {
    let Some(k) = w.min_index() else { return true };
    let mut signs = w.letters().iter().filter(|l| l.index == k).map(|l| l.positive);
    let first = signs.next();
    signs.all(|s| Some(s) == first)
}
