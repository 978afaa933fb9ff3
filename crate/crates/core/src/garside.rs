//! Simple braids as permutations, left/right normal forms, inf/sup and the
//! round-half-twist length of normal-form factors.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{BraidWord, Letter};

/// A positive permutation braid (divisor of Δ).
///
/// `image[k]` is the final position (0-based) of the strand that starts at
/// position `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    pub fn delta(n: usize) -> Self {
        Permutation { image: (0..n).rev().collect() }
    }

    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &v in &image {
            if v >= image.len() || seen[v] {
                return Err(Error::NotPermutation);
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    /// Simple element of a positive word in which every pair crosses at most once.
    pub fn from_word(w: &BraidWord) -> Result<Self> {
        let n = w.strands();
        // strand_at[p] = strand currently at position p
        let mut strand_at: Vec<usize> = (0..n).collect();
        let mut crossed = HashSet::new();
        for l in w.letters() {
            if !l.positive {
                return Err(Error::NotPositive);
            }
            let (a, b) = (strand_at[l.index - 1], strand_at[l.index]);
            if !crossed.insert((a.min(b), a.max(b))) {
                return Err(Error::NotSimple(a.min(b) + 1, a.max(b) + 1));
            }
            strand_at.swap(l.index - 1, l.index);
        }
        let mut image = vec![0; n];
        for (p, &s) in strand_at.iter().enumerate() {
            image[s] = p;
        }
        Ok(Permutation { image })
    }

    pub fn strands(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(k, &v)| k == v)
    }

    pub fn is_delta(&self) -> bool {
        let n = self.image.len();
        self.image.iter().enumerate().all(|(k, &v)| v == n - 1 - k)
    }

    pub fn inverse_perm(&self) -> Vec<usize> {
        let mut inv = vec![0; self.image.len()];
        for (k, &v) in self.image.iter().enumerate() {
            inv[v] = k;
        }
        inv
    }

    /// Number of crossing pairs, i.e. the length of any positive word for it.
    pub fn inversions(&self) -> usize {
        let n = self.image.len();
        let mut c = 0;
        for a in 0..n {
            for b in a + 1..n {
                if self.image[a] > self.image[b] {
                    c += 1;
                }
            }
        }
        c
    }

    /// Canonical positive word, built by insertion sort: strand `t` is carried
    /// left past every earlier strand that ends to its right, by one
    /// descending run `σ_t σ_{t-1} …`.
    pub fn to_word(&self) -> BraidWord {
        let n = self.image.len();
        let mut letters = Vec::new();
        for t in 1..n {
            let c = (0..t).filter(|&a| self.image[a] > self.image[t]).count();
            for q in ((t - c + 1)..=t).rev() {
                letters.push(Letter::pos(q));
            }
        }
        BraidWord::new(n.max(1), letters).expect("indices in range")
    }

    /// Artin generators that divide this element on the left (0-based `i` for `σ_{i+1}`).
    pub fn starting_set(&self) -> Vec<usize> {
        (0..self.image.len().saturating_sub(1)).filter(|&i| self.image[i] > self.image[i + 1]).collect()
    }

    /// Artin generators that divide this element on the right.
    pub fn finishing_set(&self) -> Vec<usize> {
        let inv = self.inverse_perm();
        (0..inv.len().saturating_sub(1)).filter(|&i| inv[i] > inv[i + 1]).collect()
    }

    fn starts_with(&self, i: usize) -> bool {
        self.image[i] > self.image[i + 1]
    }

    fn finishes_with(&self, i: usize) -> bool {
        let a = self.image.iter().position(|&v| v == i).unwrap();
        let b = self.image.iter().position(|&v| v == i + 1).unwrap();
        a > b
    }

    /// `self · σ_{i+1}`; caller guarantees the result is simple.
    fn times_gen(&mut self, i: usize) {
        for v in self.image.iter_mut() {
            if *v == i {
                *v = i + 1;
            } else if *v == i + 1 {
                *v = i;
            }
        }
    }

    /// `σ_{i+1}^-1 · self`; caller guarantees `σ_{i+1}` left-divides self.
    fn gen_inverse_times(&mut self, i: usize) {
        self.image.swap(i, i + 1);
    }

    /// Conjugation by Δ: `Δ^-1 s Δ`, the index flip `i ↦ n - i`.
    pub fn tau(&self) -> Permutation {
        let n = self.image.len();
        Permutation { image: (0..n).map(|k| n - 1 - self.image[n - 1 - k]).collect() }
    }

    /// `s^-1 Δ`, the simple element with `s · right_complement(s) = Δ`.
    pub fn right_complement(&self) -> Permutation {
        let n = self.image.len();
        Permutation { image: self.inverse_perm().into_iter().map(|v| n - 1 - v).collect() }
    }

    /// `Δ s^-1`, the simple element with `left_complement(s) · s = Δ`.
    pub fn left_complement(&self) -> Permutation {
        self.right_complement().tau()
    }

    /// The simple element read backwards (reverse of its positive word).
    pub fn reversed(&self) -> Permutation {
        Permutation { image: self.inverse_perm() }
    }

    /// Product as permutations (strand positions); meaningful as a simple
    /// braid only when no pair crosses twice.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { image: self.image.iter().map(|&v| other.image[v]).collect() }
    }

    /// True when `self · other` is again simple.
    pub fn product_is_simple(&self, other: &Permutation) -> bool {
        let n = self.image.len();
        for a in 0..n {
            for b in a + 1..n {
                let (pa, pb) = (self.image[a], self.image[b]);
                let crossed_first = pa > pb;
                let crossed_second = (other.image[pa] > other.image[pb]) != (pa > pb);
                if crossed_first && crossed_second {
                    return false;
                }
            }
        }
        true
    }

    /// `self ≼ other` in the prefix order on simple elements.
    pub fn left_divides(&self, other: &Permutation) -> bool {
        let n = self.image.len();
        for a in 0..n {
            for b in a + 1..n {
                if self.image[a] > self.image[b] && other.image[a] < other.image[b] {
                    return false;
                }
            }
        }
        true
    }
}

/// Makes `(s, t)` left-weighted in place; returns whether anything moved.
fn left_weight(s: &mut Permutation, t: &mut Permutation) -> bool {
    let mut changed = false;
    loop {
        let n = s.strands();
        let Some(i) = (0..n - 1).find(|&i| t.starts_with(i) && !s.finishes_with(i)) else {
            return changed;
        };
        s.times_gen(i);
        t.gen_inverse_times(i);
        changed = true;
    }
}

/// `Δ^inf · x_1 ⋯ x_r` (left form) or `x_1 ⋯ x_r · Δ^inf` (right form), with
/// every `x_k` a proper simple element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    pub strands: usize,
    pub infimum: i64,
    pub factors: Vec<Permutation>,
}

impl NormalForm {
    pub fn supremum(&self) -> i64 {
        self.infimum + self.factors.len() as i64
    }

    pub fn garside_length(&self) -> i64 {
        self.supremum().max(0) - self.infimum.min(0)
    }

    /// Word for a left normal form.
    pub fn to_word(&self) -> BraidWord {
        let mut w = BraidWord::delta_power(self.strands, self.infimum);
        for f in &self.factors {
            w = w.concat(&f.to_word());
        }
        w
    }

    pub fn is_left_weighted(&self) -> bool {
        self.factors.windows(2).all(|p| {
            let fin = p[0].finishing_set();
            p[1].starting_set().iter().all(|i| fin.contains(i))
        })
    }

    pub fn is_right_weighted(&self) -> bool {
        self.factors.windows(2).all(|p| {
            let st = p[1].starting_set();
            p[0].finishing_set().iter().all(|i| st.contains(i))
        })
    }
}

/// Left normal form by Δ-extraction followed by local sliding.
pub fn left_normal_form(w: &BraidWord) -> NormalForm {
    let n = w.strands();
    if n < 2 {
        return NormalForm { strands: n, infimum: 0, factors: Vec::new() };
    }
    // w = Δ^-k · stored factors, each stored factor twisted by τ^parity
    let mut k: i64 = 0;
    let mut parity = false;
    let mut stored: Vec<Permutation> = Vec::new();
    let gen = |i: usize| {
        let mut p = Permutation::identity(n);
        p.image.swap(i - 1, i);
        p
    };
    for l in w.letters() {
        let actual = if l.positive {
            gen(l.index)
        } else {
            // σ^-1 = Δ^-1 · τ(σ^-1 Δ)
            k += 1;
            parity = !parity;
            gen(l.index).right_complement().tau()
        };
        stored.push(if parity { actual.tau() } else { actual });
    }
    let mut factors: Vec<Permutation> =
        stored.into_iter().map(|f| if parity { f.tau() } else { f }).collect();

    let mut out: Vec<Permutation> = Vec::with_capacity(factors.len());
    for f in factors.drain(..) {
        out.push(f);
        let mut j = out.len() - 1;
        while j > 0 {
            let (head, tail) = out.split_at_mut(j);
            if !left_weight(&mut head[j - 1], &mut tail[0]) {
                break;
            }
            j -= 1;
        }
    }
    let mut infimum = -k;
    let mut factors = Vec::new();
    for f in out {
        if f.is_delta() && factors.is_empty() {
            infimum += 1;
        } else if !f.is_identity() {
            factors.push(f);
        }
    }
    NormalForm { strands: n, infimum, factors }
}

/// Right normal form `x_1 ⋯ x_r · Δ^inf`, obtained from the left normal form
/// of the reversed word.
pub fn right_normal_form(w: &BraidWord) -> NormalForm {
    let rev = BraidWord::new(w.strands(), w.letters().iter().rev().copied().collect()).expect("valid");
    let lnf = left_normal_form(&rev);
    NormalForm {
        strands: lnf.strands,
        infimum: lnf.infimum,
        factors: lnf.factors.iter().rev().map(|f| f.reversed()).collect(),
    }
}

/// `(inf, sup, garside_length)`.
pub fn inf_sup(w: &BraidWord) -> (i64, i64, i64) {
    let nf = left_normal_form(w);
    (nf.infimum, nf.supremum(), nf.garside_length())
}

pub fn equals(a: &BraidWord, b: &BraidWord) -> Result<bool> {
    if a.strands() != b.strands() {
        return Err(Error::StrandMismatch(a.strands(), b.strands()));
    }
    Ok(left_normal_form(a) == left_normal_form(b))
}

pub fn is_identity(w: &BraidWord) -> bool {
    let nf = left_normal_form(w);
    nf.infimum == 0 && nf.factors.is_empty()
}

/// Outcome of a bounded search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bounded {
    Value(usize),
    Exceeded,
}

pub const DEFAULT_TAU_BUDGET: usize = 100_000;

/// All round half twists `Δ_{i,j}` on `n` strands as simple elements.
pub fn round_half_twists(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut image: Vec<usize> = (0..n).collect();
            image[i..=j].reverse();
            out.push(Permutation { image });
        }
    }
    out
}

/// Fewest round half twists whose positive product is the simple `s`.
pub fn simple_tau_length(s: &Permutation, budget: usize) -> Bounded {
    let n = s.strands();
    let twists = round_half_twists(n);
    let start = Permutation::identity(n);
    if &start == s {
        return Bounded::Value(0);
    }
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((p, d)) = queue.pop_front() {
        for t in &twists {
            if !p.product_is_simple(t) {
                continue;
            }
            let q = p.then(t);
            if !q.left_divides(s) || !seen.insert(q.clone()) {
                continue;
            }
            if &q == s {
                return Bounded::Value(d + 1);
            }
            if seen.len() > budget {
                return Bounded::Exceeded;
            }
            queue.push_back((q, d + 1));
        }
    }
    unreachable!("every simple element is a product of Artin generators")
}

/// Sum of round-half-twist lengths over the right normal form; each `Δ^{±1}`
/// contributes one.
pub fn tau_length(w: &BraidWord, budget: usize) -> Bounded {
    let rnf = right_normal_form(w);
    let mut total = rnf.infimum.unsigned_abs() as usize;
    for f in &rnf.factors {
        match simple_tau_length(f, budget) {
            Bounded::Value(v) => total += v,
            Bounded::Exceeded => return Bounded::Exceeded,
        }
    }
    Bounded::Value(total)
}

/// All `n!` simple elements.
pub fn all_simples(n: usize) -> Vec<Permutation> {
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if cur.len() == n {
            out.push(Permutation { image: cur.clone() });
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(n, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str, n: usize) -> BraidWord {
        BraidWord::parse(s, n).unwrap()
    }

    #[test]
    fn simple_from_word_examples() {
        assert_eq!(Permutation::from_word(&w("s1", 3)).unwrap().image(), &[1, 0, 2]);
        assert!(Permutation::from_word(&w("s1 s2 s1", 3)).unwrap().is_delta());
        assert_eq!(Permutation::from_word(&w("s1 s1", 3)), Err(Error::NotSimple(1, 2)));
        assert_eq!(Permutation::from_word(&w("s1^-1", 3)), Err(Error::NotPositive));
    }

    #[test]
    fn word_from_simple_examples() {
        assert!(Permutation::identity(3).to_word().is_empty());
        assert_eq!(Permutation::delta(3).to_word().to_string(), "s1 s2 s1");
        assert_eq!(Permutation::from_image(vec![1, 0, 2, 3]).unwrap().to_word().to_string(), "s1");
        for s in all_simples(4) {
            let word = s.to_word();
            assert_eq!(word.len(), s.inversions());
            assert_eq!(Permutation::from_word(&word).unwrap(), s);
        }
    }

    #[test]
    fn normal_form_examples() {
        let id = left_normal_form(&BraidWord::identity(3));
        assert_eq!((id.infimum, id.factors.len()), (0, 0));
        let fig = left_normal_form(&w("s1 s2^-1 s1 s2^-1", 3));
        assert_eq!((fig.infimum, fig.supremum(), fig.factors.len()), (-2, 2, 4));
        let inv = left_normal_form(&w("s1^-1", 3));
        assert_eq!(inv.infimum, -1);
        assert_eq!(inv.factors, vec![Permutation::from_word(&w("s1 s2", 3)).unwrap()]);
    }

    #[test]
    fn inf_sup_examples() {
        assert_eq!(inf_sup(&w("s1 s2^-1 s1 s2^-1", 3)), (-2, 2, 4));
        assert_eq!(inf_sup(&BraidWord::identity(3)), (0, 0, 0));
        assert_eq!(inf_sup(&w("D", 3)), (1, 1, 1));
        assert_eq!(inf_sup(&w("D^-3", 4)), (-3, -3, 3));
    }

    #[test]
    fn right_normal_form_examples() {
        let id = right_normal_form(&BraidWord::identity(3));
        assert_eq!((id.infimum, id.factors.len()), (0, 0));
        for s in all_simples(4) {
            if s.is_identity() || s.is_delta() {
                continue;
            }
            let r = right_normal_form(&s.to_word());
            assert_eq!(r.infimum, 0);
            assert_eq!(r.factors, vec![s]);
        }
    }

    #[test]
    fn tau_and_complement() {
        let s1 = Permutation::from_word(&w("s1", 3)).unwrap();
        assert_eq!(s1.tau(), Permutation::from_word(&w("s2", 3)).unwrap());
        assert!(Permutation::identity(3).right_complement().is_delta());
        assert!(Permutation::delta(3).right_complement().is_identity());
        for s in all_simples(4) {
            let prod = s.to_word().concat(&s.right_complement().to_word());
            assert!(equals(&prod, &BraidWord::delta(4)).unwrap());
            let prod = s.left_complement().to_word().concat(&s.to_word());
            assert!(equals(&prod, &BraidWord::delta(4)).unwrap());
            let conj = BraidWord::delta(4).inverse().concat(&s.to_word()).concat(&BraidWord::delta(4));
            assert!(equals(&conj, &s.tau().to_word()).unwrap());
        }
    }

    #[test]
    fn equals_examples() {
        assert!(equals(&w("s1 s2 s1", 3), &w("s2 s1 s2", 3)).unwrap());
        assert!(!equals(&w("s1 s2", 3), &w("s2 s1", 3)).unwrap());
        let x = w("s1 s2 s2^-1 s1^-1 s2", 3);
        assert!(equals(&x, &x.free_reduce()).unwrap());
        assert_eq!(equals(&w("s1", 3), &w("s1", 4)), Err(Error::StrandMismatch(3, 4)));
    }

    #[test]
    fn tau_length_examples() {
        assert_eq!(tau_length(&w("s1", 3), DEFAULT_TAU_BUDGET), Bounded::Value(1));
        assert_eq!(tau_length(&w("D", 3), DEFAULT_TAU_BUDGET), Bounded::Value(1));
        assert_eq!(tau_length(&w("s1 s3", 4), DEFAULT_TAU_BUDGET), Bounded::Value(2));
        // no single round half twist equals σ1σ3
        let target = Permutation::from_word(&w("s1 s3", 4)).unwrap();
        assert!(round_half_twists(4).iter().all(|t| t != &target));
        assert_eq!(tau_length(&w("s1 s2", 3), DEFAULT_TAU_BUDGET), Bounded::Value(2));
        assert_eq!(tau_length(&w("s1 s2", 3), 1), Bounded::Exceeded);
    }

    /// Brute-force prefix-order check on B3: `Δ^-1 ≼ σ1^-1 ≼ Δ^0`, and neither
    /// `Δ^0 ≼ σ1^-1` nor `σ1^-1 ≼ Δ^-1`. A relation `a ≼ b` holds iff
    /// `a^-1 b` equals some positive word; positive words of length ≤ 6 are
    /// enumerated and compared through the word problem.
    #[test]
    fn inverse_generator_bounds_by_enumeration() {
        let n = 3;
        let mut positives = vec![BraidWord::identity(n)];
        let mut frontier = positives.clone();
        for _ in 0..6 {
            let mut next = Vec::new();
            for p in &frontier {
                for i in 1..n {
                    let mut q = p.clone();
                    q.push(Letter::pos(i));
                    next.push(q);
                }
            }
            positives.extend(next.iter().cloned());
            frontier = next;
        }
        let prefix = |a: &BraidWord, b: &BraidWord| {
            let quotient = a.inverse().concat(b);
            positives.iter().any(|p| equals(&quotient, p).unwrap())
        };
        let x = w("s1^-1", 3);
        let d_inv = BraidWord::delta(3).inverse();
        let id = BraidWord::identity(3);
        assert!(prefix(&d_inv, &x));
        assert!(prefix(&x, &id));
        assert!(!prefix(&id, &x));
        assert!(!prefix(&x, &d_inv));
        assert_eq!(inf_sup(&x), (-1, 0, 1));
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn word() -> impl Strategy<Value = BraidWord> {
            (2usize..6, proptest::collection::vec((0usize..100, any::<bool>()), 0..16)).prop_map(
                |(n, raw)| {
                    let letters =
                        raw.into_iter().map(|(i, p)| Letter { index: i % (n - 1) + 1, positive: p }).collect();
                    BraidWord::new(n, letters).unwrap()
                },
            )
        }

        proptest! {
            #[test]
            fn delta_shift(w in word(), k in -3i64..4) {
                let (i, s, _) = inf_sup(&w);
                let shifted = w.concat(&BraidWord::delta_power(w.strands(), k));
                let (i2, s2, _) = inf_sup(&shifted);
                prop_assert_eq!((i2, s2), (i + k, s + k));
            }

            #[test]
            fn normal_form_is_fixed_point(w in word()) {
                let nf = left_normal_form(&w);
                prop_assert!(nf.is_left_weighted());
                prop_assert_eq!(left_normal_form(&nf.to_word()), nf);
            }

            #[test]
            fn right_form_agrees(w in word()) {
                let l = left_normal_form(&w);
                let r = right_normal_form(&w);
                prop_assert!(r.is_right_weighted());
                prop_assert_eq!((l.infimum, l.supremum()), (r.infimum, r.supremum()));
                let mut rw = BraidWord::identity(w.strands());
                for f in &r.factors { rw = rw.concat(&f.to_word()); }
                rw = rw.concat(&BraidWord::delta_power(w.strands(), r.infimum));
                prop_assert!(equals(&rw, &w).unwrap());
            }

            #[test]
            fn equals_is_invariant_under_relations(w in word(), pos in 0usize..20, which in 0usize..3) {
                let n = w.strands();
                let mut letters = w.letters().to_vec();
                let at = pos % (letters.len() + 1);
                let ins: Vec<i32> = match which {
                    0 if n >= 3 => vec![1, 2, 1, -2, -1, -2],
                    1 if n >= 4 => vec![1, 3, -1, -3],
                    _ => vec![1, -1],
                };
                let extra = BraidWord::from_signed(n, &ins).unwrap();
                for (k, l) in extra.letters().iter().enumerate() { letters.insert(at + k, *l); }
                let w2 = BraidWord::new(n, letters).unwrap();
                prop_assert!(equals(&w, &w2).unwrap());
            }

            #[test]
            fn length_bounds(w in word(), k in -4i64..5) {
                if w.is_positive() {
                    prop_assert!(inf_sup(&w).2 <= w.len() as i64);
                }
                prop_assert_eq!(inf_sup(&BraidWord::delta_power(w.strands(), k)).2, k.abs());
            }
        }
    }
}
