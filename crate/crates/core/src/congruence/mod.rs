//! Length-stratified congruence closure.
//!
//! Homogeneous relations never change word length, so the congruence restricted
//! to `F_k` is generated by elementary transitions inside `F_k`. Two engines
//! compute it:
//!
//! * [`Strategy::Full`] runs union-find over every word of the stratum, applying
//!   each relation at every position.
//! * [`Strategy::Pruned`] only looks at words `rep(C)·x` whose `(k-1)`-prefix is
//!   canonical. Every transition that leaves the last letter alone is already
//!   captured by the previous layer, so only applications touching the last
//!   letter need to be replayed, once per class of the untouched prefix.
//!
//! Both produce class ids in k-lex order of their minimal representatives, so
//! their outputs are directly comparable.

mod stratum;
mod union_find;

pub use stratum::{read_stratum, write_stratum, STRATUM_HEADER};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::Word;
use union_find::MinUnionFind;

/// Default refusal threshold for `|X|^k`.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Sentinel for the zero element in layered lookups.
pub const ZERO: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Full,
    Pruned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Engine {
    pub budget: u64,
    pub strategy: Strategy,
}

impl Default for Engine {
    fn default() -> Self {
        Engine { budget: DEFAULT_BUDGET, strategy: Strategy::Full }
    }
}

/// Partition of `F_k` into congruence classes.
///
/// Nonzero classes carry ids `0..nonzero_count` in k-lex order of their
/// representatives; the zero class, when present, has id `nonzero_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthClasses {
    length: usize,
    alphabet_size: usize,
    table: Vec<u32>,
    reps: Vec<Word>,
    zero_class: Option<u32>,
    nonzero_count: usize,
}

impl LengthClasses {
    pub(crate) fn from_table(length: usize, alphabet_size: usize, table: Vec<u32>, nonzero_count: usize) -> Self {
        let total = table.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut reps: Vec<Option<Word>> = vec![None; total.max(nonzero_count)];
        for (code, &c) in table.iter().enumerate() {
            let slot = &mut reps[c as usize];
            if slot.is_none() {
                *slot = Some(Word::decode(code as u64, alphabet_size, length));
            }
        }
        let zero_class = (total > nonzero_count).then_some(nonzero_count as u32);
        LengthClasses {
            length,
            alphabet_size,
            table,
            reps: reps.into_iter().map(|r| r.expect("every class has a member")).collect(),
            zero_class,
            nonzero_count,
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn nonzero_count(&self) -> usize {
        self.nonzero_count
    }

    pub fn zero_class(&self) -> Option<u32> {
        self.zero_class
    }

    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    /// Minimal representative of class `c`.
    pub fn rep(&self, c: u32) -> &Word {
        &self.reps[c as usize]
    }

    pub fn reps(&self) -> &[Word] {
        &self.reps
    }

    /// Class id per word code (base-|X| numbering).
    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn class_of(&self, w: &Word) -> Result<u32> {
        if w.len() != self.length {
            return Err(Error::LengthMismatch { expected: self.length, got: w.len() });
        }
        Ok(self.table[w.encode(self.alphabet_size) as usize])
    }

    pub fn is_zero(&self, c: u32) -> bool {
        self.zero_class == Some(c)
    }

    /// Members of class `c` in k-lex order.
    pub fn members(&self, c: u32) -> Vec<Word> {
        self.table
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == c)
            .map(|(code, _)| Word::decode(code as u64, self.alphabet_size, self.length))
            .collect()
    }
}

/// Returns the k-lex minimal word congruent to `w`.
pub fn canonical_rep(classes: &LengthClasses, w: &Word) -> Result<Word> {
    let c = classes.class_of(w)?;
    Ok(classes.rep(c).clone())
}

/// Classes of one length, stored as transitions from the previous length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub reps: Vec<Word>,
    pub has_zero: bool,
    /// `next[c * m + x]` is the class of `rep(c)·x` for nonzero `c` of the
    /// previous length, or [`ZERO`].
    pub next: Vec<u32>,
}

impl Layer {
    pub fn nonzero_count(&self) -> usize {
        self.reps.len()
    }
}

/// Classes of every length `0..=max_len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedClasses {
    alphabet_size: usize,
    layers: Vec<Layer>,
}

impl GradedClasses {
    pub fn max_len(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn layer(&self, k: usize) -> &Layer {
        &self.layers[k]
    }

    #[cfg(test)]
    pub(crate) fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    pub fn counts(&self) -> Vec<u64> {
        self.layers.iter().map(|l| l.nonzero_count() as u64).collect()
    }

    /// Class of an arbitrary word of length `<= max_len`, or [`ZERO`].
    pub fn class_of(&self, w: &Word) -> u32 {
        assert!(w.len() <= self.max_len(), "word longer than the computed prefix");
        let m = self.alphabet_size;
        let mut c = 0u32;
        for (i, &x) in w.letters().iter().enumerate() {
            c = self.layers[i + 1].next[c as usize * m + x];
            if c == ZERO {
                return ZERO;
            }
        }
        c
    }

    /// Class of `rep(c)·x` where `c` is a nonzero class of length `k`.
    pub fn step(&self, k: usize, c: u32, x: usize) -> u32 {
        self.layers[k + 1].next[c as usize * self.alphabet_size + x]
    }

    pub fn rep(&self, k: usize, c: u32) -> &Word {
        &self.layers[k].reps[c as usize]
    }

    pub fn canonical(&self, w: &Word) -> Option<Word> {
        match self.class_of(w) {
            ZERO => None,
            c => Some(self.rep(w.len(), c).clone()),
        }
    }

    pub fn is_canonical(&self, w: &Word) -> bool {
        self.canonical(w).as_ref() == Some(w)
    }

    /// Materializes the full table of length `k`.
    pub fn length_classes(&self, k: usize) -> LengthClasses {
        let m = self.alphabet_size;
        let mut table = vec![0u32];
        let mut prev_zero = 1u32;
        for layer in &self.layers[1..=k] {
            let zero_id = layer.nonzero_count() as u32;
            let mut next = Vec::with_capacity(table.len() * m);
            for &c in &table {
                for x in 0..m {
                    let d = if c == prev_zero { ZERO } else { layer.next[c as usize * m + x] };
                    next.push(if d == ZERO { zero_id } else { d });
                }
            }
            prev_zero = zero_id;
            table = next;
        }
        LengthClasses::from_table(k, m, table, self.layers[k].nonzero_count())
    }
}

fn ensure_homogeneous(p: &Presentation) -> Result<()> {
    if p.is_homogeneous() {
        Ok(())
    } else {
        Err(Error::NotHomogeneous)
    }
}

fn stratum_size(m: usize, k: usize) -> u128 {
    (m as u128).checked_pow(k as u32).unwrap_or(u128::MAX)
}

impl Engine {
    pub fn with_budget(budget: u64) -> Self {
        Engine { budget, ..Engine::default() }
    }

    pub fn pruned(self) -> Self {
        Engine { strategy: Strategy::Pruned, ..self }
    }

    fn check_budget(&self, words: u128) -> Result<()> {
        if words > self.budget as u128 {
            Err(Error::BudgetExceeded { words, budget: self.budget })
        } else {
            Ok(())
        }
    }

    /// Classes of length exactly `k`, with a total table over `F_k`.
    pub fn length_classes(&self, p: &Presentation, k: usize) -> Result<LengthClasses> {
        ensure_homogeneous(p)?;
        self.check_budget(stratum_size(p.alphabet().len(), k))?;
        match self.strategy {
            Strategy::Full => Ok(full_stratum(p, k)),
            Strategy::Pruned => Ok(self.graded(p, k)?.length_classes(k)),
        }
    }

    /// Classes of every length up to `max_len`.
    pub fn graded(&self, p: &Presentation, max_len: usize) -> Result<GradedClasses> {
        ensure_homogeneous(p)?;
        let m = p.alphabet().len();
        let mut layers = vec![Layer { reps: vec![Word::empty()], has_zero: false, next: Vec::new() }];
        for k in 1..=max_len {
            let layer = match self.strategy {
                Strategy::Full => {
                    self.check_budget(stratum_size(m, k))?;
                    let classes = full_stratum(p, k);
                    layer_from_full(&layers[k - 1], &classes, m)
                }
                Strategy::Pruned => {
                    self.check_budget(layers[k - 1].nonzero_count() as u128 * m as u128)?;
                    let graded = GradedClasses { alphabet_size: m, layers };
                    let layer = pruned_layer(p, &graded, k);
                    layers = graded.layers;
                    layer
                }
            };
            layers.push(layer);
        }
        Ok(GradedClasses { alphabet_size: m, layers })
    }

    pub fn count_nonzero(&self, p: &Presentation, k: usize) -> Result<u64> {
        if k == 0 {
            ensure_homogeneous(p)?;
            return Ok(1);
        }
        Ok(self.length_classes(p, k)?.nonzero_count() as u64)
    }

    /// `|W_0| .. |W_max_len|`.
    pub fn layer_counts(&self, p: &Presentation, max_len: usize) -> Result<Vec<u64>> {
        Ok(self.graded(p, max_len)?.counts())
    }

    /// Bounded left-cancellativity certificate: for every length `k <= depth`
    /// and every generator `x`, `C ↦ x·C` must be injective on length-`k`
    /// classes. Generators suffice since left multiplication by any element
    /// is a composition of generator multiplications.
    pub fn check_left_cancellative(&self, p: &Presentation, depth: usize) -> Result<LcReport> {
        if p.has_zero() {
            return Err(Error::InvalidInput(
                "left-cancellativity is only checked for presentations without zero".into(),
            ));
        }
        let graded = self.graded(p, depth + 1)?;
        let m = p.alphabet().len();
        for k in 0..=depth {
            let n = graded.layer(k).nonzero_count();
            for x in 0..m {
                let mut preimage: Vec<Option<u32>> = vec![None; graded.layer(k + 1).nonzero_count()];
                for c in 0..n as u32 {
                    let prefixed = Word::from(
                        std::iter::once(x).chain(graded.rep(k, c).letters().iter().copied()).collect::<Vec<_>>(),
                    );
                    let d = graded.class_of(&prefixed);
                    match preimage[d as usize] {
                        Some(first) => {
                            return Ok(LcReport {
                                verdict: LcVerdict::Violation,
                                witness: Some(LcWitness {
                                    generator: x,
                                    first: graded.rep(k, first).clone(),
                                    second: graded.rep(k, c).clone(),
                                }),
                                depth_checked: k,
                            })
                        }
                        None => preimage[d as usize] = Some(c),
                    }
                }
            }
        }
        Ok(LcReport { verdict: LcVerdict::Pass, witness: None, depth_checked: depth })
    }
}

/// Union-find over every word of `F_k`.
fn full_stratum(p: &Presentation, k: usize) -> LengthClasses {
    let m = p.alphabet().len();
    let n = stratum_size(m, k) as usize;
    let pow = |e: usize| (m as u64).pow(e as u32);
    let mut uf = MinUnionFind::new(n);

    for (l, r) in p.equations() {
        let len = l.len();
        if len > k {
            continue;
        }
        let (lc, rc) = (l.encode(m), r.encode(m));
        for pos in 0..=k - len {
            let tail = k - len - pos;
            let (shift_u, shift_mid) = (pow(k - pos), pow(tail));
            for u in 0..pow(pos) {
                for v in 0..pow(tail) {
                    let a = u * shift_u + lc * shift_mid + v;
                    let b = u * shift_u + rc * shift_mid + v;
                    uf.union(a as u32, b as u32);
                }
            }
        }
    }

    let mut zero_root = vec![false; n];
    for z in p.zero_words() {
        let len = z.len();
        if len > k {
            continue;
        }
        let zc = z.encode(m);
        for pos in 0..=k - len {
            let tail = k - len - pos;
            let (shift_u, shift_mid) = (pow(k - pos), pow(tail));
            for u in 0..pow(pos) {
                for v in 0..pow(tail) {
                    let a = (u * shift_u + zc * shift_mid + v) as u32;
                    let root = uf.find(a);
                    zero_root[root as usize] = true;
                }
            }
        }
    }

    let mut id_of_root = vec![u32::MAX; n];
    let mut nonzero = 0u32;
    let mut roots = Vec::with_capacity(n);
    for i in 0..n as u32 {
        let r = uf.find(i);
        roots.push(r);
        if r == i && !zero_root[i as usize] {
            id_of_root[i as usize] = nonzero;
            nonzero += 1;
        }
    }
    let table =
        roots.into_iter().map(|r| if zero_root[r as usize] { nonzero } else { id_of_root[r as usize] }).collect();
    LengthClasses::from_table(k, m, table, nonzero as usize)
}

fn layer_from_full(prev: &Layer, classes: &LengthClasses, m: usize) -> Layer {
    let mut next = Vec::with_capacity(prev.nonzero_count() * m);
    for rep in &prev.reps {
        for x in 0..m {
            let code = rep.encode(m) * m as u64 + x as u64;
            let c = classes.table()[code as usize];
            next.push(if classes.is_zero(c) { ZERO } else { c });
        }
    }
    Layer { reps: classes.reps()[..classes.nonzero_count()].to_vec(), has_zero: classes.zero_class().is_some(), next }
}

/// Builds layer `k` from layers `0..k` using only canonical-prefix words.
fn pruned_layer(p: &Presentation, graded: &GradedClasses, k: usize) -> Layer {
    let m = graded.alphabet_size;
    let prev = graded.layer(k - 1);
    let sink = (prev.nonzero_count() * m) as u32;
    let mut uf = MinUnionFind::new(sink as usize + 1);
    let node = |prefix_class: u32, last: usize| {
        if prefix_class == ZERO {
            sink
        } else {
            prefix_class * m as u32 + last as u32
        }
    };
    // node for `d·w` where `d` is the rep of a class of length k - |w|
    let attach = |d: &Word, w: &Word| {
        let body = Word::from(d.letters().iter().chain(&w.letters()[..w.len() - 1]).copied().collect::<Vec<_>>());
        node(graded.class_of(&body), w.last().expect("nonempty"))
    };

    for (l, r) in p.equations() {
        if l.len() > k {
            continue;
        }
        for d in &graded.layer(k - l.len()).reps {
            let (a, b) = (attach(d, l), attach(d, r));
            uf.union(a, b);
        }
    }

    let mut zero_marked = vec![false; sink as usize + 1];
    zero_marked[sink as usize] = true;
    for z in p.zero_words() {
        if z.len() > k {
            continue;
        }
        for d in &graded.layer(k - z.len()).reps {
            zero_marked[attach(d, z) as usize] = true;
        }
    }
    let mut zero_root = vec![false; sink as usize + 1];
    for i in 0..=sink {
        if zero_marked[i as usize] {
            let r = uf.find(i);
            zero_root[r as usize] = true;
        }
    }

    let mut reps = Vec::new();
    let mut id_of_root = vec![ZERO; sink as usize + 1];
    let mut next = Vec::with_capacity(sink as usize);
    let mut has_zero = false;
    for i in 0..sink {
        let r = uf.find(i);
        if zero_root[r as usize] {
            has_zero = true;
            next.push(ZERO);
            continue;
        }
        if r == i {
            id_of_root[i as usize] = reps.len() as u32;
            let c = i / m as u32;
            let mut w = prev.reps[c as usize].clone();
            w.push((i % m as u32) as usize);
            reps.push(w);
        }
        next.push(id_of_root[r as usize]);
    }
    // words with a zero prefix are zero as well
    has_zero |= prev.has_zero;
    Layer { reps, has_zero, next }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LcVerdict {
    Pass,
    Violation,
}

/// `x·first = x·second` with `first != second`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcWitness {
    pub generator: usize,
    pub first: Word,
    pub second: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcReport {
    pub verdict: LcVerdict,
    pub witness: Option<LcWitness>,
    /// Deepest length fully checked (or the length of the violation).
    pub depth_checked: usize,
}

impl LcReport {
    pub fn passed(&self) -> bool {
        self.verdict == LcVerdict::Pass
    }
}

pub fn length_classes(p: &Presentation, k: usize) -> Result<LengthClasses> {
    Engine::default().length_classes(p, k)
}

pub fn count_nonzero(p: &Presentation, k: usize) -> Result<u64> {
    Engine::default().count_nonzero(p, k)
}

pub fn check_left_cancellative(p: &Presentation, depth: usize) -> Result<LcReport> {
    Engine::default().check_left_cancellative(p, depth)
}
