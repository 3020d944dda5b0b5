//! Greedy 0-monoid and greedy LCH series, the counting identities behind
//! them, and conversion of an LC presentation into a free 0-monoid with the
//! same layer counts.

use std::collections::HashSet;

use serde::Serialize;
use serde_json::{json, Value};

use crate::congruence::Engine;
use crate::error::{Error, Result};
use crate::presentation::{DeclaredClass, Presentation};
use crate::word::{Alphabet, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GreedyVerdict {
    Success,
    Failure,
}

/// One length of the greedy 0-monoid construction. `count` is the number of
/// nonzero words of length `k` before the kill.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyStep {
    pub k: usize,
    pub count: u64,
    pub killed: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyZeroResult {
    pub verdict: GreedyVerdict,
    pub steps: Vec<GreedyStep>,
    pub failure_k: Option<usize>,
    pub presentation: Presentation,
}

impl GreedyZeroResult {
    pub fn succeeded(&self) -> bool {
        self.verdict == GreedyVerdict::Success
    }

    pub fn to_json(&self) -> Value {
        let a = self.presentation.alphabet();
        json!({
            "verdict": self.verdict,
            "steps": self.steps.iter().map(|s| json!({
                "k": s.k,
                "killed": s.killed.iter().map(|w| a.render(w)).collect::<Vec<_>>(),
                "count": s.count,
            })).collect::<Vec<_>>(),
            "failure_k": self.failure_k,
            "presentation": self.presentation.to_text(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LchFailure {
    CountTooSmall,
    NotWeaklyIncreasing,
    MergeAnomaly,
}

/// One length of the greedy LCH construction. `count` is the number of
/// classes of length `k` before new relations, `recount` after.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LchStep {
    pub k: usize,
    pub count: u64,
    pub relations: Vec<(Word, Word)>,
    pub recount: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyLchResult {
    pub verdict: GreedyVerdict,
    pub steps: Vec<LchStep>,
    pub failure_k: Option<usize>,
    pub failure_reason: Option<LchFailure>,
    pub presentation: Presentation,
}

impl GreedyLchResult {
    pub fn succeeded(&self) -> bool {
        self.verdict == GreedyVerdict::Success
    }

    pub fn to_json(&self) -> Value {
        let a = self.presentation.alphabet();
        json!({
            "verdict": self.verdict,
            "steps": self.steps.iter().map(|s| json!({
                "k": s.k,
                "relations": s.relations.iter()
                    .map(|(l, r)| format!("{} = {}", a.render(l), a.render(r)))
                    .collect::<Vec<_>>(),
                "count": s.count,
                "recount": s.recount,
            })).collect::<Vec<_>>(),
            "failure_k": self.failure_k,
            "failure_reason": self.failure_reason,
            "presentation": self.presentation.to_text(),
        })
    }
}

fn check_sequence(b: &[u64], depth: usize) -> Result<()> {
    if b.first() != Some(&1) {
        return Err(Error::InvalidInput("sequence must start with 1".into()));
    }
    if b.len() < 2 || b[1] == 0 {
        return Err(Error::InvalidInput("first coefficient must be at least 1".into()));
    }
    if depth == 0 {
        return Err(Error::InvalidInput("depth must be at least 1".into()));
    }
    if depth >= b.len() {
        return Err(Error::InvalidInput(format!("depth {depth} needs {} coefficients, got {}", depth + 1, b.len())));
    }
    Ok(())
}

/// Nonzero words of every length `0..=max_len` of a free 0-monoid, in k-lex
/// order, found by extending nonzero words one letter at a time and testing
/// only suffixes.
pub fn nonzero_words(zp: &Presentation, max_len: usize) -> Vec<Vec<Word>> {
    let m = zp.alphabet().len();
    let mut layers = vec![vec![Word::empty()]];
    for _ in 0..max_len {
        let prev = layers.last().unwrap();
        let mut next = Vec::new();
        for u in prev {
            for x in 0..m {
                let mut w = u.clone();
                w.push(x);
                let dead = zp.zero_words().iter().any(|z| w.letters().ends_with(z.letters()));
                if !dead {
                    next.push(w);
                }
            }
        }
        layers.push(next);
    }
    layers
}

pub fn greedy_zero_series(b: &[u64], depth: usize) -> Result<GreedyZeroResult> {
    check_sequence(b, depth)?;
    let m = b[1] as usize;
    let alphabet = Alphabet::numbered("x", m);
    let mut zero_words: Vec<Word> = Vec::new();
    let mut steps = Vec::new();
    let mut current: Vec<Word> = (0..m).map(|x| Word::from(vec![x])).collect();
    let mut failure_k = None;
    for k in 2..=depth {
        let mut next = Vec::new();
        for u in &current {
            for x in 0..m {
                let mut w = u.clone();
                w.push(x);
                // the new zero words all have length k - 1 or less, so only the
                // length k - 1 suffix can newly contain one
                if current.binary_search(&Word::from(w.letters()[1..].to_vec())).is_ok() {
                    next.push(w);
                }
            }
        }
        let count = next.len() as u64;
        if count < b[k] {
            steps.push(GreedyStep { k, count, killed: Vec::new() });
            failure_k = Some(k);
            break;
        }
        let killed = next.split_off(b[k] as usize);
        zero_words.extend(killed.iter().cloned());
        steps.push(GreedyStep { k, count, killed });
        current = next;
    }
    let presentation = Presentation::free_zero(alphabet, zero_words)?;
    let verdict = if failure_k.is_some() { GreedyVerdict::Failure } else { GreedyVerdict::Success };
    Ok(GreedyZeroResult { verdict, steps, failure_k, presentation })
}

/// True when the greedy 0-monoid series of `b` survives to `depth`. For a
/// log-concave `b` this is a theorem, so `false` signals a bug.
pub fn is_certified_log_concave_pass(b: &[u64], depth: usize) -> Result<bool> {
    Ok(greedy_zero_series(b, depth)?.succeeded())
}

pub fn greedy_lch_series(c: &[u64], depth: usize) -> Result<GreedyLchResult> {
    greedy_lch_series_with(&Engine::default(), c, depth)
}

pub fn greedy_lch_series_with(engine: &Engine, c: &[u64], depth: usize) -> Result<GreedyLchResult> {
    check_sequence(c, depth)?;
    let m = c[1] as usize;
    let alphabet = Alphabet::numbered("x", m);
    let mut equations: Vec<(Word, Word)> = Vec::new();
    let mut steps = Vec::new();
    let build = |eqs: &[(Word, Word)]| {
        Presentation::new(alphabet.clone(), false, eqs.to_vec(), Vec::new(), DeclaredClass::HeadChanging)
    };
    let mut presentation = build(&equations)?;
    let fail = |steps, k, reason, presentation| GreedyLchResult {
        verdict: GreedyVerdict::Failure,
        steps,
        failure_k: Some(k),
        failure_reason: Some(reason),
        presentation,
    };
    for k in 2..=depth {
        let classes = engine.length_classes(&presentation, k)?;
        let count = classes.nonzero_count() as u64;
        if c[k] < c[k - 1] {
            steps.push(LchStep { k, count, relations: Vec::new(), recount: None });
            return Ok(fail(steps, k, LchFailure::NotWeaklyIncreasing, presentation));
        }
        if count < c[k] {
            steps.push(LchStep { k, count, relations: Vec::new(), recount: None });
            return Ok(fail(steps, k, LchFailure::CountTooSmall, presentation));
        }
        let mut added = Vec::new();
        for id in c[k]..count {
            let rep = classes.rep(id as u32);
            let head = rep.letters()[0];
            if head == 0 {
                steps.push(LchStep { k, count, relations: added, recount: None });
                return Ok(fail(steps, k, LchFailure::MergeAnomaly, presentation));
            }
            let mut lower = rep.letters().to_vec();
            lower[0] = head - 1;
            added.push((rep.clone(), Word::from(lower)));
        }
        equations.extend(added.iter().cloned());
        presentation = build(&equations)?;
        let recount = engine.count_nonzero(&presentation, k)?;
        steps.push(LchStep { k, count, relations: added, recount: Some(recount) });
        if recount != c[k] {
            return Ok(fail(steps, k, LchFailure::MergeAnomaly, presentation));
        }
    }
    Ok(GreedyLchResult { verdict: GreedyVerdict::Success, steps, failure_k: None, failure_reason: None, presentation })
}

/// 1-based letter indices of the k-lex largest nonzero word of length `k`.
fn largest_word_indices(layers: &[Vec<Word>], k: usize) -> Result<Vec<u64>> {
    let l = layers[k].last().ok_or_else(|| Error::InvalidInput(format!("no nonzero word of length {k}")))?;
    Ok(l.letters().iter().map(|&x| x as u64 + 1).collect())
}

fn bk_sum(a: &[u64], counts: &[u64], top: usize, s: usize) -> u64 {
    // Σ_{i<s} (a_i − 1)·counts[top − i] + a_s·counts[top − s], 1-based i
    let mut total = 0;
    for i in 1..s {
        total += (a[i - 1] - 1) * counts[top - i];
    }
    total + a[s - 1] * counts[top - s]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

/// Bound on `|W_k|` from the digits of the largest nonzero word, cut after
/// `s` digits. At `s = k` the bound is an identity; a strict inequality there
/// is reported as an anomaly.
pub fn split_bk_check(zp: &Presentation, k: usize, s: usize) -> Result<SplitReport> {
    if s == 0 || s > k {
        return Err(Error::InvalidInput(format!("need 1 <= s <= k, got s = {s}, k = {k}")));
    }
    let layers = nonzero_words(zp, k);
    let counts: Vec<u64> = layers.iter().map(|l| l.len() as u64).collect();
    let a = largest_word_indices(&layers, k)?;
    let lhs = counts[k];
    let rhs = bk_sum(&a, &counts, k, s);
    if s == k && lhs != rhs {
        return Err(Error::Anomaly(format!("|W_{k}| = {lhs} but the digit identity gives {rhs}")));
    }
    Ok(SplitReport { lhs, rhs, holds: lhs <= rhs })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NextCount {
    pub count: u64,
    pub s_witness: usize,
}

/// `|W_{k+1}|` by direct scan, together with the least `s` for which the
/// digit formula over the largest length-`k` word reproduces it. `zp` should
/// be the greedy 0-monoid built through step `k` only; words killed at step
/// `k + 1` are not part of the count.
pub fn count_next_from_current(zp: &Presentation, k: usize) -> Result<NextCount> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let layers = nonzero_words(zp, k + 1);
    let counts: Vec<u64> = layers.iter().map(|l| l.len() as u64).collect();
    let a = largest_word_indices(&layers, k)?;
    let count = counts[k + 1];
    (1..=k)
        .find(|&s| bk_sum(&a, &counts, k + 1, s) == count)
        .map(|s_witness| NextCount { count, s_witness })
        .ok_or_else(|| Error::Anomaly(format!("no s in 1..={k} reproduces |W_{}| = {count}", k + 1)))
}

/// Free 0-monoid whose nonzero words are the canonical representatives of
/// `p` up to `depth`. Its zero words are the minimal non-canonical words.
pub fn treeify(p: &Presentation, depth: usize) -> Result<Presentation> {
    treeify_with(&Engine::default(), p, depth)
}

pub fn treeify_with(engine: &Engine, p: &Presentation, depth: usize) -> Result<Presentation> {
    if p.has_zero() {
        return Err(Error::InvalidInput("treeify expects a presentation without zero".into()));
    }
    let lc = engine.check_left_cancellative(p, depth)?;
    if !lc.passed() {
        return Err(Error::NotLeftCancellative(format!("violation within depth {depth}")));
    }
    let graded = engine.graded(p, depth)?;
    let m = p.alphabet().len();
    let mut zero_words = Vec::new();
    for k in 1..=depth {
        let canonical: HashSet<&Word> = graded.layer(k).reps.iter().collect();
        let shorter: HashSet<&Word> = graded.layer(k - 1).reps.iter().collect();
        for u in &graded.layer(k - 1).reps {
            for x in 0..m {
                let mut w = u.clone();
                w.push(x);
                let suffix = Word::from(w.letters()[1..].to_vec());
                if !canonical.contains(&w) && shorter.contains(&suffix) {
                    zero_words.push(w);
                }
            }
        }
    }
    Presentation::free_zero(p.alphabet().clone(), zero_words)
}
