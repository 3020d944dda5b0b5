//! Finite rank prefixes of the colored poset of a homogeneous monoid.
//!
//! Elements of rank `k` are the nonzero classes of length `k`; `C ⋖ D` with
//! color `x` when `D` is the class of `rep(C)·x`. Zero classes are dropped, so
//! a 0-monoid yields a semi-upho prefix.

use serde::Serialize;

use crate::congruence::{Engine, GradedClasses, LengthClasses, ZERO};
use crate::error::Result;
use crate::presentation::Presentation;
use crate::series::Series;
use crate::word::{Alphabet, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Element {
    pub rank: usize,
    pub id: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: Element,
    pub to: Element,
    pub color: usize,
}

#[derive(Debug, Clone)]
pub struct ColoredPosetPrefix {
    alphabet: Alphabet,
    graded: GradedClasses,
}

pub fn build_poset_prefix(p: &Presentation, max_rank: usize) -> Result<ColoredPosetPrefix> {
    build_poset_prefix_with(&Engine::default(), p, max_rank)
}

pub fn build_poset_prefix_with(engine: &Engine, p: &Presentation, max_rank: usize) -> Result<ColoredPosetPrefix> {
    let graded = engine.graded(p, max_rank)?;
    Ok(ColoredPosetPrefix { alphabet: p.alphabet().clone(), graded })
}

impl ColoredPosetPrefix {
    pub fn max_rank(&self) -> usize {
        self.graded.max_len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn layer_counts(&self) -> Vec<u64> {
        self.graded.counts()
    }

    pub fn elements(&self, rank: usize) -> impl Iterator<Item = Element> + '_ {
        (0..self.graded.layer(rank).nonzero_count() as u32).map(move |id| Element { rank, id })
    }

    pub fn rep(&self, e: Element) -> &Word {
        self.graded.rep(e.rank, e.id)
    }

    pub fn label(&self, e: Element) -> String {
        self.alphabet.render_compact(self.rep(e))
    }

    /// Element reached from `e` along the edge colored `x`, if present.
    pub fn follow(&self, e: Element, x: usize) -> Option<Element> {
        if e.rank >= self.max_rank() {
            return None;
        }
        match self.graded.step(e.rank, e.id, x) {
            ZERO => None,
            id => Some(Element { rank: e.rank + 1, id }),
        }
    }

    /// Edges leaving `e`, in color order.
    pub fn out_edges(&self, e: Element) -> Vec<Edge> {
        (0..self.alphabet.len()).filter_map(|x| self.follow(e, x).map(|to| Edge { from: e, to, color: x })).collect()
    }

    /// All covering relations, ordered by (rank, source, color).
    pub fn edges(&self) -> Vec<Edge> {
        (0..self.max_rank())
            .flat_map(|k| self.elements(k).collect::<Vec<_>>())
            .flat_map(|e| self.out_edges(e))
            .collect()
    }

    /// Elements of `rank` reachable from `e` (including `e` at its own rank).
    pub fn above(&self, e: Element, rank: usize) -> Vec<Element> {
        let mut frontier = vec![e];
        for _ in e.rank..rank {
            let mut next: Vec<Element> = frontier.iter().flat_map(|&f| self.out_edges(f)).map(|ed| ed.to).collect();
            next.sort_by_key(|x| x.id);
            next.dedup();
            frontier = next;
        }
        frontier
    }

    #[cfg(test)]
    pub(crate) fn graded(&self) -> &GradedClasses {
        &self.graded
    }
}

pub fn rank_generating_prefix(poset: &ColoredPosetPrefix) -> Series<i64> {
    Series::new(poset.layer_counts().into_iter().map(|c| c as i64).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HasseFormat {
    Dot,
    Json,
}

#[derive(Serialize)]
struct JsonEdge {
    from: String,
    to: String,
    color: String,
}

#[derive(Serialize)]
struct JsonHasse {
    max_rank: usize,
    layers: Vec<Vec<String>>,
    edges: Vec<JsonEdge>,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn export_hasse(poset: &ColoredPosetPrefix, format: HasseFormat) -> String {
    let color = |x: usize| poset.alphabet.name(x).to_string();
    match format {
        HasseFormat::Dot => {
            let mut out = String::from("digraph hasse {\n  rankdir=BT;\n");
            for k in 0..=poset.max_rank() {
                for e in poset.elements(k) {
                    out += &format!("  {};\n", quote(&poset.label(e)));
                }
            }
            for ed in poset.edges() {
                out += &format!(
                    "  {} -> {} [color_label={}];\n",
                    quote(&poset.label(ed.from)),
                    quote(&poset.label(ed.to)),
                    quote(&color(ed.color))
                );
            }
            out += "}\n";
            out
        }
        HasseFormat::Json => {
            let doc = JsonHasse {
                max_rank: poset.max_rank(),
                layers: (0..=poset.max_rank()).map(|k| poset.elements(k).map(|e| poset.label(e)).collect()).collect(),
                edges: poset
                    .edges()
                    .into_iter()
                    .map(|ed| JsonEdge { from: poset.label(ed.from), to: poset.label(ed.to), color: color(ed.color) })
                    .collect(),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
            s.push('\n');
            s
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundTripVerdict {
    Pass,
    Fail,
}

/// Words are rendered compactly; `None` stands for zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub s: String,
    pub t: String,
    pub expected: Option<String>,
    pub got: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundTripReport {
    pub verdict: RoundTripVerdict,
    pub depth: usize,
    pub pairs_checked: u64,
    pub first_discrepancy: Option<Discrepancy>,
}

/// Compares `s·t` computed by closing `rep(s)·rep(t)` in a fresh stratum
/// against walking the color word of `t` upward from `s`.
pub fn roundtrip_multiplication_check(
    poset: &ColoredPosetPrefix,
    p: &Presentation,
    depth: usize,
) -> Result<RoundTripReport> {
    let depth = depth.min(poset.max_rank());
    let engine = Engine::default();
    let strata: Vec<LengthClasses> = (0..=depth).map(|k| engine.length_classes(p, k)).collect::<Result<_>>()?;
    let mut checked = 0u64;
    for a in 0..=depth {
        for s in poset.elements(a) {
            for b in 0..=depth - a {
                for t in poset.elements(b) {
                    checked += 1;
                    let word = poset.rep(s).concat(poset.rep(t));
                    let stratum = &strata[a + b];
                    let c = stratum.class_of(&word)?;
                    let expected = (!stratum.is_zero(c)).then(|| stratum.rep(c).clone());
                    let mut walk = Some(s);
                    for &x in poset.rep(t).letters() {
                        walk = walk.and_then(|e| poset.follow(e, x));
                    }
                    let got = walk.map(|e| poset.rep(e).clone());
                    if got != expected {
                        let render = |w: Option<Word>| w.map(|w| poset.alphabet.render_compact(&w));
                        return Ok(RoundTripReport {
                            verdict: RoundTripVerdict::Fail,
                            depth,
                            pairs_checked: checked,
                            first_discrepancy: Some(Discrepancy {
                                s: poset.label(s),
                                t: poset.label(t),
                                expected: render(expected),
                                got: render(got),
                            }),
                        });
                    }
                }
            }
        }
    }
    Ok(RoundTripReport { verdict: RoundTripVerdict::Pass, depth, pairs_checked: checked, first_discrepancy: None })
}
