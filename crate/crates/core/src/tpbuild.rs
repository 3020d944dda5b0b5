//! From a totally positive `g/h` to a head-changing presentation whose layer
//! counts are the coefficients of `g/h`.
//!
//! Conventions: `h = 1 + Σ (-1)^i h_i x^i`, so `h_i = (-1)^i [x^i]h`.

use num_integer::binomial;
use serde::{Deserialize, Serialize};

use crate::congruence::Engine;
use crate::convolution::{convolve, ConvolutionSpec};
use crate::error::{Error, Result};
use crate::greedy::{greedy_zero_series, treeify_with};
use crate::presentation::{DeclaredClass, Presentation};
use crate::series::{
    classify_roots, factor_over_z, is_log_concave, series_ratio, series_reciprocal, Matrix, Polynomial, RootVerdict,
};
use crate::word::{Alphabet, Word};

pub const DEFAULT_DEPTH: usize = 6;

/// Order up to which `l_values` cross-checks `(1…1) L^i e_1` against `1/h`.
const L_CHECK_ORDER: usize = 8;

fn degree_of(h: &Polynomial<i64>) -> Result<usize> {
    if h.constant() != 1 {
        return Err(Error::InvalidInput(format!("constant term of {h} must be 1")));
    }
    match h.degree() {
        Some(n) if n >= 1 => Ok(n),
        _ => Err(Error::InvalidInput("polynomial must have degree at least 1".into())),
    }
}

/// `h_1 .. h_n` (index 0 unused).
fn signed_coeffs(h: &Polynomial<i64>) -> Vec<i64> {
    (0..=h.degree().unwrap_or(0)).map(|i| if i % 2 == 0 { h.coeff(i) } else { -h.coeff(i) }).collect()
}

pub fn companion_matrix(h: &Polynomial<i64>) -> Result<Matrix<i64>> {
    let n = degree_of(h)?;
    Ok(Matrix::from_fn(n, n, |i, j| match i {
        0 => -h.coeff(j + 1),
        _ if j + 1 == i => 1,
        _ => 0,
    }))
}

fn sign(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `(A_n, B_n)` with `A_n B_n = I_n`.
pub fn change_of_basis(n: usize) -> Result<(Matrix<i64>, Matrix<i64>)> {
    if n == 0 {
        return Err(Error::InvalidInput("change of basis needs n >= 1".into()));
    }
    let a = Matrix::from_fn(n, n, |i, j| {
        let (i, j) = (i + 1, j + 1);
        if i == 1 {
            1
        } else if i + j < n + 2 {
            0
        } else {
            sign(n - j) * binomial((i - 2) as i64, (n - j) as i64)
        }
    });
    let b = Matrix::from_fn(n, n, |i, j| {
        let (i, j) = (i + 1, j + 1);
        if i == 1 {
            sign(j + 1) * binomial((n - 1) as i64, (j - 1) as i64)
        } else if j == 1 || i + j > n + 2 {
            0
        } else {
            sign(j) * binomial((n - i) as i64, (j - 2) as i64)
        }
    });
    Ok((a, b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LValues {
    /// `l_1 .. l_n`.
    pub l: Vec<i64>,
    /// `L_n = B_n H_n A_n`.
    pub matrix: Matrix<i64>,
}

impl LValues {
    /// `l_1 - 1 >= l_2 >= ... >= l_n >= 1`.
    pub fn is_monotone(&self) -> bool {
        let l = &self.l;
        if l.len() == 1 {
            return l[0] >= 1;
        }
        l[0] > l[1] && l[1..].windows(2).all(|w| w[0] >= w[1]) && *l.last().unwrap() >= 1
    }
}

/// Closed formula for `l_i`, `1 <= i <= n`.
fn l_closed(hs: &[i64], n: usize, i: usize) -> i64 {
    let mut v = hs[1];
    for t in 0..i.saturating_sub(1) {
        let binom = binomial((n - i + t) as i64, (n - i) as i64);
        v += sign(t + 1) * binom * hs[n - i + 2 + t];
    }
    v - n as i64 + i as i64 - if i == 1 { 0 } else { 1 }
}

pub fn l_values(h: &Polynomial<i64>) -> Result<LValues> {
    let n = degree_of(h)?;
    let hs = signed_coeffs(h);
    let (a, b) = change_of_basis(n)?;
    let big_h = companion_matrix(h)?;
    let big_l = &(&b * &big_h) * &a;
    let l: Vec<i64> = (1..=n).map(|i| l_closed(&hs, n, i)).collect();
    if big_l.row(0) != l.as_slice() {
        return Err(Error::Anomaly(format!(
            "closed-form l values {l:?} disagree with first row {:?} of B H A",
            big_l.row(0)
        )));
    }
    for i in 1..n {
        for j in 0..n {
            let want = i64::from(j <= i);
            if *big_l.get(i, j) != want {
                return Err(Error::Anomaly(format!("L({}, {}) = {}, expected {want}", i + 1, j + 1, big_l.get(i, j))));
            }
        }
    }
    let wide = Matrix::from_fn(n, n, |i, j| *big_l.get(i, j) as i128);
    let c = series_reciprocal(&h.map(|&x| x as i128), L_CHECK_ORDER + 1)?;
    let mut power = Matrix::<i128>::identity(n);
    for i in 0..=L_CHECK_ORDER {
        let via_l: i128 = (0..n).map(|r| *power.get(r, 0)).sum();
        if via_l != c.coeffs()[i] {
            return Err(Error::Anomaly(format!("(1..1) L^{i} e_1 = {via_l}, but [x^{i}] 1/h = {}", c.coeffs()[i])));
        }
        power = &power * &wide;
    }
    Ok(LValues { l, matrix: big_l })
}

/// `a, b, c, ...` while they last, `x1, x2, ...` beyond.
fn letter_names(count: usize) -> Vec<String> {
    if count <= 26 {
        (0..count).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (1..=count).map(|i| format!("x{i}")).collect()
    }
}

fn require_irreducible(h: &Polynomial<i64>) -> Result<()> {
    let factors = factor_over_z(h)?;
    if factors.len() != 1 {
        return Err(Error::Routing(format!("{h} is reducible over Z")));
    }
    Ok(())
}

pub fn build_type2_monoid(h: &Polynomial<i64>) -> Result<Presentation> {
    let n = degree_of(h)?;
    let verdict = classify_roots(h)?.verdict;
    if verdict != RootVerdict::TypeII {
        return Err(Error::Routing(format!("{h} classifies as {}, not type_II", verdict.as_str())));
    }
    require_irreducible(h)?;
    let lv = l_values(h)?;
    if !lv.is_monotone() {
        return Err(Error::Anomaly(format!("l values {:?} of type II input {h} are not monotone", lv.l)));
    }
    let l = &lv.l;
    let l1 = l[0] as usize;
    // x^1_t sits at t - 1, x^k_1 at l_1 + k - 2
    let top = |t: usize| t - 1;
    let head = |k: usize| l1 + k - 2;
    let alphabet = Alphabet::new(letter_names(l1 + n - 1))?;
    let mut equations = Vec::new();
    for k in 2..=n {
        for t in 1..=(l[0] - l[k - 1]) as usize {
            equations.push((Word::from(vec![head(k), top(t)]), Word::from(vec![top(1), top(t)])));
        }
    }
    for k in 2..=n {
        for j in 2..k {
            equations.push((Word::from(vec![head(k), head(j)]), Word::from(vec![top(1), head(j)])));
        }
    }
    let declared = if equations.is_empty() { DeclaredClass::Free } else { DeclaredClass::HeadChanging };
    Presentation::new(alphabet, false, equations, Vec::new(), declared)
}

pub fn build_type1_monoid(h: &Polynomial<i64>, depth: usize) -> Result<Presentation> {
    build_type1_monoid_with(&Engine::default(), h, depth)
}

pub fn build_type1_monoid_with(engine: &Engine, h: &Polynomial<i64>, depth: usize) -> Result<Presentation> {
    let n = degree_of(h)?;
    let verdict = classify_roots(h)?.verdict;
    if verdict != RootVerdict::TypeI || n < 2 {
        return Err(Error::Routing(format!("{h} classifies as {}, not type_I", verdict.as_str())));
    }
    if depth == 0 {
        return Err(Error::InvalidInput("depth must be at least 1".into()));
    }
    require_irreducible(h)?;
    let s = series_ratio(&Polynomial::new(vec![1, -1]), h, depth + 1)?.into_vec();
    if !is_log_concave(&s) || s.iter().any(|&c| c <= 0) {
        return Err(Error::Anomaly(format!("(1 - x)/({h}) = {s:?} is not positive and log-concave")));
    }
    let b: Vec<u64> = s.iter().map(|&c| c as u64).collect();
    let greedy = greedy_zero_series(&b, depth)?;
    if !greedy.succeeded() {
        return Err(Error::Anomaly(format!("greedy 0-monoid series failed on log-concave {s:?}")));
    }
    let zero = greedy.presentation.relabeled(Alphabet::numbered("y", b[1] as usize))?;
    let chain = Presentation::free(Alphabet::new(["x"])?);
    let out = convolve(&ConvolutionSpec::new(chain, zero, None)?)?;
    let want = series_reciprocal(h, depth + 1)?.into_vec();
    let got = engine.layer_counts(&out, depth)?;
    if !same_counts(&want, &got) {
        return Err(Error::Anomaly(format!("type I monoid counts {got:?} differ from 1/h = {want:?}")));
    }
    Ok(out)
}

fn same_counts(want: &[i64], got: &[u64]) -> bool {
    want.len() == got.len() && want.iter().zip(got).all(|(&w, &g)| w >= 0 && w as u64 == g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RouteKind {
    #[serde(rename = "linear")]
    Linear,
    #[serde(rename = "type_I")]
    TypeI,
    #[serde(rename = "type_II")]
    TypeII,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Route {
    /// Coefficients, constant term first.
    pub factor: Vec<i64>,
    pub route: RouteKind,
    pub generators: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub target: Vec<i64>,
    pub enumerated: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateVerdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TpCertificate {
    pub g: Vec<i64>,
    pub h: Vec<i64>,
    pub routing: Vec<Route>,
    /// v1 text.
    pub presentation: String,
    pub depth: usize,
    pub coefficients: CoefficientTable,
    pub verdict: CertificateVerdict,
}

impl TpCertificate {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("certificate: {e}")))
    }

    pub fn parsed_presentation(&self) -> Result<Presentation> {
        Presentation::parse(&self.presentation)
    }
}

fn route_factor(engine: &Engine, f: &Polynomial<i64>, depth: usize) -> Result<(RouteKind, Presentation)> {
    if f.degree() == Some(1) {
        let a = -f.coeff(1);
        if a < 1 {
            return Err(Error::Routing(format!("factor {f} has a negative root")));
        }
        return Ok((RouteKind::Linear, Presentation::free(Alphabet::new(letter_names(a as usize))?)));
    }
    let verdict = classify_roots(f)?.verdict;
    match verdict {
        RootVerdict::TypeII => Ok((RouteKind::TypeII, build_type2_monoid(f)?)),
        RootVerdict::TypeI => Ok((RouteKind::TypeI, build_type1_monoid_with(engine, f, depth)?)),
        other => Err(Error::Routing(format!("factor {f} classifies as {}", other.as_str()))),
    }
}

pub fn build_tp_monoid(g: &Polynomial<i64>, h: &Polynomial<i64>, depth: usize) -> Result<TpCertificate> {
    build_tp_monoid_with(&Engine::default(), g, h, depth)
}

/// Factors of `h` are folded in ascending degree; the numerator comes last.
pub fn build_tp_monoid_with(
    engine: &Engine,
    g: &Polynomial<i64>,
    h: &Polynomial<i64>,
    depth: usize,
) -> Result<TpCertificate> {
    if depth == 0 {
        return Err(Error::InvalidInput("depth must be at least 1".into()));
    }
    degree_of(h)?;
    if g.constant() != 1 {
        return Err(Error::InvalidInput(format!("constant term of {g} must be 1")));
    }
    let g_verdict = classify_roots(g)?.verdict;
    if g_verdict != RootVerdict::AllNegative {
        return Err(Error::Routing(format!("numerator {g} classifies as {}", g_verdict.as_str())));
    }
    let target = series_ratio(g, h, depth + 1)?.into_vec();
    if let Some(k) = target.iter().position(|&c| c < 0) {
        return Err(Error::Routing(format!("coefficient {k} of the target series is negative")));
    }

    let mut routing = Vec::new();
    let mut current: Option<Presentation> = None;
    for (i, f) in factor_over_z(h)?.iter().enumerate() {
        let (route, p) = route_factor(engine, f, depth)?;
        routing.push(Route { factor: f.coeffs().to_vec(), route, generators: p.alphabet().len() });
        let p = p.renamed(&format!("f{}_", i + 1))?;
        current = Some(match current {
            None => p,
            Some(m1) => {
                let tree = treeify_with(engine, &p, depth)?;
                convolve(&ConvolutionSpec::new(m1, tree, None)?)?
            }
        });
    }
    let mut current = current.expect("degree >= 1 has a factor");

    if g.degree().unwrap_or(0) > 0 {
        let mut b: Vec<u64> = g.coeffs().iter().map(|&c| c as u64).collect();
        b.resize(depth + 1, 0);
        b.truncate(depth + 1);
        let greedy = greedy_zero_series(&b, depth)?;
        if !greedy.succeeded() {
            return Err(Error::Anomaly(format!("greedy 0-monoid series failed on numerator {g}")));
        }
        let zero = greedy.presentation.renamed("g_")?;
        current = convolve(&ConvolutionSpec::new(current, zero, None)?)?;
    }

    let enumerated = engine.layer_counts(&current, depth)?;
    if !same_counts(&target, &enumerated) {
        return Err(Error::Anomaly(format!("enumerated {enumerated:?} differs from target {target:?}")));
    }
    Ok(TpCertificate {
        g: g.coeffs().to_vec(),
        h: h.coeffs().to_vec(),
        routing,
        presentation: current.to_text(),
        depth,
        coefficients: CoefficientTable { target, enumerated },
        verdict: CertificateVerdict::Pass,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    /// Recorded target equals `g/h` recomputed.
    pub target_matches: bool,
    /// Re-enumeration reproduces the recorded table.
    pub enumeration_matches: bool,
    /// Recorded target equals recorded enumeration.
    pub table_agrees: bool,
    pub recorded_pass: bool,
}

impl CertificateCheck {
    pub fn passed(&self) -> bool {
        self.target_matches && self.enumeration_matches && self.table_agrees && self.recorded_pass
    }
}

pub fn verify_certificate(cert: &TpCertificate) -> Result<CertificateCheck> {
    verify_certificate_with(&Engine::default(), cert)
}

pub fn verify_certificate_with(engine: &Engine, cert: &TpCertificate) -> Result<CertificateCheck> {
    let g = Polynomial::new(cert.g.clone());
    let h = Polynomial::new(cert.h.clone());
    let target = series_ratio(&g, &h, cert.depth + 1)?.into_vec();
    let p = cert.parsed_presentation()?;
    let enumerated = engine.layer_counts(&p, cert.depth)?;
    Ok(CertificateCheck {
        target_matches: target == cert.coefficients.target,
        enumeration_matches: enumerated == cert.coefficients.enumerated,
        table_agrees: same_counts(&cert.coefficients.target, &cert.coefficients.enumerated),
        recorded_pass: cert.verdict == CertificateVerdict::Pass,
    })
}

#[cfg(test)]
mod tests;
