//! The x-convolution of a homogeneous monoid `M1` with a free 0-monoid `M2`.
//!
//! The output alphabet is `M1`'s generators followed by `M2`'s. Relations:
//!
//! * class I: `M1`'s relations verbatim;
//! * class II: `y_i Y = x(y_i) Y` for each zero relation `y_i Y = 0` of `M2`;
//! * class III: `y_i x_j = x(y_i) x_j` for every `y_i` and `x_j`.

use serde::Serialize;

use crate::congruence::Engine;
use crate::error::{Error, Result};
use crate::presentation::{DeclaredClass, Presentation};
use crate::word::{Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvolutionSpec {
    m1: Presentation,
    m2: Presentation,
    xmap: Vec<usize>,
}

impl ConvolutionSpec {
    /// `xmap[i]` is the `M1` generator assigned to the `i`-th `M2` generator;
    /// `None` sends everything to `M1`'s least generator.
    ///
    /// Left-cancellativity of `m1` is the caller's responsibility; the count
    /// check in [`verify_convolution_counts`] exposes violations.
    pub fn new(m1: Presentation, m2: Presentation, xmap: Option<Vec<usize>>) -> Result<Self> {
        if m1.has_zero() {
            return Err(Error::InvalidInput("the left factor must not have a zero".into()));
        }
        if !m1.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        if m1.alphabet().is_empty() {
            return Err(Error::InvalidInput("the left factor needs a generator".into()));
        }
        if !m2.has_zero() || !m2.equations().is_empty() {
            return Err(Error::InvalidInput("the right factor must be a free 0-monoid".into()));
        }
        let xmap = xmap.unwrap_or_else(|| vec![0; m2.alphabet().len()]);
        if xmap.len() != m2.alphabet().len() {
            return Err(Error::InvalidInput(format!(
                "xmap covers {} generators, right factor has {}",
                xmap.len(),
                m2.alphabet().len()
            )));
        }
        if let Some(&bad) = xmap.iter().find(|&&x| x >= m1.alphabet().len()) {
            return Err(Error::InvalidInput(format!("xmap image {bad} is not a generator of the left factor")));
        }
        for name in m2.alphabet().names() {
            if m1.alphabet().position(name).is_some() {
                return Err(Error::DuplicateGenerator(name.clone()));
            }
        }
        Ok(ConvolutionSpec { m1, m2, xmap })
    }

    /// Parses `y1=x,y2=x`; unlisted generators get the default image.
    pub fn with_named_xmap(m1: Presentation, m2: Presentation, text: &str) -> Result<Self> {
        let mut xmap = vec![0; m2.alphabet().len()];
        for pair in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (y, x) =
                pair.split_once('=').ok_or_else(|| Error::InvalidInput(format!("xmap entry `{pair}` is not `y=x`")))?;
            let yi = m2.alphabet().position(y.trim()).ok_or_else(|| Error::UnknownGenerator(y.trim().into()))?;
            let xi = m1.alphabet().position(x.trim()).ok_or_else(|| Error::UnknownGenerator(x.trim().into()))?;
            xmap[yi] = xi;
        }
        ConvolutionSpec::new(m1, m2, Some(xmap))
    }

    pub fn m1(&self) -> &Presentation {
        &self.m1
    }

    pub fn m2(&self) -> &Presentation {
        &self.m2
    }

    pub fn xmap(&self) -> &[usize] {
        &self.xmap
    }

    fn offset(&self) -> usize {
        self.m1.alphabet().len()
    }
}

pub fn convolve(spec: &ConvolutionSpec) -> Result<Presentation> {
    let n1 = spec.offset();
    let names = spec.m1.alphabet().names().iter().chain(spec.m2.alphabet().names()).cloned();
    let alphabet = Alphabet::new(names)?;
    let y = |i: usize| i + n1;
    let shift = |w: &[usize]| w.iter().map(|&i| y(i)).collect::<Vec<_>>();

    let mut equations: Vec<(Word, Word)> = spec.m1.equations().to_vec();
    for z in spec.m2.zero_words() {
        let l = z.letters();
        let lhs = Word::from(shift(l));
        let mut rhs = vec![spec.xmap[l[0]]];
        rhs.extend(shift(&l[1..]));
        equations.push((lhs, Word::from(rhs)));
    }
    for (i, &img) in spec.xmap.iter().enumerate() {
        for j in 0..n1 {
            equations.push((Word::from(vec![y(i), j]), Word::from(vec![img, j])));
        }
    }
    let declared =
        if spec.m1.validate().head_changing { DeclaredClass::HeadChanging } else { DeclaredClass::Homogeneous };
    Presentation::new(alphabet, false, equations, Vec::new(), declared)
}

/// `X·Y` with `X` over `M1` and `Y` over `M2`, `Y` as short as possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardWordView {
    pub x_part: Word,
    pub y_part: Word,
    pub depth: usize,
}

/// Rewrites a word of the convolution into standard form. Every `M2` letter
/// left of an `M1` letter is replaced by its image (class III). In the
/// trailing `M2` block, the last occurrence of a zero word is rewritten by
/// class II, which turns everything up to its first letter into `M1` letters.
pub fn standard_word(spec: &ConvolutionSpec, w: &Word) -> Result<StandardWordView> {
    let n1 = spec.offset();
    let total = n1 + spec.m2.alphabet().len();
    if w.letters().iter().any(|&l| l >= total) {
        return Err(Error::InvalidInput("letter outside the convolution alphabet".into()));
    }
    let letters = w.letters();
    let tail_start = letters.iter().rposition(|&l| l < n1).map_or(0, |p| p + 1);
    let to_x = |l: usize| if l < n1 { l } else { spec.xmap[l - n1] };
    let mut x: Vec<usize> = letters[..tail_start].iter().map(|&l| to_x(l)).collect();
    let tail: Vec<usize> = letters[tail_start..].iter().map(|&l| l - n1).collect();
    let cut = (0..tail.len()).rev().find(|&p| spec.m2.zero_words().iter().any(|z| tail[p..].starts_with(z.letters())));
    let y = match cut {
        Some(p) => {
            x.extend(tail[..=p].iter().map(|&l| spec.xmap[l]));
            tail[p + 1..].to_vec()
        }
        None => tail,
    };
    let depth = y.len();
    Ok(StandardWordView { x_part: Word::from(x), y_part: Word::from(y), depth })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConvolutionCounts {
    pub counts: Vec<u64>,
    pub expected: Vec<u64>,
}

/// Layer counts of the convolution against the Cauchy product of the factors'
/// layer counts. A mismatch is an anomaly.
pub fn verify_convolution_counts(spec: &ConvolutionSpec, n: usize) -> Result<ConvolutionCounts> {
    verify_convolution_counts_with(&Engine::default(), spec, n)
}

pub fn verify_convolution_counts_with(engine: &Engine, spec: &ConvolutionSpec, n: usize) -> Result<ConvolutionCounts> {
    let conv = convolve(spec)?;
    let a = engine.layer_counts(&spec.m1, n)?;
    let b = engine.layer_counts(&spec.m2, n)?;
    let expected: Vec<u64> = (0..=n).map(|k| (0..=k).map(|i| a[k - i] * b[i]).sum()).collect();
    let counts = engine.layer_counts(&conv, n)?;
    if counts != expected {
        return Err(Error::Anomaly(format!(
            "convolution counts {counts:?} differ from the product of factor counts {expected:?}"
        )));
    }
    Ok(ConvolutionCounts { counts, expected })
}
