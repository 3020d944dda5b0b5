//! Exact real-root classification of the `λ_i` in `h(x) = c·∏(1 − λ_i x)`.
//!
//! The `λ_i` are the roots of the reversed polynomial. It is split into
//! squarefree parts (Yun) and each part is counted with a Sturm sequence
//! over the rationals, so no floating point enters a verdict.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{Polynomial, Scalar};
use crate::error::{Error, Result};

type Q = Polynomial<BigRational>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootVerdict {
    AllNegative,
    #[serde(rename = "type_I")]
    TypeI,
    #[serde(rename = "type_II")]
    TypeII,
    UnitRoot,
    Mixed,
}

impl RootVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            RootVerdict::AllNegative => "all_negative",
            RootVerdict::TypeI => "type_I",
            RootVerdict::TypeII => "type_II",
            RootVerdict::UnitRoot => "unit_root",
            RootVerdict::Mixed => "mixed",
        }
    }
}

/// Counts are with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootClassification {
    pub degree: usize,
    pub all_real: bool,
    pub negative_count: usize,
    pub positive_in_unit_count: usize,
    pub unit_count: usize,
    pub greater_than_one_count: usize,
    pub verdict: RootVerdict,
}

fn monic(p: &Q) -> Q {
    match p.leading() {
        Some(l) => {
            let inv = l.recip();
            p.scale(&inv)
        }
        None => p.clone(),
    }
}

fn rem(a: &Q, b: &Q) -> Q {
    a.div_rem(b).expect("field division").1
}

fn quot(a: &Q, b: &Q) -> Q {
    a.exact_div(b).expect("exact division over the rationals")
}

fn gcd(a: &Q, b: &Q) -> Q {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    monic(&a)
}

/// Yun's algorithm: returns `(part, multiplicity)` with `p = c·∏ part^mult`.
fn squarefree_parts(p: &Q) -> Vec<(Q, usize)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let d = p.derivative();
    let c = gcd(p, &d);
    let mut w = quot(p, &c);
    let mut y = quot(&d, &c);
    let mut z = &y - &w.derivative();
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let g = gcd(&w, &z);
        if g.degree().unwrap_or(0) > 0 {
            out.push((g.clone(), i));
        }
        w = quot(&w, &g);
        y = quot(&z, &g);
        z = &y - &w.derivative();
        i += 1;
    }
    out
}

#[derive(Clone, Copy)]
enum At<'a> {
    NegInf,
    Point(&'a BigRational),
    PosInf,
}

fn sign_at(p: &Q, at: At<'_>) -> i8 {
    let s = |v: &BigRational| {
        if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        }
    };
    match at {
        At::Point(x) => s(&p.eval(x)),
        At::PosInf => p.leading().map_or(0, s),
        At::NegInf => {
            let l = p.leading().map_or(0, s);
            if p.degree().unwrap_or(0) % 2 == 1 {
                -l
            } else {
                l
            }
        }
    }
}

struct Sturm(Vec<Q>);

impl Sturm {
    fn new(p: &Q) -> Self {
        let mut seq = vec![p.clone(), p.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = -&rem(&seq[n - 2], &seq[n - 1]);
            seq.push(r);
        }
        seq.pop();
        Sturm(seq)
    }

    fn variations(&self, at: At<'_>) -> usize {
        let signs: Vec<i8> = self.0.iter().map(|q| sign_at(q, at)).filter(|&s| s != 0).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct roots in `(a, b)`, endpoints assumed not to be roots.
    fn count(&self, a: At<'_>, b: At<'_>) -> usize {
        self.variations(a) - self.variations(b)
    }
}

pub fn classify_roots<T: Scalar + Into<BigInt>>(h: &Polynomial<T>) -> Result<RootClassification> {
    if h.is_zero() {
        return Err(Error::InvalidInput("cannot classify the zero polynomial".into()));
    }
    if h.constant().is_zero() {
        return Err(Error::InvalidInput("constant term must be nonzero".into()));
    }
    let n = h.degree().unwrap();
    let rat: Q = h.map(|c| BigRational::from_integer(c.clone().into()));
    let mut rev = rat.reversed(n);
    let x_minus_one = Polynomial::new(vec![-BigRational::one(), BigRational::one()]);
    let mut unit = 0;
    while let Some(q) = rev.exact_div(&x_minus_one) {
        rev = q;
        unit += 1;
    }
    let (mut neg, mut low, mut high) = (0, 0, 0);
    let zero = BigRational::zero();
    let one = BigRational::one();
    for (part, mult) in squarefree_parts(&rev) {
        let st = Sturm::new(&part);
        neg += mult * st.count(At::NegInf, At::Point(&zero));
        low += mult * st.count(At::Point(&zero), At::Point(&one));
        high += mult * st.count(At::Point(&one), At::PosInf);
    }
    let real = neg + low + unit + high;
    let all_real = real == n;
    let verdict = if unit > 0 {
        RootVerdict::UnitRoot
    } else if n == 0 || (all_real && neg == n) {
        RootVerdict::AllNegative
    } else if all_real && neg == 0 && high == 1 {
        RootVerdict::TypeII
    } else if all_real && neg == 0 && high >= 2 {
        RootVerdict::TypeI
    } else {
        RootVerdict::Mixed
    };
    Ok(RootClassification {
        degree: n,
        all_real,
        negative_count: neg,
        positive_in_unit_count: low,
        unit_count: unit,
        greater_than_one_count: high,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::is_log_concave;
    use proptest::prelude::*;

    fn classify(c: &[i64]) -> RootClassification {
        classify_roots(&Polynomial::new(c.to_vec())).unwrap()
    }

    /// Builds `∏ (1 − λ x)` for integer λ.
    fn from_lambdas(ls: &[i64]) -> Polynomial<i64> {
        ls.iter().fold(Polynomial::one(), |acc, &l| &acc * &Polynomial::new(vec![1, -l]))
    }

    #[test]
    fn examples() {
        let g = classify(&[1, 2, 1]);
        assert_eq!(g.verdict, RootVerdict::AllNegative);
        assert_eq!(g.negative_count, 2);
        let h = classify(&[1, -3, 1]);
        assert_eq!(h.verdict, RootVerdict::TypeII);
        assert_eq!((h.positive_in_unit_count, h.greater_than_one_count), (1, 1));
        let c = classify(&[1, 1, 1]);
        assert_eq!(c.verdict, RootVerdict::Mixed);
        assert!(!c.all_real);
        assert_eq!(classify(&[1, -5, 5]).verdict, RootVerdict::TypeI);
        assert_eq!(classify(&[1, -1]).verdict, RootVerdict::UnitRoot);
        assert_eq!(classify(&[1]).verdict, RootVerdict::AllNegative);
        assert!(classify_roots(&Polynomial::<i64>::zero()).is_err());
    }

    #[test]
    fn multiplicities_from_known_roots() {
        let h = from_lambdas(&[2, 2, 3, -1, 1]);
        let r = classify_roots(&h).unwrap();
        assert_eq!((r.negative_count, r.unit_count, r.greater_than_one_count), (1, 1, 3));
        assert_eq!(r.verdict, RootVerdict::UnitRoot);
        let r = classify_roots(&from_lambdas(&[-2, -2, -1])).unwrap();
        assert_eq!(r.verdict, RootVerdict::AllNegative);
        let r = classify_roots(&from_lambdas(&[2, 3])).unwrap();
        assert_eq!(r.verdict, RootVerdict::TypeI);
        let r = classify_roots(&from_lambdas(&[2, -3])).unwrap();
        assert_eq!(r.verdict, RootVerdict::Mixed);
    }

    #[test]
    fn serialized_names() {
        assert_eq!(serde_json::to_string(&RootVerdict::TypeII).unwrap(), "\"type_II\"");
        assert_eq!(serde_json::to_string(&RootVerdict::AllNegative).unwrap(), "\"all_negative\"");
    }

    proptest! {
        #[test]
        fn negative_rooted_is_log_concave(a in prop::collection::vec(1i64..=5, 0..=5)) {
            let g = a.iter().fold(Polynomial::one(), |acc, &x| &acc * &Polynomial::new(vec![1, x]));
            let r = classify_roots(&g).unwrap();
            prop_assert_eq!(r.verdict, RootVerdict::AllNegative);
            prop_assert!(is_log_concave(g.coeffs()));
        }

        #[test]
        fn counts_match_construction(ls in prop::collection::vec(-4i64..=4, 1..=5)) {
            prop_assume!(!ls.contains(&0));
            let r = classify_roots(&from_lambdas(&ls)).unwrap();
            prop_assert!(r.all_real);
            prop_assert_eq!(r.negative_count, ls.iter().filter(|&&l| l < 0).count());
            prop_assert_eq!(r.unit_count, ls.iter().filter(|&&l| l == 1).count());
            prop_assert_eq!(r.greater_than_one_count, ls.iter().filter(|&&l| l > 1).count());
        }
    }
}
