//! Factorization of `h ∈ 1 + xZ[x]` into irreducibles.
//!
//! `h` is reversed into a monic polynomial `P`, whose monic integer factors are
//! found by Kronecker's method: a monic factor of degree `d` is fixed by its
//! values at `d` integer nodes, and each value must divide `P` at that node.
//! Factor degrees are tried in increasing order, so each factor found is
//! irreducible and the search itself certifies the remainder.

use std::cmp::Reverse;

use super::Polynomial;
use crate::error::{Error, Result};

pub const MAX_FACTOR_DEGREE: usize = 8;

const NODE_RANGE: i128 = 12;

fn eval(p: &[i128], x: i128) -> i128 {
    p.iter().rev().fold(0, |acc, &c| acc * x + c)
}

/// Positive divisors of `v != 0`.
fn divisors(v: i128) -> Vec<i128> {
    let v = v.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= v {
        if v % d == 0 {
            small.push(d);
            if d * d != v {
                large.push(v / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Monic exact division; `None` if the remainder is nonzero.
fn divide_monic(p: &[i128], q: &[i128]) -> Option<Vec<i128>> {
    let dq = q.len() - 1;
    let mut rem = p.to_vec();
    let mut quot = vec![0i128; p.len() - dq];
    for shift in (0..p.len() - dq).rev() {
        let c = rem[shift + dq];
        quot[shift] = c;
        for (i, &qi) in q.iter().enumerate() {
            rem[shift + i] -= c * qi;
        }
    }
    rem.iter().all(|&c| c == 0).then_some(quot)
}

fn mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

struct Search<'a> {
    p: &'a [i128],
    nodes: Vec<i128>,
    choices: Vec<Vec<i128>>,
}

impl Search<'_> {
    /// Depth-first over node values, carrying the last diagonal of the
    /// divided-difference table. Integer polynomials have integer divided
    /// differences at integer nodes, which prunes most branches early.
    fn run(&self, i: usize, diag: &[i128], newton: &mut Vec<i128>) -> Option<Vec<i128>> {
        let d = self.nodes.len();
        if i == d {
            return self.assemble(newton);
        }
        for &v in &self.choices[i] {
            let mut next = Vec::with_capacity(i + 1);
            next.push(v);
            let mut ok = true;
            for j in 1..=i {
                let num = next[j - 1] - diag[j - 1];
                let den = self.nodes[i] - self.nodes[i - j];
                if num % den != 0 {
                    ok = false;
                    break;
                }
                next.push(num / den);
            }
            if !ok {
                continue;
            }
            newton.push(next[i]);
            if let Some(q) = self.run(i + 1, &next, newton) {
                return Some(q);
            }
            newton.pop();
        }
        None
    }

    /// `Q = ∏(x − a_j) + R` with `R` in Newton form.
    fn assemble(&self, newton: &[i128]) -> Option<Vec<i128>> {
        let d = self.nodes.len();
        let mut q = vec![0i128; d + 1];
        let mut basis = vec![1i128];
        for (i, &c) in newton.iter().enumerate() {
            for (k, &b) in basis.iter().enumerate() {
                q[k] += c * b;
            }
            basis = mul(&basis, &[-self.nodes[i], 1]);
        }
        for (k, &b) in basis.iter().enumerate() {
            q[k] += b;
        }
        if q[0] == 0 || self.p[0] % q[0] != 0 {
            return None;
        }
        divide_monic(self.p, &q).map(|_| q)
    }
}

fn monic_factor_of_degree(p: &[i128], d: usize) -> Option<Vec<i128>> {
    let mut candidates: Vec<(i128, i128)> = Vec::new();
    for a in -NODE_RANGE..=NODE_RANGE {
        let v = eval(p, a);
        if v == 0 {
            return (d == 1).then(|| vec![-a, 1]);
        }
        candidates.push((v.abs(), a));
    }
    candidates.sort();
    let nodes: Vec<i128> = candidates.iter().take(d).map(|&(_, a)| a).collect();
    let choices = nodes.iter().map(|&a| divisors(eval(p, a)).into_iter().flat_map(|x| [x, -x]).collect()).collect();
    let search = Search { p, nodes, choices };
    search.run(0, &[], &mut Vec::new())
}

fn factor_monic(p: Vec<i128>) -> Vec<Vec<i128>> {
    let mut out = Vec::new();
    let mut rest = p;
    let mut d = 1;
    while 2 * d < rest.len() {
        match monic_factor_of_degree(&rest, d) {
            Some(q) => {
                rest = divide_monic(&rest, &q).expect("factor divides");
                out.push(q);
            }
            None => d += 1,
        }
    }
    if rest.len() > 1 {
        out.push(rest);
    }
    out
}

/// Irreducible factors of `h`, each with constant term 1, ordered by degree.
/// Repeated factors appear with multiplicity; their product is `h`.
pub fn factor_over_z(h: &Polynomial<i64>) -> Result<Vec<Polynomial<i64>>> {
    if h.constant() != 1 {
        return Err(Error::InvalidInput("factorization needs constant term 1".into()));
    }
    let n = h.degree().unwrap_or(0);
    if n > MAX_FACTOR_DEGREE {
        return Err(Error::InvalidInput(format!("degree {n} exceeds factorization bound {MAX_FACTOR_DEGREE}")));
    }
    let monic: Vec<i128> = h.coeffs().iter().rev().map(|&c| c as i128).collect();
    let mut factors: Vec<Polynomial<i64>> = factor_monic(monic)
        .into_iter()
        .map(|q| {
            let coeffs = q.iter().rev().map(|&c| i64::try_from(c).expect("factor coefficients fit in i64"));
            Polynomial::new(coeffs.collect())
        })
        .collect();
    factors.sort_by_key(|f| (f.degree(), Reverse(f.coeffs().to_vec())));
    Ok(factors)
}
