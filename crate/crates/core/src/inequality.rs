//! The bound function and exhaustive checkers for the ceiling-sum
//! inequalities the reduction arithmetic relies on.
//!
//! Every hypothesis has the shape `num / 7 >= (4n + off) / 7` with `num` an
//! integer, so all comparisons are done on integers after multiplying by 7.
//! The right side of every conclusion grows with `n`, so each tuple is checked
//! at the largest admissible `n`, which covers every smaller `n` at once.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InequalityError {
    #[error("the bound is undefined for n = 0")]
    EmptyGraph,
    #[error("part must be in 1..=8, got {0}")]
    BadPart(u8),
}

/// `ceil((4n + 3) / 7)`.
pub fn bound(n: usize) -> Result<usize, InequalityError> {
    if n == 0 {
        return Err(InequalityError::EmptyGraph);
    }
    Ok((4 * n + 3).div_ceil(7))
}

/// Upper limit for `c` in the multi-part checks. Verdicts are invariant under
/// `c -> c + 4`, so this covers more than two full periods.
pub const C_MAX: i64 = 10;
/// Range used for the seven-parameter family; values above it are
/// congruent to an enumerated value with identical verdicts.
pub const PART1_RANGE: usize = 14;

fn ceil7(x: i64) -> i64 {
    x.div_euclid(7) + i64::from(x.rem_euclid(7) != 0)
}

fn f(x: i64) -> i64 {
    ceil7(4 * x + 3)
}

fn b(n: i64) -> i64 {
    ceil7(4 * n + 3)
}

fn res(x: i64) -> u8 {
    (4 * x + 3).rem_euclid(7) as u8
}

/// Largest `n` with `4n + off <= num`.
fn n_max(num: i64, off: i64) -> i64 {
    (num - off).div_euclid(4)
}

/// One row per class of `a mod 7`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueRow {
    pub a_mod: u8,
    /// `(4a + 3) mod 7`.
    pub residue: u8,
    /// Sevenths by which `(4a + 3) / 7` falls short of its ceiling.
    pub slack: u8,
    /// `bound(a + j + 1) - bound(a + j)` for `j = 0..7`; sums to 4.
    pub steps: [u8; 7],
}

pub fn residue_table() -> Vec<ResidueRow> {
    (0..7i64)
        .map(|a| {
            // Use a + 7 so every value is positive.
            let base = a + 7;
            let mut steps = [0u8; 7];
            for (j, s) in steps.iter_mut().enumerate() {
                let j = j as i64;
                *s = (f(base + j + 1) - f(base + j)) as u8;
            }
            let residue = res(a);
            ResidueRow {
                a_mod: a as u8,
                residue,
                slack: (7 - residue) % 7,
                steps,
            }
        })
        .collect()
}

/// A parameter tuple for which the conclusion fails.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Counterexample {
    pub a: Option<i64>,
    pub a_i: Vec<i64>,
    pub b_j: Vec<i64>,
    pub c: i64,
    pub k: i64,
    pub n: i64,
    pub lhs: i64,
    pub rhs: i64,
}

/// Status of one excepted residue pattern.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionStatus {
    pub pattern: Vec<u8>,
    /// First tuple (in enumeration order) realizing a failure.
    pub realized_by: Option<Counterexample>,
    pub vacuous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub range: usize,
    pub pass: bool,
    pub tuples_checked: u64,
    pub counterexample: Option<Counterexample>,
    pub exceptions: Vec<ExceptionStatus>,
}

impl Verdict {
    /// Passed, and every excepted pattern is accounted for.
    pub fn fully_accounted(&self) -> bool {
        self.pass
            && self
                .exceptions
                .iter()
                .all(|e| e.vacuous == e.realized_by.is_none())
    }
}

#[derive(Default)]
struct Partial {
    checked: u64,
    first: Option<Counterexample>,
    realized: BTreeMap<Vec<u8>, Counterexample>,
}

impl Partial {
    fn record(&mut self, cex: Counterexample, pattern: Option<Vec<u8>>) {
        match pattern {
            Some(p) => {
                self.realized.entry(p).or_insert(cex);
            }
            None => {
                if self.first.is_none() {
                    self.first = Some(cex);
                }
            }
        }
    }

    // Merges a later chunk; earlier witnesses win.
    fn merge(mut self, later: Partial) -> Partial {
        self.checked += later.checked;
        if self.first.is_none() {
            self.first = later.first;
        }
        for (p, c) in later.realized {
            self.realized.entry(p).or_insert(c);
        }
        self
    }

    fn verdict(self, check: String, range: usize, patterns: Vec<Vec<u8>>) -> Verdict {
        let exceptions = patterns
            .into_iter()
            .map(|p| {
                let realized_by = self.realized.get(&p).cloned();
                ExceptionStatus {
                    vacuous: realized_by.is_none(),
                    pattern: p,
                    realized_by,
                }
            })
            .collect();
        Verdict {
            check,
            range,
            pass: self.first.is_none(),
            tuples_checked: self.checked,
            counterexample: self.first,
            exceptions,
        }
    }
}

fn merge_all(parts: Vec<Partial>) -> Partial {
    parts.into_iter().fold(Partial::default(), Partial::merge)
}

/// Two-part split inequality: for `a_1, a_2 >= 1` and `k <= 8` with
/// `n = a_1 + a_2 + k - 3 >= 1`,
/// `max(f(a_1) + f(a_2) + 2, g(a_1) + g(a_2) + 3) >= bound(n)` where
/// `g(x) = ceil((4x - 1) / 7)`.
pub fn check_ineq1(range: usize) -> Verdict {
    let r = range as i64;
    let parts: Vec<Partial> = (1..=r)
        .into_par_iter()
        .map(|a1| {
            let mut p = Partial::default();
            for a2 in 1..=r {
                for k in (4 - a1 - a2)..=8 {
                    let n = a1 + a2 + k - 3;
                    p.checked += 1;
                    let lhs = (f(a1) + f(a2) + 2).max(ceil7(4 * a1 - 1) + ceil7(4 * a2 - 1) + 3);
                    if lhs < b(n) {
                        p.record(
                            Counterexample {
                                a: None,
                                a_i: vec![a1, a2],
                                b_j: vec![],
                                c: 0,
                                k,
                                n,
                                lhs,
                                rhs: b(n),
                            },
                            None,
                        );
                    }
                }
            }
            p
        })
        .collect();
    merge_all(parts).verdict("ineq1".into(), range, vec![])
}

/// Checks one part of the eight-part inequality family. Part 1 enumerates its values over
/// `1..=min(range, PART1_RANGE)`; see [`PART1_RANGE`].
pub fn check_ineq2(part: u8, range: usize) -> Result<Verdict, InequalityError> {
    let name = format!("ineq2.{part}");
    let r = range as i64;
    Ok(match part {
        1 => part1(range.min(PART1_RANGE) as i64).verdict(name, range.min(PART1_RANGE), vec![]),
        2 => {
            let exc = pats(&[&[0, 4], &[4, 0]]);
            pair_part(r, &exc, -7, -1, |a, a1, c| {
                (0..=1)
                    .map(|x| f(a - x) + f(a1 - x) + c - (1 - x))
                    .max()
                    .expect("nonempty")
            })
            .verdict(name, range, exc)
        }
        3 => {
            let exc = pats(&[
                &[0, 0],
                &[0, 6],
                &[0, 5],
                &[0, 4],
                &[4, 0],
                &[6, 5],
                &[5, 6],
                &[5, 0],
                &[6, 6],
                &[6, 0],
            ]);
            pair_part(r, &exc, 0, -1, |a, a1, c| f(a) + f(a1) + c).verdict(name, range, exc)
        }
        8 => {
            let exc = pats(&[&[0, 0], &[0, 6], &[0, 5], &[5, 0], &[6, 6], &[6, 0]]);
            pair_part(r, &exc, 0, 0, |a, a1, c| f(a) + f(a1) + c).verdict(name, range, exc)
        }
        4 => {
            let exc = pats(&[&[1, 0, 0], &[4, 0, 4], &[4, 4, 0], &[0, 4, 4]]);
            triple_part(r, &exc, -4).verdict(name, range, exc)
        }
        5 => {
            let exc = pats(&[
                &[0, 0, 0],
                &[1, 0, 0],
                &[4, 0, 3],
                &[4, 3, 0],
                &[3, 0, 4],
                &[4, 0, 4],
                &[3, 4, 0],
                &[4, 4, 0],
                &[1, 6, 0],
                &[1, 0, 6],
                &[0, 3, 4],
                &[0, 4, 3],
                &[0, 4, 4],
                &[6, 4, 4],
                &[4, 4, 6],
                &[4, 6, 4],
            ]);
            triple_part(r, &exc, -5).verdict(name, range, exc)
        }
        6 => {
            let exc: Vec<Vec<u8>> = (1..=4).map(|k| vec![0; k]).collect();
            sum_part(r, 2, &exc).verdict(name, range, exc)
        }
        7 => {
            // Index set read as [k]: one residue in {0, 6}, the rest 0.
            let mut exc = Vec::new();
            for k in 1..=4usize {
                exc.push(vec![0; k]);
                let mut p = vec![0; k];
                p[k - 1] = 6;
                exc.push(p);
            }
            sum_part(r, 1, &exc).verdict(name, range, exc)
        }
        other => return Err(InequalityError::BadPart(other)),
    })
}

fn pats(list: &[&[u8]]) -> Vec<Vec<u8>> {
    list.iter().map(|p| p.to_vec()).collect()
}

fn classify(exc: &[Vec<u8>], residues: Vec<u8>) -> Option<Vec<u8>> {
    exc.contains(&residues).then_some(residues)
}

fn pair_part(
    r: i64,
    exc: &[Vec<u8>],
    c_shift: i64,
    off: i64,
    conclusion: impl Fn(i64, i64, i64) -> i64 + Sync,
) -> Partial {
    let parts: Vec<Partial> = (1..=r)
        .into_par_iter()
        .map(|a| {
            let mut p = Partial::default();
            for a1 in 1..=r {
                for c in 1..=C_MAX {
                    let num = (4 * a + 3) + (4 * a1 + 3) + 7 * c + c_shift;
                    let n = n_max(num, off);
                    if n < 1 {
                        continue;
                    }
                    p.checked += 1;
                    let lhs = conclusion(a, a1, c);
                    if lhs < b(n) {
                        let cex = Counterexample {
                            a: Some(a),
                            a_i: vec![a1],
                            b_j: vec![],
                            c,
                            k: 1,
                            n,
                            lhs,
                            rhs: b(n),
                        };
                        p.record(cex, classify(exc, vec![res(a), res(a1)]));
                    }
                }
            }
            p
        })
        .collect();
    merge_all(parts)
}

fn triple_part(r: i64, exc: &[Vec<u8>], off: i64) -> Partial {
    let parts: Vec<Partial> = (1..=r)
        .into_par_iter()
        .map(|a| {
            let mut p = Partial::default();
            for a1 in 1..=r {
                for a2 in 1..=r {
                    for c in 1..=C_MAX {
                        let num = (4 * a + 3) + (4 * a1 + 3) + (4 * a2 + 3) + 7 * (c - 2);
                        let n = n_max(num, off);
                        if n < 1 {
                            continue;
                        }
                        p.checked += 1;
                        let mut lhs = i64::MIN;
                        for x1 in 0..=1 {
                            for x2 in 0..=1 {
                                let v = f(a - x1 - x2) + f(a1 - x1) + f(a2 - x2) + c - (1 - x1) - (1 - x2);
                                lhs = lhs.max(v);
                            }
                        }
                        if lhs < b(n) {
                            let cex = Counterexample {
                                a: Some(a),
                                a_i: vec![a1, a2],
                                b_j: vec![],
                                c,
                                k: 2,
                                n,
                                lhs,
                                rhs: b(n),
                            };
                            p.record(cex, classify(exc, vec![res(a), res(a1), res(a2)]));
                        }
                    }
                }
            }
            p
        })
        .collect();
    merge_all(parts)
}

/// Nondecreasing tuples of length `k` over `1..=r`.
fn multisets(k: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![1i64; k];
    if k == 0 {
        return vec![vec![]];
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < r {
                cur[i] += 1;
                let v = cur[i];
                for x in cur[i + 1..].iter_mut() {
                    *x = v;
                }
                break;
            }
        }
    }
}

fn sum_part(r: i64, off: i64, exc: &[Vec<u8>]) -> Partial {
    let tuples: Vec<Vec<i64>> = (1..=4).flat_map(|k| multisets(k, r)).collect();
    let parts: Vec<Partial> = tuples
        .par_iter()
        .map(|ai| {
            let mut p = Partial::default();
            let base: i64 = ai.iter().map(|&x| 4 * x + 3).sum();
            let ceil_sum: i64 = ai.iter().map(|&x| f(x)).sum();
            for c in 1..=C_MAX {
                let n = n_max(base + 7 * c, off);
                if n < 1 {
                    continue;
                }
                p.checked += 1;
                let lhs = ceil_sum + c;
                if lhs < b(n) {
                    let mut rs: Vec<u8> = ai.iter().map(|&x| res(x)).collect();
                    // Patterns are listed with the nonzero residue last.
                    rs.sort_unstable_by_key(|&x| (x != 0, x));
                    let cex = Counterexample {
                        a: None,
                        a_i: ai.clone(),
                        b_j: vec![],
                        c,
                        k: ai.len() as i64,
                        n,
                        lhs,
                        rhs: b(n),
                    };
                    p.record(cex, classify(exc, rs));
                }
            }
            p
        })
        .collect();
    merge_all(parts)
}

fn part1(r: i64) -> Partial {
    // The b_j only enter through two sums, so distinct sum pairs suffice;
    // keep the first tuple producing each pair as its representative.
    let mut b_classes: Vec<(i64, i64, Vec<i64>)> = Vec::new();
    for l in 0..=2 {
        for bj in multisets(l, r) {
            let num: i64 = bj.iter().map(|&x| 4 * x + 3).sum();
            let conc: i64 = bj.iter().map(|&x| f(x)).sum();
            if !b_classes.iter().any(|&(n0, c0, ref t)| n0 == num && c0 == conc && t.len() == l) {
                b_classes.push((num, conc, bj));
            }
        }
    }
    let parts: Vec<Partial> = (1..=r)
        .into_par_iter()
        .map(|a| {
            let mut p = Partial::default();
            for k in 1..=4usize {
                for ai in multisets(k, r) {
                    let k_i = k as i64;
                    let base = (4 * a + 3) + ai.iter().map(|&x| 4 * x + 3).sum::<i64>();
                    // Best choice of the indicators, independent of b_j and c.
                    let mut best = i64::MIN;
                    for choice in 0..(1u32 << k) {
                        let taken = choice.count_ones() as i64;
                        let mut v = f(a - taken) - (k_i - taken);
                        for (i, &x) in ai.iter().enumerate() {
                            v += f(x - i64::from(choice >> i & 1 == 1));
                        }
                        best = best.max(v);
                    }
                    for (bnum, bconc, bj) in &b_classes {
                        for c in 1..=C_MAX {
                            let num = base + bnum + 7 * (c - k_i);
                            let n = n_max(num, 3 - 3 * k_i);
                            if n < 1 {
                                continue;
                            }
                            p.checked += 1;
                            let lhs = best + bconc + c;
                            if lhs < b(n) {
                                let cex = Counterexample {
                                    a: Some(a),
                                    a_i: ai.clone(),
                                    b_j: bj.clone(),
                                    c,
                                    k: k_i,
                                    n,
                                    lhs,
                                    rhs: b(n),
                                };
                                p.record(cex, None);
                            }
                        }
                    }
                }
            }
            p
        })
        .collect();
    merge_all(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bound_values() {
        assert_eq!(bound(8), Ok(5));
        assert_eq!(bound(1), Ok(1));
        assert_eq!(bound(5), Ok(4));
        assert_eq!(bound(16), Ok(10));
        assert_eq!(bound(0), Err(InequalityError::EmptyGraph));
    }

    #[test]
    fn residue_rows() {
        let t = residue_table();
        assert_eq!(t[1].residue, 0);
        assert_eq!(t[3].residue, 1);
        assert!(t.iter().all(|r| r.steps.iter().map(|&s| s as u32).sum::<u32>() == 4));
    }

    #[test]
    fn ineq1_instances() {
        // a1=2, a2=3, k=8: max{2+3+2, 1+2+3} = 7 >= bound(10) = 7.
        let lhs = (f(2) + f(3) + 2).max(ceil7(7) + ceil7(11) + 3);
        assert_eq!(lhs, 7);
        assert_eq!(b(10), 7);
        // a1=a2=1, k=2 gives n=1.
        assert!((f(1) + f(1) + 2) >= b(1));
        assert!(check_ineq1(30).pass);
    }

    #[test]
    fn part3_sample_holds() {
        // (4a+3, 4a1+3) = (1, 1) mod 7 with a = a1 = 3.
        assert_eq!((res(3), res(3)), (1, 1));
        for c in 1..=C_MAX {
            let n = n_max(15 + 15 + 7 * c, -1);
            assert!(f(3) + f(3) + c >= b(n));
        }
    }

    #[test]
    fn part2_exception_realized() {
        let v = check_ineq2(2, 21).unwrap();
        assert!(v.pass);
        let e = v.exceptions.iter().find(|e| e.pattern == vec![0, 4]).unwrap();
        assert!(e.realized_by.is_some());
    }

    #[test]
    fn bad_part() {
        assert_eq!(check_ineq2(9, 20), Err(InequalityError::BadPart(9)));
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(2, 4).len(), 10);
        assert_eq!(multisets(0, 4), vec![Vec::<i64>::new()]);
    }

    proptest! {
        #[test]
        fn bound_period_seven(n in 1usize..10_000) {
            prop_assert_eq!(bound(n + 7).unwrap(), bound(n).unwrap() + 4);
        }

        #[test]
        fn bound_is_exact_ceiling(n in 1usize..10_000) {
            let v = bound(n).unwrap();
            prop_assert!(7 * v >= 4 * n + 3 && 7 * (v - 1) < 4 * n + 3);
        }

        // Shifting one value by 7 shifts both sides of every part-1 comparison by 4.
        #[test]
        fn part1_verdicts_are_period_seven(a in 5i64..40, x in 1i64..40, c in 1i64..10) {
            let eval = |a: i64, x: i64| {
                let best = (0..=1).map(|t| f(a - t) + f(x - t) - (1 - t)).max().unwrap();
                let n = n_max((4 * a + 3) + (4 * x + 3) + 7 * (c - 1), 0);
                best + c - b(n)
            };
            prop_assert_eq!(eval(a, x), eval(a + 7, x));
            prop_assert_eq!(eval(a, x), eval(a, x + 7));
        }
    }
}
