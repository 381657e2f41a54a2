use std::fmt::Write as _;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// A 3-CNF formula. Variables are numbered `1..=num_vars`; a negative
/// literal is a negated variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self> {
        if clauses.is_empty() {
            return Err(Error::input("formula has no clauses"));
        }
        for c in &clauses {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(Error::input(format!("literal {l} out of range for {num_vars} variables")));
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    /// `assign[x - 1]` is the value of variable `x`.
    pub fn literal_true(lit: i32, assign: &[bool]) -> bool {
        assign[lit.unsigned_abs() as usize - 1] == (lit > 0)
    }

    pub fn satisfied_by(&self, assign: &[bool]) -> bool {
        assign.len() == self.num_vars && self.clauses.iter().all(|c| c.iter().any(|&l| Self::literal_true(l, assign)))
    }

    /// The first satisfying assignment in binary counting order.
    pub fn brute_force(&self) -> Option<Vec<bool>> {
        (0u64..1 << self.num_vars)
            .map(|bits| (0..self.num_vars).map(|i| bits >> i & 1 == 1).collect::<Vec<_>>())
            .find(|a| self.satisfied_by(a))
    }

    /// Occurrences of each variable as `(clause, position)` in clause order.
    pub fn occurrences(&self) -> Vec<Vec<(usize, usize)>> {
        let mut occ = vec![Vec::new(); self.num_vars];
        for (c, clause) in self.clauses.iter().enumerate() {
            for (p, &l) in clause.iter().enumerate() {
                occ[l.unsigned_abs() as usize - 1].push((c, p));
            }
        }
        occ
    }

    pub fn random(num_vars: usize, num_clauses: usize, rng: &mut impl Rng) -> Self {
        let clauses = (0..num_clauses)
            .map(|_| {
                std::array::from_fn(|_| {
                    let v = rng.gen_range(1..=num_vars as i32);
                    if rng.gen_bool(0.5) { v } else { -v }
                })
            })
            .collect();
        CnfFormula::new(num_vars, clauses).expect("generated literals are in range")
    }

    /// Parses DIMACS CNF. Comment lines start with `c`; a clause may span
    /// lines and ends at `0`.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header = None;
        let mut clauses = Vec::new();
        let mut cur = Vec::new();
        for (i, l) in text.lines().enumerate() {
            let line = i + 1;
            let l = l.trim();
            if l.is_empty() || l.starts_with('c') {
                continue;
            }
            if l.starts_with('%') {
                break;
            }
            if l.starts_with('p') {
                let toks: Vec<&str> = l.split_whitespace().collect();
                let parsed = match toks[..] {
                    ["p", "cnf", v, c] => v.parse::<usize>().ok().zip(c.parse::<usize>().ok()),
                    _ => None,
                };
                header = Some(parsed.ok_or_else(|| Error::parse(line, "header must be \"p cnf <vars> <clauses>\""))?);
                continue;
            }
            let Some((vars, _)) = header else {
                return Err(Error::parse(line, "clause before the \"p cnf\" header"));
            };
            for tok in l.split_whitespace() {
                let lit: i32 = tok.parse().map_err(|_| Error::parse(line, format!("bad literal {tok:?}")))?;
                if lit == 0 {
                    let clause: [i32; 3] = cur
                        .as_slice()
                        .try_into()
                        .map_err(|_| Error::parse(line, format!("clause has {} literals, expected 3", cur.len())))?;
                    clauses.push(clause);
                    cur.clear();
                } else if lit.unsigned_abs() as usize > vars {
                    return Err(Error::parse(line, format!("literal {lit} exceeds {vars} variables")));
                } else {
                    cur.push(lit);
                }
            }
        }
        let (vars, count) = header.ok_or_else(|| Error::parse(1, "missing \"p cnf\" header"))?;
        if !cur.is_empty() {
            return Err(Error::parse(text.lines().count().max(1), "last clause is not terminated by 0"));
        }
        if clauses.len() != count {
            return Err(Error::parse(1, format!("header announces {count} clauses, found {}", clauses.len())));
        }
        CnfFormula::new(vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            let _ = writeln!(s, "{} {} {} 0", c[0], c[1], c[2]);
        }
        s
    }
}
