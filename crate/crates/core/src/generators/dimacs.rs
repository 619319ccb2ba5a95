//! Exact-3-CNF formulas and a DIMACS reader for them.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    /// Zero-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    /// DIMACS encoding: `±(var + 1)`.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn holds(self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("¬")?;
        }
        write!(f, "x{}", self.var + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf3 {
    num_vars: usize,
    clauses: Vec<[Literal; 3]>,
}

impl Cnf3 {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        for (j, clause) in clauses.iter().enumerate() {
            for (a, lit) in clause.iter().enumerate() {
                if lit.var >= num_vars {
                    return Err(Error::Cnf(format!(
                        "clause {j} uses variable {} but only {num_vars} are declared",
                        lit.var + 1
                    )));
                }
                if clause[a + 1..].iter().any(|other| other.var == lit.var) {
                    return Err(Error::Cnf(format!(
                        "clause {j} repeats variable {}",
                        lit.var + 1
                    )));
                }
            }
        }
        Ok(Cnf3 { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    /// `(x1 ∨ x2 ∨ x3)`.
    pub fn single_clause() -> Self {
        Cnf3::new(3, vec![[Literal::pos(0), Literal::pos(1), Literal::pos(2)]])
            .expect("fixture is valid")
    }

    /// All eight sign patterns over three variables; unsatisfiable.
    pub fn all_sign_patterns() -> Self {
        let clauses = (0..8u32)
            .map(|mask| {
                [0, 1, 2].map(|v| Literal {
                    var: v,
                    positive: mask & (1 << v) == 0,
                })
            })
            .collect();
        Cnf3::new(3, clauses).expect("fixture is valid")
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|lit| lit.holds(assignment)))
    }

    /// Brute force over all assignments; only for small variable counts.
    pub fn find_assignment(&self) -> Option<Vec<bool>> {
        assert!(self.num_vars < 24, "brute force over 2^{} assignments", self.num_vars);
        (0..1u64 << self.num_vars)
            .map(|mask| (0..self.num_vars).map(|v| mask & (1 << v) != 0).collect::<Vec<_>>())
            .find(|a| self.satisfied_by(a))
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            s.push_str(&format!(
                "{} {} {} 0\n",
                c[0].to_dimacs(),
                c[1].to_dimacs(),
                c[2].to_dimacs()
            ));
        }
        s
    }
}

/// Reads `p cnf V C` followed by clauses of exactly three literals, each
/// terminated by `0`. Comment lines start with `c`.
pub fn parse_dimacs(text: &str) -> Result<Cnf3> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut pending: Vec<i64> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        let at = |msg: String| Error::Cnf(format!("line {}: {msg}", lineno + 1));
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(at("duplicate header".into()));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(at(format!("malformed header {line:?}")));
            }
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| at(format!("bad header count {s:?}")))
            };
            header = Some((parse(parts[2])?, parse(parts[3])?));
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(at("clause before the header".into()));
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| at(format!("bad literal {tok:?}")))?;
            if lit == 0 {
                if pending.len() != 3 {
                    return Err(at(format!(
                        "clause has {} literals, expected 3",
                        pending.len()
                    )));
                }
                let mut clause = [Literal::pos(0); 3];
                for (slot, &l) in clause.iter_mut().zip(&pending) {
                    let var = l.unsigned_abs() as usize - 1;
                    if var >= num_vars {
                        return Err(at(format!("literal {l} exceeds {num_vars} variables")));
                    }
                    *slot = Literal {
                        var,
                        positive: l > 0,
                    };
                }
                clauses.push(clause);
                pending.clear();
            } else {
                pending.push(lit);
            }
        }
    }
    let Some((num_vars, num_clauses)) = header else {
        return Err(Error::Cnf("missing \"p cnf\" header".into()));
    };
    if !pending.is_empty() {
        return Err(Error::Cnf("last clause is not terminated by 0".into()));
    }
    if clauses.len() != num_clauses {
        return Err(Error::Cnf(format!(
            "header declares {num_clauses} clauses but {} were read",
            clauses.len()
        )));
    }
    Cnf3::new(num_vars, clauses)
}
