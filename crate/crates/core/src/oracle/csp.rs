//! A small binary constraint solver: backtracking with forward checking and
//! minimum-remaining-values variable choice.

use serde::{Deserialize, Serialize};

/// Allowed value pairs between two variables, as a dense table.
#[derive(Debug, Clone)]
struct Constraint {
    x: usize,
    y: usize,
    /// `allowed[a][b]`: value `a` of `x` with value `b` of `y`.
    allowed: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, Default)]
pub struct BinaryCsp {
    domain_sizes: Vec<usize>,
    constraints: Vec<Constraint>,
    /// Constraint indices touching each variable.
    incident: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CspStats {
    pub nodes: u64,
    pub backtracks: u64,
    pub prunings: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CspOutcome {
    /// Value index per variable, or `None` when unsatisfiable.
    pub solution: Option<Vec<usize>>,
    pub stats: CspStats,
}

impl BinaryCsp {
    pub fn new(domain_sizes: Vec<usize>) -> Self {
        let n = domain_sizes.len();
        Self {
            domain_sizes,
            constraints: vec![],
            incident: vec![vec![]; n],
        }
    }

    pub fn n_vars(&self) -> usize {
        self.domain_sizes.len()
    }

    pub fn n_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn domain_size(&self, var: usize) -> usize {
        self.domain_sizes[var]
    }

    pub fn add_constraint<F>(&mut self, x: usize, y: usize, allowed: F)
    where
        F: Fn(usize, usize) -> bool,
    {
        assert_ne!(x, y, "binary constraint needs two variables");
        let table = (0..self.domain_sizes[x])
            .map(|a| (0..self.domain_sizes[y]).map(|b| allowed(a, b)).collect())
            .collect();
        self.incident[x].push(self.constraints.len());
        self.incident[y].push(self.constraints.len());
        self.constraints.push(Constraint {
            x,
            y,
            allowed: table,
        });
    }

    pub fn is_solution(&self, assignment: &[usize]) -> bool {
        assignment.len() == self.n_vars()
            && assignment
                .iter()
                .zip(&self.domain_sizes)
                .all(|(&v, &d)| v < d)
            && self
                .constraints
                .iter()
                .all(|c| c.allowed[assignment[c.x]][assignment[c.y]])
    }

    pub fn solve(&self) -> CspOutcome {
        let mut live: Vec<Vec<bool>> = self.domain_sizes.iter().map(|&d| vec![true; d]).collect();
        let mut assignment: Vec<Option<usize>> = vec![None; self.n_vars()];
        let mut stats = CspStats::default();
        let found = self.domain_sizes.iter().all(|&d| d > 0)
            && self.search(&mut live, &mut assignment, &mut stats);
        CspOutcome {
            solution: found.then(|| assignment.into_iter().map(|v| v.unwrap()).collect()),
            stats,
        }
    }

    fn search(
        &self,
        live: &mut [Vec<bool>],
        assignment: &mut [Option<usize>],
        stats: &mut CspStats,
    ) -> bool {
        stats.nodes += 1;
        let var = (0..self.n_vars())
            .filter(|&v| assignment[v].is_none())
            .min_by_key(|&v| (live[v].iter().filter(|&&b| b).count(), v));
        let Some(var) = var else {
            return true;
        };
        for value in 0..self.domain_sizes[var] {
            if !live[var][value] {
                continue;
            }
            assignment[var] = Some(value);
            let mut removed: Vec<(usize, usize)> = Vec::new();
            let mut wiped = false;
            for &ci in &self.incident[var] {
                let c = &self.constraints[ci];
                let other = if c.x == var { c.y } else { c.x };
                if assignment[other].is_some() {
                    continue;
                }
                for (w, alive) in live[other].iter_mut().enumerate() {
                    if !*alive {
                        continue;
                    }
                    let ok = if c.x == var {
                        c.allowed[value][w]
                    } else {
                        c.allowed[w][value]
                    };
                    if !ok {
                        *alive = false;
                        removed.push((other, w));
                        stats.prunings += 1;
                    }
                }
                if !live[other].iter().any(|&b| b) {
                    wiped = true;
                    break;
                }
            }
            if !wiped && self.search(live, assignment, stats) {
                return true;
            }
            for (v, w) in removed {
                live[v][w] = true;
            }
            assignment[var] = None;
            stats.backtracks += 1;
        }
        false
    }
}
