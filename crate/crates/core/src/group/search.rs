//! Backtracking search for homomorphisms to `S_n` with prescribed relator orders.
//!
//! Generators are assigned in a fixed order: those of the shortest relators
//! first. A relator is checked as soon as all of its generators are assigned,
//! on a compressed form in which assigned letters are already multiplied out.
//! The first assigned generator only takes conjugacy-class representatives,
//! which loses nothing since every requirement is conjugation invariant.
//!
//! Subtrees below the representatives run in parallel, each with the full
//! budget; outcomes are merged in representative order, so the result and
//! node count equal those of the sequential search.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::hom::Hom;
use super::perm::Perm;
use super::word::generator_of;
use super::MarkedPresentation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Witness { hom: Hom, nodes: u64 },
    Exhausted { nodes: u64 },
    BudgetExceeded { nodes: u64 },
}

impl SearchOutcome {
    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Witness { nodes, .. }
            | SearchOutcome::Exhausted { nodes }
            | SearchOutcome::BudgetExceeded { nodes } => *nodes,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SearchOutcome::Witness { .. } => "witness",
            SearchOutcome::Exhausted { .. } => "exhausted",
            SearchOutcome::BudgetExceeded { .. } => "budget-exceeded",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Requirement {
    Identity,
    OrderDivides(u64),
    OrderExactly(u64),
}

/// `S_n` with elements numbered in lexicographic order (identity is 0).
struct Sym {
    elems: Vec<Perm>,
    index: HashMap<Vec<u32>, u32>,
    /// Full multiplication table for `n <= 6`.
    table: Option<Vec<u32>>,
    inv: Vec<u32>,
    order: Vec<u64>,
}

const TABLED_DEGREE: usize = 6;

impl Sym {
    fn new(n: usize) -> Sym {
        let elems = Perm::all(n);
        let index: HashMap<Vec<u32>, u32> =
            elems.iter().enumerate().map(|(i, p)| (p.images().to_vec(), i as u32)).collect();
        let inv = elems.iter().map(|p| index[p.inverse().images()]).collect();
        let order = elems.iter().map(Perm::order).collect();
        let table = (n <= TABLED_DEGREE).then(|| {
            elems
                .iter()
                .flat_map(|a| elems.iter().map(|b| index[a.then(b).images()]))
                .collect()
        });
        Sym {
            elems,
            index,
            table,
            inv,
            order,
        }
    }

    fn satisfies(&self, e: u32, req: Requirement) -> bool {
        let o = self.order[e as usize];
        match req {
            Requirement::Identity => e == 0,
            Requirement::OrderDivides(p) => p % o == 0,
            Requirement::OrderExactly(p) => o == p,
        }
    }
}

/// A relator checked at depth `check`, letters coded as `2 * position + inverted`.
struct Check {
    relator: usize,
    codes: Vec<u32>,
}

struct Problem<'a> {
    sym: &'a Sym,
    /// Checks per depth, shortest first.
    checks: Vec<Vec<Check>>,
    reqs: Vec<Requirement>,
    budget: u64,
}

enum Step {
    Found,
    Exhausted,
    Budget,
}

impl Problem<'_> {
    fn dfs(&self, d: usize, candidates: &[u32], assign: &mut Vec<u32>, nodes: &mut u64) -> Step {
        let all: Vec<u32> = (0..self.sym.elems.len() as u32).collect();
        for &c in candidates {
            *nodes += 1;
            if *nodes > self.budget {
                return Step::Budget;
            }
            assign.push(c);
            if self.checks[d].iter().all(|ch| self.sym.satisfies(self.evaluate(ch, assign), self.reqs[ch.relator])) {
                if d + 1 == self.checks.len() {
                    return Step::Found;
                }
                match self.dfs(d + 1, &all, assign, nodes) {
                    Step::Exhausted => {}
                    other => return other,
                }
            }
            assign.pop();
        }
        Step::Exhausted
    }

    fn evaluate(&self, ch: &Check, assign: &[u32]) -> u32 {
        let sym = self.sym;
        let elem = |code: u32| {
            let e = assign[(code >> 1) as usize];
            if code & 1 == 1 {
                sym.inv[e as usize]
            } else {
                e
            }
        };
        match &sym.table {
            Some(table) => {
                let size = sym.elems.len();
                ch.codes.iter().fold(0u32, |acc, &code| table[acc as usize * size + elem(code) as usize])
            }
            None => {
                // Track every point through the word, then look the product up once.
                let images: Vec<&[u32]> = ch.codes.iter().map(|&code| sym.elems[elem(code) as usize].images()).collect();
                let n = sym.elems[0].degree();
                let product: Vec<u32> = (0..n as u32)
                    .map(|x| images.iter().fold(x, |y, img| img[y as usize]))
                    .collect();
                sym.index[&product]
            }
        }
    }
}

/// Core search: a homomorphism meeting `reqs[i]` on relator `i`.
pub fn search(pres: &MarkedPresentation, reqs: &[Requirement], n: usize, budget: u64) -> SearchOutcome {
    assert_eq!(reqs.len(), pres.relators.len());
    let sym = Sym::new(n.max(1));
    let n = n.max(1);

    // Generators in order of first appearance, shortest relators first.
    let mut by_len: Vec<usize> = (0..pres.relators.len()).collect();
    by_len.sort_by_key(|&i| (pres.relators[i].word.len(), i));
    let mut position = vec![usize::MAX; pres.generator_count];
    let mut order = Vec::new();
    for &i in &by_len {
        for &l in pres.relators[i].word.letters() {
            let g = generator_of(l);
            if position[g] == usize::MAX {
                position[g] = order.len();
                order.push(g);
            }
        }
    }

    // Relators with no generators are decided up front.
    let mut checks: Vec<Vec<Check>> = (0..order.len()).map(|_| Vec::new()).collect();
    for &i in &by_len {
        let word = &pres.relators[i].word;
        if word.is_empty() {
            if !sym.satisfies(0, reqs[i]) {
                return SearchOutcome::Exhausted { nodes: 0 };
            }
            continue;
        }
        let codes: Vec<u32> = word
            .letters()
            .iter()
            .map(|&l| 2 * position[generator_of(l)] as u32 + u32::from(l < 0))
            .collect();
        let check = word.letters().iter().map(|&l| position[generator_of(l)]).max().unwrap();
        checks[check].push(Check { relator: i, codes });
    }

    let build = |assign: &[u32]| {
        let mut images = vec![Perm::identity(n); pres.generator_count];
        for (pos, &e) in assign.iter().enumerate() {
            images[order[pos]] = sym.elems[e as usize].clone();
        }
        Hom::new(n, images).expect("degrees agree")
    };
    if order.is_empty() {
        return SearchOutcome::Witness {
            hom: build(&[]),
            nodes: 0,
        };
    }

    let problem = Problem {
        sym: &sym,
        checks,
        reqs: reqs.to_vec(),
        budget,
    };
    let reps: Vec<u32> = Perm::class_representatives(n)
        .iter()
        .map(|p| sym.index[p.images()])
        .collect();
    let results: Vec<(Step, u64, Vec<u32>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = reps
            .iter()
            .map(|&r| {
                let problem = &problem;
                scope.spawn(move || {
                    let mut nodes = 0;
                    let mut assign = Vec::new();
                    let step = problem.dfs(0, &[r], &mut assign, &mut nodes);
                    (step, nodes, assign)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("search thread")).collect()
    });

    let mut used = 0u64;
    for (step, nodes, assign) in results {
        if used + nodes > budget {
            return SearchOutcome::BudgetExceeded { nodes: budget + 1 };
        }
        match step {
            Step::Found => {
                return SearchOutcome::Witness {
                    hom: build(&assign),
                    nodes: used + nodes,
                }
            }
            Step::Budget => return SearchOutcome::BudgetExceeded { nodes: budget + 1 },
            Step::Exhausted => used += nodes,
        }
    }
    SearchOutcome::Exhausted { nodes: used }
}

/// A homomorphism satisfying every relator with `O = W`: unflagged relators
/// map to the identity and flagged ones to elements of order exactly `p`.
pub fn vtf_witness_search(pres: &MarkedPresentation, n: usize, budget: u64) -> SearchOutcome {
    let p = pres.p as u64;
    let reqs: Vec<Requirement> = pres
        .relators
        .iter()
        .map(|r| if r.power { Requirement::OrderExactly(p) } else { Requirement::Identity })
        .collect();
    search(pres, &reqs, n, budget)
}

/// One-sided evidence that a branch relator is nontrivial in the presented group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Satisfies every relator and sends the branch relator to a nonidentity element.
    Found { hom: Hom, nodes: u64 },
    Unknown { reason: &'static str, nodes: u64 },
}

pub fn nontriviality_certificate(
    pres: &MarkedPresentation,
    levels: &[u32],
    n: usize,
    budget: u64,
) -> Vec<(u32, Certificate)> {
    let p = pres.p as u64;
    levels
        .iter()
        .map(|&level| {
            let Some(target) = pres.relators.iter().position(|r| r.branch == Some(level)) else {
                return (level, Certificate::Unknown { reason: "no such branch relator", nodes: 0 });
            };
            if !pres.relators[target].power {
                // Must be trivial in every quotient.
                return (level, Certificate::Unknown { reason: "unflagged", nodes: 0 });
            }
            let reqs: Vec<Requirement> = pres
                .relators
                .iter()
                .enumerate()
                .map(|(i, r)| match (i == target, r.power) {
                    (true, _) => Requirement::OrderExactly(p),
                    (false, true) => Requirement::OrderDivides(p),
                    (false, false) => Requirement::Identity,
                })
                .collect();
            let cert = match search(pres, &reqs, n, budget) {
                SearchOutcome::Witness { hom, nodes } => Certificate::Found { hom, nodes },
                SearchOutcome::Exhausted { nodes } => Certificate::Unknown { reason: "exhausted", nodes },
                SearchOutcome::BudgetExceeded { nodes } => Certificate::Unknown { reason: "budget-exceeded", nodes },
            };
            (level, cert)
        })
        .collect()
}
