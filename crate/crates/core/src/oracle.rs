//! Independent ground-truth computations for the test suites.
//!
//! Everything here is deliberately written against its own naive linear
//! algebra (dense `Vec<bool>` rows, per-qubit commutation loops) so that no
//! decoding code path is shared with the modules these oracles validate.
//! Oracles may be exponentially slow; budgets keep them honest.

use crate::pauli::{CorrectionTable, PauliOperator, SubsystemCode};
use crate::{Error, Result};
use std::time::{Duration, Instant};

/// Enumeration budget enforced before and during exhaustive loops.
#[derive(Clone, Copy, Debug)]
pub struct OracleBudget {
    pub max_nodes: u64,
    pub time_limit: Duration,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_nodes: 100_000_000,
            time_limit: Duration::from_secs(120),
        }
    }
}

struct BudgetGuard {
    nodes: u64,
    start: Instant,
    budget: OracleBudget,
}

impl BudgetGuard {
    fn new(budget: OracleBudget) -> Self {
        BudgetGuard {
            nodes: 0,
            start: Instant::now(),
            budget,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(Error::ResourceBudget(format!(
                "oracle exceeded {} nodes",
                self.budget.max_nodes
            )));
        }
        if self.nodes % 4096 == 0 && self.start.elapsed() > self.budget.time_limit {
            return Err(Error::ResourceBudget("oracle exceeded time ceiling".into()));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Minimal parity repair (exact T-join / flux repair baseline)
// ---------------------------------------------------------------------------

/// Exact minimum-cardinality repair by branch and bound.
///
/// `toggles[e]` lists the defect bits flipped when element `e` is included.
/// Searches for the smallest subset of elements whose combined toggles equal
/// `defects`. Branching: some element touching the lowest live defect must be
/// in any solution; bound: ceil(live_defects / max_toggle_size).
pub fn enumerate_minimal_repair(
    toggles: &[Vec<usize>],
    n_bits: usize,
    defects: &[usize],
    budget: OracleBudget,
) -> Result<Option<Vec<usize>>> {
    let mut state = vec![false; n_bits];
    let mut live = 0usize;
    for &d in defects {
        if !state[d] {
            live += 1;
        } else {
            live -= 1;
        }
        state[d] = !state[d];
    }
    let max_toggle = toggles.iter().map(|t| t.len()).max().unwrap_or(1).max(1);
    // Index: which elements touch each bit.
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); n_bits];
    for (e, t) in toggles.iter().enumerate() {
        for &b in t {
            touching[b].push(e);
        }
    }
    let mut guard = BudgetGuard::new(budget);
    let mut best: Option<Vec<usize>> = None;
    let mut chosen: Vec<usize> = Vec::new();

    fn apply(state: &mut [bool], live: &mut usize, toggles: &[usize]) {
        for &b in toggles {
            if state[b] {
                *live -= 1;
            } else {
                *live += 1;
            }
            state[b] = !state[b];
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        toggles: &[Vec<usize>],
        touching: &[Vec<usize>],
        max_toggle: usize,
        state: &mut Vec<bool>,
        live: &mut usize,
        chosen: &mut Vec<usize>,
        banned: &mut Vec<bool>,
        best: &mut Option<Vec<usize>>,
        guard: &mut BudgetGuard,
    ) -> Result<()> {
        guard.tick()?;
        if *live == 0 {
            if best.is_none() || chosen.len() < best.as_ref().unwrap().len() {
                *best = Some(chosen.clone());
            }
            return Ok(());
        }
        let bound = chosen.len() + live.div_ceil(max_toggle);
        if let Some(b) = best {
            if bound >= b.len() {
                return Ok(());
            }
        }
        let pivot = state.iter().position(|&s| s).unwrap();
        // Any solution contains an element toggling the pivot bit. Ban tried
        // alternatives in deeper branches to avoid duplicate exploration.
        let candidates: Vec<usize> = touching[pivot]
            .iter()
            .copied()
            .filter(|&e| !banned[e])
            .collect();
        let mut newly_banned = Vec::new();
        for e in candidates {
            apply(state, live, &toggles[e]);
            chosen.push(e);
            banned[e] = true;
            recurse(
                toggles, touching, max_toggle, state, live, chosen, banned, best, guard,
            )?;
            chosen.pop();
            apply(state, live, &toggles[e]);
            newly_banned.push(e);
        }
        for e in newly_banned {
            banned[e] = false;
        }
        Ok(())
    }

    if live == 0 {
        return Ok(Some(Vec::new()));
    }
    let mut banned = vec![false; toggles.len()];
    recurse(
        toggles,
        &touching,
        max_toggle,
        &mut state,
        &mut live,
        &mut chosen,
        &mut banned,
        &mut best,
        &mut guard,
    )?;
    Ok(best)
}

/// Exact minimal T-join oracle on a unit-weight graph given by vertex-pair edges.
pub fn minimal_t_join(
    edges: &[(usize, usize)],
    n_vertices: usize,
    t_set: &[usize],
    budget: OracleBudget,
) -> Result<Option<Vec<usize>>> {
    let toggles: Vec<Vec<usize>> = edges.iter().map(|&(u, v)| vec![u, v]).collect();
    enumerate_minimal_repair(&toggles, n_vertices, t_set, budget)
}

// ---------------------------------------------------------------------------
// Naive Pauli helpers (independent of pauli.rs internals)
// ---------------------------------------------------------------------------

fn anticommutes_naive(p: &PauliOperator, q: &PauliOperator) -> bool {
    let n = p.num_qubits();
    let mut acc = false;
    for i in 0..n {
        let a = (p.x_bits().get(i), p.z_bits().get(i));
        let b = (q.x_bits().get(i), q.z_bits().get(i));
        // single-qubit anticommute iff both nontrivial and different
        if a != (false, false) && b != (false, false) && a != b {
            acc = !acc;
        }
    }
    acc
}

fn to_bools(p: &PauliOperator) -> Vec<bool> {
    let n = p.num_qubits();
    let mut v = Vec::with_capacity(2 * n);
    for i in 0..n {
        v.push(p.x_bits().get(i));
    }
    for i in 0..n {
        v.push(p.z_bits().get(i));
    }
    v
}

/// Dense GF(2) span membership: is `target` generated by `gens`?
fn in_span(gens: &[Vec<bool>], target: &[bool]) -> bool {
    let cols = target.len();
    let mut rows: Vec<Vec<bool>> = gens.to_vec();
    let mut t = target.to_vec();
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(r) = (pivot_row..rows.len()).find(|&r| rows[r][col]) else {
            continue;
        };
        rows.swap(pivot_row, r);
        let pivot = rows[pivot_row].clone();
        for (rr, row) in rows.iter_mut().enumerate() {
            if rr != pivot_row && row[col] {
                for c in 0..cols {
                    let p = pivot[c];
                    row[c] ^= p;
                }
            }
        }
        if t[col] {
            for c in 0..cols {
                let p = pivot[c];
                t[c] ^= p;
            }
        }
        pivot_row += 1;
    }
    t.iter().all(|&b| !b)
}

// ---------------------------------------------------------------------------
// Exhaustive failure probability
// ---------------------------------------------------------------------------

/// Exact failure probability of ideal error correction for an explicit
/// channel given as `(probability, error)` entries.
///
/// Failure of an entry is decided by a route independent of `decompose`:
/// E fails iff E * F(sigma(E)) is not in the gauge group, tested by dense
/// elimination over the gauge generators.
pub fn exhaustive_fail(
    code: &SubsystemCode,
    entries: &[(f64, PauliOperator)],
    table: &CorrectionTable,
    budget: OracleBudget,
) -> Result<f64> {
    let mut guard = BudgetGuard::new(budget);
    let gauge: Vec<Vec<bool>> = code.gauge_gens.iter().map(to_bools).collect();
    // Kahan summation: the channel-algebra checks compare at 1e-12.
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for (p, e) in entries {
        guard.tick()?;
        let mut sigma_bits = Vec::new();
        for (i, s) in code.stab_gens.iter().enumerate() {
            if anticommutes_naive(s, e) {
                sigma_bits.push(i);
            }
        }
        let sigma = crate::pauli::StabSyndrome(crate::bits::BitVec::from_indices(
            code.stab_gens.len(),
            &sigma_bits,
        ));
        let f = table.correction_for(code, &sigma)?;
        let residual = e.product(&f);
        let fails = !in_span(&gauge, &to_bools(&residual));
        if fails {
            let y = p - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }
    Ok(sum)
}

// ---------------------------------------------------------------------------
// Coset classification
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CosetClass {
    /// Element of the stabilizer group (includes the identity).
    Stabilizer,
    /// Element of the gauge group but not the stabilizer.
    Gauge,
    /// Undetected and outside the gauge group: a dressed logical operator.
    Logical,
    /// Anticommutes with some stabilizer generator.
    Detectable,
}

/// Classifies `e` by GF(2) membership against S, G and C(S).
pub fn coset_check(e: &PauliOperator, code: &SubsystemCode, budget: OracleBudget) -> Result<CosetClass> {
    if code.n > 4096 {
        return Err(Error::ResourceBudget("coset_check qubit cap exceeded".into()));
    }
    let mut guard = BudgetGuard::new(budget);
    for s in &code.stab_gens {
        guard.tick()?;
        if anticommutes_naive(s, e) {
            return Ok(CosetClass::Detectable);
        }
    }
    let stab: Vec<Vec<bool>> = code.stab_gens.iter().map(to_bools).collect();
    if in_span(&stab, &to_bools(e)) {
        return Ok(CosetClass::Stabilizer);
    }
    let gauge: Vec<Vec<bool>> = code.gauge_gens.iter().map(to_bools).collect();
    if in_span(&gauge, &to_bools(e)) {
        return Ok(CosetClass::Gauge);
    }
    Ok(CosetClass::Logical)
}
