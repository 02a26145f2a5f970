//! Pauli channels, locality classes and channel algebra.
//!
//! A channel is a distribution over Pauli errors. Explicit channels carry
//! the distribution as a list; the iid modes are sampled lazily. The
//! channel-algebra identities (reduction, composition, the failure
//! inequalities) operate on explicit channels and are compared at 1e-12
//! with Kahan accumulation.

use crate::bits::BitVec;
use crate::pauli::{decompose, CorrectionTable, PauliOperator, StabSyndrome, SubsystemCode};
use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

pub const PROB_TOLERANCE: f64 = 1e-12;

/// A Pauli channel: explicit distribution or an iid per-qubit model.
#[derive(Clone, Debug)]
pub enum PauliChannel {
    Explicit {
        n: usize,
        entries: Vec<(f64, PauliOperator)>,
    },
    IidFlip {
        n: usize,
        rate: f64,
    },
    IidDepolarizing {
        n: usize,
        rate: f64,
    },
}

/// Per-qubit error intensity for the local-noise class.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct LocalNoiseSpec {
    pub lambda: f64,
}

/// Noisy recovery model: each generator measurement outcome flips
/// independently with probability eta.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RecoveryModel {
    pub eta: f64,
}

/// Bookkeeping for the noise-class parameters measured by the harness.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct NoiseClassParams {
    pub tau: f64,
    pub epsilon: f64,
    pub tau_prime: f64,
    pub delta: f64,
}

fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

impl PauliChannel {
    pub fn explicit(n: usize, entries: Vec<(f64, PauliOperator)>) -> Result<Self> {
        let c = PauliChannel::Explicit { n, entries };
        c.validate()?;
        Ok(c)
    }

    pub fn iid_flip(n: usize, rate: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::Validation(format!("rate {rate} outside [0,1]")));
        }
        Ok(PauliChannel::IidFlip { n, rate })
    }

    pub fn iid_depolarizing(n: usize, rate: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::Validation(format!("rate {rate} outside [0,1]")));
        }
        Ok(PauliChannel::IidDepolarizing { n, rate })
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            PauliChannel::Explicit { n, .. }
            | PauliChannel::IidFlip { n, .. }
            | PauliChannel::IidDepolarizing { n, .. } => *n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PauliChannel::Explicit { n, entries } => {
                for (p, e) in entries {
                    if *p < 0.0 {
                        return Err(Error::Validation(format!("negative probability {p}")));
                    }
                    if e.num_qubits() != *n {
                        return Err(Error::DimensionMismatch("channel entry size".into()));
                    }
                }
                let total = kahan_sum(entries.iter().map(|(p, _)| *p));
                if (total - 1.0).abs() > PROB_TOLERANCE {
                    return Err(Error::Validation(format!(
                        "probabilities sum to {total}, not 1"
                    )));
                }
                Ok(())
            }
            PauliChannel::IidFlip { rate, .. } | PauliChannel::IidDepolarizing { rate, .. } => {
                if !(0.0..=1.0).contains(rate) {
                    return Err(Error::Validation(format!("rate {rate} outside [0,1]")));
                }
                Ok(())
            }
        }
    }

    pub fn entries(&self) -> Result<&[(f64, PauliOperator)]> {
        match self {
            PauliChannel::Explicit { entries, .. } => Ok(entries),
            _ => Err(Error::Validation(
                "operation requires an explicit channel".into(),
            )),
        }
    }

    /// Draw one error.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Result<PauliOperator> {
        self.validate()?;
        match self {
            PauliChannel::Explicit { n, entries } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (p, e) in entries {
                    acc += p;
                    if u < acc {
                        return Ok(e.clone());
                    }
                }
                Ok(entries
                    .last()
                    .map(|(_, e)| e.clone())
                    .unwrap_or_else(|| PauliOperator::identity(*n)))
            }
            PauliChannel::IidFlip { n, rate } => {
                let mut x = BitVec::zeros(*n);
                for i in 0..*n {
                    if rng.random_bool(*rate) {
                        x.set(i, true);
                    }
                }
                Ok(PauliOperator::from_parts(x, BitVec::zeros(*n)))
            }
            PauliChannel::IidDepolarizing { n, rate } => {
                let mut x = BitVec::zeros(*n);
                let mut z = BitVec::zeros(*n);
                for i in 0..*n {
                    if rng.random_bool(*rate) {
                        match rng.random_range(0..3) {
                            0 => x.set(i, true),
                            1 => z.set(i, true),
                            _ => {
                                x.set(i, true);
                                z.set(i, true);
                            }
                        }
                    }
                }
                Ok(PauliOperator::from_parts(x, z))
            }
        }
    }

    /// iid flip channel expanded to an explicit distribution (2^n entries).
    pub fn expand_flip(&self) -> Result<PauliChannel> {
        let PauliChannel::IidFlip { n, rate } = self else {
            return Err(Error::Validation("expand_flip needs an iid-flip channel".into()));
        };
        if *n > 20 {
            return Err(Error::ResourceBudget(format!("cannot expand 2^{n} entries")));
        }
        let mut entries = Vec::with_capacity(1 << n);
        for mask in 0..(1u64 << n) {
            let qubits: Vec<usize> = (0..*n).filter(|&i| (mask >> i) & 1 == 1).collect();
            let p = rate.powi(qubits.len() as i32) * (1.0 - rate).powi((*n - qubits.len()) as i32);
            entries.push((p, PauliOperator::x_on(*n, &qubits)));
        }
        PauliChannel::explicit(*n, entries)
    }
}

/// Convolution of two explicit channels: product errors, multiplied
/// probabilities, duplicates merged.
pub fn compose(a: &PauliChannel, b: &PauliChannel) -> Result<PauliChannel> {
    if a.num_qubits() != b.num_qubits() {
        return Err(Error::DimensionMismatch("compose".into()));
    }
    let ea = a.entries()?;
    let eb = b.entries()?;
    let mut merged: HashMap<PauliOperator, f64> = HashMap::new();
    for (pa, oa) in ea {
        for (pb, ob) in eb {
            let prod = oa.product(ob);
            *merged.entry(prod).or_insert(0.0) += pa * pb;
        }
    }
    let mut entries: Vec<(f64, PauliOperator)> =
        merged.into_iter().map(|(e, p)| (p, e)).collect();
    sort_entries(&mut entries);
    PauliChannel::explicit(a.num_qubits(), entries)
}

fn sort_entries(entries: &mut [(f64, PauliOperator)]) {
    entries.sort_by(|(_, a), (_, b)| {
        let ka: Vec<usize> = a.symplectic_bits().iter_ones().collect();
        let kb: Vec<usize> = b.symplectic_bits().iter_ones().collect();
        ka.cmp(&kb)
    });
}

/// Probability that ideal error correction fails on an explicit channel:
/// the total weight of entries whose decomposition has a nontrivial logical
/// part.
pub fn fail_probability_exact(
    channel: &PauliChannel,
    code: &SubsystemCode,
    table: &CorrectionTable,
) -> Result<f64> {
    let entries = channel.entries()?;
    let mut failures = Vec::new();
    for (p, e) in entries {
        let d = decompose(e, code, table)?;
        if !d.is_correctable() {
            failures.push(*p);
        }
    }
    Ok(kahan_sum(failures.into_iter()))
}

/// Reduced channel: each error replaced by the correction operator of its
/// syndrome, probabilities of equal syndromes merged. The result has the
/// same syndrome distribution and zero failure probability.
pub fn reduce_channel(
    channel: &PauliChannel,
    code: &SubsystemCode,
    table: &CorrectionTable,
) -> Result<PauliChannel> {
    let entries = channel.entries()?;
    let mut merged: HashMap<BitVec, f64> = HashMap::new();
    for (p, e) in entries {
        let sigma = code.syndrome_of(e)?;
        *merged.entry(sigma.0).or_insert(0.0) += p;
    }
    let mut out = Vec::with_capacity(merged.len());
    for (bits, p) in merged {
        let f = table.correction_for(code, &StabSyndrome(bits))?;
        out.push((p, f));
    }
    sort_entries(&mut out);
    PauliChannel::explicit(channel.num_qubits(), out)
}

/// Syndrome distribution q(sigma) of an explicit channel.
pub fn syndrome_distribution(
    channel: &PauliChannel,
    code: &SubsystemCode,
) -> Result<HashMap<BitVec, f64>> {
    let entries = channel.entries()?;
    let mut dist: HashMap<BitVec, f64> = HashMap::new();
    for (p, e) in entries {
        let sigma = code.syndrome_of(e)?;
        *dist.entry(sigma.0).or_insert(0.0) += p;
    }
    Ok(dist)
}

/// Compare two explicit channels as distributions at the crate tolerance.
pub fn channels_equal(a: &PauliChannel, b: &PauliChannel) -> Result<bool> {
    let mut map: HashMap<PauliOperator, f64> = HashMap::new();
    for (p, e) in a.entries()? {
        *map.entry(e.clone()).or_insert(0.0) += p;
    }
    for (p, e) in b.entries()? {
        *map.entry(e.clone()).or_insert(0.0) -= p;
    }
    Ok(map.values().all(|v| v.abs() <= PROB_TOLERANCE))
}

// ---------------------------------------------------------------------------
// Alpha-boundedness checks
// ---------------------------------------------------------------------------

/// Outcome of a statistical alpha-boundedness check.
#[derive(Clone, Debug, Serialize)]
pub struct AlphaReport {
    pub subsets_checked: usize,
    pub samples: usize,
    pub violations: Vec<AlphaViolation>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaViolation {
    pub subset: Vec<usize>,
    pub observed: f64,
    pub bound: f64,
}

/// Tests p~(A) <= alpha^|A| over connected subsets A of the adjacency graph,
/// up to `max_subset_size` (capped at 4 for statistical power). A subset is
/// flagged only when its count exceeds the bound by more than 5 binomial
/// standard deviations.
pub fn check_alpha_bounded(
    samples: &[Vec<usize>],
    alpha: f64,
    max_subset_size: usize,
    adjacency: &[Vec<usize>],
) -> Result<AlphaReport> {
    if samples.is_empty() {
        return Err(Error::Validation("empty sample list".into()));
    }
    if max_subset_size > 4 {
        return Err(Error::Validation(
            "max_subset_size capped at 4 (statistical power)".into(),
        ));
    }
    let n = adjacency.len();
    // Membership bitmaps per node for fast subset counting.
    let nsamples = samples.len();
    let mut member: Vec<Vec<u64>> = vec![vec![0; nsamples.div_ceil(64)]; n];
    for (si, supp) in samples.iter().enumerate() {
        for &q in supp {
            member[q][si / 64] |= 1 << (si % 64);
        }
    }
    let count_subset = |subset: &[usize]| -> usize {
        let mut acc = 0usize;
        for w in 0..nsamples.div_ceil(64) {
            let mut word = u64::MAX;
            for &q in subset {
                word &= member[q][w];
            }
            if w == nsamples.div_ceil(64) - 1 && nsamples % 64 != 0 {
                word &= (1u64 << (nsamples % 64)) - 1;
            }
            acc += word.count_ones() as usize;
        }
        acc
    };

    let mut report = AlphaReport {
        subsets_checked: 0,
        samples: nsamples,
        violations: Vec::new(),
    };
    let mut check = |subset: &[usize]| {
        report.subsets_checked += 1;
        let k = count_subset(subset);
        let bound = alpha.powi(subset.len() as i32);
        let sigma = (nsamples as f64 * bound * (1.0 - bound)).sqrt();
        if (k as f64) > nsamples as f64 * bound + 5.0 * sigma {
            report.violations.push(AlphaViolation {
                subset: subset.to_vec(),
                observed: k as f64 / nsamples as f64,
                bound,
            });
        }
    };
    // Enumerate connected subsets containing v with all members >= v.
    for v in 0..n {
        let mut subset = vec![v];
        grow_connected(adjacency, v, &mut subset, max_subset_size, &mut check);
    }
    Ok(report)
}

fn grow_connected(
    adj: &[Vec<usize>],
    min_node: usize,
    subset: &mut Vec<usize>,
    cap: usize,
    check: &mut impl FnMut(&[usize]),
) {
    check(subset);
    if subset.len() == cap {
        return;
    }
    // frontier: neighbors of the subset larger than min_node, not yet in it
    let mut frontier: Vec<usize> = subset
        .iter()
        .flat_map(|&u| adj[u].iter().copied())
        .filter(|&u| u > min_node && !subset.contains(&u))
        .collect();
    frontier.sort_unstable();
    frontier.dedup();
    // avoid duplicates: only extend with nodes larger than the last added
    let last = *subset.last().unwrap();
    for u in frontier {
        if subset.len() > 1 && u <= last {
            continue;
        }
        subset.push(u);
        grow_connected(adj, min_node, subset, cap, check);
        subset.pop();
    }
}

/// Samples the effective wrong syndrome of a noisy recovery round: each of
/// the `n_checks` measurements flips with probability eta giving omega, the
/// repair closure supplies omega0, and the effective wrong syndrome is their
/// sum.
pub fn sample_effective_wrong_syndrome<R: Rng>(
    n_checks: usize,
    model: RecoveryModel,
    repair: impl Fn(&BitVec) -> BitVec,
    rng: &mut R,
) -> BitVec {
    let mut omega = BitVec::zeros(n_checks);
    for i in 0..n_checks {
        if rng.random_bool(model.eta) {
            omega.set(i, true);
        }
    }
    let omega0 = repair(&omega);
    let mut eff = omega;
    eff.xor_assign(&omega0);
    eff
}
