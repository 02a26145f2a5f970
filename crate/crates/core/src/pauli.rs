//! Binary-symplectic Pauli algebra and subsystem stabilizer codes.
//!
//! Pauli operators are stored modulo phase as a pair of bit vectors
//! (X part, Z part). Multiplication is bitwise XOR, so every operator is
//! its own inverse and commutation reduces to the symplectic form
//! `x_p·z_q + z_p·x_q (mod 2)`.

use crate::bits::{BitVec, ColumnSolver, F2Matrix};
use crate::{Error, Result};
use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

/// An n-qubit Pauli operator modulo phase.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    x: BitVec,
    z: BitVec,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            n,
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn from_parts(x: BitVec, z: BitVec) -> Self {
        assert_eq!(x.len(), z.len());
        PauliOperator { n: x.len(), x, z }
    }

    pub fn from_supports(n: usize, xs: &[usize], zs: &[usize]) -> Self {
        PauliOperator {
            n,
            x: BitVec::from_indices(n, xs),
            z: BitVec::from_indices(n, zs),
        }
    }

    pub fn x_on(n: usize, qubits: &[usize]) -> Self {
        Self::from_supports(n, qubits, &[])
    }

    pub fn z_on(n: usize, qubits: &[usize]) -> Self {
        Self::from_supports(n, &[], qubits)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Qubits on which the operator acts nontrivially.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| self.x.get(i) || self.z.get(i))
            .collect()
    }

    pub fn weight(&self) -> usize {
        (0..self.n)
            .filter(|&i| self.x.get(i) || self.z.get(i))
            .count()
    }

    /// In-place product (XOR of both parts; phases dropped).
    pub fn mul_assign(&mut self, other: &PauliOperator) {
        assert_eq!(self.n, other.n, "pauli product on mismatched qubit counts");
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    pub fn product(&self, other: &PauliOperator) -> PauliOperator {
        let mut p = self.clone();
        p.mul_assign(other);
        p
    }

    /// The 2n-bit symplectic row (x part then z part).
    pub fn symplectic_bits(&self) -> BitVec {
        self.x.concat(&self.z)
    }

    /// Parses the code-file notation, e.g. `X:0,2;Z:1`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut zs = Vec::new();
        for part in s.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (kind, rest) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad pauli term `{part}`")))?;
            let target = match kind.trim() {
                "X" => &mut xs,
                "Z" => &mut zs,
                other => return Err(Error::Parse(format!("bad pauli part `{other}`"))),
            };
            for tok in rest.split(',') {
                let tok = tok.trim();
                if tok.is_empty() {
                    continue;
                }
                let idx: usize = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad qubit index `{tok}`")))?;
                if idx >= n {
                    return Err(Error::Parse(format!("qubit index {idx} out of range (n={n})")));
                }
                target.push(idx);
            }
        }
        Ok(Self::from_supports(n, &xs, &zs))
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xs: Vec<String> = self.x.iter_ones().map(|i| i.to_string()).collect();
        let zs: Vec<String> = self.z.iter_ones().map(|i| i.to_string()).collect();
        write!(f, "X:{};Z:{}", xs.join(","), zs.join(","))
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// True iff the two operators commute (symplectic inner product is 0).
pub fn commutes(p: &PauliOperator, q: &PauliOperator) -> Result<bool> {
    if p.n != q.n {
        return Err(Error::DimensionMismatch(format!(
            "commutes({}, {})",
            p.n, q.n
        )));
    }
    Ok(!(p.x.and_parity(&q.z) ^ p.z.and_parity(&q.x)))
}

/// Syndrome over the stabilizer generator set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StabSyndrome(pub BitVec);

impl StabSyndrome {
    pub fn empty(len: usize) -> Self {
        StabSyndrome(BitVec::zeros(len))
    }

    pub fn xor(&self, other: &StabSyndrome) -> StabSyndrome {
        let mut b = self.0.clone();
        b.xor_assign(&other.0);
        StabSyndrome(b)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_zero()
    }

    pub fn weight(&self) -> usize {
        self.0.count_ones()
    }
}

/// Syndrome over the gauge generator set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaugeSyndrome(pub BitVec);

impl GaugeSyndrome {
    pub fn xor(&self, other: &GaugeSyndrome) -> GaugeSyndrome {
        let mut b = self.0.clone();
        b.xor_assign(&other.0);
        GaugeSyndrome(b)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_zero()
    }
}

/// A subsystem stabilizer code: stabilizer group S, gauge group G with S as
/// its center, and a set of bare logical representatives.
#[derive(Clone)]
pub struct SubsystemCode {
    pub n: usize,
    pub stab_gens: Vec<PauliOperator>,
    pub gauge_gens: Vec<PauliOperator>,
    pub logical_reps: Vec<PauliOperator>,
    pub css: bool,
    pub distance: Option<usize>,
}

impl SubsystemCode {
    pub fn new(
        n: usize,
        stab_gens: Vec<PauliOperator>,
        gauge_gens: Vec<PauliOperator>,
        logical_reps: Vec<PauliOperator>,
        css: bool,
    ) -> Self {
        SubsystemCode {
            n,
            stab_gens,
            gauge_gens,
            logical_reps,
            css,
            distance: None,
        }
    }

    /// A conventional stabilizer code: the gauge group is the stabilizer itself.
    pub fn stabilizer_code(
        n: usize,
        stab_gens: Vec<PauliOperator>,
        logical_reps: Vec<PauliOperator>,
        css: bool,
    ) -> Self {
        let gauge_gens = stab_gens.clone();
        Self::new(n, stab_gens, gauge_gens, logical_reps, css)
    }

    /// Structural invariants: stabilizers commute with everything, every
    /// stabilizer generator lies in the gauge span, logical representatives
    /// commute with the gauge group and anticommute in conjugate pairs.
    pub fn validate_structure(&self) -> Result<()> {
        for (i, s) in self.stab_gens.iter().enumerate() {
            for (j, g) in self.gauge_gens.iter().enumerate() {
                if !commutes(s, g)? {
                    return Err(Error::Validation(format!(
                        "stabilizer {i} anticommutes with gauge generator {j}"
                    )));
                }
            }
            for (j, l) in self.logical_reps.iter().enumerate() {
                if !commutes(s, l)? {
                    return Err(Error::Validation(format!(
                        "stabilizer {i} anticommutes with logical rep {j}"
                    )));
                }
            }
        }
        for (j, l) in self.logical_reps.iter().enumerate() {
            for (jj, g) in self.gauge_gens.iter().enumerate() {
                if !commutes(l, g)? {
                    return Err(Error::Validation(format!(
                        "logical rep {j} anticommutes with gauge generator {jj}"
                    )));
                }
            }
        }
        // S within the gauge span (as bit vectors).
        let cols: Vec<BitVec> = self
            .gauge_gens
            .iter()
            .map(|g| g.symplectic_bits())
            .collect();
        let solver = ColumnSolver::new(&cols, 2 * self.n);
        for (i, s) in self.stab_gens.iter().enumerate() {
            if solver.solve(&s.symplectic_bits()).is_none() {
                return Err(Error::Validation(format!(
                    "stabilizer generator {i} is not a product of gauge generators"
                )));
            }
        }
        // Logical representatives anticommute in conjugate pairs.
        let k2 = self.logical_reps.len();
        if k2 % 2 != 0 {
            return Err(Error::Validation(
                "logical representatives must come in conjugate pairs".into(),
            ));
        }
        for p in 0..k2 / 2 {
            let (lx, lz) = (&self.logical_reps[2 * p], &self.logical_reps[2 * p + 1]);
            if commutes(lx, lz)? {
                return Err(Error::Validation(format!(
                    "logical pair {p} does not anticommute"
                )));
            }
            for q in 0..k2 {
                if q != 2 * p && q != 2 * p + 1 && !commutes(&self.logical_reps[2 * p], &self.logical_reps[q])? {
                    return Err(Error::Validation(format!(
                        "logical reps {} and {q} should commute",
                        2 * p
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn syndrome_of(&self, e: &PauliOperator) -> Result<StabSyndrome> {
        if e.n != self.n {
            return Err(Error::DimensionMismatch(format!(
                "syndrome_of: error on {} qubits, code on {}",
                e.n, self.n
            )));
        }
        let mut bits = BitVec::zeros(self.stab_gens.len());
        for (i, s) in self.stab_gens.iter().enumerate() {
            if !commutes(s, e)? {
                bits.set(i, true);
            }
        }
        Ok(StabSyndrome(bits))
    }

    pub fn gauge_syndrome_of(&self, e: &PauliOperator) -> Result<GaugeSyndrome> {
        if e.n != self.n {
            return Err(Error::DimensionMismatch(format!(
                "gauge_syndrome_of: error on {} qubits, code on {}",
                e.n, self.n
            )));
        }
        let mut bits = BitVec::zeros(self.gauge_gens.len());
        for (i, g) in self.gauge_gens.iter().enumerate() {
            if !commutes(g, e)? {
                bits.set(i, true);
            }
        }
        Ok(GaugeSyndrome(bits))
    }

    /// True iff some Pauli error produces exactly this syndrome. With
    /// redundant generator sets not every bit pattern is reachable; this
    /// solves the linear system over GF(2).
    pub fn is_valid_syndrome(&self, s: &StabSyndrome) -> bool {
        self.solve_for_error(s).is_some()
    }

    /// Any Pauli operator with the given syndrome, or None. The solution is
    /// canonical: Gaussian elimination with lowest-index pivots.
    pub fn solve_for_error(&self, s: &StabSyndrome) -> Option<PauliOperator> {
        assert_eq!(s.0.len(), self.stab_gens.len());
        // Unknown: 2n bits (x | z). Row per generator g: sympl(g, e) = bit.
        // sympl(g, e) = x_g . z_e + z_g . x_e, so the row is (z_g | x_g).
        let rows: Vec<BitVec> = self
            .stab_gens
            .iter()
            .map(|g| g.z_bits().concat(g.x_bits()))
            .collect();
        // Solve rows . e = s via transposed column solver: treat unknowns as
        // columns of the transpose.
        let dim = self.stab_gens.len();
        let cols: Vec<BitVec> = (0..2 * self.n)
            .map(|j| {
                let mut c = BitVec::zeros(dim);
                for (i, r) in rows.iter().enumerate() {
                    if r.get(j) {
                        c.set(i, true);
                    }
                }
                c
            })
            .collect();
        let solver = ColumnSolver::new(&cols, dim);
        let sol = solver.solve(&s.0)?;
        let x = sol.slice(0, self.n);
        let z = sol.slice(self.n, self.n);
        Some(PauliOperator::from_parts(x, z))
    }

    /// Number of encoded qubits derived from generator ranks
    /// (k = n - rank(G_Z) - rank(S_X) for CSS subsystem codes, and the
    /// symplectic analogue otherwise).
    pub fn logical_count(&self) -> usize {
        let n = self.n;
        let gauge_rank = F2Matrix::from_rows(
            self.gauge_gens.iter().map(|g| g.symplectic_bits()).collect(),
            2 * n,
        )
        .rank();
        let stab_rank = F2Matrix::from_rows(
            self.stab_gens.iter().map(|g| g.symplectic_bits()).collect(),
            2 * n,
        )
        .rank();
        // k = n - (rank G + rank S)/2 for subsystem codes.
        n - (gauge_rank + stab_rank) / 2
    }
}

/// Correction table F(sigma): for every valid syndrome an operator taking the
/// system back to the code subspace. Lazy tables solve on first request and
/// cache; explicit tables error on a missing syndrome.
pub struct CorrectionTable {
    entries: RwLock<HashMap<BitVec, PauliOperator>>,
    lazy: bool,
}

impl CorrectionTable {
    /// Lazy table: F(sigma) computed on first request by GF(2) elimination.
    pub fn lazy() -> Self {
        CorrectionTable {
            entries: RwLock::new(HashMap::new()),
            lazy: true,
        }
    }

    /// Explicit table from (syndrome, correction) pairs; missing syndromes error.
    pub fn explicit(code: &SubsystemCode, entries: Vec<(StabSyndrome, PauliOperator)>) -> Result<Self> {
        let mut map = HashMap::new();
        for (s, f) in entries {
            let check = code.syndrome_of(&f)?;
            if check != s {
                return Err(Error::Validation(format!(
                    "correction table entry has syndrome {:?}, expected {:?}",
                    check.0, s.0
                )));
            }
            map.insert(s.0, f);
        }
        Ok(CorrectionTable {
            entries: RwLock::new(map),
            lazy: false,
        })
    }

    pub fn insert(&self, code: &SubsystemCode, s: StabSyndrome, f: PauliOperator) -> Result<()> {
        let check = code.syndrome_of(&f)?;
        if check != s {
            return Err(Error::Validation("correction does not match syndrome".into()));
        }
        self.entries.write().unwrap().insert(s.0, f);
        Ok(())
    }

    pub fn correction_for(&self, code: &SubsystemCode, s: &StabSyndrome) -> Result<PauliOperator> {
        if let Some(f) = self.entries.read().unwrap().get(&s.0) {
            return Ok(f.clone());
        }
        if !self.lazy {
            return Err(Error::IncompleteTable(format!("{:?}", s.0)));
        }
        let f = code
            .solve_for_error(s)
            .ok_or_else(|| Error::Validation("syndrome is not valid for this code".into()))?;
        self.entries
            .write()
            .unwrap()
            .insert(s.0.clone(), f.clone());
        Ok(f)
    }
}

/// The unique decomposition E = F(sigma) * G * L.
#[derive(Clone, Debug)]
pub struct ErrorDecomposition {
    pub corr: PauliOperator,
    pub gauge_part: PauliOperator,
    pub logical_part: PauliOperator,
}

impl ErrorDecomposition {
    pub fn recompose(&self) -> PauliOperator {
        self.corr.product(&self.gauge_part).product(&self.logical_part)
    }

    pub fn is_correctable(&self) -> bool {
        self.logical_part.is_identity()
    }
}

/// Decomposes `e` as F(sigma(e)) * G * L with G in the gauge group and L a
/// product of logical representatives (the canonical coset representative).
pub fn decompose(
    e: &PauliOperator,
    code: &SubsystemCode,
    table: &CorrectionTable,
) -> Result<ErrorDecomposition> {
    let sigma = code.syndrome_of(e)?;
    let corr = table.correction_for(code, &sigma)?;
    let residual = e.product(&corr); // e * F(sigma): trivial syndrome
    // Solve residual = product(gauge_gens^a) * product(logical_reps^b).
    let mut cols: Vec<BitVec> = code
        .gauge_gens
        .iter()
        .map(|g| g.symplectic_bits())
        .collect();
    let n_gauge = cols.len();
    cols.extend(code.logical_reps.iter().map(|l| l.symplectic_bits()));
    let solver = ColumnSolver::new(&cols, 2 * code.n);
    let sol = solver.solve(&residual.symplectic_bits()).ok_or_else(|| {
        Error::Validation(
            "residual error is outside the gauge+logical span (incomplete logical basis?)".into(),
        )
    })?;
    let mut gauge_part = PauliOperator::identity(code.n);
    let mut logical_part = PauliOperator::identity(code.n);
    for c in sol.iter_ones() {
        if c < n_gauge {
            gauge_part.mul_assign(&code.gauge_gens[c]);
        } else {
            logical_part.mul_assign(&code.logical_reps[c - n_gauge]);
        }
    }
    // The logical coset is unique; the gauge factor is whatever closes the product.
    let mut g_exact = residual.clone();
    g_exact.mul_assign(&logical_part);
    Ok(ErrorDecomposition {
        corr,
        gauge_part: g_exact,
        logical_part,
    })
}

/// Which error class to enumerate in the distance search.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ErrorSector {
    Full,
    XOnly,
    ZOnly,
}

/// Brute-force code distance: minimum weight over C(S) - G, restricted to
/// `max_weight`. Errors out if the enumeration would exceed the budget.
pub fn code_distance_bruteforce(
    code: &SubsystemCode,
    max_weight: usize,
    sector: ErrorSector,
) -> Result<Option<usize>> {
    let n = code.n;
    let per_qubit: u128 = match sector {
        ErrorSector::Full => 3,
        _ => 1,
    };
    let mut budget: u128 = 0;
    for w in 1..=max_weight {
        budget += binomial(n, w) * per_qubit.pow(w as u32);
    }
    if budget > 100_000_000 {
        return Err(Error::ResourceBudget(format!(
            "distance enumeration needs {budget} candidates"
        )));
    }
    // Membership test helper: e in G?
    let gauge_cols: Vec<BitVec> = code
        .gauge_gens
        .iter()
        .map(|g| g.symplectic_bits())
        .collect();
    let gauge_solver = ColumnSolver::new(&gauge_cols, 2 * n);

    let mut support = vec![0usize; max_weight];
    for w in 1..=max_weight {
        let found = enumerate_supports(n, w, 0, 0, &mut support, &mut |supp| {
            // iterate Pauli assignments on supp
            let kinds: &[(bool, bool)] = match sector {
                ErrorSector::XOnly => &[(true, false)],
                ErrorSector::ZOnly => &[(false, true)],
                ErrorSector::Full => &[(true, false), (false, true), (true, true)],
            };
            let mut assignment = vec![0usize; w];
            loop {
                let mut e = PauliOperator::identity(n);
                for (slot, &q) in supp.iter().enumerate() {
                    let (has_x, has_z) = kinds[assignment[slot]];
                    if has_x {
                        e.x.set(q, true);
                    }
                    if has_z {
                        e.z.set(q, true);
                    }
                }
                let trivial_syndrome = code
                    .syndrome_of(&e)
                    .map(|s| s.is_empty())
                    .unwrap_or(false);
                if trivial_syndrome && gauge_solver.solve(&e.symplectic_bits()).is_none() {
                    return true; // undetected and not pure gauge: logical
                }
                // next assignment
                let mut carry = 0;
                loop {
                    if carry == w {
                        return false;
                    }
                    assignment[carry] += 1;
                    if assignment[carry] < kinds.len() {
                        break;
                    }
                    assignment[carry] = 0;
                    carry += 1;
                }
            }
        });
        if found {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn enumerate_supports(
    n: usize,
    w: usize,
    depth: usize,
    start: usize,
    support: &mut [usize],
    f: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if depth == w {
        return f(&support[..w]);
    }
    for q in start..n {
        support[depth] = q;
        if enumerate_supports(n, w, depth + 1, q + 1, support, f) {
            return true;
        }
    }
    false
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

// ---------------------------------------------------------------------------
// Code text format
// ---------------------------------------------------------------------------

/// Serializes a code in the line-oriented text format:
/// header `n k`, then sections `[STAB]`, `[GAUGE]`, `[LOGICAL]` with one
/// generator per line as `X:<indices>;Z:<indices>`.
pub fn code_to_text(code: &SubsystemCode) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", code.n, code.logical_count()));
    out.push_str("[STAB]\n");
    for g in &code.stab_gens {
        out.push_str(&format!("{g}\n"));
    }
    out.push_str("[GAUGE]\n");
    for g in &code.gauge_gens {
        out.push_str(&format!("{g}\n"));
    }
    out.push_str("[LOGICAL]\n");
    for g in &code.logical_reps {
        out.push_str(&format!("{g}\n"));
    }
    out
}

/// Parses the text format produced by [`code_to_text`]. Round-trips bit-exactly.
pub fn code_from_text(text: &str) -> Result<SubsystemCode> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty code file".into()))?;
    let mut parts = header.split_whitespace();
    let n: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("bad header".into()))?;
    let _k: usize = parts
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse("bad header".into()))?;
    let mut stab = Vec::new();
    let mut gauge = Vec::new();
    let mut logical = Vec::new();
    let mut section: Option<usize> = None;
    for line in lines {
        let line = line.trim();
        match line {
            "[STAB]" => section = Some(0),
            "[GAUGE]" => section = Some(1),
            "[LOGICAL]" => section = Some(2),
            _ => {
                let op = PauliOperator::parse(n, line)?;
                match section {
                    Some(0) => stab.push(op),
                    Some(1) => gauge.push(op),
                    Some(2) => logical.push(op),
                    _ => return Err(Error::Parse(format!("generator before section: `{line}`"))),
                }
            }
        }
    }
    let css = stab
        .iter()
        .chain(&gauge)
        .all(|p| p.x_bits().is_zero() || p.z_bits().is_zero());
    Ok(SubsystemCode::new(n, stab, gauge, logical, css))
}

// ---------------------------------------------------------------------------
// Small standard codes used across the crate's tests and examples
// ---------------------------------------------------------------------------

/// 1D repetition code on an open chain: checks Z_i Z_{i+1}.
pub fn repetition_chain(n: usize) -> SubsystemCode {
    let stab: Vec<PauliOperator> = (0..n - 1)
        .map(|i| PauliOperator::z_on(n, &[i, i + 1]))
        .collect();
    let logical = vec![
        PauliOperator::x_on(n, &(0..n).collect::<Vec<_>>()),
        PauliOperator::z_on(n, &[0]),
    ];
    SubsystemCode::stabilizer_code(n, stab, logical, true)
}

/// 1D repetition code on a ring: checks Z_i Z_{i+1 mod n} (redundant set).
pub fn repetition_ring(n: usize) -> SubsystemCode {
    let stab: Vec<PauliOperator> = (0..n)
        .map(|i| PauliOperator::z_on(n, &[i, (i + 1) % n]))
        .collect();
    let logical = vec![
        PauliOperator::x_on(n, &(0..n).collect::<Vec<_>>()),
        PauliOperator::z_on(n, &[0]),
    ];
    SubsystemCode::stabilizer_code(n, stab, logical, true)
}

/// Majority-vote correction table for the repetition codes: F(sigma) flips
/// the minority side consistent with the syndrome.
pub fn repetition_majority_table(code: &SubsystemCode) -> Result<CorrectionTable> {
    let table = CorrectionTable::lazy();
    let n = code.n;
    // Enumerate all 2^n bit-flip patterns, keep the lighter representative per syndrome.
    let mut best: HashMap<BitVec, PauliOperator> = HashMap::new();
    for mask in 0..(1u64 << n) {
        let qubits: Vec<usize> = (0..n).filter(|&i| (mask >> i) & 1 == 1).collect();
        let e = PauliOperator::x_on(n, &qubits);
        let s = code.syndrome_of(&e)?;
        let entry = best.entry(s.0).or_insert_with(|| e.clone());
        if e.weight() < entry.weight() {
            *entry = e;
        }
    }
    for (bits, f) in best {
        table.insert(code, StabSyndrome(bits), f)?;
    }
    Ok(table)
}
