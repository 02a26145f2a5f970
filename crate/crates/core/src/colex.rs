//! 3-colexes: colored cell complexes for gauge color codes.
//!
//! Everything is represented through the dual simplicial picture: dual
//! vertices are the colex cells (internal) and the boundary regions
//! (external), dual tetrahedra are the colex vertices (qubits), dual
//! triangles the colex edges and dual vertex pairs the colex plaquettes.
//!
//! The concrete lattice is the Kuhn triangulation of Z^3 (each unit cube cut
//! into six tetrahedra along coordinate-monotone paths) with vertex color
//! (x+y+z) mod 4: every tetrahedron spans four consecutive diagonal layers,
//! so it touches all four colors. Closed colexes wrap this on a 3-torus;
//! bounded colexes keep a finite set of dual vertices and merge all removed
//! vertices of color kappa into a single external kappa-vertex, which yields
//! the tetrahedral family.

use crate::bits::{BitVec, F2Matrix};
use crate::pauli::{PauliOperator, SubsystemCode};
use crate::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

pub type Color = u8;
pub const COLOR_NAMES: [&str; 4] = ["r", "g", "b", "y"];

/// Complement of a set of colors, as a sorted list.
pub fn complement(colors: &[Color]) -> Vec<Color> {
    (0u8..4).filter(|c| !colors.contains(c)).collect()
}

/// A colex edge: dual triangle with at least one internal vertex. The color
/// is the one missing from the triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColexEdge {
    pub tri: [u32; 3],
    pub color: Color,
}

/// A colex plaquette: dual vertex pair with at least one internal vertex.
/// The label is the pair of colors missing from the endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColexPlaquette {
    pub pair: [u32; 2],
    pub label: [Color; 2],
}

/// A 3-colex stored through its dual simplicial lattice.
#[derive(Clone, Debug)]
pub struct Colex {
    /// Internal dual vertices = colex cells.
    pub n_internal: usize,
    pub internal_colors: Vec<Color>,
    /// Lexicographic lattice coordinates of internal vertices (construction
    /// provenance; empty for glued complexes).
    pub internal_coords: Vec<[i64; 3]>,
    /// External dual vertices = boundary regions, one per color present.
    pub region_colors: Vec<Color>,
    /// Dual tetrahedra = colex vertices = qubits (sorted ids).
    pub tets: Vec<[u32; 4]>,
    /// Colex edges (dual triangles).
    pub edges: Vec<ColexEdge>,
    /// Colex plaquettes (dual vertex pairs).
    pub plaquettes: Vec<ColexPlaquette>,
    /// 3-color label of each cell (complement of the cell color), as bitmask.
    pub cell_labels: Vec<u8>,
}

impl Colex {
    pub fn n_dual_vertices(&self) -> usize {
        self.n_internal + self.region_colors.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.tets.len()
    }

    pub fn is_internal(&self, dv: u32) -> bool {
        (dv as usize) < self.n_internal
    }

    pub fn dual_color(&self, dv: u32) -> Color {
        if self.is_internal(dv) {
            self.internal_colors[dv as usize]
        } else {
            self.region_colors[dv as usize - self.n_internal]
        }
    }

    /// Colors of the regions a colex vertex belongs to (empty in the bulk).
    pub fn vertex_region_colors(&self, v: usize) -> Vec<Color> {
        self.tets[v]
            .iter()
            .filter(|&&dv| !self.is_internal(dv))
            .map(|&dv| self.dual_color(dv))
            .collect()
    }

    /// Qubits of a cell: colex vertices containing the internal dual vertex.
    pub fn cell_support(&self, cell: u32) -> Vec<usize> {
        self.tets
            .iter()
            .enumerate()
            .filter(|(_, t)| t.contains(&cell))
            .map(|(i, _)| i)
            .collect()
    }

    /// Qubits of a plaquette: colex vertices containing both endpoints.
    pub fn plaquette_support(&self, p: &ColexPlaquette) -> Vec<usize> {
        self.tets
            .iter()
            .enumerate()
            .filter(|(_, t)| t.contains(&p.pair[0]) && t.contains(&p.pair[1]))
            .map(|(i, _)| i)
            .collect()
    }

    /// Qubits of a region: colex vertices touching the external vertex.
    pub fn region_support(&self, region: usize) -> Vec<usize> {
        let ext = (self.n_internal + region) as u32;
        self.tets
            .iter()
            .enumerate()
            .filter(|(_, t)| t.contains(&ext))
            .map(|(i, _)| i)
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Kuhn triangulation scaffolding
// ---------------------------------------------------------------------------

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn cube_tets(q: [i64; 3]) -> [[ [i64; 3]; 4]; 6] {
    let mut out = [[[0i64; 3]; 4]; 6];
    for (ti, perm) in PERMS.iter().enumerate() {
        let mut p = q;
        out[ti][0] = p;
        for (step, &axis) in perm.iter().enumerate() {
            p[axis] += 1;
            out[ti][step + 1] = p;
        }
    }
    out
}

fn color_of(p: [i64; 3], modulus: Option<i64>) -> Color {
    let s = p[0] + p[1] + p[2];
    let _ = modulus;
    (s.rem_euclid(4)) as Color
}

/// Derive edges and plaquettes from the tetrahedron list.
fn derive_strata(
    n_internal: usize,
    dual_color: impl Fn(u32) -> Color,
    tets: &[[u32; 4]],
) -> (Vec<ColexEdge>, Vec<ColexPlaquette>) {
    let is_internal = |dv: u32| (dv as usize) < n_internal;
    let mut tris: BTreeSet<[u32; 3]> = BTreeSet::new();
    let mut pairs: BTreeSet<[u32; 2]> = BTreeSet::new();
    for t in tets {
        for skip in 0..4 {
            let mut tri = [0u32; 3];
            let mut k = 0;
            for (i, &dv) in t.iter().enumerate() {
                if i != skip {
                    tri[k] = dv;
                    k += 1;
                }
            }
            if tri.iter().any(|&dv| is_internal(dv)) {
                tris.insert(tri);
            }
        }
        for i in 0..4 {
            for j in i + 1..4 {
                let pair = [t[i], t[j]];
                if pair.iter().any(|&dv| is_internal(dv)) {
                    pairs.insert(pair);
                }
            }
        }
    }
    let edges = tris
        .into_iter()
        .map(|tri| {
            let cs: Vec<Color> = tri.iter().map(|&dv| dual_color(dv)).collect();
            let missing = complement(&cs);
            debug_assert_eq!(missing.len(), 1);
            ColexEdge {
                tri,
                color: missing[0],
            }
        })
        .collect();
    let plaquettes = pairs
        .into_iter()
        .map(|pair| {
            let cs = [dual_color(pair[0]), dual_color(pair[1])];
            let miss = complement(&cs);
            debug_assert_eq!(miss.len(), 2);
            ColexPlaquette {
                pair,
                label: [miss[0], miss[1]],
            }
        })
        .collect();
    (edges, plaquettes)
}

fn finish_colex(
    n_internal: usize,
    internal_colors: Vec<Color>,
    internal_coords: Vec<[i64; 3]>,
    region_colors: Vec<Color>,
    tets: Vec<[u32; 4]>,
) -> Colex {
    let colors = internal_colors.clone();
    let regions = region_colors.clone();
    let dual_color = move |dv: u32| {
        if (dv as usize) < colors.len() {
            colors[dv as usize]
        } else {
            regions[dv as usize - colors.len()]
        }
    };
    let (edges, plaquettes) = derive_strata(n_internal, dual_color, &tets);
    let cell_labels = internal_colors
        .iter()
        .map(|&c| 0b1111u8 & !(1 << c))
        .collect();
    Colex {
        n_internal,
        internal_colors,
        internal_coords,
        region_colors,
        tets,
        edges,
        plaquettes,
        cell_labels,
    }
}

/// Closed 3-colex on a 3-torus of linear size L.
///
/// The diagonal 4-coloring wraps consistently only when 4 divides L, which
/// strengthens the usual evenness requirement of two-sublattice colorings.
pub fn build_closed_3torus(l: usize) -> Result<Colex> {
    if l % 4 != 0 || l == 0 {
        return Err(Error::Validation(format!(
            "3-torus colex size must be a positive multiple of 4, got {l}"
        )));
    }
    let li = l as i64;
    let mut index: BTreeMap<[i64; 3], u32> = BTreeMap::new();
    let mut coords = Vec::new();
    for x in 0..li {
        for y in 0..li {
            for z in 0..li {
                index.insert([x, y, z], coords.len() as u32);
                coords.push([x, y, z]);
            }
        }
    }
    let colors: Vec<Color> = coords.iter().map(|&p| color_of(p, Some(li))).collect();
    let mut tets: BTreeSet<[u32; 4]> = BTreeSet::new();
    for x in 0..li {
        for y in 0..li {
            for z in 0..li {
                for tet in cube_tets([x, y, z]) {
                    let mut ids = [0u32; 4];
                    for (i, p) in tet.iter().enumerate() {
                        let w = [
                            p[0].rem_euclid(li),
                            p[1].rem_euclid(li),
                            p[2].rem_euclid(li),
                        ];
                        ids[i] = index[&w];
                    }
                    ids.sort_unstable();
                    tets.insert(ids);
                }
            }
        }
    }
    Ok(finish_colex(
        coords.len(),
        colors,
        coords,
        Vec::new(),
        tets.into_iter().collect(),
    ))
}

/// Bounded colex from an explicit kept set of dual lattice vertices: every
/// removed vertex of color kappa is merged into the external kappa-vertex.
fn build_from_kept(kept: &[[i64; 3]]) -> Result<Colex> {
    let mut index: BTreeMap<[i64; 3], u32> = BTreeMap::new();
    let mut coords: Vec<[i64; 3]> = kept.to_vec();
    coords.sort_unstable();
    coords.dedup();
    for (i, &p) in coords.iter().enumerate() {
        index.insert(p, i as u32);
    }
    let n_internal = coords.len();
    let colors: Vec<Color> = coords.iter().map(|&p| color_of(p, None)).collect();

    // Which external colors appear: scan candidate tets once.
    let (mut lo, mut hi) = ([i64::MAX; 3], [i64::MIN; 3]);
    for p in &coords {
        for a in 0..3 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let mut raw_tets: Vec<[[i64; 3]; 4]> = Vec::new();
    for x in lo[0] - 1..=hi[0] {
        for y in lo[1] - 1..=hi[1] {
            for z in lo[2] - 1..=hi[2] {
                for tet in cube_tets([x, y, z]) {
                    if tet.iter().any(|p| index.contains_key(p)) {
                        raw_tets.push(tet);
                    }
                }
            }
        }
    }
    let mut ext_present = [false; 4];
    for tet in &raw_tets {
        for p in tet {
            if !index.contains_key(p) {
                ext_present[color_of(*p, None) as usize] = true;
            }
        }
    }
    let region_colors: Vec<Color> = (0u8..4).filter(|&c| ext_present[c as usize]).collect();
    let ext_id = |c: Color| -> u32 {
        let pos = region_colors.iter().position(|&rc| rc == c).unwrap();
        (n_internal + pos) as u32
    };
    let mut tets: BTreeSet<[u32; 4]> = BTreeSet::new();
    for tet in &raw_tets {
        let mut ids = [0u32; 4];
        for (i, p) in tet.iter().enumerate() {
            ids[i] = match index.get(p) {
                Some(&id) => id,
                None => ext_id(color_of(*p, None)),
            };
        }
        ids.sort_unstable();
        tets.insert(ids);
    }
    Ok(finish_colex(
        n_internal,
        colors,
        coords,
        region_colors,
        tets.into_iter().collect(),
    ))
}

/// Tetrahedral simple free 3-colex of distance d (odd, >= 3).
///
/// The kept cells form the staircase simplex 0 <= z <= y <= x <= m-1 with
/// m = (d+1)/2; its four exposed sides each face removed vertices of a single
/// color class, producing four free triangular regions.
pub fn build_tetrahedral(d: usize) -> Result<Colex> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::Validation(format!(
            "tetrahedral colex distance must be odd and >= 3, got {d}"
        )));
    }
    let m = ((d + 1) / 2) as i64;
    let mut kept = Vec::new();
    for x in 0..m {
        for y in 0..=x {
            for z in 0..=y {
                kept.push([x, y, z]);
            }
        }
    }
    build_from_kept(&kept)
}

/// Glue a bounded colex to a mirror copy of itself: regions become interface
/// cells and the result is a closed colex.
pub fn glue_double(colex: &Colex) -> Result<Colex> {
    if colex.region_colors.is_empty() {
        return Err(Error::Validation("glue_double needs a bounded colex".into()));
    }
    let n1 = colex.n_internal;
    let nr = colex.region_colors.len();
    // id layout: copy1 internals, copy2 internals, interface cells
    let n_internal = 2 * n1 + nr;
    let mut colors = Vec::with_capacity(n_internal);
    colors.extend(colex.internal_colors.iter().copied());
    colors.extend(colex.internal_colors.iter().copied());
    colors.extend(colex.region_colors.iter().copied());
    let map_id = |dv: u32, copy: usize| -> u32 {
        if colex.is_internal(dv) {
            (dv as usize + copy * n1) as u32
        } else {
            (2 * n1 + (dv as usize - n1)) as u32
        }
    };
    let mut tets: BTreeSet<[u32; 4]> = BTreeSet::new();
    for t in &colex.tets {
        for copy in 0..2 {
            let mut ids = [0u32; 4];
            for (i, &dv) in t.iter().enumerate() {
                ids[i] = map_id(dv, copy);
            }
            ids.sort_unstable();
            tets.insert(ids);
        }
    }
    Ok(finish_colex(
        n_internal,
        colors,
        Vec::new(),
        Vec::new(),
        tets.into_iter().collect(),
    ))
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Report of structural validation; `violations` is empty for a valid colex.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&str> {
        self.violations.first().map(|s| s.as_str())
    }
}

/// Verifies the defining incidence (each vertex in exactly one kappa-cell
/// for every admissible kappa), label consistency, plaquette cycle shape and
/// per-cell sphere counts.
pub fn validate(colex: &Colex) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut complain = |msg: String| report.violations.push(msg);

    // Tetrahedra must be rainbow and strictly sorted.
    for (v, t) in colex.tets.iter().enumerate() {
        let mut mask = 0u8;
        for &dv in t {
            mask |= 1 << colex.dual_color(dv);
        }
        if mask != 0b1111 {
            complain(format!("vertex {v}: dual tetrahedron is not 4-colored"));
        }
        if !(t[0] < t[1] && t[1] < t[2] && t[2] < t[3]) {
            complain(format!("vertex {v}: dual tetrahedron ids not strictly sorted"));
        }
    }

    // Stored label consistency.
    for (i, e) in colex.edges.iter().enumerate() {
        let cs: Vec<Color> = e.tri.iter().map(|&dv| colex.dual_color(dv)).collect();
        let missing = complement(&cs);
        if missing.len() != 1 || missing[0] != e.color {
            complain(format!(
                "edge {i}: label {} inconsistent with endpoint colors",
                COLOR_NAMES[e.color as usize]
            ));
        }
    }
    for (i, p) in colex.plaquettes.iter().enumerate() {
        let cs = [colex.dual_color(p.pair[0]), colex.dual_color(p.pair[1])];
        let miss = complement(&cs);
        if miss.as_slice() != p.label {
            complain(format!("plaquette {i}: label inconsistent with endpoints"));
        }
    }
    for (c, &label) in colex.cell_labels.iter().enumerate() {
        let expect = 0b1111u8 & !(1 << colex.internal_colors[c]);
        if label != expect {
            complain(format!("cell {c}: label mask {label:#06b} inconsistent"));
        }
    }

    // Defining incidence per vertex.
    for (v, t) in colex.tets.iter().enumerate() {
        let kv: u8 = t
            .iter()
            .filter(|&&dv| !colex.is_internal(dv))
            .map(|&dv| 1u8 << colex.dual_color(dv))
            .fold(0, |a, b| a | b);
        // kappa-cells, |kappa| = 3: count internal dual vertices by label.
        for kappa in 0u8..16 {
            let size = kappa.count_ones();
            if !(1..=3).contains(&size) {
                continue;
            }
            if (kappa | kv).count_ones() == 4 {
                continue;
            }
            let count = match size {
                3 => t
                    .iter()
                    .filter(|&&dv| {
                        colex.is_internal(dv) && colex.cell_labels[dv as usize] == kappa
                    })
                    .count(),
                2 => colex
                    .plaquettes
                    .iter()
                    .filter(|p| {
                        let mask = (1u8 << p.label[0]) | (1 << p.label[1]);
                        mask == kappa
                            && t.contains(&p.pair[0])
                            && t.contains(&p.pair[1])
                    })
                    .count(),
                1 => colex
                    .edges
                    .iter()
                    .filter(|e| {
                        1u8 << e.color == kappa && e.tri.iter().all(|dv| t.contains(dv))
                    })
                    .count(),
                _ => unreachable!(),
            };
            if count != 1 {
                let stratum = ["", "edge", "plaquette", "cell"][size as usize];
                complain(format!(
                    "vertex {v}: belongs to {count} kappa-{stratum}s for kappa mask {kappa:#06b} (expected exactly one)"
                ));
            }
        }
    }

    // Plaquettes are single even cycles.
    for (i, p) in colex.plaquettes.iter().enumerate() {
        let supp = colex.plaquette_support(p);
        if supp.len() < 4 || supp.len() % 2 != 0 {
            complain(format!(
                "plaquette {i}:支持 size {} is not an even cycle length",
                supp.len()
            ));
            continue;
        }
        // cycle graph: vertices = supp tets, edges = triangles containing the pair
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (ai, &a) in supp.iter().enumerate() {
            for &b in supp.iter().skip(ai + 1) {
                let shared: Vec<u32> = colex.tets[a]
                    .iter()
                    .filter(|dv| colex.tets[b].contains(dv))
                    .copied()
                    .collect();
                if shared.len() == 3
                    && shared.contains(&p.pair[0])
                    && shared.contains(&p.pair[1])
                {
                    adj.entry(a).or_default().push(b);
                    adj.entry(b).or_default().push(a);
                }
            }
        }
        if supp.iter().any(|v| adj.get(v).map_or(0, |n| n.len()) != 2) {
            complain(format!("plaquette {i}: support is not 2-regular"));
            continue;
        }
        // connectivity
        let mut seen = BTreeSet::new();
        let mut stack = vec![supp[0]];
        seen.insert(supp[0]);
        while let Some(v) = stack.pop() {
            for &u in &adj[&v] {
                if seen.insert(u) {
                    stack.push(u);
                }
            }
        }
        if seen.len() != supp.len() {
            complain(format!("plaquette {i}: cycle is disconnected"));
        }
    }

    // Cells are 2-spheres: V - E + F = 2 over the cell's boundary strata.
    for cell in 0..colex.n_internal as u32 {
        let v = colex.cell_support(cell).len();
        let e = colex
            .edges
            .iter()
            .filter(|ed| ed.tri.contains(&cell))
            .count();
        let f = colex
            .plaquettes
            .iter()
            .filter(|p| p.pair.contains(&cell))
            .count();
        if v as i64 - e as i64 + f as i64 != 2 {
            complain(format!(
                "cell {cell}: boundary Euler characteristic {} (expected 2)",
                v as i64 - e as i64 + f as i64
            ));
        }
    }

    report
}

// ---------------------------------------------------------------------------
// Region classification and code derivation
// ---------------------------------------------------------------------------

/// Free/frozen classification of the boundary strata.
#[derive(Clone, Debug)]
pub struct RegionClassification {
    /// Per unordered region pair that shares a border: (colors, vertex count,
    /// odd flag).
    pub borders: Vec<([Color; 2], usize, bool)>,
    /// Per region (indexed as in `region_colors`): free flag.
    pub free: Vec<bool>,
}

/// Classifies borders by vertex parity and regions by odd borders of each
/// color.
pub fn classify_regions(colex: &Colex) -> RegionClassification {
    let nr = colex.region_colors.len();
    let mut borders = Vec::new();
    let mut odd_count = vec![[0usize; 4]; nr]; // per region, per other color
    for i in 0..nr {
        for j in i + 1..nr {
            let ei = (colex.n_internal + i) as u32;
            let ej = (colex.n_internal + j) as u32;
            let verts = colex
                .tets
                .iter()
                .filter(|t| t.contains(&ei) && t.contains(&ej))
                .count();
            if verts == 0 {
                continue;
            }
            let odd = verts % 2 == 1;
            borders.push((
                [colex.region_colors[i], colex.region_colors[j]],
                verts,
                odd,
            ));
            if odd {
                odd_count[i][colex.region_colors[j] as usize] += 1;
                odd_count[j][colex.region_colors[i] as usize] += 1;
            }
        }
    }
    let free = (0..nr)
        .map(|i| {
            let mine = colex.region_colors[i];
            // free: an odd number of odd borders of every color it borders;
            // frozen: none. A region with no borders at all is frozen.
            let mut any = false;
            let mut all_odd = true;
            for c in 0..4u8 {
                if c == mine {
                    continue;
                }
                let k = odd_count[i][c as usize];
                if k > 0 {
                    any = true;
                }
                if k % 2 == 0 && border_exists(colex, i, c) {
                    all_odd = false;
                }
            }
            any && all_odd
        })
        .collect();
    RegionClassification { borders, free }
}

fn border_exists(colex: &Colex, region: usize, other_color: Color) -> bool {
    let ei = (colex.n_internal + region) as u32;
    colex.region_colors.iter().enumerate().any(|(j, &c)| {
        c == other_color && j != region && {
            let ej = (colex.n_internal + j) as u32;
            colex
                .tets
                .iter()
                .any(|t| t.contains(&ei) && t.contains(&ej))
        }
    })
}

/// Derives the gauge color code: gauge generators from plaquettes,
/// stabilizers from cells plus frozen-region operators (redundant region
/// generators dropped by rank), logical representatives from free regions.
pub fn derive_code(colex: &Colex) -> Result<SubsystemCode> {
    let report = validate(colex);
    if !report.is_clean() {
        return Err(Error::Validation(format!(
            "refusing to derive a code from an invalid colex: {}",
            report.first().unwrap_or("unknown")
        )));
    }
    let n = colex.n_vertices();
    let mut gauge = Vec::new();
    for p in &colex.plaquettes {
        let supp = colex.plaquette_support(p);
        gauge.push(PauliOperator::x_on(n, &supp));
        gauge.push(PauliOperator::z_on(n, &supp));
    }
    let mut stab = Vec::new();
    for cell in 0..colex.n_internal as u32 {
        let supp = colex.cell_support(cell);
        stab.push(PauliOperator::x_on(n, &supp));
        stab.push(PauliOperator::z_on(n, &supp));
    }
    let class = classify_regions(colex);
    // Frozen regions contribute stabilizers; drop ones already in the span.
    let mut stab_rows: Vec<BitVec> = stab.iter().map(|g| g.symplectic_bits()).collect();
    for (i, &free) in class.free.iter().enumerate() {
        if free {
            continue;
        }
        let supp = colex.region_support(i);
        for op in [
            PauliOperator::x_on(n, &supp),
            PauliOperator::z_on(n, &supp),
        ] {
            let mut m = F2Matrix::from_rows(stab_rows.clone(), 2 * n);
            let before = m.echelonize().len();
            let mut m2 = F2Matrix::from_rows(stab_rows.clone(), 2 * n);
            m2.push_row(op.symplectic_bits());
            let after = m2.rank();
            if after > before {
                stab_rows.push(op.symplectic_bits());
                stab.push(op);
            }
        }
    }
    // Logical representatives: free-region operator pairs that enlarge the
    // span beyond gauge + stabilizer + previously chosen logicals.
    let mut logical: Vec<PauliOperator> = Vec::new();
    let mut span_rows: Vec<BitVec> = gauge.iter().map(|g| g.symplectic_bits()).collect();
    span_rows.extend(stab_rows.iter().cloned());
    for (i, &free) in class.free.iter().enumerate() {
        if !free {
            continue;
        }
        let supp = colex.region_support(i);
        let lx = PauliOperator::x_on(n, &supp);
        let lz = PauliOperator::z_on(n, &supp);
        let mut m = F2Matrix::from_rows(span_rows.clone(), 2 * n);
        let before = m.echelonize().len();
        let mut m2 = F2Matrix::from_rows(span_rows.clone(), 2 * n);
        m2.push_row(lx.symplectic_bits());
        if m2.rank() > before {
            span_rows.push(lx.symplectic_bits());
            span_rows.push(lz.symplectic_bits());
            logical.push(lx);
            logical.push(lz);
        }
    }
    let code = SubsystemCode::new(n, stab, gauge, logical, true);
    Ok(code)
}

// ---------------------------------------------------------------------------
// Dual lattice for decoding
// ---------------------------------------------------------------------------

/// Edge of the decoding dual lattice (one per colex plaquette).
#[derive(Clone, Debug)]
pub struct DualEdge {
    pub u: u32,
    pub v: u32,
    pub label: [Color; 2],
    /// Qubits measured by the attached gauge generator.
    pub qubits: Vec<u32>,
}

/// The dual lattice: 4-colored internal vertices (one per cell), external
/// vertices (one per region) and 2-colored edges (one per plaquette).
#[derive(Clone, Debug)]
pub struct DualLattice {
    pub n_internal: usize,
    pub vertex_colors: Vec<Color>,
    pub region_colors: Vec<Color>,
    pub region_free: Vec<bool>,
    pub edges: Vec<DualEdge>,
    pub vertex_edges: Vec<Vec<u32>>,
    /// Cells of each qubit (the dual tetrahedra).
    pub qubit_cells: Vec<[u32; 4]>,
    /// Supports of the per-cell stabilizer generators.
    pub cell_qubits: Vec<Vec<u32>>,
    pub n_qubits: usize,
}

impl DualLattice {
    pub fn n_vertices(&self) -> usize {
        self.n_internal + self.region_colors.len()
    }

    pub fn is_internal(&self, v: u32) -> bool {
        (v as usize) < self.n_internal
    }

    pub fn vertex_color(&self, v: u32) -> Color {
        if self.is_internal(v) {
            self.vertex_colors[v as usize]
        } else {
            self.region_colors[v as usize - self.n_internal]
        }
    }

    pub fn is_free_external(&self, v: u32) -> bool {
        !self.is_internal(v) && self.region_free[v as usize - self.n_internal]
    }
}

/// Builds the decoding dual lattice of a validated colex.
pub fn dualize(colex: &Colex) -> Result<DualLattice> {
    let report = validate(colex);
    if !report.is_clean() {
        return Err(Error::Validation(format!(
            "refusing to dualize an invalid colex: {}",
            report.first().unwrap_or("unknown")
        )));
    }
    let class = classify_regions(colex);
    let mut edges = Vec::with_capacity(colex.plaquettes.len());
    let mut vertex_edges = vec![Vec::new(); colex.n_dual_vertices()];
    for p in &colex.plaquettes {
        let qubits: Vec<u32> = colex
            .plaquette_support(p)
            .into_iter()
            .map(|q| q as u32)
            .collect();
        let id = edges.len() as u32;
        vertex_edges[p.pair[0] as usize].push(id);
        vertex_edges[p.pair[1] as usize].push(id);
        edges.push(DualEdge {
            u: p.pair[0],
            v: p.pair[1],
            label: p.label,
            qubits,
        });
    }
    let cell_qubits = (0..colex.n_internal as u32)
        .map(|c| {
            colex
                .cell_support(c)
                .into_iter()
                .map(|q| q as u32)
                .collect()
        })
        .collect();
    Ok(DualLattice {
        n_internal: colex.n_internal,
        vertex_colors: colex.internal_colors.clone(),
        region_colors: colex.region_colors.clone(),
        region_free: class.free,
        edges,
        vertex_edges,
        qubit_cells: colex.tets.clone(),
        cell_qubits,
        n_qubits: colex.n_vertices(),
    })
}

// ---------------------------------------------------------------------------
// Text export
// ---------------------------------------------------------------------------

/// JSON-compatible export of the colex structure.
pub fn colex_to_json(colex: &Colex) -> serde_json::Value {
    serde_json::json!({
        "schema_version": 1,
        "n_internal": colex.n_internal,
        "internal_colors": colex.internal_colors.iter().map(|&c| COLOR_NAMES[c as usize]).collect::<Vec<_>>(),
        "internal_coords": colex.internal_coords,
        "region_colors": colex.region_colors.iter().map(|&c| COLOR_NAMES[c as usize]).collect::<Vec<_>>(),
        "vertices": colex.tets,
        "edges": colex.edges.iter().map(|e| serde_json::json!({
            "tri": e.tri, "color": COLOR_NAMES[e.color as usize]
        })).collect::<Vec<_>>(),
        "plaquettes": colex.plaquettes.iter().map(|p| serde_json::json!({
            "pair": p.pair,
            "label": format!("{}{}", COLOR_NAMES[p.label[0] as usize], COLOR_NAMES[p.label[1] as usize]),
        })).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{code_distance_bruteforce, commutes, ErrorSector};

    #[test]
    fn torus_incidence_counts() {
        let colex = build_closed_3torus(4).unwrap();
        // every vertex meets 4 edges, 6 plaquettes, 4 cells
        for (v, t) in colex.tets.iter().enumerate() {
            let cells = t.iter().filter(|&&dv| colex.is_internal(dv)).count();
            assert_eq!(cells, 4, "vertex {v}");
            let edges = colex
                .edges
                .iter()
                .filter(|e| e.tri.iter().all(|dv| t.contains(dv)))
                .count();
            assert_eq!(edges, 4, "vertex {v}");
            let plaqs = colex
                .plaquettes
                .iter()
                .filter(|p| t.contains(&p.pair[0]) && t.contains(&p.pair[1]))
                .count();
            assert_eq!(plaqs, 6, "vertex {v}");
        }
        assert_eq!(colex.n_vertices(), 6 * 4 * 4 * 4);
    }

    #[test]
    fn torus_validates_and_plaquettes_commute() {
        let colex = build_closed_3torus(4).unwrap();
        let report = validate(&colex);
        assert!(report.is_clean(), "violations: {:?}", report.violations);
        // CSS overlap parity: X_p and Z_q commute for all plaquette pairs.
        let n = colex.n_vertices();
        for (i, p) in colex.plaquettes.iter().enumerate() {
            let sp = colex.plaquette_support(p);
            let xp = PauliOperator::x_on(n, &sp);
            for q in colex.plaquettes.iter().skip(i) {
                let sq = colex.plaquette_support(q);
                let zq = PauliOperator::z_on(n, &sq);
                assert!(commutes(&xp, &zq).unwrap());
            }
        }
    }

    #[test]
    fn torus_odd_size_rejected() {
        assert!(build_closed_3torus(3).is_err());
        assert!(build_closed_3torus(6).is_err());
    }

    #[test]
    fn cell_equals_plaquette_product_three_ways() {
        // X_c = product of kappa-plaquettes of the cell for each 2-subset
        // kappa of the cell label.
        let colex = build_closed_3torus(4).unwrap();
        for cell in 0..8u32 {
            let supp: BTreeSet<usize> = colex.cell_support(cell).into_iter().collect();
            let label = colex.cell_labels[cell as usize];
            let kappas: Vec<[Color; 2]> = {
                let cs: Vec<Color> = (0u8..4).filter(|&c| label & (1 << c) != 0).collect();
                vec![
                    [cs[0], cs[1]],
                    [cs[0], cs[2]],
                    [cs[1], cs[2]],
                ]
            };
            for kappa in kappas {
                let mut acc: BTreeSet<usize> = BTreeSet::new();
                for p in colex.plaquettes.iter().filter(|p| {
                    p.pair.contains(&cell) && {
                        let m = (1u8 << p.label[0]) | (1 << p.label[1]);
                        m == (1 << kappa[0]) | (1 << kappa[1])
                    }
                }) {
                    for q in colex.plaquette_support(p) {
                        if !acc.insert(q) {
                            acc.remove(&q);
                        }
                    }
                }
                assert_eq!(acc, supp, "cell {cell} kappa {kappa:?}");
            }
        }
    }

    #[test]
    fn tetrahedral_d3_is_15_1_3() {
        let colex = build_tetrahedral(3).unwrap();
        assert_eq!(colex.n_vertices(), 15);
        assert_eq!(colex.n_internal, 4);
        assert_eq!(colex.region_colors.len(), 4);
        let report = validate(&colex);
        assert!(report.is_clean(), "violations: {:?}", report.violations);
        let code = derive_code(&colex).unwrap();
        code.validate_structure().unwrap();
        assert_eq!(code.logical_count(), 1);
        let d = code_distance_bruteforce(&code, 3, ErrorSector::Full)
            .unwrap()
            .unwrap();
        assert_eq!(d, 3);
    }

    #[test]
    fn tetrahedral_regions_all_free() {
        for d in [3usize, 5] {
            let colex = build_tetrahedral(d).unwrap();
            let class = classify_regions(&colex);
            assert_eq!(class.free.len(), 4);
            assert!(class.free.iter().all(|&f| f), "d = {d}: {:?}", class);
            // border parity rule: every border has an odd number of vertices
            for (pair, verts, odd) in &class.borders {
                assert!(odd, "border {pair:?} has {verts} vertices");
            }
            // freeness cross-check: X_R and Z_R of the same region anticommute
            let n = colex.n_vertices();
            for r in 0..4 {
                let supp = colex.region_support(r);
                assert_eq!(supp.len() % 2, 1);
                let x = PauliOperator::x_on(n, &supp);
                let z = PauliOperator::z_on(n, &supp);
                assert!(!commutes(&x, &z).unwrap());
            }
        }
    }

    #[test]
    fn tetrahedral_d5_structure() {
        let colex = build_tetrahedral(5).unwrap();
        let report = validate(&colex);
        assert!(report.is_clean(), "violations: {:?}", report.violations);
        let code = derive_code(&colex).unwrap();
        code.validate_structure().unwrap();
        assert_eq!(code.logical_count(), 1);
    }

    #[test]
    fn dualize_color_rules() {
        let colex = build_tetrahedral(3).unwrap();
        let dual = dualize(&colex).unwrap();
        // edge-color rule: label = complement of endpoint colors
        for e in &dual.edges {
            let mut mask = (1u8 << dual.vertex_color(e.u)) | (1 << dual.vertex_color(e.v));
            mask |= (1 << e.label[0]) | (1 << e.label[1]);
            assert_eq!(mask, 0b1111);
            assert_ne!(dual.vertex_color(e.u), dual.vertex_color(e.v));
        }
        // one dual edge per plaquette
        assert_eq!(dual.edges.len(), colex.plaquettes.len());
        // tetrahedral: 4 external vertices, all free
        assert_eq!(dual.region_colors.len(), 4);
        assert!(dual.region_free.iter().all(|&f| f));
    }

    #[test]
    fn validate_reports_label_corruption() {
        let mut colex = build_tetrahedral(3).unwrap();
        let old = colex.edges[0].color;
        colex.edges[0].color = (old + 1) % 4;
        let report = validate(&colex);
        assert!(!report.is_clean());
        assert!(report.first().unwrap().contains("edge 0"));
    }

    #[test]
    fn validate_reports_duplicate_cell() {
        let mut colex = build_closed_3torus(4).unwrap();
        // corrupt one cell label to collide with a neighbour's kappa
        let other = colex.cell_labels[1];
        colex.cell_labels[0] = other;
        let report = validate(&colex);
        assert!(!report.is_clean());
        // either label inconsistency or a "more than one kappa-cell" complaint
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("cell 0") || v.contains("expected exactly one")));
    }

    #[test]
    fn glued_double_is_closed_with_k0() {
        let colex = build_tetrahedral(3).unwrap();
        let double = glue_double(&colex).unwrap();
        assert!(double.region_colors.is_empty());
        let report = validate(&double);
        assert!(report.is_clean(), "violations: {:?}", report.violations);
        let code = derive_code(&double).unwrap();
        assert_eq!(code.logical_count(), 0);
        assert_eq!(double.n_vertices(), 30);
    }

    #[test]
    fn export_roundtrip_stats() {
        let colex = build_tetrahedral(3).unwrap();
        let j = colex_to_json(&colex);
        assert_eq!(j["n_internal"], 4);
        assert_eq!(j["vertices"].as_array().unwrap().len(), 15);
    }
}

#[cfg(test)]
mod explore {
    use super::*;

    fn kept_from_thresholds(t: [i64; 4], span: i64) -> Vec<[i64; 3]> {
        let mut kept = Vec::new();
        for x in -span..=span {
            for y in -span..=span {
                for z in -span..=span {
                    let f = [x + y + z, x + y - 3 * z, x - 3 * y + z, -3 * x + y + z];
                    if (0..4).all(|i| f[i] <= t[i]) {
                        kept.push([x, y, z]);
                    }
                }
            }
        }
        kept
    }

    /// BCC lattice in doubled coordinates: A-vertices at even triples,
    /// B-vertices at odd triples. Color = f mod 4 under {0:r,1:y,2:g,3:b}
    /// where f = x+y+z (all four diagonal forms agree mod 4).
    fn bcc_color(p: [i64; 3]) -> Color {
        match (p[0] + p[1] + p[2]).rem_euclid(4) {
            0 => 0, // r
            1 => 3, // y
            2 => 1, // g
            _ => 2, // b
        }
    }

    fn bcc_tets_touching(kept: &std::collections::BTreeSet<[i64; 3]>) -> Vec<[[i64; 3]; 4]> {
        // tets: A-edge (a, a+2e_i) with B-pair among surrounding centers
        let mut out = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        // candidate A-points: near kept set
        let mut candidates = std::collections::BTreeSet::new();
        for p in kept {
            for dx in -3i64..=3 {
                for dy in -3i64..=3 {
                    for dz in -3i64..=3 {
                        let q = [p[0] + dx, p[1] + dy, p[2] + dz];
                        if (q[0] + q[1] + q[2]).rem_euclid(2) == 0
                            && q[0].rem_euclid(2) == 0 && q[1].rem_euclid(2) == 0 && q[2].rem_euclid(2) == 0
                        {
                            candidates.insert(q);
                        }
                    }
                }
            }
        }
        for &a in &candidates {
            for i in 0..3usize {
                let mut a2 = a;
                a2[i] += 2;
                let (j, k) = ([1, 0, 0][i], [2, 2, 1][i]);
                for s in [-1i64, 1] {
                    for t in [-1i64, 1] {
                        // B-square corners around the A-edge
                        let mut c1 = a;
                        c1[i] += 1;
                        c1[j] += s;
                        c1[k] += t;
                        // adjacent B-pairs: flip one of s,t
                        for flip in 0..2usize {
                            let mut c2 = c1;
                            let axis = if flip == 0 { j } else { k };
                            let sign = if flip == 0 { s } else { t };
                            c2[axis] -= 2 * sign;
                            let mut tet = [a, a2, c1, c2];
                            tet.sort_unstable();
                            if seen.insert(tet) && tet.iter().any(|v| kept.contains(v)) {
                                out.push(tet);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn build_bcc_from_kept(kept_list: &[[i64; 3]]) -> Colex {
        let kept: std::collections::BTreeSet<[i64; 3]> = kept_list.iter().copied().collect();
        let coords: Vec<[i64; 3]> = kept.iter().copied().collect();
        let mut index = BTreeMap::new();
        for (i, &p) in coords.iter().enumerate() {
            index.insert(p, i as u32);
        }
        let n_internal = coords.len();
        let colors: Vec<Color> = coords.iter().map(|&p| bcc_color(p)).collect();
        let raw = bcc_tets_touching(&kept);
        let mut ext_present = [false; 4];
        for tet in &raw {
            for p in tet {
                if !index.contains_key(p) {
                    ext_present[bcc_color(*p) as usize] = true;
                }
            }
        }
        let region_colors: Vec<Color> = (0u8..4).filter(|&c| ext_present[c as usize]).collect();
        let ext_id = |c: Color| -> u32 {
            (n_internal + region_colors.iter().position(|&rc| rc == c).unwrap()) as u32
        };
        let mut tets: BTreeSet<[u32; 4]> = BTreeSet::new();
        for tet in &raw {
            let mut ids = [0u32; 4];
            for (i, p) in tet.iter().enumerate() {
                ids[i] = match index.get(p) {
                    Some(&id) => id,
                    None => ext_id(bcc_color(*p)),
                };
            }
            ids.sort_unstable();
            tets.insert(ids);
        }
        finish_colex(n_internal, colors, coords, region_colors, tets.into_iter().collect())
    }

    /// Order-24 tetrahedral symmetry group of the BCC d=3 kept set
    /// {(0,0,0),(2,0,0),(1,-1,-1),(1,1,-1)} (doubled coordinates).
    fn tet_group() -> Vec<Box<dyn Fn([i64; 3]) -> [i64; 3]>> {
        // generators:
        // s1: (x,y,z) -> (2-x, y, z)        swaps the two A cells
        // s2: (x,y,z) -> (x, -y, z)          swaps the two B cells
        // s3: (x,y,z) -> (1,-1,-1) - (y,-x,z) swaps A-pair with B-pair
        let s1 = |p: [i64; 3]| [2 - p[0], p[1], p[2]];
        let s2 = |p: [i64; 3]| [p[0], -p[1], p[2]];
        let s3 = |p: [i64; 3]| [1 - p[1], -1 + p[0], -1 - p[2]];
        // close the group by BFS on representative action over a probe set
        let gens: Vec<Box<dyn Fn([i64; 3]) -> [i64; 3]>> =
            vec![Box::new(s1), Box::new(s2), Box::new(s3)];
        // represent each element as the images of 4 probe points
        let probes = [[0i64, 0, 0], [2, 0, 0], [1, -1, -1], [5, 3, 2]];
        let apply_seq = |seq: &[usize], p: [i64; 3]| -> [i64; 3] {
            let mut q = p;
            for &g in seq {
                q = gens[g](q);
            }
            q
        };
        let mut elems: Vec<Vec<usize>> = vec![vec![]];
        let mut sigs: BTreeSet<[[i64; 3]; 4]> = BTreeSet::new();
        let sig = |seq: &[usize]| -> [[i64; 3]; 4] {
            [
                apply_seq(seq, probes[0]),
                apply_seq(seq, probes[1]),
                apply_seq(seq, probes[2]),
                apply_seq(seq, probes[3]),
            ]
        };
        sigs.insert(sig(&[]));
        let mut frontier = vec![vec![]];
        while let Some(seq) = frontier.pop() {
            for g in 0..3 {
                let mut next = seq.clone();
                next.push(g);
                if sigs.insert(sig(&next)) {
                    elems.push(next.clone());
                    frontier.push(next);
                }
            }
        }
        elems
            .into_iter()
            .map(|seq| {
                let gens2: Vec<Box<dyn Fn([i64; 3]) -> [i64; 3]>> = vec![
                    Box::new(|p: [i64; 3]| [2 - p[0], p[1], p[2]]),
                    Box::new(|p: [i64; 3]| [p[0], -p[1], p[2]]),
                    Box::new(|p: [i64; 3]| [1 - p[1], -1 + p[0], -1 - p[2]]),
                ];
                let f: Box<dyn Fn([i64; 3]) -> [i64; 3]> = Box::new(move |p| {
                    let mut q = p;
                    for &g in &seq {
                        q = gens2[g](q);
                    }
                    q
                });
                f
            })
            .collect()
    }

    /// Direct-capping construction: keep fully-contained tets of the patch
    /// {f_i <= T_i - 1}, then cap boundary triangles / edges / vertices with
    /// external vertices by missing color.
    fn build_bcc_capped(t: [i64; 4], span: i64) -> Result<Colex> {
        let forms = |p: [i64; 3]| -> [i64; 4] {
            [
                p[0] + p[1] + p[2],
                p[0] - p[1] - p[2],
                -p[0] + p[1] - p[2],
                -p[0] - p[1] + p[2],
            ]
        };
        let mut kept: BTreeSet<[i64; 3]> = BTreeSet::new();
        for x in -span..=span {
            for y in -span..=span {
                for z in -span..=span {
                    let all_even = [x, y, z].iter().all(|c| c.rem_euclid(2) == 0);
                    let all_odd = [x, y, z].iter().all(|c| c.rem_euclid(2) == 1);
                    if !(all_even || all_odd) {
                        continue;
                    }
                    let f = forms([x, y, z]);
                    if (0..4).all(|i| f[i] <= t[i] - 1) {
                        kept.insert([x, y, z]);
                    }
                }
            }
        }
        if kept.is_empty() {
            return Err(Error::Validation("empty patch".into()));
        }
        // fully-kept tets
        let raw = bcc_tets_touching(&kept);
        let full: Vec<[[i64; 3]; 4]> = raw
            .into_iter()
            .filter(|tet| tet.iter().all(|p| kept.contains(p)))
            .collect();
        if full.is_empty() {
            return Err(Error::Validation("no interior tets".into()));
        }
        // vertices actually used
        let used: BTreeSet<[i64; 3]> = full.iter().flat_map(|t| t.iter().copied()).collect();
        let coords: Vec<[i64; 3]> = used.iter().copied().collect();
        let mut index = BTreeMap::new();
        for (i, &p) in coords.iter().enumerate() {
            index.insert(p, i as u32);
        }
        let n_internal = coords.len();
        let colors: Vec<Color> = coords.iter().map(|&p| bcc_color(p)).collect();
        // boundary triangles: faces of exactly one full tet
        let mut tri_count: BTreeMap<[[i64; 3]; 3], usize> = BTreeMap::new();
        for tet in &full {
            for skip in 0..4 {
                let mut tri: Vec<[i64; 3]> = Vec::with_capacity(3);
                for (i, p) in tet.iter().enumerate() {
                    if i != skip {
                        tri.push(*p);
                    }
                }
                let key = [tri[0], tri[1], tri[2]];
                *tri_count.entry(key).or_insert(0) += 1;
            }
        }
        let boundary_tris: Vec<[[i64; 3]; 3]> = tri_count
            .iter()
            .filter(|(_, &c)| c == 1)
            .map(|(k, _)| *k)
            .collect();
        // region color of a boundary triangle = its missing color
        let missing = |tri: &[[i64; 3]; 3]| -> Color {
            let mask: u8 = tri.iter().map(|&p| 1u8 << bcc_color(p)).fold(0, |a, b| a | b);
            (0u8..4).find(|c| mask & (1 << c) == 0).unwrap()
        };
        let mut region_present = [false; 4];
        for tri in &boundary_tris {
            region_present[missing(tri) as usize] = true;
        }
        let region_colors: Vec<Color> = (0u8..4).filter(|&c| region_present[c as usize]).collect();
        let ext_id = |c: Color| -> u32 {
            (n_internal + region_colors.iter().position(|&rc| rc == c).unwrap()) as u32
        };
        let mut tets: BTreeSet<[u32; 4]> = BTreeSet::new();
        for tet in &full {
            let mut ids = [0u32; 4];
            for (i, p) in tet.iter().enumerate() {
                ids[i] = index[p];
            }
            ids.sort_unstable();
            tets.insert(ids);
        }
        // caps
        for tri in &boundary_tris {
            let kappa = missing(tri);
            let mut ids = [index[&tri[0]], index[&tri[1]], index[&tri[2]], ext_id(kappa)];
            ids.sort_unstable();
            tets.insert(ids);
        }
        // borders: boundary edges shared by boundary triangles of 2 regions
        let mut edge_regions: BTreeMap<[[i64; 3]; 2], BTreeSet<Color>> = BTreeMap::new();
        for tri in &boundary_tris {
            let kappa = missing(tri);
            for i in 0..3 {
                for j in i + 1..3 {
                    let mut e = [tri[i], tri[j]];
                    e.sort_unstable();
                    edge_regions.entry(e).or_default().insert(kappa);
                }
            }
        }
        for (e, regions) in &edge_regions {
            let rs: Vec<Color> = regions.iter().copied().collect();
            if rs.len() == 2 {
                let mut ids = [index[&e[0]], index[&e[1]], ext_id(rs[0]), ext_id(rs[1])];
                ids.sort_unstable();
                tets.insert(ids);
            } else if rs.len() > 2 {
                return Err(Error::Validation("boundary edge touches 3 regions".into()));
            }
        }
        // corners: boundary vertices touching 3 regions
        let mut vert_regions: BTreeMap<[i64; 3], BTreeSet<Color>> = BTreeMap::new();
        for tri in &boundary_tris {
            let kappa = missing(tri);
            for p in tri {
                vert_regions.entry(*p).or_default().insert(kappa);
            }
        }
        for (v, regions) in &vert_regions {
            let rs: Vec<Color> = regions.iter().copied().collect();
            if rs.len() == 3 {
                let mut ids = [index[v], ext_id(rs[0]), ext_id(rs[1]), ext_id(rs[2])];
                ids.sort_unstable();
                tets.insert(ids);
            } else if rs.len() > 3 {
                return Err(Error::Validation("boundary vertex touches 4 regions".into()));
            }
        }
        Ok(finish_colex(
            n_internal,
            colors,
            coords,
            region_colors,
            tets.into_iter().collect(),
        ))
    }

    #[test]
    #[ignore]
    fn probe_bcc_capped() {
        let base = [4i64, 5, 2, 3];
        for grow in [
            [0i64, 0, 0, 0],
            [4, 0, 0, 0],
            [0, 4, 0, 0],
            [0, 0, 4, 0],
            [0, 0, 0, 4],
            [4, 4, 0, 0],
            [4, 0, 4, 0],
            [4, 4, 4, 0],
            [4, 4, 4, 4],
            [8, 0, 0, 0],
            [8, 8, 8, 8],
        ] {
            let t = [
                base[0] + grow[0],
                base[1] + grow[1],
                base[2] + grow[2],
                base[3] + grow[3],
            ];
            let span = 20;
            let colex = match build_bcc_capped(t, span) {
                Ok(c) => c,
                Err(e) => {
                    println!("t={t:?}: {e}");
                    continue;
                }
            };
            if colex.region_colors.len() != 4 {
                println!(
                    "t={t:?}: cells={} n={} regions={:?} SKIP",
                    colex.n_internal,
                    colex.n_vertices(),
                    colex.region_colors
                );
                continue;
            }
            let report = validate(&colex);
            let class = classify_regions(&colex);
            let mut line = format!(
                "t={t:?}: cells={} n={} free={:?} clean={}",
                colex.n_internal,
                colex.n_vertices(),
                class.free,
                report.is_clean()
            );
            if !report.is_clean() {
                line += &format!(" first={}", report.first().unwrap());
                println!("{line}");
                continue;
            }
            match derive_code(&colex) {
                Ok(code) => {
                    let k = code.logical_count();
                    line += &format!(" k={k}");
                    if k == 1 && colex.n_vertices() <= 700 {
                        let d = crate::pauli::code_distance_bruteforce(
                            &code,
                            4,
                            crate::pauli::ErrorSector::XOnly,
                        )
                        .ok()
                        .flatten();
                        line += &format!(" dsearch<=4={d:?}");
                    }
                }
                Err(e) => line += &format!(" derive failed: {e}"),
            }
            println!("{line}");
        }
    }

    #[test]
    #[ignore]
    fn probe_bcc_orbits() {
        let group = tet_group();
        println!("group order {}", group.len());
        let base = [[0i64, 0, 0], [2, 0, 0], [1, -1, -1], [1, 1, -1]];
        // collect lattice vertices near the base and group them into orbits
        let is_lattice = |p: [i64; 3]| {
            let all_even = p.iter().all(|c| c.rem_euclid(2) == 0);
            let all_odd = p.iter().all(|c| c.rem_euclid(2) == 1);
            all_even || all_odd
        };
        let mut seen: BTreeSet<[i64; 3]> = base.iter().copied().collect();
        let mut orbits: Vec<Vec<[i64; 3]>> = Vec::new();
        for x in -6i64..=8 {
            for y in -7i64..=7 {
                for z in -8i64..=6 {
                    let p = [x, y, z];
                    if !is_lattice(p) || seen.contains(&p) {
                        continue;
                    }
                    let mut orb: BTreeSet<[i64; 3]> = BTreeSet::new();
                    for g in &group {
                        orb.insert(g(p));
                    }
                    if orb.iter().any(|q| seen.contains(q)) {
                        continue;
                    }
                    for &q in &orb {
                        seen.insert(q);
                    }
                    orbits.push(orb.into_iter().collect());
                }
            }
        }
        // sort orbits by distance from center (1, 0, -1)-ish
        orbits.sort_by_key(|o| {
            o.iter()
                .map(|p| (2 * p[0] - 2).pow(2) + (2 * p[1]).pow(2) + (2 * p[2] + 1).pow(2))
                .min()
                .unwrap()
        });
        println!(
            "orbit sizes: {:?}",
            orbits.iter().take(12).map(|o| o.len()).collect::<Vec<_>>()
        );
        let no = orbits.len().min(10);
        for mask in 1u64..(1 << no) {
            if mask.count_ones() > 4 {
                continue;
            }
            let mut kept: Vec<[i64; 3]> = base.to_vec();
            for (i, o) in orbits.iter().take(no).enumerate() {
                if mask >> i & 1 == 1 {
                    kept.extend(o.iter().copied());
                }
            }
            let colex = build_bcc_from_kept(&kept);
            if colex.region_colors.len() != 4 {
                continue;
            }
            let report = validate(&colex);
            if !report.is_clean() {
                continue;
            }
            let class = classify_regions(&colex);
            if !class.free.iter().all(|&f| f) {
                continue;
            }
            let Ok(code) = derive_code(&colex) else { continue };
            let k = code.logical_count();
            if k != 1 {
                continue;
            }
            let d = if colex.n_vertices() <= 600 {
                crate::pauli::code_distance_bruteforce(&code, 4, crate::pauli::ErrorSector::XOnly)
                    .ok()
                    .flatten()
            } else {
                None
            };
            println!(
                "ORBIT HIT mask={mask:#b} cells={} n={} k={k} dsearch<=4={d:?}",
                colex.n_internal,
                colex.n_vertices()
            );
        }
        println!("orbit probe done");
    }

    #[test]
    #[ignore]
    fn probe_bcc_residues() {
        // try every permutation of residues (mod 4) with small magnitudes
        let perms: Vec<[i64; 4]> = {
            let mut out = Vec::new();
            let base = [0i64, 1, 2, 3];
            let idx = [
                [0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2], [0, 3, 2, 1],
                [1, 0, 2, 3], [1, 0, 3, 2], [1, 2, 0, 3], [1, 2, 3, 0], [1, 3, 0, 2], [1, 3, 2, 0],
                [2, 0, 1, 3], [2, 0, 3, 1], [2, 1, 0, 3], [2, 1, 3, 0], [2, 3, 0, 1], [2, 3, 1, 0],
                [3, 0, 1, 2], [3, 0, 2, 1], [3, 1, 0, 2], [3, 1, 2, 0], [3, 2, 0, 1], [3, 2, 1, 0],
            ];
            for ix in idx {
                out.push([base[ix[0]], base[ix[1]], base[ix[2]], base[ix[3]]]);
            }
            out
        };
        for grow in [[4i64,0,0,0],[0,4,0,0],[0,0,4,0],[0,0,0,4],[4,4,0,0],[4,0,4,0],[4,0,0,4],[2,2,2,2],[4,4,4,4]] {
            for res in &perms {
                let t = [res[0]+grow[0], res[1]+grow[1], res[2]+grow[2], res[3]+grow[3]];
                if t.iter().sum::<i64>() < 6 { continue; }
                let span = 10i64;
                let mut kept = Vec::new();
                for x in -span..=span {
                    for y in -span..=span {
                        for z in -span..=span {
                            let all_even = x.rem_euclid(2) == 0 && y.rem_euclid(2) == 0 && z.rem_euclid(2) == 0;
                            let all_odd = x.rem_euclid(2) == 1 && y.rem_euclid(2) == 1 && z.rem_euclid(2) == 1;
                            if !(all_even || all_odd) { continue; }
                            let f = [x + y + z, x - y - z, -x + y - z, -x - y + z];
                            if (0..4).all(|i| f[i] <= t[i]) {
                                kept.push([x, y, z]);
                            }
                        }
                    }
                }
                if kept.len() < 5 || kept.len() > 60 { continue; }
                let colex = build_bcc_from_kept(&kept);
                if colex.region_colors.len() != 4 { continue; }
                let report = validate(&colex);
                if !report.is_clean() { continue; }
                let class = classify_regions(&colex);
                if !class.free.iter().all(|&f| f) { continue; }
                let code = match derive_code(&colex) { Ok(c) => c, Err(_) => continue };
                let k = code.logical_count();
                let d = if k == 1 && colex.n_vertices() <= 300 {
                    crate::pauli::code_distance_bruteforce(&code, 5, crate::pauli::ErrorSector::XOnly).ok().flatten()
                } else { None };
                println!("VALID t={t:?} cells={} n={} k={k} dsearch={d:?}", colex.n_internal, colex.n_vertices());
            }
        }
    }

    #[test]
    #[ignore]
    fn probe_bcc_thresholds() {
        // anchor d=3: thresholds (2,3,1,0); grow uniformly by 4
        for grow in 0i64..3 {
            let t = [2 + 4 * grow, 3 + 4 * grow, 1 + 4 * grow, 0 + 4 * grow];
            let span = 4 + 4 * grow;
            let mut kept = Vec::new();
            for x in -span..=span {
                for y in -span..=span {
                    for z in -span..=span {
                        let par = (x + y + z).rem_euclid(2);
                        let all_even = x.rem_euclid(2) == 0 && y.rem_euclid(2) == 0 && z.rem_euclid(2) == 0;
                        let all_odd = x.rem_euclid(2) == 1 && y.rem_euclid(2) == 1 && z.rem_euclid(2) == 1;
                        if !(all_even || all_odd) || par != 0 && all_even {
                            // A: all even; B: all odd
                        }
                        if !(all_even || all_odd) {
                            continue;
                        }
                        let f = [x + y + z, x - y - z, -x + y - z, -x - y + z];
                        if (0..4).all(|i| f[i] <= t[i]) {
                            kept.push([x, y, z]);
                        }
                    }
                }
            }
            if kept.is_empty() {
                println!("t={t:?}: empty");
                continue;
            }
            let colex = build_bcc_from_kept(&kept);
            let report = validate(&colex);
            let class = classify_regions(&colex);
            let mut line = format!(
                "t={t:?}: cells={} n={} regions={:?} free={:?} clean={}",
                colex.n_internal,
                colex.n_vertices(),
                colex.region_colors,
                class.free,
                report.is_clean()
            );
            if !report.is_clean() {
                line += &format!(" first={}", report.first().unwrap());
                println!("{line}");
                continue;
            }
            match derive_code(&colex) {
                Ok(code) => {
                    let k = code.logical_count();
                    line += &format!(" k={k}");
                    if k == 1 && colex.n_vertices() <= 200 {
                        let d = crate::pauli::code_distance_bruteforce(
                            &code, 5, crate::pauli::ErrorSector::XOnly).ok().flatten();
                        line += &format!(" dsearch<=5={d:?}");
                    }
                }
                Err(e) => line += &format!(" derive failed: {e}"),
            }
            println!("{line}");
        }
    }

    #[test]
    #[ignore]
    fn probe_bad_plaquette() {
        let m = 4i64;
        let mut kept = Vec::new();
        for x in 0..m {
            for y in 0..=x {
                for z in 0..=y {
                    kept.push([x, y, z]);
                }
            }
        }
        let colex = build_from_kept(&kept).unwrap();
        for (i, p) in colex.plaquettes.iter().enumerate() {
            let supp = colex.plaquette_support(p);
            if supp.len() % 2 == 1 {
                let describe = |dv: u32| -> String {
                    if colex.is_internal(dv) {
                        format!("{:?}c{}", colex.internal_coords[dv as usize],
                            colex.internal_colors[dv as usize])
                    } else {
                        format!("EXT{}", colex.dual_color(dv))
                    }
                };
                println!("plaquette {i}: pair {} -- {} support {}",
                    describe(p.pair[0]), describe(p.pair[1]), supp.len());
                for &q in &supp {
                    let t = colex.tets[q];
                    let names: Vec<String> = t.iter().map(|&dv| describe(dv)).collect();
                    println!("   tet {q}: {}", names.join(" "));
                }
                break;
            }
        }
    }

    #[test]
    #[ignore]
    fn probe_staircases() {
        for m in [2i64, 4, 6] {
            let mut kept = Vec::new();
            for x in 0..m {
                for y in 0..=x {
                    for z in 0..=y {
                        kept.push([x, y, z]);
                    }
                }
            }
            let colex = build_from_kept(&kept).unwrap();
            let report = validate(&colex);
            let class = classify_regions(&colex);
            let n = colex.n_vertices();
            let mut line = format!(
                "m={m}: cells={} n={} free={:?} clean={}",
                colex.n_internal, n, class.free, report.is_clean()
            );
            if !report.is_clean() {
                line += &format!(" first={}", report.first().unwrap());
                println!("{line}");
                continue;
            }
            match derive_code(&colex) {
                Ok(code) => {
                    let k = code.logical_count();
                    line += &format!(" k={k}");
                    if k == 1 && n <= 400 {
                        let d = crate::pauli::code_distance_bruteforce(
                            &code, 5, crate::pauli::ErrorSector::XOnly).ok().flatten();
                        line += &format!(" d<=5search={d:?}");
                    }
                }
                Err(e) => line += &format!(" derive failed: {e}"),
            }
            println!("{line}");
        }
    }

    #[test]
    #[ignore]
    fn probe_threshold_shapes() {
        let candidates: Vec<[i64; 4]> = vec![
            [3, 2, 1, 0],
            [7, 2, 1, 0],
            [3, 6, 1, 0],
            [7, 6, 1, 0],
            [7, 6, 5, 0],
            [7, 6, 5, 4],
            [11, 2, 1, 0],
            [11, 6, 1, 0],
            [11, 10, 9, 8],
        ];
        for t in candidates {
            let kept = kept_from_thresholds(t, 12);
            if kept.is_empty() {
                println!("t={t:?}: empty");
                continue;
            }
            let colex = match build_from_kept(&kept) {
                Ok(c) => c,
                Err(e) => {
                    println!("t={t:?}: build failed: {e}");
                    continue;
                }
            };
            let report = validate(&colex);
            let class = classify_regions(&colex);
            let n = colex.n_vertices();
            let mut line = format!(
                "t={t:?}: cells={} n={} regions={:?} free={:?} clean={}",
                colex.n_internal,
                n,
                colex.region_colors,
                class.free,
                report.is_clean()
            );
            if !report.is_clean() {
                line += &format!(" first={}", report.first().unwrap());
                println!("{line}");
                continue;
            }
            match derive_code(&colex) {
                Ok(code) => {
                    let k = code.logical_count();
                    line += &format!(" k={k}");
                    if k == 1 && n <= 80 {
                        let d = code_distance_bruteforce_probe(&code);
                        line += &format!(" d={d:?}");
                    }
                }
                Err(e) => line += &format!(" derive failed: {e}"),
            }
            println!("{line}");
        }
    }

    fn code_distance_bruteforce_probe(code: &SubsystemCode) -> Option<usize> {
        crate::pauli::code_distance_bruteforce(code, 5, crate::pauli::ErrorSector::XOnly)
            .ok()
            .flatten()
    }
}
