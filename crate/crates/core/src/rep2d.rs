//! The 2D Ising-based repetition code on a torus.
//!
//! Qubits sit on faces of an L x L square lattice with periodic boundaries;
//! check operators Z_e = Z_i Z_j sit on edges between adjacent faces. A bit
//! flip pattern is a [`FaceSet`]; its syndrome is the boundary [`EdgeSet`].
//! Noisy check measurements give pseudo-syndromes that are closed by a
//! minimum T-join before decoding, which is exactly the single-shot
//! correction step this code demonstrates.

use crate::bits::BitVec;
use crate::matching;
use crate::pauli::{PauliOperator, SubsystemCode};
use crate::{Error, Result};
use rand::Rng;

/// Bit set over the 2 L^2 edges of the torus.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeSet(pub BitVec);

/// Bit set over the L^2 faces (qubits) of the torus.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FaceSet(pub BitVec);

impl FaceSet {
    pub fn weight(&self) -> usize {
        self.0.count_ones()
    }
}

impl EdgeSet {
    pub fn weight(&self) -> usize {
        self.0.count_ones()
    }
}

/// Per-round measurements recorded by [`TorusLattice::single_shot_round`].
#[derive(Clone, Copy, Debug, Default)]
pub struct RoundRecord {
    pub w_weight: usize,
    pub w0_weight: usize,
    pub residual_weight: usize,
    pub largest_cluster: usize,
    pub nonsyndrome: bool,
    pub logical: bool,
    pub tied: bool,
}

/// Outcome of decoding a closed syndrome.
#[derive(Clone, Debug)]
pub enum DecodeOutcome {
    Flips(FaceSet),
    /// A component (or the total class) is homologically nontrivial: the
    /// syndrome is not the boundary of any face set.
    NonSyndromeEvent,
}

/// Square lattice on a torus: faces are qubits, edges are checks.
#[derive(Clone, Debug)]
pub struct TorusLattice {
    pub l: usize,
}

impl TorusLattice {
    pub fn new(l: usize) -> Result<Self> {
        if l < 3 {
            return Err(Error::Validation("torus size must be at least 3".into()));
        }
        Ok(TorusLattice { l })
    }

    pub fn n_faces(&self) -> usize {
        self.l * self.l
    }

    pub fn n_edges(&self) -> usize {
        2 * self.l * self.l
    }

    pub fn n_vertices(&self) -> usize {
        self.l * self.l
    }

    #[inline]
    pub fn face(&self, r: usize, c: usize) -> usize {
        (r % self.l) * self.l + (c % self.l)
    }

    #[inline]
    pub fn vertex(&self, r: usize, c: usize) -> usize {
        (r % self.l) * self.l + (c % self.l)
    }

    /// Horizontal edge from vertex (r,c) to (r,c+1); separates faces (r,c)
    /// and (r-1,c).
    #[inline]
    pub fn h_edge(&self, r: usize, c: usize) -> usize {
        (r % self.l) * self.l + (c % self.l)
    }

    /// Vertical edge from vertex (r,c) to (r+1,c); separates faces (r,c)
    /// and (r,c-1).
    #[inline]
    pub fn v_edge(&self, r: usize, c: usize) -> usize {
        self.l * self.l + (r % self.l) * self.l + (c % self.l)
    }

    /// The two faces adjacent to an edge.
    pub fn edge_faces(&self, e: usize) -> (usize, usize) {
        let l = self.l;
        if e < l * l {
            let (r, c) = (e / l, e % l);
            (self.face(r, c), self.face(r + l - 1, c))
        } else {
            let e = e - l * l;
            let (r, c) = (e / l, e % l);
            (self.face(r, c), self.face(r, c + l - 1))
        }
    }

    /// The two endpoint vertices of an edge.
    pub fn edge_vertices(&self, e: usize) -> (usize, usize) {
        let l = self.l;
        if e < l * l {
            let (r, c) = (e / l, e % l);
            (self.vertex(r, c), self.vertex(r, c + 1))
        } else {
            let e = e - l * l;
            let (r, c) = (e / l, e % l);
            (self.vertex(r, c), self.vertex(r + 1, c))
        }
    }

    /// Edge joining two adjacent vertices.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        let l = self.l;
        let (ra, ca) = (a / l, a % l);
        let (rb, cb) = (b / l, b % l);
        if ra == rb {
            if (ca + 1) % l == cb {
                return Some(self.h_edge(ra, ca));
            }
            if (cb + 1) % l == ca {
                return Some(self.h_edge(rb, cb));
            }
        }
        if ca == cb {
            if (ra + 1) % l == rb {
                return Some(self.v_edge(ra, ca));
            }
            if (rb + 1) % l == ra {
                return Some(self.v_edge(rb, cb));
            }
        }
        None
    }

    /// 4-neighbor adjacency of vertices, for the closure T-join.
    pub fn vertex_adjacency(&self) -> Vec<Vec<usize>> {
        let l = self.l;
        let mut adj = vec![Vec::with_capacity(4); l * l];
        for r in 0..l {
            for c in 0..l {
                let v = self.vertex(r, c);
                let mut nb = vec![
                    self.vertex(r, c + 1),
                    self.vertex(r, c + l - 1),
                    self.vertex(r + 1, c),
                    self.vertex(r + l - 1, c),
                ];
                nb.sort_unstable();
                adj[v] = nb;
            }
        }
        adj
    }

    /// Face adjacency, also the qubit locality graph used for cluster and
    /// alpha-boundedness statistics.
    pub fn face_adjacency(&self) -> Vec<Vec<usize>> {
        let l = self.l;
        let mut adj = vec![Vec::with_capacity(4); l * l];
        for r in 0..l {
            for c in 0..l {
                let f = self.face(r, c);
                let mut nb = vec![
                    self.face(r, c + 1),
                    self.face(r, c + l - 1),
                    self.face(r + 1, c),
                    self.face(r + l - 1, c),
                ];
                nb.sort_unstable();
                adj[f] = nb;
            }
        }
        adj
    }

    pub fn empty_faces(&self) -> FaceSet {
        FaceSet(BitVec::zeros(self.n_faces()))
    }

    pub fn empty_edges(&self) -> EdgeSet {
        EdgeSet(BitVec::zeros(self.n_edges()))
    }

    /// Boundary of a face set: edges with exactly one adjacent face in it.
    pub fn boundary(&self, f: &FaceSet) -> EdgeSet {
        let mut out = BitVec::zeros(self.n_edges());
        for e in 0..self.n_edges() {
            let (f1, f2) = self.edge_faces(e);
            if f.0.get(f1) ^ f.0.get(f2) {
                out.set(e, true);
            }
        }
        EdgeSet(out)
    }

    /// Vertices with odd incident degree in the edge set.
    pub fn odd_vertices(&self, p: &EdgeSet) -> Vec<usize> {
        let mut deg = vec![0u8; self.n_vertices()];
        for e in p.0.iter_ones() {
            let (a, b) = self.edge_vertices(e);
            deg[a] ^= 1;
            deg[b] ^= 1;
        }
        (0..self.n_vertices()).filter(|&v| deg[v] == 1).collect()
    }

    pub fn is_closed(&self, p: &EdgeSet) -> bool {
        self.odd_vertices(p).is_empty()
    }

    /// Minimum-cardinality repair w0 such that p + w0 is closed: a minimum
    /// T-join over the odd vertices, as matched shortest paths on the torus.
    /// Depends only on the odd-vertex set of the input.
    pub fn close_pseudo_syndrome(&self, p: &EdgeSet) -> Result<EdgeSet> {
        let odd = self.odd_vertices(p);
        if odd.is_empty() {
            return Ok(self.empty_edges());
        }
        let adj = self.vertex_adjacency();
        let path_edges = matching::t_join(&adj, &odd)?;
        let mut w0 = BitVec::zeros(self.n_edges());
        for (a, b) in path_edges {
            let e = self
                .edge_between(a, b)
                .expect("t_join path steps are adjacent");
            w0.flip(e);
        }
        Ok(EdgeSet(w0))
    }

    /// Connected components of an edge set under shared-vertex adjacency.
    pub fn edge_components(&self, p: &EdgeSet) -> Vec<Vec<usize>> {
        let edges: Vec<usize> = p.0.iter_ones().collect();
        let mut vertex_edges: std::collections::HashMap<usize, Vec<usize>> =
            std::collections::HashMap::new();
        for &e in &edges {
            let (a, b) = self.edge_vertices(e);
            vertex_edges.entry(a).or_default().push(e);
            vertex_edges.entry(b).or_default().push(e);
        }
        let mut seen: std::collections::HashSet<usize> = std::collections::HashSet::new();
        let mut comps = Vec::new();
        for &start in &edges {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = Vec::new();
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(e) = stack.pop() {
                comp.push(e);
                let (a, b) = self.edge_vertices(e);
                for v in [a, b] {
                    for &e2 in vertex_edges.get(&v).into_iter().flatten() {
                        if seen.insert(e2) {
                            stack.push(e2);
                        }
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Z2 homology class of a closed edge set: crossing parities with the
    /// column seam and the row seam.
    pub fn homology_class(&self, edges: &[usize]) -> (bool, bool) {
        let l = self.l;
        let mut col_seam = false;
        let mut row_seam = false;
        for &e in edges {
            if e < l * l {
                // horizontal edge h(r,c) crosses the column seam iff c = l-1
                if e % l == l - 1 {
                    col_seam = !col_seam;
                }
            } else {
                let e = e - l * l;
                if e / l == l - 1 {
                    row_seam = !row_seam;
                }
            }
        }
        (col_seam, row_seam)
    }

    /// Decodes a closed syndrome: per null-homologous component, flip the
    /// smaller enclosed region (tie: the region containing face 0). Any
    /// homologically nontrivial component is a non-syndrome event.
    pub fn decode(&self, l_syndrome: &EdgeSet) -> Result<DecodeOutcome> {
        if !self.is_closed(l_syndrome) {
            return Err(Error::Validation("decode requires a closed edge set".into()));
        }
        let mut flips = BitVec::zeros(self.n_faces());
        for comp in self.edge_components(l_syndrome) {
            if self.homology_class(&comp) != (false, false) {
                return Ok(DecodeOutcome::NonSyndromeEvent);
            }
            let mut in_comp = BitVec::zeros(self.n_edges());
            for &e in &comp {
                in_comp.set(e, true);
            }
            // Flood fill parity from face 0 across the component's edges.
            let mut chi = vec![false; self.n_faces()];
            let mut visited = vec![false; self.n_faces()];
            let mut queue = std::collections::VecDeque::new();
            visited[0] = true;
            queue.push_back(0usize);
            while let Some(f) = queue.pop_front() {
                let (r, c) = (f / self.l, f % self.l);
                let nbrs = [
                    (self.face(r + self.l - 1, c), self.h_edge(r, c)),
                    (self.face(r + 1, c), self.h_edge(r + 1, c)),
                    (self.face(r, c + self.l - 1), self.v_edge(r, c)),
                    (self.face(r, c + 1), self.v_edge(r, c + 1)),
                ];
                for (g, e) in nbrs {
                    let parity = chi[f] ^ in_comp.get(e);
                    if !visited[g] {
                        visited[g] = true;
                        chi[g] = parity;
                        queue.push_back(g);
                    } else {
                        debug_assert_eq!(chi[g], parity, "inconsistent flood fill");
                    }
                }
            }
            let inside: Vec<usize> = (0..self.n_faces()).filter(|&f| chi[f]).collect();
            let n_in = inside.len();
            let n_out = self.n_faces() - n_in;
            let flip_inside = match n_in.cmp(&n_out) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                // tie: flip the region containing the lowest-index face
                std::cmp::Ordering::Equal => false,
            };
            if flip_inside {
                for f in inside {
                    flips.flip(f);
                }
            } else {
                for f in (0..self.n_faces()).filter(|&f| !chi[f]) {
                    flips.flip(f);
                }
            }
        }
        Ok(DecodeOutcome::Flips(FaceSet(flips)))
    }

    /// One round of single-shot correction: new iid face flips at rate
    /// lambda, noisy check measurements at rate eta, closure, decoding and
    /// correction. Returns the new accumulated flip state and the record.
    pub fn single_shot_round<R: Rng>(
        &self,
        state: &FaceSet,
        lambda: f64,
        eta: f64,
        rng: &mut R,
    ) -> Result<(FaceSet, RoundRecord)> {
        let mut record = RoundRecord::default();
        let mut s = state.0.clone();
        for f in 0..self.n_faces() {
            if lambda > 0.0 && rng.random_bool(lambda) {
                s.flip(f);
            }
        }
        let state1 = FaceSet(s);
        let l_true = self.boundary(&state1);
        let mut w = BitVec::zeros(self.n_edges());
        for e in 0..self.n_edges() {
            if eta > 0.0 && rng.random_bool(eta) {
                w.set(e, true);
            }
        }
        record.w_weight = w.count_ones();
        let mut pseudo = l_true.0.clone();
        pseudo.xor_assign(&w);
        let pseudo = EdgeSet(pseudo);
        let w0 = self.close_pseudo_syndrome(&pseudo)?;
        record.w0_weight = w0.weight();
        let mut l_eff = pseudo.0;
        l_eff.xor_assign(&w0.0);
        let l_eff = EdgeSet(l_eff);
        match self.decode(&l_eff)? {
            DecodeOutcome::NonSyndromeEvent => {
                record.nonsyndrome = true;
                Ok((state1, record))
            }
            DecodeOutcome::Flips(f) => {
                let mut s2 = state1.0;
                s2.xor_assign(&f.0);
                let state2 = FaceSet(s2);
                let residual = self.boundary(&state2);
                record.residual_weight = residual.weight();
                record.largest_cluster = self
                    .edge_components(&residual)
                    .iter()
                    .map(|c| c.len())
                    .max()
                    .unwrap_or(0);
                let (logical, tied) = self.logical_class(&state2);
                record.logical = logical;
                record.tied = tied;
                Ok((state2, record))
            }
        }
    }

    /// Transversal logical readout: flip each face value with probability
    /// eta, then decode by global majority vote. Returns the decoded bit.
    pub fn logical_readout<R: Rng>(&self, state: &FaceSet, eta: f64, rng: &mut R) -> u8 {
        let mut ones = 0usize;
        for f in 0..self.n_faces() {
            let mut bit = state.0.get(f);
            if eta > 0.0 && rng.random_bool(eta) {
                bit = !bit;
            }
            if bit {
                ones += 1;
            }
        }
        u8::from(2 * ones > self.n_faces())
    }

    /// Logical class of a flip set: logical iff it is the majority-side
    /// representative of its coset, i.e. |f| > L^2/2. Exact half splits are
    /// tie-broken to trivial and flagged.
    pub fn logical_class(&self, f: &FaceSet) -> (bool, bool) {
        let w = f.weight();
        let half = self.n_faces();
        if 2 * w == half {
            (false, true)
        } else {
            (2 * w > half, false)
        }
    }

    /// The Ising code as a subsystem-code object: Z-checks on edges, X-type
    /// logical flips all faces, Z-type logical on face 0.
    pub fn code(&self) -> SubsystemCode {
        let n = self.n_faces();
        let stab: Vec<PauliOperator> = (0..self.n_edges())
            .map(|e| {
                let (f1, f2) = self.edge_faces(e);
                PauliOperator::z_on(n, &[f1, f2])
            })
            .collect();
        let logical = vec![
            PauliOperator::x_on(n, &(0..n).collect::<Vec<_>>()),
            PauliOperator::z_on(n, &[0]),
        ];
        SubsystemCode::stabilizer_code(n, stab, logical, true)
    }

    /// Face set as an X-type Pauli error on the code.
    pub fn faces_to_pauli(&self, f: &FaceSet) -> PauliOperator {
        PauliOperator::from_parts(f.0.clone(), BitVec::zeros(self.n_faces()))
    }
}
