//! Exact minimum-weight perfect matching and shortest-path T-joins.
//!
//! The core is a primal-dual blossom implementation of maximum-weight
//! matching (Galil's formulation, following van Rantwijk's well-known
//! reference code). Minimum-weight perfect matching is obtained by weight
//! reversal with forced maximum cardinality. Boundary nodes are supported by
//! zero-weight pairing edges among the boundary set, so that any number of
//! them may stay effectively unmatched while every regular node is matched.

use crate::{Error, Result};

const NONE: usize = usize::MAX;

type Weight = i64;

/// Maximum-weight matching on a general graph.
///
/// `edges` lists undirected edges `(u, v, weight)` with `u != v` and at most
/// one edge per vertex pair. Returns `mate`, where `mate[v]` is the partner
/// of `v` or `usize::MAX` if `v` is single. With `max_cardinality` only
/// maximum-cardinality matchings are considered.
pub fn max_weight_matching(
    edges: &[(usize, usize, Weight)],
    max_cardinality: bool,
) -> Vec<usize> {
    if edges.is_empty() {
        return Vec::new();
    }
    let mut m = Matcher::new(edges, max_cardinality);
    m.solve();
    debug_assert!(m.verify_optimum());
    m.mate_vertices()
}

struct Matcher<'a> {
    edges: &'a [(usize, usize, Weight)],
    max_cardinality: bool,
    nvertex: usize,
    nedge: usize,
    max_weight: Weight,
    endpoint: Vec<usize>,
    neighbend: Vec<Vec<usize>>,
    mate: Vec<usize>,
    label: Vec<u8>,
    labelend: Vec<usize>,
    inblossom: Vec<usize>,
    blossomparent: Vec<usize>,
    blossomchilds: Vec<Vec<usize>>,
    blossombase: Vec<usize>,
    blossomendps: Vec<Vec<usize>>,
    bestedge: Vec<usize>,
    blossombestedges: Vec<Vec<usize>>,
    unusedblossoms: Vec<usize>,
    dualvar: Vec<Weight>,
    allowedge: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Matcher<'a> {
    fn new(edges: &'a [(usize, usize, Weight)], max_cardinality: bool) -> Self {
        let nedge = edges.len();
        let mut nvertex = 0;
        for &(i, j, _) in edges {
            assert!(i != j, "self loops are not allowed");
            nvertex = nvertex.max(i + 1).max(j + 1);
        }
        let max_weight = edges.iter().map(|e| e.2).max().unwrap_or(0).max(0);
        let endpoint: Vec<usize> = (0..2 * nedge)
            .map(|p| if p % 2 == 0 { edges[p / 2].0 } else { edges[p / 2].1 })
            .collect();
        let mut neighbend = vec![Vec::new(); nvertex];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            neighbend[i].push(2 * k + 1);
            neighbend[j].push(2 * k);
        }
        let mut dualvar = vec![max_weight; nvertex];
        dualvar.extend(vec![0; nvertex]);
        Matcher {
            edges,
            max_cardinality,
            nvertex,
            nedge,
            max_weight,
            endpoint,
            neighbend,
            mate: vec![NONE; nvertex],
            label: vec![0; 2 * nvertex],
            labelend: vec![NONE; 2 * nvertex],
            inblossom: (0..nvertex).collect(),
            blossomparent: vec![NONE; 2 * nvertex],
            blossomchilds: vec![Vec::new(); 2 * nvertex],
            blossombase: (0..nvertex).chain(std::iter::repeat(NONE).take(nvertex)).collect(),
            blossomendps: vec![Vec::new(); 2 * nvertex],
            bestedge: vec![NONE; 2 * nvertex],
            blossombestedges: vec![Vec::new(); 2 * nvertex],
            unusedblossoms: (nvertex..2 * nvertex).collect(),
            dualvar,
            allowedge: vec![false; nedge],
            queue: Vec::new(),
        }
    }

    #[inline]
    fn slack(&self, k: usize) -> Weight {
        let (i, j, wt) = self.edges[k];
        self.dualvar[i] + self.dualvar[j] - 2 * wt
    }

    fn blossom_leaves(&self, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![b];
        while let Some(t) = stack.pop() {
            if t < self.nvertex {
                out.push(t);
            } else {
                stack.extend(self.blossomchilds[t].iter().copied());
            }
        }
        out
    }

    fn assign_label(&mut self, w: usize, t: u8, p: usize) {
        let b = self.inblossom[w];
        assert!(self.label[w] == 0 && self.label[b] == 0);
        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.bestedge[w] = NONE;
        self.bestedge[b] = NONE;
        if t == 1 {
            let leaves = self.blossom_leaves(b);
            self.queue.extend(leaves);
        } else if t == 2 {
            let base = self.blossombase[b];
            assert!(self.mate[base] != NONE);
            let mbase = self.mate[base];
            let ep = self.endpoint[mbase];
            self.assign_label(ep, 1, mbase ^ 1);
        }
    }

    fn scan_blossom(&mut self, v0: usize, w0: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        let mut v = v0;
        let mut w = w0;
        loop {
            if v == NONE && w == NONE {
                break;
            }
            if v != NONE {
                let mut b = self.inblossom[v];
                if self.label[b] & 4 != 0 {
                    base = self.blossombase[b];
                    break;
                }
                assert_eq!(self.label[b], 1);
                path.push(b);
                self.label[b] = 5;
                assert_eq!(self.labelend[b], self.mate[self.blossombase[b]]);
                if self.labelend[b] == NONE {
                    v = NONE;
                } else {
                    v = self.endpoint[self.labelend[b]];
                    b = self.inblossom[v];
                    assert_eq!(self.label[b], 2);
                    assert!(self.labelend[b] != NONE);
                    v = self.endpoint[self.labelend[b]];
                }
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = 1;
        }
        base
    }

    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unusedblossoms.pop().expect("ran out of blossom slots");
        self.blossombase[b] = base;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b;
        let mut childs = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossomparent[bv] = b;
            childs.push(bv);
            endps.push(self.labelend[bv]);
            assert!(
                self.label[bv] == 2
                    || (self.label[bv] == 1
                        && self.labelend[bv] == self.mate[self.blossombase[bv]])
            );
            assert!(self.labelend[bv] != NONE);
            v = self.endpoint[self.labelend[bv]];
            bv = self.inblossom[v];
        }
        childs.push(bb);
        childs.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossomparent[bw] = b;
            childs.push(bw);
            endps.push(self.labelend[bw] ^ 1);
            assert!(
                self.label[bw] == 2
                    || (self.label[bw] == 1
                        && self.labelend[bw] == self.mate[self.blossombase[bw]])
            );
            assert!(self.labelend[bw] != NONE);
            w = self.endpoint[self.labelend[bw]];
            bw = self.inblossom[w];
        }
        self.blossomchilds[b] = childs;
        self.blossomendps[b] = endps;
        assert_eq!(self.label[bb], 1);
        self.label[b] = 1;
        self.labelend[b] = self.labelend[bb];
        self.dualvar[b] = 0;
        for leaf in self.blossom_leaves(b) {
            if self.label[self.inblossom[leaf]] == 2 {
                self.queue.push(leaf);
            }
            self.inblossom[leaf] = b;
        }
        // Recompute least-slack edges to neighbouring S-blossoms.
        let mut bestedgeto = vec![NONE; 2 * self.nvertex];
        for bv in self.blossomchilds[b].clone() {
            let nblists: Vec<Vec<usize>> = if self.blossombestedges[bv].is_empty() {
                self.blossom_leaves(bv)
                    .into_iter()
                    .map(|leaf| self.neighbend[leaf].iter().map(|p| p / 2).collect())
                    .collect()
            } else {
                vec![self.blossombestedges[bv].clone()]
            };
            for nblist in nblists {
                for k in nblist {
                    let (mut i, mut j, _) = self.edges[k];
                    if self.inblossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let _ = i;
                    let bj = self.inblossom[j];
                    if bj != b
                        && self.label[bj] == 1
                        && (bestedgeto[bj] == NONE || self.slack(k) < self.slack(bestedgeto[bj]))
                    {
                        bestedgeto[bj] = k;
                    }
                }
            }
            self.blossombestedges[bv] = Vec::new();
            self.bestedge[bv] = NONE;
        }
        let best: Vec<usize> = bestedgeto.into_iter().filter(|&k| k != NONE).collect();
        self.bestedge[b] = NONE;
        for &k in &best {
            if self.bestedge[b] == NONE || self.slack(k) < self.slack(self.bestedge[b]) {
                self.bestedge[b] = k;
            }
        }
        self.blossombestedges[b] = best;
    }

    fn expand_blossom(&mut self, b: usize, endstage: bool) {
        for s in self.blossomchilds[b].clone() {
            self.blossomparent[s] = NONE;
            if s < self.nvertex {
                self.inblossom[s] = s;
            } else if endstage && self.dualvar[s] == 0 {
                self.expand_blossom(s, endstage);
            } else {
                for leaf in self.blossom_leaves(s) {
                    self.inblossom[leaf] = s;
                }
            }
        }
        if !endstage && self.label[b] == 2 {
            assert!(self.labelend[b] != NONE);
            let entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]];
            let len = self.blossomchilds[b].len() as i64;
            let mut j = self.blossomchilds[b]
                .iter()
                .position(|&c| c == entrychild)
                .unwrap() as i64;
            let (jstep, endptrick): (i64, usize) = if j % 2 != 0 {
                j -= len;
                (1, 0)
            } else {
                (-1, 1)
            };
            let at_childs = |s: &Self, idx: i64| -> usize {
                let len = s.blossomchilds[b].len() as i64;
                s.blossomchilds[b][(((idx % len) + len) % len) as usize]
            };
            let at_endps = |s: &Self, idx: i64| -> usize {
                let len = s.blossomendps[b].len() as i64;
                s.blossomendps[b][(((idx % len) + len) % len) as usize]
            };
            let mut p = self.labelend[b];
            while j != 0 {
                self.label[self.endpoint[p ^ 1]] = 0;
                let q = at_endps(self, j - endptrick as i64) ^ endptrick ^ 1;
                self.label[self.endpoint[q]] = 0;
                let ep = self.endpoint[p ^ 1];
                self.assign_label(ep, 2, p);
                let allow = at_endps(self, j - endptrick as i64) / 2;
                self.allowedge[allow] = true;
                j += jstep;
                p = at_endps(self, j - endptrick as i64) ^ endptrick;
                self.allowedge[p / 2] = true;
                j += jstep;
            }
            let bv = at_childs(self, j);
            self.label[self.endpoint[p ^ 1]] = 2;
            self.label[bv] = 2;
            self.labelend[self.endpoint[p ^ 1]] = p;
            self.labelend[bv] = p;
            self.bestedge[bv] = NONE;
            j += jstep;
            while at_childs(self, j) != entrychild {
                let bv = at_childs(self, j);
                if self.label[bv] == 1 {
                    j += jstep;
                    continue;
                }
                let mut v_found = NONE;
                for v in self.blossom_leaves(bv) {
                    if self.label[v] != 0 {
                        v_found = v;
                        break;
                    }
                }
                if v_found != NONE {
                    let v = v_found;
                    assert_eq!(self.label[v], 2);
                    assert_eq!(self.inblossom[v], bv);
                    self.label[v] = 0;
                    self.label[self.endpoint[self.mate[self.blossombase[bv]]]] = 0;
                    let le = self.labelend[v];
                    self.assign_label(v, 2, le);
                }
                j += jstep;
            }
        }
        self.label[b] = 0;
        self.labelend[b] = NONE;
        self.blossomchilds[b] = Vec::new();
        self.blossomendps[b] = Vec::new();
        self.blossombase[b] = NONE;
        self.blossombestedges[b] = Vec::new();
        self.bestedge[b] = NONE;
        self.unusedblossoms.push(b);
    }

    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossomparent[t] != b {
            t = self.blossomparent[t];
        }
        if t >= self.nvertex {
            self.augment_blossom(t, v);
        }
        let i = self.blossomchilds[b].iter().position(|&c| c == t).unwrap() as i64;
        let len = self.blossomchilds[b].len() as i64;
        let (mut j, jstep, endptrick): (i64, i64, usize) = if i % 2 != 0 {
            (i - len, 1, 0)
        } else {
            (i, -1, 1)
        };
        let at_childs = |s: &Self, idx: i64| -> usize {
            let len = s.blossomchilds[b].len() as i64;
            s.blossomchilds[b][(((idx % len) + len) % len) as usize]
        };
        let at_endps = |s: &Self, idx: i64| -> usize {
            let len = s.blossomendps[b].len() as i64;
            s.blossomendps[b][(((idx % len) + len) % len) as usize]
        };
        while j != 0 {
            j += jstep;
            let mut t = at_childs(self, j);
            let p = at_endps(self, j - endptrick as i64) ^ endptrick;
            if t >= self.nvertex {
                self.augment_blossom(t, self.endpoint[p]);
            }
            j += jstep;
            t = at_childs(self, j);
            if t >= self.nvertex {
                self.augment_blossom(t, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }
        self.blossomchilds[b].rotate_left(i as usize);
        self.blossomendps[b].rotate_left(i as usize);
        self.blossombase[b] = self.blossombase[self.blossomchilds[b][0]];
        assert_eq!(self.blossombase[b], v);
    }

    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (mut s, mut p) in [(v, 2 * k + 1), (w, 2 * k)] {
            loop {
                let bs = self.inblossom[s];
                assert_eq!(self.label[bs], 1);
                assert_eq!(self.labelend[bs], self.mate[self.blossombase[bs]]);
                if bs >= self.nvertex {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.labelend[bs] == NONE {
                    break;
                }
                let t = self.endpoint[self.labelend[bs]];
                let bt = self.inblossom[t];
                assert_eq!(self.label[bt], 2);
                assert!(self.labelend[bt] != NONE);
                s = self.endpoint[self.labelend[bt]];
                let j = self.endpoint[self.labelend[bt] ^ 1];
                assert_eq!(self.blossombase[bt], t);
                if self.inblossom[j] >= self.nvertex {
                    self.augment_blossom(self.inblossom[j], j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] ^ 1;
            }
        }
    }

    fn solve(&mut self) {
        for _ in 0..self.nvertex {
            self.label = vec![0; 2 * self.nvertex];
            self.bestedge = vec![NONE; 2 * self.nvertex];
            for be in self.blossombestedges[self.nvertex..].iter_mut() {
                be.clear();
            }
            self.allowedge = vec![false; self.nedge];
            self.queue.clear();
            for v in 0..self.nvertex {
                if self.mate[v] == NONE && self.label[self.inblossom[v]] == 0 {
                    self.assign_label(v, 1, NONE);
                }
            }
            let mut augmented = false;
            'stage: loop {
                while let Some(v) = self.queue.pop() {
                    assert_eq!(self.label[self.inblossom[v]], 1);
                    for p in self.neighbend[v].clone() {
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.inblossom[v] == self.inblossom[w] {
                            continue;
                        }
                        if !self.allowedge[k] {
                            let kslack = self.slack(k);
                            if kslack <= 0 {
                                self.allowedge[k] = true;
                            } else if self.label[self.inblossom[w]] == 1 {
                                let b = self.inblossom[v];
                                if self.bestedge[b] == NONE
                                    || kslack < self.slack(self.bestedge[b])
                                {
                                    self.bestedge[b] = k;
                                }
                                continue;
                            } else if self.label[w] == 0 {
                                if self.bestedge[w] == NONE
                                    || kslack < self.slack(self.bestedge[w])
                                {
                                    self.bestedge[w] = k;
                                }
                                continue;
                            } else {
                                continue;
                            }
                        }
                        if self.label[self.inblossom[w]] == 0 {
                            self.assign_label(w, 2, p ^ 1);
                        } else if self.label[self.inblossom[w]] == 1 {
                            let base = self.scan_blossom(v, w);
                            if base != NONE {
                                self.add_blossom(base, k);
                            } else {
                                self.augment_matching(k);
                                augmented = true;
                                break 'stage;
                            }
                        } else if self.label[w] == 0 {
                            // unreached vertex inside a T-blossom
                            assert_eq!(self.label[self.inblossom[w]], 2);
                            self.label[w] = 2;
                            self.labelend[w] = p ^ 1;
                        }
                    }
                }
                // Compute delta.
                let mut deltatype = -1;
                let mut delta: Weight = 0;
                let mut deltaedge = NONE;
                let mut deltablossom = NONE;
                if !self.max_cardinality {
                    deltatype = 1;
                    delta = self.dualvar[..self.nvertex].iter().copied().min().unwrap().max(0);
                }
                for v in 0..self.nvertex {
                    if self.label[self.inblossom[v]] == 0 && self.bestedge[v] != NONE {
                        let d = self.slack(self.bestedge[v]);
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 2;
                            deltaedge = self.bestedge[v];
                        }
                    }
                }
                for b in 0..2 * self.nvertex {
                    if self.blossomparent[b] == NONE
                        && self.label[b] == 1
                        && self.bestedge[b] != NONE
                    {
                        let kslack = self.slack(self.bestedge[b]);
                        let d = kslack / 2;
                        if deltatype == -1 || d < delta {
                            delta = d;
                            deltatype = 3;
                            deltaedge = self.bestedge[b];
                        }
                    }
                }
                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] != NONE
                        && self.blossomparent[b] == NONE
                        && self.label[b] == 2
                        && (deltatype == -1 || self.dualvar[b] < delta)
                    {
                        delta = self.dualvar[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if deltatype == -1 {
                    // No further improvement possible; max-cardinality optimum.
                    deltatype = 1;
                    delta = self.dualvar[..self.nvertex].iter().copied().min().unwrap().max(0);
                }
                // Update dual variables.
                for v in 0..self.nvertex {
                    match self.label[self.inblossom[v]] {
                        1 => self.dualvar[v] -= delta,
                        2 => self.dualvar[v] += delta,
                        _ => {}
                    }
                }
                for b in self.nvertex..2 * self.nvertex {
                    if self.blossombase[b] != NONE && self.blossomparent[b] == NONE {
                        match self.label[b] {
                            1 => self.dualvar[b] += delta,
                            2 => self.dualvar[b] -= delta,
                            _ => {}
                        }
                    }
                }
                match deltatype {
                    1 => break 'stage,
                    2 => {
                        self.allowedge[deltaedge] = true;
                        let (mut i, j, _) = self.edges[deltaedge];
                        if self.label[self.inblossom[i]] == 0 {
                            i = j;
                        }
                        assert_eq!(self.label[self.inblossom[i]], 1);
                        self.queue.push(i);
                    }
                    3 => {
                        self.allowedge[deltaedge] = true;
                        let (i, _, _) = self.edges[deltaedge];
                        assert_eq!(self.label[self.inblossom[i]], 1);
                        self.queue.push(i);
                    }
                    4 => {
                        self.expand_blossom(deltablossom, false);
                    }
                    _ => unreachable!(),
                }
            }
            if !augmented {
                break;
            }
            for b in self.nvertex..2 * self.nvertex {
                if self.blossomparent[b] == NONE
                    && self.blossombase[b] != NONE
                    && self.label[b] == 1
                    && self.dualvar[b] == 0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
    }

    /// Check the dual feasibility / complementary slackness conditions.
    fn verify_optimum(&self) -> bool {
        let vdualoffset: Weight = if self.max_cardinality {
            let mn = self.dualvar[..self.nvertex].iter().copied().min().unwrap_or(0);
            (-mn).max(0)
        } else {
            0
        };
        if self.dualvar[..self.nvertex]
            .iter()
            .any(|&d| d + vdualoffset < 0)
        {
            return false;
        }
        if self.dualvar[self.nvertex..].iter().any(|&d| d < 0) {
            return false;
        }
        for (k, &(i, j, wt)) in self.edges.iter().enumerate() {
            let mut s = self.dualvar[i] + self.dualvar[j] - 2 * wt;
            let mut iblossoms = vec![i];
            let mut jblossoms = vec![j];
            while self.blossomparent[*iblossoms.last().unwrap()] != NONE {
                iblossoms.push(self.blossomparent[*iblossoms.last().unwrap()]);
            }
            while self.blossomparent[*jblossoms.last().unwrap()] != NONE {
                jblossoms.push(self.blossomparent[*jblossoms.last().unwrap()]);
            }
            iblossoms.reverse();
            jblossoms.reverse();
            for (bi, bj) in iblossoms.iter().zip(jblossoms.iter()) {
                if bi != bj {
                    break;
                }
                s += 2 * self.dualvar[*bi];
            }
            if s < 0 {
                return false;
            }
            if (self.mate[i] != NONE && self.mate[i] / 2 == k)
                || (self.mate[j] != NONE && self.mate[j] / 2 == k)
            {
                if !(self.mate[i] / 2 == k && self.mate[j] / 2 == k) {
                    return false;
                }
                if s != 0 {
                    return false;
                }
            }
        }
        true
    }

    fn mate_vertices(&self) -> Vec<usize> {
        (0..self.nvertex)
            .map(|v| {
                if self.mate[v] == NONE {
                    NONE
                } else {
                    self.endpoint[self.mate[v]]
                }
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Minimum-weight perfect matching with boundary nodes
// ---------------------------------------------------------------------------

/// Matching problem: weighted graph whose non-boundary nodes must all be
/// matched; boundary nodes may each absorb at most one match, at the listed
/// edge weight, or stay unmatched for free.
#[derive(Clone, Debug, Default)]
pub struct MatchGraph {
    node_count: usize,
    boundary: Vec<bool>,
    edges: Vec<(usize, usize, i64)>,
}

impl MatchGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, boundary: bool) -> usize {
        self.boundary.push(boundary);
        self.node_count += 1;
        self.node_count - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, weight: i64) {
        assert!(u < self.node_count && v < self.node_count && u != v);
        assert!(weight >= 0, "matching weights must be nonnegative");
        self.edges.push((u, v, weight));
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }
}

/// Result of [`mwpm`]: matched pairs over the original node ids. Pairs where
/// one side is a boundary node represent absorption; boundary-boundary pairs
/// are dropped (they carry no weight).
#[derive(Clone, Debug)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub total_weight: i64,
}

/// Exact minimum-weight matching that covers every non-boundary node.
pub fn mwpm(graph: &MatchGraph) -> Result<Matching> {
    let n = graph.node_count;
    if n == 0 {
        return Ok(Matching { pairs: Vec::new(), total_weight: 0 });
    }
    let boundary_nodes: Vec<usize> = (0..n).filter(|&v| graph.boundary[v]).collect();
    let real_count = n - boundary_nodes.len();

    // Deduplicate parallel edges, keep minimum weight.
    let mut best: std::collections::HashMap<(usize, usize), i64> = std::collections::HashMap::new();
    for &(u, v, w) in &graph.edges {
        let key = (u.min(v), u.max(v));
        let e = best.entry(key).or_insert(w);
        if w < *e {
            *e = w;
        }
    }

    // Zero-weight pairing edges among boundary nodes let any even subset of
    // them vanish; one extra virtual boundary node fixes parity if needed.
    let mut total_nodes = n;
    let mut extra = NONE;
    if (real_count + boundary_nodes.len()) % 2 == 1 {
        if boundary_nodes.is_empty() {
            return Err(Error::Infeasible(
                "odd number of nodes with no boundary".into(),
            ));
        }
        extra = total_nodes;
        total_nodes += 1;
    }
    for (i, &a) in boundary_nodes.iter().enumerate() {
        for &b in boundary_nodes.iter().skip(i + 1) {
            best.insert((a.min(b), a.max(b)), 0);
        }
        if extra != NONE {
            best.insert((a, extra), 0);
        }
    }
    let _ = total_nodes;

    let max_w = best.values().copied().max().unwrap_or(0);
    let edges: Vec<(usize, usize, i64)> = {
        let mut es: Vec<((usize, usize), i64)> = best.into_iter().collect();
        es.sort(); // deterministic edge order = deterministic tie-breaking
        es.into_iter()
            .map(|((u, v), w)| (u, v, max_w + 1 - w))
            .collect()
    };
    let mate = max_weight_matching(&edges, true);
    // Verify all real nodes are matched.
    for v in 0..n {
        if !graph.boundary[v] && (v >= mate.len() || mate[v] == NONE) {
            return Err(Error::Infeasible(format!(
                "node {v} cannot be matched (parity or connectivity)"
            )));
        }
    }
    let mut pairs = Vec::new();
    let mut total_weight = 0i64;
    let weight_of: std::collections::HashMap<(usize, usize), i64> = graph
        .edges
        .iter()
        .map(|&(u, v, w)| ((u.min(v), u.max(v)), w))
        .fold(std::collections::HashMap::new(), |mut m, (k, w)| {
            let e = m.entry(k).or_insert(w);
            if w < *e {
                *e = w;
            }
            m
        });
    for v in 0..n {
        let w = if v < mate.len() { mate[v] } else { NONE };
        if w == NONE || w <= v {
            continue;
        }
        if w >= n {
            continue; // matched to the virtual parity node
        }
        if graph.boundary[v] && graph.boundary[w] {
            continue; // boundary pair: vanishes for free
        }
        let key = (v.min(w), v.max(w));
        let wt = *weight_of.get(&key).unwrap_or(&0);
        total_weight += wt;
        pairs.push((v, w));
    }
    Ok(Matching { pairs, total_weight })
}

// ---------------------------------------------------------------------------
// Shortest-path T-joins on unit-weight graphs
// ---------------------------------------------------------------------------

/// BFS distances and canonical parents (lowest-index neighbor discovered
/// first) from `source` on an adjacency-list graph.
pub fn bfs_tree(adj: &[Vec<usize>], source: usize) -> (Vec<u32>, Vec<usize>) {
    let n = adj.len();
    let mut dist = vec![u32::MAX; n];
    let mut parent = vec![NONE; n];
    let mut queue = std::collections::VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        for &u in &adj[v] {
            if dist[u] == u32::MAX {
                dist[u] = dist[v] + 1;
                parent[u] = v;
                queue.push_back(u);
            }
        }
    }
    (dist, parent)
}

/// Minimum-cardinality edge set whose odd-degree vertex set is exactly `t_set`,
/// on a connected unit-weight graph. Exact: complete graph over `t_set` with
/// BFS distances, exact matching, XOR of canonical shortest paths.
pub fn t_join(adj: &[Vec<usize>], t_set: &[usize]) -> Result<Vec<(usize, usize)>> {
    if t_set.len() % 2 != 0 {
        return Err(Error::Infeasible(format!(
            "odd defect set of size {}",
            t_set.len()
        )));
    }
    if t_set.is_empty() {
        return Ok(Vec::new());
    }
    if t_set.len() > 2000 {
        return Err(Error::ResourceBudget(format!(
            "{} defects exceed the matching guardrail of 2000",
            t_set.len()
        )));
    }
    let mut sorted: Vec<usize> = t_set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    assert_eq!(sorted.len(), t_set.len(), "t_join defect set must be unique");

    let trees: Vec<(Vec<u32>, Vec<usize>)> =
        sorted.iter().map(|&t| bfs_tree(adj, t)).collect();
    let mut g = MatchGraph::new();
    for _ in &sorted {
        g.add_node(false);
    }
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            let d = trees[i].0[sorted[j]];
            if d == u32::MAX {
                return Err(Error::Infeasible("disconnected defects".into()));
            }
            g.add_edge(i, j, d as i64);
        }
    }
    let matching = mwpm(&g)?;
    // XOR the canonical paths.
    let mut edge_parity: std::collections::HashMap<(usize, usize), bool> =
        std::collections::HashMap::new();
    for &(i, j) in &matching.pairs {
        // walk from sorted[j] up the BFS tree of sorted[i]; roots are chosen
        // by sorted order so the path is canonical.
        let (root_idx, leaf_idx) = (i.min(j), i.max(j));
        let parent = &trees[root_idx].1;
        let mut v = sorted[leaf_idx];
        while v != sorted[root_idx] {
            let p = parent[v];
            let key = (v.min(p), v.max(p));
            let e = edge_parity.entry(key).or_insert(false);
            *e = !*e;
            v = p;
        }
    }
    Ok(edge_parity
        .into_iter()
        .filter_map(|(k, odd)| if odd { Some(k) } else { None })
        .collect())
}
