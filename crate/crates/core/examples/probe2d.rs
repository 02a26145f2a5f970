//! Scratch exploration of 2D triangular color code duals (not shipped).
//! Kuhn 2D lattice: vertices Z^2, color (x+y) mod 3, triangles
//! {p, p+ex, p+ex+ey} and {p, p+ey, p+ex+ey}. Removed vertices merge into
//! one external vertex per color.

use std::collections::{BTreeMap, BTreeSet};

type P = [i64; 2];

fn color(p: P) -> usize {
    ((p[0] + p[1]).rem_euclid(3)) as usize
}

fn tris_touching(kept: &BTreeSet<P>) -> Vec<[P; 3]> {
    let mut out = BTreeSet::new();
    for &p in kept {
        for q in [
            // triangles containing p in any role
            [p, [p[0] + 1, p[1]], [p[0] + 1, p[1] + 1]],
            [p, [p[0], p[1] + 1], [p[0] + 1, p[1] + 1]],
            [[p[0] - 1, p[1]], p, [p[0], p[1] + 1]],
            [[p[0] - 1, p[1] - 1], [p[0], p[1] - 1], p],
            [[p[0] - 1, p[1] - 1], [p[0] - 1, p[1]], p],
            [[p[0], p[1] - 1], p, [p[0] + 1, p[1]]],
        ] {
            out.insert(q);
        }
    }
    out.into_iter().collect()
}

struct Complex2 {
    n_internal: usize,
    colors: Vec<usize>,
    regions: Vec<usize>,
    tris: Vec<[u32; 3]>,
}

fn build(kept_list: &[P]) -> Complex2 {
    let kept: BTreeSet<P> = kept_list.iter().copied().collect();
    let coords: Vec<P> = kept.iter().copied().collect();
    let mut index = BTreeMap::new();
    for (i, &p) in coords.iter().enumerate() {
        index.insert(p, i as u32);
    }
    let n_internal = coords.len();
    let raw = tris_touching(&kept);
    let mut ext_present = [false; 3];
    for t in &raw {
        for p in t {
            if !index.contains_key(p) {
                ext_present[color(*p)] = true;
            }
        }
    }
    let regions: Vec<usize> = (0..3).filter(|&c| ext_present[c]).collect();
    let ext_id = |c: usize| (n_internal + regions.iter().position(|&rc| rc == c).unwrap()) as u32;
    let mut tris = BTreeSet::new();
    for t in &raw {
        let mut ids = [0u32; 3];
        for (i, p) in t.iter().enumerate() {
            ids[i] = match index.get(p) {
                Some(&id) => id,
                None => ext_id(color(*p)),
            };
        }
        ids.sort_unstable();
        if ids[0] != ids[1] && ids[1] != ids[2] {
            tris.insert(ids);
        }
    }
    Complex2 {
        n_internal,
        colors: coords.iter().map(|&p| color(p)).collect(),
        regions,
        tris: tris.into_iter().collect(),
    }
}

/// check: every internal dual vertex's triangles form one even cycle
/// (cycle adjacency: share 2 vertices) -> face is a valid plaquette
fn face_cycles_ok(c: &Complex2) -> bool {
    for w in 0..c.n_internal as u32 {
        let supp: Vec<usize> = c
            .tris
            .iter()
            .enumerate()
            .filter(|(_, t)| t.contains(&w))
            .map(|(i, _)| i)
            .collect();
        if supp.len() % 2 != 0 && c.colors[w as usize] < 99 {
            // even size needed for X_f/Z_f commutation
            return false;
        }
        // 2-regular cycle under share-an-edge-with-w adjacency
        let mut deg = vec![0usize; supp.len()];
        for i in 0..supp.len() {
            for j in i + 1..supp.len() {
                let a = c.tris[supp[i]];
                let b = c.tris[supp[j]];
                let shared = a.iter().filter(|v| b.contains(v)).count();
                if shared == 2 {
                    deg[i] += 1;
                    deg[j] += 1;
                }
            }
        }
        if deg.iter().any(|&d| d != 2) {
            return false;
        }
        // connectivity
        let mut seen = vec![false; supp.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for j in 0..supp.len() {
                if !seen[j] {
                    let a = c.tris[supp[i]];
                    let b = c.tris[supp[j]];
                    if a.iter().filter(|v| b.contains(v)).count() == 2 {
                        seen[j] = true;
                        count += 1;
                        stack.push(j);
                    }
                }
            }
        }
        if count != supp.len() {
            return false;
        }
    }
    true
}

/// GF(2) rank of X-stabs (faces) over qubits (tris); k = n - 2*rank for
/// self-dual CSS quotient; distance by brute force over X errors.
fn code_stats(c: &Complex2) -> (usize, usize, Option<usize>) {
    let n = c.tris.len();
    let mut rows: Vec<Vec<bool>> = Vec::new();
    for w in 0..c.n_internal as u32 {
        let mut row = vec![false; n];
        for (i, t) in c.tris.iter().enumerate() {
            if t.contains(&w) {
                row[i] = true;
            }
        }
        rows.push(row);
    }
    let rank = {
        let mut m = rows.clone();
        let mut r = 0;
        for col in 0..n {
            if let Some(pr) = (r..m.len()).find(|&i| m[i][col]) {
                m.swap(r, pr);
                let pivot = m[r].clone();
                for (i, row) in m.iter_mut().enumerate() {
                    if i != r && row[col] {
                        for cc in 0..n {
                            row[cc] ^= pivot[cc];
                        }
                    }
                }
                r += 1;
            }
        }
        r
    };
    let k = n - 2 * rank;
    // X-distance brute force (<= 7): min |E| with E commuting with all Z-stabs
    // (= even overlap with every face) and E not a product of faces.
    let in_face_span = |target: &Vec<bool>| -> bool {
        let mut m = rows.clone();
        let mut t = target.clone();
        let mut r = 0;
        for col in 0..n {
            if let Some(pr) = (r..m.len()).find(|&i| m[i][col]) {
                m.swap(r, pr);
                let pivot = m[r].clone();
                for (i, row) in m.iter_mut().enumerate() {
                    if i != r && row[col] {
                        for cc in 0..n {
                            row[cc] ^= pivot[cc];
                        }
                    }
                }
                if t[col] {
                    for cc in 0..n {
                        t[cc] ^= pivot[cc];
                    }
                }
                r += 1;
            }
        }
        t.iter().all(|&b| !b)
    };
    if k != 1 || n > 40 {
        return (n, k, None);
    }
    for w in 1..=7usize {
        let mut combo: Vec<usize> = (0..w).collect();
        loop {
            let mut e = vec![false; n];
            for &q in &combo {
                e[q] = true;
            }
            let detected = (0..c.n_internal as u32).any(|face| {
                let overlap = c
                    .tris
                    .iter()
                    .enumerate()
                    .filter(|(i, t)| e[*i] && t.contains(&face))
                    .count();
                overlap % 2 == 1
            });
            if !detected && !in_face_span(&e) {
                return (n, k, Some(w));
            }
            // next combination
            let mut i = w;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if combo[i] != i + n - w {
                    combo[i] += 1;
                    for j in i + 1..w {
                        combo[j] = combo[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    combo = Vec::new();
                    break;
                }
            }
            if combo.is_empty() || combo[0] > n - w {
                break;
            }
        }
    }
    (n, k, None)
}

fn probe(name: &str, kept: &[P]) {
    let c = build(kept);
    if c.regions.len() != 3 {
        println!("{name}: cells={} regions={:?} SKIP", c.n_internal, c.regions);
        return;
    }
    let ok = face_cycles_ok(&c);
    let (n, k, d) = code_stats(&c);
    println!(
        "{name}: cells={} n={n} k={k} d={d:?} cycles_ok={ok}",
        c.n_internal
    );
}

fn orbit(p: P) -> Vec<P> {
    // C3 rotation fixing the base triangle {0, ex, ex+ey}:
    // R(a,b) = A(a,b) + (1,0) with A(ex) = ey, A(ey) = -(ex+ey)
    let rot = |q: P| -> P {
        let (a, b) = (q[0], q[1]);
        // A(a,b) = a*(0,1) + b*(-1,-1) = (-b, a-b)
        [-b + 1, a - b]
    };
    let mut out = vec![p];
    let mut q = rot(p);
    while q != p {
        out.push(q);
        q = rot(q);
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn main2() {
    // candidate orbits: all vertices within Chebyshev distance 3 of base
    let base = vec![[0i64, 0], [1, 0], [1, 1]];
    let mut orbits: Vec<Vec<P>> = Vec::new();
    let mut seen: BTreeSet<P> = base.iter().copied().collect();
    for x in -4i64..=5 {
        for y in -4i64..=5 {
            let p = [x, y];
            if seen.contains(&p) {
                continue;
            }
            let o = orbit(p);
            if o.iter().any(|q| seen.contains(q)) {
                continue;
            }
            for &q in &o {
                seen.insert(q);
            }
            orbits.push(o);
        }
    }
    // order orbits by distance to base for readability
    orbits.sort_by_key(|o| o.iter().map(|p| p[0].abs() + p[1].abs()).min().unwrap());
    let no = orbits.len().min(14);
    println!("searching {} orbits (using first {no})", orbits.len());
    let mut found = 0;
    for mask in 1u64..(1 << no) {
        if mask.count_ones() > 5 {
            continue;
        }
        let mut kept = base.clone();
        for (i, o) in orbits.iter().take(no).enumerate() {
            if mask >> i & 1 == 1 {
                kept.extend(o.iter().copied());
            }
        }
        let c = build(&kept);
        if c.regions.len() != 3 || !face_cycles_ok(&c) {
            continue;
        }
        let (n, k, d) = code_stats(&c);
        if k == 1 && d == Some(5) {
            found += 1;
            let mut ks = kept.clone();
            ks.sort_unstable();
            println!("D5 HIT mask={mask:#b} cells={} n={n} kept={ks:?}", c.n_internal);
            if found >= 6 {
                return;
            }
        }
    }
    println!("done, {found} hits");
}

fn score(c: &Complex2) -> i64 {
    // lower is better; 0 = valid triangular-code-like complex
    let mut sc = 0i64;
    if c.regions.len() != 3 {
        sc += 100 * (c.regions.len() as i64 - 3).abs();
    }
    // per-face cycle failures
    for w in 0..c.n_internal as u32 {
        let supp: Vec<usize> = c
            .tris
            .iter()
            .enumerate()
            .filter(|(_, t)| t.contains(&w))
            .map(|(i, _)| i)
            .collect();
        if supp.len() % 2 != 0 {
            sc += 10;
        }
        let mut deg = vec![0usize; supp.len()];
        for i in 0..supp.len() {
            for j in i + 1..supp.len() {
                let a = c.tris[supp[i]];
                let b = c.tris[supp[j]];
                if a.iter().filter(|v| b.contains(v)).count() == 2 {
                    deg[i] += 1;
                    deg[j] += 1;
                }
            }
        }
        sc += deg.iter().filter(|&&d| d != 2).count() as i64 * 5;
    }
    let (_, k, _) = code_stats_rank_only(c);
    sc += 20 * (k as i64 - 1).abs();
    sc
}

fn code_stats_rank_only(c: &Complex2) -> (usize, usize, Option<usize>) {
    let n = c.tris.len();
    let mut rows: Vec<Vec<bool>> = Vec::new();
    for w in 0..c.n_internal as u32 {
        let mut row = vec![false; n];
        for (i, t) in c.tris.iter().enumerate() {
            if t.contains(&w) {
                row[i] = true;
            }
        }
        rows.push(row);
    }
    let rank = {
        let mut m = rows;
        let mut r = 0;
        for col in 0..n {
            if let Some(pr) = (r..m.len()).find(|&i| m[i][col]) {
                m.swap(r, pr);
                let pivot = m[r].clone();
                for (i, row) in m.iter_mut().enumerate() {
                    if i != r && row[col] {
                        for cc in 0..n {
                            row[cc] ^= pivot[cc];
                        }
                    }
                }
                r += 1;
            }
        }
        r
    };
    (n, n - 2 * rank, None)
}

fn main3() {
    // randomized local search for a valid ~9-cell complex with k=1, d=5
    let mut seed = 0x9e3779b97f4a7c15u64;
    let mut rand = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        seed
    };
    let base = vec![[0i64, 0], [1, 0], [1, 1]];
    for restart in 0..400 {
        let mut kept: BTreeSet<P> = base.iter().copied().collect();
        // random initial additions
        for _ in 0..6 + (restart % 5) {
            let x = (rand() % 7) as i64 - 3;
            let y = (rand() % 7) as i64 - 3;
            kept.insert([x, y]);
        }
        let mut best_sc = i64::MAX;
        for _step in 0..400 {
            // propose toggle of a vertex near the kept set
            let items: Vec<P> = kept.iter().copied().collect();
            let b = items[(rand() as usize) % items.len()];
            let dx = (rand() % 5) as i64 - 2;
            let dy = (rand() % 5) as i64 - 2;
            let cand = [b[0] + dx, b[1] + dy];
            let mut next = kept.clone();
            if next.contains(&cand) {
                if next.len() <= 4 {
                    continue;
                }
                next.remove(&cand);
            } else {
                next.insert(cand);
            }
            let list: Vec<P> = next.iter().copied().collect();
            let c = build(&list);
            let sc = score(&c) + (list.len() as i64 - 9).abs();
            if sc <= best_sc {
                best_sc = sc;
                kept = next;
            }
            if sc == 0 {
                break;
            }
        }
        let list: Vec<P> = kept.iter().copied().collect();
        let c = build(&list);
        if c.regions.len() == 3 && face_cycles_ok(&c) {
            let (n, k, d) = code_stats(&c);
            if k == 1 && n > 7 {
                println!(
                    "SEARCH HIT restart={restart} cells={} n={n} d={d:?} kept={list:?}",
                    c.n_internal
                );
                if d == Some(5) {
                    return;
                }
            }
        }
    }
    println!("search done");
}

fn main() {
    main3();
    if true { return; }
    main2();

    // monochromatic-form threshold cuts: f1 = x+y <= t1, f2 = x-2y <= t2,
    // f3 = -2x+y <= t3 (forms congruent to (1,1) mod 3)
    for grow in 0i64..4 {
        for gvec in [[3*grow, 0, 0], [0, 3*grow, 0], [0, 0, 3*grow], [3*grow, 3*grow, 3*grow], [3*grow, 3*grow, 0]] {
            let t = [2 + gvec[0], 1 + gvec[1], 0 + gvec[2]];
            let span = 16i64;
            let mut kept = Vec::new();
            for x in -span..=span {
                for y in -span..=span {
                    let f = [x + y, x - 2 * y, -2 * x + y];
                    if (0..3).all(|i| f[i] <= t[i]) {
                        kept.push([x, y]);
                    }
                }
            }
            if kept.is_empty() || kept.len() > 120 {
                continue;
            }
            probe(&format!("mono t={t:?}"), &kept);
        }
    }

    // base Steane triangle
    let base = vec![[0, 0], [1, 0], [1, 1]];
    probe("steane(1 tri)", &base);
    // triangle side 3 and 4
    let mut side3 = Vec::new();
    for x in 0..3i64 {
        for y in 0..=x {
            side3.push([x, y]);
        }
    }
    probe("side3", &side3);
    let mut side4 = Vec::new();
    for x in 0..4i64 {
        for y in 0..=x {
            side4.push([x, y]);
        }
    }
    probe("side4", &side4);
    // base + orbit combinations
    let o1 = [[2, 0], [1, 2], [-1, -1]];
    let o2 = [[2, 1], [0, 1], [0, -1]];
    let o3 = [[1, -1], [2, 2], [-1, 0]];
    for (name, orbits) in [
        ("base+o1", vec![o1]),
        ("base+o2", vec![o2]),
        ("base+o3", vec![o3]),
        ("base+o1+o2", vec![o1, o2]),
        ("base+o1+o3", vec![o1, o3]),
        ("base+o2+o3", vec![o2, o3]),
        ("base+o1+o2+o3", vec![o1, o2, o3]),
    ] {
        let mut kept = base.clone();
        for o in orbits {
            kept.extend(o.iter().copied());
        }
        probe(name, &kept);
    }
}
