//! Words with empty reduction and loop-decorated triangulations.
//!
//! A triangulation is stored as oriented triangles. Triangle `t` has vertices
//! `verts[t]` in counter-clockwise order and sides `edges[t]`, side `i` going
//! from `verts[t][i]` to `verts[t][i + 1]`. Each side is a dart; its twin is
//! the other side carrying the same edge id. Vertices are either primal or
//! dual, edges between the two classes are quadrangulation edges, and every
//! triangle has exactly one other side, its diagonal.
//!
//! Building from a word glues one triangle per letter along a path that keeps
//! primal vertices on its left. The path enters the first triangle through the
//! root edge, oriented from the dual root vertex to the primal one, and leaves
//! the last triangle through the same edge.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::exploration::{decompose_past, StepKind};
use crate::word::{match_positions, Backward, Burger, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BijectionError {
    #[error("word does not reduce to the empty word; unmatched positions {0:?}")]
    NonEmptyReduction(Vec<usize>),
    #[error("malformed triangulation: {0}")]
    Malformed(String),
    #[error("position {0} is not an F matched inside the word")]
    NotMatchedF(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriangleType {
    Primal,
    Dual,
}

impl TriangleType {
    fn as_str(self) -> &'static str {
        match self {
            TriangleType::Primal => "primal",
            TriangleType::Dual => "dual",
        }
    }
}

/// A triangulation with its fully packed loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopTriangulation {
    pub verts: Vec<[u32; 3]>,
    pub edges: Vec<[u32; 3]>,
    pub primal: Vec<bool>,
    /// Edge id of the root. The root triangle holds it as a primal-to-dual side.
    pub root_edge: u32,
    /// 1-based word position of each triangle.
    pub position: Vec<usize>,
    /// The triangle sharing the diagonal.
    pub companion: Vec<u32>,
    /// The diagonal was flipped (the quadrangle of an `F`).
    pub fictional: Vec<bool>,
    pub loop_id: Vec<u32>,
    pub loop_count: usize,
}

/// Which side of `t` is its diagonal.
fn diag_side(verts: &[u32; 3], primal: &[bool]) -> Option<usize> {
    let mut found = None;
    for i in 0..3 {
        let (a, b) = (verts[i] as usize, verts[(i + 1) % 3] as usize);
        if primal[a] == primal[b] {
            if found.is_some() {
                return None;
            }
            found = Some(i);
        }
    }
    found
}

/// Darts grouped by edge id.
fn dart_index(edges: &[[u32; 3]]) -> HashMap<u32, Vec<(u32, u8)>> {
    let mut m: HashMap<u32, Vec<(u32, u8)>> = HashMap::new();
    for (t, e) in edges.iter().enumerate() {
        for (s, &id) in e.iter().enumerate() {
            m.entry(id).or_default().push((t as u32, s as u8));
        }
    }
    m
}

/// Mesh operations shared by both directions of the bijection.
#[derive(Clone, Debug)]
struct Mesh {
    verts: Vec<[u32; 3]>,
    edges: Vec<[u32; 3]>,
    primal: Vec<bool>,
}

impl Mesh {
    fn diag(&self, t: usize) -> usize {
        diag_side(&self.verts[t], &self.primal).expect("one diagonal per triangle")
    }

    fn twin_map(&self) -> Result<HashMap<(u32, u8), (u32, u8)>, BijectionError> {
        let mut tw = HashMap::new();
        for (id, ds) in dart_index(&self.edges) {
            if ds.len() != 2 {
                return Err(BijectionError::Malformed(format!("edge {id} has {} sides", ds.len())));
            }
            tw.insert(ds[0], ds[1]);
            tw.insert(ds[1], ds[0]);
        }
        Ok(tw)
    }

    fn companion(&self, t: usize, tw: &HashMap<(u32, u8), (u32, u8)>) -> usize {
        tw[&(t as u32, self.diag(t) as u8)].0 as usize
    }

    fn rotate_to_diag(&self, t: usize) -> ([u32; 3], [u32; 3]) {
        let d = self.diag(t);
        let r = (d + 1) % 3;
        let v = [self.verts[t][r], self.verts[t][(r + 1) % 3], self.verts[t][(r + 2) % 3]];
        let e = [self.edges[t][r], self.edges[t][(r + 1) % 3], self.edges[t][(r + 2) % 3]];
        (v, e)
    }

    /// Replace the diagonal shared by `t1` and `t2` with the other one.
    ///
    /// `t1` becomes the triangle made of `t1`'s second side and `t2`'s first,
    /// `t2` the one made of `t2`'s second side and `t1`'s first, counted from
    /// the diagonal.
    fn flip(&mut self, t1: usize, t2: usize) {
        let (v, e) = self.rotate_to_diag(t1);
        let (w, f) = self.rotate_to_diag(t2);
        debug_assert_eq!(e[2], f[2]);
        debug_assert_eq!((w[0], w[2]), (v[2], v[0]));
        let d = e[2];
        // Quadrangle v0 v1 v2 v3 counter-clockwise, old diagonal v2 -> v0.
        let (v0, v1, v2, v3) = (v[0], v[1], v[2], w[1]);
        self.verts[t1] = [v1, v2, v3];
        self.edges[t1] = [e[1], f[0], d];
        self.verts[t2] = [v3, v0, v1];
        self.edges[t2] = [f[1], e[0], d];
    }

    /// The triangles met by the loop through `(t, s)`, entering through side
    /// `s` of `t`, in crossing order.
    fn trace(&self, t: usize, s: usize, tw: &HashMap<(u32, u8), (u32, u8)>) -> Vec<usize> {
        let mut out = Vec::new();
        let (mut ct, mut cs) = (t, s);
        loop {
            out.push(ct);
            let d = self.diag(ct);
            let exit = (0..3).find(|&i| i != d && i != cs).unwrap();
            let (nt, ns) = tw[&(ct as u32, exit as u8)];
            (ct, cs) = (nt as usize, ns as usize);
            if (ct, cs) == (t, s) {
                return out;
            }
        }
    }

    /// Loop id of every triangle and the number of loops.
    fn loops(&self, tw: &HashMap<(u32, u8), (u32, u8)>) -> (Vec<u32>, usize) {
        let n = self.verts.len();
        let mut id = vec![u32::MAX; n];
        let mut k = 0;
        for t in 0..n {
            if id[t] != u32::MAX {
                continue;
            }
            let d = self.diag(t);
            let s = (d + 1) % 3;
            for u in self.trace(t, s, tw) {
                id[u] = k as u32;
            }
            k += 1;
        }
        (id, k)
    }

    fn type_of(&self, t: usize) -> TriangleType {
        let d = self.diag(t);
        if self.primal[self.verts[t][d] as usize] {
            TriangleType::Primal
        } else {
            TriangleType::Dual
        }
    }

    /// The side of the root triangle carrying `root`, going primal to dual.
    fn root_dart(&self, root: u32) -> Option<(usize, usize)> {
        (0..self.verts.len()).find_map(|t| {
            (0..3)
                .find(|&i| self.edges[t][i] == root && self.primal[self.verts[t][i] as usize])
                .map(|i| (t, i))
        })
    }
}

impl LoopTriangulation {
    pub fn triangle_count(&self) -> usize {
        self.verts.len()
    }

    pub fn quadrangle_count(&self) -> usize {
        self.verts.len() / 2
    }

    pub fn vertex_count(&self) -> usize {
        self.primal.len()
    }

    pub fn edge_count(&self) -> usize {
        dart_index(&self.edges).len()
    }

    /// `V - E + F`, counting triangles as faces.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.triangle_count() as i64
    }

    pub fn triangle_type(&self, t: usize) -> TriangleType {
        self.mesh().type_of(t)
    }

    /// Index of the triangle at a 1-based word position.
    pub fn at_position(&self, pos: usize) -> Option<usize> {
        self.position.iter().position(|&p| p == pos)
    }

    /// Triangles of loop `id`.
    pub fn loop_triangles(&self, id: u32) -> Vec<usize> {
        (0..self.verts.len()).filter(|&t| self.loop_id[t] == id).collect()
    }

    /// One line per triangle: `pos type loop-id companion-pos`, in word order.
    pub fn text_dump(&self) -> String {
        let mut order: Vec<usize> = (0..self.verts.len()).collect();
        order.sort_by_key(|&t| self.position[t]);
        let mut s = String::new();
        for t in order {
            let _ = writeln!(
                s,
                "{} {} {} {}",
                self.position[t],
                self.triangle_type(t).as_str(),
                self.loop_id[t],
                self.position[self.companion[t] as usize]
            );
        }
        s
    }

    fn mesh(&self) -> Mesh {
        Mesh { verts: self.verts.clone(), edges: self.edges.clone(), primal: self.primal.clone() }
    }

    /// Check the structural invariants.
    pub fn validate(&self) -> Result<(), BijectionError> {
        let bad = |m: String| Err(BijectionError::Malformed(m));
        for t in 0..self.verts.len() {
            if diag_side(&self.verts[t], &self.primal).is_none() {
                return bad(format!("triangle {t} does not have exactly one diagonal"));
            }
        }
        let mesh = self.mesh();
        let tw = mesh.twin_map()?;
        for (&(t, s), &(u, r)) in &tw {
            let (a, b) = (self.verts[t as usize][s as usize], self.verts[t as usize][(s as usize + 1) % 3]);
            let (c, d) = (self.verts[u as usize][r as usize], self.verts[u as usize][(r as usize + 1) % 3]);
            if (a, b) != (d, c) {
                return bad(format!("sides ({t},{s}) and ({u},{r}) are not glued head to tail"));
            }
        }
        if self.euler_characteristic() != 2 {
            return bad(format!("Euler characteristic {}", self.euler_characteristic()));
        }
        for t in 0..self.verts.len() {
            if mesh.companion(t, &tw) != self.companion[t] as usize {
                return bad(format!("companion of triangle {t}"));
            }
        }
        let (ids, k) = mesh.loops(&tw);
        if k != self.loop_count || ids != self.loop_id {
            return bad("loop labels out of date".into());
        }
        Ok(())
    }

    /// Arc diagram of the word: triangles in word order, coloured by type,
    /// quadrangles as arcs and loops as labels.
    pub fn to_svg(&self) -> String {
        let n = self.verts.len();
        let (w, step) = (40 + 24 * n, 24.0);
        let h = 60 + 12 * n;
        let base = h as f64 - 30.0;
        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">"#);
        let x = |pos: usize| 20.0 + step * (pos as f64 - 0.5);
        for t in 0..n {
            let fill = match self.triangle_type(t) {
                TriangleType::Primal => "#3b6fd8",
                TriangleType::Dual => "#d83b3b",
            };
            let cx = x(self.position[t]);
            let _ = writeln!(
                s,
                r#"<polygon points="{:.1},{:.1} {:.1},{:.1} {:.1},{:.1}" fill="{fill}"/>"#,
                cx - 9.0,
                base,
                cx + 9.0,
                base,
                cx,
                base - 16.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{cx:.1}" y="{:.1}" font-size="9" text-anchor="middle">{}</text>"#,
                base + 14.0,
                self.loop_id[t]
            );
            let c = self.companion[t] as usize;
            if self.position[t] < self.position[c] {
                let (x0, x1) = (cx, x(self.position[c]));
                let r = (x1 - x0) / 2.0;
                let dash = if self.fictional[t] { r#" stroke-dasharray="3,3""# } else { "" };
                let _ = writeln!(
                    s,
                    r##"<path d="M {x0:.1} {:.1} A {r:.1} {r:.1} 0 0 1 {x1:.1} {:.1}" fill="none" stroke="#7a3bd8"{dash}/>"##,
                    base - 18.0,
                    base - 18.0
                );
            }
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Build the triangulation of a word with empty reduction.
pub fn word_to_triangulation(w: &Word) -> Result<LoopTriangulation, BijectionError> {
    let m = match_positions(w);
    let un = m.unmatched();
    if !un.is_empty() {
        return Err(BijectionError::NonEmptyReduction(un.iter().map(|i| i + 1).collect()));
    }
    let n = w.len();
    let mut primal = vec![true, false];
    let (a0, d0) = (0u32, 1u32);
    let (mut a, mut d) = (a0, d0);
    let mut act = 0u32;
    let mut next_edge = 1u32;
    let mut verts = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n);
    let mut companion = vec![0u32; n];
    let mut fictional = vec![false; n];
    // Boundary chains: (diagonal edge, vertex below, triangle).
    let mut ham: Vec<(u32, u32, u32)> = Vec::new();
    let mut cheese: Vec<(u32, u32, u32)> = Vec::new();
    for (i, &l) in w.letters.iter().enumerate() {
        let t = i as u32;
        let q = if i + 1 == n {
            0
        } else {
            next_edge += 1;
            next_edge - 1
        };
        let l = if l == Letter::Flexible {
            fictional[i] = true;
            Letter::order_of(m.match_type(i).expect("matched"))
        } else {
            l
        };
        match l {
            Letter::Ham => {
                let a1 = primal.len() as u32;
                primal.push(true);
                let p = next_edge;
                next_edge += 1;
                verts.push([a, d, a1]);
                edges.push([act, q, p]);
                ham.push((p, a, t));
                a = a1;
            }
            Letter::Cheese => {
                let d1 = primal.len() as u32;
                primal.push(false);
                let g = next_edge;
                next_edge += 1;
                verts.push([a, d, d1]);
                edges.push([act, g, q]);
                cheese.push((g, d, t));
                d = d1;
            }
            Letter::HamOrder => {
                let (p, below, u) = ham.pop().expect("matched order");
                verts.push([a, d, below]);
                edges.push([act, q, p]);
                companion[i] = u;
                companion[u as usize] = t;
                fictional[u as usize] = fictional[i];
                a = below;
            }
            Letter::CheeseOrder => {
                let (g, below, u) = cheese.pop().expect("matched order");
                verts.push([a, d, below]);
                edges.push([act, g, q]);
                companion[i] = u;
                companion[u as usize] = t;
                fictional[u as usize] = fictional[i];
                d = below;
            }
            Letter::Flexible => unreachable!(),
        }
        act = q;
    }
    debug_assert_eq!((a, d), (a0, d0));
    let mut mesh = Mesh { verts, edges, primal };
    for i in 0..n {
        if fictional[i] && w.letters[i] == Letter::Flexible {
            // The F keeps the half of the quadrangle it was entered through,
            // which faces the inside of its excursion.
            let (b, f) = (companion[i] as usize, i);
            let entry = mesh.edges[f][0];
            mesh.flip(f, b);
            if !mesh.edges[f].contains(&entry) {
                mesh.verts.swap(b, f);
                mesh.edges.swap(b, f);
            }
        }
    }
    let tw = mesh.twin_map()?;
    let (loop_id, loop_count) = mesh.loops(&tw);
    let Mesh { verts, edges, primal } = mesh;
    Ok(LoopTriangulation {
        verts,
        edges,
        primal,
        root_edge: 0,
        position: (1..=n).collect(),
        companion,
        fictional,
        loop_id,
        loop_count,
    })
}

/// Read the word back off a triangulation by merging its loops.
///
/// Starting from the loop through the root triangle, the last triangle of the
/// current loop whose companion lies on another loop has its quadrangle
/// flipped, which merges the two loops. When one loop is left, each
/// quadrangle gives a burger at its first visit and an order at its second,
/// `F` when it was flipped.
pub fn triangulation_to_word(t: &LoopTriangulation) -> Result<Word, BijectionError> {
    for i in 0..t.verts.len() {
        if diag_side(&t.verts[i], &t.primal).is_none() {
            return Err(BijectionError::Malformed(format!("triangle {i} has no single diagonal")));
        }
    }
    let mut mesh = t.mesh();
    let tw = mesh.twin_map()?;
    let n = mesh.verts.len();
    let companion: Vec<usize> = (0..n).map(|i| mesh.companion(i, &tw)).collect();
    let mut flipped = vec![false; n];
    let root = |m: &Mesh| m.root_dart(t.root_edge).ok_or_else(|| BijectionError::Malformed("no root triangle".into()));
    let mut merges = 0;
    loop {
        let tw = mesh.twin_map()?;
        let (rt, rs) = root(&mesh)?;
        let tour = mesh.trace(rt, rs, &tw);
        if tour.len() == n {
            break;
        }
        let mut on = vec![false; n];
        for &u in &tour {
            on[u] = true;
        }
        let Some(&u) = tour.iter().rev().find(|&&u| !on[companion[u]]) else {
            return Err(BijectionError::Malformed("loops cannot be merged".into()));
        };
        merges += 1;
        if merges > n {
            return Err(BijectionError::Malformed("loop merging does not terminate".into()));
        }
        let v = companion[u];
        mesh.flip(u, v);
        flipped[u] = true;
        flipped[v] = true;
    }
    let tw = mesh.twin_map()?;
    let (rt, rs) = root(&mesh)?;
    let tour = mesh.trace(rt, rs, &tw);
    let mut seen = vec![false; n];
    let mut letters = Vec::with_capacity(n);
    for &u in &tour {
        let ty = mesh.type_of(u);
        let l = if !seen[companion[u]] {
            match ty {
                TriangleType::Primal => Letter::Ham,
                TriangleType::Dual => Letter::Cheese,
            }
        } else if flipped[u] {
            Letter::Flexible
        } else {
            match ty {
                TriangleType::Primal => Letter::HamOrder,
                TriangleType::Dual => Letter::CheeseOrder,
            }
        };
        seen[u] = true;
        letters.push(l);
    }
    Ok(Word::new(letters))
}

/// A planar map with a set of open edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedMap {
    pub vertices: usize,
    /// Faces of the map, one per dual vertex.
    pub faces: usize,
    /// Endpoints of each edge, one edge per quadrangle in word order.
    pub edges: Vec<(u32, u32)>,
    pub open: Vec<bool>,
    /// Index in `edges` of the root edge.
    pub root: usize,
}

impl DecoratedMap {
    pub fn open_count(&self) -> usize {
        self.open.iter().filter(|&&o| o).count()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges.len() as i64 + self.faces as i64
    }
}

/// The FK-decorated map: primal vertices, one edge per quadrangle joining
/// its two primal corners, open when that diagonal is present.
pub fn extract_fk_map(t: &LoopTriangulation) -> Result<DecoratedMap, BijectionError> {
    let mesh = t.mesh();
    let tw = mesh.twin_map()?;
    let n = t.verts.len();
    let mut renumber = vec![u32::MAX; t.primal.len()];
    let mut vertices = 0;
    for (v, &p) in t.primal.iter().enumerate() {
        if p {
            renumber[v] = vertices as u32;
            vertices += 1;
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&u| t.position[u] < t.position[t.companion[u] as usize]).collect();
    order.sort_by_key(|&u| t.position[u]);
    let mut edges = Vec::new();
    let mut open = Vec::new();
    let mut root = None;
    for u in order {
        let c = mesh.companion(u, &tw);
        let d = mesh.diag(u);
        let (a, b) = (t.verts[u][d], t.verts[u][(d + 1) % 3]);
        let is_open = t.primal[a as usize];
        let ends = if is_open {
            (a, b)
        } else {
            // The primal corners are the apexes opposite the dual diagonal.
            (t.verts[u][(d + 2) % 3], mesh.verts[c][(mesh.diag(c) + 2) % 3])
        };
        if t.edges[u].contains(&t.root_edge) || t.edges[c].contains(&t.root_edge) {
            root.get_or_insert(edges.len());
        }
        edges.push((renumber[ends.0 as usize], renumber[ends.1 as usize]));
        open.push(is_open);
    }
    Ok(DecoratedMap { vertices, faces: t.primal.len() - vertices, edges, open, root: root.unwrap_or(0) })
}

/// The cluster surrounded by the loop of an `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterMap {
    pub f_pos: usize,
    pub match_pos: usize,
    pub match_type: Burger,
    /// Triangles crossed by the loop of the `F`.
    pub loop_len: usize,
    /// Degree of the root face: loop triangles of the cluster's colour.
    pub boundary_len: usize,
    pub skeleton: Word,
}

/// Skeleton of an `F`-excursion: the steps on the side of its match type,
/// the match itself excluded, in word order.
pub fn skeleton(e: &Word) -> Word {
    let n = e.len();
    assert!(n >= 2 && e.letters[n - 1] == Letter::Flexible, "an F-excursion ends with F");
    let body = &e.letters[..n - 1];
    let mut src = Backward::new(body);
    let steps = decompose_past(&mut src, usize::MAX, u64::MAX).expect("finite excursion");
    let Some(last) = steps.last() else { return Word::new(vec![]) };
    let side = last.side();
    let mut out: Vec<Vec<Letter>> = Vec::new();
    let mut end = body.len();
    for (k, s) in steps.iter().enumerate() {
        let start = end - s.eta as usize;
        if k + 1 < steps.len() && s.side() == side {
            out.push(body[start..end].to_vec());
        }
        end = start;
    }
    out.reverse();
    Word::new(out.concat())
}

/// Geometric loop and boundary of the `F` at 1-based position `f_pos`.
pub fn cluster_of_f(t: &LoopTriangulation, w: &Word, f_pos: usize) -> Result<ClusterMap, BijectionError> {
    let m = match_positions(w);
    let i = f_pos.checked_sub(1).ok_or(BijectionError::NotMatchedF(f_pos))?;
    if w.letters.get(i) != Some(&Letter::Flexible) {
        return Err(BijectionError::NotMatchedF(f_pos));
    }
    let j = m.partner(i).ok_or(BijectionError::NotMatchedF(f_pos))?;
    let match_type = m.match_type(i).unwrap();
    let ti = t.at_position(f_pos).ok_or(BijectionError::NotMatchedF(f_pos))?;
    let tris = t.loop_triangles(t.loop_id[ti]);
    let colour = match match_type {
        Burger::Ham => TriangleType::Primal,
        Burger::Cheese => TriangleType::Dual,
    };
    let boundary_len = tris.iter().filter(|&&u| t.triangle_type(u) == colour).count();
    let e = Word::new(w.letters[j..=i].to_vec());
    Ok(ClusterMap {
        f_pos,
        match_pos: j + 1,
        match_type,
        loop_len: tris.len(),
        boundary_len,
        skeleton: skeleton(&e),
    })
}

/// Close an `F`-excursion into a word with empty reduction by putting the
/// burgers its leftover orders ask for in front.
pub fn close_excursion(e: &Word) -> Word {
    let m = match_positions(e);
    let mut front = Vec::new();
    for i in m.unmatched().into_iter().rev() {
        let l = e.letters[i];
        assert!(l.is_order() && l != Letter::Flexible, "not an F-excursion");
        front.push(Letter::burger_of(l.burger().unwrap()));
    }
    front.extend_from_slice(&e.letters);
    Word::new(front)
}

/// Triangles of the loop through the `F` of an excursion; equals the number
/// of steps of the excursion.
pub fn excursion_loop_len(e: &Word) -> Result<usize, BijectionError> {
    let w = close_excursion(e);
    let t = word_to_triangulation(&w)?;
    let ti = t.at_position(w.len()).unwrap();
    Ok(t.loop_triangles(t.loop_id[ti]).len())
}

/// Used by [`decompose_past`] callers that want the step kinds of a word.
pub fn step_kinds(body: &[Letter]) -> Vec<StepKind> {
    let mut src = Backward::new(body);
    decompose_past(&mut src, usize::MAX, u64::MAX).unwrap_or_default().into_iter().map(|s| s.kind).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::word;

    const FIG3: &str = "hcHhhcHcHCFhhhHCHF";

    #[test]
    fn small_words() {
        let t = word_to_triangulation(&word("hH")).unwrap();
        assert_eq!((t.triangle_count(), t.quadrangle_count(), t.loop_count), (2, 1, 1));
        t.validate().unwrap();
        let m = extract_fk_map(&t).unwrap();
        assert_eq!((m.edges.len(), m.open_count()), (1, 1));
        let m = extract_fk_map(&word_to_triangulation(&word("cC")).unwrap()).unwrap();
        assert_eq!((m.edges.len(), m.open_count()), (1, 0));

        let t = word_to_triangulation(&word("hF")).unwrap();
        assert_eq!((t.triangle_count(), t.loop_count), (2, 2));
        t.validate().unwrap();
        assert_eq!(triangulation_to_word(&t).unwrap(), word("hF"));
    }

    #[test]
    fn rejects_unmatched() {
        assert_eq!(word_to_triangulation(&word("hC")), Err(BijectionError::NonEmptyReduction(vec![1, 2])));
    }

    #[test]
    fn figure_word() {
        let w = word(FIG3);
        let t = word_to_triangulation(&w).unwrap();
        t.validate().unwrap();
        assert_eq!((t.triangle_count(), t.quadrangle_count(), t.loop_count), (18, 9, 3));
        assert_eq!(triangulation_to_word(&t).unwrap(), w);
        let m = extract_fk_map(&t).unwrap();
        assert_eq!(m.edges.len(), 9);
        assert_eq!(m.euler_characteristic(), 2);
    }

    #[test]
    fn skeleton_example() {
        assert_eq!(skeleton(&word("hChhCFHchcCHFCF")).to_string(), "hHchcCHF");
        assert_eq!(skeleton(&word("hF")).to_string(), "");
    }

    #[test]
    fn loop_of_excursion() {
        assert_eq!(excursion_loop_len(&word("hF")).unwrap(), 1);
        assert_eq!(excursion_loop_len(&word("hcCF")).unwrap(), 3);
        assert_eq!(excursion_loop_len(&word("hChhCFHchcCHFCF")).unwrap(), 7);
    }
}
