//! Embedded cubic graphs.
//!
//! A graph is stored as a rotation system: for every vertex the three
//! neighbours in counterclockwise order. Faces are the orbits of the dart map
//! "next edge clockwise from the reverse edge", i.e. the successor of the dart
//! `(u, v)` is `(v, w)` where `w` precedes `u` in the rotation at `v`. With
//! counterclockwise rotations this traces the face lying to the left of each
//! dart, and the embedding is planar (spherical) exactly when Euler's formula
//! `V - E + F = 2` holds for a connected graph.

use std::collections::{HashMap, HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("rotation is not symmetric: {0} lists {1} but {1} does not list {0}")]
    NonSymmetricRotation(usize, usize),
    #[error("self loop at vertex {0}")]
    SelfLoop(usize),
    #[error("parallel edge between {0} and {1}")]
    MultiEdge(usize, usize),
    #[error("vertex index {0} out of range for {1} vertices")]
    VertexOutOfRange(usize, usize),
}

/// One face of the embedding. `boundary` lists the vertices in traversal
/// order; the face id is its position in [`PlanarCubicGraph::faces`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: usize,
    pub boundary: Vec<usize>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    /// The undirected edges of the boundary walk.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.boundary.len();
        (0..n).map(move |i| {
            let a = self.boundary[i];
            let b = self.boundary[(i + 1) % n];
            (a.min(b), a.max(b))
        })
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        let e = (u.min(v), u.max(v));
        self.edges().any(|f| f == e)
    }
}

/// Per-property result of the Barnette checks, with a witness for every
/// property that fails. `cubic` and `simple` always hold for values built
/// through [`PlanarCubicGraph::build_from_rotation`]; they are reported anyway
/// so callers can log a uniform record.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct BarnetteReport {
    pub cubic: bool,
    pub simple: bool,
    pub connected: bool,
    pub planar_euler: bool,
    pub bipartite: bool,
    pub three_connected: bool,
    pub two_edge_connected: bool,
    /// An odd closed walk if the graph is not bipartite.
    pub odd_cycle: Option<Vec<usize>>,
    /// A separating vertex pair if the graph is not 3-connected.
    pub cut_pair: Option<(usize, usize)>,
    /// A bridge if the graph is not 2-edge-connected.
    pub bridge: Option<(usize, usize)>,
}

impl BarnetteReport {
    pub fn is_barnette(&self) -> bool {
        self.cubic
            && self.simple
            && self.connected
            && self.planar_euler
            && self.bipartite
            && self.three_connected
            && self.two_edge_connected
    }
}

/// A simple cubic graph with a fixed combinatorial embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarCubicGraph {
    rotation: Vec<[usize; 3]>,
    faces: Vec<Face>,
    /// face id per dart, indexed by `3 * u + slot`.
    face_at: Vec<usize>,
}

impl PlanarCubicGraph {
    /// Validates a rotation system and derives the face set.
    ///
    /// Rejects asymmetric rotations, self loops and parallel edges. The input
    /// need not be connected or planar; those properties are reported by
    /// [`check_barnette`](Self::check_barnette).
    pub fn build_from_rotation(rotation: Vec<[usize; 3]>) -> Result<Self, GraphError> {
        let n = rotation.len();
        for (v, nbrs) in rotation.iter().enumerate() {
            for &w in nbrs {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange(w, n));
                }
                if w == v {
                    return Err(GraphError::SelfLoop(v));
                }
                if !rotation[w].contains(&v) {
                    return Err(GraphError::NonSymmetricRotation(v, w));
                }
            }
            if nbrs[0] == nbrs[1] || nbrs[1] == nbrs[2] || nbrs[0] == nbrs[2] {
                return Err(GraphError::MultiEdge(v, nbrs[0].max(nbrs[1])));
            }
        }
        let (faces, face_at) = trace_faces(&rotation);
        Ok(PlanarCubicGraph {
            rotation,
            faces,
            face_at,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.rotation.len() * 3 / 2
    }

    pub fn rotation(&self) -> &[[usize; 3]] {
        &self.rotation
    }

    pub fn neighbors(&self, v: usize) -> [usize; 3] {
        self.rotation[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.rotation.len() && self.rotation[u].contains(&v)
    }

    /// All undirected edges, each once, as `(min, max)` pairs in sorted order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (v, nbrs) in self.rotation.iter().enumerate() {
            for &w in nbrs {
                if v < w {
                    out.push((v, w));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Faces in a deterministic order: each face is discovered from its
    /// lexicographically smallest unvisited dart.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: usize) -> &Face {
        &self.faces[id]
    }

    /// The face lying on the orbit of the dart `(u, v)`.
    pub fn face_of_dart(&self, u: usize, v: usize) -> usize {
        let slot = self.slot(u, v).expect("dart endpoints must be adjacent");
        self.face_at[3 * u + slot]
    }

    /// The two (not necessarily distinct) face ids incident to an edge.
    pub fn faces_of_edge(&self, u: usize, v: usize) -> (usize, usize) {
        (self.face_of_dart(u, v), self.face_of_dart(v, u))
    }

    fn slot(&self, u: usize, v: usize) -> Option<usize> {
        self.rotation[u].iter().position(|&w| w == v)
    }

    /// Adjacency over faces induced by shared edges. Entry `i` lists the
    /// faces sharing an edge with face `i`, sorted, one entry per shared edge
    /// so multiplicities are preserved.
    pub fn dual_adjacency(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.faces.len()];
        for (u, v) in self.edges() {
            let (f, g) = self.faces_of_edge(u, v);
            out[f].push(g);
            out[g].push(f);
        }
        for list in &mut out {
            list.sort_unstable();
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.rotation.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.rotation.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.rotation[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.rotation.len()
    }

    /// Two-colouring of the vertices, or an odd closed walk when none exists.
    pub fn bipartition(&self) -> Result<Vec<u8>, Vec<usize>> {
        let n = self.rotation.len();
        let mut color = vec![2u8; n];
        let mut parent = vec![usize::MAX; n];
        for root in 0..n {
            if color[root] != 2 {
                continue;
            }
            color[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.rotation[v] {
                    if color[w] == 2 {
                        color[w] = color[v] ^ 1;
                        parent[w] = v;
                        queue.push_back(w);
                    } else if color[w] == color[v] {
                        return Err(odd_walk(&parent, v, w));
                    }
                }
            }
        }
        Ok(color)
    }

    /// True when no single edge disconnects the graph.
    pub fn is_two_edge_connected(&self) -> bool {
        self.find_bridge().is_none() && self.is_connected()
    }

    pub fn find_bridge(&self) -> Option<(usize, usize)> {
        // The graphs at hand are tiny, so test every edge directly.
        for (u, v) in self.edges() {
            if !self.connected_without(&[], Some((u, v))) {
                return Some((u, v));
            }
        }
        None
    }

    fn find_cut_pair(&self) -> Option<(usize, usize)> {
        let n = self.rotation.len();
        if n <= 4 {
            return None;
        }
        for a in 0..n {
            for b in a + 1..n {
                if !self.connected_without(&[a, b], None) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Connectivity of the graph with some vertices and at most one edge
    /// removed.
    fn connected_without(&self, removed: &[usize], skip_edge: Option<(usize, usize)>) -> bool {
        let n = self.rotation.len();
        let gone = |v: usize| removed.contains(&v);
        let root = match (0..n).find(|&v| !gone(v)) {
            Some(r) => r,
            None => return true,
        };
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.rotation[v] {
                if gone(w) || seen[w] {
                    continue;
                }
                if let Some((a, b)) = skip_edge {
                    if (v, w) == (a, b) || (v, w) == (b, a) {
                        continue;
                    }
                }
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
        count == n - removed.len()
    }

    /// Checks all Barnette properties and reports a witness per failure.
    pub fn check_barnette(&self) -> BarnetteReport {
        let connected = self.is_connected();
        let n = self.rotation.len() as i64;
        let e = self.edge_count() as i64;
        let f = self.faces.len() as i64;
        let planar_euler = connected && n - e + f == 2;
        let (bipartite, odd_cycle) = match self.bipartition() {
            Ok(_) => (true, None),
            Err(walk) => (false, Some(walk)),
        };
        let bridge = self.find_bridge();
        let cut_pair = if connected { self.find_cut_pair() } else { None };
        let three_connected = connected && cut_pair.is_none() && bridge.is_none();
        BarnetteReport {
            cubic: true,
            simple: true,
            connected,
            planar_euler,
            bipartite,
            three_connected,
            two_edge_connected: connected && bridge.is_none(),
            odd_cycle,
            cut_pair,
            bridge,
        }
    }
}

fn odd_walk(parent: &[usize], v: usize, w: usize) -> Vec<usize> {
    // Concatenate the tree paths of v and w up to their common ancestor.
    let mut pv = vec![v];
    let mut x = v;
    while parent[x] != usize::MAX {
        x = parent[x];
        pv.push(x);
    }
    let mut pw = vec![w];
    let mut y = w;
    while parent[y] != usize::MAX {
        y = parent[y];
        pw.push(y);
    }
    let on_pv: HashSet<usize> = pv.iter().copied().collect();
    let meet = *pw.iter().find(|u| on_pv.contains(u)).unwrap();
    let mut walk: Vec<usize> = pv.iter().take_while(|&&u| u != meet).copied().collect();
    walk.push(meet);
    let mut tail: Vec<usize> = pw.iter().take_while(|&&u| u != meet).copied().collect();
    tail.reverse();
    walk.extend(tail);
    walk
}

fn trace_faces(rotation: &[[usize; 3]]) -> (Vec<Face>, Vec<usize>) {
    let n = rotation.len();
    let mut face_at = vec![usize::MAX; 3 * n];
    let mut faces = Vec::new();
    for u in 0..n {
        for slot in 0..3 {
            if face_at[3 * u + slot] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut boundary = Vec::new();
            let (mut a, mut b) = (u, rotation[u][slot]);
            loop {
                let s = rotation[a].iter().position(|&w| w == b).unwrap();
                if face_at[3 * a + s] != usize::MAX {
                    break;
                }
                face_at[3 * a + s] = id;
                boundary.push(a);
                // next dart: at b, take the predecessor of a in the rotation.
                let t = rotation[b].iter().position(|&w| w == a).unwrap();
                let c = rotation[b][(t + 2) % 3];
                a = b;
                b = c;
            }
            faces.push(Face { id, boundary });
        }
    }
    (faces, face_at)
}

/// Mutable adjacency scratchpad for embedding surgery.
///
/// Keeps per-vertex neighbour lists in rotation order while vertices
/// temporarily have degree other than three (during edge deletion and
/// smoothing of degree-2 vertices). Convert back to a [`PlanarCubicGraph`]
/// once every remaining vertex is cubic.
#[derive(Debug, Clone)]
pub struct RotationScratch {
    pub adj: Vec<Vec<usize>>,
}

impl RotationScratch {
    pub fn from_graph(g: &PlanarCubicGraph) -> Self {
        RotationScratch {
            adj: g.rotation().iter().map(|r| r.to_vec()).collect(),
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u].retain(|&w| w != v);
        self.adj[v].retain(|&w| w != u);
    }

    /// Replaces the neighbour `old` of `v` by `new` in place, keeping the
    /// cyclic order. Panics if `old` is absent.
    pub fn replace_neighbor(&mut self, v: usize, old: usize, new: usize) {
        let slot = self.adj[v].iter().position(|&w| w == old).unwrap();
        self.adj[v][slot] = new;
    }

    /// Suppresses every degree-2 vertex by joining its two neighbours.
    /// Returns `false` if smoothing would create a loop or parallel edge.
    pub fn smooth_degree_two(&mut self) -> bool {
        loop {
            let v = match self.adj.iter().position(|l| l.len() == 2) {
                Some(v) => v,
                None => return true,
            };
            let (a, b) = (self.adj[v][0], self.adj[v][1]);
            if a == b || a == v || b == v || self.adj[a].contains(&b) {
                return false;
            }
            self.replace_neighbor(a, v, b);
            self.replace_neighbor(b, v, a);
            self.adj[v].clear();
        }
    }

    /// The vertex set reachable from `root` over current edges.
    pub fn component_of(&self, root: usize) -> Vec<usize> {
        let mut seen = vec![false; self.adj.len()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        let mut out = vec![root];
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Extracts the given vertices as a standalone cubic graph together with
    /// the map from new ids back to old ids. Fails if some kept vertex is not
    /// cubic or has a neighbour outside the kept set.
    pub fn extract(&self, keep: &[usize]) -> Result<(PlanarCubicGraph, Vec<usize>), GraphError> {
        let mut index = HashMap::new();
        for (i, &v) in keep.iter().enumerate() {
            index.insert(v, i);
        }
        let mut rotation = Vec::with_capacity(keep.len());
        for &v in keep {
            if self.adj[v].len() != 3 {
                return Err(GraphError::VertexOutOfRange(v, keep.len()));
            }
            let mut row = [0usize; 3];
            for (i, &w) in self.adj[v].iter().enumerate() {
                row[i] = *index
                    .get(&w)
                    .ok_or(GraphError::VertexOutOfRange(w, keep.len()))?;
            }
            rotation.push(row);
        }
        Ok((
            PlanarCubicGraph::build_from_rotation(rotation)?,
            keep.to_vec(),
        ))
    }
}
