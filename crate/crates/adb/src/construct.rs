//! Construction and reduction of annular decomposable graphs.
//!
//! Everything here is built from one primitive: inserting a quadrilateral
//! across two edges of a common face ([`alpha_insert`]). The cube is the base
//! case, random generation is a recorded sequence of insertions, and
//! [`reduce_to_b0`] inverts such a sequence step by step.

use crate::annular::{decompose, face_partition, AnnularEmbedding, AnnularError, AnnulusKind};
use crate::graph::{GraphError, PlanarCubicGraph};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("the two edges do not lie on the chosen face")]
    EdgesNotCofacial,
    #[error("the two edges coincide or share a vertex")]
    DegenerateStep,
    #[error("odd gap between the edges would destroy bipartiteness")]
    OddGap,
    #[error("quad cannot be removed by an inverse insertion")]
    NotAlphaRemovable,
    #[error("site is not usable for a quad insertion")]
    InvalidSite,
    #[error("infeasible parameters: {0}")]
    InfeasibleSpec(String),
    #[error("reduction failed: {0}")]
    NotReducible(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Annular(#[from] AnnularError),
}

/// The 8-vertex cube, the smallest graph of the family. Vertices 0..4 form
/// the inner quad, 4..8 the outer quad, and vertex `i` is joined to `i + 4`.
pub fn b0() -> PlanarCubicGraph {
    let rotation = vec![
        [4, 1, 3],
        [0, 5, 2],
        [3, 1, 6],
        [0, 2, 7],
        [5, 0, 7],
        [4, 6, 1],
        [7, 2, 5],
        [4, 3, 6],
    ];
    PlanarCubicGraph::build_from_rotation(rotation).expect("cube rotation is valid")
}

/// Deterministic 64-bit generator: a counter passed through the splitmix64
/// finalizer (additive constant 0x9E3779B97F4A7C15, xorshift-multiply mix).
/// Hand rolled so recipes replay identically on every platform and toolchain.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..n`. The modulo bias is irrelevant at the sizes
    /// used here and keeps replay trivially portable.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    /// A sorted random `k`-subset of `0..n`.
    pub fn subset(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below(n - i);
            pool.swap(i, j);
        }
        let mut out = pool[..k].to_vec();
        out.sort_unstable();
        out
    }
}

/// One recorded quad insertion: the target face id and the two directed
/// edges, both oriented along the face walk at the time of the step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaStep {
    pub face: usize,
    pub e1: (usize, usize),
    pub e2: (usize, usize),
}

/// Result of a single insertion. The four new vertices are, in order, the
/// subdivision points `x1, x2` of `e1` and `y1, y2` of `e2`; the new quad is
/// `x1 x2 y1 y2`.
#[derive(Debug, Clone)]
pub struct AlphaResult {
    pub graph: PlanarCubicGraph,
    pub new_vertices: [usize; 4],
    pub quad_face: usize,
}

/// Inserts a quadrilateral across edges `e1` and `e2` of face `face`.
///
/// Both edges are taken undirected and re-oriented along the face walk. Each
/// is subdivided twice (`a x1 x2 b` and `c y1 y2 d`) and the subdivision
/// points are joined crosswise (`x1 y2`, `x2 y1`), which splits the face into
/// the new quad and two side faces. Both gaps of the walk between the edges
/// must contain an even number of vertices, otherwise the result would carry
/// an odd cycle.
pub fn alpha_insert(
    g: &PlanarCubicGraph,
    face: usize,
    e1: (usize, usize),
    e2: (usize, usize),
) -> Result<AlphaResult, ConstructError> {
    if face >= g.faces().len() {
        return Err(ConstructError::EdgesNotCofacial);
    }
    let walk = &g.face(face).boundary;
    let n = walk.len();
    let locate = |e: (usize, usize)| -> Option<usize> {
        (0..n).find(|&i| {
            let p = (walk[i], walk[(i + 1) % n]);
            p == e || (p.1, p.0) == e
        })
    };
    let i = locate(e1).ok_or(ConstructError::EdgesNotCofacial)?;
    let j = locate(e2).ok_or(ConstructError::EdgesNotCofacial)?;
    if i == j {
        return Err(ConstructError::DegenerateStep);
    }
    let (a, b) = (walk[i], walk[(i + 1) % n]);
    let (c, d) = (walk[j], walk[(j + 1) % n]);
    if a == c || a == d || b == c || b == d {
        return Err(ConstructError::DegenerateStep);
    }
    // vertices strictly between b..c and between d..a along the walk
    let gap1 = (j + 2 * n - i - 2) % n;
    let gap2 = (i + 2 * n - j - 2) % n;
    if gap1 % 2 != 0 || gap2 % 2 != 0 {
        return Err(ConstructError::OddGap);
    }

    let v = g.vertex_count();
    let (x1, x2, y1, y2) = (v, v + 1, v + 2, v + 3);
    let mut rot: Vec<[usize; 3]> = g.rotation().to_vec();
    let replace = |rot: &mut Vec<[usize; 3]>, at: usize, old: usize, new: usize| {
        let slot = rot[at].iter().position(|&w| w == old).unwrap();
        rot[at][slot] = new;
    };
    replace(&mut rot, a, b, x1);
    replace(&mut rot, b, a, x2);
    replace(&mut rot, c, d, y1);
    replace(&mut rot, d, c, y2);
    rot.push([x2, y2, a]);
    rot.push([b, y1, x1]);
    rot.push([y2, x2, c]);
    rot.push([d, x1, y1]);

    let graph = PlanarCubicGraph::build_from_rotation(rot)?;
    let quad_face = graph.face_of_dart(x1, x2);
    debug_assert_eq!(graph.face(quad_face).len(), 4);
    Ok(AlphaResult {
        graph,
        new_vertices: [x1, x2, y1, y2],
        quad_face,
    })
}

/// Removes the quad face `quad` by undoing an insertion, returning the
/// reduced graph and, per new vertex id, the id it had before compaction.
///
/// The quad must have four distinct vertices, each with exactly one
/// neighbour off the quad. Two reconnection pairings are conceivable (the
/// two pairs of opposite quad edges); the canonical choice pairs the
/// smallest quad vertex with the smaller of its two quad neighbours, which
/// is the pairing that undoes a fresh [`alpha_insert`]. If that pairing
/// produces an invalid graph the other one is tried.
pub fn inverse_alpha(
    g: &PlanarCubicGraph,
    quad: usize,
) -> Result<(PlanarCubicGraph, Vec<usize>), ConstructError> {
    let boundary = g.face(quad).boundary.clone();
    if boundary.len() != 4 || boundary.iter().collect::<HashSet<_>>().len() != 4 {
        return Err(ConstructError::NotAlphaRemovable);
    }
    let p_idx = (0..4).min_by_key(|&i| boundary[i]).unwrap();
    let prev = boundary[(p_idx + 3) % 4];
    let next = boundary[(p_idx + 1) % 4];
    // Pairing 0 joins each quad vertex with its walk successor starting at
    // the canonical vertex; pairing 1 starts one step earlier.
    let first = if next < prev { 0 } else { 1 };
    for pairing in [first, 1 - first] {
        let pairs = [
            (
                boundary[(p_idx + 4 - pairing) % 4],
                boundary[(p_idx + 5 - pairing) % 4],
            ),
            (
                boundary[(p_idx + 6 - pairing) % 4],
                boundary[(p_idx + 7 - pairing) % 4],
            ),
        ];
        if let Ok(done) = inverse_alpha_on(g, &boundary, pairs) {
            return Ok(done);
        }
    }
    Err(ConstructError::NotAlphaRemovable)
}

/// Collapses the quad with the explicit reconnection pairing: for each pair
/// `(p, q)` of quad vertices, their off-quad neighbours are joined by an
/// edge replacing the removed attachment edges.
pub(crate) fn inverse_alpha_on(
    g: &PlanarCubicGraph,
    quad: &[usize],
    pairs: [(usize, usize); 2],
) -> Result<(PlanarCubicGraph, Vec<usize>), ConstructError> {
    let on_quad: HashSet<usize> = quad.iter().copied().collect();
    let stub = |v: usize| -> Result<usize, ConstructError> {
        let outs: Vec<usize> = g
            .neighbors(v)
            .into_iter()
            .filter(|w| !on_quad.contains(w))
            .collect();
        if outs.len() == 1 {
            Ok(outs[0])
        } else {
            Err(ConstructError::NotAlphaRemovable)
        }
    };
    let mut rot: Vec<[usize; 3]> = g.rotation().to_vec();
    for (p, q) in pairs {
        let (sp, sq) = (stub(p)?, stub(q)?);
        if sp == sq || on_quad.contains(&sp) || on_quad.contains(&sq) || g.has_edge(sp, sq) {
            return Err(ConstructError::NotAlphaRemovable);
        }
        let slot_p = rot[sp].iter().position(|&w| w == p).unwrap();
        rot[sp][slot_p] = sq;
        let slot_q = rot[sq].iter().position(|&w| w == q).unwrap();
        rot[sq][slot_q] = sp;
    }
    // compact away the quad vertices
    let mut old_ids = Vec::with_capacity(rot.len() - 4);
    let mut new_id = vec![usize::MAX; rot.len()];
    for v in 0..rot.len() {
        if !on_quad.contains(&v) {
            new_id[v] = old_ids.len();
            old_ids.push(v);
        }
    }
    let compact: Vec<[usize; 3]> = old_ids
        .iter()
        .map(|&v| {
            let r = rot[v];
            [new_id[r[0]], new_id[r[1]], new_id[r[2]]]
        })
        .collect();
    let out = PlanarCubicGraph::build_from_rotation(compact)?;
    let euler = out.vertex_count() as i64 - out.edge_count() as i64 + out.faces().len() as i64;
    if !out.is_connected() || euler != 2 {
        return Err(ConstructError::NotAlphaRemovable);
    }
    Ok((out, old_ids))
}

/// A replayable construction: the parameters plus every insertion in order,
/// with vertex ids as they exist at the moment of the step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionRecipe {
    pub seed: u64,
    pub kinds: Vec<AnnulusKind>,
    pub faces: Vec<usize>,
    pub steps: Vec<AlphaStep>,
}

impl ConstructionRecipe {
    /// Re-runs every step from the cube.
    pub fn replay(&self) -> Result<PlanarCubicGraph, ConstructError> {
        let mut g = b0();
        for step in &self.steps {
            g = alpha_insert(&g, step.face, step.e1, step.e2)?.graph;
        }
        Ok(g)
    }
}

/// A generated graph together with its annular embedding and the recipe that
/// rebuilds it.
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: PlanarCubicGraph,
    pub embedding: AnnularEmbedding,
    pub recipe: ConstructionRecipe,
}

/// Lexicographic minimum over all starting darts and both orientations of a
/// breadth-first relabelling of the rotation system. Two embedded graphs are
/// equivalent (up to relabelling and reflection) exactly when these agree.
pub fn canonical_form(g: &PlanarCubicGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut best: Option<Vec<usize>> = None;
    for start in 0..n {
        for slot in 0..3 {
            for mirror in [false, true] {
                let code = relabel_code(g, start, slot, mirror);
                if best.as_ref().map_or(true, |b| code < *b) {
                    best = Some(code);
                }
            }
        }
    }
    best.unwrap_or_default()
}

pub fn is_isomorphic(a: &PlanarCubicGraph, b: &PlanarCubicGraph) -> bool {
    a.vertex_count() == b.vertex_count() && canonical_form(a) == canonical_form(b)
}

fn relabel_code(g: &PlanarCubicGraph, start: usize, slot: usize, mirror: bool) -> Vec<usize> {
    relabel_with_order(g, start, slot, mirror).0
}

fn relabel_with_order(
    g: &PlanarCubicGraph,
    start: usize,
    slot: usize,
    mirror: bool,
) -> (Vec<usize>, Vec<usize>) {
    let n = g.vertex_count();
    let mut label = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    // entry[v] = the neighbour from which v was first reached; the rotation
    // at v is read starting there, forwards or backwards.
    let mut entry = vec![usize::MAX; n];
    label[start] = 0;
    order.push(start);
    entry[start] = g.neighbors(start)[slot];
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let rot = g.neighbors(v);
        let e = rot.iter().position(|&w| w == entry[v]).unwrap();
        for k in 0..3 {
            let w = if mirror {
                rot[(e + 3 - k) % 3]
            } else {
                rot[(e + k) % 3]
            };
            if label[w] == usize::MAX {
                label[w] = order.len();
                entry[w] = v;
                order.push(w);
            }
        }
    }
    if order.len() < n {
        // disconnected graphs never match a connected one; encode size only
        return (vec![usize::MAX], order);
    }
    let mut code = Vec::with_capacity(3 * n);
    for &v in &order {
        let rot = g.neighbors(v);
        let e = rot.iter().position(|&w| w == entry[v]).unwrap();
        for k in 0..3 {
            let w = if mirror {
                rot[(e + 3 - k) % 3]
            } else {
                rot[(e + k) % 3]
            };
            code.push(label[w]);
        }
    }
    (code, order)
}

/// The face whose boundary is exactly the given vertex set.
fn face_with_set(g: &PlanarCubicGraph, set: &BTreeSet<usize>) -> Option<usize> {
    g.faces()
        .iter()
        .position(|f| f.boundary.len() == set.len() && f.boundary.iter().all(|v| set.contains(v)))
}

/// Builds a random graph with the requested annulus kinds and face counts.
///
/// Construction happens in two phases. First the cube is grown into a prism
/// with `faces[0]` cells by splitting random cells. Then each further
/// annulus is attached outside the current boundary cycle: the cycle edges
/// alternate between two classes according to the face below, a random
/// subset of one class is chosen as attachment sites, and one insertion per
/// site builds the ring of new faces. Which class hosts the sites is what
/// makes an annulus `Block` (over the quad faces) or `Ring` (over the
/// others). Every insertion is recorded, so the recipe replays to the
/// identical rotation system.
pub fn generate_adbac(
    seed: u64,
    kinds: &[AnnulusKind],
    faces: &[usize],
) -> Result<Generated, ConstructError> {
    let x = kinds.len();
    if x == 0 || faces.len() != x {
        return Err(ConstructError::InfeasibleSpec(
            "need one face count per annulus".into(),
        ));
    }
    for &f in faces {
        if f < 4 || f % 2 != 0 {
            return Err(ConstructError::InfeasibleSpec(format!(
                "face count {f} is not an even number of at least four"
            )));
        }
    }
    if faces.windows(2).any(|w| w[1] > w[0]) {
        return Err(ConstructError::InfeasibleSpec(
            "face counts must be non-increasing: requested attachments exceed available sites"
                .into(),
        ));
    }
    if x <= 2 {
        if kinds.iter().any(|&k| k != AnnulusKind::Block) {
            return Err(ConstructError::InfeasibleSpec(
                "with at most two annuli every kind reads as Block".into(),
            ));
        }
    } else if kinds[0] != kinds[2] || kinds[1] != kinds[2] {
        return Err(ConstructError::InfeasibleSpec(
            "the three innermost annuli share one kind".into(),
        ));
    }

    let mut rng = SplitMix64::new(seed);
    let mut g = b0();
    let mut steps = Vec::new();
    let mut inner: BTreeSet<usize> = [0, 1, 2, 3].into();
    let mut outer: BTreeSet<usize> = [4, 5, 6, 7].into();

    // phase one: widen the prism one cell at a time
    for _ in 0..(faces[0] - 4) / 2 {
        let fi = face_with_set(&g, &inner).expect("inner cycle bounds a face");
        let fe = face_with_set(&g, &outer).expect("outer cycle bounds a face");
        let cells: Vec<usize> = (0..g.faces().len()).filter(|&f| f != fi && f != fe).collect();
        let cell = cells[rng.below(cells.len())];
        let e1 = g
            .face(cell)
            .edges()
            .find(|&(u, v)| inner.contains(&u) && inner.contains(&v))
            .expect("cell has an inner edge");
        let e2 = g
            .face(cell)
            .edges()
            .find(|&(u, v)| outer.contains(&u) && outer.contains(&v))
            .expect("cell has an outer edge");
        let res = alpha_insert(&g, cell, e1, e2)?;
        steps.push(AlphaStep { face: cell, e1, e2 });
        inner.insert(res.new_vertices[0]);
        inner.insert(res.new_vertices[1]);
        outer.insert(res.new_vertices[2]);
        outer.insert(res.new_vertices[3]);
        g = res.graph;
    }

    // phase two: attach annulus k outside the current boundary cycle
    for k in 2..=x {
        let fe = face_with_set(&g, &outer).expect("boundary cycle bounds the outer face");
        let walk = g.face(fe).boundary.clone();
        let m = walk.len();
        let below_of = |g: &PlanarCubicGraph, fe: usize, u: usize, v: usize| {
            let (f1, f2) = g.faces_of_edge(u, v);
            if f1 == fe {
                f2
            } else {
                f1
            }
        };
        let candidate_positions: Vec<usize> = if k == 2 {
            // all cells are quads; take the alternation class holding the
            // smallest face id
            let anchor = (0..m)
                .min_by_key(|&i| below_of(&g, fe, walk[i], walk[(i + 1) % m]))
                .unwrap();
            (0..m).filter(|i| i % 2 == anchor % 2).collect()
        } else {
            let want_quad = kinds[k - 1] == AnnulusKind::Block;
            (0..m)
                .filter(|&i| {
                    let below = below_of(&g, fe, walk[i], walk[(i + 1) % m]);
                    (g.face(below).len() == 4) == want_quad
                })
                .collect()
        };
        debug_assert_eq!(candidate_positions.len(), m / 2);
        let chosen = rng.subset(candidate_positions.len(), faces[k - 1] / 2);
        let sites: Vec<(usize, usize)> = chosen
            .iter()
            .map(|&j| {
                let i = candidate_positions[j];
                (walk[i], walk[(i + 1) % m])
            })
            .collect();

        // the first two sites build the initial pair of quad faces and the
        // new boundary cycle
        let ra = alpha_insert(&g, fe, sites[0], sites[1])?;
        steps.push(AlphaStep {
            face: fe,
            e1: sites[0],
            e2: sites[1],
        });
        let [x1, x2, y1, y2] = ra.new_vertices;
        g = ra.graph;
        let rb = alpha_insert(&g, ra.quad_face, (x2, y1), (y2, x1))?;
        steps.push(AlphaStep {
            face: ra.quad_face,
            e1: (x2, y1),
            e2: (y2, x1),
        });
        let mut ck: BTreeSet<usize> = rb.new_vertices.into_iter().collect();
        g = rb.graph;

        // one insertion per remaining site widens the cycle by two
        for &s in &sites[2..] {
            let (fa, fb) = g.faces_of_edge(s.0, s.1);
            let touches = |f: usize| g.face(f).boundary.iter().any(|v| ck.contains(v));
            let target = if touches(fa) { fa } else { fb };
            let top = g
                .face(target)
                .edges()
                .find(|&(u, v)| ck.contains(&u) && ck.contains(&v))
                .expect("growth face has one boundary-cycle edge");
            let rr = alpha_insert(&g, target, s, top)?;
            steps.push(AlphaStep {
                face: target,
                e1: s,
                e2: top,
            });
            ck.insert(rr.new_vertices[2]);
            ck.insert(rr.new_vertices[3]);
            g = rr.graph;
        }
        outer = ck;
    }

    let fi = face_with_set(&g, &inner).expect("inner face survives");
    let fe = face_with_set(&g, &outer).expect("outer face survives");
    let embedding = decompose(&g, fi, fe)?;
    debug_assert!(g.check_barnette().is_barnette());
    Ok(Generated {
        recipe: ConstructionRecipe {
            seed,
            kinds: kinds.to_vec(),
            faces: faces.to_vec(),
            steps,
        },
        embedding,
        graph: g,
    })
}

/// Inserts a quad straddling the edge `(u, v)`: the insertion runs across
/// the two edges flanking `(u, v)` inside one incident face of length at
/// least six (the smaller face id when both qualify). Unlike a free-form
/// insertion this never breaks Hamiltonicity, which makes it the safe
/// local move for enlarging a graph.
pub fn beta_insert(
    g: &PlanarCubicGraph,
    u: usize,
    v: usize,
) -> Result<(AlphaResult, AlphaStep), ConstructError> {
    if u >= g.vertex_count() || !g.has_edge(u, v) {
        return Err(ConstructError::InvalidSite);
    }
    let (fa, fb) = g.faces_of_edge(u, v);
    let face = [fa, fb]
        .into_iter()
        .filter(|&f| g.face(f).len() >= 6)
        .min()
        .ok_or(ConstructError::InvalidSite)?;
    let walk = &g.face(face).boundary;
    let n = walk.len();
    let i = (0..n)
        .find(|&i| {
            let p = (walk[i], walk[(i + 1) % n]);
            p == (u, v) || p == (v, u)
        })
        .expect("edge lies on its face");
    let e1 = (walk[(i + n - 1) % n], walk[i]);
    let e2 = (walk[(i + 1) % n], walk[(i + 2) % n]);
    let step = AlphaStep { face, e1, e2 };
    let res = alpha_insert(g, face, e1, e2)?;
    Ok((res, step))
}

/// Joins the graph with a mirrored copy of itself across the outer face.
///
/// Two outer-cycle edges of opposite parity are each subdivided twice on
/// both copies and laddered together, forming a seam annulus of two quads
/// and two wide faces. The result still decomposes, with twice the depth
/// plus one, and every face stays even because the mirrored gaps pair up.
/// It is no longer annular connected though: the gaps between the two seam
/// sites are odd on each copy, so cutting along the outermost annulus of
/// one copy suppresses an odd number of vertices per wide face and leaves a
/// piece with odd faces. Needs an outer cycle of length at least six.
pub fn join_non_ac(
    g: &PlanarCubicGraph,
    emb: &AnnularEmbedding,
) -> Result<(PlanarCubicGraph, AnnularEmbedding), ConstructError> {
    let n = g.vertex_count();
    let walk = g.face(emb.outer_face).boundary.clone();
    let m = walk.len();
    if m < 6 {
        return Err(ConstructError::InfeasibleSpec(
            "outer cycle too short to join without creating odd faces".into(),
        ));
    }
    // seam sites at positions 0 and 3: opposite parity, so the two arcs
    // between them have odd length
    let (u1, u2) = (walk[0], walk[1]);
    let (u3, u4) = (walk[3], walk[4]);

    let mut rot: Vec<[usize; 3]> = g.rotation().to_vec();
    for v in 0..n {
        let r = g.neighbors(v);
        rot.push([r[2] + n, r[1] + n, r[0] + n]);
    }
    let (a1, a2, d1, d2) = (2 * n, 2 * n + 1, 2 * n + 2, 2 * n + 3);
    let (b1, b2, e1, e2) = (2 * n + 4, 2 * n + 5, 2 * n + 6, 2 * n + 7);
    let (u1h, u2h, u3h, u4h) = (u1 + n, u2 + n, u3 + n, u4 + n);
    let replace = |rot: &mut Vec<[usize; 3]>, at: usize, old: usize, new: usize| {
        let slot = rot[at].iter().position(|&w| w == old).unwrap();
        rot[at][slot] = new;
    };
    replace(&mut rot, u1, u2, a1);
    replace(&mut rot, u2, u1, a2);
    replace(&mut rot, u3, u4, b1);
    replace(&mut rot, u4, u3, b2);
    replace(&mut rot, u1h, u2h, d2);
    replace(&mut rot, u2h, u1h, d1);
    replace(&mut rot, u3h, u4h, e2);
    replace(&mut rot, u4h, u3h, e1);
    // each new vertex lists its cycle neighbours in outer-walk order (which
    // is reversed on the mirror copy) followed by its ladder edge
    rot.push([u1, a2, d2]);
    rot.push([a1, u2, d1]);
    rot.push([u2h, d2, a2]);
    rot.push([d1, u1h, a1]);
    rot.push([u3, b2, e2]);
    rot.push([b1, u4, e1]);
    rot.push([u4h, e2, b2]);
    rot.push([e1, u3h, b1]);

    let k = PlanarCubicGraph::build_from_rotation(rot)?;
    let fi_set: BTreeSet<usize> = g.face(emb.inner_face).boundary.iter().copied().collect();
    let fe_set: BTreeSet<usize> = fi_set.iter().map(|&v| v + n).collect();
    let fi = face_with_set(&k, &fi_set).ok_or(ConstructError::InvalidSite)?;
    let fe = face_with_set(&k, &fe_set).ok_or(ConstructError::InvalidSite)?;
    let emb2 = decompose(&k, fi, fe)?;
    Ok((k, emb2))
}

/// One undone insertion. `quad` is the removed face in walk order and
/// `stubs[i]` is the off-quad neighbour of `quad[i]`, both in the ids of the
/// graph before the step; `pair_starts` gives the two quad edges whose stub
/// pairs were reconnected; `face_set` is the boundary of the face the quad
/// dissolved into, in the compacted ids after the step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub quad: [usize; 4],
    pub stubs: [usize; 4],
    pub pair_starts: [usize; 2],
    pub face_set: Vec<usize>,
}

/// A full reduction: the steps down to the cube, the terminal graph, and
/// the forward insertions that rebuild an isomorphic copy from [`b0`].
#[derive(Debug, Clone)]
pub struct Reduction {
    pub steps: Vec<ReductionStep>,
    pub terminal: PlanarCubicGraph,
    pub replay: Vec<AlphaStep>,
}

struct ReduceState {
    g: PlanarCubicGraph,
    fi: BTreeSet<usize>,
    fe: BTreeSet<usize>,
    steps: Vec<ReductionStep>,
}

impl ReduceState {
    /// Collapses the quad with the given boundary, pairing the edges that
    /// start at `pair_starts`, and updates the tracked inner and outer face
    /// sets through the id compaction.
    fn collapse(&mut self, boundary: &[usize], pair_starts: [usize; 2]) -> Result<(), ConstructError> {
        let quad: [usize; 4] = boundary.try_into().map_err(|_| {
            ConstructError::NotReducible("collapse target is not a quad".into())
        })?;
        let on_quad: BTreeSet<usize> = quad.iter().copied().collect();
        let stub = |v: usize| -> Result<usize, ConstructError> {
            self.g
                .neighbors(v)
                .into_iter()
                .find(|w| !on_quad.contains(w))
                .ok_or_else(|| ConstructError::NotReducible(format!("vertex {v} has no stub")))
        };
        let stubs = [stub(quad[0])?, stub(quad[1])?, stub(quad[2])?, stub(quad[3])?];
        let pairs = pair_starts
            .map(|ps| (quad[ps], quad[(ps + 1) % 4]));
        let (g2, old_ids) = inverse_alpha_on(&self.g, &quad, pairs)
            .map_err(|e| ConstructError::NotReducible(format!("collapse failed: {e}")))?;
        let phi: HashMap<usize, usize> = old_ids
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        let restored: Vec<(usize, usize)> = pair_starts
            .iter()
            .map(|&ps| {
                (
                    phi[&stubs[ps]],
                    phi[&stubs[(ps + 1) % 4]],
                )
            })
            .collect();
        let (fa, fb) = g2.faces_of_edge(restored[0].0, restored[0].1);
        let merged = if g2.face(fa).contains_edge(restored[1].0, restored[1].1) {
            fa
        } else {
            fb
        };
        let mut face_set: Vec<usize> = g2.face(merged).boundary.clone();
        face_set.sort_unstable();
        let remap = |set: &BTreeSet<usize>| -> BTreeSet<usize> {
            if set == &on_quad {
                face_set.iter().copied().collect()
            } else {
                set.iter()
                    .filter(|v| !on_quad.contains(v))
                    .map(|v| phi[v])
                    .collect()
            }
        };
        self.fi = remap(&self.fi);
        self.fe = remap(&self.fe);
        self.steps.push(ReductionStep {
            quad,
            stubs,
            pair_starts,
            face_set,
        });
        self.g = g2;
        Ok(())
    }
}

/// Peels the graph down to the cube by undoing insertions: the quads of the
/// outermost annulus are collapsed one by one, then the last four faces of
/// the annulus are absorbed in two final collapses, and the resulting
/// shallower graph is treated the same way until only a prism remains and
/// shrinks cell by cell. A second pass replays the inverse sequence forward
/// from the cube, tracking an isomorphism, which yields a recipe whose
/// replay is isomorphic to the input.
pub fn reduce_to_b0(
    g0: &PlanarCubicGraph,
    emb0: &AnnularEmbedding,
) -> Result<Reduction, ConstructError> {
    let base = b0();
    let mut st = ReduceState {
        g: g0.clone(),
        fi: g0.face(emb0.inner_face).boundary.iter().copied().collect(),
        fe: g0.face(emb0.outer_face).boundary.iter().copied().collect(),
        steps: Vec::new(),
    };

    loop {
        if st.g.vertex_count() == 8 {
            if !is_isomorphic(&st.g, &base) {
                return Err(ConstructError::NotReducible(
                    "terminal graph is not the cube".into(),
                ));
            }
            break;
        }
        let fi = face_with_set(&st.g, &st.fi)
            .ok_or_else(|| ConstructError::NotReducible("lost the inner face".into()))?;
        let fe = face_with_set(&st.g, &st.fe)
            .ok_or_else(|| ConstructError::NotReducible("lost the outer face".into()))?;
        let emb = decompose(&st.g, fi, fe)
            .map_err(|e| ConstructError::NotReducible(format!("decomposition failed: {e}")))?;
        let x = emb.depth();

        if x == 1 {
            // shrink the prism: collapse the smallest cell
            let cell = (0..st.g.faces().len())
                .filter(|&f| f != fi && f != fe)
                .min()
                .unwrap();
            if st.g.face(cell).len() != 4 {
                return Err(ConstructError::NotReducible(
                    "single annulus is not a prism".into(),
                ));
            }
            let boundary = st.g.face(cell).boundary.clone();
            let ps = pair_start_in(&boundary, &st.fi)?;
            st.collapse(&boundary, [ps, (ps + 2) % 4])?;
            continue;
        }

        let ann = emb.annulus(x).clone();
        if ann.faces.len() > 4 {
            // remove one quad of the outer annulus
            let part = face_partition(&st.g, &emb, x)
                .map_err(|e| ConstructError::NotReducible(format!("outer annulus: {e}")))?;
            let rung = *part.f1.first().ok_or_else(|| {
                ConstructError::NotReducible("outer annulus has no quads".into())
            })?;
            let boundary = st.g.face(rung).boundary.clone();
            let inner_set: BTreeSet<usize> = ann.inner.iter().copied().collect();
            let ps = pair_start_in(&boundary, &inner_set)?;
            st.collapse(&boundary, [ps, (ps + 2) % 4])?;
            continue;
        }

        // four faces left: collapse the outer face, then the quad it leaves
        let boundary = st.g.face(fe).boundary.clone();
        if boundary.len() != 4 {
            return Err(ConstructError::NotReducible(
                "outer cycle of a four-face annulus is not a quad".into(),
            ));
        }
        let mut ps = None;
        for i in 0..4 {
            let (u, v) = (boundary[i], boundary[(i + 1) % 4]);
            let (fa, fb) = st.g.faces_of_edge(u, v);
            let other = if fa == fe { fb } else { fa };
            if st.g.face(other).len() >= 6 {
                ps = Some(i);
                break;
            }
        }
        let ps = ps.ok_or_else(|| {
            ConstructError::NotReducible("no wide face borders the outer quad".into())
        })?;
        st.collapse(&boundary, [ps, (ps + 2) % 4])?;

        // the dissolved region is a quad again; reconnecting its remaining
        // two edges restores the previous outer face
        let step = st.steps.last().unwrap().clone();
        let mid: BTreeSet<usize> = step.face_set.iter().copied().collect();
        let mid_face = face_with_set(&st.g, &mid).ok_or_else(|| {
            ConstructError::NotReducible("intermediate quad went missing".into())
        })?;
        let boundary = st.g.face(mid_face).boundary.clone();
        if boundary.len() != 4 {
            return Err(ConstructError::NotReducible(
                "intermediate face is not a quad".into(),
            ));
        }
        // the two edges restored a moment ago must stay; pair the others
        let restored: Vec<(usize, usize)> = {
            let s = &step;
            let phi = |v: usize| v - s.quad.iter().filter(|&&q| q < v).count();
            s.pair_starts
                .iter()
                .map(|&i| (phi(s.stubs[i]), phi(s.stubs[(i + 1) % 4])))
                .collect()
        };
        let is_restored = |u: usize, v: usize| {
            restored
                .iter()
                .any(|&(a, b)| (a, b) == (u, v) || (b, a) == (u, v))
        };
        let ps = (0..4)
            .find(|&i| !is_restored(boundary[i], boundary[(i + 1) % 4]))
            .unwrap();
        let ps2 = (ps + 2) % 4;
        if is_restored(boundary[ps2], boundary[(ps2 + 1) % 4]) {
            return Err(ConstructError::NotReducible(
                "intermediate quad pairing is inconsistent".into(),
            ));
        }
        st.collapse(&boundary, [ps, ps2])?;
    }

    // forward pass: rebuild from the cube, carrying an isomorphism between
    // the reduction side and the replay side
    let mut sigma = isomorphism(&st.g, &base).ok_or_else(|| {
        ConstructError::NotReducible("no isomorphism onto the cube".into())
    })?;
    let mut rg = base;
    let mut replay = Vec::new();
    for step in st.steps.iter().rev() {
        let phi = |v: usize| v - step.quad.iter().filter(|&&q| q < v).count();
        let e = |i: usize| -> (usize, usize) {
            (
                sigma[phi(step.stubs[i])],
                sigma[phi(step.stubs[(i + 1) % 4])],
            )
        };
        let e1 = e(step.pair_starts[0]);
        let e2 = e(step.pair_starts[1]);
        let want: BTreeSet<usize> = step.face_set.iter().map(|&v| sigma[v]).collect();
        let face = face_with_set(&rg, &want).ok_or_else(|| {
            ConstructError::NotReducible("replay lost track of the target face".into())
        })?;
        let res = alpha_insert(&rg, face, e1, e2)
            .map_err(|err| ConstructError::NotReducible(format!("replay insertion: {err}")))?;
        replay.push(AlphaStep { face, e1, e2 });

        let mut next = vec![usize::MAX; res.graph.vertex_count()];
        for v in 0..res.graph.vertex_count() {
            if !step.quad.contains(&v) {
                next[v] = sigma[phi(v)];
            }
        }
        for (i, &qv) in step.quad.iter().enumerate() {
            let attach = sigma[phi(step.stubs[i])];
            let img = res
                .new_vertices
                .into_iter()
                .find(|&nv| res.graph.has_edge(nv, attach))
                .ok_or_else(|| {
                    ConstructError::NotReducible("replay quad does not line up".into())
                })?;
            next[qv] = img;
        }
        sigma = next;
        rg = res.graph;
    }
    // sanity: sigma must carry the input onto the replayed graph
    let ok = (0..g0.vertex_count()).all(|v| {
        g0.neighbors(v)
            .into_iter()
            .all(|w| rg.has_edge(sigma[v], sigma[w]))
    });
    if !ok || rg.vertex_count() != g0.vertex_count() {
        return Err(ConstructError::NotReducible(
            "replayed graph diverged from the input".into(),
        ));
    }

    Ok(Reduction {
        steps: st.steps,
        terminal: st.g,
        replay,
    })
}

/// Index of the quad edge whose two endpoints both lie in `set`.
fn pair_start_in(boundary: &[usize], set: &BTreeSet<usize>) -> Result<usize, ConstructError> {
    (0..4)
        .find(|&i| set.contains(&boundary[i]) && set.contains(&boundary[(i + 1) % 4]))
        .ok_or_else(|| ConstructError::NotReducible("quad has no edge on the expected cycle".into()))
}

/// An explicit vertex map realising an equivalence of embeddings (possibly
/// reflecting), or `None` if the graphs differ.
pub fn isomorphism(a: &PlanarCubicGraph, b: &PlanarCubicGraph) -> Option<Vec<usize>> {
    if a.vertex_count() != b.vertex_count() {
        return None;
    }
    let (code_b, order_b) = canonical_with_order(b);
    for start in 0..a.vertex_count() {
        for slot in 0..3 {
            for mirror in [false, true] {
                let (code_a, order_a) = relabel_with_order(a, start, slot, mirror);
                if code_a == code_b {
                    let mut map = vec![usize::MAX; a.vertex_count()];
                    for (label, &v) in order_a.iter().enumerate() {
                        map[v] = order_b[label];
                    }
                    return Some(map);
                }
            }
        }
    }
    None
}

fn canonical_with_order(g: &PlanarCubicGraph) -> (Vec<usize>, Vec<usize>) {
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for start in 0..g.vertex_count() {
        for slot in 0..3 {
            for mirror in [false, true] {
                let cand = relabel_with_order(g, start, slot, mirror);
                if best.as_ref().map_or(true, |b| cand.0 < b.0) {
                    best = Some(cand);
                }
            }
        }
    }
    best.unwrap_or_default()
}
