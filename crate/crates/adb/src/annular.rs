//! Annular decompositions.
//!
//! A decomposition splits the face set into an inner face, an outer face and
//! a sequence of annuli. Annulus `k` is a ring of faces lying between two
//! vertex-disjoint boundary cycles `C_{k-1}` and `C_k`; the cycles together
//! cover every vertex, and every remaining edge is a radial joining
//! consecutive cycles. [`decompose`] computes this layering by peeling faces
//! outward from the inner face and verifies each condition as it goes.

use crate::graph::{PlanarCubicGraph, RotationScratch};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnnularError {
    #[error("not an annular decomposition: {0}")]
    NotAnnular(String),
    #[error("face ring of annulus {0} is odd, no two-colouring exists")]
    OddFaceRing(usize),
    #[error("annulus {0} attaches to both face classes of the annulus below")]
    MixedAttachment(usize),
    #[error("annulus index out of range")]
    IndexOutOfRange,
}

/// Kind of one annulus: whether its attachment sites sit over the quad class
/// or the non-quad class of the annulus below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AnnulusKind {
    Ring,
    Block,
}

impl AnnulusKind {
    pub fn as_char(self) -> char {
        match self {
            AnnulusKind::Ring => 'R',
            AnnulusKind::Block => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'R' => Some(AnnulusKind::Ring),
            'B' => Some(AnnulusKind::Block),
            _ => None,
        }
    }
}

/// One annulus: its two boundary cycles in cyclic vertex order, the radial
/// edges joining them as `(inner vertex, outer vertex)`, and its face ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annulus {
    pub inner: Vec<usize>,
    pub outer: Vec<usize>,
    pub radial: Vec<(usize, usize)>,
    pub faces: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnularEmbedding {
    pub inner_face: usize,
    pub outer_face: usize,
    pub annuli: Vec<Annulus>,
}

impl AnnularEmbedding {
    /// Number of annuli.
    pub fn depth(&self) -> usize {
        self.annuli.len()
    }

    /// Annulus `k`, counted from 1 at the inner face.
    pub fn annulus(&self, k: usize) -> &Annulus {
        &self.annuli[k - 1]
    }

    /// The 1-based annulus containing face `f`, if `f` is neither the inner
    /// nor the outer face.
    pub fn annulus_of_face(&self, f: usize) -> Option<usize> {
        self.annuli
            .iter()
            .position(|a| a.faces.binary_search(&f).is_ok())
            .map(|i| i + 1)
    }
}

/// The two-colouring of an annulus face ring: faces alternate between `f1`
/// (the quad class, every face of reduced length four) and `f2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacePartition {
    pub f1: Vec<usize>,
    pub f2: Vec<usize>,
}

impl FacePartition {
    pub fn class_of(&self, f: usize) -> Option<u8> {
        if self.f1.binary_search(&f).is_ok() {
            Some(1)
        } else if self.f2.binary_search(&f).is_ok() {
            Some(2)
        } else {
            None
        }
    }
}

/// Orders the edge set of a single simple cycle into a vertex sequence, or
/// explains why it is not one.
fn trace_cycle(edges: &[(usize, usize)], what: &str) -> Result<Vec<usize>, AnnularError> {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(u, v) in edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    if adj.values().any(|l| l.len() != 2) {
        return Err(AnnularError::NotAnnular(format!(
            "{what} is not a disjoint union of cycles"
        )));
    }
    let start = *adj.keys().min().ok_or_else(|| {
        AnnularError::NotAnnular(format!("{what} is empty"))
    })?;
    let mut cycle = vec![start];
    let (mut prev, mut cur) = (start, adj[&start][0]);
    while cur != start {
        cycle.push(cur);
        let next = if adj[&cur][0] == prev {
            adj[&cur][1]
        } else {
            adj[&cur][0]
        };
        prev = cur;
        cur = next;
    }
    if cycle.len() != adj.len() {
        return Err(AnnularError::NotAnnular(format!(
            "{what} splits into several cycles"
        )));
    }
    Ok(cycle)
}

/// Computes the annular decomposition with the given inner and outer faces,
/// or reports the first structural condition that fails.
pub fn decompose(
    g: &PlanarCubicGraph,
    inner_face: usize,
    outer_face: usize,
) -> Result<AnnularEmbedding, AnnularError> {
    let nf = g.faces().len();
    if inner_face >= nf || outer_face >= nf {
        return Err(AnnularError::IndexOutOfRange);
    }
    if inner_face == outer_face {
        return Err(AnnularError::NotAnnular(
            "inner and outer face coincide".into(),
        ));
    }

    let mut in_region = vec![false; nf];
    in_region[inner_face] = true;
    let mut cycles: Vec<Vec<usize>> = vec![g.face(inner_face).boundary.clone()];
    let mut cycle_of_vertex: HashMap<usize, usize> = HashMap::new();
    for &v in &cycles[0] {
        cycle_of_vertex.insert(v, 0);
    }
    let mut annuli = Vec::new();

    loop {
        let current = cycles.last().unwrap().clone();
        let current_set: HashSet<usize> = current.iter().copied().collect();
        let mut layer = BTreeSet::new();
        for &v in &current {
            for w in g.neighbors(v) {
                let f = g.face_of_dart(v, w);
                if f != outer_face && !in_region[f] {
                    layer.insert(f);
                }
                let f = g.face_of_dart(w, v);
                if f != outer_face && !in_region[f] {
                    layer.insert(f);
                }
            }
        }
        if layer.is_empty() {
            break;
        }
        for &f in &layer {
            in_region[f] = true;
        }

        let boundary_edges: Vec<(usize, usize)> = g
            .edges()
            .into_iter()
            .filter(|&(u, v)| {
                let (f1, f2) = g.faces_of_edge(u, v);
                in_region[f1] != in_region[f2]
            })
            .collect();
        let k = cycles.len();
        let cycle = trace_cycle(&boundary_edges, &format!("boundary {k}"))?;
        for &v in &cycle {
            if cycle_of_vertex.insert(v, k).is_some() {
                return Err(AnnularError::NotAnnular(format!(
                    "boundary cycles {k} and earlier share vertex {v}"
                )));
            }
        }
        let cycle_set: HashSet<usize> = cycle.iter().copied().collect();

        let mut radial: Vec<(usize, usize)> = Vec::new();
        for &u in &current {
            for w in g.neighbors(u) {
                if cycle_set.contains(&w) {
                    radial.push((u, w));
                }
            }
        }
        radial.sort_unstable();
        if radial.is_empty() {
            return Err(AnnularError::NotAnnular(format!(
                "annulus {k} has no radial edges"
            )));
        }
        for &f in &layer {
            let b = &g.face(f).boundary;
            if !b.iter().any(|v| current_set.contains(v))
                || !b.iter().any(|v| cycle_set.contains(v))
            {
                return Err(AnnularError::NotAnnular(format!(
                    "face {f} of annulus {k} misses one of its boundary cycles"
                )));
            }
        }

        annuli.push(Annulus {
            inner: current,
            outer: cycle.clone(),
            radial,
            faces: layer.into_iter().collect(),
        });
        cycles.push(cycle);
    }

    if annuli.is_empty() {
        return Err(AnnularError::NotAnnular(
            "inner and outer face are adjacent".into(),
        ));
    }
    if in_region.iter().filter(|&&b| b).count() != nf - 1 {
        return Err(AnnularError::NotAnnular(
            "some faces are unreachable from the inner face".into(),
        ));
    }
    let last: BTreeSet<usize> = cycles.last().unwrap().iter().copied().collect();
    let outer_set: BTreeSet<usize> = g.face(outer_face).boundary.iter().copied().collect();
    if last != outer_set {
        return Err(AnnularError::NotAnnular(
            "outermost boundary does not bound the outer face".into(),
        ));
    }
    if cycle_of_vertex.len() != g.vertex_count() {
        return Err(AnnularError::NotAnnular(
            "some vertices lie on no boundary cycle".into(),
        ));
    }
    // every edge is either a cycle edge or a radial between consecutive cycles
    for (u, v) in g.edges() {
        let (cu, cv) = (cycle_of_vertex[&u], cycle_of_vertex[&v]);
        if cu == cv {
            let cyc = &cycles[cu];
            let iu = cyc.iter().position(|&w| w == u).unwrap();
            let iv = cyc.iter().position(|&w| w == v).unwrap();
            let d = (iu + cyc.len() - iv) % cyc.len();
            if d != 1 && d != cyc.len() - 1 {
                return Err(AnnularError::NotAnnular(format!(
                    "edge {u}-{v} is a chord of a boundary cycle"
                )));
            }
        } else if cu.abs_diff(cv) != 1 {
            return Err(AnnularError::NotAnnular(format!(
                "edge {u}-{v} skips a boundary cycle"
            )));
        }
    }

    Ok(AnnularEmbedding {
        inner_face,
        outer_face,
        annuli,
    })
}

/// Length of face `f` of annulus `k` not counting the outer-cycle vertices
/// that carry a radial edge into annulus `k + 1`. This is the length the
/// face has in the restriction where everything beyond the annulus is cut
/// away and the attachment points are suppressed.
fn reduced_length(
    g: &PlanarCubicGraph,
    f: usize,
    upper_sites: &HashSet<usize>,
) -> usize {
    let b = &g.face(f).boundary;
    b.len() - b.iter().filter(|v| upper_sites.contains(v)).count()
}

/// Splits the face ring of annulus `k` (1-based) into its two alternating
/// classes. `f1` is the class consisting of reduced-length-4 faces; when
/// both classes qualify the one containing the smallest face id is chosen.
pub fn face_partition(
    g: &PlanarCubicGraph,
    emb: &AnnularEmbedding,
    k: usize,
) -> Result<FacePartition, AnnularError> {
    if k == 0 || k > emb.depth() {
        return Err(AnnularError::IndexOutOfRange);
    }
    let ann = emb.annulus(k);
    let index: HashMap<usize, usize> = ann
        .faces
        .iter()
        .enumerate()
        .map(|(i, &f)| (f, i))
        .collect();
    let mut adj = vec![Vec::new(); ann.faces.len()];
    for &(u, v) in &ann.radial {
        let (f1, f2) = g.faces_of_edge(u, v);
        let (i, j) = match (index.get(&f1), index.get(&f2)) {
            (Some(&i), Some(&j)) => (i, j),
            _ => {
                return Err(AnnularError::NotAnnular(format!(
                    "radial edge {u}-{v} borders a face outside annulus {k}"
                )))
            }
        };
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut color = vec![2u8; ann.faces.len()];
    let mut stack = vec![0usize];
    color[0] = 0;
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if color[j] == 2 {
                color[j] = color[i] ^ 1;
                stack.push(j);
            } else if color[j] == color[i] {
                return Err(AnnularError::OddFaceRing(k));
            }
        }
    }

    let upper_sites: HashSet<usize> = if k < emb.depth() {
        emb.annulus(k + 1).radial.iter().map(|&(u, _)| u).collect()
    } else {
        HashSet::new()
    };
    let class: Vec<Vec<usize>> = (0..2)
        .map(|c| {
            ann.faces
                .iter()
                .enumerate()
                .filter(|&(i, _)| color[i] == c)
                .map(|(_, &f)| f)
                .collect()
        })
        .collect();
    let all_quads = |fs: &Vec<usize>| {
        !fs.is_empty() && fs.iter().all(|&f| reduced_length(g, f, &upper_sites) == 4)
    };
    let f1_is_zero = match (all_quads(&class[0]), all_quads(&class[1])) {
        (true, false) => true,
        (false, true) => false,
        // both classes are quad rings; break the tie by smallest face id
        (true, true) => class[0].iter().min() < class[1].iter().min(),
        (false, false) => {
            return Err(AnnularError::NotAnnular(format!(
                "annulus {k} has no class of reduced quadrilaterals"
            )))
        }
    };
    let (a, b) = if f1_is_zero { (0, 1) } else { (1, 0) };
    Ok(FacePartition {
        f1: class[a].clone(),
        f2: class[b].clone(),
    })
}

/// The unique face of annulus `k` (1-based) incident to vertex `v`.
pub(crate) fn annulus_face_at(
    g: &PlanarCubicGraph,
    emb: &AnnularEmbedding,
    k: usize,
    v: usize,
) -> Result<usize, AnnularError> {
    let ann = emb.annulus(k);
    let mut hit = None;
    for w in g.neighbors(v) {
        for f in [g.face_of_dart(v, w), g.face_of_dart(w, v)] {
            if ann.faces.binary_search(&f).is_ok() && hit != Some(f) {
                if hit.is_some() {
                    return Err(AnnularError::NotAnnular(format!(
                        "vertex {v} touches two faces of annulus {k}"
                    )));
                }
                hit = Some(f);
            }
        }
    }
    hit.ok_or_else(|| {
        AnnularError::NotAnnular(format!("vertex {v} touches no face of annulus {k}"))
    })
}

/// Decides for every annulus whether it attaches over the quad class
/// (`Block`) or the other class (`Ring`) of the annulus below. The two
/// innermost annuli admit both readings, so with fewer than three annuli the
/// convention is all `Block`, and otherwise they copy annulus three.
pub fn classify_annuli(
    g: &PlanarCubicGraph,
    emb: &AnnularEmbedding,
) -> Result<Vec<AnnulusKind>, AnnularError> {
    let x = emb.depth();
    let mut kinds = vec![AnnulusKind::Block; x];
    if x <= 2 {
        return Ok(kinds);
    }
    for k in 3..=x {
        let below = face_partition(g, emb, k - 1)?;
        let mut in_f1 = false;
        let mut in_f2 = false;
        for &(u, _) in &emb.annulus(k).radial {
            let host = annulus_face_at(g, emb, k - 1, u)?;
            match below.class_of(host) {
                Some(1) => in_f1 = true,
                Some(2) => in_f2 = true,
                _ => {
                    return Err(AnnularError::NotAnnular(format!(
                        "host face {host} is not in annulus {}",
                        k - 1
                    )))
                }
            }
        }
        kinds[k - 1] = match (in_f1, in_f2) {
            (true, false) => AnnulusKind::Block,
            (false, true) => AnnulusKind::Ring,
            _ => return Err(AnnularError::MixedAttachment(k)),
        };
    }
    kinds[0] = kinds[2];
    kinds[1] = kinds[2];
    Ok(kinds)
}

/// Cuts the graph along annulus `k`: removes its radial edges, suppresses
/// the resulting degree-2 vertices, and returns the inner and outer pieces.
/// A piece that is a bare cycle comes back as `None`.
fn split_at_annulus(
    g: &PlanarCubicGraph,
    emb: &AnnularEmbedding,
    k: usize,
) -> Result<[Option<(PlanarCubicGraph, Vec<usize>)>; 2], AnnularError> {
    let ann = emb.annulus(k);
    let mut s = RotationScratch::from_graph(g);
    for &(u, v) in &ann.radial {
        s.remove_edge(u, v);
    }
    let inner = s.component_of(ann.inner[0]);
    let outer = s.component_of(ann.outer[0]);
    if inner.len() + outer.len() != g.vertex_count() {
        return Err(AnnularError::NotAnnular(format!(
            "cutting annulus {k} does not split the graph in two"
        )));
    }
    // a piece that is a bare cycle has no vertices left once smoothed
    for comp in [&inner, &outer] {
        if comp.iter().all(|&v| s.adj[v].len() == 2) {
            for &v in comp {
                s.adj[v].clear();
            }
        }
    }
    if !s.smooth_degree_two() {
        return Err(AnnularError::NotAnnular(format!(
            "suppressing attachment points of annulus {k} degenerates"
        )));
    }
    let mut out: [Option<(PlanarCubicGraph, Vec<usize>)>; 2] = [None, None];
    for (slot, comp) in [inner, outer].into_iter().enumerate() {
        let keep: Vec<usize> = comp.into_iter().filter(|&v| s.adj[v].len() == 3).collect();
        if keep.is_empty() {
            continue;
        }
        let piece = s
            .extract(&keep)
            .map_err(|e| AnnularError::NotAnnular(format!("cut at annulus {k}: {e}")))?;
        out[slot] = Some(piece);
    }
    Ok(out)
}

/// True when cutting the graph open along every annulus leaves two pieces
/// that are themselves of the required kind (cubic, planar, bipartite,
/// 3-connected), a bare cycle counting as trivially fine. With at most two
/// annuli there is nothing to cut between, so the answer is yes.
pub fn is_annular_connected(g: &PlanarCubicGraph, emb: &AnnularEmbedding) -> bool {
    let x = emb.depth();
    if x <= 2 {
        return true;
    }
    for k in 1..=x {
        match split_at_annulus(g, emb, k) {
            Ok(pieces) => {
                for piece in pieces.into_iter().flatten() {
                    if !piece.0.check_barnette().is_barnette() {
                        return false;
                    }
                }
            }
            Err(_) => return false,
        }
    }
    true
}

/// The part of the graph inside boundary cycle `C_k` (`1 <= k < depth`),
/// with attachment points suppressed, together with its own decomposition.
pub fn annular_restriction(
    g: &PlanarCubicGraph,
    emb: &AnnularEmbedding,
    k: usize,
) -> Result<(PlanarCubicGraph, AnnularEmbedding), AnnularError> {
    if k == 0 || k >= emb.depth() {
        return Err(AnnularError::IndexOutOfRange);
    }
    let pieces = split_at_annulus(g, emb, k + 1)?;
    let (h, old_ids) = pieces[0].clone().ok_or_else(|| {
        AnnularError::NotAnnular(format!("inner part at annulus {k} is a bare cycle"))
    })?;
    let new_id: HashMap<usize, usize> = old_ids
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let map_set = |vs: &[usize]| -> BTreeSet<usize> {
        vs.iter().filter_map(|v| new_id.get(v)).copied().collect()
    };
    let fi_set = map_set(&g.face(emb.inner_face).boundary);
    let fe_set = map_set(&emb.annulus(k).outer);
    let find = |want: &BTreeSet<usize>| -> Option<usize> {
        h.faces()
            .iter()
            .position(|f| f.boundary.iter().copied().collect::<BTreeSet<_>>() == *want)
    };
    let fi = find(&fi_set).ok_or_else(|| {
        AnnularError::NotAnnular("inner face lost in restriction".into())
    })?;
    let fe = find(&fe_set).ok_or_else(|| {
        AnnularError::NotAnnular("restriction boundary is not a face".into())
    })?;
    let emb2 = decompose(&h, fi, fe)?;
    Ok((h, emb2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::b0;

    fn face_by_set(g: &PlanarCubicGraph, vs: &[usize]) -> usize {
        let want: BTreeSet<usize> = vs.iter().copied().collect();
        g.faces()
            .iter()
            .position(|f| f.boundary.iter().copied().collect::<BTreeSet<_>>() == want)
            .unwrap()
    }

    #[test]
    fn cube_decomposes_into_one_annulus() {
        let g = b0();
        let fi = face_by_set(&g, &[0, 1, 2, 3]);
        let fe = face_by_set(&g, &[4, 5, 6, 7]);
        let emb = decompose(&g, fi, fe).unwrap();
        assert_eq!(emb.depth(), 1);
        let a = emb.annulus(1);
        assert_eq!(a.faces.len(), 4);
        assert_eq!(a.inner.len(), 4);
        assert_eq!(a.outer.len(), 4);
        assert_eq!(a.radial.len(), 4);
        assert_eq!(classify_annuli(&g, &emb).unwrap(), vec![AnnulusKind::Block]);
        assert!(is_annular_connected(&g, &emb));
    }

    #[test]
    fn cube_partition_splits_side_faces() {
        let g = b0();
        let fi = face_by_set(&g, &[0, 1, 2, 3]);
        let fe = face_by_set(&g, &[4, 5, 6, 7]);
        let emb = decompose(&g, fi, fe).unwrap();
        let part = face_partition(&g, &emb, 1).unwrap();
        assert_eq!(part.f1.len(), 2);
        assert_eq!(part.f2.len(), 2);
        // alternating classes: the two faces of a class are opposite
        let a = emb.annulus(1);
        for &(u, v) in &a.radial {
            let (x, y) = g.faces_of_edge(u, v);
            assert_ne!(part.class_of(x), part.class_of(y));
        }
    }

    #[test]
    fn adjacent_faces_do_not_decompose() {
        let g = b0();
        let fi = face_by_set(&g, &[0, 1, 2, 3]);
        let side = face_by_set(&g, &[1, 0, 4, 5]);
        assert!(matches!(
            decompose(&g, fi, side),
            Err(AnnularError::NotAnnular(_))
        ));
    }
}
