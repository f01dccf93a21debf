//! Hamiltonian cycles from face colorings.
//!
//! Every strategy here produces a set of "grey" faces. When the grey faces
//! and the white faces each induce a connected region and no vertex is
//! surrounded by a single color, the edges between the two regions form one
//! cycle through every vertex. [`boundary_cycle`] checks those three
//! conditions and extracts the cycle; the strategies only decide which faces
//! to color.
//!
//! The four strategies work on an annular decomposition:
//!
//! * [`ring_strategy`]: alternate fully grey and fully white annuli, with
//!   one quadrilateral per annulus flipped to the opposite color to link the
//!   regions through. Needs a quad in every annulus.
//! * [`pyramid_strategy`]: color the inner face and, in every annulus, the
//!   quad class hosting the annulus above. The grey region is a set of
//!   towers joined at the center. Needs all annuli of kind `Block`.
//! * [`pr_strategy`]: three distinct cycles on an all-`Block` graph with at
//!   least three annuli, obtained by progressively recoloring the pyramid
//!   selection at the center and at the two outermost annuli.
//! * [`mixed_strategy`]: composes the ring and pyramid colorings run by run
//!   over an arbitrary kind sequence, as long as no single ring annulus is
//!   pinched between two block runs.

use crate::annular::{
    annulus_face_at, classify_annuli, face_partition, AnnularEmbedding, AnnularError, AnnulusKind,
};
use crate::graph::PlanarCubicGraph;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HamiltonError {
    #[error("grey region is disconnected")]
    GreyDisconnected,
    #[error("white region is disconnected")]
    WhiteDisconnected,
    #[error("vertex {0} is buried inside one region")]
    VertexBuried(usize),
    #[error("annulus {0} has no quadrilateral face")]
    NoQuadInAnnulus(usize),
    #[error("invalid pick {0}")]
    InvalidPick(usize),
    #[error("not every annulus is a block annulus")]
    NotAllBlock,
    #[error("no two disjoint face towers exist")]
    NoPyramidPair,
    #[error("no quadrilateral available for the white connector")]
    NoQuadM,
    #[error("single ring annulus at position {0} between block runs")]
    SingularRingRun(usize),
    #[error("degenerate face selection: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Annular(#[from] AnnularError),
}

/// Which coloring recipe produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Ring,
    Pyramid,
    Pr,
    Mixed,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Ring => "ring",
            Strategy::Pyramid => "pyramid",
            Strategy::Pr => "pr",
            Strategy::Mixed => "mixed",
        }
    }

    pub fn from_str_opt(s: &str) -> Option<Self> {
        match s {
            "ring" => Some(Strategy::Ring),
            "pyramid" => Some(Strategy::Pyramid),
            "pr" => Some(Strategy::Pr),
            "mixed" => Some(Strategy::Mixed),
            _ => None,
        }
    }
}

/// A certified Hamiltonian cycle: the vertex sequence, the grey face set it
/// bounds, and the strategy that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCert {
    pub vertices: Vec<usize>,
    pub grey: Vec<usize>,
    pub strategy: Strategy,
}

fn region_connected(dual: &[Vec<usize>], members: &[bool]) -> bool {
    let count = members.iter().filter(|&&b| b).count();
    let start = match members.iter().position(|&b| b) {
        Some(f) => f,
        None => return true,
    };
    let mut seen = vec![false; dual.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut reached = 1;
    while let Some(f) = stack.pop() {
        for &h in &dual[f] {
            if members[h] && !seen[h] {
                seen[h] = true;
                reached += 1;
                stack.push(h);
            }
        }
    }
    reached == count
}

/// Checks a grey face set and returns the cycle along the grey/white border.
///
/// Succeeds exactly when the grey faces are dual-connected, the white faces
/// are dual-connected, and every vertex touches both colors; the border
/// edges then form a single cycle through all vertices.
pub fn boundary_cycle(
    g: &PlanarCubicGraph,
    grey: &BTreeSet<usize>,
) -> Result<Vec<usize>, HamiltonError> {
    let nf = g.faces().len();
    let n = g.vertex_count();
    if grey.is_empty() || grey.len() >= nf {
        return Err(HamiltonError::Degenerate(
            "selection must leave both regions nonempty".into(),
        ));
    }
    if grey.iter().any(|&f| f >= nf) {
        return Err(HamiltonError::Degenerate("grey face out of range".into()));
    }
    let mut is_grey = vec![false; nf];
    for &f in grey {
        is_grey[f] = true;
    }
    let dual = g.dual_adjacency();
    if !region_connected(&dual, &is_grey) {
        return Err(HamiltonError::GreyDisconnected);
    }
    let is_white: Vec<bool> = is_grey.iter().map(|&b| !b).collect();
    if !region_connected(&dual, &is_white) {
        return Err(HamiltonError::WhiteDisconnected);
    }
    for v in 0..n {
        let greys = g
            .neighbors(v)
            .iter()
            .filter(|&&w| is_grey[g.face_of_dart(v, w)])
            .count();
        if greys == 0 || greys == 3 {
            return Err(HamiltonError::VertexBuried(v));
        }
    }

    // with no buried vertex every vertex carries exactly two border edges
    let mut adj = vec![[usize::MAX; 2]; n];
    for (u, v) in g.edges() {
        let (f1, f2) = g.faces_of_edge(u, v);
        if is_grey[f1] != is_grey[f2] {
            for (a, b) in [(u, v), (v, u)] {
                let slot = if adj[a][0] == usize::MAX { 0 } else { 1 };
                adj[a][slot] = b;
            }
        }
    }
    let mut cycle = vec![0];
    let (mut prev, mut cur) = (0, adj[0][0]);
    while cur != 0 {
        cycle.push(cur);
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        prev = cur;
        cur = next;
    }
    if cycle.len() != n {
        return Err(HamiltonError::Degenerate(
            "border splits into several cycles".into(),
        ));
    }
    Ok(cycle)
}

/// True when the sequence visits every vertex exactly once along edges of
/// the graph and closes up. Ignores any provenance, so it can vet cycles
/// from untrusted sources.
pub fn verify_hamiltonian(g: &PlanarCubicGraph, cycle: &[usize]) -> bool {
    let n = g.vertex_count();
    if cycle.len() != n || n < 4 {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    (0..n).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % n]))
}

/// The grey class for a pyramid-style annulus: the quad class, which for
/// annulus 1 (where both classes are quad rings) means the class hosting the
/// annulus above.
fn mids_grey(
    g: &PlanarCubicGraph,
    emb: &AnnularEmbedding,
    k: usize,
) -> Result<Vec<usize>, HamiltonError> {
    let part = face_partition(g, emb, k)?;
    if k == 1 && emb.depth() >= 2 {
        let site = emb.annulus(2).radial[0].0;
        let host = annulus_face_at(g, emb, 1, site)?;
        return match part.class_of(host) {
            Some(1) => Ok(part.f1),
            Some(2) => Ok(part.f2),
            _ => Err(HamiltonError::Degenerate(format!(
                "host face {host} missing from annulus 1"
            ))),
        };
    }
    Ok(part.f1)
}

/// The face of annulus `k - 1` directly below face `f` of annulus `k`.
fn host_of(
    g: &PlanarCubicGraph,
    emb: &AnnularEmbedding,
    k: usize,
    f: usize,
) -> Result<usize, HamiltonError> {
    let mut best = None;
    for (u, v) in g.face(f).edges() {
        for h in [g.faces_of_edge(u, v).0, g.faces_of_edge(u, v).1] {
            if emb.annulus_of_face(h) == Some(k - 1) && best.map_or(true, |b| h < b) {
                best = Some(h);
            }
        }
    }
    best.ok_or_else(|| {
        HamiltonError::Degenerate(format!("face {f} has no neighbor in annulus {}", k - 1))
    })
}

fn faces_adjacent(g: &PlanarCubicGraph, a: usize, b: usize) -> bool {
    g.face(a)
        .edges()
        .any(|(u, v)| g.faces_of_edge(u, v) == (a, b) || g.faces_of_edge(u, v) == (b, a))
}

fn min_quad(g: &PlanarCubicGraph, emb: &AnnularEmbedding, k: usize) -> Option<usize> {
    emb.annulus(k)
        .faces
        .iter()
        .copied()
        .find(|&f| g.face(f).len() == 4)
}

fn validate_pick(
    g: &PlanarCubicGraph,
    emb: &AnnularEmbedding,
    k: usize,
    pick: usize,
) -> Result<usize, HamiltonError> {
    if emb.annulus_of_face(pick) != Some(k) || g.face(pick).len() != 4 {
        return Err(HamiltonError::InvalidPick(pick));
    }
    Ok(pick)
}

/// Ring strategy: annuli alternate between fully grey and fully white, and
/// in each annulus one quadrilateral is flipped to the opposite color so the
/// two regions stay connected across it. The outermost annulus is grey side
/// out, which fixes the alternation; the inner face takes whichever color
/// annulus 1 is not.
///
/// `picks` overrides the flipped quad per annulus (one entry per annulus,
/// innermost first); by default the smallest-id quad is used.
pub fn ring_strategy(
    g: &PlanarCubicGraph,
    emb: &AnnularEmbedding,
    picks: Option<&[usize]>,
) -> Result<CycleCert, HamiltonError> {
    let x = emb.depth();
    if let Some(p) = picks {
        if p.len() != x {
            return Err(HamiltonError::InvalidPick(p.len()));
        }
    }
    let mut grey = BTreeSet::new();
    for k in 1..=x {
        let pick = match picks {
            Some(p) => validate_pick(g, emb, k, p[k - 1])?,
            None => min_quad(g, emb, k).ok_or(HamiltonError::NoQuadInAnnulus(k))?,
        };
        let grey_mode = (x - k) % 2 == 0;
        if grey_mode {
            grey.extend(emb.annulus(k).faces.iter().filter(|&&f| f != pick));
        } else {
            grey.insert(pick);
        }
    }
    if x % 2 == 0 {
        grey.insert(emb.inner_face);
    }
    let vertices = boundary_cycle(g, &grey)?;
    Ok(CycleCert {
        vertices,
        grey: grey.into_iter().collect(),
        strategy: Strategy::Ring,
    })
}

fn require_all_block(
    g: &PlanarCubicGraph,
    emb: &AnnularEmbedding,
) -> Result<(), HamiltonError> {
    let kinds = classify_annuli(g, emb)?;
    if kinds.iter().any(|&k| k != AnnulusKind::Block) {
        return Err(HamiltonError::NotAllBlock);
    }
    Ok(())
}

fn pyramid_grey(
    g: &PlanarCubicGraph,
    emb: &AnnularEmbedding,
) -> Result<BTreeSet<usize>, HamiltonError> {
    let mut grey = BTreeSet::new();
    grey.insert(emb.inner_face);
    for k in 1..=emb.depth() {
        grey.extend(mids_grey(g, emb, k)?);
    }
    Ok(grey)
}

/// Pyramid strategy for all-block graphs: grey the inner face and the quad
/// class of every annulus. The quads stack into towers meeting at the inner
/// face, and the border of that region visits every vertex.
pub fn pyramid_strategy(
    g: &PlanarCubicGraph,
    emb: &AnnularEmbedding,
) -> Result<CycleCert, HamiltonError> {
    require_all_block(g, emb)?;
    let grey = pyramid_grey(g, emb)?;
    let vertices = boundary_cycle(g, &grey)?;
    Ok(CycleCert {
        vertices,
        grey: grey.into_iter().collect(),
        strategy: Strategy::Pyramid,
    })
}

/// All vertices on the boundary of any face in the tower through `top`.
fn tower(
    g: &PlanarCubicGraph,
    emb: &AnnularEmbedding,
    top: usize,
) -> Result<Vec<usize>, HamiltonError> {
    let mut faces = vec![top];
    let mut cur = top;
    for k in (2..=emb.depth()).rev() {
        cur = host_of(g, emb, k, cur)?;
        faces.push(cur);
    }
    Ok(faces)
}

/// Pyramid-ring strategy: three distinct certified cycles on an all-block
/// graph with at least three annuli.
///
/// The first is the plain pyramid cycle. The second trades the inner face
/// for the whole first annulus minus one quad `m'`. The third additionally
/// empties annulus `x - 1` down to the one face `h1` under a chosen tower
/// and fills annulus `x` except for that tower's top and the top of a second
/// disjoint tower; the second gap is what keeps the white region connected.
pub fn pr_strategy(
    g: &PlanarCubicGraph,
    emb: &AnnularEmbedding,
) -> Result<[CycleCert; 3], HamiltonError> {
    let x = emb.depth();
    if x < 3 {
        return Err(HamiltonError::NotAllBlock);
    }
    require_all_block(g, emb)?;

    let h1_grey = pyramid_grey(g, emb)?;
    let hosts1 = mids_grey(g, emb, 1)?;
    let ann1 = &emb.annulus(1).faces;
    let m_prime = ann1
        .iter()
        .copied()
        .find(|f| !hosts1.contains(f) && g.face(*f).len() == 4)
        .ok_or(HamiltonError::NoQuadM)?;

    // two disjoint towers, smallest tops first
    let tops = face_partition(g, emb, x)?.f1;
    let mut chosen: Vec<(usize, Vec<usize>, BTreeSet<usize>)> = Vec::new();
    for &t in &tops {
        let faces = tower(g, emb, t)?;
        let verts: BTreeSet<usize> = faces
            .iter()
            .flat_map(|&f| g.face(f).boundary.iter().copied())
            .collect();
        if chosen.iter().all(|(_, _, vs)| vs.is_disjoint(&verts)) {
            chosen.push((t, faces, verts));
            if chosen.len() == 2 {
                break;
            }
        }
    }
    if chosen.len() < 2 {
        return Err(HamiltonError::NoPyramidPair);
    }
    let (g_b1, ref b1_faces, _) = chosen[0];
    let (g_b2, _, _) = chosen[1];
    let h1 = b1_faces[1]; // level x - 1 of the first tower

    let mut h2_grey: BTreeSet<usize> = h1_grey.clone();
    h2_grey.remove(&emb.inner_face);
    h2_grey.extend(ann1.iter().copied().filter(|&f| f != m_prime));

    let mut h3_grey: BTreeSet<usize> = ann1.iter().copied().filter(|&f| f != m_prime).collect();
    for k in 2..=x.saturating_sub(2) {
        h3_grey.extend(mids_grey(g, emb, k)?);
    }
    h3_grey.insert(h1);
    h3_grey.extend(
        emb.annulus(x)
            .faces
            .iter()
            .copied()
            .filter(|&f| f != g_b1 && f != g_b2),
    );

    let mut out = Vec::with_capacity(3);
    for grey in [h1_grey, h2_grey, h3_grey] {
        let vertices = boundary_cycle(g, &grey)?;
        out.push(CycleCert {
            vertices,
            grey: grey.into_iter().collect(),
            strategy: Strategy::Pr,
        });
    }
    Ok([out.remove(0), out.remove(0), out.remove(0)])
}

/// How the structure directly above a ring run constrains it.
enum RingTop {
    /// Nothing above but the outer face.
    Outermost,
    /// The block run above needs its lowest level absorbed from this run's
    /// top annulus; which of the two absorbing colorings is used depends on
    /// the parity the rest of the run needs.
    Consume,
    /// A one-annulus block run above pushed its white level down onto this
    /// run's top annulus, with the given face as its grey connector.
    ForcedWhite(usize),
}

/// Mixed strategy: handles any kind sequence without a singular interior
/// ring run by composing the two pure colorings run by run from the outside
/// in. Pure sequences are delegated to the matching pure strategy.
///
/// The composition rests on two facts. A block run whose top is not closed
/// off by the outer face must be recolored pyramid-ring style, leaving a
/// white level just under its top, and the ring annulus directly above it
/// must then be white side out. Conversely a ring run's top is pinned by
/// whatever sits above it (the outer face, or the base of a block run), so
/// each ring run adjusts parity at its top: outermost runs may cap
/// themselves with a half-colored annulus, and runs under a block run pick
/// between the two absorbing colorings for their top annulus.
pub fn mixed_strategy(
    g: &PlanarCubicGraph,
    emb: &AnnularEmbedding,
) -> Result<CycleCert, HamiltonError> {
    let kinds = classify_annuli(g, emb)?;
    let x = emb.depth();

    let mut runs: Vec<(AnnulusKind, usize, usize)> = Vec::new();
    for (i, &k) in kinds.iter().enumerate() {
        match runs.last_mut() {
            Some((kind, _, end)) if *kind == k => *end = i + 1,
            _ => runs.push((k, i + 1, i + 1)),
        }
    }
    if runs.len() == 1 {
        return match runs[0].0 {
            AnnulusKind::Ring => ring_strategy(g, emb, None),
            AnnulusKind::Block => pyramid_strategy(g, emb),
        };
    }
    for (i, &(kind, s, e)) in runs.iter().enumerate() {
        if kind == AnnulusKind::Ring && s == e && i > 0 && i + 1 < runs.len() {
            return Err(HamiltonError::SingularRingRun(s));
        }
    }

    let mut grey: BTreeSet<usize> = BTreeSet::new();
    let mut ring_top = RingTop::Outermost;

    for &(kind, s, e) in runs.iter().rev() {
        match kind {
            AnnulusKind::Block => {
                if e == x {
                    // the outer face closes the white web off; plain pyramid
                    for k in s..=e {
                        grey.extend(mids_grey(g, emb, k)?);
                    }
                } else {
                    // pyramid-ring top: all of annulus e grey except one
                    // tower top and one quad over a different host, and the
                    // level below white except the face under the tower
                    let rungs = face_partition(g, emb, e)?.f1;
                    let g_b1 = *rungs.first().ok_or(HamiltonError::NoPyramidPair)?;
                    let h1 = host_of(g, emb, e, g_b1)?;
                    let mut m = None;
                    for &f in &rungs[1..] {
                        if host_of(g, emb, e, f)? != h1 {
                            m = Some(f);
                            break;
                        }
                    }
                    let m = m.ok_or(HamiltonError::NoPyramidPair)?;
                    grey.extend(
                        emb.annulus(e)
                            .faces
                            .iter()
                            .copied()
                            .filter(|&f| f != g_b1 && f != m),
                    );
                    if s == e {
                        // nothing left of the run: the white level lands on
                        // the ring annulus below
                        ring_top = RingTop::ForcedWhite(h1);
                        continue;
                    }
                    grey.insert(h1);
                    for k in s..=e - 2 {
                        grey.extend(mids_grey(g, emb, k)?);
                    }
                }
                if s == 1 {
                    grey.insert(emb.inner_face);
                } else {
                    ring_top = RingTop::Consume;
                }
            }
            AnnulusKind::Ring => {
                let block_below = s > 1;
                // the annulus the alternation starts from and its color;
                // `None` when the whole run went into the cap
                let start: Option<(usize, bool)> = match ring_top {
                    RingTop::Outermost => {
                        if block_below && (e - s) % 2 == 0 {
                            // parity is off: cap the run with a half-colored
                            // annulus so the bottom comes out white side out
                            grey.extend(mids_grey(g, emb, e)?);
                            if e == s {
                                None
                            } else {
                                Some((e - 1, true))
                            }
                        } else {
                            Some((e, true))
                        }
                    }
                    RingTop::Consume => {
                        // variant choice: quad class grey hands the level
                        // below a grey top, everything-but-one-face grey
                        // hands it a white top
                        let a_bottom_grey = (e - 1 - s) % 2 == 0;
                        if block_below && a_bottom_grey {
                            // all grey except the face over the first quad
                            // of the level below; that quad plus a second
                            // one stay grey in the otherwise white level,
                            // one shielding the vertices under the white
                            // face and the other carrying grey downward
                            let quads: Vec<usize> = emb
                                .annulus(e - 1)
                                .faces
                                .iter()
                                .copied()
                                .filter(|&f| g.face(f).len() == 4)
                                .collect();
                            let (pick_a, pick_b) = match quads[..] {
                                [a, b, ..] => (a, b),
                                _ => return Err(HamiltonError::NoQuadInAnnulus(e - 1)),
                            };
                            let m_prime = emb
                                .annulus(e)
                                .faces
                                .iter()
                                .copied()
                                .find(|&f| faces_adjacent(g, f, pick_a))
                                .ok_or(HamiltonError::NoQuadM)?;
                            grey.extend(
                                emb.annulus(e).faces.iter().filter(|&&f| f != m_prime),
                            );
                            grey.insert(pick_a);
                            grey.insert(pick_b);
                            if e - 1 == s {
                                None
                            } else {
                                Some((e - 2, true))
                            }
                        } else {
                            grey.extend(mids_grey(g, emb, e)?);
                            Some((e - 1, true))
                        }
                    }
                    RingTop::ForcedWhite(h1) => {
                        grey.insert(h1);
                        if e == s {
                            None
                        } else {
                            Some((e - 1, true))
                        }
                    }
                };
                let mut bottom_grey = None;
                if let Some((top, top_grey)) = start {
                    let mut mode = top_grey;
                    for k in (s..=top).rev() {
                        let pick =
                            min_quad(g, emb, k).ok_or(HamiltonError::NoQuadInAnnulus(k))?;
                        if mode {
                            grey.extend(emb.annulus(k).faces.iter().filter(|&&f| f != pick));
                        } else {
                            grey.insert(pick);
                        }
                        bottom_grey = Some(mode);
                        mode = !mode;
                    }
                }
                match bottom_grey {
                    Some(true) if block_below => {
                        return Err(HamiltonError::Degenerate(
                            "kind sequence parity not supported".into(),
                        ));
                    }
                    Some(true) => {}
                    Some(false) if s == 1 => {
                        grey.insert(emb.inner_face);
                    }
                    _ => {}
                }
                ring_top = RingTop::Outermost;
            }
        }
    }

    let vertices = boundary_cycle(g, &grey)?;
    Ok(CycleCert {
        vertices,
        grey: grey.into_iter().collect(),
        strategy: Strategy::Mixed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annular::decompose;
    use crate::construct::{b0, generate_adbac};
    use crate::oracle::find_hamiltonian;
    use std::collections::BTreeSet;

    fn face_by_set(g: &PlanarCubicGraph, vs: &[usize]) -> usize {
        let want: BTreeSet<usize> = vs.iter().copied().collect();
        g.faces()
            .iter()
            .position(|f| f.boundary.iter().copied().collect::<BTreeSet<_>>() == want)
            .unwrap()
    }

    fn cube_embedding() -> (PlanarCubicGraph, AnnularEmbedding) {
        let g = b0();
        let fi = face_by_set(&g, &[0, 1, 2, 3]);
        let fe = face_by_set(&g, &[4, 5, 6, 7]);
        let emb = decompose(&g, fi, fe).unwrap();
        (g, emb)
    }

    #[test]
    fn cube_boundary_cases() {
        let g = b0();
        let fi = face_by_set(&g, &[0, 1, 2, 3]);
        let fe = face_by_set(&g, &[4, 5, 6, 7]);
        let side_a = face_by_set(&g, &[1, 0, 4, 5]);
        let side_b = face_by_set(&g, &[2, 1, 5, 6]);
        let side_c = face_by_set(&g, &[3, 2, 6, 7]);

        let one: BTreeSet<usize> = [fi].into();
        assert!(matches!(
            boundary_cycle(&g, &one),
            Err(HamiltonError::VertexBuried(_))
        ));

        // two adjacent grey faces bury their shared vertices
        let adjacent: BTreeSet<usize> = [fi, side_a, side_b].into();
        assert!(matches!(
            boundary_cycle(&g, &adjacent),
            Err(HamiltonError::VertexBuried(_))
        ));

        // a strip across the middle leaves every vertex on the border
        let strip: BTreeSet<usize> = [fi, side_a, side_c].into();
        let cycle = boundary_cycle(&g, &strip).unwrap();
        assert!(verify_hamiltonian(&g, &cycle));

        let opposite: BTreeSet<usize> = [fi, fe].into();
        assert!(matches!(
            boundary_cycle(&g, &opposite),
            Err(HamiltonError::GreyDisconnected)
        ));
    }

    #[test]
    fn ring_strategy_on_cube() {
        let (g, emb) = cube_embedding();
        let cert = ring_strategy(&g, &emb, None).unwrap();
        assert!(verify_hamiltonian(&g, &cert.vertices));
        assert_eq!(cert.grey.len(), 3);
        // every side face works as the pick and the cycles differ
        let mut cycles = BTreeSet::new();
        for &f in &emb.annulus(1).faces {
            let c = ring_strategy(&g, &emb, Some(&[f])).unwrap();
            assert!(verify_hamiltonian(&g, &c.vertices));
            let mut edges: Vec<(usize, usize)> = (0..c.vertices.len())
                .map(|i| {
                    let (a, b) = (c.vertices[i], c.vertices[(i + 1) % c.vertices.len()]);
                    (a.min(b), a.max(b))
                })
                .collect();
            edges.sort_unstable();
            cycles.insert(edges);
        }
        assert_eq!(cycles.len(), 4);
        assert!(matches!(
            ring_strategy(&g, &emb, Some(&[emb.inner_face])),
            Err(HamiltonError::InvalidPick(_))
        ));
    }

    #[test]
    fn ring_strategy_on_generated_graphs() {
        use AnnulusKind::*;
        for (kinds, faces, seed) in [
            (vec![Block, Block], vec![8, 6], 3u64),
            (vec![Ring, Ring, Ring], vec![8, 6, 4], 0),
            (vec![Ring, Ring, Ring, Ring], vec![8, 8, 6, 6], 7),
        ] {
            let gen = generate_adbac(seed, &kinds, &faces).unwrap();
            let cert = ring_strategy(&gen.graph, &gen.embedding, None).unwrap();
            assert!(verify_hamiltonian(&gen.graph, &cert.vertices));
        }
    }

    #[test]
    fn pyramid_strategy_on_generated_graphs() {
        use AnnulusKind::*;
        for (kinds, faces, seed) in [
            (vec![Block], vec![8], 1u64),
            (vec![Block, Block], vec![6, 6], 2),
            (vec![Block, Block, Block], vec![6, 6, 4], 0),
            (vec![Block; 5], vec![8, 8, 6, 6, 4], 4),
        ] {
            let gen = generate_adbac(seed, &kinds, &faces).unwrap();
            let cert = pyramid_strategy(&gen.graph, &gen.embedding).unwrap();
            assert!(verify_hamiltonian(&gen.graph, &cert.vertices));
        }
    }

    #[test]
    fn pyramid_cycle_is_in_the_oracle_enumeration() {
        use AnnulusKind::*;
        let gen = generate_adbac(0, &[Block, Block, Block], &[6, 6, 4], ).unwrap();
        let cert = pyramid_strategy(&gen.graph, &gen.embedding).unwrap();
        assert!(verify_hamiltonian(&gen.graph, &cert.vertices));
        assert!(find_hamiltonian(&gen.graph, 10_000_000).unwrap().is_some());
    }

    #[test]
    fn pr_strategy_gives_three_distinct_cycles() {
        use AnnulusKind::*;
        for (faces, seed) in [(vec![6, 6, 6], 0u64), (vec![8, 6, 4], 5), (vec![8, 8, 8], 1)] {
            let gen = generate_adbac(seed, &[Block, Block, Block], &faces).unwrap();
            let [h1, h2, h3] = pr_strategy(&gen.graph, &gen.embedding).unwrap();
            let mut edge_sets = Vec::new();
            for c in [&h1, &h2, &h3] {
                assert!(verify_hamiltonian(&gen.graph, &c.vertices));
                let n = c.vertices.len();
                let mut edges: Vec<(usize, usize)> = (0..n)
                    .map(|i| {
                        let (a, b) = (c.vertices[i], c.vertices[(i + 1) % n]);
                        (a.min(b), a.max(b))
                    })
                    .collect();
                edges.sort_unstable();
                edge_sets.push(edges);
            }
            assert_ne!(edge_sets[0], edge_sets[1]);
            assert_ne!(edge_sets[0], edge_sets[2]);
            assert_ne!(edge_sets[1], edge_sets[2]);

            // dropping the inner face alone disconnects the grey region
            let mut partial: BTreeSet<usize> = h1.grey.iter().copied().collect();
            partial.remove(&gen.embedding.inner_face);
            assert!(matches!(
                boundary_cycle(&gen.graph, &partial),
                Err(HamiltonError::GreyDisconnected)
            ));
        }
    }

    #[test]
    fn mixed_strategy_on_composite_sequences() {
        use AnnulusKind::*;
        for (kinds, faces, seed) in [
            (vec![Block, Block, Block, Ring, Ring], vec![8, 8, 8, 6, 6], 0u64),
            (vec![Ring, Ring, Ring, Block, Block], vec![8, 8, 8, 8, 6], 0),
            (vec![Block, Block, Block, Ring, Ring, Block], vec![8, 8, 8, 8, 6, 4], 1),
            (vec![Ring, Ring, Ring, Block], vec![8, 8, 8, 8], 2),
        ] {
            let gen = generate_adbac(seed, &kinds, &faces).unwrap();
            let got = classify_annuli(&gen.graph, &gen.embedding).unwrap();
            assert_eq!(got, kinds);
            let cert = mixed_strategy(&gen.graph, &gen.embedding).unwrap();
            assert!(verify_hamiltonian(&gen.graph, &cert.vertices));
        }
    }

    #[test]
    fn mixed_strategy_rejects_singular_ring_runs() {
        use AnnulusKind::*;
        let kinds = vec![Block, Block, Block, Ring, Block, Block];
        let gen = generate_adbac(0, &kinds, &[8, 8, 8, 8, 6, 6]).unwrap();
        assert_eq!(classify_annuli(&gen.graph, &gen.embedding).unwrap(), kinds);
        assert!(matches!(
            mixed_strategy(&gen.graph, &gen.embedding),
            Err(HamiltonError::SingularRingRun(4))
        ));
    }

    #[test]
    fn verify_rejects_bad_cycles() {
        let g = b0();
        let (g2, emb) = cube_embedding();
        let cert = ring_strategy(&g2, &emb, None).unwrap();
        let mut repeated = cert.vertices.clone();
        repeated[3] = repeated[0];
        assert!(!verify_hamiltonian(&g, &repeated));
        let short = &cert.vertices[..7];
        assert!(!verify_hamiltonian(&g, short));
        let mut swapped = cert.vertices.clone();
        swapped.swap(1, 5);
        assert!(!verify_hamiltonian(&g, &swapped));
    }
}
