//! The JSON wire formats used by the command line tool.
//!
//! Three document kinds exist, each tagged by a `format` field:
//!
//! * `adb-graph/1`: a rotation system, optionally extended with an annular
//!   decomposition (`inner_face`, `outer_face`, `annuli`);
//! * `adb-recipe/1`: a replayable construction from the cube;
//! * `adb-cycle/1`: a certified Hamiltonian cycle, optionally carrying the
//!   graph it belongs to so cycle files can travel alone through a pipe.
//!
//! Parsing validates the tag and structural coherence; a graph document with
//! a decomposition is re-decomposed on read and the boundaries are checked
//! against the stored ones rather than trusted.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annular::{decompose, AnnularEmbedding, AnnularError};
use crate::construct::{AlphaStep, ConstructionRecipe};
use crate::graph::{GraphError, PlanarCubicGraph};
use crate::hamilton::{CycleCert, Strategy};

pub const GRAPH_FORMAT: &str = "adb-graph/1";
pub const RECIPE_FORMAT: &str = "adb-recipe/1";
pub const CYCLE_FORMAT: &str = "adb-cycle/1";

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unexpected document: {0}")]
    Format(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Annular(#[from] AnnularError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnnulusDoc {
    pub inner: Vec<usize>,
    pub outer: Vec<usize>,
    pub radial: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDoc {
    pub format: String,
    pub vertices: usize,
    pub rotation: Vec<[usize; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_face: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer_face: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annuli: Option<Vec<AnnulusDoc>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecipeDoc {
    pub format: String,
    pub seed: u64,
    pub kinds: String,
    pub faces: Vec<usize>,
    pub steps: Vec<AlphaStep>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleDoc {
    pub format: String,
    pub vertices: Vec<usize>,
    pub grey_faces: Vec<usize>,
    pub strategy: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphDoc>,
}

impl GraphDoc {
    pub fn new(g: &PlanarCubicGraph) -> Self {
        GraphDoc {
            format: GRAPH_FORMAT.into(),
            vertices: g.vertex_count(),
            rotation: g.rotation().to_vec(),
            inner_face: None,
            outer_face: None,
            annuli: None,
        }
    }

    pub fn with_embedding(g: &PlanarCubicGraph, emb: &AnnularEmbedding) -> Self {
        let mut doc = GraphDoc::new(g);
        doc.inner_face = Some(emb.inner_face);
        doc.outer_face = Some(emb.outer_face);
        doc.annuli = Some(
            emb.annuli
                .iter()
                .map(|a| AnnulusDoc {
                    inner: a.inner.clone(),
                    outer: a.outer.clone(),
                    radial: a.radial.clone(),
                })
                .collect(),
        );
        doc
    }

    pub fn to_graph(&self) -> Result<PlanarCubicGraph, JsonError> {
        if self.format != GRAPH_FORMAT {
            return Err(JsonError::Format(format!(
                "expected format {GRAPH_FORMAT}, found {:?}",
                self.format
            )));
        }
        if self.vertices != self.rotation.len() {
            return Err(JsonError::Format(format!(
                "vertices field says {} but rotation lists {}",
                self.vertices,
                self.rotation.len()
            )));
        }
        Ok(PlanarCubicGraph::build_from_rotation(self.rotation.clone())?)
    }

    /// The stored decomposition, recomputed from the face pair and checked
    /// against the stored boundaries.
    pub fn to_embedding(
        &self,
        g: &PlanarCubicGraph,
    ) -> Result<Option<AnnularEmbedding>, JsonError> {
        let (Some(fi), Some(fe)) = (self.inner_face, self.outer_face) else {
            return Ok(None);
        };
        let emb = decompose(g, fi, fe)?;
        if let Some(stored) = &self.annuli {
            let same = stored.len() == emb.annuli.len()
                && stored.iter().zip(&emb.annuli).all(|(s, a)| {
                    s.inner == a.inner && s.outer == a.outer && s.radial == a.radial
                });
            if !same {
                return Err(JsonError::Format(
                    "stored annuli disagree with the decomposition".into(),
                ));
            }
        }
        Ok(Some(emb))
    }
}

impl RecipeDoc {
    pub fn new(r: &ConstructionRecipe) -> Self {
        RecipeDoc {
            format: RECIPE_FORMAT.into(),
            seed: r.seed,
            kinds: r.kinds.iter().map(|k| k.as_char()).collect(),
            faces: r.faces.clone(),
            steps: r.steps.clone(),
        }
    }

    pub fn to_recipe(&self) -> Result<ConstructionRecipe, JsonError> {
        if self.format != RECIPE_FORMAT {
            return Err(JsonError::Format(format!(
                "expected format {RECIPE_FORMAT}, found {:?}",
                self.format
            )));
        }
        let kinds = self
            .kinds
            .chars()
            .map(crate::annular::AnnulusKind::from_char)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| {
                JsonError::Format(format!("kinds must match [RB]*, found {:?}", self.kinds))
            })?;
        Ok(ConstructionRecipe {
            seed: self.seed,
            kinds,
            faces: self.faces.clone(),
            steps: self.steps.clone(),
        })
    }
}

impl CycleDoc {
    pub fn new(cert: &CycleCert, graph: Option<GraphDoc>) -> Self {
        CycleDoc {
            format: CYCLE_FORMAT.into(),
            vertices: cert.vertices.clone(),
            grey_faces: cert.grey.clone(),
            strategy: cert.strategy.as_str().into(),
            graph,
        }
    }

    pub fn to_cert(&self) -> Result<CycleCert, JsonError> {
        if self.format != CYCLE_FORMAT {
            return Err(JsonError::Format(format!(
                "expected format {CYCLE_FORMAT}, found {:?}",
                self.format
            )));
        }
        let strategy = Strategy::from_str_opt(&self.strategy).ok_or_else(|| {
            JsonError::Format(format!("unknown strategy {:?}", self.strategy))
        })?;
        Ok(CycleCert {
            vertices: self.vertices.clone(),
            grey: self.grey_faces.clone(),
            strategy,
        })
    }
}

pub fn write_graph(g: &PlanarCubicGraph, emb: Option<&AnnularEmbedding>) -> String {
    let doc = match emb {
        Some(e) => GraphDoc::with_embedding(g, e),
        None => GraphDoc::new(g),
    };
    serde_json::to_string(&doc).expect("graph documents always serialize")
}

pub fn read_graph(
    text: &str,
) -> Result<(PlanarCubicGraph, Option<AnnularEmbedding>), JsonError> {
    let doc: GraphDoc = serde_json::from_str(text)?;
    let g = doc.to_graph()?;
    let emb = doc.to_embedding(&g)?;
    Ok((g, emb))
}

pub fn write_recipe(r: &ConstructionRecipe) -> String {
    serde_json::to_string(&RecipeDoc::new(r)).expect("recipe documents always serialize")
}

pub fn read_recipe(text: &str) -> Result<ConstructionRecipe, JsonError> {
    let doc: RecipeDoc = serde_json::from_str(text)?;
    doc.to_recipe()
}

pub fn write_cycle(cert: &CycleCert, graph: Option<&GraphDoc>) -> String {
    serde_json::to_string(&CycleDoc::new(cert, graph.cloned()))
        .expect("cycle documents always serialize")
}

pub fn read_cycle(text: &str) -> Result<(CycleCert, Option<GraphDoc>), JsonError> {
    let doc: CycleDoc = serde_json::from_str(text)?;
    let cert = doc.to_cert()?;
    Ok((cert, doc.graph))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annular::AnnulusKind;
    use crate::construct::{b0, generate_adbac};
    use crate::hamilton::pyramid_strategy;

    #[test]
    fn graph_documents_round_trip() {
        let cube = b0();
        let text = write_graph(&cube, None);
        assert!(text.starts_with("{\"format\":\"adb-graph/1\",\"vertices\":8,"));
        let (back, emb) = read_graph(&text).unwrap();
        assert_eq!(back, cube);
        assert!(emb.is_none());

        let gen = generate_adbac(3, &[AnnulusKind::Block; 3], &[8, 6, 4]).unwrap();
        let text = write_graph(&gen.graph, Some(&gen.embedding));
        let (back, emb) = read_graph(&text).unwrap();
        assert_eq!(back, gen.graph);
        assert_eq!(emb.unwrap(), gen.embedding);
        // writing again reproduces the exact same bytes
        assert_eq!(write_graph(&back, Some(&gen.embedding)), text);
    }

    #[test]
    fn recipe_documents_round_trip() {
        let gen = generate_adbac(
            5,
            &[AnnulusKind::Ring, AnnulusKind::Ring, AnnulusKind::Ring],
            &[8, 6, 6],
        )
        .unwrap();
        let text = write_recipe(&gen.recipe);
        assert!(text.contains("\"kinds\":\"RRR\""));
        let back = read_recipe(&text).unwrap();
        assert_eq!(back, gen.recipe);
        assert_eq!(back.replay().unwrap(), gen.graph);
    }

    #[test]
    fn cycle_documents_round_trip() {
        let gen = generate_adbac(2, &[AnnulusKind::Block; 3], &[6, 6, 4]).unwrap();
        let cert = pyramid_strategy(&gen.graph, &gen.embedding).unwrap();
        let doc = GraphDoc::with_embedding(&gen.graph, &gen.embedding);
        let text = write_cycle(&cert, Some(&doc));
        let (back, carried) = read_cycle(&text).unwrap();
        assert_eq!(back, cert);
        let g = carried.unwrap().to_graph().unwrap();
        assert_eq!(g, gen.graph);
    }

    #[test]
    fn bad_documents_are_rejected() {
        assert!(read_graph("{\"format\":\"adb-graph/2\",\"vertices\":0,\"rotation\":[]}").is_err());
        assert!(read_graph("not json").is_err());
        // vertex count disagreeing with the rotation list
        let text = "{\"format\":\"adb-graph/1\",\"vertices\":9,\"rotation\":[[1,2,3]]}";
        assert!(read_graph(text).is_err());
        assert!(
            read_recipe("{\"format\":\"adb-recipe/1\",\"seed\":0,\"kinds\":\"RQ\",\"faces\":[],\"steps\":[]}")
                .is_err()
        );
    }
}
