use serde::{Deserialize, Serialize};

use super::{Quiver, TranslationQuiver, VertexId};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowJson<V> {
    pub src: V,
    pub tgt: V,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauJson<V> {
    pub from: V,
    pub to: V,
}

/// Wire form `{"vertices": [...], "arrows": [{"src", "tgt"}], "tau": [{"from", "to"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverJson<V> {
    pub vertices: Vec<V>,
    pub arrows: Vec<ArrowJson<V>>,
    pub tau: Vec<TauJson<V>>,
}

impl<V: VertexId> QuiverJson<V> {
    /// Vertices in sorted order, arrows and tau pairs sorted too, so the
    /// output does not depend on construction order.
    pub fn from_quiver(g: &TranslationQuiver<V>) -> Self {
        let mut vertices = g.vertices().to_vec();
        vertices.sort();
        let mut arrows: Vec<ArrowJson<V>> = g
            .quiver()
            .arrows()
            .map(|(s, t)| ArrowJson {
                src: s.clone(),
                tgt: t.clone(),
            })
            .collect();
        arrows.sort_by(|a, b| (&a.src, &a.tgt).cmp(&(&b.src, &b.tgt)));
        let mut tau: Vec<TauJson<V>> = g
            .tau_pairs()
            .map(|(f, t)| TauJson {
                from: f.clone(),
                to: t.clone(),
            })
            .collect();
        tau.sort_by(|a, b| a.from.cmp(&b.from));
        QuiverJson {
            vertices,
            arrows,
            tau,
        }
    }

    pub fn to_quiver(&self) -> Result<TranslationQuiver<V>> {
        let q = Quiver::new(
            self.vertices.iter().cloned(),
            self.arrows.iter().map(|a| (a.src.clone(), a.tgt.clone())),
        )?;
        TranslationQuiver::new(
            q,
            self.tau
                .iter()
                .map(|t| (t.from.clone(), t.to.clone()))
                .collect::<Vec<_>>(),
        )
    }
}
