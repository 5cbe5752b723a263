//! Input documents.

use std::path::Path;

use cluster_atomic::{ExchangeMatrix, LaurentPoly, Quiver};
use serde::{Deserialize, Serialize};

use crate::Failure;

/// The seed data a run starts from. Exactly one of `quiver` and `matrix`
/// is present; vertex labels in `quiver` are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quiver: Option<Quiver>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<ExchangeMatrix>,
    /// Laurent polynomials in the initial cluster, e.g. `"x1^-1*x2 + 3"`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<String>,
    /// Exponents of a cluster monomial at the seed reached by the walk.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<u32>>,
}

impl InputDoc {
    pub fn parse(text: &str) -> Result<InputDoc, Failure> {
        let doc: InputDoc = serde_json::from_str(text).map_err(|e| Failure::Invalid(e.to_string()))?;
        match (&doc.quiver, &doc.matrix) {
            (Some(_), Some(_)) => return Err(Failure::Invalid("give either `quiver` or `matrix`, not both".into())),
            (None, None) => return Err(Failure::Invalid("missing `quiver` or `matrix`".into())),
            _ => {}
        }
        if let Some(e) = &doc.exponents {
            if e.len() != doc.rank() {
                return Err(Failure::Invalid(format!("`exponents` has {} entries for rank {}", e.len(), doc.rank())));
            }
        }
        doc.parsed_elements()?;
        Ok(doc)
    }

    pub fn matrix(&self) -> ExchangeMatrix {
        match (&self.quiver, &self.matrix) {
            (Some(q), _) => q.to_matrix(),
            (None, Some(b)) => b.clone(),
            (None, None) => unreachable!("validated on parse"),
        }
    }

    pub fn rank(&self) -> usize {
        self.matrix().n()
    }

    pub fn parsed_elements(&self) -> Result<Vec<LaurentPoly>, Failure> {
        self.elements
            .iter()
            .map(|s| LaurentPoly::parse(s, self.rank()).map_err(|e| Failure::Invalid(format!("element {s:?}: {e}"))))
            .collect()
    }
}

pub fn load(path: &Path) -> Result<InputDoc, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    InputDoc::parse(&text)
}

/// Parses `"1,3,2"` into 0-based directions below `n`.
pub fn parse_walk(s: &str, n: usize) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let k: usize = t.parse().map_err(|_| Failure::Invalid(format!("bad walk entry {t:?}")))?;
            index(k, n)
        })
        .collect()
}

/// Converts a 1-based label into a 0-based index below `n`.
pub fn index(k: usize, n: usize) -> Result<usize, Failure> {
    if k == 0 || k > n {
        Err(Failure::Invalid(format!("index {k} outside 1..={n}")))
    } else {
        Ok(k - 1)
    }
}
