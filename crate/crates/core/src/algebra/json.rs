//! JSON encoding of descriptors and elements.
//!
//! Matrix kinds encode `"entries": [[re, im], ...]` in row-major order,
//! coordinate kinds encode `"coords": [...]`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{AlgebraDescriptor, Corner, CornerData, Element, Entries, Kind};
use crate::error::Error;
use crate::matrix::{CMat, C64};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct EntriesRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    entries: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<f64>>,
}

impl From<&Entries> for EntriesRepr {
    fn from(e: &Entries) -> Self {
        match e {
            Entries::Matrix(m) => Self {
                entries: Some(m.as_slice().iter().map(|z| [z.re, z.im]).collect()),
                coords: None,
            },
            Entries::Coords(c) => Self {
                entries: None,
                coords: Some(c.clone()),
            },
        }
    }
}

impl EntriesRepr {
    fn into_entries(self, side: usize) -> Result<Entries, Error> {
        match (self.entries, self.coords) {
            (Some(e), None) => {
                let data = e.into_iter().map(|[re, im]| C64::new(re, im)).collect();
                CMat::from_row_major(side, side, data)
                    .map(Entries::Matrix)
                    .ok_or_else(|| Error::InvalidElement(format!("expected {} entries", side * side)))
            }
            (None, Some(c)) => Ok(Entries::Coords(c)),
            _ => Err(Error::InvalidElement(
                "exactly one of \"entries\" and \"coords\" is required".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub(crate) enum DescriptorRepr {
    FullMatrix {
        dim: usize,
    },
    Diagonal {
        dim: usize,
    },
    SymmetricJordan {
        dim: usize,
    },
    DirectSum {
        dim: usize,
        summands: Vec<AlgebraDescriptor>,
    },
    Corner {
        dim: usize,
        parent: Box<AlgebraDescriptor>,
        projection: EntriesRepr,
    },
}

impl From<AlgebraDescriptor> for DescriptorRepr {
    fn from(a: AlgebraDescriptor) -> Self {
        let dim = a.dim;
        match a.kind {
            Kind::FullMatrix => Self::FullMatrix { dim },
            Kind::Diagonal => Self::Diagonal { dim },
            Kind::SymmetricJordan => Self::SymmetricJordan { dim },
            Kind::DirectSum(summands) => Self::DirectSum { dim, summands },
            Kind::Corner(c) => {
                let CornerData { parent, projection, .. } = *c;
                Self::Corner {
                    dim,
                    parent: Box::new((*parent).clone()),
                    projection: EntriesRepr::from(&projection),
                }
            }
        }
    }
}

impl TryFrom<DescriptorRepr> for AlgebraDescriptor {
    type Error = Error;

    fn try_from(r: DescriptorRepr) -> Result<Self, Error> {
        let built = match r {
            DescriptorRepr::FullMatrix { dim } => AlgebraDescriptor::full_matrix(dim)?,
            DescriptorRepr::Diagonal { dim } => AlgebraDescriptor::diagonal(dim)?,
            DescriptorRepr::SymmetricJordan { dim } => AlgebraDescriptor::symmetric_jordan(dim)?,
            DescriptorRepr::DirectSum { dim, summands } => {
                let s = AlgebraDescriptor::direct_sum(summands)?;
                if s.dim != dim {
                    return Err(Error::InvalidAlgebra(format!(
                        "direct sum dim {dim} does not match summands ({})",
                        s.dim
                    )));
                }
                s
            }
            DescriptorRepr::Corner { dim, parent, projection } => {
                let parent = Arc::new(*parent);
                let entries = projection.into_entries(parent.dim)?;
                let p = Element::new(&parent, entries)?;
                let c = Corner::new(&p)?;
                if c.rank() != dim {
                    return Err(Error::InvalidAlgebra(format!(
                        "corner dim {dim} does not match projection rank {}",
                        c.rank()
                    )));
                }
                Arc::clone(c.algebra())
            }
        };
        Ok(Arc::unwrap_or_clone(built))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct ElementRepr {
    algebra: AlgebraDescriptor,
    #[serde(flatten)]
    data: EntriesRepr,
}

impl From<Element> for ElementRepr {
    fn from(e: Element) -> Self {
        Self {
            algebra: (**e.algebra()).clone(),
            data: EntriesRepr::from(e.entries()),
        }
    }
}

impl TryFrom<ElementRepr> for Element {
    type Error = Error;

    fn try_from(r: ElementRepr) -> Result<Self, Error> {
        let algebra = Arc::new(r.algebra);
        let entries = r.data.into_entries(algebra.dim)?;
        Element::new(&algebra, entries)
    }
}
