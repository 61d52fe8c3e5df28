use std::sync::Arc;

use super::{AlgebraDescriptor, CornerData, CornerMap, Element, Entries, Kind, PROJECTION_TOL};
use crate::error::{Error, Result};

impl CornerData {
    pub(crate) fn embed_entries(&self, x: &Entries) -> Entries {
        match (&self.map, x) {
            (CornerMap::Basis(v), Entries::Matrix(m)) => Entries::Matrix(&(v * m) * &v.adjoint()),
            (CornerMap::Support(idx), Entries::Coords(c)) => {
                let mut out = vec![0.0; self.parent.dim];
                for (&i, &val) in idx.iter().zip(c) {
                    out[i] = val;
                }
                Entries::Coords(out)
            }
            _ => unreachable!("corner storage follows its parent"),
        }
    }

    pub(crate) fn compress_entries(&self, a: &Entries) -> Entries {
        match (&self.map, a) {
            (CornerMap::Basis(v), Entries::Matrix(m)) => Entries::Matrix(&(&v.adjoint() * m) * v),
            (CornerMap::Support(idx), Entries::Coords(c)) => {
                Entries::Coords(idx.iter().map(|&i| c[i]).collect())
            }
            _ => unreachable!("corner storage follows its parent"),
        }
    }
}

/// The corner algebra `pAp` of a nonzero projection, whose unit is `p`.
///
/// `compress` maps `A → pAp` in compressed coordinates and `embed` maps back;
/// `embed ∘ compress = U_p`.
#[derive(Debug, Clone)]
pub struct Corner {
    algebra: Arc<AlgebraDescriptor>,
    parent: Arc<AlgebraDescriptor>,
    projection: Element,
}

impl Corner {
    pub fn new(p: &Element) -> Result<Self> {
        if !p.is_projection(PROJECTION_TOL) {
            let defect = p.square().sub(p)?.norm();
            return Err(Error::NotProjection(defect));
        }
        let map = match p.entries() {
            Entries::Coords(c) => {
                CornerMap::Support(c.iter().enumerate().filter(|(_, &x)| x > 0.5).map(|(i, _)| i).collect())
            }
            Entries::Matrix(_) => {
                let spec = p.spectrum()?;
                let cols: Vec<usize> = spec
                    .values
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0.5)
                    .map(|(i, _)| i)
                    .collect();
                let v = spec.vectors.as_ref().expect("matrix spectra carry vectors");
                CornerMap::Basis(v.select_columns(&cols))
            }
        };
        let rank = match &map {
            CornerMap::Basis(v) => v.cols(),
            CornerMap::Support(idx) => idx.len(),
        };
        if rank == 0 {
            return Err(Error::ZeroProjection);
        }
        let algebra = Arc::new(AlgebraDescriptor {
            kind: Kind::Corner(Box::new(CornerData {
                parent: Arc::clone(p.algebra()),
                projection: p.entries().clone(),
                map,
            })),
            dim: rank,
        });
        Ok(Self {
            algebra,
            parent: Arc::clone(p.algebra()),
            projection: p.clone(),
        })
    }

    pub fn algebra(&self) -> &Arc<AlgebraDescriptor> {
        &self.algebra
    }

    pub fn parent(&self) -> &Arc<AlgebraDescriptor> {
        &self.parent
    }

    pub fn projection(&self) -> &Element {
        &self.projection
    }

    pub fn rank(&self) -> usize {
        self.algebra.dim
    }

    fn data(&self) -> &CornerData {
        match &self.algebra.kind {
            Kind::Corner(c) => c,
            _ => unreachable!(),
        }
    }

    /// Unit of the corner, i.e. `compress(p)`.
    pub fn unit(&self) -> Element {
        Element::unit(&self.algebra)
    }

    /// `a ↦ pap` written in corner coordinates.
    pub fn compress(&self, a: &Element) -> Result<Element> {
        if !a.same_algebra(&self.projection) {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Element::raw(&self.algebra, self.data().compress_entries(a.entries())))
    }

    /// Inverse of `compress` on the corner.
    pub fn embed(&self, x: &Element) -> Result<Element> {
        if x.algebra() != &self.algebra {
            return Err(Error::AlgebraMismatch);
        }
        Ok(Element::raw(&self.parent, self.data().embed_entries(x.entries())))
    }
}

/// Corner `pAp` of `algebra` for a projection `p` in it.
pub fn corner(algebra: &Arc<AlgebraDescriptor>, p: &Element) -> Result<Corner> {
    if p.algebra() != algebra {
        return Err(Error::AlgebraMismatch);
    }
    Corner::new(p)
}
