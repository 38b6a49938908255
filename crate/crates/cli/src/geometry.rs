//! Turns a [`RegionSpec`] into lattice objects.

use crate::config::{ConeSpec, RegionSpec};
use crate::error::CliError;
use qd_core::configs::rectangle_layers;
use qd_core::lattice::{
    cone_from_angles, cone_truncation, BoundaryLoop, ConeGeometry, ConeTruncation, DeskCone, LayerRegion, Rect,
    StaircasePath, Tail, Vertex,
};

/// N values checked for separation when discretising a cone from angles.
const HORIZON: u32 = 3;

#[derive(Clone, Debug)]
pub enum ConeSource {
    Desk(DeskCone, u32),
    Paths { p1: StaircasePath, p2: StaircasePath, rect: Rect },
    Angles(Box<ConeGeometry>, u32),
}

#[derive(Clone, Debug)]
pub enum Geometry {
    Rectangle { rect: Rect, layers: LayerRegion, frame: BoundaryLoop },
    Layers { layers: LayerRegion, frame: BoundaryLoop },
    Cone { ct: Box<ConeTruncation>, source: ConeSource },
}

/// Geometry errors in a user-supplied region are configuration errors.
fn config(e: qd_core::Error) -> CliError {
    match e {
        qd_core::Error::Budget { .. } | qd_core::Error::Overflow(_) => CliError::Core(e),
        other => CliError::Usage(format!("region: {other}")),
    }
}

fn staircase(segs: &[(u32, u32)], dir: qd_core::lattice::Direction, tail: crate::config::TailSpec) -> Result<StaircasePath, CliError> {
    let o = Vertex::new(0, 0);
    match tail.axis() {
        Some(axis) => StaircasePath::new(o, dir, segs, Tail::Ray(axis)),
        None => StaircasePath::periodic(o, dir, segs),
    }
    .map_err(config)
}

impl ConeSource {
    fn truncation(&self, grow: bool) -> qd_core::Result<ConeTruncation> {
        match self {
            // the (N, 2, 1) rectangle sits inside the square of half-size 2N
            ConeSource::Desk(cone, n) if grow => cone.truncation(Rect::square(2 * n)?),
            ConeSource::Desk(cone, n) => cone.truncation(Rect::new(*n, 2, 1)?),
            ConeSource::Paths { p1, p2, rect } => {
                let rect = if grow { rect.grown() } else { *rect };
                cone_truncation(Vertex::new(0, 0), p1, p2, rect, 1)
            }
            ConeSource::Angles(geo, n) => geo.truncation(n + grow as u32),
        }
    }
}

impl Geometry {
    pub fn build(spec: &RegionSpec) -> Result<Self, CliError> {
        let layered = |layers: LayerRegion| -> Result<(LayerRegion, BoundaryLoop), CliError> {
            let frame = BoundaryLoop::new(&layers, layers.origin()).map_err(config)?;
            Ok((layers, frame))
        };
        Ok(match spec {
            RegionSpec::Rectangle { n, n0, m0 } => {
                let rect = Rect::new(*n, *n0, *m0).map_err(config)?;
                let (layers, frame) = layered(rectangle_layers(&rect).map_err(config)?)?;
                Geometry::Rectangle { rect, layers, frame }
            }
            RegionSpec::Layers { y, rows } => {
                let (layers, frame) = layered(LayerRegion::new(*y, rows).map_err(config)?)?;
                Geometry::Layers { layers, frame }
            }
            RegionSpec::Desk { cone, n } => Geometry::cone(ConeSource::Desk(*cone, *n))?,
            RegionSpec::Cone(ConeSpec::Paths { p1, p2, n, n0, m0, dir1, dir2, tail1, tail2 }) => {
                let p1 = staircase(p1, *dir1, *tail1)?;
                let p2 = staircase(p2, *dir2, *tail2)?;
                let rect = Rect::new(*n, *n0, *m0).map_err(config)?;
                Geometry::cone(ConeSource::Paths { p1, p2, rect })?
            }
            RegionSpec::Cone(ConeSpec::Angles { theta1, theta2, apex, n }) => {
                let geo = cone_from_angles(*theta1, *theta2, *apex, HORIZON).map_err(config)?;
                if *n < geo.n_min {
                    return Err(CliError::Usage(format!("cone needs N >= {}", geo.n_min)));
                }
                Geometry::cone(ConeSource::Angles(Box::new(geo), *n))?
            }
        })
    }

    fn cone(source: ConeSource) -> Result<Self, CliError> {
        let ct = source.truncation(false).map_err(config)?;
        Ok(Geometry::Cone { ct: Box::new(ct), source })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Geometry::Rectangle { .. } => "rectangle",
            Geometry::Layers { .. } => "layers",
            Geometry::Cone { .. } => "cone",
        }
    }

    pub fn layers(&self) -> &LayerRegion {
        match self {
            Geometry::Rectangle { layers, .. } | Geometry::Layers { layers, .. } => layers,
            Geometry::Cone { ct, .. } => &ct.layers,
        }
    }

    pub fn frame(&self) -> &BoundaryLoop {
        match self {
            Geometry::Rectangle { frame, .. } | Geometry::Layers { frame, .. } => frame,
            Geometry::Cone { ct, .. } => &ct.frame,
        }
    }

    pub fn rect(&self) -> Option<Rect> {
        match self {
            Geometry::Rectangle { rect, .. } => Some(*rect),
            _ => None,
        }
    }

    pub fn cone_truncation(&self) -> Option<&ConeTruncation> {
        match self {
            Geometry::Cone { ct, .. } => Some(ct),
            _ => None,
        }
    }

    /// The same cone cut by a larger rectangle containing the current one.
    pub fn grown_cone(&self) -> Option<qd_core::Result<ConeTruncation>> {
        match self {
            Geometry::Cone { source, .. } => Some(source.truncation(true)),
            _ => None,
        }
    }
}
