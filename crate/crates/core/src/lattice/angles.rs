//! Discretisation of a convex cone into two boundary staircases.

use super::cone::{cone_truncation, well_separated, ConeTruncation};
use super::geometry::Vertex;
use super::region::Rect;
use super::staircase::{Axis, Direction, StaircasePath, Tail};
use crate::error::{Error, Result};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

const EPS: f64 = 1e-9;
/// Largest N tried when searching for N0.
const N_LIMIT: u32 = 48;

/// Output of [`cone_from_angles`].
#[derive(Clone, Debug, Serialize)]
pub struct ConeGeometry {
    /// Which of the three angle cases applied after rotation.
    pub case: u8,
    /// Quarter turns applied to bring θ1 into [0, π/2).
    pub rotation: u8,
    pub v0: Vertex,
    pub p1: StaircasePath,
    pub p2: StaircasePath,
    pub n0: u32,
    pub m0: u32,
    /// Smallest N for which the construction is valid.
    pub n_min: u32,
    /// Lower row cut in the rotated frame; `None` for the third case.
    pub m_min: Option<i32>,
    /// Number of extra N values checked for separation.
    pub horizon: u32,
}

impl ConeGeometry {
    pub fn truncation(&self, n: u32) -> Result<ConeTruncation> {
        cone_truncation(self.v0, &self.p1, &self.p2, Rect::new(n, self.n0, self.m0)?, 1)
    }
}

/// Half-open row extent: squares S_(x, y) with lo <= x <= hi; `None` bounds are infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Extent {
    lo: Option<i64>,
    hi: Option<i64>,
}

struct Cone {
    apex: (f64, f64),
    d1: (f64, f64),
    d2: (f64, f64),
    cut: Option<i32>,
}

impl Cone {
    /// Squares of row y whose four corners lie in the cone.
    fn row(&self, y: i32) -> Option<Extent> {
        if self.cut.is_some_and(|m| y < m) {
            return None;
        }
        let (ax, ay) = self.apex;
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for cy in [y as f64, y as f64 + 1.0] {
            let dy = cy - ay;
            // left of the ray at θ1: d1.x dy - d1.y (cx - ax) >= 0
            let (ux, uy) = self.d1;
            if uy.abs() < EPS {
                if ux * dy < -EPS {
                    return None;
                }
            } else if uy > 0.0 {
                hi = hi.min(ax + ux * dy / uy);
            } else {
                lo = lo.max(ax + ux * dy / uy);
            }
            // right of the ray at θ2: (cx - ax) d2.y - dy d2.x >= 0
            let (vx, vy) = self.d2;
            if vy.abs() < EPS {
                if -dy * vx < -EPS {
                    return None;
                }
            } else if vy > 0.0 {
                lo = lo.max(ax + dy * vx / vy);
            } else {
                hi = hi.min(ax + dy * vx / vy);
            }
        }
        let lo = lo.is_finite().then(|| (lo - EPS).ceil() as i64);
        let hi = hi.is_finite().then(|| (hi + EPS).floor() as i64 - 1);
        match (lo, hi) {
            (Some(a), Some(b)) if a > b => None,
            _ => Some(Extent { lo, hi }),
        }
    }

    /// Number of squares of row y inside [-a, a-1].
    fn count_within(&self, y: i32, a: i64) -> i64 {
        self.row(y).map_or(0, |e| {
            let lo = e.lo.unwrap_or(i64::MIN).max(-a);
            let hi = e.hi.unwrap_or(i64::MAX).min(a - 1);
            (hi - lo + 1).max(0)
        })
    }
}

/// Turns a sequence of row boundaries into staircase runs.
///
/// `xs[k]` is the x-coordinate of the boundary at height `y0 + k`; the
/// staircase goes up one row, then horizontally to the next boundary.
fn runs_from_columns(xs: &[i64], first_horizontal: i64) -> Vec<(Axis, u32)> {
    let mut runs = Vec::new();
    let push = |runs: &mut Vec<(Axis, u32)>, a: Axis, n: u32| {
        if n == 0 {
            return;
        }
        match runs.last_mut() {
            Some((b, m)) if *b == a => *m += n,
            _ => runs.push((a, n)),
        }
    };
    push(&mut runs, Axis::Horizontal, first_horizontal.unsigned_abs() as u32);
    for w in xs.windows(2) {
        push(&mut runs, Axis::Vertical, 1);
        push(&mut runs, Axis::Horizontal, (w[1] - w[0]).unsigned_abs() as u32);
    }
    runs
}

/// Boundary staircases and aspect parameters of the cone with apex `apex`
/// spanning the angles θ1 < θ < θ2.
pub fn cone_from_angles(theta1: f64, theta2: f64, apex: (f64, f64), horizon: u32) -> Result<ConeGeometry> {
    if !(theta1.is_finite() && theta2.is_finite()) {
        return Err(Error::InvalidArgument("angles must be finite".into()));
    }
    let span = theta2 - theta1;
    if !(span > 0.0 && span < PI) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < θ2 - θ1 < π, got {span}"
        )));
    }
    if !(0.0..=1.0).contains(&apex.0) || !(0.0..=1.0).contains(&apex.1) {
        return Err(Error::InvalidArgument("apex must lie in [0,1]²".into()));
    }
    let turns = (theta1 / FRAC_PI_2).floor();
    let rotation = turns.rem_euclid(4.0) as u8;
    let (t1, t2) = (theta1 - turns * FRAC_PI_2, theta2 - turns * FRAC_PI_2);
    // rotate the apex clockwise `rotation` times
    let mut a = apex;
    for _ in 0..rotation {
        a = (a.1, -a.0);
    }
    let mut g = canonical(t1, t2, a, horizon)?;
    g.rotation = rotation;
    for _ in 0..rotation {
        g.v0 = g.v0.rotate();
        g.p1 = g.p1.rotate();
        g.p2 = g.p2.rotate();
        std::mem::swap(&mut g.n0, &mut g.m0);
    }
    Ok(g)
}

fn canonical(t1: f64, t2: f64, apex: (f64, f64), horizon: u32) -> Result<ConeGeometry> {
    let case = if t2 <= FRAC_PI_2 + EPS {
        1
    } else if t2 <= PI + EPS {
        2
    } else {
        3
    };
    let (n0, m0) = if case == 2 {
        (1, 1)
    } else {
        // m0 / n0 < tan θ2 with m0 = 1
        let tan = t2.tan();
        let n0 = if tan > 1e6 || tan < 0.0 { 1 } else { (1.0 / tan).floor() as u32 + 1 };
        (n0, 1)
    };
    let mut cone = Cone {
        apex,
        d1: (t1.cos(), t1.sin()),
        d2: (t2.cos(), t2.sin()),
        cut: None,
    };
    let top = ((N_LIMIT + horizon + 2) * m0) as i32;
    let width = ((N_LIMIT + horizon + 2) * n0) as i64;

    let (v0, p1, p2, m_min) = if case == 3 {
        let right = |y: i32| cone.row(y).and_then(|e| e.hi);
        // a corner where the boundary, walked downwards, turns left first
        let start = apex.1.floor() as i32 + 1;
        let ystar = (start - top..=start)
            .rev()
            .find(|&y| matches!((right(y), right(y - 1)), (Some(a), Some(b)) if b < a))
            .ok_or_else(|| Error::Geometry("no corner found on the cone boundary".into()))?;
        let v0 = Vertex::new(right(ystar).unwrap() as i32 + 1, ystar);
        // up-right along the right boundary
        let mut cols = vec![right(ystar).unwrap()];
        let mut ray = false;
        for y in ystar + 1..=top {
            match right(y) {
                Some(x) => cols.push(x),
                None => {
                    ray = true;
                    break;
                }
            }
        }
        let mut up = runs_from_columns(&cols, 0);
        let tail = if ray {
            up.push((Axis::Vertical, 1));
            Tail::Ray(Axis::Horizontal)
        } else {
            Tail::Ray(Axis::Vertical)
        };
        let p1 = StaircasePath::from_runs(v0, Direction::UpRight, up, tail);
        // down-left: left to the boundary of the row below, then down
        let cols: Vec<i64> = (ystar - top..ystar).rev().map(|y| right(y).unwrap_or(i64::MIN / 4)).collect();
        let mut down = runs_from_columns(&cols, right(ystar).unwrap() - cols[0]);
        down.push((Axis::Vertical, 1));
        let p2 = StaircasePath::from_runs(v0, Direction::DownLeft, down, Tail::Ray(Axis::Vertical));
        (v0, p1, p2, None)
    } else {
        let first = (apex.1.floor() as i32 - 1..=top)
            .find(|&y| (y..y + 4).all(|r| cone.count_within(r, width) >= 3))
            .ok_or_else(|| Error::Geometry("cone rows never reach three squares".into()))?;
        cone.cut = Some(first);
        let row0 = cone.row(first).unwrap();
        let rights: Option<Vec<i64>> = (first..=top).map(|y| cone.row(y).and_then(|e| e.hi)).collect();
        let lefts: Option<Vec<i64>> = (first..=top).map(|y| cone.row(y).and_then(|e| e.lo)).collect();
        let v0x = match (row0.lo, row0.hi) {
            (Some(lo), _) => lo,
            (None, Some(hi)) => (apex.0.floor() as i64).min(hi - 2),
            (None, None) => apex.0.floor() as i64,
        };
        let v0 = Vertex::new(v0x as i32, first);
        let p1 = match rights {
            Some(cols) => {
                let runs = runs_from_columns(&cols, cols[0] + 1 - v0x);
                StaircasePath::from_runs(v0, Direction::UpRight, runs, Tail::Ray(Axis::Vertical))
            }
            None => StaircasePath::ray(v0, Direction::UpRight, Axis::Horizontal),
        };
        let p2 = match lefts {
            Some(cols) => {
                let runs = runs_from_columns(&cols, 0);
                let dir = if case == 1 { Direction::UpRight } else { Direction::UpLeft };
                StaircasePath::from_runs(v0, dir, runs, Tail::Ray(Axis::Vertical))
            }
            None => StaircasePath::ray(v0, Direction::UpLeft, Axis::Horizontal),
        };
        (v0, p1, p2, Some(first))
    };

    let rows_ok = |n: u32| {
        let a = (n * n0) as i64;
        match m_min {
            Some(m) => (m..(n * m0) as i32).all(|y| cone.count_within(y, a) >= 3),
            None => true,
        }
    };
    let inside = |n: u32| {
        n >= 3 && v0.x.unsigned_abs() <= (n - 3) * n0 && v0.y.unsigned_abs() <= (n - 3) * m0
    };
    let n_min = (1..=N_LIMIT)
        .find(|&n| {
            inside(n)
                && (n..=n + horizon).all(rows_ok)
                && well_separated(&p1, &p2, n, n0, m0, horizon)
                && (n..=n + horizon).all(|k| {
                    Rect::new(k, n0, m0).is_ok_and(|r| cone_truncation(v0, &p1, &p2, r, 1).is_ok())
                })
        })
        .ok_or_else(|| Error::Geometry(format!("no valid N up to {N_LIMIT}")))?;

    Ok(ConeGeometry { case, rotation: 0, v0, p1, p2, n0, m0, n_min, m_min, horizon })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_plane() {
        let g = cone_from_angles(0.0, FRAC_PI_2, (0.0, 0.0), 3).unwrap();
        assert_eq!((g.n0, g.m0), (1, 1));
        assert_eq!(g.v0, Vertex::new(0, 0));
        assert_eq!(g.p1, StaircasePath::ray(g.v0, Direction::UpRight, Axis::Horizontal));
        let up: Vec<Vertex> = g.p2.vertices().take(5).collect();
        assert!(up.iter().all(|v| v.x == 0));
        assert_eq!(g.case, 1);
        assert_eq!(g.n_min, 3);
    }

    #[test]
    fn symmetric_wedge_has_unit_aspect() {
        let g = cone_from_angles(PI / 4.0, 3.0 * PI / 4.0, (0.5, 0.5), 3).unwrap();
        assert_eq!(g.case, 2);
        assert_eq!((g.n0, g.m0), (1, 1));
        assert!(well_separated(&g.p1, &g.p2, g.n_min, g.n0, g.m0, 3));
    }

    #[test]
    fn rejects_wide_angles() {
        assert!(cone_from_angles(0.0, PI, (0.0, 0.0), 3).is_err());
        assert!(cone_from_angles(0.3, 0.3, (0.0, 0.0), 3).is_err());
        assert!(cone_from_angles(0.0, 1.0, (2.0, 0.0), 3).is_err());
    }

    #[test]
    fn all_cases_are_valid() {
        for (t1, t2) in [(0.2, 1.2), (0.1, 2.5), (0.5, 3.4), (0.0, 0.6), (1.0, 3.1)] {
            let g = cone_from_angles(t1, t2, (0.3, 0.7), 3).unwrap();
            let tan = t2.tan();
            if g.case != 2 {
                assert!((g.m0 as f64) / (g.n0 as f64) < tan, "{t1} {t2}");
            }
            for n in g.n_min..=g.n_min + 3 {
                let ct = g.truncation(n).unwrap();
                assert!(ct.frame.boundary_vertices().contains(&g.v0));
            }
        }
    }

    #[test]
    fn rotated_input() {
        let base = cone_from_angles(0.2, 1.2, (0.5, 0.5), 2).unwrap();
        let turned = cone_from_angles(0.2 + FRAC_PI_2, 1.2 + FRAC_PI_2, (0.5, 0.5), 2).unwrap();
        assert_eq!(turned.rotation, 1);
        assert_eq!(turned.case, base.case);
        assert_eq!((turned.n0, turned.m0), (base.m0, base.n0));
        for n in turned.n_min..=turned.n_min + 2 {
            turned.truncation(n).unwrap();
        }
    }
}
