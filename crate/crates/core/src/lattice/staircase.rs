//! Monotone staircase paths: alternating vertical and horizontal runs.

use super::geometry::Vertex;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Vertical,
    Horizontal,
}

impl Axis {
    fn swap(self) -> Axis {
        match self {
            Axis::Vertical => Axis::Horizontal,
            Axis::Horizontal => Axis::Vertical,
        }
    }
}

/// Direction class of a staircase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    UpRight,
    UpLeft,
    DownRight,
    DownLeft,
}

impl Direction {
    /// (horizontal sign, vertical sign)
    pub fn signs(self) -> (i32, i32) {
        match self {
            Direction::UpRight => (1, 1),
            Direction::UpLeft => (-1, 1),
            Direction::DownRight => (1, -1),
            Direction::DownLeft => (-1, -1),
        }
    }

    fn from_signs(h: i32, v: i32) -> Direction {
        match (h > 0, v > 0) {
            (true, true) => Direction::UpRight,
            (false, true) => Direction::UpLeft,
            (true, false) => Direction::DownRight,
            (false, false) => Direction::DownLeft,
        }
    }
}

/// What a staircase does once its listed runs are used up.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    /// Continue along one axis forever.
    Ray(Axis),
    /// Repeat these runs forever.
    Cycle(Vec<(Axis, u32)>),
}

/// An infinite staircase from `origin`.
///
/// For the up-right class the segments (m_k, l_k) mean: up m_1, right l_1,
/// up m_2, right l_2, and so on. Only m_1 and l_1 may vanish.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StaircasePath {
    origin: Vertex,
    direction: Direction,
    runs: Vec<(Axis, u32)>,
    tail: Tail,
}

impl StaircasePath {
    /// Builds a path from segments (m_k, l_k) followed by `tail`.
    pub fn new(origin: Vertex, direction: Direction, segments: &[(u32, u32)], tail: Tail) -> Result<Self> {
        if let Some(k) = segments.iter().skip(1).position(|&(m, l)| m == 0 || l == 0) {
            return Err(Error::InvalidArgument(format!(
                "segment {} of a staircase has an empty run",
                k + 2
            )));
        }
        if let Tail::Cycle(c) = &tail {
            if c.is_empty() || c.iter().any(|&(_, n)| n == 0) {
                return Err(Error::InvalidArgument("cycle runs must be non-empty".into()));
            }
        }
        let runs = segments
            .iter()
            .flat_map(|&(m, l)| [(Axis::Vertical, m), (Axis::Horizontal, l)])
            .filter(|&(_, n)| n > 0)
            .collect();
        Ok(StaircasePath { origin, direction, runs, tail })
    }

    /// Repeats the given segments forever.
    pub fn periodic(origin: Vertex, direction: Direction, segments: &[(u32, u32)]) -> Result<Self> {
        if segments.iter().any(|&(m, l)| m == 0 || l == 0) {
            return Err(Error::InvalidArgument("periodic segments need both runs".into()));
        }
        let cycle = segments
            .iter()
            .flat_map(|&(m, l)| [(Axis::Vertical, m), (Axis::Horizontal, l)])
            .filter(|&(_, n)| n > 0)
            .collect();
        StaircasePath::new(origin, direction, &[], Tail::Cycle(cycle))
    }

    /// A straight ray along one axis in the direction class's sense.
    pub fn ray(origin: Vertex, direction: Direction, axis: Axis) -> Self {
        StaircasePath { origin, direction, runs: Vec::new(), tail: Tail::Ray(axis) }
    }

    /// Explicit runs followed by a tail.
    pub fn from_runs(origin: Vertex, direction: Direction, runs: Vec<(Axis, u32)>, tail: Tail) -> Self {
        let runs = runs.into_iter().filter(|&(_, n)| n > 0).collect();
        StaircasePath { origin, direction, runs, tail }
    }

    pub fn origin(&self) -> Vertex {
        self.origin
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn runs(&self) -> &[(Axis, u32)] {
        &self.runs
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// Length of the first vertical run (m_1).
    pub fn first_vertical(&self) -> u32 {
        match self.runs.first() {
            Some(&(Axis::Vertical, n)) => n,
            Some(_) => 0,
            None => match &self.tail {
                Tail::Ray(Axis::Vertical) => u32::MAX,
                Tail::Cycle(c) if c[0].0 == Axis::Vertical => c[0].1,
                _ => 0,
            },
        }
    }

    /// Unit moves, forever.
    pub fn moves(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        let (hs, vs) = self.direction.signs();
        let unit = move |a: Axis| match a {
            Axis::Vertical => (0, vs),
            Axis::Horizontal => (hs, 0),
        };
        let head = self
            .runs
            .iter()
            .flat_map(move |&(a, n)| std::iter::repeat(unit(a)).take(n as usize));
        let tail: Box<dyn Iterator<Item = (i32, i32)>> = match &self.tail {
            Tail::Ray(a) => Box::new(std::iter::repeat(unit(*a))),
            Tail::Cycle(c) => Box::new(
                c.iter()
                    .cycle()
                    .flat_map(move |&(a, n)| std::iter::repeat(unit(a)).take(n as usize)),
            ),
        };
        head.chain(tail)
    }

    /// Vertices starting at the origin, forever.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        let start = self.origin;
        std::iter::once(start).chain(self.moves().scan(start, |v, (dx, dy)| {
            *v = v.offset(dx, dy);
            Some(*v)
        }))
    }

    /// The same path turned a quarter counter-clockwise about (0, 0).
    pub fn rotate(&self) -> StaircasePath {
        let (hs, vs) = self.direction.signs();
        let turn = |runs: &[(Axis, u32)]| runs.iter().map(|&(a, n)| (a.swap(), n)).collect::<Vec<_>>();
        StaircasePath {
            origin: self.origin.rotate(),
            direction: Direction::from_signs(-vs, hs),
            runs: turn(&self.runs),
            tail: match &self.tail {
                Tail::Ray(a) => Tail::Ray(a.swap()),
                Tail::Cycle(c) => Tail::Cycle(turn(c)),
            },
        }
    }

    /// The same runs from a different origin.
    pub fn translated(&self, origin: Vertex) -> StaircasePath {
        StaircasePath { origin, ..self.clone() }
    }
}
