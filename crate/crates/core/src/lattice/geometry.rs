use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::Axis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeKind {
    Chain,
    Ring,
    Square,
    Honeycomb,
}

/// Lattice geometry.
///
/// * `chain` / `ring`: `cells = [L]`, sites `0..L`; a ring is a periodic chain.
/// * `square`: `cells = [Lx, Ly]`, site `y * Lx + x`.
/// * `honeycomb`: `cells = [nx, ny]` counts hexagonal plaquettes in a brick-wall
///   embedding. Open axes hold `2 nx + 1` columns and `ny + 1` rows, so `[1, 1]`
///   is one hexagon (6 sites) and `[2, 1]` two fused hexagons (10 sites).
///   Periodic x uses `2 nx` columns (`nx >= 2`); periodic y uses `ny` rows
///   (`ny` even). Site `(x, y)` has index `y * width + x`; sites `(x, y)` and
///   `(x, y + 1)` share a vertical `z` bond when `x + y` is even; horizontal
///   bond `(x, y)-(x + 1, y)` is an `x` bond when `x + y` is even and a `y`
///   bond otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub kind: LatticeKind,
    #[serde(alias = "dimensions")]
    pub cells: Vec<usize>,
    #[serde(default)]
    pub periodic: Vec<bool>,
}

/// Bond `(i, j)` with `i < j` and, on honeycomb lattices, its Kitaev label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    pub label: Option<Axis>,
}

impl LatticeSpec {
    pub fn chain(len: usize) -> Self {
        Self {
            kind: LatticeKind::Chain,
            cells: vec![len],
            periodic: vec![false],
        }
    }

    pub fn ring(len: usize) -> Self {
        Self {
            kind: LatticeKind::Ring,
            cells: vec![len],
            periodic: vec![true],
        }
    }

    pub fn square(lx: usize, ly: usize, periodic: [bool; 2]) -> Self {
        Self {
            kind: LatticeKind::Square,
            cells: vec![lx, ly],
            periodic: periodic.to_vec(),
        }
    }

    pub fn honeycomb(nx: usize, ny: usize) -> Self {
        Self {
            kind: LatticeKind::Honeycomb,
            cells: vec![nx, ny],
            periodic: vec![false, false],
        }
    }

    fn periodic_axis(&self, axis: usize) -> bool {
        match self.kind {
            LatticeKind::Ring => true,
            _ => self.periodic.get(axis).copied().unwrap_or(false),
        }
    }

    fn expect_axes(&self, n: usize) -> Result<()> {
        if self.cells.len() != n {
            return Err(Error::InvalidArgument(format!(
                "{:?} lattice needs {n} cell count(s), got {}",
                self.kind,
                self.cells.len()
            )));
        }
        if self.cells.iter().any(|&c| c == 0) {
            return Err(Error::InvalidArgument("lattice has zero sites".into()));
        }
        Ok(())
    }

    /// Brick-wall `(width, height)` of a honeycomb lattice.
    fn brick_dims(&self) -> Result<(usize, usize)> {
        let (nx, ny) = (self.cells[0], self.cells[1]);
        let w = if self.periodic_axis(0) {
            if nx < 2 {
                return Err(Error::InvalidArgument("periodic honeycomb x needs nx >= 2".into()));
            }
            2 * nx
        } else {
            2 * nx + 1
        };
        let h = if self.periodic_axis(1) {
            if ny < 2 || ny % 2 != 0 {
                return Err(Error::InvalidArgument("periodic honeycomb y needs even ny >= 2".into()));
            }
            ny
        } else {
            ny + 1
        };
        Ok((w, h))
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            LatticeKind::Chain | LatticeKind::Ring => self.expect_axes(1),
            LatticeKind::Square => self.expect_axes(2),
            LatticeKind::Honeycomb => {
                self.expect_axes(2)?;
                self.brick_dims().map(|_| ())
            }
        }
    }

    pub fn num_sites(&self) -> Result<usize> {
        self.validate()?;
        Ok(match self.kind {
            LatticeKind::Chain | LatticeKind::Ring => self.cells[0],
            LatticeKind::Square => self.cells[0] * self.cells[1],
            LatticeKind::Honeycomb => {
                let (w, h) = self.brick_dims()?;
                w * h
            }
        })
    }

    /// Nearest-neighbour bonds, deduplicated and sorted.
    pub fn bonds(&self) -> Result<Vec<Bond>> {
        self.validate()?;
        let mut out: Vec<Bond> = Vec::new();
        let mut push = |a: usize, b: usize, label: Option<Axis>| {
            if a != b {
                let (i, j) = if a < b { (a, b) } else { (b, a) };
                out.push(Bond { i, j, label });
            }
        };
        match self.kind {
            LatticeKind::Chain | LatticeKind::Ring => {
                let l = self.cells[0];
                for x in 0..l.saturating_sub(1) {
                    push(x, x + 1, None);
                }
                if self.periodic_axis(0) && l > 2 {
                    push(l - 1, 0, None);
                }
            }
            LatticeKind::Square => {
                let (lx, ly) = (self.cells[0], self.cells[1]);
                let idx = |x: usize, y: usize| y * lx + x;
                for y in 0..ly {
                    for x in 0..lx {
                        if x + 1 < lx {
                            push(idx(x, y), idx(x + 1, y), None);
                        } else if self.periodic_axis(0) && lx > 2 {
                            push(idx(x, y), idx(0, y), None);
                        }
                        if y + 1 < ly {
                            push(idx(x, y), idx(x, y + 1), None);
                        } else if self.periodic_axis(1) && ly > 2 {
                            push(idx(x, y), idx(x, 0), None);
                        }
                    }
                }
            }
            LatticeKind::Honeycomb => {
                let (w, h) = self.brick_dims()?;
                let idx = |x: usize, y: usize| y * w + x;
                for y in 0..h {
                    for x in 0..w {
                        let label = if (x + y) % 2 == 0 { Axis::X } else { Axis::Y };
                        if x + 1 < w {
                            push(idx(x, y), idx(x + 1, y), Some(label));
                        } else if self.periodic_axis(0) {
                            push(idx(x, y), idx(0, y), Some(label));
                        }
                        if (x + y) % 2 == 0 {
                            if y + 1 < h {
                                push(idx(x, y), idx(x, y + 1), Some(Axis::Z));
                            } else if self.periodic_axis(1) {
                                push(idx(x, y), idx(x, 0), Some(Axis::Z));
                            }
                        }
                    }
                }
            }
        }
        out.sort();
        out.dedup_by(|a, b| a.i == b.i && a.j == b.j);
        Ok(out)
    }
}
