use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform momentum grid over `[0, 2 pi)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KGrid {
    pub nkx: usize,
    pub nky: usize,
}

impl KGrid {
    pub fn new(nkx: usize, nky: usize) -> Self {
        Self { nkx, nky }
    }

    pub fn square(n: usize) -> Self {
        Self::new(n, n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nkx == 0 || self.nky == 0 {
            return Err(Error::InvalidGrid(format!("empty grid {}x{}", self.nkx, self.nky)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nkx * self.nky
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in row-major order, `kx` fastest.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for j in 0..self.nky {
            for i in 0..self.nkx {
                out.push((
                    TAU * i as f64 / self.nkx as f64,
                    TAU * j as f64 / self.nky as f64,
                ));
            }
        }
        out
    }

    pub fn describe(&self) -> String {
        format!("uniform {}x{} over [0,2pi)^2", self.nkx, self.nky)
    }
}

impl Default for KGrid {
    fn default() -> Self {
        Self::square(64)
    }
}

/// `n` equally spaced momenta in `[0, 2 pi)`.
pub fn line(n: usize) -> Vec<f64> {
    (0..n).map(|i| TAU * i as f64 / n as f64).collect()
}
