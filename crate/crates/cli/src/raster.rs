//! Hit-count grid over the unit square, written as binary PGM (P5).

use std::io::Write;

use pwa_core::Point64;

#[derive(Clone, Debug, PartialEq)]
pub struct RasterAccumulator {
    pub width: usize,
    pub height: usize,
    pub gamma: f64,
    counts: Vec<u64>,
}

impl RasterAccumulator {
    pub fn new(width: usize, height: usize, gamma: f64) -> Self {
        RasterAccumulator {
            width,
            height,
            gamma,
            counts: vec![0; width * height],
        }
    }

    /// Row 0 is the top edge `y = 1`.
    fn cell(&self, p: Point64) -> Option<usize> {
        if !(0.0..=1.0).contains(&p.x) || !(0.0..=1.0).contains(&p.y) {
            return None;
        }
        let col = ((p.x * self.width as f64) as usize).min(self.width - 1);
        let row = (((1.0 - p.y) * self.height as f64) as usize).min(self.height - 1);
        Some(row * self.width + col)
    }

    pub fn add(&mut self, p: Point64) {
        if let Some(i) = self.cell(p) {
            self.counts[i] += 1;
        }
    }

    pub fn merge(&mut self, other: &RasterAccumulator) {
        assert_eq!((self.width, self.height), (other.width, other.height));
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn count_at(&self, p: Point64) -> u64 {
        self.cell(p).map_or(0, |i| self.counts[i])
    }

    /// Dark points on a white background, `255 (1 − (c/max)^γ)`.
    pub fn to_gray(&self) -> Vec<u8> {
        let max = self.counts.iter().copied().max().unwrap_or(0).max(1) as f64;
        self.counts
            .iter()
            .map(|&c| {
                if c == 0 {
                    255
                } else {
                    let level = (c as f64 / max).powf(self.gamma);
                    (255.0 * (1.0 - level)).round().clamp(0.0, 254.0) as u8
                }
            })
            .collect()
    }

    pub fn write_pgm<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.width, self.height)?;
        out.write_all(&self.to_gray())
    }
}
