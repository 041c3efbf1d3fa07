//! Connected-component labeling.
//!
//! Labels are assigned in row-major order of each component's first pixel,
//! so a given mask always yields the same label map.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::{encode_png_gray16, BinaryMask};

/// Pixel adjacency used to grow regions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectivity {
    /// Edge neighbours only (N, S, E, W).
    FourNeighbor,
    /// Edge and corner neighbours.
    #[default]
    EightNeighbor,
}

impl Connectivity {
    /// Maps the `1`/`2` connectivity numbering (neighbours reachable in
    /// that many orthogonal steps) onto the enum.
    pub fn from_rank(rank: u8) -> Option<Self> {
        match rank {
            1 => Some(Connectivity::FourNeighbor),
            2 => Some(Connectivity::EightNeighbor),
            _ => None,
        }
    }

    pub fn rank(self) -> u8 {
        match self {
            Connectivity::FourNeighbor => 1,
            Connectivity::EightNeighbor => 2,
        }
    }

    /// Neighbour offsets already visited in a row-major scan.
    fn causal_offsets(self) -> &'static [(isize, isize)] {
        match self {
            Connectivity::FourNeighbor => &[(0, -1), (-1, 0)],
            Connectivity::EightNeighbor => &[(0, -1), (-1, -1), (-1, 0), (-1, 1)],
        }
    }
}

/// Connected-component decomposition of a mask. Label 0 is background.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    region_count: u32,
    connectivity: Connectivity,
}

impl LabelMap {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn region_count(&self) -> u32 {
        self.region_count
    }

    pub fn connectivity(&self) -> Connectivity {
        self.connectivity
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.labels[row * self.width + col]
    }

    /// Pixels carrying a nonzero label.
    pub fn foreground(&self) -> BinaryMask {
        BinaryMask::new(self.width, self.height, self.labels.iter().map(|&l| l != 0).collect())
            .expect("label map dimensions are valid")
    }

    /// 16-bit grayscale PNG of the raw label values.
    pub fn encode_png16(&self) -> Result<Vec<u8>> {
        if self.region_count > u16::MAX as u32 {
            return Err(Error::Encode(format!(
                "{} regions exceed the 16-bit label range",
                self.region_count
            )));
        }
        let samples: Vec<u16> = self.labels.iter().map(|&l| l as u16).collect();
        encode_png_gray16(self.width, self.height, &samples)
    }
}

/// Area, bounding box and centroid of one labeled region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub label: u32,
    pub area: usize,
    pub bbox: BoundingBox,
    pub centroid: Centroid,
}

/// Inclusive pixel extents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min_row: usize,
    pub min_col: usize,
    pub max_row: usize,
    pub max_col: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Centroid {
    pub row: f64,
    pub col: f64,
}

struct DisjointSet {
    parent: Vec<u32>,
}

impl DisjointSet {
    fn new() -> Self {
        // index 0 is reserved for background
        Self { parent: vec![0] }
    }

    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> u32 {
        let (ra, rb) = (self.find(a), self.find(b));
        // keep the smaller id as root
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        lo
    }
}

/// Two-pass union-find labeling.
pub fn label_components(mask: &BinaryMask, connectivity: Connectivity) -> LabelMap {
    let (width, height) = mask.dims();
    let bits = mask.bits();
    let mut labels = vec![0u32; bits.len()];
    let mut sets = DisjointSet::new();
    let offsets = connectivity.causal_offsets();

    for row in 0..height {
        for col in 0..width {
            let idx = row * width + col;
            if !bits[idx] {
                continue;
            }
            let mut current = 0u32;
            for &(dr, dc) in offsets {
                let (r, c) = (row as isize + dr, col as isize + dc);
                if r < 0 || c < 0 || c >= width as isize {
                    continue;
                }
                let neighbour = labels[r as usize * width + c as usize];
                if neighbour == 0 {
                    continue;
                }
                current = if current == 0 { neighbour } else { sets.union(current, neighbour) };
            }
            labels[idx] = if current == 0 { sets.make() } else { current };
        }
    }

    // Second pass: resolve to roots and renumber by first appearance.
    let mut final_label = vec![0u32; sets.parent.len()];
    let mut next = 0u32;
    for label in labels.iter_mut() {
        if *label == 0 {
            continue;
        }
        let root = sets.find(*label) as usize;
        if final_label[root] == 0 {
            next += 1;
            final_label[root] = next;
        }
        *label = final_label[root];
    }

    LabelMap { width, height, labels, region_count: next, connectivity }
}

/// One [`Region`] per nonzero label, ordered by label.
pub fn region_properties(lm: &LabelMap) -> Vec<Region> {
    struct Acc {
        area: usize,
        min_row: usize,
        min_col: usize,
        max_row: usize,
        max_col: usize,
        sum_row: u64,
        sum_col: u64,
    }
    let mut acc: Vec<Acc> = (0..lm.region_count)
        .map(|_| Acc {
            area: 0,
            min_row: usize::MAX,
            min_col: usize::MAX,
            max_row: 0,
            max_col: 0,
            sum_row: 0,
            sum_col: 0,
        })
        .collect();

    for (idx, &label) in lm.labels.iter().enumerate() {
        if label == 0 {
            continue;
        }
        let (row, col) = (idx / lm.width, idx % lm.width);
        let a = &mut acc[label as usize - 1];
        a.area += 1;
        a.min_row = a.min_row.min(row);
        a.min_col = a.min_col.min(col);
        a.max_row = a.max_row.max(row);
        a.max_col = a.max_col.max(col);
        a.sum_row += row as u64;
        a.sum_col += col as u64;
    }

    acc.into_iter()
        .enumerate()
        .map(|(i, a)| Region {
            label: i as u32 + 1,
            area: a.area,
            bbox: BoundingBox { min_row: a.min_row, min_col: a.min_col, max_row: a.max_row, max_col: a.max_col },
            centroid: Centroid { row: a.sum_row as f64 / a.area as f64, col: a.sum_col as f64 / a.area as f64 },
        })
        .collect()
}
