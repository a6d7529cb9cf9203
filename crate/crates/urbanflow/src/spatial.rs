//! Uniform-grid index for nearest-point queries in local meter coordinates.
//!
//! Used for snapping GPS records to road nodes and for labeling raster cells
//! with their nearest node. Results are exact: queries agree with a
//! brute-force scan over all points, with ties broken toward the lowest
//! point index.

use crate::geo::LocalProjection;

pub struct GridIndex {
    proj: LocalProjection,
    cell_size_m: f64,
    min_x: f64,
    min_y: f64,
    cols: i64,
    rows: i64,
    cells: std::collections::HashMap<(i64, i64), Vec<u32>>,
    points: Vec<(f64, f64)>,
}

impl GridIndex {
    /// Build an index over `(lon, lat)` points. `cell_size_m` trades memory
    /// for ring-search width; the snap radius is a good choice.
    pub fn build(points_lonlat: &[(f64, f64)], proj: LocalProjection, cell_size_m: f64) -> Self {
        assert!(cell_size_m > 0.0);
        let points: Vec<(f64, f64)> = points_lonlat
            .iter()
            .map(|&(lon, lat)| proj.project(lon, lat))
            .collect();
        let min_x = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let min_y = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let max_x = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let max_y = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let mut index = Self {
            proj,
            cell_size_m,
            min_x,
            min_y,
            cols: (((max_x - min_x) / cell_size_m).floor() as i64 + 1).max(1),
            rows: (((max_y - min_y) / cell_size_m).floor() as i64 + 1).max(1),
            cells: std::collections::HashMap::new(),
            points,
        };
        for (i, &(x, y)) in index.points.iter().enumerate() {
            let key = index.cell_of(x, y);
            index.cells.entry(key).or_default().push(i as u32);
        }
        index
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn cell_of(&self, x: f64, y: f64) -> (i64, i64) {
        (
            ((x - self.min_x) / self.cell_size_m).floor() as i64,
            ((y - self.min_y) / self.cell_size_m).floor() as i64,
        )
    }

    fn scan_cell(&self, key: (i64, i64), x: f64, y: f64, best: &mut Option<(f64, u32)>) {
        let Some(members) = self.cells.get(&key) else {
            return;
        };
        for &i in members {
            let (px, py) = self.points[i as usize];
            let d = ((px - x).powi(2) + (py - y).powi(2)).sqrt();
            let better = match *best {
                None => true,
                Some((bd, bi)) => d < bd || (d == bd && i < bi),
            };
            if better {
                *best = Some((d, i));
            }
        }
    }

    /// Nearest point within `radius_m`, or `None`. Ties go to the lowest index.
    pub fn nearest_within(&self, lon: f64, lat: f64, radius_m: f64) -> Option<(u32, f64)> {
        let (x, y) = self.proj.project(lon, lat);
        let (cx, cy) = self.cell_of(x, y);
        // Any point within radius_m lies within ceil(radius/cell)+1 rings.
        let reach = (radius_m / self.cell_size_m).ceil() as i64 + 1;
        let mut best: Option<(f64, u32)> = None;
        for ring in 0..=reach {
            self.scan_ring(cx, cy, ring, x, y, &mut best);
        }
        match best {
            Some((d, i)) if d <= radius_m => Some((i, d)),
            _ => None,
        }
    }

    /// Nearest point with no radius bound. `None` only for an empty index.
    pub fn nearest(&self, lon: f64, lat: f64) -> Option<(u32, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let (x, y) = self.proj.project(lon, lat);
        let (cx, cy) = self.cell_of(x, y);
        let max_ring = self.max_ring(cx, cy);
        let mut best: Option<(f64, u32)> = None;
        let mut ring = 0i64;
        while ring <= max_ring {
            self.scan_ring(cx, cy, ring, x, y, &mut best);
            if let Some((d, _)) = best {
                // Points in ring r are at least (r-1)*cell from the query, so
                // once that lower bound exceeds the best hit we can stop.
                if (ring as f64 - 1.0) * self.cell_size_m > d {
                    break;
                }
            }
            ring += 1;
        }
        best.map(|(d, i)| (i, d))
    }

    fn max_ring(&self, cx: i64, cy: i64) -> i64 {
        let dx = cx.abs().max((self.cols - 1 - cx).abs());
        let dy = cy.abs().max((self.rows - 1 - cy).abs());
        dx.max(dy) + 1
    }

    fn scan_ring(&self, cx: i64, cy: i64, ring: i64, x: f64, y: f64, best: &mut Option<(f64, u32)>) {
        if ring == 0 {
            self.scan_cell((cx, cy), x, y, best);
            return;
        }
        for dx in -ring..=ring {
            self.scan_cell((cx + dx, cy - ring), x, y, best);
            self.scan_cell((cx + dx, cy + ring), x, y, best);
        }
        for dy in (-ring + 1)..ring {
            self.scan_cell((cx - ring, cy + dy), x, y, best);
            self.scan_cell((cx + ring, cy + dy), x, y, best);
        }
    }
}
