//! Marching squares on a node grid, joined into polylines.

use std::collections::HashMap;

use rayon::prelude::*;

/// Node values of a scalar field on a uniform grid. `NaN` marks excluded nodes.
pub(crate) struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub dx: f64,
    pub dy: f64,
    pub values: Vec<f64>,
}

impl Grid {
    /// Samples `f` on `nx * ny` nodes spanning `[x0, x1] x [y0, y1]`, row by row in parallel.
    pub fn sample<F>(f: F, (x0, x1): (f64, f64), (y0, y1): (f64, f64), nx: usize, ny: usize) -> Self
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        let dx = (x1 - x0) / (nx - 1) as f64;
        let dy = (y1 - y0) / (ny - 1) as f64;
        let values = (0..ny)
            .into_par_iter()
            .flat_map_iter(|j| {
                let y = y0 + j as f64 * dy;
                let f = &f;
                (0..nx).map(move |i| f(x0 + i as f64 * dx, y))
            })
            .collect();
        Self { nx, ny, x0, y0, dx, dy, values }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    fn node(&self, i: usize, j: usize) -> [f64; 2] {
        [self.x0 + i as f64 * self.dx, self.y0 + j as f64 * self.dy]
    }
}

/// A traced level curve; `closed` polylines repeat no point.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Polyline {
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
}

type EdgeId = u64;

/// Level curves `values = level` as polylines, in deterministic order.
pub(crate) fn contour(grid: &Grid, level: f64) -> Vec<Polyline> {
    let (nx, ny) = (grid.nx, grid.ny);
    let h_edge = |i: usize, j: usize| 2 * (j * nx + i) as EdgeId;
    let v_edge = |i: usize, j: usize| 2 * (j * nx + i) as EdgeId + 1;
    let mut points: HashMap<EdgeId, [f64; 2]> = HashMap::new();
    let mut segments: Vec<[EdgeId; 2]> = Vec::new();
    let cross = |a: [f64; 2], va: f64, b: [f64; 2], vb: f64| {
        let t = va / (va - vb);
        [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
    };
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let v = corners.map(|(a, b)| grid.at(a, b) - level);
            if v.iter().any(|x| x.is_nan()) {
                continue;
            }
            let inside = v.map(|x| x > 0.0);
            let edges = [h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)];
            let mut crossing = [false; 4];
            for e in 0..4 {
                let (a, b) = (e, (e + 1) % 4);
                if inside[a] != inside[b] {
                    crossing[e] = true;
                    points.entry(edges[e]).or_insert_with(|| {
                        let (pa, pb) = (grid.node(corners[a].0, corners[a].1), grid.node(corners[b].0, corners[b].1));
                        cross(pa, v[a], pb, v[b])
                    });
                }
            }
            let hits: Vec<usize> = (0..4).filter(|&e| crossing[e]).collect();
            match hits.len() {
                2 => segments.push([edges[hits[0]], edges[hits[1]]]),
                4 => {
                    let center = 0.25 * v.iter().sum::<f64>();
                    if (center > 0.0) == inside[0] {
                        segments.push([edges[0], edges[1]]);
                        segments.push([edges[2], edges[3]]);
                    } else {
                        segments.push([edges[3], edges[0]]);
                        segments.push([edges[1], edges[2]]);
                    }
                }
                _ => {}
            }
        }
    }
    link(&segments, &points)
}

fn link(segments: &[[EdgeId; 2]], points: &HashMap<EdgeId, [f64; 2]>) -> Vec<Polyline> {
    let mut by_edge: HashMap<EdgeId, Vec<usize>> = HashMap::new();
    for (s, seg) in segments.iter().enumerate() {
        for e in seg {
            by_edge.entry(*e).or_default().push(s);
        }
    }
    let mut used = vec![false; segments.len()];
    let next = |edge: EdgeId, used: &[bool]| -> Option<usize> {
        by_edge.get(&edge)?.iter().copied().find(|&s| !used[s])
    };
    let other = |s: usize, edge: EdgeId| if segments[s][0] == edge { segments[s][1] } else { segments[s][0] };
    let mut out = Vec::new();
    for start in 0..segments.len() {
        if used[start] {
            continue;
        }
        used[start] = true;
        let [a, b] = segments[start];
        let mut forward = vec![a, b];
        let mut tail = b;
        while let Some(s) = next(tail, &used) {
            used[s] = true;
            tail = other(s, tail);
            forward.push(tail);
            if tail == a {
                break;
            }
        }
        let closed = forward.len() > 2 && forward.last() == forward.first();
        if closed {
            forward.pop();
        } else {
            let mut head = a;
            let mut backward = Vec::new();
            while let Some(s) = next(head, &used) {
                used[s] = true;
                head = other(s, head);
                backward.push(head);
            }
            backward.reverse();
            backward.extend(forward);
            forward = backward;
        }
        let points = forward.iter().map(|e| points[e]).collect();
        out.push(Polyline { points, closed });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_is_one_closed_curve() {
        let g = Grid::sample(|x, y| x * x + y * y, (-2.0, 2.0), (-2.0, 2.0), 101, 101);
        let curves = contour(&g, 1.0);
        assert_eq!(curves.len(), 1);
        assert!(curves[0].closed);
        for p in &curves[0].points {
            assert!(((p[0] * p[0] + p[1] * p[1]).sqrt() - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn hyperbola_gives_two_open_branches() {
        let g = Grid::sample(|x, y| x * x - y * y, (-2.0, 2.0), (-2.0, 2.0), 64, 64);
        let curves = contour(&g, 1.0);
        assert_eq!(curves.len(), 2);
        assert!(curves.iter().all(|c| !c.closed));
    }
}
