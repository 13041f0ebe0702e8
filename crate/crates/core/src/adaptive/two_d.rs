use crate::error::{Error, Result};
use crate::interpolant::evaluation_grid_2d;
use crate::points::PointSet;

use super::{Changes, NodeStructure, Removal, Thresholds};

/// Quadrant sign pattern, in child-slot order.
const QUADRANTS: [[f64; 2]; 4] = [[-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0], [1.0, 1.0]];

const INITIAL_DEPTH: u32 = 4;
const INITIAL_BOUNDARY_PER_EDGE: usize = 16;

#[derive(Debug, Clone, PartialEq)]
struct Cell {
    center: [f64; 2],
    /// Half of the side length.
    half: f64,
    depth: u32,
    children: [Option<usize>; 4],
}

impl Cell {
    fn child_center(&self, q: usize) -> [f64; 2] {
        let h = 0.5 * self.half;
        [
            self.center[0] + QUADRANTS[q][0] * h,
            self.center[1] + QUADRANTS[q][1] * h,
        ]
    }

    fn is_childless(&self) -> bool {
        self.children.iter().all(Option::is_none)
    }
}

/// Quadtree node layout on the square `[a, b]²` plus a fixed boundary frame.
///
/// Every cell of the tree carries an interpolation node at its center. The
/// base level is a uniform grid of cells that is never coarsened. Each cell
/// has four potential children (its quadrants); the centers of the quadrants
/// that do not exist yet are the cell's check points. Refinement creates the
/// quadrant cell whose check residual is too large, so exactly the offending
/// check point becomes a node. A childless cell above the base level is
/// removed when all four of its check residuals are below the coarsening
/// threshold.
///
/// Base cells tile the square and every child occupies its own quadrant of
/// its parent, so the cells form a nested dyadic partition and all node
/// positions are distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet2D {
    a: f64,
    b: f64,
    base_depth: u32,
    boundary_per_edge: usize,
    /// Cells in depth-first pre-order, base cells row by row.
    cells: Vec<Cell>,
    boundary: Vec<[f64; 2]>,
}

impl NodeSet2D {
    /// The standard starting layout: a 16 x 16 grid of cell centers plus
    /// 64 boundary nodes, 320 nodes in total.
    pub fn initial(a: f64, b: f64) -> Result<Self> {
        Self::uniform(a, b, INITIAL_DEPTH, INITIAL_BOUNDARY_PER_EDGE)
    }

    /// `4^depth` uniform base cells and `4 · boundary_per_edge` boundary
    /// nodes (each edge includes exactly one corner).
    pub fn uniform(a: f64, b: f64, depth: u32, boundary_per_edge: usize) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidDomain { a, b });
        }
        if depth > 12 {
            return Err(Error::InvalidConfig(format!("base depth {depth} too large")));
        }
        let m = 1usize << depth;
        let half = (b - a) / (2 * m) as f64;
        let mut cells = Vec::with_capacity(m * m);
        for j in 0..m {
            for i in 0..m {
                cells.push(Cell {
                    center: [base_coord(a, half, i), base_coord(a, half, j)],
                    half,
                    depth,
                    children: [None; 4],
                });
            }
        }
        Ok(Self {
            a,
            b,
            base_depth: depth,
            boundary_per_edge,
            cells,
            boundary: boundary_frame(a, b, boundary_per_edge),
        })
    }

    /// Number of tree cells (interior nodes).
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn boundary(&self) -> &[[f64; 2]] {
        &self.boundary
    }

    pub fn interior_nodes(&self) -> PointSet {
        PointSet::from_2d(&self.cells.iter().map(|c| c.center).collect::<Vec<_>>())
    }

    /// Side lengths of all cells.
    pub fn cell_sides(&self) -> impl Iterator<Item = f64> + '_ {
        self.cells.iter().map(|c| 2.0 * c.half)
    }

    /// Check points as (cell, quadrant) pairs in canonical order.
    fn check_slots(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cells.iter().enumerate().flat_map(|(ci, cell)| {
            (0..4)
                .filter(move |&q| cell.children[q].is_none())
                .map(move |q| (ci, q))
        })
    }

    fn rebuild(&self, old: usize, remove: &[bool], add: &[[bool; 4]], out: &mut Vec<Cell>) -> Option<usize> {
        if remove[old] {
            return None;
        }
        let cell = &self.cells[old];
        let idx = out.len();
        out.push(Cell {
            children: [None; 4],
            ..cell.clone()
        });
        let mut children = [None; 4];
        for (q, slot) in children.iter_mut().enumerate() {
            if let Some(child) = cell.children[q] {
                *slot = self.rebuild(child, remove, add, out);
            } else if add[old][q] {
                *slot = Some(out.len());
                out.push(Cell {
                    center: cell.child_center(q),
                    half: 0.5 * cell.half,
                    depth: cell.depth + 1,
                    children: [None; 4],
                });
            }
        }
        out[idx].children = children;
        Some(idx)
    }
}

fn base_coord(a: f64, half: f64, i: usize) -> f64 {
    a + (2 * i + 1) as f64 * half
}

fn boundary_frame(a: f64, b: f64, per_edge: usize) -> Vec<[f64; 2]> {
    if per_edge == 0 {
        return Vec::new();
    }
    let h = (b - a) / per_edge as f64;
    let step = |i: usize| i as f64 * h;
    let mut out = Vec::with_capacity(4 * per_edge);
    out.extend((0..per_edge).map(|i| [a + step(i), a]));
    out.extend((0..per_edge).map(|i| [b, a + step(i)]));
    out.extend((0..per_edge).map(|i| [b - step(i), b]));
    out.extend((0..per_edge).map(|i| [a, b - step(i)]));
    out
}

impl NodeStructure for NodeSet2D {
    fn dim(&self) -> usize {
        2
    }

    fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    fn nodes(&self) -> PointSet {
        let mut pts = self.interior_nodes();
        for p in &self.boundary {
            pts.push(p);
        }
        pts
    }

    fn check_points(&self) -> (PointSet, Vec<usize>) {
        let mut pts = PointSet::empty(2);
        let mut owners = Vec::new();
        for (ci, q) in self.check_slots() {
            pts.push(&self.cells[ci].child_center(q));
            owners.push(ci);
        }
        (pts, owners)
    }

    fn update(&self, residuals: &[f64], th: &Thresholds) -> (Self, Changes) {
        let slots: Vec<(usize, usize)> = self.check_slots().collect();
        assert_eq!(residuals.len(), slots.len(), "one residual per check point");
        let mut changes = Changes::default();
        let mut add = vec![[false; 4]; self.cells.len()];
        let mut remove = vec![false; self.cells.len()];

        let mut r = 0;
        while r < slots.len() {
            let ci = slots[r].0;
            let cell = &self.cells[ci];
            let count = slots[r..].iter().take_while(|s| s.0 == ci).count();
            let range = r..r + count;

            if cell.depth > self.base_depth
                && cell.is_childless()
                && residuals[range.clone()].iter().all(|&v| v < th.coarse)
            {
                remove[ci] = true;
                changes.removed.push(Removal {
                    node: cell.center.to_vec(),
                    checks: range.clone().collect(),
                });
            } else {
                for k in range {
                    if residuals[k] > th.refine {
                        // A quadrant's side equals its parent's half side.
                        if cell.half >= th.h_min {
                            add[ci][slots[k].1] = true;
                            changes.added.push(k);
                        } else {
                            changes.skipped.push(k);
                        }
                    }
                }
            }
            r += count;
        }

        let mut cells = Vec::with_capacity(self.cells.len() + changes.added.len());
        // Base cells are the roots, and are never removed.
        let roots = (0..self.cells.len()).filter(|&i| self.cells[i].depth == self.base_depth);
        for root in roots {
            self.rebuild(root, &remove, &add, &mut cells);
        }
        (Self { cells, ..self.clone() }, changes)
    }

    fn default_h_min(&self) -> f64 {
        (self.b - self.a) * 2f64.powi(-12)
    }

    fn evaluation_grid(&self) -> PointSet {
        evaluation_grid_2d(self.a, self.b)
    }

    fn validate(&self, h_min: f64) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        let m = 1usize << self.base_depth;
        let half = (self.b - self.a) / (2 * m) as f64;

        let mut visited = vec![false; self.cells.len()];
        let mut order = Vec::with_capacity(self.cells.len());
        fn walk(cells: &[Cell], i: usize, visited: &mut [bool], order: &mut Vec<usize>) -> bool {
            if visited[i] {
                return false;
            }
            visited[i] = true;
            order.push(i);
            cells[i]
                .children
                .iter()
                .flatten()
                .all(|&c| walk(cells, c, visited, order))
        }
        let roots: Vec<usize> = (0..self.cells.len())
            .filter(|&i| self.cells[i].depth == self.base_depth)
            .collect();
        if roots.len() != m * m {
            return bad(format!("expected {} base cells, found {}", m * m, roots.len()));
        }
        for j in 0..m {
            for i in 0..m {
                let root = roots[j * m + i];
                let cell = &self.cells[root];
                let expected = [base_coord(self.a, half, i), base_coord(self.a, half, j)];
                if cell.center != expected || cell.half != half || cell.depth != self.base_depth {
                    return bad(format!("base cell {root} does not match the uniform grid"));
                }
                if !walk(&self.cells, root, &mut visited, &mut order) {
                    return bad("cell reachable twice".into());
                }
            }
        }
        if order.len() != self.cells.len() || order.iter().enumerate().any(|(k, &i)| k != i) {
            return bad("cells are not a single pre-ordered forest".into());
        }
        for cell in &self.cells {
            for (q, child) in cell.children.iter().enumerate() {
                if let Some(c) = *child {
                    let c = &self.cells[c];
                    if c.center != cell.child_center(q) || c.half != 0.5 * cell.half || c.depth != cell.depth + 1 {
                        return bad(format!("child {q} of cell at {:?} is not its quadrant", cell.center));
                    }
                }
            }
            if 2.0 * cell.half < h_min * (1.0 - 1e-9) {
                return bad(format!("cell side {} below h_min {h_min}", 2.0 * cell.half));
            }
        }
        if self.boundary != boundary_frame(self.a, self.b, self.boundary_per_edge) {
            return bad("boundary frame modified".into());
        }
        Ok(())
    }
}
