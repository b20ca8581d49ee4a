//! Normalized polyominoes, class predicates, statistics, and the
//! completion/cut decomposition of directed convex polyominoes.
//!
//! Coordinates are 0-based: cell `(i, j)` sits in column `i` and row `j`,
//! with the south-west corner of the bounding box at the origin. The usual
//! 1-based column/row numbering is recovered by adding one to each index.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub i: i32,
    pub j: i32,
}

impl Cell {
    pub const fn new(i: i32, j: i32) -> Self {
        Cell { i, j }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

/// A finite, edge-connected, normalized set of cells.
///
/// Cells are kept sorted lexicographically (column, then row). A dense
/// occupancy grid over the bounding box serves as the membership index, and
/// per-column / per-row extents are cached since almost every predicate
/// reads them.
#[derive(Clone)]
pub struct Polyomino {
    cells: Vec<Cell>,
    width: i32,
    height: i32,
    grid: Vec<bool>,
    col_lo: Vec<i32>,
    col_hi: Vec<i32>,
    row_lo: Vec<i32>,
    row_hi: Vec<i32>,
}

impl PartialEq for Polyomino {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

impl Eq for Polyomino {}

impl std::hash::Hash for Polyomino {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.cells.hash(state);
    }
}

impl PartialOrd for Polyomino {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Polyomino {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cells.cmp(&other.cells)
    }
}

impl fmt::Debug for Polyomino {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<(i32, i32)> = self.cells.iter().map(|c| (c.i, c.j)).collect();
        f.debug_struct("Polyomino").field("cells", &cells).finish()
    }
}

impl Polyomino {
    /// Translate `cells` so that both minima are zero and check connectivity.
    pub fn normalize(cells: &[(i32, i32)]) -> Result<Polyomino> {
        if cells.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut seen = HashSet::with_capacity(cells.len());
        for &(i, j) in cells {
            if !seen.insert((i, j)) {
                return Err(Error::Duplicate(i, j));
            }
        }
        let min_i = cells.iter().map(|c| c.0).min().unwrap();
        let min_j = cells.iter().map(|c| c.1).min().unwrap();
        let shifted: Vec<Cell> = cells
            .iter()
            .map(|&(i, j)| Cell::new(i - min_i, j - min_j))
            .collect();
        let p = Polyomino::build(shifted);
        if !p.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(p)
    }

    /// Build from cells that are already normalized and connected.
    pub(crate) fn from_normalized(cells: Vec<Cell>) -> Polyomino {
        let p = Polyomino::build(cells);
        debug_assert!(p.is_connected());
        p
    }

    /// Build from per-column row intervals `[lo, hi]`, column 0 first.
    /// The intervals must describe a normalized connected polyomino.
    pub(crate) fn from_columns(cols: &[(i32, i32)]) -> Polyomino {
        let mut cells = Vec::new();
        for (i, &(lo, hi)) in cols.iter().enumerate() {
            for j in lo..=hi {
                cells.push(Cell::new(i as i32, j));
            }
        }
        Polyomino::from_normalized(cells)
    }

    fn build(mut cells: Vec<Cell>) -> Polyomino {
        cells.sort_unstable();
        let width = cells.iter().map(|c| c.i).max().unwrap() + 1;
        let height = cells.iter().map(|c| c.j).max().unwrap() + 1;
        let mut grid = vec![false; (width * height) as usize];
        let mut col_lo = vec![i32::MAX; width as usize];
        let mut col_hi = vec![i32::MIN; width as usize];
        let mut row_lo = vec![i32::MAX; height as usize];
        let mut row_hi = vec![i32::MIN; height as usize];
        for c in &cells {
            grid[(c.j * width + c.i) as usize] = true;
            let (ci, cj) = (c.i as usize, c.j as usize);
            col_lo[ci] = col_lo[ci].min(c.j);
            col_hi[ci] = col_hi[ci].max(c.j);
            row_lo[cj] = row_lo[cj].min(c.i);
            row_hi[cj] = row_hi[cj].max(c.i);
        }
        Polyomino {
            cells,
            width,
            height,
            grid,
            col_lo,
            col_hi,
            row_lo,
            row_hi,
        }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Number of columns of the bounding box.
    pub fn width(&self) -> i32 {
        self.width
    }

    /// Number of rows of the bounding box.
    pub fn height(&self) -> i32 {
        self.height
    }

    pub fn area(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    pub fn contains(&self, i: i32, j: i32) -> bool {
        i >= 0
            && j >= 0
            && i < self.width
            && j < self.height
            && self.grid[(j * self.width + i) as usize]
    }

    #[inline]
    pub fn contains_cell(&self, c: Cell) -> bool {
        self.contains(c.i, c.j)
    }

    /// Lowest and highest occupied row of column `i`.
    pub fn column_extent(&self, i: i32) -> (i32, i32) {
        (self.col_lo[i as usize], self.col_hi[i as usize])
    }

    /// Leftmost and rightmost occupied column of row `j`.
    pub fn row_extent(&self, j: i32) -> (i32, i32) {
        (self.row_lo[j as usize], self.row_hi[j as usize])
    }

    /// Bounding-box semi-perimeter `width + height`; equals the true
    /// semi-perimeter for convex polyominoes.
    pub fn bbox_semi_perimeter(&self) -> usize {
        (self.width + self.height) as usize
    }

    /// The cell at the south-west corner of the bounding box.
    pub fn root(&self) -> Cell {
        Cell::new(0, 0)
    }

    /// Rightmost cell of the top row.
    pub fn top_right(&self) -> Cell {
        let top = self.height - 1;
        Cell::new(self.row_hi[top as usize], top)
    }

    pub fn transpose(&self) -> Polyomino {
        let cells = self.cells.iter().map(|c| Cell::new(c.j, c.i)).collect();
        Polyomino::build(cells)
    }

    pub fn to_pairs(&self) -> Vec<(i32, i32)> {
        self.cells.iter().map(|c| (c.i, c.j)).collect()
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.grid.len()];
        let start = self.cells[0];
        let mut queue = VecDeque::from([start]);
        seen[(start.j * self.width + start.i) as usize] = true;
        let mut reached = 1;
        while let Some(c) = queue.pop_front() {
            for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let (ni, nj) = (c.i + di, c.j + dj);
                if self.contains(ni, nj) {
                    let idx = (nj * self.width + ni) as usize;
                    if !seen[idx] {
                        seen[idx] = true;
                        reached += 1;
                        queue.push_back(Cell::new(ni, nj));
                    }
                }
            }
        }
        reached == self.cells.len()
    }

    fn columns_contiguous(&self) -> bool {
        (0..self.width).all(|i| {
            let (lo, hi) = self.column_extent(i);
            (lo..=hi).all(|j| self.contains(i, j))
        })
    }

    fn rows_contiguous(&self) -> bool {
        (0..self.height).all(|j| {
            let (lo, hi) = self.row_extent(j);
            (lo..=hi).all(|i| self.contains(i, j))
        })
    }

    fn north_east_reachable(&self) -> bool {
        if !self.contains(0, 0) {
            return false;
        }
        let w = self.width;
        let mut reach = vec![false; self.grid.len()];
        let mut count = 0;
        for j in 0..self.height {
            for i in 0..w {
                if !self.contains(i, j) {
                    continue;
                }
                let ok = (i == 0 && j == 0)
                    || (i > 0 && reach[(j * w + i - 1) as usize])
                    || (j > 0 && reach[((j - 1) * w + i) as usize]);
                if ok {
                    reach[(j * w + i) as usize] = true;
                    count += 1;
                }
            }
        }
        count == self.cells.len()
    }

    pub fn classify(&self) -> ClassReport {
        let column_convex = self.columns_contiguous();
        let row_convex = self.rows_contiguous();
        let convex = column_convex && row_convex;
        let directed = self.north_east_reachable();
        let parallelogram = convex
            && directed
            && self.contains(self.width - 1, self.height - 1)
            && (1..self.width).all(|i| {
                self.col_lo[i as usize] >= self.col_lo[i as usize - 1]
                    && self.col_hi[i as usize] >= self.col_hi[i as usize - 1]
            });
        ClassReport {
            column_convex,
            row_convex,
            convex,
            directed,
            parallelogram,
        }
    }

    pub fn is_convex(&self) -> bool {
        self.columns_contiguous() && self.rows_contiguous()
    }

    pub fn is_directed_convex(&self) -> bool {
        self.is_convex() && self.north_east_reachable()
    }

    pub fn is_parallelogram(&self) -> bool {
        self.classify().parallelogram
    }

    /// True when every cell lies in a single row or a single column.
    pub fn is_bar(&self) -> bool {
        self.width == 1 || self.height == 1
    }

    pub fn statistics(&self) -> StatRecord {
        let mut boundary_edges = 0usize;
        for c in &self.cells {
            for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                if !self.contains(c.i + di, c.j + dj) {
                    boundary_edges += 1;
                }
            }
        }
        let (outside_corners, inside_corners) = self.corner_counts();
        let mut vacant = HashSet::new();
        for c in &self.cells {
            for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                if !self.contains(c.i + di, c.j + dj) {
                    vacant.insert((c.i + di, c.j + dj));
                }
            }
        }
        StatRecord {
            semi_perimeter: boundary_edges / 2,
            area: self.cells.len(),
            width: self.width as usize,
            height: self.height as usize,
            outside_corners,
            inside_corners,
            site_perimeter: vacant.len(),
            diagonal_symmetric: self.transpose() == *self,
        }
    }

    /// Right and left turns of the clockwise boundary walk, read off the
    /// lattice vertices: a vertex with one occupied neighbour cell is a right
    /// turn, three occupied is a left turn, two diagonal cells are a pinch
    /// where the walk turns right twice.
    fn corner_counts(&self) -> (usize, usize) {
        let (mut outside, mut inside) = (0, 0);
        for y in 0..=self.height {
            for x in 0..=self.width {
                let sw = self.contains(x - 1, y - 1);
                let se = self.contains(x, y - 1);
                let nw = self.contains(x - 1, y);
                let ne = self.contains(x, y);
                match [sw, se, nw, ne].iter().filter(|&&b| b).count() {
                    1 => outside += 1,
                    3 => inside += 1,
                    2 if sw == ne => outside += 2,
                    _ => {}
                }
            }
        }
        (outside, inside)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub column_convex: bool,
    pub row_convex: bool,
    pub convex: bool,
    pub directed: bool,
    pub parallelogram: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatRecord {
    pub semi_perimeter: usize,
    pub area: usize,
    pub width: usize,
    pub height: usize,
    pub outside_corners: usize,
    pub inside_corners: usize,
    pub site_perimeter: usize,
    pub diagonal_symmetric: bool,
}

/// One unit step of a cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    East,
    South,
}

/// A monotone east/south word. As a cut of a parallelogram polyomino it
/// traces the north-east boundary of a directed convex polyomino clockwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CutPath(pub Vec<Step>);

impl CutPath {
    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn east_count(&self) -> usize {
        self.0.iter().filter(|&&s| s == Step::East).count()
    }

    pub fn south_count(&self) -> usize {
        self.0.len() - self.east_count()
    }

    /// `e^{a} s^{b}`.
    pub fn block(a: usize, b: usize) -> CutPath {
        let mut v = vec![Step::East; a];
        v.extend(std::iter::repeat_n(Step::South, b));
        CutPath(v)
    }

    /// True when `self` is a cut of a parallelogram with the given
    /// top-row and rightmost-column excess.
    pub fn is_cut_for(&self, alpha: usize, beta: usize) -> bool {
        self.0.first() == Some(&Step::East)
            && self.0.last() == Some(&Step::South)
            && self.east_count() == alpha + 1
            && self.south_count() == beta + 1
    }

    /// Number of south steps taken before each east step.
    fn drops_before_east(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.east_count());
        let mut drops = 0;
        for s in &self.0 {
            match s {
                Step::East => out.push(drops),
                Step::South => drops += 1,
            }
        }
        out
    }

    /// `self ⊆ upper`: `upper` runs weakly above `self`. Both words must have
    /// the same step counts; compares south steps seen before each east step.
    pub fn weakly_below(&self, upper: &CutPath) -> bool {
        if self.east_count() != upper.east_count() || self.south_count() != upper.south_count() {
            return false;
        }
        self.drops_before_east()
            .iter()
            .zip(upper.drops_before_east())
            .all(|(mine, theirs)| *mine >= theirs)
    }

    /// Reverse the word and swap east with south: the cut of the transpose.
    pub fn mirrored(&self) -> CutPath {
        CutPath(
            self.0
                .iter()
                .rev()
                .map(|s| match s {
                    Step::East => Step::South,
                    Step::South => Step::East,
                })
                .collect(),
        )
    }
}

impl fmt::Display for CutPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Step::East => "e",
                Step::South => "s",
            })?;
        }
        Ok(())
    }
}

impl FromStr for CutPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<CutPath> {
        s.chars()
            .map(|ch| match ch {
                'e' | 'E' => Ok(Step::East),
                's' | 'S' => Ok(Step::South),
                other => Err(Error::Parse(format!("unexpected cut letter `{other}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(CutPath)
    }
}

/// `(α, β)`: top-row and rightmost-column sizes of a parallelogram, minus one.
pub fn alpha_beta(p: &Polyomino) -> Result<(usize, usize)> {
    if !p.is_parallelogram() {
        return Err(Error::NotParallelogram);
    }
    Ok(alpha_beta_unchecked(p))
}

pub(crate) fn alpha_beta_unchecked(p: &Polyomino) -> (usize, usize) {
    let (lo, hi) = p.row_extent(p.height() - 1);
    let (blo, bhi) = p.column_extent(p.width() - 1);
    ((hi - lo) as usize, (bhi - blo) as usize)
}

/// Extend the top side east and the right side north to the far corner of
/// the bounding box, giving the parallelogram polyomino `P_D`.
pub fn complete_to_parallelogram(d: &Polyomino) -> Result<Polyomino> {
    if !d.is_directed_convex() {
        return Err(Error::NotDirectedConvex);
    }
    Ok(complete_unchecked(d))
}

pub(crate) fn complete_unchecked(d: &Polyomino) -> Polyomino {
    let (w, h) = (d.width(), d.height());
    let x0 = d.row_extent(h - 1).0;
    let y0 = d.column_extent(w - 1).0;
    let cols: Vec<(i32, i32)> = (0..w)
        .map(|i| {
            let (lo, hi) = d.column_extent(i);
            if i >= x0 {
                (lo, h - 1)
            } else {
                (lo, hi)
            }
        })
        .collect();
    debug_assert!(cols[(w - 1) as usize].0 == y0);
    Polyomino::from_columns(&cols)
}

/// The clockwise boundary word of `d` from the left end of its top row to
/// the bottom of its rightmost column.
pub fn cut_of(d: &Polyomino) -> Result<CutPath> {
    if !d.is_directed_convex() {
        return Err(Error::NotDirectedConvex);
    }
    Ok(cut_unchecked(d))
}

pub(crate) fn cut_unchecked(d: &Polyomino) -> CutPath {
    let (w, h) = (d.width(), d.height());
    let x0 = d.row_extent(h - 1).0;
    let y0 = d.column_extent(w - 1).0;
    let mut steps = Vec::with_capacity((w + h) as usize);
    let mut level = h;
    for i in x0..w {
        let top = d.column_extent(i).1 + 1;
        for _ in top..level {
            steps.push(Step::South);
        }
        level = top;
        steps.push(Step::East);
    }
    for _ in y0..level {
        steps.push(Step::South);
    }
    CutPath(steps)
}

/// Carve the directed convex polyomino described by the cut `cut` out of
/// the parallelogram `p`.
pub fn assemble(p: &Polyomino, cut: &CutPath) -> Result<Polyomino> {
    if !p.is_parallelogram() {
        return Err(Error::NotParallelogram);
    }
    let (alpha, beta) = alpha_beta_unchecked(p);
    if !cut.is_cut_for(alpha, beta) {
        return Err(Error::InvalidCut(format!(
            "`{cut}` needs to start with e, end with s, and have {} e and {} s steps",
            alpha + 1,
            beta + 1
        )));
    }
    let d = assemble_unchecked(p, alpha, cut);
    if !d.is_directed_convex() {
        return Err(Error::InvalidCut(format!(
            "`{cut}` does not carve a directed convex polyomino"
        )));
    }
    Ok(d)
}

pub(crate) fn assemble_unchecked(p: &Polyomino, alpha: usize, cut: &CutPath) -> Polyomino {
    let (w, h) = (p.width(), p.height());
    let x0 = w - 1 - alpha as i32;
    let mut tops = Vec::with_capacity(alpha + 1);
    let mut level = h;
    for s in cut.steps() {
        match s {
            Step::East => tops.push(level - 1),
            Step::South => level -= 1,
        }
    }
    let cols: Vec<(i32, i32)> = (0..w)
        .map(|i| {
            let (lo, hi) = p.column_extent(i);
            if i >= x0 {
                (lo, tops[(i - x0) as usize])
            } else {
                (lo, hi)
            }
        })
        .collect();
    Polyomino::from_columns(&cols)
}

/// JSON form `{"cells": [[i, j], ...]}`, cells sorted by column then row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyominoJson {
    pub cells: Vec<[i32; 2]>,
}

impl From<&Polyomino> for PolyominoJson {
    fn from(p: &Polyomino) -> Self {
        PolyominoJson {
            cells: p.cells().iter().map(|c| [c.i, c.j]).collect(),
        }
    }
}

impl PolyominoJson {
    pub fn to_polyomino(&self) -> Result<Polyomino> {
        let pairs: Vec<(i32, i32)> = self.cells.iter().map(|c| (c[0], c[1])).collect();
        Polyomino::normalize(&pairs)
    }
}

/// `#` grid, top row first.
pub fn render_ascii(p: &Polyomino) -> String {
    let mut out = String::new();
    for j in (0..p.height()).rev() {
        for i in 0..p.width() {
            out.push(if p.contains(i, j) { '#' } else { '.' });
        }
        out.push('\n');
    }
    out
}
