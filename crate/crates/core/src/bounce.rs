//! Bounce paths inside directed convex polyominoes, the crossing skeleton of
//! a parallelogram polyomino, and the directed k-convexity test.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{
    alpha_beta_unchecked, complete_unchecked, cut_unchecked, Cell, CutPath, Polyomino,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Dir {
    East,
    North,
}

impl Dir {
    fn turn(self) -> Dir {
        match self {
            Dir::East => Dir::North,
            Dir::North => Dir::East,
        }
    }
}

/// A monotone path whose straight segments are as long as the host
/// polyomino and the target allow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BouncePath {
    pub start: Cell,
    pub first_direction: Dir,
    pub segments: Vec<(Dir, usize)>,
    pub target: Cell,
    /// Direction changes, counting the turn away from the tail when the
    /// path cannot leave in `first_direction`.
    pub changes: usize,
}

impl BouncePath {
    /// Cells visited, from `start` to `target` inclusive.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = vec![self.start];
        let mut cur = self.start;
        for &(d, len) in &self.segments {
            for _ in 0..len {
                cur = match d {
                    Dir::East => Cell::new(cur.i + 1, cur.j),
                    Dir::North => Cell::new(cur.i, cur.j + 1),
                };
                out.push(cur);
            }
        }
        out
    }

    /// Cells at which the path turns, including `start` when the tail turn
    /// is counted.
    pub fn turn_cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        if self
            .segments
            .first()
            .is_some_and(|s| s.0 != self.first_direction)
        {
            out.push(self.start);
        }
        let mut cur = self.start;
        for (idx, &(d, len)) in self.segments.iter().enumerate() {
            cur = match d {
                Dir::East => Cell::new(cur.i + len as i32, cur.j),
                Dir::North => Cell::new(cur.i, cur.j + len as i32),
            };
            if idx + 1 < self.segments.len() {
                out.push(cur);
            }
        }
        out
    }
}

/// Greedy bounce path from `b` to `c` inside `p`, leaving in direction
/// `first`.
pub fn bounce_path(p: &Polyomino, b: Cell, c: Cell, first: Dir) -> Result<BouncePath> {
    for x in [b, c] {
        if !p.contains_cell(x) {
            return Err(Error::CellOutside(x.i, x.j));
        }
    }
    if c.i < b.i || c.j < b.j {
        return Err(Error::NotComparable);
    }
    bounce_unchecked(p, b, c, first)
}

fn bounce_unchecked(p: &Polyomino, b: Cell, c: Cell, first: Dir) -> Result<BouncePath> {
    let mut segments: Vec<(Dir, usize)> = Vec::new();
    let mut cur = b;
    let mut dir = first;
    let mut idle = 0;
    while cur != c {
        let mut len = 0;
        match dir {
            Dir::East => {
                while cur.i < c.i && p.contains(cur.i + 1, cur.j) {
                    cur.i += 1;
                    len += 1;
                }
            }
            Dir::North => {
                while cur.j < c.j && p.contains(cur.i, cur.j + 1) {
                    cur.j += 1;
                    len += 1;
                }
            }
        }
        if len == 0 {
            idle += 1;
            if idle == 2 {
                return Err(Error::Blocked);
            }
        } else {
            idle = 0;
            segments.push((dir, len));
        }
        dir = dir.turn();
    }
    let tail = usize::from(segments.first().is_some_and(|s| s.0 != first));
    let changes = segments.len().saturating_sub(1) + tail;
    Ok(BouncePath {
        start: b,
        first_direction: first,
        segments,
        target: c,
        changes,
    })
}

/// The bounce path with fewer changes; the east-first path wins ties.
pub fn minimal_bounce(p: &Polyomino, b: Cell, c: Cell) -> Result<BouncePath> {
    let r = bounce_path(p, b, c, Dir::East)?;
    let u = bounce_path(p, b, c, Dir::North)?;
    Ok(if u.changes < r.changes { u } else { r })
}

/// Changes of the minimal bounce path from the root to `b`.
pub fn cell_degree(d: &Polyomino, b: Cell) -> Result<usize> {
    if !d.contains_cell(b) {
        return Err(Error::CellOutside(b.i, b.j));
    }
    if !d.is_directed_convex() {
        return Err(Error::NotDirectedConvex);
    }
    Ok(cell_degree_unchecked(d, b))
}

fn cell_degree_unchecked(d: &Polyomino, b: Cell) -> usize {
    let s = d.root();
    let r = bounce_unchecked(d, s, b, Dir::East).expect("directed convex");
    let u = bounce_unchecked(d, s, b, Dir::North).expect("directed convex");
    r.changes.min(u.changes)
}

/// Degree of convexity of a directed convex polyomino.
///
/// The largest cell degree, raised to one for anything that is not a bar:
/// two cells on either side of a missing corner always need a turn.
pub fn degree_directed(d: &Polyomino) -> Result<u32> {
    if !d.is_directed_convex() {
        return Err(Error::NotDirectedConvex);
    }
    Ok(degree_directed_unchecked(d))
}

pub(crate) fn degree_directed_unchecked(d: &Polyomino) -> u32 {
    let floor = u32::from(!d.is_bar());
    d.cells()
        .iter()
        .map(|&b| cell_degree_unchecked(d, b) as u32)
        .fold(floor, u32::max)
}

/// Crossing cells of `r(P)` and `u(P)` followed by the turns of their
/// common tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    /// `(I_h, h)` for `h = 0, 1, ...`.
    pub crossings: Vec<(Cell, usize)>,
    /// Label of the joining cell.
    pub m: usize,
    pub j: Cell,
    pub flat: bool,
    /// Largest label, the degree of convexity.
    pub k: usize,
    pub r_changes: usize,
    pub u_changes: usize,
}

#[derive(Serialize)]
struct SkeletonJson {
    crossings: Vec<[i64; 3]>,
    #[serde(rename = "M")]
    m: usize,
    flat: bool,
    k: usize,
}

impl Skeleton {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&SkeletonJson {
            crossings: self
                .crossings
                .iter()
                .map(|(c, h)| [c.i as i64, c.j as i64, *h as i64])
                .collect(),
            m: self.m,
            flat: self.flat,
            k: self.k,
        })
        .expect("plain data")
    }

    /// Cell carrying label `h`.
    pub fn cell(&self, h: usize) -> Option<Cell> {
        self.crossings.get(h).map(|x| x.0)
    }
}

pub fn bounce_skeleton(p: &Polyomino) -> Result<Skeleton> {
    if !p.is_parallelogram() {
        return Err(Error::NotParallelogram);
    }
    Ok(skeleton_unchecked(p))
}

fn skeleton_unchecked(p: &Polyomino) -> Skeleton {
    let (s, e) = (p.root(), p.top_right());
    let r = bounce_unchecked(p, s, e, Dir::East).expect("parallelogram");
    let u = bounce_unchecked(p, s, e, Dir::North).expect("parallelogram");
    let rc = r.cells();
    let uc = u.cells();
    debug_assert_eq!(rc.len(), uc.len());
    let mut join = rc.len() - 1;
    while join > 0 && rc[join - 1] == uc[join - 1] {
        join -= 1;
    }
    let mut crossings: Vec<(Cell, usize)> = Vec::new();
    for t in 0..join {
        if rc[t] == uc[t] {
            crossings.push((rc[t], crossings.len()));
        }
    }
    let m = crossings.len();
    crossings.push((rc[join], m));
    for t in join + 1..rc.len().saturating_sub(1) {
        let before = (rc[t].i - rc[t - 1].i, rc[t].j - rc[t - 1].j);
        let after = (rc[t + 1].i - rc[t].i, rc[t + 1].j - rc[t].j);
        if before != after {
            crossings.push((rc[t], crossings.len()));
        }
    }
    let k = crossings.len() - 1;
    Skeleton {
        crossings,
        m,
        j: rc[join],
        flat: rc[join] == e,
        k,
        r_changes: r.changes,
        u_changes: u.changes,
    }
}

/// Cells strictly north-east of `I_{k-1}`.
pub fn region_r(p: &Polyomino) -> Result<Vec<Cell>> {
    let sk = bounce_skeleton(p)?;
    region_from(p, &sk)
}

fn region_from(p: &Polyomino, sk: &Skeleton) -> Result<Vec<Cell>> {
    if sk.k == 0 {
        return Err(Error::DegreeZero);
    }
    let anchor = sk.crossings[sk.k - 1].0;
    Ok(p.cells()
        .iter()
        .copied()
        .filter(|c| c.i > anchor.i && c.j > anchor.j)
        .collect())
}

/// Width and height of `R_P` when it is the rectangle in the north-east
/// corner of `p`.
fn corner_rectangle(p: &Polyomino, region: &[Cell]) -> Option<(usize, usize)> {
    let lo_i = region.iter().map(|c| c.i).min()?;
    let lo_j = region.iter().map(|c| c.j).min()?;
    let (a, b) = (p.width() - lo_i, p.height() - lo_j);
    let full =
        region.len() == (a * b) as usize && region.iter().all(|c| c.i >= lo_i && c.j >= lo_j);
    full.then_some((a as usize, b as usize))
}

/// The cut that removes `R_P`: `e e^{α−a} s^b e^a s^{β−b} s`.
pub fn lambda_r(p: &Polyomino) -> Result<CutPath> {
    let sk = bounce_skeleton(p)?;
    lambda_from(p, &sk)
}

fn lambda_from(p: &Polyomino, sk: &Skeleton) -> Result<CutPath> {
    if !sk.flat {
        return Err(Error::NotFlat);
    }
    let region = region_from(p, sk)?;
    let (a, b) = corner_rectangle(p, &region).ok_or(Error::RegionNotRectangle)?;
    let (alpha, beta) = alpha_beta_unchecked(p);
    if a > alpha || b > beta {
        return Err(Error::RegionNotRectangle);
    }
    let mut word = CutPath::block(1 + alpha - a, b).0;
    word.extend(CutPath::block(a, beta - b + 1).0);
    Ok(CutPath(word))
}

/// Directed k-convexity through the completed parallelogram: either `P_D`
/// is already k-convex, or it is flat of degree `k + 1` and the cut of `d`
/// removes at least `R_{P_D}`.
pub fn is_directed_k(d: &Polyomino, k: usize) -> Result<bool> {
    if !d.is_directed_convex() {
        return Err(Error::NotDirectedConvex);
    }
    let p = complete_unchecked(d);
    let sk = skeleton_unchecked(&p);
    if sk.k <= k {
        return Ok(true);
    }
    if k == 0 || !sk.flat || sk.k != k + 1 {
        return Ok(false);
    }
    let lambda = lambda_from(&p, &sk)?;
    Ok(cut_unchecked(d).weakly_below(&lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{degree_generic, visit_directed_convex, visit_parallelogram};

    fn poly(cells: &[(i32, i32)]) -> Polyomino {
        Polyomino::normalize(cells).unwrap()
    }

    fn square() -> Polyomino {
        poly(&[(0, 0), (0, 1), (1, 0), (1, 1)])
    }

    #[test]
    fn bounce_examples() {
        let sq = square();
        let r = bounce_path(&sq, Cell::new(0, 0), Cell::new(1, 1), Dir::East).unwrap();
        assert_eq!(r.segments, vec![(Dir::East, 1), (Dir::North, 1)]);
        assert_eq!(r.changes, 1);
        let bar = poly(&[(0, 0), (1, 0), (2, 0)]);
        let r = bounce_path(&bar, Cell::new(0, 0), Cell::new(2, 0), Dir::East).unwrap();
        assert_eq!(r.segments, vec![(Dir::East, 2)]);
        assert_eq!(r.changes, 0);
        let same = bounce_path(&sq, Cell::new(1, 0), Cell::new(1, 0), Dir::North).unwrap();
        assert!(same.segments.is_empty());
        assert_eq!(same.changes, 0);
        let m = minimal_bounce(&sq, Cell::new(0, 0), Cell::new(1, 1)).unwrap();
        assert_eq!(m.first_direction, Dir::East);
    }

    #[test]
    fn bounce_errors() {
        let sq = square();
        assert_eq!(
            bounce_path(&sq, Cell::new(0, 0), Cell::new(2, 0), Dir::East),
            Err(Error::CellOutside(2, 0))
        );
        assert_eq!(
            bounce_path(&sq, Cell::new(1, 0), Cell::new(0, 1), Dir::East),
            Err(Error::NotComparable)
        );
    }

    #[test]
    fn degrees() {
        let sq = square();
        assert_eq!(cell_degree(&sq, Cell::new(0, 0)), Ok(0));
        assert_eq!(cell_degree(&sq, Cell::new(1, 1)), Ok(1));
        assert_eq!(cell_degree(&sq, Cell::new(1, 0)), Ok(0));
        assert_eq!(degree_directed(&sq), Ok(1));
        assert_eq!(degree_directed(&poly(&[(0, 0), (0, 1), (0, 2)])), Ok(0));
        assert_eq!(degree_directed(&poly(&[(0, 0), (1, 0), (0, 1)])), Ok(1));
        assert_eq!(
            degree_directed(&poly(&[(0, 1), (1, 0), (1, 1)])),
            Err(Error::NotDirectedConvex)
        );
    }

    #[test]
    fn skeleton_examples() {
        let unit = poly(&[(0, 0)]);
        let sk = bounce_skeleton(&unit).unwrap();
        assert_eq!(sk.crossings, vec![(Cell::new(0, 0), 0)]);
        assert!(sk.flat);
        assert_eq!(sk.k, 0);

        let sk = bounce_skeleton(&square()).unwrap();
        assert_eq!(
            sk.crossings,
            vec![(Cell::new(0, 0), 0), (Cell::new(1, 1), 1)]
        );
        assert!(sk.flat);
        assert_eq!((sk.m, sk.k), (1, 1));
        assert_eq!(
            sk.to_json(),
            r#"{"crossings":[[0,0,0],[1,1,1]],"M":1,"flat":true,"k":1}"#
        );
        assert_eq!(region_r(&square()).unwrap(), vec![Cell::new(1, 1)]);
        assert_eq!(lambda_r(&square()).unwrap().to_string(), "eses");
        assert_eq!(region_r(&unit), Err(Error::DegreeZero));
    }

    #[test]
    fn skeleton_agrees_with_oracle() {
        for sp in 2..=9 {
            visit_parallelogram(sp, |p| {
                let sk = bounce_skeleton(p).unwrap();
                assert_eq!(sk.k as u32, degree_generic(p).unwrap(), "{p:?}");
                let diff = sk.r_changes.abs_diff(sk.u_changes);
                assert_eq!(diff, usize::from(!sk.flat), "{p:?}");
                let top = sk.crossings.len() - 1;
                assert_eq!(sk.crossings[top].1, sk.k);
                assert_eq!(sk.cell(0), Some(p.root()));
                if sk.flat {
                    assert_eq!(sk.crossings[sk.m].0, p.top_right());
                }
                // degree of I_h is h up to the joining cell, h - 1 after it
                for &(c, h) in &sk.crossings {
                    let want = if h <= sk.m { h } else { h - 1 };
                    assert_eq!(cell_degree(p, c).unwrap(), want, "{p:?} {c}");
                }
            });
        }
    }

    #[test]
    fn flat_region_is_a_rectangle_of_top_degree_cells() {
        for sp in 3..=9 {
            visit_parallelogram(sp, |p| {
                let sk = bounce_skeleton(p).unwrap();
                if sk.k == 0 {
                    assert_eq!(region_r(p), Err(Error::DegreeZero));
                    return;
                }
                let region = region_r(p).unwrap();
                if sk.flat {
                    assert!(corner_rectangle(p, &region).is_some(), "{p:?}");
                    let (alpha, beta) = alpha_beta_unchecked(p);
                    assert!(lambda_r(p).unwrap().is_cut_for(alpha, beta));
                } else {
                    assert_eq!(lambda_r(p), Err(Error::NotFlat));
                }
                let top: Vec<Cell> = p
                    .cells()
                    .iter()
                    .copied()
                    .filter(|&c| cell_degree(p, c).unwrap() == sk.k)
                    .collect();
                if sk.flat {
                    assert_eq!(top, region, "{p:?}");
                }
            });
        }
    }

    #[test]
    fn directed_degree_matches_oracle() {
        for sp in 2..=8 {
            visit_directed_convex(sp, |d| {
                let deg = degree_directed(d).unwrap();
                assert_eq!(deg, degree_generic(d).unwrap(), "{d:?}");
                for k in 0..=4 {
                    assert_eq!(
                        is_directed_k(d, k).unwrap(),
                        deg as usize <= k,
                        "{d:?} k={k}"
                    );
                }
            });
        }
    }

    #[test]
    fn minimal_bounce_is_optimal_between_any_pair() {
        for sp in 2..=7 {
            visit_parallelogram(sp, |p| {
                let top = bounce_skeleton(p).unwrap().k;
                for &b in p.cells() {
                    for &c in p.cells() {
                        if c.i < b.i || c.j < b.j {
                            continue;
                        }
                        let m = minimal_bounce(p, b, c).unwrap();
                        assert!(m.changes <= top);
                        let best = pair_min_changes(p, b, c);
                        assert_eq!(m.changes, best, "{p:?} {b} {c}");
                    }
                }
            });
        }
    }

    /// Fewest direction changes over all north/east paths from `b` to `c`,
    /// with free choice of the initial direction.
    fn pair_min_changes(p: &Polyomino, b: Cell, c: Cell) -> usize {
        fn go(p: &Polyomino, cur: Cell, c: Cell, last: Option<Dir>) -> usize {
            if cur == c {
                return 0;
            }
            let mut best = usize::MAX;
            for d in [Dir::East, Dir::North] {
                let next = match d {
                    Dir::East => Cell::new(cur.i + 1, cur.j),
                    Dir::North => Cell::new(cur.i, cur.j + 1),
                };
                if next.i > c.i || next.j > c.j || !p.contains_cell(next) {
                    continue;
                }
                let rest = go(p, next, c, Some(d));
                if rest == usize::MAX {
                    continue;
                }
                best = best.min(rest + usize::from(last.is_some_and(|l| l != d)));
            }
            best
        }
        go(p, b, c, None)
    }
}
