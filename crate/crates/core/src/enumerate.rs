//! Brute-force generators for the three polyomino classes, and the generic
//! degree-of-convexity oracle.
//!
//! None of the generators go through the forest bijection: parallelogram
//! polyominoes come from pairs of boundary words, directed convex ones from
//! parallelograms and all of their cuts, and convex ones from unimodal
//! column-interval sequences. `visit_*` functions call back in generation
//! order; `enumerate_*` collect and sort into canonical order.

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounce;
use crate::error::{Error, Result};
use crate::lattice::{alpha_beta_unchecked, assemble_unchecked, CutPath, Polyomino, Step};

/// Calls `f` once for every parallelogram polyomino of semi-perimeter `sp`.
///
/// Each polyomino is the region between an upper and a lower north/east
/// lattice path of length `sp` that share only their endpoints.
pub fn visit_parallelogram<F: FnMut(&Polyomino)>(sp: usize, mut f: F) {
    if sp < 2 {
        return;
    }
    let mut walk = BoundaryWalk {
        n: sp,
        tops: vec![0; sp],
        bots: vec![0; sp],
    };
    // First steps are forced: the upper path goes north, the lower one east.
    walk.bots[0] = 0;
    walk.extend(1, (0, 1), (1, 0), &mut f);
}

struct BoundaryWalk {
    n: usize,
    tops: Vec<i32>,
    bots: Vec<i32>,
}

impl BoundaryWalk {
    fn extend<F: FnMut(&Polyomino)>(
        &mut self,
        t: usize,
        up: (i32, i32),
        low: (i32, i32),
        f: &mut F,
    ) {
        if t == self.n {
            if up == low {
                let cols: Vec<(i32, i32)> = (0..up.0 as usize)
                    .map(|c| (self.bots[c], self.tops[c]))
                    .collect();
                f(&Polyomino::from_columns(&cols));
            }
            return;
        }
        let remaining = (self.n - t) as i32;
        for up_east in [false, true] {
            let nu = if up_east {
                (up.0 + 1, up.1)
            } else {
                (up.0, up.1 + 1)
            };
            for low_east in [false, true] {
                let nl = if low_east {
                    (low.0 + 1, low.1)
                } else {
                    (low.0, low.1 + 1)
                };
                let gap = nl.0 - nu.0;
                let last = t + 1 == self.n;
                if (last && gap != 0) || (!last && (gap < 1 || gap > remaining - 1)) {
                    continue;
                }
                if up_east {
                    self.tops[up.0 as usize] = up.1 - 1;
                }
                if low_east {
                    self.bots[low.0 as usize] = low.1;
                }
                self.extend(t + 1, nu, nl, f);
            }
        }
    }
}

/// Calls `f` once for every directed convex polyomino of semi-perimeter
/// `sp`, built as a parallelogram polyomino together with one of its cuts.
pub fn visit_directed_convex<F: FnMut(&Polyomino)>(sp: usize, mut f: F) {
    visit_parallelogram(sp, |p| {
        let (alpha, beta) = alpha_beta_unchecked(p);
        for_each_cut(alpha, beta, |cut| f(&assemble_unchecked(p, alpha, cut)));
    });
}

/// Every cut with `alpha + 1` east and `beta + 1` south steps.
pub fn for_each_cut<F: FnMut(&CutPath)>(alpha: usize, beta: usize, mut f: F) {
    fn rec<F: FnMut(&CutPath)>(word: &mut Vec<Step>, e: usize, s: usize, f: &mut F) {
        if e == 0 && s == 0 {
            word.push(Step::South);
            f(&CutPath(word.clone()));
            word.pop();
            return;
        }
        if e > 0 {
            word.push(Step::East);
            rec(word, e - 1, s, f);
            word.pop();
        }
        if s > 0 {
            word.push(Step::South);
            rec(word, e, s - 1, f);
            word.pop();
        }
    }
    let mut word = vec![Step::East];
    rec(&mut word, alpha, beta, &mut f);
}

/// Calls `f` once for every convex polyomino of semi-perimeter `sp`.
///
/// A convex polyomino is a sequence of column intervals `[lo, hi]` where
/// `hi` is unimodal, `lo` is reverse-unimodal and consecutive intervals
/// overlap; its semi-perimeter is width plus height.
pub fn visit_convex<F: FnMut(&Polyomino)>(sp: usize, mut f: F) {
    if sp < 2 {
        return;
    }
    for w in 1..sp {
        let h = (sp - w) as i32;
        let mut cols = Vec::with_capacity(w);
        for lo in 0..h {
            for hi in lo..h {
                cols.push((lo, hi));
                convex_columns(w, h, &mut cols, true, true, lo, hi, &mut f);
                cols.pop();
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn convex_columns<F: FnMut(&Polyomino)>(
    w: usize,
    h: i32,
    cols: &mut Vec<(i32, i32)>,
    lo_falling: bool,
    hi_rising: bool,
    min_lo: i32,
    max_hi: i32,
    f: &mut F,
) {
    if cols.len() == w {
        if min_lo == 0 && max_hi == h - 1 {
            f(&Polyomino::from_columns(cols));
        }
        return;
    }
    let (plo, phi) = *cols.last().unwrap();
    let lo_range = if lo_falling { 0..=phi } else { plo..=phi };
    for lo in lo_range {
        let lo_still_falling = lo_falling && lo <= plo;
        let hi_start = lo.max(plo);
        let hi_end = if hi_rising { h - 1 } else { phi };
        for hi in hi_start..=hi_end {
            let hi_still_rising = hi_rising && hi >= phi;
            cols.push((lo, hi));
            convex_columns(
                w,
                h,
                cols,
                lo_still_falling,
                hi_still_rising,
                min_lo.min(lo),
                max_hi.max(hi),
                f,
            );
            cols.pop();
        }
    }
}

fn collect_sorted(visit: impl FnOnce(&mut dyn FnMut(&Polyomino))) -> Vec<Polyomino> {
    let mut out = Vec::new();
    visit(&mut |p: &Polyomino| out.push(p.clone()));
    out.sort_unstable();
    out
}

/// Parallelogram polyominoes of semi-perimeter `sp`, in canonical order.
pub fn enumerate_parallelogram(sp: usize) -> impl Iterator<Item = Polyomino> {
    collect_sorted(|f| visit_parallelogram(sp, f)).into_iter()
}

/// Directed convex polyominoes of semi-perimeter `sp` (cut-based), in
/// canonical order.
pub fn enumerate_directed_convex(sp: usize) -> impl Iterator<Item = Polyomino> {
    collect_sorted(|f| visit_directed_convex(sp, f)).into_iter()
}

/// Directed convex polyominoes obtained by filtering the convex generator
/// through the directedness predicate; shares no code with the cut-based
/// generator.
pub fn enumerate_directed_convex_filtered(sp: usize) -> impl Iterator<Item = Polyomino> {
    collect_sorted(|f| {
        visit_convex(sp, |p| {
            if p.classify().directed {
                f(p)
            }
        })
    })
    .into_iter()
}

/// Convex polyominoes of semi-perimeter `sp`, in canonical order.
pub fn enumerate_convex(sp: usize) -> impl Iterator<Item = Polyomino> {
    collect_sorted(|f| visit_convex(sp, f)).into_iter()
}

/// Degree of convexity of a convex polyomino by exhaustive search.
///
/// For every cell `b` the minimum number of direction changes to each cell
/// `c` lexicographically after it is found by dynamic programming over
/// monotone paths (north/east when `c` is above `b`, east/south otherwise);
/// reversing a path preserves its change count, so this covers all pairs.
pub fn degree_generic(p: &Polyomino) -> Result<u32> {
    if !p.is_convex() {
        return Err(Error::NotConvex);
    }
    let (w, h) = (p.width(), p.height());
    let n = (w * h) as usize;
    // cost[idx][0]: arriving with a horizontal step, cost[idx][1]: vertical.
    let mut cost = vec![[u32::MAX; 2]; n];
    let mut worst = 0;
    let idx = |i: i32, j: i32| (j * w + i) as usize;
    for b in p.cells() {
        for rising in [true, false] {
            let dj = if rising { 1 } else { -1 };
            let rows: Vec<i32> = if rising {
                (b.j..h).collect()
            } else {
                (0..=b.j).rev().collect()
            };
            for &j in &rows {
                for i in b.i..w {
                    if !p.contains(i, j) {
                        cost[idx(i, j)] = [u32::MAX; 2];
                        continue;
                    }
                    if i == b.i && j == b.j {
                        cost[idx(i, j)] = [0, 0];
                        continue;
                    }
                    let mut here = [u32::MAX; 2];
                    if i > b.i && p.contains(i - 1, j) {
                        let [hz, vt] = cost[idx(i - 1, j)];
                        here[0] = hz.min(vt.saturating_add(1));
                    }
                    if j != b.j && p.contains(i, j - dj) {
                        let [hz, vt] = cost[idx(i, j - dj)];
                        here[1] = vt.min(hz.saturating_add(1));
                    }
                    cost[idx(i, j)] = here;
                    let best = here[0].min(here[1]);
                    if best == u32::MAX {
                        return Err(Error::NotConvex);
                    }
                    worst = worst.max(best);
                }
            }
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolyClass {
    Convex,
    Directed,
    Parallelogram,
}

impl FromStr for PolyClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convex" => Ok(PolyClass::Convex),
            "directed" => Ok(PolyClass::Directed),
            "parallelogram" => Ok(PolyClass::Parallelogram),
            other => Err(Error::Parse(format!("unknown class `{other}`"))),
        }
    }
}

/// Calls `f` for every polyomino of `class` with semi-perimeter `sp` whose
/// degree of convexity is at most `degree_cap`.
pub fn visit_class<F: FnMut(&Polyomino)>(
    class: PolyClass,
    sp: usize,
    degree_cap: Option<u32>,
    mut f: F,
) {
    let keep = |p: &Polyomino| match (degree_cap, class) {
        (None, _) => true,
        (Some(k), PolyClass::Convex) => degree_generic(p).expect("generator yields convex") <= k,
        (Some(k), _) => bounce::degree_directed_unchecked(p) <= k,
    };
    let mut g = |p: &Polyomino| {
        if keep(p) {
            f(p)
        }
    };
    match class {
        PolyClass::Convex => visit_convex(sp, &mut g),
        PolyClass::Directed => visit_directed_convex(sp, &mut g),
        PolyClass::Parallelogram => visit_parallelogram(sp, &mut g),
    }
}

/// Canonically ordered list for one semi-perimeter.
pub fn enumerate_class(class: PolyClass, sp: usize, degree_cap: Option<u32>) -> Vec<Polyomino> {
    collect_sorted(|f| visit_class(class, sp, degree_cap, f))
}

pub fn count_class(class: PolyClass, sp: usize, degree_cap: Option<u32>) -> u64 {
    let mut n = 0u64;
    visit_class(class, sp, degree_cap, |_| n += 1);
    n
}

/// Exact counts for `2 <= sp <= max_sp`, computed in parallel across
/// semi-perimeters; rows come back in increasing `sp` order.
pub fn count_table(class: PolyClass, max_sp: usize, degree_cap: Option<u32>) -> Vec<(usize, u64)> {
    (2..=max_sp)
        .into_par_iter()
        .map(|sp| (sp, count_class(class, sp, degree_cap)))
        .collect()
}

/// CSV rendering with header `sp,count`.
pub fn count_table_csv(rows: &[(usize, u64)]) -> String {
    let mut out = String::from("sp,count\n");
    for (sp, n) in rows {
        out.push_str(&format!("{sp},{n}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    /// Every connected subset of a `w x h` box that touches all four sides
    /// and is convex: the naive oracle for the interval characterization.
    fn naive_convex(sp: usize) -> HashSet<Polyomino> {
        let mut out = HashSet::new();
        for w in 1..sp as i32 {
            let h = sp as i32 - w;
            let n = (w * h) as u32;
            for mask in 1u64..(1u64 << n) {
                let cells: Vec<(i32, i32)> = (0..n)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| ((b as i32) % w, (b as i32) / w))
                    .collect();
                let Ok(p) = Polyomino::normalize(&cells) else {
                    continue;
                };
                if p.width() == w && p.height() == h && p.classify().convex {
                    out.insert(p);
                }
            }
        }
        out
    }

    #[test]
    fn convex_generator_matches_naive_subsets() {
        for sp in 2..=6 {
            let generated: Vec<Polyomino> = enumerate_convex(sp).collect();
            let set: HashSet<Polyomino> = generated.iter().cloned().collect();
            assert_eq!(set.len(), generated.len(), "duplicates at sp {sp}");
            assert_eq!(set, naive_convex(sp), "sp {sp}");
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_parallelogram(2).count(), 1);
        assert_eq!(enumerate_parallelogram(4).count(), 5);
        assert_eq!(enumerate_parallelogram(7).count(), 132);
        assert_eq!(enumerate_directed_convex(2).count(), 1);
        assert_eq!(enumerate_directed_convex(4).count(), 6);
        assert_eq!(enumerate_directed_convex(8).count(), 924);
        assert_eq!(enumerate_convex(2).count(), 1);
        assert_eq!(enumerate_convex(3).count(), 2);
        assert_eq!(enumerate_convex(4).count(), 7);
        assert_eq!(enumerate_parallelogram(1).count(), 0);
    }

    #[test]
    fn streams_are_canonical_and_class_correct() {
        for sp in 2..=8 {
            let par: Vec<_> = enumerate_parallelogram(sp).collect();
            assert!(par.windows(2).all(|w| w[0] < w[1]));
            assert!(par
                .iter()
                .all(|p| p.is_parallelogram() && p.statistics().semi_perimeter == sp));
            let dir: Vec<_> = enumerate_directed_convex(sp).collect();
            assert!(dir.windows(2).all(|w| w[0] < w[1]));
            assert!(dir.iter().all(|p| {
                let c = p.classify();
                c.directed && c.convex && p.statistics().semi_perimeter == sp
            }));
            let cvx: Vec<_> = enumerate_convex(sp).collect();
            assert!(cvx.windows(2).all(|w| w[0] < w[1]));
            assert!(cvx
                .iter()
                .all(|p| p.classify().convex && p.statistics().semi_perimeter == sp));
        }
    }

    #[test]
    fn cut_and_filter_generators_agree() {
        for sp in 2..=9 {
            let a: Vec<_> = enumerate_directed_convex(sp).collect();
            let b: Vec<_> = enumerate_directed_convex_filtered(sp).collect();
            assert_eq!(a, b, "sp {sp}");
        }
    }

    #[test]
    fn degree_generic_examples() {
        let bar = Polyomino::normalize(&[(0, 0), (1, 0), (2, 0), (3, 0)]).unwrap();
        assert_eq!(degree_generic(&bar), Ok(0));
        let sq = Polyomino::normalize(&[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert_eq!(degree_generic(&sq), Ok(1));
        let u = Polyomino::normalize(&[(0, 0), (1, 0), (2, 0), (0, 1), (2, 1)]).unwrap();
        assert_eq!(degree_generic(&u), Err(Error::NotConvex));
        // staircase needing two turns between its far corners
        let z = Polyomino::normalize(&[(0, 0), (1, 0), (1, 1), (1, 2), (2, 2)]).unwrap();
        assert_eq!(degree_generic(&z), Ok(2));
        // a plus-shaped cross: arms reach each other with one turn
        let plus = Polyomino::normalize(&[(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)]).unwrap();
        assert_eq!(degree_generic(&plus), Ok(1));
    }

    #[test]
    fn degree_is_bounded_by_semi_perimeter() {
        for sp in 2..=8 {
            visit_convex(sp, |p| assert!(degree_generic(p).unwrap() as usize <= sp));
        }
    }

    #[test]
    fn count_table_examples() {
        assert_eq!(
            count_table(PolyClass::Convex, 4, Some(1)).last(),
            Some(&(4, 7))
        );
        assert_eq!(
            count_table(PolyClass::Directed, 4, None),
            vec![(2, 1), (3, 2), (4, 6)]
        );
        assert_eq!(
            count_table(PolyClass::Parallelogram, 5, None).last(),
            Some(&(5, 14))
        );
        assert_eq!(count_table_csv(&[(2, 1), (3, 2)]), "sp,count\n2,1\n3,2\n");
    }

    #[test]
    fn cuts_cover_all_words() {
        let mut seen = Vec::new();
        for_each_cut(2, 1, |c| seen.push(c.to_string()));
        assert_eq!(seen, vec!["eeess", "eeses", "esees"]);
    }
}
