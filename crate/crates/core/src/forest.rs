//! Ordered trees and forests, the lighting map between parallelogram
//! polyominoes and pairs of forests, triplets, and Dyck encodings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounce::{self, Dir};
use crate::error::{Error, Result};
use crate::lattice::{
    alpha_beta_unchecked, assemble, complete_unchecked, cut_unchecked, Cell, CutPath, Polyomino,
    Step,
};

/// A rooted plane tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OrderedTree {
    pub children: Vec<OrderedTree>,
}

impl OrderedTree {
    pub fn leaf() -> Self {
        OrderedTree {
            children: Vec::new(),
        }
    }

    pub fn node(children: Vec<OrderedTree>) -> Self {
        OrderedTree { children }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(OrderedTree::size).sum::<usize>()
    }

    /// Nodes on a longest root-to-leaf path.
    pub fn height(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(OrderedTree::height)
            .max()
            .unwrap_or(0)
    }

    fn write_parens(&self, out: &mut String) {
        out.push('(');
        for c in &self.children {
            c.write_parens(out);
        }
        out.push(')');
    }
}

impl fmt::Display for OrderedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_parens(&mut s);
        f.write_str(&s)
    }
}

impl FromStr for OrderedTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let t = parse_tree(bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::BadTree(format!("trailing input in `{s}`")));
        }
        Ok(t)
    }
}

fn parse_tree(b: &[u8], pos: &mut usize) -> Result<OrderedTree> {
    if b.get(*pos) != Some(&b'(') {
        return Err(Error::BadTree(format!("expected `(` at offset {pos}")));
    }
    *pos += 1;
    let mut children = Vec::new();
    loop {
        match b.get(*pos) {
            Some(b'(') => children.push(parse_tree(b, pos)?),
            Some(b')') => {
                *pos += 1;
                return Ok(OrderedTree { children });
            }
            _ => return Err(Error::BadTree(format!("unbalanced at offset {pos}"))),
        }
    }
}

/// An ordered sequence of trees.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Forest {
    pub trees: Vec<OrderedTree>,
}

impl Forest {
    pub fn new(trees: Vec<OrderedTree>) -> Self {
        Forest { trees }
    }

    pub fn size(&self) -> usize {
        self.trees.iter().map(OrderedTree::size).sum()
    }

    pub fn height(&self) -> usize {
        self.trees
            .iter()
            .map(OrderedTree::height)
            .max()
            .unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.trees.iter().map(ToString::to_string).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        items
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<_>>()
            .map(Forest::new)
    }
}

/// All ordered trees with `n` nodes, in increasing order of their
/// parenthesis strings.
pub fn all_trees(n: usize) -> Vec<OrderedTree> {
    if n == 0 {
        return Vec::new();
    }
    let mut out: Vec<OrderedTree> = all_forests(n - 1)
        .into_iter()
        .map(|f| OrderedTree::node(f.trees))
        .collect();
    out.sort_by_cached_key(ToString::to_string);
    out
}

/// All forests with `n` nodes in total.
pub fn all_forests(n: usize) -> Vec<Forest> {
    let mut table: Vec<Vec<Forest>> = vec![vec![Forest::default()]];
    for m in 1..=n {
        let mut here = Vec::new();
        // first tree of size s, followed by any forest of size m - s
        for s in 1..=m {
            for inner in &table[s - 1] {
                for rest in &table[m - s] {
                    let mut trees = vec![OrderedTree::node(inner.trees.clone())];
                    trees.extend(rest.trees.iter().cloned());
                    here.push(Forest::new(trees));
                }
            }
        }
        table.push(here);
    }
    table.swap_remove(n)
}

/// A tree whose nodes remember the polyomino cell they were lit from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellTree {
    pub cell: Cell,
    pub children: Vec<CellTree>,
}

impl CellTree {
    pub fn shape(&self) -> OrderedTree {
        OrderedTree::node(self.children.iter().map(CellTree::shape).collect())
    }

    /// Depth of the node at `cell` (root depth 1), if present.
    pub fn depth_of(&self, cell: Cell) -> Option<usize> {
        if self.cell == cell {
            return Some(1);
        }
        self.children
            .iter()
            .find_map(|c| c.depth_of(cell).map(|d| d + 1))
    }
}

/// Lighting forests of a parallelogram polyomino with their source cells:
/// `(F_e, F_s)`.
pub fn phi_cells(p: &Polyomino) -> Result<(Vec<CellTree>, Vec<CellTree>)> {
    if !p.is_parallelogram() {
        return Err(Error::NotParallelogram);
    }
    let (w, h) = (p.width(), p.height());
    let top: Vec<i32> = (0..w).map(|c| p.column_extent(c).1).collect();
    let right: Vec<i32> = (0..h).map(|r| p.row_extent(r).1).collect();

    fn column(c: i32, top: &[i32], right: &[i32]) -> CellTree {
        // rows whose right end is this column, north to south
        let children = (0..right.len() as i32 - 1)
            .rev()
            .filter(|&r| right[r as usize] == c)
            .map(|r| row(r, top, right))
            .collect();
        CellTree {
            cell: Cell::new(c, top[c as usize]),
            children,
        }
    }
    fn row(r: i32, top: &[i32], right: &[i32]) -> CellTree {
        // columns whose top is this row, east to west
        let children = (0..top.len() as i32 - 1)
            .rev()
            .filter(|&c| top[c as usize] == r)
            .map(|c| column(c, top, right))
            .collect();
        CellTree {
            cell: Cell::new(right[r as usize], r),
            children,
        }
    }

    let fe = (0..w - 1)
        .filter(|&c| top[c as usize] == h - 1)
        .map(|c| column(c, &top, &right))
        .collect();
    let fs = (0..h - 1)
        .filter(|&r| right[r as usize] == w - 1)
        .map(|r| row(r, &top, &right))
        .collect();
    Ok((fe, fs))
}

/// `(F_e, F_s)` for a parallelogram polyomino.
pub fn phi(p: &Polyomino) -> Result<(Forest, Forest)> {
    let (fe, fs) = phi_cells(p)?;
    let shape = |v: Vec<CellTree>| Forest::new(v.iter().map(CellTree::shape).collect());
    Ok((shape(fe), shape(fs)))
}

/// The parallelogram polyomino whose lighting forests are `(fe, fs)`.
pub fn phi_inv(fe: &Forest, fs: &Forest) -> Polyomino {
    // Columns are listed east to west and rows north to south; entry 0 of
    // each list is the corner cell E. Each entry stores the list position
    // of its parent on the other side.
    let mut cols: Vec<(usize, &OrderedTree)> = fe.trees.iter().rev().map(|t| (0, t)).collect();
    let mut rows: Vec<(usize, &OrderedTree)> = fs.trees.iter().rev().map(|t| (0, t)).collect();
    let (mut pc, mut pr) = (0, 0);
    while pc < cols.len() || pr < rows.len() {
        if pc < cols.len() {
            let t = cols[pc].1;
            rows.extend(t.children.iter().map(|ch| (pc + 1, ch)));
            pc += 1;
        }
        if pr < rows.len() {
            let t = rows[pr].1;
            cols.extend(t.children.iter().map(|ch| (pr + 1, ch)));
            pr += 1;
        }
    }
    let w = cols.len() as i32 + 1;
    let h = rows.len() as i32 + 1;
    let mut top = vec![h - 1; w as usize];
    for (p, &(parent, _)) in cols.iter().enumerate() {
        top[(w - 2 - p as i32) as usize] = h - 1 - parent as i32;
    }
    let mut right = vec![w - 1; h as usize];
    for (q, &(parent, _)) in rows.iter().enumerate() {
        right[(h - 2 - q as i32) as usize] = w - 1 - parent as i32;
    }
    let cols: Vec<(i32, i32)> = (0..w)
        .map(|c| {
            let lo = (0..h)
                .find(|&r| c <= right[r as usize])
                .expect("row h-1 reaches every column");
            (lo, top[c as usize])
        })
        .collect();
    Polyomino::from_columns(&cols)
}

/// `(F_e, F_s, λ)`: the code of a directed convex polyomino.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triplet {
    pub fe: Forest,
    pub fs: Forest,
    pub cut: CutPath,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TripletJson {
    pub fe: Vec<String>,
    pub fs: Vec<String>,
    pub cut: String,
}

impl From<&Triplet> for TripletJson {
    fn from(t: &Triplet) -> Self {
        TripletJson {
            fe: t.fe.to_strings(),
            fs: t.fs.to_strings(),
            cut: t.cut.to_string(),
        }
    }
}

impl TripletJson {
    pub fn to_triplet(&self) -> Result<Triplet> {
        Ok(Triplet {
            fe: Forest::from_strings(&self.fe)?,
            fs: Forest::from_strings(&self.fs)?,
            cut: self.cut.parse()?,
        })
    }
}

pub fn to_triplet(d: &Polyomino) -> Result<Triplet> {
    if !d.is_directed_convex() {
        return Err(Error::NotDirectedConvex);
    }
    let (fe, fs) = phi(&complete_unchecked(d))?;
    Ok(Triplet {
        fe,
        fs,
        cut: cut_unchecked(d),
    })
}

pub fn from_triplet(t: &Triplet) -> Result<Polyomino> {
    if !t.cut.is_cut_for(t.fe.len(), t.fs.len()) {
        return Err(Error::InvalidTriplet(format!(
            "cut `{}` needs to start with e, end with s, and have {} e and {} s steps",
            t.cut,
            t.fe.len() + 1,
            t.fs.len() + 1
        )));
    }
    let p = phi_inv(&t.fe, &t.fs);
    debug_assert_eq!(alpha_beta_unchecked(&p), (t.fe.len(), t.fs.len()));
    assemble(&p, &t.cut).map_err(|e| Error::InvalidTriplet(e.to_string()))
}

/// Up or down step of a lattice path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ud {
    U,
    D,
}

fn ud_string(w: &[Ud]) -> String {
    w.iter()
        .map(|s| if *s == Ud::U { 'u' } else { 'd' })
        .collect()
}

fn parse_ud(s: &str) -> Result<Vec<Ud>> {
    s.chars()
        .map(|ch| match ch {
            'u' | 'U' => Ok(Ud::U),
            'd' | 'D' => Ok(Ud::D),
            other => Err(Error::Parse(format!("unexpected path letter `{other}`"))),
        })
        .collect()
}

fn balanced(w: &[Ud]) -> bool {
    w.iter().filter(|&&s| s == Ud::U).count() * 2 == w.len()
}

/// A balanced up/down word that never dips below its starting level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DyckWord(Vec<Ud>);

impl DyckWord {
    pub fn new(steps: Vec<Ud>) -> Result<Self> {
        let mut level = 0i64;
        for s in &steps {
            level += if *s == Ud::U { 1 } else { -1 };
            if level < 0 {
                return Err(Error::NotDyck(ud_string(&steps)));
            }
        }
        if level != 0 {
            return Err(Error::NotDyck(ud_string(&steps)));
        }
        Ok(DyckWord(steps))
    }

    pub fn steps(&self) -> &[Ud] {
        &self.0
    }

    pub fn semi_length(&self) -> usize {
        self.0.len() / 2
    }
}

impl fmt::Display for DyckWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&ud_string(&self.0))
    }
}

impl FromStr for DyckWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DyckWord::new(parse_ud(s)?)
    }
}

/// A balanced up/down word with no positivity constraint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BilateralWord(Vec<Ud>);

impl BilateralWord {
    pub fn new(steps: Vec<Ud>) -> Result<Self> {
        if !balanced(&steps) {
            return Err(Error::NotBilateral(ud_string(&steps)));
        }
        Ok(BilateralWord(steps))
    }

    pub fn steps(&self) -> &[Ud] {
        &self.0
    }

    pub fn semi_length(&self) -> usize {
        self.0.len() / 2
    }
}

impl fmt::Display for BilateralWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&ud_string(&self.0))
    }
}

impl FromStr for BilateralWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BilateralWord::new(parse_ud(s)?)
    }
}

/// Tour encoding `u D'(T) d`, where `D'(T)` concatenates the encodings of
/// the root's subtrees.
pub fn tree_to_dyck(t: &OrderedTree) -> DyckWord {
    fn tour(t: &OrderedTree, out: &mut Vec<Ud>) {
        out.push(Ud::U);
        for c in &t.children {
            tour(c, out);
        }
        out.push(Ud::D);
    }
    let mut out = Vec::with_capacity(2 * t.size());
    tour(t, &mut out);
    DyckWord(out)
}

/// Inverse of [`tree_to_dyck`]; the word must return to its base level only
/// at the end.
pub fn dyck_to_tree(w: &DyckWord) -> Result<OrderedTree> {
    let s = &w.0;
    if s.is_empty() || s[0] != Ud::U {
        return Err(Error::NotDyck(w.to_string()));
    }
    let mut stack: Vec<Vec<OrderedTree>> = vec![Vec::new()];
    for (idx, step) in s.iter().enumerate() {
        match step {
            Ud::U => stack.push(Vec::new()),
            Ud::D => {
                let children = stack.pop().expect("Dyck words are balanced");
                stack
                    .last_mut()
                    .expect("Dyck words are balanced")
                    .push(OrderedTree::node(children));
                if stack.len() == 1 && idx + 1 != s.len() {
                    return Err(Error::NotDyck(format!("{w} is not elevated")));
                }
            }
        }
    }
    Ok(stack.pop().and_then(|mut v| v.pop()).expect("non-empty"))
}

/// Concatenates one block per letter of `lambda`: the tour of the next
/// tree of `fe` for `e`, and the mirrored tour of the next tree of `fs`
/// for `s`.
pub fn triplet_to_bilateral(fe: &Forest, fs: &Forest, lambda: &CutPath) -> Result<BilateralWord> {
    if lambda.east_count() != fe.len() || lambda.south_count() != fs.len() {
        return Err(Error::InvalidTriplet(format!(
            "`{lambda}` needs {} e and {} s steps",
            fe.len(),
            fs.len()
        )));
    }
    let (mut ie, mut is) = (fe.trees.iter(), fs.trees.iter());
    let mut out = Vec::new();
    for step in lambda.steps() {
        match step {
            Step::East => out.extend(tree_to_dyck(ie.next().expect("counted")).0),
            Step::South => out.extend(tree_to_dyck(is.next().expect("counted")).0.iter().map(
                |s| match s {
                    Ud::U => Ud::D,
                    Ud::D => Ud::U,
                },
            )),
        }
    }
    Ok(BilateralWord(out))
}

/// Splits a bilateral word at its returns to level zero.
pub fn bilateral_to_triplet(b: &BilateralWord) -> (Forest, Forest, CutPath) {
    let (mut fe, mut fs, mut lambda) = (Vec::new(), Vec::new(), Vec::new());
    let mut level = 0i64;
    let mut start = 0;
    for (idx, s) in b.0.iter().enumerate() {
        level += if *s == Ud::U { 1 } else { -1 };
        if level == 0 {
            let block = &b.0[start..=idx];
            let positive = block[0] == Ud::U;
            let steps: Vec<Ud> = block
                .iter()
                .map(|&s| {
                    if positive {
                        s
                    } else if s == Ud::U {
                        Ud::D
                    } else {
                        Ud::U
                    }
                })
                .collect();
            let tree = dyck_to_tree(&DyckWord(steps)).expect("primitive block");
            if positive {
                fe.push(tree);
                lambda.push(Step::East);
            } else {
                fs.push(tree);
                lambda.push(Step::South);
            }
            start = idx + 1;
        }
    }
    (Forest::new(fe), Forest::new(fs), CutPath(lambda))
}

pub fn directed_to_bilateral(d: &Polyomino) -> Result<BilateralWord> {
    let t = to_triplet(d)?;
    let inner = CutPath(t.cut.steps()[1..t.cut.len() - 1].to_vec());
    triplet_to_bilateral(&t.fe, &t.fs, &inner)
}

pub fn bilateral_to_directed(b: &BilateralWord) -> Result<Polyomino> {
    let (fe, fs, inner) = bilateral_to_triplet(b);
    let mut cut = vec![Step::East];
    cut.extend(inner.0);
    cut.push(Step::South);
    from_triplet(&Triplet {
        fe,
        fs,
        cut: CutPath(cut),
    })
}

/// Cuts a tree of height `k >= 2` along the path from the root to its
/// rightmost deepest node.
///
/// For each chain node, from the parent of that deepest node up to the root,
/// emits two trees: a copy of the node keeping the subtrees left of the chain
/// (height at most `i`), then a copy keeping those to its right (height at
/// most `i - 1`), where `i = 2, ..., k`. The sizes add up to
/// `size(T) + k - 2`.
pub fn split_height_k(t: &OrderedTree) -> Result<Vec<OrderedTree>> {
    let k = t.height();
    if k < 2 {
        return Err(Error::HeightTooSmall(k));
    }
    let mut chain: Vec<(&OrderedTree, usize)> = Vec::new();
    let mut cur = t;
    let mut need = k;
    while need > 1 {
        let pos = cur
            .children
            .iter()
            .rposition(|c| c.height() == need - 1)
            .expect("height bookkeeping");
        chain.push((cur, pos));
        cur = &cur.children[pos];
        need -= 1;
    }
    let mut out = Vec::with_capacity(2 * (k - 1));
    for &(node, pos) in chain.iter().rev() {
        out.push(OrderedTree::node(node.children[..pos].to_vec()));
        out.push(OrderedTree::node(node.children[pos + 1..].to_vec()));
    }
    Ok(out)
}

/// Inverse of [`split_height_k`]; rejects sequences that break the height
/// constraints.
pub fn join_height_k(parts: &[OrderedTree]) -> Result<OrderedTree> {
    if parts.len() < 2 || !parts.len().is_multiple_of(2) {
        return Err(Error::BadTree(format!(
            "expected an even number of parts, got {}",
            parts.len()
        )));
    }
    let mut cur = OrderedTree::leaf();
    for (idx, pair) in parts.chunks(2).enumerate() {
        let i = idx + 2;
        let (left, right) = (&pair[0], &pair[1]);
        if left.height() > i || right.height() > i - 1 {
            return Err(Error::BadTree(format!(
                "part pair {idx} exceeds heights ({i}, {})",
                i - 1
            )));
        }
        let mut children = left.children.clone();
        children.push(cur);
        children.extend(right.children.iter().cloned());
        cur = OrderedTree::node(children);
    }
    Ok(cur)
}

/// `max(h(F_e), h(F_s))`, minus one when the heights differ.
pub fn degree_via_forests(p: &Polyomino) -> Result<usize> {
    let (fe, fs) = phi(p)?;
    let (he, hs) = (fe.height(), fs.height());
    Ok(he.max(hs) - usize::from(he != hs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ForestId {
    E,
    S,
    Different,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chains {
    pub l_r: usize,
    pub l_u: usize,
    pub same_forest: bool,
    pub forest_id: ForestId,
}

/// The chains traced by the turning cells of `r(P)` and `u(P)`.
///
/// Each turning cell is a node of one of the lighting forests and each one
/// is the parent of the previous, so a chain ends at a root; `forest_id`
/// says which forest each chain belongs to, or `Degenerate` if one of the
/// chains is empty.
pub fn chains_dr_du(p: &Polyomino) -> Result<Chains> {
    let (fe, fs) = phi_cells(p)?;
    let (s, e) = (p.root(), p.top_right());
    let r = bounce::bounce_path(p, s, e, Dir::East)?;
    let u = bounce::bounce_path(p, s, e, Dir::North)?;
    let (dr, du) = (r.turn_cells(), u.turn_cells());
    let which = |chain: &[Cell]| -> Option<ForestId> {
        let last = *chain.last()?;
        if fe.iter().any(|t| t.cell == last) {
            Some(ForestId::E)
        } else if fs.iter().any(|t| t.cell == last) {
            Some(ForestId::S)
        } else {
            None
        }
    };
    let (a, b) = (which(&dr), which(&du));
    let forest_id = match (a, b) {
        (Some(x), Some(y)) if x == y => x,
        (Some(_), Some(_)) => ForestId::Different,
        _ => ForestId::Degenerate,
    };
    Ok(Chains {
        l_r: dr.len(),
        l_u: du.len(),
        same_forest: matches!(forest_id, ForestId::E | ForestId::S),
        forest_id,
    })
}
