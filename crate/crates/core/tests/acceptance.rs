//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any fails.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use polyforge::bounce::{bounce_skeleton, degree_directed};
use polyforge::enumerate::{
    count_class, degree_generic, enumerate_directed_convex, enumerate_parallelogram,
    visit_parallelogram, PolyClass,
};
use polyforge::forest::{
    all_trees, bilateral_to_directed, directed_to_bilateral, from_triplet, join_height_k, phi,
    phi_inv, split_height_k, to_triplet, BilateralWord, OrderedTree,
};
use polyforge::lattice::{alpha_beta, assemble, complete_to_parallelogram};
use polyforge::series::{
    asymptotic_mu, catalan, central_binomial, closed_form_convex, empirical_ratios, gf_marked,
    gf_univariate, identities_check, GfName, MarkedName, MarkedSeries, Series,
};
use polyforge::{CutPath, Polyomino};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn coeff(s: &Series, n: usize) -> BigInt {
    s.to_integers().expect("integral series")[n].clone()
}

fn directed(sp: usize) -> Vec<Polyomino> {
    enumerate_directed_convex(sp).collect()
}

fn c1_directed_counts() -> Outcome {
    let gf = gf_univariate(GfName::Directed, None, 12).map_err(|e| e.to_string())?;
    for sp in 2..=12 {
        let n = count_class(PolyClass::Directed, sp, None);
        let want = central_binomial(sp - 2);
        ensure(BigInt::from(n) == want, || {
            format!("sp {sp}: {n} != {want}")
        })?;
        ensure(coeff(&gf, sp) == want, || {
            format!("sp {sp}: series disagrees")
        })?;
    }
    Ok(())
}

fn c2_parallelogram_counts() -> Outcome {
    let rows: Vec<(usize, u64)> = (2..=14)
        .into_par_iter()
        .map(|sp| (sp, count_class(PolyClass::Parallelogram, sp, None)))
        .collect();
    for (sp, n) in rows {
        let want = catalan(sp - 1);
        ensure(BigInt::from(n) == want, || {
            format!("sp {sp}: {n} != {want}")
        })?;
    }
    Ok(())
}

fn c3_convex_counts() -> Outcome {
    let rows: Vec<(usize, u64)> = (2..=11)
        .into_par_iter()
        .map(|sp| (sp, count_class(PolyClass::Convex, sp, None)))
        .collect();
    for (sp, n) in rows {
        let want = closed_form_convex(sp);
        ensure(BigInt::from(n) == want, || {
            format!("sp {sp}: {n} != {want}")
        })?;
    }
    Ok(())
}

fn c4_bijections() -> Outcome {
    for sp in 2..=12 {
        let all = directed(sp);
        all.par_iter().try_for_each(|d| -> Outcome {
            let p = complete_to_parallelogram(d).map_err(|e| e.to_string())?;
            let (fe, fs) = phi(&p).map_err(|e| e.to_string())?;
            ensure(phi_inv(&fe, &fs) == p, || {
                format!("phi round trip fails on {d:?}")
            })?;
            let t = to_triplet(d).map_err(|e| e.to_string())?;
            ensure(from_triplet(&t).as_ref() == Ok(d), || {
                format!("triplet round trip fails on {d:?}")
            })?;
            let w = directed_to_bilateral(d).map_err(|e| e.to_string())?;
            ensure(bilateral_to_directed(&w).as_ref() == Ok(d), || {
                format!("bilateral round trip fails on {d:?}")
            })
        })?;
        let n = sp - 2;
        if n <= 8 {
            let image: HashSet<String> = all
                .par_iter()
                .map(|d| directed_to_bilateral(d).expect("directed").to_string())
                .collect();
            ensure(image.len() == all.len(), || {
                format!("bilateral collisions at n={n}")
            })?;
            let every: HashSet<String> = all_bilateral(n).into_iter().collect();
            ensure(
                every.len() as u64 == central_binomial(n).to_u64().unwrap(),
                || "word count".into(),
            )?;
            ensure(image == every, || {
                format!("bilateral image differs at n={n}")
            })?;
        }
    }
    Ok(())
}

fn all_bilateral(n: usize) -> Vec<String> {
    (0u32..1 << (2 * n))
        .filter(|m| m.count_ones() as usize == n)
        .map(|m| {
            (0..2 * n)
                .map(|b| if m >> b & 1 == 1 { 'u' } else { 'd' })
                .collect::<String>()
        })
        .inspect(|w| debug_assert!(w.parse::<BilateralWord>().is_ok()))
        .collect()
}

fn c5_degree_agreement() -> Outcome {
    for sp in 2..=10 {
        directed(sp).par_iter().try_for_each(|d| -> Outcome {
            let g = degree_generic(d).map_err(|e| e.to_string())?;
            let b = degree_directed(d).map_err(|e| e.to_string())?;
            ensure(g == b, || format!("generic {g} vs bounce {b} on {d:?}"))?;
            if d.is_parallelogram() {
                let sk = bounce_skeleton(d).map_err(|e| e.to_string())?.k as u32;
                let fo =
                    polyforge::forest::degree_via_forests(d).map_err(|e| e.to_string())? as u32;
                ensure(sk == g && fo == g, || {
                    format!("skeleton {sk} forests {fo} generic {g} on {d:?}")
                })?;
            }
            Ok(())
        })?;
    }
    Ok(())
}

/// `table[sp][deg]` for every polyomino in `polys`.
fn degree_histogram(polys: &[Polyomino]) -> BTreeMap<u32, u64> {
    polys
        .par_iter()
        .map(|p| degree_generic(p).expect("convex"))
        .fold(BTreeMap::new, |mut m, d| {
            *m.entry(d).or_insert(0u64) += 1;
            m
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        })
}

fn at_most(h: &BTreeMap<u32, u64>, k: u32) -> BigInt {
    BigInt::from(h.range(..=k).map(|(_, v)| v).sum::<u64>())
}

fn c6_kpar() -> Outcome {
    let series: Vec<Series> = (1..=4)
        .map(|k| gf_univariate(GfName::Kpar, Some(k), 12).unwrap())
        .collect();
    for sp in 2..=12 {
        let polys: Vec<Polyomino> = enumerate_parallelogram(sp).collect();
        let h = degree_histogram(&polys);
        for k in 1..=4 {
            let want = at_most(&h, k as u32);
            let got = coeff(&series[k - 1], sp);
            ensure(got == want, || {
                format!("k={k} sp={sp}: series {got}, enumeration {want}")
            })?;
        }
    }
    Ok(())
}

fn c7_kdir() -> Outcome {
    let series: Vec<Series> = (0..=3)
        .map(|k| gf_univariate(GfName::Kdir, Some(k), 12).unwrap())
        .collect();
    for sp in 2..=12 {
        let h = degree_histogram(&directed(sp));
        for k in 0..=3 {
            let want = at_most(&h, k as u32);
            let got = coeff(&series[k], sp);
            ensure(got == want, || {
                format!("k={k} sp={sp}: series {got}, enumeration {want}")
            })?;
        }
        // degree zero is exactly the bars
        let bars = directed(sp).iter().filter(|d| d.is_bar()).count();
        ensure(BigInt::from(bars) == coeff(&series[0], sp), || {
            format!("bars at sp={sp}")
        })?;
    }
    Ok(())
}

fn c8_decomposition() -> Outcome {
    for k in 1..=6 {
        let lhs = gf_univariate(GfName::DkMinus, Some(k + 1), 20).unwrap();
        let kdir = gf_univariate(GfName::Kdir, Some(k), 20).unwrap();
        let flat = gf_univariate(GfName::FdFlat, Some(k), 20).unwrap();
        ensure(lhs == kdir.add(&flat), || {
            format!("series identity fails at k={k}")
        })?;
    }
    // {forest height <= k+1} = {degree <= k} disjoint-union
    //   {P_D flat, deg(P_D) = k+1, deg(D) = k+1}
    for sp in 2..=10 {
        let rows: Vec<(usize, u32, bool, usize)> = directed(sp)
            .par_iter()
            .map(|d| {
                let p = complete_to_parallelogram(d).unwrap();
                let (fe, fs) = phi(&p).unwrap();
                let sk = bounce_skeleton(&p).unwrap();
                (
                    fe.height().max(fs.height()),
                    degree_directed(d).unwrap(),
                    sk.flat,
                    sk.k,
                )
            })
            .collect();
        for k in 1..=6usize {
            let mut n_lhs = 0;
            let mut n_flat = 0;
            for &(hf, deg, flat, pk) in &rows {
                let lhs = hf <= k + 1;
                let low = deg as usize <= k;
                let extra = flat && pk == k + 1 && deg as usize == k + 1;
                ensure(lhs == (low || extra) && !(low && extra), || {
                    format!("set identity at sp={sp} k={k}")
                })?;
                n_lhs += usize::from(lhs);
                n_flat += usize::from(extra);
            }
            let dk = gf_univariate(GfName::DkMinus, Some(k + 1), 10).unwrap();
            let fd = gf_univariate(GfName::FdFlat, Some(k), 10).unwrap();
            ensure(coeff(&dk, sp) == BigInt::from(n_lhs), || {
                format!("forest-height count at sp={sp} k={k}")
            })?;
            ensure(coeff(&fd, sp) == BigInt::from(n_flat), || {
                format!("flat count at sp={sp} k={k}")
            })?;
        }
    }
    Ok(())
}

type Joint = BTreeMap<(usize, i32, i32), BigInt>;

fn series_table(s: &MarkedSeries, max: usize) -> Joint {
    let mut out = Joint::new();
    for n in 0..=max {
        for (&(a, b), c) in s.coeff(n).terms() {
            assert!(c.is_integer());
            out.insert((n, a, b), c.to_integer());
        }
    }
    out
}

fn c9_statistics() -> Outcome {
    const MAX: usize = 10;
    let stats: Vec<(usize, [(i32, i32); 6])> = (2..=MAX)
        .flat_map(|sp| directed(sp).into_iter().map(move |d| (sp, d)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|(sp, d)| {
            let st = d.statistics();
            let p = complete_to_parallelogram(d).unwrap();
            let (alpha, beta) = alpha_beta(&p).unwrap();
            let top = d.row_extent(d.height() - 1);
            let right = d.column_extent(d.width() - 1);
            (
                *sp,
                [
                    (alpha as i32 + 1, beta as i32 + 1),
                    (top.1 - top.0 + 1, right.1 - right.0 + 1),
                    (st.width as i32, st.height as i32),
                    (st.outside_corners as i32, 0),
                    (st.inside_corners as i32, 0),
                    (0, st.site_perimeter as i32),
                ],
            )
        })
        .collect();
    let names = [
        MarkedName::ToprowPd,
        MarkedName::ToprowD,
        MarkedName::WidthHeight,
        MarkedName::CornersOut,
        MarkedName::CornersIn,
        MarkedName::Site,
    ];
    for (idx, name) in names.into_iter().enumerate() {
        let mut enumerated = Joint::new();
        for (sp, row) in &stats {
            *enumerated.entry((*sp, row[idx].0, row[idx].1)).or_default() += 1;
        }
        let series = series_table(&gf_marked(name, MAX).map_err(|e| e.to_string())?, MAX);
        ensure(series == enumerated, || {
            format!("{} table differs", name.as_str())
        })?;
    }
    let sym = gf_univariate(GfName::Symmetric, None, 12).unwrap();
    for sp in 2..=12 {
        let n = directed(sp)
            .par_iter()
            .filter(|d| d.statistics().diagonal_symmetric)
            .count();
        ensure(coeff(&sym, sp) == BigInt::from(n), || {
            format!("symmetric count at sp={sp}")
        })?;
    }
    // spot check: with cut e^2 s e s e^3 s^2, 11 outside and 7 inside corners
    // first occur at semi-perimeter 15
    let cut: CutPath = "eeseseeess".parse().unwrap();
    let mut corners = BTreeSet::new();
    visit_parallelogram(15, |p| {
        if alpha_beta(p) == Ok((5, 3)) {
            let st = assemble(p, &cut).unwrap().statistics();
            corners.insert((st.outside_corners, st.inside_corners));
        }
    });
    ensure(corners.contains(&(11, 7)), || {
        format!("corner pairs {corners:?}")
    })
}

fn c10_trees() -> Outcome {
    ensure(all_trees(4).len() == 5, || "trees of size 4".into())?;
    for k in 1..=6 {
        let le = gf_univariate(GfName::TreesLe, Some(k), 12).unwrap();
        let eq = gf_univariate(GfName::TreesEq, Some(k), 12).unwrap();
        for n in 1..=12 {
            let trees = all_trees(n);
            let le_n = trees.iter().filter(|t| t.height() <= k).count();
            let eq_n = trees.iter().filter(|t| t.height() == k).count();
            ensure(coeff(&le, n) == BigInt::from(le_n), || {
                format!("height <= {k}, size {n}")
            })?;
            ensure(coeff(&eq, n) == BigInt::from(eq_n), || {
                format!("height = {k}, size {n}")
            })?;
        }
    }
    for n in 2..=8 {
        let mut images = HashSet::new();
        for t in all_trees(n) {
            if t.height() < 2 {
                continue;
            }
            let parts = split_height_k(&t).map_err(|e| e.to_string())?;
            ensure(join_height_k(&parts).as_ref() == Ok(&t), || {
                format!("split/join fails on {t}")
            })?;
            ensure(images.insert(parts), || format!("split collision on {t}"))?;
        }
        // every admissible sequence joins back to a tree that splits to it
        for k in 2..=n {
            let budget = n + k - 2;
            let mut seqs = Vec::new();
            admissible(k, 2, budget, &mut Vec::new(), &mut seqs);
            let count = all_trees(n).iter().filter(|t| t.height() == k).count();
            ensure(seqs.len() == count, || {
                format!(
                    "size {n} height {k}: {} sequences, {count} trees",
                    seqs.len()
                )
            })?;
            for s in seqs {
                let t = join_height_k(&s).map_err(|e| e.to_string())?;
                ensure(
                    t.height() == k && split_height_k(&t).as_ref() == Ok(&s),
                    || "join/split".into(),
                )?;
            }
        }
    }
    Ok(())
}

/// Sequences `(L_i, R_i)` for `i = from..=k` with `h(L_i) <= i`,
/// `h(R_i) <= i - 1` and total size `budget`.
fn admissible(
    k: usize,
    i: usize,
    budget: usize,
    cur: &mut Vec<OrderedTree>,
    out: &mut Vec<Vec<OrderedTree>>,
) {
    if i > k {
        if budget == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let rest_min = 2 * (k - i);
    for a in 1..=budget.saturating_sub(1 + rest_min) {
        for l in all_trees(a).into_iter().filter(|t| t.height() <= i) {
            for b in 1..=budget - a - rest_min {
                for r in all_trees(b).into_iter().filter(|t| t.height() < i) {
                    cur.push(l.clone());
                    cur.push(r);
                    admissible(k, i + 1, budget - a - b, cur, out);
                    cur.pop();
                    cur.pop();
                }
            }
        }
    }
}

fn c11_identities() -> Outcome {
    let report = identities_check(30, 30);
    let failed: Vec<&str> = report
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    ensure(failed.is_empty(), || format!("failed: {failed:?}"))
}

fn c12_asymptotics() -> Outcome {
    for k in 1..=10 {
        let (mu, root) = asymptotic_mu(k);
        ensure((mu * root - 1.0).abs() < 1e-9, || {
            format!("k={k}: mu*root = {}", mu * root)
        })?;
    }
    let r = empirical_ratios(1, &[40, 60]).map_err(|e| e.to_string())?;
    let drift = (r[1].1 - r[0].1).abs() / r[0].1;
    ensure(drift < 0.05, || {
        format!(
            "ratio drift {drift:.4} between n=40 ({}) and n=60 ({})",
            r[0].1, r[1].1
        )
    })
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 12] = [
        (
            "directed convex counts, sp <= 12",
            c1_directed_counts,
            Some(Duration::from_secs(60)),
        ),
        (
            "parallelogram counts, sp <= 14",
            c2_parallelogram_counts,
            Some(Duration::from_secs(60)),
        ),
        (
            "convex counts, sp <= 11",
            c3_convex_counts,
            Some(Duration::from_secs(300)),
        ),
        (
            "bijection round trips, sp <= 12",
            c4_bijections,
            Some(Duration::from_secs(300)),
        ),
        ("degree agreement, sp <= 10", c5_degree_agreement, None),
        ("k-parallelogram series, k <= 4, sp <= 12", c6_kpar, None),
        ("directed k-convex series, k <= 3, sp <= 12", c7_kdir, None),
        ("decomposition identity, k <= 6", c8_decomposition, None),
        ("statistic series, sp <= 10", c9_statistics, None),
        ("tree layer", c10_trees, None),
        ("polynomial identities", c11_identities, None),
        ("asymptotics", c12_asymptotics, None),
    ];
    let mut failures = 0;
    for (idx, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = check();
        let took = start.elapsed();
        if let (Ok(()), Some(limit)) = (&outcome, limit) {
            if took > *limit {
                outcome = Err(format!("took {took:.1?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({took:.2?})", idx + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2}: FAIL  {name} ({took:.2?}): {why}", idx + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
