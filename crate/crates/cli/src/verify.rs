//! Cross-checks run by `polyforge verify`.

use std::io::Write;

use clap::ValueEnum;
use num_bigint::BigInt;
use rayon::prelude::*;

use polyforge::bounce::{degree_directed, is_directed_k};
use polyforge::enumerate::{
    degree_generic, enumerate_convex, enumerate_directed_convex, enumerate_parallelogram,
};
use polyforge::forest::{
    bilateral_to_directed, degree_via_forests, directed_to_bilateral, from_triplet, phi, phi_inv,
    to_triplet,
};
use polyforge::series::{
    catalan, closed_form_convex, gf_univariate, identities_check, GfName, Series,
};
use polyforge::Polyomino;

/// Convex enumeration grows fast, so its checks stop here.
const CONVEX_SP_LIMIT: usize = 11;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Bijections,
    Counts,
    Identities,
    Bounce,
    All,
}

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn coeff(s: &Series, n: usize) -> BigInt {
    s.to_integers()
        .map(|c| c.get(n).cloned().unwrap_or_default())
        .unwrap_or_default()
}

fn directed(sp: usize) -> Vec<Polyomino> {
    enumerate_directed_convex(sp).collect()
}

fn per_polyomino(max_sp: usize, f: impl Fn(&Polyomino) -> Check + Sync) -> Check {
    (2..=max_sp).try_for_each(|sp| directed(sp).par_iter().try_for_each(&f))
}

fn bijections(max_sp: usize) -> Vec<(String, Check)> {
    let forests = (2..=max_sp).try_for_each(|sp| {
        enumerate_parallelogram(sp).try_for_each(|p| {
            let (fe, fs) = phi(&p).map_err(|e| e.to_string())?;
            ensure(phi_inv(&fe, &fs) == p, || {
                format!("forest pair round trip fails on {p:?}")
            })
        })
    });
    let triplets = per_polyomino(max_sp, |d| {
        let t = to_triplet(d).map_err(|e| e.to_string())?;
        ensure(from_triplet(&t).as_ref() == Ok(d), || {
            format!("triplet round trip fails on {d:?}")
        })
    });
    let words = per_polyomino(max_sp, |d| {
        let w = directed_to_bilateral(d).map_err(|e| e.to_string())?;
        ensure(bilateral_to_directed(&w).as_ref() == Ok(d), || {
            format!("bilateral round trip fails on {d:?}")
        })
    });
    vec![
        ("parallelogram <-> forest pair".into(), forests),
        ("directed convex <-> triplet".into(), triplets),
        ("directed convex <-> bilateral word".into(), words),
    ]
}

fn counts(max_sp: usize) -> Vec<(String, Check)> {
    let order = max_sp;
    let gf = gf_univariate(GfName::Directed, None, order).expect("directed series");
    let dir = (2..=max_sp).try_for_each(|sp| {
        let n = BigInt::from(enumerate_directed_convex(sp).count());
        ensure(n == coeff(&gf, sp), || {
            format!("sp {sp}: enumerated {n}, series {}", coeff(&gf, sp))
        })
    });
    let par = (2..=max_sp).try_for_each(|sp| {
        let n = BigInt::from(enumerate_parallelogram(sp).count());
        ensure(n == catalan(sp - 1), || format!("sp {sp}: enumerated {n}"))
    });
    let cvx_max = max_sp.min(CONVEX_SP_LIMIT);
    let cvx = (2..=cvx_max).try_for_each(|sp| {
        let n = BigInt::from(enumerate_convex(sp).count());
        ensure(n == closed_form_convex(sp), || {
            format!("sp {sp}: enumerated {n}")
        })
    });
    let kdir = (0..=3usize).try_for_each(|k| {
        let s = gf_univariate(GfName::Kdir, Some(k), order).map_err(|e| e.to_string())?;
        (2..=max_sp).try_for_each(|sp| {
            let n = directed(sp)
                .par_iter()
                .filter(|d| degree_directed(d).is_ok_and(|g| g as usize <= k))
                .count();
            let n = BigInt::from(n);
            ensure(n == coeff(&s, sp), || {
                format!("k {k} sp {sp}: enumerated {n}, series {}", coeff(&s, sp))
            })
        })
    });
    vec![
        ("directed convex counts match the series".into(), dir),
        ("parallelogram counts are Catalan".into(), par),
        (
            format!("convex counts match the closed form (sp <= {cvx_max})"),
            cvx,
        ),
        (
            "directed k-convex counts match the series, k <= 3".into(),
            kdir,
        ),
    ]
}

fn identities(max_sp: usize) -> Vec<(String, Check)> {
    let report = identities_check(8, max_sp.max(8));
    let failed: Vec<&str> = report
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    let mut out: Vec<(String, Check)> = vec![(
        format!(
            "Fibonacci and tree series identities ({} checks)",
            report.len()
        ),
        ensure(failed.is_empty(), || failed.join("; ")),
    )];
    let split = (1..=6usize).try_for_each(|k| {
        let lhs = gf_univariate(GfName::DkMinus, Some(k + 1), max_sp).map_err(|e| e.to_string())?;
        let kdir = gf_univariate(GfName::Kdir, Some(k), max_sp).map_err(|e| e.to_string())?;
        let flat = gf_univariate(GfName::FdFlat, Some(k), max_sp).map_err(|e| e.to_string())?;
        ensure(lhs == kdir.add(&flat), || format!("fails at k {k}"))
    });
    out.push((
        "height-capped series splits into k-convex plus flat".into(),
        split,
    ));
    out
}

fn bounce(max_sp: usize) -> Vec<(String, Check)> {
    let degrees = per_polyomino(max_sp, |d| {
        let a = degree_directed(d).map_err(|e| e.to_string())?;
        let b = degree_generic(d).map_err(|e| e.to_string())?;
        ensure(a == b, || {
            format!("bounce degree {a}, generic degree {b} on {d:?}")
        })
    });
    let forest_degree = (2..=max_sp).try_for_each(|sp| {
        enumerate_parallelogram(sp).try_for_each(|p| {
            let a = degree_directed(&p).map_err(|e| e.to_string())? as usize;
            let b = degree_via_forests(&p).map_err(|e| e.to_string())?;
            ensure(a == b, || {
                format!("bounce degree {a}, forest degree {b} on {p:?}")
            })
        })
    });
    let membership = per_polyomino(max_sp, |d| {
        let deg = degree_directed(d).map_err(|e| e.to_string())? as usize;
        (0..=4).try_for_each(|k| {
            let inside = is_directed_k(d, k).map_err(|e| e.to_string())?;
            ensure(inside == (deg <= k), || {
                format!("k {k} membership wrong on {d:?}")
            })
        })
    });
    vec![
        ("bounce degree equals generic degree".into(), degrees),
        (
            "parallelogram degree read off its forests".into(),
            forest_degree,
        ),
        (
            "k-convexity test agrees with the degree, k <= 4".into(),
            membership,
        ),
    ]
}

/// Prints one line per check; `Ok(false)` if any failed.
pub fn run(suite: Suite, max_sp: usize, out: &mut impl Write) -> anyhow::Result<bool> {
    let mut results = Vec::new();
    if matches!(suite, Suite::Bijections | Suite::All) {
        results.extend(bijections(max_sp));
    }
    if matches!(suite, Suite::Counts | Suite::All) {
        results.extend(counts(max_sp));
    }
    if matches!(suite, Suite::Identities | Suite::All) {
        results.extend(identities(max_sp));
    }
    if matches!(suite, Suite::Bounce | Suite::All) {
        results.extend(bounce(max_sp));
    }
    let mut all_ok = true;
    for (name, r) in results {
        match r {
            Ok(()) => writeln!(out, "PASS {name}")?,
            Err(why) => {
                all_ok = false;
                writeln!(out, "FAIL {name}: {why}")?;
            }
        }
    }
    Ok(all_ok)
}
