use std::io::{self, BufWriter, Read, Write};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use polyforge::bounce::{bounce_path, Dir};
use polyforge::enumerate::{count_table, count_table_csv, enumerate_class, PolyClass};
use polyforge::forest::{
    bilateral_to_directed, directed_to_bilateral, from_triplet, phi, to_triplet, BilateralWord,
    OrderedTree, TripletJson,
};
use polyforge::lattice::{complete_to_parallelogram, cut_of, render_ascii, PolyominoJson};
use polyforge::series::{
    asymptotic_mu, empirical_ratios, gf_marked, gf_univariate, GfName, MarkedName,
};
use polyforge::Polyomino;

mod verify;

#[derive(Parser)]
#[command(
    name = "polyforge",
    version,
    about = "Exact enumeration of directed convex polyominoes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count polyominoes per semi-perimeter as CSV
    Count {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        max_sp: usize,
        /// Keep only polyominoes of degree of convexity at most K
        #[arg(long)]
        k: Option<u32>,
    },
    /// List the polyominoes of one semi-perimeter in canonical order
    List {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        sp: usize,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_enum, default_value = "json")]
        format: ListFormat,
    },
    /// Translate JSON values read from stdin, one output line per value
    Map {
        #[arg(long, value_enum)]
        from: MapFrom,
        #[arg(long, value_enum)]
        to: MapTo,
    },
    /// Expand a generating function
    Series {
        #[arg(long)]
        name: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        order: usize,
        /// Expand a marked (multivariate) series
        #[arg(long)]
        markers: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: SeriesFormat,
    },
    /// Run cross-checks between enumeration, bijections and series
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: verify::Suite,
        #[arg(long, default_value_t = 10)]
        max_sp: usize,
    },
    /// Draw a polyomino, a tree or the paths of a polyomino read from stdin
    Render {
        #[arg(long, value_enum, default_value = "polyomino")]
        kind: RenderKind,
    },
    /// Growth constant and empirical ratios for directed k-convex counts
    Asymptotics {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [20usize, 40, 60])]
        n: Vec<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Convex,
    Directed,
    Parallelogram,
}

impl From<ClassArg> for PolyClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Convex => PolyClass::Convex,
            ClassArg::Directed => PolyClass::Directed,
            ClassArg::Parallelogram => PolyClass::Parallelogram,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ListFormat {
    Json,
    Ascii,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MapFrom {
    Polyomino,
    Triplet,
    Bilateral,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MapTo {
    Polyomino,
    Triplet,
    Bilateral,
    Forests,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderKind {
    Polyomino,
    Tree,
    Path,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out);
    let flushed = out.flush();
    match result {
        Ok(true) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("POLYFORGE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("POLYFORGE_THREADS={raw:?} is not a count"))?;
    if n == 0 {
        bail!("POLYFORGE_THREADS must be positive");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

/// Returns `Ok(false)` when a verification failed.
fn run(cmd: Command, out: &mut impl Write) -> anyhow::Result<bool> {
    match cmd {
        Command::Count { class, max_sp, k } => {
            if max_sp < 2 {
                bail!("--max-sp must be at least 2");
            }
            out.write_all(count_table_csv(&count_table(class.into(), max_sp, k)).as_bytes())?;
        }
        Command::List {
            class,
            sp,
            k,
            format,
        } => {
            for p in enumerate_class(class.into(), sp, k) {
                match format {
                    ListFormat::Json => {
                        writeln!(out, "{}", serde_json::to_string(&PolyominoJson::from(&p))?)?
                    }
                    ListFormat::Ascii => writeln!(out, "{}", render_ascii(&p))?,
                }
            }
        }
        Command::Map { from, to } => {
            let mut input = String::new();
            io::stdin().read_to_string(&mut input)?;
            for value in serde_json::Deserializer::from_str(&input).into_iter::<Value>() {
                let value = value.context("reading JSON from stdin")?;
                writeln!(out, "{}", map_value(from, to, value)?)?;
            }
        }
        Command::Series {
            name,
            k,
            order,
            markers,
            format,
        } => {
            let text = if markers {
                let known: Vec<&str> = MarkedName::ALL.iter().map(|n| n.as_str()).collect();
                if k.is_some() {
                    bail!("marked series take no --k");
                }
                let parsed = name
                    .parse::<MarkedName>()
                    .map_err(|e| anyhow!("{e}; known: {}", known.join(", ")))?;
                let s = gf_marked(parsed, order)?;
                match format {
                    SeriesFormat::Csv => s.to_csv()?,
                    SeriesFormat::Json => s.to_json()? + "\n",
                }
            } else {
                let known: Vec<&str> = GfName::ALL.iter().map(|n| n.as_str()).collect();
                let parsed = name
                    .parse::<GfName>()
                    .map_err(|e| anyhow!("{e}; known: {}", known.join(", ")))?;
                let s = gf_univariate(parsed, k, order)?;
                match format {
                    SeriesFormat::Csv => s.to_csv()?,
                    SeriesFormat::Json => s.to_json()? + "\n",
                }
            };
            out.write_all(text.as_bytes())?;
        }
        Command::Verify { suite, max_sp } => {
            if max_sp < 2 {
                bail!("--max-sp must be at least 2");
            }
            return verify::run(suite, max_sp, out);
        }
        Command::Render { kind } => {
            let mut input = String::new();
            io::stdin().read_to_string(&mut input)?;
            render(kind, input.trim(), out)?;
        }
        Command::Asymptotics { k, n } => {
            if k == 0 {
                bail!("--k must be at least 1");
            }
            let (mu, root) = asymptotic_mu(k);
            writeln!(out, "k,{k}")?;
            writeln!(out, "mu,{mu:.12}")?;
            writeln!(out, "root,{root:.12}")?;
            for (n, r) in empirical_ratios(k, &n)? {
                writeln!(out, "ratio_{n},{r:.9}")?;
            }
        }
    }
    Ok(true)
}

fn read_polyomino(v: Value) -> anyhow::Result<Polyomino> {
    let p: PolyominoJson =
        serde_json::from_value(v).context("expected {\"cells\": [[i, j], ...]}")?;
    Ok(p.to_polyomino()?)
}

fn map_value(from: MapFrom, to: MapTo, v: Value) -> anyhow::Result<Value> {
    let d = match from {
        MapFrom::Polyomino => read_polyomino(v)?,
        MapFrom::Triplet => {
            let t: TripletJson =
                serde_json::from_value(v).context("expected {\"fe\", \"fs\", \"cut\"}")?;
            from_triplet(&t.to_triplet()?)?
        }
        MapFrom::Bilateral => {
            let w = v.as_str().context("expected a JSON string over u and d")?;
            bilateral_to_directed(&w.parse::<BilateralWord>()?)?
        }
    };
    Ok(match to {
        MapTo::Polyomino => serde_json::to_value(PolyominoJson::from(&d))?,
        MapTo::Triplet => serde_json::to_value(TripletJson::from(&to_triplet(&d)?))?,
        MapTo::Bilateral => Value::String(directed_to_bilateral(&d)?.to_string()),
        MapTo::Forests => {
            let (fe, fs) = phi(&complete_to_parallelogram(&d)?)?;
            json!({ "fe": fe.to_strings(), "fs": fs.to_strings() })
        }
    })
}

fn render(kind: RenderKind, input: &str, out: &mut impl Write) -> anyhow::Result<()> {
    match kind {
        RenderKind::Polyomino => {
            out.write_all(render_ascii(&read_polyomino(serde_json::from_str(input)?)?).as_bytes())?;
        }
        RenderKind::Tree => {
            for line in input.lines().map(str::trim).filter(|l| !l.is_empty()) {
                let t: OrderedTree = line.trim_matches('"').parse()?;
                outline(&t, 0, out)?;
            }
        }
        RenderKind::Path => {
            let d = read_polyomino(serde_json::from_str(input)?)?;
            writeln!(out, "cut {}", cut_of(&d)?)?;
            for (name, first) in [("r", Dir::East), ("u", Dir::North)] {
                let path = bounce_path(&d, d.root(), d.top_right(), first)?;
                let steps: String = path
                    .segments
                    .iter()
                    .flat_map(|&(dir, len)| {
                        std::iter::repeat_n(if dir == Dir::East { 'E' } else { 'N' }, len)
                    })
                    .collect();
                writeln!(out, "{name} {steps} ({} changes)", path.changes)?;
            }
        }
    }
    Ok(())
}

fn outline(t: &OrderedTree, depth: usize, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "{}*", "  ".repeat(depth))?;
    for c in &t.children {
        outline(c, depth + 1, out)?;
    }
    Ok(())
}
