//! `cubemill` command line.
//!
//! Exit status: 0 on success, 1 when a checked property fails, 2 on usage
//! or input errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cubemill::curvature::{check_npc, check_special, hyperplanes, is_flag};
use cubemill::dual::{build_dual, verify_dual_axioms, DualComplex};
use cubemill::fixtures::{self, FIXTURE_NAMES};
use cubemill::folding::{
    find_folding, find_simplicial_folding, verify_folding, verify_simplicial_folding, CubeFolding, Verdict,
};
use cubemill::gromov::{gromov_hyperbolize, report_for};
use cubemill::io::{self, Complex, Folding};
use cubemill::mirror::mirrors;
use cubemill::path::{contract_loop, parse_certificate, render_certificate, verify_contraction, EdgePath, PathError};
use cubemill::subdivision::barycentric_subdivision;
use cubemill::tree::{build_trees, Node};
use cubemill::{link, CubicalComplex, SimplicialComplex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "cubemill", version, about = "Foldable cube complexes, hyperbolization and dual complexes")]
struct Cli {
    /// Write the primary output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Source {
    /// Complex file.
    input: Option<PathBuf>,
    /// Built-in complex instead of a file.
    #[arg(long, conflicts_with = "input")]
    fixture: Option<String>,
    /// Folding file; without it a folding is searched for.
    #[arg(long)]
    folding: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a complex file is well formed and admissible.
    Validate(Source),
    /// Barycentric subdivision; new vertex ids are cell ids.
    Barsub(Source),
    /// Find a folding, or check the one given with --folding.
    Fold(Source),
    /// Hyperbolize a simplicial complex.
    Gromov(Source),
    /// Vertex links and whether they are flag.
    Links(Source),
    /// Gromov's link condition.
    CheckNpc(Source),
    /// Hyperplanes as parallelism classes of edges.
    Hyperplanes(Source),
    /// Self-intersection and osculation pathologies.
    SpecialCheck(Source),
    /// Mirrors of a folding and whether they separate.
    Mirrors(Source),
    /// The dual complex and its height table.
    Dual {
        #[command(flatten)]
        source: Source,
        /// Check the dual complex axioms.
        #[arg(long)]
        verify: bool,
    },
    /// Contract a loop of dual vertices and emit a certificate.
    Contract {
        #[command(flatten)]
        source: Source,
        /// Dual vertex ids (source cell ids), first equal to last.
        #[arg(long = "loop", value_delimiter = ',')]
        loop_: Option<Vec<usize>>,
        /// Contract this many random loops instead and report a summary.
        #[arg(long, conflicts_with = "loop_")]
        random: Option<usize>,
        /// Maximal length of random loops.
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Replay a certificate against the dual of a complex.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Mirror/component incidence graphs, one per coordinate.
    Tree(Source),
    /// Print a built-in complex, or list them.
    Fixture {
        name: Option<String>,
        /// Print the fixture's folding instead of the complex.
        #[arg(long)]
        folded: bool,
    },
}

enum Failure {
    /// A checked property does not hold.
    Property(String),
    /// Bad input or usage.
    Input(String),
}

type Res<T> = Result<T, Failure>;

fn input_err(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

/// What a command produces: an artifact (a file-format document) and a
/// human readable report.
#[derive(Default)]
struct Output {
    artifact: Option<String>,
    report: String,
    failed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(s) = std::env::var("CUBEMILL_THREADS") {
        let Ok(n) = s.trim().parse::<usize>() else {
            eprintln!("error: CUBEMILL_THREADS must be a non-negative integer");
            return ExitCode::from(2);
        };
        if n > 0 {
            // only fails when a pool already exists
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match run(cli.command) {
        Ok(out) => {
            let mut report_to_stdout = true;
            if let Some(a) = &out.artifact {
                match &cli.out {
                    Some(path) => {
                        if let Err(e) = std::fs::write(path, a) {
                            eprintln!("error: cannot write {}: {e}", path.display());
                            return ExitCode::from(2);
                        }
                    }
                    None => {
                        print!("{a}");
                        report_to_stdout = false;
                    }
                }
            }
            if report_to_stdout {
                print!("{}", out.report);
            } else {
                eprint!("{}", out.report);
            }
            ExitCode::from(if out.failed { 1 } else { 0 })
        }
        Err(Failure::Property(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &PathBuf) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn simplicial_fixture(name: &str) -> Option<(SimplicialComplex, Option<Folding>)> {
    match name {
        "simplex1" => Some((fixtures::simplex(1), None)),
        "simplex2" => Some((fixtures::simplex(2), None)),
        "simplex3" => Some((fixtures::simplex(3), None)),
        "bd3" => Some((fixtures::boundary_simplex(3), None)),
        "triangles2" => {
            let (k, f) = fixtures::two_triangles();
            Some((k, Some(Folding::Simplicial(f))))
        }
        "cone4" => {
            let (k, f) = fixtures::cone4();
            Some((k, Some(Folding::Simplicial(f))))
        }
        _ => None,
    }
}

const SIMPLICIAL_FIXTURES: &[&str] = &["simplex1", "simplex2", "simplex3", "bd3", "triangles2", "cone4"];

fn load(src: &Source) -> Res<(Complex, Option<Folding>)> {
    let (complex, mut folding) = match (&src.input, &src.fixture) {
        (Some(path), _) => {
            let c = io::parse_complex(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            (c, None)
        }
        (None, Some(name)) => {
            if let Some(fx) = fixtures::fixture(name) {
                (Complex::Cubical(fx.complex), fx.folding.map(Folding::Cubical))
            } else if let Some((k, f)) = simplicial_fixture(name) {
                (Complex::Simplicial(k), f)
            } else {
                return Err(Failure::Input(format!("unknown fixture `{name}`")));
            }
        }
        (None, None) => return Err(Failure::Input("give a complex file or --fixture NAME".into())),
    };
    if let Some(path) = &src.folding {
        let f = io::parse_folding(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        folding = Some(f);
    }
    Ok((complex, folding))
}

/// Keeps only a folding given explicitly with `--folding`.
fn strip_fixture_folding(src: &Source, (c, f): (Complex, Option<Folding>)) -> (Complex, Option<Folding>) {
    (c, if src.folding.is_some() { f } else { None })
}

fn cubical(src: &Source) -> Res<(CubicalComplex, Option<CubeFolding>)> {
    match load(src)? {
        (Complex::Cubical(x), f) => {
            let f = match f {
                None => None,
                Some(Folding::Cubical(f)) => Some(f),
                Some(Folding::Simplicial(_)) => return Err(input_err("a cubical complex needs a cubical folding")),
            };
            Ok((x, f))
        }
        (Complex::Simplicial(_), _) => Err(input_err("this command needs a cubical complex")),
    }
}

/// An admissible complex with a valid folding, found if not given.
fn folded(src: &Source) -> Res<(CubicalComplex, CubeFolding)> {
    let (x, f) = cubical(src)?;
    x.check_admissible().map_err(|e| Failure::Property(format!("not admissible: {e}")))?;
    let f = match f {
        Some(f) => {
            match verify_folding(&x, &f).map_err(input_err)? {
                Verdict::Valid => {}
                Verdict::Invalid { cell, reason } => {
                    return Err(Failure::Property(format!("invalid folding at cell {cell}: {reason}")))
                }
            }
            f
        }
        None => find_folding(&x).map_err(|e| Failure::Property(format!("not foldable: {e}")))?,
    };
    Ok((x, f))
}

fn dual_of(src: &Source) -> Res<DualComplex> {
    let (x, f) = folded(src)?;
    build_dual(&x, &f).map_err(|e| Failure::Property(e.to_string()))
}

fn counts(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn list<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    parts.join(" ")
}

fn run(cmd: Command) -> Res<Output> {
    let mut out = Output::default();
    let r = &mut out.report;
    match cmd {
        Command::Validate(src) => match load(&src)? {
            (Complex::Cubical(x), _) => {
                writeln!(r, "kind: cubical").unwrap();
                writeln!(r, "cells: {}", counts(&x.count_by_dim())).unwrap();
                match x.check_admissible() {
                    Ok(()) => writeln!(r, "admissible: yes").unwrap(),
                    Err(e) => {
                        writeln!(r, "admissible: no ({e})").unwrap();
                        out.failed = true;
                    }
                }
            }
            (Complex::Simplicial(k), _) => {
                writeln!(r, "kind: simplicial").unwrap();
                writeln!(r, "cells: {}", counts(&k.count_by_dim())).unwrap();
            }
        },
        Command::Barsub(src) => {
            let sd = match load(&src)?.0 {
                Complex::Cubical(x) => barycentric_subdivision(&x),
                Complex::Simplicial(k) => barycentric_subdivision(&k),
            };
            writeln!(r, "cells: {}", counts(&sd.complex.count_by_dim())).unwrap();
            out.artifact = Some(io::write_simplicial(&sd.complex));
        }
        Command::Fold(src) => match strip_fixture_folding(&src, load(&src)?) {
            (Complex::Cubical(x), f) => match f {
                Some(Folding::Cubical(f)) => verdict(r, &mut out.failed, verify_folding(&x, &f).map_err(input_err)?),
                Some(Folding::Simplicial(_)) => return Err(input_err("a cubical complex needs a cubical folding")),
                None => match find_folding(&x) {
                    Ok(f) => {
                        writeln!(r, "foldable: yes, dimension {}", f.dim).unwrap();
                        out.artifact = Some(io::write_cube_folding(&f));
                    }
                    Err(e) => return Err(Failure::Property(format!("foldable: no ({e})"))),
                },
            },
            (Complex::Simplicial(k), f) => match f {
                Some(Folding::Simplicial(f)) => {
                    verdict(r, &mut out.failed, verify_simplicial_folding(&k, &f).map_err(input_err)?)
                }
                Some(Folding::Cubical(_)) => return Err(input_err("a simplicial complex needs a simplicial folding")),
                None => match find_simplicial_folding(&k) {
                    Ok(f) => {
                        writeln!(r, "foldable: yes, dimension {}", f.dim).unwrap();
                        out.artifact = Some(io::write_simplex_folding(&f));
                    }
                    Err(e) => return Err(Failure::Property(format!("foldable: no ({e})"))),
                },
            },
        },
        Command::Gromov(src) => {
            let (k, f) = match load(&src)? {
                (Complex::Simplicial(k), None) => (k, None),
                (Complex::Simplicial(k), Some(Folding::Simplicial(f))) => (k, Some(f)),
                _ => return Err(input_err("gromov needs a simplicial complex and optionally a simplicial folding")),
            };
            let g = gromov_hyperbolize(&k, f.as_ref()).map_err(|e| Failure::Property(e.to_string()))?;
            let rep = report_for(&g);
            writeln!(r, "cells: {}", counts(&rep.counts)).unwrap();
            writeln!(r, "admissible: {}", yes(rep.admissible)).unwrap();
            writeln!(r, "foldable: {}", yes(rep.foldable)).unwrap();
            writeln!(r, "flag links: {}", yes(rep.flag_links)).unwrap();
            match rep.boundaryless {
                Some(b) => writeln!(r, "boundaryless: {}", yes(b)).unwrap(),
                None => writeln!(r, "boundaryless: n/a").unwrap(),
            }
            writeln!(r, "tiles are cells: {}", yes(rep.tiles_are_cells)).unwrap();
            writeln!(r, "tile links match: {}", yes(rep.link_failures.is_empty())).unwrap();
            for s in &rep.link_failures {
                writeln!(r, "  link differs at {s:?}").unwrap();
            }
            out.failed = !rep.all_pass();
            out.artifact = Some(io::write_cubical(&g.complex));
        }
        Command::Links(src) => {
            let (x, _) = cubical(&src)?;
            for v in 0..x.vertex_count() {
                let l = link(&x, v);
                let flag = is_flag(&l.complex);
                let id = x.cell(v).corners()[0];
                writeln!(r, "vertex {id}: link cells {} {}", counts(&l.complex.count_by_dim()), flag_word(flag))
                    .unwrap();
            }
        }
        Command::CheckNpc(src) => {
            let (x, _) = cubical(&src)?;
            match check_npc(&x) {
                Ok(()) => writeln!(r, "npc: yes").unwrap(),
                Err(w) => {
                    return Err(Failure::Property(format!(
                        "npc: no (link of vertex {} misses the simplex on edges {:?})",
                        w.vertex, w.clique
                    )))
                }
            }
        }
        Command::Hyperplanes(src) => {
            let (x, f) = cubical(&src)?;
            let f = f.or_else(|| find_folding(&x).ok());
            for h in hyperplanes(&x) {
                write!(r, "hyperplane {}: edges {} carrier {}", h.id, list(&h.edges), list(&h.carrier)).unwrap();
                if let Some(f) = &f {
                    let mut coords: Vec<usize> = h.edges.iter().map(|&e| f.edge_coordinate(&x, e)).collect();
                    coords.dedup();
                    write!(r, " coordinate {}", list(&coords)).unwrap();
                }
                r.push('\n');
            }
        }
        Command::SpecialCheck(src) => {
            let (x, _) = cubical(&src)?;
            let p = check_special(&x);
            for (s, h) in &p.self_intersections {
                writeln!(r, "self-intersection: square {s} hyperplane {h}").unwrap();
            }
            for (h, v, a, b) in &p.self_osculations {
                writeln!(r, "self-osculation: hyperplane {h} at {v} edges {a} {b}").unwrap();
            }
            for (h1, h2, v, a, b) in &p.inter_osculations {
                writeln!(r, "inter-osculation: hyperplanes {h1} {h2} at {v} edges {a} {b}").unwrap();
            }
            writeln!(r, "special: {}", yes(p.is_special())).unwrap();
            out.failed = !p.is_special();
        }
        Command::Mirrors(src) => {
            let (x, f) = folded(&src)?;
            let ms = mirrors(&x, &f);
            for m in &ms.list {
                let sep = cubemill::mirror::mirror_separates(&x, m);
                writeln!(
                    r,
                    "mirror {}: coordinate {} side {} cells {} components {} framings {} separating {}",
                    m.id,
                    m.coord,
                    u8::from(m.side),
                    list(&m.cells),
                    sep.components,
                    sep.framings.len(),
                    yes(sep.separating)
                )
                .unwrap();
            }
        }
        Command::Dual { source, verify } => {
            let d = dual_of(&source)?;
            writeln!(r, "cubes: {}", counts(&d.cubes.count_by_dim())).unwrap();
            for v in 0..d.vertex_count() {
                writeln!(r, "height {v} {} cell [{}]", d.height(v), list(d.source.cell(v).corners())).unwrap();
            }
            if verify {
                match verify_dual_axioms(&d) {
                    Ok(rep) => writeln!(r, "axioms: hold (max height {})", rep.max_height).unwrap(),
                    Err(v) => {
                        writeln!(r, "axioms: {v}").unwrap();
                        out.failed = true;
                    }
                }
            }
            out.artifact = Some(io::write_cubical(&d.cubes));
        }
        Command::Contract { source, loop_, random, max_len, seed } => {
            let d = dual_of(&source)?;
            match (loop_, random) {
                (Some(vs), _) => {
                    let p = EdgePath::new_loop(&d, vs).map_err(input_err)?;
                    let tree = contract_loop(&d, &p).map_err(contract_failure)?;
                    writeln!(r, "contracted: loop of length {} in {} pieces", p.len(), tree.leaves()).unwrap();
                    out.artifact = Some(render_certificate(&p, &tree));
                }
                (None, Some(n)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let mut ok = 0;
                    for _ in 0..n {
                        let p = random_loop(&d, &mut rng, max_len);
                        match contract_loop(&d, &p) {
                            Ok(t) if verify_contraction(&d, &p, &t) => ok += 1,
                            Ok(_) => writeln!(r, "certificate rejected for loop {p}").unwrap(),
                            Err(e) => writeln!(r, "loop {p}: {}", contract_message(&e)).unwrap(),
                        }
                    }
                    writeln!(r, "contracted and verified: {ok}/{n}").unwrap();
                    out.failed = ok != n;
                }
                (None, None) => return Err(input_err("give --loop v0,v1,... or --random N")),
            }
        }
        Command::Verify { source, certificate } => {
            let d = dual_of(&source)?;
            let text = read(&certificate)?;
            let cert =
                parse_certificate(&text).map_err(|e| Failure::Input(format!("{}: {e}", certificate.display())))?;
            let p = EdgePath::new_loop(&d, cert.path).map_err(input_err)?;
            if verify_contraction(&d, &p, &cert.tree) {
                writeln!(r, "certificate: valid").unwrap();
            } else {
                return Err(Failure::Property("certificate: invalid".into()));
            }
        }
        Command::Tree(src) => {
            let (x, f) = folded(&src)?;
            for t in build_trees(&x, &f) {
                writeln!(
                    r,
                    "coordinate {}: {} mirrors, {} components, {} edges",
                    t.coord,
                    t.mirrors.len(),
                    t.components.len(),
                    t.edges.len()
                )
                .unwrap();
                for n in t.nodes() {
                    writeln!(r, "  {n}: {}", list(&t.neighbors(n))).unwrap();
                }
                let v = &t.verdict;
                let leaves: Vec<Node> = v.leaves.clone();
                writeln!(
                    r,
                    "  connected {} acyclic {} tree {} leaves {}",
                    yes(v.connected),
                    yes(v.acyclic),
                    yes(v.is_tree()),
                    if leaves.is_empty() { "none".to_string() } else { list(&leaves) }
                )
                .unwrap();
            }
        }
        Command::Fixture { name, folded } => match name {
            None => {
                for n in FIXTURE_NAMES {
                    writeln!(r, "{n} cubical").unwrap();
                }
                writeln!(r, "rose<m> cubical").unwrap();
                for n in SIMPLICIAL_FIXTURES {
                    writeln!(r, "{n} simplicial").unwrap();
                }
            }
            Some(name) => {
                let src = Source { input: None, fixture: Some(name.clone()), folding: None };
                let (c, f) = load(&src)?;
                if folded {
                    let f = match (f, &c) {
                        (Some(f), _) => f,
                        (None, Complex::Simplicial(k)) => {
                            Folding::Simplicial(find_simplicial_folding(k).map_err(|e| Failure::Property(e.to_string()))?)
                        }
                        (None, Complex::Cubical(_)) => {
                            return Err(Failure::Property(format!("fixture `{name}` is not foldable")))
                        }
                    };
                    out.artifact = Some(io::write_folding(&f));
                } else {
                    out.artifact = Some(io::write_complex(&c));
                }
            }
        },
    }
    Ok(out)
}

fn verdict(r: &mut String, failed: &mut bool, v: Verdict) {
    match v {
        Verdict::Valid => writeln!(r, "folding: valid").unwrap(),
        Verdict::Invalid { cell, reason } => {
            writeln!(r, "folding: invalid at cell {cell} ({reason})").unwrap();
            *failed = true;
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn flag_word(b: bool) -> &'static str {
    if b {
        "flag"
    } else {
        "not flag"
    }
}

fn contract_message(e: &PathError) -> String {
    match e {
        PathError::Unsupported(s) => format!("Unsupported: {s}"),
        PathError::NonSeparatingMirror(m) => format!("Unsupported: non-separating mirror {m}"),
        _ => e.to_string(),
    }
}

fn contract_failure(e: PathError) -> Failure {
    Failure::Property(contract_message(&e))
}

/// A random walk closed up along a shortest path back to its start.
fn random_loop(d: &DualComplex, rng: &mut ChaCha8Rng, max_len: usize) -> EdgePath {
    let n = d.vertex_count();
    let start = rng.gen_range(0..n);
    let mut walk = vec![start];
    let steps = rng.gen_range(0..=max_len / 2);
    for _ in 0..steps {
        let nb = d.neighbors(*walk.last().unwrap());
        if nb.is_empty() {
            break;
        }
        walk.push(nb[rng.gen_range(0..nb.len())]);
    }
    let back = shortest_path(d, *walk.last().unwrap(), start);
    walk.extend_from_slice(&back[1..]);
    EdgePath { vertices: walk }
}

fn shortest_path(d: &DualComplex, from: usize, to: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; d.vertex_count()];
    let mut queue = std::collections::VecDeque::from([from]);
    prev[from] = from;
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &w in d.neighbors(u) {
            if prev[w] == usize::MAX {
                prev[w] = u;
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(prev[*path.last().unwrap()]);
    }
    path.reverse();
    path
}
