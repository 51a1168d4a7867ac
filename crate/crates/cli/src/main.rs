use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pamcong::congruence::{CongruenceClassifier, CongruenceError};
use pamcong::group::{make_group, parse_cayley_document, FiniteGroup, GroupError, NormalLattice};
use pamcong::invariant::{InvariantCatalog, InvariantError};
use pamcong::oracle::{
    all_congruences, growth_experiment, normal_subgroups, oracle_bound, OracleError, Partition, SemigroupTable,
};
use pamcong::wreath_monoid::{multiply_labels, parse_element_text, WreathError, WreathMonoid};
use pamcong::wreath_normal::{build_wreath_sym, WreathNormalError, WreathNormals, DEFAULT_WREATH_BOUND};

#[derive(Parser)]
#[command(name = "pamcong", version, about = "Congruences on partial wreath products G wr I_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order, normal subgroups and chief length of a group.
    Group {
        /// Group spec (C2, S3, C2xC2, D4, C2^3, ...) or a Cayley table JSON file.
        group: String,
        #[arg(long)]
        json: bool,
    },
    /// Normal subgroups of G^m invariant under coordinate permutations.
    InvSubgroups {
        group: String,
        m: usize,
        #[arg(long)]
        json: bool,
    },
    /// Normal subgroups of G wr S_m.
    WreathNormal {
        group: String,
        m: usize,
        /// Compare against a brute-force normal subgroup search.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        json: bool,
    },
    /// Congruences on G wr I_n.
    Congruences {
        group: String,
        n: usize,
        /// Only congruences that separate idempotents.
        #[arg(long)]
        idempotent_separating: bool,
        /// Compare against the brute-force congruence oracle.
        #[arg(long)]
        verify: bool,
        /// Write the Hasse diagram in DOT format.
        #[arg(long, value_name = "FILE")]
        lattice: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Congruence counts for n = 1..=n_max with fitted log-log slopes.
    Growth {
        group: String,
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Multiplies two elements written as `(g1,g2,-,g4 ; [2,1,-,3])`.
    Mult {
        x: String,
        y: String,
        /// Interpret labels as element indices of this group; without it labels are free words.
        #[arg(long)]
        group: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Validation(String),
    Mismatch(String),
    Bound(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Mismatch(_) => 3,
            Failure::Bound(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Validation(m) | Failure::Mismatch(m) | Failure::Bound(m) => m,
        }
    }
}

trait Bounded: std::fmt::Display {
    fn is_bound(&self) -> bool;
}

impl Bounded for GroupError {
    fn is_bound(&self) -> bool {
        matches!(self, GroupError::TooLarge { .. })
    }
}

impl Bounded for WreathError {
    fn is_bound(&self) -> bool {
        matches!(self, WreathError::TooLarge { .. })
    }
}

impl Bounded for InvariantError {
    fn is_bound(&self) -> bool {
        matches!(self, InvariantError::Group(e) if e.is_bound())
    }
}

impl Bounded for WreathNormalError {
    fn is_bound(&self) -> bool {
        match self {
            WreathNormalError::Invariant(e) => e.is_bound(),
            WreathNormalError::Group(e) => e.is_bound(),
            _ => false,
        }
    }
}

impl Bounded for CongruenceError {
    fn is_bound(&self) -> bool {
        match self {
            CongruenceError::Wreath(e) => e.is_bound(),
            CongruenceError::Invariant(e) => e.is_bound(),
            CongruenceError::Monoid(e) => e.is_bound(),
            _ => false,
        }
    }
}

impl Bounded for OracleError {
    fn is_bound(&self) -> bool {
        match self {
            OracleError::TooLarge { .. } | OracleError::TooManySubgroups(_) => true,
            OracleError::Monoid(e) => e.is_bound(),
            OracleError::Congruence(e) => e.is_bound(),
            OracleError::Group(e) => e.is_bound(),
            _ => false,
        }
    }
}

fn fail<E: Bounded>(e: E) -> Failure {
    if e.is_bound() {
        Failure::Bound(e.to_string())
    } else {
        Failure::Validation(e.to_string())
    }
}

fn load_group(spec: &str) -> Result<Arc<FiniteGroup>, Failure> {
    let g = if spec.ends_with(".json") {
        let text = std::fs::read_to_string(spec).map_err(|e| Failure::Usage(format!("{spec}: {e}")))?;
        parse_cayley_document(&text).map_err(fail)?
    } else {
        make_group(spec).map_err(|e| Failure::Usage(e.to_string()))?
    };
    Ok(Arc::new(g))
}

fn positive(what: &str, v: usize) -> Result<usize, Failure> {
    if v == 0 {
        Err(Failure::Usage(format!("{what} must be at least 1")))
    } else {
        Ok(v)
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn cmd_group(spec: &str, as_json: bool) -> Result<String, Failure> {
    let g = load_group(spec)?;
    let lattice = NormalLattice::new(g.clone()).map_err(fail)?;
    let chief = g.chief_length().map_err(fail)?;
    if as_json {
        let subs: Vec<Value> = lattice
            .subgroups()
            .iter()
            .map(|s| json!({ "order": s.len(), "members": s.members() }))
            .collect();
        return Ok(pretty(&json!({
            "name": g.name(),
            "order": g.order(),
            "abelian": g.is_abelian(),
            "chief_length": chief,
            "normal_subgroups": subs,
        })));
    }
    let mut out = String::new();
    writeln!(out, "group {}", g.name()).unwrap();
    writeln!(out, "order {}", g.order()).unwrap();
    writeln!(out, "normal subgroups {}", lattice.len()).unwrap();
    for (i, s) in lattice.subgroups().iter().enumerate() {
        writeln!(out, "  N{i} order {} {:?}", s.len(), s.members()).unwrap();
    }
    writeln!(out, "chief length {chief}").unwrap();
    Ok(out)
}

fn cmd_inv_subgroups(spec: &str, m: usize, as_json: bool) -> Result<String, Failure> {
    let m = positive("m", m)?;
    let cat = InvariantCatalog::new(load_group(spec)?).map_err(fail)?;
    let list = cat.enumerate(m).map_err(fail)?;
    if as_json {
        let items: Vec<Value> = list
            .iter()
            .map(|k| json!({ "order": cat.order(k).to_string(), "subgroup": cat.to_json(k) }))
            .collect();
        return Ok(pretty(&json!({ "degree": m, "count": list.len(), "subgroups": items })));
    }
    let mut out = format!("{} invariant normal subgroups of degree {m}\n", list.len());
    for k in list.iter() {
        writeln!(out, "  order {} {}", cat.order(k), cat.describe(k)).unwrap();
    }
    Ok(out)
}

fn cmd_wreath_normal(spec: &str, m: usize, verify: bool, as_json: bool) -> Result<String, Failure> {
    let m = positive("m", m)?;
    let g = load_group(spec)?;
    let wn = WreathNormals::new(Arc::new(InvariantCatalog::new(g.clone()).map_err(fail)?));
    let list = wn.enumerate(m).map_err(fail)?;
    let mut verified = None;
    if verify {
        let w = build_wreath_sym(&g, m, DEFAULT_WREATH_BOUND).map_err(fail)?;
        let mut ours: Vec<_> = list.iter().map(|l| wn.realize(l, &w)).collect();
        ours.sort();
        let brute = normal_subgroups(w.group(), 200_000).map_err(fail)?;
        if let Some(extra) = brute.iter().find(|s| ours.binary_search(s).is_err()) {
            return Err(Failure::Mismatch(format!(
                "normal subgroup of order {} missing from classification: {:?}",
                extra.len(),
                extra.members()
            )));
        }
        if let Some(extra) = ours.iter().find(|s| brute.binary_search(s).is_err()) {
            return Err(Failure::Mismatch(format!(
                "classified subgroup of order {} is not normal: {:?}",
                extra.len(),
                extra.members()
            )));
        }
        verified = Some(brute.len());
    }
    if as_json {
        let items: Vec<Value> = list
            .iter()
            .map(|l| json!({ "order": wn.order(l).to_string(), "subgroup": wn.to_json(l) }))
            .collect();
        return Ok(pretty(&json!({
            "degree": m,
            "count": list.len(),
            "verified": verified.is_some(),
            "subgroups": items,
        })));
    }
    let mut out = format!("{} normal subgroups of {} wr S{m}\n", list.len(), g.name());
    for l in list.iter() {
        writeln!(out, "  order {} {}", wn.order(l), wn.describe(l)).unwrap();
    }
    if let Some(k) = verified {
        writeln!(out, "verified against brute force ({k} normal subgroups)").unwrap();
    }
    Ok(out)
}

fn separates_idempotents(p: &Partition, monoid: &WreathMonoid) -> bool {
    let idem: Vec<usize> = monoid
        .enumerate_idempotents()
        .iter()
        .map(|e| monoid.index_of(e).expect("idempotent is enumerated"))
        .collect();
    idem.iter()
        .enumerate()
        .all(|(i, &a)| idem[i + 1..].iter().all(|&b| !p.related(a, b)))
}

fn cmd_congruences(
    spec: &str,
    n: usize,
    is_only: bool,
    verify: bool,
    lattice: Option<&Path>,
    as_json: bool,
) -> Result<String, Failure> {
    let n = positive("n", n)?;
    let g = load_group(spec)?;
    let c = CongruenceClassifier::new(g.clone(), n).map_err(fail)?;
    let specs = if is_only {
        c.enumerate_idempotent_separating()
    } else {
        c.enumerate_all()
    }
    .map_err(fail)?;
    let mut verified = false;
    if verify {
        let monoid = WreathMonoid::new(g, n);
        let bound = oracle_bound();
        if monoid.size() > bound as u128 {
            return Err(Failure::Bound(format!(
                "--verify refused: monoid has {} elements, oracle bound is {bound} (set PAMCONG_MAX_ORACLE)",
                monoid.size()
            )));
        }
        let table = SemigroupTable::from_monoid(&monoid, bound).map_err(fail)?;
        let mut oracle = all_congruences(&table, 1_000_000).map_err(fail)?;
        if is_only {
            oracle.retain(|p| separates_idempotents(p, &monoid));
        }
        let mut ours = Vec::with_capacity(specs.len());
        for s in &specs {
            ours.push(Partition::from_labels(&c.partition(s, &monoid).map_err(fail)?));
        }
        ours.sort();
        if let Some(p) = oracle.iter().find(|p| ours.binary_search(p).is_err()) {
            return Err(Failure::Mismatch(format!(
                "oracle congruence not classified: {}",
                p.dump()
            )));
        }
        if let Some(p) = ours.iter().find(|p| oracle.binary_search(p).is_err()) {
            return Err(Failure::Mismatch(format!(
                "classified partition not found by oracle: {}",
                p.dump()
            )));
        }
        verified = true;
    }
    if let Some(path) = lattice {
        std::fs::write(path, c.to_dot(&specs)).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    if as_json {
        let items: Vec<Value> = specs.iter().map(|s| c.to_json(s)).collect();
        return Ok(pretty(&json!({
            "n": n,
            "idempotent_separating": is_only,
            "count": specs.len(),
            "verified": verified,
            "congruences": items,
        })));
    }
    let kind = if is_only {
        "idempotent-separating congruences"
    } else {
        "congruences"
    };
    let mut out = format!("{} {kind} on {} wr I{n}\n", specs.len(), c.group().name());
    for s in &specs {
        writeln!(out, "  {}", c.describe(s)).unwrap();
    }
    if verified {
        writeln!(out, "verified against oracle").unwrap();
    }
    Ok(out)
}

fn cmd_growth(spec: &str, n_max: usize, format: Format) -> Result<String, Failure> {
    let n_max = positive("n_max", n_max)?;
    let report = growth_experiment(load_group(spec)?, n_max).map_err(fail)?;
    let slope = |s: Option<f64>| s.map_or("n/a".to_string(), |s| format!("{s:.4}"));
    if report.chief_length == 0 {
        eprintln!("chief length 0; slope {}", slope(report.slope));
    } else {
        eprintln!(
            "chief length {}; slope {} window [{}, {}]; idempotent-separating slope {} window [{}, {}]",
            report.chief_length,
            slope(report.slope),
            report.window.0,
            report.window.1,
            slope(report.slope_idempotent_separating),
            report.window_idempotent_separating.0,
            report.window_idempotent_separating.1,
        );
    }
    for f in &report.flags {
        eprintln!("flag: {f}");
    }
    Ok(match format {
        Format::Csv => report.to_csv(),
        Format::Json => pretty(&serde_json::to_value(&report).expect("report serializes")),
    })
}

fn cmd_mult(x: &str, y: &str, group: Option<&str>) -> Result<String, Failure> {
    let Some(spec) = group else {
        let (g, a) = parse_element_text(x).map_err(|e| Failure::Usage(e.to_string()))?;
        let (h, b) = parse_element_text(y).map_err(|e| Failure::Usage(e.to_string()))?;
        if a.degree() != b.degree() {
            return Err(Failure::Usage(format!(
                "degree mismatch: {} vs {}",
                a.degree(),
                b.degree()
            )));
        }
        let (labels, ab) = multiply_labels(&g, &a, &h, &b, |u, v| format!("{u}{v}"));
        let labels: Vec<String> = labels.into_iter().map(|l| l.unwrap_or_else(|| "-".into())).collect();
        return Ok(format!("({} ; {ab})\n", labels.join(",")));
    };
    let g = load_group(spec)?;
    let n = parse_element_text(x)
        .map_err(|e| Failure::Usage(e.to_string()))?
        .1
        .degree();
    let monoid = WreathMonoid::new(g, n);
    let u = monoid.parse(x).map_err(|e| Failure::Usage(e.to_string()))?;
    let v = monoid.parse(y).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(format!("{}\n", monoid.mul(&u, &v)))
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Group { group, json } => cmd_group(&group, json),
        Command::InvSubgroups { group, m, json } => cmd_inv_subgroups(&group, m, json),
        Command::WreathNormal { group, m, verify, json } => cmd_wreath_normal(&group, m, verify, json),
        Command::Congruences {
            group,
            n,
            idempotent_separating,
            verify,
            lattice,
            json,
        } => cmd_congruences(&group, n, idempotent_separating, verify, lattice.as_deref(), json),
        Command::Growth { group, n_max, format } => cmd_growth(&group, n_max, format),
        Command::Mult { x, y, group } => cmd_mult(&x, &y, group.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
