//! `propp`: command-line front end for the propp library.
//!
//! Results go to stdout as JSON (or CSV for tables). Computational errors
//! exit 1 with a JSON body on stderr; usage errors exit 2.

use std::fmt::Display;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use propp::fingroup::{self, FiniteGroup, GroupPreset};
use propp::goodbasis::{self, GoodBasis};
use propp::invsys;
use propp::padic::{PAdicInt, Supernatural, Valuation};
use propp::uniform::{self, CoordinateVector, GElement, UniformGroup};
use propp::vc::{self, BipartiteRelation, SetFamily, SubgroupFamily};

#[derive(Parser)]
#[command(name = "propp", version, about = "Exact computation in pro-p groups at finite precision")]
struct Cli {
    /// Sampler seed for randomized checks.
    #[arg(long, global = true, env = "PROPP_SEED", default_value_t = 0)]
    seed: u64,
    /// Output format; tables default to CSV, everything else to JSON.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Wrap the result in a report with the tool version and input echo.
    #[arg(long, global = true)]
    report: bool,
    /// Print wall time to stderr (and into the report, if any).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// p-adic integers and supernatural numbers
    #[command(subcommand)]
    Padic(PadicCmd),
    /// Finite groups given by preset
    #[command(subcommand)]
    Group(GroupCmd),
    /// Uniform groups: coordinates, ω, lower p-series
    #[command(subcommand)]
    Uniform(UniformCmd),
    /// Good bases and open subgroup counts
    #[command(subcommand)]
    Goodbasis(GoodbasisCmd),
    /// VC dimension, shatter functions, growth bounds
    #[command(subcommand)]
    Vc(VcCmd),
    /// Run the acceptance properties
    Suite {
        /// Run only this criterion.
        #[arg(long)]
        only: Option<u8>,
    },
}

#[derive(Args)]
struct Ring {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    k: u32,
}

#[derive(Subcommand)]
enum PadicCmd {
    /// Valuation ν(x) in Z/p^k
    Nu {
        #[command(flatten)]
        ring: Ring,
        #[arg(allow_negative_numbers = true)]
        x: i128,
    },
    /// Truncated division x / y, at the precision actually known
    Div {
        #[command(flatten)]
        ring: Ring,
        #[arg(allow_negative_numbers = true)]
        x: i128,
        #[arg(allow_negative_numbers = true)]
        y: i128,
    },
    /// Inverse of a unit
    Inv {
        #[command(flatten)]
        ring: Ring,
        #[arg(allow_negative_numbers = true)]
        x: i128,
    },
    /// Supernatural numbers, written like `2^inf*3^2*5`
    #[command(subcommand)]
    Sn(SnCmd),
}

#[derive(Subcommand)]
enum SnCmd {
    Mul { a: Supernatural, b: Supernatural },
    Lcm {
        #[arg(required = true)]
        values: Vec<Supernatural>,
    },
    /// Whether a divides b
    Divides { a: Supernatural, b: Supernatural },
    /// Whether every prime of a lies in the given set
    Pi {
        a: Supernatural,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
}

#[derive(Args)]
struct GroupArg {
    /// `cyclic:9`, `abelian:9,9`, `unitriangular:3,2`, `semidirect:7,3,2`,
    /// products with `*`, or preset JSON.
    #[arg(long)]
    preset: GroupPreset,
}

#[derive(Args)]
struct GroupPrime {
    #[command(flatten)]
    group: GroupArg,
    /// Defaults to the prime of a p-group.
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Subcommand)]
enum GroupCmd {
    Info(GroupArg),
    Frattini(GroupArg),
    /// Lower p-series orders
    Series(GroupPrime),
    Powerful(GroupPrime),
    Sylow {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        p: u64,
    },
    /// Subgroup counts by index
    Subgroups {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        max_index: Option<usize>,
    },
}

#[derive(Args)]
struct UniformArg {
    /// `abelian:p,d[,k]` or `congruence:p,n[,k]`
    #[arg(long)]
    group: UniformGroup,
}

#[derive(Subcommand)]
enum UniformCmd {
    /// λ(x) for an element given as a JSON residue array
    Coords {
        #[command(flatten)]
        group: UniformArg,
        /// Read the argument as λ and print x(λ) instead.
        #[arg(long)]
        inverse: bool,
        element: Residues,
    },
    Omega {
        #[command(flatten)]
        group: UniformArg,
        element: Residues,
    },
    /// Orders of the levels G_i in the working quotient
    Levels(UniformArg),
    /// Uniformity report for a uniform preset, or for a finite group
    Uniformity {
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        group: Option<UniformGroup>,
        #[arg(long)]
        preset: Option<GroupPreset>,
        #[arg(long)]
        p: Option<u64>,
    },
}

#[derive(Subcommand)]
enum GoodbasisCmd {
    /// Canonical good basis of the open subgroup generated by the tuple
    Construct {
        #[command(flatten)]
        group: UniformArg,
        gens: Tuple,
    },
    /// Check conditions (a)-(d) for a tuple
    Verify {
        #[command(flatten)]
        group: UniformArg,
        tuple: Tuple,
    },
    /// Open subgroups of each index up to a bound
    Sigma {
        #[command(flatten)]
        group: UniformArg,
        #[arg(long)]
        max_index: u64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FamilySource {
    /// Family file `{"universe": n, "sets": [[...], ...]}`, `-` for stdin.
    #[arg(long)]
    family: Option<PathBuf>,
    /// Subgroups of a given index: `PRESET@INDEX`.
    #[arg(long, value_name = "PRESET@INDEX")]
    index: Option<String>,
    /// Hyperplanes of F_p^dim: `p,dim`.
    #[arg(long, value_name = "P,DIM")]
    hyperplanes: Option<String>,
}

#[derive(Subcommand)]
enum VcCmd {
    Dim(FamilySource),
    /// π(n), exact or sampled, with the Sauer-Shelah bound
    Shatter {
        #[command(flatten)]
        source: FamilySource,
        #[arg(long)]
        max_n: usize,
    },
    /// Reduce an intersection of subgroups to at most k members
    BaldwinSaxl {
        #[command(flatten)]
        source: FamilySource,
        /// Member indices; all members when omitted.
        #[arg(long, value_delimiter = ',')]
        members: Vec<usize>,
        /// Defaults to the dual VC dimension.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Check σ(n) ≤ π(n^vc_opp) for a subgroup family
    Growth(FamilySource),
}

/// An element or λ as a JSON residue array, `[1,0,2]`.
#[derive(Clone)]
struct Residues(Vec<u64>);

impl std::str::FromStr for Residues {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        serde_json::from_str(s).map(Residues).map_err(|e| format!("expected a JSON array of residues: {e}"))
    }
}

/// A tuple of elements, `[[1,0],[0,3]]`.
#[derive(Clone)]
struct Tuple(Vec<Vec<u64>>);

impl std::str::FromStr for Tuple {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        serde_json::from_str(s).map(Tuple).map_err(|e| format!("expected a JSON array of residue arrays: {e}"))
    }
}

enum CliError {
    Usage(String),
    Compute { kind: &'static str, message: String },
}

trait OrFail<T> {
    fn or_fail(self, kind: &'static str) -> Result<T, CliError>;
}

impl<T, E: Display> OrFail<T> for Result<T, E> {
    fn or_fail(self, kind: &'static str) -> Result<T, CliError> {
        self.map_err(|e| CliError::Compute { kind, message: e.to_string() })
    }
}

type CliResult<T> = Result<T, CliError>;

/// A command's result: JSON always, plus a table for the tabular ones.
struct Output {
    json: Value,
    table: Option<Table>,
    /// Suite failures exit nonzero after printing.
    failed: bool,
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Output {
    fn json<T: Serialize>(v: T) -> Self {
        Output { json: serde_json::to_value(v).expect("serializable"), table: None, failed: false }
    }

    fn with_table(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.table = Some(Table { header, rows });
        self
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let result = run(&cli);
    let elapsed = start.elapsed();
    if cli.timing {
        eprintln!("wall time: {:.3} ms", elapsed.as_secs_f64() * 1e3);
    }
    match result.and_then(|out| emit(&cli, out, elapsed.as_secs_f64())) {
        Ok(failed) => ExitCode::from(u8::from(failed)),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute { kind, message }) => {
            eprintln!("{}", json!({ "error": { "kind": kind, "message": message } }));
            ExitCode::from(1)
        }
    }
}

fn emit(cli: &Cli, out: Output, seconds: f64) -> CliResult<bool> {
    let csv = match (cli.format, &out.table) {
        (Some(Format::Csv), None) => return Err(CliError::Usage("this command has no CSV form".into())),
        (Some(Format::Csv), Some(_)) => true,
        (Some(Format::Json), _) => false,
        (None, t) => t.is_some() && !cli.report,
    };
    if csv {
        if cli.report {
            return Err(CliError::Usage("--report needs JSON output".into()));
        }
        let table = out.table.as_ref().expect("checked");
        let mut w = csv::Writer::from_writer(std::io::stdout());
        w.write_record(&table.header).or_fail("io")?;
        for row in &table.rows {
            w.write_record(row).or_fail("io")?;
        }
        w.flush().or_fail("io")?;
    } else if cli.report {
        let mut report = json!({
            "tool": "propp",
            "version": env!("CARGO_PKG_VERSION"),
            "input": std::env::args().skip(1).collect::<Vec<_>>(),
            "seed": cli.seed,
            "result": out.json,
        });
        if cli.timing {
            report["wall_seconds"] = json!(seconds);
        }
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    } else {
        println!("{}", serde_json::to_string(&out.json).expect("serializable"));
    }
    Ok(out.failed)
}

fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Padic(c) => padic(c),
        Command::Group(c) => group(c),
        Command::Uniform(c) => uniform_cmd(c),
        Command::Goodbasis(c) => goodbasis_cmd(c, cli.seed),
        Command::Vc(c) => vc_cmd(c, cli.seed),
        Command::Suite { only } => suite(*only, cli.seed),
    }
}

fn valuation_json(v: Valuation) -> Value {
    match v {
        Valuation::Exact(n) => json!(n),
        Valuation::AtLeast(_) => json!(v.to_string()),
    }
}

fn sn_json(s: &Supernatural) -> Value {
    json!({ "value": s.to_string(), "exponents": s, "finite": s.to_u64() })
}

fn padic(c: &PadicCmd) -> CliResult<Output> {
    let elem = |r: &Ring, x: i128| PAdicInt::new(r.p, r.k, x).or_fail("padic");
    Ok(match c {
        PadicCmd::Nu { ring, x } => Output::json(valuation_json(elem(ring, *x)?.nu())),
        PadicCmd::Div { ring, x, y } => Output::json(elem(ring, *x)?.div_d(&elem(ring, *y)?).or_fail("padic")?),
        PadicCmd::Inv { ring, x } => Output::json(elem(ring, *x)?.inverse().or_fail("padic")?),
        PadicCmd::Sn(SnCmd::Mul { a, b }) => Output::json(sn_json(&a.mul(b))),
        PadicCmd::Sn(SnCmd::Lcm { values }) => Output::json(sn_json(&Supernatural::lcm(values).or_fail("padic")?)),
        PadicCmd::Sn(SnCmd::Divides { a, b }) => Output::json(a.divides(b)),
        PadicCmd::Sn(SnCmd::Pi { a, primes }) => Output::json(a.is_pi_number(primes)),
    })
}

fn build(g: &GroupArg) -> CliResult<FiniteGroup> {
    g.preset.build().or_fail("group")
}

fn prime_of(g: &FiniteGroup, p: Option<u64>) -> CliResult<u64> {
    match p.or_else(|| fingroup::p_group_prime(g)) {
        Some(p) => Ok(p),
        None => Err(CliError::Compute { kind: "group", message: "not a p-group; pass --p".into() }),
    }
}

fn labels(g: &FiniteGroup, elems: impl Iterator<Item = fingroup::Elem>) -> Vec<String> {
    elems.map(|x| g.label(x)).collect()
}

fn group(c: &GroupCmd) -> CliResult<Output> {
    match c {
        GroupCmd::Info(a) => {
            let g = build(a)?;
            let p = fingroup::p_group_prime(&g);
            let d = match p {
                Some(_) => Some(fingroup::min_generators(&g.whole()).or_fail("group")?),
                None => None,
            };
            let exponent = g.elements().map(|x| g.element_order(x)).fold(1, lcm);
            Ok(Output::json(json!({
                "name": g.name(),
                "order": g.order(),
                "p": p,
                "exponent": exponent,
                "solvable": fingroup::is_solvable(&g),
                "min_generators": d,
            })))
        }
        GroupCmd::Frattini(a) => {
            let g = build(a)?;
            let f = fingroup::frattini(&g).or_fail("group")?;
            Ok(Output::json(json!({
                "order": f.order(),
                "index": f.index(),
                "generators": labels(&g, f.generators().iter().copied()),
            })))
        }
        GroupCmd::Series(a) => {
            let g = build(&a.group)?;
            let p = prime_of(&g, a.p)?;
            let s = fingroup::lower_p_series(&g, p).or_fail("group")?;
            let orders = s.orders();
            let rows = orders.iter().enumerate().map(|(i, o)| vec![(i + 1).to_string(), o.to_string()]).collect();
            Ok(Output::json(json!({ "p": p, "orders": orders })).with_table(vec!["level", "order"], rows))
        }
        GroupCmd::Powerful(a) => {
            let g = build(&a.group)?;
            let p = prime_of(&g, a.p)?;
            Ok(Output::json(fingroup::is_powerful(&g, p).or_fail("group")?))
        }
        GroupCmd::Sylow { group, p } => {
            let g = build(group)?;
            let s = fingroup::sylow(&g, *p);
            Ok(Output::json(json!({
                "p": p,
                "order": s.order(),
                "index": s.index(),
                "count": invsys::sylow_subgroups(&g, *p).len(),
                "generators": labels(&g, s.generators().iter().copied()),
            })))
        }
        GroupCmd::Subgroups { group, max_index } => {
            let g = build(group)?;
            let subs = match max_index {
                Some(n) => fingroup::subgroups_up_to_index(&g, *n),
                None => fingroup::all_subgroups(&g),
            }
            .or_fail("group")?;
            let mut by_index: std::collections::BTreeMap<usize, usize> = Default::default();
            for h in &subs {
                *by_index.entry(h.index()).or_default() += 1;
            }
            let rows = by_index.iter().map(|(i, c)| vec![i.to_string(), c.to_string()]).collect();
            let counts: Vec<Value> = by_index.iter().map(|(i, c)| json!({ "index": i, "count": c })).collect();
            Ok(Output::json(json!({ "total": subs.len(), "by_index": counts })).with_table(vec!["index", "count"], rows))
        }
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

fn element(g: &UniformGroup, v: &[u64]) -> CliResult<GElement> {
    let x = GElement(v.to_vec());
    g.validate(&x).or_fail("uniform")?;
    Ok(x)
}

fn uniform_cmd(c: &UniformCmd) -> CliResult<Output> {
    match c {
        UniformCmd::Coords { group: UniformArg { group: g }, inverse, element: Residues(v) } => {
            if *inverse {
                if v.len() != g.dim() {
                    return Err(CliError::Compute { kind: "uniform", message: format!("λ must have {} entries", g.dim()) });
                }
                let lambda = CoordinateVector::from_residues(g.p(), g.precision(), v).or_fail("uniform")?;
                Ok(Output::json(g.x_of_lambda(&lambda).or_fail("uniform")?))
            } else {
                Ok(Output::json(g.lambda_of_x(&element(g, v)?).or_fail("uniform")?))
            }
        }
        UniformCmd::Omega { group: UniformArg { group: g }, element: Residues(v) } => Ok(Output::json(g.omega(&element(g, v)?))),
        UniformCmd::Levels(UniformArg { group: g }) => {
            let mut rows = Vec::new();
            let mut levels = Vec::new();
            for i in 1..=g.precision() + 1 {
                let order = g.level(i).or_fail("uniform")?.order();
                rows.push(vec![i.to_string(), order.to_string()]);
                levels.push(json!({ "level": i, "order": order }));
            }
            let body = json!({ "group": g.name(), "precision": g.precision(), "levels": levels });
            Ok(Output::json(body).with_table(vec!["level", "order"], rows))
        }
        UniformCmd::Uniformity { group, preset, p } => match (group, preset) {
            (Some(g), _) => Ok(Output::json(g.uniformity_report())),
            (None, Some(preset)) => {
                let g = preset.build().or_fail("group")?;
                let p = prime_of(&g, *p)?;
                Ok(Output::json(uniform::uniformity_report(&g, p)))
            }
            (None, None) => unreachable!("clap requires one of the two"),
        },
    }
}

fn elements(g: &UniformGroup, vs: &[Vec<u64>]) -> CliResult<Vec<GElement>> {
    vs.iter().map(|v| element(g, v)).collect()
}

fn basis_json(b: &GoodBasis) -> Value {
    serde_json::to_value(b).expect("serializable")
}

fn goodbasis_cmd(c: &GoodbasisCmd, seed: u64) -> CliResult<Output> {
    match c {
        GoodbasisCmd::Construct { group: UniformArg { group: g }, gens: Tuple(gens) } => {
            let h = goodbasis::OpenSubgroup::from_generators(g, &elements(g, gens)?).or_fail("goodbasis")?;
            Ok(Output::json(basis_json(h.basis())))
        }
        GoodbasisCmd::Verify { group: UniformArg { group: g }, tuple: Tuple(tuple) } => {
            Ok(Output::json(goodbasis::verify_good_basis(g, &elements(g, tuple)?, seed).or_fail("goodbasis")?))
        }
        GoodbasisCmd::Sigma { group: UniformArg { group: g }, max_index } => {
            let table = goodbasis::sigma_table(g, *max_index).or_fail("goodbasis")?;
            let rows = table
                .iter()
                .map(|r| vec![r.index.to_string(), r.count.to_string(), r.cumulative.to_string()])
                .collect();
            Ok(Output::json(&table).with_table(vec!["index", "count", "cumulative"], rows))
        }
    }
}

enum Family {
    Sets(SetFamily),
    Subgroups(SubgroupFamily),
}

impl Family {
    fn sets(&self) -> SetFamily {
        match self {
            Family::Sets(f) => f.clone(),
            Family::Subgroups(f) => f.membership_relation().family(),
        }
    }

    fn subgroups(self) -> CliResult<SubgroupFamily> {
        match self {
            Family::Subgroups(f) => Ok(f),
            Family::Sets(_) => Err(CliError::Usage("this command needs a subgroup family (--index or --hyperplanes)".into())),
        }
    }
}

fn load_family(s: &FamilySource) -> CliResult<Family> {
    if let Some(path) = &s.family {
        let text = if path.as_os_str() == "-" {
            std::io::read_to_string(std::io::stdin()).or_fail("io")?
        } else {
            std::fs::read_to_string(path).or_fail("io")?
        };
        return Ok(Family::Sets(SetFamily::from_json(&text).or_fail("vc")?));
    }
    if let Some(spec) = &s.index {
        let (preset, index) =
            spec.rsplit_once('@').ok_or_else(|| CliError::Usage(format!("expected PRESET@INDEX, got {spec:?}")))?;
        let index: usize = index.parse().map_err(|_| CliError::Usage(format!("bad index in {spec:?}")))?;
        let preset: GroupPreset = preset.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
        let g = preset.build().or_fail("group")?;
        return Ok(Family::Subgroups(vc::index_family(&g, index).or_fail("vc")?));
    }
    let spec = s.hyperplanes.as_deref().expect("clap requires one source");
    let nums: Vec<u64> = spec.split(',').map(|t| t.trim().parse()).collect::<Result<_, _>>().map_err(|_| {
        CliError::Usage(format!("expected P,DIM, got {spec:?}"))
    })?;
    let [p, dim] = nums[..] else {
        return Err(CliError::Usage(format!("expected P,DIM, got {spec:?}")));
    };
    Ok(Family::Subgroups(vc::hyperplane_family(p, dim as usize).or_fail("vc")?))
}

fn vc_cmd(c: &VcCmd, seed: u64) -> CliResult<Output> {
    match c {
        VcCmd::Dim(source) => {
            let fam = load_family(source)?;
            let sets = fam.sets();
            let mut body = json!({
                "universe": sets.universe(),
                "members": sets.len(),
                "distinct": sets.distinct(),
                "vc": vc::vc_dim(&sets),
            });
            if let Family::Subgroups(f) = &fam {
                let rel: BipartiteRelation = f.membership_relation();
                body["vc_opp"] = serde_json::to_value(vc::vc_opp(&rel)).expect("serializable");
            }
            Ok(Output::json(body))
        }
        VcCmd::Shatter { source, max_n } => {
            let sets = load_family(source)?.sets();
            let d = vc::vc_dim(&sets);
            let mut rows = Vec::new();
            let mut body = Vec::new();
            for n in 0..=*max_n {
                let pi = vc::shatter_function(&sets, n, seed);
                // the bound is only stated for n >= vc
                let bound = match n as u64 >= d.value {
                    true => Some(vc::sauer_shelah_bound(d.value, n as u64).or_fail("vc")?.to_string()),
                    false => None,
                };
                let cell = bound.clone().unwrap_or_default();
                rows.push(vec![n.to_string(), pi.value.to_string(), provenance(pi.provenance), cell]);
                body.push(json!({ "n": n, "pi": pi, "sauer_shelah": bound }));
            }
            let body = json!({ "vc": d, "rows": body });
            Ok(Output::json(body).with_table(vec!["n", "pi", "provenance", "sauer_shelah"], rows))
        }
        VcCmd::BaldwinSaxl { source, members, k } => {
            let f = load_family(source)?.subgroups()?;
            let j: Vec<usize> = if members.is_empty() { (0..f.len()).collect() } else { members.clone() };
            let k = match k {
                Some(k) => *k,
                None => vc::vc_opp(&f.membership_relation()).value as usize,
            };
            let kept = vc::baldwin_saxl_reduce(&f, &j, k).or_fail("vc")?;
            let params: Vec<&str> = kept.iter().map(|&i| f.params()[i].as_str()).collect();
            Ok(Output::json(json!({ "k": k, "from": j.len(), "kept": kept, "params": params })))
        }
        VcCmd::Growth(source) => {
            let f = load_family(source)?.subgroups()?;
            let report = vc::verify_growth(&f, seed);
            let rows = report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.sigma.to_string(),
                        r.bound.to_string(),
                        provenance(r.bound_provenance),
                        r.holds.to_string(),
                    ]
                })
                .collect();
            Ok(Output::json(&report).with_table(vec!["n", "sigma", "bound", "provenance", "holds"], rows))
        }
    }
}

fn provenance(p: vc::Provenance) -> String {
    serde_json::to_value(p).expect("serializable").as_str().unwrap_or_default().to_string()
}

fn suite(only: Option<u8>, seed: u64) -> CliResult<Output> {
    let results = match only {
        Some(id) => vec![propp::suite::run_one(id, seed)
            .ok_or_else(|| CliError::Usage(format!("no criterion {id}; criteria are 1-12")))?],
        None => propp::suite::run_all(seed),
    };
    let rows = results
        .iter()
        .map(|r| vec![r.id.to_string(), r.name.to_string(), if r.passed { "PASS" } else { "FAIL" }.into(), r.detail.clone()])
        .collect();
    let mut out = Output::json(&results).with_table(vec!["id", "name", "verdict", "detail"], rows);
    out.failed = results.iter().any(|r| !r.passed);
    Ok(out)
}
