use std::fs;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use singfol_core::chase::{chase_ideal, en_complex_pfaff, en_complex_tangent, ChaseResult, IDEAL};
use singfol_core::chow::{
    porteous_singular_degree, pullback_degree, singular_degree_formula, DistributionParams,
    SplitBundle,
};
use singfol_core::classify::classify;
use singfol_core::cohomology::{
    ext_power_tangent, table, CohomologyTable, SheafAtom, VirtualSheaf,
};
use singfol_core::criteria::{
    acm_check, beilinson_rank_bound, buchsbaum_numeric, evans_griffith, horrocks, kpr, regularity,
    Verdict,
};
use singfol_core::forms::{
    coefficient_ideal, distribution_degree_of_form, parse_form_lines, parse_ideal,
    volume_contract_chain, wedge, HomogeneousPoly, PolyKForm, PolyVectorField,
};
use singfol_core::hilbert::{stabilized_profile, DEFAULT_T_CAP};

type CliResult = Result<(), String>;

#[derive(Parser)]
#[command(
    name = "singfol",
    version,
    about = "Invariants of holomorphic distributions on projective space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree of the singular scheme for a split tangent sheaf ⊕ O(-d_i).
    Degree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Comma-separated d_i.
        #[arg(long, allow_hyphen_values = true)]
        d_list: String,
    },
    /// Singular degree 1 + d + ... + d^{k+1} of a linear pullback.
    PullbackDegree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
    },
    /// Cohomology table of a sheaf such as `O(-2)^3+Om(1,4)`.
    Cohomology {
        #[arg(long, allow_hyphen_values = true)]
        sheaf: String,
        #[arg(long)]
        n: usize,
        /// Twist range `lo..hi`.
        #[arg(long, allow_hyphen_values = true, default_value = "-5..5")]
        twists: String,
        #[arg(long)]
        json: bool,
    },
    /// Horrocks, Evans-Griffith or Kumar-Peterson-Rao splitting check.
    SplitCheck {
        #[arg(long, allow_hyphen_values = true)]
        sheaf: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        criterion: Criterion,
        #[arg(long)]
        json: bool,
    },
    /// Whether an ideal-sheaf table is arithmetically Cohen-Macaulay.
    AcmCheck(IdealSource),
    /// The Stückrad-Vogel conditions on an ideal-sheaf table.
    BuchsbaumCheck(IdealSource),
    /// Castelnuovo-Mumford regularity of an ideal-sheaf table.
    Regularity(IdealSource),
    /// Beilinson lower bound n * h^{n-1}(F(-n-1)) on the rank of F.
    BeilinsonBound {
        #[arg(long, conflicts_with = "sheaf")]
        table: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "n")]
        sheaf: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Eagon-Northcott chase for the singular scheme's ideal sheaf.
    #[command(group(ArgGroup::new("source").required(true).args(["tangent", "pfaff"])))]
    Chase {
        /// Twists a_i of a split tangent sheaf ⊕ O(a_i).
        #[arg(long, allow_hyphen_values = true)]
        tangent: Option<String>,
        /// Twists a_i of a split Pfaff bundle ⊕ O(a_i).
        #[arg(long, allow_hyphen_values = true)]
        pfaff: Option<String>,
        /// Distribution dimension (Pfaff chases).
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "-6..6")]
        twists: String,
        /// Print how each nonzero entry was derived.
        #[arg(long)]
        explain: bool,
        #[arg(long)]
        json: bool,
    },
    /// Polynomial differential forms.
    Form {
        #[command(subcommand)]
        command: FormCommand,
    },
    /// Singular nongeneral-type complete intersection distributions by curves.
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: i64,
    },
    /// Hilbert function and polynomial of a homogeneous ideal.
    Hilbert {
        /// Generators, e.g. `z0*z2, z0*z3`.
        #[arg(long)]
        ideal: String,
        /// Ambient P^n (inferred from the variables otherwise).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_T_CAP)]
        t_max: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum FormCommand {
    /// Singular scheme of a form, or of the wedge of several 1-forms (one per line).
    Sing {
        #[arg(long)]
        input: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// `i_X i_{Z_1} ... i_R Ω` with X of the first degree on z_0..z_{k+1}; degree-0
    /// Z_j are coordinate fields, others random.
    Pullback {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        field_degrees: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also compute the singular scheme.
        #[arg(long)]
        sing: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Criterion {
    Horrocks,
    Eg,
    Kpr,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["table", "from_chase"])))]
struct IdealSource {
    /// Ideal-sheaf table in JSON.
    #[arg(long)]
    table: Option<String>,
    /// `tangent:<a_i>` or `pfaff:<a_i>`.
    #[arg(long, allow_hyphen_values = true, requires = "n")]
    from_chase: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    /// Dimension of the scheme; required with --table.
    #[arg(long)]
    dim_z: Option<usize>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn parse_list(s: &str) -> Result<Vec<i64>, String> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| format!("`{x}` is not an integer in list `{s}`"))
        })
        .collect()
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected `lo..hi`, got `{s}`"))?;
    let lo = a
        .trim()
        .parse()
        .map_err(|_| format!("bad range start `{a}`"))?;
    let hi = b
        .trim()
        .parse()
        .map_err(|_| format!("bad range end `{b}`"))?;
    if lo > hi {
        return Err(format!("empty range {s}"));
    }
    Ok((lo, hi))
}

/// `O(a)`, `Om(p,k)`, `T`, `T(k)`, each optionally `^m`, joined by `+`.
fn parse_sheaf(spec: &str, n: usize) -> Result<VirtualSheaf, String> {
    let mut atoms = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    let mut pieces = Vec::new();
    for (i, c) in spec.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                pieces.push(&spec[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push(&spec[start..]);
    for piece in pieces {
        let piece = piece.trim();
        let (body, mult) = match piece.rsplit_once('^') {
            Some((b, m)) if !m.contains(')') => (
                b.trim(),
                m.trim()
                    .parse::<u64>()
                    .map_err(|_| format!("bad multiplicity in `{piece}`"))?,
            ),
            _ => (piece, 1),
        };
        let args = |prefix: &str| -> Option<Vec<&str>> {
            body.strip_prefix(prefix)?
                .strip_prefix('(')?
                .strip_suffix(')')
                .map(|s| s.split(',').map(str::trim).collect())
        };
        let int = |s: &str| {
            s.parse::<i64>()
                .map_err(|_| format!("bad integer `{s}` in `{piece}`"))
        };
        let atom = if body == "T" {
            ext_power_tangent(n, 1).map_err(err)?
        } else if let Some(a) = args("Om") {
            if a.len() != 2 {
                return Err(format!("`{piece}`: Om takes (p,k)"));
            }
            let p = usize::try_from(int(a[0])?).map_err(|_| format!("negative p in `{piece}`"))?;
            SheafAtom::omega(n, p, int(a[1])?).map_err(err)?
        } else if let Some(a) = args("O") {
            if a.len() != 1 {
                return Err(format!("`{piece}`: O takes one twist"));
            }
            SheafAtom::line(int(a[0])?)
        } else if let Some(a) = args("T") {
            if a.len() != 1 {
                return Err(format!("`{piece}`: T takes one twist"));
            }
            ext_power_tangent(n, 1).map_err(err)?.twisted(int(a[0])?)
        } else {
            return Err(format!("cannot parse sheaf term `{piece}`"));
        };
        atoms.push((atom, mult));
    }
    VirtualSheaf::new(n, atoms).map_err(err)
}

fn load_table(path: &str) -> Result<CohomologyTable, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
    CohomologyTable::from_json(&v).map_err(err)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn join(xs: &[i64]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

struct IdealChase {
    result: ChaseResult,
    dim_z: usize,
    summary: Vec<String>,
}

fn run_chase(
    kind: &str,
    twists: &[i64],
    n: usize,
    r: Option<usize>,
    lo: i64,
    hi: i64,
) -> Result<IdealChase, String> {
    let bundle = SplitBundle::new(n, twists.to_vec()).map_err(err)?;
    let mut summary = Vec::new();
    let (triples, dim_z) = match kind {
        "tangent" => {
            let p = DistributionParams::from_split_tangent(&bundle).map_err(err)?;
            if r.is_some_and(|r| r != p.r) {
                return Err(format!(
                    "tangent sheaf of rank {} gives r = {}",
                    bundle.rank(),
                    p.r
                ));
            }
            let d: Vec<i64> = bundle.twists().iter().map(|a| -a).collect();
            summary.push(format!("tangent sheaf F = {bundle} on P^{n}"));
            summary.push(format!("a_i (F = ⊕ O(a_i)): {}", join(bundle.twists())));
            summary.push(format!("d_i = -a_i (F = ⊕ O(-d_i)): {}", join(&d)));
            summary.push(format!(
                "dimension r = {}, codimension k = {}, degree d = {}",
                p.r, p.k, p.d
            ));
            (en_complex_tangent(&bundle, n).map_err(err)?, p.r - 1)
        }
        "pfaff" => {
            let p = DistributionParams::from_pfaff(&bundle).map_err(err)?;
            if r.is_some_and(|r| r != p.r) {
                return Err(format!(
                    "Pfaff bundle of rank {} on P^{n} gives r = {}, not {}",
                    bundle.rank(),
                    p.r,
                    r.unwrap()
                ));
            }
            let d: Vec<i64> = bundle.twists().iter().map(|a| -a - 2).collect();
            summary.push(format!("Pfaff bundle E = {bundle} on P^{n}"));
            summary.push(format!("a_i (E = ⊕ O(a_i)): {}", join(bundle.twists())));
            summary.push(format!("d_i = -a_i - 2: {}", join(&d)));
            summary.push(format!(
                "dimension r = {}, codimension k = {}, degree d = {}",
                p.r, p.k, p.d
            ));
            (en_complex_pfaff(&bundle, p.r, n).map_err(err)?, n - p.r - 1)
        }
        other => {
            return Err(format!(
                "unknown chase source `{other}`; use tangent or pfaff"
            ))
        }
    };
    let result = chase_ideal(&triples, n, lo, hi).map_err(err)?;
    Ok(IdealChase {
        result,
        dim_z,
        summary,
    })
}

fn ideal_table(src: &IdealSource) -> Result<(CohomologyTable, usize), String> {
    if let Some(path) = &src.table {
        let t = load_table(path)?;
        let dim_z = src.dim_z.ok_or("--dim-z is required with --table")?;
        return Ok((t, dim_z));
    }
    let spec = src.from_chase.as_deref().expect("clap enforces a source");
    let (kind, tw) = spec
        .split_once(':')
        .ok_or_else(|| format!("expected `tangent:<twists>` or `pfaff:<twists>`, got `{spec}`"))?;
    let n = src.n.expect("clap enforces --n");
    let c = run_chase(kind, &parse_list(tw)?, n, src.r, -6, 6)?;
    let dim_z = src.dim_z.unwrap_or(c.dim_z);
    Ok((c.result.tables[IDEAL].clone(), dim_z))
}

fn show_verdict(name: &str, v: &Verdict, json: bool) {
    if json {
        print_json(&v.to_json());
    } else {
        println!("{name}: {v}");
    }
}

fn run(cmd: Command) -> CliResult {
    match cmd {
        Command::Degree { n, r, d_list } => {
            println!(
                "{}",
                singular_degree_formula(n, r, &parse_list(&d_list)?).map_err(err)?
            );
        }
        Command::PullbackDegree { n, k, d } => {
            println!("{}", pullback_degree(n, k, d).map_err(err)?);
        }
        Command::Cohomology {
            sheaf,
            n,
            twists,
            json,
        } => {
            let (lo, hi) = parse_range(&twists)?;
            let t = table(&parse_sheaf(&sheaf, n)?, lo, hi).map_err(err)?;
            if json {
                print_json(&t.to_json());
            } else {
                print!("{t}");
            }
        }
        Command::SplitCheck {
            sheaf,
            n,
            criterion,
            json,
        } => {
            let s = parse_sheaf(&sheaf, n)?;
            let t = table(&s, -(n as i64) - 4, n as i64 + 4).map_err(err)?;
            let rank = s.rank() as usize;
            let (name, v) = match criterion {
                Criterion::Horrocks => ("Horrocks", horrocks(&t)),
                Criterion::Eg => ("Evans-Griffith", evans_griffith(&t, rank, n).map_err(err)?),
                Criterion::Kpr => ("Kumar-Peterson-Rao", kpr(&t, rank, n).map_err(err)?),
            };
            show_verdict(name, &v, json);
        }
        Command::AcmCheck(src) => {
            let (t, dim_z) = ideal_table(&src)?;
            show_verdict("ACM", &acm_check(&t, dim_z).map_err(err)?, src.json);
        }
        Command::BuchsbaumCheck(src) => {
            let (t, dim_z) = ideal_table(&src)?;
            show_verdict(
                "Buchsbaum(numeric)",
                &buchsbaum_numeric(&t, dim_z).map_err(err)?,
                src.json,
            );
        }
        Command::Regularity(src) => {
            let (t, _) = ideal_table(&src)?;
            let m = regularity(&t).map_err(err)?;
            if src.json {
                print_json(&json!({ "regularity": m }));
            } else {
                println!("{m}");
            }
        }
        Command::BeilinsonBound {
            table: path,
            sheaf,
            n,
        } => {
            let t = match (path, sheaf) {
                (Some(p), _) => load_table(&p)?,
                (None, Some(s)) => {
                    let n = n.expect("clap enforces --n");
                    table(&parse_sheaf(&s, n)?, -(n as i64) - 6, n as i64 + 2).map_err(err)?
                }
                (None, None) => return Err("give --table or --sheaf".into()),
            };
            let n = t.ambient_dim();
            println!("{}", beilinson_rank_bound(&t, n).map_err(err)?);
        }
        Command::Chase {
            tangent,
            pfaff,
            r,
            n,
            twists,
            explain,
            json,
        } => {
            let (lo, hi) = parse_range(&twists)?;
            let (kind, tw) = match (tangent, pfaff) {
                (Some(t), _) => ("tangent", t),
                (None, Some(p)) => ("pfaff", p),
                (None, None) => unreachable!("clap enforces a source"),
            };
            let c = run_chase(kind, &parse_list(&tw)?, n, r, lo, hi)?;
            let iz = &c.result.tables[IDEAL];
            let acm = acm_check(iz, c.dim_z).map_err(err)?;
            let buchs = buchsbaum_numeric(iz, c.dim_z).map_err(err)?;
            let reg = regularity(iz).ok();
            if json {
                let mut v = c.result.to_json();
                v["summary"] = json!(c.summary);
                v["dim_z"] = json!(c.dim_z);
                v["acm"] = acm.to_json();
                v["buchsbaum"] = buchs.to_json();
                v["regularity"] = json!(reg);
                print_json(&v);
            } else {
                for line in &c.summary {
                    println!("{line}");
                }
                for tr in &c.result.triples {
                    println!("{tr}");
                }
                println!("\nh^q(I_Z(t)):");
                print!("{}", iz.restricted(lo, hi));
                println!("\ndim Z = {}", c.dim_z);
                println!("ACM: {acm}");
                println!("Buchsbaum(numeric): {buchs}");
                match reg {
                    Some(m) => println!("regularity: {m}"),
                    None => println!("regularity: unavailable"),
                }
                println!("Euler checks: {}", c.result.euler_checks);
                if explain {
                    println!("\n{}", c.result.explain());
                }
            }
        }
        Command::Form { command } => run_form(command)?,
        Command::Classify { n, degree } => {
            println!("{}", classify(n, degree).map_err(err)?.line());
        }
        Command::Hilbert {
            ideal,
            n,
            t_max,
            json,
        } => {
            let ideal = parse_ideal(&ideal, n.map(|n| n + 1)).map_err(err)?;
            let p = stabilized_profile(&ideal, t_max).map_err(err)?;
            if json {
                print_json(&p.to_json());
            } else {
                println!(
                    "HF: {}",
                    p.values
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                );
                println!(
                    "Hilbert polynomial: {} (stable from t = {})",
                    p.polynomial, p.stable_from
                );
                match p.scheme_dim {
                    Some(d) => println!("dim {d}, degree {}", p.scheme_deg),
                    None => println!("empty scheme"),
                }
            }
        }
    }
    Ok(())
}

fn run_form(cmd: FormCommand) -> CliResult {
    match cmd {
        FormCommand::Sing { input, n, json } => {
            let text = fs::read_to_string(&input).map_err(|e| format!("{input}: {e}"))?;
            let n = match n {
                Some(n) => n,
                None => {
                    let forms = parse_form_lines(&text, None).map_err(err)?;
                    forms.iter().map(PolyKForm::nvars).max().expect("nonempty") - 1
                }
            };
            let forms = parse_form_lines(&text, Some(n + 1)).map_err(err)?;
            // several 1-forms present the Pfaff bundle ⊕ O(-e_i - 1), e_i the coefficient degrees
            let pfaff = if forms.len() > 1 {
                if forms.iter().any(|f| f.k() != 1) {
                    return Err(
                        "several forms are read as Pfaff 1-forms; each must be a 1-form".into(),
                    );
                }
                for f in &forms {
                    distribution_degree_of_form(f, n).map_err(err)?;
                }
                let tw: Vec<i64> = forms.iter().map(|f| -(f.degree() as i64) - 1).collect();
                Some(SplitBundle::new(n, tw).map_err(err)?)
            } else {
                None
            };
            let mut omega = forms[0].clone();
            for f in &forms[1..] {
                omega = wedge(&omega, f).map_err(err)?;
            }
            if omega.is_zero() {
                return Err("the form is zero".into());
            }
            let d = distribution_degree_of_form(&omega, n).map_err(err)?;
            let k = omega.k();
            let ideal = coefficient_ideal(&omega).map_err(err)?;
            let profile = stabilized_profile(&ideal, DEFAULT_T_CAP).map_err(err)?;
            let mut out = json!({
                "form": omega.to_text(),
                "n": n,
                "codimension": k,
                "degree": d,
                "ideal": ideal.gens().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "hilbert": profile.to_json(),
            });
            let mut lines = vec![
                format!("form: {}", omega.to_text()),
                format!("projective (i_R ω = 0): distribution of codimension {k} and degree {d} on P^{n}"),
                format!("ideal: {ideal}"),
                format!(
                    "ideal with {} generators, dim {}, degree {}",
                    ideal.gens().len(),
                    profile.scheme_dim.map_or("empty".into(), |x| x.to_string()),
                    profile.scheme_deg
                ),
                format!("Hilbert polynomial: {} (stable from t = {})", profile.polynomial, profile.stable_from),
            ];
            match &pfaff {
                Some(e) => {
                    let r = n - e.rank();
                    let porteous = porteous_singular_degree(n, e).map_err(err)?;
                    lines.push(format!("Pfaff bundle: {e}, Porteous degree {porteous}"));
                    out["pfaff"] = json!(e.to_string());
                    out["porteous_degree"] = json!(porteous.to_string());
                    if (1..=3).contains(&r) {
                        let c = run_chase("pfaff", e.twists(), n, Some(r), -6, 6)?;
                        let iz = &c.result.tables[IDEAL];
                        let acm = acm_check(iz, c.dim_z).map_err(err)?;
                        let b = buchsbaum_numeric(iz, c.dim_z).map_err(err)?;
                        lines.push(format!("ACM: {acm}"));
                        lines.push(format!("Buchsbaum(numeric): {b}"));
                        out["acm"] = acm.to_json();
                        out["buchsbaum"] = b.to_json();
                    } else {
                        lines.push(format!("ACM: unavailable (no chase for r = {r})"));
                    }
                }
                None => lines.push("ACM: unavailable (give the Pfaff 1-forms one per line)".into()),
            }
            if json {
                print_json(&out);
            } else {
                for l in lines {
                    println!("{l}");
                }
            }
        }
        FormCommand::Pullback {
            n,
            field_degrees,
            seed,
            sing,
        } => {
            let degs = parse_list(&field_degrees)?;
            if degs.is_empty() || degs.len() >= n || degs.iter().any(|&d| d < 0) {
                return Err(format!(
                    "need 1..={} nonnegative field degrees, got `{field_degrees}`",
                    n - 1
                ));
            }
            let nvars = n + 1;
            let k = n - degs.len();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut coeff = || rng.gen_range(-5..=5);
            let base: Vec<usize> = (0..=k + 1).collect();
            let all: Vec<usize> = (0..nvars).collect();
            let x = PolyVectorField::new(
                (0..nvars)
                    .map(|i| {
                        if i <= k + 1 {
                            HomogeneousPoly::dense(nvars, degs[0] as u32, &base, &mut coeff)
                        } else {
                            HomogeneousPoly::zero(nvars, degs[0] as u32)
                        }
                    })
                    .collect(),
            )
            .map_err(err)?;
            let mut fields = vec![x];
            for (j, &dj) in degs.iter().enumerate().skip(1) {
                let z = if dj == 0 {
                    PolyVectorField::partial(nvars, k + 1 + j)
                } else {
                    let comps = (0..nvars)
                        .map(|_| HomogeneousPoly::dense(nvars, dj as u32, &all, &mut coeff))
                        .collect();
                    PolyVectorField::new(comps).map_err(err)?
                };
                fields.push(z);
            }
            let omega = volume_contract_chain(n, &fields).map_err(err)?;
            if omega.is_zero() {
                return Err("the contraction vanished; try another seed".into());
            }
            let d = distribution_degree_of_form(&omega, n).map_err(err)?;
            println!("{}", omega.to_text());
            println!("codimension {k}, degree {d} on P^{n}");
            if sing {
                let ideal = coefficient_ideal(&omega).map_err(err)?;
                let (dim, deg) =
                    singfol_core::hilbert::scheme_degree_dim(&ideal, DEFAULT_T_CAP).map_err(err)?;
                println!("singular scheme: dim {dim}, degree {deg}");
                if degs[1..].iter().all(|&x| x == 0) {
                    println!(
                        "linear pullback prediction: degree {}",
                        pullback_degree(n, k, d).map_err(err)?
                    );
                }
            }
        }
    }
    Ok(())
}
