//! `slashgeom`: JSON front end for the slash structure library.
//!
//! Exit status 0 means every verdict was positive, 1 that some verdict was
//! negative (the report names the clause and a witness), 2 an input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use slashgeom::extended::BlockEndo;
use slashgeom::json::{
    lie_algebra_to_json, matrix_to_json, parse_lie_algebra, parse_matrix, parse_rational_str,
    parse_section, rational_to_string,
};
use slashgeom::lie::{
    courant_bracket_li, d_closed_2form, heisenberg_demo, integrability, nontrivial_obstruction,
    LieAlgebraData,
};
use slashgeom::orbit::{
    classify, conjugator, group_dimension, group_names, linearized_dimension, normal_form,
    ConjugatorOptions, OrbitLabel,
};
use slashgeom::slash::{
    bfield, bfield_preserves, check_slash, sig_complex_11, sig_symplectic_m11, Side, SideData,
    SlashReport,
};
use slashgeom::Error;

#[derive(Parser)]
#[command(name = "slashgeom", version, about = "Exact checks for slash structures on V + V*")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Algebraic checks, and Courant integrability when a Lie algebra is given.
    Check(CheckArgs),
    /// The invariant sig(S) of a (1,1) complex or (-1,1) symplectic structure.
    Signature(SignatureArgs),
    /// Orbit label, optionally with a conjugator to the normal form.
    Classify(ClassifyArgs),
    /// Courant bracket of two left-invariant sections.
    Courant(CourantArgs),
    /// B-field transform of a structure.
    Bfield(BfieldArgs),
    /// Built-in worked examples.
    Demo {
        #[command(subcommand)]
        which: Demo,
    },
    /// Tangent dimension of an orbit at its normal form against the group dimension.
    OrbitDim(OrbitDimArgs),
}

#[derive(Subcommand)]
enum Demo {
    /// The Heisenberg group times a line.
    Heisenberg {
        /// cos 2t as a rational.
        #[arg(long, allow_hyphen_values = true)]
        c2: Option<String>,
        /// sin 2t as a rational.
        #[arg(long, allow_hyphen_values = true)]
        s2: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Complex,
    Symplectic,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Complex => Side::Complex,
            SideArg::Symplectic => Side::Symplectic,
        }
    }
}

#[derive(Args)]
struct FixedArgs {
    /// Complex structure j (matrix file).
    #[arg(long, conflicts_with = "omega")]
    j: Option<PathBuf>,
    /// Gram matrix of the symplectic form (matrix file).
    #[arg(long)]
    omega: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum)]
    side: SideArg,
    #[arg(long, allow_hyphen_values = true)]
    lambda: i32,
    #[arg(long, allow_hyphen_values = true)]
    ell: i32,
    #[command(flatten)]
    fixed: FixedArgs,
    /// The structure S on V + V* (matrix file).
    #[arg(long = "S", required_unless_present = "batch", conflicts_with = "batch")]
    s: Option<PathBuf>,
    /// JSON array of structures, checked independently.
    #[arg(long)]
    batch: Option<PathBuf>,
    /// Worker threads for --batch.
    #[arg(long, default_value_t = 1, requires = "batch")]
    jobs: usize,
    /// Lie algebra; enables the Courant integrability check.
    #[arg(long)]
    lie: Option<PathBuf>,
    /// For lambda = 1, require only the +1 eigensections to be involutive.
    #[arg(long)]
    plus_only: bool,
}

#[derive(Args)]
struct SignatureArgs {
    #[arg(long, value_enum)]
    side: SideArg,
    #[command(flatten)]
    fixed: FixedArgs,
    #[arg(long = "S")]
    s: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    fixed: FixedArgs,
    #[arg(long = "S")]
    s: PathBuf,
    /// Also compute F with S = F N F^{-1} for the normal form N.
    #[arg(long)]
    conjugator: bool,
    /// Residual bound for the floating conjugator backend.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Use the constant 2 in the model normalizations.
    #[arg(long)]
    doubled_normalization: bool,
}

#[derive(Args)]
struct CourantArgs {
    #[arg(long)]
    lie: PathBuf,
    /// Section file `{"vec": [...], "covec": [...]}`.
    #[arg(long)]
    x: PathBuf,
    #[arg(long)]
    y: PathBuf,
}

#[derive(Args)]
struct BfieldArgs {
    /// Gram matrix of the B-field two-form.
    #[arg(long)]
    b: PathBuf,
    #[arg(long = "S")]
    s: PathBuf,
    /// Check the transformed structure against this fixed data.
    #[arg(long, value_enum, requires = "lambda", requires = "ell")]
    side: Option<SideArg>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    ell: Option<i32>,
    #[command(flatten)]
    fixed: FixedArgs,
    /// Lie algebra; the B-field must be closed on it.
    #[arg(long)]
    lie: Option<PathBuf>,
}

#[derive(Args)]
struct OrbitDimArgs {
    #[arg(long, value_enum)]
    side: SideArg,
    #[arg(long, allow_hyphen_values = true)]
    lambda: i32,
    #[arg(long, allow_hyphen_values = true)]
    ell: i32,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: Option<usize>,
}

/// Why a run stopped.
enum Failure {
    /// Bad input, reported on stderr.
    Input(String),
    /// A negative verdict; the report still goes to stdout.
    Negative(Value),
}

type Outcome = Result<Value, Failure>;

fn input(msg: impl std::fmt::Display) -> Failure {
    Failure::Input(msg.to_string())
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        input(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
    })
}

fn with_path<T>(path: &Path, r: slashgeom::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| input(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<slashgeom::matrix::RMat, Failure> {
    let v = read_json(path)?;
    with_path(path, parse_matrix(&v))
}

fn read_endo(path: &Path) -> Result<BlockEndo, Failure> {
    let m = read_matrix(path)?;
    with_path(path, BlockEndo::from_matrix(m))
}

fn read_lie(path: &Path) -> Result<LieAlgebraData, Failure> {
    let v = read_json(path)?;
    let g = with_path(path, parse_lie_algebra(&v))?;
    if !slashgeom::lie::jacobi_check(&g) {
        return Err(input(format!("{}: brackets violate the Jacobi identity", path.display())));
    }
    Ok(g)
}

fn side_data(side: Side, fixed: &FixedArgs) -> Result<SideData, Failure> {
    match (side, &fixed.j, &fixed.omega) {
        (Side::Complex, Some(p), None) => Ok(SideData::Complex(read_matrix(p)?)),
        (Side::Symplectic, None, Some(p)) => Ok(SideData::Symplectic(read_matrix(p)?)),
        (Side::Complex, _, _) => Err(input("--side complex needs --j")),
        (Side::Symplectic, _, _) => Err(input("--side symplectic needs --omega")),
    }
}

fn inferred_data(fixed: &FixedArgs) -> Result<SideData, Failure> {
    match (&fixed.j, &fixed.omega) {
        (Some(p), None) => Ok(SideData::Complex(read_matrix(p)?)),
        (None, Some(p)) => Ok(SideData::Symplectic(read_matrix(p)?)),
        _ => Err(input("exactly one of --j and --omega is required")),
    }
}

fn sign(x: i32, name: &str) -> Result<i32, Failure> {
    if x == 1 || x == -1 {
        Ok(x)
    } else {
        Err(input(format!("--{name} must be 1 or -1, got {x}")))
    }
}

fn validate_fixed(data: &SideData) -> Result<(), Failure> {
    let m = data.matrix();
    let n = m.rows();
    if !m.is_square() || n % 2 == 1 {
        return Err(input("fixed structure must be a square matrix of even size"));
    }
    match data {
        SideData::Complex(j) => {
            if !(-&(j * j)).is_identity() {
                return Err(input(Error::NotAComplexStructure));
            }
        }
        SideData::Symplectic(w) => {
            if !w.is_skew() || !slashgeom::linalg::is_invertible(w) {
                return Err(input(Error::DegenerateForm("omega must be skew and nondegenerate".into())));
            }
        }
    }
    Ok(())
}

fn core_error(e: Error) -> Failure {
    match e {
        Error::NotASlashStructure(_)
        | Error::NotInAnyOrbit(_)
        | Error::NotInOrbit(_)
        | Error::ToleranceExceeded { .. } => Failure::Negative(json!({"ok": false, "error": e.to_string()})),
        other => input(other),
    }
}

fn has_sig(side: Side, lambda: i32, ell: i32) -> bool {
    matches!((side, lambda, ell), (Side::Complex, 1, 1) | (Side::Symplectic, -1, 1))
}

/// One structure through the check pipeline; `Ok` carries the report and
/// whether every verdict was positive.
fn check_one(
    s: &BlockEndo,
    data: &SideData,
    lambda: i32,
    ell: i32,
    lie: Option<&LieAlgebraData>,
    plus_only: bool,
) -> slashgeom::Result<(Value, bool)> {
    let rep: SlashReport = check_slash(s, data, lambda, ell)?;
    let mut ok = rep.passed();
    let mut out = json!({ "report": rep });
    if ok && has_sig(data.side(), lambda, ell) {
        let sig = match data {
            SideData::Complex(j) => sig_complex_11(s, j)?,
            SideData::Symplectic(w) => sig_symplectic_m11(s, w)?,
        };
        out["sig"] = json!(sig.n);
        out["signature"] = serde_json::to_value(sig).expect("serializable");
    }
    if let Some(g) = lie {
        if g.dim() != s.n() {
            return Err(Error::DimensionMismatch {
                expected: g.dim(),
                found: s.n(),
            });
        }
        if ok {
            let integ = integrability(s, lambda, plus_only, g);
            ok &= integ.integrable;
            out["integrability"] = serde_json::to_value(integ).expect("serializable");
        }
    }
    out["ok"] = json!(ok);
    Ok((out, ok))
}

fn run_check(a: &CheckArgs) -> Outcome {
    let lambda = sign(a.lambda, "lambda")?;
    let ell = sign(a.ell, "ell")?;
    let data = side_data(a.side.into(), &a.fixed)?;
    validate_fixed(&data)?;
    let lie = a.lie.as_deref().map(read_lie).transpose()?;
    if let Some(path) = &a.s {
        let s = read_endo(path)?;
        let (out, ok) = check_one(&s, &data, lambda, ell, lie.as_ref(), a.plus_only)
            .map_err(|e| input(format!("{}: {e}", path.display())))?;
        return if ok { Ok(out) } else { Err(Failure::Negative(out)) };
    }
    let path = a.batch.as_ref().expect("clap enforces --S or --batch");
    let v = read_json(path)?;
    let Value::Array(items) = v else {
        return Err(input(format!("{}: batch file must be a JSON array", path.display())));
    };
    let structures = items
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let m = x.get("S").unwrap_or(x);
            parse_matrix(m)
                .and_then(BlockEndo::from_matrix)
                .map_err(|e| input(format!("{}: item {}: {e}", path.display(), i + 1)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.max(1))
        .build()
        .map_err(input)?;
    let results: Vec<slashgeom::Result<(Value, bool)>> = pool.install(|| {
        structures
            .par_iter()
            .map(|s| check_one(s, &data, lambda, ell, lie.as_ref(), a.plus_only))
            .collect()
    });
    let mut reports = Vec::with_capacity(results.len());
    let mut all_ok = true;
    for (i, r) in results.into_iter().enumerate() {
        let (out, ok) = r.map_err(|e| input(format!("{}: item {}: {e}", path.display(), i + 1)))?;
        all_ok &= ok;
        reports.push(out);
    }
    let out = json!({"ok": all_ok, "results": reports});
    if all_ok {
        Ok(out)
    } else {
        Err(Failure::Negative(out))
    }
}

fn run_signature(a: &SignatureArgs) -> Outcome {
    let data = side_data(a.side.into(), &a.fixed)?;
    validate_fixed(&data)?;
    let s = read_endo(&a.s)?;
    let r = match &data {
        SideData::Complex(j) => sig_complex_11(&s, j),
        SideData::Symplectic(w) => sig_symplectic_m11(&s, w),
    };
    let sig = r.map_err(core_error)?;
    Ok(json!({"ok": true, "sig": sig.n, "signature": sig}))
}

fn run_classify(a: &ClassifyArgs) -> Outcome {
    let data = inferred_data(&a.fixed)?;
    validate_fixed(&data)?;
    let s = read_endo(&a.s)?;
    let c = classify(&s, &data).map_err(core_error)?;
    let mut out = json!({
        "ok": true,
        "label": c.label,
        "label_text": c.label.to_string(),
        "alternatives": c.alternatives,
    });
    if let Ok((g, h)) = group_names(&c.label) {
        out["group"] = json!(g);
        out["stabilizer"] = json!(h);
    }
    if a.conjugator {
        if !(a.tolerance > 0.0) {
            return Err(input("--tolerance must be positive"));
        }
        let opts = ConjugatorOptions {
            tolerance: a.tolerance,
            doubled_normalization: a.doubled_normalization,
        };
        match conjugator(&s, &data, &c.label, &opts) {
            Ok(r) => out["conjugator"] = serde_json::to_value(r).expect("serializable"),
            Err(Error::Unsupported(msg)) => out["conjugator"] = json!({"unsupported": msg}),
            Err(e) => {
                out["ok"] = json!(false);
                out["conjugator"] = json!({"error": e.to_string()});
                return Err(Failure::Negative(out));
            }
        }
    }
    Ok(out)
}

fn run_courant(a: &CourantArgs) -> Outcome {
    let g = read_lie(&a.lie)?;
    let x = with_path(&a.x, parse_section(&read_json(&a.x)?))?;
    let y = with_path(&a.y, parse_section(&read_json(&a.y)?))?;
    let z = courant_bracket_li(&x, &y, &g).map_err(input)?;
    Ok(json!({"ok": true, "bracket": z}))
}

fn run_bfield(a: &BfieldArgs) -> Outcome {
    let b = read_matrix(&a.b)?;
    let s = read_endo(&a.s)?;
    let t = bfield(&b, &s).map_err(input)?;
    let mut ok = true;
    let mut out = json!({"S": matrix_to_json(t.matrix())});
    if let Some(path) = &a.lie {
        let g = read_lie(path)?;
        if g.dim() != b.rows() {
            return Err(input(format!("{}: dimension {} does not match the B-field", path.display(), g.dim())));
        }
        let closed = d_closed_2form(&b, &g);
        ok &= closed;
        out["closed"] = json!(closed);
    }
    if let Some(side) = a.side {
        let (lambda, ell) = (sign(a.lambda.expect("required"), "lambda")?, sign(a.ell.expect("required"), "ell")?);
        let data = side_data(side.into(), &a.fixed)?;
        validate_fixed(&data)?;
        if let SideData::Complex(j) = &data {
            let pres = bfield_preserves(&b, j, lambda, ell);
            ok &= pres;
            out["preserves"] = json!(pres);
        }
        let before = check_slash(&s, &data, lambda, ell).map_err(input)?;
        let after = check_slash(&t, &data, lambda, ell).map_err(input)?;
        ok &= before.passed() == after.passed();
        if before.passed() && after.passed() && has_sig(side.into(), lambda, ell) {
            let sig = |x: &BlockEndo| match &data {
                SideData::Complex(j) => sig_complex_11(x, j).map(|r| r.n),
                SideData::Symplectic(w) => sig_symplectic_m11(x, w).map(|r| r.n),
            };
            let (s0, s1) = (sig(&s).map_err(input)?, sig(&t).map_err(input)?);
            ok &= s0 == s1;
            out["sig_before"] = json!(s0);
            out["sig_after"] = json!(s1);
        }
        out["report_before"] = serde_json::to_value(before).expect("serializable");
        out["report_after"] = serde_json::to_value(after).expect("serializable");
    }
    out["ok"] = json!(ok);
    if ok {
        Ok(out)
    } else {
        Err(Failure::Negative(out))
    }
}

fn run_heisenberg(c2: Option<&str>, s2: Option<&str>) -> Outcome {
    let demo = heisenberg_demo();
    let parse = |s: &str, name: &str| parse_rational_str(s).map_err(|e| input(format!("--{name}: {e}")));
    let s = match (c2, s2) {
        (None, None) => demo.s.clone(),
        (Some(c), Some(sn)) => {
            let (c, sn) = (parse(c, "c2")?, parse(sn, "s2")?);
            demo.s_of(&c, &sn).map_err(input)?
        }
        _ => return Err(input("--c2 and --s2 go together")),
    };
    let data = SideData::Complex(demo.j.clone());
    let (mut out, mut ok) = check_one(&s, &data, 1, 1, Some(&demo.g), false).map_err(input)?;
    out["lie"] = lie_algebra_to_json(&demo.g);
    out["j"] = matrix_to_json(&demo.j);
    out["S"] = matrix_to_json(s.matrix());
    if let (Some(c), Some(sn)) = (c2, s2) {
        out["c2"] = json!(rational_to_string(&parse(c, "c2")?));
        out["s2"] = json!(rational_to_string(&parse(sn, "s2")?));
    }
    out["theta_e_closed"] = json!(d_closed_2form(&demo.theta_e, &demo.g));
    if ok {
        let obs = nontrivial_obstruction(&s, &demo.j, &demo.g, 1).map_err(input)?;
        out["obstruction"] = serde_json::to_value(&obs).expect("serializable");
        out["obstructed"] = json!(obs.obstructed);
    } else {
        ok = false;
    }
    out["ok"] = json!(ok);
    if ok {
        Ok(out)
    } else {
        Err(Failure::Negative(out))
    }
}

fn run_orbit_dim(a: &OrbitDimArgs) -> Outcome {
    let label = OrbitLabel::new(a.side.into(), sign(a.lambda, "lambda")?, sign(a.ell, "ell")?, a.m, a.n)
        .map_err(input)?;
    let nf = normal_form(&label).map_err(input)?;
    let lin = linearized_dimension(&nf.s, &label, &nf.data).map_err(input)?;
    let grp = group_dimension(&label).map_err(input)?;
    let out = json!({
        "ok": lin == grp,
        "label": label,
        "label_text": label.to_string(),
        "linearized_dimension": lin,
        "group_dimension": grp,
        "S": matrix_to_json(nf.s.matrix()),
    });
    if lin == grp {
        Ok(out)
    } else {
        Err(Failure::Negative(out))
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Check(a) => run_check(a),
        Command::Signature(a) => run_signature(a),
        Command::Classify(a) => run_classify(a),
        Command::Courant(a) => run_courant(a),
        Command::Bfield(a) => run_bfield(a),
        Command::Demo {
            which: Demo::Heisenberg { c2, s2 },
        } => run_heisenberg(c2.as_deref(), s2.as_deref()),
        Command::OrbitDim(a) => run_orbit_dim(a),
    }
}

fn print(v: &Value) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(v).expect("serializable");
    // a closed pipe downstream is not our failure
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(v) => {
            print(&v);
            ExitCode::SUCCESS
        }
        Err(Failure::Negative(v)) => {
            print(&v);
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
