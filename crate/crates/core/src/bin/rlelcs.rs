use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use rle_lcs::anchors::{validate_anchor_set, AnchorScheme, AnchorSet};
use rle_lcs::bench::{run_grid, BenchCell, CSV_HEADER};
use rle_lcs::config::SolverConfig;
use rle_lcs::error::Error;
use rle_lcs::lcs::{solve_lcs_rle_p, solve_lrs};
use rle_lcs::query::{OracleHandle, QueryLedger};
use rle_lcs::reductions::{
    bits_to_string, el_call_bound, parity, parity_via_dl, parity_via_el, parse_bits,
};
use rle_lcs::reference::{brute_lcs, plant_unverified};
use rle_lcs::rle::{decode, encode, parse_text, to_text_line, RleString};
use rle_lcs::text::Text;
use rle_lcs::walk::WalkMode;

#[derive(Parser)]
#[command(
    name = "rlelcs",
    version,
    about = "Longest common substring of run-length encoded strings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert a raw byte file to the `char:count` text format.
    Encode {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert the first line of a text-format file back to raw bytes.
    Decode {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Longest common substring of two strings, or longest repeat of one.
    Solve(SolveArgs),
    /// Ledger readings of cost-only walk searches over a grid, as CSV.
    Bench(BenchArgs),
    /// Recover parities of bit strings through the two reductions.
    Reductions(ReductionArgs),
    /// Check the anchor condition of a scheme on a pair of strings.
    ValidateAnchors(ValidateArgs),
}

#[derive(Args)]
struct SolveArgs {
    a: PathBuf,
    /// Second string; omitted with `--lrs`.
    b: Option<PathBuf>,
    /// Longest repeated substring of `a`.
    #[arg(long)]
    lrs: bool,
    /// Inputs are raw byte files rather than the text format.
    #[arg(long)]
    raw: bool,
    /// fullset, walk or costonly.
    #[arg(long)]
    mode: Option<WalkMode>,
    /// exhaustive or minimizer.
    #[arg(long)]
    anchors: Option<AnchorScheme>,
    #[arg(long)]
    seed: Option<u64>,
    /// `key = value` file; flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the result and ledger as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated run counts per string.
    #[arg(long, value_delimiter = ',', default_values_t = [256usize, 512, 1024, 2048, 4096])]
    n: Vec<usize>,
    /// Comma-separated encoded scales.
    #[arg(long, value_delimiter = ',', default_values_t = [16usize])]
    d: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "costonly")]
    mode: WalkMode,
    /// Write the CSV here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReductionArgs {
    /// A single bit string such as `101`.
    #[arg(
        long,
        conflicts_with = "exhaustive_upto",
        required_unless_present = "exhaustive_upto"
    )]
    bits: Option<String>,
    /// Every bit string of length 1 ..= N.
    #[arg(long)]
    exhaustive_upto: Option<usize>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Text-format files; a planted pair is generated when omitted.
    #[arg(requires = "b")]
    a: Option<PathBuf>,
    b: Option<PathBuf>,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value = "minimizer")]
    scheme: AnchorScheme,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = rle_lcs::anchors::DEFAULT_D_MIN)]
    d_min: usize,
    /// Runs per generated string.
    #[arg(long, default_value_t = 64)]
    runs: usize,
    /// Runs of the generated shared block.
    #[arg(long, default_value_t = 16)]
    block: usize,
}

enum Failure {
    Lib(Error),
    Io(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Resource { .. }) => 2,
            Failure::Lib(Error::Internal(_))
            | Failure::Lib(Error::Reduction(_))
            | Failure::Mismatch(_) => 3,
            Failure::Lib(_) | Failure::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(msg) | Failure::Mismatch(msg) => f.write_str(msg),
        }
    }
}

type CliResult = Result<(), Failure>;

fn read_bytes(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_rle(path: &Path, raw: bool) -> Result<RleString, Failure> {
    let bytes = read_bytes(path)?;
    if raw {
        return Ok(encode(&bytes));
    }
    let doc = String::from_utf8(bytes)
        .map_err(|_| Failure::Io(format!("{}: not UTF-8", path.display())))?;
    Ok(parse_text(&doc)?
        .into_iter()
        .next()
        .unwrap_or_else(RleString::empty))
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> CliResult {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| Failure::Io(format!("stdout: {e}")))
        }
    }
}

fn solve(args: SolveArgs) -> CliResult {
    let mut cfg = match &args.config {
        Some(p) => {
            let doc = String::from_utf8(read_bytes(p)?)
                .map_err(|_| Failure::Io(format!("{}: not UTF-8", p.display())))?;
            SolverConfig::from_file_str(&doc)?
        }
        None => SolverConfig::default(),
    };
    if let Some(mode) = args.mode {
        cfg.mode = mode;
    }
    if let Some(scheme) = args.anchors {
        cfg.scheme = scheme;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;

    let ledger = QueryLedger::new();
    let a = OracleHandle::new(read_rle(&args.a, args.raw)?, ledger.clone());
    let answer = match (&args.b, args.lrs) {
        (None, true) => solve_lrs(&a, &cfg)?,
        (Some(b), false) => {
            let b = OracleHandle::new(read_rle(b, args.raw)?, ledger.clone());
            solve_lcs_rle_p(&a, &b, &cfg)?
        }
        (Some(_), true) => {
            return Err(Failure::Lib(Error::Parameter(
                "--lrs takes a single input".into(),
            )))
        }
        (None, false) => return Err(Failure::Lib(Error::Parameter("two inputs required".into()))),
    };
    if args.json {
        let doc = json!({ "result": answer, "ledger": ledger.snapshot() });
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("serialisable")
        );
        return Ok(());
    }
    match answer {
        Some(ans) => {
            let s = a.string();
            let text = rle_lcs::rle::slice(s, ans.decoded_start_a, ans.d_tilde)?;
            println!("length      {}", ans.d_tilde);
            println!("runs        {}", ans.ell);
            println!(
                "start A     run {} (decoded {})",
                ans.i_a, ans.decoded_start_a
            );
            let other = if args.lrs { "start A'" } else { "start B" };
            println!(
                "{other:<11} run {} (decoded {})",
                ans.i_b, ans.decoded_start_b
            );
            println!("substring   {}", to_text_line(&text));
        }
        None if cfg.mode == WalkMode::CostOnly => println!("no answer in cost-only mode"),
        None => println!("no common substring"),
    }
    let snap = ledger.snapshot();
    println!(
        "ledger      run_queries={} prefix_queries={} charged_cost={:.3}",
        snap.run_queries, snap.prefix_queries, snap.charged_cost
    );
    Ok(())
}

fn bench(args: BenchArgs) -> CliResult {
    let cells: Vec<BenchCell> = args
        .n
        .iter()
        .flat_map(|&n| args.d.iter().map(move |&d| BenchCell { n, d }))
        .collect();
    let rows = run_grid(&cells, args.trials, args.seed, args.mode)?;
    let mut csv = format!("{CSV_HEADER}\n");
    for row in rows {
        csv.push_str(&row.to_csv());
        csv.push('\n');
    }
    write_out(args.output.as_deref(), csv.as_bytes())
}

struct ReductionRow {
    bits: Vec<bool>,
    dl: bool,
    el: bool,
    calls: usize,
}

impl ReductionRow {
    fn ok(&self) -> bool {
        let p = parity(&self.bits);
        self.dl == p && self.el == p && self.calls <= el_call_bound(self.bits.len())
    }
}

fn reduce(bits: Vec<bool>) -> Result<ReductionRow, Failure> {
    let dl = parity_via_dl(&bits, |x, y| Ok(brute_lcs(x, y)?.length))?;
    let el = parity_via_el(&bits, |x, y| Ok(brute_lcs(x, y)?.encoded_len))?;
    Ok(ReductionRow {
        bits,
        dl,
        el: el.parity,
        calls: el.calls,
    })
}

fn reductions(args: ReductionArgs) -> CliResult {
    let bit = |b: bool| b as u8;
    if let Some(s) = args.bits {
        let row = reduce(parse_bits(&s)?)?;
        println!(
            "{:<14} {:>6} {:>3} {:>3} {:>5} {:>5}  verdict",
            "B", "parity", "dl", "el", "calls", "bound"
        );
        println!(
            "{:<14} {:>6} {:>3} {:>3} {:>5} {:>5}  {}",
            bits_to_string(&row.bits),
            bit(parity(&row.bits)),
            bit(row.dl),
            bit(row.el),
            row.calls,
            el_call_bound(row.bits.len()),
            if row.ok() { "match" } else { "MISMATCH" }
        );
        return if row.ok() {
            Ok(())
        } else {
            Err(Failure::Mismatch("parity mismatch".into()))
        };
    }
    let upto = args.exhaustive_upto.expect("clap requires one of the two");
    if upto == 0 || upto > 20 {
        return Err(Failure::Lib(Error::Parameter(format!(
            "length {upto} not in 1..=20"
        ))));
    }
    let (mut total, mut bad) = (0usize, 0usize);
    println!(
        "{:>4} {:>8} {:>10} {:>9} {:>5}",
        "|B|", "cases", "mismatches", "max_calls", "bound"
    );
    for len in 1..=upto {
        let (mut cases, mut miss, mut max_calls) = (0usize, 0usize, 0usize);
        for mask in 0u32..(1 << len) {
            let bits: Vec<bool> = (0..len).map(|i| mask >> i & 1 == 1).collect();
            let row = reduce(bits)?;
            cases += 1;
            max_calls = max_calls.max(row.calls);
            if !row.ok() {
                miss += 1;
                println!("mismatch on {}", bits_to_string(&row.bits));
            }
        }
        println!(
            "{len:>4} {cases:>8} {miss:>10} {max_calls:>9} {:>5}",
            el_call_bound(len)
        );
        total += cases;
        bad += miss;
    }
    println!("{total} cases, {bad} mismatches");
    if bad > 0 {
        Err(Failure::Mismatch(format!("{bad} parity mismatches")))
    } else {
        Ok(())
    }
}

fn validate_anchors(args: ValidateArgs) -> CliResult {
    let (a, b) = match (&args.a, &args.b) {
        (Some(a), Some(b)) => (read_rle(a, false)?, read_rle(b, false)?),
        _ => {
            let d_tilde = args.block as u64;
            plant_unverified(args.runs, args.block, d_tilde, args.seed)?
        }
    };
    let ledger = QueryLedger::new();
    let text = Text::pair(
        OracleHandle::new(a, ledger.clone()),
        OracleHandle::new(b, ledger),
    )?;
    let s = text.materialize();
    let sep_index = text.sep_index().expect("pair text");
    let x = AnchorSet::build(&s, args.d, args.scheme, args.seed, args.d_min)?;
    let report = validate_anchor_set(&x, &s, sep_index, args.d);
    let used = match x.scheme() {
        AnchorScheme::Exhaustive => "exhaustive",
        AnchorScheme::Minimizer => "minimizer",
    };
    println!("m        {}", x.len());
    println!("d        {}", args.d);
    if x.scheme() != args.scheme {
        println!("scheme   {used} (fallback: d below {})", args.d_min.max(4));
    } else {
        println!("scheme   {used}");
    }
    println!("checked  {}", report.checked);
    println!(
        "verdict  {}",
        if report.valid { "valid" } else { "invalid" }
    );
    if let Some(w) = report.witness {
        println!("witness  A run {} / B run {}", w.i, w.j);
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Encode { input, output } => {
            let line = to_text_line(&encode(&read_bytes(&input)?));
            write_out(output.as_deref(), format!("{line}\n").as_bytes())
        }
        Command::Decode { input, output } => {
            let s = read_rle(&input, false)?;
            write_out(output.as_deref(), &decode(&s))
        }
        Command::Solve(args) => solve(args),
        Command::Bench(args) => bench(args),
        Command::Reductions(args) => reductions(args),
        Command::ValidateAnchors(args) => validate_anchors(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("rlelcs: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
