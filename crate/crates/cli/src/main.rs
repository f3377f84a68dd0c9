use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

/// Designs, placement delivery arrays and multiaccess D2D coded caching schemes.
#[derive(Parser, Debug)]
#[command(name = "madcc", version)]
struct Cli {
    /// Repeat for more log output on stderr.
    #[arg(long = "verbose", short = 'v', action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate, transform and check designs, arrays and OAs.
    #[command(subcommand)]
    Design(DesignCmd),
    /// Build a scheme and optionally write its bundle.
    Scheme(SchemeArgs),
    /// Run placement, delivery and decoding on a bundle.
    Simulate(SimulateArgs),
    /// Parameter tables against other schemes.
    #[command(subcommand)]
    Compare(CompareCmd),
}

#[derive(Subcommand, Debug)]
enum DesignCmd {
    /// All k-subsets of an n-set.
    GenComplete {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The q^(m-1) words of length m whose symbols sum to zero.
    GenProperOa {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Every t-subset of groups with one point from each.
    GenTrivialGdd {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Resolvable design from the columns of a generator matrix over GF(q).
    FromCode {
        #[arg(long)]
        q: u32,
        /// One column, entries separated by commas; repeat per column.
        #[arg(long = "column", required = true)]
        columns: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Swap points and blocks.
    Dual {
        /// Design file or built-in name.
        input: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the profile of a design, OA, GDD or array file.
    Verify {
        /// File or built-in name.
        input: String,
        #[arg(long)]
        t: Option<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SchemeKind {
    Tdesign,
    TdesignWide,
    Tgdd,
    OaUsers,
    Complete,
    TrivialGdd,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum FamilyArg {
    I,
    J,
}

#[derive(Args, Debug)]
struct SchemeArgs {
    kind: SchemeKind,
    /// Design file or built-in name.
    #[arg(long)]
    design: Option<String>,
    /// Strength of the design; its largest strength when omitted.
    #[arg(long)]
    t: Option<usize>,
    /// Subset size for the t-design constructions.
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    /// Block size of the complete design.
    #[arg(long)]
    k: Option<usize>,
    /// OA strength for the t-GDD construction; defaults to m-1.
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    /// GDD file or built-in name, replacing the trivial GDD.
    #[arg(long)]
    gdd: Option<String>,
    /// OA file or built-in name, replacing the generated one.
    #[arg(long)]
    oa: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    idx: Option<usize>,
    /// Use strength k-1 for the j family.
    #[arg(long)]
    as_printed: bool,
    /// Bundle directory to write.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Bundle directory, or `four-user` for the built-in array.
    bundle: String,
    #[arg(long)]
    n_files: Option<usize>,
    /// Bytes per file.
    #[arg(long, default_value_t = 1024)]
    file_len: usize,
    /// `worst`, `random`, or a comma-separated list of 1-based file indices.
    #[arg(long, default_value = "worst")]
    demand: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Append one hex line per transmission.
    #[arg(long)]
    transmissions: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Copy)]
struct Output {
    #[arg(long)]
    csv: bool,
    /// Compare each closed-form row with the constructed scheme.
    #[arg(long)]
    check: bool,
    /// Worker threads for constructing rows.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum CompareCmd {
    /// The t-design scheme (i = 1) against its derived and cyclic counterparts.
    Tdesign {
        #[arg(long)]
        design: String,
        #[arg(long)]
        r: u64,
        #[command(flatten)]
        out: Output,
    },
    /// The t-GDD scheme against its derived and cyclic counterparts.
    Tgdd {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        r: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Every member of both complete-design families.
    Complete {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        as_printed: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Dedicated-cache rows for whichever parameter groups are given.
    Summary {
        #[arg(long)]
        design: Option<String>,
        #[arg(long, default_value_t = 1)]
        i: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        idx: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Lower convex envelope of (M, R) points.
    MemoryShare {
        #[arg(long)]
        n_files: u64,
        #[arg(long)]
        k: u64,
        /// Points `M:R`, comma-separated; ratios may be `p/q`.
        #[arg(long)]
        points: Option<String>,
        /// Add both t-design constructions on this design.
        #[arg(long)]
        design: Option<String>,
        /// Add the dedicated-cache baseline on K users.
        #[arg(long)]
        jcm: bool,
        /// Print the envelope vertices instead of every integer M.
        #[arg(long)]
        vertices: bool,
        /// Print `M,F` for the scheme points instead.
        #[arg(long)]
        subpacketization: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
