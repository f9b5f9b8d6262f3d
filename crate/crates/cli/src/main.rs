use std::path::PathBuf;
use std::process::ExitCode;

use ainfty::cohomology::Theory;
use ainfty_cli::{cmd_bar_check, cmd_check, cmd_cohomology, cmd_trivialize, load, Format};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "ainfty",
    about = "Exact bigraded Hochschild/Harrison cohomology and A(∞)-structure trivialization",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoryArg {
    Hochschild,
    Harrison,
}

impl From<TheoryArg> for Theory {
    fn from(value: TheoryArg) -> Theory {
        match value {
            TheoryArg::Hochschild => Theory::Hochschild,
            TheoryArg::Harrison => Theory::Harrison,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Machine,
}

impl From<FormatArg> for Format {
    fn from(value: FormatArg) -> Format {
        match value {
            FormatArg::Text => Format::Text,
            FormatArg::Machine => Format::Machine,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Bigraded cohomology dimensions of the algebra in a document.
    Cohomology {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = TheoryArg::Hochschild)]
        theory: TheoryArg,
        /// Largest arity to report (from 2).
        #[arg(long = "n-max", default_value_t = 6)]
        n_max: usize,
        /// Restrict to the trivialization line k = 2 − n.
        #[arg(long)]
        diagonal: bool,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Stasheff residuals of a structure document, per arity.
    Check {
        file: PathBuf,
        #[arg(long = "n-max")]
        n_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Run the obstruction-killing loop; emit equivalence data or the
    /// obstruction class.
    Trivialize {
        file: PathBuf,
        #[arg(long, value_enum)]
        theory: Option<TheoryArg>,
        #[arg(long = "n-max")]
        n_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        /// Write the equivalence document here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Verify d∘d = 0 and the coderivation law on the bar complex.
    BarCheck {
        file: PathBuf,
        #[arg(long = "n-max")]
        n_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match cli.command {
        Command::Cohomology {
            file,
            theory,
            n_max,
            diagonal,
            format,
        } => match load(&file) {
            Err(r) => r,
            Ok(doc) => cmd_cohomology(&doc, theory.into(), n_max, diagonal, format.into()),
        },
        Command::Check {
            file,
            n_max,
            format,
        } => match load(&file) {
            Err(r) => r,
            Ok(doc) => cmd_check(&doc, n_max, format.into()),
        },
        Command::Trivialize {
            file,
            theory,
            n_max,
            format,
            output,
        } => match load(&file) {
            Err(r) => r,
            Ok(doc) => cmd_trivialize(
                &doc,
                theory.map(Theory::from),
                n_max,
                format.into(),
                output.as_ref(),
            ),
        },
        Command::BarCheck {
            file,
            n_max,
            format,
        } => match load(&file) {
            Err(r) => r,
            Ok(doc) => cmd_bar_check(&doc, n_max, format.into()),
        },
    };
    print!("{}", report.stdout);
    ExitCode::from(report.outcome.code() as u8)
}
