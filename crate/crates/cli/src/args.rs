use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "orderlab", version, about = "Decide order properties of positively ordered semigroups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Sample box: coordinates (or numerators) range over [0, box].
    #[arg(long = "box")]
    pub sample_box: Option<i64>,
    /// Largest multiple n tried by existential searches.
    #[arg(long)]
    pub nmax: Option<u64>,
    /// Bound on generator coefficients in membership searches.
    #[arg(long)]
    pub coeff_bound: Option<u64>,
    /// Chain depth for the tensor-order oracle.
    #[arg(long)]
    pub depth: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide one property of an instance.
    Check {
        /// Instance file, or the name of a catalog entry.
        instance: String,
        /// Property name, e.g. almost-unperforated.
        #[arg(long)]
        prop: String,
        #[command(flatten)]
        common: Common,
    },
    /// Every property plus Grothendieck and tensor summaries.
    Report {
        instance: String,
        #[command(flatten)]
        common: Common,
    },
    /// Grothendieck group and cone membership of group elements.
    Gr {
        instance: String,
        /// Group element as JSON, e.g. '[2,-1]'. Repeatable.
        #[arg(long = "elem")]
        elems: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Order in the tensor product with Z.
    Tensorz {
        instance: String,
        /// Left formal sum, e.g. '[[[0,1],"compact:1"]]'.
        #[arg(long)]
        lhs: Option<String>,
        /// Right formal sum; without it the left sum is tested for compactness.
        #[arg(long)]
        rhs: Option<String>,
        /// Element x for compact interpolation between x⊗s and x⊗t.
        #[arg(long)]
        interpolate: Option<String>,
        /// Lower soft value s, as p/q.
        #[arg(long, requires = "interpolate")]
        s: Option<String>,
        /// Upper soft value t, as p/q.
        #[arg(long, requires = "interpolate")]
        t: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// The algebraic Cu-semigroup completing an instance.
    Cu {
        instance: String,
        /// Axiom: o5, o6, weak-cancellation or almost-divisible.
        #[arg(long)]
        axiom: Option<String>,
        /// Theorem id: T6.3, T6.4 or T6.5.
        #[arg(long)]
        thm: Option<String>,
        /// Left Cu element, e.g. '{"prefix":["1/2"],"tail":"constant"}'.
        #[arg(long)]
        lhs: Option<String>,
        /// Right Cu element.
        #[arg(long)]
        rhs: Option<String>,
        /// Compare lhs⊗1 with rhs⊗1 instead of lhs with rhs.
        #[arg(long)]
        unit: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run theorem checks over catalog instances.
    Verify {
        /// Theorem id, e.g. P4.3. Repeatable.
        #[arg(long = "thm")]
        thms: Vec<String>,
        /// Every theorem.
        #[arg(long)]
        all: bool,
        /// Instance file or catalog name. Repeatable; default is the whole catalog.
        #[arg(long = "instance")]
        instances: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// List, write or check the instance catalog.
    Catalog {
        /// Write instance files and index.json to this directory.
        #[arg(long)]
        write: Option<String>,
        /// Compare a written catalog with fresh runs.
        #[arg(long)]
        check: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Check { common, .. }
            | Command::Report { common, .. }
            | Command::Gr { common, .. }
            | Command::Tensorz { common, .. }
            | Command::Cu { common, .. }
            | Command::Verify { common, .. }
            | Command::Catalog { common, .. } => common,
        }
    }
}
