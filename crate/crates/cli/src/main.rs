//! `sva`: verify Killing spinors, N=2/N=4 superconformal structures and the
//! identities of the superaffine vertex algebra on quadratic Lie algebras.
//!
//! Exit status: 0 when every check passes, 1 when a verification fails,
//! 2 on input errors. Set `SVA_LOG=info` for progress messages.

mod commands;
mod expr;
mod report;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use sva_core::instances::{g_ell, manin_double, su2_u1};
use sva_core::killing::Variant;
use sva_core::susy::Construction;
use sva_core::sva::Sva;
use sva_core::{Field, LieAlgebra, Vector};

use commands::{HopfParams, InputError, SpinorData};
use report::Report;

#[derive(Parser)]
#[command(name = "sva", version, about = "Exact verification of SUSY vertex algebra structures on quadratic Lie algebras")]
struct Cli {
    /// Print the report as JSON
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Gravitino,
    Dilatino,
    Full,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Gravitino => Variant::Gravitino,
            VariantArg::Dilatino => Variant::Dilatino,
            VariantArg::Full => Variant::Full,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionArg {
    /// J₀ with H′ (no dilaton terms)
    J0hprime,
    /// J with H (dilaton-corrected)
    Jh,
}

impl From<ConstructionArg> for Construction {
    fn from(c: ConstructionArg) -> Construction {
        match c {
            ConstructionArg::J0hprime => Construction::J0HPrime,
            ConstructionArg::Jh => Construction::JH,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HopfCheck {
    Killing,
    N2,
    N4,
    Mirror,
    Forms,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetName {
    /// g_ℓ = su(2) ⊕ u(1) doubled and twisted by ℓv^{123}
    GEll,
    /// g_ℓ with the Hopf metric, hyperholomorphic triple and divergence
    Hopf,
    /// The Manin double of su(2) ⊕ u(1) with l = h, l̄ = h*
    ManinSu2,
    /// The double of an abelian algebra of dimension 2
    AbelianDouble,
}

#[derive(clap::Args, Clone)]
struct HopfArgs {
    /// ℓ, the twist parameter
    #[arg(long = "ell", default_value = "l")]
    ell: String,
    /// x, the size of the u(1) factor
    #[arg(long, default_value = "x")]
    x: String,
    /// a, the scale of V₊ (on shell at a = ℓx)
    #[arg(long, default_value = "l*x")]
    a: String,
    /// The level
    #[arg(long, default_value = "2")]
    k: String,
    /// x̂ of the T-dual member (mirror check)
    #[arg(long, default_value = "1/(l*x)")]
    xhat: String,
}

impl From<&HopfArgs> for HopfParams {
    fn from(a: &HopfArgs) -> HopfParams {
        HopfParams { ell: a.ell.clone(), x: a.x.clone(), a: a.a.clone(), k: a.k.clone(), xhat: a.xhat.clone() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Load a spec file and confirm antisymmetry, Jacobi, invariance and the optional blocks
    Validate { file: PathBuf },
    /// F-term and D-term equations of the isotropic pair (and Clifford residuals on request)
    Killing {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "full")]
        variant: VariantArg,
        /// Also compute the gravitino/dilatino residuals on the spinor module (needs a metric block)
        #[arg(long)]
        clifford: bool,
    },
    /// N=2 relations for the current built from the isotropic pair
    N2 {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "jh")]
        construction: ConstructionArg,
        /// Also check the Neveu–Schwarz relation [H_Λ H]
        #[arg(long)]
        ns: bool,
        /// Override the level of the spec file
        #[arg(long)]
        level: Option<String>,
    },
    /// N=4 relations for three complex structures of the metric block
    N4 {
        file: PathBuf,
        #[arg(long)]
        level: Option<String>,
    },
    /// Mirror involution between the Hopf family and its T-dual
    Mirror {
        #[command(flatten)]
        params: HopfArgs,
    },
    /// Invariant SU(2)-structure system on su(2) ⊕ u(1)
    Forms {
        #[command(flatten)]
        params: HopfArgs,
    },
    /// Evaluate a state or a Λ-bracket, e.g. `[v_1, :v_2 v_3:]`
    Eval {
        file: PathBuf,
        expression: String,
        #[arg(long)]
        level: Option<String>,
    },
    /// Run the normally-ordered-product identity suite on all generator tuples
    Appendix {
        file: PathBuf,
        #[arg(long)]
        level: Option<String>,
        /// Also run skew-symmetry, Jacobi and Wick checks up to this derivative order
        #[arg(long)]
        soundness: Option<u16>,
    },
    /// Run a check on the Hopf family of g_ℓ
    Hopf {
        #[arg(long, value_enum)]
        check: HopfCheck,
        #[command(flatten)]
        params: HopfArgs,
        /// With --check killing: also compute the Clifford residuals
        #[arg(long)]
        clifford: bool,
        /// With --check n2: also check the Neveu–Schwarz relation
        #[arg(long)]
        ns: bool,
    },
    /// Print a built-in example as a spec file
    Preset {
        #[arg(value_enum)]
        name: PresetName,
        #[command(flatten)]
        params: HopfArgs,
    },
}

enum Output {
    Report(Report),
    Spec(String),
}

fn run(command: &Command) -> Result<Output, InputError> {
    let report = match command {
        Command::Validate { file } => {
            let spec = spec::read(file)?;
            match spec::load(&spec) {
                Ok(loaded) => commands::validate(&loaded),
                Err(e) if e.structural => {
                    let mut r = Report::new("validate", spec.name.as_deref().unwrap_or("algebra"));
                    r.check("structure", false, e.to_string());
                    r
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Killing { file, variant, clifford } => {
            let loaded = spec::load_path(file)?;
            let pair = loaded.isotropic_pair()?;
            let zero = Vector::zero(loaded.algebra.dim());
            let spinor = if *clifford {
                let m = loaded.metric.as_ref().ok_or_else(|| InputError::Other("--clifford needs a metric block".into()))?;
                let j = m.complex_structures.first().ok_or_else(|| InputError::Other("--clifford needs a complex structure".into()))?;
                Some(SpinorData { metric: &m.metric, j, divergence: m.divergence.as_ref().unwrap_or(&zero) })
            } else {
                None
            };
            commands::killing(&loaded.name, &pair, (*variant).into(), spinor)?
        }
        Command::N2 { file, construction, ns, level } => {
            let loaded = spec::load_path(file)?;
            let sva = Sva::new(loaded.algebra.clone(), loaded.level(level.as_deref())?);
            commands::n2(&loaded.name, &sva, &loaded.isotropic_pair()?, (*construction).into(), *ns)?
        }
        Command::N4 { file, level } => {
            let loaded = spec::load_path(file)?;
            let sva = Sva::new(loaded.algebra.clone(), loaded.level(level.as_deref())?);
            let m = loaded.metric.as_ref().ok_or_else(|| InputError::Other("n4 needs a metric block".into()))?;
            let eps = m.divergence.clone().unwrap_or_else(|| Vector::zero(loaded.algebra.dim()));
            commands::n4(&loaded.name, &sva, &m.metric, &m.complex_structures, &eps)?
        }
        Command::Mirror { params } => commands::mirror(&params.into())?,
        Command::Forms { params } => commands::forms(&params.into())?,
        Command::Eval { file, expression, level } => {
            let loaded = spec::load_path(file)?;
            let sva = Sva::new(loaded.algebra.clone(), loaded.level(level.as_deref())?);
            commands::eval(&loaded.name, &sva, expression)?
        }
        Command::Appendix { file, level, soundness } => {
            let loaded = spec::load_path(file)?;
            let sva = Sva::new(loaded.algebra.clone(), loaded.level(level.as_deref())?);
            commands::appendix(&loaded.name, &sva, *soundness)
        }
        Command::Hopf { check, params, clifford, ns } => {
            let p: HopfParams = params.into();
            match check {
                HopfCheck::Mirror => commands::mirror(&p)?,
                HopfCheck::Forms => commands::forms(&p)?,
                HopfCheck::Killing => {
                    let h = commands::hopf_setup(&p)?;
                    let spinor = clifford.then(|| SpinorData { metric: &h.metric, j: &h.structures[0], divergence: &h.divergence });
                    commands::killing("Hopf family on g_ℓ", &h.pair, Variant::Full, spinor)?
                }
                HopfCheck::N2 => {
                    let h = commands::hopf_setup(&p)?;
                    let sva = Sva::new(h.algebra.clone(), h.level.clone());
                    commands::n2("Hopf family on g_ℓ", &sva, &h.pair, Construction::JH, *ns)?
                }
                HopfCheck::N4 => {
                    let h = commands::hopf_setup(&p)?;
                    let sva = Sva::new(h.algebra.clone(), h.level.clone());
                    commands::n4("Hopf family on g_ℓ", &sva, &h.metric, &h.structures, &h.divergence)?
                }
            }
        }
        Command::Preset { name, params } => return Ok(Output::Spec(preset(*name, &params.into())?)),
    };
    Ok(Output::Report(report))
}

fn preset(name: PresetName, p: &HopfParams) -> Result<String, InputError> {
    let spec = match name {
        PresetName::GEll => {
            let f = Field::with_params(&["l", "k"]);
            spec::export("g_ell", &g_ell(&f, &f.sym("l"), "v"), Some(&f.sym("k")), None)
        }
        PresetName::Hopf => {
            let h = commands::hopf_setup(p)?;
            let plus: Vec<Vector> = h.metric.plus().basis().to_vec();
            let images: Vec<Vec<Vector>> = h.structures.iter().map(|j| plus.iter().map(|v| j.apply(v)).collect()).collect();
            spec::export("hopf", &h.algebra, Some(&h.level), Some((&plus, &images, Some(&h.divergence))))
        }
        PresetName::ManinSu2 => {
            let pair = manin_double(&su2_u1(&Field::with_params(&["k"]), "v"));
            let mut s = spec::export("manin_su2", pair.algebra(), Some(&pair.algebra().field().sym("k")), None);
            s.isotropic_pair = Some(pair_spec(&pair));
            s
        }
        PresetName::AbelianDouble => {
            let f = Field::with_params(&["k"]);
            let pair = manin_double(&LieAlgebra::abelian(vec!["e_1".into(), "e_2".into()], f.clone()));
            let mut s = spec::export("abelian_double", pair.algebra(), Some(&f.sym("k")), None);
            s.isotropic_pair = Some(pair_spec(&pair));
            s
        }
    };
    Ok(serde_json::to_string_pretty(&spec).expect("specs serialize"))
}

fn pair_spec(pair: &sva_core::killing::IsotropicPair) -> spec::PairSpec {
    let names = pair.algebra().names();
    let vs = |s: &sva_core::Subspace| s.basis().iter().map(|v| spec::vector_spec(names, v)).collect();
    spec::PairSpec { l: vs(pair.l()), lbar: vs(pair.lbar()), divergence: pair.divergence().map(|v| spec::vector_spec(names, v)) }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SVA_LOG", "warn")).init();
    let cli = Cli::parse();
    let start = Instant::now();
    let out = run(&cli.command);
    log::info!("finished in {:.2}s", start.elapsed().as_secs_f64());
    match out {
        Ok(Output::Spec(s)) => {
            println!("{s}");
            ExitCode::SUCCESS
        }
        Ok(Output::Report(r)) => {
            if cli.json {
                println!("{}", r.json());
            } else {
                print!("{}", r.text());
            }
            if r.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
