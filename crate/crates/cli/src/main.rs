use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crystal_core::binf::{self, InfParams, XFormInf};
use crystal_core::bla::{self, XFormLa};
use crystal_core::cartan::{Rank, Weight};
use crystal_core::checks::{self, Report};
use crystal_core::graph::{bfs_generate_with, Crystal, CrystalGraph};
use crystal_core::monomial::{CMatrix, ExtMonomial, ExtMonomials, PlainMonomial, PlainMonomials};
use crystal_core::tableau::{validate, Tableau, TableauxBInfinity, TableauxBLambda};
use crystal_core::Error;

#[derive(Parser)]
#[command(
    name = "crystal",
    version,
    about = "Crystal graphs of type A from monomials and tableaux"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the crystal graph generated from a model's canonical seed
    Generate {
        #[arg(long, value_enum)]
        model: Model,
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check one of the realization theorems on a finite or truncated crystal
    Verify {
        #[arg(value_enum)]
        kind: Check,
        #[command(flatten)]
        params: Params,
        /// First weight of a product check
        #[arg(long, value_parser = parse_list)]
        mu: Option<List>,
        /// Second weight of a product check
        #[arg(long, value_parser = parse_list)]
        tau: Option<List>,
    },
    /// Convert an element read from stdin between realizations
    Convert {
        #[arg(long, value_enum)]
        from: Realization,
        #[arg(long, value_enum)]
        to: Realization,
        #[command(flatten)]
        params: Params,
    },
    /// Test whether an element read from stdin lies in a model
    Member {
        #[arg(long, value_enum)]
        model: Model,
        #[command(flatten)]
        params: Params,
    },
}

#[derive(clap::Args)]
struct Params {
    /// Rank
    #[arg(short = 'n', long = "rank")]
    n: Option<usize>,
    /// Dominant weight as comma-separated coefficients of the fundamental weights
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    lambda: Option<List>,
    /// Positive integers p_1,..,p_n of the shifted family
    #[arg(long, value_parser = parse_list)]
    p: Option<List>,
    /// Shift r
    #[arg(long, allow_hyphen_values = true)]
    r: Option<i64>,
    /// `default` or the bits c_12 c_13 .. c_1n c_23 .. of the c-matrix
    #[arg(long)]
    c: Option<String>,
    /// Number of lowering steps from the seed
    #[arg(long)]
    depth: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    MonomialBinf,
    MonomialBla,
    TableauBinf,
    TableauBla,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    IsoBla,
    IsoBinf,
    OpEquiv,
    Closure,
    CIndep,
    Product,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Realization {
    Monomial,
    Xform,
    Tableau,
}

/// Exit 1 carries a negative answer, exit 2 a bad invocation or input.
enum Failure {
    No(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotMember(_) | Error::NotMarginallyLarge => Failure::No(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome<T = ()> = Result<T, Failure>;

/// Comma-separated integers such as `1,0,2`.
#[derive(Clone, Debug)]
struct List(Vec<i64>);

fn parse_list(s: &str) -> Result<List, String> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(List)
}

fn threads() -> usize {
    match std::env::var("CRYSTAL_THREADS") {
        Ok(v) => v.trim().parse().unwrap_or(0),
        Err(_) => std::thread::available_parallelism().map_or(0, |n| n.get()),
    }
}

impl Params {
    fn rank(&self) -> Outcome<Rank> {
        let from_lambda = self.lambda.as_ref().map(|l| l.0.len());
        let n = match (self.n, from_lambda) {
            (Some(n), Some(l)) if n != l => {
                return Err(Failure::Usage(format!(
                    "--lambda has {l} entries but -n is {n}"
                )))
            }
            (Some(n), _) | (None, Some(n)) => n,
            (None, None) => return Err(Failure::Usage("-n is required".into())),
        };
        Ok(Rank::new(n)?)
    }

    fn lambda(&self) -> Outcome<Weight> {
        let n = self.rank()?;
        let l = self
            .lambda
            .clone()
            .map(|l| l.0)
            .ok_or_else(|| Failure::Usage("--lambda is required for this model".into()))?;
        let w = Weight::new(l);
        if w.rank() != n.get() {
            return Err(Failure::Usage("--lambda length does not match -n".into()));
        }
        w.ensure_dominant()?;
        Ok(w)
    }

    fn depth(&self) -> Outcome<u64> {
        self.depth
            .ok_or_else(|| Failure::Usage("--depth is required for an infinite crystal".into()))
    }

    fn inf_params(&self) -> Outcome<InfParams> {
        let n = self.rank()?;
        let p = self
            .p
            .clone()
            .map(|l| l.0)
            .unwrap_or_else(|| vec![1; n.get()]);
        Ok(InfParams::new(n, p, self.r.unwrap_or(0))?)
    }

    fn c_matrix(&self) -> Outcome<CMatrix> {
        let n = self.rank()?;
        match self.c.as_deref() {
            None | Some("default") => Ok(CMatrix::standard(n)),
            Some(bits) => Ok(CMatrix::from_upper_bits(n, bits)?),
        }
    }
}

fn render(g: &CrystalGraph, format: Format) -> String {
    match format {
        Format::Text => g.to_text(),
        Format::Json => g.to_json() + "\n",
        Format::Dot => g.to_dot(),
    }
}

fn graph_of<C: Crystal>(model: &C, seed: C::Element, depth: Option<u64>) -> Outcome<CrystalGraph> {
    Ok(bfs_generate_with(model, seed, depth, threads())?.graph)
}

fn generate(model: Model, p: &Params, format: Format) -> Outcome<String> {
    let n = p.rank()?;
    let g = match model {
        Model::MonomialBinf => {
            let depth = p.depth()?;
            let seed = binf::m_infinity(n, &p.inf_params()?)?;
            graph_of(&ExtMonomials::new(p.c_matrix()?), seed, Some(depth))?
        }
        Model::MonomialBla => {
            let seed = bla::m_lambda(&p.lambda()?, p.r.unwrap_or(0))?;
            graph_of(&PlainMonomials::new(p.c_matrix()?), seed, p.depth)?
        }
        Model::TableauBinf => {
            let depth = p.depth()?;
            graph_of(
                &TableauxBInfinity { n },
                Tableau::t_infinity(n),
                Some(depth),
            )?
        }
        Model::TableauBla => {
            let seed = Tableau::highest_weight(&p.lambda()?)?;
            graph_of(&TableauxBLambda { n }, seed, p.depth)?
        }
    };
    Ok(render(&g, format))
}

/// Two alternative c-matrices: all upper bits cleared, and alternating bits.
fn alternative_c(n: Rank) -> Outcome<Vec<CMatrix>> {
    let len = n.get() * (n.get() - 1) / 2;
    if len == 0 {
        return Ok(Vec::new());
    }
    let zeros = "0".repeat(len);
    let alternating: String = (0..len)
        .map(|k| if k % 2 == 0 { '0' } else { '1' })
        .collect();
    let mut out = vec![CMatrix::from_upper_bits(n, &zeros)?];
    if alternating != zeros {
        out.push(CMatrix::from_upper_bits(n, &alternating)?);
    } else {
        out.push(CMatrix::new(n, |i, j| if i < j { 2 } else { -1 })?);
    }
    Ok(out)
}

fn verify(kind: Check, p: &Params, mu: Option<List>, tau: Option<List>) -> Outcome<Report> {
    let t = threads();
    let r = p.r.unwrap_or(0);
    let rep = match kind {
        Check::IsoBla => checks::iso_bla(&p.lambda()?, r, t)?,
        Check::IsoBinf => checks::iso_binf(p.rank()?, p.depth()?, &p.inf_params()?, t)?,
        Check::OpEquiv if p.lambda.is_some() => checks::op_equiv_bla(&p.lambda()?, r, t)?,
        Check::OpEquiv => checks::op_equiv_binf(p.rank()?, p.depth()?, &p.inf_params()?, t)?,
        Check::Closure if p.lambda.is_some() => checks::closure_bla(&p.lambda()?, r, t)?,
        Check::Closure => checks::closure_binf(p.rank()?, p.depth()?, &p.inf_params()?, t)?,
        Check::CIndep => {
            let n = p.rank()?;
            let cs = match &p.c {
                Some(_) => vec![p.c_matrix()?],
                None => alternative_c(n)?,
            };
            if p.lambda.is_some() {
                checks::c_independence(&p.lambda()?, &cs, t)?
            } else {
                checks::c_independence_binf(n, p.depth()?, &cs, t)?
            }
        }
        Check::Product => {
            let need = |w: Option<List>, flag: &str| {
                w.map(|l| Weight::new(l.0))
                    .ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
            };
            let (mu, tau) = (need(mu, "mu")?, need(tau, "tau")?);
            if mu.rank() != tau.rank() || p.n.is_some_and(|n| n != mu.rank()) {
                return Err(Failure::Usage(
                    "--mu, --tau and -n disagree on the rank".into(),
                ));
            }
            mu.ensure_dominant()?;
            tau.ensure_dominant()?;
            checks::product(&mu, &tau, r)?
        }
    };
    Ok(rep)
}

fn read_stdin() -> Outcome<String> {
    let mut s = String::new();
    io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
    Ok(s)
}

fn parse<T: serde::de::DeserializeOwned>(s: &str) -> Outcome<T> {
    serde_json::from_str(s).map_err(|e| Failure::Usage(format!("malformed input: {e}")))
}

/// An element of `B(∞)` or `B(λ)` in one of the three realizations.
enum Element {
    InfMonomial(ExtMonomial),
    InfXForm(XFormInf),
    InfTableau(Tableau),
    LaMonomial(PlainMonomial),
    LaXForm(XFormLa),
    LaTableau(Tableau),
}

fn to_json<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("element serializes")
}

fn convert(from: Realization, to: Realization, p: &Params, input: &str) -> Outcome<String> {
    let finite = p.lambda.is_some();
    let el = match (finite, from) {
        (false, Realization::Monomial) => Element::InfMonomial(parse(input)?),
        (false, Realization::Xform) => Element::InfXForm(parse(input)?),
        (false, Realization::Tableau) => Element::InfTableau(parse(input)?),
        (true, Realization::Monomial) => Element::LaMonomial(parse(input)?),
        (true, Realization::Xform) => Element::LaXForm(parse(input)?),
        (true, Realization::Tableau) => Element::LaTableau(parse(input)?),
    };
    let out = if finite {
        let lambda = p.lambda()?;
        let r = p.r.unwrap_or(0);
        let x = match el {
            Element::LaMonomial(m) => {
                check_rank(m.rank(), &lambda)?;
                bla::to_xform(&m, &lambda, r)?
            }
            Element::LaXForm(x) => {
                if x.lambda() != &lambda {
                    return Err(Failure::No(format!(
                        "X-form has weight {}, not {lambda}",
                        x.lambda()
                    )));
                }
                x
            }
            Element::LaTableau(t) => {
                check_rank(t.rank(), &lambda)?;
                if !validate(t.rank(), t.rows(), Some(&lambda)) {
                    return Err(Failure::No(format!(
                        "{t} does not have the shape of {lambda}"
                    )));
                }
                bla::psi(&t, &lambda, r)?
            }
            _ => unreachable!(),
        };
        match to {
            Realization::Monomial => to_json(&bla::from_xform(&x)),
            Realization::Xform => to_json(&x),
            Realization::Tableau => to_json(&bla::psi_inverse(&x)),
        }
    } else {
        let params = p.inf_params_for_input(&el)?;
        let x = match el {
            Element::InfMonomial(m) => binf::to_xform(&m, &params)?,
            Element::InfXForm(x) => x,
            Element::InfTableau(t) => binf::phi_shift(&binf::tableau_to_xform(&t)?, &params)?,
            _ => unreachable!(),
        };
        match to {
            Realization::Monomial => to_json(&binf::from_xform(&x)),
            Realization::Xform => to_json(&x),
            Realization::Tableau => to_json(&binf::xform_to_tableau(&x)),
        }
    };
    Ok(out + "\n")
}

fn check_rank(n: Rank, lambda: &Weight) -> Outcome {
    if n.get() != lambda.rank() {
        return Err(Failure::Usage(format!(
            "element has rank {n}, weight has rank {}",
            lambda.rank()
        )));
    }
    Ok(())
}

impl Params {
    /// The family parameters for an input whose rank is known from the input.
    fn inf_params_for_input(&self, el: &Element) -> Outcome<InfParams> {
        let n = match el {
            Element::InfMonomial(m) => m.rank(),
            Element::InfXForm(x) => return Ok(x.params().clone()),
            Element::InfTableau(t) => t.rank(),
            _ => unreachable!(),
        };
        if self.n.is_some_and(|k| k != n.get()) {
            return Err(Failure::Usage(format!("input has rank {n}")));
        }
        let p = self
            .p
            .clone()
            .map(|l| l.0)
            .unwrap_or_else(|| vec![1; n.get()]);
        Ok(InfParams::new(n, p, self.r.unwrap_or(0))?)
    }
}

fn member(model: Model, p: &Params, input: &str) -> Outcome<String> {
    let r = p.r.unwrap_or(0);
    match model {
        Model::MonomialBinf => {
            let m: ExtMonomial = parse(input)?;
            let q = Params {
                n: Some(m.rank().get()),
                lambda: None,
                p: p.p.clone(),
                r: p.r,
                c: None,
                depth: None,
            };
            if p.n.is_some_and(|k| k != m.rank().get()) {
                return Err(Failure::Usage(format!("input has rank {}", m.rank())));
            }
            binf::check_membership(&m, &q.inf_params()?).map_err(|v| Failure::No(v.to_string()))?;
        }
        Model::MonomialBla => {
            let m: PlainMonomial = parse(input)?;
            let lambda = p.lambda()?;
            check_rank(m.rank(), &lambda)?;
            bla::check_membership(&m, &lambda, r).map_err(|v| Failure::No(v.to_string()))?;
        }
        Model::TableauBinf => {
            let t: Tableau = parse(input)?;
            if !t.is_marginally_large() {
                return Err(Failure::No(format!("{t} is not marginally large")));
            }
        }
        Model::TableauBla => {
            let t: Tableau = parse(input)?;
            let lambda = p.lambda()?;
            check_rank(t.rank(), &lambda)?;
            if !validate(t.rank(), t.rows(), Some(&lambda)) {
                return Err(Failure::No(format!(
                    "{t} does not have the shape of {lambda}"
                )));
            }
        }
    }
    Ok("member\n".into())
}

fn run(cli: Cli) -> Outcome<String> {
    match cli.command {
        Command::Generate {
            model,
            params,
            format,
        } => generate(model, &params, format),
        Command::Verify {
            kind,
            params,
            mu,
            tau,
        } => {
            let rep = verify(kind, &params, mu, tau)?;
            let mut out = String::new();
            for note in &rep.notes {
                out += &format!("{note}\n");
            }
            out += &format!(
                "{} checks, {} failures\n",
                rep.checked,
                rep.failures.len()
            );
            for f in &rep.failures {
                out += &format!("counterexample: {f}\n");
            }
            let report = if rep.ok() {
                json!({"ok": true, "checked": rep.checked})
            } else {
                json!({"ok": false, "checked": rep.checked, "counterexample": rep.failures[0]})
            };
            out += &format!("{report}\n");
            if rep.ok() {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::No("verification failed".into()))
            }
        }
        Command::Convert { from, to, params } => convert(from, to, &params, &read_stdin()?),
        Command::Member { model, params } => member(model, &params, &read_stdin()?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            let _ = stdout.flush();
            ExitCode::SUCCESS
        }
        Err(Failure::No(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
