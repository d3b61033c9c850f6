use crate::cache::Cache;
use crate::config::Defaults;
use crate::input;
use crate::sweep::{self, SweepJob, Table};
use crate::CliError;
use clap::{Args, Parser, Subcommand, ValueEnum};
use pgk_core::filtered::{build_dkap, build_dkl, Admissibility, FilteredPhiNModule};
use pgk_core::modp::{buzzard_monitor, correspond, ind_decompose, reduce_crystalline, BuzzardReport, GaloisSS, Reduction};
use pgk_core::phigamma::{
    frobenius, gamma_act, psi, B2Elem, BoxSeq, GammaUnit, PhiGammaModule,
};
use pgk_core::slopes::TriangularPhiModule;
use pgk_core::smooth::{hecke_matrix, kernel_cokernel_from, tree_dim, TreeFunction, Vertex};
use pgk_core::trianguline::{ext_dim, is_special_pair, CharacterP, ParamClass, TriParam};
use pgk_core::{LaurentSeries, PadicScalar};
use serde_json::{json, Value};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "pgk", version, about = "p-adic and mod-p tools for two-dimensional local Galois and GL2(Q_p) representations")]
pub struct Cli {
    /// TOML file with default p, a, n, l.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Coefficient precision p^a.
    #[arg(long = "prec-a", global = true)]
    pub prec_a: Option<u32>,
    /// Series precision X^N.
    #[arg(long = "prec-n", global = true)]
    pub prec_n: Option<i64>,
    /// Unit precision p^L for the Γ-action.
    #[arg(long = "prec-l", global = true)]
    pub prec_l: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Operators on truncated Laurent series.
    Series(SeriesArgs),
    /// Weak admissibility of a filtered (φ,N)-module.
    Admissible(AdmissibleArgs),
    /// Reduction mod p of a crystalline representation.
    Reduce(ReduceArgs),
    /// Semisimple mod-p correspondence of a Galois representation.
    Correspond(CorrespondArgs),
    /// Classify a trianguline parameter.
    ClassifyTrianguline(TriArgs),
    /// Dimension of the extension space of two characters.
    ExtDim(ExtArgs),
    /// Hecke operator and group action on the tree.
    Tree(TreeArgs),
    /// Sequences with the Borel action.
    Box(BoxArgs),
    /// Parameter sweep producing a table.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SeriesOp {
    Show,
    Phi,
    Psi,
    Gamma,
    Mul,
    Inverse,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    pub op: SeriesOp,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub g: Option<String>,
    /// Unit acting through Γ (default: the tame generator).
    #[arg(long)]
    pub unit: Option<i64>,
}

#[derive(Args, Debug)]
pub struct AdmissibleArgs {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub k: Option<i64>,
    /// Trace of Frobenius for the crystalline module.
    #[arg(long, allow_hyphen_values = true)]
    pub ap: Option<String>,
    /// L-invariant for the semi-stable module.
    #[arg(long, allow_hyphen_values = true)]
    pub linv: Option<String>,
    /// A filtered module document (inline JSON or @file).
    #[arg(long)]
    pub input: Option<String>,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub k: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub ap: String,
    /// Optional twist `{"t": .., "lambda": ..}`.
    #[arg(long)]
    pub chi: Option<String>,
}

#[derive(Args, Debug)]
pub struct CorrespondArgs {
    /// Galois representation document (inline JSON or @file).
    #[arg(long)]
    pub input: String,
}

#[derive(Args, Debug)]
pub struct TriArgs {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub d1: String,
    #[arg(long)]
    pub d2: String,
    /// L-invariant, `inf` by default.
    #[arg(long, allow_hyphen_values = true)]
    pub linv: Option<String>,
}

#[derive(Args, Debug)]
pub struct ExtArgs {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub d1: String,
    #[arg(long)]
    pub d2: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TreeOp {
    #[value(name = "T", alias = "t")]
    T,
    Act,
    Kernel,
    Dim,
}

#[derive(Args, Debug)]
pub struct TreeArgs {
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub r: u32,
    #[arg(long, default_value_t = 1)]
    pub radius: u32,
    #[arg(long, value_enum, default_value = "T")]
    pub op: TreeOp,
    /// Tree function document (inline JSON or @file); default e_0 at the root.
    #[arg(long)]
    pub input: Option<String>,
    /// Matrix `a,b,c,d` for `act`.
    #[arg(long)]
    pub g: Option<String>,
    /// Eigenvalue for `kernel`: `x` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BoxOp {
    Demo,
    Act,
    ResZp,
    Bounded,
}

#[derive(Args, Debug)]
pub struct BoxArgs {
    #[arg(long, value_enum)]
    pub op: BoxOp,
    #[arg(long)]
    pub p: Option<u64>,
    /// Sequence document (inline JSON or @file).
    #[arg(long)]
    pub input: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub n0: i64,
    #[arg(long, default_value_t = 3)]
    pub n1: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value = "reduction")]
    pub table: Table,
    #[arg(long)]
    pub p: Option<u64>,
    /// Weights, e.g. `2..12`.
    #[arg(long)]
    pub k: String,
    /// Valuations of a_p, e.g. `1/2,1,2`.
    #[arg(long)]
    pub vals: String,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Decided,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub body: String,
    pub status: Status,
}

fn doc(v: Value, status: Status) -> Result<Outcome, CliError> {
    Ok(Outcome { body: serde_json::to_string_pretty(&v)? + "\n", status })
}

struct Ctx {
    defaults: Defaults,
    cache: Cache,
}

impl Ctx {
    fn p(&self, p: Option<u64>) -> Result<u64, CliError> {
        let p = p.unwrap_or(self.defaults.p);
        if !pgk_core::arith::is_prime(p) {
            return Err(CliError::Usage(format!("{p} is not prime")));
        }
        Ok(p)
    }

    fn scalar_prec(&self) -> u32 {
        self.defaults.a.max(1)
    }

    fn series(&self, text: &str, p: u64) -> Result<LaurentSeries, CliError> {
        Ok(LaurentSeries::parse(text, p, self.defaults.a, self.defaults.n)?)
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let mut defaults = Defaults::load(cli.config.as_deref())?;
    if let Some(a) = cli.prec_a {
        defaults.a = a;
    }
    if let Some(n) = cli.prec_n {
        defaults.n = n;
    }
    if let Some(l) = cli.prec_l {
        defaults.l = Some(l);
    }
    run_with(cli, Ctx { defaults, cache: Cache::from_env() })
}

fn run_with(cli: &Cli, ctx: Ctx) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Series(a) => series_cmd(&ctx, a),
        Command::Admissible(a) => admissible_cmd(&ctx, a),
        Command::Reduce(a) => reduce_cmd(&ctx, a),
        Command::Correspond(a) => correspond_cmd(a),
        Command::ClassifyTrianguline(a) => classify_cmd(&ctx, a),
        Command::ExtDim(a) => ext_cmd(&ctx, a),
        Command::Tree(a) => tree_cmd(&ctx, a),
        Command::Box(a) => box_cmd(&ctx, a),
        Command::Sweep(a) => sweep_cmd(&ctx, a),
    }
}

fn series_cmd(ctx: &Ctx, a: &SeriesArgs) -> Result<Outcome, CliError> {
    let p = ctx.p(a.p)?;
    let f = ctx.series(&a.f, p)?;
    let g = a.g.as_deref().map(|g| ctx.series(g, p)).transpose()?;
    let need_g = || g.clone().ok_or_else(|| CliError::Usage("this operation needs --g".into()));
    let result = match a.op {
        SeriesOp::Show => f.clone(),
        SeriesOp::Phi => frobenius(&f),
        SeriesOp::Psi => psi(&f),
        SeriesOp::Gamma => {
            let l = ctx.defaults.unit_precision(p);
            let u = match a.unit {
                Some(u) => GammaUnit::new(p, u as i128, l)?,
                None => GammaUnit::tame_generator(p, l),
            };
            gamma_act(u, &f)?
        }
        SeriesOp::Mul => f.mul(&need_g()?)?,
        SeriesOp::Inverse => f.inverse()?,
    };
    doc(
        json!({
            "schema": "pgk.series_result/1",
            "op": format!("{:?}", a.op).to_lowercase(),
            "p": p,
            "a": f.a(),
            "input": f,
            "result": result,
            "text": result.to_string(),
        }),
        Status::Decided,
    )
}

fn admissible_cmd(ctx: &Ctx, a: &AdmissibleArgs) -> Result<Outcome, CliError> {
    let p = ctx.p(a.p)?;
    let prec = ctx.scalar_prec();
    let module: FilteredPhiNModule = match (&a.input, &a.ap, &a.linv) {
        (Some(doc), None, None) => serde_json::from_value(input::read_json(doc)?)?,
        (None, Some(ap), None) => {
            let k = a.k.ok_or_else(|| CliError::Usage("--ap needs --k".into()))?;
            build_dkap(p, k, input::scalar(ap, p, prec)?)?
        }
        (None, None, Some(l)) => {
            let k = a.k.ok_or_else(|| CliError::Usage("--linv needs --k".into()))?;
            build_dkl(p, k, input::scalar(l, p, prec)?)?
        }
        _ => return Err(CliError::Usage("give exactly one of --input, --ap, --linv".into())),
    };
    let report = module.is_admissible()?;
    let status = if report.verdict == Admissibility::Undecided { Status::Undecided } else { Status::Decided };
    doc(
        json!({
            "schema": "pgk.admissibility/1",
            "verdict": report.verdict.to_string(),
            "t_h": report.t_h,
            "t_n": report.t_n.to_string(),
            "certificate": report.certificate,
            "subobjects": report.subobjects,
            "module": module,
        }),
        status,
    )
}

/// `(kind, case)` labels of a reduction result.
pub fn reduction_kind(r: &Reduction) -> (&'static str, String) {
    match r {
        Reduction::Decided { rep: GaloisSS::Irred { .. }, case } => ("irred_ind", case.clone()),
        Reduction::Decided { rep: GaloisSS::Split { .. }, case } => ("split", case.clone()),
        Reduction::Ambiguous { case, .. } => ("ambiguous", case.clone()),
        Reduction::Unknown { .. } => ("unknown", String::new()),
    }
}

pub fn buzzard_text(b: BuzzardReport) -> String {
    serde_json::to_value(b).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn ind_exponent(w: &GaloisSS) -> Option<i64> {
    let p = w.p() as i64;
    (1..p * p).find(|&h| ind_decompose(w.p(), h) == *w)
}

fn reduce_cmd(ctx: &Ctx, a: &ReduceArgs) -> Result<Outcome, CliError> {
    let p = ctx.p(Some(a.p))?;
    let ap = input::scalar(&a.ap, p, ctx.scalar_prec().max(12))?;
    let chi = a.chi.as_deref().map(|c| input::read_json(c).and_then(|v| input::char_modp_value(&v, p))).transpose()?;
    let red = reduce_crystalline(p, a.k, &ap, chi.as_ref())?;
    let (kind, case) = reduction_kind(&red);
    let buzz = buzzard_monitor(a.k, &ap, &red);
    let mut out = json!({
        "schema": "pgk.reduction/1",
        "p": p,
        "k": a.k,
        "val_ap": ap.valuation().to_string(),
        "kind": kind,
        "case": case,
        "text": red.to_string(),
        "buzzard": buzzard_text(buzz),
    });
    let mut certificate = vec![format!("val(a_p) = {}", ap.valuation())];
    let status = match &red {
        Reduction::Decided { rep, .. } => {
            out["rep"] = input::galois_json(rep);
            if let Some(h) = ind_exponent(rep) {
                out["h"] = json!(h);
                certificate.push(format!("ind(ω₂^{h})"));
            }
            Status::Decided
        }
        Reduction::Ambiguous { ind, split_twist, .. } => {
            out["candidates"] = json!([
                input::galois_json(ind),
                { "kind": "split_family", "twist": input::char_modp_json(split_twist), "lambda": "UNKNOWN" },
            ]);
            if let Some(h) = ind_exponent(ind) {
                out["h"] = json!(h);
            }
            Status::Undecided
        }
        Reduction::Unknown { reason } => {
            certificate.push(reason.clone());
            Status::Undecided
        }
    };
    out["certificate"] = json!(certificate);
    doc(out, status)
}

fn correspond_cmd(a: &CorrespondArgs) -> Result<Outcome, CliError> {
    let w = input::galois(&input::read_json(&a.input)?)?;
    let pi = correspond(&w)?;
    let mut out = input::gl2_json(w.p(), &pi);
    out["input"] = input::galois_json(&w);
    out["kind"] = json!(if pi.atoms.len() == 1 { "irreducible" } else { "reducible" });
    out["certificate"] = json!([format!("{w} ↦ {pi}")]);
    doc(out, Status::Decided)
}

fn linv(text: Option<&str>, p: u64, prec: u32) -> Result<Option<PadicScalar>, CliError> {
    match text.map(str::trim) {
        None | Some("inf") | Some("∞") => Ok(None),
        Some(t) => Ok(Some(input::scalar(t, p, prec)?)),
    }
}

fn class_name(c: ParamClass) -> Value {
    serde_json::to_value(c).unwrap_or(Value::Null)
}

fn classify_cmd(ctx: &Ctx, a: &TriArgs) -> Result<Outcome, CliError> {
    let p = ctx.p(a.p)?;
    let prec = ctx.scalar_prec().max(12);
    let d1 = input::character(&a.d1, p, prec)?;
    let d2 = input::character(&a.d2, p, prec)?;
    let s = TriParam::new(d1, d2, linv(a.linv.as_deref(), p, prec)?)?;
    let class = s.classify()?;
    let off = LaurentSeries::zero(p, ctx.defaults.a, ctx.defaults.n)?;
    let hn = TriangularPhiModule::from_param(s, off)?.hn_verdict()?;
    let mut out = json!({
        "schema": "pgk.trianguline_class/1",
        "p": p,
        "class": class_name(class),
        "irreducible": class.is_irreducible(),
        "weight": s.weight()?.to_string(),
        "ext_dim": ext_dim(&d1, &d2)?,
        "hn": hn,
    });
    if class == ParamClass::Cris {
        let t = s.involution()?;
        out["involution"] = json!({ "d1": t.d1.to_string(), "d2": t.d2.to_string(), "class": class_name(t.classify()?) });
    }
    doc(out, Status::Decided)
}

fn ext_cmd(ctx: &Ctx, a: &ExtArgs) -> Result<Outcome, CliError> {
    let p = ctx.p(a.p)?;
    let prec = ctx.scalar_prec().max(12);
    let d1: CharacterP = input::character(&a.d1, p, prec)?;
    let d2: CharacterP = input::character(&a.d2, p, prec)?;
    let special = is_special_pair(&d1.div(&d2)?)?;
    doc(
        json!({ "schema": "pgk.ext_dim/1", "p": p, "dim": ext_dim(&d1, &d2)?, "special_pair": special }),
        Status::Decided,
    )
}

fn cached_hecke(ctx: &Ctx, p: u64, r: u32, radius: u32) -> Result<Vec<TreeFunction>, CliError> {
    let key = format!("hecke-matrix|{p}|{r}|{radius}");
    let v = ctx.cache.get_or_compute(&key, || Ok(serde_json::to_value(hecke_matrix(p, r, radius))?))?;
    Ok(serde_json::from_value(v)?)
}

fn tree_cmd(ctx: &Ctx, a: &TreeArgs) -> Result<Outcome, CliError> {
    let p = ctx.p(a.p)?;
    let f = match &a.input {
        Some(doc) => serde_json::from_value::<TreeFunction>(input::read_json(doc)?)?,
        None => TreeFunction::delta(p, a.r, a.radius, Vertex::ROOT, 0)?,
    };
    if f.p != p {
        return Err(CliError::Usage("input function has a different prime".into()));
    }
    match a.op {
        TreeOp::Dim => doc(
            json!({ "schema": "pgk.tree_dim/1", "p": p, "r": a.r, "radius": a.radius, "dim": tree_dim(p, a.r, a.radius) }),
            Status::Decided,
        ),
        TreeOp::T => {
            let f = f.with_radius(a.radius.max(f.radius))?;
            let cols = cached_hecke(ctx, p, f.r, f.radius)?;
            let mut out = TreeFunction::zero(p, f.r, f.radius + 1);
            let mut k = 0;
            for v in Vertex::ball(p, f.radius) {
                let x = f.get(&v);
                for c in x.iter() {
                    if !c.is_zero() {
                        out = out.add(&cols[k].scale(c))?;
                    }
                    k += 1;
                }
            }
            doc(serde_json::to_value(out)?, Status::Decided)
        }
        TreeOp::Act => {
            let g = input::matrix(a.g.as_deref().ok_or_else(|| CliError::Usage("act needs --g".into()))?)?;
            doc(serde_json::to_value(f.with_radius(a.radius.max(f.radius))?.act(&g)?)?, Status::Decided)
        }
        TreeOp::Kernel => {
            let lambda = input::fp2_text(a.lambda.as_deref().unwrap_or("0"), p)?;
            let cols = cached_hecke(ctx, p, a.r, a.radius)?;
            let (ker, coker) = kernel_cokernel_from(p, a.r, a.radius, &cols, &lambda);
            doc(
                json!({
                    "schema": "pgk.tree_kernel/1",
                    "p": p, "r": a.r, "radius": a.radius,
                    "lambda": [lambda.re, lambda.im],
                    "kernel": ker, "cokernel": coker,
                    "note": "truncation data between radius R and R+1; not conclusive about the infinite quotient",
                }),
                Status::Decided,
            )
        }
    }
}

fn box_cmd(ctx: &Ctx, a: &BoxArgs) -> Result<Outcome, CliError> {
    let p = ctx.p(a.p)?;
    let load = || -> Result<BoxSeq, CliError> {
        let doc = a.input.as_deref().ok_or_else(|| CliError::Usage("this operation needs --input".into()))?;
        Ok(serde_json::from_value(input::read_json(doc)?)?)
    };
    match a.op {
        BoxOp::Demo => {
            let module = PhiGammaModule::trivial(p, ctx.defaults.a, ctx.defaults.n)?;
            let one = LaurentSeries::one(p, ctx.defaults.a, ctx.defaults.n)?;
            let seq = BoxSeq::constant(module, CharacterP::trivial(p), a.n0, a.n1, vec![one])?;
            doc(serde_json::to_value(seq)?, Status::Decided)
        }
        BoxOp::Act => {
            let seq = load()?;
            let p = seq.module().p();
            let prec = ctx.defaults.unit_precision(p);
            let s = |t: &Option<String>, dflt: &str| input::scalar(t.as_deref().unwrap_or(dflt), p, prec);
            let g = B2Elem::new(s(&a.a, "1")?, s(&a.b, "0")?, s(&a.d, "1")?)?;
            doc(serde_json::to_value(seq.act(&g)?)?, Status::Decided)
        }
        BoxOp::ResZp => {
            let seq = load()?;
            let v = seq.res_zp()?;
            doc(
                json!({ "schema": "pgk.box_res_zp/1", "components": v, "text": v.iter().map(|x| x.to_string()).collect::<Vec<_>>() }),
                Status::Decided,
            )
        }
        BoxOp::Bounded => {
            let seq = load()?;
            doc(json!({ "schema": "pgk.box_bounded/1", "bounded": seq.is_bounded_sharp()? }), Status::Decided)
        }
    }
}

fn sweep_cmd(ctx: &Ctx, a: &SweepArgs) -> Result<Outcome, CliError> {
    let p = ctx.p(a.p)?;
    let job = SweepJob {
        table: a.table,
        p,
        ks: input::int_range(&a.k)?,
        vals: input::rational_list(&a.vals)?,
        prec: ctx.scalar_prec().max(12),
    };
    let rows = sweep::run_sweep(&job, &ctx.cache)?;
    let body = match a.format {
        Format::Csv => sweep::to_csv(&job, &rows)?,
        Format::Json => sweep::to_json(&job, &rows)?,
    };
    Ok(Outcome { body, status: Status::Decided })
}
