//! The subcommands.

use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use qknot::consistency::{
    check_degrees, check_epsilon_palindromy, check_operator, height_stats, ConsistencyReport,
    EpsilonFactor,
};
use qknot::data::{polygon_support, published_operator};
use qknot::fusion::{colored_jones_mod, KnotSpec};
use qknot::guess::{
    guess_flat, guess_modular, GuessConfig, GuessResult, InhomPart, KnotOracle, StructureSet,
};
use qknot::kashaev::{a_sequence, volume_fit, Convention, KashaevConfig, CSV_HEADER};
use qknot::newton::{newton_polygon, translation_search, ClassicalAPoly, NewtonPolygon};
use qknot::opkit::{InhomOperator, SEQUENCE_SIGN};
use qknot::qarith::modular::{word_primes, ModContext};
use qknot::qarith::LaurentPoly;

use crate::cache::JonesCache;
use crate::config::{csv_document, emit, Report, RunConfig};
use crate::{Cli, CliError, CliResult, Command};

/// Parses `a:b` (inclusive) or a single integer.
fn parse_range(s: &str) -> CliResult<(i64, i64)> {
    let bad = || CliError::Usage(format!("invalid range '{s}' (expected a:b or an integer)"));
    let (a, b) = match s.split_once(':') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

/// Knot selection shared by several subcommands.
#[derive(Args, Debug, Clone, Serialize)]
pub struct KnotArgs {
    /// Pretzel knot K_p = K(p, 1).
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["m1", "m2"])]
    pub p: Option<i64>,
    /// First twist parameter of the 2-fusion knot K(m1, m2).
    #[arg(long, allow_hyphen_values = true, requires = "m2")]
    pub m1: Option<i64>,
    /// Second twist parameter of the 2-fusion knot K(m1, m2).
    #[arg(long, allow_hyphen_values = true, requires = "m1")]
    pub m2: Option<i64>,
}

impl KnotArgs {
    fn spec(&self) -> Option<KnotSpec> {
        match (self.p, self.m1, self.m2) {
            (Some(p), _, _) => Some(KnotSpec::pretzel(p)),
            (None, Some(a), Some(b)) => Some(KnotSpec::fusion(a, b)),
            _ => None,
        }
    }

    fn require(&self) -> CliResult<KnotSpec> {
        self.spec()
            .ok_or_else(|| CliError::Usage("select a knot with --p or --m1/--m2".into()))
    }
}

#[derive(Args, Debug, Serialize)]
pub struct JonesArgs {
    #[command(flatten)]
    pub knot: KnotArgs,
    /// Dimension n (or an inclusive range a:b).
    #[arg(long, allow_hyphen_values = true)]
    pub n: String,
    /// Evaluate modulo this prime instead of exactly.
    #[arg(long = "mod", requires = "q0")]
    pub modulus: Option<u64>,
    /// Evaluation point q0 for --mod.
    #[arg(long, requires = "modulus")]
    pub q0: Option<u64>,
    /// Print exponent range and coefficient sizes instead of the polynomial.
    #[arg(long)]
    pub stats: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct GuessArgs {
    /// Pretzel parameter p of K_p.
    #[arg(long, allow_hyphen_values = true)]
    pub p: i64,
    /// Order of the ansatz (flat or rectangular ansatz).
    #[arg(long)]
    pub order: Option<i64>,
    /// M-degree of the ansatz.
    #[arg(long)]
    pub mdeg: Option<i64>,
    /// q-degree of the ansatz (selects the flat ansatz in M, L and q).
    #[arg(long)]
    pub qdeg: Option<i64>,
    /// q-degree of the inhomogeneous part of the flat ansatz (default 2·qdeg + 4).
    #[arg(long)]
    pub bqdeg: Option<i64>,
    /// Classical A-polynomial file whose Newton polygon shapes the ansatz.
    #[arg(long)]
    pub polygon: Option<PathBuf>,
    /// Use this translation of the polygon only.
    #[arg(long, conflicts_with = "translate_search")]
    pub translate: Option<i64>,
    /// Inclusive range of translations to try in turn.
    #[arg(long, default_value = "0:8")]
    pub translate_search: String,
    /// Impose the palindromic symmetry of the sequence (default).
    #[arg(long, overrides_with = "no_symmetric")]
    pub symmetric: bool,
    /// Do not impose the palindromic symmetry.
    #[arg(long)]
    pub no_symmetric: bool,
    /// Number of word primes to start with.
    #[arg(long)]
    pub primes: Option<usize>,
    /// Evaluation points per prime (polygon/rectangle ansatz) or sequence values (flat ansatz).
    #[arg(long)]
    pub values: Option<usize>,
    /// Number of leading sequence indices held out for verification.
    #[arg(long)]
    pub holdout: Option<usize>,
    /// Index shift of the flat ansatz (it is applied to f_{n+shift}).
    #[arg(long, allow_hyphen_values = true, default_value_t = -1)]
    pub shift: i64,
    /// Write the guessed operator to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// Operator file (defaults to the embedded operator of --p when available).
    #[arg(long)]
    pub operator: Option<PathBuf>,
    #[command(flatten)]
    pub knot: KnotArgs,
    /// Inclusive range of indices n at which P f = b is checked.
    #[arg(long, allow_hyphen_values = true, default_value = "-10:30")]
    pub range: String,
}

#[derive(Args, Debug, Serialize)]
pub struct ConsistencyArgs {
    /// Operator file (defaults to the embedded operator of --p when available).
    #[arg(long)]
    pub operator: Option<PathBuf>,
    /// Pretzel parameter p of K_p (defaults to the operator's knot).
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<i64>,
    /// Only the palindromy check.
    #[arg(long)]
    pub palindromy: bool,
    /// Only the loop identities (with the Alexander polynomial).
    #[arg(long = "loop")]
    pub loop_: bool,
    /// Only the AJ specialization (or its ε-divisibility fallback).
    #[arg(long)]
    pub aj: bool,
    /// Only the ε palindromy.
    #[arg(long)]
    pub epsilon: bool,
    /// Also compare the degrees of J_{p,n} for n in this range with the quadratic model.
    #[arg(long)]
    pub degrees: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConventionArg {
    /// Evaluate J_{K,N} at e^{2πi/N}.
    Dimension,
    /// Evaluate J_{K,N−1} at e^{2πi/N}.
    Shifted,
}

#[derive(Args, Debug, Serialize)]
pub struct KashaevArgs {
    /// Operator file (defaults to the embedded operator of --p when available).
    #[arg(long)]
    pub operator: Option<PathBuf>,
    #[command(flatten)]
    pub knot: KnotArgs,
    /// N or an inclusive range a:b.
    #[arg(long = "N")]
    pub n: String,
    /// Stride through the range of N.
    #[arg(long, default_value_t = 1)]
    pub step: u64,
    /// Retained precision in bits.
    #[arg(long, default_value_t = qknot::kashaev::DEFAULT_PRECISION)]
    pub precision: u32,
    #[arg(long, value_enum, default_value_t = ConventionArg::Dimension)]
    pub convention: ConventionArg,
    /// Skip the doubled-precision rerun (no error estimate).
    #[arg(long)]
    pub no_error: bool,
    /// Largest acceptable error estimate of a_N; larger ones exit with status 3.
    #[arg(long, default_value_t = 1e-6)]
    pub max_err: f64,
    /// Also write the series as CSV to this file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct VolfitArgs {
    /// CSV file with columns N,a_N,... (lines starting with # are skipped).
    #[arg(long)]
    pub csv: PathBuf,
    /// Inclusive fit window a:b.
    #[arg(long, default_value = "100:1000")]
    pub window: String,
}

/// Runs the selected subcommand and writes its report.
pub fn run(cli: &Cli) -> CliResult<()> {
    let cfg = RunConfig::from_cli(cli);
    let cache = JonesCache::new(cli.global.cache.as_deref());
    let (report, outcome) = match &cli.command {
        Command::Jones(a) => (jones(a, &cfg, &cache)?, Ok(())),
        Command::Guess(a) => guess(a, &cfg)?,
        Command::Verify(a) => verify(a, &cfg, &cache)?,
        Command::Consistency(a) => consistency(a, &cfg, &cache)?,
        Command::Kashaev(a) => kashaev(a, &cfg, &cache)?,
        Command::Volfit(a) => (volfit(a)?, Ok(())),
    };
    cache.spot_check(cfg.seed)?;
    emit(cli.global.output.as_ref(), &report.render(&cfg))?;
    outcome
}

fn jones(a: &JonesArgs, cfg: &RunConfig, cache: &JonesCache) -> CliResult<Report> {
    let spec = a.knot.require()?;
    let (lo, hi) = parse_range(&a.n)?;
    let ns: Vec<i64> = (lo..=hi).collect();
    let pool = cfg.pool()?;
    if let (Some(m), Some(q0)) = (a.modulus, a.q0) {
        let ctx = ModContext::new(m, q0)?;
        let vals: Vec<(i64, u64)> = pool.install(|| {
            ns.par_iter()
                .map(|&n| Ok((n, colored_jones_mod(&spec, n, &ctx)?)))
                .collect::<CliResult<_>>()
        })?;
        let text = render_lines(&vals, |v| v.to_string());
        let data = json!({ "knot": spec, "modulus": m, "q0": q0,
            "values": vals.iter().map(|(n, v)| json!({"n": n, "value": v})).collect::<Vec<_>>() });
        return Ok(Report::new(text, data));
    }
    let polys: Vec<(i64, LaurentPoly)> = pool.install(|| {
        ns.par_iter()
            .map(|&n| Ok((n, cache.jones(&spec, n)?)))
            .collect::<CliResult<_>>()
    })?;
    if a.stats {
        let stats: Vec<(i64, qknot::consistency::HeightStats)> = polys
            .iter()
            .map(|(n, f)| Ok((*n, height_stats(f)?)))
            .collect::<CliResult<_>>()?;
        let text = render_lines(&stats, |s| {
            format!(
                "min_exp={} max_exp={} max_abs_coeff={} abs_coeff_sum={}",
                s.min_exp, s.max_exp, s.max_abs_coeff, s.abs_coeff_sum
            )
        });
        let data = json!({ "knot": spec,
            "stats": stats.iter().map(|(n, s)| json!({"n": n, "stats": s})).collect::<Vec<_>>() });
        return Ok(Report::new(text, data));
    }
    let texts: Vec<(i64, String)> = polys
        .iter()
        .map(|(n, f)| Ok((*n, f.to_q_string()?)))
        .collect::<CliResult<_>>()?;
    let text = render_lines(&texts, |s| s.clone());
    let data = json!({ "knot": spec,
        "polynomials": texts.iter().map(|(n, s)| json!({"n": n, "J": s})).collect::<Vec<_>>() });
    Ok(Report::new(text, data))
}

/// A single value on its own, several as `n: value` lines.
fn render_lines<T>(vals: &[(i64, T)], f: impl Fn(&T) -> String) -> String {
    if vals.len() == 1 {
        return f(&vals[0].1);
    }
    vals.iter()
        .map(|(n, v)| format!("{n}: {}", f(v)))
        .collect::<Vec<_>>()
        .join("\n")
}

type Outcome = (Report, CliResult<()>);

fn guess(a: &GuessArgs, cfg: &RunConfig) -> CliResult<Outcome> {
    let spec = KnotSpec::pretzel(a.p);
    let mut gc = GuessConfig {
        seed: cfg.seed,
        ..GuessConfig::default()
    };
    if let Some(k) = a.primes {
        if k == 0 {
            return Err(CliError::Usage("--primes must be positive".into()));
        }
        gc.primes = word_primes(k);
        gc.max_primes = gc.max_primes.max(k + 2);
    }
    if let Some(h) = a.holdout {
        gc.held_out = h;
    }
    let symmetric = !a.no_symmetric;
    let pool = cfg.pool()?;
    let mut search_log = Value::Null;
    let mut tau_found = None;
    let result: CliResult<GuessResult> = match (a.order, a.mdeg, a.qdeg) {
        (Some(o), Some(d), Some(g)) => {
            // flat ansatz in M, L and q on exact values
            gc.shift = a.shift;
            let nvals = a.values.unwrap_or(20);
            let seq = qknot::opkit::JonesSequence::new(spec);
            let vals: Vec<LaurentPoly> = pool.install(|| {
                (0..nvals as i64)
                    .into_par_iter()
                    .map(|n| Ok(seq.term(n)?))
                    .collect::<CliResult<_>>()
            })?;
            let sset = StructureSet::trivariate_box(
                o,
                d,
                g,
                Some(InhomPart {
                    m_max: d,
                    q_max: a.bqdeg.unwrap_or(2 * g + 4),
                }),
            );
            Ok(guess_flat(&vals, &sset, &gc, Some(spec))?)
        }
        (Some(o), Some(d), None) => {
            if let Some(v) = a.values {
                gc.q_points = v;
            }
            let sset = StructureSet::rectangle(o, d, true);
            let sset = if symmetric {
                qknot::guess::symmetry_reduce(&sset, qknot::newton::jones_symmetry_t(o))
            } else {
                sset
            };
            let oracle = KnotOracle::new(spec);
            Ok(pool.install(|| guess_modular(&oracle, &sset, &gc, Some(spec)))?)
        }
        (None, None, None) => {
            if let Some(v) = a.values {
                gc.q_points = v;
            }
            let poly = match &a.polygon {
                Some(path) => {
                    let text = fs::read_to_string(path)?;
                    newton_polygon(&ClassicalAPoly::parse(&text)?)?.oriented()
                }
                None => NewtonPolygon::from_support(&polygon_support(a.p)?)?.oriented(),
            };
            let taus = match a.translate {
                Some(t) => t..=t,
                None => {
                    let (lo, hi) = parse_range(&a.translate_search)?;
                    lo..=hi
                }
            };
            let oracle = KnotOracle::new(spec);
            match pool.install(|| translation_search(&oracle, &poly, taus, &gc, symmetric, Some(spec))) {
                Ok((tau, r, log)) => {
                    tau_found = Some(tau);
                    search_log = serde_json::to_value(&log).expect("serializable log");
                    Ok(r)
                }
                Err(e) => Err(e.into()),
            }
        }
        _ => {
            return Err(CliError::Usage(
                "give --order and --mdeg (and optionally --qdeg) together".into(),
            ))
        }
    };
    let r = result?;
    let (l, m, q, h) = r.operator.degrees();
    if let Some(path) = &a.out {
        emit(Some(path), &(r.operator.serialize() + "\n"))?;
    }
    let embedded_match = published_operator(a.p)
        .ok()
        .map(|e| r.operator.canonically_equal(&e));
    let mut text = String::new();
    if let Some(t) = tau_found {
        text.push_str(&format!("translation {t}\n"));
    }
    if let Some(m) = embedded_match {
        text.push_str(&format!(
            "embedded operator: {}\n",
            if m { "identical after normalization" } else { "differs" }
        ));
    }
    text.push_str(&format!(
        "degrees: L {l}, M {m}, q {q}, largest coefficient {h}\nnullspace dimension {} ({} alternatives)\nheld-out indices {:?}: {}\n{}",
        r.nullspace_dim,
        r.alternatives,
        r.verification.indices,
        if r.verification.passed() { "verified" } else { "FAILED" },
        r.operator
    ));
    let data = json!({
        "knot": spec,
        "translation": tau_found,
        "matches_embedded": embedded_match,
        "search": search_log,
        "degrees": {"L": l, "M": m, "q": q, "largest_coefficient": h.to_string()},
        "nullspace_dim": r.nullspace_dim,
        "alternatives": r.alternatives,
        "verification": r.verification,
        "provenance": r.provenance,
        "operator": r.operator.to_json(),
    });
    let outcome = if r.verification.passed() {
        Ok(())
    } else {
        Err(CliError::Failure(format!(
            "held-out verification failed at {:?}",
            r.verification.failures
        )))
    };
    Ok((Report::new(text, data), outcome))
}

fn read_operator(path: &PathBuf) -> CliResult<InhomOperator> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(InhomOperator::parse_file(&text)?)
}

/// Operator from `--operator`, or the embedded one for the pretzel knot.
fn operator_or_embedded(path: Option<&PathBuf>, p: Option<i64>) -> CliResult<InhomOperator> {
    match (path, p) {
        (Some(path), _) => read_operator(path),
        (None, Some(p)) => Ok(published_operator(p)?),
        (None, None) => Err(CliError::Usage("give --operator or --p".into())),
    }
}

fn verify(a: &VerifyArgs, cfg: &RunConfig, cache: &JonesCache) -> CliResult<Outcome> {
    let op = operator_or_embedded(a.operator.as_ref(), a.knot.p)?;
    let spec = a
        .knot
        .spec()
        .or(op.knot)
        .ok_or_else(|| CliError::Usage("the operator names no knot; give --p or --m1/--m2".into()))?;
    let (lo, hi) = parse_range(&a.range)?;
    let term = |k: i64| -> qknot::QResult<LaurentPoly> {
        let j = cache.jones(&spec, qknot::opkit::jones_dimension(k))?;
        Ok(if SEQUENCE_SIGN < 0 { -j } else { j })
    };
    let pool = cfg.pool()?;
    let rows: Vec<(i64, bool)> = pool.install(|| {
        (lo..=hi)
            .into_par_iter()
            .map(|n| Ok((n, op.apply(term, n)?.is_zero())))
            .collect::<CliResult<_>>()
    })?;
    let failures: Vec<i64> = rows.iter().filter(|r| !r.1).map(|r| r.0).collect();
    let text = if failures.is_empty() {
        format!("P f = b holds for {spec} at every n in {lo}..={hi} ({} indices)", rows.len())
    } else {
        format!("nonzero residual for {spec} at n = {failures:?}")
    };
    let data = json!({ "knot": spec, "range": [lo, hi],
        "residuals": rows.iter().map(|(n, z)| json!({"n": n, "zero": z})).collect::<Vec<_>>(),
        "failures": failures });
    let outcome = if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failure(format!("{} nonzero residuals", failures.len())))
    };
    Ok((Report::new(text, data), outcome))
}

fn consistency(a: &ConsistencyArgs, cfg: &RunConfig, cache: &JonesCache) -> CliResult<Outcome> {
    // the ε palindromy concerns the knot only and needs no operator
    let epsilon_only = a.epsilon && !(a.palindromy || a.loop_ || a.aj) && a.operator.is_none();
    let full = match (epsilon_only, a.p) {
        (true, Some(p)) => ConsistencyReport {
            p: Some(p),
            checks: vec![check_epsilon_palindromy(&EpsilonFactor::load(p)?)],
        },
        _ => {
            let op = operator_or_embedded(a.operator.as_ref(), a.p)?;
            let p = a.p.or(op.knot.and_then(|k| k.pretzel)).ok_or_else(|| {
                CliError::Usage("give --p for an operator without a pretzel knot".into())
            })?;
            check_operator(&op, p)?
        }
    };
    let p = full.p.expect("reports of pretzel knots carry p");
    let selected: Vec<&str> = [
        (a.palindromy, "palindromy"),
        (a.loop_, "loop"),
        (a.aj, "aj"),
        (a.epsilon, "epsilon"),
    ]
    .iter()
    .filter(|(on, _)| *on)
    .map(|(_, name)| *name)
    .collect();
    let checks = full
        .checks
        .into_iter()
        .filter(|c| selected.is_empty() || selected.iter().any(|s| c.name.starts_with(s)))
        .collect();
    let report = ConsistencyReport { p: Some(p), checks };
    let mut ok = report.all_hold();
    let mut text: Vec<String> = report
        .checks
        .iter()
        .map(|c| format!("{:<18} {}  {}", c.name, if c.holds { "holds" } else { "FAILS" }, c.detail))
        .collect();
    let mut degrees = Value::Null;
    if let Some(r) = &a.degrees {
        let (lo, hi) = parse_range(r)?;
        let spec = KnotSpec::pretzel(p);
        // warm the cache in parallel; the degree check then reads it
        let pool = cfg.pool()?;
        pool.install(|| {
            (lo.max(1)..=hi)
                .into_par_iter()
                .try_for_each(|n| cache.jones(&spec, n).map(|_| ()))
        })?;
        let rep = check_degrees(&spec, lo.max(1)..=hi)?;
        text.push(format!(
            "degrees n={}..={}: constant max offset {:?}, formulas agree: {}",
            lo.max(1),
            hi,
            rep.constant_max_offset,
            rep.formulas_agree
        ));
        ok &= rep.rows.iter().all(|row| row.min_matches);
        degrees = serde_json::to_value(&rep).expect("serializable degree report");
    }
    let data = json!({ "report": report, "degrees": degrees });
    let outcome = if ok {
        Ok(())
    } else {
        Err(CliError::Failure("consistency check failed".into()))
    };
    Ok((Report::new(text.join("\n"), data), outcome))
}

fn kashaev(a: &KashaevArgs, cfg: &RunConfig, cache: &JonesCache) -> CliResult<Outcome> {
    let op = operator_or_embedded(a.operator.as_ref(), a.knot.p)?;
    let spec = a
        .knot
        .spec()
        .or(op.knot)
        .ok_or_else(|| CliError::Usage("the operator names no knot; give --p or --m1/--m2".into()))?;
    let (lo, hi) = parse_range(&a.n)?;
    if lo < 1 {
        return Err(CliError::Usage("N must be positive".into()));
    }
    if a.step == 0 {
        return Err(CliError::Usage("--step must be positive".into()));
    }
    let seeds: Vec<LaurentPoly> = (1..=op.order())
        .map(|d| cache.jones(&spec, d))
        .collect::<qknot::QResult<_>>()?;
    let kc = KashaevConfig {
        precision: a.precision,
        convention: match a.convention {
            ConventionArg::Dimension => Convention::Dimension,
            ConventionArg::Shifted => Convention::Shifted,
        },
        error_estimate: !a.no_error,
        ..KashaevConfig::default()
    };
    let ns: Vec<u64> = (lo as u64..=hi as u64).step_by(a.step as usize).collect();
    let pool = cfg.pool()?;
    let vals = pool.install(|| a_sequence(&op, &seeds, ns, &kc))?;
    let rows: Vec<String> = vals.iter().map(|v| v.csv_row()).collect();
    if let Some(path) = &a.csv {
        emit(Some(path), &csv_document(cfg, CSV_HEADER, &rows))?;
    }
    let text = std::iter::once(CSV_HEADER.to_string())
        .chain(rows.iter().cloned())
        .collect::<Vec<_>>()
        .join("\n");
    let data = json!({ "knot": spec, "config": kc,
        "values": vals.iter().map(|v| {
            let (re, im) = v.value.to_f64_pair();
            json!({"N": v.n, "a_N": v.a_n, "re": re, "im": im, "err": v.err,
                   "degenerate_steps": v.degenerate_steps, "precision": v.precision,
                   "working_precision": v.working_precision})
        }).collect::<Vec<_>>() });
    let mut report = Report::new(text, data);
    report.csv = Some((CSV_HEADER.to_string(), rows));
    let unstable: Vec<u64> = vals
        .iter()
        .filter(|v| v.err.is_some_and(|e| !(e <= a.max_err)))
        .map(|v| v.n)
        .collect();
    let outcome = if unstable.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numeric(format!(
            "error estimate above {} at N = {unstable:?}; raise --precision",
            a.max_err
        )))
    };
    Ok((report, outcome))
}

/// `(N, a_N)` pairs from a CSV series.
fn read_series(path: &PathBuf) -> CliResult<Vec<(u64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .from_path(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let field = |i: usize| rec.get(i).map(str::trim).unwrap_or("");
        let n = field(0)
            .parse::<u64>()
            .map_err(|_| CliError::Usage(format!("bad N '{}' in {}", field(0), path.display())))?;
        let a = field(1)
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("bad a_N '{}' in {}", field(1), path.display())))?;
        out.push((n, a));
    }
    Ok(out)
}

fn volfit(a: &VolfitArgs) -> CliResult<Report> {
    let pts = read_series(&a.csv)?;
    let (lo, hi) = parse_range(&a.window)?;
    if lo < 1 {
        return Err(CliError::Usage("the fit window must start at N ≥ 1".into()));
    }
    let fit = volume_fit(&pts, (lo as u64, hi as u64))?;
    let text = format!(
        "a_N ≈ c0 + c1 log(N)/N + c2/N over N in [{}, {}] ({} points)\nc0 = {}\nc1 = {}\nc2 = {}\nresidual (rms) = {:e}",
        fit.window.0, fit.window.1, fit.points, fit.c0, fit.c1, fit.c2, fit.residual
    );
    let data = serde_json::to_value(&fit).expect("serializable fit");
    Ok(Report::new(text, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-10:30").unwrap(), (-10, 30));
        assert_eq!(parse_range("7").unwrap(), (7, 7));
        assert!(parse_range("3:1").is_err());
        assert!(parse_range("a:b").is_err());
    }
}
