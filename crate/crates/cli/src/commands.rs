use num_traits::Zero;
use serde_json::{json, Value};

use partfn_core::distance::{exact_sampling_distance, sampling_distance};
use partfn_core::error::{Error, Result};
use partfn_core::exact::fmt_rat;
use partfn_core::graph::to_graph6;
use partfn_core::hierarchy::{dominance, dominance_of};
use partfn_core::llt::{
    convolution_power, free_volume_ratio_bound_check, gnedenko_deviation, ratio_lemma_check, ratio_lemma_first_n,
    transfer_inequality_audit, AuditParams, TransferCase,
};
use partfn_core::lp::{build_lp, stability_constant};
use partfn_core::observables::{
    default_lambda_grid, default_tune_tolerance, free_volume, occupancy_fraction, size_distribution, tune_lambda, GraphSize,
};
use partfn_core::polys::{coeffs, kdd_ind_coeffs, kdd_match_coeffs, potts_coeffs};
use partfn_core::verify::{self, Statement, VerifySpec};
use partfn_core::{BigRat, CoefVector, Kind};

use crate::args::{AuditArgs, BaseArgs, Command, HierArgs, LltCommand, VerifyArgs};
use crate::input;

pub enum Output {
    Json(Value),
    Text(String),
}

/// Output plus the process exit code.
pub struct Outcome {
    pub output: Output,
    pub code: i32,
}

impl From<Value> for Outcome {
    fn from(v: Value) -> Self {
        Outcome { output: Output::Json(v), code: 0 }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("output serializes")
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Poly { graph, kind } => {
            let g = input::graph(graph)?;
            let c = coeffs(&g, input::kind(kind)?)?;
            let mut v = to_value(&c);
            v["graph"] = json!(to_graph6(&g));
            Ok(v.into())
        }
        Command::Obs { graph, kind, lambda, tune } => obs(graph, kind, lambda.as_deref(), tune.as_deref()),
        Command::Dist { g, h, rmax, exact } => {
            let (g, h) = (input::graph(g)?, input::graph(h)?);
            let s = sampling_distance(&g, &h, *rmax)?;
            let ex = exact.then(|| exact_sampling_distance(&g, &h));
            Ok(to_value(&s.to_json(ex.as_ref())).into())
        }
        Command::Lp { d, kind, lambda, stability, graph, dump } => {
            lp(*d, kind, lambda, *stability, graph.as_deref(), *dump)
        }
        Command::Hier(a) => hier(a),
        Command::Llt { command } => llt(command),
        Command::Verify(a) => verify_cmd(a),
        Command::Audit(a) => audit(a),
    }
}

fn obs(graph: &str, kind: &str, lambda: Option<&str>, tune: Option<&str>) -> Result<Outcome> {
    let g = input::graph(graph)?;
    let c = coeffs(&g, input::kind(kind)?)?;
    let grid = match lambda {
        Some(s) => input::rats(s)?,
        None => default_lambda_grid(),
    };
    let mut points = Vec::new();
    for l in &grid {
        let dist = size_distribution(&c, l)?;
        points.push(json!({
            "lambda": fmt_rat(l),
            "occupancy": fmt_rat(&occupancy_fraction(&c, GraphSize::of(&g), l)?),
            "mean": fmt_rat(&dist.mean()),
            "variance": fmt_rat(&dist.variance()),
            "distribution": dist.prob.iter().map(fmt_rat).collect::<Vec<_>>(),
        }));
    }
    let fv: Vec<Value> = (0..c.top())
        .filter(|&k| !c.get(k).is_zero())
        .map(|k| free_volume(&c, k).map(|x| json!({"k": k, "free_volume": fmt_rat(&x)})))
        .collect::<Result<_>>()?;
    let mut v = json!({ "graph": to_graph6(&g), "kind": c.kind.to_string(), "points": points, "free_volume": fv });
    if let Some(t) = tune {
        let r = tune_lambda(&c, &input::rat(t)?, &default_tune_tolerance())?;
        v["tuned"] = json!({
            "lambda": fmt_rat(&r.lambda), "lo": fmt_rat(&r.lo), "hi": fmt_rat(&r.hi), "mean": fmt_rat(&r.mean)
        });
    }
    Ok(v.into())
}

fn lp(d: usize, kind: &str, lambda: &str, stability: bool, graph: Option<&str>, dump: bool) -> Result<Outcome> {
    let kind = input::kind(kind)?;
    let l = input::rat(lambda)?;
    let olp = build_lp(d, kind, &l)?;
    if dump {
        return Ok(Outcome { output: Output::Text(olp.lp.to_text()), code: 0 });
    }
    let sol = olp.solve()?;
    let t = olp.tightness(&sol)?;
    let mut v = json!({
        "d": d,
        "kind": kind.to_string(),
        "lambda": fmt_rat(&l),
        "optimum": fmt_rat(&t.optimum),
        "kdd": fmt_rat(&t.kdd),
        "gap": fmt_rat(&t.gap),
        "tight": t.is_tight(),
        "columns": olp.lp.col_names,
        "primal": sol.primal.iter().map(fmt_rat).collect::<Vec<_>>(),
        "rows": olp.lp.row_names,
        "dual": to_value(&sol.dual.to_json()),
    });
    if !t.witness.is_empty() {
        v["witness"] = t.witness.iter().map(|(name, p)| json!({"view": name, "p": fmt_rat(p)})).collect();
    }
    if stability || graph.is_some() {
        let s = stability_constant(d, kind, &l)?;
        v["stability"] = json!({
            "zero_slack": s.zero_slack.iter().map(|x| x.describe()).collect::<Vec<_>>(),
            "theta_star": fmt_rat(&s.theta_star),
            "f": fmt_rat(&s.f),
            "c": fmt_rat(&s.c),
        });
        if let Some(gs) = graph {
            let g = input::graph(gs)?;
            let gc = s.gap_check(&g)?;
            v["gap_check"] = json!({
                "graph": to_graph6(&g),
                "alpha_g": fmt_rat(&gc.alpha_g),
                "alpha_kdd": fmt_rat(&gc.alpha_kdd),
                "delta": fmt_rat(&gc.delta),
                "rhs": fmt_rat(&gc.rhs),
                "margin": fmt_rat(&gc.margin),
                "holds": gc.holds,
            });
            if !gc.holds {
                return Ok(Outcome { output: Output::Json(v), code: 1 });
            }
        }
    }
    Ok(v.into())
}

fn hier(a: &HierArgs) -> Result<Outcome> {
    let report = match (&a.zg, &a.zh, &a.g, &a.h) {
        (Some(zg), Some(zh), _, _) => dominance(&input::coeff_list(zg)?, &input::coeff_list(zh)?)?,
        (_, _, Some(g), Some(h)) => {
            let kind = input::kind(&a.kind)?;
            dominance_of(&coeffs(&input::graph(g)?, kind)?, &coeffs(&input::graph(h)?, kind)?)?
        }
        _ => return Err(Error::InvalidInput("give --zg and --zh, or --g and --h".into())),
    };
    Ok(to_value(&report).into())
}

fn kdd_base(b: &BaseArgs) -> Result<(CoefVector, BigRat)> {
    let kind = input::kind(&b.kind)?;
    let c = match kind {
        Kind::Match => kdd_match_coeffs(b.d),
        Kind::Ind => kdd_ind_coeffs(b.d),
        Kind::Potts(q) => potts_coeffs(&partfn_core::graph::complete_bipartite(b.d, b.d), q)?,
    };
    Ok((c, input::rat(&b.lambda)?))
}

fn llt(cmd: &LltCommand) -> Result<Outcome> {
    match cmd {
        LltCommand::Power(b) => {
            let (c, l) = kdd_base(b)?;
            let p = convolution_power(&size_distribution(&c, &l)?, b.k)?;
            Ok(json!({
                "components": b.k,
                "mean": fmt_rat(&p.dist.mean()),
                "variance": fmt_rat(&p.dist.variance()),
                "distribution": to_value(&p.dist.to_json()),
            })
            .into())
        }
        LltCommand::Gnedenko { base, csv } => {
            let (c, l) = kdd_base(base)?;
            let r = gnedenko_deviation(&size_distribution(&c, &l)?, base.k)?;
            if *csv {
                return Ok(Outcome { output: Output::Text(r.to_csv()), code: 0 });
            }
            Ok(to_value(&r).into())
        }
        LltCommand::Ratio { d, n, k, rmax, delta, kind, scan_to } => {
            let kind = input::kind(kind)?;
            let delta = input::rat(delta)?;
            let r = ratio_lemma_check(*d, *n, *k, *rmax, &delta, kind)?;
            let mut v = json!({
                "d": d, "n": n, "k": k, "kind": kind.to_string(),
                "epsilon": fmt_rat(&r.epsilon),
                "lambda": fmt_rat(&r.lambda),
                "lambda_lower": r.lambda_lower.as_ref().map(fmt_rat),
                "lambda_upper": fmt_rat(&r.lambda_upper),
                "lambda_in_range": r.lambda_in_range,
                "rows": to_value(&r.rows),
                "sandwich": r.sandwich,
                "ok": r.ok(),
            });
            if let Some(top) = scan_to {
                let frac = BigRat::new((*k).into(), (*n).into());
                v["first_n"] = json!(ratio_lemma_first_n(*d, &frac, *rmax, &delta, kind, *top)?);
            }
            Ok(v.into())
        }
    }
}

fn statement(s: &str) -> Result<Statement> {
    Ok(match s {
        "coef" | "coefficient" => Statement::CoefficientDominance,
        "part" | "partition" => Statement::PartitionDominance,
        "girth5" => Statement::Girth5,
        "bregman" => Statement::Bregman,
        _ => return Err(Error::InvalidInput(format!("unknown statement {s:?}; use coef, part, girth5 or bregman"))),
    })
}

fn verify_cmd(a: &VerifyArgs) -> Result<Outcome> {
    let st = statement(&a.statement)?;
    let kind = if st == Statement::Girth5 { Kind::Ind } else { input::kind(&a.kind)? };
    let mut spec = VerifySpec::new(st, a.d, a.n, kind);
    if let Some(g) = a.girth {
        spec.girth = g;
    }
    spec.k_range = a.k_range.as_deref().map(input::k_range).transpose()?;
    spec.lambda_grid = match (&a.lambda, st) {
        (Some(s), _) => input::rats(s)?,
        (None, Statement::PartitionDominance) => default_lambda_grid(),
        _ => Vec::new(),
    };
    spec.graph6 = a.graph6.clone();
    let v = verify::run(&spec)?;
    let code = i32::from(v.theorem_backed_failure());
    let mut out = to_value(&v);
    if st == Statement::Bregman {
        out["gap_correlation"] = json!(verify::bregman_gap_correlation(&v));
    }
    Ok(Outcome { output: Output::Json(out), code })
}

fn audit(a: &AuditArgs) -> Result<Outcome> {
    let g = input::graph(&a.gprime)?;
    let case: TransferCase = a.case.parse()?;
    let params = AuditParams { delta: input::rat(&a.delta)?, delta_prime: input::rat(&a.delta_prime)? };
    let r = transfer_inequality_audit(&g, a.d, a.n, a.k, case, input::kind(&a.kind)?, &params)?;
    let mut v = to_value(&r);
    v["all_hold"] = json!(r.all_hold());
    if a.kind == "match" {
        v["ratio_bound_first_failure"] = json!(free_volume_ratio_bound_check(a.d, a.n)?);
    }
    Ok(v.into())
}
