//! One function per subcommand. Each returns a JSON report and, when a
//! check failed, a summary of the failure.

use cluster_atomic::atomic::AtomicVerifier;
use cluster_atomic::cluster::{enumerate_exchange_graph, ExchangeGraph, ExchangeGraphReport, Seed};
use cluster_atomic::par;
use cluster_atomic::qp::decorated::{build_cluster_monomial, build_cluster_rep, qp_along_walk, summarize, DecoratedRepJson};
use cluster_atomic::qp::potential::QpJson;
use cluster_atomic::{ExchangeMatrix, LaurentPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::input::{index, parse_walk, InputDoc};
use crate::{Command, Failure, RunConfig};

pub struct Outcome {
    pub report: Value,
    pub failure: Option<String>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn one_based(walk: &[usize]) -> Vec<usize> {
    walk.iter().map(|k| k + 1).collect()
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Mutate => "mutate",
        Command::Enumerate => "enumerate",
        Command::Expand => "expand",
        Command::Rep => "rep",
        Command::Xcheck => "xcheck",
        Command::VerifyLemma => "verify-lemma",
        Command::VerifyAtomic => "verify-atomic",
    }
}

pub fn dispatch(config: &RunConfig, doc: &InputDoc) -> Result<Outcome, Failure> {
    let b = doc.matrix();
    let walk = parse_walk(&config.walk, b.n())?;
    let (result, failure) = match config.command {
        Command::Mutate => (mutate(&b, &walk)?, None),
        Command::Enumerate => (enumerate(&b, config.cap)?, None),
        Command::Expand => (expand(config, doc, &b, &walk)?, None),
        Command::Rep => (rep(config, doc, &b, &walk)?, None),
        Command::Xcheck => xcheck(config, &b)?,
        Command::VerifyLemma => verify_lemma(config, &b)?,
        Command::VerifyAtomic => verify_atomic(config, doc, &b)?,
    };
    let report = json!({
        "command": command_name(config.command),
        "input": to_value(doc),
        "status": if failure.is_none() { "pass" } else { "fail" },
        "result": result,
    });
    Ok(Outcome { report, failure })
}

fn mutate(b: &ExchangeMatrix, walk: &[usize]) -> Result<Value, Failure> {
    let seed = Seed::initial(b.clone()).mutate_along(walk)?;
    let (qp, qp_error) = match qp_along_walk(b, walk) {
        Ok(qps) => (to_value(&QpJson::from(qps.last().expect("walk start"))), Value::Null),
        Err(e) => (Value::Null, json!(e.to_string())),
    };
    Ok(json!({
        "walk": one_based(walk),
        "matrix": to_value(&seed.matrix),
        "quiver": to_value(&seed.matrix.to_quiver()),
        "cluster": seed.cluster.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "qp": qp,
        "qp_error": qp_error,
    }))
}

fn enumerate(b: &ExchangeMatrix, cap: usize) -> Result<Value, Failure> {
    let g = enumerate_exchange_graph(b, cap)?;
    let mut report = to_value(&ExchangeGraphReport::from(&g));
    report["edges"] = json!(g.edge_count());
    report["regular_and_connected"] = json!(g.is_regular_and_connected());
    Ok(report)
}

fn required_k(config: &RunConfig, n: usize) -> Result<usize, Failure> {
    let k = config.k.ok_or_else(|| Failure::Invalid("--k is required unless the input gives `exponents`".into()))?;
    index(k, n)
}

fn expand(config: &RunConfig, doc: &InputDoc, b: &ExchangeMatrix, walk: &[usize]) -> Result<Value, Failure> {
    let seed = Seed::initial(b.clone()).mutate_along(walk)?;
    let n = b.n();
    let (target, label) = match &doc.exponents {
        Some(exps) => {
            let p = seed.cluster.iter().zip(exps).fold(LaurentPoly::one(n), |acc, (x, &e)| &acc * &x.pow(e));
            (p, json!({ "exponents": exps }))
        }
        None => {
            let k = required_k(config, n)?;
            (seed.cluster[k].clone(), json!({ "k": k + 1 }))
        }
    };
    let cls = target.classify();
    let denominator = target.denominator_vector().map(|d| d.0).ok();
    Ok(json!({
        "walk": one_based(walk),
        "target": label,
        "expansion": target.to_string(),
        "denominator_vector": denominator,
        "nonneg": cls.is_nonneg,
        "proper_sum": cls.is_proper_sum,
    }))
}

fn rep(config: &RunConfig, doc: &InputDoc, b: &ExchangeMatrix, walk: &[usize]) -> Result<Value, Failure> {
    let dec = match &doc.exponents {
        Some(exps) => build_cluster_monomial(b, walk, exps)?,
        None => build_cluster_rep(b, walk, required_k(config, b.n())?)?,
    };
    let summary = summarize(&dec, b, config.primes)?;
    let mut report = to_value(&summary);
    report["walk"] = json!(one_based(walk));
    report["representation"] = to_value(&DecoratedRepJson::from(&dec));
    Ok(report)
}

#[derive(Serialize)]
struct Mismatch {
    walk: Vec<usize>,
    k: usize,
    symbolic: String,
    representation: String,
}

fn xcheck(config: &RunConfig, b: &ExchangeMatrix) -> Result<(Value, Option<String>), Failure> {
    let g = enumerate_exchange_graph(b, config.cap)?;
    let tasks: Vec<(usize, usize)> = (0..g.clusters.len()).flat_map(|c| (0..b.n()).map(move |k| (c, k))).collect();
    let results = par::try_map(&tasks, |&(c, k)| -> cluster_atomic::Result<(Option<Mismatch>, i64)> {
        let seed = &g.clusters[c].seed;
        let dec = build_cluster_rep(b, &seed.walk, k)?;
        let x = dec.cluster_character(b, config.primes)?;
        let e = cluster_atomic::qp::e_invariant(&dec)?;
        let mismatch = (x != seed.cluster[k]).then(|| Mismatch {
            walk: one_based(&seed.walk),
            k: k + 1,
            symbolic: seed.cluster[k].to_string(),
            representation: x.to_string(),
        });
        Ok((mismatch, e))
    })?;
    let nonzero_e = results.iter().filter(|(_, e)| *e != 0).count();
    let mismatches: Vec<Mismatch> = results.into_iter().filter_map(|(m, _)| m).collect();
    let failure = (!mismatches.is_empty() || nonzero_e > 0)
        .then(|| format!("{} mismatches, {nonzero_e} nonzero E-invariants", mismatches.len()));
    let report = json!({
        "clusters": g.clusters.len(),
        "checks": tasks.len(),
        "mismatches": to_value(&mismatches),
        "nonzero_e_invariants": nonzero_e,
    });
    Ok((report, failure))
}

fn verifier<'g>(config: &RunConfig, g: &'g ExchangeGraph) -> Result<AtomicVerifier<'g>, Failure> {
    Ok(AtomicVerifier::new(g, config.max_deg)?)
}

fn verify_lemma(config: &RunConfig, b: &ExchangeMatrix) -> Result<(Value, Option<String>), Failure> {
    let g = enumerate_exchange_graph(b, config.cap)?;
    let v = verifier(config, &g)?;
    let report = v.lemma();
    let failure = (!report.is_clean()).then(|| format!("{} lemma violations", report.violations.len()));
    let mut value = to_value(&report);
    value["max_deg"] = json!(config.max_deg);
    Ok((value, failure))
}

#[derive(Serialize)]
struct ElementVerdict {
    element: String,
    coordinates: Vec<(String, String)>,
    residual: bool,
    is_positive: bool,
    coords_nonneg: bool,
    theorem_consistent: bool,
}

fn random_combinations(v: &AtomicVerifier, samples: usize, seed: u64) -> Vec<LaurentPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let terms: Vec<(usize, i64)> =
                (0..rng.gen_range(1..=4)).map(|_| (rng.gen_range(0..v.monomials.len()), rng.gen_range(-3..=3))).collect();
            v.combination(&terms)
        })
        .collect()
}

fn verify_atomic(config: &RunConfig, doc: &InputDoc, b: &ExchangeMatrix) -> Result<(Value, Option<String>), Failure> {
    let g = enumerate_exchange_graph(b, config.cap)?;
    let v = verifier(config, &g)?;
    let given = doc.parsed_elements()?;
    let (elements, source) = if given.is_empty() {
        (random_combinations(&v, config.samples, config.seed), "random")
    } else {
        (given, "input")
    };
    let verdicts = par::try_map(&elements, |p| -> cluster_atomic::Result<ElementVerdict> {
        let exp = v.expand(p);
        let r = v.verify(p)?;
        Ok(ElementVerdict {
            element: p.to_string(),
            coordinates: exp.coefficients.iter().map(|(i, c)| (v.monomials[*i].expansion.to_string(), c.to_string())).collect(),
            residual: r.residual,
            is_positive: r.is_positive,
            coords_nonneg: r.coords_nonneg,
            theorem_consistent: r.theorem_consistent,
        })
    })?;
    if let Some(bad) = verdicts.iter().find(|x| x.residual) {
        return Err(Failure::Invalid(format!(
            "{} is not a combination of cluster monomials of degree <= {}",
            bad.element, config.max_deg
        )));
    }
    let inconsistent = verdicts.iter().filter(|x| !x.theorem_consistent).count();
    let failure = (inconsistent > 0).then(|| format!("{inconsistent} elements where positivity and coordinates disagree"));
    let report = json!({
        "max_deg": config.max_deg,
        "source": source,
        "basis_size": v.monomials.len(),
        "checked": verdicts.len(),
        "positive": verdicts.iter().filter(|x| x.is_positive).count(),
        "inconsistent": inconsistent,
        "elements": to_value(&verdicts),
    });
    Ok((report, failure))
}
