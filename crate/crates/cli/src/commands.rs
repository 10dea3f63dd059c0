use anyhow::{bail, Result};
use nalgebra::{ComplexField, DMatrix};
use serde_json::{json, Value};

use spectra_core::exact::{rank, smith_normal_form};
use spectra_core::pencil::{are_cospectral, are_cospectral_digraphs, PartitionChoice};
use spectra_core::search::{
    bucket_and_match, digraph_offdiagonal_probe, verify_theorem_equivalence, GraphSource, ProbeConfig, SearchConfig,
    TheoremConfig,
};
use spectra_core::similarity::{
    extended_walk_matrix, reconstruct_q_constructive, reconstruct_q_exact, walk_matrix, ConstructiveOutcome,
    ExactOutcome,
};
use spectra_core::{ExactScalar, GaussianRational, Matrix, PitOptions, Rational, RationalMatrix, VertexPartition};

use crate::input::{read_input, read_pair, read_text, Input, PartitionArg};
use crate::{
    CheckArgs, Cli, Command, FallbackArg, PathArg, PitArgs, ProbeArgs, ReconstructArgs, SearchArgs, SnfArgs,
    TheoremArgs, Verdict, WalkArgs,
};

pub fn run(cli: &Cli) -> Result<(Value, Verdict)> {
    match &cli.command {
        Command::Check(a) => check(a),
        Command::ReconstructQ(a) => reconstruct(a),
        Command::Snf(a) => snf(a),
        Command::Walk(a) => walk(a),
        Command::Search(a) => search(a),
        Command::Probe(a) => probe(a),
        Command::VerifyTheorem(a) => theorem(a),
    }
}

fn pit_options(p: &PitArgs) -> PitOptions {
    PitOptions { mode: p.mode.into(), trials: p.trials, seed: p.seed, node_budget: p.node_budget }
}

fn positive(ok: bool) -> Verdict {
    if ok {
        Verdict::Positive
    } else {
        Verdict::Negative
    }
}

fn exact_rows<T: ExactScalar>(m: &Matrix<T>) -> Value {
    json!(m.to_string_rows())
}

fn integer_rows(m: &Matrix<spectra_core::Integer>) -> Value {
    let rows: Vec<Vec<String>> = (0..m.rows()).map(|i| m.row(i).iter().map(ToString::to_string).collect()).collect();
    json!(rows)
}

fn numeric_rows<N: ComplexField<RealField = f64> + Copy>(m: &DMatrix<N>) -> (Value, Option<Value>) {
    let part = |f: &dyn Fn(N) -> f64| -> Vec<Vec<f64>> {
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(m[(i, j)])).collect()).collect()
    };
    let im = part(&|x| x.imaginary());
    let complex = im.iter().flatten().any(|&x| x != 0.0);
    (json!(part(&|x| x.real())), complex.then(|| json!(im)))
}

fn check(args: &CheckArgs) -> Result<(Value, Verdict)> {
    let (a, b) = read_pair(&args.a, &args.b)?;
    let choice = match &args.partition {
        PartitionArg::Degree => PartitionChoice::Degree,
        explicit => PartitionChoice::Explicit(explicit.resolve(VertexPartition::trivial(a.order()))?),
    };
    let opts = pit_options(&args.pit);
    let verdict = match (&a, &b) {
        (Input::Graph(g), Input::Graph(h)) => are_cospectral(g, h, args.relation, &choice, &opts)?,
        (Input::Digraph(g), Input::Digraph(h)) => are_cospectral_digraphs(g, h, args.relation, &choice, &opts)?,
        _ => unreachable!("read_pair rejects mixed inputs"),
    };
    let partition = match &choice {
        PartitionChoice::Explicit(p) => Some(p.to_string()),
        PartitionChoice::Degree if args.relation.needs_partition() => Some(a.degree_partition().to_string()),
        PartitionChoice::Degree => None,
    };
    let value = json!({
        "command": "check",
        "a": a.code(),
        "b": b.code(),
        "order": a.order(),
        "relation": verdict.relation,
        "partition": partition,
        "partitions_match": verdict.partitions_match,
        "equal": verdict.equal,
        "comparison": verdict.comparison,
    });
    Ok((value, positive(verdict.equal)))
}

fn exact_section<T: ExactScalar>(out: &ExactOutcome<T>) -> Value {
    match out {
        ExactOutcome::RankDeficient { rank, order } => json!({
            "status": "undetermined",
            "rank": rank,
            "order": order,
        }),
        ExactOutcome::Certified(c) | ExactOutcome::Rejected { certificate: Some(c) } => json!({
            "status": match (out.is_certified(), c.heuristic) {
                (true, false) => "certified",
                (true, true) => "heuristic-exact",
                (false, _) => "rejected",
            },
            "q": exact_rows(&c.q),
            "level": c.level.to_string(),
            "walk_divisor": c.walk_divisor.as_ref().map(ToString::to_string),
            "level_divides": c.level_divides(),
            "orthogonal": c.orthogonal_or_unitary,
            "conjugates": c.conjugates,
            "fixes_indicators": c.fixes_indicators,
            "heuristic": c.heuristic,
        }),
        ExactOutcome::Rejected { certificate: None } => json!({ "status": "rejected" }),
    }
}

fn constructive_section<N: ComplexField<RealField = f64> + Copy>(out: &ConstructiveOutcome<N>) -> Value {
    match out {
        ConstructiveOutcome::ClaimViolated(report) => json!({
            "status": "claim-violated",
            "claim": report,
        }),
        ConstructiveOutcome::Certified(c) | ConstructiveOutcome::ResidualFailure(c) => {
            let (re, im) = numeric_rows(&c.q);
            json!({
                "status": if out.is_certified() { "certified" } else { "residual-failure" },
                "q": re,
                "q_imag": im,
                "orthogonality_residual": c.orthogonality_residual,
                "conjugation_residual": c.conjugation_residual,
                "indicator_residual": c.indicator_residual,
                "threshold": c.threshold,
                "components": c.components,
                "warnings": c.warnings,
            })
        }
    }
}

fn reconstruct_typed<T: ExactScalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    part: &VertexPartition,
    args: &ReconstructArgs,
) -> Result<(Value, bool)>
where
    T::Numeric: ComplexField<RealField = f64> + Copy,
{
    let mut exact = None;
    if args.path != PathArg::Constructive {
        exact = Some(reconstruct_q_exact(a, b, part)?);
    }
    let rank_deficient = matches!(exact, Some(ExactOutcome::RankDeficient { .. }));
    let run_numeric = args.path != PathArg::Exact || (rank_deficient && args.fallback == FallbackArg::Constructive);
    let numeric = if run_numeric { Some(reconstruct_q_constructive(a, b, part, args.tol)?) } else { None };

    let agreement = match (&exact, &numeric) {
        (Some(ExactOutcome::Certified(c)), Some(ConstructiveOutcome::Certified(n))) => {
            Some((c.q.to_numeric() - &n.q).iter().fold(0.0f64, |m, x| m.max(x.modulus())))
        }
        _ => None,
    };
    let found = exact.as_ref().is_some_and(ExactOutcome::is_certified)
        || numeric.as_ref().is_some_and(ConstructiveOutcome::is_certified);
    let value = json!({
        "exact": exact.as_ref().map(exact_section),
        "constructive": numeric.as_ref().map(constructive_section),
        "max_entry_difference": agreement,
        "found": found,
    });
    Ok((value, found))
}

fn reconstruct(args: &ReconstructArgs) -> Result<(Value, Verdict)> {
    let (a, b) = read_pair(&args.a, &args.b)?;
    let part = args.partition.resolve(a.degree_partition())?;
    let (mut value, found) = match (&a, &b) {
        (Input::Graph(g), Input::Graph(h)) => {
            reconstruct_typed(&g.adjacency::<Rational>(), &h.adjacency::<Rational>(), &part, args)?
        }
        (Input::Digraph(g), Input::Digraph(h)) => reconstruct_typed(
            &g.hermitian_adjacency::<GaussianRational>(),
            &h.hermitian_adjacency::<GaussianRational>(),
            &part,
            args,
        )?,
        _ => unreachable!("read_pair rejects mixed inputs"),
    };
    let obj = value.as_object_mut().expect("object");
    obj.insert("command".into(), json!("reconstruct-q"));
    obj.insert("a".into(), json!(a.code()));
    obj.insert("b".into(), json!(b.code()));
    obj.insert("partition".into(), json!(part.to_string()));
    obj.insert("tol".into(), json!(args.tol));
    Ok((value, positive(found)))
}

fn snf(args: &SnfArgs) -> Result<(Value, Verdict)> {
    let text = read_text(&args.load)?;
    let m = RationalMatrix::parse_text(&text).map_err(|e| anyhow::anyhow!("{}: {e}", args.load.display()))?;
    let d = smith_normal_form(&m)?;
    let value = json!({
        "command": "snf",
        "rows": m.rows(),
        "cols": m.cols(),
        "u": integer_rows(&d.u),
        "s": integer_rows(&d.s),
        "v": integer_rows(&d.v),
        "invariant_factors": d.invariant_factors().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "rank": d.rank(),
    });
    Ok((value, Verdict::Positive))
}

fn walk_typed<T: ExactScalar>(a: &Matrix<T>, part: &VertexPartition) -> Result<Value> {
    let w = walk_matrix(a)?;
    let ext = extended_walk_matrix(a, part)?;
    Ok(json!({
        "walk_matrix": exact_rows(w.columns()),
        "walk_rank": rank(w.columns()),
        "extended_walk_matrix": exact_rows(ext.columns()),
        "extended_rank": ext.rank(),
        "full_rank": ext.has_full_row_rank(),
        "last_invariant_factor": ext.last_invariant_factor().map(|d| d.to_string()),
    }))
}

fn walk(args: &WalkArgs) -> Result<(Value, Verdict)> {
    let a = read_input(&args.a)?;
    let part = args.partition.resolve(a.degree_partition())?;
    let mut value = match &a {
        Input::Graph(g) => walk_typed(&g.adjacency::<Rational>(), &part)?,
        Input::Digraph(d) => walk_typed(&d.hermitian_adjacency::<GaussianRational>(), &part)?,
    };
    let obj = value.as_object_mut().expect("object");
    obj.insert("command".into(), json!("walk"));
    obj.insert("a".into(), json!(a.code()));
    obj.insert("order".into(), json!(a.order()));
    obj.insert("partition".into(), json!(part.to_string()));
    Ok((value, Verdict::Positive))
}

fn search(args: &SearchArgs) -> Result<(Value, Verdict)> {
    if args.relation.is_digraph_kind() {
        bail!("search covers undirected relations; use `probe` for digraphs");
    }
    let config = SearchConfig {
        n: args.n,
        source: match &args.corpus {
            Some(p) => GraphSource::Graph6File(p.clone()),
            None => GraphSource::Builtin,
        },
        relation: args.relation,
        pit: pit_options(&args.pit),
        jobs: args.jobs,
        budget: args.budget,
        non_isomorphic_only: args.non_isomorphic,
        certify: !args.no_certify,
        fallback_constructive: args.fallback == FallbackArg::Constructive,
        tol: args.tol,
    };
    let report = bucket_and_match(&config)?;
    if let Some(path) = &args.csv {
        std::fs::write(path, report.to_csv()).map_err(|e| anyhow::anyhow!("writing {}: {e}", path.display()))?;
    }
    let verdict = if report.contradictions.is_empty() { Verdict::Positive } else { Verdict::Contradiction };
    let mut value = serde_json::to_value(&report)?;
    value.as_object_mut().expect("object").insert("command".into(), json!("search"));
    Ok((value, verdict))
}

fn probe(args: &ProbeArgs) -> Result<(Value, Verdict)> {
    let config = ProbeConfig {
        n: args.n,
        seed: args.seed,
        budget: args.budget,
        pair_budget: args.pair_budget,
        pit: PitOptions { mode: args.mode.into(), trials: args.trials, seed: args.seed, ..PitOptions::default() },
        tol: args.tol,
        jobs: args.jobs,
        ..ProbeConfig::new(args.n, args.seed)
    };
    let report = digraph_offdiagonal_probe(&config)?;
    let mut value = serde_json::to_value(&report)?;
    value.as_object_mut().expect("object").insert("command".into(), json!("probe"));
    Ok((value, Verdict::Positive))
}

fn theorem(args: &TheoremArgs) -> Result<(Value, Verdict)> {
    let config = TheoremConfig {
        n: args.n,
        pit: PitOptions { mode: args.mode.into(), trials: args.trials, seed: args.seed, ..PitOptions::default() },
        pair_budget: args.budget,
        cross_partition: !args.no_cross && args.n <= 5,
        tol: args.tol,
        jobs: args.jobs,
    };
    let report = verify_theorem_equivalence(&config)?;
    let verdict = if report.contradictions.is_empty() { Verdict::Positive } else { Verdict::Contradiction };
    let mut value = serde_json::to_value(&report)?;
    value.as_object_mut().expect("object").insert("command".into(), json!("verify-theorem"));
    Ok((value, verdict))
}
