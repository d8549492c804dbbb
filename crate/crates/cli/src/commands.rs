use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde_json::json;
use trace_relations::evaluation::evaluate_basis_row;
use trace_relations::montecarlo::{basis_for, rank_of, stream, verify_against_basis, StreamPurpose};
use trace_relations::symmetrizer::symmetrizer_relation_space_with_progress;
use trace_relations::{
    find_relations, rel_dimension_table, Limits, MatrixSample, RelationSet, RelationVector, SamplerConfig,
};

use crate::{Cli, CliError, Command, Format, GlobalArgs, MethodArg};

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    let mut limits = Limits::from_env()?;
    if g.allow_long {
        limits = limits.allow_long();
    }
    match &cli.command {
        Command::Enumerate { d, evaluate } => enumerate(g, &limits, *d, evaluate.as_deref()),
        Command::Relations { n, d, method } => relations(g, &limits, *n, *d, *method),
        Command::Dims {
            max_d,
            max_n,
            compute_stable,
        } => dims(g, &limits, *max_d, *max_n, *compute_stable),
        Command::Verify { file } => verify(g, file),
        Command::Bench { n, d } => bench(g, &limits, *n, *d),
    }
}

fn sampler(g: &GlobalArgs) -> Result<SamplerConfig> {
    let config = SamplerConfig {
        seed: g.seed.unwrap_or_else(rand::random),
        entry_bound: g.entry_bound,
        oversample: g.oversample,
        verify_trials: g.verify_trials,
        mode: g.mode.into(),
        float_tolerance: g.float_tolerance,
    };
    config.validate()?;
    Ok(config)
}

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(CliError::Usage(format!("--{name} must be positive")));
    }
    Ok(())
}

fn emit(g: &GlobalArgs, text: &str) -> Result<()> {
    match &g.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn config_line(c: &SamplerConfig) -> String {
    format!(
        "seed={} entry_bound={} oversample={} verify_trials={} mode={}",
        c.seed, c.entry_bound, c.oversample, c.verify_trials, c.mode
    )
}

fn config_json(c: &SamplerConfig) -> serde_json::Value {
    json!({
        "seed": c.seed,
        "entry_bound": c.entry_bound,
        "oversample": c.oversample,
        "verify_trials": c.verify_trials,
        "mode": c.mode,
    })
}

fn to_pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn enumerate(g: &GlobalArgs, limits: &Limits, d: usize, matrix: Option<&std::path::Path>) -> Result<()> {
    positive("d", d)?;
    let basis = basis_for(d, limits)?;
    let values = match matrix {
        Some(path) => {
            let x = MatrixSample::from_json(&std::fs::read_to_string(path)?)?;
            Some(evaluate_basis_row(&basis, &x)?)
        }
        None => None,
    };
    let ids: Vec<String> = basis.iter().map(|m| m.class_id().as_str().to_owned()).collect();
    let text = match g.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut out = String::new();
            for (i, id) in ids.iter().enumerate() {
                match &values {
                    Some(v) => writeln!(out, "{id}\t{}", v[i]),
                    None => writeln!(out, "{id}"),
                }
                .expect("write to string");
            }
            out
        }
        Format::Csv => {
            let mut out = String::from(if values.is_some() {
                "index,class_id,value\n"
            } else {
                "index,class_id\n"
            });
            for (i, id) in ids.iter().enumerate() {
                match &values {
                    Some(v) => writeln!(out, "{i},{id},{}", v[i]),
                    None => writeln!(out, "{i},{id}"),
                }
                .expect("write to string");
            }
            out
        }
        Format::Json => {
            let mut v = json!({ "d": d, "k": basis.len(), "basis": ids });
            if let Some(values) = &values {
                v["values"] = json!(values.iter().map(|x| x.to_string()).collect::<Vec<_>>());
            }
            to_pretty(&v)
        }
    };
    eprintln!("degree {d}: k = {}", basis.len());
    emit(g, &text)
}

fn symmetrizer_set(limits: &Limits, n: usize, d: usize) -> Result<RelationSet> {
    if d != n + 1 {
        return Err(CliError::Usage(format!(
            "the symmetrizer method needs d = n + 1 (got n = {n}, d = {d})"
        )));
    }
    let long = n >= 4;
    let start = Instant::now();
    let set = symmetrizer_relation_space_with_progress(n, limits, &mut |done, total| {
        if long {
            eprintln!(
                "symmetrizer: tableau {done}/{total} ({:.1}s)",
                start.elapsed().as_secs_f64()
            );
        }
    })?;
    Ok(set)
}

fn relations(g: &GlobalArgs, limits: &Limits, n: usize, d: usize, method: MethodArg) -> Result<()> {
    positive("n", n)?;
    positive("d", d)?;
    let start = Instant::now();
    let set = match method {
        MethodArg::Montecarlo => find_relations(n, d, &sampler(g)?, limits)?,
        MethodArg::Symmetrizer => symmetrizer_set(limits, n, d)?,
    };
    let elapsed = start.elapsed();
    let text = match g.format.unwrap_or(Format::Json) {
        Format::Json => set.to_json(),
        Format::Text => {
            let mut out = String::new();
            for r in &set.relations {
                writeln!(out, "{} = 0", r.render(&set.basis)).expect("write to string");
            }
            out
        }
        Format::Csv => {
            let ids: Vec<String> = set.basis.iter().map(|m| m.class_id().as_str().to_owned()).collect();
            let mut out = ids.join(",") + "\n";
            for r in &set.relations {
                let row: Vec<String> = r.coeffs().iter().map(|c| c.to_string()).collect();
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
    };
    let mut summary = format!(
        "n={} d={} k={} rank={} relations={} method={} time={:.3}s",
        set.n,
        set.d,
        set.k(),
        set.rank(),
        set.relations.len(),
        set.method,
        elapsed.as_secs_f64()
    );
    if let Some(c) = &set.config {
        summary.push(' ');
        summary.push_str(&config_line(c));
    }
    if let Some(b) = set.final_entry_bound {
        write!(summary, " escalated_entry_bound={b}").expect("write to string");
    }
    eprintln!("{summary}");
    emit(g, &text)
}

fn dims(g: &GlobalArgs, limits: &Limits, max_d: usize, max_n: usize, compute_stable: bool) -> Result<()> {
    positive("max-d", max_d)?;
    positive("max-n", max_n)?;
    let config = sampler(g)?;
    let start = Instant::now();
    let records = rel_dimension_table(max_d, max_n, &config, limits, compute_stable)?;
    let cell = |d: usize, n: usize| {
        records
            .iter()
            .find(|r| r.d == d && r.n == n)
            .expect("table covers every cell")
    };
    let text = match g.format.unwrap_or(Format::Text) {
        Format::Text => {
            let width = records
                .iter()
                .map(|r| r.rel_dim.to_string().len())
                .max()
                .unwrap_or(1)
                .max(max_n.to_string().len())
                + 2;
            let mut out = format!("# {}\n", config_line(&config));
            write!(out, "{:<5}", "d\\n").expect("write to string");
            for n in 1..=max_n {
                write!(out, "{n:>width$}").expect("write to string");
            }
            out.push('\n');
            for d in 1..=max_d {
                write!(out, "{d:<5}").expect("write to string");
                for n in 1..=max_n {
                    write!(out, "{:>width$}", cell(d, n).rel_dim).expect("write to string");
                }
                out.push('\n');
            }
            out
        }
        Format::Csv => {
            let mut out = format!("# {}\nd,n,k,rel_dim\n", config_line(&config));
            for r in &records {
                writeln!(out, "{},{},{},{}", r.d, r.n, r.k, r.rel_dim).expect("write to string");
            }
            out
        }
        Format::Json => to_pretty(&json!({
            "max_d": max_d,
            "max_n": max_n,
            "compute_stable": compute_stable,
            "config": config_json(&config),
            "records": records,
        })),
    };
    eprintln!("dims: {max_d} x {max_n} cells in {:.3}s", start.elapsed().as_secs_f64());
    emit(g, &text)
}

fn verify(g: &GlobalArgs, file: &std::path::Path) -> Result<()> {
    let set = RelationSet::from_json(&std::fs::read_to_string(file)?)?;
    if set.n == 0 {
        return Err(CliError::Usage("relation file has n = 0".into()));
    }
    let seed = g.seed.unwrap_or_else(rand::random);
    let bound = set.config.as_ref().map_or(g.entry_bound, |c| c.entry_bound);
    let trials = g.verify_trials;
    if trials == 0 {
        return Err(CliError::Usage("--verify-trials must be positive".into()));
    }
    let mut rng = stream(seed, StreamPurpose::Verification, 0, 0);
    let passed = verify_against_basis(&set.basis, &set.relations, set.n, trials, bound, &mut rng)?;
    let refs: Vec<&RelationVector> = set.relations.iter().collect();
    let independent = rank_of(&refs) == set.relations.len();
    let failures = passed.iter().filter(|ok| !**ok).count();
    let text = match g.format.unwrap_or(Format::Text) {
        Format::Json => to_pretty(&json!({
            "file": file.display().to_string(),
            "n": set.n,
            "d": set.d,
            "seed": seed,
            "entry_bound": bound,
            "trials": trials,
            "independent": independent,
            "results": passed,
        })),
        Format::Csv => {
            let mut out = String::from("relation,result\n");
            for (i, ok) in passed.iter().enumerate() {
                writeln!(out, "{},{}", i + 1, if *ok { "pass" } else { "fail" }).expect("write to string");
            }
            out
        }
        Format::Text => {
            let mut out = format!("# seed={seed} entry_bound={bound} trials={trials}\n");
            for (i, (ok, r)) in passed.iter().zip(&set.relations).enumerate() {
                writeln!(
                    out,
                    "relation {}: {}  {}",
                    i + 1,
                    if *ok { "pass" } else { "FAIL" },
                    r.render(&set.basis)
                )
                .expect("write to string");
            }
            writeln!(out, "independent: {}", if independent { "yes" } else { "NO" }).expect("write to string");
            out
        }
    };
    if set.relations.is_empty() {
        eprintln!("warning: {} contains no relations", file.display());
    }
    emit(g, &text)?;
    if failures > 0 {
        return Err(CliError::Certification(format!(
            "{failures} of {} relations did not vanish",
            passed.len()
        )));
    }
    if !independent {
        return Err(CliError::Certification("relations are linearly dependent".into()));
    }
    Ok(())
}

enum BenchOutcome {
    Done { relations: usize, time: Duration },
    Skipped(String),
}

fn bench(g: &GlobalArgs, limits: &Limits, n: usize, d: usize) -> Result<()> {
    positive("n", n)?;
    positive("d", d)?;
    let config = sampler(g)?;
    let start = Instant::now();
    let mc = find_relations(n, d, &config, limits)?;
    let mc = BenchOutcome::Done {
        relations: mc.relations.len(),
        time: start.elapsed(),
    };
    let ys = if d != n + 1 {
        BenchOutcome::Skipped("needs d = n + 1".into())
    } else {
        let start = Instant::now();
        match symmetrizer_set(limits, n, d) {
            Ok(set) => BenchOutcome::Done {
                relations: set.relations.len(),
                time: start.elapsed(),
            },
            Err(CliError::Library(e @ trace_relations::Error::ResourceCap { .. })) => {
                BenchOutcome::Skipped(format!("refused: {e}; pass --allow-long"))
            }
            Err(e) => return Err(e),
        }
    };
    let rows = [("montecarlo", &mc), ("symmetrizer", &ys)];
    let text = match g.format.unwrap_or(Format::Text) {
        Format::Json => {
            let entry = |o: &BenchOutcome| match o {
                BenchOutcome::Done { relations, time } => {
                    json!({ "relations": relations, "seconds": time.as_secs_f64() })
                }
                BenchOutcome::Skipped(why) => json!({ "skipped": why }),
            };
            to_pretty(&json!({
                "n": n,
                "d": d,
                "config": config_json(&config),
                "montecarlo": entry(&mc),
                "symmetrizer": entry(&ys),
            }))
        }
        Format::Csv => {
            let mut out = String::from("method,relations,seconds\n");
            for (name, o) in rows {
                match o {
                    BenchOutcome::Done { relations, time } => {
                        writeln!(out, "{name},{relations},{:.6}", time.as_secs_f64())
                    }
                    BenchOutcome::Skipped(_) => writeln!(out, "{name},,"),
                }
                .expect("write to string");
            }
            out
        }
        Format::Text => {
            let mut out = format!("# n={n} d={d} {}\n", config_line(&config));
            for (name, o) in rows {
                match o {
                    BenchOutcome::Done { relations, time } => {
                        writeln!(
                            out,
                            "{name:<12} relations={relations:<4} time={:.3}s",
                            time.as_secs_f64()
                        )
                    }
                    BenchOutcome::Skipped(why) => writeln!(out, "{name:<12} skipped ({why})"),
                }
                .expect("write to string");
            }
            out
        }
    };
    emit(g, &text)
}
