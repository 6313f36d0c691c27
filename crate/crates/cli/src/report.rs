use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use seqwit::resource::{ComparisonRow, ComparisonTables, PaperRounded};
use seqwit::sequential::StageKind;
use seqwit::{StateFamily, WitnessOperator};

use crate::{usage, CliError, ObserverCount, OutputFormat, RunConfig};

/// `x` rounded to `digits` significant digits.
pub fn significant(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let r: f64 = format!("{:.*e}", digits.saturating_sub(1), x).parse().expect("float literal");
    // avoid printing -0
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

struct Fmt(usize);

impl Fmt {
    fn num(&self, x: f64) -> Value {
        let r = significant(x, self.0);
        if r.is_finite() {
            json!(r)
        } else {
            Value::String(if r > 0.0 { "inf".into() } else { "-inf".into() })
        }
    }

    fn text(&self, x: f64) -> String {
        let r = significant(x, self.0);
        if r.is_finite() {
            r.to_string()
        } else if r > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    }
}

fn write_json(value: &Value, out: &mut dyn Write) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn state_json(f: &Fmt, family: &StateFamily) -> Value {
    let mut m = Map::new();
    m.insert("name".into(), json!(family.name()));
    match *family {
        StateFamily::BellPsiPlus => {}
        StateFamily::Werner { p } | StateFamily::ColoredNoise { p } => {
            m.insert("p".into(), f.num(p));
        }
        StateFamily::PureNonMax { theta } => {
            m.insert("theta".into(), f.num(theta));
        }
    }
    Value::Object(m)
}

fn kind_name(k: StageKind) -> &'static str {
    match k {
        StageKind::TwoSided => "two_sided",
        StageKind::OneSided => "one_sided",
    }
}

pub(crate) fn max_observers(config: &RunConfig, count: &ObserverCount, out: &mut dyn Write) -> Result<(), CliError> {
    let f = Fmt(config.precision_digits);
    let chain = &count.chain;
    let stages: Vec<_> = chain
        .schedule
        .stages()
        .iter()
        .zip(&chain.kinds)
        .zip(&chain.thresholds)
        .collect();
    let last = *chain.thresholds.last().expect("chain visits at least one stage");
    match config.output_format {
        OutputFormat::Json => {
            let policy = config.policy(if count.engine == "symmetric" {
                seqwit::EpsilonPolicy::symmetric_default()
            } else {
                seqwit::EpsilonPolicy::asymmetric_default()
            });
            let rows: Vec<Value> = stages
                .iter()
                .map(|((&(xi, lambda), kind), &t)| {
                    json!({
                        "kind": kind_name(**kind),
                        "xi": f.num(xi),
                        "lambda": f.num(lambda),
                        "threshold": f.num(t),
                    })
                })
                .collect();
            let v = json!({
                "state": state_json(&f, &config.scenario.family),
                "alices": config.scenario.alices,
                "bobs": config.scenario.bobs,
                "engine": count.engine,
                "policy": {
                    "epsilon1": f.num(policy.first_stage_slack),
                    "epsilon": f.num(policy.later_stage_slack),
                    "paper_rounding": policy.paper_rounding,
                },
                "bound": count.bound,
                "alices_detected": count.alices_detected,
                "bobs_detected": count.bobs_detected,
                "stages": rows,
                "final_threshold": f.num(last),
            });
            write_json(&v, out)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["stage", "kind", "xi", "lambda", "threshold"])?;
            for (i, ((&(xi, lambda), kind), &t)) in stages.iter().enumerate() {
                w.write_record([
                    (i + 1).to_string(),
                    kind_name(**kind).to_string(),
                    f.text(xi),
                    f.text(lambda),
                    f.text(t),
                ])?;
            }
            w.write_record([
                (stages.len() + 1).to_string(),
                "none".into(),
                String::new(),
                String::new(),
                f.text(last),
            ])?;
            w.flush()?;
            Ok(())
        }
        OutputFormat::Text => {
            writeln!(out, "state            {}", config.scenario.family)?;
            writeln!(out, "engine           {}", count.engine)?;
            writeln!(out, "bound            {}", count.bound)?;
            writeln!(out, "alices detected  {} of {}", count.alices_detected, config.scenario.alices)?;
            writeln!(out, "bobs detected    {} of {}", count.bobs_detected, config.scenario.bobs)?;
            writeln!(out)?;
            writeln!(out, "{:>5}  {:<9}  {:>12}  {:>12}  {:>12}", "stage", "kind", "xi", "lambda", "threshold")?;
            for (i, ((&(xi, lambda), kind), &t)) in stages.iter().enumerate() {
                writeln!(
                    out,
                    "{:>5}  {:<9}  {:>12}  {:>12}  {:>12}",
                    i + 1,
                    kind_name(**kind),
                    f.text(xi),
                    f.text(lambda),
                    f.text(t)
                )?;
            }
            writeln!(out, "{:>5}  {:<9}  {:>12}  {:>12}  {:>12}", stages.len() + 1, "none", "", "", f.text(last))?;
            Ok(())
        }
    }
}

fn paper_json(f: &Fmt, p: &PaperRounded) -> Value {
    let mut m = Map::new();
    m.insert("parameter".into(), f.num(p.parameter));
    m.insert("detectability".into(), f.num(p.detectability));
    m.insert("total_rom".into(), f.num(p.total_rom));
    m.insert("eta_ebits".into(), f.num(p.entanglement_budget));
    if let Some(c) = p.constraint {
        m.insert("constraint".into(), f.num(c));
    }
    Value::Object(m)
}

fn row_json(f: &Fmt, row: &ComparisonRow) -> Value {
    let mut m = Map::new();
    m.insert("family".into(), json!(row.family.name()));
    m.insert("mode".into(), json!(row.mode));
    m.insert("detectability".into(), f.num(row.detectability));
    m.insert("total_rom".into(), f.num(row.total_rom));
    m.insert("eta_ebits".into(), f.num(row.entanglement_budget));
    m.insert("parameter".into(), f.num(row.parameter));
    if let Some(c) = row.constraint {
        m.insert("constraint".into(), f.num(c));
    }
    if let Some(c) = row.asymmetric_check {
        m.insert("asymmetric_check".into(), f.num(c));
    }
    if let Some(p) = &row.paper {
        m.insert("paper".into(), paper_json(f, p));
    }
    Value::Object(m)
}

struct FlatRow {
    table: u8,
    family: &'static str,
    values: [f64; 3],
    paper: Option<[f64; 3]>,
}

fn flat_rows(tables: &ComparisonTables, table: Option<u8>) -> Vec<FlatRow> {
    let seq = &tables.sequential;
    let seq_paper = seq
        .paper
        .as_ref()
        .map(|p| [p.detectability, p.total_rom, p.entanglement_budget]);
    let mut rows = Vec::new();
    for (n, list) in [(1u8, &tables.table1), (2u8, &tables.table2)] {
        if table.is_some_and(|t| t != n) {
            continue;
        }
        rows.push(FlatRow {
            table: n,
            family: "sequential",
            values: [seq.detectability, seq.total_rom, seq.entanglement_budget],
            paper: seq_paper,
        });
        for r in list {
            rows.push(FlatRow {
                table: n,
                family: r.family.name(),
                values: [r.detectability, r.total_rom, r.entanglement_budget],
                paper: r
                    .paper
                    .as_ref()
                    .map(|p| [p.detectability, p.total_rom, p.entanglement_budget]),
            });
        }
    }
    rows
}

pub(crate) fn compare(
    config: &RunConfig,
    tables: &ComparisonTables,
    table: Option<u8>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let f = Fmt(config.precision_digits);
    let paper = config.paper_rounding;
    match config.output_format {
        OutputFormat::Json => {
            let seq = &tables.sequential;
            let mut s = Map::new();
            s.insert("detectability".into(), f.num(seq.detectability));
            s.insert("rom".into(), f.num(seq.total_rom));
            s.insert("eta_ebits".into(), f.num(seq.entanglement_budget));
            s.insert("per_stage".into(), json!(seq.per_stage.iter().map(|x| f.num(*x)).collect::<Vec<_>>()));
            s.insert("schedule".into(), json!(seq.schedule.iter().map(|x| f.num(*x)).collect::<Vec<_>>()));
            if let Some(p) = &seq.paper {
                let mut pm = Map::new();
                pm.insert("detectability".into(), f.num(p.detectability));
                pm.insert("rom".into(), f.num(p.total_rom));
                pm.insert("eta_ebits".into(), f.num(p.entanglement_budget));
                s.insert("paper".into(), Value::Object(pm));
            }
            let mut top = Map::new();
            top.insert("sequential".into(), Value::Object(s));
            if table != Some(2) {
                top.insert("table1".into(), json!(tables.table1.iter().map(|r| row_json(&f, r)).collect::<Vec<_>>()));
            }
            if table != Some(1) {
                top.insert("table2".into(), json!(tables.table2.iter().map(|r| row_json(&f, r)).collect::<Vec<_>>()));
            }
            write_json(&Value::Object(top), out)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut header = Vec::new();
            if table.is_none() {
                header.push("table");
            }
            header.extend(["family", "detectability", "total_rom", "eta_ebits"]);
            if paper {
                header.extend(["paper_detectability", "paper_total_rom", "paper_eta_ebits"]);
            }
            w.write_record(&header)?;
            for row in flat_rows(tables, table) {
                let mut rec = Vec::new();
                if table.is_none() {
                    rec.push(row.table.to_string());
                }
                rec.push(row.family.to_string());
                rec.extend(row.values.iter().map(|x| f.text(*x)));
                if paper {
                    let p = row.paper.expect("paper columns computed");
                    rec.extend(p.iter().map(|x| f.text(*x)));
                }
                w.write_record(&rec)?;
            }
            w.flush()?;
            Ok(())
        }
        OutputFormat::Text => {
            let rows = flat_rows(tables, table);
            let mut current = 0;
            for row in rows {
                if row.table != current {
                    if current != 0 {
                        writeln!(out)?;
                    }
                    current = row.table;
                    writeln!(out, "table {current}")?;
                    write!(out, "{:<12}{:>14}{:>14}{:>14}", "family", "D", "RoM", "eta")?;
                    if paper {
                        write!(out, "{:>10}{:>10}{:>10}", "D*", "RoM*", "eta*")?;
                    }
                    writeln!(out)?;
                }
                write!(out, "{:<12}", row.family)?;
                for x in row.values {
                    write!(out, "{:>14}", f.text(x))?;
                }
                if let Some(p) = row.paper.filter(|_| paper) {
                    for x in p {
                        write!(out, "{:>10}", x)?;
                    }
                }
                writeln!(out)?;
            }
            if paper {
                writeln!(out)?;
                writeln!(out, "* recomputed from two-decimal intermediates")?;
            }
            Ok(())
        }
    }
}

pub(crate) struct WitnessEval {
    pub family: StateFamily,
    pub xi: f64,
    pub lambda: f64,
    pub expectation: f64,
    pub floor: Option<(usize, f64)>,
}

pub(crate) fn evaluate_witness(config: &RunConfig, samples: Option<usize>) -> Result<WitnessEval, CliError> {
    let family = config.scenario.family;
    let rho = family.build().map_err(usage)?;
    let w = WitnessOperator::for_family(&family)
        .modulate(config.xi, config.lambda)
        .map_err(usage)?;
    let expectation = w.expectation(&rho)?;
    let floor = match samples {
        Some(0) => return Err(usage("--samples must be positive")),
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            Some((n, w.separability_floor(n, &mut rng)))
        }
        None => None,
    };
    Ok(WitnessEval {
        family,
        xi: config.xi,
        lambda: config.lambda,
        expectation,
        floor,
    })
}

pub(crate) fn witness_eval(config: &RunConfig, eval: &WitnessEval, out: &mut dyn Write) -> Result<(), CliError> {
    let f = Fmt(config.precision_digits);
    let parameter = eval.family.parameter();
    match config.output_format {
        OutputFormat::Json => {
            let mut m = Map::new();
            m.insert("state".into(), state_json(&f, &eval.family));
            m.insert("xi".into(), f.num(eval.xi));
            m.insert("lambda".into(), f.num(eval.lambda));
            m.insert("expectation".into(), f.num(eval.expectation));
            if let Some((n, floor)) = eval.floor {
                m.insert("samples".into(), json!(n));
                m.insert("seed".into(), json!(config.seed));
                m.insert("separability_floor".into(), f.num(floor));
            }
            write_json(&Value::Object(m), out)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let mut header = vec!["state", "parameter", "xi", "lambda", "expectation"];
            if eval.floor.is_some() {
                header.push("separability_floor");
            }
            w.write_record(&header)?;
            let mut rec = vec![
                eval.family.name().to_string(),
                parameter.map(|x| f.text(x)).unwrap_or_default(),
                f.text(eval.xi),
                f.text(eval.lambda),
                f.text(eval.expectation),
            ];
            if let Some((_, floor)) = eval.floor {
                rec.push(f.text(floor));
            }
            w.write_record(&rec)?;
            w.flush()?;
            Ok(())
        }
        OutputFormat::Text => {
            writeln!(out, "{}", f.text(eval.expectation))?;
            if let Some((n, floor)) = eval.floor {
                writeln!(out, "separability floor {} over {n} product states", f.text(floor))?;
            }
            Ok(())
        }
    }
}
