use std::fs::File;
use std::io::Write;
use std::path::Path;

use gmhd_core::checker::{check_hypotheses, check_special_cases, ConditionReport, SpecialCaseReport, TheoremInstance};
use serde::Serialize;

use crate::config::{self, CheckConfig, InstanceSection, SpecialSection, SweepSection};
use crate::error::CliError;
use crate::{Common, Verdict};

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
enum Report {
    Instance(ConditionReport),
    Special(SpecialCaseReport),
}

impl Report {
    fn feasible(&self) -> bool {
        match self {
            Report::Instance(r) => r.feasible,
            Report::Special(r) => r.feasible_with_preconditions,
        }
    }

    fn inner(&self) -> &ConditionReport {
        match self {
            Report::Instance(r) => r,
            Report::Special(r) => &r.report,
        }
    }
}

enum Subject {
    Instance(InstanceSection),
    Special(SpecialSection),
}

impl Subject {
    fn from_config(cfg: &CheckConfig) -> Result<Self, CliError> {
        match (&cfg.instance, &cfg.special) {
            (Some(i), None) => Ok(Subject::Instance(i.clone())),
            (None, Some(s)) => Ok(Subject::Special(s.clone())),
            (Some(_), Some(_)) => Err(CliError::config("give either [instance] or [special], not both")),
            (None, None) => Err(CliError::config("missing [instance] or [special] section")),
        }
    }

    fn evaluate(&self) -> Result<Report, CliError> {
        match self {
            Subject::Instance(s) => {
                let inst = TheoremInstance::from(s);
                inst.validate()?;
                Ok(Report::Instance(check_hypotheses(&inst)))
            }
            Subject::Special(s) => {
                let params = s.params();
                params.to_instance(s.kind).validate()?;
                Ok(Report::Special(check_special_cases(s.kind, &params)))
            }
        }
    }

    fn set(&mut self, name: &str, value: f64) -> Result<(), CliError> {
        let slot = match self {
            Subject::Instance(s) => match name {
                "r0" => &mut s.r0,
                "r1" => &mut s.r1,
                "r2" => &mut s.r2,
                "p0" => &mut s.p0,
                "p1" => &mut s.p1,
                "p2" => &mut s.p2,
                "gamma1" => &mut s.gamma1,
                "gamma2" => &mut s.gamma2,
                "gamma3" => &mut s.gamma3,
                "epsilon" => &mut s.epsilon,
                _ => return Err(CliError::config(format!("cannot sweep '{name}' of an [instance]"))),
            },
            Subject::Special(s) => match name {
                "p" => &mut s.p,
                "q" => &mut s.q,
                "gamma1" => &mut s.gamma1,
                "gamma2" => &mut s.gamma2,
                "gamma3" => &mut s.gamma3,
                "epsilon" => &mut s.epsilon,
                _ => return Err(CliError::config(format!("cannot sweep '{name}' of a [special] case"))),
            },
        };
        *slot = value;
        Ok(())
    }
}

fn summarize(report: &Report) -> String {
    let inner = report.inner();
    let mut text = String::new();
    if let Report::Special(s) = report {
        text += &format!(
            "{}: preconditions {}, closed form min_gamma1 = {:.12}, min_gamma2 = {:.12} (agrees: {})\n",
            s.kind,
            if s.preconditions_hold { "hold" } else { "violated" },
            s.closed_form_min_gamma1,
            s.closed_form_min_gamma2,
            s.closed_form_agrees
        );
        for c in s.preconditions.iter().filter(|c| !c.satisfied) {
            text += &format!("  precondition {} violated: {} {} {}\n", c.name, c.lhs, c.relation.symbol(), c.rhs);
        }
    }
    for c in &inner.conditions {
        text += &format!(
            "  [{}] {:<34} {:>14.9} {} {:<14.9}\n",
            if c.satisfied { "ok" } else { "NO" },
            c.name,
            c.lhs,
            c.relation.symbol(),
            c.rhs
        );
    }
    text += &format!("min_gamma1 = {:.12}\nmin_gamma2 = {:.12}\n", inner.min_gamma1, inner.min_gamma2);
    for w in &inner.warnings {
        text += &format!("warning: {w}\n");
    }
    text += if report.feasible() { "FEASIBLE\n" } else { "INFEASIBLE\n" };
    text
}

fn write_json(dir: &Path, name: &str, value: &impl Serialize) -> Result<(), CliError> {
    let dir = config::ensure_dir(dir)?;
    let mut f = File::create(dir.join(name))?;
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    Ok(())
}

pub fn run_check(args: &Common) -> Result<Verdict, CliError> {
    let cfg: CheckConfig = config::load(&args.config)?;
    if cfg.sweep.is_some() {
        return sweep(args, &cfg);
    }
    let report = Subject::from_config(&cfg)?.evaluate()?;
    if let Some(dir) = &args.out {
        write_json(dir, "report.json", &report)?;
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", summarize(&report));
    }
    Ok(Verdict::from_bool(report.feasible()))
}

pub fn run_sweep(args: &Common) -> Result<Verdict, CliError> {
    let cfg: CheckConfig = config::load(&args.config)?;
    sweep(args, &cfg)
}

/// Grid values `start + i·step` (up to rounding) for `i = 0..=round((stop - start)/step)`.
pub fn sweep_values(s: &SweepSection) -> Result<Vec<f64>, CliError> {
    let finite = s.start.is_finite() && s.stop.is_finite() && s.step.is_finite();
    if !(finite && s.step > 0.0 && s.stop >= s.start) {
        return Err(CliError::config(format!(
            "sweep needs finite start <= stop and step > 0, got start={}, stop={}, step={}",
            s.start, s.stop, s.step
        )));
    }
    let count = ((s.stop - s.start) / s.step).round() as usize + 1;
    if count > 1_000_000 {
        return Err(CliError::config(format!("sweep of {count} points is too large")));
    }
    if count == 1 {
        return Ok(vec![s.start]);
    }
    // interpolating from both ends keeps decimal grids such as 0.1-steps exact
    let last = s.start + (count - 1) as f64 * s.step;
    Ok((0..count)
        .map(|i| s.start + (last - s.start) * i as f64 / (count - 1) as f64)
        .collect())
}

#[derive(Serialize)]
struct SweepRow<'a> {
    parameter: &'a str,
    value: f64,
    feasible: bool,
    min_gamma1: f64,
    min_gamma2: f64,
    violated: String,
}

fn sweep(args: &Common, cfg: &CheckConfig) -> Result<Verdict, CliError> {
    let spec = cfg.sweep.as_ref().ok_or_else(|| CliError::config("missing [sweep] section"))?;
    let mut subject = Subject::from_config(cfg)?;
    let mut reports = Vec::new();
    for value in sweep_values(spec)? {
        subject.set(&spec.parameter, value)?;
        reports.push((value, subject.evaluate()?));
    }
    let rows: Vec<SweepRow> = reports
        .iter()
        .map(|(value, r)| SweepRow {
            parameter: &spec.parameter,
            value: *value,
            feasible: r.feasible(),
            min_gamma1: r.inner().min_gamma1,
            min_gamma2: r.inner().min_gamma2,
            violated: r.inner().violated().map(|c| c.name.as_str()).collect::<Vec<_>>().join(";"),
        })
        .collect();
    let all: Vec<&Report> = reports.iter().map(|(_, r)| r).collect();
    if let Some(dir) = &args.out {
        let dir = config::ensure_dir(dir)?;
        let mut w = csv_writer(&dir.join("sweep.csv"))?;
        for row in &rows {
            w.serialize(row).map_err(|e| CliError::Io(e.to_string()))?;
        }
        w.flush()?;
        write_json(&dir, "sweep.json", &all)?;
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&all)?);
    } else {
        for row in &rows {
            println!(
                "{} = {:<12} {:<10} min_gamma1 = {:.9} min_gamma2 = {:.9}{}",
                row.parameter,
                row.value,
                if row.feasible { "feasible" } else { "infeasible" },
                row.min_gamma1,
                row.min_gamma2,
                if row.violated.is_empty() { String::new() } else { format!("  violated: {}", row.violated) }
            );
        }
        println!("{} reports, {} feasible", rows.len(), rows.iter().filter(|r| r.feasible).count());
    }
    Ok(Verdict::from_bool(rows.iter().all(|r| r.feasible)))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>, CliError> {
    Ok(csv::Writer::from_writer(File::create(path)?))
}
