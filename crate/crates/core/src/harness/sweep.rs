use super::config::{CharFilter, SweepConfig};
use crate::bounds::{bound_report, proof_replay, BoundBreakdown, BoundReport};
use crate::characters::{CharacterGroup, DirichletCharacter};
use crate::error::{Error, Result};
use crate::lfunc::{HurwitzTable, LValue};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;

/// Outcome of one `(q, χ, t)` cell.
#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub q: u64,
    pub chi_index: u64,
    pub t: f64,
    pub report: Option<BoundReport>,
    pub replay: Option<BoundBreakdown>,
    /// `|L| + err <= replay total`; fatal when false.
    pub replay_dominates: Option<bool>,
    pub error: Option<String>,
}

impl Cell {
    /// Passes when every selected inequality holds and nothing errored.
    /// A replay total above the closed form is a finding, not a failure.
    pub fn pass(&self) -> bool {
        self.error.is_none()
            && self.report.as_ref().is_some_and(|r| r.pass)
            && self.replay_dominates != Some(false)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct FamilySummary {
    pub checked: usize,
    pub violations: usize,
    /// `min (bound - (|L| + err))`.
    pub min_margin: Option<f64>,
    pub min_margin_at: Option<(u64, u64, f64)>,
}

impl FamilySummary {
    fn record(&mut self, margin: f64, at: (u64, u64, f64)) {
        self.checked += 1;
        if margin < 0.0 {
            self.violations += 1;
        }
        if self.min_margin.is_none_or(|m| margin < m) {
            self.min_margin = Some(margin);
            self.min_margin_at = Some(at);
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary {
    pub config: SweepConfig,
    pub cells: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: Vec<String>,
    pub families: BTreeMap<String, FamilySummary>,
    /// Replay cells whose total exceeds the closed form.
    pub replay_findings: Vec<(u64, u64, f64, f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepOutcome {
    pub cells: Vec<Cell>,
    pub summary: SweepSummary,
}

impl SweepOutcome {
    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            2
        }
    }
}

fn select(group: &std::sync::Arc<CharacterGroup>, filter: CharFilter) -> Vec<DirichletCharacter> {
    group
        .characters()
        .into_iter()
        .filter(|c| match filter {
            CharFilter::All => true,
            CharFilter::Primitive => c.is_primitive(),
            CharFilter::Principal => c.is_principal(),
        })
        .collect()
}

fn evaluate(
    table: &Result<HurwitzTable>,
    chi: &DirichletCharacter,
    t: f64,
    cfg: &SweepConfig,
) -> Cell {
    let mut cell = Cell {
        q: chi.modulus(),
        chi_index: chi.index(),
        t,
        report: None,
        replay: None,
        replay_dominates: None,
        error: None,
    };
    let l: LValue = match table {
        Ok(tab) => match tab.l_value(chi, cfg.eps) {
            Ok(l) => l,
            Err(e) => {
                cell.error = Some(e.to_string());
                return cell;
            }
        },
        Err(e) => {
            cell.error = Some(e.to_string());
            return cell;
        }
    };
    match bound_report(chi, t, &l, &cfg.bounds) {
        Ok(r) => cell.report = Some(r),
        Err(e) => cell.error = Some(e.to_string()),
    }
    if cfg.replay && !chi.is_principal() {
        match proof_replay(chi, t) {
            Ok(b) => {
                cell.replay_dominates = Some(l.abs_upper() <= b.total);
                cell.replay = Some(b);
            }
            Err(e) => cell.error = Some(e.to_string()),
        }
    }
    cell
}

/// Runs the sweep. Cells are independent; results are sorted by
/// `(q, chi_index, t)` so the thread count never changes the output.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let mut jobs = Vec::new();
    for q in cfg.moduli.values() {
        let group = CharacterGroup::new(q)?;
        let chars = select(&group, cfg.chars);
        if chars.is_empty() {
            continue;
        }
        for t in cfg.t_grid.points() {
            jobs.push((q, t, chars.clone()));
        }
    }
    let work = || -> Vec<Cell> {
        jobs.par_iter()
            .flat_map_iter(|(q, t, chars)| {
                let table = HurwitzTable::new(*q, Complex64::new(0.5, *t), cfg.eps);
                chars
                    .iter()
                    .map(|chi| evaluate(&table, chi, *t, cfg))
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    let mut cells = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Usage(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    cells.sort_by(|a, b| {
        (a.q, a.chi_index)
            .cmp(&(b.q, b.chi_index))
            .then(a.t.total_cmp(&b.t))
    });
    let summary = summarize(cfg, &cells);
    Ok(SweepOutcome { cells, summary })
}

fn summarize(cfg: &SweepConfig, cells: &[Cell]) -> SweepSummary {
    let mut families: BTreeMap<String, FamilySummary> = BTreeMap::new();
    let mut errors = Vec::new();
    let mut findings = Vec::new();
    let mut passed = 0;
    for c in cells {
        let at = (c.q, c.chi_index, c.t);
        if c.pass() {
            passed += 1;
        }
        if let Some(e) = &c.error {
            errors.push(format!("q={} chi={} t={}: {e}", c.q, c.chi_index, c.t));
        }
        if let Some(r) = &c.report {
            let upper = r.l_abs + r.l_err;
            for (name, b) in r.bounds() {
                families.entry(name.into()).or_default().record(b - upper, at);
            }
        }
        if let (Some(b), Some(r)) = (&c.replay, &c.report) {
            families
                .entry("replay".into())
                .or_default()
                .record(b.total - (r.l_abs + r.l_err), at);
            if b.exceeds_closed_form() {
                findings.push((c.q, c.chi_index, c.t, b.total, b.closed_form_zw));
            }
        }
    }
    SweepSummary {
        config: cfg.clone(),
        cells: cells.len(),
        passed,
        failed: cells.len() - passed,
        errors,
        families,
        replay_findings: findings,
    }
}

/// `%.17g`: 17 significant digits, trailing zeros dropped.
pub fn fmt17(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-4..17).contains(&exp) {
        let prec = (16 - exp).max(0) as usize;
        trim(format!("{x:.prec$}"))
    } else {
        format!("{}e{exp}", trim(mant.to_string()))
    }
}

pub const CSV_HEADER: [&str; 16] = [
    "q",
    "chi_index",
    "conductor",
    "primitive",
    "t",
    "l_re",
    "l_im",
    "l_abs",
    "l_err",
    "bound_theorem",
    "bound_corollary",
    "bound_convexity",
    "bound_partial",
    "bound_principal",
    "margin_min",
    "pass",
];

fn opt(x: Option<f64>) -> String {
    x.map(fmt17).unwrap_or_default()
}

pub fn write_csv<W: Write>(cells: &[Cell], w: W) -> Result<()> {
    let io = |e: csv::Error| Error::Usage(format!("csv: {e}"));
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(CSV_HEADER).map_err(io)?;
    for c in cells {
        let row: Vec<String> = match &c.report {
            Some(r) => vec![
                r.q.to_string(),
                r.chi_index.to_string(),
                r.conductor.to_string(),
                r.primitive.to_string(),
                fmt17(r.t),
                fmt17(r.l_re),
                fmt17(r.l_im),
                fmt17(r.l_abs),
                fmt17(r.l_err),
                opt(r.theorem),
                opt(r.corollary),
                opt(r.convexity),
                opt(r.partial),
                opt(r.principal),
                opt(r.margin_min),
                c.pass().to_string(),
            ],
            None => {
                let mut v = vec![String::new(); CSV_HEADER.len()];
                v[0] = c.q.to_string();
                v[1] = c.chi_index.to_string();
                v[4] = fmt17(c.t);
                v[15] = "false".into();
                v
            }
        };
        wr.write_record(&row).map_err(io)?;
    }
    wr.flush().map_err(|e| Error::Usage(format!("csv: {e}")))?;
    Ok(())
}

/// Runs the sweep and writes the CSV and JSON outputs named in the config.
/// Returns the outcome; the caller maps it to an exit code.
pub fn cmd_verify(cfg: &SweepConfig) -> Result<SweepOutcome> {
    let out = run_sweep(cfg)?;
    if let Some(p) = &cfg.out {
        let f = std::fs::File::create(p)
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", p.display())))?;
        write_csv(&out.cells, std::io::BufWriter::new(f))?;
    }
    if let Some(p) = &cfg.json {
        let s = serde_json::to_string_pretty(&out.summary)
            .map_err(|e| Error::Usage(format!("json: {e}")))?;
        std::fs::write(p, s)
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt17_matches_printf_g() {
        assert_eq!(fmt17(200.0), "200");
        assert_eq!(fmt17(0.1), "0.10000000000000001");
        assert_eq!(fmt17(-1.4603545088095868), "-1.4603545088095868");
        assert_eq!(fmt17(1e-7), "9.9999999999999995e-8");
        assert_eq!(fmt17(1.5e20), "1.5e20");
        assert_eq!(fmt17(0.0), "0");
    }
}
