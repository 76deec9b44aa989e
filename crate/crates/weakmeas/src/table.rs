//! Distribution grids as CSV, closed by a summary line that can be
//! recomputed from the rows alone.

use std::io::{BufRead, Write};

use weakmeas_core::quasiprob::QuasiDistribution;

use crate::error::{CliError, CliResult};

pub const COLUMNS: [&str; 6] = ["phi", "xi", "re", "im", "phi_weight", "xi_weight"];
pub const SUMMARY_PREFIX: &str = "# summary";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow {
    pub phi: f64,
    pub xi: f64,
    pub re: f64,
    pub im: f64,
    pub phi_weight: f64,
    pub xi_weight: f64,
}

pub fn rows_of(d: &QuasiDistribution) -> Vec<GridRow> {
    let xi = d.xi_points();
    let xw = d.xi_weights();
    let pw = d.basis().phi().weights();
    let mut rows = Vec::with_capacity(d.phi_len() * xi.len());
    for (i, &phi) in d.phi_points().iter().enumerate() {
        for (j, v) in d.row(i).iter().enumerate() {
            rows.push(GridRow {
                phi,
                xi: xi[j],
                re: v.re,
                im: v.im,
                phi_weight: pw[i],
                xi_weight: xw[j],
            });
        }
    }
    rows
}

/// Negativity of the real part plus the total mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub min_value: f64,
    pub phi_at_min: f64,
    pub xi_at_min: f64,
    pub negative_mass_fraction: f64,
    pub total: f64,
}

impl Summary {
    pub fn of(rows: &[GridRow]) -> Self {
        let mut s = Summary {
            min_value: f64::INFINITY,
            phi_at_min: f64::NAN,
            xi_at_min: f64::NAN,
            negative_mass_fraction: 0.0,
            total: 0.0,
        };
        let (mut neg, mut abs) = (0.0, 0.0);
        for r in rows {
            let w = r.phi_weight * r.xi_weight;
            s.total += w * r.re;
            abs += w * r.re.abs();
            if r.re < 0.0 {
                neg += w * r.re.abs();
            }
            if r.re < s.min_value {
                s.min_value = r.re;
                s.phi_at_min = r.phi;
                s.xi_at_min = r.xi;
            }
        }
        if abs > 0.0 {
            s.negative_mass_fraction = neg / abs;
        }
        s
    }

    pub fn line(&self) -> String {
        format!(
            "{SUMMARY_PREFIX} min_value={:.16e} phi_at_min={:.16e} xi_at_min={:.16e} negative_mass_fraction={:.16e} total={:.16e}",
            self.min_value, self.phi_at_min, self.xi_at_min, self.negative_mass_fraction, self.total
        )
    }
}

pub fn write_grid<W: Write>(rows: &[GridRow], mut out: W) -> CliResult<Summary> {
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(COLUMNS)?;
        for r in rows {
            w.write_record(
                [r.phi, r.xi, r.re, r.im, r.phi_weight, r.xi_weight]
                    .iter()
                    .map(|v| format!("{v:.16e}")),
            )?;
        }
        w.flush()?;
    }
    let s = Summary::of(rows);
    writeln!(out, "{}", s.line())?;
    Ok(s)
}

/// Parsed grid and the summary line as written.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedGrid {
    pub rows: Vec<GridRow>,
    pub summary_line: Option<String>,
}

pub fn read_grid<R: BufRead>(input: R) -> CliResult<ParsedGrid> {
    let mut body = String::new();
    let mut summary_line = None;
    for line in input.lines() {
        let line = line?;
        if line.starts_with(SUMMARY_PREFIX) {
            summary_line = Some(line);
        } else if !line.starts_with('#') {
            body.push_str(&line);
            body.push('\n');
        }
    }
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let mut v = [0.0; 6];
        if rec.len() != v.len() {
            return Err(CliError::usage(format!(
                "expected {} columns, got {}",
                v.len(),
                rec.len()
            )));
        }
        for (slot, field) in v.iter_mut().zip(rec.iter()) {
            *slot = field
                .parse()
                .map_err(|e| CliError::usage(format!("bad number {field:?}: {e}")))?;
        }
        rows.push(GridRow {
            phi: v[0],
            xi: v[1],
            re: v[2],
            im: v[3],
            phi_weight: v[4],
            xi_weight: v[5],
        });
    }
    Ok(ParsedGrid { rows, summary_line })
}

/// `∫ dxi re(phi, xi)` for each distinct `phi`, in row order.
pub fn phi_marginal(rows: &[GridRow]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for r in rows {
        match out.last_mut() {
            Some((phi, acc)) if *phi == r.phi => *acc += r.xi_weight * r.re,
            _ => out.push((r.phi, r.xi_weight * r.re)),
        }
    }
    out
}
