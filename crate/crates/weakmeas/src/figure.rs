//! Negativity-probability sweeps behind the published surfaces.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde_json::json;
use weakmeas_core::povm::sigma_from_efficiency;
use weakmeas_core::weakvalues::{closed_profile, negativity_probability, Method, ProfileObservable, StateParams};
use weakmeas_core::Error;

use crate::error::CliResult;
use crate::settings::{OutputFormat, SweepConfig, SweepRange};

pub const COLUMNS: [&str; 5] = ["alpha_r", "alpha_i", "eta", "n_th", "probability"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    P2EtaNth,
    HIdeal,
    HNoisy,
    HEtaNth,
    NIdeal,
    NNoisy,
    NEtaNth,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        Self::P2EtaNth,
        Self::HIdeal,
        Self::HNoisy,
        Self::HEtaNth,
        Self::NIdeal,
        Self::NNoisy,
        Self::NEtaNth,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::P2EtaNth => "p2_eta_nth",
            Self::HIdeal => "h_ideal",
            Self::HNoisy => "h_noisy",
            Self::HEtaNth => "h_eta_nth",
            Self::NIdeal => "n_ideal",
            Self::NNoisy => "n_noisy",
            Self::NEtaNth => "n_eta_nth",
        }
    }

    pub fn observable(self) -> ProfileObservable {
        match self {
            Self::P2EtaNth => ProfileObservable::MomentumSquared,
            Self::HIdeal | Self::HNoisy | Self::HEtaNth => ProfileObservable::Energy,
            Self::NIdeal | Self::NNoisy | Self::NEtaNth => ProfileObservable::Number,
        }
    }

    /// Axes at default resolution with the fixed parameters of each figure.
    pub fn default_config(self) -> SweepConfig {
        let amp_r = SweepRange::new(0.0, 4.0, 41);
        let amp_i = SweepRange::new(0.0, 2.0, 21);
        let eta = SweepRange::new(0.05, 1.0, 20);
        let nth = SweepRange::new(0.0, 1.0, 21);
        let (alpha_r, alpha_i, eta, n_th) = match self {
            Self::P2EtaNth => (SweepRange::fixed(0.0), SweepRange::fixed(0.0), eta, nth),
            Self::HIdeal | Self::NIdeal => (amp_r, amp_i, SweepRange::fixed(1.0), SweepRange::fixed(0.0)),
            Self::HNoisy | Self::NNoisy => (amp_r, amp_i, SweepRange::fixed(0.7), SweepRange::fixed(0.3)),
            Self::HEtaNth => (SweepRange::fixed(1.0), SweepRange::fixed(0.0), eta, nth),
            Self::NEtaNth => (SweepRange::fixed(0.1), SweepRange::fixed(0.0), eta, nth),
        };
        SweepConfig {
            observable: self.observable(),
            alpha_r,
            alpha_i,
            n_th,
            eta,
            output: None,
            format: OutputFormat::Csv,
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown figure {s:?}"))
    }
}

/// `P[Re nu_w < 0]` for one cell: closed form where it exists, quadrature
/// elsewhere.
pub fn cell_probability(obs: ProfileObservable, alpha_r: f64, alpha_i: f64, eta: f64, n_th: f64) -> CliResult<f64> {
    let prm = StateParams::new(alpha_r, alpha_i, n_th, sigma_from_efficiency(eta)?)?;
    let prof = closed_profile(obs, &prm)?;
    let p = match negativity_probability(&prof, Method::ClosedForm) {
        Err(Error::ClosedFormUnavailable) => negativity_probability(&prof, Method::Quadrature)?,
        other => other?,
    };
    Ok(p.probability)
}

/// One row per cell, `alpha_r` outermost and `n_th` innermost.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureTable {
    pub figure: FigureId,
    pub rows: Vec<[f64; 5]>,
}

pub fn run_figure(figure: FigureId, cfg: &SweepConfig) -> CliResult<FigureTable> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for ar in cfg.alpha_r.points() {
        for ai in cfg.alpha_i.points() {
            for eta in cfg.eta.points() {
                for nth in cfg.n_th.points() {
                    rows.push([ar, ai, eta, nth, cell_probability(cfg.observable, ar, ai, eta, nth)?]);
                }
            }
        }
    }
    Ok(FigureTable { figure, rows })
}

impl FigureTable {
    pub fn write_csv<W: Write>(&self, out: W) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(COLUMNS)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format!("{v:.16e}")))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self, cfg: &SweepConfig) -> serde_json::Value {
        json!({
            "params": {
                "figure": self.figure.name(),
                "observable": cfg.observable.label(),
                "alpha_r": cfg.alpha_r.to_string(),
                "alpha_i": cfg.alpha_i.to_string(),
                "eta": cfg.eta.to_string(),
                "n_th": cfg.n_th.to_string(),
            },
            "results": {
                "columns": COLUMNS,
                "rows": self.rows,
            }
        })
    }

    /// Rows whose coordinates match `(alpha_r, alpha_i, eta, n_th)` within `tol`.
    pub fn lookup(&self, alpha_r: f64, alpha_i: f64, eta: f64, n_th: f64, tol: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| {
                (r[0] - alpha_r).abs() <= tol
                    && (r[1] - alpha_i).abs() <= tol
                    && (r[2] - eta).abs() <= tol
                    && (r[3] - n_th).abs() <= tol
            })
            .map(|r| r[4])
    }
}

/// Reads back a figure CSV.
pub fn read_figure_csv<R: std::io::Read>(input: R) -> CliResult<Vec<[f64; 5]>> {
    let mut r = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let mut row = [0.0; 5];
        for (slot, field) in row.iter_mut().zip(rec.iter()) {
            *slot = field
                .parse()
                .map_err(|e| crate::error::CliError::usage(format!("bad number {field:?}: {e}")))?;
        }
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for f in FigureId::ALL {
            assert_eq!(f.name().parse::<FigureId>().unwrap(), f);
        }
        assert!("fig9".parse::<FigureId>().is_err());
    }

    #[test]
    fn caption_cells() {
        let h = cell_probability(ProfileObservable::Energy, 1.0, 0.0, 1.0, 0.0).unwrap();
        assert!((h - 0.0786).abs() < 1e-4);
        let p = cell_probability(ProfileObservable::MomentumSquared, 0.0, 0.0, 1.0, 0.0).unwrap();
        assert!((p - 0.1573).abs() < 1e-4);
        assert_eq!(
            cell_probability(ProfileObservable::Number, 0.0, 0.0, 1.0, 0.0).unwrap(),
            0.0
        );
    }
}
