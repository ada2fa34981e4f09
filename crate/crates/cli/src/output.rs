//! CSV and JSON writers. Both carry the same fields in the same order.

use std::io::Write;

use serde::Serialize;
use wkb_march::fit::ERROR_FLOOR;

use crate::config::Format;
use crate::error::CliError;
use crate::run::{NodeRow, Table};

/// One output row. Cell rows leave `slope_fit` empty; summary rows leave
/// `h`, `n_steps` and the measurements empty and carry the fit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub method: String,
    pub epsilon: f64,
    pub h: Option<f64>,
    pub phase_mode: String,
    pub n_steps: Option<usize>,
    #[serde(rename = "max_error_U")]
    pub max_error_u: Option<f64>,
    pub max_error_wave: Option<f64>,
    pub wall_time_s: Option<f64>,
    pub slope_fit: Option<f64>,
    pub phase_setup_s: Option<f64>,
    pub max_phase_error: Option<f64>,
    /// Cell rows: whether the fitted error lies below the floor. Summary
    /// rows: the excluded step sizes, `;`-separated.
    pub below_floor: String,
}

pub fn rows(table: &Table) -> Vec<Row> {
    let mut out = Vec::with_capacity(table.records.len() + table.fits.len());
    for fit in &table.fits {
        for r in table.records.iter().filter(|r| r.method == fit.method && r.epsilon == fit.epsilon) {
            out.push(Row {
                method: r.method.to_string(),
                epsilon: r.epsilon,
                h: Some(r.h),
                phase_mode: r.phase_mode.to_string(),
                n_steps: Some(r.n_steps),
                max_error_u: Some(r.max_error_u),
                max_error_wave: Some(r.max_error_wave),
                wall_time_s: Some(r.wall_time_s),
                slope_fit: None,
                phase_setup_s: Some(r.phase_setup_s),
                max_phase_error: r.max_phase_error,
                below_floor: (!(r.error(fit.frame) >= ERROR_FLOOR)).to_string(),
            });
        }
        out.push(Row {
            method: fit.method.to_string(),
            epsilon: fit.epsilon,
            h: None,
            phase_mode: fit.phase_mode.to_string(),
            n_steps: None,
            max_error_u: None,
            max_error_wave: None,
            wall_time_s: None,
            slope_fit: fit.slope(),
            phase_setup_s: None,
            max_phase_error: None,
            below_floor: fit.below_floor_h.iter().map(|h| h.to_string()).collect::<Vec<_>>().join(";"),
        });
    }
    out
}

pub fn write_table<W: Write>(table: &Table, format: Format, w: W) -> Result<(), CliError> {
    write_rows(&rows(table), format, w)
}

fn write_rows<W: Write, R: Serialize>(rows: &[R], format: Format, mut w: W) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut wr = csv::Writer::from_writer(w);
            for r in rows {
                wr.serialize(r).map_err(|e| CliError::Io(std::io::Error::other(e)))?;
            }
            wr.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows).map_err(|e| CliError::Io(std::io::Error::other(e)))?;
            writeln!(w)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct NodeOut {
    x: f64,
    phi_re: f64,
    phi_im: f64,
    eps_dphi_re: f64,
    eps_dphi_im: f64,
    #[serde(rename = "error_U")]
    error_u: f64,
    error_wave: f64,
}

pub fn write_nodes<W: Write>(nodes: &[NodeRow], format: Format, w: W) -> Result<(), CliError> {
    let out: Vec<NodeOut> = nodes
        .iter()
        .map(|n| NodeOut {
            x: n.x,
            phi_re: n.phi.re,
            phi_im: n.phi.im,
            eps_dphi_re: n.eps_dphi.re,
            eps_dphi_im: n.eps_dphi.im,
            error_u: n.error_u,
            error_wave: n.error_wave,
        })
        .collect();
    write_rows(&out, format, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ErrorFrame, ExperimentConfig, Problem};
    use crate::run::run_convergence;
    use wkb_march::{BuiltinModel, MethodId};

    fn table() -> Table {
        let cfg = ExperimentConfig::new(Problem::Builtin(BuiltinModel::Exp), &[MethodId::Wkb3], &[0.25], &[0.5, 0.25, 0.125]);
        run_convergence(&cfg).unwrap()
    }

    #[test]
    fn csv_header_order() {
        let mut buf = Vec::new();
        write_table(&table(), Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "method,epsilon,h,phase_mode,n_steps,max_error_U,max_error_wave,wall_time_s,slope_fit,phase_setup_s,max_phase_error,below_floor"
        );
        let body: Vec<&str> = lines.collect();
        assert_eq!(body.len(), 4);
        assert!(body[0].starts_with("WKB3,0.25,0.5,exact,2,"));
        assert!(body[3].starts_with("WKB3,0.25,,exact,,,,,"));
    }

    #[test]
    fn json_has_same_fields() {
        let mut buf = Vec::new();
        write_table(&table(), Format::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let arr = v.as_array().unwrap();
        assert_eq!(arr.len(), 4);
        assert!(arr[0]["max_error_U"].as_f64().unwrap() > 0.0);
        assert!(arr[3]["slope_fit"].as_f64().unwrap() > 2.0);
        assert!(arr[3]["h"].is_null());
    }

    #[test]
    fn summary_lists_floor_points() {
        let mut t = table();
        t.records[2].max_error_u = 1e-15;
        t.fits = crate::run::fit_series(&t.records, ErrorFrame::U);
        let r = rows(&t);
        assert_eq!(r[2].below_floor, "true");
        assert_eq!(r[3].below_floor, "0.125");
    }
}
