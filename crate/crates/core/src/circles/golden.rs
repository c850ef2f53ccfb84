//! Plain-text table of the special parameters: `K, theta, t, s, lambda, residual`.

use crate::error::{Error, Result};

use super::special::{root_residual, solve_theta_k};
use super::spectral::spectral;

pub const THETA_K_HEADER: &str = "K,theta,t,s,lambda,residual";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaKRow {
    pub k: u32,
    pub theta: f64,
    pub t: f64,
    pub s: f64,
    pub lambda: f64,
    /// `|B^K(P₄) − P₁|` at the solved parameter.
    pub residual: f64,
}

pub fn theta_k_row(k: u32) -> Result<ThetaKRow> {
    let p = solve_theta_k::<f64>(k)?;
    Ok(ThetaKRow {
        k,
        theta: p.theta,
        t: p.t,
        s: p.s,
        lambda: spectral(&p)?.lambda,
        residual: root_residual(&p, k),
    })
}

pub fn theta_k_table(ks: impl IntoIterator<Item = u32>) -> Result<Vec<ThetaKRow>> {
    ks.into_iter().map(theta_k_row).collect()
}

/// Decimal with 17 significant digits.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_csv(rows: &[ThetaKRow]) -> String {
    let mut out = String::from(THETA_K_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.k,
            sig17(r.theta),
            sig17(r.t),
            sig17(r.s),
            sig17(r.lambda),
            sig17(r.residual)
        ));
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<ThetaKRow>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == THETA_K_HEADER => {}
        other => return Err(Error::Numeric(format!("bad theta_k header: {other:?}"))),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = |what: &str| Error::Numeric(format!("theta_k line {}: {what}", i + 2));
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 6 {
                return Err(bad("expected 6 columns"));
            }
            let f = |j: usize| cols[j].parse::<f64>().map_err(|_| bad(cols[j]));
            Ok(ThetaKRow {
                k: cols[0].parse().map_err(|_| bad(cols[0]))?,
                theta: f(1)?,
                t: f(2)?,
                s: f(3)?,
                lambda: f(4)?,
                residual: f(5)?,
            })
        })
        .collect()
}
